//! Covariance models for stationary isotropic Gaussian fields.
//!
//! A [`CovarianceModel`] is always normalized: `Γ(0) = 1` and
//! `-Γ''(0) = Iₙ`, so the field has unit variance and unit second spectral
//! moment along every axis. Raw models with an arbitrary symmetric positive
//! definite second-moment matrix are brought into this form by
//! [`normalize`], which also reports the linear change of the parameter
//! space so that parameter sets can be mapped consistently.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use super::FieldError;

/// Isotropic radial profile `g` with `Γ(t) = g(‖t‖)`.
///
/// Only the squared exponential is currently implemented; it has analytic
/// paths, so the `C³`-sample-path and nondegeneracy assumptions of the tail
/// predictors hold for it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialProfile {
    SquaredExponential,
}

impl RadialProfile {
    /// `g^(order)(r)` for orders 0 through 4.
    fn derivative(self, order: usize, r: f64) -> f64 {
        let g = (-0.5 * r * r).exp();
        match (self, order) {
            (RadialProfile::SquaredExponential, 0) => g,
            (RadialProfile::SquaredExponential, 1) => -r * g,
            (RadialProfile::SquaredExponential, 2) => (r * r - 1.0) * g,
            (RadialProfile::SquaredExponential, 3) => (3.0 * r - r.powi(3)) * g,
            (RadialProfile::SquaredExponential, 4) => (r.powi(4) - 6.0 * r * r + 3.0) * g,
            _ => panic!("radial derivatives available up to order 4"),
        }
    }
}

/// Normalized covariance of a stationary isotropic Gaussian field on ℝⁿ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CovarianceModel {
    n: usize,
    profile: RadialProfile,
}

impl CovarianceModel {
    /// The squared-exponential model `Γ(t) = exp(-‖t‖²/2)`.
    ///
    /// Already normalized: `Γ(0) = 1`, `-Γ''(0) = Iₙ`, `Γ⁗(0) = 3` along any
    /// axis, and the spectral density is the standard Gaussian density.
    pub fn squared_exponential(n: usize) -> Self {
        assert!(n >= 1, "ambient dimension must be at least 1");
        Self {
            n,
            profile: RadialProfile::SquaredExponential,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn profile(&self) -> RadialProfile {
        self.profile
    }

    /// Radial form `g(r)` of the covariance.
    pub fn gamma_iso(&self, r: f64) -> f64 {
        self.profile.derivative(0, r)
    }

    /// Covariance at lag `dt`.
    pub fn gamma(&self, dt: &[f64]) -> f64 {
        debug_assert_eq!(dt.len(), self.n);
        let r = dt.iter().map(|x| x * x).sum::<f64>().sqrt();
        self.gamma_iso(r)
    }

    /// Radial derivative `g^(order)(r)`, available for orders 0..=4 (the
    /// paths are smooth enough that four derivatives exist and are
    /// continuous).
    pub fn radial_derivative(&self, order: usize, r: f64) -> f64 {
        self.profile.derivative(order, r)
    }

    /// Second spectral moment `-Γ''(0)`; the identity after normalization.
    pub fn second_moment(&self) -> DMatrix<f64> {
        DMatrix::identity(self.n, self.n)
    }

    /// Fourth derivative of `Γ` at 0 along any axis.
    pub fn fourth_radial_moment(&self) -> f64 {
        self.profile.derivative(4, 0.0)
    }

    /// Spectral density at frequency `w` (nonnegative everywhere, which is
    /// the positive-definiteness certificate for the model).
    pub fn spectral_density(&self, w: &[f64]) -> f64 {
        debug_assert_eq!(w.len(), self.n);
        let q = w.iter().map(|x| x * x).sum::<f64>();
        (2.0 * std::f64::consts::PI).powf(-(self.n as f64) / 2.0) * (-0.5 * q).exp()
    }

    /// Draw a frequency from the spectral density.
    pub fn sample_frequency<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        (0..self.n).map(|_| rng.sample(StandardNormal)).collect()
    }
}

/// An isotropic covariance before normalization: `Γ(t) = g(√(tᵀ Λ t))` with
/// `Λ` symmetric positive definite, so `-Γ''(0) = Λ`.
#[derive(Debug, Clone)]
pub struct RawCovariance {
    n: usize,
    profile: RadialProfile,
    second_moment: DMatrix<f64>,
}

impl RawCovariance {
    pub fn new(profile: RadialProfile, second_moment: DMatrix<f64>) -> Self {
        assert!(second_moment.is_square());
        Self {
            n: second_moment.nrows(),
            profile,
            second_moment,
        }
    }

    /// Squared-exponential with correlation length `length_scale`:
    /// `Γ(t) = exp(-‖t‖²/(2ℓ²))`, so `Λ = Iₙ/ℓ²`.
    pub fn isotropic_sqexp(n: usize, length_scale: f64) -> Self {
        assert!(length_scale > 0.0);
        Self::new(
            RadialProfile::SquaredExponential,
            DMatrix::identity(n, n) / (length_scale * length_scale),
        )
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn second_moment(&self) -> &DMatrix<f64> {
        &self.second_moment
    }

    pub fn gamma(&self, dt: &[f64]) -> f64 {
        let v = DVector::from_column_slice(dt);
        let q = (v.transpose() * &self.second_moment * &v)[(0, 0)];
        self.profile.derivative(0, q.max(0.0).sqrt())
    }
}

/// The recorded change of parameter space `s = A t` with `A = Λ^{1/2}`;
/// mapping a parameter set through it makes the normalized model exact on
/// the image.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterTransform {
    matrix: DMatrix<f64>,
}

impl ParameterTransform {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn apply(&self, point: &[f64]) -> Vec<f64> {
        let v = &self.matrix * DVector::from_column_slice(point);
        v.as_slice().to_vec()
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        let n = self.matrix.nrows();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let target = if i == j { 1.0 } else { 0.0 };
                (self.matrix[(i, j)] - target).abs() <= tol
            })
        })
    }
}

/// Reparametrize `t ↦ Λ^{-1/2} t` so that the returned model has identity
/// second moment; the transform maps original parameter points into the new
/// coordinates.
pub fn normalize(raw: &RawCovariance) -> Result<(CovarianceModel, ParameterTransform), FieldError> {
    let eig = raw.second_moment.clone().symmetric_eigen();
    let max_ev = eig.eigenvalues.iter().fold(0.0_f64, |a, &b| a.max(b));
    if max_ev <= 0.0 || eig.eigenvalues.iter().any(|&l| l <= 1e-12 * max_ev) {
        return Err(FieldError::DegenerateSpectralMoment);
    }
    let sqrt_diag = DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt));
    let matrix = &eig.eigenvectors * sqrt_diag * eig.eigenvectors.transpose();
    Ok((
        CovarianceModel {
            n: raw.n,
            profile: raw.profile,
        },
        ParameterTransform { matrix },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sqexp_normalization_contract() {
        let model = CovarianceModel::squared_exponential(3);
        assert_relative_eq!(model.gamma_iso(0.0), 1.0);
        // -Γ''(0) = I along every axis
        assert_relative_eq!(-model.radial_derivative(2, 0.0), 1.0);
        assert_eq!(model.second_moment(), DMatrix::identity(3, 3));
        assert_relative_eq!(model.fourth_radial_moment(), 3.0);
    }

    #[test]
    fn gamma_matches_radial_form() {
        let model = CovarianceModel::squared_exponential(2);
        assert_relative_eq!(model.gamma(&[0.6, 0.8]), model.gamma_iso(1.0), epsilon = 1e-15);
        assert_relative_eq!(model.gamma_iso(1.0), (-0.5f64).exp(), epsilon = 1e-15);
    }

    #[test]
    fn spectral_density_is_standard_gaussian() {
        let model = CovarianceModel::squared_exponential(1);
        assert_relative_eq!(
            model.spectral_density(&[0.0]),
            1.0 / (2.0 * std::f64::consts::PI).sqrt(),
            epsilon = 1e-15
        );
        assert!(model.spectral_density(&[3.0]) > 0.0);
    }

    #[test]
    fn normalize_rescales_one_dimension() {
        // Γ(t) = exp(-a t²/2) with a = 4 becomes exp(-s²/2) under s = 2t
        let raw = RawCovariance::new(
            RadialProfile::SquaredExponential,
            DMatrix::from_row_slice(1, 1, &[4.0]),
        );
        let (model, transform) = normalize(&raw).unwrap();
        assert_relative_eq!(transform.apply(&[1.0])[0], 2.0, epsilon = 1e-12);
        for &t in &[0.1, 0.5, 1.3] {
            let s = transform.apply(&[t])[0];
            assert_relative_eq!(raw.gamma(&[t]), model.gamma(&[s]), epsilon = 1e-12);
        }
    }

    #[test]
    fn normalize_identity_when_already_normalized() {
        let raw = RawCovariance::isotropic_sqexp(2, 1.0);
        let (_, transform) = normalize(&raw).unwrap();
        assert!(transform.is_identity(1e-12));
    }

    #[test]
    fn normalize_rejects_singular_moment() {
        let raw = RawCovariance::new(
            RadialProfile::SquaredExponential,
            DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]),
        );
        assert!(matches!(
            normalize(&raw),
            Err(FieldError::DegenerateSpectralMoment)
        ));
    }
}
