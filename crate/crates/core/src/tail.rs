//! Closed-form tail predictions for the maximum of the field on a set `S`,
//! dispatched on the Minkowski regime of `S`, plus the Rice-formula
//! conditional expectation they rest on.
//!
//! With `d` the Minkowski dimension and `C` the content, the point
//! prediction in the strong regime is
//!
//! `P(M_S > u) ≈ C · 2^{-d/2} π^{-n/2} · Γ(1 + (n-d)/2) · u^{d-1} φ(u)`.
//!
//! In the weak regime only `P ≍ u^{d-1} φ(u)` holds, with an undetermined
//! constant, so the API hands out envelope bands and refuses to produce a
//! point value; comparisons must go through the slope of
//! `log P + u²/2` against `log u`. When only the dimension exists,
//! `log P(M_S > u) = -u²/2 + (d-1+o(1)) log u` is exposed as a log-scale
//! prediction. Sets with an outer Minkowski content `OM(S)` get the
//! two-term expansion
//!
//! `P = λₙ(S)(2π)^{-n/2} u^{n-1} φ(u) + OM(S) 2^{-(n+1)/2} π^{-(n-1)/2} u^{n-2} φ(u) (1+o(1))`,
//!
//! whose terms are reported separately so the second can be validated as a
//! residual; the `o(1)` is never folded into the point value.

use std::f64::consts::PI;
use std::io::Write;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::field::CovarianceModel;
use crate::seeding::replication_rng;
pub use crate::special::{gaussian_density, gaussian_upper_tail};
use crate::special::gamma;

/// Which asymptotic applies to the parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum Regime {
    StrongMinkowski { dimension: f64, content: f64 },
    WeakMinkowski { dimension: f64 },
    LogOnly { dimension: f64 },
    OuterContent { volume: f64, outer_content: f64 },
}

impl Regime {
    /// The exponent governing the `u^{d-1}` factor; `n` for the
    /// outer-content regime.
    pub fn dimension(&self, n: usize) -> f64 {
        match *self {
            Regime::StrongMinkowski { dimension, .. }
            | Regime::WeakMinkowski { dimension }
            | Regime::LogOnly { dimension } => dimension,
            Regime::OuterContent { .. } => n as f64,
        }
    }

    /// Whether the regime admits point predictions (as opposed to bands or
    /// log-scale values).
    pub fn has_point_prediction(&self) -> bool {
        matches!(
            self,
            Regime::StrongMinkowski { .. } | Regime::OuterContent { .. }
        )
    }
}

/// Strong-regime point prediction.
pub fn predict_strong(n: usize, dimension: f64, content: f64, u: f64) -> f64 {
    debug_assert!(dimension > 0.0 && dimension <= n as f64);
    debug_assert!(content > 0.0);
    content
        * 2f64.powf(-dimension / 2.0)
        * PI.powf(-(n as f64) / 2.0)
        * gamma(1.0 + (n as f64 - dimension) / 2.0)
        * u.powf(dimension - 1.0)
        * gaussian_density(u)
}

/// Weak-regime envelope `(f/c, c·f)` around `f = u^{d-1} φ(u)`.
///
/// The constant is not determined by the theory, so only the spread of the
/// band and the slope of `log f` are meaningful.
pub fn predict_weak_band(dimension: f64, u: f64, band_constant: f64) -> (f64, f64) {
    assert!(band_constant >= 1.0, "band constant must be at least 1");
    let f = u.powf(dimension - 1.0) * gaussian_density(u);
    (f / band_constant, f * band_constant)
}

/// Log-scale prediction `-u²/2 + (d-1) log u`; the `(d-1)` coefficient is
/// the testable quantity.
pub fn predict_log(dimension: f64, u: f64) -> f64 {
    debug_assert!(u > 1.0);
    -0.5 * u * u + (dimension - 1.0) * u.ln()
}

/// The two terms of the outer-content expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OuterTerms {
    /// `λₙ(S) (2π)^{-n/2} u^{n-1} φ(u)`
    pub volume_term: f64,
    /// `OM(S) 2^{-(n+1)/2} π^{-(n-1)/2} u^{n-2} φ(u)`
    pub boundary_term: f64,
}

impl OuterTerms {
    pub fn total(&self) -> f64 {
        self.volume_term + self.boundary_term
    }
}

/// Two-term prediction for a set with volume `λₙ(S)` and outer Minkowski
/// content `OM(S)`.
pub fn predict_outer(n: usize, volume: f64, outer: f64, u: f64) -> OuterTerms {
    let nf = n as f64;
    let phi = gaussian_density(u);
    OuterTerms {
        volume_term: volume * (2.0 * PI).powf(-nf / 2.0) * u.powf(nf - 1.0) * phi,
        boundary_term: outer
            * 2f64.powf(-(nf + 1.0) / 2.0)
            * PI.powf(-(nf - 1.0) / 2.0)
            * u.powf(nf - 2.0)
            * phi,
    }
}

/// Tail prediction over a grid of levels. Which columns are populated
/// depends on the regime; the weak regime only ever gets bands.
#[derive(Debug, Clone, PartialEq)]
pub struct TailPrediction {
    pub n: usize,
    pub regime: Regime,
    pub u_grid: Vec<f64>,
    /// Point values (strong/outer) or log values (log regime).
    pub prediction: Option<Vec<f64>>,
    pub term1: Option<Vec<f64>>,
    pub term2: Option<Vec<f64>>,
    pub band_lower: Option<Vec<f64>>,
    pub band_upper: Option<Vec<f64>>,
}

impl TailPrediction {
    /// Evaluate the regime's prediction on an ascending level grid.
    pub fn evaluate(regime: Regime, n: usize, u_grid: &[f64], band_constant: f64) -> Self {
        assert!(
            u_grid.windows(2).all(|w| w[0] < w[1]),
            "u grid must be strictly ascending"
        );
        let mut out = Self {
            n,
            regime,
            u_grid: u_grid.to_vec(),
            prediction: None,
            term1: None,
            term2: None,
            band_lower: None,
            band_upper: None,
        };
        match regime {
            Regime::StrongMinkowski { dimension, content } => {
                out.prediction = Some(
                    u_grid
                        .iter()
                        .map(|&u| predict_strong(n, dimension, content, u))
                        .collect(),
                );
            }
            Regime::WeakMinkowski { dimension } => {
                let bands: Vec<(f64, f64)> = u_grid
                    .iter()
                    .map(|&u| predict_weak_band(dimension, u, band_constant))
                    .collect();
                out.band_lower = Some(bands.iter().map(|b| b.0).collect());
                out.band_upper = Some(bands.iter().map(|b| b.1).collect());
            }
            Regime::LogOnly { dimension } => {
                out.prediction = Some(
                    u_grid
                        .iter()
                        .map(|&u| predict_log(dimension, u))
                        .collect(),
                );
            }
            Regime::OuterContent {
                volume,
                outer_content,
            } => {
                let terms: Vec<OuterTerms> = u_grid
                    .iter()
                    .map(|&u| predict_outer(n, volume, outer_content, u))
                    .collect();
                out.prediction = Some(terms.iter().map(OuterTerms::total).collect());
                out.term1 = Some(terms.iter().map(|t| t.volume_term).collect());
                out.term2 = Some(terms.iter().map(|t| t.boundary_term).collect());
            }
        }
        out
    }

    /// Point values when the regime admits them (never for the weak
    /// regime).
    pub fn point_values(&self) -> Option<&[f64]> {
        if self.regime.has_point_prediction() {
            self.prediction.as_deref()
        } else {
            None
        }
    }

    /// Parse the CSV written by [`TailPrediction::write_csv`]; the regime
    /// and dimension are not part of the CSV and must be supplied.
    pub fn read_csv(text: &str, n: usize, regime: Regime) -> Result<Self, String> {
        let mut u_grid = Vec::new();
        let mut columns: [Vec<Option<f64>>; 5] = Default::default();
        for (lineno, line) in text.lines().enumerate() {
            if lineno == 0 {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 6 {
                return Err(format!("expected 6 fields on line {lineno}"));
            }
            u_grid.push(
                fields[0]
                    .parse::<f64>()
                    .map_err(|e| format!("line {lineno}: {e}"))?,
            );
            for (col, field) in columns.iter_mut().zip(&fields[1..]) {
                col.push(if field.is_empty() {
                    None
                } else {
                    Some(field.parse::<f64>().map_err(|e| format!("line {lineno}: {e}"))?)
                });
            }
        }
        if u_grid.is_empty() {
            return Err("no data rows".into());
        }
        let dense = |col: &Vec<Option<f64>>| -> Option<Vec<f64>> {
            col.iter().copied().collect::<Option<Vec<f64>>>()
        };
        let [prediction, term1, term2, band_lower, band_upper] = columns;
        Ok(Self {
            n,
            regime,
            u_grid,
            prediction: dense(&prediction),
            term1: dense(&term1),
            term2: dense(&term2),
            band_lower: dense(&band_lower),
            band_upper: dense(&band_upper),
        })
    }

    /// CSV export with header `u,prediction,term1,term2,lower,upper`;
    /// unused columns stay empty.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "u,prediction,term1,term2,lower,upper")?;
        let get = |col: &Option<Vec<f64>>, i: usize| {
            col.as_ref()
                .map(|v| v[i].to_string())
                .unwrap_or_default()
        };
        for (i, u) in self.u_grid.iter().enumerate() {
            writeln!(
                w,
                "{u},{},{},{},{},{}",
                get(&self.prediction, i),
                get(&self.term1, i),
                get(&self.term2, i),
                get(&self.band_lower, i),
                get(&self.band_upper, i),
            )?;
        }
        Ok(())
    }
}

/// A Monte Carlo scalar with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McScalar {
    pub value: f64,
    pub std_error: f64,
    pub reps: u64,
}

/// Sampler for the fluctuation matrix `ζ = X''(0) + X(0) Iₙ`, which under
/// the conditioning `{X(0)=x, X'(0)=0}` is a centered Gaussian symmetric
/// matrix independent of `(X(0), X'(0))`; its entry covariances follow from
/// the fourth radial derivative of the covariance at zero.
struct ZetaSampler {
    n: usize,
    /// Cholesky factor of the covariance of (diag entries, upper entries).
    factor: DMatrix<f64>,
}

impl ZetaSampler {
    fn new(model: &CovarianceModel, n: usize) -> Self {
        let kappa = model.fourth_radial_moment() / 3.0;
        let offs = n * (n - 1) / 2;
        let m = n + offs;
        let mut cov = DMatrix::zeros(m, m);
        for i in 0..n {
            for j in 0..n {
                cov[(i, j)] = if i == j { 3.0 * kappa - 1.0 } else { kappa - 1.0 };
            }
        }
        for k in 0..offs {
            cov[(n + k, n + k)] = kappa;
        }
        let factor = cov
            .cholesky()
            .expect("entry covariance of the second-derivative fluctuation is positive definite")
            .l();
        Self { n, factor }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut DMatrix<f64>) {
        let m = self.factor.nrows();
        let mut e = vec![0.0; m];
        for j in 0..m {
            let z: f64 = rng.sample(StandardNormal);
            for i in j..m {
                e[i] += self.factor[(i, j)] * z;
            }
        }
        for i in 0..self.n {
            out[(i, i)] = e[i];
        }
        let mut k = self.n;
        for i in 0..self.n {
            for j in i + 1..self.n {
                out[(i, j)] = e[k];
                out[(j, i)] = e[k];
                k += 1;
            }
        }
    }
}

/// Monte Carlo estimate of
/// `E(|det(-x Iₙ + ζ)| · 1{-x Iₙ + ζ ≺ 0})`,
/// the conditional expectation entering the Rice integrand. It is
/// asymptotically `xⁿ`, with an `O(x^{n-2})` correction.
pub fn rice_conditional_expectation(
    model: &CovarianceModel,
    x: f64,
    n: usize,
    reps: u64,
    seed: u64,
) -> McScalar {
    assert!(x > 0.0, "x must be positive");
    assert!(reps > 0);
    let sampler = ZetaSampler::new(model, n);
    let mut rng = replication_rng(seed, 0);
    let mut zeta = DMatrix::zeros(n, n);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..reps {
        sampler.sample(&mut rng, &mut zeta);
        let value = match n {
            1 => {
                let m = -x + zeta[(0, 0)];
                if m < 0.0 {
                    -m
                } else {
                    0.0
                }
            }
            2 => {
                let a = -x + zeta[(0, 0)];
                let d = -x + zeta[(1, 1)];
                let b = zeta[(0, 1)];
                let det = a * d - b * b;
                if a < 0.0 && det > 0.0 {
                    det
                } else {
                    0.0
                }
            }
            _ => {
                let mut m = zeta.clone();
                for i in 0..n {
                    m[(i, i)] -= x;
                }
                let eig = m.symmetric_eigen();
                if eig.eigenvalues.iter().all(|&l| l < 0.0) {
                    eig.eigenvalues.iter().map(|l| l.abs()).product()
                } else {
                    0.0
                }
            }
        };
        sum += value;
        sum_sq += value * value;
    }
    let mean = sum / reps as f64;
    let var = (sum_sq / reps as f64 - mean * mean).max(0.0);
    McScalar {
        value: mean,
        std_error: (var / reps as f64).sqrt(),
        reps,
    }
}

/// Closed form of the 1-D conditional expectation:
/// `E(max(0, x - ζ)) = x Φ(x/σ) + σ φ(x/σ)` with `σ² = Γ⁗(0) - 1`.
pub fn rice_conditional_expectation_exact_1d(model: &CovarianceModel, x: f64) -> f64 {
    let sigma = (model.fourth_radial_moment() - 1.0).sqrt();
    x * crate::special::gaussian_cdf(x / sigma) + sigma * gaussian_density(x / sigma)
}

/// The Rice integrand for the density (in the maximum's value `x`) of local
/// maxima per unit volume:
/// `(2π)^{-n/2} · E(|det X''| 1{≺0} | X=x, X'=0) · φ(x)`.
pub fn expected_maxima_density(
    model: &CovarianceModel,
    x: f64,
    n: usize,
    reps: u64,
    seed: u64,
) -> McScalar {
    let ce = rice_conditional_expectation(model, x, n, reps, seed);
    let scale = (2.0 * PI).powf(-(n as f64) / 2.0) * gaussian_density(x);
    McScalar {
        value: ce.value * scale,
        std_error: ce.std_error * scale,
        reps: ce.reps,
    }
}

/// 1-D closed form of [`expected_maxima_density`].
pub fn expected_maxima_density_exact_1d(model: &CovarianceModel, x: f64) -> f64 {
    (2.0 * PI).powf(-0.5) * rice_conditional_expectation_exact_1d(model, x) * gaussian_density(x)
}

/// Expected number of interior local maxima with value above `u` in a 1-D
/// domain of length `length`, by quadrature of the closed-form density.
pub fn expected_maxima_above_exact_1d(model: &CovarianceModel, u: f64, length: f64) -> f64 {
    // integrand decays like φ(x); 16 standard deviations is past underflow
    let upper = u + 16.0;
    length * simpson(|x| expected_maxima_density_exact_1d(model, x), u, upper, 4096)
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    assert!(intervals >= 2 && intervals % 2 == 0);
    let h = (b - a) / intervals as f64;
    let mut acc = f(a) + f(b);
    for i in 1..intervals {
        let weight = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += weight * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::unit_ball_volume;
    use approx::assert_relative_eq;

    fn sqexp(n: usize) -> CovarianceModel {
        CovarianceModel::squared_exponential(n)
    }

    #[test]
    fn strong_interval_matches_upcrossing_rate() {
        // n = d = 1, C = 1: the predictor collapses to (2π)^{-1} e^{-u²/2}
        let p = predict_strong(1, 1.0, 1.0, 3.0);
        assert_relative_eq!(p, 0.001_768_051_711_852_016_6, max_relative = 1e-12);
        assert_relative_eq!(
            p,
            gaussian_density(3.0) / (2.0 * PI).sqrt(),
            max_relative = 1e-13
        );
    }

    #[test]
    fn smooth_manifold_identity() {
        // with C = σ_d · Vol(B_{n-d}) the strong predictor reduces to
        // σ_d (2π)^{-d/2} u^{d-1} φ(u)
        for &(n, d) in &[(2usize, 1usize), (3, 1), (3, 2)] {
            let sigma = 1.7; // arbitrary positive measure
            let c = sigma * unit_ball_volume(n - d);
            for u in 2..=10 {
                let u = u as f64;
                let lhs = predict_strong(n, d as f64, c, u);
                let rhs =
                    sigma * (2.0 * PI).powf(-(d as f64) / 2.0) * u.powf(d as f64 - 1.0)
                        * gaussian_density(u);
                assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn strong_cantor_value() {
        let d = 2f64.ln() / 3f64.ln();
        // independent high-precision evaluation of the same closed form
        assert_relative_eq!(
            predict_strong(1, d, 2.5241, 4.0),
            8.469_329_220_654_446e-5,
            max_relative = 1e-11
        );
    }

    #[test]
    fn weak_band_structure() {
        let (lo, hi) = predict_weak_band(1.0, 2.0, 3.0);
        assert_relative_eq!(lo * 9.0, hi, max_relative = 1e-13);
        assert_relative_eq!(lo * 3.0, gaussian_density(2.0), max_relative = 1e-13);
        // slope of log(u^{d-1}φ(u)) + u²/2 against log u is exactly d-1
        let d = 0.63;
        let f = |u: f64| (u.powf(d - 1.0) * gaussian_density(u)).ln() + u * u / 2.0;
        let (u1, u2) = (2.0, 8.0);
        assert_relative_eq!(
            (f(u2) - f(u1)) / (u2.ln() - u1.ln()),
            d - 1.0,
            max_relative = 1e-10
        );
    }

    #[test]
    fn log_prediction_values() {
        assert_relative_eq!(predict_log(1.0, 7.3), -7.3 * 7.3 / 2.0, epsilon = 1e-13);
        let d = 2f64.ln() / 3f64.ln();
        assert_relative_eq!(predict_log(d, 10.0), -50.849_815_647_694, epsilon = 1e-10);
        assert_relative_eq!(
            predict_log(2.0, std::f64::consts::E),
            -2.694_528_049_465_325,
            epsilon = 1e-12
        );
    }

    #[test]
    fn outer_terms_unit_square() {
        let t = predict_outer(2, 1.0, 4.0, 4.0);
        assert_relative_eq!(t.volume_term, 8.519_896_786_234_33e-5, max_relative = 1e-11);
        assert_relative_eq!(t.boundary_term, 1.067_810_709_065_64e-4, max_relative = 1e-11);
    }

    #[test]
    fn outer_reduces_to_volume_term_without_boundary() {
        let t = predict_outer(2, 1.0, 0.0, 3.0);
        assert_eq!(t.boundary_term, 0.0);
        assert_relative_eq!(t.total(), t.volume_term);
    }

    #[test]
    fn outer_first_term_equals_strong_full_dimension() {
        // Theorem consistency: first outer term = strong predictor at d = n
        for n in 1..=3usize {
            let volume = 0.83;
            for u in [2.0, 3.5, 5.0, 7.0, 10.0] {
                let outer = predict_outer(n, volume, 1.0, u).volume_term;
                let strong = predict_strong(n, n as f64, volume, u);
                assert_relative_eq!(outer, strong, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn outer_one_dimensional_mills_consistency() {
        // n=1, S=[0,1]: term2 = u^{-1}φ(u) ≈ 1-Φ(u) by the Mills ratio,
        // so the two-term prediction approaches the classical
        // (2π)^{-1/2}φ(u) + (1-Φ(u)) for large u; the gap is O(φ(u)/u³)
        for &u in &[6.0_f64, 8.0] {
            let t = predict_outer(1, 1.0, 2.0, u);
            assert_relative_eq!(t.boundary_term, gaussian_density(u) / u, max_relative = 1e-12);
            let classical = gaussian_density(u) / (2.0 * PI).sqrt() + gaussian_upper_tail(u);
            assert_relative_eq!(t.total(), classical, max_relative = 2.0 / u.powi(3));
        }
    }

    #[test]
    fn probability_predictions_decrease_and_stay_log_concave() {
        let u_grid: Vec<f64> = (0..30).map(|i| 2.0 + i as f64 * 0.2).collect();
        for regime in [
            Regime::StrongMinkowski {
                dimension: 0.6309,
                content: 2.52,
            },
            Regime::OuterContent {
                volume: 1.0,
                outer_content: 4.0,
            },
        ] {
            let pred = TailPrediction::evaluate(regime, 2, &u_grid, 2.0);
            let values = pred.point_values().unwrap();
            for w in values.windows(2) {
                assert!(w[1] < w[0]);
            }
            let logs: Vec<f64> = values.iter().map(|v| v.ln()).collect();
            for w in logs.windows(3) {
                assert!(w[2] - 2.0 * w[1] + w[0] < 0.0, "log-concavity violated");
            }
        }
    }

    #[test]
    fn weak_regime_refuses_point_values() {
        let pred = TailPrediction::evaluate(
            Regime::WeakMinkowski { dimension: 0.5 },
            1,
            &[2.0, 3.0, 4.0],
            2.0,
        );
        assert!(pred.point_values().is_none());
        assert!(pred.band_lower.is_some() && pred.band_upper.is_some());
    }

    #[test]
    fn prediction_csv_schema() {
        let pred = TailPrediction::evaluate(
            Regime::OuterContent {
                volume: 1.0,
                outer_content: 4.0,
            },
            2,
            &[2.0, 3.0],
            2.0,
        );
        let mut buf = Vec::new();
        pred.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("u,prediction,term1,term2,lower,upper"));
        let row = lines.next().unwrap();
        assert!(row.starts_with("2,"));
        assert!(row.ends_with(",,"), "band columns empty: {row}");
    }

    #[test]
    fn rice_ce_matches_closed_form_1d() {
        let model = sqexp(1);
        // x Φ(x/√2) + √2 φ(x/√2) at x = 3, 40-digit reference
        assert_relative_eq!(
            rice_conditional_expectation_exact_1d(&model, 3.0),
            3.008_622_864_324_780_8,
            max_relative = 1e-12
        );
        let mc = rice_conditional_expectation(&model, 3.0, 1, 200_000, 17);
        let err = (mc.value - 3.008_622_864_324_780_8).abs();
        assert!(
            err <= 3.0 * mc.std_error,
            "MC {} vs closed form, {} SEs",
            mc.value,
            err / mc.std_error
        );
    }

    #[test]
    fn rice_ce_equivalent_to_x_power_n() {
        let model = sqexp(1);
        // ratio E(...)/x → 1 by dominated convergence on the closed form
        assert_relative_eq!(
            rice_conditional_expectation_exact_1d(&model, 40.0) / 40.0,
            1.0,
            max_relative = 1e-10
        );
        let model2 = sqexp(2);
        let mc = rice_conditional_expectation(&model2, 6.0, 2, 200_000, 3);
        let ratio = mc.value / 36.0;
        assert!(
            (0.9..=1.1).contains(&ratio),
            "ratio to x² out of range: {ratio}"
        );
    }

    #[test]
    fn maxima_density_ratio_carries_phi_factor() {
        let model = sqexp(1);
        let (x1, x2) = (2.0, 3.0);
        let d1 = expected_maxima_density_exact_1d(&model, x1);
        let d2 = expected_maxima_density_exact_1d(&model, x2);
        let ce1 = rice_conditional_expectation_exact_1d(&model, x1);
        let ce2 = rice_conditional_expectation_exact_1d(&model, x2);
        assert_relative_eq!(
            d1 / d2,
            (ce1 / ce2) * gaussian_density(x1) / gaussian_density(x2),
            max_relative = 1e-12
        );
    }

    #[test]
    fn integrated_maxima_density_reference() {
        let model = sqexp(1);
        // ∫_2^∞ (2π)^{-1/2} CE(x) φ(x) dx computed with 40-digit quadrature
        assert_relative_eq!(
            expected_maxima_above_exact_1d(&model, 2.0, 1.0),
            0.021_817_034_563_501_89,
            max_relative = 1e-9
        );
        // large-x integrand is the upcrossing rate: density(x) ≈ x φ(x)/√(2π)
        let x = 8.0;
        assert_relative_eq!(
            expected_maxima_density_exact_1d(&model, x),
            x * gaussian_density(x) / (2.0 * PI).sqrt(),
            max_relative = 1e-10
        );
    }

    #[test]
    fn mc_density_agrees_with_closed_form() {
        let model = sqexp(1);
        let mc = expected_maxima_density(&model, 2.5, 1, 100_000, 5);
        let exact = expected_maxima_density_exact_1d(&model, 2.5);
        assert!((mc.value - exact).abs() <= 3.0 * mc.std_error);
    }
}
