//! Field synthesis on arbitrary point lists, which fractal clouds need
//! because they do not align with any grid.
//!
//! Two routes: exact joint sampling through a (jittered) Cholesky factor of
//! the covariance matrix, affordable up to a few thousand points, and
//! random Fourier features, whose covariance converges to the model as the
//! number of modes grows.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use super::covariance::CovarianceModel;
use super::sample::{FieldSample, SampleDomain, SynthesisMethod};
use super::FieldError;
use crate::seeding::replication_rng;

/// Smallest admissible number of Fourier modes.
pub const MIN_FOURIER_MODES: usize = 256;

/// Knobs for exact factorization.
#[derive(Debug, Clone)]
pub struct PointSamplerOptions {
    /// Largest point count for exact factorization.
    pub exact_cap: usize,
    /// Merge points closer than this before factorizing; duplicates receive
    /// the value of their representative. `None` disables merging.
    pub dedup_tolerance: Option<f64>,
    /// Relative diagonal inflations to try, in order, until the Cholesky
    /// factorization succeeds. Fractal clouds carry near-duplicate points,
    /// so small jitters are routinely needed; anything above 1e-10 is worth
    /// surfacing to the caller via [`ExactPointSampler::jitter`].
    pub jitter_ladder: Vec<f64>,
}

impl Default for PointSamplerOptions {
    fn default() -> Self {
        Self {
            exact_cap: 4000,
            dedup_tolerance: Some(1e-9),
            jitter_ladder: vec![0.0, 1e-12, 1e-10, 1e-8],
        }
    }
}

/// Synthesis route for point clouds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointMethod {
    ExactFactorization,
    FourierFeatures { modes: usize },
}

impl PointMethod {
    /// Default route: exact where affordable, spectral otherwise.
    pub fn auto(points: usize) -> Self {
        if points <= 4000 {
            PointMethod::ExactFactorization
        } else {
            PointMethod::FourierFeatures { modes: 8192 }
        }
    }
}

/// Exact sampler: draws from the joint Gaussian with covariance
/// `[Γ(pᵢ - pⱼ)]`.
pub struct ExactPointSampler {
    point_count: usize,
    rep_of: Vec<usize>,
    /// Lower Cholesky factor, column-major flat buffer.
    factor: Vec<f64>,
    rep_count: usize,
    jitter: f64,
}

impl ExactPointSampler {
    pub fn new(
        model: &CovarianceModel,
        dim: usize,
        coords: &[f64],
        options: &PointSamplerOptions,
    ) -> Result<Self, FieldError> {
        if dim != model.dim() {
            return Err(FieldError::DimensionMismatch {
                expected: model.dim(),
                got: dim,
            });
        }
        if coords.is_empty() || coords.len() % dim != 0 {
            return Err(FieldError::EmptyPoints);
        }
        let point_count = coords.len() / dim;

        let (reps, rep_of) = match options.dedup_tolerance {
            Some(tol) => deduplicate(dim, coords, tol),
            None => ((0..point_count).collect(), (0..point_count).collect()),
        };
        if reps.len() > options.exact_cap {
            return Err(FieldError::CapExceeded {
                points: reps.len(),
                cap: options.exact_cap,
            });
        }

        let r = reps.len();
        let mut cov = DMatrix::zeros(r, r);
        for (a, &i) in reps.iter().enumerate() {
            for (b, &j) in reps.iter().enumerate().take(a + 1) {
                let pi = &coords[i * dim..(i + 1) * dim];
                let pj = &coords[j * dim..(j + 1) * dim];
                let d: f64 = pi
                    .iter()
                    .zip(pj)
                    .map(|(x, y)| (x - y) * (x - y))
                    .sum::<f64>()
                    .sqrt();
                let g = model.gamma_iso(d);
                cov[(a, b)] = g;
                cov[(b, a)] = g;
            }
        }

        for &jitter in &options.jitter_ladder {
            let mut attempt = cov.clone();
            for i in 0..r {
                attempt[(i, i)] *= 1.0 + jitter;
            }
            if let Some(chol) = attempt.cholesky() {
                let l = chol.l();
                return Ok(Self {
                    point_count,
                    rep_of,
                    factor: l.as_slice().to_vec(),
                    rep_count: r,
                    jitter,
                });
            }
        }
        Err(FieldError::FactorizationFailure)
    }

    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    pub fn representative_count(&self) -> usize {
        self.rep_count
    }

    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut Vec<f64>) {
        let r = self.rep_count;
        let mut rep_values = vec![0.0; r];
        for j in 0..r {
            let z: f64 = rng.sample(StandardNormal);
            let col = &self.factor[j * r..(j + 1) * r];
            for (slot, &l) in rep_values[j..].iter_mut().zip(&col[j..]) {
                *slot += l * z;
            }
        }
        out.clear();
        out.extend(self.rep_of.iter().map(|&rep| rep_values[rep]));
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.point_count);
        self.sample_into(rng, &mut out);
        out
    }
}

fn deduplicate(dim: usize, coords: &[f64], tol: f64) -> (Vec<usize>, Vec<usize>) {
    let count = coords.len() / dim;
    let tol2 = tol * tol;
    let mut reps: Vec<usize> = Vec::new();
    let mut rep_of = Vec::with_capacity(count);
    for i in 0..count {
        let pi = &coords[i * dim..(i + 1) * dim];
        let found = reps.iter().position(|&j| {
            let pj = &coords[j * dim..(j + 1) * dim];
            pi.iter()
                .zip(pj)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                <= tol2
        });
        match found {
            Some(slot) => rep_of.push(slot),
            None => {
                reps.push(i);
                rep_of.push(reps.len() - 1);
            }
        }
    }
    (reps, rep_of)
}

/// Random-Fourier-feature sampler:
/// `X(t) = √(2/K) Σₖ cos(⟨ωₖ, t⟩ + φₖ)` with `ωₖ` drawn from the spectral
/// density and `φₖ` uniform. Stationary, with covariance converging to `Γ`
/// as the number of modes grows.
pub struct FourierPointSampler {
    model: CovarianceModel,
    dim: usize,
    coords: Vec<f64>,
    modes: usize,
}

impl FourierPointSampler {
    pub fn new(
        model: &CovarianceModel,
        dim: usize,
        coords: &[f64],
        modes: usize,
    ) -> Result<Self, FieldError> {
        if dim != model.dim() {
            return Err(FieldError::DimensionMismatch {
                expected: model.dim(),
                got: dim,
            });
        }
        if coords.is_empty() || coords.len() % dim != 0 {
            return Err(FieldError::EmptyPoints);
        }
        if modes < MIN_FOURIER_MODES {
            return Err(FieldError::TooFewFourierModes {
                modes,
                minimum: MIN_FOURIER_MODES,
            });
        }
        Ok(Self {
            model: *model,
            dim,
            coords: coords.to_vec(),
            modes,
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let count = self.coords.len() / self.dim;
        let mut out = vec![0.0; count];
        for _ in 0..self.modes {
            let w = self.model.sample_frequency(rng);
            let phase: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
            for (o, p) in out.iter_mut().zip(self.coords.chunks_exact(self.dim)) {
                let arg: f64 = w.iter().zip(p).map(|(a, b)| a * b).sum::<f64>() + phase;
                *o += arg.cos();
            }
        }
        let amp = (2.0 / self.modes as f64).sqrt();
        for o in &mut out {
            *o *= amp;
        }
        out
    }
}

/// One sample of the field on a point list.
pub fn simulate_points(
    model: &CovarianceModel,
    dim: usize,
    coords: &[f64],
    seed: u64,
    method: PointMethod,
) -> Result<FieldSample, FieldError> {
    let mut rng = replication_rng(seed, 0);
    let (values, synthesis, jitter) = match method {
        PointMethod::ExactFactorization => {
            let sampler =
                ExactPointSampler::new(model, dim, coords, &PointSamplerOptions::default())?;
            (
                sampler.sample(&mut rng),
                SynthesisMethod::ExactFactorization,
                Some(sampler.jitter()),
            )
        }
        PointMethod::FourierFeatures { modes } => {
            let sampler = FourierPointSampler::new(model, dim, coords, modes)?;
            (
                sampler.sample(&mut rng),
                SynthesisMethod::FourierFeatures(modes),
                None,
            )
        }
    };
    Ok(FieldSample {
        domain: SampleDomain::Points {
            dim,
            coords: coords.to_vec(),
        },
        values,
        seed,
        method: synthesis,
        jitter,
    })
}
