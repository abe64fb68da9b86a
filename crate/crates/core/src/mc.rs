//! Shared-replication Monte Carlo estimation of `P(M_S > u)` with Wilson
//! confidence intervals, the log-slope dimension extractor, and the
//! prediction/estimate comparison report.
//!
//! One field is synthesized per replication and its maximum is tallied
//! against the whole level grid at once. Sharing replications across levels
//! enforces monotonicity of the estimates deterministically and reduces the
//! variance of slope fits. Replication `i` draws from the stream
//! `(master_seed, i)`, so estimates are identical for any worker count.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::field::{
    CovarianceModel, ExactPointSampler, FieldError, FourierPointSampler, GridGeometry,
    GridSampler, PointMethod, PointSamplerOptions,
};
use crate::geometry::{GridSet, PointCloud};
use crate::seeding::replication_rng;
use crate::tail::{Regime, TailPrediction};

/// Errors from Monte Carlo estimation.
#[derive(Debug, thiserror::Error)]
pub enum McError {
    #[error("zero replications requested")]
    ZeroReps,
    #[error("level grid must be non-empty and strictly ascending")]
    UnsortedGrid,
    #[error("u grids of prediction and estimate differ")]
    GridMismatch,
    #[error("need at least {needed} levels with at least {min_count} exceedances, got {got}")]
    InsufficientCounts {
        needed: usize,
        min_count: u64,
        got: usize,
    },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("estimate CSV is malformed: {0}")]
    MalformedCsv(String),
}

/// `z` for 95% Wilson intervals.
pub const WILSON_Z_95: f64 = 1.959_963_984_540_054;

/// Minimum exceedance count per level admitted into slope fits; below this
/// the delta-method variance of `log p̂` is unreliable.
pub const MIN_COUNT_FOR_SLOPE: u64 = 25;

/// Wilson score interval for a binomial proportion. Always brackets the
/// point estimate, including at the endpoints where rounding would
/// otherwise nudge a bound past `p̂`.
pub fn wilson_interval(count: u64, reps: u64, z: f64) -> (f64, f64) {
    let n = reps as f64;
    let p = count as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = (center - half).max(0.0).min(p);
    let hi = (center + half).min(1.0).max(p);
    (lo, hi)
}

/// Empirical tail of the maximum over a level grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McTailEstimate {
    pub u_grid: Vec<f64>,
    pub exceed_counts: Vec<u64>,
    pub reps: u64,
    pub p_hat: Vec<f64>,
    pub ci_low: Vec<f64>,
    pub ci_high: Vec<f64>,
    pub master_seed: u64,
    pub method: String,
}

impl McTailEstimate {
    /// Assemble an estimate from raw exceedance counts.
    pub fn from_counts(
        u_grid: Vec<f64>,
        exceed_counts: Vec<u64>,
        reps: u64,
        master_seed: u64,
        method: impl Into<String>,
    ) -> Self {
        assert_eq!(u_grid.len(), exceed_counts.len());
        assert!(reps > 0);
        let p_hat: Vec<f64> = exceed_counts.iter().map(|&c| c as f64 / reps as f64).collect();
        let (ci_low, ci_high) = exceed_counts
            .iter()
            .map(|&c| wilson_interval(c, reps, WILSON_Z_95))
            .unzip();
        Self {
            u_grid,
            exceed_counts,
            reps,
            p_hat,
            ci_low,
            ci_high,
            master_seed,
            method: method.into(),
        }
    }

    /// CSV export with header `u,count,reps,p_hat,ci_low,ci_high`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "u,count,reps,p_hat,ci_low,ci_high")?;
        for i in 0..self.u_grid.len() {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                self.u_grid[i],
                self.exceed_counts[i],
                self.reps,
                self.p_hat[i],
                self.ci_low[i],
                self.ci_high[i]
            )?;
        }
        Ok(())
    }

    /// Parse the CSV written by [`McTailEstimate::write_csv`].
    pub fn read_csv(text: &str, master_seed: u64, method: impl Into<String>) -> Result<Self, McError> {
        let mut u_grid = Vec::new();
        let mut counts = Vec::new();
        let mut reps = 0u64;
        for (lineno, line) in text.lines().enumerate() {
            if lineno == 0 {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 6 {
                return Err(McError::MalformedCsv(format!(
                    "expected 6 fields on line {lineno}"
                )));
            }
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| McError::MalformedCsv(format!("line {lineno}: {e}")))
            };
            u_grid.push(parse(fields[0])?);
            counts.push(parse(fields[1])? as u64);
            reps = parse(fields[2])? as u64;
        }
        if u_grid.is_empty() || reps == 0 {
            return Err(McError::MalformedCsv("no data rows".into()));
        }
        Ok(Self::from_counts(u_grid, counts, reps, master_seed, method))
    }
}

/// What to estimate the tail on.
#[derive(Debug, Clone, Copy)]
pub enum TailTarget<'a> {
    /// Max over the occupied cells of a grid (field sampled at cell
    /// centers).
    Grid(&'a GridSet),
    /// Max over the points of a cloud.
    Cloud(&'a PointCloud),
}

/// Estimation knobs beyond the spec'd defaults.
#[derive(Debug, Clone, Default)]
pub struct EstimateOptions {
    /// Force a synthesis route for clouds instead of the size-based default.
    pub point_method: Option<PointMethod>,
    pub sampler_options: PointSamplerOptions,
}

impl EstimateOptions {
    fn resolve_method(&self, points: usize) -> PointMethod {
        self.point_method.unwrap_or_else(|| PointMethod::auto(points))
    }
}

/// Estimate `P(M_S > u)` for every level of an ascending grid with shared
/// replications.
pub fn estimate_tail(
    target: TailTarget<'_>,
    model: &CovarianceModel,
    u_grid: &[f64],
    reps: u64,
    master_seed: u64,
) -> Result<McTailEstimate, McError> {
    estimate_tail_with(
        target,
        model,
        u_grid,
        reps,
        master_seed,
        &EstimateOptions::default(),
    )
}

/// [`estimate_tail`] with explicit options.
pub fn estimate_tail_with(
    target: TailTarget<'_>,
    model: &CovarianceModel,
    u_grid: &[f64],
    reps: u64,
    master_seed: u64,
    options: &EstimateOptions,
) -> Result<McTailEstimate, McError> {
    if reps == 0 {
        return Err(McError::ZeroReps);
    }
    if u_grid.is_empty() || u_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(McError::UnsortedGrid);
    }
    let (counts, method) = match target {
        TailTarget::Grid(grid) => (
            grid_exceedance_counts(grid, model, u_grid, reps, master_seed)?,
            "circulant-embedding".to_string(),
        ),
        TailTarget::Cloud(cloud) => {
            let method = options.resolve_method(cloud.len());
            let counts = match method {
                PointMethod::ExactFactorization => {
                    let sampler = ExactPointSampler::new(
                        model,
                        cloud.dim(),
                        cloud.coords(),
                        &options.sampler_options,
                    )?;
                    cloud_exceedance_counts(u_grid, reps, master_seed, move |rng, buf| {
                        sampler.sample_into(rng, buf)
                    })
                }
                PointMethod::FourierFeatures { modes } => {
                    let sampler =
                        FourierPointSampler::new(model, cloud.dim(), cloud.coords(), modes)?;
                    cloud_exceedance_counts(u_grid, reps, master_seed, move |rng, buf| {
                        *buf = sampler.sample(rng)
                    })
                }
            };
            let name = match method {
                PointMethod::ExactFactorization => "exact-factorization".to_string(),
                PointMethod::FourierFeatures { modes } => format!("fourier-features-{modes}"),
            };
            (counts, name)
        }
    };
    Ok(McTailEstimate::from_counts(
        u_grid.to_vec(),
        counts,
        reps,
        master_seed,
        method,
    ))
}

/// Tally maxima over the occupied cells; one embedding draw yields two
/// replications (real and imaginary parts), so draw `i` serves replications
/// `2i` and `2i+1` from stream `(master_seed, i)`.
fn grid_exceedance_counts(
    grid: &GridSet,
    model: &CovarianceModel,
    u_grid: &[f64],
    reps: u64,
    master_seed: u64,
) -> Result<Vec<u64>, McError> {
    let (lo, hi) = grid.occupied_index_box();
    let n = grid.dim();
    let shape: Vec<usize> = (0..n).map(|k| hi[k] - lo[k] + 1).collect();
    let h = grid.resolution();
    let origin: Vec<f64> = (0..n)
        .map(|k| grid.origin()[k] + (lo[k] as f64 + 0.5) * h)
        .collect();
    let geometry = GridGeometry::new(origin, h, shape.clone());

    // occupancy mask over the cropped block, row-major
    let strides = geometry.strides();
    let mut mask = vec![false; geometry.len()];
    for (idx, &occ) in grid.occupancy().indexed_iter() {
        if occ {
            let flat: usize = (0..n).map(|k| (idx[k] - lo[k]) * strides[k]).sum();
            mask[flat] = true;
        }
    }

    let sampler = GridSampler::new(model, geometry)?;
    let draws = reps.div_ceil(2);
    let counts = (0..draws)
        .into_par_iter()
        .map_init(
            || sampler.scratch(),
            |scratch, draw| {
                let mut rng = replication_rng(master_seed, draw);
                let (a, b) = sampler.sample_pair_with(&mut rng, scratch);
                let mut local = vec![0u64; u_grid.len()];
                tally(&mut local, masked_max(&a, &mask), u_grid);
                if 2 * draw + 1 < reps {
                    tally(&mut local, masked_max(&b, &mask), u_grid);
                }
                local
            },
        )
        .reduce(|| vec![0u64; u_grid.len()], add_counts);
    Ok(counts)
}

fn cloud_exceedance_counts<F>(u_grid: &[f64], reps: u64, master_seed: u64, sample: F) -> Vec<u64>
where
    F: Fn(&mut rand_chacha::ChaCha8Rng, &mut Vec<f64>) + Sync,
{
    (0..reps)
        .into_par_iter()
        .map_init(Vec::new, |buf, rep| {
            let mut rng = replication_rng(master_seed, rep);
            sample(&mut rng, buf);
            let max = buf.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let mut local = vec![0u64; u_grid.len()];
            tally(&mut local, max, u_grid);
            local
        })
        .reduce(|| vec![0u64; u_grid.len()], add_counts)
}

fn masked_max(values: &[f64], mask: &[bool]) -> f64 {
    values
        .iter()
        .zip(mask)
        .filter(|(_, &m)| m)
        .map(|(&v, _)| v)
        .fold(f64::NEG_INFINITY, f64::max)
}

fn tally(counts: &mut [u64], max: f64, u_grid: &[f64]) {
    for (slot, &u) in counts.iter_mut().zip(u_grid) {
        if max > u {
            *slot += 1;
        } else {
            break; // ascending grid: no later level can be exceeded
        }
    }
}

fn add_counts(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// Weighted log-slope fit extracting the dimension from Eq.-(5)-style
/// behaviour: regress `log p̂ + u²/2` on `log u`; the slope plus one is the
/// dimension estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogSlopeFit {
    pub d_hat: f64,
    pub std_error: f64,
    pub points_used: usize,
}

/// Fit the log-slope of an estimate, weighting each level by the
/// delta-method variance of `log p̂` and dropping levels with fewer than
/// [`MIN_COUNT_FOR_SLOPE`] exceedances.
pub fn fit_log_slope(estimate: &McTailEstimate) -> Result<LogSlopeFit, McError> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut ws = Vec::new();
    for i in 0..estimate.u_grid.len() {
        let count = estimate.exceed_counts[i];
        let p = estimate.p_hat[i];
        if count < MIN_COUNT_FOR_SLOPE || p >= 1.0 {
            continue;
        }
        let u = estimate.u_grid[i];
        xs.push(u.ln());
        ys.push(p.ln() + u * u / 2.0);
        // Var(log p̂) ≈ (1-p)/(reps·p)
        ws.push(estimate.reps as f64 * p / (1.0 - p));
    }
    if xs.len() < 4 {
        return Err(McError::InsufficientCounts {
            needed: 4,
            min_count: MIN_COUNT_FOR_SLOPE,
            got: xs.len(),
        });
    }
    let w_sum: f64 = ws.iter().sum();
    let x_bar = xs.iter().zip(&ws).map(|(x, w)| x * w).sum::<f64>() / w_sum;
    let y_bar = ys.iter().zip(&ws).map(|(y, w)| y * w).sum::<f64>() / w_sum;
    let sxx: f64 = xs.iter().zip(&ws).map(|(x, w)| w * (x - x_bar) * (x - x_bar)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .zip(&ws)
        .map(|((x, y), w)| w * (x - x_bar) * (y - y_bar))
        .sum();
    let slope = sxy / sxx;
    Ok(LogSlopeFit {
        d_hat: slope + 1.0,
        std_error: (1.0 / sxx).sqrt(),
        points_used: xs.len(),
    })
}

/// One joined row of a prediction/estimate comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub u: f64,
    pub p_hat: f64,
    pub prediction: Option<f64>,
    pub ratio: Option<f64>,
    pub ratio_ci_low: Option<f64>,
    pub ratio_ci_high: Option<f64>,
}

/// Comparison of an empirical tail against a prediction: per-level ratios
/// where the regime admits point values, slope diagnostics always.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub rows: Vec<ComparisonRow>,
    /// `max_u |log(p̂/prediction)|` over levels with point predictions.
    pub max_abs_log_ratio: Option<f64>,
    pub slope: Option<LogSlopeFit>,
    /// Dimension implied by the regime.
    pub slope_target: f64,
    /// `d̂ - slope_target` when both sides exist.
    pub slope_deviation: Option<f64>,
    pub verdict: String,
}

/// Join a prediction and an estimate on their common level grid.
///
/// Weak and log regimes are compared by slope only; strong and
/// outer-content regimes additionally get per-level ratios with
/// confidence bounds.
pub fn compare(
    prediction: &TailPrediction,
    estimate: &McTailEstimate,
) -> Result<ComparisonReport, McError> {
    if prediction.u_grid.len() != estimate.u_grid.len()
        || prediction
            .u_grid
            .iter()
            .zip(&estimate.u_grid)
            .any(|(a, b)| (a - b).abs() > 1e-12)
    {
        return Err(McError::GridMismatch);
    }
    let points = prediction.point_values();
    let mut rows = Vec::with_capacity(estimate.u_grid.len());
    let mut max_abs_log_ratio: Option<f64> = None;
    for i in 0..estimate.u_grid.len() {
        let prediction_value = points.map(|v| v[i]);
        let ratio = prediction_value.map(|p| estimate.p_hat[i] / p);
        if let Some(r) = ratio {
            if r > 0.0 {
                let a = r.ln().abs();
                max_abs_log_ratio = Some(max_abs_log_ratio.map_or(a, |m: f64| m.max(a)));
            }
        }
        rows.push(ComparisonRow {
            u: estimate.u_grid[i],
            p_hat: estimate.p_hat[i],
            prediction: prediction_value,
            ratio,
            ratio_ci_low: prediction_value.map(|p| estimate.ci_low[i] / p),
            ratio_ci_high: prediction_value.map(|p| estimate.ci_high[i] / p),
        });
    }
    let slope = fit_log_slope(estimate).ok();
    let slope_target = prediction.regime.dimension(prediction.n);
    let slope_deviation = slope.map(|s| s.d_hat - slope_target);
    let verdict = match (&prediction.regime, max_abs_log_ratio, slope) {
        (Regime::WeakMinkowski { .. } | Regime::LogOnly { .. }, _, Some(s)) => format!(
            "slope-only regime: d_hat = {:.4} ± {:.4} against target {:.4}",
            s.d_hat, s.std_error, slope_target
        ),
        (Regime::WeakMinkowski { .. } | Regime::LogOnly { .. }, _, None) => {
            "slope-only regime: too few exceedances for a slope fit".to_string()
        }
        (_, Some(m), _) => format!(
            "point regime: max |log ratio| = {m:.4} over {} levels",
            rows.len()
        ),
        (_, None, _) => "point regime: no positive ratios to compare".to_string(),
    };
    Ok(ComparisonReport {
        rows,
        max_abs_log_ratio,
        slope,
        slope_target,
        slope_deviation,
        verdict,
    })
}

impl ComparisonReport {
    /// CSV export with header
    /// `u,p_hat,prediction,ratio,ratio_ci_low,ratio_ci_high`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "u,p_hat,prediction,ratio,ratio_ci_low,ratio_ci_high")?;
        let fmt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                r.u,
                r.p_hat,
                fmt(r.prediction),
                fmt(r.ratio),
                fmt(r.ratio_ci_low),
                fmt(r.ratio_ci_high)
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{CloudSource, PointCloud};
    use crate::special::{gaussian_density, gaussian_upper_tail};
    use approx::assert_relative_eq;

    fn sqexp(n: usize) -> CovarianceModel {
        CovarianceModel::squared_exponential(n)
    }

    #[test]
    fn wilson_interval_brackets_p_hat() {
        for (count, reps) in [(0u64, 100u64), (3, 100), (50, 100), (100, 100)] {
            let (lo, hi) = wilson_interval(count, reps, WILSON_Z_95);
            let p = count as f64 / reps as f64;
            assert!(lo <= p && p <= hi, "({lo}, {hi}) vs {p}");
            assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
        }
    }

    #[test]
    fn zero_reps_and_unsorted_grids_rejected() {
        let cloud =
            PointCloud::new(1, vec![0.0], 0, CloudSource::DeterministicIteration).unwrap();
        assert!(matches!(
            estimate_tail(TailTarget::Cloud(&cloud), &sqexp(1), &[2.0], 0, 1),
            Err(McError::ZeroReps)
        ));
        assert!(matches!(
            estimate_tail(TailTarget::Cloud(&cloud), &sqexp(1), &[2.0, 1.0], 10, 1),
            Err(McError::UnsortedGrid)
        ));
    }

    #[test]
    fn deep_negative_level_is_always_exceeded() {
        let cloud =
            PointCloud::new(1, vec![0.0, 0.5], 0, CloudSource::DeterministicIteration).unwrap();
        let est =
            estimate_tail(TailTarget::Cloud(&cloud), &sqexp(1), &[-10.5], 200, 7).unwrap();
        assert_eq!(est.exceed_counts, vec![200]);
        assert_eq!(est.p_hat, vec![1.0]);
    }

    #[test]
    fn single_point_matches_gaussian_tail() {
        let cloud =
            PointCloud::new(1, vec![0.3], 0, CloudSource::DeterministicIteration).unwrap();
        let est = estimate_tail(
            TailTarget::Cloud(&cloud),
            &sqexp(1),
            &[1.0, 2.0],
            40_000,
            123,
        )
        .unwrap();
        for (i, &u) in est.u_grid.iter().enumerate() {
            let oracle = gaussian_upper_tail(u);
            assert!(
                est.ci_low[i] <= oracle && oracle <= est.ci_high[i],
                "u={u}: CI [{}, {}] misses {oracle}",
                est.ci_low[i],
                est.ci_high[i]
            );
        }
    }

    #[test]
    fn p_hat_is_monotone_in_u() {
        let cloud = PointCloud::new(
            1,
            vec![0.0, 0.7, 1.9, 2.4],
            0,
            CloudSource::DeterministicIteration,
        )
        .unwrap();
        let grid: Vec<f64> = (0..12).map(|i| -1.0 + 0.35 * i as f64).collect();
        let est = estimate_tail(TailTarget::Cloud(&cloud), &sqexp(1), &grid, 3000, 5).unwrap();
        for w in est.p_hat.windows(2) {
            assert!(w[1] <= w[0]);
        }
    }

    #[test]
    fn estimates_identical_across_worker_counts() {
        let cloud = PointCloud::new(
            1,
            (0..40).map(|i| i as f64 * 0.05).collect(),
            0,
            CloudSource::DeterministicIteration,
        )
        .unwrap();
        let model = sqexp(1);
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| {
                estimate_tail(TailTarget::Cloud(&cloud), &model, &[1.5, 2.0, 2.5], 2000, 99)
                    .unwrap()
            })
        };
        let a = run(1);
        let b = run(8);
        assert_eq!(a.exceed_counts, b.exceed_counts);
        assert_eq!(a.p_hat, b.p_hat);
    }

    #[test]
    fn noiseless_synthetic_slope_recovery() {
        // p(u) = u^{d-1} φ(u) √(2π); exact counts at huge reps make the
        // fit essentially noiseless, and the intercept absorbs the constant
        for d in [0.63, 1.0, 1.585] {
            let u_grid: Vec<f64> = (0..9).map(|i| 2.0 + 0.15 * i as f64).collect();
            let reps: u64 = 1_000_000_000_000;
            let counts: Vec<u64> = u_grid
                .iter()
                .map(|&u| {
                    let p = u.powf(d - 1.0)
                        * gaussian_density(u)
                        * (2.0 * std::f64::consts::PI).sqrt();
                    (p * reps as f64).round() as u64
                })
                .collect();
            let est = McTailEstimate::from_counts(u_grid, counts, reps, 0, "synthetic");
            let fit = fit_log_slope(&est).unwrap();
            assert!(
                (fit.d_hat - d).abs() < 1e-6,
                "d – d̂ = {:.2e}",
                fit.d_hat - d
            );
        }
    }

    #[test]
    fn slope_fit_requires_enough_counts() {
        let est = McTailEstimate::from_counts(
            vec![2.0, 2.5, 3.0, 3.5],
            vec![100, 50, 30, 10],
            1000,
            0,
            "synthetic",
        );
        assert!(matches!(
            fit_log_slope(&est),
            Err(McError::InsufficientCounts { got: 3, .. })
        ));
    }

    #[test]
    fn compare_exact_prediction_gives_unit_ratios() {
        let u_grid = vec![2.0, 2.5, 3.0, 3.5];
        let reps = 10_000u64;
        let values: Vec<f64> = u_grid.iter().map(|&u| gaussian_upper_tail(u)).collect();
        let counts: Vec<u64> = values.iter().map(|&p| (p * reps as f64).round() as u64).collect();
        let est = McTailEstimate::from_counts(u_grid.clone(), counts.clone(), reps, 0, "synthetic");
        let pred = TailPrediction {
            n: 1,
            regime: Regime::StrongMinkowski {
                dimension: 1.0,
                content: 1.0,
            },
            u_grid,
            prediction: Some(counts.iter().map(|&c| c as f64 / reps as f64).collect()),
            term1: None,
            term2: None,
            band_lower: None,
            band_upper: None,
        };
        let report = compare(&pred, &est).unwrap();
        for row in &report.rows {
            assert_relative_eq!(row.ratio.unwrap(), 1.0, epsilon = 1e-12);
        }
        assert_relative_eq!(report.max_abs_log_ratio.unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn compare_rejects_mismatched_grids() {
        let est = McTailEstimate::from_counts(vec![2.0, 3.0], vec![10, 5], 100, 0, "synthetic");
        let pred = TailPrediction::evaluate(
            Regime::StrongMinkowski {
                dimension: 1.0,
                content: 1.0,
            },
            1,
            &[2.0, 3.5],
            2.0,
        );
        assert!(matches!(compare(&pred, &est), Err(McError::GridMismatch)));
    }

    #[test]
    fn estimate_csv_round_trip() {
        let est = McTailEstimate::from_counts(
            vec![2.0, 2.5],
            vec![227, 62],
            10_000,
            42,
            "exact-factorization",
        );
        let mut buf = Vec::new();
        est.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let back = McTailEstimate::read_csv(&text, 42, "exact-factorization").unwrap();
        assert_eq!(back, est);
    }
}
