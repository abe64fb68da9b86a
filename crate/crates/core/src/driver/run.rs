//! The four experiment commands: geometry, prediction, simulation, and
//! comparison. Every run writes a manifest with the config hash, seed, and
//! crate version so outputs can be reproduced exactly.

use std::fs;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::builtins::{Builtin, KnownConstants};
use super::config::{ExperimentConfig, SetSpec};
use super::DriverError;
use crate::field::{normalize, CovarianceModel, RawCovariance};
use crate::geometry::{
    attractor, content_1d, default_epsilon_ladder, estimate_minkowski, is_lattice_type,
    moran_dimension, outer_content, AttractorMode, GridSet, Ifs, MinkowskiFit,
    TubeProfile, DEFAULT_LATTICE_TOLERANCE,
};
use crate::mc::{compare, estimate_tail, ComparisonReport, McTailEstimate, TailTarget};
use crate::tail::{Regime, TailPrediction};

/// Geometry summary produced by the `fractal` command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeometryReport {
    pub set: String,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub moran_dimension: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice_type: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub content_1d: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub content_lattice_warning: Option<bool>,
    pub dimension_fit: MinkowskiFit,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outer_content: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub volume: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub known: Option<KnownConstants>,
    pub tube_profile_csv: String,
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    config_sha256: String,
    master_seed: u64,
    crate_version: &'a str,
    outputs: Vec<String>,
    config: &'a ExperimentConfig,
}

fn write_manifest(
    config: &ExperimentConfig,
    command: &str,
    outputs: &[&str],
) -> Result<(), DriverError> {
    let config_json = serde_json::to_string(config)?;
    let mut hasher = Sha256::new();
    hasher.update(config_json.as_bytes());
    let manifest = Manifest {
        command,
        config_sha256: format!("{:x}", hasher.finalize()),
        master_seed: config.master_seed,
        crate_version: env!("CARGO_PKG_VERSION"),
        outputs: outputs.iter().map(|s| s.to_string()).collect(),
        config,
    };
    let path = config.output_dir.join(format!("{command}_manifest.json"));
    fs::write(path, serde_json::to_string_pretty(&manifest)?)?;
    Ok(())
}

fn ensure_output_dir(config: &ExperimentConfig) -> Result<(), DriverError> {
    fs::create_dir_all(&config.output_dir)
        .map_err(|e| DriverError::Config(format!("cannot create output directory: {e}")))
}

/// The set as loaded for an experiment, before any simulation scaling.
enum ResolvedSet {
    Ifs { name: String, ifs: Ifs },
    Solid(Builtin),
}

fn resolve_set(config: &ExperimentConfig) -> Result<ResolvedSet, DriverError> {
    match &config.set {
        SetSpec::Builtin { builtin } => {
            let b = Builtin::parse(builtin)
                .ok_or_else(|| DriverError::Config(format!("unknown builtin '{builtin}'")))?;
            if b.is_solid() {
                Ok(ResolvedSet::Solid(b))
            } else {
                Ok(ResolvedSet::Ifs {
                    name: b.name().to_string(),
                    ifs: b.ifs().expect("fractal builtins carry an IFS"),
                })
            }
        }
        SetSpec::IfsFile { ifs_file } => Ok(ResolvedSet::Ifs {
            name: ifs_file.display().to_string(),
            ifs: Ifs::read_file(ifs_file)?,
        }),
    }
}

fn builtin_of(config: &ExperimentConfig) -> Option<Builtin> {
    match &config.set {
        SetSpec::Builtin { builtin } => Builtin::parse(builtin),
        SetSpec::IfsFile { .. } => None,
    }
}

/// Gap lengths of `I \ ∪ fᵢ(I)` for a 1-D IFS whose map images do not
/// overlap; `None` when they do.
fn gaps_1d(ifs: &Ifs) -> Option<Vec<f64>> {
    if ifs.dim() != 1 {
        return None;
    }
    // the convex hull [a, b] is the fixed point of I ↦ hull(∪ f_i(I)),
    // approached geometrically from the fixed-point box
    let (mut a, mut b) = {
        let (lo, hi) = ifs.fixed_point_box();
        (lo[0], hi[0])
    };
    for _ in 0..200 {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for f in ifs.maps() {
            let (x, y) = (f.apply(&[a])[0], f.apply(&[b])[0]);
            lo = lo.min(x.min(y));
            hi = hi.max(x.max(y));
        }
        if (lo - a).abs() < 1e-15 && (hi - b).abs() < 1e-15 {
            break;
        }
        a = lo;
        b = hi;
    }
    let mut images: Vec<(f64, f64)> = ifs
        .maps()
        .iter()
        .map(|f| {
            let (x, y) = (f.apply(&[a])[0], f.apply(&[b])[0]);
            (x.min(y), x.max(y))
        })
        .collect();
    images.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut gaps = Vec::new();
    for w in images.windows(2) {
        let gap = w[1].0 - w[0].1;
        if gap < -1e-9 {
            return None; // overlapping images: gap structure undefined
        }
        if gap > 1e-9 {
            gaps.push(gap);
        }
    }
    Some(gaps)
}

/// Build the geometric artifacts and report for the configured set.
pub fn cmd_fractal(config: &ExperimentConfig) -> Result<GeometryReport, DriverError> {
    config.validate()?;
    ensure_output_dir(config)?;
    let set = resolve_set(config)?;
    let builtin = builtin_of(config);

    // rasterize the set fine enough for the tube ladder
    let (name, n, mut grid, ifs): (String, usize, GridSet, Option<Ifs>) = match set {
        ResolvedSet::Ifs { name, ifs } => {
            let depth = config.depth.unwrap_or_else(|| {
                builtin.map_or(8, |b| b.default_geometry_depth())
            });
            let cloud = attractor(
                &ifs,
                depth,
                AttractorMode::Deterministic {
                    point_budget: 1 << 22,
                },
            )?;
            let resolution = config
                .resolution
                .or_else(|| builtin.map(|b| b.default_raster_resolution()))
                .unwrap_or(cloud.bounding_box_diameter() / 4096.0);
            let padding = config
                .epsilons
                .as_ref()
                .and_then(|eps| eps.iter().copied().reduce(f64::max))
                .unwrap_or(cloud.bounding_box_diameter() / 8.0);
            let grid = GridSet::rasterize(&cloud, resolution, padding)?;
            (name, ifs.dim(), grid, Some(ifs))
        }
        ResolvedSet::Solid(b) => {
            let resolution = config
                .resolution
                .unwrap_or_else(|| b.default_raster_resolution());
            let padding = config
                .epsilons
                .as_ref()
                .and_then(|eps| eps.iter().copied().reduce(f64::max))
                .unwrap_or(0.25);
            let grid = b
                .solid_grid(resolution, padding, 1.0)
                .expect("solid builtin")?;
            (b.name().to_string(), b.n(), grid, None)
        }
    };

    let ladder = config.epsilons.clone().unwrap_or_else(|| {
        default_epsilon_ladder(grid.occupied_diameter(), grid.resolution())
    });
    let profile = TubeProfile::measure(&mut grid, &ladder)?;
    let fit = estimate_minkowski(&profile)?;
    let om = if grid.interior_cell_count() > 0 {
        Some(outer_content(&mut grid, &ladder)?)
    } else {
        None
    };

    let (moran, lattice, content, content_warning) = match &ifs {
        Some(ifs) => {
            let ratios = ifs.ratios();
            let d = moran_dimension(&ratios)?;
            let lattice = is_lattice_type(&ratios, DEFAULT_LATTICE_TOLERANCE)?;
            let (content, warning) = match gaps_1d(ifs) {
                Some(gaps) if !gaps.is_empty() && d < 1.0 => {
                    let c = content_1d(&ratios, &gaps, d)?;
                    (Some(c.value), Some(c.lattice_warning))
                }
                _ => (None, None),
            };
            (Some(d), Some(lattice), content, warning)
        }
        None => (None, None, None, None),
    };

    let profile_name = "tube_profile.csv";
    let mut csv = Vec::new();
    profile.write_csv(&mut csv)?;
    fs::write(config.output_dir.join(profile_name), csv)?;

    let report = GeometryReport {
        set: name,
        n,
        moran_dimension: moran,
        lattice_type: lattice,
        content_1d: content,
        content_lattice_warning: content_warning,
        dimension_fit: fit,
        outer_content: om,
        volume: (grid.interior_cell_count() > 0).then(|| grid.occupied_volume()),
        known: builtin.map(|b| b.known()),
        tube_profile_csv: profile_name.to_string(),
    };
    fs::write(
        config.output_dir.join("geometry_report.json"),
        serde_json::to_string_pretty(&report)?,
    )?;
    write_manifest(
        config,
        "fractal",
        &[profile_name, "geometry_report.json"],
    )?;
    Ok(report)
}

fn load_geometry_report(config: &ExperimentConfig) -> Option<GeometryReport> {
    let text = fs::read_to_string(config.output_dir.join("geometry_report.json")).ok()?;
    serde_json::from_str(&text).ok()
}

/// Pick the regime: forced by config, otherwise inferred from known
/// constants or a previously written geometry report.
fn resolve_regime(config: &ExperimentConfig) -> Result<(Regime, usize), DriverError> {
    let builtin = builtin_of(config);
    let known = builtin.map(|b| b.known());
    let report = load_geometry_report(config);
    let n = builtin.map(|b| b.n()).or_else(|| report.as_ref().map(|r| r.n));
    let n = match n {
        Some(n) => n,
        None => {
            let SetSpec::IfsFile { ifs_file } = &config.set else {
                return Err(DriverError::Config("cannot determine ambient dimension".into()));
            };
            Ifs::read_file(ifs_file)?.dim()
        }
    };

    // exact constants beat estimates; estimates fill the gaps
    let dimension = known
        .as_ref()
        .and_then(|k| k.dimension)
        .or_else(|| report.as_ref().and_then(|r| r.moran_dimension))
        .or_else(|| report.as_ref().map(|r| r.dimension_fit.dimension));
    let content = known
        .as_ref()
        .and_then(|k| k.content)
        .or_else(|| report.as_ref().and_then(|r| r.content_1d))
        .or_else(|| report.as_ref().map(|r| r.dimension_fit.content));
    let volume = known
        .as_ref()
        .and_then(|k| k.volume)
        .or_else(|| report.as_ref().and_then(|r| r.volume));
    let outer = known
        .as_ref()
        .and_then(|k| k.outer_content)
        .or_else(|| report.as_ref().and_then(|r| r.outer_content));
    let lattice = known
        .as_ref()
        .and_then(|k| k.lattice)
        .or_else(|| report.as_ref().and_then(|r| r.lattice_type));

    let forced = config.regime.as_deref();
    let need = |value: Option<f64>, what: &str| {
        value.ok_or_else(|| {
            DriverError::Config(format!(
                "regime needs {what}; run the fractal command first or use a builtin with known constants"
            ))
        })
    };
    let regime = match forced {
        Some("strong") => Regime::StrongMinkowski {
            dimension: need(dimension, "a dimension")?,
            content: need(content, "a content")?,
        },
        Some("weak") => Regime::WeakMinkowski {
            dimension: need(dimension, "a dimension")?,
        },
        Some("log") => Regime::LogOnly {
            dimension: need(dimension, "a dimension")?,
        },
        Some("outer") => Regime::OuterContent {
            volume: need(volume, "a volume")?,
            outer_content: need(outer, "an outer content")?,
        },
        Some(other) => {
            return Err(DriverError::Config(format!("unknown regime '{other}'")));
        }
        None => {
            // inference: positive volume with an outer content → two-term
            // expansion; lattice-type fractal → log only; a usable content
            // → strong; dimension alone → weak
            if let (Some(v), Some(om)) = (volume.filter(|&v| v > 0.0), outer) {
                Regime::OuterContent {
                    volume: v,
                    outer_content: om,
                }
            } else if lattice == Some(true) {
                Regime::LogOnly {
                    dimension: need(dimension, "a dimension")?,
                }
            } else if let (Some(d), Some(c)) = (dimension, content.filter(|&c| c > 0.0)) {
                Regime::StrongMinkowski {
                    dimension: d,
                    content: c,
                }
            } else {
                Regime::WeakMinkowski {
                    dimension: need(dimension, "a dimension")?,
                }
            }
        }
    };
    Ok((regime, n))
}

/// Evaluate the tail prediction for the configured set and level grid.
pub fn cmd_predict(config: &ExperimentConfig) -> Result<TailPrediction, DriverError> {
    config.validate()?;
    ensure_output_dir(config)?;
    let (regime, n) = resolve_regime(config)?;
    let prediction =
        TailPrediction::evaluate(regime, n, &config.u_grid, config.weak_band_constant);

    let mut csv = Vec::new();
    prediction.write_csv(&mut csv)?;
    fs::write(config.output_dir.join("prediction.csv"), csv)?;
    fs::write(
        config.output_dir.join("prediction_regime.json"),
        serde_json::to_string_pretty(&serde_json::json!({
            "n": n,
            "regime": regime,
        }))?,
    )?;
    write_manifest(
        config,
        "predict",
        &["prediction.csv", "prediction_regime.json"],
    )?;
    Ok(prediction)
}

/// Normalized covariance model plus the coordinate scale applied to sets.
fn resolve_model(config: &ExperimentConfig, n: usize) -> Result<(CovarianceModel, f64), DriverError> {
    let raw = RawCovariance::isotropic_sqexp(n, config.covariance.length_scale);
    let (model, transform) = normalize(&raw)?;
    // isotropic: the transform is a uniform scaling by 1/length_scale
    let scale = transform.matrix()[(0, 0)];
    Ok((model, scale))
}

/// Estimate the empirical tail of the maximum on the configured set.
pub fn cmd_simulate(config: &ExperimentConfig) -> Result<McTailEstimate, DriverError> {
    config.validate()?;
    ensure_output_dir(config)?;
    let set = resolve_set(config)?;
    let builtin = builtin_of(config);

    let estimate = match set {
        ResolvedSet::Ifs { ifs, .. } => {
            let (model, scale) = resolve_model(config, ifs.dim())?;
            let depth = config
                .depth
                .unwrap_or_else(|| builtin.map_or(8, |b| b.default_depth()));
            let cloud = attractor(
                &ifs,
                depth,
                AttractorMode::Deterministic {
                    point_budget: 1 << 22,
                },
            )?
            .scaled(scale);
            estimate_tail(
                TailTarget::Cloud(&cloud),
                &model,
                &config.u_grid,
                config.reps,
                config.master_seed,
            )
        }
        ResolvedSet::Solid(b) => {
            let (model, scale) = resolve_model(config, b.n())?;
            let resolution = config
                .sim_resolution
                .unwrap_or_else(|| b.default_sim_resolution());
            let grid = b
                .solid_grid(resolution * scale, 0.0, scale)
                .expect("solid builtin")?;
            estimate_tail(
                TailTarget::Grid(&grid),
                &model,
                &config.u_grid,
                config.reps,
                config.master_seed,
            )
        }
    }?;

    let mut csv = Vec::new();
    estimate.write_csv(&mut csv)?;
    fs::write(config.output_dir.join("estimate.csv"), csv)?;
    write_manifest(config, "simulate", &["estimate.csv"])?;
    Ok(estimate)
}

/// Join a previously written prediction and estimate and render the
/// verdict.
pub fn cmd_compare(config: &ExperimentConfig) -> Result<ComparisonReport, DriverError> {
    config.validate()?;
    ensure_output_dir(config)?;
    let read = |name: &str| -> Result<String, DriverError> {
        fs::read_to_string(config.output_dir.join(name)).map_err(|e| {
            DriverError::Config(format!(
                "missing upstream output {name} in {}: {e}",
                config.output_dir.display()
            ))
        })
    };

    #[derive(Deserialize)]
    struct RegimeMeta {
        n: usize,
        regime: Regime,
    }
    let meta: RegimeMeta = serde_json::from_str(&read("prediction_regime.json")?)
        .map_err(|e| DriverError::Config(format!("invalid prediction_regime.json: {e}")))?;
    let prediction = TailPrediction::read_csv(&read("prediction.csv")?, meta.n, meta.regime)
        .map_err(DriverError::Config)?;
    let estimate = McTailEstimate::read_csv(
        &read("estimate.csv")?,
        config.master_seed,
        "from-csv",
    )?;

    let report = compare(&prediction, &estimate)?;
    let mut csv = Vec::new();
    report.write_csv(&mut csv)?;
    fs::write(config.output_dir.join("compare.csv"), csv)?;
    fs::write(
        config.output_dir.join("verdict.json"),
        serde_json::to_string_pretty(&report)?,
    )?;
    write_manifest(config, "compare", &["compare.csv", "verdict.json"])?;
    Ok(report)
}

/// Absolute paths of the outputs a command writes, for display.
pub fn output_paths(config: &ExperimentConfig, command: &str) -> Vec<PathBuf> {
    let names: &[&str] = match command {
        "fractal" => &["tube_profile.csv", "geometry_report.json"],
        "predict" => &["prediction.csv", "prediction_regime.json"],
        "simulate" => &["estimate.csv"],
        "compare" => &["compare.csv", "verdict.json"],
        _ => &[],
    };
    names
        .iter()
        .map(|n| config.output_dir.join(n))
        .chain(std::iter::once(
            config.output_dir.join(format!("{command}_manifest.json")),
        ))
        .collect()
}

/// Command to dispatch, used by the binary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Fractal,
    Predict,
    Simulate,
    Compare,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Fractal => "fractal",
            Command::Predict => "predict",
            Command::Simulate => "simulate",
            Command::Compare => "compare",
        }
    }
}

/// Run one command, returning a one-line summary for display.
pub fn run(command: Command, config: &ExperimentConfig) -> Result<String, DriverError> {
    match command {
        Command::Fractal => {
            let report = cmd_fractal(config)?;
            Ok(format!(
                "set {}: d_hat = {:.4} (r² = {:.4}){}{}",
                report.set,
                report.dimension_fit.dimension,
                report.dimension_fit.r_squared,
                report
                    .moran_dimension
                    .map(|d| format!(", moran d = {d:.6}"))
                    .unwrap_or_default(),
                report
                    .outer_content
                    .map(|om| format!(", OM = {om:.4}"))
                    .unwrap_or_default(),
            ))
        }
        Command::Predict => {
            let prediction = cmd_predict(config)?;
            Ok(format!(
                "predicted {} levels under {:?}",
                prediction.u_grid.len(),
                prediction.regime
            ))
        }
        Command::Simulate => {
            let estimate = cmd_simulate(config)?;
            let last = estimate.u_grid.len() - 1;
            Ok(format!(
                "{} reps ({}): p_hat({}) = {:.5}",
                estimate.reps, estimate.method, estimate.u_grid[last], estimate.p_hat[last]
            ))
        }
        Command::Compare => {
            let report = cmd_compare(config)?;
            Ok(report.verdict)
        }
    }
}
