//! Thin command-line wrapper around the experiment driver. All logic lives
//! in the library; see the examples directory for programmatic use.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fractal_extremes::driver::{self, Command, ExperimentConfig, SetSpec};

#[derive(Parser)]
#[command(
    name = "fractal-extremes",
    about = "Tail of the maximum of smooth stationary Gaussian fields on fractal and regular sets",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Subcommand)]
enum CliCommand {
    /// Measure tube geometry: dimension/content fits, outer content.
    Fractal(CommonArgs),
    /// Evaluate the closed-form tail prediction for the set.
    Predict(CommonArgs),
    /// Monte Carlo estimate of the tail of the maximum.
    Simulate(CommonArgs),
    /// Join prediction and estimate; write ratios and a verdict.
    Compare(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// JSON experiment config; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Builtin set name (cantor, sierpinski, koch, interval, square, disc).
    #[arg(long, conflicts_with = "ifs")]
    set: Option<String>,
    /// IFS description file (JSON).
    #[arg(long)]
    ifs: Option<PathBuf>,
    /// Comma-separated ascending levels, e.g. "2.0,2.5,3.0".
    #[arg(long, value_name = "LIST")]
    u: Option<String>,
    /// Monte Carlo replications.
    #[arg(long)]
    reps: Option<u64>,
    /// Master seed; all replication streams derive from it.
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated tube radii, largest first.
    #[arg(long, value_name = "LIST")]
    epsilons: Option<String>,
    /// Attractor iteration depth.
    #[arg(long)]
    depth: Option<u32>,
    /// Rasterization cell side.
    #[arg(long)]
    resolution: Option<f64>,
    /// Simulation grid spacing for solid sets.
    #[arg(long)]
    sim_resolution: Option<f64>,
    /// Force the prediction regime: strong, weak, log, or outer.
    #[arg(long)]
    regime: Option<String>,
    /// Covariance length scale (pre-normalization).
    #[arg(long)]
    length_scale: Option<f64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_list(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| format!("'{s}': {e}")))
        .collect()
}

fn build_config(args: &CommonArgs) -> Result<ExperimentConfig, String> {
    let mut config = match (&args.config, &args.set, &args.ifs) {
        (Some(path), _, _) => driver::ExperimentConfig::load(path).map_err(|e| e.to_string())?,
        (None, Some(name), _) => ExperimentConfig::for_builtin(name),
        (None, None, Some(_)) => {
            let mut c = ExperimentConfig::for_builtin("interval");
            c.set = SetSpec::IfsFile {
                ifs_file: PathBuf::new(),
            };
            c
        }
        (None, None, None) => {
            return Err("either --config, --set, or --ifs is required".into());
        }
    };
    if let Some(name) = &args.set {
        config.set = SetSpec::Builtin {
            builtin: name.clone(),
        };
    }
    if let Some(path) = &args.ifs {
        config.set = SetSpec::IfsFile {
            ifs_file: path.clone(),
        };
    }
    if let Some(u) = &args.u {
        config.u_grid = parse_list(u)?;
    }
    if let Some(eps) = &args.epsilons {
        config.epsilons = Some(parse_list(eps)?);
    }
    if let Some(reps) = args.reps {
        config.reps = reps;
    }
    if let Some(seed) = args.seed {
        config.master_seed = seed;
    }
    if let Some(depth) = args.depth {
        config.depth = Some(depth);
    }
    if let Some(r) = args.resolution {
        config.resolution = Some(r);
    }
    if let Some(r) = args.sim_resolution {
        config.sim_resolution = Some(r);
    }
    if let Some(regime) = &args.regime {
        config.regime = Some(regime.clone());
    }
    if let Some(l) = args.length_scale {
        config.covariance.length_scale = l;
    }
    if let Some(out) = &args.out {
        config.output_dir = out.clone();
    }
    Ok(config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match &cli.command {
        CliCommand::Fractal(a) => (Command::Fractal, a),
        CliCommand::Predict(a) => (Command::Predict, a),
        CliCommand::Simulate(a) => (Command::Simulate, a),
        CliCommand::Compare(a) => (Command::Compare, a),
    };
    let config = match build_config(args) {
        Ok(c) => c,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(2);
        }
    };
    match driver::run(command, &config) {
        Ok(summary) => {
            println!("{summary}");
            for path in driver::output_paths(&config, command.name()) {
                println!("wrote {}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
