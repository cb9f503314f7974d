//! Command-line front end for the coupled epidemic-behavioral dynamics
//! library: scenario runs, equilibrium reports, regime classification,
//! bifurcation sweeps, and the named experiment presets.

mod config;
mod presets;
mod run;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use config::{parse_config, ModelKind, ModelParams, ScenarioConfig};
use epigame_core::equilibria::{render_table, reports_to_json, sis_equilibria};
use run::{attractor_agreement, execute, execute_sweep, summary, write_atomic};

#[derive(Parser)]
#[command(
    name = "epigame",
    about = "Coupled epidemic-behavioral dynamics: simulation, equilibria, sliding modes, bifurcation",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Scenario configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory for artifacts.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Override the integration step size.
    #[arg(long)]
    dt: Option<f64>,
    /// Override the timescale separation factor.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Override the time horizon.
    #[arg(long = "t-end")]
    t_end: Option<f64>,
    /// Exit nonzero if the simulated attractor disagrees with the
    /// classifier prediction beyond a 0.01 tolerance.
    #[arg(long)]
    check: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a full coupled system (sis, siri, or siri-vanilla).
    Simulate(RunArgs),
    /// Integrate a reduced hybrid system with Filippov sliding resolution.
    Reduced(RunArgs),
    /// Compute the labeled equilibria with stability (sis parameters).
    Equilibria(RunArgs),
    /// Classify the configured model's convergence regime.
    Classify(RunArgs),
    /// Sweep the recovery rate and export the equilibrium branches.
    Bifurcate(RunArgs),
    /// Run a named experiment preset.
    Preset {
        name: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Fan independent runs out across this many worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// List the available presets.
    ListPresets,
}

fn main() -> ExitCode {
    match dispatch() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Simulate(args) => {
            let cfg = load_config(&args)?;
            if matches!(
                cfg.model,
                ModelKind::ReducedSis | ModelKind::ReducedSiriStrong | ModelKind::ReducedSiriWeak
            ) {
                bail!("model `{}` is a reduced system: use the `reduced` subcommand", cfg.model.as_str());
            }
            run_trajectory(&cfg, &args)
        }
        Command::Reduced(args) => {
            let cfg = load_config(&args)?;
            if !matches!(
                cfg.model,
                ModelKind::ReducedSis | ModelKind::ReducedSiriStrong | ModelKind::ReducedSiriWeak
            ) {
                bail!("model `{}` is a full system: use the `simulate` subcommand", cfg.model.as_str());
            }
            run_trajectory(&cfg, &args)
        }
        Command::Equilibria(args) => {
            let cfg = load_config(&args)?;
            let params = match &cfg.params {
                ModelParams::Sis(p) => *p,
                ModelParams::Siri(p) => p.sis,
                ModelParams::Vanilla { .. } => {
                    bail!("equilibria reports require sis or siri parameters")
                }
            };
            let reports = sis_equilibria(&params);
            let path = args.out.join("equilibria.json");
            write_atomic(&path, &reports_to_json(&reports))?;
            print!("{}", render_table(&reports));
            println!("report written to {}", path.display());
            Ok(())
        }
        Command::Classify(args) => {
            let cfg = load_config(&args)?;
            let report = classify_json(&cfg)?;
            let path = args.out.join("classify.json");
            write_atomic(&path, &report)?;
            println!("{report}");
            println!("report written to {}", path.display());
            Ok(())
        }
        Command::Bifurcate(args) => {
            let cfg = load_config(&args)?;
            let out = execute_sweep(&cfg)?;
            let path = args.out.join("branches.csv");
            write_atomic(&path, &out.document)?;
            println!("{}", out.classifier);
            println!("branch table written to {}", path.display());
            Ok(())
        }
        Command::Preset { name, out, jobs } => {
            let preset = presets::find(&name)
                .with_context(|| format!("unknown preset `{name}`; see `epigame list-presets`"))?;
            run::run_preset(&preset, &out, jobs)
        }
        Command::ListPresets => {
            for preset in presets::list() {
                println!("{:<12} {}", preset.name, preset.description);
            }
            Ok(())
        }
    }
}

fn load_config(args: &RunArgs) -> Result<ScenarioConfig> {
    let text = fs::read_to_string(&args.config)
        .with_context(|| format!("reading {}", args.config.display()))?;
    let mut cfg = parse_config(&text)?;
    if let Some(dt) = args.dt {
        cfg.integration.dt = dt;
    }
    if let Some(epsilon) = args.epsilon {
        cfg.integration.epsilon = epsilon;
    }
    if let Some(t_end) = args.t_end {
        cfg.integration.t_end = t_end;
    }
    cfg.integration.validate()?;
    Ok(cfg)
}

fn run_trajectory(cfg: &ScenarioConfig, args: &RunArgs) -> Result<()> {
    let out = execute(cfg)?;
    let file = format!("{}_trajectory.csv", cfg.model.as_str());
    let path = args.out.join(file);
    write_atomic(&path, &out.document)?;
    print!("{}", summary(cfg, &out, "config"));
    println!("trajectory written to {}", path.display());
    if args.check {
        match attractor_agreement(&out, 0.01) {
            Some(true) => println!("check: simulated attractor agrees with the classifier"),
            Some(false) => bail!(
                "simulated attractor (final-window y = {:.6}) disagrees with the classifier ({})",
                out.final_window_y,
                out.classifier
            ),
            None => println!("check: no classifier prediction for this model"),
        }
    }
    Ok(())
}

fn classify_json(cfg: &ScenarioConfig) -> Result<String> {
    use epigame_core::equilibria::{siri_strong_classify, siri_weak_classify, vanilla_siri_classify};
    use epigame_core::hybrid::classify_reduced_sis;
    let json = match (&cfg.model, &cfg.params) {
        (ModelKind::Sis | ModelKind::ReducedSis, ModelParams::Sis(p)) => {
            serde_json::to_string_pretty(&classify_reduced_sis(p))?
        }
        (ModelKind::SiriVanilla, ModelParams::Vanilla { beta, beta_hat, gamma }) => {
            serde_json::to_string_pretty(&vanilla_siri_classify(*beta, *beta_hat, *gamma)?)?
        }
        (_, ModelParams::Siri(p)) => {
            let report = if p.strengthened_immunity() {
                siri_strong_classify(p)?
            } else {
                siri_weak_classify(p)?
            };
            serde_json::to_string_pretty(&report)?
        }
        _ => bail!("model/parameter shapes disagree"),
    };
    Ok(json)
}
