//! Scenario execution: dispatch to the integrators and classifiers, artifact
//! emission (atomic writes), and the attractor checks behind preset gates.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};

use epigame_core::bifurcation::{export_branches, sweep_gamma};
use epigame_core::equilibria::{
    siri_strong_classify, siri_weak_classify, vanilla_siri_classify, Attractor, VanillaRegime,
};
use epigame_core::hybrid::{classify_reduced_sis, simulate_hybrid, HybridSystem, ReducedSiri, ReducedSis};
use epigame_core::integrator::{simulate, SiriSystem, SisSystem, System, VanillaSiriSystem};
use epigame_core::model::{SiriParams, SisParams};

use crate::config::{ModelKind, ModelParams, ScenarioConfig};
use crate::presets::{Expectation, Preset, PresetRun};

/// Result of one executed scenario.
pub struct ExecOutput {
    /// Trajectory or branch document, ready to write.
    pub document: String,
    pub final_state: Vec<f64>,
    /// Mean of the prevalence coordinate over the trailing 10% of the run.
    pub final_window_y: f64,
    pub engaged_sliding: bool,
    pub events: usize,
    /// Transition comments in a branch export.
    pub transitions: usize,
    pub classifier: String,
    pub predicted: Option<(f64, bool)>,
    /// Index of the prevalence coordinate in `final_state`.
    pub y_index: usize,
}

fn sis_params(config: &ScenarioConfig) -> Result<SisParams> {
    match &config.params {
        ModelParams::Sis(p) => Ok(*p),
        _ => bail!("model `{}` requires SIS parameters", config.model.as_str()),
    }
}

fn siri_params(config: &ScenarioConfig) -> Result<SiriParams> {
    match &config.params {
        ModelParams::Siri(p) => Ok(*p),
        _ => bail!("model `{}` requires SIRI parameters", config.model.as_str()),
    }
}

fn state_array<const N: usize>(initial: &[f64]) -> Result<[f64; N]> {
    initial
        .to_vec()
        .try_into()
        .map_err(|_| anyhow!("initial state must have {N} coordinates"))
}

/// Classifier verdict and predicted prevalence limit for a SIRI parameter
/// set, routed by the immunity ordering.
fn siri_verdict(p: &SiriParams) -> Result<(String, f64, bool)> {
    let report = if p.strengthened_immunity() {
        siri_strong_classify(p)?
    } else {
        siri_weak_classify(p)?
    };
    let attractor = match report.attractor {
        Attractor::InfectionFree => "infection-free continuum".to_string(),
        Attractor::E2 => format!("endemic point E2 at y = {:.6}", report.e2.point.0),
        Attractor::E3 => format!("endemic point E3 at y = {:.6}", report.e3.point.0),
        Attractor::Sliding => format!(
            "sliding mode at y = {:.6} (z_R = {:.4})",
            report.sliding_point.unwrap().0,
            report.sliding_control.unwrap()
        ),
    };
    let text = format!(
        "{} immunity case {}: {}{}",
        if p.strengthened_immunity() { "strengthened" } else { "compromised" },
        report.case_id,
        attractor,
        if report.bistable { "; bistable with the infection-free continuum" } else { "" },
    );
    Ok((text, report.y_limit, report.bistable))
}

/// Runs a single scenario to completion.
pub fn execute(config: &ScenarioConfig) -> Result<ExecOutput> {
    match config.model {
        ModelKind::Sis => {
            let p = sis_params(config)?;
            let sys = SisSystem { params: p };
            let traj = simulate(&sys, state_array::<3>(&config.initial)?, &config.integration)?;
            let out = classify_reduced_sis(&p);
            Ok(ExecOutput {
                document: traj.to_csv(&SisSystem::NAMES),
                final_state: traj.final_state().to_vec(),
                final_window_y: traj.final_window_mean(0, 0.1),
                engaged_sliding: false,
                events: traj.events.len(),
                transitions: 0,
                classifier: format!(
                    "slow-dynamics case {}: y -> {:.6}{}",
                    out.case_id,
                    out.limit,
                    if out.sliding_limit { " (sliding)" } else { "" }
                ),
                predicted: Some((out.limit, false)),
                y_index: 0,
            })
        }
        ModelKind::Siri => {
            let p = siri_params(config)?;
            let sys = SiriSystem { params: p };
            let traj = simulate(&sys, state_array::<6>(&config.initial)?, &config.integration)?;
            let (classifier, limit, bistable) = siri_verdict(&p)?;
            Ok(ExecOutput {
                document: traj.to_csv(&SiriSystem::NAMES),
                final_state: traj.final_state().to_vec(),
                final_window_y: traj.final_window_mean(1, 0.1),
                engaged_sliding: false,
                events: traj.events.len(),
                transitions: 0,
                classifier,
                predicted: Some((limit, bistable)),
                y_index: 1,
            })
        }
        ModelKind::SiriVanilla => {
            let ModelParams::Vanilla { beta, beta_hat, gamma } = config.params else {
                bail!("model `siri-vanilla` requires beta/beta_hat/gamma parameters");
            };
            let sys = VanillaSiriSystem { beta, beta_hat, gamma };
            let traj = simulate(&sys, state_array::<3>(&config.initial)?, &config.integration)?;
            let (classifier, predicted) = match vanilla_siri_classify(beta, beta_hat, gamma) {
                Ok(v) => {
                    let limit = match v.regime {
                        VanillaRegime::InfectionFree | VanillaRegime::Epidemic => 0.0,
                        _ => v.endemic_level.unwrap(),
                    };
                    let mut text = format!(
                        "regime {:?} (R0 = {:.4}, R1 = {:.4})",
                        v.regime, v.r0, v.r1
                    );
                    if let Some(tau) = v.basin_threshold {
                        let _ = write!(text, ", basin threshold y(0) = {tau:.4}");
                    }
                    (text, Some((limit, v.regime == VanillaRegime::Bistable)))
                }
                Err(e) => (e.to_string(), None),
            };
            Ok(ExecOutput {
                document: traj.to_csv(&VanillaSiriSystem::NAMES),
                final_state: traj.final_state().to_vec(),
                final_window_y: traj.final_window_mean(1, 0.1),
                engaged_sliding: false,
                events: traj.events.len(),
                transitions: 0,
                classifier,
                predicted,
                y_index: 1,
            })
        }
        ModelKind::ReducedSis => {
            let p = sis_params(config)?;
            let sys = ReducedSis::new(p);
            let traj = simulate_hybrid(&sys, state_array::<1>(&config.initial)?, &config.integration)?;
            let out = classify_reduced_sis(&p);
            Ok(ExecOutput {
                document: traj.to_csv(&<ReducedSis as HybridSystem<1>>::NAMES),
                final_state: traj.base.final_state().to_vec(),
                final_window_y: traj.base.final_window_mean(0, 0.1),
                engaged_sliding: traj.engaged_sliding(),
                events: traj.base.events.len(),
                transitions: 0,
                classifier: format!(
                    "slow-dynamics case {}: y -> {:.6}{}",
                    out.case_id,
                    out.limit,
                    if out.sliding_limit { " (sliding)" } else { "" }
                ),
                predicted: Some((out.limit, false)),
                y_index: 0,
            })
        }
        ModelKind::ReducedSiriStrong | ModelKind::ReducedSiriWeak => {
            let p = siri_params(config)?;
            let sys = if config.model == ModelKind::ReducedSiriStrong {
                ReducedSiri::strong(p)?
            } else {
                ReducedSiri::weak(p)?
            };
            let traj = simulate_hybrid(&sys, state_array::<2>(&config.initial)?, &config.integration)?;
            let (classifier, limit, bistable) = siri_verdict(&p)?;
            Ok(ExecOutput {
                document: traj.to_csv(&<ReducedSiri as HybridSystem<2>>::NAMES),
                final_state: traj.base.final_state().to_vec(),
                final_window_y: traj.base.final_window_mean(0, 0.1),
                engaged_sliding: traj.engaged_sliding(),
                events: traj.base.events.len(),
                transitions: 0,
                classifier,
                predicted: Some((limit, bistable)),
                y_index: 0,
            })
        }
    }
}

/// Runs the gamma sweep attached to the scenario.
pub fn execute_sweep(config: &ScenarioConfig) -> Result<ExecOutput> {
    let p = sis_params(config)?;
    let sweep = config
        .sweep
        .ok_or_else(|| anyhow!("bifurcate requires a [sweep] section"))?;
    let table = sweep_gamma(&p, sweep.gamma_lo, sweep.gamma_hi, sweep.n_points)?;
    let document = export_branches(&table);
    let transitions = table.transition_points.len();
    let classifier = table
        .transition_points
        .iter()
        .map(|t| format!("{} at gamma = {:.6}", t.label(), t.gamma))
        .collect::<Vec<_>>()
        .join(", ");
    Ok(ExecOutput {
        document,
        final_state: Vec::new(),
        final_window_y: f64::NAN,
        engaged_sliding: false,
        events: 0,
        transitions,
        classifier: format!("transcritical points: {classifier}"),
        predicted: None,
        y_index: 0,
    })
}

/// One-screen summary of a finished run.
pub fn summary(config: &ScenarioConfig, out: &ExecOutput, provenance: &str) -> String {
    let mut text = String::new();
    let names = config.model.state_names();
    let state = out
        .final_state
        .iter()
        .zip(names)
        .map(|(v, n)| format!("{n} = {v:.6}"))
        .collect::<Vec<_>>()
        .join(", ");
    let _ = writeln!(text, "model: {}", config.model.as_str());
    if !out.final_state.is_empty() {
        let _ = writeln!(text, "final state: {state}");
        let _ = writeln!(
            text,
            "detected attractor: final-window mean y = {:.6}{}",
            out.final_window_y,
            if out.engaged_sliding { " (sliding engaged)" } else { "" }
        );
        let _ = writeln!(text, "surface crossings logged: {}", out.events);
    }
    let _ = writeln!(text, "classifier verdict: {}", out.classifier);
    let _ = writeln!(text, "initial-condition provenance: {provenance}");
    text
}

/// Compares the simulated attractor with the classifier prediction.
pub fn attractor_agreement(out: &ExecOutput, tol: f64) -> Option<bool> {
    out.predicted.map(|(limit, bistable)| {
        (out.final_window_y - limit).abs() <= tol || (bistable && out.final_window_y < 0.01)
    })
}

fn check(out: &ExecOutput, expected: Expectation) -> std::result::Result<String, String> {
    match expected {
        Expectation::None => Ok(format!(
            "reported only: final-window y = {:.6}",
            out.final_window_y
        )),
        Expectation::FinalY { target, tol } => {
            if (out.final_window_y - target).abs() <= tol {
                Ok(format!("y -> {:.6} (target {target:.6})", out.final_window_y))
            } else {
                Err(format!(
                    "final-window y = {:.6}, expected {target:.6} +/- {tol}",
                    out.final_window_y
                ))
            }
        }
        Expectation::Bistable { endemic, tol } => {
            let y = out.final_window_y;
            if (y - endemic).abs() <= tol || y < 0.005 {
                Ok(format!("y -> {y:.6} (endemic {endemic:.6} or infection-free)"))
            } else {
                Err(format!(
                    "final-window y = {y:.6} matches neither {endemic:.6} nor the infection-free limit"
                ))
            }
        }
        Expectation::Extinction { below } => {
            let y = *out.final_state.get(out.y_index).unwrap_or(&out.final_window_y);
            if y < below {
                Ok(format!("y -> {y:.2e} (extinct)"))
            } else {
                Err(format!("final y = {y:.6}, expected below {below}"))
            }
        }
        Expectation::Transitions(n) => {
            if out.transitions == n {
                Ok(format!("{n} transition points"))
            } else {
                Err(format!("{} transition points, expected {n}", out.transitions))
            }
        }
    }
}

/// Writes a document via a temp file and rename, so partial output is never
/// observed at the target path.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .with_context(|| format!("creating output directory {}", parent.display()))?;
        }
    }
    let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
    fs::write(&tmp, contents).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

/// Executes every run of a preset (optionally across `jobs` worker threads),
/// writes the artifacts, prints per-run summaries, and returns an error if
/// any gated expectation failed.
pub fn run_preset(preset: &Preset, out_dir: &Path, jobs: usize) -> Result<()> {
    let jobs = jobs.max(1);
    let runs = &preset.runs;
    let mut results: Vec<Option<Result<ExecOutput>>> = Vec::new();
    results.resize_with(runs.len(), || None);

    std::thread::scope(|scope| {
        for (batch_idx, batch) in runs.chunks(jobs).enumerate() {
            let handles: Vec<_> = batch
                .iter()
                .map(|run| scope.spawn(move || execute_preset_run(run)))
                .collect();
            for (i, handle) in handles.into_iter().enumerate() {
                results[batch_idx * jobs + i] = Some(handle.join().expect("worker panicked"));
            }
        }
    });

    let mut failures = Vec::new();
    for (run, result) in runs.iter().zip(results) {
        let out = result.expect("all runs executed")?;
        let path = out_dir.join(format!("{}_{}.csv", preset.name, run.label));
        write_atomic(&path, &out.document)?;
        let config_path = out_dir.join(format!("{}_{}.config", preset.name, run.label));
        write_atomic(&config_path, &crate::config::render(&run.config))?;
        println!("== {} / {} -> {}", preset.name, run.label, path.display());
        print!("{}", summary(&run.config, &out, run.provenance));
        match check(&out, run.expected) {
            Ok(note) => println!("check: ok, {note}\n"),
            Err(why) => {
                println!("check: FAILED, {why}\n");
                failures.push(format!("{}: {why}", run.label));
            }
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        bail!("preset {} failed {} check(s): {}", preset.name, failures.len(), failures.join("; "))
    }
}

fn execute_preset_run(run: &PresetRun) -> Result<ExecOutput> {
    if run.config.sweep.is_some() {
        execute_sweep(&run.config)
    } else {
        execute(&run.config)
    }
}
