//! Subcommand implementations shared by the binary and the tests.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;

use tmems_core::field::{DirectionGrid, FieldEngine, HarmonicPattern};
use tmems_core::isac::{
    derive_seed, localization_sweep, measure_bs_powers, synthesize_best, xi_sweep, Codebook, Scenario, SweepAxis,
    SweepResult,
};
use tmems_core::model::{ControlMode, PulseSchedule};
use tmems_core::synthesis::reference_power;

use crate::config::RunConfig;
use crate::output::{
    export_pattern, history_csv, read_schedule_csv, schedule_csv, sweep_csv, to_json, write_text, PatternTable,
};

#[derive(Debug, Parser)]
#[command(name = "tmems", version, about = "Time-modulated skin Σ/Δ synthesis and localization")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Run configuration (TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Overrides the output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Evaluation grid samples per axis.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Overrides the control mode.
    #[arg(long, global = true)]
    pub mode: Option<ControlMode>,
    /// Schedule file for `evaluate` and `export`.
    #[arg(long, global = true)]
    pub schedule: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Designs a schedule and writes it with its patterns and history.
    Synthesize,
    /// Evaluates a given schedule: patterns, Φ and ξ.
    Evaluate,
    /// ξ versus the BS angle, one design per angle.
    SweepBs,
    /// ξ versus the user angle, one design per angle.
    SweepUser,
    /// Estimates the user angle from candidate designs.
    Localize,
    /// Writes the patterns of a given schedule only.
    Export,
}

/// Peak of one harmonic on the evaluation grid.
#[derive(Debug, Clone, Serialize)]
pub struct PeakSummary {
    pub u: f64,
    pub v: f64,
    pub power_db: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BsSummary {
    pub u: f64,
    pub v: f64,
    pub xi: f64,
    pub sum_power: f64,
    pub difference_power: f64,
    pub floored: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub command: &'static str,
    pub seed: u64,
    pub cost: Option<f64>,
    pub iterations: Option<usize>,
    pub evaluations: Option<usize>,
    pub bs: Option<BsSummary>,
    pub peak_h0: Option<PeakSummary>,
    pub peak_h1: Option<PeakSummary>,
    pub estimate_deg: Option<f64>,
    pub wall_time_s: f64,
    pub artifacts: Vec<String>,
    pub config: RunConfig,
}

/// Loads the configuration and applies the command-line overrides.
pub fn resolve_config(cli: &Cli) -> Result<RunConfig> {
    let path = cli.config.as_deref().context("--config is required")?;
    let mut config = RunConfig::load(path)?;
    if let Some(s) = cli.seed {
        config.seed = s;
    }
    if let Some(m) = cli.mode {
        config.mode = m.name().to_string();
    }
    if let Some(g) = cli.grid {
        if g < 2 {
            bail!("--grid needs at least 2 samples per axis");
        }
        config.grids.evaluation = g;
    }
    if let Some(o) = &cli.out {
        config.output.directory = o.display().to_string();
    }
    config.scenario().context("invalid configuration after overrides")?;
    Ok(config)
}

/// Parses and runs one command line; the entry point of the binary.
pub fn run(cli: &Cli) -> Result<RunSummary> {
    if let Some(n) = cli.jobs {
        if n == 0 {
            bail!("--jobs must be at least 1");
        }
        // A pool installed by an earlier call in the same process stays.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let config = resolve_config(cli)?;
    let start = Instant::now();
    let mut summary = match cli.command {
        Command::Synthesize => synthesize(&config)?,
        Command::Evaluate => evaluate(&config, cli.schedule.as_deref(), false)?,
        Command::Export => evaluate(&config, cli.schedule.as_deref(), true)?,
        Command::SweepBs => sweep(&config, SweepAxis::BaseStation)?,
        Command::SweepUser => sweep(&config, SweepAxis::Incidence)?,
        Command::Localize => localize(&config)?,
    };
    summary.wall_time_s = start.elapsed().as_secs_f64();
    if cli.command != Command::Export {
        let dir = out_dir(&config);
        write_text(&dir.join("summary.json"), &to_json(&summary)?)?;
        summary.artifacts.push("summary.json".into());
    }
    Ok(summary)
}

fn out_dir(config: &RunConfig) -> PathBuf {
    PathBuf::from(&config.output.directory)
}

fn empty_summary(command: &'static str, config: &RunConfig) -> RunSummary {
    RunSummary {
        command,
        seed: config.seed,
        cost: None,
        iterations: None,
        evaluations: None,
        bs: None,
        peak_h0: None,
        peak_h1: None,
        estimate_deg: None,
        wall_time_s: 0.0,
        artifacts: Vec::new(),
        config: config.clone(),
    }
}

/// Restart seeds of a single design: the configured seed first.
pub fn synthesis_seeds(seed: u64, restarts: usize) -> Vec<u64> {
    (0..restarts.max(1) as u64)
        .map(|r| if r == 0 { seed } else { derive_seed(seed, r) })
        .collect()
}

fn synthesize(config: &RunConfig) -> Result<RunSummary> {
    let scenario = config.scenario()?;
    let s = synthesize_best(&scenario, &config.pso_config(), &synthesis_seeds(config.seed, config.pso.restarts))?;
    let dir = out_dir(config);
    let mut summary = empty_summary("synthesize", config);
    write_text(&dir.join("schedule.csv"), &schedule_csv(&s.schedule, &config.mode))?;
    write_text(&dir.join("history.csv"), &history_csv(&s.history))?;
    summary.artifacts.extend(["schedule.csv".to_string(), "history.csv".to_string()]);
    summary.cost = Some(s.cost);
    summary.iterations = Some(s.iterations);
    summary.evaluations = Some(s.evaluations);
    write_patterns(config, &scenario, &s.schedule, &mut summary)?;
    summary.bs = Some(bs_summary(&scenario, &s.schedule)?);
    Ok(summary)
}

fn evaluate(config: &RunConfig, schedule_file: Option<&Path>, export_only: bool) -> Result<RunSummary> {
    let scenario = config.scenario()?;
    let g = &scenario.geometry;
    let schedule = match (schedule_file, config.schedule_pulses()) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            read_schedule_csv(&text, g.rows(), g.cols(), config.period_s)
                .with_context(|| format!("invalid schedule file {}", path.display()))?
        }
        (None, Some(free)) => {
            let mode = config.control_mode();
            mode.expand(&free, g.rows(), g.cols(), config.period_s)?
        }
        (None, None) => bail!("no schedule: pass --schedule FILE or add a [schedule] block"),
    };
    let mut summary = empty_summary(if export_only { "export" } else { "evaluate" }, config);
    write_patterns(config, &scenario, &schedule, &mut summary)?;
    if !export_only {
        summary.cost = Some(scenario.cost_context()?.cost(&schedule)?);
        summary.bs = Some(bs_summary(&scenario, &schedule)?);
    }
    Ok(summary)
}

fn sweep_angles(config: &RunConfig) -> Result<Vec<f64>> {
    let s = config.sweep.as_ref().context("missing [sweep] block")?;
    let n = ((s.stop_deg - s.start_deg) / s.step_deg + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|i| s.start_deg + s.step_deg * i as f64).collect())
}

fn sweep(config: &RunConfig, axis: SweepAxis) -> Result<RunSummary> {
    let scenario = config.scenario()?;
    let angles = sweep_angles(config)?;
    let result = xi_sweep(&scenario, axis, &angles, &config.sweep_settings())?;
    let (command, column) = match axis {
        SweepAxis::BaseStation => ("sweep-bs", "theta_refl"),
        SweepAxis::Incidence => ("sweep-user", "theta_inc"),
    };
    let mut summary = empty_summary(command, config);
    write_sweep(config, &result, column, "xi_curve", &mut summary)?;
    fail_on_sweep_errors(&result)?;
    Ok(summary)
}

fn localize(config: &RunConfig) -> Result<RunSummary> {
    let scenario = config.scenario()?;
    let loc = config.localize.as_ref().context("missing [localize] block")?;
    let settings = config.sweep_settings();
    let mut book = match &loc.codebook {
        Some(path) => Some(open_codebook(Path::new(path), &scenario, config)?),
        None => None,
    };
    let result = localization_sweep(&scenario, &loc.candidates_deg, &settings, book.as_mut())?;
    if let (Some(path), Some(book)) = (&loc.codebook, &book) {
        book.save(Path::new(path))?;
    }
    let mut summary = empty_summary("localize", config);
    summary.estimate_deg = result.estimate_deg;
    write_sweep(config, &result, "theta_candidate", "localization", &mut summary)?;
    fail_on_sweep_errors(&result)?;
    Ok(summary)
}

fn open_codebook(path: &Path, scenario: &Scenario<f64>, config: &RunConfig) -> Result<Codebook<f64>> {
    let pso = config.pso_config();
    if path.exists() {
        Codebook::load(path, scenario, &pso, config.pso.restarts, config.seed)
            .with_context(|| format!("cannot use codebook {}", path.display()))
    } else {
        Ok(Codebook::new(scenario, &pso, config.pso.restarts, config.seed)?)
    }
}

fn fail_on_sweep_errors(result: &SweepResult<f64>) -> Result<()> {
    if let Some((a, why)) = result.failures.first() {
        bail!("{} of the sweep angles failed; first at {a} deg: {why}", result.failures.len());
    }
    Ok(())
}

fn write_sweep(
    config: &RunConfig,
    result: &SweepResult<f64>,
    column: &str,
    stem: &str,
    summary: &mut RunSummary,
) -> Result<()> {
    #[derive(Serialize)]
    struct Point {
        angle_deg: f64,
        xi: f64,
        sum_power: f64,
        difference_power: f64,
        floored: bool,
        cost: f64,
    }
    #[derive(Serialize)]
    struct Doc {
        points: Vec<Point>,
        xi_min: Option<f64>,
        xi_max: Option<f64>,
        estimate_deg: Option<f64>,
        failures: Vec<(f64, String)>,
    }
    let dir = out_dir(config);
    for f in &config.output.formats {
        let name = format!("{stem}.{f}");
        let text = if f == "csv" {
            sweep_csv(result, column)
        } else {
            let xs = result.points.iter().map(|p| p.xi);
            to_json(&Doc {
                points: result
                    .points
                    .iter()
                    .map(|p| Point {
                        angle_deg: p.angle_deg,
                        xi: p.xi,
                        sum_power: p.sum_power,
                        difference_power: p.difference_power,
                        floored: p.floored,
                        cost: p.cost,
                    })
                    .collect(),
                xi_min: xs.clone().reduce(f64::min),
                xi_max: xs.reduce(f64::max),
                estimate_deg: result.estimate_deg,
                failures: result.failures.clone(),
            })?
        };
        write_text(&dir.join(&name), &text)?;
        summary.artifacts.push(name);
    }
    Ok(())
}

/// Σ and Δ patterns of `schedule` on the evaluation grid.
pub fn evaluation_patterns(
    config: &RunConfig,
    scenario: &Scenario<f64>,
    schedule: &PulseSchedule<f64>,
) -> Result<[HarmonicPattern<f64>; 2]> {
    let grid = DirectionGrid::square(config.grids.evaluation)?;
    let engine = FieldEngine::new(&scenario.geometry, &scenario.incidence, &grid);
    Ok([
        engine.harmonic_far_field(schedule, &scenario.states, 0)?,
        engine.harmonic_far_field(schedule, &scenario.states, 1)?,
    ])
}

fn write_patterns(
    config: &RunConfig,
    scenario: &Scenario<f64>,
    schedule: &PulseSchedule<f64>,
    summary: &mut RunSummary,
) -> Result<()> {
    let r0 = reference_power(&scenario.geometry, scenario.incidence.amplitude());
    let dir = out_dir(config);
    let patterns = evaluation_patterns(config, scenario, schedule)?;
    for (h, pattern) in patterns.iter().enumerate() {
        let table = PatternTable::new(pattern, r0);
        summary.artifacts.extend(export_pattern(&dir, &table, &config.output.formats)?);
        let peak = pattern.peak().map(|(i, p)| {
            let (u, v) = pattern.grid().coords(i);
            PeakSummary {
                u,
                v,
                power_db: tmems_core::scalar::to_db(p, r0),
            }
        });
        if h == 0 {
            summary.peak_h0 = peak;
        } else {
            summary.peak_h1 = peak;
        }
    }
    Ok(())
}

fn bs_summary(scenario: &Scenario<f64>, schedule: &PulseSchedule<f64>) -> Result<BsSummary> {
    let (u, v) = scenario.bs_direction();
    let m = measure_bs_powers(schedule, scenario)?;
    Ok(BsSummary {
        u,
        v,
        xi: m.xi,
        sum_power: m.sum_power,
        difference_power: m.difference_power,
        floored: m.floored,
    })
}
