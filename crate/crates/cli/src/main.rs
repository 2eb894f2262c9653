//! Command-line front end for the controllability quality toolkit.
//!
//! Subcommands: `analyze` (full quality report), `minenergy` (optimal
//! transfer control and cost), `sweep` (measures across a horizon range),
//! `select` (greedy actuator selection), and `frame` (generated-frame
//! summary). Output is JSON on stdout by default; `--csv` switches sweeps
//! and control tables to comma-separated text.
//!
//! Exit codes: 0 success, 1 error, 2 completed-but-degenerate (the system
//! is not controllable at the analyzed horizon).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use ctrlqual::frames::{build_basis, frame_bounds, frame_operator, generate_frame, nfp};
use ctrlqual::gramian::finite_horizon_gramian;
use ctrlqual::moq::{full_report_with, horizon_sweep_with, select_actuators};
use ctrlqual::system::{min_energy_control, simulate};
use ctrlqual::{defaults, Horizon, TimeMode};

use ctrlqual_cli::io::{
    load_candidates, load_matrix, parse_horizon_flag, parse_vector_flag, SystemFile,
};
use ctrlqual_cli::CliError;

/// Comma-separated vector argument, e.g. `--target 1,0`.
#[derive(Debug, Clone)]
struct VectorArg(Vec<f64>);

impl std::str::FromStr for VectorArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_vector_flag(s).map(VectorArg)
    }
}

#[derive(Parser)]
#[command(
    name = "ctrlqual",
    about = "Quantify how controllable an LTI system is",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Relative tolerance for numerical rank and controllability decisions.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Seed for randomized diagnostics (reserved; the current subcommands
    /// are deterministic).
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Args)]
struct HorizonOverride {
    /// Override the horizon from the system file (positive number or "inf").
    #[arg(long, value_parser = parse_horizon_flag)]
    horizon: Option<Horizon>,
}

#[derive(Subcommand)]
enum Command {
    /// Full quality report: all four measures, spectrum, rank facts.
    Analyze {
        /// System file (JSON).
        input: PathBuf,
        #[command(flatten)]
        horizon: HorizonOverride,
    },
    /// Minimum-energy control steering the origin to a target state.
    Minenergy {
        /// System file (JSON).
        input: PathBuf,
        /// Target state, comma-separated (e.g. "1,0").
        #[arg(long)]
        target: VectorArg,
        #[command(flatten)]
        horizon: HorizonOverride,
        /// Number of time samples in the emitted control table.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Basis degrees per input channel for the control representation.
        #[arg(long, default_value_t = defaults::BASIS_DEGREES)]
        degree: usize,
        /// Emit the control table as CSV instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Quality measures across a range of horizons.
    Sweep {
        /// System file (JSON).
        input: PathBuf,
        /// Smallest horizon.
        #[arg(long, allow_negative_numbers = true)]
        t_min: f64,
        /// Largest horizon.
        #[arg(long, allow_negative_numbers = true)]
        t_max: f64,
        /// Number of horizons, evenly spaced over [t-min, t-max].
        #[arg(long, default_value_t = 10)]
        steps: usize,
        /// Emit rows as CSV instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Greedy actuator selection from candidate input columns.
    Select {
        /// State matrix file: a JSON 2-D array.
        a_matrix: PathBuf,
        /// Candidate file: a JSON 2-D array, one candidate column per row.
        candidates: PathBuf,
        /// How many candidates to pick.
        #[arg(long)]
        k: usize,
        /// Horizon for the per-candidate Gramians (number or "inf").
        #[arg(long, value_parser = parse_horizon_flag)]
        horizon: Horizon,
    },
    /// Summary of the frame the system generates on its state space.
    Frame {
        /// System file (JSON).
        input: PathBuf,
        #[command(flatten)]
        horizon: HorizonOverride,
        /// Basis degrees per input channel.
        #[arg(long, default_value_t = defaults::BASIS_DEGREES)]
        degree: usize,
    },
}

fn main() -> ExitCode {
    // Map usage errors to exit code 1; code 2 is reserved for analyses that
    // complete on an uncontrollable system.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(1);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(0);
        }
    };
    let rank_tol = cli.tol.unwrap_or(defaults::RANK_REL_TOL);
    match run(cli.command, rank_tol) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command, rank_tol: f64) -> Result<u8, CliError> {
    match command {
        Command::Analyze { input, horizon } => cmd_analyze(&input, horizon, rank_tol),
        Command::Minenergy {
            input,
            target,
            horizon,
            samples,
            degree,
            csv,
        } => cmd_minenergy(&input, &target.0, horizon, samples, degree, csv),
        Command::Sweep {
            input,
            t_min,
            t_max,
            steps,
            csv,
        } => cmd_sweep(&input, t_min, t_max, steps, csv, rank_tol),
        Command::Select {
            a_matrix,
            candidates,
            k,
            horizon,
        } => cmd_select(&a_matrix, &candidates, k, horizon),
        Command::Frame {
            input,
            horizon,
            degree,
        } => cmd_frame(&input, horizon, degree, rank_tol),
    }
}

fn resolve_horizon(declared: Horizon, flag: HorizonOverride) -> Horizon {
    flag.horizon.unwrap_or(declared)
}

fn horizon_json(h: Horizon) -> serde_json::Value {
    match h {
        Horizon::Finite(t) => json!(t),
        Horizon::Infinite => json!("inf"),
    }
}

fn require_finite(h: Horizon, what: &str) -> Result<f64, CliError> {
    match h {
        Horizon::Finite(t) => Ok(t),
        Horizon::Infinite => Err(CliError::new(format!("{what} needs a finite horizon"))),
    }
}

fn emit(doc: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(doc).expect("report is serializable")
    );
}

fn cmd_analyze(input: &Path, flag: HorizonOverride, rank_tol: f64) -> Result<u8, CliError> {
    let (system, declared) = SystemFile::load(input)?.into_parts()?;
    let horizon = resolve_horizon(declared, flag);
    let report = full_report_with(&system, horizon, rank_tol)?;
    let degenerate = report.gramian_rank < system.state_dim();

    emit(&json!({
        "system": {
            "state_dim": system.state_dim(),
            "input_dim": system.input_dim(),
            "time_mode": mode_name(system.time_mode()),
        },
        "horizon": horizon_json(horizon),
        "report": report,
    }));
    Ok(if degenerate { 2 } else { 0 })
}

fn cmd_minenergy(
    input: &Path,
    target: &[f64],
    flag: HorizonOverride,
    samples: usize,
    degree: usize,
    csv: bool,
) -> Result<u8, CliError> {
    let (system, declared) = SystemFile::load(input)?.into_parts()?;
    let horizon = resolve_horizon(declared, flag);
    let t = require_finite(horizon, "minimum-energy synthesis")?;
    let target = nalgebra::DVector::from_column_slice(target);
    if samples < 2 {
        return Err(CliError::new("--samples must be at least 2"));
    }

    let basis = build_basis(t, system.input_dim(), degree)?;
    let (control, cost) = min_energy_control(&system, t, &target, &basis)?;

    // Verification: forward-integrate the synthesized control and report
    // the gap to the requested target.
    let x0 = nalgebra::DVector::zeros(system.state_dim());
    let trajectory = simulate(&system, &control, &x0, 2000)?;
    let endpoint_error = (trajectory.final_state() - &target).norm();

    let times: Vec<f64> = (0..samples)
        .map(|i| t * i as f64 / (samples - 1) as f64)
        .collect();
    let values: Vec<nalgebra::DVector<f64>> = times.iter().map(|s| control.eval(*s)).collect();

    if csv {
        println!("# cost={cost}");
        println!("# endpoint_error={endpoint_error}");
        let header: Vec<String> = (1..=system.input_dim()).map(|c| format!("u{c}")).collect();
        println!("t,{}", header.join(","));
        for (s, u) in times.iter().zip(&values) {
            let row: Vec<String> = u.iter().map(|x| x.to_string()).collect();
            println!("{s},{}", row.join(","));
        }
    } else {
        let rows: Vec<serde_json::Value> = times
            .iter()
            .zip(&values)
            .map(|(s, u)| json!({ "t": s, "u": u.as_slice() }))
            .collect();
        emit(&json!({
            "cost": cost,
            "energy": control.energy(),
            "endpoint_error": endpoint_error,
            "samples": rows,
        }));
    }
    Ok(0)
}

fn cmd_sweep(
    input: &Path,
    t_min: f64,
    t_max: f64,
    steps: usize,
    csv: bool,
    rank_tol: f64,
) -> Result<u8, CliError> {
    let (system, _) = SystemFile::load(input)?.into_parts()?;
    if !(t_min.is_finite() && t_min > 0.0 && t_max.is_finite() && t_max >= t_min) {
        return Err(CliError::new(format!(
            "invalid horizon range [{t_min}, {t_max}]"
        )));
    }
    if steps == 0 {
        return Err(CliError::new("--steps must be at least 1"));
    }
    let horizons: Vec<f64> = if steps == 1 {
        vec![t_min]
    } else {
        (0..steps)
            .map(|i| t_min + (t_max - t_min) * i as f64 / (steps - 1) as f64)
            .collect()
    };

    let rows = horizon_sweep_with(&system, &horizons, rank_tol)?;
    let degenerate = rows.iter().any(|r| r.trace_inverse.is_none());

    if csv {
        println!("horizon,eta,trace_inverse,min_eig_inverse,determinant,gramian_rank");
        for r in &rows {
            let ti = r
                .trace_inverse
                .map_or_else(|| "undefined".to_string(), |v| v.to_string());
            let mi = r
                .min_eig_inverse
                .map_or_else(|| "undefined".to_string(), |v| v.to_string());
            println!(
                "{},{},{ti},{mi},{},{}",
                r.horizon, r.eta, r.determinant, r.gramian_rank
            );
        }
    } else {
        emit(&json!({ "rows": rows }));
    }
    Ok(if degenerate { 2 } else { 0 })
}

fn cmd_select(
    a_matrix: &Path,
    candidates: &Path,
    k: usize,
    horizon: Horizon,
) -> Result<u8, CliError> {
    let a = load_matrix(a_matrix, "A")?;
    let cand = load_candidates(candidates)?;
    if k == 0 {
        emit(&json!({ "horizon": horizon_json(horizon), "selection": [] }));
        return Ok(0);
    }
    let steps = select_actuators(&a, &cand, k, horizon)?;
    emit(&json!({
        "horizon": horizon_json(horizon),
        "selection": steps,
    }));
    Ok(0)
}

fn cmd_frame(
    input: &Path,
    flag: HorizonOverride,
    degree: usize,
    rank_tol: f64,
) -> Result<u8, CliError> {
    let (system, declared) = SystemFile::load(input)?.into_parts()?;
    if system.time_mode() != TimeMode::Continuous {
        return Err(CliError::new(
            "frame inspection is defined for continuous systems",
        ));
    }
    let horizon = resolve_horizon(declared, flag);
    let t = require_finite(horizon, "frame generation")?;

    let basis = build_basis(t, system.input_dim(), degree)?;
    let frame = generate_frame(&system, t, &basis)?;
    let (lower, upper) = frame_bounds(&frame)?;
    let potential = nfp(&frame)?;

    let operator = frame_operator(&frame);
    let gramian = finite_horizon_gramian(&system, t)?;
    let gap = (&operator - gramian.matrix()).norm();
    let eta = operator.trace() / operator.iter().map(|x| x * x).sum::<f64>().sqrt();
    let n = system.state_dim();
    let is_frame = lower > rank_tol * upper.max(0.0);

    emit(&json!({
        "horizon": t,
        "basis_size": frame.len(),
        "frame_bounds": { "lower": lower, "upper": upper },
        "tightness_ratio": eta / (n as f64).sqrt(),
        "nfp": potential,
        "tail_bound": frame.tail_bound(),
        "gramian_gap": gap,
        "is_frame": is_frame,
    }));
    Ok(if is_frame { 0 } else { 2 })
}

fn mode_name(mode: TimeMode) -> &'static str {
    match mode {
        TimeMode::Continuous => "continuous",
        TimeMode::Discrete => "discrete",
    }
}
