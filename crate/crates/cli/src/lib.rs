//! The `entfilter` command-line tool.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 invalid state,
//! 3 separable input, 4 no convergence.

pub mod args;
pub mod report;

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use entfilter_core::concurrence::{concurrence, normalized_concurrence};
use entfilter_core::emit::{write_scan_csv, write_trace_csv};
use entfilter_core::filtering::{maximize, verify_final, IterationConfig, MaximizationTrace};
use entfilter_core::scan::{random_search, scan_refined, scan_theta, AngleRange, ScanConfig};
use entfilter_core::states::{named_state, state_from_json, state_to_json};
use entfilter_core::{DensityOperator, Error, Qubit};

pub use args::{Cli, Command};
use args::{ConcurrenceArgs, IterationArgs, MaximizeArgs, ScanArgs, SearchArgs, TraceArgs};
use report::{sha256_hex, ConcurrenceOutcome, MaximizeOutcome, ScanOutcome, SearchOutcome};
pub use report::{Outcome, RunReport};

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_INVALID_STATE: u8 = 2;
pub const EXIT_SEPARABLE: u8 = 3;
pub const EXIT_NOT_CONVERGED: u8 = 4;

/// A failed command: the process exit code and a message for stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Json(_) | Error::InvalidConfig(_) | Error::InvalidQubit(_) => EXIT_USAGE,
            Error::SeparableInput { .. } => EXIT_SEPARABLE,
            Error::NotConverged { .. } => EXIT_NOT_CONVERGED,
            Error::NotHermitian { .. }
            | Error::NotPositive { .. }
            | Error::NonFinite
            | Error::InvalidState(_)
            | Error::NotBalanceable { .. }
            | Error::FilteredToZero { .. } => EXIT_INVALID_STATE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::usage(format!("i/o error: {e}"))
    }
}

pub type CliResult<T> = std::result::Result<T, Failure>;

/// A state together with the digest recorded in reports.
pub struct LoadedState {
    pub state: DensityOperator,
    pub digest: String,
}

pub fn load_state(name_or_path: &str) -> CliResult<LoadedState> {
    if let Some(state) = named_state(name_or_path) {
        let digest = sha256_hex(state_to_json(&state).as_bytes());
        return Ok(LoadedState { state, digest });
    }
    let text = fs::read_to_string(name_or_path).map_err(|e| {
        Failure::usage(format!(
            "cannot read state `{name_or_path}`: {e} (not a file or built-in name)"
        ))
    })?;
    let state = state_from_json(&text)?;
    Ok(LoadedState {
        state,
        digest: sha256_hex(text.as_bytes()),
    })
}

/// Runs a parsed command. Primary output goes to `out` unless the command
/// was given an output path; notices go to `err`.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::Concurrence(a) => cmd_concurrence(a, out, err),
        Command::Maximize(a) => cmd_maximize(a, out),
        Command::Trace(a) => cmd_trace(a, out),
        Command::Scan(a) => cmd_scan(a, out, err),
        Command::Search(a) => cmd_search(a, out),
    }
}

fn emit(path: Option<&Path>, out: &mut dyn Write, bytes: &[u8]) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, bytes)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", p.display()))),
        None => Ok(out.write_all(bytes)?),
    }
}

fn cmd_concurrence(a: &ConcurrenceArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let input = load_state(&a.input.state)?;
    let c = normalized_concurrence(&input.state)?;
    let value = concurrence(input.state.normalized().op())?;
    let separable = c == 0.0;
    if separable {
        writeln!(err, "note: state is separable (concurrence 0)")?;
    }
    let report = RunReport::new(
        input.digest,
        "concurrence",
        Outcome::Concurrence(ConcurrenceOutcome {
            concurrence: c,
            xi: value.xi,
            weight: input.state.weight(),
            separable,
        }),
    );
    emit(a.out.as_deref(), out, report.to_json().as_bytes())
}

fn iteration_config(a: &IterationArgs) -> CliResult<IterationConfig> {
    let cfg = IterationConfig {
        start_side: Qubit::try_from(a.start_side)?,
        max_iter: a.max_iter,
        tol: a.tol,
        accelerate: !a.no_accelerate,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn trace_csv(trace: &MaximizationTrace) -> Vec<u8> {
    let mut buf = Vec::new();
    write_trace_csv(&mut buf, trace).expect("writing to memory");
    buf
}

fn cmd_maximize(a: &MaximizeArgs, out: &mut dyn Write) -> CliResult<()> {
    let input = load_state(&a.input.state)?;
    let trace = maximize(&input.state, &iteration_config(&a.iteration)?)?;
    if let Some(path) = &a.trace_csv {
        emit(Some(path), out, &trace_csv(&trace))?;
    }
    let (d1, d2) = verify_final(&trace.final_state);
    let report = RunReport::new(
        input.digest,
        "maximize",
        Outcome::Maximize(MaximizeOutcome {
            initial_concurrence: trace.initial_concurrence,
            final_concurrence: trace.final_concurrence(),
            iterations: trace.steps.len(),
            joint_steps: trace.steps.iter().filter(|s| s.side.is_none()).count(),
            q1: trace.q1.physical(),
            q2: trace.q2.physical(),
            success_probability: trace.success_probability,
            marginal_deviation: [d1, d2],
            singular_limit: trace.singular_limit,
        }),
    );
    emit(a.out.as_deref(), out, report.to_json().as_bytes())
}

fn cmd_trace(a: &TraceArgs, out: &mut dyn Write) -> CliResult<()> {
    let input = load_state(&a.input.state)?;
    let trace = maximize(&input.state, &iteration_config(&a.iteration)?)?;
    emit(a.out.as_deref(), out, &trace_csv(&trace))
}

fn parse_fix(s: &str) -> CliResult<(String, f64)> {
    let bad = || {
        Failure::usage(format!(
            "--fix expects theta1=<value> or theta2=<value>, got `{s}`"
        ))
    };
    let (name, value) = s.split_once('=').ok_or_else(bad)?;
    let name = name.trim();
    if name != "theta1" && name != "theta2" {
        return Err(bad());
    }
    let value: f64 = value.trim().parse().map_err(|_| bad())?;
    if !value.is_finite() {
        return Err(bad());
    }
    Ok((name.to_string(), value))
}

fn scan_config(a: &ScanArgs, state: DensityOperator) -> CliResult<ScanConfig> {
    let mut cfg = ScanConfig::with_defaults(state);
    cfg.theta1 = a.theta1.unwrap_or_else(AngleRange::default_axis);
    cfg.theta2 = a.theta2.unwrap_or_else(AngleRange::default_axis);
    cfg.a1 = a.a1;
    cfg.a2 = a.a2;
    let fixed = a.fix.as_deref().map(parse_fix).transpose()?;
    match (&a.slice, &fixed) {
        (Some(_), None) => return Err(Failure::usage("--slice needs --fix for the other angle")),
        (Some(varying), Some((pinned, _))) if varying == pinned => {
            return Err(Failure::usage(format!(
                "--slice {varying} cannot also be fixed"
            )))
        }
        _ => {}
    }
    match fixed {
        Some((name, v)) if name == "theta1" => cfg.fix_theta1 = Some(v),
        Some((_, v)) => cfg.fix_theta2 = Some(v),
        None => {}
    }
    cfg.validate()?;
    Ok(cfg)
}

fn cmd_scan(a: &ScanArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let input = load_state(&a.input.state)?;
    let cfg = scan_config(a, input.state)?;
    let (coarse, fine) = match a.refine {
        Some(steps) => {
            let (coarse, fine) = scan_refined(&cfg, steps)?;
            (coarse, Some(fine))
        }
        None => (scan_theta(&cfg)?, None),
    };
    let mut csv = Vec::new();
    write_scan_csv(&mut csv, &coarse)?;
    emit(a.out.as_deref(), out, &csv)?;

    let best = fine.as_ref().map_or(coarse.argmax, |f| f.argmax);
    writeln!(
        err,
        "argmax theta1={} theta2={} concurrence={}",
        best.theta1, best.theta2, best.concurrence
    )?;
    if let Some(path) = &a.report {
        let report = RunReport::new(
            input.digest,
            "scan",
            Outcome::Scan(ScanOutcome {
                a1: cfg.a1,
                a2: cfg.a2,
                points: coarse.grid.len(),
                slice: coarse.slice,
                argmax: coarse.argmax,
                refined_argmax: fine.map(|f| f.argmax),
            }),
        );
        emit(Some(path), out, report.to_json().as_bytes())?;
    }
    Ok(())
}

fn cmd_search(a: &SearchArgs, out: &mut dyn Write) -> CliResult<()> {
    let input = load_state(&a.input.state)?;
    let found = random_search(&input.state, a.samples, a.seed)?;
    let report = RunReport::new(
        input.digest,
        "search",
        Outcome::Search(SearchOutcome {
            samples: a.samples,
            seed: a.seed,
            best_concurrence: found.best_c,
            best_index: found.best_index,
            q1: found.best_ops.0,
            q2: found.best_ops.1,
        }),
    );
    emit(a.out.as_deref(), out, report.to_json().as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fix_parses_either_angle() {
        assert_eq!(
            parse_fix("theta1=0.9427").unwrap(),
            ("theta1".into(), 0.9427)
        );
        assert_eq!(parse_fix(" theta2 = -1 ").unwrap(), ("theta2".into(), -1.0));
        for bad in ["theta1", "theta3=1", "theta1=x", "theta2=inf", "=1"] {
            assert_eq!(parse_fix(bad).unwrap_err().code, EXIT_USAGE, "{bad}");
        }
    }

    #[test]
    fn error_codes() {
        let code = |e: Error| Failure::from(e).code;
        assert_eq!(
            code(Error::SeparableInput { concurrence: 0.0 }),
            EXIT_SEPARABLE
        );
        assert_eq!(
            code(Error::NotConverged {
                iterations: 1,
                deviation: 1.0
            }),
            EXIT_NOT_CONVERGED
        );
        assert_eq!(
            code(Error::NotPositive { eigenvalue: -1.0 }),
            EXIT_INVALID_STATE
        );
        assert_eq!(code(Error::InvalidConfig("x".into())), EXIT_USAGE);
        let json = serde_json::from_str::<f64>("x").unwrap_err();
        assert_eq!(code(Error::Json(json)), EXIT_USAGE);
    }

    #[test]
    fn unknown_state_name_is_usage_error() {
        let e = load_state("no-such-state").err().unwrap();
        assert_eq!(e.code, EXIT_USAGE);
    }
}
