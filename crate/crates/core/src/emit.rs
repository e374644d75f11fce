//! CSV output for scan surfaces, slices and iteration traces.
//!
//! Numbers are written like C's `%.10g`.

use std::io::{self, Write};

use crate::filtering::MaximizationTrace;
use crate::scan::{ScanResult, SliceAxis};

/// Formats `x` the way `printf("%.10g", x)` does.
pub fn fmt_g10(x: f64) -> String {
    fmt_g(x, 10)
}

/// `%.{precision}g` formatting.
pub fn fmt_g(x: f64, precision: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.into();
    }
    let p = precision.max(1);
    // Round to p significant digits first; the exponent decides the style.
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Writes a scan as `theta1,theta2,concurrence`, or `theta,concurrence` for
/// a one-dimensional slice.
pub fn write_scan_csv<W: Write>(out: &mut W, result: &ScanResult) -> io::Result<()> {
    match result.slice {
        None => {
            writeln!(out, "theta1,theta2,concurrence")?;
            for p in &result.grid {
                writeln!(
                    out,
                    "{},{},{}",
                    fmt_g10(p.theta1),
                    fmt_g10(p.theta2),
                    fmt_g10(p.concurrence)
                )?;
            }
        }
        Some(axis) => {
            writeln!(out, "theta,concurrence")?;
            for p in &result.grid {
                let theta = match axis {
                    SliceAxis::Theta1 => p.theta1,
                    SliceAxis::Theta2 => p.theta2,
                };
                writeln!(out, "{},{}", fmt_g10(theta), fmt_g10(p.concurrence))?;
            }
        }
    }
    Ok(())
}

/// Writes `iteration,side,concurrence,det_marginal`. Iteration 0 is the
/// input state and leaves `side` and `det_marginal` empty. Joint steps on
/// both qubits have side `both` and no `det_marginal`.
pub fn write_trace_csv<W: Write>(out: &mut W, trace: &MaximizationTrace) -> io::Result<()> {
    writeln!(out, "iteration,side,concurrence,det_marginal")?;
    writeln!(out, "0,,{},", fmt_g10(trace.initial_concurrence))?;
    for s in &trace.steps {
        let side = s.side.map_or_else(|| "both".to_string(), |q| q.to_string());
        let det = s.det_marginal_before.map(fmt_g10).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{}",
            s.iteration,
            side,
            fmt_g10(s.concurrence),
            det
        )?;
    }
    Ok(())
}
