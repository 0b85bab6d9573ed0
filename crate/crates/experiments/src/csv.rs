//! CSV output. Files are built in memory and written in one call so a
//! failed run never leaves a partial file that looks complete.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use votegame_core::simulator::{OutcomeStat, SweepResult, TrialRecord};

use crate::error::{ExperimentError, Result};

pub const SWEEP_HEADER: &str =
    "parameter_value,pct_correct,ci_correct,pct_wrong,ci_wrong,pct_undecided,ci_undecided,iterations,seed";

/// Formats `x` with six significant digits, `%g` style: fixed notation for
/// exponents in -4..6, scientific otherwise, trailing zeros trimmed.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    // let the formatter do the rounding, then read back the exponent
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Renders sweep rows under [`SWEEP_HEADER`].
pub fn render_sweep(results: &[SweepResult]) -> String {
    let mut out = String::with_capacity(64 * (results.len() + 1));
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for r in results {
        let stat = |s: &OutcomeStat| format!("{},{}", format_sig6(s.pct), format_sig6(s.ci_half_width));
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            format_sig6(r.parameter_value),
            stat(&r.correct),
            stat(&r.wrong),
            stat(&r.undecided),
            r.iterations,
            r.seed
        );
    }
    out
}

pub fn emit_csv(results: &[SweepResult], path: &Path) -> Result<()> {
    write_file(path, &render_sweep(results))
}

/// Per-game records of a single run.
pub fn render_trials(records: &[TrialRecord]) -> String {
    let mut out = String::from("iteration,target,verdict,stages_run,votes_correct,votes_wrong\n");
    for r in records {
        let o = &r.outcome;
        let target = match o.target {
            votegame_core::simulator::NodeKind::Benign => "benign",
            votegame_core::simulator::NodeKind::Malicious => "malicious",
        };
        let verdict = match o.verdict {
            votegame_core::simulator::Verdict::Correct => "correct",
            votegame_core::simulator::Verdict::Wrong => "wrong",
            votegame_core::simulator::Verdict::Undecided => "undecided",
        };
        let _ = writeln!(
            out,
            "{},{target},{verdict},{},{},{}",
            r.iteration, o.stages_run, o.votes_correct, o.votes_wrong
        );
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| ExperimentError::Io { path: path.to_path_buf(), source })
}

/// Reads a sweep CSV back. Values carry the six digits they were written with.
pub fn parse_sweep(text: &str) -> Result<Vec<SweepResult>> {
    let mut lines = text.lines();
    if lines.next() != Some(SWEEP_HEADER) {
        return Err(parse_error("missing or unexpected header"));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 9 {
                return Err(parse_error(format!("line {}: expected 9 fields", i + 2)));
            }
            let num = |j: usize| {
                fields[j]
                    .parse::<f64>()
                    .map_err(|e| parse_error(format!("line {}: {e}", i + 2)))
            };
            let int = |j: usize| {
                fields[j]
                    .parse::<u64>()
                    .map_err(|e| parse_error(format!("line {}: {e}", i + 2)))
            };
            Ok(SweepResult {
                parameter_value: num(0)?,
                correct: OutcomeStat { pct: num(1)?, ci_half_width: num(2)? },
                wrong: OutcomeStat { pct: num(3)?, ci_half_width: num(4)? },
                undecided: OutcomeStat { pct: num(5)?, ci_half_width: num(6)? },
                iterations: int(7)?,
                seed: int(8)?,
            })
        })
        .collect()
}

fn parse_error(message: impl Into<String>) -> ExperimentError {
    ExperimentError::Parse { path: None, message: message.into() }
}
