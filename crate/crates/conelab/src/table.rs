//! The verdict table: every observable scanned over the grid, reduced to
//! a leakage ratio, judged against its expected classification, and
//! rendered as fixed-width text.

use anyhow::Result;
use conelab_core::lab::{
    density_decay_fit, expected_verdict, leakage_from_values, GridSpec, Observable, TableRow,
    Verdict, OBSERVABLES,
};
use conelab_core::QuadratureSpec;
use std::fmt::Write as _;

use crate::scan::eval_grid;

/// Build the classification table with the grid evaluation parallelized.
/// Row content is identical to the sequential table in the core crate;
/// only the evaluation order differs, and the reduction is order-free.
pub fn parallel_table(
    grid: &GridSpec,
    spec: &QuadratureSpec,
    threshold: f64,
) -> Result<Vec<TableRow>> {
    OBSERVABLES
        .iter()
        .map(|&obs| {
            let values = eval_grid(obs, grid, spec)?;
            let report = leakage_from_values(obs, grid, &values, threshold);
            Ok(TableRow {
                observable: obs,
                report,
                has_vacuum_part: obs.has_vacuum_part(),
                expected: expected_verdict(obs),
                fit: density_decay_fit(obs, grid, spec)?,
            })
        })
        .collect()
}

/// Source-driven observables are identically zero at g = 0, which makes
/// their causal verdicts vacuous rather than informative.
pub fn is_source_driven(obs: Observable) -> bool {
    !matches!(
        obs,
        Observable::CommutatorField | Observable::CommutatorNw | Observable::CommutatorGlauber
    )
}

/// The rows whose verdicts count for the exit code: all of them normally,
/// only the commutator rows when the coupling is switched off.
pub fn mismatches(rows: &[TableRow], g: f64) -> Vec<&TableRow> {
    rows.iter()
        .filter(|row| g != 0.0 || !is_source_driven(row.observable))
        .filter(|row| !row.matches_expectation())
        .collect()
}

pub fn render_table(rows: &[TableRow], g: f64) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<20} {:>10} {:>10} {:>10} {:<11} {:<11} {:>8} decay",
        "observable", "space_max", "time_max", "ratio", "verdict", "expected", "vacuum"
    );
    for row in rows {
        let verdict = if g == 0.0 && is_source_driven(row.observable) {
            "vacuous"
        } else {
            row.report.verdict.as_str()
        };
        let decay = match &row.fit {
            Some(fit) => format!("{:.3} +- {:.3}", fit.exponent, fit.stderr),
            None => "-".to_string(),
        };
        let _ = writeln!(
            out,
            "{:<20} {:>10.3e} {:>10.3e} {:>10.3e} {:<11} {:<11} {:>8} {}",
            row.observable.as_str(),
            row.report.spacelike_max,
            row.report.timelike_max,
            row.report.leakage_ratio,
            verdict,
            row.expected.as_str(),
            if row.has_vacuum_part { "yes" } else { "no" },
            decay
        );
    }
    out
}

/// One status line per mismatching row, empty when everything matches.
pub fn render_mismatches(rows: &[&TableRow]) -> String {
    let mut out = String::new();
    for row in rows {
        let _ = writeln!(
            out,
            "MISMATCH {}: expected {}, measured {} (ratio {:.3e})",
            row.observable.as_str(),
            row.expected.as_str(),
            row.report.verdict.as_str(),
            row.report.leakage_ratio
        );
    }
    out
}

/// True when the grid's verdicts reproduce the expected classification.
pub fn verdicts_match(rows: &[TableRow], g: f64) -> bool {
    mismatches(rows, g).is_empty()
}

pub fn expected_split() -> (Vec<&'static str>, Vec<&'static str>) {
    let mut causal = Vec::new();
    let mut non_causal = Vec::new();
    for obs in OBSERVABLES {
        match expected_verdict(obs) {
            Verdict::Causal => causal.push(obs.as_str()),
            Verdict::NonCausal => non_causal.push(obs.as_str()),
        }
    }
    (causal, non_causal)
}
