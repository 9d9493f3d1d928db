//! Text table, CSV and JSON renderings of experiment results.
//!
//! CSV column order:
//! `axis_value, count_oo, count_ot, count_to, count_tt, empirical_a, empirical_b,
//! analytic_a, analytic_b, abs_err_a, abs_err_b, se_a, se_b, mean_draws, tie_breaks`.
//! A single `simulate` run writes one row with an empty `axis_value`.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::{EquilibriumGridReport, ExperimentReport, SweepTable};
use crate::equilibria::{Equilibrium, EquilibriumKind};

#[derive(Serialize)]
struct CsvRow {
    axis_value: Option<f64>,
    count_oo: u64,
    count_ot: u64,
    count_to: u64,
    count_tt: u64,
    empirical_a: f64,
    empirical_b: f64,
    analytic_a: f64,
    analytic_b: f64,
    abs_err_a: f64,
    abs_err_b: f64,
    se_a: f64,
    se_b: f64,
    mean_draws: f64,
    tie_breaks: u64,
}

impl CsvRow {
    fn new(axis_value: Option<f64>, r: &ExperimentReport) -> Self {
        Self {
            axis_value,
            count_oo: r.counts[0],
            count_ot: r.counts[1],
            count_to: r.counts[2],
            count_tt: r.counts[3],
            empirical_a: r.empirical.alice,
            empirical_b: r.empirical.bob,
            analytic_a: r.analytic.alice,
            analytic_b: r.analytic.bob,
            abs_err_a: r.abs_error.alice,
            abs_err_b: r.abs_error.bob,
            se_a: r.std_error.alice,
            se_b: r.std_error.bob,
            mean_draws: r.mean_draws,
            tie_breaks: r.tie_breaks,
        }
    }
}

pub fn write_csv<W: Write>(writer: W, rows: &[(Option<f64>, &ExperimentReport)]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for (value, report) in rows {
        w.serialize(CsvRow::new(*value, report))?;
    }
    w.flush()?;
    Ok(())
}

pub fn report_rows(report: &ExperimentReport) -> Vec<(Option<f64>, &ExperimentReport)> {
    vec![(None, report)]
}

pub fn sweep_rows(table: &SweepTable) -> Vec<(Option<f64>, &ExperimentReport)> {
    table.rows.iter().map(|r| (Some(r.value), &r.report)).collect()
}

/// Writes `value` as JSON or CSV depending on the file extension.
pub fn write_file<T: Serialize>(
    path: &Path,
    value: &T,
    csv_rows: &[(Option<f64>, &ExperimentReport)],
) -> std::io::Result<()> {
    let file = std::fs::File::create(path)?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => write_csv(file, csv_rows).map_err(std::io::Error::other),
        _ => {
            let mut file = std::io::BufWriter::new(file);
            serde_json::to_writer_pretty(&mut file, value)?;
            writeln!(file)?;
            file.flush()
        }
    }
}

const HEADER: &str = "value      OO       OT       TO       TT       emp_A     emp_B     ana_A     ana_B     err_A     err_B     se_A      se_B      draws   ties";

fn table_line(out: &mut String, label: &str, r: &ExperimentReport) {
    let _ = writeln!(
        out,
        "{label:<10} {:<8} {:<8} {:<8} {:<8} {:<9.5} {:<9.5} {:<9.5} {:<9.5} {:<9.2e} {:<9.2e} {:<9.2e} {:<9.2e} {:<7.3} {}",
        r.counts[0],
        r.counts[1],
        r.counts[2],
        r.counts[3],
        r.empirical.alice,
        r.empirical.bob,
        r.analytic.alice,
        r.analytic.bob,
        r.abs_error.alice,
        r.abs_error.bob,
        r.std_error.alice,
        r.std_error.bob,
        r.mean_draws,
        r.tie_breaks,
    );
}

pub fn report_table(r: &ExperimentReport) -> String {
    let c = &r.config;
    let mut out = format!(
        "backend={} alpha={} beta={} gamma={}{} a_sq={} p={} q={} trials={} seed={}\n{HEADER}\n",
        c.backend,
        c.payoffs.alpha(),
        c.payoffs.beta(),
        c.payoffs.gamma(),
        if c.payoffs.is_bos() { "" } else { " (not BoS)" },
        c.state.a_sq(),
        c.profile.p(),
        c.profile.q(),
        c.trials,
        c.seed,
    );
    table_line(&mut out, "-", r);
    out
}

pub fn sweep_table(t: &SweepTable) -> String {
    let mut out = format!("sweep over {}\n{HEADER}\n", t.axis);
    for row in &t.rows {
        table_line(&mut out, &format!("{}", row.value), &row.report);
    }
    out
}

fn span(lo: f64, hi: f64) -> String {
    if lo == hi {
        format!("{lo:.6}")
    } else {
        format!("[{lo:.6}, {hi:.6}]")
    }
}

pub fn equilibria_table(eqs: &[Equilibrium]) -> String {
    let mut out = String::from("kind       p                          q                          payoff_A   payoff_B\n");
    for e in eqs {
        let kind = match e.kind {
            EquilibriumKind::Pure => "pure",
            EquilibriumKind::Mixed => "mixed",
            EquilibriumKind::Component => "component",
        };
        let _ = writeln!(
            out,
            "{kind:<10} {:<26} {:<26} {:<10.6} {:<10.6}",
            span(e.p.lo, e.p.hi),
            span(e.q.lo, e.q.hi),
            e.payoffs.alice,
            e.payoffs.bob
        );
    }
    out
}

pub fn grid_summary(r: &EquilibriumGridReport) -> String {
    let points = r.points().count();
    let squares = r.cells.len() - points;
    let mut out = format!(
        "grid step {:.4}: {points} equilibrium grid points, {squares} squares containing an off-grid crossing\n",
        r.step
    );
    if r.cells.len() <= 12 {
        for c in &r.cells {
            let _ = writeln!(out, "  {:?} at ({:.4}, {:.4})", c.shape, c.p, c.q);
        }
    }
    let _ = writeln!(
        out,
        "closed form vs oracle: {}",
        if r.agrees() { "agree within one grid step".to_string() } else {
            format!("{} closed-form sets and {} cells unmatched", r.unmatched_closed_form.len(), r.unmatched_cells.len())
        }
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{run_experiment, ExperimentConfig};
    use crate::game::{EntangledState, PayoffMatrix, StrategyProfile};
    use crate::simulator::Backend;

    #[test]
    fn csv_header_and_order() {
        let cfg = ExperimentConfig {
            payoffs: PayoffMatrix::standard_bos(),
            state: EntangledState::product(),
            profile: StrategyProfile::new(1.0, 1.0).unwrap(),
            trials: 10,
            seed: 1,
            backend: Backend::Cards,
        };
        let r = run_experiment(&cfg).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &[(Some(0.5), &r)]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "axis_value,count_oo,count_ot,count_to,count_tt,empirical_a,empirical_b,analytic_a,analytic_b,abs_err_a,abs_err_b,se_a,se_b,mean_draws,tie_breaks"
        );
        assert_eq!(lines.next().unwrap(), "0.5,10,0,0,0,5.0,3.0,5.0,3.0,0.0,0.0,0.0,0.0,1.0,0");
    }
}
