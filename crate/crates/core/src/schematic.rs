//! Rendering of the signature grid.
//!
//! One row per (metric, domain) cell with the three shift verdicts as
//! arrows: ↗ up / wider, ↘ down / narrower, ≈ flat, plus `reduced` / `n/a`
//! for the tail column. Rows are ordered metric-major (Flesch-Kincaid,
//! Dependency, Depth, Yngve, Constituency, Sentence Length) with domains in
//! news, wiki, ELI5 order.

use crate::corpus::Domain;
use crate::distribution::{DistributionError, SignatureReport, TailVerdict};
use crate::syntax::MetricKind;
use std::collections::HashSet;

const METRIC_COLUMN_WIDTH: usize = 17;
const DOMAIN_COLUMN_WIDTH: usize = 8;

fn metric_rank(metric: MetricKind) -> usize {
    match metric {
        MetricKind::FkGrade => 0,
        MetricKind::DepTags => 1,
        MetricKind::Depth => 2,
        MetricKind::Yngve => 3,
        MetricKind::ConstLabels => 4,
        MetricKind::SentLength => 5,
    }
}

/// An ordered, duplicate-free grid of signature reports.
#[derive(Debug, Clone)]
pub struct SchematicDoc {
    cells: Vec<SignatureReport>,
}

/// Order reports into a grid document. Two reports for the same
/// (metric, domain) cell are an error.
pub fn emit_schematic(reports: &[SignatureReport]) -> Result<SchematicDoc, DistributionError> {
    let mut seen = HashSet::new();
    for report in reports {
        if !seen.insert((report.metric, report.domain)) {
            return Err(DistributionError::DuplicateCell {
                metric: report.metric,
                domain: report.domain,
            });
        }
    }
    let mut cells = reports.to_vec();
    cells.sort_by_key(|r| (metric_rank(r.metric), r.domain.grid_rank()));
    Ok(SchematicDoc { cells })
}

impl SchematicDoc {
    pub fn cells(&self) -> &[SignatureReport] {
        &self.cells
    }

    /// Aligned text form. The three verdicts are single-space separated so a
    /// row reads like "Yngve            wiki    ↗ ↘ reduced".
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<metric$}{:<domain$}Mean Std Tail\n",
            "Metric",
            "Domain",
            metric = METRIC_COLUMN_WIDTH,
            domain = DOMAIN_COLUMN_WIDTH,
        ));
        for cell in &self.cells {
            out.push_str(&format!(
                "{:<metric$}{:<domain$}{} {} {}\n",
                cell.metric.grid_label(),
                cell.domain.grid_label(),
                cell.mean_shift.arrow(),
                cell.variance_shift.arrow(),
                cell.tail_verdict.label(),
                metric = METRIC_COLUMN_WIDTH,
                domain = DOMAIN_COLUMN_WIDTH,
            ));
        }
        out
    }

    /// Machine-readable CSV form with verdicts as words.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("metric,domain,mean_shift,variance_shift,tail_verdict\n");
        for cell in &self.cells {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                cell.metric.as_str(),
                cell.domain.as_str(),
                format!("{:?}", cell.mean_shift).to_lowercase(),
                format!("{:?}", cell.variance_shift).to_lowercase(),
                match cell.tail_verdict {
                    TailVerdict::Reduced => "reduced",
                    TailVerdict::Comparable => "comparable",
                    TailVerdict::NotApplicable => "n/a",
                },
            ));
        }
        out
    }
}

/// Build a report with given verdicts; the raw d/ρ/T values are synthetic.
/// Intended for grid fixtures and tests.
pub fn report_with_verdicts(
    metric: MetricKind,
    domain: Domain,
    mean_shift: crate::distribution::MeanShift,
    variance_shift: crate::distribution::VarianceShift,
    tail_verdict: TailVerdict,
) -> SignatureReport {
    use crate::distribution::{MeanShift, VarianceShift};
    let d = match mean_shift {
        MeanShift::Up => 0.5,
        MeanShift::Down => -0.5,
        MeanShift::Flat => 0.0,
    };
    let rho = match variance_shift {
        VarianceShift::Narrower => 0.7,
        VarianceShift::Wider => 1.3,
        VarianceShift::Flat => 1.0,
    };
    let (t_human, t_model) = match tail_verdict {
        TailVerdict::Reduced => (2.0, 1.0),
        TailVerdict::Comparable => (2.0, 1.9),
        TailVerdict::NotApplicable => (1.0, 1.0),
    };
    SignatureReport {
        metric,
        domain,
        d,
        mean_shift,
        rho,
        variance_shift,
        t_human,
        t_model,
        tail_verdict,
    }
}
