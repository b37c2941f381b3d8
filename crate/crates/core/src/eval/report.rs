// SPDX-License-Identifier: Apache-2.0

use std::io::{self, Write};

/// CSV header, in order.
pub const CSV_COLUMNS: [&str; 5] = [
    "parameter",
    "matches",
    "match_rate",
    "avg_score",
    "expected_min_score",
];

#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub parameter: String,
    pub matches: usize,
    /// Percent of trials.
    pub match_rate: f64,
    /// Mean score over the matched trials; `None` without matches.
    pub avg_score: Option<f64>,
    /// Mean shared-byte percentage of the matched trials.
    pub expected_min_score: Option<f64>,
}

/// One mutant compared against the database or its source.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialPoint {
    pub parameter: String,
    pub file: String,
    pub matched: bool,
    pub score: u32,
    pub jaccard: f64,
    pub expected_min_score: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TestReport {
    pub name: String,
    pub corpus_size: usize,
    pub rows: Vec<ReportRow>,
    pub trials: Vec<TrialPoint>,
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

impl ReportRow {
    /// Summarize the trials of one parameter value. Averages run over matched trials.
    pub fn from_trials(parameter: impl Into<String>, trials: &[TrialPoint], total: usize) -> Self {
        let matched: Vec<&TrialPoint> = trials.iter().filter(|t| t.matched).collect();
        ReportRow {
            parameter: parameter.into(),
            matches: matched.len(),
            match_rate: if total == 0 {
                0.0
            } else {
                100.0 * matched.len() as f64 / total as f64
            },
            avg_score: mean(matched.iter().map(|t| t.score as f64)),
            expected_min_score: mean(matched.iter().map(|t| t.expected_min_score)),
        }
    }
}

impl TestReport {
    pub fn row(&self, parameter: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.parameter == parameter)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_COLUMNS)?;
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.4}")).unwrap_or_default();
        for r in &self.rows {
            w.write_record([
                r.parameter.clone(),
                r.matches.to_string(),
                format!("{:.2}", r.match_rate),
                opt(r.avg_score),
                opt(r.expected_min_score),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LowerBoundPoint {
    pub test: String,
    pub parameter: String,
    pub score: f64,
    pub shared_percent: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LowerBoundSummary {
    pub tolerance: f64,
    pub points: Vec<LowerBoundPoint>,
    pub satisfied: usize,
}

impl LowerBoundSummary {
    pub fn fraction(&self) -> f64 {
        if self.points.is_empty() {
            return 1.0;
        }
        self.satisfied as f64 / self.points.len() as f64
    }

    pub fn violations(&self) -> impl Iterator<Item = &LowerBoundPoint> {
        self.points
            .iter()
            .filter(|p| p.score > p.shared_percent + self.tolerance)
    }
}

/// Collect one (average score, shared-byte %) point per report row and count
/// how many satisfy `score <= shared + tolerance`.
pub fn lower_bound_report(reports: &[TestReport], tolerance: f64) -> LowerBoundSummary {
    let points: Vec<LowerBoundPoint> = reports
        .iter()
        .flat_map(|rep| {
            rep.rows.iter().filter_map(move |row| {
                Some(LowerBoundPoint {
                    test: rep.name.clone(),
                    parameter: row.parameter.clone(),
                    score: row.avg_score?,
                    shared_percent: row.expected_min_score?,
                })
            })
        })
        .collect();
    let satisfied = points
        .iter()
        .filter(|p| p.score <= p.shared_percent + tolerance)
        .count();
    LowerBoundSummary {
        tolerance,
        points,
        satisfied,
    }
}
