//! Result aggregation: the per-scenario TSV and JSON report and the
//! family-by-condition summary grid.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Scenario, ScenarioResult};
use crate::axioms::Status;

pub const REPORT_VERSION: &str = "rgf/1";

/// One scenario's outcome in serializable form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioRecord {
    pub id: String,
    pub rule: String,
    pub axiom: String,
    pub n: usize,
    pub m: usize,
    pub mode: String,
    pub expected: Status,
    pub observed: Status,
    pub matches: bool,
    pub coverage: String,
    pub elapsed_ms: u128,
    pub claim: String,
    pub detail: String,
}

impl ScenarioRecord {
    pub fn new(s: &Scenario, r: &ScenarioResult) -> Self {
        ScenarioRecord {
            id: s.id.clone(),
            rule: s.spec.label(),
            axiom: s.axiom.to_string(),
            n: s.n,
            m: s.m,
            mode: s.mode.name(),
            expected: r.expected,
            observed: r.observed,
            matches: r.matches,
            coverage: r.coverage.clone(),
            elapsed_ms: r.elapsed.as_millis(),
            claim: s.claim.clone(),
            detail: r.detail.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub family: String,
    pub condition: String,
    /// CONFIRMED, MISMATCH or NOT RUN.
    pub status: String,
    pub scopes: Vec<String>,
    pub coverage: String,
    pub scenarios: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub scenarios: Vec<ScenarioRecord>,
    pub summary: Vec<SummaryRow>,
    pub mismatches: usize,
}

fn status_str(s: Status) -> &'static str {
    match s {
        Status::Holds => "Holds",
        Status::Violated => "Violated",
    }
}

impl Report {
    pub fn new(records: Vec<ScenarioRecord>) -> Self {
        let summary = summary_table(&records);
        let mismatches = records.iter().filter(|r| !r.matches).count();
        Report { version: REPORT_VERSION.to_string(), scenarios: records, summary, mismatches }
    }

    pub fn to_tsv(&self) -> String {
        let mut out =
            String::from("id\trule\taxiom\tn\tm\tmode\texpected\tobserved\tmatch\tcoverage\telapsed_ms\tclaim\n");
        for r in &self.scenarios {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                r.id,
                r.rule,
                r.axiom,
                r.n,
                r.m,
                r.mode,
                status_str(r.expected),
                status_str(r.observed),
                if r.matches { "MATCH" } else { "MISMATCH" },
                r.coverage,
                r.elapsed_ms,
                r.claim
            );
        }
        out
    }

    pub fn summary_text(&self) -> String {
        let mut out = String::new();
        for row in &self.summary {
            let _ = writeln!(
                out,
                "{:<28} {:<58} {:<9} [{}; {}]",
                row.family,
                row.condition,
                row.status,
                row.scopes.join(" "),
                row.coverage
            );
        }
        out
    }
}

/// Rows of the summary grid: family, condition, and the scenario id prefixes supporting it.
const ROWS: &[(&str, &str, &[&str])] = &[
    ("A-maxmin", "n>=m-1 or n|m-1 <=> regret-free", &["T1-pos-", "T1-neg-"]),
    ("N-maxmin", "all regret-free", &["T1-N-"]),
    ("A-negative-plurality", "n>=m-1 <=> regret-free", &["T2-pos-", "T2-neg-"]),
    ("N-negative-plurality", "all regret-free", &["T2-N-"]),
    ("scoring, k*=m-1", "not regret-free (Borda, plurality, Dowdall)", &["T3-"]),
    ("A-(m-k*)-approval", "k*n=m-1 => regret-free; k*n<m-1 => not", &["T4-"]),
    ("scoring, s_{k*-1}=s_{k*}", "k*n>=m-1 => not regret-free", &["T5-"]),
    ("Condorcet consistent", "Condorcet+monotone => none regret-free", &["T6-"]),
    ("bottom-count rule, n=4 m=3", "Condorcet consistent, monotone and regret-free", &["Remark-"]),
    ("successive elimination", "none regret-free; not monotone", &["T8-", "SE-"]),
    ("neutral, n=2 m=3", "regret-free <=> N-maxmin or dictatorship", &["T7-"]),
    ("efficient+anonymous, n=2 m=3", "regret-free <=> successive elimination or A-maxmin*", &["T9-"]),
    ("tops-only", "regret-free => strategy-proof", &["P1-"]),
];

/// Collapses scenario records into the family-by-condition grid.
pub fn summary_table(records: &[ScenarioRecord]) -> Vec<SummaryRow> {
    ROWS.iter()
        .map(|(family, condition, prefixes)| {
            let rows: Vec<&ScenarioRecord> =
                records.iter().filter(|r| prefixes.iter().any(|p| r.id.starts_with(p))).collect();
            let status = if rows.is_empty() {
                "NOT RUN"
            } else if rows.iter().all(|r| r.matches) {
                "CONFIRMED"
            } else {
                "MISMATCH"
            };
            let mut scopes: Vec<String> = rows.iter().map(|r| format!("({},{})", r.n, r.m)).collect();
            scopes.sort();
            scopes.dedup();
            let mut kinds: Vec<&str> = rows
                .iter()
                .map(|r| match r.mode.split(':').next().unwrap_or("") {
                    "exhaustive" => "exhaustive",
                    "sampled" => "sampled",
                    "directed" => "directed",
                    _ => "sweep",
                })
                .collect();
            kinds.sort();
            kinds.dedup();
            SummaryRow {
                family: family.to_string(),
                condition: condition.to_string(),
                status: status.to_string(),
                scopes,
                coverage: kinds.join("+"),
                scenarios: rows.iter().map(|r| r.id.clone()).collect(),
            }
        })
        .collect()
}
