//! Scenario harness: named (rule, axiom, scope, mode, expectation) records
//! that reproduce the known results at small scopes.

mod catalog;
mod report;

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::axioms::{recheck, Axiom, CheckConfig, Checker, Coverage, Mode, Status, Verdict, Witness};
use crate::error::{Error, Result};
use crate::prefcore::Alternative;
use crate::rules::{Family, RuleSpec};

pub use catalog::scenario_catalog;
pub use report::{summary_table, Report, ScenarioRecord, SummaryRow, REPORT_VERSION};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScenarioMode {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
    /// A concrete candidate violation, rechecked rather than searched for.
    Directed { witness: Witness },
    /// `rules` seeded random tops-only rules: every one that is regret-free
    /// must also be strategy-proof.
    TopsOnlySweep { rules: usize, seed: u64 },
}

impl ScenarioMode {
    pub fn name(&self) -> String {
        match self {
            ScenarioMode::Exhaustive => "exhaustive".into(),
            ScenarioMode::Sampled { count, seed } => format!("sampled:{count}:{seed}"),
            ScenarioMode::Directed { .. } => "directed".into(),
            ScenarioMode::TopsOnlySweep { rules, seed } => format!("sweep:{rules}:{seed}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    pub id: String,
    pub spec: RuleSpec,
    pub axiom: Axiom,
    pub n: usize,
    pub m: usize,
    pub mode: ScenarioMode,
    pub expected: Status,
    /// The statement this scenario instantiates.
    pub claim: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub id: String,
    pub observed: Status,
    pub expected: Status,
    pub matches: bool,
    pub coverage: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    pub detail: String,
    pub elapsed: Duration,
}

pub fn find_scenario(id: &str) -> Result<Scenario> {
    scenario_catalog()
        .into_iter()
        .find(|s| s.id == id)
        .ok_or_else(|| Error::UnknownScenario(id.to_string()))
}

pub fn run_scenario(id: &str) -> Result<ScenarioResult> {
    run_scenario_with(&find_scenario(id)?, &CheckConfig::default())
}

pub fn run_scenario_with(s: &Scenario, cfg: &CheckConfig) -> Result<ScenarioResult> {
    let start = Instant::now();
    let (observed, coverage, verdict, detail) = match &s.mode {
        ScenarioMode::Exhaustive | ScenarioMode::Sampled { .. } => {
            let mode = match s.mode {
                ScenarioMode::Sampled { count, seed } => Mode::Sampled { count, seed },
                _ => Mode::Exhaustive,
            };
            let v = Checker::new(&s.spec, cfg)?.check(s.axiom, mode)?;
            let coverage = match v.coverage {
                Coverage::Exhaustive => "exhaustive".to_string(),
                Coverage::Sampled { samples, seed } => format!("sampled {samples} profiles, seed {seed}"),
            };
            let detail = match &v.witness {
                Some(w) => serde_json::to_string(w).unwrap_or_default(),
                None => String::new(),
            };
            (v.status, coverage, Some(v), detail)
        }
        ScenarioMode::Directed { witness } => {
            if witness.axiom() != s.axiom {
                return Err(Error::Contract(format!(
                    "scenario {} checks {} but carries a {} witness",
                    s.id,
                    s.axiom,
                    witness.axiom()
                )));
            }
            let valid = recheck(&s.spec, witness)?;
            let status = if valid { Status::Violated } else { Status::Holds };
            let detail = if valid { "witness valid" } else { "witness rejected" };
            (status, "directed witness".to_string(), None, detail.to_string())
        }
        ScenarioMode::TopsOnlySweep { rules, seed } => {
            let (status, detail) = tops_only_sweep(s.n, s.m, *rules, *seed, cfg)?;
            (status, format!("{rules} random rules, seed {seed}, each exhaustive"), None, detail)
        }
    };
    Ok(ScenarioResult {
        id: s.id.clone(),
        observed,
        expected: s.expected,
        matches: observed == s.expected,
        coverage,
        verdict,
        detail,
        elapsed: start.elapsed(),
    })
}

/// Draws a tops-only rule as a table over top vectors. A quarter of the
/// draws each come from: a uniform table, a function of one agent's top, the
/// first top of a random coalition under a random order, and a table whose
/// every cell is some agent's top.
fn random_tops_table(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Vec<Alternative> {
    let cells = m.pow(n as u32);
    let tops = |cell: usize| -> Vec<usize> {
        let mut t = vec![0; n];
        let mut c = cell;
        for slot in t.iter_mut().rev() {
            *slot = c % m;
            c /= m;
        }
        t
    };
    let table: Vec<usize> = match rng.gen_range(0..4) {
        0 => (0..cells).map(|_| rng.gen_range(0..m)).collect(),
        1 => {
            let j = rng.gen_range(0..n);
            let g: Vec<usize> = (0..m).map(|_| rng.gen_range(0..m)).collect();
            (0..cells).map(|c| g[tops(c)[j]]).collect()
        }
        2 => {
            let mut order: Vec<usize> = (0..m).collect();
            order.shuffle(rng);
            let coalition = rng.gen_range(1..1usize << n);
            (0..cells)
                .map(|c| {
                    let t = tops(c);
                    let named: Vec<usize> = (0..n).filter(|i| coalition >> i & 1 == 1).map(|i| t[i]).collect();
                    *order.iter().find(|x| named.contains(x)).expect("coalition is nonempty")
                })
                .collect()
        }
        _ => (0..cells).map(|c| tops(c)[rng.gen_range(0..n)]).collect(),
    };
    table.into_iter().map(Alternative::new).collect()
}

/// The `index`-th rule of the tops-only sweep seeded with `seed`.
pub fn random_tops_only_rule(n: usize, m: usize, seed: u64, index: usize) -> Result<RuleSpec> {
    if m.checked_pow(n as u32).is_none_or(|c| c > 1 << 20) {
        return Err(Error::Domain("tops table too large".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = Vec::new();
    for _ in 0..=index {
        table = random_tops_table(&mut rng, n, m);
    }
    RuleSpec::new(Family::TopsTable { table }, n, m)
}

fn tops_only_sweep(n: usize, m: usize, rules: usize, seed: u64, cfg: &CheckConfig) -> Result<(Status, String)> {
    if m.checked_pow(n as u32).is_none_or(|c| c > 1 << 20) {
        return Err(Error::Domain("tops table too large".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut regret_free, mut strategy_proof) = (0usize, 0usize);
    for r in 0..rules {
        let spec = RuleSpec::new(Family::TopsTable { table: random_tops_table(&mut rng, n, m) }, n, m)?;
        let checker = Checker::new(&spec, cfg)?;
        let rf = checker.check(Axiom::RegretFree, Mode::Exhaustive)?.holds();
        let sp = checker.check(Axiom::StrategyProof, Mode::Exhaustive)?.holds();
        regret_free += rf as usize;
        strategy_proof += sp as usize;
        if rf && !sp {
            return Ok((Status::Violated, format!("rule {r} is regret-free but manipulable")));
        }
    }
    Ok((Status::Holds, format!("{regret_free} regret-free, {strategy_proof} strategy-proof of {rules}")))
}

/// Runs every scenario in catalog order.
pub fn run_all(cfg: &CheckConfig) -> Result<Vec<ScenarioResult>> {
    scenario_catalog().iter().map(|s| run_scenario_with(s, cfg)).collect()
}
