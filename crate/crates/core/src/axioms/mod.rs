//! Decision procedures for rule axioms over a finite scope `(n, m)`.
//!
//! Every check scans profiles in code order (or sample order) and reports
//! the first violation it meets, so verdicts and witnesses do not depend on
//! how many worker threads ran the scan.

mod recheck;
mod search;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::engine::{with_workers, Context, EngineConfig};
use crate::error::{Error, Result};
use crate::prefcore::{Alternative, Preference, Profile, DEFAULT_PROFILE_BUDGET};
use crate::rules::RuleSpec;

pub use recheck::recheck;

/// Largest profile space a regret-free check will scan exhaustively.
pub const REGRET_EXHAUSTIVE_BUDGET: u128 = 2_000_000;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    StrategyProof,
    RegretFree,
    TopsOnly,
    Monotone,
    MaskinMonotone,
    CondorcetConsistent,
    Efficient,
    Unanimous,
    Anonymous,
    Neutral,
    Dictatorial,
}

impl Axiom {
    pub const ALL: [Axiom; 11] = [
        Axiom::StrategyProof,
        Axiom::RegretFree,
        Axiom::TopsOnly,
        Axiom::Monotone,
        Axiom::MaskinMonotone,
        Axiom::CondorcetConsistent,
        Axiom::Efficient,
        Axiom::Unanimous,
        Axiom::Anonymous,
        Axiom::Neutral,
        Axiom::Dictatorial,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::StrategyProof => "strategy-proof",
            Axiom::RegretFree => "regret-free",
            Axiom::TopsOnly => "tops-only",
            Axiom::Monotone => "monotone",
            Axiom::MaskinMonotone => "maskin-monotone",
            Axiom::CondorcetConsistent => "condorcet-consistent",
            Axiom::Efficient => "efficient",
            Axiom::Unanimous => "unanimous",
            Axiom::Anonymous => "anonymous",
            Axiom::Neutral => "neutral",
            Axiom::Dictatorial => "dictatorial",
        }
    }

    pub fn parse(s: &str) -> Option<Axiom> {
        let s = s.trim().to_ascii_lowercase().replace('_', "-");
        let s = match s.as_str() {
            "rftt" | "regret-free-truth-telling" => "regret-free",
            "sp" | "strategyproof" => "strategy-proof",
            "condorcet" => "condorcet-consistent",
            "maskin" => "maskin-monotone",
            other => other,
        };
        Axiom::ALL.into_iter().find(|a| a.name() == s)
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Violated,
}

/// Which profiles the outer scan visited.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Coverage {
    Exhaustive,
    /// Uniformly drawn profiles; misreports and counterfactuals stay exhaustive.
    Sampled { samples: usize, seed: u64 },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

impl Mode {
    fn coverage(self) -> Coverage {
        match self {
            Mode::Exhaustive => Coverage::Exhaustive,
            Mode::Sampled { count, seed } => Coverage::Sampled { samples: count, seed },
        }
    }
}

/// A self-contained certificate of a violation. Agents are numbered from 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `agent` gains by reporting `misreport` at `profile`.
    Manipulation { profile: Profile, agent: usize, misreport: Preference },
    /// A profitable misreport such that every counterfactual consistent
    /// with the truthful outcome leaves the deviator no worse off.
    Regret {
        profile: Profile,
        agent: usize,
        misreport: Preference,
        consistent_counterfactuals_safe: bool,
    },
    /// Same tops, different outcomes.
    TopsOnly { profile: Profile, other: Profile },
    /// A transformation freezing everything at or below `f(profile)` for
    /// `agent` that selects `outcome`, which the agent ranked below it.
    Monotone { profile: Profile, agent: usize, transformed: Preference, outcome: Alternative },
    /// A Maskin monotonic transformation with respect to `f(profile)` that
    /// moves the outcome to `outcome`.
    MaskinMonotone { profile: Profile, agent: usize, transformed: Preference, outcome: Alternative },
    /// The profile has a Condorcet winner the rule does not pick.
    CondorcetFailure { profile: Profile },
    /// Every agent prefers `better` to the outcome.
    Inefficient { profile: Profile, better: Alternative },
    NotUnanimous { profile: Profile },
    /// `agent_permutation[i - 1]` is the agent whose ballot agent `i` receives.
    NotAnonymous { profile: Profile, agent_permutation: Vec<usize> },
    /// `alternative_permutation[x]` is the image of alternative `x`.
    NotNeutral { profile: Profile, alternative_permutation: Vec<Alternative> },
    /// `profiles[i - 1]` is a profile where the outcome is not agent `i`'s top.
    NotDictatorial { profiles: Vec<Profile> },
}

impl Witness {
    pub fn axiom(&self) -> Axiom {
        match self {
            Witness::Manipulation { .. } => Axiom::StrategyProof,
            Witness::Regret { .. } => Axiom::RegretFree,
            Witness::TopsOnly { .. } => Axiom::TopsOnly,
            Witness::Monotone { .. } => Axiom::Monotone,
            Witness::MaskinMonotone { .. } => Axiom::MaskinMonotone,
            Witness::CondorcetFailure { .. } => Axiom::CondorcetConsistent,
            Witness::Inefficient { .. } => Axiom::Efficient,
            Witness::NotUnanimous { .. } => Axiom::Unanimous,
            Witness::NotAnonymous { .. } => Axiom::Anonymous,
            Witness::NotNeutral { .. } => Axiom::Neutral,
            Witness::NotDictatorial { .. } => Axiom::Dictatorial,
        }
    }

    /// The main profile of the witness.
    pub fn profile(&self) -> &Profile {
        match self {
            Witness::Manipulation { profile, .. }
            | Witness::Regret { profile, .. }
            | Witness::TopsOnly { profile, .. }
            | Witness::Monotone { profile, .. }
            | Witness::MaskinMonotone { profile, .. }
            | Witness::CondorcetFailure { profile }
            | Witness::Inefficient { profile, .. }
            | Witness::NotUnanimous { profile }
            | Witness::NotAnonymous { profile, .. }
            | Witness::NotNeutral { profile, .. } => profile,
            Witness::NotDictatorial { profiles } => &profiles[0],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub axiom: Axiom,
    pub status: Status,
    pub coverage: Coverage,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    /// For the dictatorial axiom, the (1-based) dictator when it holds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dictator: Option<usize>,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            Status::Holds => "Holds",
            Status::Violated => "Violated",
        };
        match self.coverage {
            Coverage::Exhaustive => write!(f, "{}: {status} (exhaustive)", self.axiom)?,
            Coverage::Sampled { samples, seed } => {
                write!(f, "{}: {status} (sampled {samples} profiles, seed {seed})", self.axiom)?
            }
        }
        if let Some(d) = self.dictator {
            write!(f, ", dictator {d}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckConfig {
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
    pub engine: EngineConfig,
    /// Largest exhaustive profile space for the regret-free check.
    pub regret_budget: u128,
    /// Largest exhaustive profile space for every other check.
    pub profile_budget: u128,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            workers: None,
            engine: EngineConfig::default(),
            regret_budget: REGRET_EXHAUSTIVE_BUDGET,
            profile_budget: DEFAULT_PROFILE_BUDGET,
        }
    }
}

/// A rule prepared for repeated checks; the outcome table is built once.
pub struct Checker {
    ctx: Context,
    cfg: CheckConfig,
}

impl Checker {
    pub fn new(spec: &RuleSpec, cfg: &CheckConfig) -> Result<Self> {
        let engine = cfg.engine.clone();
        let ctx = with_workers(cfg.workers, || Context::new(spec, &engine))??;
        Ok(Checker { ctx, cfg: cfg.clone() })
    }

    pub fn from_context(ctx: Context, cfg: &CheckConfig) -> Self {
        Checker { ctx, cfg: cfg.clone() }
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn check(&self, axiom: Axiom, mode: Mode) -> Result<Verdict> {
        if let Mode::Sampled { count: 0, .. } = mode {
            return Err(Error::Contract("sampled mode needs at least one profile".into()));
        }
        with_workers(self.cfg.workers, || search::run(&self.ctx, &self.cfg, axiom, mode))?
    }
}

/// One-off check with the default configuration.
pub fn check(spec: &RuleSpec, axiom: Axiom, mode: Mode) -> Result<Verdict> {
    Checker::new(spec, &CheckConfig::default())?.check(axiom, mode)
}

pub fn check_strategy_proof(spec: &RuleSpec, mode: Mode) -> Result<Verdict> {
    check(spec, Axiom::StrategyProof, mode)
}

pub fn check_regret_free(spec: &RuleSpec, mode: Mode) -> Result<Verdict> {
    check(spec, Axiom::RegretFree, mode)
}

pub fn check_tops_only(spec: &RuleSpec, mode: Mode) -> Result<Verdict> {
    check(spec, Axiom::TopsOnly, mode)
}

pub fn check_monotone(spec: &RuleSpec, mode: Mode) -> Result<Verdict> {
    check(spec, Axiom::Monotone, mode)
}

pub fn check_maskin_monotone(spec: &RuleSpec, mode: Mode) -> Result<Verdict> {
    check(spec, Axiom::MaskinMonotone, mode)
}

pub fn check_condorcet_consistent(spec: &RuleSpec, mode: Mode) -> Result<Verdict> {
    check(spec, Axiom::CondorcetConsistent, mode)
}

/// Efficiency, unanimity, anonymity, neutrality or dictatorship.
pub fn check_simple_axiom(spec: &RuleSpec, axiom: Axiom, mode: Mode) -> Result<Verdict> {
    match axiom {
        Axiom::Efficient | Axiom::Unanimous | Axiom::Anonymous | Axiom::Neutral | Axiom::Dictatorial => {
            check(spec, axiom, mode)
        }
        other => Err(Error::Contract(format!("{other} is not a simple axiom"))),
    }
}
