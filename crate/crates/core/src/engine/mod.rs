//! Profile codes, outcome tables and the shared evaluation context used by
//! the axiom checkers.
//!
//! A profile's code is its odometer position: agent 1's ranking index is
//! the most significant base-`m!` digit. Rankings are indexed in the
//! lexicographic order of [`enumerate_preferences`](crate::prefcore::enumerate_preferences).

pub mod cache;
pub mod classes;

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::prefcore::{Alternative, Preference, Profile, ProfileSpace};
use crate::rules::RuleSpec;

pub use classes::BallotClasses;

/// Largest outcome table built in memory.
pub const DEFAULT_TABLE_BUDGET: u128 = 1 << 26;

/// Largest number of other-agent subprofiles scanned per regret check.
pub const DEFAULT_INNER_BUDGET: u128 = 1 << 26;

/// Random build-time agreement checks against direct evaluation.
const BUILD_SPOT_CHECKS: usize = 64;

pub(crate) type Prefs = SmallVec<[Preference; 8]>;

pub fn encode(profile: &Profile) -> u64 {
    let radix = crate::prefcore::factorial(profile.m());
    profile
        .prefs()
        .iter()
        .fold(0u64, |acc, p| acc * radix + p.lex_index() as u64)
}

pub fn decode(n: usize, m: usize, code: u64) -> Result<Profile> {
    let space = ProfileSpace::new(n, m)?;
    if code as u128 >= space.size() {
        return Err(Error::Domain(format!("code {code} outside the {}-profile space", space.size())));
    }
    Ok(space.profile(code))
}

/// `outcomes[code] = f(profile(code))` for every profile.
#[derive(Clone, Debug)]
pub struct OutcomeTable {
    spec: RuleSpec,
    outcomes: Vec<u8>,
}

impl OutcomeTable {
    pub fn build(spec: &RuleSpec) -> Result<Self> {
        Self::build_within(spec, DEFAULT_TABLE_BUDGET)
    }

    /// Builds in parallel on the current rayon pool.
    pub fn build_within(spec: &RuleSpec, budget: u128) -> Result<Self> {
        let space = ProfileSpace::new(spec.n(), spec.m())?;
        space.ensure_within(budget, "outcome table")?;
        let outcomes = (0..space.size() as u64)
            .into_par_iter()
            .map_init(
                || (vec![0u32; space.n()], Prefs::new()),
                |(digits, prefs), code| {
                    space.digits(code, digits);
                    prefs.clear();
                    prefs.extend(digits.iter().map(|&d| *space.pref(d)));
                    spec.outcome(prefs).map(|x| x.0)
                },
            )
            .collect::<Result<Vec<u8>>>()?;
        let table = OutcomeTable { spec: spec.clone(), outcomes };
        table.spot_check(&space)?;
        Ok(table)
    }

    /// Wraps precomputed outcomes, e.g. from the on-disk cache.
    pub fn from_outcomes(spec: &RuleSpec, outcomes: Vec<u8>) -> Result<Self> {
        let space = ProfileSpace::new(spec.n(), spec.m())?;
        if outcomes.len() as u128 != space.size() {
            return Err(Error::Cache(format!(
                "table holds {} outcomes, the space has {}",
                outcomes.len(),
                space.size()
            )));
        }
        if let Some(bad) = outcomes.iter().find(|&&x| x as usize >= spec.m()) {
            return Err(Error::Cache(format!("outcome {bad} out of range for m={}", spec.m())));
        }
        let table = OutcomeTable { spec: spec.clone(), outcomes };
        table.spot_check(&space)?;
        Ok(table)
    }

    fn spot_check(&self, space: &ProfileSpace) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..BUILD_SPOT_CHECKS {
            let code = rng.gen_range(0..self.outcomes.len() as u64);
            let direct = self.spec.outcome(space.profile(code).prefs())?;
            if direct.0 != self.outcomes[code as usize] {
                return Err(Error::Cache(format!("table disagrees with direct evaluation at code {code}")));
            }
        }
        Ok(())
    }

    pub fn spec(&self) -> &RuleSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    #[inline]
    pub fn get(&self, code: u64) -> Alternative {
        Alternative(self.outcomes[code as usize])
    }

    pub fn outcomes(&self) -> &[u8] {
        &self.outcomes
    }
}

/// Draws `count` profiles, one uniform ranking per agent, from a seeded
/// ChaCha8 stream.
pub fn sampled_profiles(n: usize, m: usize, count: usize, seed: u64) -> Result<Vec<Profile>> {
    let space = ProfileSpace::new(n, m)?;
    Ok(sampled_digits(&space, count, seed)
        .iter()
        .map(|d| space.profile_from_digits(d))
        .collect())
}

pub(crate) fn sampled_digits(space: &ProfileSpace, count: usize, seed: u64) -> Vec<Vec<u32>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..space.n()).map(|_| rng.gen_range(0..space.radix()) as u32).collect())
        .collect()
}

/// Runs `f` on a dedicated pool of `workers` threads, or on the global pool.
pub fn with_workers<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    match workers {
        Some(w) if w > 0 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::Contract(format!("cannot start {w} workers: {e}")))?;
            Ok(pool.install(f))
        }
        _ => Ok(f()),
    }
}

/// How a [`Context`] evaluates the rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    /// Precompute an outcome table when the space fits `table_budget`.
    pub use_table: bool,
    /// Scan other agents' ballots by equivalence class instead of one by one.
    pub use_classes: bool,
    pub table_budget: u128,
    pub inner_budget: u128,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            use_table: true,
            use_classes: true,
            table_budget: DEFAULT_TABLE_BUDGET,
            inner_budget: DEFAULT_INNER_BUDGET,
        }
    }
}

/// A rule together with its profile space, evaluator and ballot classes.
pub struct Context {
    spec: RuleSpec,
    space: ProfileSpace,
    table: Option<Arc<OutcomeTable>>,
    classes: BallotClasses,
}

impl Context {
    pub fn new(spec: &RuleSpec, cfg: &EngineConfig) -> Result<Self> {
        let space = ProfileSpace::new(spec.n(), spec.m())?;
        let table = if cfg.use_table && space.size() <= cfg.table_budget {
            Some(Arc::new(OutcomeTable::build_within(spec, cfg.table_budget)?))
        } else {
            None
        };
        let classes = if cfg.use_classes {
            BallotClasses::for_spec(spec, &space)
        } else {
            BallotClasses::identity(&space)
        };
        Ok(Context { spec: spec.clone(), space, table, classes })
    }

    pub fn with_table(table: Arc<OutcomeTable>, use_classes: bool) -> Result<Self> {
        let spec = table.spec().clone();
        let space = ProfileSpace::new(spec.n(), spec.m())?;
        let classes = if use_classes {
            BallotClasses::for_spec(&spec, &space)
        } else {
            BallotClasses::identity(&space)
        };
        Ok(Context { spec, space, table: Some(table), classes })
    }

    pub fn spec(&self) -> &RuleSpec {
        &self.spec
    }

    pub fn space(&self) -> &ProfileSpace {
        &self.space
    }

    pub fn classes(&self) -> &BallotClasses {
        &self.classes
    }

    pub fn has_table(&self) -> bool {
        self.table.is_some()
    }

    /// `f` at the profile whose ranking indices are `digits`.
    #[inline]
    pub fn eval(&self, digits: &[u32]) -> Result<Alternative> {
        match &self.table {
            Some(t) => Ok(t.get(self.space.code_of(digits))),
            None => {
                let prefs: Prefs = digits.iter().map(|&d| *self.space.pref(d)).collect();
                self.spec.outcome(&prefs)
            }
        }
    }

    pub fn profile(&self, digits: &[u32]) -> Profile {
        self.space.profile_from_digits(digits)
    }

    /// Number of class-level subprofiles of everyone but `agent`.
    pub fn inner_size(&self, agent: usize) -> u128 {
        (0..self.space.n())
            .filter(|&j| j != agent)
            .map(|j| self.classes.count(j) as u128)
            .product()
    }

    /// Every pair `(f(t, Q), f(q, Q))` as `Q` ranges over all reports of
    /// the other agents, packed as bit `8 * x + y` of the result. `t` and
    /// `q` are ranking indices for `agent`.
    pub fn outcome_pairs(&self, agent: usize, t: u32, q: u32) -> Result<u64> {
        let n = self.space.n();
        let mut digits = vec![0u32; n];
        let mut cursor = vec![0usize; n];
        for j in 0..n {
            if j != agent {
                digits[j] = self.classes.rep(j, 0);
            }
        }
        let mut pairs = 0u64;
        loop {
            digits[agent] = t;
            let x = self.eval(&digits)?;
            digits[agent] = q;
            let y = self.eval(&digits)?;
            pairs |= 1 << (8 * x.index() + y.index());
            // advance the odometer over the other agents' classes, last agent fastest
            let mut j = n;
            loop {
                if j == 0 {
                    return Ok(pairs);
                }
                j -= 1;
                if j == agent {
                    continue;
                }
                cursor[j] += 1;
                if cursor[j] < self.classes.count(j) {
                    digits[j] = self.classes.rep(j, cursor[j]);
                    break;
                }
                cursor[j] = 0;
                digits[j] = self.classes.rep(j, 0);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::{evaluate, ScoreVector, TieBreak};

    #[test]
    fn encode_decode_round_trip() {
        for code in 0..36 {
            let p = decode(2, 3, code).unwrap();
            assert_eq!(encode(&p), code);
        }
        let first = Profile::unanimous(Preference::identity(3), 3).unwrap();
        assert_eq!(encode(&first), 0);
        let codes: std::collections::HashSet<u64> = crate::prefcore::enumerate_profiles(3, 3)
            .unwrap()
            .map(|p| encode(&p))
            .collect();
        assert_eq!(codes.len(), 216);
        assert!(decode(2, 3, 36).is_err());
    }

    #[test]
    fn borda_table() {
        let spec = RuleSpec::scoring(2, ScoreVector::borda(3), TieBreak::alphabetical(3)).unwrap();
        let t = OutcomeTable::build(&spec).unwrap();
        assert_eq!(t.len(), 36);
        assert!(t.outcomes().iter().all(|&x| x < 3));
        for p in crate::prefcore::enumerate_preferences(3).unwrap() {
            let u = Profile::unanimous(p, 2).unwrap();
            assert_eq!(t.get(encode(&u)), p.top());
        }
    }

    #[test]
    fn table_matches_direct_evaluation_at_3x3() {
        let spec = RuleSpec::scoring(3, ScoreVector::borda(3), TieBreak::Agent(2)).unwrap();
        let t = OutcomeTable::build(&spec).unwrap();
        for (code, p) in crate::prefcore::enumerate_profiles(3, 3).unwrap().enumerate() {
            assert_eq!(t.get(code as u64), evaluate(&spec, &p).unwrap());
        }
    }

    #[test]
    fn table_budget_is_enforced() {
        let spec = RuleSpec::a_maxmin(3, 4).unwrap();
        assert!(matches!(OutcomeTable::build_within(&spec, 1000), Err(Error::SpaceTooLarge { .. })));
    }

    #[test]
    fn sampling_is_reproducible() {
        let a = sampled_profiles(3, 4, 50, 9).unwrap();
        let b = sampled_profiles(3, 4, 50, 9).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, sampled_profiles(3, 4, 50, 10).unwrap());
        assert!(sampled_profiles(3, 4, 0, 9).unwrap().is_empty());
    }

    #[test]
    fn sampling_is_uniform_over_rankings() {
        let draws = sampled_profiles(1, 3, 60_000, 1).unwrap();
        let mut counts = [0usize; 6];
        for p in &draws {
            counts[p.pref(0).lex_index() as usize] += 1;
        }
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - 10_000.0).powi(2) / 10_000.0)
            .sum();
        for c in counts {
            assert!((9_500..=10_500).contains(&c), "{counts:?}");
        }
        // 5 degrees of freedom; 20.5 is the 0.999 quantile
        assert!(chi2 < 20.5, "chi2 = {chi2}");
    }

    #[test]
    fn outcome_pairs_contain_the_truthful_pair() {
        let spec = RuleSpec::a_maxmin(2, 3).unwrap();
        for use_classes in [false, true] {
            let cfg = EngineConfig { use_classes, ..Default::default() };
            let ctx = Context::new(&spec, &cfg).unwrap();
            let pairs = ctx.outcome_pairs(0, 0, 5).unwrap();
            for other in 0..6 {
                let x = ctx.eval(&[0, other]).unwrap();
                let y = ctx.eval(&[5, other]).unwrap();
                assert!(pairs & (1 << (8 * x.index() + y.index())) != 0);
            }
        }
    }
}
