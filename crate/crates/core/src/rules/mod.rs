//! Voting-rule families behind a single declarative [`RuleSpec`].
//!
//! Agents are numbered from 1 inside a spec (tie-break agents, dictators),
//! matching how rules are written down; profiles index them from 0.

pub mod condorcet;
pub mod elimination;
pub mod majority;
pub mod maxmin;
pub mod scoring;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prefcore::{AltSet, Alternative, PairwiseTally, Preference, Profile, MAX_ALTERNATIVES};

pub use condorcet::{
    black_winners, bottom_count, condorcet_winner, copeland_score, dodgson_score, fishburn_maximals,
    simpson_score, variant_winners, weak_condorcet_winners, young_score, CondorcetVariant,
};
pub use elimination::{successive_elimination_rounds, successive_elimination_winner, Round};
pub use majority::{extended_majority_winner, Committee};
pub use maxmin::{maxmin_winners, minimal_position};
pub use scoring::{k_star, score, scoring_winners, Rational, ScoreVector};

/// Largest `m` at which a scoring rule with a star tie-break is vetted by
/// enumerating every two-agent profile.
const STAR_SCORING_MAX_M: usize = 5;

/// A complete, antisymmetric and possibly intransitive relation on the
/// alternatives, stored as one "beats" bitmask per alternative.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StarRelation {
    m: usize,
    beats: [u8; MAX_ALTERNATIVES],
}

impl StarRelation {
    /// Builds the relation from the listed pairs `(x, y)` meaning `x` beats `y`.
    pub fn from_pairs(m: usize, pairs: &[(Alternative, Alternative)]) -> Result<Self> {
        if !(2..=MAX_ALTERNATIVES).contains(&m) {
            return Err(Error::InvalidRule(format!("relation over {m} alternatives")));
        }
        let mut beats = [0u8; MAX_ALTERNATIVES];
        for &(x, y) in pairs {
            if x.index() >= m || y.index() >= m || x == y {
                return Err(Error::InvalidRule(format!("bad relation pair {x}>{y}")));
            }
            if beats[y.index()] & (1 << x.index()) != 0 {
                return Err(Error::InvalidRule(format!("relation lists both {x}>{y} and {y}>{x}")));
            }
            beats[x.index()] |= 1 << y.index();
        }
        for x in 0..m {
            for y in x + 1..m {
                if beats[x] & (1 << y) == 0 && beats[y] & (1 << x) == 0 {
                    return Err(Error::InvalidRule(format!(
                        "relation does not compare {} and {}",
                        Alternative::new(x),
                        Alternative::new(y)
                    )));
                }
            }
        }
        Ok(StarRelation { m, beats })
    }

    /// The relation induced by a strict order, best first.
    pub fn from_order(order: &[Alternative]) -> Result<Self> {
        elimination::check_order(order, order.len())?;
        let pairs: Vec<_> = order
            .iter()
            .enumerate()
            .flat_map(|(i, &x)| order[i + 1..].iter().map(move |&y| (x, y)))
            .collect();
        Self::from_pairs(order.len(), &pairs)
    }

    /// Every complete antisymmetric relation on `m` alternatives, in a fixed order.
    pub fn all(m: usize) -> Vec<StarRelation> {
        let pairs: Vec<(usize, usize)> = (0..m).flat_map(|x| (x + 1..m).map(move |y| (x, y))).collect();
        (0..1u32 << pairs.len())
            .map(|bits| {
                let oriented: Vec<_> = pairs
                    .iter()
                    .enumerate()
                    .map(|(k, &(x, y))| {
                        let (x, y) = (Alternative::new(x), Alternative::new(y));
                        if bits & (1 << k) == 0 {
                            (x, y)
                        } else {
                            (y, x)
                        }
                    })
                    .collect();
                StarRelation::from_pairs(m, &oriented).expect("complete by construction")
            })
            .collect()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn beats(&self, x: Alternative, y: Alternative) -> bool {
        self.beats[x.index()] & (1 << y.index()) != 0
    }

    pub fn pairs(&self) -> Vec<(Alternative, Alternative)> {
        let mut out = Vec::new();
        for x in 0..self.m {
            for y in 0..self.m {
                if self.beats[x] & (1 << y) != 0 {
                    out.push((Alternative::new(x), Alternative::new(y)));
                }
            }
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        let alts = || (0..self.m).map(Alternative::new);
        alts().all(|x| {
            alts().all(|y| alts().all(|z| !(self.beats(x, y) && self.beats(y, z)) || self.beats(x, z)))
        })
    }
}

impl fmt::Debug for StarRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.pairs().iter().map(|(x, y)| format!("{x}>{y}")).collect();
        write!(f, "{{{}}}", s.join(","))
    }
}

#[derive(Serialize, Deserialize)]
struct RawStar {
    m: usize,
    beats: Vec<(Alternative, Alternative)>,
}

impl Serialize for StarRelation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawStar { m: self.m, beats: self.pairs() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for StarRelation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawStar::deserialize(d)?;
        StarRelation::from_pairs(raw.m, &raw.beats).map_err(serde::de::Error::custom)
    }
}

/// How a rule picks one alternative out of a tied winner set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieBreak {
    /// Highest alternative of a strict order, best first.
    FixedOrder(Vec<Alternative>),
    /// The candidate ranked highest by this agent (1-based).
    Agent(usize),
    /// Pairwise lookup; only defined for sets of at most two candidates.
    StarRelation(StarRelation),
}

impl TieBreak {
    /// The alphabetical order `a > b > c > ...`.
    pub fn alphabetical(m: usize) -> Self {
        TieBreak::FixedOrder((0..m).map(Alternative::new).collect())
    }

    fn validate(&self, n: usize, m: usize) -> Result<()> {
        match self {
            TieBreak::FixedOrder(order) => elimination::check_order(order, m),
            TieBreak::Agent(i) if (1..=n).contains(i) => Ok(()),
            TieBreak::Agent(i) => Err(Error::InvalidRule(format!("tie-break agent {i} out of range 1..={n}"))),
            TieBreak::StarRelation(r) if r.m() == m => Ok(()),
            TieBreak::StarRelation(r) => Err(Error::InvalidRule(format!(
                "relation over {} alternatives used with m={m}",
                r.m()
            ))),
        }
    }

    fn prefix(&self) -> &'static str {
        match self {
            TieBreak::FixedOrder(_) => "A",
            TieBreak::Agent(_) => "N",
            TieBreak::StarRelation(_) => "A*",
        }
    }
}

#[inline]
pub(crate) fn break_tie_prefs(candidates: AltSet, tb: &TieBreak, prefs: &[Preference]) -> Result<Alternative> {
    if candidates.len() == 1 {
        return Ok(candidates.first().expect("nonempty"));
    }
    match tb {
        TieBreak::FixedOrder(order) => order.iter().copied().find(|&x| candidates.contains(x)),
        TieBreak::Agent(i) => prefs[i - 1].best_in(candidates),
        TieBreak::StarRelation(r) => {
            if candidates.len() > 2 {
                return Err(Error::Contract(format!(
                    "star tie-break asked to choose among {} candidates {candidates:?}",
                    candidates.len()
                )));
            }
            let mut it = candidates.iter();
            match (it.next(), it.next()) {
                (Some(x), Some(y)) => Some(if r.beats(x, y) { x } else { y }),
                _ => None,
            }
        }
    }
    .ok_or_else(|| Error::Contract("tie-break applied to an empty candidate set".into()))
}

/// Resolves a nonempty winner set to one alternative.
pub fn break_tie(candidates: AltSet, tb: &TieBreak, profile: &Profile) -> Result<Alternative> {
    if let TieBreak::Agent(i) = tb {
        if *i == 0 || *i > profile.n() {
            return Err(Error::Contract(format!("tie-break agent {i} out of range")));
        }
    }
    break_tie_prefs(candidates, tb, profile.prefs())
}

/// A rule family with its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `x` wins when the agents topping `x` form a winning coalition (m = 2).
    ExtendedMajority { committee: Committee, x: Alternative, y: Alternative },
    Maxmin { tiebreak: TieBreak },
    Scoring { scores: ScoreVector, tiebreak: TieBreak },
    /// The Condorcet winner when one exists, otherwise a tie-broken variant winner.
    Condorcet { variant: CondorcetVariant, tiebreak: TieBreak },
    SuccessiveElimination { order: Vec<Alternative> },
    /// The top of the given agent (1-based).
    Dictatorship { agent: usize },
    Constant { alternative: Alternative },
    /// The four-agent, three-alternative rule built around bottom counts.
    Remark4x3 { order: Vec<Alternative> },
    /// The best top among all agents under a fixed order.
    MaxTop { order: Vec<Alternative> },
    /// The bottom of the given agent (1-based).
    AgentBottom { agent: usize },
    /// An arbitrary function of the top vector, indexed by the base-`m`
    /// number whose digits are the agents' tops, agent 1 most significant.
    TopsTable { table: Vec<Alternative> },
}

/// A fully specified rule `f : P^n -> X`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRuleSpec", into = "RawRuleSpec")]
pub struct RuleSpec {
    family: Family,
    n: usize,
    m: usize,
}

#[derive(Serialize, Deserialize)]
struct RawRuleSpec {
    n: usize,
    m: usize,
    #[serde(flatten)]
    family: Family,
}

impl TryFrom<RawRuleSpec> for RuleSpec {
    type Error = Error;
    fn try_from(raw: RawRuleSpec) -> Result<Self> {
        RuleSpec::new(raw.family, raw.n, raw.m)
    }
}

impl From<RuleSpec> for RawRuleSpec {
    fn from(r: RuleSpec) -> Self {
        RawRuleSpec { n: r.n, m: r.m, family: r.family }
    }
}

fn agent_in_range(agent: usize, n: usize) -> Result<()> {
    if (1..=n).contains(&agent) {
        Ok(())
    } else {
        Err(Error::InvalidRule(format!("agent {agent} out of range 1..={n}")))
    }
}

fn alt_in_range(x: Alternative, m: usize) -> Result<()> {
    if x.index() < m {
        Ok(())
    } else {
        Err(Error::InvalidRule(format!("alternative {x} out of range for m={m}")))
    }
}

impl RuleSpec {
    pub fn new(family: Family, n: usize, m: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidRule("a rule needs at least one agent".into()));
        }
        if !(2..=MAX_ALTERNATIVES).contains(&m) {
            return Err(Error::InvalidRule(format!("m must be in 2..={MAX_ALTERNATIVES}, got {m}")));
        }
        match &family {
            Family::ExtendedMajority { committee, x, y } => {
                if m != 2 {
                    return Err(Error::InvalidRule("extended majority voting needs m = 2".into()));
                }
                if committee.n() != n {
                    return Err(Error::InvalidRule(format!(
                        "committee over {} agents for a rule with n={n}",
                        committee.n()
                    )));
                }
                alt_in_range(*x, m)?;
                alt_in_range(*y, m)?;
                if x == y {
                    return Err(Error::InvalidRule("extended majority needs two distinct alternatives".into()));
                }
            }
            Family::Maxmin { tiebreak } => {
                tiebreak.validate(n, m)?;
                if matches!(tiebreak, TieBreak::StarRelation(_)) && n != 2 {
                    return Err(Error::InvalidRule("a star tie-break needs n = 2 for maxmin".into()));
                }
            }
            Family::Scoring { scores, tiebreak } => {
                if scores.m() != m {
                    return Err(Error::InvalidRule(format!(
                        "score vector has {} entries for m={m}",
                        scores.m()
                    )));
                }
                tiebreak.validate(n, m)?;
                if matches!(tiebreak, TieBreak::StarRelation(_)) {
                    star_scoring_is_defined(scores, n, m)?;
                }
            }
            Family::Condorcet { tiebreak, .. } => {
                tiebreak.validate(n, m)?;
                if matches!(tiebreak, TieBreak::StarRelation(_)) {
                    return Err(Error::InvalidRule("Condorcet rules take a fixed order or an agent tie-break".into()));
                }
                if n > condorcet::YOUNG_MAX_AGENTS {
                    return Err(Error::InvalidRule(format!(
                        "Condorcet rules support at most {} agents",
                        condorcet::YOUNG_MAX_AGENTS
                    )));
                }
            }
            Family::SuccessiveElimination { order } | Family::MaxTop { order } => {
                elimination::check_order(order, m)?;
            }
            Family::Remark4x3 { order } => {
                if (n, m) != (4, 3) {
                    return Err(Error::InvalidRule("the bottom-count rule is defined for n = 4, m = 3 only".into()));
                }
                elimination::check_order(order, m)?;
            }
            Family::Dictatorship { agent } | Family::AgentBottom { agent } => agent_in_range(*agent, n)?,
            Family::Constant { alternative } => alt_in_range(*alternative, m)?,
            Family::TopsTable { table } => {
                let want = (m as u128).checked_pow(n as u32).filter(|&s| s <= 1 << 24);
                if want != Some(table.len() as u128) {
                    return Err(Error::InvalidRule(format!(
                        "tops table needs m^n = {m}^{n} entries, got {}",
                        table.len()
                    )));
                }
                for &x in table {
                    alt_in_range(x, m)?;
                }
            }
        }
        Ok(RuleSpec { family, n, m })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Maxmin with a fixed order tie-break.
    pub fn a_maxmin(n: usize, m: usize) -> Result<Self> {
        Self::new(Family::Maxmin { tiebreak: TieBreak::alphabetical(m) }, n, m)
    }

    /// Maxmin broken by agent `agent`'s preference.
    pub fn n_maxmin(n: usize, m: usize, agent: usize) -> Result<Self> {
        Self::new(Family::Maxmin { tiebreak: TieBreak::Agent(agent) }, n, m)
    }

    pub fn scoring(n: usize, scores: ScoreVector, tiebreak: TieBreak) -> Result<Self> {
        let m = scores.m();
        Self::new(Family::Scoring { scores, tiebreak }, n, m)
    }

    pub fn condorcet(n: usize, m: usize, variant: CondorcetVariant, tiebreak: TieBreak) -> Result<Self> {
        Self::new(Family::Condorcet { variant, tiebreak }, n, m)
    }

    pub fn successive_elimination(n: usize, order: Vec<Alternative>) -> Result<Self> {
        let m = order.len();
        Self::new(Family::SuccessiveElimination { order }, n, m)
    }

    pub fn dictatorship(n: usize, m: usize, agent: usize) -> Result<Self> {
        Self::new(Family::Dictatorship { agent }, n, m)
    }

    pub fn constant(n: usize, m: usize, alternative: Alternative) -> Result<Self> {
        Self::new(Family::Constant { alternative }, n, m)
    }

    pub fn checks_scope(&self, n: usize, m: usize) -> Result<()> {
        if (self.n, self.m) != (n, m) {
            return Err(Error::Mismatch { expected_n: self.n, expected_m: self.m, n, m });
        }
        Ok(())
    }

    /// Short human-readable name, e.g. `A-maxmin(a>b>c)` or `N-borda(1)`.
    pub fn label(&self) -> String {
        let order_str = |o: &[Alternative]| o.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(">");
        let tb_str = |tb: &TieBreak| match tb {
            TieBreak::FixedOrder(o) => order_str(o),
            TieBreak::Agent(i) => i.to_string(),
            TieBreak::StarRelation(r) => format!("{r:?}"),
        };
        match &self.family {
            Family::ExtendedMajority { committee, x, y } => {
                format!("ext-majority({x} vs {y}, {} minimal coalitions)", committee.minimal_coalitions().len())
            }
            Family::Maxmin { tiebreak } => format!("{}-maxmin({})", tiebreak.prefix(), tb_str(tiebreak)),
            Family::Scoring { scores, tiebreak } => {
                format!("{}-scoring[{scores}]({})", tiebreak.prefix(), tb_str(tiebreak))
            }
            Family::Condorcet { variant, tiebreak } => {
                format!("{}-{}({})", tiebreak.prefix(), variant.name(), tb_str(tiebreak))
            }
            Family::SuccessiveElimination { order } => format!("successive-elimination({})", order_str(order)),
            Family::Dictatorship { agent } => format!("dictatorship({agent})"),
            Family::Constant { alternative } => format!("constant({alternative})"),
            Family::Remark4x3 { order } => format!("bottom-count-4x3({})", order_str(order)),
            Family::MaxTop { order } => format!("max-top({})", order_str(order)),
            Family::AgentBottom { agent } => format!("bottom-of({agent})"),
            Family::TopsTable { .. } => "tops-table".to_string(),
        }
    }

    /// `f(P)` on a raw preference slice; the caller guarantees `n` and `m` match.
    #[inline]
    pub fn outcome(&self, prefs: &[Preference]) -> Result<Alternative> {
        debug_assert_eq!(prefs.len(), self.n);
        match &self.family {
            Family::ExtendedMajority { committee, x, y } => Ok(majority::winner_prefs(committee, *x, *y, prefs)),
            Family::Maxmin { tiebreak } => break_tie_prefs(maxmin::winners_prefs(prefs), tiebreak, prefs),
            Family::Scoring { scores, tiebreak } => {
                break_tie_prefs(scoring::winners_prefs(prefs, scores), tiebreak, prefs)
            }
            Family::Condorcet { variant, tiebreak } => {
                let t = PairwiseTally::from_prefs(prefs);
                if let Some(w) = condorcet::condorcet_winner_tally(&t) {
                    return Ok(w);
                }
                let winners = condorcet::variant_winners_prefs(*variant, prefs, &t)?;
                break_tie_prefs(winners, tiebreak, prefs)
            }
            Family::SuccessiveElimination { order } => Ok(elimination::winner_prefs(order, prefs)),
            Family::Dictatorship { agent } => Ok(prefs[agent - 1].top()),
            Family::Constant { alternative } => Ok(*alternative),
            Family::Remark4x3 { order } => Ok(remark_winner(order, prefs)),
            Family::MaxTop { order } => Ok(order
                .iter()
                .copied()
                .find(|&x| prefs.iter().any(|p| p.top() == x))
                .expect("every top appears in the order")),
            Family::AgentBottom { agent } => Ok(prefs[agent - 1].bottom()),
            Family::TopsTable { table } => {
                let code = prefs.iter().fold(0usize, |acc, p| acc * self.m + p.top().index());
                Ok(table[code])
            }
        }
    }
}

/// Condorcet winner if any; otherwise, among the alternatives fewest agents
/// rank last, those at least two agents prefer to each other such
/// alternative, resolved by `order`. An empty filter falls back to all
/// bottom-count minimizers.
pub(crate) fn remark_winner(order: &[Alternative], prefs: &[Preference]) -> Alternative {
    let t = PairwiseTally::from_prefs(prefs);
    if let Some(w) = condorcet::condorcet_winner_tally(&t) {
        return w;
    }
    let m = prefs[0].m();
    let mut bottoms = [0usize; MAX_ALTERNATIVES];
    for p in prefs {
        bottoms[p.bottom().index()] += 1;
    }
    let fewest = *bottoms[..m].iter().min().expect("m >= 1");
    let minimizers: AltSet = (0..m).filter(|&x| bottoms[x] == fewest).map(Alternative::new).collect();
    let filtered: AltSet = minimizers
        .iter()
        .filter(|&x| minimizers.iter().all(|y| x == y || t.get(x, y) >= 2))
        .collect();
    let pool = if filtered.is_empty() { minimizers } else { filtered };
    order.iter().copied().find(|&x| pool.contains(x)).expect("order covers X")
}

/// Star tie-breaks are only well defined when no two-agent profile produces
/// more than two scoring winners.
fn star_scoring_is_defined(scores: &ScoreVector, n: usize, m: usize) -> Result<()> {
    if n != 2 {
        return Err(Error::InvalidRule("a star tie-break needs n = 2".into()));
    }
    if m > STAR_SCORING_MAX_M {
        return Err(Error::InvalidRule(format!(
            "star tie-breaks for scoring rules are vetted only up to m={STAR_SCORING_MAX_M}"
        )));
    }
    let prefs = crate::prefcore::enumerate_preferences(m)?;
    for p in &prefs {
        for q in &prefs {
            let w = scoring::winners_prefs(&[*p, *q], scores);
            if w.len() > 2 {
                return Err(Error::InvalidRule(format!(
                    "scores {scores} tie {} alternatives at ({p}, {q}); a star tie-break is undefined",
                    w.len()
                )));
            }
        }
    }
    Ok(())
}

/// `f(P)` for a validated spec.
pub fn evaluate(spec: &RuleSpec, profile: &Profile) -> Result<Alternative> {
    spec.checks_scope(profile.n(), profile.m())?;
    spec.outcome(profile.prefs())
}

impl fmt::Display for RuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [n={}, m={}]", self.label(), self.n, self.m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alt(c: char) -> Alternative {
        Alternative((c as u8) - b'a')
    }

    fn order(s: &str) -> Vec<Alternative> {
        s.chars().map(alt).collect()
    }

    fn set(s: &str) -> AltSet {
        s.chars().map(alt).collect()
    }

    #[test]
    fn break_tie_examples() {
        let p = Profile::from_letters("a>b>c b>c>a").unwrap();
        assert_eq!(break_tie(set("ab"), &TieBreak::FixedOrder(order("bac")), &p).unwrap(), alt('b'));
        assert_eq!(break_tie(set("ab"), &TieBreak::Agent(2), &p).unwrap(), alt('b'));
        let star = StarRelation::from_pairs(3, &[(alt('a'), alt('b')), (alt('b'), alt('c')), (alt('c'), alt('a'))])
            .unwrap();
        let tb = TieBreak::StarRelation(star);
        assert_eq!(break_tie(set("bc"), &tb, &p).unwrap(), alt('b'));
        assert_eq!(break_tie(set("ac"), &tb, &p).unwrap(), alt('c'));
        assert!(matches!(break_tie(set("abc"), &tb, &p), Err(Error::Contract(_))));
    }

    #[test]
    fn star_relations_on_three() {
        let all = StarRelation::all(3);
        assert_eq!(all.len(), 8);
        assert_eq!(all.iter().filter(|r| r.is_transitive()).count(), 6);
        let abc = StarRelation::from_order(&order("abc")).unwrap();
        assert!(all.contains(&abc));
        assert!(StarRelation::from_pairs(3, &[(alt('a'), alt('b'))]).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let p = Profile::from_letters("a>b>c b>a>c").unwrap();
        assert_eq!(evaluate(&RuleSpec::a_maxmin(2, 3).unwrap(), &p).unwrap(), alt('a'));
        assert_eq!(evaluate(&RuleSpec::n_maxmin(2, 3, 2).unwrap(), &p).unwrap(), alt('b'));

        let five = Profile::from_letters("a>b>d>c a>c>d>b c>d>a>b c>b>d>a d>b>a>c").unwrap();
        let se = RuleSpec::successive_elimination(5, order("abcd")).unwrap();
        assert_eq!(evaluate(&se, &five).unwrap(), alt('d'));
    }

    #[test]
    fn remark_rule_outcomes() {
        let spec = RuleSpec::new(Family::Remark4x3 { order: order("abc") }, 4, 3).unwrap();
        // x, y, z written as a, b, c; agent 1 truthfully reports x>y>z
        let truthful = Profile::from_letters("a>b>c b>c>a b>c>a c>b>a").unwrap();
        assert_eq!(evaluate(&spec, &truthful).unwrap(), alt('b'));
        // a misreport with y at the top, which puts x or z at the bottom
        let misreport = Profile::from_letters("b>a>c b>c>a b>c>a c>b>a").unwrap();
        assert_eq!(evaluate(&spec, &misreport).unwrap(), alt('b'));
        let bottom_y = Profile::from_letters("a>c>b b>c>a b>c>a c>b>a").unwrap();
        assert_eq!(evaluate(&spec, &bottom_y).unwrap(), alt('c'));
    }

    #[test]
    fn validation() {
        assert!(RuleSpec::new(Family::Remark4x3 { order: order("abc") }, 3, 3).is_err());
        assert!(RuleSpec::n_maxmin(2, 3, 3).is_err());
        assert!(RuleSpec::n_maxmin(2, 3, 0).is_err());
        let star = TieBreak::StarRelation(StarRelation::all(3)[5].clone());
        assert!(RuleSpec::new(Family::Maxmin { tiebreak: star.clone() }, 2, 3).is_ok());
        assert!(RuleSpec::new(Family::Maxmin { tiebreak: star.clone() }, 3, 3).is_err());
        let s134 = ScoreVector::from_integers(&[1, 3, 4]).unwrap();
        assert!(RuleSpec::scoring(2, s134, star.clone()).is_ok());
        // Borda ties all three alternatives on (a>b>c, c>b>a)
        assert!(RuleSpec::scoring(2, ScoreVector::borda(3), star).is_err());
        let c = Committee::majority(3).unwrap();
        assert!(RuleSpec::new(Family::ExtendedMajority { committee: c.clone(), x: alt('a'), y: alt('b') }, 3, 2).is_ok());
        assert!(RuleSpec::new(Family::ExtendedMajority { committee: c, x: alt('a'), y: alt('b') }, 3, 3).is_err());
        assert!(RuleSpec::new(Family::TopsTable { table: vec![alt('a'); 8] }, 2, 3).is_err());
        assert!(evaluate(&RuleSpec::a_maxmin(2, 3).unwrap(), &Profile::from_letters("a>b>c").unwrap()).is_err());
    }

    #[test]
    fn tops_table_indexing() {
        // outcome = top of agent 2
        let table: Vec<Alternative> = (0..9).map(|c| Alternative::new(c % 3)).collect();
        let spec = RuleSpec::new(Family::TopsTable { table }, 2, 3).unwrap();
        let p = Profile::from_letters("a>b>c c>b>a").unwrap();
        assert_eq!(evaluate(&spec, &p).unwrap(), alt('c'));
    }

    #[test]
    fn spec_serde_round_trip() {
        let specs = vec![
            RuleSpec::a_maxmin(2, 3).unwrap(),
            RuleSpec::scoring(3, ScoreVector::dowdall(4), TieBreak::Agent(2)).unwrap(),
            RuleSpec::condorcet(3, 3, CondorcetVariant::Young, TieBreak::alphabetical(3)).unwrap(),
            RuleSpec::new(Family::Maxmin { tiebreak: TieBreak::StarRelation(StarRelation::all(3)[3].clone()) }, 2, 3)
                .unwrap(),
            RuleSpec::new(
                Family::ExtendedMajority { committee: Committee::majority(3).unwrap(), x: alt('a'), y: alt('b') },
                3,
                2,
            )
            .unwrap(),
        ];
        for s in specs {
            let json = serde_json::to_string(&s).unwrap();
            let back: RuleSpec = serde_json::from_str(&json).unwrap();
            assert_eq!(back, s, "{json}");
        }
        let bad = r#"{"n":3,"m":3,"family":"remark4x3","order":[0,1,2]}"#;
        assert!(serde_json::from_str::<RuleSpec>(bad).is_err());
    }
}
