//! Ballot equivalence classes.
//!
//! Many rules read an agent's ranking only through a coarser feature: its
//! top, its bottom, or which score level each alternative sits at. Two
//! rankings with the same feature are interchangeable for that agent, so
//! quantifiers over "all reports of the other agents" can range over one
//! representative per class. Representatives are the lexicographically
//! first member, and classes are numbered in representative order.

use std::collections::HashMap;

use crate::prefcore::{Alternative, Preference, ProfileSpace};
use crate::rules::{Family, RuleSpec, TieBreak};

#[derive(Clone, Debug)]
struct AgentClasses {
    class_of: Vec<u32>,
    reps: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct BallotClasses {
    agents: Vec<AgentClasses>,
}

/// What the rule reads from one agent's ballot.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Feature {
    Everything,
    Nothing,
    Top,
    Bottom,
    ScoreLevels,
}

fn feature(spec: &RuleSpec, agent: usize) -> Feature {
    let is = |a: usize| a == agent + 1;
    match spec.family() {
        Family::Scoring { tiebreak: TieBreak::Agent(j), .. } if is(*j) => Feature::Everything,
        Family::Scoring { .. } => Feature::ScoreLevels,
        Family::Dictatorship { agent } if is(*agent) => Feature::Top,
        Family::AgentBottom { agent } if is(*agent) => Feature::Bottom,
        Family::Dictatorship { .. } | Family::AgentBottom { .. } | Family::Constant { .. } => Feature::Nothing,
        Family::MaxTop { .. } | Family::TopsTable { .. } | Family::ExtendedMajority { .. } => Feature::Top,
        _ => Feature::Everything,
    }
}

fn key(spec: &RuleSpec, f: Feature, idx: u32, p: &Preference) -> u64 {
    match f {
        Feature::Everything => idx as u64,
        Feature::Nothing => 0,
        Feature::Top => p.top().index() as u64,
        Feature::Bottom => p.bottom().index() as u64,
        Feature::ScoreLevels => {
            let Family::Scoring { scores, .. } = spec.family() else {
                unreachable!("score levels only apply to scoring rules")
            };
            let levels = scores.position_classes();
            (0..p.m()).fold(0u64, |acc, x| acc * 8 + levels[p.rank(Alternative::new(x)) - 1] as u64)
        }
    }
}

impl BallotClasses {
    /// One class per ranking.
    pub fn identity(space: &ProfileSpace) -> Self {
        let all: Vec<u32> = (0..space.radix() as u32).collect();
        let agent = AgentClasses { class_of: all.clone(), reps: all };
        BallotClasses { agents: vec![agent; space.n()] }
    }

    pub fn for_spec(spec: &RuleSpec, space: &ProfileSpace) -> Self {
        let agents = (0..space.n())
            .map(|agent| {
                let f = feature(spec, agent);
                let mut ids: HashMap<u64, u32> = HashMap::new();
                let mut reps = Vec::new();
                let class_of = space
                    .preferences()
                    .iter()
                    .enumerate()
                    .map(|(idx, p)| {
                        let k = key(spec, f, idx as u32, p);
                        *ids.entry(k).or_insert_with(|| {
                            reps.push(idx as u32);
                            reps.len() as u32 - 1
                        })
                    })
                    .collect();
                AgentClasses { class_of, reps }
            })
            .collect();
        BallotClasses { agents }
    }

    pub fn count(&self, agent: usize) -> usize {
        self.agents[agent].reps.len()
    }

    #[inline]
    pub fn class_of(&self, agent: usize, idx: u32) -> u32 {
        self.agents[agent].class_of[idx as usize]
    }

    /// Ranking index of the representative of `class`.
    #[inline]
    pub fn rep(&self, agent: usize, class: usize) -> u32 {
        self.agents[agent].reps[class]
    }

    pub fn reps(&self, agent: usize) -> &[u32] {
        &self.agents[agent].reps
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::{evaluate, Committee, ScoreVector, StarRelation};

    fn catalog(n: usize, m: usize) -> Vec<RuleSpec> {
        let mut out = vec![
            RuleSpec::a_maxmin(n, m).unwrap(),
            RuleSpec::scoring(n, ScoreVector::borda(m), TieBreak::alphabetical(m)).unwrap(),
            RuleSpec::scoring(n, ScoreVector::plurality(m), TieBreak::Agent(n)).unwrap(),
            RuleSpec::scoring(n, ScoreVector::approval(m, 2).unwrap(), TieBreak::alphabetical(m)).unwrap(),
            RuleSpec::dictatorship(n, m, 1).unwrap(),
            RuleSpec::constant(n, m, Alternative(1)).unwrap(),
            RuleSpec::new(Family::AgentBottom { agent: n }, n, m).unwrap(),
            RuleSpec::new(Family::MaxTop { order: (0..m).rev().map(Alternative::new).collect() }, n, m)
                .unwrap(),
        ];
        if n == 2 && m == 3 {
            let star = StarRelation::all(3)[6].clone();
            let s = ScoreVector::from_integers(&[1, 3, 4]).unwrap();
            out.push(RuleSpec::scoring(2, s, TieBreak::StarRelation(star)).unwrap());
        }
        out
    }

    /// Replacing any ballot by its class representative never changes the outcome.
    #[test]
    fn representatives_are_interchangeable() {
        for (n, m) in [(2, 3), (3, 3), (2, 4)] {
            let space = ProfileSpace::new(n, m).unwrap();
            for spec in catalog(n, m) {
                let classes = BallotClasses::for_spec(&spec, &space);
                let mut d = vec![0u32; n];
                for code in 0..space.size() as u64 {
                    space.digits(code, &mut d);
                    let base = evaluate(&spec, &space.profile_from_digits(&d)).unwrap();
                    for agent in 0..n {
                        let mut e = d.clone();
                        e[agent] = classes.rep(agent, classes.class_of(agent, d[agent]) as usize);
                        let swapped = evaluate(&spec, &space.profile_from_digits(&e)).unwrap();
                        assert_eq!(base, swapped, "{spec} at {code}");
                    }
                }
            }
        }
    }

    #[test]
    fn class_counts() {
        let space = ProfileSpace::new(3, 7).unwrap();
        let spec = RuleSpec::scoring(3, ScoreVector::approval(7, 5).unwrap(), TieBreak::alphabetical(7)).unwrap();
        let c = BallotClasses::for_spec(&spec, &space);
        assert_eq!(c.count(0), 21);
        assert_eq!(c.rep(0, 0), 0);
        assert!(c.reps(0).windows(2).all(|w| w[0] < w[1]));

        let space = ProfileSpace::new(2, 3).unwrap();
        let spec = RuleSpec::dictatorship(2, 3, 2).unwrap();
        let c = BallotClasses::for_spec(&spec, &space);
        assert_eq!((c.count(0), c.count(1)), (1, 3));

        let spec = RuleSpec::new(
            Family::ExtendedMajority { committee: Committee::majority(2).unwrap(), x: Alternative(0), y: Alternative(1) },
            2,
            2,
        )
        .unwrap();
        let c = BallotClasses::for_spec(&spec, &ProfileSpace::new(2, 2).unwrap());
        assert_eq!(c.count(0), 2);
    }
}
