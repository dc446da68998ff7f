//! Pairwise-majority scores and the six classical Condorcet extensions.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prefcore::{AltSet, Alternative, PairwiseTally, Preference, Profile};
use crate::rules::scoring::{self, ScoreVector};

/// Largest electorate for which Young scores enumerate voter subsets.
pub const YOUNG_MAX_AGENTS: usize = 20;

/// Largest number of profiles the Dodgson search may visit.
pub const DODGSON_STATE_BUDGET: usize = 1_000_000;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CondorcetVariant {
    Simpson,
    Copeland,
    Young,
    Dodgson,
    Fishburn,
    Black,
}

impl CondorcetVariant {
    pub const ALL: [CondorcetVariant; 6] = [
        CondorcetVariant::Simpson,
        CondorcetVariant::Copeland,
        CondorcetVariant::Young,
        CondorcetVariant::Dodgson,
        CondorcetVariant::Fishburn,
        CondorcetVariant::Black,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CondorcetVariant::Simpson => "simpson",
            CondorcetVariant::Copeland => "copeland",
            CondorcetVariant::Young => "young",
            CondorcetVariant::Dodgson => "dodgson",
            CondorcetVariant::Fishburn => "fishburn",
            CondorcetVariant::Black => "black",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.name() == s.trim().to_ascii_lowercase())
    }
}

pub(crate) fn condorcet_winner_tally(t: &PairwiseTally) -> Option<Alternative> {
    t.alternatives()
        .find(|&a| t.alternatives().all(|b| a == b || t.beats(a, b)))
}

/// The alternative beating every other by strict majority, if any.
pub fn condorcet_winner(profile: &Profile) -> Option<Alternative> {
    condorcet_winner_tally(&profile.tally())
}

/// Alternatives that beat or tie every other alternative.
pub fn weak_condorcet_winners(profile: &Profile) -> AltSet {
    let t = profile.tally();
    t.alternatives()
        .filter(|&a| t.alternatives().all(|b| a == b || t.get(a, b) >= t.get(b, a)))
        .collect()
}

pub(crate) fn simpson_tally(t: &PairwiseTally, a: Alternative) -> u32 {
    t.alternatives()
        .filter(|&b| b != a)
        .map(|b| t.get(a, b))
        .min()
        .unwrap_or(t.n() as u32)
}

/// `min_{b != a} C(a, b)`.
pub fn simpson_score(profile: &Profile, a: Alternative) -> Result<u32> {
    check_alt(profile, a)?;
    Ok(simpson_tally(&profile.tally(), a))
}

pub(crate) fn copeland_tally(t: &PairwiseTally, a: Alternative) -> i32 {
    t.alternatives()
        .filter(|&b| b != a)
        .map(|b| match t.get(a, b).cmp(&t.get(b, a)) {
            std::cmp::Ordering::Greater => 1,
            std::cmp::Ordering::Less => -1,
            std::cmp::Ordering::Equal => 0,
        })
        .sum()
}

/// Pairwise victories minus pairwise defeats.
pub fn copeland_score(profile: &Profile, a: Alternative) -> Result<i32> {
    check_alt(profile, a)?;
    Ok(copeland_tally(&profile.tally(), a))
}

pub(crate) fn young_prefs(prefs: &[Preference], a: Alternative) -> Result<usize> {
    let n = prefs.len();
    if n > YOUNG_MAX_AGENTS {
        return Err(Error::SpaceTooLarge {
            what: "Young score voter subsets".into(),
            size: 1u128 << n,
            budget: 1u128 << YOUNG_MAX_AGENTS,
        });
    }
    let m = prefs[0].m();
    // supporters[b]: agents ranking a above b
    let supporters: Vec<u32> = (0..m)
        .map(Alternative::new)
        .filter(|&b| b != a)
        .map(|b| {
            prefs
                .iter()
                .enumerate()
                .filter(|(_, p)| p.prefers(a, b))
                .fold(0u32, |acc, (i, _)| acc | (1 << i))
        })
        .collect();
    let best = (0..1u32 << n)
        .filter(|&s| {
            let size = s.count_ones();
            supporters.iter().all(|&sup| 2 * (sup & s).count_ones() >= size)
        })
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0);
    Ok(best)
}

/// Size of the largest voter subset within which `a` is a weak Condorcet winner.
pub fn young_score(profile: &Profile, a: Alternative) -> Result<usize> {
    check_alt(profile, a)?;
    young_prefs(profile.prefs(), a)
}

fn ties_or_beats_all(prefs: &[Preference], a: Alternative) -> bool {
    let m = prefs[0].m();
    (0..m).map(Alternative::new).filter(|&b| b != a).all(|b| {
        let above = prefs.iter().filter(|p| p.prefers(a, b)).count();
        2 * above >= prefs.len()
    })
}

pub(crate) fn dodgson_prefs(prefs: &[Preference], a: Alternative) -> Result<usize> {
    if ties_or_beats_all(prefs, a) {
        return Ok(0);
    }
    let m = prefs[0].m();
    let start: Vec<Preference> = prefs.to_vec();
    let mut seen: HashSet<Vec<Preference>> = HashSet::new();
    seen.insert(start.clone());
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((state, depth)) = queue.pop_front() {
        for voter in 0..state.len() {
            for slot in 0..m - 1 {
                let mut next = state.clone();
                next[voter] = state[voter].adjacent_swap(slot);
                if !seen.insert(next.clone()) {
                    continue;
                }
                if ties_or_beats_all(&next, a) {
                    return Ok(depth + 1);
                }
                if seen.len() > DODGSON_STATE_BUDGET {
                    return Err(Error::SpaceTooLarge {
                        what: "Dodgson search".into(),
                        size: seen.len() as u128,
                        budget: DODGSON_STATE_BUDGET as u128,
                    });
                }
                queue.push_back((next, depth + 1));
            }
        }
    }
    unreachable!("a can always be lifted to the top of every ranking")
}

/// Fewest adjacent transpositions after which `a` ties or beats every other
/// alternative by simple majority.
pub fn dodgson_score(profile: &Profile, a: Alternative) -> Result<usize> {
    check_alt(profile, a)?;
    dodgson_prefs(profile.prefs(), a)
}

/// `a F b`: every alternative beating `a` also beats `b`, and some `w`
/// beats `b` while `a` ties or beats `w`.
pub(crate) fn fishburn_dominates(t: &PairwiseTally, a: Alternative, b: Alternative) -> bool {
    let covers = t.alternatives().all(|x| !t.beats(x, a) || t.beats(x, b));
    let witness = t
        .alternatives()
        .any(|w| t.beats(w, b) && t.get(a, w) >= t.get(w, a));
    covers && witness
}

pub(crate) fn fishburn_tally(t: &PairwiseTally) -> AltSet {
    let out: AltSet = t
        .alternatives()
        .filter(|&b| !t.alternatives().any(|a| a != b && fishburn_dominates(t, a, b)))
        .collect();
    debug_assert!(!out.is_empty());
    out
}

/// Alternatives not dominated under the Fishburn relation.
pub fn fishburn_maximals(profile: &Profile) -> AltSet {
    fishburn_tally(&profile.tally())
}

pub(crate) fn black_prefs(prefs: &[Preference], t: &PairwiseTally) -> AltSet {
    match condorcet_winner_tally(t) {
        Some(w) => AltSet::singleton(w),
        None => scoring::winners_prefs(prefs, &ScoreVector::borda(prefs[0].m())),
    }
}

/// The Condorcet winner when one exists, otherwise the Borda winners.
pub fn black_winners(profile: &Profile) -> AltSet {
    black_prefs(profile.prefs(), &profile.tally())
}

fn argmax_by<K: Ord + Copy>(t: &PairwiseTally, key: impl Fn(Alternative) -> K) -> AltSet {
    let keys: Vec<(Alternative, K)> = t.alternatives().map(|a| (a, key(a))).collect();
    let best = keys.iter().map(|&(_, k)| k).max().expect("m >= 1");
    keys.into_iter().filter(|&(_, k)| k == best).map(|(a, _)| a).collect()
}

/// Winner set of a variant, before any Condorcet short-circuit or tie-break.
pub(crate) fn variant_winners_prefs(
    variant: CondorcetVariant,
    prefs: &[Preference],
    t: &PairwiseTally,
) -> Result<AltSet> {
    Ok(match variant {
        CondorcetVariant::Simpson => argmax_by(t, |a| simpson_tally(t, a)),
        CondorcetVariant::Copeland => argmax_by(t, |a| copeland_tally(t, a)),
        CondorcetVariant::Young => {
            let scores = t
                .alternatives()
                .map(|a| young_prefs(prefs, a))
                .collect::<Result<Vec<_>>>()?;
            argmax_by(t, |a| scores[a.index()])
        }
        CondorcetVariant::Dodgson => {
            let scores = t
                .alternatives()
                .map(|a| dodgson_prefs(prefs, a))
                .collect::<Result<Vec<_>>>()?;
            argmax_by(t, |a| std::cmp::Reverse(scores[a.index()]))
        }
        CondorcetVariant::Fishburn => fishburn_tally(t),
        CondorcetVariant::Black => black_prefs(prefs, t),
    })
}

pub fn variant_winners(variant: CondorcetVariant, profile: &Profile) -> Result<AltSet> {
    variant_winners_prefs(variant, profile.prefs(), &profile.tally())
}

/// Number of agents ranking `x` last.
pub fn bottom_count(profile: &Profile, x: Alternative) -> Result<usize> {
    check_alt(profile, x)?;
    Ok(profile.prefs().iter().filter(|p| p.bottom() == x).count())
}

fn check_alt(profile: &Profile, a: Alternative) -> Result<()> {
    if a.index() >= profile.m() {
        return Err(Error::Domain(format!(
            "alternative {} out of range for m={}",
            a.index(),
            profile.m()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn alt(c: char) -> Alternative {
        Alternative((c as u8) - b'a')
    }

    fn set(s: &str) -> AltSet {
        s.chars().map(alt).collect()
    }

    fn cyclic() -> Profile {
        Profile::from_letters("a>b>c b>c>a c>a>b").unwrap()
    }

    fn simpson_profile() -> Profile {
        Profile::from_letters("b>a>c c>b>a c>b>a a>c>b").unwrap()
    }

    fn copeland_profile() -> Profile {
        Profile::from_letters("b>a>c c>a>b c>b>a a>c>b").unwrap()
    }

    fn unanimous() -> Profile {
        Profile::from_letters("a>b>c a>b>c a>b>c").unwrap()
    }

    #[test]
    fn condorcet_winner_examples() {
        assert_eq!(condorcet_winner(&cyclic()), None);
        assert_eq!(condorcet_winner(&unanimous()), Some(alt('a')));
        // x>y>z, y>z>x, y>z>x, z>y>x with x,y,z = a,b,c
        let remark = Profile::from_letters("a>b>c b>c>a b>c>a c>b>a").unwrap();
        assert_eq!(condorcet_winner(&remark), Some(alt('b')));
        assert_eq!(weak_condorcet_winners(&cyclic()), AltSet::EMPTY);
        // a and c tie head-to-head and both beat b
        assert_eq!(weak_condorcet_winners(&copeland_profile()), set("ac"));
    }

    #[test]
    fn simpson_examples() {
        let p = simpson_profile();
        assert_eq!(simpson_score(&p, alt('c')).unwrap(), 2);
        assert_eq!(simpson_score(&p, alt('a')).unwrap(), 1);
        assert_eq!(simpson_score(&p, alt('b')).unwrap(), 1);
        assert_eq!(simpson_score(&unanimous(), alt('a')).unwrap(), 3);
        for x in "abc".chars() {
            assert_eq!(simpson_score(&cyclic(), alt(x)).unwrap(), 1);
        }
    }

    #[test]
    fn copeland_examples() {
        let p = copeland_profile();
        assert_eq!(copeland_score(&p, alt('c')).unwrap(), 1);
        assert_eq!(copeland_score(&p, alt('a')).unwrap(), 0);
        assert_eq!(copeland_score(&p, alt('b')).unwrap(), -1);
        for x in "abc".chars() {
            assert_eq!(copeland_score(&cyclic(), alt(x)).unwrap(), 0);
        }
        assert_eq!(copeland_score(&unanimous(), alt('a')).unwrap(), 2);
    }

    /// Independent Young oracle: literal subset enumeration via itertools.
    fn young_oracle(p: &Profile, a: Alternative) -> usize {
        let n = p.n();
        (0..=n)
            .rev()
            .find(|&size| {
                (0..n).combinations(size).any(|sub| {
                    (0..p.m()).map(Alternative::new).filter(|&b| b != a).all(|b| {
                        let sup = sub.iter().filter(|&&i| p.pref(i).prefers(a, b)).count();
                        2 * sup >= sub.len()
                    })
                })
            })
            .unwrap()
    }

    #[test]
    fn young_examples() {
        assert_eq!(young_score(&unanimous(), alt('a')).unwrap(), 3);
        assert_eq!(young_score(&cyclic(), alt('a')).unwrap(), 2);
        assert_eq!(young_oracle(&cyclic(), alt('a')), 2);
        for x in "abc".chars() {
            let s = young_score(&simpson_profile(), alt(x)).unwrap();
            assert_eq!(s, young_oracle(&simpson_profile(), alt(x)));
        }
    }

    #[test]
    fn young_agrees_with_oracle_on_all_3x3_profiles() {
        for p in crate::prefcore::enumerate_profiles(3, 3).unwrap() {
            for x in 0..3 {
                let a = Alternative::new(x);
                assert_eq!(young_score(&p, a).unwrap(), young_oracle(&p, a), "{p}");
            }
        }
    }

    /// Dodgson oracle that only ever raises `a`: try every vector of per-voter
    /// lifts and keep the cheapest one that works.
    fn dodgson_raise_oracle(p: &Profile, a: Alternative) -> usize {
        let m = p.m();
        p.prefs()
            .iter()
            .map(|q| 0..=(m - q.rank(a)))
            .multi_cartesian_product()
            .filter(|lifts| {
                let moved: Vec<Preference> = p
                    .prefs()
                    .iter()
                    .zip(lifts)
                    .map(|(q, &d)| {
                        let mut q = *q;
                        for _ in 0..d {
                            let slot = m - q.rank(a) - 1;
                            q = q.adjacent_swap(slot);
                        }
                        q
                    })
                    .collect();
                ties_or_beats_all(&moved, a)
            })
            .map(|lifts| lifts.iter().sum())
            .min()
            .unwrap()
    }

    #[test]
    fn dodgson_examples() {
        assert_eq!(dodgson_score(&unanimous(), alt('a')).unwrap(), 0);
        assert_eq!(dodgson_score(&cyclic(), alt('a')).unwrap(), 1);
        // a and c tie each other and beat b: both weak Condorcet winners
        assert_eq!(dodgson_score(&copeland_profile(), alt('a')).unwrap(), 0);
        assert_eq!(dodgson_score(&copeland_profile(), alt('c')).unwrap(), 0);
    }

    #[test]
    fn dodgson_bfs_matches_raise_only_oracle() {
        for p in crate::prefcore::enumerate_profiles(3, 3).unwrap() {
            for x in 0..3 {
                let a = Alternative::new(x);
                assert_eq!(dodgson_score(&p, a).unwrap(), dodgson_raise_oracle(&p, a), "{p}");
            }
        }
        let p = Profile::from_letters("b>c>a>d c>d>b>a d>b>c>a a>b>c>d").unwrap();
        for x in 0..4 {
            let a = Alternative::new(x);
            assert_eq!(dodgson_score(&p, a).unwrap(), dodgson_raise_oracle(&p, a));
        }
    }

    #[test]
    fn fishburn_examples() {
        assert_eq!(fishburn_maximals(&simpson_profile()), set("c"));
        assert!(fishburn_maximals(&unanimous()).contains(alt('a')));
        assert_eq!(fishburn_maximals(&cyclic()), set("abc"));
    }

    #[test]
    fn black_examples() {
        let p = copeland_profile();
        assert_eq!(condorcet_winner(&p), None);
        let borda = ScoreVector::borda(3);
        let s: Vec<i64> = "abc"
            .chars()
            .map(|x| scoring::score(&p, alt(x), &borda).unwrap().to_integer())
            .collect();
        assert_eq!(s, vec![8, 7, 9]);
        assert_eq!(black_winners(&p), set("c"));
        assert_eq!(black_winners(&unanimous()), set("a"));
        assert_eq!(black_winners(&cyclic()), set("abc"));
    }

    #[test]
    fn variant_winners_on_fixture_profiles() {
        for v in [
            CondorcetVariant::Simpson,
            CondorcetVariant::Young,
            CondorcetVariant::Dodgson,
            CondorcetVariant::Fishburn,
        ] {
            assert_eq!(variant_winners(v, &simpson_profile()).unwrap(), set("c"), "{v:?}");
        }
        for v in [CondorcetVariant::Copeland, CondorcetVariant::Black] {
            assert_eq!(variant_winners(v, &copeland_profile()).unwrap(), set("c"), "{v:?}");
        }
    }

    #[test]
    fn bottom_counts() {
        let p = Profile::from_letters("a>c>b b>c>a b>c>a c>b>a").unwrap();
        assert_eq!(bottom_count(&p, alt('a')).unwrap(), 3);
        let u = Profile::from_letters("a>b>c a>b>c a>b>c a>b>c").unwrap();
        assert_eq!(bottom_count(&u, alt('c')).unwrap(), 4);
        for x in "abc".chars() {
            assert_eq!(bottom_count(&cyclic(), alt(x)).unwrap(), 1);
        }
    }
}
