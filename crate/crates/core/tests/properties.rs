use std::collections::HashMap;

use proptest::prelude::*;
use rgf_core::axioms::{recheck, Axiom, CheckConfig, Checker, Mode, Status};
use rgf_core::engine::{decode, encode, EngineConfig};
use rgf_core::prefcore::{enumerate_preferences, Alternative, Permutation, Preference, Profile, ProfileSpace};
use rgf_core::rules::{
    condorcet_winner, evaluate, maxmin_winners, scoring_winners, CondorcetVariant, Family, Rational, RuleSpec,
    ScoreVector, StarRelation, TieBreak,
};

fn pref_strategy(m: usize) -> impl Strategy<Value = Preference> {
    Just((0..m).collect::<Vec<usize>>()).prop_shuffle().prop_map(|v| Preference::from_indices(&v).unwrap())
}

fn profile_strategy(n: usize, m: usize) -> impl Strategy<Value = Profile> {
    proptest::collection::vec(pref_strategy(m), n).prop_map(|v| Profile::new(v).unwrap())
}

fn sized_profile() -> impl Strategy<Value = Profile> {
    (1usize..=5, 2usize..=5).prop_flat_map(|(n, m)| profile_strategy(n, m))
}

fn perm_strategy(k: usize) -> impl Strategy<Value = Permutation> {
    Just((0..k).collect::<Vec<usize>>()).prop_shuffle().prop_map(|v| Permutation::new(v).unwrap())
}

proptest! {
    #[test]
    fn rank_round_trip(p in (2usize..=8).prop_flat_map(pref_strategy)) {
        for k in 1..=p.m() {
            prop_assert_eq!(p.rank_of(p.alternative_at(k).unwrap()).unwrap(), k);
        }
        prop_assert_eq!(Preference::from_lex_index(p.m(), p.lex_index()).unwrap(), p);
    }

    #[test]
    fn tally_is_complementary(p in sized_profile()) {
        let t = p.tally();
        for a in 0..p.m() {
            for b in 0..p.m() {
                if a != b {
                    let (a, b) = (Alternative::new(a), Alternative::new(b));
                    prop_assert_eq!((t.get(a, b) + t.get(b, a)) as usize, p.n());
                }
            }
        }
    }

    #[test]
    fn alternative_action_laws((p, s, t) in (2usize..=5).prop_flat_map(|m| (pref_strategy(m), perm_strategy(m), perm_strategy(m)))) {
        let id = Permutation::identity(p.m());
        prop_assert_eq!(p.permute_alternatives(&id).unwrap(), p);
        let both = p.permute_alternatives(&s).unwrap().permute_alternatives(&t).unwrap();
        prop_assert_eq!(both, p.permute_alternatives(&t.compose(&s).unwrap()).unwrap());
    }

    #[test]
    fn agent_action_laws((p, s, t) in (1usize..=5, 2usize..=4).prop_flat_map(|(n, m)| (profile_strategy(n, m), perm_strategy(n), perm_strategy(n)))) {
        let id = Permutation::identity(p.n());
        prop_assert_eq!(p.permute_agents(&id).unwrap(), p.clone());
        let both = p.permute_agents(&s).unwrap().permute_agents(&t).unwrap();
        prop_assert_eq!(both, p.permute_agents(&s.compose(&t).unwrap()).unwrap());
        prop_assert_eq!(p.permute_agents(&s).unwrap().permute_agents(&s.inverse()).unwrap(), p);
    }

    #[test]
    fn encode_round_trip(p in sized_profile()) {
        prop_assert_eq!(decode(p.n(), p.m(), encode(&p)).unwrap(), p);
    }

    #[test]
    fn scoring_argmax_is_affine_invariant(
        (p, raw) in (1usize..=5, 2usize..=5).prop_flat_map(|(n, m)| (profile_strategy(n, m), proptest::collection::vec(0i64..6, m))),
        alpha in 1i64..5,
        beta in -5i64..5,
        denom in 1i64..4,
    ) {
        let mut s = raw.clone();
        s.sort();
        prop_assume!(s[0] < s[s.len() - 1]);
        let sv = ScoreVector::from_integers(&s).unwrap();
        let moved = ScoreVector::new(s.iter().map(|&v| Rational::new(alpha * v + beta, denom)).collect()).unwrap();
        prop_assert_eq!(scoring_winners(&p, &sv).unwrap(), scoring_winners(&p, &moved).unwrap());
    }
}

fn alt(c: char) -> Alternative {
    Alternative::new((c as u8 - b'a') as usize)
}

#[test]
fn enumeration_sizes() {
    for (m, size) in [(2, 2), (3, 6), (4, 24), (5, 120)] {
        let all = enumerate_preferences(m).unwrap();
        assert_eq!(all.len(), size);
        let mut dedup = all.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), size);
    }
    assert_eq!(ProfileSpace::new(4, 3).unwrap().iter().count(), 1296);
}

/// Plurality with a fixed order against a direct top count.
#[test]
fn plurality_is_most_tops() {
    let spec = RuleSpec::scoring(3, ScoreVector::plurality(3), TieBreak::alphabetical(3)).unwrap();
    for p in ProfileSpace::new(3, 3).unwrap().iter() {
        let mut count = [0usize; 3];
        for t in p.tops() {
            count[t.index()] += 1;
        }
        let best = *count.iter().max().unwrap();
        let expected = (0..3).find(|&x| count[x] == best).unwrap();
        assert_eq!(evaluate(&spec, &p).unwrap(), Alternative::new(expected), "{p}");
    }
}

/// With two agents and three alternatives, maxmin winners are the (1,3,4)
/// scoring winners, and N-maxmin picks what N-negative-plurality picks.
/// The negative plurality winner set itself can be larger.
#[test]
fn two_agent_rules_coincide() {
    let s134 = ScoreVector::from_integers(&[1, 3, 4]).unwrap();
    for p in ProfileSpace::new(2, 3).unwrap().iter() {
        assert_eq!(scoring_winners(&p, &s134).unwrap(), maxmin_winners(&p), "{p}");
    }
    for agent in [1, 2] {
        let mm = RuleSpec::n_maxmin(2, 3, agent).unwrap();
        let neg = RuleSpec::scoring(2, ScoreVector::negative_plurality(3), TieBreak::Agent(agent)).unwrap();
        for p in ProfileSpace::new(2, 3).unwrap().iter() {
            assert_eq!(evaluate(&mm, &p).unwrap(), evaluate(&neg, &p).unwrap(), "{p}");
        }
    }
    let p = Profile::from_letters("a>b>c a>b>c").unwrap();
    let neg = ScoreVector::negative_plurality(3);
    assert_eq!(scoring_winners(&p, &neg).unwrap().len(), 2);
    assert_eq!(maxmin_winners(&p).len(), 1);
}

#[test]
fn condorcet_variants_pick_the_condorcet_winner() {
    for variant in CondorcetVariant::ALL {
        for tb in [TieBreak::alphabetical(3), TieBreak::Agent(2)] {
            let spec = RuleSpec::condorcet(3, 3, variant, tb).unwrap();
            for p in ProfileSpace::new(3, 3).unwrap().iter() {
                if let Some(w) = condorcet_winner(&p) {
                    assert_eq!(evaluate(&spec, &p).unwrap(), w, "{spec} {p}");
                }
            }
        }
    }
}

/// Rules exercised by the cross-checks below.
fn catalog(n: usize, m: usize) -> Vec<RuleSpec> {
    let abc = TieBreak::alphabetical(m);
    let order: Vec<Alternative> = (0..m).map(Alternative::new).collect();
    let mut out = vec![
        RuleSpec::a_maxmin(n, m).unwrap(),
        RuleSpec::n_maxmin(n, m, 1).unwrap(),
        RuleSpec::scoring(n, ScoreVector::borda(m), abc.clone()).unwrap(),
        RuleSpec::scoring(n, ScoreVector::plurality(m), TieBreak::Agent(n)).unwrap(),
        RuleSpec::scoring(n, ScoreVector::negative_plurality(m), abc.clone()).unwrap(),
        RuleSpec::scoring(n, ScoreVector::dowdall(m), abc.clone()).unwrap(),
        RuleSpec::successive_elimination(n, order.clone()).unwrap(),
        RuleSpec::dictatorship(n, m, 1).unwrap(),
        RuleSpec::constant(n, m, Alternative::new(0)).unwrap(),
        RuleSpec::new(Family::MaxTop { order: order.clone() }, n, m).unwrap(),
        RuleSpec::new(Family::AgentBottom { agent: 1 }, n, m).unwrap(),
    ];
    for variant in [CondorcetVariant::Simpson, CondorcetVariant::Copeland, CondorcetVariant::Black] {
        out.push(RuleSpec::condorcet(n, m, variant, abc.clone()).unwrap());
    }
    if n == 2 && m == 3 {
        for rel in StarRelation::all(3) {
            out.push(RuleSpec::new(Family::Maxmin { tiebreak: TieBreak::StarRelation(rel) }, 2, 3).unwrap());
        }
    }
    out
}

/// Outcomes of every profile, computed one by one.
fn outcomes(spec: &RuleSpec) -> HashMap<Profile, Alternative> {
    ProfileSpace::new(spec.n(), spec.m())
        .unwrap()
        .iter()
        .map(|p| {
            let x = evaluate(spec, &p).unwrap();
            (p, x)
        })
        .collect()
}

fn naive_strategy_proof(spec: &RuleSpec, f: &HashMap<Profile, Alternative>) -> bool {
    let prefs = enumerate_preferences(spec.m()).unwrap();
    f.iter().all(|(p, &x)| {
        (0..spec.n()).all(|i| prefs.iter().all(|&q| !p.pref(i).prefers(f[&p.with_pref(i, q).unwrap()], x)))
    })
}

/// The regret-free definition read literally: every profitable deviation
/// has a truthful-outcome-consistent report of the others under which it hurts.
fn naive_regret_free(spec: &RuleSpec, f: &HashMap<Profile, Alternative>) -> bool {
    let prefs = enumerate_preferences(spec.m()).unwrap();
    for (p, &x) in f {
        for i in 0..spec.n() {
            let t = *p.pref(i);
            for &q in &prefs {
                if !t.prefers(f[&p.with_pref(i, q).unwrap()], x) {
                    continue;
                }
                let hurts_somewhere = f.iter().any(|(s, &fx)| {
                    *s.pref(i) == t && fx == x && t.prefers(x, f[&s.with_pref(i, q).unwrap()])
                });
                if !hurts_somewhere {
                    return false;
                }
            }
        }
    }
    true
}

fn naive_monotone(spec: &RuleSpec, f: &HashMap<Profile, Alternative>) -> bool {
    let prefs = enumerate_preferences(spec.m()).unwrap();
    f.iter().all(|(p, &x)| {
        (0..spec.n()).all(|i| {
            let pi = p.pref(i);
            let k = pi.rank(x);
            prefs
                .iter()
                .filter(|q| (1..=k).all(|j| q.at(j) == pi.at(j)))
                .all(|&q| !pi.prefers(x, f[&p.with_pref(i, q).unwrap()]))
        })
    })
}

fn status(b: bool) -> Status {
    if b {
        Status::Holds
    } else {
        Status::Violated
    }
}

#[test]
fn checker_agrees_with_naive_definitions() {
    for (n, m) in [(2, 3), (3, 3), (2, 4)] {
        for spec in catalog(n, m) {
            let f = outcomes(&spec);
            let checker = Checker::new(&spec, &CheckConfig::default()).unwrap();
            let rf = checker.check(Axiom::RegretFree, Mode::Exhaustive).unwrap();
            let sp = checker.check(Axiom::StrategyProof, Mode::Exhaustive).unwrap();
            let mono = checker.check(Axiom::Monotone, Mode::Exhaustive).unwrap();
            assert_eq!(rf.status, status(naive_regret_free(&spec, &f)), "{spec} regret-free");
            assert_eq!(sp.status, status(naive_strategy_proof(&spec, &f)), "{spec} strategy-proof");
            assert_eq!(mono.status, status(naive_monotone(&spec, &f)), "{spec} monotone");
            if sp.holds() {
                assert!(rf.holds(), "{spec}: strategy-proof but not regret-free");
            }
            if !mono.holds() {
                let maskin = checker.check(Axiom::MaskinMonotone, Mode::Exhaustive).unwrap();
                assert_eq!(maskin.status, Status::Violated, "{spec}");
            }
        }
    }
}

#[test]
fn every_checker_witness_rechecks() {
    for (n, m) in [(2, 3), (3, 3)] {
        for spec in catalog(n, m) {
            let checker = Checker::new(&spec, &CheckConfig::default()).unwrap();
            for axiom in Axiom::ALL {
                let v = checker.check(axiom, Mode::Exhaustive).unwrap();
                if let Some(w) = &v.witness {
                    assert_eq!(w.axiom(), axiom);
                    assert!(recheck(&spec, w).unwrap(), "{spec} {axiom} {w:?}");
                }
            }
        }
    }
}

#[test]
fn unanimous_tops_win() {
    for (n, m) in [(2, 3), (3, 3)] {
        for spec in catalog(n, m) {
            let top_tie = match spec.family() {
                Family::Scoring { scores, tiebreak: TieBreak::FixedOrder(_) } => scores.score_at(m - 1) == scores.score_at(m),
                Family::Constant { .. } | Family::AgentBottom { .. } => true,
                _ => false,
            };
            if top_tie {
                continue;
            }
            for p in ProfileSpace::new(n, m).unwrap().iter() {
                let top = p.pref(0).top();
                if p.tops().iter().all(|&t| t == top) {
                    assert_eq!(evaluate(&spec, &p).unwrap(), top, "{spec} {p}");
                }
            }
        }
    }
    let constant = RuleSpec::constant(2, 3, alt('a')).unwrap();
    let p = Profile::from_letters("b>a>c b>c>a").unwrap();
    assert_eq!(evaluate(&constant, &p).unwrap(), alt('a'));
    let neg = RuleSpec::scoring(2, ScoreVector::negative_plurality(3), TieBreak::alphabetical(3)).unwrap();
    let p = Profile::from_letters("b>a>c b>a>c").unwrap();
    assert_eq!(evaluate(&neg, &p).unwrap(), alt('a'));
}

/// Table, class quotient and worker count never change a verdict or witness.
#[test]
fn engine_paths_agree() {
    let configs = [
        CheckConfig::default(),
        CheckConfig { engine: EngineConfig { use_table: false, ..Default::default() }, ..Default::default() },
        CheckConfig { engine: EngineConfig { use_classes: false, ..Default::default() }, ..Default::default() },
        CheckConfig { workers: Some(1), ..Default::default() },
        CheckConfig { workers: Some(2), ..Default::default() },
    ];
    for (n, m) in [(2, 3), (3, 3)] {
        for spec in catalog(n, m) {
            let checkers: Vec<Checker> = configs.iter().map(|c| Checker::new(&spec, c).unwrap()).collect();
            for axiom in Axiom::ALL {
                let base = checkers[0].check(axiom, Mode::Exhaustive).unwrap();
                for c in &checkers[1..] {
                    let v = c.check(axiom, Mode::Exhaustive).unwrap();
                    assert_eq!(v, base, "{spec} {axiom}");
                }
            }
        }
    }
}
