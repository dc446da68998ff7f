use rgf_core::axioms::{
    check, check_condorcet_consistent, check_maskin_monotone, check_monotone, check_regret_free, check_simple_axiom,
    check_strategy_proof, check_tops_only, recheck, Axiom, CheckConfig, Checker, Coverage, Mode, Status, Witness,
};
use rgf_core::engine::EngineConfig;
use rgf_core::prefcore::{Alternative, Preference, Profile};
use rgf_core::rules::{evaluate, Committee, CondorcetVariant, Family, RuleSpec, ScoreVector, TieBreak};

const EX: Mode = Mode::Exhaustive;

fn alt(c: char) -> Alternative {
    Alternative((c as u8) - b'a')
}

fn abc(m: usize) -> TieBreak {
    TieBreak::alphabetical(m)
}

#[test]
fn dictatorship_is_strategy_proof_and_regret_free() {
    for (n, m) in [(2, 3), (3, 3)] {
        let d = RuleSpec::dictatorship(n, m, 1).unwrap();
        let v = check_strategy_proof(&d, EX).unwrap();
        assert_eq!((v.status, v.coverage), (Status::Holds, Coverage::Exhaustive));
        assert!(check_regret_free(&d, EX).unwrap().holds());
        let dict = check_simple_axiom(&d, Axiom::Dictatorial, EX).unwrap();
        assert_eq!(dict.dictator, Some(1));
    }
}

#[test]
fn extended_majority_is_strategy_proof() {
    let spec = RuleSpec::new(
        Family::ExtendedMajority { committee: Committee::majority(3).unwrap(), x: alt('a'), y: alt('b') },
        3,
        2,
    )
    .unwrap();
    assert!(check_strategy_proof(&spec, EX).unwrap().holds());
    assert!(check_regret_free(&spec, EX).unwrap().holds());
    assert!(check_tops_only(&spec, EX).unwrap().holds());
}

#[test]
fn borda_is_manipulable_at_2x3() {
    let spec = RuleSpec::scoring(2, ScoreVector::borda(3), abc(3)).unwrap();
    let v = check_strategy_proof(&spec, EX).unwrap();
    assert_eq!(v.status, Status::Violated);
    assert!(recheck(&spec, v.witness.as_ref().unwrap()).unwrap());
}

#[test]
fn maxmin_regret_free_examples() {
    assert!(check_regret_free(&RuleSpec::n_maxmin(2, 3, 1).unwrap(), EX).unwrap().holds());
    let v = check_regret_free(&RuleSpec::a_maxmin(2, 4).unwrap(), EX).unwrap();
    assert_eq!(v.status, Status::Violated);
    let w = v.witness.unwrap();
    assert!(matches!(w, Witness::Regret { .. }));
    assert!(recheck(&RuleSpec::a_maxmin(2, 4).unwrap(), &w).unwrap());
}

#[test]
fn tops_only_examples() {
    let plur = RuleSpec::scoring(3, ScoreVector::plurality(3), abc(3)).unwrap();
    assert!(check_tops_only(&plur, EX).unwrap().holds());
    let borda = RuleSpec::scoring(2, ScoreVector::borda(3), abc(3)).unwrap();
    let v = check_tops_only(&borda, EX).unwrap();
    assert_eq!(v.status, Status::Violated);
    assert!(recheck(&borda, v.witness.as_ref().unwrap()).unwrap());
    // the pair from the definition: equal tops, outcomes a and b
    let p = Profile::from_letters("a>b>c b>a>c").unwrap();
    let q = Profile::from_letters("a>b>c b>c>a").unwrap();
    assert_eq!(evaluate(&borda, &p).unwrap(), alt('a'));
    assert_eq!(evaluate(&borda, &q).unwrap(), alt('b'));
    assert!(recheck(&borda, &Witness::TopsOnly { profile: p, other: q }).unwrap());
    let binary = RuleSpec::scoring(3, ScoreVector::borda(2), abc(2)).unwrap();
    assert!(check_tops_only(&binary, EX).unwrap().holds());
}

#[test]
fn monotonicity_examples() {
    let simpson = RuleSpec::condorcet(3, 3, CondorcetVariant::Simpson, abc(3)).unwrap();
    assert!(check_monotone(&simpson, EX).unwrap().holds());
    let constant = RuleSpec::constant(3, 3, alt('a')).unwrap();
    assert!(check_monotone(&constant, EX).unwrap().holds());
    assert!(check_maskin_monotone(&constant, EX).unwrap().holds());
    let dict = RuleSpec::dictatorship(3, 3, 2).unwrap();
    assert!(check_maskin_monotone(&dict, EX).unwrap().holds());
    let v = check_maskin_monotone(&simpson, EX).unwrap();
    assert_eq!(v.status, Status::Violated);
    assert!(recheck(&simpson, v.witness.as_ref().unwrap()).unwrap());
}

#[test]
fn successive_elimination_monotonicity_witness() {
    let spec = RuleSpec::successive_elimination(5, "abcd".chars().map(alt).collect()).unwrap();
    let w = Witness::Monotone {
        profile: Profile::from_letters("a>b>d>c a>c>d>b c>d>a>b c>b>d>a d>b>a>c").unwrap(),
        agent: 1,
        transformed: Preference::from_letters("b>a>d>c").unwrap(),
        outcome: alt('c'),
    };
    assert!(recheck(&spec, &w).unwrap());
    let Witness::Monotone { profile, agent, outcome, .. } = w else { unreachable!() };
    let tampered = Witness::Monotone { profile, agent, transformed: Preference::from_letters("a>b>d>c").unwrap(), outcome };
    assert!(!recheck(&spec, &tampered).unwrap());
}

#[test]
fn condorcet_consistency_examples() {
    let se = RuleSpec::successive_elimination(3, "abc".chars().map(alt).collect()).unwrap();
    assert!(check_condorcet_consistent(&se, EX).unwrap().holds());
    let simpson = RuleSpec::condorcet(3, 3, CondorcetVariant::Simpson, abc(3)).unwrap();
    assert!(check_condorcet_consistent(&simpson, EX).unwrap().holds());
    let plur = RuleSpec::scoring(3, ScoreVector::plurality(3), abc(3)).unwrap();
    assert_eq!(check_condorcet_consistent(&plur, EX).unwrap().status, Status::Violated);
    let fixed = Witness::CondorcetFailure { profile: Profile::from_letters("a>b>c b>a>c c>b>a").unwrap() };
    assert!(recheck(&plur, &fixed).unwrap());
}

#[test]
fn simple_axiom_examples() {
    let a = RuleSpec::a_maxmin(2, 3).unwrap();
    assert!(check_simple_axiom(&a, Axiom::Anonymous, EX).unwrap().holds());
    let n = RuleSpec::n_maxmin(2, 3, 1).unwrap();
    assert!(check_simple_axiom(&n, Axiom::Neutral, EX).unwrap().holds());
    let v = check_simple_axiom(&n, Axiom::Anonymous, EX).unwrap();
    assert_eq!(v.status, Status::Violated);
    assert!(recheck(&n, v.witness.as_ref().unwrap()).unwrap());

    let c = RuleSpec::constant(2, 3, alt('a')).unwrap();
    let v = check_simple_axiom(&c, Axiom::Efficient, EX).unwrap();
    let Some(Witness::Inefficient { profile, better }) = v.witness else { panic!("{v:?}") };
    assert_eq!(profile.tops(), vec![alt('b'), alt('b')]);
    assert_eq!(better, alt('b'));
    assert_eq!(check_simple_axiom(&c, Axiom::Unanimous, EX).unwrap().status, Status::Violated);
    let v = check_simple_axiom(&c, Axiom::Dictatorial, EX).unwrap();
    assert_eq!(v.status, Status::Violated);
    assert!(recheck(&c, v.witness.as_ref().unwrap()).unwrap());
    assert!(check_simple_axiom(&c, Axiom::RegretFree, EX).is_err());
}

#[test]
fn tampered_regret_witness_fails() {
    let spec = RuleSpec::a_maxmin(2, 4).unwrap();
    let v = check_regret_free(&spec, EX).unwrap();
    let Some(Witness::Regret { profile, agent, .. }) = v.witness else { panic!() };
    let truthful = *profile.pref(agent - 1);
    let w = Witness::Regret { profile, agent, misreport: truthful, consistent_counterfactuals_safe: true };
    assert!(!recheck(&spec, &w).unwrap());
}

#[test]
fn budgets_refuse_exhaustive_mode() {
    let spec = RuleSpec::a_maxmin(3, 6).unwrap();
    let cfg = CheckConfig { engine: EngineConfig { use_table: false, ..Default::default() }, ..Default::default() };
    let err = Checker::new(&spec, &cfg).unwrap().check(Axiom::RegretFree, EX).unwrap_err();
    assert!(err.to_string().contains("space too large"), "{err}");
    let sampled = Checker::new(&spec, &cfg)
        .unwrap()
        .check(Axiom::StrategyProof, Mode::Sampled { count: 20, seed: 3 })
        .unwrap();
    assert_eq!(sampled.coverage, Coverage::Sampled { samples: 20, seed: 3 });
}

#[test]
fn sampled_runs_are_reproducible() {
    let spec = RuleSpec::scoring(3, ScoreVector::borda(4), abc(4)).unwrap();
    let mode = Mode::Sampled { count: 200, seed: 11 };
    let a = check(&spec, Axiom::RegretFree, mode).unwrap();
    let b = check(&spec, Axiom::RegretFree, mode).unwrap();
    assert_eq!(a, b);
}
