//! The scenario registry. Directed witnesses are the constructions used in
//! the proofs, transcribed as fixtures.

use itertools::Itertools;

use super::{Scenario, ScenarioMode};
use crate::axioms::{Axiom, Status, Witness};
use crate::prefcore::{Alternative, Preference, Profile};
use crate::rules::{Committee, CondorcetVariant, Family, RuleSpec, ScoreVector, StarRelation, TieBreak};

use Axiom::*;
use Status::*;

const EX: ScenarioMode = ScenarioMode::Exhaustive;

fn alt(c: char) -> Alternative {
    Alternative::new((c as u8 - b'a') as usize)
}

fn order(s: &str) -> Vec<Alternative> {
    s.chars().map(alt).collect()
}

fn pref(s: &str) -> Preference {
    Preference::from_letters(s).expect("fixture ranking")
}

fn profile(s: &str) -> Profile {
    Profile::from_letters(s).expect("fixture profile")
}

fn regret(profile_str: &str, agent: usize, misreport: &str) -> ScenarioMode {
    ScenarioMode::Directed {
        witness: Witness::Regret {
            profile: profile(profile_str),
            agent,
            misreport: pref(misreport),
            consistent_counterfactuals_safe: true,
        },
    }
}

struct Builder(Vec<Scenario>);

impl Builder {
    fn add(&mut self, id: impl Into<String>, spec: RuleSpec, axiom: Axiom, mode: ScenarioMode, expected: Status, claim: &str) {
        let (n, m) = (spec.n(), spec.m());
        self.0.push(Scenario { id: id.into(), spec, axiom, n, m, mode, expected, claim: claim.to_string() });
    }
}

fn a_scoring(n: usize, scores: ScoreVector) -> RuleSpec {
    let m = scores.m();
    RuleSpec::scoring(n, scores, TieBreak::alphabetical(m)).expect("scoring fixture")
}

fn n_scoring(n: usize, scores: ScoreVector, agent: usize) -> RuleSpec {
    RuleSpec::scoring(n, scores, TieBreak::Agent(agent)).expect("scoring fixture")
}

/// The full registry, in a fixed order.
pub fn scenario_catalog() -> Vec<Scenario> {
    let mut b = Builder(Vec::new());

    // maxmin
    let claim = "A-maxmin is regret-free iff n >= m-1 or n divides m-1";
    for (n, m) in [(2, 3), (3, 3), (3, 4), (2, 5)] {
        b.add(format!("T1-pos-{n}x{m}"), RuleSpec::a_maxmin(n, m).unwrap(), RegretFree, EX, Holds, claim);
    }
    b.add("T1-neg-2x4", RuleSpec::a_maxmin(2, 4).unwrap(), RegretFree, EX, Violated, claim);
    for (n, m) in [(2, 3), (2, 4), (3, 3), (4, 3)] {
        let spec = RuleSpec::n_maxmin(n, m, 1).unwrap();
        b.add(format!("T1-N-{n}x{m}"), spec, RegretFree, EX, Holds, "every N-maxmin rule is regret-free");
    }

    // negative plurality
    let claim = "A-negative-plurality is regret-free iff n >= m-1";
    for (n, m) in [(3, 3), (2, 3)] {
        let spec = a_scoring(n, ScoreVector::negative_plurality(m));
        b.add(format!("T2-pos-{n}x{m}"), spec, RegretFree, EX, Holds, claim);
    }
    b.add("T2-neg-2x4", a_scoring(2, ScoreVector::negative_plurality(4)), RegretFree, EX, Violated, claim);
    for (n, m) in [(2, 4), (3, 3)] {
        let spec = n_scoring(n, ScoreVector::negative_plurality(m), 1);
        b.add(format!("T2-N-{n}x{m}"), spec, RegretFree, EX, Holds, "every N-negative-plurality rule is regret-free");
    }

    // scores with k* = m-1
    let claim = "no scoring rule with k* = m-1 is regret-free";
    b.add("T3-A-borda-3x3", a_scoring(3, ScoreVector::borda(3)), RegretFree, EX, Violated, claim);
    b.add("T3-N-borda-3x3", n_scoring(3, ScoreVector::borda(3), 1), RegretFree, EX, Violated, claim);
    b.add("T3-A-plurality-3x3", a_scoring(3, ScoreVector::plurality(3)), RegretFree, EX, Violated, claim);
    b.add("T3-A-dowdall-3x3", a_scoring(3, ScoreVector::dowdall(3)), RegretFree, EX, Violated, claim);
    let t3 = || regret("a>c>b c>b>a b>a>c", 2, "b>c>a");
    b.add("T3-directed-borda", a_scoring(3, ScoreVector::borda(3)), RegretFree, t3(), Violated, claim);
    b.add("T3-directed-plurality", a_scoring(3, ScoreVector::plurality(3)), RegretFree, t3(), Violated, claim);

    // (m - k*)-approval
    b.add(
        "T4-pos-sampled-3x7",
        a_scoring(3, ScoreVector::approval(7, 5).unwrap()),
        RegretFree,
        ScenarioMode::Sampled { count: 5000, seed: 7 },
        Holds,
        "A-(m-k*)-approval is regret-free when k*n = m-1 (falsification test only)",
    );
    b.add(
        "T4-directed-3x8",
        a_scoring(3, ScoreVector::approval(8, 6).unwrap()),
        RegretFree,
        regret("b>c>d>e>f>a>h>g b>a>c>d>e>f>g>h b>a>c>d>e>f>g>h", 1, "b>c>d>e>f>h>a>g"),
        Violated,
        "A-(m-k*)-approval is not regret-free when k*n < m-1",
    );

    // s_{k*-1} = s_{k*}
    let claim = "scoring rules with s_{k*-1} = s_{k*} and k*n >= m-1 are not regret-free";
    b.add("T5-3x4", a_scoring(3, ScoreVector::approval(4, 2).unwrap()), RegretFree, EX, Violated, claim);
    b.add(
        "T5-directed",
        a_scoring(3, ScoreVector::approval(4, 2).unwrap()),
        RegretFree,
        regret("a>b>c>d c>d>b>a a>b>d>c", 2, "c>b>d>a"),
        Violated,
        claim,
    );

    // Condorcet consistent rules
    let regimes = [("A", TieBreak::alphabetical(3)), ("N", TieBreak::Agent(1))];
    for variant in CondorcetVariant::ALL {
        for (tag, tb) in &regimes {
            let spec = RuleSpec::condorcet(3, 3, variant, tb.clone()).unwrap();
            let name = variant.name();
            b.add(
                format!("T6-{tag}-{name}-monotone-3x3"),
                spec.clone(),
                Monotone,
                EX,
                Holds,
                "the Condorcet variants are monotone",
            );
            b.add(
                format!("T6-{tag}-{name}-3x3"),
                spec,
                RegretFree,
                EX,
                Violated,
                "no Condorcet consistent, monotone rule is regret-free",
            );
        }
    }
    for variant in CondorcetVariant::ALL {
        let fixture = match variant {
            CondorcetVariant::Copeland | CondorcetVariant::Black => "b>a>c c>a>b c>b>a a>c>b",
            _ => "b>a>c c>b>a c>b>a a>c>b",
        };
        for (tag, tb) in &regimes {
            let spec = RuleSpec::condorcet(4, 3, variant, tb.clone()).unwrap();
            b.add(
                format!("T6-directed-{tag}-{}-4x3", variant.name()),
                spec,
                RegretFree,
                regret(fixture, 1, "a>b>c"),
                Violated,
                "the Condorcet variants are not regret-free at four agents and three alternatives",
            );
        }
    }

    // the four-agent exception
    let remark = RuleSpec::new(Family::Remark4x3 { order: order("abc") }, 4, 3).unwrap();
    let claim = "a Condorcet consistent, monotone, regret-free rule exists at n=4, m=3";
    b.add("Remark-4x3", remark.clone(), RegretFree, EX, Holds, claim);
    b.add("Remark-condorcet-4x3", remark.clone(), CondorcetConsistent, EX, Holds, claim);
    b.add("Remark-monotone-4x3", remark, Monotone, EX, Holds, claim);

    // successive elimination
    let claim = "no successive elimination rule is regret-free";
    let se = |n: usize, o: &str| RuleSpec::successive_elimination(n, order(o)).unwrap();
    b.add("T8-3x3", se(3, "abc"), RegretFree, EX, Violated, claim);
    b.add("T8-directed", se(3, "abc"), RegretFree, regret("a>b>c c>a>b b>c>a", 1, "b>a>c"), Violated, claim);
    b.add(
        "SE-nonmonotone-5x4",
        se(5, "abcd"),
        Monotone,
        ScenarioMode::Directed {
            witness: Witness::Monotone {
                profile: profile("a>b>d>c a>c>d>b c>d>a>b c>b>d>a d>b>a>c"),
                agent: 1,
                transformed: pref("b>a>d>c"),
                outcome: alt('c'),
            },
        },
        Violated,
        "successive elimination is not monotone",
    );

    // neutral, regret-free rules at (2,3)
    let claim = "at n=2, m=3 the neutral regret-free rules are N-maxmin rules and dictatorships";
    for agent in [1, 2] {
        let rules = [
            ("N-maxmin", RuleSpec::n_maxmin(2, 3, agent).unwrap()),
            ("N-negplur", n_scoring(2, ScoreVector::negative_plurality(3), agent)),
            ("dictator", RuleSpec::dictatorship(2, 3, agent).unwrap()),
        ];
        for (name, spec) in rules {
            for axiom in [RegretFree, Neutral] {
                b.add(format!("T7-{name}{agent}-{axiom}"), spec.clone(), axiom, EX, Holds, claim);
            }
        }
    }
    b.add("T7-indep-se-regret-free", se(2, "abc"), RegretFree, EX, Holds, claim);
    b.add("T7-indep-se-neutral", se(2, "abc"), Neutral, EX, Violated, claim);
    let bottom = RuleSpec::new(Family::AgentBottom { agent: 1 }, 2, 3).unwrap();
    b.add("T7-indep-bottom-neutral", bottom.clone(), Neutral, EX, Holds, claim);
    b.add("T7-indep-bottom-regret-free", bottom, RegretFree, EX, Violated, claim);

    // efficient, anonymous, regret-free rules at (2,3)
    let claim = "at n=2, m=3 the efficient anonymous regret-free rules are successive elimination and A-maxmin* rules";
    for (k, rel) in StarRelation::all(3).into_iter().enumerate() {
        let spec = RuleSpec::new(Family::Maxmin { tiebreak: TieBreak::StarRelation(rel) }, 2, 3).unwrap();
        for axiom in [RegretFree, Efficient, Anonymous] {
            b.add(format!("T9-star{k}-{axiom}"), spec.clone(), axiom, EX, Holds, claim);
        }
    }
    for perm in order("abc").into_iter().permutations(3) {
        let tag: String = perm.iter().map(|x| x.letter()).collect();
        let spec = RuleSpec::successive_elimination(2, perm).unwrap();
        for axiom in [RegretFree, Efficient, Anonymous] {
            b.add(format!("T9-se-{tag}-{axiom}"), spec.clone(), axiom, EX, Holds, claim);
        }
    }
    let constant = RuleSpec::constant(2, 3, alt('a')).unwrap();
    let dict = RuleSpec::dictatorship(2, 3, 1).unwrap();
    let maxtop = RuleSpec::new(Family::MaxTop { order: order("abc") }, 2, 3).unwrap();
    let independence = [
        ("constant", &constant, [(RegretFree, Holds), (Anonymous, Holds), (Efficient, Violated)]),
        ("dictator", &dict, [(RegretFree, Holds), (Efficient, Holds), (Anonymous, Violated)]),
        ("maxtop", &maxtop, [(Efficient, Holds), (Anonymous, Holds), (RegretFree, Violated)]),
    ];
    for (name, spec, rows) in independence {
        for (axiom, expected) in rows {
            b.add(format!("T9-indep-{name}-{axiom}"), spec.clone(), axiom, EX, expected, claim);
        }
    }

    // tops-only rules
    b.add(
        "P1-tops-only-3x3",
        super::random_tops_only_rule(3, 3, 1, 0).expect("tops table fixture"),
        RegretFree,
        ScenarioMode::TopsOnlySweep { rules: 200, seed: 1 },
        Holds,
        "a tops-only regret-free rule is strategy-proof",
    );
    let em = RuleSpec::new(
        Family::ExtendedMajority { committee: Committee::majority(3).unwrap(), x: alt('a'), y: alt('b') },
        3,
        2,
    )
    .unwrap();
    let claim = "extended majority voting is strategy-proof and regret-free";
    b.add("P1-ext-majority-sp-3x2", em.clone(), StrategyProof, EX, Holds, claim);
    b.add("P1-ext-majority-3x2", em, RegretFree, EX, Holds, claim);

    b.0
}
