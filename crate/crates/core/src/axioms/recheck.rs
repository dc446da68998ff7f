//! Independent validation of witnesses by direct evaluation.

use super::search::{above, has_safe_counterfactual};
use super::Witness;
use crate::engine::{Context, EngineConfig};
use crate::error::{Error, Result};
use crate::prefcore::{Alternative, Permutation, Preference, Profile, ProfileSpace};
use crate::rules::condorcet::condorcet_winner;
use crate::rules::{evaluate, RuleSpec};

/// Largest counterfactual space enumerated ballot by ballot; larger ones
/// are scanned by ballot class.
const FULL_INNER_LIMIT: u128 = 2_000_000;

/// Re-evaluates the quantifiers behind `witness` from scratch. Returns
/// `Ok(false)` for a well-formed witness that does not hold up.
pub fn recheck(spec: &RuleSpec, witness: &Witness) -> Result<bool> {
    let scoped = |p: &Profile| spec.checks_scope(p.n(), p.m());
    let agent_ok = |agent: usize, p: &Profile| -> Result<usize> {
        if agent == 0 || agent > p.n() {
            return Err(Error::Domain(format!("agent {agent} out of range 1..={}", p.n())));
        }
        Ok(agent - 1)
    };
    let pref_ok = |q: &Preference| -> Result<()> {
        if q.m() != spec.m() {
            return Err(Error::Domain("ranking over the wrong number of alternatives".into()));
        }
        Ok(())
    };
    match witness {
        Witness::Manipulation { profile, agent, misreport } => {
            scoped(profile)?;
            pref_ok(misreport)?;
            let i = agent_ok(*agent, profile)?;
            let x = evaluate(spec, profile)?;
            let y = evaluate(spec, &profile.with_pref(i, *misreport)?)?;
            Ok(profile.pref(i).prefers(y, x))
        }
        Witness::Regret { profile, agent, misreport, consistent_counterfactuals_safe } => {
            scoped(profile)?;
            pref_ok(misreport)?;
            let i = agent_ok(*agent, profile)?;
            if !consistent_counterfactuals_safe {
                return Ok(false);
            }
            let truth = *profile.pref(i);
            let x = evaluate(spec, profile)?;
            let y = evaluate(spec, &profile.with_pref(i, *misreport)?)?;
            if !truth.prefers(y, x) {
                return Ok(false);
            }
            Ok(!safe_counterfactual_exists(spec, i, truth, *misreport, x)?)
        }
        Witness::TopsOnly { profile, other } => {
            scoped(profile)?;
            scoped(other)?;
            Ok(profile.tops() == other.tops() && evaluate(spec, profile)? != evaluate(spec, other)?)
        }
        Witness::Monotone { profile, agent, transformed, outcome } => {
            scoped(profile)?;
            pref_ok(transformed)?;
            let i = agent_ok(*agent, profile)?;
            let p = profile.pref(i);
            let x = evaluate(spec, profile)?;
            let k = p.rank(x);
            let frozen = (1..=k).all(|j| transformed.at(j) == p.at(j));
            let b = evaluate(spec, &profile.with_pref(i, *transformed)?)?;
            Ok(frozen && b == *outcome && p.prefers(x, b))
        }
        Witness::MaskinMonotone { profile, agent, transformed, outcome } => {
            scoped(profile)?;
            pref_ok(transformed)?;
            let i = agent_ok(*agent, profile)?;
            let x = evaluate(spec, profile)?;
            let shrinks = above(transformed, x).0 & !above(profile.pref(i), x).0 == 0;
            let y = evaluate(spec, &profile.with_pref(i, *transformed)?)?;
            Ok(shrinks && y == *outcome && y != x)
        }
        Witness::CondorcetFailure { profile } => {
            scoped(profile)?;
            Ok(condorcet_winner(profile).is_some_and(|w| evaluate(spec, profile).is_ok_and(|x| x != w)))
        }
        Witness::Inefficient { profile, better } => {
            scoped(profile)?;
            let x = evaluate(spec, profile)?;
            Ok(better.index() < spec.m() && profile.prefs().iter().all(|p| p.prefers(*better, x)))
        }
        Witness::NotUnanimous { profile } => {
            scoped(profile)?;
            let top = profile.pref(0).top();
            Ok(profile.tops().iter().all(|&t| t == top) && evaluate(spec, profile)? != top)
        }
        Witness::NotAnonymous { profile, agent_permutation } => {
            scoped(profile)?;
            let pi = Permutation::new(agent_permutation.iter().map(|&j| j.wrapping_sub(1)).collect())?;
            Ok(evaluate(spec, profile)? != evaluate(spec, &profile.permute_agents(&pi)?)?)
        }
        Witness::NotNeutral { profile, alternative_permutation } => {
            scoped(profile)?;
            let pi = Permutation::new(alternative_permutation.iter().map(|x| x.index()).collect())?;
            let x = evaluate(spec, profile)?;
            let y = evaluate(spec, &profile.permute_alternatives(&pi)?)?;
            Ok(y.index() != pi.apply(x.index()))
        }
        Witness::NotDictatorial { profiles } => {
            if profiles.len() != spec.n() {
                return Ok(false);
            }
            for (i, p) in profiles.iter().enumerate() {
                scoped(p)?;
                if evaluate(spec, p)? == p.pref(i).top() {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Is there a report of the others under which the truthful report yields
/// `x` and the misreport something `truth` ranks below `x`?
fn safe_counterfactual_exists(
    spec: &RuleSpec,
    agent: usize,
    truth: Preference,
    misreport: Preference,
    x: Alternative,
) -> Result<bool> {
    let n = spec.n();
    if n == 1 {
        let y = evaluate(spec, &Profile::new(vec![misreport])?)?;
        return Ok(truth.prefers(x, y));
    }
    let others = ProfileSpace::new(n - 1, spec.m())?;
    if others.size() <= FULL_INNER_LIMIT {
        let mut prefs = vec![truth; n];
        for rest in others.iter() {
            for (j, p) in (0..n).filter(|&j| j != agent).zip(rest.prefs()) {
                prefs[j] = *p;
            }
            prefs[agent] = truth;
            if spec.outcome(&prefs)? != x {
                continue;
            }
            prefs[agent] = misreport;
            if truth.prefers(x, spec.outcome(&prefs)?) {
                return Ok(true);
            }
        }
        return Ok(false);
    }
    let cfg = EngineConfig { use_table: false, use_classes: true, ..EngineConfig::default() };
    let ctx = Context::new(spec, &cfg)?;
    let inner = ctx.inner_size(agent);
    if inner > cfg.inner_budget {
        return Err(Error::SpaceTooLarge {
            what: "counterfactual scan".into(),
            size: inner,
            budget: cfg.inner_budget,
        });
    }
    let pairs = ctx.outcome_pairs(agent, truth.lex_index(), misreport.lex_index())?;
    Ok(has_safe_counterfactual(pairs, x, &truth))
}
