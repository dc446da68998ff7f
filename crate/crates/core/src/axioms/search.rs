use dashmap::DashMap;
use rayon::prelude::*;

use super::{Axiom, CheckConfig, Coverage, Mode, Status, Verdict, Witness};
use crate::engine::{sampled_digits, Context};
use crate::error::{Error, Result};
use crate::prefcore::{AltSet, Alternative, PairwiseTally, Permutation, Preference, Profile};
use crate::rules::condorcet::condorcet_winner_tally;

pub(super) fn run(ctx: &Context, cfg: &CheckConfig, axiom: Axiom, mode: Mode) -> Result<Verdict> {
    let budget = match axiom {
        Axiom::RegretFree => cfg.regret_budget,
        _ => cfg.profile_budget,
    };
    if mode == Mode::Exhaustive {
        ctx.space().ensure_within(budget, &format!("exhaustive {axiom} check"))?;
    }
    let coverage = mode.coverage();
    let found = |witness: Option<Witness>| Verdict {
        axiom,
        status: if witness.is_some() { Status::Violated } else { Status::Holds },
        coverage,
        witness,
        dictator: None,
    };
    Ok(match axiom {
        Axiom::StrategyProof => found(first(ctx, mode, |d| manipulation(ctx, d))?),
        Axiom::RegretFree => {
            let memo = RegretMemo::new(ctx, cfg)?;
            found(first(ctx, mode, |d| regret(ctx, &memo, d))?)
        }
        Axiom::TopsOnly => {
            let canon = tops_canon(ctx);
            found(first(ctx, mode, |d| tops_only(ctx, &canon, d))?)
        }
        Axiom::Monotone => found(first(ctx, mode, |d| monotone(ctx, d))?),
        Axiom::MaskinMonotone => found(first(ctx, mode, |d| maskin(ctx, d))?),
        Axiom::CondorcetConsistent => found(first(ctx, mode, |d| condorcet(ctx, d))?),
        Axiom::Efficient => found(first(ctx, mode, |d| efficient(ctx, d))?),
        Axiom::Unanimous => found(first(ctx, mode, |d| unanimous(ctx, d))?),
        Axiom::Anonymous => {
            let perms: Vec<Permutation> = Permutation::all(ctx.space().n()).filter(|p| !p.is_identity()).collect();
            found(first(ctx, mode, |d| anonymous(ctx, &perms, d))?)
        }
        Axiom::Neutral => {
            let perms: Vec<Permutation> = Permutation::all(ctx.space().m()).filter(|p| !p.is_identity()).collect();
            found(first(ctx, mode, |d| neutral(ctx, &perms, d))?)
        }
        Axiom::Dictatorial => dictatorial(ctx, mode, coverage)?,
    })
}

/// The first profile, in scan order, on which `probe` reports a witness.
fn first<T, F>(ctx: &Context, mode: Mode, probe: F) -> Result<Option<T>>
where
    T: Send,
    F: Fn(&[u32]) -> Result<Option<T>> + Sync,
{
    let space = ctx.space();
    let hit = match mode {
        Mode::Exhaustive => (0..space.size() as u64)
            .into_par_iter()
            .map_init(
                || vec![0u32; space.n()],
                |d, code| {
                    space.digits(code, d);
                    probe(d).transpose()
                },
            )
            .find_map_first(|r| r),
        Mode::Sampled { count, seed } => sampled_digits(space, count, seed)
            .par_iter()
            .map(|d| probe(d).transpose())
            .find_map_first(|r| r),
    };
    hit.transpose()
}

fn pref(ctx: &Context, idx: u32) -> Preference {
    *ctx.space().pref(idx)
}

fn manipulation(ctx: &Context, d: &[u32]) -> Result<Option<Witness>> {
    let x = ctx.eval(d)?;
    let classes = ctx.classes();
    let mut e = d.to_vec();
    for i in 0..d.len() {
        let truth = pref(ctx, d[i]);
        let own = classes.class_of(i, d[i]) as usize;
        for (c, &q) in classes.reps(i).iter().enumerate() {
            if c == own {
                continue;
            }
            e[i] = q;
            if truth.prefers(ctx.eval(&e)?, x) {
                return Ok(Some(Witness::Manipulation {
                    profile: ctx.profile(d),
                    agent: i + 1,
                    misreport: pref(ctx, q),
                }));
            }
        }
        e[i] = d[i];
    }
    Ok(None)
}

/// Outcome-pair sets keyed by (agent, class of the truthful ballot, class of the misreport).
pub(super) struct RegretMemo {
    pairs: DashMap<(usize, u32, u32), u64>,
}

impl RegretMemo {
    pub(super) fn new(ctx: &Context, cfg: &CheckConfig) -> Result<Self> {
        for i in 0..ctx.space().n() {
            let size = ctx.inner_size(i);
            if size > cfg.engine.inner_budget {
                return Err(Error::SpaceTooLarge {
                    what: format!("counterfactual scan for agent {}", i + 1),
                    size,
                    budget: cfg.engine.inner_budget,
                });
            }
        }
        Ok(RegretMemo { pairs: DashMap::new() })
    }

    fn get(&self, ctx: &Context, agent: usize, t: u32, q: u32) -> Result<u64> {
        let classes = ctx.classes();
        let key = (agent, classes.class_of(agent, t), classes.class_of(agent, q));
        if let Some(v) = self.pairs.get(&key) {
            return Ok(*v);
        }
        let v = ctx.outcome_pairs(agent, t, q)?;
        self.pairs.insert(key, v);
        Ok(v)
    }
}

/// True when some pair `(x, y)` in `pairs` has `x P y`: a counterfactual
/// consistent with outcome `x` under which the misreport would have hurt.
pub(super) fn has_safe_counterfactual(pairs: u64, x: Alternative, truth: &Preference) -> bool {
    let row = (pairs >> (8 * x.index())) & 0xff;
    (0..truth.m()).any(|y| row & (1 << y) != 0 && truth.prefers(x, Alternative::new(y)))
}

fn regret(ctx: &Context, memo: &RegretMemo, d: &[u32]) -> Result<Option<Witness>> {
    let x = ctx.eval(d)?;
    let classes = ctx.classes();
    let mut e = d.to_vec();
    for i in 0..d.len() {
        let truth = pref(ctx, d[i]);
        if truth.top() == x {
            continue;
        }
        let own = classes.class_of(i, d[i]) as usize;
        for (c, &q) in classes.reps(i).iter().enumerate() {
            if c == own {
                continue;
            }
            e[i] = q;
            if !truth.prefers(ctx.eval(&e)?, x) {
                continue;
            }
            let pairs = memo.get(ctx, i, d[i], q)?;
            if !has_safe_counterfactual(pairs, x, &truth) {
                return Ok(Some(Witness::Regret {
                    profile: ctx.profile(d),
                    agent: i + 1,
                    misreport: pref(ctx, q),
                    consistent_counterfactuals_safe: true,
                }));
            }
        }
        e[i] = d[i];
    }
    Ok(None)
}

/// For each ranking index, the index of the first ranking with the same top.
fn tops_canon(ctx: &Context) -> Vec<u32> {
    let prefs = ctx.space().preferences();
    let mut first_with_top = [u32::MAX; crate::prefcore::MAX_ALTERNATIVES];
    for (i, p) in prefs.iter().enumerate() {
        let slot = &mut first_with_top[p.top().index()];
        if *slot == u32::MAX {
            *slot = i as u32;
        }
    }
    prefs.iter().map(|p| first_with_top[p.top().index()]).collect()
}

fn tops_only(ctx: &Context, canon: &[u32], d: &[u32]) -> Result<Option<Witness>> {
    let c: Vec<u32> = d.iter().map(|&i| canon[i as usize]).collect();
    if c.as_slice() == d {
        return Ok(None);
    }
    if ctx.eval(&c)? != ctx.eval(d)? {
        return Ok(Some(Witness::TopsOnly { profile: ctx.profile(&c), other: ctx.profile(d) }));
    }
    Ok(None)
}

fn monotone(ctx: &Context, d: &[u32]) -> Result<Option<Witness>> {
    let x = ctx.eval(d)?;
    let mut e = d.to_vec();
    for i in 0..d.len() {
        let p = pref(ctx, d[i]);
        let k = p.rank(x);
        if k == 1 {
            // nothing lies below the outcome
            continue;
        }
        for (q, qp) in ctx.space().preferences().iter().enumerate() {
            let q = q as u32;
            if q == d[i] || !(1..=k).all(|j| qp.at(j) == p.at(j)) {
                continue;
            }
            e[i] = q;
            let b = ctx.eval(&e)?;
            if p.prefers(x, b) {
                return Ok(Some(Witness::Monotone { profile: ctx.profile(d), agent: i + 1, transformed: *qp, outcome: b }));
            }
        }
        e[i] = d[i];
    }
    Ok(None)
}

pub(super) fn above(p: &Preference, x: Alternative) -> AltSet {
    p.ranking().take_while(|&y| y != x).collect()
}

fn maskin(ctx: &Context, d: &[u32]) -> Result<Option<Witness>> {
    let x = ctx.eval(d)?;
    let mut e = d.to_vec();
    for i in 0..d.len() {
        let p = pref(ctx, d[i]);
        let allowed = above(&p, x);
        for (q, qp) in ctx.space().preferences().iter().enumerate() {
            let q = q as u32;
            if q == d[i] || above(qp, x).0 & !allowed.0 != 0 {
                continue;
            }
            e[i] = q;
            let y = ctx.eval(&e)?;
            if y != x {
                return Ok(Some(Witness::MaskinMonotone {
                    profile: ctx.profile(d),
                    agent: i + 1,
                    transformed: *qp,
                    outcome: y,
                }));
            }
        }
        e[i] = d[i];
    }
    Ok(None)
}

fn condorcet(ctx: &Context, d: &[u32]) -> Result<Option<Witness>> {
    let profile = ctx.profile(d);
    let Some(w) = condorcet_winner_tally(&PairwiseTally::from_prefs(profile.prefs())) else {
        return Ok(None);
    };
    if ctx.eval(d)? != w {
        return Ok(Some(Witness::CondorcetFailure { profile }));
    }
    Ok(None)
}

fn efficient(ctx: &Context, d: &[u32]) -> Result<Option<Witness>> {
    let x = ctx.eval(d)?;
    let prefs: Vec<Preference> = d.iter().map(|&i| pref(ctx, i)).collect();
    let better = (0..ctx.space().m())
        .map(Alternative::new)
        .find(|&y| prefs.iter().all(|p| p.prefers(y, x)));
    Ok(better.map(|better| Witness::Inefficient { profile: ctx.profile(d), better }))
}

fn unanimous(ctx: &Context, d: &[u32]) -> Result<Option<Witness>> {
    let top = pref(ctx, d[0]).top();
    if d.iter().all(|&i| pref(ctx, i).top() == top) && ctx.eval(d)? != top {
        return Ok(Some(Witness::NotUnanimous { profile: ctx.profile(d) }));
    }
    Ok(None)
}

fn anonymous(ctx: &Context, perms: &[Permutation], d: &[u32]) -> Result<Option<Witness>> {
    let x = ctx.eval(d)?;
    let mut e = d.to_vec();
    for pi in perms {
        for (i, slot) in e.iter_mut().enumerate() {
            *slot = d[pi.apply(i)];
        }
        if ctx.eval(&e)? != x {
            return Ok(Some(Witness::NotAnonymous {
                profile: ctx.profile(d),
                agent_permutation: pi.image().iter().map(|&j| j + 1).collect(),
            }));
        }
    }
    Ok(None)
}

fn neutral(ctx: &Context, perms: &[Permutation], d: &[u32]) -> Result<Option<Witness>> {
    let x = ctx.eval(d)?;
    let mut e = d.to_vec();
    for pi in perms {
        for (slot, &i) in e.iter_mut().zip(d) {
            *slot = pref(ctx, i).permute_alternatives(pi)?.lex_index();
        }
        if ctx.eval(&e)?.index() != pi.apply(x.index()) {
            return Ok(Some(Witness::NotNeutral {
                profile: ctx.profile(d),
                alternative_permutation: pi.image().iter().map(|&j| Alternative::new(j)).collect(),
            }));
        }
    }
    Ok(None)
}

fn dictatorial(ctx: &Context, mode: Mode, coverage: Coverage) -> Result<Verdict> {
    let mut counterexamples: Vec<Profile> = Vec::new();
    for i in 0..ctx.space().n() {
        let hit = first(ctx, mode, |d| {
            Ok((ctx.eval(d)? != pref(ctx, d[i]).top()).then(|| ctx.profile(d)))
        })?;
        match hit {
            Some(p) => counterexamples.push(p),
            None => {
                return Ok(Verdict {
                    axiom: Axiom::Dictatorial,
                    status: Status::Holds,
                    coverage,
                    witness: None,
                    dictator: Some(i + 1),
                })
            }
        }
    }
    Ok(Verdict {
        axiom: Axiom::Dictatorial,
        status: Status::Violated,
        coverage,
        witness: Some(Witness::NotDictatorial { profiles: counterexamples }),
        dictator: None,
    })
}
