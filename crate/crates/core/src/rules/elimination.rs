use crate::error::{Error, Result};
use crate::prefcore::{Alternative, PairwiseTally, Preference, Profile};

/// One pairwise vote of a successive elimination run.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Round {
    pub survivor: Alternative,
    pub challenger: Alternative,
    pub winner: Alternative,
}

pub(crate) fn rounds_tally(order: &[Alternative], t: &PairwiseTally) -> Vec<Round> {
    let mut survivor = order[0];
    let mut out = Vec::with_capacity(order.len().saturating_sub(1));
    for &challenger in &order[1..] {
        // the survivor always precedes the challenger in the order, so it keeps ties
        let winner = if t.get(challenger, survivor) > t.get(survivor, challenger) {
            challenger
        } else {
            survivor
        };
        out.push(Round { survivor, challenger, winner });
        survivor = winner;
    }
    out
}

#[inline]
pub(crate) fn winner_prefs(order: &[Alternative], prefs: &[Preference]) -> Alternative {
    let mut survivor = order[0];
    for &challenger in &order[1..] {
        let mut for_challenger = 0usize;
        for p in prefs {
            if p.prefers(challenger, survivor) {
                for_challenger += 1;
            }
        }
        if 2 * for_challenger > prefs.len() {
            survivor = challenger;
        }
    }
    survivor
}

pub(crate) fn check_order(order: &[Alternative], m: usize) -> Result<()> {
    let mut seen = [false; crate::prefcore::MAX_ALTERNATIVES];
    let ok = order.len() == m
        && order.iter().all(|x| {
            let fresh = x.index() < m && !seen[x.index()];
            if fresh {
                seen[x.index()] = true;
            }
            fresh
        });
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidRule(format!("order must list each of the {m} alternatives exactly once")))
    }
}

/// Sequential pairwise majority along `order`, which also breaks ties.
pub fn successive_elimination_winner(order: &[Alternative], profile: &Profile) -> Result<Alternative> {
    check_order(order, profile.m())?;
    Ok(winner_prefs(order, profile.prefs()))
}

/// The full sequence of pairwise votes, for auditing.
pub fn successive_elimination_rounds(order: &[Alternative], profile: &Profile) -> Result<Vec<Round>> {
    check_order(order, profile.m())?;
    Ok(rounds_tally(order, &profile.tally()))
}
