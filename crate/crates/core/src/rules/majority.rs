//! Committees and extended majority voting over two alternatives.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prefcore::{Alternative, Profile};

/// Largest electorate for which a committee is stored explicitly.
pub const MAX_COMMITTEE_AGENTS: usize = 16;

/// An upward-closed family of winning coalitions, stored as membership over
/// all `2^n` agent bitmasks (bit `i` set means agent `i`, 0-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawCommittee", into = "RawCommittee")]
pub struct Committee {
    n: usize,
    winning: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct RawCommittee {
    n: usize,
    /// Minimal winning coalitions as 1-based agent lists.
    minimal: Vec<Vec<usize>>,
}

impl TryFrom<RawCommittee> for Committee {
    type Error = Error;

    fn try_from(raw: RawCommittee) -> Result<Self> {
        let sets = raw
            .minimal
            .iter()
            .map(|s| coalition_mask(raw.n, s))
            .collect::<Result<Vec<_>>>()?;
        Committee::from_minimal(raw.n, &sets)
    }
}

impl From<Committee> for RawCommittee {
    fn from(c: Committee) -> Self {
        RawCommittee {
            n: c.n,
            minimal: c
                .minimal_coalitions()
                .into_iter()
                .map(|mask| (0..c.n).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect())
                .collect(),
        }
    }
}

/// Bitmask of a coalition given by 1-based agent indices.
pub fn coalition_mask(n: usize, agents: &[usize]) -> Result<u32> {
    let mut mask = 0u32;
    for &a in agents {
        if a == 0 || a > n {
            return Err(Error::InvalidRule(format!("agent {a} out of range 1..={n}")));
        }
        mask |= 1 << (a - 1);
    }
    Ok(mask)
}

impl Committee {
    fn check_n(n: usize) -> Result<()> {
        if n == 0 || n > MAX_COMMITTEE_AGENTS {
            return Err(Error::InvalidRule(format!(
                "committees support 1..={MAX_COMMITTEE_AGENTS} agents, got {n}"
            )));
        }
        Ok(())
    }

    /// Validates an explicit list of winning coalitions.
    pub fn from_winning(n: usize, winning: &[u32]) -> Result<Self> {
        Self::check_n(n)?;
        let mut table = vec![false; 1 << n];
        for &s in winning {
            if s as usize >= table.len() {
                return Err(Error::InvalidRule(format!("coalition {s:#b} mentions agents beyond n={n}")));
            }
            table[s as usize] = true;
        }
        for s in 0..table.len() {
            if !table[s] {
                continue;
            }
            for i in 0..n {
                let t = s | (1 << i);
                if !table[t] {
                    return Err(Error::InvalidRule(format!(
                        "committee is not upward closed: {s:#b} wins but {t:#b} does not"
                    )));
                }
            }
        }
        Ok(Committee { n, winning: table })
    }

    /// Upward closure of the given coalitions.
    pub fn from_minimal(n: usize, minimal: &[u32]) -> Result<Self> {
        Self::check_n(n)?;
        let full = 1u32 << n;
        if let Some(s) = minimal.iter().find(|&&s| s >= full) {
            return Err(Error::InvalidRule(format!("coalition {s:#b} mentions agents beyond n={n}")));
        }
        let winning = (0..full)
            .map(|t| minimal.iter().any(|&s| s & t == s))
            .collect();
        Ok(Committee { n, winning })
    }

    /// Strict majority of agents.
    pub fn majority(n: usize) -> Result<Self> {
        Self::check_n(n)?;
        Ok(Committee {
            n,
            winning: (0..1u32 << n).map(|s| 2 * s.count_ones() as usize > n).collect(),
        })
    }

    /// Only the grand coalition wins.
    pub fn unanimity(n: usize) -> Result<Self> {
        Self::from_minimal(n, &[(1u32 << n) - 1])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_winning(&self, coalition: u32) -> bool {
        self.winning[coalition as usize]
    }

    pub fn minimal_coalitions(&self) -> Vec<u32> {
        (0..self.winning.len() as u32)
            .filter(|&s| self.winning[s as usize])
            .filter(|&s| (0..self.n).all(|i| s & (1 << i) == 0 || !self.winning[(s & !(1 << i)) as usize]))
            .collect()
    }
}

/// `x` if the coalition of agents topping `x` is winning, otherwise `y`.
pub fn extended_majority_winner(
    committee: &Committee,
    x: Alternative,
    y: Alternative,
    profile: &Profile,
) -> Result<Alternative> {
    if committee.n() != profile.n() {
        return Err(Error::Contract(format!(
            "committee over {} agents applied to {} agents",
            committee.n(),
            profile.n()
        )));
    }
    Ok(winner_prefs(committee, x, y, profile.prefs()))
}

pub(crate) fn winner_prefs(
    committee: &Committee,
    x: Alternative,
    y: Alternative,
    prefs: &[crate::prefcore::Preference],
) -> Alternative {
    let coalition = prefs
        .iter()
        .enumerate()
        .filter(|(_, p)| p.top() == x)
        .fold(0u32, |acc, (i, _)| acc | (1 << i));
    if committee.is_winning(coalition) {
        x
    } else {
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const X: Alternative = Alternative(0);
    const Y: Alternative = Alternative(1);

    #[test]
    fn majority_committee() {
        let c = Committee::majority(3).unwrap();
        let xxy = Profile::from_letters("a>b a>b b>a").unwrap();
        let yyx = Profile::from_letters("b>a b>a a>b").unwrap();
        assert_eq!(extended_majority_winner(&c, X, Y, &xxy).unwrap(), X);
        assert_eq!(extended_majority_winner(&c, X, Y, &yyx).unwrap(), Y);
    }

    #[test]
    fn veto_committee() {
        let c = Committee::unanimity(3).unwrap();
        let xxy = Profile::from_letters("a>b a>b b>a").unwrap();
        assert_eq!(extended_majority_winner(&c, X, Y, &xxy).unwrap(), Y);
        let xxx = Profile::from_letters("a>b a>b a>b").unwrap();
        assert_eq!(extended_majority_winner(&c, X, Y, &xxx).unwrap(), X);
    }

    #[test]
    fn upward_closure_is_enforced() {
        // {1} wins but {1,2} does not.
        assert!(Committee::from_winning(2, &[0b01]).is_err());
        assert!(Committee::from_winning(2, &[0b01, 0b11]).is_ok());
        let c = Committee::from_minimal(3, &[0b011, 0b100]).unwrap();
        assert_eq!(c.minimal_coalitions(), vec![0b011, 0b100]);
        assert!(c.is_winning(0b111) && c.is_winning(0b110) && !c.is_winning(0b001));
    }

    #[test]
    fn serde_uses_minimal_coalitions() {
        let c = Committee::majority(3).unwrap();
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, r#"{"n":3,"minimal":[[1,2],[1,3],[2,3]]}"#);
        let back: Committee = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }
}
