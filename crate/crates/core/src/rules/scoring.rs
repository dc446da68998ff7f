//! Positional scoring rules with exact rational scores.

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::prefcore::{AltSet, Alternative, Preference, Profile};

pub type Rational = Ratio<i64>;

/// Scores `s_1 <= ... <= s_m` indexed by bottom-up position.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ScoreVector {
    scores: Vec<Rational>,
    /// `scores` scaled by the lcm of their denominators; same argmax, integer sums.
    weights: Vec<i64>,
}

impl ScoreVector {
    pub fn new(scores: Vec<Rational>) -> Result<Self> {
        if scores.len() < 2 {
            return Err(Error::InvalidRule("a score vector needs at least two positions".into()));
        }
        if scores.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidRule(format!(
                "scores must be weakly increasing from bottom to top: {}",
                render(&scores)
            )));
        }
        if scores[0] >= scores[scores.len() - 1] {
            return Err(Error::InvalidRule("bottom score must be below the top score".into()));
        }
        let den = scores.iter().fold(1i64, |acc, s| acc.lcm(s.denom()));
        let weights = scores.iter().map(|s| (s * den).to_integer()).collect();
        Ok(ScoreVector { scores, weights })
    }

    pub fn from_integers(scores: &[i64]) -> Result<Self> {
        Self::new(scores.iter().map(|&s| Rational::from_integer(s)).collect())
    }

    /// `s_k = k`.
    pub fn borda(m: usize) -> Self {
        Self::from_integers(&(1..=m as i64).collect::<Vec<_>>()).expect("valid Borda scores")
    }

    /// `s_k = 1 / (m - k + 1)`.
    pub fn dowdall(m: usize) -> Self {
        Self::new((1..=m as i64).map(|k| Rational::new(1, m as i64 - k + 1)).collect())
            .expect("valid Dowdall scores")
    }

    /// Top `k` positions score 1, the rest 0.
    pub fn approval(m: usize, k: usize) -> Result<Self> {
        if k == 0 || k >= m {
            return Err(Error::InvalidRule(format!("k-approval needs 1 <= k <= m-1, got k={k}, m={m}")));
        }
        Self::from_integers(&(0..m).map(|p| i64::from(p >= m - k)).collect::<Vec<_>>())
    }

    pub fn plurality(m: usize) -> Self {
        Self::approval(m, 1).expect("plurality needs m >= 2")
    }

    pub fn negative_plurality(m: usize) -> Self {
        Self::approval(m, m - 1).expect("negative plurality needs m >= 2")
    }

    pub fn m(&self) -> usize {
        self.scores.len()
    }

    /// `s_k` for bottom-up position `k` in `1..=m`.
    pub fn score_at(&self, k: usize) -> Rational {
        self.scores[k - 1]
    }

    pub fn scores(&self) -> &[Rational] {
        &self.scores
    }

    #[inline]
    pub(crate) fn weight(&self, k: usize) -> i64 {
        self.weights[k - 1]
    }

    /// Highest position whose score is below the maximum.
    pub fn k_star(&self) -> usize {
        let top = self.scores[self.m() - 1];
        (1..self.m()).rev().find(|&k| self.scores[k - 1] < top).expect("s_1 < s_m")
    }

    /// Index of the distinct score value at each position; two positions
    /// share a class exactly when they carry the same score.
    pub(crate) fn position_classes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.m());
        let mut class = 0u8;
        for k in 0..self.m() {
            if k > 0 && self.scores[k] != self.scores[k - 1] {
                class += 1;
            }
            out.push(class);
        }
        out
    }
}

fn render(scores: &[Rational]) -> String {
    scores.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Debug for ScoreVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", render(&self.scores))
    }
}

impl fmt::Display for ScoreVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render(&self.scores))
    }
}

impl Serialize for ScoreVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.scores.iter().map(|r| r.to_string()).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ScoreVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        let scores = raw
            .iter()
            .map(|t| t.trim().parse::<Rational>().map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        ScoreVector::new(scores).map_err(serde::de::Error::custom)
    }
}

#[inline]
pub(crate) fn weighted_scores(prefs: &[Preference], sv: &ScoreVector) -> [i64; 8] {
    let mut out = [0i64; 8];
    for p in prefs {
        for (k, x) in (1..=p.m()).rev().zip(p.ranking()) {
            out[x.index()] += sv.weight(k);
        }
    }
    out
}

pub(crate) fn winners_prefs(prefs: &[Preference], sv: &ScoreVector) -> AltSet {
    let m = prefs[0].m();
    let s = weighted_scores(prefs, sv);
    let best = s[..m].iter().copied().max().expect("m >= 1");
    (0..m).filter(|&i| s[i] == best).map(Alternative::new).collect()
}

/// `s(P, x) = sum_i s_{rank of x in P_i}`.
pub fn score(profile: &Profile, x: Alternative, sv: &ScoreVector) -> Result<Rational> {
    check_len(profile, sv)?;
    let mut total = Rational::from_integer(0);
    for p in profile.prefs() {
        total += sv.score_at(p.rank_of(x)?);
    }
    Ok(total)
}

pub fn scoring_winners(profile: &Profile, sv: &ScoreVector) -> Result<AltSet> {
    check_len(profile, sv)?;
    Ok(winners_prefs(profile.prefs(), sv))
}

pub fn k_star(sv: &ScoreVector) -> usize {
    sv.k_star()
}

fn check_len(profile: &Profile, sv: &ScoreVector) -> Result<()> {
    if profile.m() != sv.m() {
        return Err(Error::Contract(format!(
            "score vector has {} positions but the profile ranks {} alternatives",
            sv.m(),
            profile.m()
        )));
    }
    Ok(())
}
