//! Alternatives, strict preferences and profiles.
//!
//! Positions follow the bottom-up convention used throughout the crate:
//! position `1` is an agent's worst alternative and position `m` its top.
//! Internally a [`Preference`] stores its ranking best-to-worst; the
//! conversion is hidden behind [`Preference::rank_of`] and
//! [`Preference::alternative_at`].

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Largest number of alternatives any enumeration accepts.
pub const MAX_ALTERNATIVES: usize = 8;

/// Default budget on the number of profiles an exhaustive scan may visit.
pub const DEFAULT_PROFILE_BUDGET: u128 = 1 << 31;

/// An alternative, identified by its index in `0..m`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Alternative(pub u8);

impl Alternative {
    pub fn new(index: usize) -> Self {
        debug_assert!(index < MAX_ALTERNATIVES);
        Alternative(index as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Default label: `a`, `b`, `c`, ...
    pub fn letter(self) -> char {
        (b'a' + self.0) as char
    }
}

impl fmt::Display for Alternative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Labels for the `m` alternatives of an election.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlternativeSet {
    labels: Vec<String>,
}

impl AlternativeSet {
    /// Alternatives labelled `a`, `b`, `c`, ...
    pub fn letters(m: usize) -> Result<Self> {
        check_m(m)?;
        Ok(AlternativeSet {
            labels: (0..m).map(|i| Alternative::new(i).letter().to_string()).collect(),
        })
    }

    pub fn with_labels<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        check_m(labels.len())?;
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().trim().to_string()).collect();
        if let Some(bad) = labels.iter().find(|l| l.is_empty()) {
            return domain(format!("empty alternative label {bad:?}"));
        }
        if let Some(dup) = labels.iter().duplicates().next() {
            return domain(format!("duplicate alternative label `{dup}`"));
        }
        Ok(AlternativeSet { labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, x: Alternative) -> &str {
        &self.labels[x.index()]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn lookup(&self, label: &str) -> Option<Alternative> {
        let label = label.trim();
        self.labels.iter().position(|l| l == label).map(Alternative::new)
    }

    pub fn render(&self, pref: &Preference) -> String {
        pref.ranking().map(|x| self.label(x)).join(">")
    }
}

fn check_m(m: usize) -> Result<()> {
    if m == 0 || m > MAX_ALTERNATIVES {
        return domain(format!("number of alternatives must be in 1..={MAX_ALTERNATIVES}, got {m}"));
    }
    Ok(())
}

/// A set of alternatives packed into a bitmask.
#[derive(Copy, Clone, Default, PartialEq, Eq, Hash)]
pub struct AltSet(pub u8);

impl AltSet {
    pub const EMPTY: AltSet = AltSet(0);

    pub fn full(m: usize) -> Self {
        AltSet(((1u16 << m) - 1) as u8)
    }

    pub fn singleton(x: Alternative) -> Self {
        AltSet(1 << x.0)
    }

    pub fn insert(&mut self, x: Alternative) {
        self.0 |= 1 << x.0;
    }

    pub fn remove(&mut self, x: Alternative) {
        self.0 &= !(1 << x.0);
    }

    pub fn contains(self, x: Alternative) -> bool {
        self.0 & (1 << x.0) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Members in increasing index order.
    pub fn iter(self) -> impl Iterator<Item = Alternative> {
        (0..8u8).filter(move |i| self.0 & (1 << i) != 0).map(Alternative)
    }

    pub fn first(self) -> Option<Alternative> {
        if self.0 == 0 {
            None
        } else {
            Some(Alternative(self.0.trailing_zeros() as u8))
        }
    }
}

impl FromIterator<Alternative> for AltSet {
    fn from_iter<I: IntoIterator<Item = Alternative>>(iter: I) -> Self {
        let mut s = AltSet::EMPTY;
        for x in iter {
            s.insert(x);
        }
        s
    }
}

impl fmt::Debug for AltSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// A strict total order over `m` alternatives.
#[derive(Copy, Clone, PartialEq, Eq, Hash)]
pub struct Preference {
    m: u8,
    /// Alternatives from best to worst.
    order: [u8; MAX_ALTERNATIVES],
    /// Bottom-up position (1..=m) of each alternative.
    rank: [u8; MAX_ALTERNATIVES],
}

impl Preference {
    /// Builds a preference from a best-to-worst ranking.
    pub fn new(ranking: &[Alternative]) -> Result<Self> {
        let m = ranking.len();
        check_m(m)?;
        let mut order = [0u8; MAX_ALTERNATIVES];
        let mut rank = [0u8; MAX_ALTERNATIVES];
        for (p, x) in ranking.iter().enumerate() {
            if x.index() >= m {
                return domain(format!("alternative index {} out of range for m={m}", x.index()));
            }
            if rank[x.index()] != 0 {
                return domain(format!("alternative {} appears twice in a ranking", x.index()));
            }
            order[p] = x.0;
            rank[x.index()] = (m - p) as u8;
        }
        Ok(Preference { m: m as u8, order, rank })
    }

    pub fn from_indices(ranking: &[usize]) -> Result<Self> {
        if ranking.iter().any(|&i| i >= MAX_ALTERNATIVES) {
            return domain("alternative index out of range");
        }
        let alts: Vec<Alternative> = ranking.iter().map(|&i| Alternative::new(i)).collect();
        Self::new(&alts)
    }

    /// Parses a ranking written with default letters, e.g. `"b>c>a"`.
    pub fn from_letters(s: &str) -> Result<Self> {
        let mut idx = Vec::new();
        for tok in s.split('>') {
            let tok = tok.trim();
            let mut chars = tok.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) if c.is_ascii_lowercase() => idx.push((c as u8 - b'a') as usize),
                _ => return domain(format!("bad alternative `{tok}` in `{s}`")),
            }
        }
        Self::from_indices(&idx)
    }

    /// The identity ranking `a > b > c > ...`.
    pub fn identity(m: usize) -> Self {
        let idx: Vec<usize> = (0..m).collect();
        Self::from_indices(&idx).expect("identity ranking is valid")
    }

    pub fn m(&self) -> usize {
        self.m as usize
    }

    /// Alternatives from best to worst.
    pub fn ranking(&self) -> impl Iterator<Item = Alternative> + '_ {
        self.order[..self.m()].iter().map(|&i| Alternative(i))
    }

    pub fn ranking_vec(&self) -> Vec<Alternative> {
        self.ranking().collect()
    }

    /// Bottom-up position of `x`: 1 for the worst alternative, `m` for the top.
    pub fn rank_of(&self, x: Alternative) -> Result<usize> {
        if x.index() >= self.m() {
            return domain(format!("alternative {} out of range for m={}", x.index(), self.m));
        }
        Ok(self.rank(x))
    }

    /// Unchecked variant of [`rank_of`](Self::rank_of) for hot loops.
    #[inline]
    pub fn rank(&self, x: Alternative) -> usize {
        self.rank[x.index()] as usize
    }

    /// The alternative at bottom-up position `k` (`t_k`).
    pub fn alternative_at(&self, k: usize) -> Result<Alternative> {
        if k == 0 || k > self.m() {
            return domain(format!("position {k} out of range 1..={}", self.m));
        }
        Ok(self.at(k))
    }

    #[inline]
    pub fn at(&self, k: usize) -> Alternative {
        Alternative(self.order[self.m() - k])
    }

    #[inline]
    pub fn top(&self) -> Alternative {
        Alternative(self.order[0])
    }

    #[inline]
    pub fn bottom(&self) -> Alternative {
        Alternative(self.order[self.m() - 1])
    }

    /// Strict preference `x P y`.
    #[inline]
    pub fn prefers(&self, x: Alternative, y: Alternative) -> bool {
        self.rank[x.index()] > self.rank[y.index()]
    }

    /// Weak preference `x R y`.
    #[inline]
    pub fn weakly_prefers(&self, x: Alternative, y: Alternative) -> bool {
        x == y || self.prefers(x, y)
    }

    /// The most preferred member of a non-empty set.
    pub fn best_in(&self, set: AltSet) -> Option<Alternative> {
        self.ranking().find(|&x| set.contains(x))
    }

    /// Relabels alternatives: `x` moves to wherever `pi(x)` sits.
    pub fn permute_alternatives(&self, pi: &Permutation) -> Result<Self> {
        if pi.len() != self.m() {
            return domain(format!("permutation on {} items applied to m={}", pi.len(), self.m));
        }
        let mut out = *self;
        for p in 0..self.m() {
            out.order[p] = pi.apply(self.order[p] as usize) as u8;
        }
        for p in 0..self.m() {
            out.rank[out.order[p] as usize] = (self.m() - p) as u8;
        }
        Ok(out)
    }

    /// Exchanges the positions of two alternatives.
    pub fn swapped(&self, x: Alternative, y: Alternative) -> Self {
        let (px, py) = (self.m() - self.rank(x), self.m() - self.rank(y));
        let mut out = *self;
        out.order.swap(px, py);
        out.rank.swap(x.index(), y.index());
        out
    }

    /// Swaps the alternatives at best-to-worst slots `p` and `p + 1`.
    pub fn adjacent_swap(&self, p: usize) -> Self {
        self.swapped(Alternative(self.order[p]), Alternative(self.order[p + 1]))
    }

    /// Index of this ranking in the lexicographic enumeration of all `m!`
    /// rankings (Lehmer code).
    pub fn lex_index(&self) -> u32 {
        let m = self.m();
        let mut used = 0u16;
        let mut idx = 0u32;
        for p in 0..m {
            let x = self.order[p];
            let smaller_unused = (0..x).filter(|&y| used & (1 << y) == 0).count() as u32;
            idx += smaller_unused * factorial(m - 1 - p) as u32;
            used |= 1 << x;
        }
        idx
    }

    /// Inverse of [`lex_index`](Self::lex_index).
    pub fn from_lex_index(m: usize, mut idx: u32) -> Result<Self> {
        check_m(m)?;
        if idx as u64 >= factorial(m) {
            return domain(format!("ranking index {idx} out of range for m={m}"));
        }
        let mut pool: Vec<usize> = (0..m).collect();
        let mut ranking = Vec::with_capacity(m);
        for p in 0..m {
            let f = factorial(m - 1 - p) as u32;
            let q = (idx / f) as usize;
            idx %= f;
            ranking.push(pool.remove(q));
        }
        Self::from_indices(&ranking)
    }
}

impl PartialOrd for Preference {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Preference {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.m, &self.order[..self.m()]).cmp(&(other.m, &other.order[..other.m()]))
    }
}

impl fmt::Debug for Preference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ranking().map(|x| x.letter()).join(">"))
    }
}

impl fmt::Display for Preference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Serialized as the best-to-worst list of alternative indices.
impl Serialize for Preference {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.order[..self.m()].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Preference {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<usize>::deserialize(d)?;
        Preference::from_indices(&raw).map_err(serde::de::Error::custom)
    }
}

/// A bijection on `0..k`, stored as its image vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let k = image.len();
        let mut seen = vec![false; k];
        for &i in &image {
            if i >= k || seen[i] {
                return domain(format!("{image:?} is not a bijection on 0..{k}"));
            }
            seen[i] = true;
        }
        Ok(Permutation(image))
    }

    pub fn identity(k: usize) -> Self {
        Permutation((0..k).collect())
    }

    /// All `k!` permutations in lexicographic order of their image vectors.
    pub fn all(k: usize) -> impl Iterator<Item = Permutation> {
        (0..k).permutations(k).map(Permutation)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn image(&self) -> &[usize] {
        &self.0
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &Permutation) -> Result<Permutation> {
        if self.len() != inner.len() {
            return domain("composing permutations of different sizes");
        }
        Ok(Permutation(inner.0.iter().map(|&i| self.0[i]).collect()))
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }
}

/// An ordered list of preferences, one per agent.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Profile {
    prefs: Vec<Preference>,
}

impl Profile {
    pub fn new(prefs: Vec<Preference>) -> Result<Self> {
        let Some(first) = prefs.first() else {
            return domain("a profile needs at least one agent");
        };
        let m = first.m();
        if prefs.iter().any(|p| p.m() != m) {
            return domain("all preferences in a profile must rank the same alternatives");
        }
        Ok(Profile { prefs })
    }

    /// Parses whitespace- or comma-separated letter rankings, e.g.
    /// `"a>b>c, b>c>a, c>a>b"`.
    pub fn from_letters(s: &str) -> Result<Self> {
        let prefs = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(Preference::from_letters)
            .collect::<Result<Vec<_>>>()?;
        Self::new(prefs)
    }

    /// `n` copies of the same preference.
    pub fn unanimous(pref: Preference, n: usize) -> Result<Self> {
        Self::new(vec![pref; n])
    }

    pub fn n(&self) -> usize {
        self.prefs.len()
    }

    pub fn m(&self) -> usize {
        self.prefs[0].m()
    }

    pub fn prefs(&self) -> &[Preference] {
        &self.prefs
    }

    /// Preference of agent `i` (0-based).
    pub fn pref(&self, i: usize) -> &Preference {
        &self.prefs[i]
    }

    pub fn tops(&self) -> Vec<Alternative> {
        self.prefs.iter().map(|p| p.top()).collect()
    }

    /// `(P_i', P_{-i})`.
    pub fn with_pref(&self, i: usize, pref: Preference) -> Result<Self> {
        if i >= self.n() {
            return domain(format!("agent {i} out of range for n={}", self.n()));
        }
        if pref.m() != self.m() {
            return domain("replacement preference ranks a different number of alternatives");
        }
        let mut prefs = self.prefs.clone();
        prefs[i] = pref;
        Ok(Profile { prefs })
    }

    /// `P^pi` with `P^pi_i = P_{pi(i)}`.
    pub fn permute_agents(&self, pi: &Permutation) -> Result<Self> {
        if pi.len() != self.n() {
            return domain(format!("agent permutation on {} items for n={}", pi.len(), self.n()));
        }
        Ok(Profile {
            prefs: (0..self.n()).map(|i| self.prefs[pi.apply(i)]).collect(),
        })
    }

    /// `pi P`, relabelling alternatives in every preference.
    pub fn permute_alternatives(&self, pi: &Permutation) -> Result<Self> {
        Ok(Profile {
            prefs: self
                .prefs
                .iter()
                .map(|p| p.permute_alternatives(pi))
                .collect::<Result<_>>()?,
        })
    }

    pub fn tally(&self) -> PairwiseTally {
        pairwise_tally(self)
    }
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.prefs.iter().map(|p| p.to_string()).join(", "))
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for Profile {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.prefs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Profile {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let prefs = Vec::<Preference>::deserialize(d)?;
        Profile::new(prefs).map_err(serde::de::Error::custom)
    }
}

/// Head-to-head counts: `get(a, b)` agents rank `a` above `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairwiseTally {
    n: usize,
    m: usize,
    counts: Vec<u32>,
}

impl PairwiseTally {
    pub fn from_prefs(prefs: &[Preference]) -> Self {
        let m = prefs[0].m();
        let mut counts = vec![0u32; m * m];
        for p in prefs {
            for a in 0..m {
                for b in 0..m {
                    if p.rank[a] > p.rank[b] {
                        counts[a * m + b] += 1;
                    }
                }
            }
        }
        PairwiseTally { n: prefs.len(), m, counts }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn get(&self, a: Alternative, b: Alternative) -> u32 {
        self.counts[a.index() * self.m + b.index()]
    }

    /// Strict majority of `a` over `b`.
    #[inline]
    pub fn beats(&self, a: Alternative, b: Alternative) -> bool {
        self.get(a, b) > self.get(b, a)
    }

    pub fn alternatives(&self) -> impl Iterator<Item = Alternative> {
        (0..self.m).map(Alternative::new)
    }
}

pub fn pairwise_tally(profile: &Profile) -> PairwiseTally {
    PairwiseTally::from_prefs(profile.prefs())
}

pub fn rank_of(pref: &Preference, x: Alternative) -> Result<usize> {
    pref.rank_of(x)
}

pub fn alternative_at(pref: &Preference, k: usize) -> Result<Alternative> {
    pref.alternative_at(k)
}

pub fn prefers(pref: &Preference, x: Alternative, y: Alternative) -> Result<bool> {
    pref.rank_of(x)?;
    pref.rank_of(y)?;
    Ok(pref.prefers(x, y))
}

pub fn weakly_prefers(pref: &Preference, x: Alternative, y: Alternative) -> Result<bool> {
    pref.rank_of(x)?;
    pref.rank_of(y)?;
    Ok(pref.weakly_prefers(x, y))
}

pub fn permute_alternatives(pi: &Permutation, pref: &Preference) -> Result<Preference> {
    pref.permute_alternatives(pi)
}

pub fn permute_agents(pi: &Permutation, profile: &Profile) -> Result<Profile> {
    profile.permute_agents(pi)
}

pub fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

/// All `m!` preferences, lexicographic by best-to-worst ranking.
pub fn enumerate_preferences(m: usize) -> Result<Vec<Preference>> {
    check_m(m)?;
    Ok((0..m)
        .permutations(m)
        .map(|r| Preference::from_indices(&r).expect("permutation is a valid ranking"))
        .collect())
}

/// The space `P^n` of all profiles, addressed by odometer code with agent 1
/// as the most significant digit.
#[derive(Clone, Debug)]
pub struct ProfileSpace {
    n: usize,
    m: usize,
    radix: u64,
    size: u128,
    prefs: Vec<Preference>,
}

impl ProfileSpace {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n == 0 {
            return domain("need at least one agent");
        }
        let prefs = enumerate_preferences(m)?;
        let radix = prefs.len() as u64;
        let size = (radix as u128)
            .checked_pow(n as u32)
            .ok_or_else(|| Error::SpaceTooLarge {
                what: format!("profile space n={n}, m={m}"),
                size: u128::MAX,
                budget: DEFAULT_PROFILE_BUDGET,
            })?;
        Ok(ProfileSpace { n, m, radix, size, prefs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `m!`
    pub fn radix(&self) -> u64 {
        self.radix
    }

    /// `(m!)^n`
    pub fn size(&self) -> u128 {
        self.size
    }

    pub fn preferences(&self) -> &[Preference] {
        &self.prefs
    }

    #[inline]
    pub fn pref(&self, idx: u32) -> &Preference {
        &self.prefs[idx as usize]
    }

    /// Fails when the space is larger than `budget`.
    pub fn ensure_within(&self, budget: u128, what: &str) -> Result<()> {
        if self.size > budget {
            return Err(Error::SpaceTooLarge {
                what: format!("{what} over n={}, m={}", self.n, self.m),
                size: self.size,
                budget,
            });
        }
        Ok(())
    }

    /// Writes the per-agent ranking indices of profile `code` into `out`.
    #[inline]
    pub fn digits(&self, mut code: u64, out: &mut [u32]) {
        for slot in out[..self.n].iter_mut().rev() {
            *slot = (code % self.radix) as u32;
            code /= self.radix;
        }
    }

    #[inline]
    pub fn code_of(&self, digits: &[u32]) -> u64 {
        digits[..self.n].iter().fold(0u64, |acc, &d| acc * self.radix + d as u64)
    }

    pub fn profile(&self, code: u64) -> Profile {
        let mut d = vec![0u32; self.n];
        self.digits(code, &mut d);
        self.profile_from_digits(&d)
    }

    pub fn profile_from_digits(&self, digits: &[u32]) -> Profile {
        Profile {
            prefs: digits.iter().map(|&d| self.prefs[d as usize]).collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Profile> + '_ {
        (0..self.size as u64).map(move |c| self.profile(c))
    }
}

/// Iterator over all `(m!)^n` profiles in odometer order.
pub fn enumerate_profiles(n: usize, m: usize) -> Result<impl Iterator<Item = Profile>> {
    enumerate_profiles_within(n, m, DEFAULT_PROFILE_BUDGET)
}

pub fn enumerate_profiles_within(
    n: usize,
    m: usize,
    budget: u128,
) -> Result<impl Iterator<Item = Profile>> {
    let space = ProfileSpace::new(n, m)?;
    space.ensure_within(budget, "profile enumeration")?;
    let size = space.size() as u64;
    Ok((0..size).map(move |c| space.profile(c)))
}
