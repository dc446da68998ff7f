use crate::error::Result;
use crate::prefcore::{AltSet, Alternative, Preference, Profile};

#[inline]
pub(crate) fn minimal_positions(prefs: &[Preference]) -> [u8; 8] {
    let m = prefs[0].m();
    let mut mp = [u8::MAX; 8];
    for p in prefs {
        for (i, slot) in mp[..m].iter_mut().enumerate() {
            *slot = (*slot).min(p.rank(Alternative::new(i)) as u8);
        }
    }
    mp
}

pub(crate) fn winners_prefs(prefs: &[Preference]) -> AltSet {
    let m = prefs[0].m();
    let mp = minimal_positions(prefs);
    let best = *mp[..m].iter().max().expect("m >= 1");
    (0..m).filter(|&i| mp[i] == best).map(Alternative::new).collect()
}

/// Worst bottom-up position `x` takes across all agents.
pub fn minimal_position(profile: &Profile, x: Alternative) -> Result<usize> {
    profile
        .prefs()
        .iter()
        .map(|p| p.rank_of(x))
        .try_fold(usize::MAX, |acc, r| r.map(|r| acc.min(r)))
}

/// Alternatives with the highest minimal position.
pub fn maxmin_winners(profile: &Profile) -> AltSet {
    winners_prefs(profile.prefs())
}
