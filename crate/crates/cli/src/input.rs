//! Profile files and rule configuration files.

use std::fmt::Write as _;

use anyhow::{anyhow, bail, Context as _, Result};
use num_rational::Ratio;
use rgf_core::prefcore::{Alternative, AlternativeSet, Preference, Profile};
use rgf_core::rules::majority::coalition_mask;
use rgf_core::rules::{
    Committee, CondorcetVariant, Family, Rational, RuleSpec, ScoreVector, StarRelation, TieBreak,
};

/// A parsed profile file: labels plus the expanded profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileFile {
    pub alternatives: AlternativeSet,
    pub profile: Profile,
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn split_labels(s: &str) -> Vec<&str> {
    s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).collect()
}

/// Parses `k: x > y > z` ballot lines, with an optional
/// `alternatives: x, y, z` header. Without a header the labels of the first
/// ballot, sorted, name the alternatives.
pub fn parse_profile(text: &str) -> Result<ProfileFile> {
    let mut header: Option<AlternativeSet> = None;
    let mut ballots: Vec<(usize, usize, Vec<String>)> = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let no = no + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("alternatives:") {
            if header.is_some() || !ballots.is_empty() {
                bail!("line {no}: the alternatives header must come first and only once");
            }
            header = Some(AlternativeSet::with_labels(&split_labels(rest)).map_err(|e| anyhow!("line {no}: {e}"))?);
            continue;
        }
        let (count, ranking) = match line.split_once(':') {
            Some((k, r)) => {
                let k: usize = k.trim().parse().map_err(|_| anyhow!("line {no}: bad multiplicity `{}`", k.trim()))?;
                if k == 0 {
                    bail!("line {no}: zero multiplicity");
                }
                (k, r)
            }
            None => (1, line),
        };
        let labels: Vec<String> = ranking.split('>').map(|t| t.trim().to_string()).collect();
        if labels.iter().any(|l| l.is_empty()) {
            bail!("line {no}: empty alternative in `{}`", ranking.trim());
        }
        ballots.push((no, count, labels));
    }
    if ballots.is_empty() {
        bail!("no ballots");
    }
    let alternatives = match header {
        Some(h) => h,
        None => {
            let mut first = ballots[0].2.clone();
            first.sort();
            AlternativeSet::with_labels(&first).map_err(|e| anyhow!("line {}: {e}", ballots[0].0))?
        }
    };
    let m = alternatives.len();
    let mut prefs = Vec::new();
    for (no, count, labels) in ballots {
        let mut order = Vec::with_capacity(labels.len());
        let mut seen = vec![false; m];
        for l in &labels {
            let x = alternatives.lookup(l).ok_or_else(|| anyhow!("line {no}: unknown alternative `{l}`"))?;
            if std::mem::replace(&mut seen[x.index()], true) {
                bail!("line {no}: duplicate alternative `{l}`");
            }
            order.push(x);
        }
        if let Some(missing) = (0..m).find(|&x| !seen[x]) {
            bail!("line {no}: missing alternative `{}`", alternatives.label(Alternative::new(missing)));
        }
        let pref = Preference::new(&order).map_err(|e| anyhow!("line {no}: {e}"))?;
        prefs.extend(std::iter::repeat_n(pref, count));
    }
    let profile = Profile::new(prefs)?;
    Ok(ProfileFile { alternatives, profile })
}

/// One ballot per line, with a header, consecutive equal ballots merged.
pub fn render_profile(alternatives: &AlternativeSet, profile: &Profile) -> String {
    let mut out = format!("alternatives: {}\n", alternatives.labels().join(", "));
    let prefs = profile.prefs();
    let mut i = 0;
    while i < prefs.len() {
        let run = prefs[i..].iter().take_while(|p| **p == prefs[i]).count();
        let ranking: Vec<&str> = prefs[i].ranking().map(|x| alternatives.label(x)).collect();
        let _ = writeln!(out, "{run}: {}", ranking.join(" > "));
        i += run;
    }
    out
}

/// Key/value lines of a rule configuration, with their line numbers.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RuleConfig {
    entries: Vec<(usize, String, String)>,
}

const KEYS: &[&str] =
    &["family", "variant", "scores", "tiebreak", "order", "committee", "agent", "alternative", "x", "y", "table"];

impl RuleConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: Vec<(usize, String, String)> = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let no = no + 1;
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| anyhow!("line {no}: expected key=value"))?;
            let k = k.trim().to_ascii_lowercase();
            if !KEYS.contains(&k.as_str()) {
                bail!("line {no}: unknown key `{k}`");
            }
            if let Some((prev, ..)) = entries.iter().find(|(_, key, _)| *key == k) {
                bail!("line {no}: duplicate key `{k}` (first set on line {prev})");
            }
            entries.push((no, k, v.trim().to_string()));
        }
        if !entries.iter().any(|(_, k, _)| k == "family") {
            bail!("missing key `family`");
        }
        Ok(RuleConfig { entries })
    }

    fn get(&self, key: &str) -> Option<(usize, &str)> {
        self.entries.iter().find(|(_, k, _)| k == key).map(|(no, _, v)| (*no, v.as_str()))
    }

    fn require(&self, key: &str) -> Result<(usize, &str)> {
        let (fam_line, family) = self.get("family").expect("checked at parse");
        self.get(key).ok_or_else(|| anyhow!("line {fam_line}: family `{family}` needs key `{key}`"))
    }

    /// Builds the rule for `n` agents over `alternatives`.
    pub fn build(&self, n: usize, alternatives: &AlternativeSet) -> Result<RuleSpec> {
        let m = alternatives.len();
        let (fam_line, family) = self.get("family").expect("checked at parse");
        let at = |no: usize| move |e: anyhow::Error| anyhow!("line {no}: {e}");
        let alt = |no: usize, s: &str| -> Result<Alternative> {
            alternatives.lookup(s).ok_or_else(|| anyhow!("line {no}: unknown alternative `{}`", s.trim()))
        };
        let order_of = |key: &str| -> Result<Vec<Alternative>> {
            match self.get(key) {
                Some((no, v)) => split_labels(v).into_iter().map(|s| alt(no, s)).collect(),
                None => Ok((0..m).map(Alternative::new).collect()),
            }
        };
        let agent = |key: &str| -> Result<usize> {
            let (no, v) = self.require(key)?;
            v.parse().map_err(|_| anyhow!("line {no}: bad agent `{v}`"))
        };
        let tiebreak = || -> Result<TieBreak> {
            match self.get("tiebreak") {
                None => Ok(TieBreak::alphabetical(m)),
                Some((no, v)) => parse_tiebreak(v, alternatives).map_err(at(no)),
            }
        };
        let fam = match family.to_ascii_lowercase().replace('_', "-").as_str() {
            "maxmin" => Family::Maxmin { tiebreak: tiebreak()? },
            "scoring" => {
                let (no, v) = self.require("scores")?;
                Family::Scoring { scores: parse_scores(v, m).map_err(at(no))?, tiebreak: tiebreak()? }
            }
            "borda" => Family::Scoring { scores: ScoreVector::borda(m), tiebreak: tiebreak()? },
            "dowdall" => Family::Scoring { scores: ScoreVector::dowdall(m), tiebreak: tiebreak()? },
            "plurality" => Family::Scoring { scores: ScoreVector::plurality(m), tiebreak: tiebreak()? },
            "negative-plurality" => {
                Family::Scoring { scores: ScoreVector::negative_plurality(m), tiebreak: tiebreak()? }
            }
            "condorcet" => {
                let (no, v) = self.require("variant")?;
                let variant = CondorcetVariant::parse(v).ok_or_else(|| anyhow!("line {no}: unknown variant `{v}`"))?;
                Family::Condorcet { variant, tiebreak: tiebreak()? }
            }
            name @ ("simpson" | "copeland" | "young" | "dodgson" | "fishburn" | "black") => Family::Condorcet {
                variant: CondorcetVariant::parse(name).expect("listed variant"),
                tiebreak: tiebreak()?,
            },
            "successive-elimination" => Family::SuccessiveElimination { order: order_of("order")? },
            "dictatorship" => Family::Dictatorship { agent: agent("agent")? },
            "constant" => {
                let (no, v) = self.require("alternative")?;
                Family::Constant { alternative: alt(no, v)? }
            }
            "remark4x3" | "bottom-count-4x3" => Family::Remark4x3 { order: order_of("order")? },
            "max-top" => Family::MaxTop { order: order_of("order")? },
            "agent-bottom" => Family::AgentBottom { agent: agent("agent")? },
            "extended-majority" => {
                let (no, v) = self.require("committee")?;
                let committee = parse_committee(v, n).map_err(at(no))?;
                let (xl, xv) = self.require("x")?;
                let (yl, yv) = self.require("y")?;
                Family::ExtendedMajority { committee, x: alt(xl, xv)?, y: alt(yl, yv)? }
            }
            "tops-table" => {
                let (no, v) = self.require("table")?;
                Family::TopsTable { table: split_labels(v).into_iter().map(|s| alt(no, s)).collect::<Result<_>>()? }
            }
            other => bail!("line {fam_line}: unknown family `{other}`"),
        };
        let blame = self.get("tiebreak").map_or(fam_line, |(no, _)| no);
        RuleSpec::new(fam, n, m).map_err(|e| anyhow!("line {blame}: {e}"))
    }
}

/// `order:a,b,c`, `agent:1` or `relation:a>b,b>c,c>a`.
pub fn parse_tiebreak(s: &str, alternatives: &AlternativeSet) -> Result<TieBreak> {
    let (kind, body) = s.split_once(':').ok_or_else(|| anyhow!("tiebreak must be order:, agent: or relation:"))?;
    let alt = |l: &str| alternatives.lookup(l).ok_or_else(|| anyhow!("unknown alternative `{}`", l.trim()));
    match kind.trim() {
        "order" => Ok(TieBreak::FixedOrder(split_labels(body).into_iter().map(alt).collect::<Result<_>>()?)),
        "agent" => Ok(TieBreak::Agent(body.trim().parse().with_context(|| format!("bad agent `{}`", body.trim()))?)),
        "relation" => {
            let pairs = body
                .split(',')
                .map(|p| {
                    let (x, y) = p.split_once('>').ok_or_else(|| anyhow!("relation pairs look like a>b, got `{p}`"))?;
                    Ok((alt(x)?, alt(y)?))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(TieBreak::StarRelation(StarRelation::from_pairs(alternatives.len(), &pairs)?))
        }
        other => bail!("unknown tiebreak kind `{other}`"),
    }
}

/// A comma list of integers or `p/q` fractions, or one of the named vectors
/// `borda`, `dowdall`, `plurality`, `negative-plurality`, `approval:K`.
pub fn parse_scores(s: &str, m: usize) -> Result<ScoreVector> {
    let s = s.trim();
    match s {
        "borda" => return Ok(ScoreVector::borda(m)),
        "dowdall" => return Ok(ScoreVector::dowdall(m)),
        "plurality" => return Ok(ScoreVector::plurality(m)),
        "negative-plurality" => return Ok(ScoreVector::negative_plurality(m)),
        _ => {}
    }
    if let Some(k) = s.strip_prefix("approval:") {
        return Ok(ScoreVector::approval(m, k.trim().parse().with_context(|| format!("bad approval size `{k}`"))?)?);
    }
    let scores = s
        .split(',')
        .map(|t| {
            let t = t.trim();
            let r = match t.split_once('/') {
                Some((p, q)) => {
                    let (p, q): (i64, i64) = (p.trim().parse()?, q.trim().parse()?);
                    if q == 0 {
                        bail!("zero denominator in `{t}`");
                    }
                    Ratio::new(p, q)
                }
                None => Ratio::from_integer(t.parse()?),
            };
            Ok::<Rational, anyhow::Error>(r)
        })
        .collect::<Result<Vec<_>>>()
        .with_context(|| format!("bad score list `{s}`"))?;
    if scores.len() != m {
        bail!("{} scores given for {m} alternatives", scores.len());
    }
    Ok(ScoreVector::new(scores)?)
}

/// Minimal winning coalitions separated by `;`, agents (1-based) by `,`,
/// or one of `majority`, `unanimity`.
pub fn parse_committee(s: &str, n: usize) -> Result<Committee> {
    match s.trim() {
        "majority" => return Ok(Committee::majority(n)?),
        "unanimity" => return Ok(Committee::unanimity(n)?),
        _ => {}
    }
    let masks = s
        .split(';')
        .map(|c| {
            let agents = split_labels(c.trim().trim_start_matches('{').trim_end_matches('}'))
                .into_iter()
                .map(|a| a.parse::<usize>().with_context(|| format!("bad agent `{a}`")))
                .collect::<Result<Vec<_>>>()?;
            Ok(coalition_mask(n, &agents)?)
        })
        .collect::<Result<Vec<u32>>>()?;
    Ok(Committee::from_minimal(n, &masks)?)
}
