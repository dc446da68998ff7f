//! Versioned JSON documents for verdicts and witnesses.
//!
//! Rules keep their internal encoding (alternative indices); rankings,
//! outcomes and alternative permutations inside a witness are written with
//! the labels from `alternatives`.

use anyhow::{anyhow, bail, Result};
use rgf_core::axioms::{Axiom, Coverage, Status, Verdict, Witness};
use rgf_core::prefcore::AlternativeSet;
use rgf_core::rules::RuleSpec;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const VERSION: &str = "rgf/1";

/// Witness fields whose numbers are alternative indices.
const ALTERNATIVE_KEYS: &[&str] =
    &["profile", "other", "profiles", "misreport", "transformed", "outcome", "better", "alternative_permutation"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictDoc {
    pub version: String,
    pub alternatives: Vec<String>,
    pub rule: RuleSpec,
    pub axiom: Axiom,
    pub status: Status,
    pub coverage: Coverage,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dictator: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

fn relabel(v: &mut Value, f: &dyn Fn(&Value) -> Result<Value>) -> Result<()> {
    match v {
        Value::Array(items) => items.iter_mut().try_for_each(|x| relabel(x, f)),
        leaf => {
            *leaf = f(leaf)?;
            Ok(())
        }
    }
}

fn map_alternative_fields(v: &mut Value, f: &dyn Fn(&Value) -> Result<Value>) -> Result<()> {
    let Value::Object(fields) = v else { bail!("a witness must be a JSON object") };
    for (k, field) in fields.iter_mut() {
        if ALTERNATIVE_KEYS.contains(&k.as_str()) {
            relabel(field, f)?;
        }
    }
    Ok(())
}

pub fn witness_to_json(w: &Witness, alternatives: &AlternativeSet) -> Result<Value> {
    let mut v = serde_json::to_value(w)?;
    let labels = alternatives.labels();
    map_alternative_fields(&mut v, &|leaf| {
        let i = leaf.as_u64().ok_or_else(|| anyhow!("expected an alternative index, got {leaf}"))? as usize;
        labels.get(i).map(|l| Value::String(l.clone())).ok_or_else(|| anyhow!("alternative {i} has no label"))
    })?;
    Ok(v)
}

pub fn witness_from_json(v: &Value, alternatives: &AlternativeSet) -> Result<Witness> {
    let mut v = v.clone();
    map_alternative_fields(&mut v, &|leaf| {
        let l = leaf.as_str().ok_or_else(|| anyhow!("expected an alternative label, got {leaf}"))?;
        let x = alternatives.lookup(l).ok_or_else(|| anyhow!("unknown alternative `{l}`"))?;
        Ok(Value::from(x.index()))
    })?;
    Ok(serde_json::from_value(v)?)
}

impl VerdictDoc {
    pub fn new(spec: &RuleSpec, alternatives: &AlternativeSet, verdict: &Verdict) -> Result<Self> {
        Ok(VerdictDoc {
            version: VERSION.to_string(),
            alternatives: alternatives.labels().to_vec(),
            rule: spec.clone(),
            axiom: verdict.axiom,
            status: verdict.status,
            coverage: verdict.coverage,
            dictator: verdict.dictator,
            witness: verdict.witness.as_ref().map(|w| witness_to_json(w, alternatives)).transpose()?,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let doc: VerdictDoc = serde_json::from_str(text)?;
        if doc.version != VERSION {
            bail!("unsupported document version `{}` (expected {VERSION})", doc.version);
        }
        if doc.alternatives.len() != doc.rule.m() {
            bail!("{} labels for a rule over {} alternatives", doc.alternatives.len(), doc.rule.m());
        }
        Ok(doc)
    }

    pub fn alternative_set(&self) -> Result<AlternativeSet> {
        Ok(AlternativeSet::with_labels(&self.alternatives)?)
    }

    pub fn witness(&self) -> Result<Option<Witness>> {
        let alts = self.alternative_set()?;
        self.witness.as_ref().map(|v| witness_from_json(v, &alts)).transpose()
    }
}
