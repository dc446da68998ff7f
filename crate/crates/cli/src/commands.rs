//! The subcommands, as functions from inputs to printed output and an exit code.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context as _, Result};
use rgf_core::axioms::{recheck, Axiom, CheckConfig, Checker, Mode, Status};
use rgf_core::engine::cache::load_or_build;
use rgf_core::engine::Context;
use rgf_core::prefcore::{AltSet, Alternative, AlternativeSet, Profile};
use rgf_core::repro::{find_scenario, run_scenario_with, scenario_catalog, Report, ScenarioRecord};
use rgf_core::rules::{
    bottom_count, condorcet_winner, copeland_score, dodgson_score, evaluate, maxmin_winners, minimal_position,
    score, scoring_winners, simpson_score, successive_elimination_rounds, variant_winners, young_score,
    CondorcetVariant, Family, RuleSpec, TieBreak,
};

use crate::doc::VerdictDoc;
use crate::input::{parse_profile, RuleConfig};

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_VIOLATED: i32 = 10;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_INVALID: i32 = 1;

/// What a command prints and how it exits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub text: String,
}

/// `exhaustive` or `sample:COUNT:SEED`.
pub fn parse_mode(s: &str) -> Result<Mode> {
    let s = s.trim();
    if s == "exhaustive" {
        return Ok(Mode::Exhaustive);
    }
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        ["sample" | "sampled", count, seed] => {
            let count = count.parse().with_context(|| format!("bad sample count `{count}`"))?;
            let seed = seed.parse().with_context(|| format!("bad seed `{seed}`"))?;
            Ok(Mode::Sampled { count, seed })
        }
        _ => bail!("mode must be `exhaustive` or `sample:COUNT:SEED`, got `{s}`"),
    }
}

/// `RGF_WORKERS` wins over the flag; neither means the default pool.
pub fn resolve_workers(flag: Option<usize>, env: Option<&str>) -> Result<Option<usize>> {
    let n = match env.map(str::trim).filter(|s| !s.is_empty()) {
        Some(v) => Some(v.parse::<usize>().with_context(|| format!("bad RGF_WORKERS `{v}`"))?),
        None => flag,
    };
    if n == Some(0) {
        bail!("worker count must be positive");
    }
    Ok(n)
}

fn set_str(alts: &AlternativeSet, s: AltSet) -> String {
    format!("{{{}}}", s.iter().map(|x| alts.label(x)).collect::<Vec<_>>().join(", "))
}

fn order_str(alts: &AlternativeSet, o: &[Alternative]) -> String {
    o.iter().map(|&x| alts.label(x)).collect::<Vec<_>>().join(" > ")
}

fn tiebreak_str(alts: &AlternativeSet, tb: &TieBreak) -> String {
    match tb {
        TieBreak::FixedOrder(o) => format!("order {}", order_str(alts, o)),
        TieBreak::Agent(i) => format!("agent {i}"),
        TieBreak::StarRelation(r) => {
            let pairs: Vec<String> =
                r.pairs().into_iter().map(|(x, y)| format!("{}>{}", alts.label(x), alts.label(y))).collect();
            format!("relation {}", pairs.join(", "))
        }
    }
}

fn explain(spec: &RuleSpec, alts: &AlternativeSet, p: &Profile) -> Result<String> {
    let mut out = String::new();
    let all = || (0..spec.m()).map(Alternative::new);
    match spec.family() {
        Family::Maxmin { tiebreak } => {
            for x in all() {
                writeln!(out, "mp({}) = {}", alts.label(x), minimal_position(p, x)?)?;
            }
            writeln!(out, "maxmin winners: {}", set_str(alts, maxmin_winners(p)))?;
            writeln!(out, "tie-break: {}", tiebreak_str(alts, tiebreak))?;
        }
        Family::Scoring { scores, tiebreak } => {
            writeln!(out, "scores: {scores}")?;
            for x in all() {
                writeln!(out, "score({}) = {}", alts.label(x), score(p, x, scores)?)?;
            }
            writeln!(out, "score winners: {}", set_str(alts, scoring_winners(p, scores)?))?;
            writeln!(out, "tie-break: {}", tiebreak_str(alts, tiebreak))?;
        }
        Family::Condorcet { variant, tiebreak } => {
            match condorcet_winner(p) {
                Some(w) => writeln!(out, "Condorcet winner: {}", alts.label(w))?,
                None => writeln!(out, "Condorcet winner: none")?,
            }
            for x in all() {
                let s = match variant {
                    CondorcetVariant::Simpson => Some(simpson_score(p, x)?.to_string()),
                    CondorcetVariant::Copeland => Some(copeland_score(p, x)?.to_string()),
                    CondorcetVariant::Young => Some(young_score(p, x)?.to_string()),
                    CondorcetVariant::Dodgson => Some(dodgson_score(p, x)?.to_string()),
                    _ => None,
                };
                if let Some(s) = s {
                    writeln!(out, "{}({}) = {s}", variant.name(), alts.label(x))?;
                }
            }
            writeln!(out, "{} winners: {}", variant.name(), set_str(alts, variant_winners(*variant, p)?))?;
            writeln!(out, "tie-break: {}", tiebreak_str(alts, tiebreak))?;
        }
        Family::SuccessiveElimination { order } => {
            for r in successive_elimination_rounds(order, p)? {
                writeln!(
                    out,
                    "{} vs {} -> {}",
                    alts.label(r.survivor),
                    alts.label(r.challenger),
                    alts.label(r.winner)
                )?;
            }
        }
        Family::Remark4x3 { order } => {
            for x in all() {
                writeln!(out, "bottom({}) = {}", alts.label(x), bottom_count(p, x)?)?;
            }
            writeln!(out, "order: {}", order_str(alts, order))?;
        }
        _ => {
            let tops: Vec<&str> = p.tops().into_iter().map(|x| alts.label(x)).collect();
            writeln!(out, "tops: {}", tops.join(", "))?;
        }
    }
    Ok(out)
}

/// Evaluates the rule on the profile; prints the winner's label, preceded
/// by the intermediate sets when `explain` is set.
pub fn cmd_tally(rule_text: &str, profile_text: &str, explain_flag: bool) -> Result<Output> {
    let file = parse_profile(profile_text).context("profile")?;
    let spec = RuleConfig::parse(rule_text)
        .and_then(|c| c.build(file.profile.n(), &file.alternatives))
        .context("rule")?;
    let winner = evaluate(&spec, &file.profile)?;
    let mut text = String::new();
    if explain_flag {
        text.push_str(&explain(&spec, &file.alternatives, &file.profile)?);
    }
    writeln!(text, "{}", file.alternatives.label(winner))?;
    Ok(Output { code: EXIT_HOLDS, text })
}

#[derive(Clone, Debug, Default)]
pub struct AxiomArgs {
    pub rule_text: String,
    pub axiom: String,
    pub n: usize,
    pub m: usize,
    pub mode: String,
    pub json_out: Option<std::path::PathBuf>,
    pub workers: Option<usize>,
    pub cache: Option<std::path::PathBuf>,
}

pub fn cmd_axiom(args: &AxiomArgs) -> Result<Output> {
    let axiom = Axiom::parse(&args.axiom).ok_or_else(|| anyhow!("unknown axiom `{}`", args.axiom))?;
    let mode = parse_mode(&args.mode)?;
    let alts = AlternativeSet::letters(args.m)?;
    let spec = RuleConfig::parse(&args.rule_text).and_then(|c| c.build(args.n, &alts)).context("rule")?;
    let cfg = CheckConfig { workers: args.workers, ..CheckConfig::default() };
    let mut text = String::new();
    let checker = match &args.cache {
        Some(path) => {
            let (table, cached) = load_or_build(path, &spec)?;
            writeln!(text, "outcome table {} {}", if cached { "loaded from" } else { "written to" }, path.display())?;
            Checker::from_context(Context::with_table(Arc::new(table), cfg.engine.use_classes)?, &cfg)
        }
        None => Checker::new(&spec, &cfg)?,
    };
    let verdict = checker.check(axiom, mode)?;
    writeln!(text, "{}: {verdict}", spec.label())?;
    let doc = VerdictDoc::new(&spec, &alts, &verdict)?;
    if let Some(w) = &doc.witness {
        writeln!(text, "witness: {}", serde_json::to_string(w)?)?;
    }
    if let Some(path) = &args.json_out {
        std::fs::write(path, serde_json::to_string_pretty(&doc)? + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let code = match verdict.status {
        Status::Holds => EXIT_HOLDS,
        Status::Violated => EXIT_VIOLATED,
    };
    Ok(Output { code, text })
}

/// Revalidates a witness document: exit 0 when valid, 1 when not.
pub fn cmd_recheck(doc_text: &str) -> Result<Output> {
    let doc = VerdictDoc::parse(doc_text)?;
    let witness = doc.witness()?.ok_or_else(|| anyhow!("document carries no witness"))?;
    if witness.axiom() != doc.axiom {
        bail!("witness kind does not match axiom {}", doc.axiom);
    }
    let valid = recheck(&doc.rule, &witness)?;
    let text = format!("{}: {} witness {}\n", doc.rule.label(), doc.axiom, if valid { "valid" } else { "INVALID" });
    Ok(Output { code: if valid { EXIT_HOLDS } else { EXIT_INVALID }, text })
}

fn result_line(r: &ScenarioRecord) -> String {
    format!(
        "{:<34} {:<8} expected {:?}, observed {:?} [{}] {} ms\n",
        r.id,
        if r.matches { "MATCH" } else { "MISMATCH" },
        r.expected,
        r.observed,
        r.coverage,
        r.elapsed_ms
    )
}

/// Runs one scenario or the whole catalog. Exit 1 on any mismatch.
pub fn cmd_reproduce(
    scenario: Option<&str>,
    report_tsv: Option<&Path>,
    report_json: Option<&Path>,
    workers: Option<usize>,
) -> Result<Output> {
    let cfg = CheckConfig { workers, ..CheckConfig::default() };
    let scenarios = match scenario {
        Some(id) => vec![find_scenario(id)?],
        None => scenario_catalog(),
    };
    let mut text = String::new();
    let mut records = Vec::with_capacity(scenarios.len());
    for s in &scenarios {
        let rec = ScenarioRecord::new(s, &run_scenario_with(s, &cfg)?);
        text.push_str(&result_line(&rec));
        records.push(rec);
    }
    let report = Report::new(records);
    if scenario.is_none() {
        text.push('\n');
        text.push_str(&report.summary_text());
        writeln!(text, "{} scenarios, {} mismatches", report.scenarios.len(), report.mismatches)?;
    }
    if let Some(path) = report_tsv {
        std::fs::write(path, report.to_tsv()).with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = report_json {
        std::fs::write(path, serde_json::to_string_pretty(&report)? + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(Output { code: if report.mismatches == 0 { EXIT_HOLDS } else { EXIT_INVALID }, text })
}

/// Builds the outcome table for a rule, or validates an existing cache file.
pub fn cmd_table(rule_text: &str, n: usize, m: usize, cache: &Path) -> Result<Output> {
    let alts = AlternativeSet::letters(m)?;
    let spec = RuleConfig::parse(rule_text).and_then(|c| c.build(n, &alts)).context("rule")?;
    let (table, cached) = load_or_build(cache, &spec)?;
    let text = format!(
        "{}: {} entries {} {}\n",
        spec.label(),
        table.len(),
        if cached { "loaded from" } else { "written to" },
        cache.display()
    );
    Ok(Output { code: EXIT_HOLDS, text })
}
