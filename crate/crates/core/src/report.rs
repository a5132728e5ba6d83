//! Risk reports: the full classification result for one query, with a
//! deterministic text rendering and a machine-readable JSON rendering.
//!
//! A report is a pure function of (KB text, query, policy, lexicon):
//! identical inputs produce byte-identical output. Discounted risks are
//! never suppressed; the renderer has no filtering path.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::acceptability::{classify, EvidenceClass};
use crate::case::{
    build_case, dominance, linguistic_term, match_pattern, AggregationPolicy,
    CasePattern, DominanceVerdict, Lexicon,
};
use crate::engine::{find_contradictions, Argument, EngineError};
use crate::kb::{ItemId, ItemKind, KbError, KnowledgeBase, Proposition};
use crate::parser::parse_kb;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum QueryError {
    #[error(transparent)]
    Kb(#[from] KbError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// One ground of an argument: the item id, its depth in the derivation
/// (0 for the item concluding the queried proposition) and its source
/// statement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundLine {
    pub id: String,
    pub depth: u32,
    pub statement: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenderedArgument {
    pub sign: String,
    pub weight: f64,
    pub grounds: Vec<GroundLine>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContradictionSummary {
    pub proposition: String,
    pub confirming_grounds: Vec<String>,
    pub excluding_grounds: Vec<String>,
}

/// The complete result of one query.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskReport {
    pub proposition: String,
    pub evidence_class: EvidenceClass,
    pub pattern: CasePattern,
    pub term: String,
    pub verdict: DominanceVerdict,
    pub policy: AggregationPolicy,
    pub for_arguments: Vec<RenderedArgument>,
    pub against_arguments: Vec<RenderedArgument>,
    pub contradictions: Vec<ContradictionSummary>,
    pub kb_digest: String,
}

/// Rounds to at most 12 significant digits for stable serialization.
fn round_sig(value: f64) -> f64 {
    if value == 0.0 || !value.is_finite() {
        return value;
    }
    let magnitude = value.abs().log10().floor() as i32;
    let factor = 10f64.powi(11 - magnitude);
    (value * factor).round() / factor
}

/// Orders an argument's grounds as a derivation tree: depth-first from the
/// item concluding the argument's proposition, each item once.
fn ordered_grounds(kb: &KnowledgeBase, arg: &Argument) -> Vec<GroundLine> {
    let mut remaining: Vec<&ItemId> = arg.grounds.iter().collect();
    let mut out: Vec<GroundLine> = Vec::new();

    fn visit(
        kb: &KnowledgeBase,
        id: &ItemId,
        depth: u32,
        remaining: &mut Vec<&ItemId>,
        out: &mut Vec<GroundLine>,
    ) {
        let item = kb.item(id).expect("ground id exists in base");
        out.push(GroundLine {
            id: id.as_str().to_string(),
            depth,
            statement: item.to_statement(),
        });
        if item.kind() == ItemKind::Rule {
            for ant in item.antecedents() {
                let children: Vec<ItemId> = remaining
                    .iter()
                    .filter(|cand| {
                        kb.item(cand).is_some_and(|i| i.consequent() == ant)
                    })
                    .map(|c| (*c).clone())
                    .collect();
                for child in children {
                    if let Some(pos) = remaining.iter().position(|r| **r == child) {
                        remaining.remove(pos);
                        visit(kb, &child, depth + 1, remaining, out);
                    }
                }
            }
        }
    }

    let root = arg
        .grounds
        .iter()
        .find(|id| {
            kb.item(id)
                .is_some_and(|i| i.consequent() == &arg.conclusion)
        })
        .cloned();
    if let Some(root) = root {
        if let Some(pos) = remaining.iter().position(|r| **r == root) {
            remaining.remove(pos);
        }
        visit(kb, &root, 0, &mut remaining, &mut out);
    }
    // Anything left over (not reachable from the root) still gets listed.
    for id in remaining {
        let item = kb.item(id).expect("ground id exists in base");
        out.push(GroundLine {
            id: id.as_str().to_string(),
            depth: 1,
            statement: item.to_statement(),
        });
    }
    out
}

fn render_argument(kb: &KnowledgeBase, arg: &Argument) -> RenderedArgument {
    RenderedArgument {
        sign: arg.sign.token().to_string(),
        weight: round_sig(arg.weight),
        grounds: ordered_grounds(kb, arg),
    }
}

/// SHA-256 of the KB source bytes, hex-encoded.
pub fn kb_digest(source: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(source.as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Runs one query over KB source text: parse, build the case, classify,
/// match the pattern, compute dominance and look up the linguistic term.
pub fn run_query(
    kb_source: &str,
    prop: &Proposition,
    policy: AggregationPolicy,
    lexicon: &Lexicon,
) -> Result<RiskReport, QueryError> {
    let kb = parse_kb(kb_source)?;
    run_query_parsed(&kb, kb_source, prop, policy, lexicon)
}

/// [`run_query`] over an already-parsed base; the source text is still
/// needed for the digest.
pub fn run_query_parsed(
    kb: &KnowledgeBase,
    kb_source: &str,
    prop: &Proposition,
    policy: AggregationPolicy,
    lexicon: &Lexicon,
) -> Result<RiskReport, QueryError> {
    let case = build_case(kb, prop)?;
    let evidence_class = classify(kb, prop)?;
    let pattern = match_pattern(&case);
    let verdict = dominance(&case, policy);
    let term = linguistic_term(pattern, verdict, lexicon);
    let contradictions = find_contradictions(kb)?
        .into_iter()
        .map(|w| ContradictionSummary {
            proposition: w.prop.name().to_string(),
            confirming_grounds: w
                .confirming
                .grounds
                .iter()
                .map(|id| id.as_str().to_string())
                .collect(),
            excluding_grounds: w
                .excluding
                .grounds
                .iter()
                .map(|id| id.as_str().to_string())
                .collect(),
        })
        .collect();

    Ok(RiskReport {
        proposition: prop.name().to_string(),
        evidence_class,
        pattern,
        term,
        verdict,
        policy,
        for_arguments: case
            .for_args
            .iter()
            .map(|a| render_argument(kb, a))
            .collect(),
        against_arguments: case
            .against_args
            .iter()
            .map(|a| render_argument(kb, a))
            .collect(),
        contradictions,
        kb_digest: kb_digest(kb_source),
    })
}

fn render_side(out: &mut String, label: &str, args: &[RenderedArgument]) {
    if args.is_empty() {
        return;
    }
    out.push_str(&format!("arguments {label} ({}):\n", args.len()));
    for (i, arg) in args.iter().enumerate() {
        out.push_str(&format!(
            "  {}. [{}] weight {}\n",
            i + 1,
            arg.sign,
            arg.weight
        ));
        for ground in &arg.grounds {
            let indent = "  ".repeat(ground.depth as usize + 2);
            out.push_str(&format!("{indent}- {}\n", ground.statement));
        }
    }
}

/// Stable line-oriented rendering for human inspection.
pub fn render_text(report: &RiskReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("proposition: {}\n", report.proposition));
    if report.pattern == CasePattern::OpenPattern {
        out.push_str(&format!("class: {}\n", report.evidence_class.name()));
        out.push_str("no arguments\n");
        return out;
    }
    out.push_str(&format!("term: {}\n", report.term));
    out.push_str(&format!("class: {}\n", report.evidence_class.name()));
    out.push_str(&format!(
        "verdict: {} (policy {})\n",
        report.verdict.name(),
        report.policy.name()
    ));
    render_side(&mut out, "for", &report.for_arguments);
    render_side(&mut out, "against", &report.against_arguments);
    if !report.contradictions.is_empty() {
        out.push_str(&format!(
            "contradictions ({}):\n",
            report.contradictions.len()
        ));
        for c in &report.contradictions {
            out.push_str(&format!(
                "  {}: confirmed by {{{}}}, excluded by {{{}}}\n",
                c.proposition,
                c.confirming_grounds.join(", "),
                c.excluding_grounds.join(", ")
            ));
        }
    }
    out
}

/// Machine-readable JSON rendering with fixed key order.
pub fn render_structured(report: &RiskReport) -> String {
    let mut text =
        serde_json::to_string_pretty(report).expect("report serializes to JSON");
    text.push('\n');
    text
}

/// Parses [`render_structured`] output back into a report.
pub fn parse_structured(text: &str) -> Result<RiskReport, serde_json::Error> {
    serde_json::from_str(text)
}
