//! Qualitative risk assessment by argumentation.
//!
//! A knowledge base of sign-tagged facts and defeasible rules is queried
//! for a proposition; the engine constructs all subset-minimal arguments
//! for and against it, classifies the evidence state, matches the case
//! against qualitative patterns and renders an inspectable report.

pub mod acceptability;
pub mod case;
pub mod engine;
pub mod kb;
pub mod parser;
pub mod report;
pub mod woe;

pub use acceptability::{classify, classify_with, class_order, EvidenceClass};
pub use case::{
    aggregate, build_case, dominance, linguistic_term, match_pattern,
    AggregationPolicy, Case, CasePattern, DominanceVerdict, Lexicon,
};
pub use engine::{
    arguments_concerning, derive_signs, find_contradictions, is_consistent,
    propagate_sign, Argument, ContradictionWitness, EngineError,
};
pub use kb::{KbError, KbItem, KnowledgeBase, Polarity, Proposition, SignTag};
pub use parser::parse_kb;
pub use report::{render_structured, render_text, run_query, RiskReport};
pub use woe::{classify_woe, OverallCategory, StudyEvidence};
