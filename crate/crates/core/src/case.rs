//! Cases: the arguments concerning one proposition, split into the case
//! for and the case against, with weight aggregation, pattern matching and
//! the mapping from patterns to linguistic terms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{arguments_concerning, Argument, EngineError};
use crate::kb::{KnowledgeBase, Polarity, Proposition, SignTag};

/// Numeric aggregates closer than this are a tie (COUNT compares exactly).
pub const BALANCE_TOLERANCE: f64 = 1e-9;

/// All arguments concerning one proposition, partitioned by polarity.
#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub prop: Proposition,
    pub for_args: Vec<Argument>,
    pub against_args: Vec<Argument>,
}

/// Builds the case concerning `prop`: every argument, split by polarity,
/// both sides canonically ordered.
pub fn build_case(kb: &KnowledgeBase, prop: &Proposition) -> Result<Case, EngineError> {
    let (for_args, against_args) = arguments_concerning(kb, prop)?
        .into_iter()
        .partition(|a| a.polarity() == Polarity::For);
    Ok(Case {
        prop: prop.clone(),
        for_args,
        against_args,
    })
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum AggregationPolicy {
    Count,
    Sum,
    Max,
}

impl AggregationPolicy {
    pub fn name(self) -> &'static str {
        match self {
            AggregationPolicy::Count => "count",
            AggregationPolicy::Sum => "sum",
            AggregationPolicy::Max => "max",
        }
    }
}

impl std::str::FromStr for AggregationPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "count" => Ok(AggregationPolicy::Count),
            "sum" => Ok(AggregationPolicy::Sum),
            "max" => Ok(AggregationPolicy::Max),
            other => Err(format!("unknown aggregation policy `{other}`")),
        }
    }
}

/// Aggregate weight of one side of a case; 0 for an empty side.
pub fn aggregate(args: &[Argument], policy: AggregationPolicy) -> f64 {
    match policy {
        AggregationPolicy::Count => args.len() as f64,
        AggregationPolicy::Sum => args.iter().map(|a| a.weight).sum(),
        AggregationPolicy::Max => args.iter().map(|a| a.weight).fold(0.0, f64::max),
    }
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum DominanceVerdict {
    ForDominates,
    AgainstDominates,
    Balanced,
}

impl DominanceVerdict {
    pub fn name(self) -> &'static str {
        match self {
            DominanceVerdict::ForDominates => "for_dominates",
            DominanceVerdict::AgainstDominates => "against_dominates",
            DominanceVerdict::Balanced => "balanced",
        }
    }
}

/// Compares the aggregate weight of the case for against the case against.
pub fn dominance(case: &Case, policy: AggregationPolicy) -> DominanceVerdict {
    if policy == AggregationPolicy::Count {
        return match case.for_args.len().cmp(&case.against_args.len()) {
            std::cmp::Ordering::Greater => DominanceVerdict::ForDominates,
            std::cmp::Ordering::Less => DominanceVerdict::AgainstDominates,
            std::cmp::Ordering::Equal => DominanceVerdict::Balanced,
        };
    }
    let for_w = aggregate(&case.for_args, policy);
    let against_w = aggregate(&case.against_args, policy);
    if (for_w - against_w).abs() <= BALANCE_TOLERANCE {
        DominanceVerdict::Balanced
    } else if for_w > against_w {
        DominanceVerdict::ForDominates
    } else {
        DominanceVerdict::AgainstDominates
    }
}

/// Case-class patterns, in matching priority order (most severe first).
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum CasePattern {
    Contradictory,
    ConfirmedButOpposed,
    SupportedButExcluded,
    Equivocal,
    ConfirmedClean,
    SupportedClean,
    ExcludedClean,
    OpposedClean,
    OpenPattern,
}

impl CasePattern {
    pub const ALL: [CasePattern; 9] = [
        CasePattern::Contradictory,
        CasePattern::ConfirmedButOpposed,
        CasePattern::SupportedButExcluded,
        CasePattern::Equivocal,
        CasePattern::ConfirmedClean,
        CasePattern::SupportedClean,
        CasePattern::ExcludedClean,
        CasePattern::OpposedClean,
        CasePattern::OpenPattern,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CasePattern::Contradictory => "contradictory",
            CasePattern::ConfirmedButOpposed => "confirmed_but_opposed",
            CasePattern::SupportedButExcluded => "supported_but_excluded",
            CasePattern::Equivocal => "equivocal",
            CasePattern::ConfirmedClean => "confirmed_clean",
            CasePattern::SupportedClean => "supported_clean",
            CasePattern::ExcludedClean => "excluded_clean",
            CasePattern::OpposedClean => "opposed_clean",
            CasePattern::OpenPattern => "open_pattern",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|p| p.name() == name)
    }
}

/// Pattern from the four presence flags, first match in priority order.
pub fn pattern_from_flags(
    confirm_for: bool,
    support_for: bool,
    exclude_against: bool,
    oppose_against: bool,
) -> CasePattern {
    let any_for = confirm_for || support_for;
    let any_against = exclude_against || oppose_against;
    if confirm_for && exclude_against {
        CasePattern::Contradictory
    } else if confirm_for && any_against {
        CasePattern::ConfirmedButOpposed
    } else if any_for && exclude_against {
        CasePattern::SupportedButExcluded
    } else if any_for && any_against {
        CasePattern::Equivocal
    } else if confirm_for {
        CasePattern::ConfirmedClean
    } else if any_for {
        CasePattern::SupportedClean
    } else if exclude_against {
        CasePattern::ExcludedClean
    } else if any_against {
        CasePattern::OpposedClean
    } else {
        CasePattern::OpenPattern
    }
}

/// The single pattern a case matches.
pub fn match_pattern(case: &Case) -> CasePattern {
    pattern_from_flags(
        case.for_args.iter().any(|a| a.sign == SignTag::Confirm),
        case.for_args.iter().any(|a| a.sign == SignTag::Support),
        case.against_args.iter().any(|a| a.sign == SignTag::Exclude),
        case.against_args.iter().any(|a| a.sign == SignTag::Oppose),
    )
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum LexiconError {
    #[error("lexicon line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("lexicon line {line}: unknown pattern name `{name}`")]
    UnknownPattern { line: usize, name: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconWarning {
    pub pattern: CasePattern,
}

impl std::fmt::Display for LexiconWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "lexicon does not define `{}`; using the default term",
            self.pattern.name()
        )
    }
}

/// Maps case patterns to linguistic terms, with optional dominance
/// qualifiers. Total over all patterns.
#[derive(Debug, Clone, PartialEq)]
pub struct Lexicon {
    terms: BTreeMap<CasePattern, String>,
    suffixes: BTreeMap<DominanceVerdict, String>,
}

impl Default for Lexicon {
    fn default() -> Self {
        let terms = [
            (CasePattern::Contradictory, "contradictory"),
            (CasePattern::ConfirmedButOpposed, "contested confirmation"),
            (CasePattern::SupportedButExcluded, "discounted"),
            (CasePattern::Equivocal, "equivocal"),
            (CasePattern::ConfirmedClean, "confirmed"),
            (CasePattern::SupportedClean, "supported"),
            (CasePattern::ExcludedClean, "excluded"),
            (CasePattern::OpposedClean, "doubted"),
            (CasePattern::OpenPattern, "open"),
        ]
        .into_iter()
        .map(|(p, t)| (p, t.to_string()))
        .collect();
        let suffixes = [
            (DominanceVerdict::ForDominates, "on balance supported"),
            (DominanceVerdict::AgainstDominates, "on balance opposed"),
        ]
        .into_iter()
        .map(|(v, s)| (v, s.to_string()))
        .collect();
        Lexicon { terms, suffixes }
    }
}

impl Lexicon {
    pub fn term(&self, pattern: CasePattern) -> &str {
        &self.terms[&pattern]
    }

    pub fn suffix(&self, verdict: DominanceVerdict) -> Option<&str> {
        self.suffixes.get(&verdict).map(String::as_str)
    }

    /// Loads a lexicon from config text: one `pattern_name = "term"` pair
    /// per line, `#` comments. Unknown pattern names are errors; missing
    /// patterns fall back to the defaults with a warning.
    pub fn from_config(text: &str) -> Result<(Self, Vec<LexiconWarning>), LexiconError> {
        let mut lexicon = Lexicon::default();
        let mut seen = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (name, value) = line.split_once('=').ok_or(LexiconError::Malformed {
                line: line_no,
                msg: "expected `pattern_name = \"term\"`".into(),
            })?;
            let name = name.trim();
            let value = value.trim();
            let pattern = CasePattern::from_name(name).ok_or_else(|| {
                LexiconError::UnknownPattern { line: line_no, name: name.to_string() }
            })?;
            let term = value
                .strip_prefix('"')
                .and_then(|v| v.strip_suffix('"'))
                .ok_or(LexiconError::Malformed {
                    line: line_no,
                    msg: "term must be a double-quoted string".into(),
                })?;
            if term.is_empty() {
                return Err(LexiconError::Malformed {
                    line: line_no,
                    msg: "term must be non-empty".into(),
                });
            }
            lexicon.terms.insert(pattern, term.to_string());
            seen.push(pattern);
        }
        let warnings = CasePattern::ALL
            .iter()
            .filter(|p| !seen.contains(p))
            .map(|&pattern| LexiconWarning { pattern })
            .collect();
        Ok((lexicon, warnings))
    }
}

/// The linguistic term for a pattern; equivocal cases carry the dominance
/// qualifier as a suffix when one is configured.
pub fn linguistic_term(
    pattern: CasePattern,
    verdict: DominanceVerdict,
    lexicon: &Lexicon,
) -> String {
    let base = lexicon.term(pattern);
    if pattern == CasePattern::Equivocal {
        if let Some(suffix) = lexicon.suffix(verdict) {
            return format!("{base}, {suffix}");
        }
    }
    base.to_string()
}
