//! Knowledge-base data model: sign-tagged facts and defeasible rules.
//!
//! A [`KnowledgeBase`] is immutable after construction and may be shared
//! freely between concurrent queries. The rule dependency graph is required
//! to be acyclic; cycles are rejected when the base is built.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Polarity of a sign tag: does it speak for or against its proposition?
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    For,
    Against,
}

/// The four sign tags a statement may carry: `+`, `-`, `++`, `--`.
///
/// Within each polarity the doubled tag is strictly stronger:
/// `++` (confirm) > `+` (support) and `--` (exclude) > `-` (oppose).
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum SignTag {
    Support,
    Oppose,
    Confirm,
    Exclude,
}

impl SignTag {
    pub fn polarity(self) -> Polarity {
        match self {
            SignTag::Support | SignTag::Confirm => Polarity::For,
            SignTag::Oppose | SignTag::Exclude => Polarity::Against,
        }
    }

    /// Strength within a polarity: 2 for the doubled tags, 1 otherwise.
    pub fn strength(self) -> u8 {
        match self {
            SignTag::Confirm | SignTag::Exclude => 2,
            SignTag::Support | SignTag::Oppose => 1,
        }
    }

    /// The surface token used in the rule DSL.
    pub fn token(self) -> &'static str {
        match self {
            SignTag::Support => "+",
            SignTag::Oppose => "-",
            SignTag::Confirm => "++",
            SignTag::Exclude => "--",
        }
    }
}

impl fmt::Display for SignTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A propositional atom, identified by name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Proposition(String);

impl Proposition {
    /// Parses a proposition name; must match `[a-z][a-zA-Z0-9_]*`.
    pub fn new(name: &str) -> Result<Self, KbError> {
        if is_identifier(name) {
            Ok(Proposition(name.to_string()))
        } else {
            Err(KbError::InvalidName(name.to_string()))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Identifier of a fact or rule within a knowledge base.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ItemId(String);

impl ItemId {
    pub fn new(id: &str) -> Result<Self, KbError> {
        if is_identifier(id) {
            Ok(ItemId(id.to_string()))
        } else {
            Err(KbError::InvalidName(id.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ItemKind {
    Fact,
    Rule,
}

/// One statement of the knowledge base: a fact or a defeasible rule.
///
/// Facts have no antecedents. Weights live in `(0, 1]` and default to 1;
/// an item may be marked `axiomatic` only at weight 1.
#[derive(Debug, Clone, PartialEq)]
pub struct KbItem {
    id: ItemId,
    antecedents: Vec<Proposition>,
    consequent: Proposition,
    sign: SignTag,
    weight: f64,
    axiomatic: bool,
}

impl KbItem {
    pub fn fact(
        id: ItemId,
        consequent: Proposition,
        sign: SignTag,
        weight: f64,
        axiomatic: bool,
    ) -> Result<Self, KbError> {
        Self::check_weight(&id, weight, axiomatic)?;
        Ok(KbItem {
            id,
            antecedents: Vec::new(),
            consequent,
            sign,
            weight,
            axiomatic,
        })
    }

    pub fn rule(
        id: ItemId,
        antecedents: Vec<Proposition>,
        consequent: Proposition,
        sign: SignTag,
        weight: f64,
        axiomatic: bool,
    ) -> Result<Self, KbError> {
        if antecedents.is_empty() {
            return Err(KbError::EmptyAntecedents(id));
        }
        if antecedents.contains(&consequent) {
            return Err(KbError::SelfLoop(id, consequent));
        }
        Self::check_weight(&id, weight, axiomatic)?;
        Ok(KbItem {
            id,
            antecedents,
            consequent,
            sign,
            weight,
            axiomatic,
        })
    }

    fn check_weight(id: &ItemId, weight: f64, axiomatic: bool) -> Result<(), KbError> {
        if !(weight > 0.0 && weight <= 1.0) {
            return Err(KbError::WeightOutOfRange(weight));
        }
        if axiomatic && weight != 1.0 {
            return Err(KbError::AxiomWeight(id.clone()));
        }
        Ok(())
    }

    pub fn id(&self) -> &ItemId {
        &self.id
    }

    pub fn kind(&self) -> ItemKind {
        if self.antecedents.is_empty() {
            ItemKind::Fact
        } else {
            ItemKind::Rule
        }
    }

    pub fn antecedents(&self) -> &[Proposition] {
        &self.antecedents
    }

    pub fn consequent(&self) -> &Proposition {
        &self.consequent
    }

    pub fn sign(&self) -> SignTag {
        self.sign
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn axiomatic(&self) -> bool {
        self.axiomatic
    }

    /// Renders the item as one DSL statement.
    pub fn to_statement(&self) -> String {
        let mut out = String::new();
        match self.kind() {
            ItemKind::Fact => {
                out.push_str(&format!("fact {}: {}", self.id, self.consequent));
            }
            ItemKind::Rule => {
                let body = self
                    .antecedents
                    .iter()
                    .map(|p| p.name())
                    .collect::<Vec<_>>()
                    .join(" & ");
                out.push_str(&format!(
                    "rule {}: {} -> {}",
                    self.id, body, self.consequent
                ));
            }
        }
        out.push_str(&format!(" : {}", self.sign.token()));
        if self.weight != 1.0 {
            out.push_str(&format!(" weight {}", self.weight));
        }
        if self.axiomatic {
            out.push_str(" axiom");
        }
        out.push_str(" .");
        out
    }
}

/// Errors raised while building or parsing a knowledge base.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum KbError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("invalid identifier `{0}`")]
    InvalidName(String),
    #[error("duplicate item id `{0}`")]
    DuplicateId(ItemId),
    #[error("weight {0} out of range (0, 1]")]
    WeightOutOfRange(f64),
    #[error("axiomatic item `{0}` must have weight 1")]
    AxiomWeight(ItemId),
    #[error("rule `{0}` lists its consequent `{1}` as an antecedent")]
    SelfLoop(ItemId, Proposition),
    #[error("rule `{0}` has no antecedents")]
    EmptyAntecedents(ItemId),
    #[error("cyclic rule graph: {}", .cycle.iter().map(|p| p.name()).collect::<Vec<_>>().join(" -> "))]
    CyclicRules { cycle: Vec<Proposition> },
}

/// Validation warnings; none of these block a query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Warning {
    /// A rule antecedent that no item in the base concludes.
    UnderivableAntecedent { rule: ItemId, prop: Proposition },
    /// A fact whose proposition occurs in no rule of a rule-bearing base.
    UnusedFact { fact: ItemId, prop: Proposition },
    /// Two facts with identical content under different ids.
    DuplicateFact { first: ItemId, duplicate: ItemId },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::UnderivableAntecedent { rule, prop } => write!(
                f,
                "rule `{rule}` needs `{prop}` but nothing in the base concludes it"
            ),
            Warning::UnusedFact { fact, prop } => {
                write!(f, "fact `{fact}` concludes `{prop}`, which no rule mentions")
            }
            Warning::DuplicateFact { first, duplicate } => {
                write!(f, "fact `{duplicate}` duplicates the content of `{first}`")
            }
        }
    }
}

/// The database of facts and rules, with derived indexes.
#[derive(Debug, Clone, PartialEq)]
pub struct KnowledgeBase {
    items: Vec<KbItem>,
    by_id: BTreeMap<ItemId, usize>,
    concluders: BTreeMap<Proposition, Vec<usize>>,
}

impl KnowledgeBase {
    /// Builds a base from items, checking id uniqueness and acyclicity.
    pub fn new(items: Vec<KbItem>) -> Result<Self, KbError> {
        let mut by_id = BTreeMap::new();
        let mut concluders: BTreeMap<Proposition, Vec<usize>> = BTreeMap::new();
        for (idx, item) in items.iter().enumerate() {
            if by_id.insert(item.id.clone(), idx).is_some() {
                return Err(KbError::DuplicateId(item.id.clone()));
            }
            concluders
                .entry(item.consequent.clone())
                .or_default()
                .push(idx);
        }
        let kb = KnowledgeBase {
            items,
            by_id,
            concluders,
        };
        if let Some(cycle) = kb.find_cycle() {
            return Err(KbError::CyclicRules { cycle });
        }
        Ok(kb)
    }

    pub fn items(&self) -> &[KbItem] {
        &self.items
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn item(&self, id: &ItemId) -> Option<&KbItem> {
        self.by_id.get(id).map(|&idx| &self.items[idx])
    }

    /// All items whose consequent is `prop`, in statement order.
    pub fn concluding(&self, prop: &Proposition) -> impl Iterator<Item = &KbItem> {
        self.concluders
            .get(prop)
            .map(|v| v.as_slice())
            .unwrap_or(&[])
            .iter()
            .map(move |&idx| &self.items[idx])
    }

    /// Every proposition mentioned anywhere in the base, sorted by name.
    pub fn propositions(&self) -> BTreeSet<Proposition> {
        let mut props = BTreeSet::new();
        for item in &self.items {
            props.insert(item.consequent.clone());
            props.extend(item.antecedents.iter().cloned());
        }
        props
    }

    /// Renders the base back to DSL text, one statement per line.
    pub fn to_dsl(&self) -> String {
        let mut out = String::new();
        for item in &self.items {
            out.push_str(&item.to_statement());
            out.push('\n');
        }
        out
    }

    /// Non-fatal lint pass: underivable antecedents, dead facts, duplicates.
    pub fn validate(&self) -> Vec<Warning> {
        let mut warnings = Vec::new();
        let concluded: BTreeSet<&Proposition> =
            self.items.iter().map(|i| &i.consequent).collect();

        for item in &self.items {
            for ant in &item.antecedents {
                if !concluded.contains(ant) {
                    warnings.push(Warning::UnderivableAntecedent {
                        rule: item.id.clone(),
                        prop: ant.clone(),
                    });
                }
            }
        }

        let has_rules = self.items.iter().any(|i| i.kind() == ItemKind::Rule);
        if has_rules {
            let mut rule_props: BTreeSet<&Proposition> = BTreeSet::new();
            for item in self.items.iter().filter(|i| i.kind() == ItemKind::Rule) {
                rule_props.insert(&item.consequent);
                rule_props.extend(item.antecedents.iter());
            }
            for item in self.items.iter().filter(|i| i.kind() == ItemKind::Fact) {
                if !rule_props.contains(&item.consequent) {
                    warnings.push(Warning::UnusedFact {
                        fact: item.id.clone(),
                        prop: item.consequent.clone(),
                    });
                }
            }
        }

        let facts: Vec<&KbItem> = self
            .items
            .iter()
            .filter(|i| i.kind() == ItemKind::Fact)
            .collect();
        for (i, a) in facts.iter().enumerate() {
            for b in &facts[i + 1..] {
                if a.consequent == b.consequent
                    && a.sign == b.sign
                    && a.weight == b.weight
                    && a.axiomatic == b.axiomatic
                {
                    warnings.push(Warning::DuplicateFact {
                        first: a.id.clone(),
                        duplicate: b.id.clone(),
                    });
                }
            }
        }
        warnings
    }

    /// Looks for a cycle in the antecedent -> consequent graph.
    /// Returns the proposition sequence of one cycle, closed at both ends.
    fn find_cycle(&self) -> Option<Vec<Proposition>> {
        let mut edges: BTreeMap<&Proposition, BTreeSet<&Proposition>> = BTreeMap::new();
        for item in &self.items {
            for ant in &item.antecedents {
                edges.entry(ant).or_default().insert(&item.consequent);
            }
        }

        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            InProgress,
            Done,
        }
        let mut marks: BTreeMap<&Proposition, Mark> = BTreeMap::new();
        let mut stack: Vec<&Proposition> = Vec::new();

        fn visit<'a>(
            node: &'a Proposition,
            edges: &BTreeMap<&'a Proposition, BTreeSet<&'a Proposition>>,
            marks: &mut BTreeMap<&'a Proposition, Mark>,
            stack: &mut Vec<&'a Proposition>,
        ) -> Option<Vec<Proposition>> {
            match marks.get(node) {
                Some(Mark::Done) => return None,
                Some(Mark::InProgress) => {
                    let start = stack.iter().position(|p| *p == node).unwrap();
                    let mut cycle: Vec<Proposition> =
                        stack[start..].iter().map(|p| (*p).clone()).collect();
                    cycle.push(node.clone());
                    return Some(cycle);
                }
                None => {}
            }
            marks.insert(node, Mark::InProgress);
            stack.push(node);
            if let Some(next) = edges.get(node) {
                for succ in next {
                    if let Some(cycle) = visit(succ, edges, marks, stack) {
                        return Some(cycle);
                    }
                }
            }
            stack.pop();
            marks.insert(node, Mark::Done);
            None
        }

        let nodes: Vec<&Proposition> = edges.keys().copied().collect();
        for node in nodes {
            if let Some(cycle) = visit(node, &edges, &mut marks, &mut stack) {
                return Some(cycle);
            }
        }
        None
    }
}
