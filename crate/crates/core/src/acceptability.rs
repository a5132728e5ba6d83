//! The six acceptability classes and their assignment to propositions.
//!
//! Classes form a total order of decreasing tension between arguments for
//! and against: open < supported < plausible < probable < confirmed <
//! certain. `classify` returns the highest class whose defining condition
//! holds.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::engine::{arguments_concerning, is_consistent, Argument, EngineError};
use crate::kb::{ItemKind, KnowledgeBase, Polarity, Proposition, SignTag};

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum EvidenceClass {
    Open,
    Supported,
    Plausible,
    Probable,
    Confirmed,
    Certain,
}

impl EvidenceClass {
    pub const ALL: [EvidenceClass; 6] = [
        EvidenceClass::Open,
        EvidenceClass::Supported,
        EvidenceClass::Plausible,
        EvidenceClass::Probable,
        EvidenceClass::Confirmed,
        EvidenceClass::Certain,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EvidenceClass::Open => "open",
            EvidenceClass::Supported => "supported",
            EvidenceClass::Plausible => "plausible",
            EvidenceClass::Probable => "probable",
            EvidenceClass::Confirmed => "confirmed",
            EvidenceClass::Certain => "certain",
        }
    }
}

/// Comparison in the acceptability order.
pub fn class_order(a: EvidenceClass, b: EvidenceClass) -> Ordering {
    a.cmp(&b)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ClassifyOptions {
    /// When set, CONFIRMED requires every consistent supporting argument to
    /// have unopposed premises, instead of at least one.
    pub confirmed_universal: bool,
}

/// Pre-computed evidence for one proposition, from which each class
/// condition can be read off.
pub struct ClassAnalysis {
    prop: Proposition,
    for_args: Vec<Argument>,
    consistent_for: Vec<Argument>,
    has_consistent_against: bool,
    premise_clean_witness: bool,
    premise_clean_all: bool,
    axiomatic_confirm: bool,
}

impl ClassAnalysis {
    pub fn compute(
        kb: &KnowledgeBase,
        prop: &Proposition,
    ) -> Result<Self, EngineError> {
        let args = arguments_concerning(kb, prop)?;
        let (for_args, against_args): (Vec<_>, Vec<_>) = args
            .into_iter()
            .partition(|a| a.polarity() == Polarity::For);
        let consistent_for: Vec<Argument> = for_args
            .iter()
            .filter(|a| is_consistent(kb, &a.grounds))
            .cloned()
            .collect();
        let has_consistent_against = against_args
            .iter()
            .any(|a| is_consistent(kb, &a.grounds));

        let mut premise_clean_witness = false;
        let mut premise_clean_all = !consistent_for.is_empty();
        for arg in &consistent_for {
            let clean = premises_unopposed(kb, arg, prop)?;
            premise_clean_witness |= clean;
            premise_clean_all &= clean;
        }

        let axiomatic_confirm = for_args.iter().any(|a| {
            a.sign == SignTag::Confirm
                && a.grounds
                    .iter()
                    .all(|id| kb.item(id).is_some_and(|i| i.axiomatic()))
        });

        Ok(ClassAnalysis {
            prop: prop.clone(),
            for_args,
            consistent_for,
            has_consistent_against,
            premise_clean_witness,
            premise_clean_all,
            axiomatic_confirm,
        })
    }

    /// Whether the defining condition of `class` holds, independent of any
    /// higher class.
    pub fn condition_holds(&self, class: EvidenceClass, opts: ClassifyOptions) -> bool {
        match class {
            EvidenceClass::Open => true,
            EvidenceClass::Supported => !self.for_args.is_empty(),
            EvidenceClass::Plausible => !self.consistent_for.is_empty(),
            EvidenceClass::Probable => {
                !self.consistent_for.is_empty() && !self.has_consistent_against
            }
            EvidenceClass::Confirmed => {
                self.condition_holds(EvidenceClass::Probable, opts)
                    && if opts.confirmed_universal {
                        self.premise_clean_all
                    } else {
                        self.premise_clean_witness
                    }
            }
            EvidenceClass::Certain => self.axiomatic_confirm,
        }
    }

    pub fn classify(&self, opts: ClassifyOptions) -> EvidenceClass {
        EvidenceClass::ALL
            .iter()
            .rev()
            .copied()
            .find(|&c| self.condition_holds(c, opts))
            .expect("OPEN always holds")
    }

    pub fn prop(&self) -> &Proposition {
        &self.prop
    }
}

/// True when no premise of the argument has a consistent AGAINST-polarity
/// argument. Premises are every proposition appearing as an antecedent in
/// the derivation, intermediate conclusions included, the queried
/// proposition excluded.
fn premises_unopposed(
    kb: &KnowledgeBase,
    arg: &Argument,
    queried: &Proposition,
) -> Result<bool, EngineError> {
    let mut premises: BTreeSet<Proposition> = BTreeSet::new();
    for id in &arg.grounds {
        let item = kb.item(id).expect("ground id exists in base");
        if item.kind() == ItemKind::Rule {
            premises.extend(item.antecedents().iter().cloned());
        }
    }
    premises.remove(queried);
    for premise in premises {
        let opposed = arguments_concerning(kb, &premise)?
            .iter()
            .any(|a| {
                a.polarity() == Polarity::Against && is_consistent(kb, &a.grounds)
            });
        if opposed {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Assigns `prop` the highest acceptability class whose condition holds.
pub fn classify(
    kb: &KnowledgeBase,
    prop: &Proposition,
) -> Result<EvidenceClass, EngineError> {
    classify_with(kb, prop, ClassifyOptions::default())
}

pub fn classify_with(
    kb: &KnowledgeBase,
    prop: &Proposition,
    opts: ClassifyOptions,
) -> Result<EvidenceClass, EngineError> {
    Ok(ClassAnalysis::compute(kb, prop)?.classify(opts))
}
