//! Argument construction: all subset-minimal grounds for a proposition,
//! sign propagation along rule chains, and classical-consistency checks.
//!
//! Derivability is backward chaining over the acyclic rule graph. A rule
//! antecedent is satisfied by any FOR-polarity argument for it; the derived
//! sign follows the weakest link (see [`propagate_sign`]).

use std::collections::{BTreeMap, BTreeSet};
use std::rc::Rc;

use thiserror::Error;

use crate::kb::{ItemId, ItemKind, KnowledgeBase, Polarity, Proposition, SignTag};

/// Enumeration stops with an error past this many candidate derivations
/// per query, unless overridden.
pub const DEFAULT_ARGUMENT_CAP: usize = 10_000;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EngineError {
    #[error("argument cap {cap} exceeded while deriving `{prop}`")]
    CapExceeded { prop: Proposition, cap: usize },
}

/// An argument (grounds, conclusion): a subset-minimal set of item ids
/// deriving the conclusion with the given sign. The weight is the product
/// of the grounds' item weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Argument {
    pub grounds: BTreeSet<ItemId>,
    pub conclusion: Proposition,
    pub sign: SignTag,
    pub weight: f64,
}

impl Argument {
    pub fn polarity(&self) -> Polarity {
        self.sign.polarity()
    }
}

/// A classical contradiction in the base: one proposition both confirmed
/// and excluded.
#[derive(Debug, Clone, PartialEq)]
pub struct ContradictionWitness {
    pub prop: Proposition,
    pub confirming: Argument,
    pub excluding: Argument,
}

/// Weakest-link sign propagation across one rule application.
///
/// `+` and `-` rules keep their sign. A `++` rule yields `++` only when
/// every antecedent was itself confirmed, otherwise `+`; likewise `--`
/// yields `--` only under all-confirmed antecedents, otherwise `-`.
///
/// All antecedent signs must have FOR polarity; AGAINST-polarity input is
/// a precondition violation and panics.
pub fn propagate_sign(rule_sign: SignTag, antecedent_signs: &[SignTag]) -> SignTag {
    assert!(
        antecedent_signs.iter().all(|s| s.polarity() == Polarity::For),
        "antecedent signs must have FOR polarity"
    );
    let all_confirmed = antecedent_signs.iter().all(|&s| s == SignTag::Confirm);
    match rule_sign {
        SignTag::Support => SignTag::Support,
        SignTag::Oppose => SignTag::Oppose,
        SignTag::Confirm => {
            if all_confirmed {
                SignTag::Confirm
            } else {
                SignTag::Support
            }
        }
        SignTag::Exclude => {
            if all_confirmed {
                SignTag::Exclude
            } else {
                SignTag::Oppose
            }
        }
    }
}

type Candidate = (BTreeSet<ItemId>, SignTag);

/// Enumerates every derivation of `prop` (not yet minimized), memoized per
/// proposition. The KB is acyclic, so recursion terminates.
fn candidates(
    kb: &KnowledgeBase,
    prop: &Proposition,
    memo: &mut BTreeMap<Proposition, Rc<Vec<Candidate>>>,
    cap: usize,
    query: &Proposition,
) -> Result<Rc<Vec<Candidate>>, EngineError> {
    if let Some(found) = memo.get(prop) {
        return Ok(Rc::clone(found));
    }
    let mut out: BTreeSet<Candidate> = BTreeSet::new();
    for item in kb.concluding(prop) {
        match item.kind() {
            ItemKind::Fact => {
                out.insert((BTreeSet::from([item.id().clone()]), item.sign()));
            }
            ItemKind::Rule => {
                // FOR-polarity derivations of each antecedent.
                let mut per_antecedent: Vec<Vec<&Candidate>> = Vec::new();
                let mut sub: Vec<Rc<Vec<Candidate>>> = Vec::new();
                for ant in item.antecedents() {
                    sub.push(candidates(kb, ant, memo, cap, query)?);
                }
                let mut satisfiable = true;
                for cands in &sub {
                    let fors: Vec<&Candidate> = cands
                        .iter()
                        .filter(|(_, s)| s.polarity() == Polarity::For)
                        .collect();
                    if fors.is_empty() {
                        satisfiable = false;
                        break;
                    }
                    per_antecedent.push(fors);
                }
                if !satisfiable {
                    continue;
                }
                // Cartesian product over antecedent derivations.
                let mut index = vec![0usize; per_antecedent.len()];
                loop {
                    let mut grounds: BTreeSet<ItemId> =
                        BTreeSet::from([item.id().clone()]);
                    let mut signs = Vec::with_capacity(index.len());
                    for (slot, &i) in index.iter().enumerate() {
                        let (g, s) = per_antecedent[slot][i];
                        grounds.extend(g.iter().cloned());
                        signs.push(*s);
                    }
                    out.insert((grounds, propagate_sign(item.sign(), &signs)));
                    if out.len() > cap {
                        return Err(EngineError::CapExceeded {
                            prop: query.clone(),
                            cap,
                        });
                    }
                    // Advance the odometer.
                    let mut slot = index.len();
                    loop {
                        if slot == 0 {
                            break;
                        }
                        slot -= 1;
                        index[slot] += 1;
                        if index[slot] < per_antecedent[slot].len() {
                            break;
                        }
                        index[slot] = 0;
                        if slot == 0 {
                            break;
                        }
                    }
                    if index.iter().all(|&i| i == 0) {
                        break;
                    }
                }
            }
        }
        if out.len() > cap {
            return Err(EngineError::CapExceeded { prop: query.clone(), cap });
        }
    }
    let rc = Rc::new(out.into_iter().collect::<Vec<_>>());
    memo.insert(prop.clone(), Rc::clone(&rc));
    Ok(rc)
}

/// Keeps a candidate only when no other candidate of the same polarity and
/// same-or-stronger sign has strictly smaller grounds.
fn minimal_only(cands: &[Candidate]) -> Vec<Candidate> {
    cands
        .iter()
        .filter(|(g, s)| {
            !cands.iter().any(|(g2, s2)| {
                s2.polarity() == s.polarity()
                    && s2.strength() >= s.strength()
                    && g2.len() < g.len()
                    && g2.is_subset(g)
            })
        })
        .cloned()
        .collect()
}

fn grounds_weight(kb: &KnowledgeBase, grounds: &BTreeSet<ItemId>) -> f64 {
    grounds
        .iter()
        .map(|id| kb.item(id).expect("ground id exists in base").weight())
        .product()
}

/// All subset-minimal arguments concerning `prop`, canonically ordered by
/// sign and then by grounds ids.
pub fn arguments_concerning(
    kb: &KnowledgeBase,
    prop: &Proposition,
) -> Result<Vec<Argument>, EngineError> {
    arguments_concerning_capped(kb, prop, DEFAULT_ARGUMENT_CAP)
}

/// [`arguments_concerning`] with an explicit candidate cap.
pub fn arguments_concerning_capped(
    kb: &KnowledgeBase,
    prop: &Proposition,
    cap: usize,
) -> Result<Vec<Argument>, EngineError> {
    let mut memo = BTreeMap::new();
    let cands = candidates(kb, prop, &mut memo, cap, prop)?;
    let mut minimal = minimal_only(&cands);
    minimal.sort_by(|(g1, s1), (g2, s2)| s1.cmp(s2).then_with(|| g1.cmp(g2)));
    Ok(minimal
        .into_iter()
        .map(|(grounds, sign)| Argument {
            weight: grounds_weight(kb, &grounds),
            grounds,
            conclusion: prop.clone(),
            sign,
        })
        .collect())
}

/// The set of sign tags for which some argument concluding `prop` exists.
pub fn derive_signs(
    kb: &KnowledgeBase,
    prop: &Proposition,
) -> Result<BTreeSet<SignTag>, EngineError> {
    Ok(arguments_concerning(kb, prop)?
        .into_iter()
        .map(|a| a.sign)
        .collect())
}

/// Sign sets derivable from a restricted item set, by forward closure.
/// Used for per-grounds consistency, where only the grounds' own items
/// participate.
fn closure_signs(
    kb: &KnowledgeBase,
    item_ids: &BTreeSet<ItemId>,
) -> BTreeMap<Proposition, BTreeSet<SignTag>> {
    let items: Vec<_> = item_ids
        .iter()
        .filter_map(|id| kb.item(id))
        .collect();
    let mut signs: BTreeMap<Proposition, BTreeSet<SignTag>> = BTreeMap::new();
    loop {
        let mut changed = false;
        for item in &items {
            let derived: Vec<SignTag> = match item.kind() {
                ItemKind::Fact => vec![item.sign()],
                ItemKind::Rule => {
                    let available: Vec<(bool, bool)> = item
                        .antecedents()
                        .iter()
                        .map(|ant| {
                            let s = signs.get(ant);
                            (
                                s.is_some_and(|s| s.contains(&SignTag::Support)),
                                s.is_some_and(|s| s.contains(&SignTag::Confirm)),
                            )
                        })
                        .collect();
                    let all_satisfiable =
                        available.iter().all(|&(sup, conf)| sup || conf);
                    if !all_satisfiable {
                        continue;
                    }
                    let all_confirmable = available.iter().all(|&(_, conf)| conf);
                    let some_weak = available.iter().any(|&(sup, _)| sup);
                    match item.sign() {
                        SignTag::Support => vec![SignTag::Support],
                        SignTag::Oppose => vec![SignTag::Oppose],
                        SignTag::Confirm => {
                            let mut v = Vec::new();
                            if all_confirmable {
                                v.push(SignTag::Confirm);
                            }
                            if some_weak {
                                v.push(SignTag::Support);
                            }
                            v
                        }
                        SignTag::Exclude => {
                            let mut v = Vec::new();
                            if all_confirmable {
                                v.push(SignTag::Exclude);
                            }
                            if some_weak {
                                v.push(SignTag::Oppose);
                            }
                            v
                        }
                    }
                }
            };
            let entry = signs.entry(item.consequent().clone()).or_default();
            for s in derived {
                changed |= entry.insert(s);
            }
        }
        if !changed {
            return signs;
        }
    }
}

/// True unless the grounds alone derive both `q:++` and `q:--` for some
/// proposition `q`. Support against opposition is tension, not
/// contradiction.
pub fn is_consistent(kb: &KnowledgeBase, grounds: &BTreeSet<ItemId>) -> bool {
    let signs = closure_signs(kb, grounds);
    !signs
        .values()
        .any(|s| s.contains(&SignTag::Confirm) && s.contains(&SignTag::Exclude))
}

/// One witness per proposition that has both a confirming and an excluding
/// argument, in proposition order.
pub fn find_contradictions(
    kb: &KnowledgeBase,
) -> Result<Vec<ContradictionWitness>, EngineError> {
    let mut witnesses = Vec::new();
    for prop in kb.propositions() {
        let args = arguments_concerning(kb, &prop)?;
        let confirming = args.iter().find(|a| a.sign == SignTag::Confirm);
        let excluding = args.iter().find(|a| a.sign == SignTag::Exclude);
        if let (Some(c), Some(e)) = (confirming, excluding) {
            witnesses.push(ContradictionWitness {
                prop: prop.clone(),
                confirming: c.clone(),
                excluding: e.clone(),
            });
        }
    }
    Ok(witnesses)
}
