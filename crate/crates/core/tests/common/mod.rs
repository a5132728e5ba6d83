//! Shared test support: a brute-force oracle that applies the argument and
//! acceptability definitions literally, plus random KB generators.
//!
//! The oracle enumerates derivation trees and ground subsets directly and
//! shares no code path with the engine it checks.

// Each integration test binary uses its own subset of these helpers.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use riskcase::acceptability::EvidenceClass;
use riskcase::case::{pattern_from_flags, CasePattern};
use riskcase::kb::{
    ItemId, KbItem, KnowledgeBase, Polarity, Proposition, SignTag,
};

pub type OracleArgument = (BTreeSet<ItemId>, SignTag);

fn strength(sign: SignTag) -> u8 {
    match sign {
        SignTag::Confirm | SignTag::Exclude => 2,
        SignTag::Support | SignTag::Oppose => 1,
    }
}

fn polarity(sign: SignTag) -> Polarity {
    match sign {
        SignTag::Support | SignTag::Confirm => Polarity::For,
        SignTag::Oppose | SignTag::Exclude => Polarity::Against,
    }
}

/// Weakest-link propagation, re-stated independently of the engine.
fn oracle_propagate(rule_sign: SignTag, ant_signs: &[SignTag]) -> SignTag {
    let all_confirm = ant_signs.iter().all(|&s| s == SignTag::Confirm);
    match (rule_sign, all_confirm) {
        (SignTag::Support, _) => SignTag::Support,
        (SignTag::Oppose, _) => SignTag::Oppose,
        (SignTag::Confirm, true) => SignTag::Confirm,
        (SignTag::Confirm, false) => SignTag::Support,
        (SignTag::Exclude, true) => SignTag::Exclude,
        (SignTag::Exclude, false) => SignTag::Oppose,
    }
}

fn cartesian(sets: &[Vec<SignTag>]) -> Vec<Vec<SignTag>> {
    let mut out: Vec<Vec<SignTag>> = vec![Vec::new()];
    for set in sets {
        let mut next = Vec::new();
        for prefix in &out {
            for &sign in set {
                let mut row = prefix.clone();
                row.push(sign);
                next.push(row);
            }
        }
        out = next;
    }
    out
}

/// All signs derivable for `prop` from exactly the given items, by naive
/// enumeration of derivation trees.
pub fn oracle_signs(items: &[&KbItem], prop: &Proposition) -> BTreeSet<SignTag> {
    let mut out = BTreeSet::new();
    for item in items.iter().filter(|i| i.consequent() == prop) {
        if item.antecedents().is_empty() {
            out.insert(item.sign());
            continue;
        }
        let ant_sets: Vec<Vec<SignTag>> = item
            .antecedents()
            .iter()
            .map(|ant| {
                oracle_signs(items, ant)
                    .into_iter()
                    .filter(|&s| polarity(s) == Polarity::For)
                    .collect()
            })
            .collect();
        if ant_sets.iter().any(|s| s.is_empty()) {
            continue;
        }
        for combo in cartesian(&ant_sets) {
            out.insert(oracle_propagate(item.sign(), &combo));
        }
    }
    out
}

fn subset_items(kb: &KnowledgeBase, mask: u32) -> Vec<&KbItem> {
    kb.items()
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, item)| item)
        .collect()
}

fn mask_ids(kb: &KnowledgeBase, mask: u32) -> BTreeSet<ItemId> {
    subset_items(kb, mask)
        .iter()
        .map(|i| i.id().clone())
        .collect()
}

/// All minimal arguments concerning `prop`, by enumerating every ground
/// subset of the base and keeping those with no smaller same-polarity,
/// same-or-stronger derivation.
pub fn oracle_arguments(kb: &KnowledgeBase, prop: &Proposition) -> BTreeSet<OracleArgument> {
    let n = kb.items().len();
    assert!(n <= 20, "oracle is exponential in the item count");
    let mut derivable: Vec<(u32, SignTag)> = Vec::new();
    for mask in 0..(1u32 << n) {
        for sign in oracle_signs(&subset_items(kb, mask), prop) {
            derivable.push((mask, sign));
        }
    }
    derivable
        .iter()
        .filter(|(mask, sign)| {
            !derivable.iter().any(|(m2, s2)| {
                m2 & mask == *m2
                    && m2 != mask
                    && polarity(*s2) == polarity(*sign)
                    && strength(*s2) >= strength(*sign)
            })
        })
        .map(|&(mask, sign)| (mask_ids(kb, mask), sign))
        .collect()
}

/// Classical consistency of a ground set: no proposition both confirmed
/// and excluded from the set alone.
pub fn oracle_consistent(kb: &KnowledgeBase, grounds: &BTreeSet<ItemId>) -> bool {
    let items: Vec<&KbItem> = kb
        .items()
        .iter()
        .filter(|i| grounds.contains(i.id()))
        .collect();
    let mut props: BTreeSet<&Proposition> = BTreeSet::new();
    for item in &items {
        props.insert(item.consequent());
        props.extend(item.antecedents().iter());
    }
    !props.iter().any(|p| {
        let signs = oracle_signs(&items, p);
        signs.contains(&SignTag::Confirm) && signs.contains(&SignTag::Exclude)
    })
}

/// Premises of an argument: antecedent propositions of its rules, the
/// queried proposition excluded.
fn oracle_premises(
    kb: &KnowledgeBase,
    grounds: &BTreeSet<ItemId>,
    queried: &Proposition,
) -> BTreeSet<Proposition> {
    let mut premises = BTreeSet::new();
    for item in kb.items().iter().filter(|i| grounds.contains(i.id())) {
        premises.extend(item.antecedents().iter().cloned());
    }
    premises.remove(queried);
    premises
}

/// Literal application of the six acceptability definitions; returns the
/// highest class whose condition holds.
pub fn oracle_classify(kb: &KnowledgeBase, prop: &Proposition) -> EvidenceClass {
    let args = oracle_arguments(kb, prop);
    let for_args: Vec<&OracleArgument> = args
        .iter()
        .filter(|(_, s)| polarity(*s) == Polarity::For)
        .collect();
    let against_args: Vec<&OracleArgument> = args
        .iter()
        .filter(|(_, s)| polarity(*s) == Polarity::Against)
        .collect();

    let supported = !for_args.is_empty();
    let consistent_for: Vec<&&OracleArgument> = for_args
        .iter()
        .filter(|(g, _)| oracle_consistent(kb, g))
        .collect();
    let plausible = !consistent_for.is_empty();
    let probable = plausible
        && !against_args.iter().any(|(g, _)| oracle_consistent(kb, g));
    let confirmed = probable
        && consistent_for.iter().any(|(g, _)| {
            oracle_premises(kb, g, prop).iter().all(|premise| {
                !oracle_arguments(kb, premise).iter().any(|(pg, ps)| {
                    polarity(*ps) == Polarity::Against && oracle_consistent(kb, pg)
                })
            })
        });
    let certain = for_args.iter().any(|(g, s)| {
        *s == SignTag::Confirm
            && g.iter().all(|id| kb.item(id).is_some_and(|i| i.axiomatic()))
    });

    if certain {
        EvidenceClass::Certain
    } else if confirmed {
        EvidenceClass::Confirmed
    } else if probable {
        EvidenceClass::Probable
    } else if plausible {
        EvidenceClass::Plausible
    } else if supported {
        EvidenceClass::Supported
    } else {
        EvidenceClass::Open
    }
}

/// Case pattern from the oracle's argument set.
pub fn oracle_pattern(kb: &KnowledgeBase, prop: &Proposition) -> CasePattern {
    let args = oracle_arguments(kb, prop);
    pattern_from_flags(
        args.iter().any(|(_, s)| *s == SignTag::Confirm),
        args.iter().any(|(_, s)| *s == SignTag::Support),
        args.iter().any(|(_, s)| *s == SignTag::Exclude),
        args.iter().any(|(_, s)| *s == SignTag::Oppose),
    )
}

const SIGNS: [SignTag; 4] = [
    SignTag::Support,
    SignTag::Oppose,
    SignTag::Confirm,
    SignTag::Exclude,
];

const WEIGHTS: [f64; 5] = [1.0, 0.9, 0.75, 0.5, 0.25];

/// Random acyclic KB: rules only point from lower- to higher-numbered
/// propositions.
pub fn random_kb(rng: &mut impl Rng, max_items: usize, n_props: usize) -> KnowledgeBase {
    let props: Vec<Proposition> = (0..n_props)
        .map(|i| Proposition::new(&format!("p{i}")).unwrap())
        .collect();
    let n_items = rng.gen_range(1..=max_items);
    let mut items = Vec::new();
    for i in 0..n_items {
        let id = ItemId::new(&format!("i{i}")).unwrap();
        let consequent_idx = rng.gen_range(0..n_props);
        let sign = SIGNS[rng.gen_range(0..SIGNS.len())];
        let weight = WEIGHTS[rng.gen_range(0..WEIGHTS.len())];
        let axiomatic = weight == 1.0 && rng.gen_bool(0.1);
        let item = if consequent_idx == 0 || rng.gen_bool(0.5) {
            KbItem::fact(id, props[consequent_idx].clone(), sign, weight, axiomatic)
        } else {
            let n_ants = rng.gen_range(1..=consequent_idx.min(2));
            let mut pool: Vec<usize> = (0..consequent_idx).collect();
            pool.shuffle(rng);
            let ants = pool[..n_ants]
                .iter()
                .map(|&idx| props[idx].clone())
                .collect();
            KbItem::rule(
                id,
                ants,
                props[consequent_idx].clone(),
                sign,
                weight,
                axiomatic,
            )
        };
        items.push(item.expect("generated item is valid"));
    }
    KnowledgeBase::new(items).expect("generated base is acyclic")
}

/// Random items whose rule graph may contain cycles; for checking cycle
/// detection against an independent topological sort.
pub fn random_items_maybe_cyclic(
    rng: &mut impl Rng,
    max_items: usize,
    n_props: usize,
) -> Vec<KbItem> {
    let props: Vec<Proposition> = (0..n_props)
        .map(|i| Proposition::new(&format!("p{i}")).unwrap())
        .collect();
    let n_items = rng.gen_range(1..=max_items);
    let mut items = Vec::new();
    for i in 0..n_items {
        let id = ItemId::new(&format!("i{i}")).unwrap();
        let consequent_idx = rng.gen_range(0..n_props);
        let sign = SIGNS[rng.gen_range(0..SIGNS.len())];
        let item = if rng.gen_bool(0.3) || n_props == 1 {
            KbItem::fact(id, props[consequent_idx].clone(), sign, 1.0, false).unwrap()
        } else {
            let mut pool: Vec<usize> =
                (0..n_props).filter(|&idx| idx != consequent_idx).collect();
            pool.shuffle(rng);
            let n_ants = rng.gen_range(1..=pool.len().min(2));
            let ants = pool[..n_ants]
                .iter()
                .map(|&idx| props[idx].clone())
                .collect();
            KbItem::rule(id, ants, props[consequent_idx].clone(), sign, 1.0, false)
                .unwrap()
        };
        items.push(item);
    }
    items
}

/// Kahn's algorithm over the antecedent -> consequent proposition graph;
/// true iff the graph is acyclic.
pub fn toposort_is_acyclic(items: &[KbItem]) -> bool {
    let mut nodes: BTreeSet<&Proposition> = BTreeSet::new();
    let mut edges: BTreeSet<(&Proposition, &Proposition)> = BTreeSet::new();
    for item in items {
        nodes.insert(item.consequent());
        for ant in item.antecedents() {
            nodes.insert(ant);
            edges.insert((ant, item.consequent()));
        }
    }
    let mut in_degree: std::collections::BTreeMap<&Proposition, usize> =
        nodes.iter().map(|&n| (n, 0)).collect();
    for &(_, to) in &edges {
        *in_degree.get_mut(to).unwrap() += 1;
    }
    let mut queue: Vec<&Proposition> = in_degree
        .iter()
        .filter(|(_, &d)| d == 0)
        .map(|(&n, _)| n)
        .collect();
    let mut removed = 0usize;
    while let Some(node) = queue.pop() {
        removed += 1;
        for &(from, to) in &edges {
            if from == node {
                let d = in_degree.get_mut(to).unwrap();
                *d -= 1;
                if *d == 0 {
                    queue.push(to);
                }
            }
        }
    }
    removed == nodes.len()
}
