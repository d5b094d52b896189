//! Whether a sequence of plausibility orders keeps the declared variable
//! factors independent.
//!
//! A single order respects a factor partition when
//!
//! 1. its belief set is the product of the belief set's per-factor
//!    projections, and
//! 2. revising by any full assignment of one factor never flips beliefs
//!    about another: the projection of the revised belief onto every other
//!    factor still intersects the projection of the unrevised belief.
//!
//! The second condition is what catches correlation smuggled in by repeated
//! upgrades: a singleton belief set always factorizes, but revising on one
//! coin and watching the opinion about the other coin reverse cannot happen
//! under any order built from independent per-factor ranks.

use std::collections::BTreeSet;

use crate::algebra::{Event, OutcomeSpace};

use super::{order::PlausibilityOrder, RevisionError};

/// True when every order in the sequence respects the factor partition.
/// `factors` must partition the space's variable names.
pub fn independence_preserved(
    orders: &[PlausibilityOrder],
    factors: &[Vec<String>],
) -> Result<bool, RevisionError> {
    match orders {
        [] => Ok(true),
        [first, rest @ ..] => {
            let space = first.space();
            assert!(
                rest.iter().all(|o| o.space() == space),
                "orders over different spaces"
            );
            let blocks = resolve_partition(space, factors)?;
            Ok(orders.iter().all(|o| order_respects(o, &blocks)))
        }
    }
}

/// Single-order form of [`independence_preserved`].
pub fn order_is_independent(
    order: &PlausibilityOrder,
    factors: &[Vec<String>],
) -> Result<bool, RevisionError> {
    let blocks = resolve_partition(order.space(), factors)?;
    Ok(order_respects(order, &blocks))
}

fn resolve_partition(
    space: &OutcomeSpace,
    factors: &[Vec<String>],
) -> Result<Vec<Vec<usize>>, RevisionError> {
    let mut seen = vec![false; space.variables().len()];
    let mut blocks = Vec::with_capacity(factors.len());
    for factor in factors {
        if factor.is_empty() {
            return Err(RevisionError::BadPartition("empty factor".into()));
        }
        let mut block = Vec::with_capacity(factor.len());
        for name in factor {
            let idx = space.var_index(name).ok_or_else(|| {
                RevisionError::BadPartition(format!("unknown variable `{name}`"))
            })?;
            if std::mem::replace(&mut seen[idx], true) {
                return Err(RevisionError::BadPartition(format!(
                    "variable `{name}` appears twice"
                )));
            }
            block.push(idx);
        }
        blocks.push(block);
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(RevisionError::BadPartition(format!(
            "variable `{}` not covered by any factor",
            space.variables()[missing].name()
        )));
    }
    Ok(blocks)
}

fn order_respects(order: &PlausibilityOrder, blocks: &[Vec<usize>]) -> bool {
    let belief = order.belief();
    if product_of_projections(&belief, blocks) != belief {
        return false;
    }
    // Revising by a full assignment of factor A must not flip the belief
    // about any other factor B.
    for (ai, a_block) in blocks.iter().enumerate() {
        for assignment in full_assignments(order.space(), a_block) {
            let cylinder = order.space().cylinder_indices(&assignment);
            let revised = order.revise(&cylinder);
            for (bi, b_block) in blocks.iter().enumerate() {
                if ai == bi {
                    continue;
                }
                let before = belief.project(b_block);
                let after = revised.project(b_block);
                if before.intersection(&after).next().is_none() {
                    return false;
                }
            }
        }
    }
    true
}

/// Smallest event containing `event` that is a product across the blocks.
fn product_of_projections(event: &Event, blocks: &[Vec<usize>]) -> Event {
    let projections: Vec<BTreeSet<Vec<usize>>> =
        blocks.iter().map(|b| event.project(b)).collect();
    let space = event.space();
    space
        .event_from_atoms((0..space.atom_count()).filter(|atom| {
            blocks.iter().zip(&projections).all(|(block, proj)| {
                let tuple: Vec<usize> = block.iter().map(|v| space.digit(*atom, *v)).collect();
                proj.contains(&tuple)
            })
        }))
        .expect("atom indices in range")
}

/// Every full assignment of the given variables, as resolved index pairs.
fn full_assignments(space: &OutcomeSpace, vars: &[usize]) -> Vec<Vec<(usize, usize)>> {
    let mut out = vec![Vec::new()];
    for &v in vars {
        let count = space.variables()[v].values().len();
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..count).map(move |val| {
                    let mut next = prefix.clone();
                    next.push((v, val));
                    next
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::naive_coin_space;

    fn factors() -> Vec<Vec<String>> {
        vec![vec!["X1".to_string()], vec!["X2".to_string()]]
    }

    fn upgrade_sequence() -> Vec<PlausibilityOrder> {
        let space = naive_coin_space();
        let hh = space.cylinder([("X1", "heads"), ("X2", "heads")]).unwrap();
        let tt = space.cylinder([("X1", "tails"), ("X2", "tails")]).unwrap();
        let e_h1 = space.cylinder([("X1", "heads")]).unwrap();
        let o0 = PlausibilityOrder::uniform(&space);
        let o1 = o0.radical_upgrade(&hh);
        let o2 = o1.radical_upgrade(&tt);
        let o3 = o2.radical_upgrade(&e_h1);
        vec![o0, o1, o2, o3]
    }

    #[test]
    fn uniform_order_is_independent() {
        let space = naive_coin_space();
        let o = PlausibilityOrder::uniform(&space);
        assert!(order_is_independent(&o, &factors()).unwrap());
    }

    #[test]
    fn upgrade_sequence_loses_independence_at_the_third_model() {
        let orders = upgrade_sequence();
        assert!(order_is_independent(&orders[0], &factors()).unwrap());
        assert!(order_is_independent(&orders[1], &factors()).unwrap());
        // After two conflicting pair-reports the coins have become
        // correlated: conditioning on box 1 flips the box-2 belief.
        assert!(!order_is_independent(&orders[2], &factors()).unwrap());
        assert!(!independence_preserved(&orders, &factors()).unwrap());
    }

    #[test]
    fn rank_sums_of_per_factor_ranks_stay_independent() {
        let space = naive_coin_space();
        // rank(atom) = r1(X1) + r2(X2) with r1 = {heads: 1, tails: 0},
        // r2 = {heads: 0, tails: 2}.
        let ranks: Vec<u32> = (0..space.atom_count())
            .map(|a| {
                let x1 = space.digit(a, 0) as u32; // heads=0 -> contributes 1
                let x2 = space.digit(a, 1) as u32;
                (1 - x1) + 2 * x2
            })
            .collect();
        let o = PlausibilityOrder::new(&space, ranks).unwrap();
        assert!(order_is_independent(&o, &factors()).unwrap());
    }

    #[test]
    fn partition_must_cover_all_variables_exactly_once() {
        let orders = upgrade_sequence();
        let bad = vec![vec!["X1".to_string()]];
        assert!(matches!(
            independence_preserved(&orders, &bad),
            Err(RevisionError::BadPartition(_))
        ));
        let dup = vec![vec!["X1".to_string()], vec!["X1".to_string(), "X2".to_string()]];
        assert!(matches!(
            independence_preserved(&orders, &dup),
            Err(RevisionError::BadPartition(_))
        ));
    }
}
