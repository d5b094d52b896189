//! Brute-force enumeration oracles for small spaces.
//!
//! `enumerate_preorders` lists every total preorder with a prescribed
//! most-plausible block; the count is the ordered Bell number of the
//! remaining atoms. `enumerate_operators` lists every table satisfying
//! (*1)-(*4), either by raw filtering of all candidate tables (up to 3 atoms)
//! or through the preorder enumeration with independent postulate
//! re-verification (4 atoms). Results are deterministic and sorted.

use std::sync::Arc;

use crate::algebra::{Event, OutcomeSpace};

use super::{
    check_postulates, guard_size, mask_of, order::PlausibilityOrder, PostulateStatus,
    RevisionError, RevisionOperator,
};

/// Number of weak orders (ordered set partitions) of `n` elements.
pub fn ordered_bell(n: usize) -> u64 {
    // a(n) = sum_{k=1..n} C(n,k) a(n-k), a(0) = 1
    let mut a = vec![0u64; n + 1];
    a[0] = 1;
    for m in 1..=n {
        let mut total = 0u64;
        let mut binom = 1u64; // C(m, k) built incrementally
        for k in 1..=m {
            binom = binom * (m as u64 - k as u64 + 1) / k as u64;
            total += binom * a[m - k];
        }
        a[m] = total;
    }
    a[n]
}

/// All total preorders on the atoms whose rank-0 block is exactly `k`.
/// Guarded to spaces of at most 6 atoms.
pub fn enumerate_preorders(
    space: &Arc<OutcomeSpace>,
    k: &Event,
) -> Result<Vec<PlausibilityOrder>, RevisionError> {
    guard_size(space, 6)?;
    assert!(k.space() == space, "belief set from a different space");
    if k.is_empty() {
        return Err(RevisionError::EmptyBeliefSet);
    }
    let n = space.atom_count();
    let k_mask = mask_of(k);
    let rest = !k_mask & ((1u32 << n) - 1);

    let mut out = Vec::new();
    let mut ranks = vec![0u32; n];
    for atom in 0..n {
        if k_mask >> atom & 1 == 1 {
            ranks[atom] = 0;
        }
    }
    assign_blocks(space, rest, 1, &mut ranks, &mut out);
    out.sort_by(|a, b| a.ranks().cmp(b.ranks()));
    Ok(out)
}

fn assign_blocks(
    space: &Arc<OutcomeSpace>,
    remaining: u32,
    rank: u32,
    ranks: &mut Vec<u32>,
    out: &mut Vec<PlausibilityOrder>,
) {
    if remaining == 0 {
        out.push(PlausibilityOrder::new(space, ranks.clone()).expect("rank vector sized"));
        return;
    }
    // every nonempty submask of `remaining` can be the next block
    let mut block = remaining;
    loop {
        for atom in 0..space.atom_count() {
            if block >> atom & 1 == 1 {
                ranks[atom] = rank;
            }
        }
        assign_blocks(space, remaining & !block, rank + 1, ranks, out);
        block = (block - 1) & remaining;
        if block == 0 {
            break;
        }
    }
}

/// All operators satisfying (*1)-(*4) whose belief set is `k`.
///
/// Up to 3 atoms this filters every candidate table directly (each event maps
/// to one of its nonempty subsets). With 4 atoms the candidate count is out
/// of reach, so operators are generated from the preorder enumeration and
/// each one is re-verified against the postulates.
pub fn enumerate_operators(
    space: &Arc<OutcomeSpace>,
    k: &Event,
) -> Result<Vec<RevisionOperator>, RevisionError> {
    assert!(k.space() == space, "belief set from a different space");
    if k.is_empty() {
        return Err(RevisionError::EmptyBeliefSet);
    }
    let n = space.atom_count();
    let mut out = match n {
        0..=3 => filter_all_tables(space, mask_of(k)),
        4 => {
            let mut ops = Vec::new();
            for order in enumerate_preorders(space, k)? {
                let op = order.to_operator()?;
                let clean = check_postulates(&op)
                    .iter()
                    .all(|r| r.status != PostulateStatus::Violated);
                assert!(clean, "preorder-induced operator failed a postulate");
                ops.push(op);
            }
            ops
        }
        _ => {
            return Err(RevisionError::SpaceTooLarge { atoms: n, max: 4 });
        }
    };
    out.sort_by(|a, b| a.table().cmp(b.table()));
    out.dedup();
    Ok(out)
}

fn filter_all_tables(space: &Arc<OutcomeSpace>, k_mask: u32) -> Vec<RevisionOperator> {
    let n = space.atom_count();
    let n_events = 1usize << n;
    // Candidate choices per event: the empty event maps to itself, every
    // other event to one of its nonempty subsets.
    let choices: Vec<Vec<u32>> = (0..n_events as u32)
        .map(|e| {
            if e == 0 {
                vec![0]
            } else {
                let mut subs = Vec::new();
                let mut s = e;
                loop {
                    subs.push(s);
                    s = (s - 1) & e;
                    if s == 0 {
                        break;
                    }
                }
                subs.sort_unstable();
                subs
            }
        })
        .collect();

    let mut found = Vec::new();
    let mut table = vec![0u32; n_events];
    search_tables(space, &choices, 0, &mut table, k_mask, &mut found);
    found
}

fn search_tables(
    space: &Arc<OutcomeSpace>,
    choices: &[Vec<u32>],
    event: usize,
    table: &mut Vec<u32>,
    k_mask: u32,
    found: &mut Vec<RevisionOperator>,
) {
    if event == choices.len() {
        let op = RevisionOperator::from_table(space, table.clone()).expect("table sized");
        if op.table()[op.full_mask() as usize] == k_mask
            && check_postulates(&op)
                .iter()
                .all(|r| r.status != PostulateStatus::Violated)
        {
            found.push(op);
        }
        return;
    }
    for &choice in &choices[event] {
        table[event] = choice;
        search_tables(space, choices, event + 1, table, k_mask, found);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordered_bell_small_values() {
        assert_eq!(ordered_bell(0), 1);
        assert_eq!(ordered_bell(1), 1);
        assert_eq!(ordered_bell(2), 3);
        assert_eq!(ordered_bell(3), 13);
        assert_eq!(ordered_bell(4), 75);
    }

    #[test]
    fn preorder_counts_match_ordered_bell() {
        let space = OutcomeSpace::abstract_atoms(3).unwrap();
        let k = space.event_from_atoms([0]).unwrap();
        assert_eq!(enumerate_preorders(&space, &k).unwrap().len(), 3);

        let space4 = OutcomeSpace::abstract_atoms(4).unwrap();
        let k4 = space4.event_from_atoms([0]).unwrap();
        assert_eq!(enumerate_preorders(&space4, &k4).unwrap().len(), 13);

        // K = Ω leaves nothing to arrange.
        assert_eq!(
            enumerate_preorders(&space, &space.full()).unwrap().len(),
            1
        );
    }

    #[test]
    fn two_atom_singleton_k_has_one_operator() {
        let space = OutcomeSpace::abstract_atoms(2).unwrap();
        let k = space.event_from_atoms([0]).unwrap();
        let ops = enumerate_operators(&space, &k).unwrap();
        assert_eq!(ops.len(), 1);
        assert_eq!(ops[0].belief_set(), k);
    }

    #[test]
    fn three_atom_singleton_k_raw_filter_matches_preorders() {
        let space = OutcomeSpace::abstract_atoms(3).unwrap();
        let k = space.event_from_atoms([0]).unwrap();
        let ops = enumerate_operators(&space, &k).unwrap();
        assert_eq!(ops.len(), 3);

        let mut from_orders: Vec<Vec<u32>> = enumerate_preorders(&space, &k)
            .unwrap()
            .into_iter()
            .map(|o| o.to_operator().unwrap().table().to_vec())
            .collect();
        from_orders.sort();
        let raw: Vec<Vec<u32>> = ops.iter().map(|o| o.table().to_vec()).collect();
        assert_eq!(raw, from_orders);
    }

    #[test]
    fn candidate_table_count_is_the_product_of_subset_counts() {
        // For 3 atoms: events of sizes 1,1,1,2,2,2,3 give 1*1*1*3*3*3*7
        // candidates; the raw filter must have examined exactly them.
        let product: usize = (1u32..8)
            .map(|e| (1usize << e.count_ones()) - 1)
            .product();
        assert_eq!(product, 189);
    }

    #[test]
    fn size_guards() {
        let space = OutcomeSpace::abstract_atoms(7).unwrap();
        let k = space.event_from_atoms([0]).unwrap();
        assert!(matches!(
            enumerate_preorders(&space, &k),
            Err(RevisionError::SpaceTooLarge { .. })
        ));
        let space5 = OutcomeSpace::abstract_atoms(5).unwrap();
        let k5 = space5.event_from_atoms([0]).unwrap();
        assert!(matches!(
            enumerate_operators(&space5, &k5),
            Err(RevisionError::SpaceTooLarge { .. })
        ));
        assert_eq!(
            enumerate_preorders(&space5, &space5.empty()),
            Err(RevisionError::EmptyBeliefSet)
        );
    }
}
