//! Total preorders on atoms, in compacted rank form.
//!
//! Beliefs are the rank-0 (most plausible) atoms; revising by an event keeps
//! the rank-minimal atoms inside it. Radical upgrade by an event promotes all
//! of its atoms strictly above everything else while preserving the relative
//! order within each side.

use std::sync::Arc;

use crate::algebra::{Event, OutcomeSpace};

use super::{guard_size, RevisionError, RevisionOperator, MAX_MATERIALIZED_ATOMS};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlausibilityOrder {
    space: Arc<OutcomeSpace>,
    ranks: Vec<u32>,
}

impl PlausibilityOrder {
    /// Builds from per-atom ranks; ranks are compacted so the distinct values
    /// used are exactly `0..=max` with no gaps.
    pub fn new(space: &Arc<OutcomeSpace>, ranks: Vec<u32>) -> Result<Self, RevisionError> {
        if ranks.len() != space.atom_count() {
            return Err(RevisionError::BadTable(format!(
                "expected {} ranks, got {}",
                space.atom_count(),
                ranks.len()
            )));
        }
        Ok(PlausibilityOrder {
            space: Arc::clone(space),
            ranks: compact(ranks),
        })
    }

    /// Everything equally plausible.
    pub fn uniform(space: &Arc<OutcomeSpace>) -> Self {
        PlausibilityOrder {
            space: Arc::clone(space),
            ranks: vec![0; space.atom_count()],
        }
    }

    pub fn space(&self) -> &Arc<OutcomeSpace> {
        &self.space
    }

    pub fn rank(&self, atom: usize) -> u32 {
        self.ranks[atom]
    }

    pub fn ranks(&self) -> &[u32] {
        &self.ranks
    }

    pub fn max_rank(&self) -> u32 {
        self.ranks.iter().copied().max().unwrap_or(0)
    }

    /// Atoms of a given rank, as an event.
    pub fn rank_block(&self, rank: u32) -> Event {
        self.space
            .event_from_atoms(
                self.ranks
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| **r == rank)
                    .map(|(a, _)| a),
            )
            .expect("atom indices in range")
    }

    /// The belief set: the most plausible atoms overall.
    pub fn belief(&self) -> Event {
        self.rank_block(0)
    }

    /// Rank-minimal atoms within `evidence`; the empty event yields the empty
    /// event.
    pub fn revise(&self, evidence: &Event) -> Event {
        assert!(
            evidence.space() == &self.space,
            "event belongs to a different space"
        );
        let min = match evidence.iter_atoms().map(|a| self.ranks[a]).min() {
            None => return self.space.empty(),
            Some(m) => m,
        };
        self.space
            .event_from_atoms(evidence.iter_atoms().filter(|a| self.ranks[*a] == min))
            .expect("atom indices in range")
    }

    /// Radical upgrade: all atoms of `evidence` become strictly more
    /// plausible than all others, each side keeping its internal order. An
    /// empty event leaves the order unchanged.
    pub fn radical_upgrade(&self, evidence: &Event) -> PlausibilityOrder {
        assert!(
            evidence.space() == &self.space,
            "event belongs to a different space"
        );
        if evidence.is_empty() {
            return self.clone();
        }
        let inside = compact_side(&self.ranks, |a| evidence.contains(a));
        let offset = inside.1;
        let outside = compact_side(&self.ranks, |a| !evidence.contains(a));
        let mut ranks = vec![0u32; self.ranks.len()];
        for atom in 0..self.ranks.len() {
            ranks[atom] = if evidence.contains(atom) {
                inside.0[atom]
            } else {
                outside.0[atom] + offset
            };
        }
        PlausibilityOrder {
            space: Arc::clone(&self.space),
            ranks: compact(ranks),
        }
    }

    /// The operator induced by minimal-world selection, materialized over all
    /// events.
    pub fn to_operator(&self) -> Result<RevisionOperator, RevisionError> {
        RevisionOperator::materialize(&self.space, |e| self.revise(e))
    }

    /// Recovers the canonical rank order from an operator by peeling: rank 0
    /// is the revision by the full event, rank `m+1` the revision by whatever
    /// is still unranked. Fails when the operator was not induced by any
    /// order (possible only if it violates a postulate).
    pub fn from_operator(op: &RevisionOperator) -> Result<PlausibilityOrder, RevisionError> {
        let space = op.space();
        guard_size(space, MAX_MATERIALIZED_ATOMS)?;
        let mut ranks = vec![0u32; space.atom_count()];
        let mut remaining = op.full_mask();
        let mut rank = 0u32;
        while remaining != 0 {
            let block = op.revise_mask(remaining);
            if block == 0 || block & !remaining != 0 {
                return Err(RevisionError::NotPreorderInduced);
            }
            for atom in 0..space.atom_count() {
                if block >> atom & 1 == 1 {
                    ranks[atom] = rank;
                }
            }
            remaining &= !block;
            rank += 1;
        }
        Ok(PlausibilityOrder {
            space: Arc::clone(space),
            ranks,
        })
    }
}

fn compact(ranks: Vec<u32>) -> Vec<u32> {
    let mut used: Vec<u32> = ranks.clone();
    used.sort_unstable();
    used.dedup();
    ranks
        .into_iter()
        .map(|r| used.binary_search(&r).expect("rank present") as u32)
        .collect()
}

/// Compacted ranks over the atoms selected by `side` (others get an unused
/// placeholder), plus the number of distinct ranks on that side.
fn compact_side(ranks: &[u32], side: impl Fn(usize) -> bool) -> (Vec<u32>, u32) {
    let mut used: Vec<u32> = (0..ranks.len())
        .filter(|a| side(*a))
        .map(|a| ranks[a])
        .collect();
    used.sort_unstable();
    used.dedup();
    let out = (0..ranks.len())
        .map(|a| {
            if side(a) {
                used.binary_search(&ranks[a]).expect("rank present") as u32
            } else {
                0
            }
        })
        .collect();
    (out, used.len() as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::naive_coin_space;

    fn atom(space: &Arc<OutcomeSpace>, box1: &str, box2: &str) -> usize {
        space
            .cylinder([("X1", box1), ("X2", box2)])
            .unwrap()
            .iter_atoms()
            .next()
            .unwrap()
    }

    #[test]
    fn uniform_belief_is_everything() {
        let space = naive_coin_space();
        let o = PlausibilityOrder::uniform(&space);
        assert_eq!(o.belief(), space.full());
        assert_eq!(o.revise(&space.full()), o.belief());
    }

    #[test]
    fn ranks_are_compacted() {
        let space = naive_coin_space();
        let o = PlausibilityOrder::new(&space, vec![5, 9, 9, 7]).unwrap();
        assert_eq!(o.ranks(), &[0, 2, 2, 1]);
    }

    #[test]
    fn coin_conflict_order_revises_to_heads_heads() {
        // ranks: T1T2 most plausible, then H1H2, then the mixed states.
        let space = naive_coin_space();
        let hh = atom(&space, "heads", "heads");
        let ht = atom(&space, "heads", "tails");
        let th = atom(&space, "tails", "heads");
        let tt = atom(&space, "tails", "tails");
        let mut ranks = vec![0u32; 4];
        ranks[tt] = 0;
        ranks[hh] = 1;
        ranks[ht] = 2;
        ranks[th] = 2;
        let o = PlausibilityOrder::new(&space, ranks).unwrap();
        assert_eq!(o.belief(), space.event_from_atoms([tt]).unwrap());
        let e_h1 = space.cylinder([("X1", "heads")]).unwrap();
        assert_eq!(o.revise(&e_h1), space.event_from_atoms([hh]).unwrap());
        assert_eq!(o.revise(&space.empty()), space.empty());
    }

    #[test]
    fn radical_upgrade_sequence_reaches_the_conflict() {
        let space = naive_coin_space();
        let hh = atom(&space, "heads", "heads");
        let ht = atom(&space, "heads", "tails");
        let th = atom(&space, "tails", "heads");
        let tt = atom(&space, "tails", "tails");

        let o0 = PlausibilityOrder::uniform(&space);
        let hh_event = space.event_from_atoms([hh]).unwrap();
        let tt_event = space.event_from_atoms([tt]).unwrap();
        let e_h1 = space.cylinder([("X1", "heads")]).unwrap();

        let o1 = o0.radical_upgrade(&hh_event);
        assert_eq!(o1.rank(hh), 0);
        assert!(o1.rank(ht) == 1 && o1.rank(th) == 1 && o1.rank(tt) == 1);

        let o2 = o1.radical_upgrade(&tt_event);
        assert_eq!(o2.rank(tt), 0);
        assert_eq!(o2.rank(hh), 1);
        assert!(o2.rank(ht) == 2 && o2.rank(th) == 2);

        let o3 = o2.radical_upgrade(&e_h1);
        assert_eq!(o3.rank(hh), 0);
        assert_eq!(o3.rank(ht), 1);
        assert_eq!(o3.rank(tt), 2);
        assert_eq!(o3.rank(th), 3);
        assert_eq!(o3.belief(), hh_event);
    }

    #[test]
    fn upgrade_by_empty_or_full_is_identity() {
        let space = naive_coin_space();
        let o = PlausibilityOrder::new(&space, vec![0, 1, 2, 1]).unwrap();
        assert_eq!(o.radical_upgrade(&space.empty()), o);
        assert_eq!(o.radical_upgrade(&space.full()), o);
    }

    #[test]
    fn operator_round_trip_recovers_ranks() {
        let space = naive_coin_space();
        let o = PlausibilityOrder::new(&space, vec![1, 0, 2, 1]).unwrap();
        let op = o.to_operator().unwrap();
        assert_eq!(PlausibilityOrder::from_operator(&op).unwrap(), o);
        assert_eq!(op.belief_set(), o.belief());
    }
}
