//! Belief revision operators in propositional-model form, postulate checking,
//! plausibility orders, radical upgrade, iterated-revision analysis, and
//! brute-force enumeration oracles.
//!
//! A revision operator is materialized as a total table from events to
//! events, which limits it to small spaces (at most
//! [`MAX_MATERIALIZED_ATOMS`] atoms). Internally events are bitmasks over the
//! atom indices, so exhaustive checks over all events, or all pairs of
//! events, stay cheap.

mod enumerate;
mod independence;
mod iterated;
mod order;

pub use enumerate::{enumerate_operators, enumerate_preorders, ordered_bell};
pub use independence::independence_preserved;
pub use iterated::{
    check_iterated, I2Reading, IterationPolicy, IteratedPostulate, IteratedReport, StepReport,
    StepStatus,
};
pub use order::PlausibilityOrder;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{Event, OutcomeSpace};

/// Materialized operators keep a table over all `2^n` events; beyond this
/// many atoms the table is refused.
pub const MAX_MATERIALIZED_ATOMS: usize = 12;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum RevisionError {
    #[error("space of {atoms} atoms exceeds the limit of {max} for this operation")]
    SpaceTooLarge { atoms: usize, max: usize },
    #[error("invalid operator table: {0}")]
    BadTable(String),
    #[error("belief set must be a nonempty event of the space")]
    EmptyBeliefSet,
    #[error("operator is not induced by any plausibility order")]
    NotPreorderInduced,
    #[error("invalid factor partition: {0}")]
    BadPartition(String),
}

pub(crate) fn guard_size(space: &OutcomeSpace, max: usize) -> Result<(), RevisionError> {
    if space.atom_count() > max {
        return Err(RevisionError::SpaceTooLarge {
            atoms: space.atom_count(),
            max,
        });
    }
    Ok(())
}

pub(crate) fn mask_of(event: &Event) -> u32 {
    let mut m = 0u32;
    for atom in event.iter_atoms() {
        m |= 1 << atom;
    }
    m
}

pub(crate) fn event_of_mask(space: &Arc<OutcomeSpace>, mask: u32) -> Event {
    space
        .event_from_atoms((0..space.atom_count()).filter(|a| mask >> a & 1 == 1))
        .expect("mask within atom range")
}

/// Every event of a small space, in ascending mask order (so `out[m]` is the
/// event with bitmask `m`).
pub fn all_events(space: &Arc<OutcomeSpace>) -> Result<Vec<Event>, RevisionError> {
    guard_size(space, MAX_MATERIALIZED_ATOMS)?;
    Ok((0..1u32 << space.atom_count())
        .map(|m| event_of_mask(space, m))
        .collect())
}

/// A revision operator for a fixed prior belief set, materialized over every
/// event of a small space. The belief set is the revision by the full event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RevisionOperator {
    space: Arc<OutcomeSpace>,
    table: Vec<u32>,
}

impl RevisionOperator {
    /// Builds the table by evaluating `revise` on every event.
    pub fn materialize(
        space: &Arc<OutcomeSpace>,
        mut revise: impl FnMut(&Event) -> Event,
    ) -> Result<RevisionOperator, RevisionError> {
        guard_size(space, MAX_MATERIALIZED_ATOMS)?;
        let n = space.atom_count();
        let mut table = Vec::with_capacity(1 << n);
        for mask in 0..1u32 << n {
            let result = revise(&event_of_mask(space, mask));
            assert!(
                result.space() == space,
                "revision result belongs to a different space"
            );
            table.push(mask_of(&result));
        }
        Ok(RevisionOperator {
            space: Arc::clone(space),
            table,
        })
    }

    /// Builds directly from a mask table (index = event mask, value = revised
    /// event mask).
    pub fn from_table(
        space: &Arc<OutcomeSpace>,
        table: Vec<u32>,
    ) -> Result<RevisionOperator, RevisionError> {
        guard_size(space, MAX_MATERIALIZED_ATOMS)?;
        let n = space.atom_count();
        if table.len() != 1 << n {
            return Err(RevisionError::BadTable(format!(
                "expected {} entries, got {}",
                1u32 << n,
                table.len()
            )));
        }
        let full = (1u32 << n) - 1;
        if let Some(bad) = table.iter().position(|m| m & !full != 0) {
            return Err(RevisionError::BadTable(format!(
                "entry {bad} references atoms outside the space"
            )));
        }
        Ok(RevisionOperator {
            space: Arc::clone(space),
            table,
        })
    }

    pub fn space(&self) -> &Arc<OutcomeSpace> {
        &self.space
    }

    pub fn atom_count(&self) -> usize {
        self.space.atom_count()
    }

    pub(crate) fn table(&self) -> &[u32] {
        &self.table
    }

    pub(crate) fn full_mask(&self) -> u32 {
        (1u32 << self.space.atom_count()) - 1
    }

    pub fn revise_mask(&self, mask: u32) -> u32 {
        self.table[mask as usize]
    }

    pub fn revise(&self, event: &Event) -> Event {
        assert!(
            event.space() == &self.space,
            "event belongs to a different space"
        );
        event_of_mask(&self.space, self.revise_mask(mask_of(event)))
    }

    /// The prior belief set: revision by the full event.
    pub fn belief_set(&self) -> Event {
        event_of_mask(&self.space, self.table[self.full_mask() as usize])
    }
}

/// The four postulates of belief revision in propositional-model form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Postulate {
    /// (*1) the revised belief set lies inside the evidence.
    Success,
    /// (*2) consistent evidence is absorbed by intersection.
    Conditionalization,
    /// (*3) nonempty evidence yields a nonempty belief set.
    Consistency,
    /// (*4) revising by an intersection agrees with intersecting afterwards,
    /// whenever that is consistent.
    Arrow,
}

impl Postulate {
    pub const ALL: [Postulate; 4] = [
        Postulate::Success,
        Postulate::Conditionalization,
        Postulate::Consistency,
        Postulate::Arrow,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Postulate::Success => "*1",
            Postulate::Conditionalization => "*2",
            Postulate::Consistency => "*3",
            Postulate::Arrow => "*4",
        }
    }
}

impl fmt::Display for Postulate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PostulateStatus {
    Holds,
    Violated,
    Vacuous,
}

impl fmt::Display for PostulateStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PostulateStatus::Holds => "holds",
            PostulateStatus::Violated => "violated",
            PostulateStatus::Vacuous => "vacuous",
        })
    }
}

/// Outcome of checking one postulate over every event (or event pair) of the
/// space. A violated report carries at least one witness tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PostulateReport {
    pub postulate: Postulate,
    pub status: PostulateStatus,
    pub witnesses: Vec<Vec<Event>>,
}

impl PostulateReport {
    /// Line-oriented rendering: `postulate<TAB>status<TAB>witness-events`,
    /// one line per witness for violations.
    pub fn to_lines(&self) -> Vec<String> {
        if self.witnesses.is_empty() {
            return vec![format!("{}\t{}\t", self.postulate, self.status)];
        }
        self.witnesses
            .iter()
            .map(|w| {
                let events = w
                    .iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(" ");
                format!("{}\t{}\t{}", self.postulate, self.status, events)
            })
            .collect()
    }
}

/// Exhaustively checks (*1)-(*4) on a materialized operator, reporting every
/// violation with a witness event (or event pair for (*4)).
pub fn check_postulates(op: &RevisionOperator) -> Vec<PostulateReport> {
    let n_events = op.table.len() as u32;
    let k = op.table[op.full_mask() as usize];
    let mut reports = Vec::with_capacity(4);

    // (*1) K * E ⊆ E, for every event including the empty one.
    let mut witnesses = Vec::new();
    for e in 0..n_events {
        if op.table[e as usize] & !e != 0 {
            witnesses.push(vec![event_of_mask(&op.space, e)]);
        }
    }
    reports.push(report(Postulate::Success, n_events as usize, witnesses));

    // (*2) K ∩ E ≠ ∅ implies K * E = K ∩ E.
    let mut witnesses = Vec::new();
    let mut fired = 0usize;
    for e in 0..n_events {
        if k & e != 0 {
            fired += 1;
            if op.table[e as usize] != k & e {
                witnesses.push(vec![event_of_mask(&op.space, e)]);
            }
        }
    }
    reports.push(report(Postulate::Conditionalization, fired, witnesses));

    // (*3) E ≠ ∅ implies K * E ≠ ∅.
    let mut witnesses = Vec::new();
    for e in 1..n_events {
        if op.table[e as usize] == 0 {
            witnesses.push(vec![event_of_mask(&op.space, e)]);
        }
    }
    reports.push(report(
        Postulate::Consistency,
        n_events as usize - 1,
        witnesses,
    ));

    // (*4) (K * E) ∩ F ≠ ∅ implies (K * E) ∩ F = K * (E ∩ F).
    let mut witnesses = Vec::new();
    let mut fired = 0usize;
    for e in 0..n_events {
        let revised = op.table[e as usize];
        for f in 0..n_events {
            if revised & f != 0 {
                fired += 1;
                if revised & f != op.table[(e & f) as usize] {
                    witnesses.push(vec![
                        event_of_mask(&op.space, e),
                        event_of_mask(&op.space, f),
                    ]);
                }
            }
        }
    }
    reports.push(report(Postulate::Arrow, fired, witnesses));

    reports
}

fn report(postulate: Postulate, fired: usize, witnesses: Vec<Vec<Event>>) -> PostulateReport {
    let status = if !witnesses.is_empty() {
        PostulateStatus::Violated
    } else if fired == 0 {
        PostulateStatus::Vacuous
    } else {
        PostulateStatus::Holds
    };
    PostulateReport {
        postulate,
        status,
        witnesses,
    }
}

/// True when all four postulates hold (no violation anywhere).
pub fn is_revision_operator(op: &RevisionOperator) -> bool {
    check_postulates(op)
        .iter()
        .all(|r| r.status != PostulateStatus::Violated)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space3() -> Arc<OutcomeSpace> {
        OutcomeSpace::abstract_atoms(3).unwrap()
    }

    fn identity_operator(space: &Arc<OutcomeSpace>) -> RevisionOperator {
        // K = Ω and K * E = E everywhere: the unique operator for a vacuous
        // prior.
        RevisionOperator::materialize(space, |e| e.clone()).unwrap()
    }

    #[test]
    fn identity_operator_passes_all_postulates() {
        let op = identity_operator(&space3());
        for r in check_postulates(&op) {
            assert_eq!(r.status, PostulateStatus::Holds, "{:?}", r.postulate);
        }
        assert!(is_revision_operator(&op));
    }

    #[test]
    fn mutated_entry_is_reported_with_its_witness() {
        let space = space3();
        let op = identity_operator(&space);
        let mut table = op.table().to_vec();
        // Make K * {atom0} = {atom1}: violates (*1) at E = #[0].
        table[0b001] = 0b010;
        let bad = RevisionOperator::from_table(&space, table).unwrap();
        let reports = check_postulates(&bad);
        let success = &reports[0];
        assert_eq!(success.postulate, Postulate::Success);
        assert_eq!(success.status, PostulateStatus::Violated);
        let witness_event = space.event_from_atoms([0]).unwrap();
        assert!(success.witnesses.iter().any(|w| w[0] == witness_event));
        let line = &success.to_lines()[0];
        assert!(line.starts_with("*1\tviolated\t"), "line = {line}");
        assert!(line.contains("#[0]"), "line = {line}");
    }

    #[test]
    fn size_guard_refuses_large_spaces() {
        let space = OutcomeSpace::abstract_atoms(13).unwrap();
        assert!(matches!(
            RevisionOperator::materialize(&space, |e| e.clone()),
            Err(RevisionError::SpaceTooLarge { .. })
        ));
    }

    #[test]
    fn table_length_is_validated() {
        let space = space3();
        assert!(matches!(
            RevisionOperator::from_table(&space, vec![0; 4]),
            Err(RevisionError::BadTable(_))
        ));
    }
}
