//! Hyperreal-valued probability measures on finite algebras, lexicographic
//! probability systems, conditional probability functions, and the
//! conversions among them and to revision operators.

mod lex;

pub use lex::{ConditionalProbability, LexSystem};

use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{AlgebraError, Event, OutcomeSpace};
use crate::hyperreal::Hyperreal;
use crate::rational::Rational;
use crate::revision::{RevisionError, RevisionOperator};

#[derive(Debug, Error, PartialEq, Clone)]
pub enum MeasureError {
    #[error("expected {expected} atom weights, got {got}")]
    WrongWeightCount { expected: usize, got: usize },
    #[error("weight of atom {atom} is negative")]
    NegativeWeight { atom: usize },
    #[error("atom weights must sum to exactly 1")]
    TotalNotOne,
    #[error("conditioning on an event of probability zero")]
    ZeroProbabilityEvidence,
    #[error("level {level} does not sum to 1")]
    LevelNotNormalized { level: usize },
    #[error("level {level} has a negative weight at atom {atom}")]
    NegativeLevelWeight { level: usize, atom: usize },
    #[error("levels {a} and {b} have overlapping supports")]
    OverlappingSupports { a: usize, b: usize },
    #[error("level supports must partition the space")]
    NotPartitioning,
    #[error("a lexicographic system needs at least one level")]
    NoLevels,
    #[error(transparent)]
    Revision(#[from] RevisionError),
    #[error("bad fixture: {0}")]
    Fixture(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A hyperreal-valued probability measure on the powerset of a finite space,
/// stored by atom weights. Weights are non-negative and sum to exactly one;
/// the measure is regular when every weight is strictly positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperMeasure {
    space: Arc<OutcomeSpace>,
    weights: Vec<Hyperreal>,
}

impl HyperMeasure {
    pub fn new(
        space: &Arc<OutcomeSpace>,
        weights: Vec<Hyperreal>,
    ) -> Result<HyperMeasure, MeasureError> {
        if weights.len() != space.atom_count() {
            return Err(MeasureError::WrongWeightCount {
                expected: space.atom_count(),
                got: weights.len(),
            });
        }
        if let Some(atom) = weights.iter().position(|w| w.is_negative()) {
            return Err(MeasureError::NegativeWeight { atom });
        }
        let total: Hyperreal = weights.iter().sum();
        if total != Hyperreal::one() {
            return Err(MeasureError::TotalNotOne);
        }
        Ok(HyperMeasure {
            space: Arc::clone(space),
            weights,
        })
    }

    /// Normalizes arbitrary non-negative masses into a measure. Errors when
    /// the total mass is zero.
    pub fn from_masses(
        space: &Arc<OutcomeSpace>,
        masses: Vec<Hyperreal>,
    ) -> Result<HyperMeasure, MeasureError> {
        let total: Hyperreal = masses.iter().sum();
        if total.is_zero() {
            return Err(MeasureError::TotalNotOne);
        }
        let weights = masses.into_iter().map(|m| &m / &total).collect();
        HyperMeasure::new(space, weights)
    }

    pub fn uniform(space: &Arc<OutcomeSpace>) -> HyperMeasure {
        let n = space.atom_count() as i64;
        HyperMeasure {
            space: Arc::clone(space),
            weights: vec![Hyperreal::from_ratio(1, n); n as usize],
        }
    }

    pub fn space(&self) -> &Arc<OutcomeSpace> {
        &self.space
    }

    pub fn weights(&self) -> &[Hyperreal] {
        &self.weights
    }

    pub fn weight(&self, atom: usize) -> &Hyperreal {
        &self.weights[atom]
    }

    /// Regular means every atom (hence every nonempty event) has strictly
    /// positive probability.
    pub fn is_regular(&self) -> bool {
        self.weights.iter().all(|w| w.is_positive())
    }

    /// Probability of an event: the sum of its atom weights.
    pub fn measure_of(&self, event: &Event) -> Hyperreal {
        assert!(
            event.space() == &self.space,
            "event belongs to a different space"
        );
        event.iter_atoms().map(|a| &self.weights[a]).sum()
    }

    /// Bayesian conditioning: renormalizes inside `evidence`, zero outside.
    /// Errors when the evidence has probability zero.
    pub fn condition(&self, evidence: &Event) -> Result<HyperMeasure, MeasureError> {
        let total = self.measure_of(evidence);
        if total.is_zero() {
            return Err(MeasureError::ZeroProbabilityEvidence);
        }
        let weights = (0..self.weights.len())
            .map(|a| {
                if evidence.contains(a) {
                    &self.weights[a] / &total
                } else {
                    Hyperreal::zero()
                }
            })
            .collect();
        Ok(HyperMeasure {
            space: Arc::clone(&self.space),
            weights,
        })
    }

    /// The belief set induced by the measure: atoms whose weight has a
    /// positive standard part. Equals the intersection of all events whose
    /// probability is infinitely close to one.
    pub fn belief_set(&self) -> Event {
        self.space
            .event_from_atoms((0..self.weights.len()).filter(|a| {
                self.weights[*a]
                    .st()
                    .expect("probability weights are limited")
                    > Rational::zero()
            }))
            .expect("atom indices in range")
    }

    /// Revision by an event: the belief set after conditioning. The empty
    /// event yields the empty belief set; a nonempty event of probability
    /// zero (impossible for regular measures) falls back to the unconditioned
    /// belief set.
    pub fn revise(&self, evidence: &Event) -> Event {
        if evidence.is_empty() {
            return self.space.empty();
        }
        match self.condition(evidence) {
            Ok(conditioned) => conditioned.belief_set(),
            Err(_) => self.belief_set(),
        }
    }

    /// The family `{A in events : st(mu(A|evidence)) >= r}`, with the
    /// unconditioned measure standing in when the evidence has probability
    /// zero.
    pub fn st_family<'a>(
        &self,
        events: impl IntoIterator<Item = &'a Event>,
        evidence: &Event,
        r: &Rational,
    ) -> Vec<Event> {
        let base = match self.condition(evidence) {
            Ok(conditioned) => conditioned,
            Err(_) => self.clone(),
        };
        events
            .into_iter()
            .filter(|a| {
                base.measure_of(a)
                    .st()
                    .expect("probability weights are limited")
                    >= *r
            })
            .cloned()
            .collect()
    }

    /// Materializes the operator `E -> revise(E)` over every event of a small
    /// space.
    pub fn to_operator(&self) -> Result<RevisionOperator, MeasureError> {
        Ok(RevisionOperator::materialize(&self.space, |e| {
            self.revise(e)
        })?)
    }

    /// Renders as the measure fixture format: one `atom-literal<TAB>value`
    /// line per atom.
    pub fn to_fixture(&self) -> String {
        let mut out = String::new();
        for (atom, w) in self.weights.iter().enumerate() {
            out.push_str(&format!("#[{atom}]\t{w}\n"));
        }
        out
    }

    /// Parses the measure fixture format. Each line is
    /// `atom-literal<TAB>hyperreal`; the literal must denote a single atom,
    /// every atom must be covered exactly once.
    pub fn parse_fixture(
        space: &Arc<OutcomeSpace>,
        text: &str,
    ) -> Result<HyperMeasure, MeasureError> {
        let mut weights: Vec<Option<Hyperreal>> = vec![None; space.atom_count()];
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') && !line.starts_with("#[") {
                continue;
            }
            let (lit, value) = line.split_once('\t').ok_or_else(|| {
                MeasureError::Fixture(format!("line {}: expected two tab-separated fields", lineno + 1))
            })?;
            let atom = single_atom(space, lit, lineno)?;
            let value: Hyperreal = value.trim().parse().map_err(|e| {
                MeasureError::Fixture(format!("line {}: {e}", lineno + 1))
            })?;
            if weights[atom].replace(value).is_some() {
                return Err(MeasureError::Fixture(format!(
                    "line {}: atom {atom} assigned twice",
                    lineno + 1
                )));
            }
        }
        let missing = weights.iter().position(|w| w.is_none());
        if let Some(atom) = missing {
            return Err(MeasureError::Fixture(format!("atom {atom} has no weight")));
        }
        HyperMeasure::new(space, weights.into_iter().map(|w| w.unwrap()).collect())
    }
}

pub(crate) fn single_atom(
    space: &Arc<OutcomeSpace>,
    literal: &str,
    lineno: usize,
) -> Result<usize, MeasureError> {
    let event = space.parse_event(literal.trim())?;
    if event.len() != 1 {
        return Err(MeasureError::Fixture(format!(
            "line {}: `{literal}` denotes {} atoms, expected exactly one",
            lineno + 1,
            event.len()
        )));
    }
    Ok(event.iter_atoms().next().expect("one atom"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperreal::HyperrealError;

    fn h(s: &str) -> Hyperreal {
        s.parse().unwrap()
    }

    fn space(n: usize) -> Arc<OutcomeSpace> {
        OutcomeSpace::abstract_atoms(n).unwrap()
    }

    #[test]
    fn measure_of_sums_atom_weights() {
        let s = space(4);
        let m = HyperMeasure::uniform(&s);
        let e = s.event_from_atoms([1, 3]).unwrap();
        assert_eq!(m.measure_of(&e), Hyperreal::from_ratio(1, 2));
        assert_eq!(m.measure_of(&s.empty()), Hyperreal::zero());
        assert_eq!(m.measure_of(&s.full()), Hyperreal::one());
    }

    #[test]
    fn infinitesimal_weights() {
        let s = space(2);
        let m = HyperMeasure::new(&s, vec![h("1-e"), h("e")]).unwrap();
        assert!(m.is_regular());
        let a1 = s.event_from_atoms([1]).unwrap();
        assert_eq!(m.measure_of(&a1), h("e"));
        assert_eq!(m.belief_set(), s.event_from_atoms([0]).unwrap());
    }

    #[test]
    fn validation_rejects_bad_weights() {
        let s = space(2);
        assert_eq!(
            HyperMeasure::new(&s, vec![h("1"), h("e")]),
            Err(MeasureError::TotalNotOne)
        );
        assert_eq!(
            HyperMeasure::new(&s, vec![h("1+e"), h("-e")]),
            Err(MeasureError::NegativeWeight { atom: 1 })
        );
        assert!(matches!(
            HyperMeasure::new(&s, vec![h("1")]),
            Err(MeasureError::WrongWeightCount { .. })
        ));
    }

    #[test]
    fn conditioning_renormalizes_exactly() {
        let s = space(4);
        let m = HyperMeasure::uniform(&s);
        let e = s.event_from_atoms([0, 2]).unwrap();
        let c = m.condition(&e).unwrap();
        assert_eq!(c.weight(0), &Hyperreal::from_ratio(1, 2));
        assert_eq!(c.weight(1), &Hyperreal::zero());
        assert_eq!(c.measure_of(&s.full()), Hyperreal::one());
    }

    #[test]
    fn conditioning_cascade_is_one_shot() {
        let s = space(3);
        let m = HyperMeasure::new(&s, vec![h("1-e"), h("e - e^2"), h("e^2")]).unwrap();
        let e = s.event_from_atoms([1, 2]).unwrap();
        let c = m.condition(&e).unwrap();
        // (e - e^2, e^2) renormalized is (1-e, e)
        assert_eq!(c.weight(1), &h("1-e"));
        assert_eq!(c.weight(2), &h("e"));

        let f = s.event_from_atoms([0, 2]).unwrap();
        let seq = m.condition(&e).unwrap().condition(&f).unwrap();
        let once = m.condition(&e.intersect(&f)).unwrap();
        assert_eq!(seq, once);
    }

    #[test]
    fn conditioning_on_null_event_is_an_error() {
        let s = space(2);
        let m = HyperMeasure::new(&s, vec![h("1"), h("0")]).unwrap();
        assert_eq!(
            m.condition(&s.event_from_atoms([1]).unwrap()),
            Err(MeasureError::ZeroProbabilityEvidence)
        );
        assert_eq!(
            m.condition(&s.empty()),
            Err(MeasureError::ZeroProbabilityEvidence)
        );
    }

    #[test]
    fn belief_set_of_uniform_is_full() {
        let s = space(4);
        assert_eq!(HyperMeasure::uniform(&s).belief_set(), s.full());
    }

    #[test]
    fn revise_by_one_epsilon_order() {
        // weights (1-e, e(1-e), e^2) on {a,b,c}; evidence {b,c} believes b.
        let s = space(3);
        let m = HyperMeasure::new(&s, vec![h("1-e"), h("e - e^2"), h("e^2")]).unwrap();
        let e = s.event_from_atoms([1, 2]).unwrap();
        assert_eq!(m.revise(&e), s.event_from_atoms([1]).unwrap());
        assert_eq!(m.revise(&s.empty()), s.empty());
        // K ∩ E ≠ ∅ keeps the intersection.
        let f = s.event_from_atoms([0, 1]).unwrap();
        assert_eq!(m.revise(&f), m.belief_set().intersect(&f));
    }

    #[test]
    fn st_family_and_intersection_characterize_belief() {
        let s = space(3);
        let m = HyperMeasure::new(&s, vec![h("1-e"), h("e - e^2"), h("e^2")]).unwrap();
        let all = crate::revision::all_events(&s).unwrap();
        let family = m.st_family(&all, &s.full(), &Rational::one());
        let mut intersection = s.full();
        for e in &family {
            intersection = intersection.intersect(e);
        }
        assert_eq!(intersection, m.belief_set());
    }

    #[test]
    fn weights_are_limited_by_construction() {
        let s = space(2);
        let m = HyperMeasure::new(&s, vec![h("1/(1+e)"), h("e/(1+e)")]).unwrap();
        for w in m.weights() {
            assert!(w.is_limited());
            assert!(w.st() != Err(HyperrealError::Unlimited));
        }
    }

    #[test]
    fn fixture_round_trip() {
        let s = space(3);
        let m = HyperMeasure::new(&s, vec![h("1-e"), h("e - e^2"), h("e^2")]).unwrap();
        let text = m.to_fixture();
        assert_eq!(HyperMeasure::parse_fixture(&s, &text).unwrap(), m);
        assert!(HyperMeasure::parse_fixture(&s, "#[0]\t1\n").is_err());
    }
}
