//! Lexicographic probability systems with disjoint supports and the
//! conditional probability functions they encode.
//!
//! A system in partitioning form (supports covering the space) is the finite
//! witness for a conditional probability function: conditioning on an event
//! consults the first level whose support meets it. The same system converts
//! to a regular hyperreal measure by attaching one power of the infinitesimal
//! per level, which realizes the conditional behaviour through ordinary
//! Bayesian conditioning.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::{Event, OutcomeSpace};
use crate::hyperreal::{EpsPoly, Hyperreal};
use crate::rational::Rational;
use crate::revision::{PlausibilityOrder, RevisionOperator};

use super::{single_atom, HyperMeasure, MeasureError};

/// A finite sequence of real-valued probability vectors over the atoms, with
/// pairwise disjoint supports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexSystem {
    space: Arc<OutcomeSpace>,
    levels: Vec<Vec<Rational>>,
}

impl LexSystem {
    pub fn new(
        space: &Arc<OutcomeSpace>,
        levels: Vec<Vec<Rational>>,
    ) -> Result<LexSystem, MeasureError> {
        if levels.is_empty() {
            return Err(MeasureError::NoLevels);
        }
        for (li, level) in levels.iter().enumerate() {
            if level.len() != space.atom_count() {
                return Err(MeasureError::WrongWeightCount {
                    expected: space.atom_count(),
                    got: level.len(),
                });
            }
            if let Some(atom) = level.iter().position(|w| w < &Rational::zero()) {
                return Err(MeasureError::NegativeLevelWeight { level: li, atom });
            }
            if level.iter().sum::<Rational>() != Rational::one() {
                return Err(MeasureError::LevelNotNormalized { level: li });
            }
        }
        for a in 0..levels.len() {
            for b in a + 1..levels.len() {
                let overlap = (0..space.atom_count())
                    .any(|atom| !levels[a][atom].is_zero() && !levels[b][atom].is_zero());
                if overlap {
                    return Err(MeasureError::OverlappingSupports { a, b });
                }
            }
        }
        Ok(LexSystem {
            space: Arc::clone(space),
            levels,
        })
    }

    /// One uniform level per rank block of a plausibility order; always in
    /// partitioning form.
    pub fn from_order(order: &PlausibilityOrder) -> LexSystem {
        let space = order.space();
        let levels = (0..=order.max_rank())
            .map(|rank| {
                let block = order.rank_block(rank);
                let size = block.len() as i64;
                (0..space.atom_count())
                    .map(|a| {
                        if block.contains(a) {
                            crate::rational::rat(1, size)
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        LexSystem {
            space: Arc::clone(space),
            levels,
        }
    }

    /// Canonical system for an operator: peel its plausibility ranks and put
    /// a uniform level on each block.
    pub fn from_operator(op: &RevisionOperator) -> Result<LexSystem, MeasureError> {
        Ok(LexSystem::from_order(&PlausibilityOrder::from_operator(
            op,
        )?))
    }

    pub fn space(&self) -> &Arc<OutcomeSpace> {
        &self.space
    }

    pub fn levels(&self) -> &[Vec<Rational>] {
        &self.levels
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    /// Support of level `m` as an event.
    pub fn support(&self, m: usize) -> Event {
        self.space
            .event_from_atoms(
                (0..self.space.atom_count()).filter(|a| !self.levels[m][*a].is_zero()),
            )
            .expect("atom indices in range")
    }

    /// Partitioning form: the supports cover the whole space.
    pub fn is_partitioning(&self) -> bool {
        let mut union = self.space.empty();
        for m in 0..self.levels.len() {
            union = union.union(&self.support(m));
        }
        union.is_full()
    }

    /// The hyperreal measure `mu(A) = mu_0(A) + sum_m (mu_m(A) - mu_0(A)) e^m`.
    /// Requires partitioning form, which guarantees a regular result.
    pub fn to_hyper_measure(&self) -> Result<HyperMeasure, MeasureError> {
        if !self.is_partitioning() {
            return Err(MeasureError::NotPartitioning);
        }
        let n = self.levels.len();
        let weights = (0..self.space.atom_count())
            .map(|atom| {
                let base = &self.levels[0][atom];
                let mut terms = vec![(0u32, base.clone())];
                for m in 1..n {
                    terms.push((m as u32, &self.levels[m][atom] - base));
                }
                Hyperreal::new(EpsPoly::from_terms(terms), EpsPoly::one())
                    .expect("denominator is one")
            })
            .collect();
        HyperMeasure::new(&self.space, weights)
    }

    /// Renders as the fixture format: one `level<TAB>atom-literal<TAB>rational`
    /// line per nonzero weight.
    pub fn to_fixture(&self) -> String {
        let mut out = String::new();
        for (m, level) in self.levels.iter().enumerate() {
            for (atom, w) in level.iter().enumerate() {
                if !w.is_zero() {
                    out.push_str(&format!("{m}\t#[{atom}]\t{w}\n"));
                }
            }
        }
        out
    }

    /// Parses the fixture format; omitted atoms get weight zero.
    pub fn parse_fixture(
        space: &Arc<OutcomeSpace>,
        text: &str,
    ) -> Result<LexSystem, MeasureError> {
        let mut levels: Vec<Vec<Rational>> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') && !line.starts_with("#[") {
                continue;
            }
            let mut fields = line.split('\t');
            let (level, lit, value) = match (fields.next(), fields.next(), fields.next()) {
                (Some(a), Some(b), Some(c)) => (a, b, c),
                _ => {
                    return Err(MeasureError::Fixture(format!(
                        "line {}: expected three tab-separated fields",
                        lineno + 1
                    )))
                }
            };
            let level: usize = level.trim().parse().map_err(|_| {
                MeasureError::Fixture(format!("line {}: bad level index", lineno + 1))
            })?;
            let atom = single_atom(space, lit, lineno)?;
            let value: Rational = value.trim().parse().map_err(|e| {
                MeasureError::Fixture(format!("line {}: {e}", lineno + 1))
            })?;
            while levels.len() <= level {
                levels.push(vec![Rational::zero(); space.atom_count()]);
            }
            levels[level][atom] = value;
        }
        LexSystem::new(space, levels)
    }
}

/// A full conditional probability function, backed by a lexicographic system
/// in partitioning form: conditioning on a nonempty event evaluates the first
/// level whose support meets it, so conditioning stays defined on events of
/// probability zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionalProbability {
    lex: LexSystem,
}

impl ConditionalProbability {
    pub fn new(lex: LexSystem) -> Result<ConditionalProbability, MeasureError> {
        if !lex.is_partitioning() {
            return Err(MeasureError::NotPartitioning);
        }
        Ok(ConditionalProbability { lex })
    }

    pub fn backing(&self) -> &LexSystem {
        &self.lex
    }

    pub fn space(&self) -> &Arc<OutcomeSpace> {
        self.lex.space()
    }

    /// First level whose support meets the (nonempty) event.
    fn level_for(&self, event: &Event) -> usize {
        (0..self.lex.level_count())
            .find(|m| !self.lex.support(*m).is_disjoint(event))
            .expect("partitioning supports meet every nonempty event")
    }

    /// `P(a | given)`. Conditioning on the empty event is identically one.
    pub fn eval(&self, a: &Event, given: &Event) -> Rational {
        assert!(
            a.space() == self.space() && given.space() == self.space(),
            "event belongs to a different space"
        );
        if given.is_empty() {
            return Rational::one();
        }
        let level = &self.lex.levels()[self.level_for(given)];
        let mass = |e: &Event| -> Rational { e.iter_atoms().map(|atom| &level[atom]).sum() };
        mass(&a.intersect(given)) / mass(given)
    }

    /// The induced operator `E -> supp P(.|E)`, materialized over every event
    /// of a small space. The support of `P(.|E)` is the set of atoms with
    /// positive conditional probability; revision by the empty event is
    /// empty.
    pub fn to_operator(&self) -> Result<RevisionOperator, MeasureError> {
        let space = Arc::clone(self.space());
        Ok(RevisionOperator::materialize(&space, |e| {
            space
                .event_from_atoms(e.iter_atoms().filter(|atom| {
                    let singleton = space
                        .event_from_atoms([*atom])
                        .expect("atom index in range");
                    self.eval(&singleton, e) > Rational::zero()
                }))
                .expect("atom indices in range")
        })?)
    }

    /// The belief set: the support of conditioning on the full event.
    pub fn belief_set(&self) -> Event {
        self.lex.support(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_one, rat_zero};
    use crate::revision::all_events;

    fn h(s: &str) -> Hyperreal {
        s.parse().unwrap()
    }

    fn space(n: usize) -> Arc<OutcomeSpace> {
        OutcomeSpace::abstract_atoms(n).unwrap()
    }

    fn point_mass_levels(n: usize) -> Vec<Vec<Rational>> {
        (0..n)
            .map(|m| {
                (0..n)
                    .map(|a| if a == m { rat_one() } else { rat_zero() })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn validation_catches_malformed_levels() {
        let s = space(2);
        assert!(matches!(
            LexSystem::new(&s, vec![vec![rat(1, 2), rat(1, 4)]]),
            Err(MeasureError::LevelNotNormalized { .. })
        ));
        assert!(matches!(
            LexSystem::new(
                &s,
                vec![vec![rat_one(), rat_zero()], vec![rat_one(), rat_zero()]]
            ),
            Err(MeasureError::OverlappingSupports { .. })
        ));
        assert!(matches!(
            LexSystem::new(&s, vec![]),
            Err(MeasureError::NoLevels)
        ));
    }

    #[test]
    fn single_uniform_level_maps_to_uniform_measure() {
        let s = space(4);
        let lex = LexSystem::new(&s, vec![vec![rat(1, 4); 4]]).unwrap();
        let m = lex.to_hyper_measure().unwrap();
        assert_eq!(m, HyperMeasure::uniform(&s));
    }

    #[test]
    fn two_point_masses_give_one_minus_epsilon() {
        let s = space(2);
        let lex = LexSystem::new(&s, point_mass_levels(2)).unwrap();
        let m = lex.to_hyper_measure().unwrap();
        assert_eq!(m.weight(0), &h("1-e"));
        assert_eq!(m.weight(1), &h("e"));
        assert_eq!(m.belief_set(), s.event_from_atoms([0]).unwrap());
    }

    #[test]
    fn three_point_masses_expand_by_the_level_formula() {
        // mu(a) = 1 - e - e^2, mu(b) = e, mu(c) = e^2: direct expansion of
        // mu_0 + (mu_1 - mu_0)e + (mu_2 - mu_0)e^2 on point masses.
        let s = space(3);
        let lex = LexSystem::new(&s, point_mass_levels(3)).unwrap();
        let m = lex.to_hyper_measure().unwrap();
        assert_eq!(m.weight(0), &h("1 - e - e^2"));
        assert_eq!(m.weight(1), &h("e"));
        assert_eq!(m.weight(2), &h("e^2"));
        assert!(m.is_regular());
        // induced revision: {b,c} believes b
        let bc = s.event_from_atoms([1, 2]).unwrap();
        assert_eq!(m.revise(&bc), s.event_from_atoms([1]).unwrap());
    }

    #[test]
    fn non_partitioning_system_cannot_become_a_measure() {
        let s = space(2);
        let lex = LexSystem::new(&s, vec![vec![rat_one(), rat_zero()]]).unwrap();
        assert!(!lex.is_partitioning());
        assert_eq!(lex.to_hyper_measure(), Err(MeasureError::NotPartitioning));
        assert!(ConditionalProbability::new(lex).is_err());
    }

    #[test]
    fn conditional_probability_definition() {
        let s = space(4);
        let lex = LexSystem::new(
            &s,
            vec![
                vec![rat(1, 2), rat(1, 2), rat_zero(), rat_zero()],
                vec![rat_zero(), rat_zero(), rat(2, 3), rat(1, 3)],
            ],
        )
        .unwrap();
        let p = ConditionalProbability::new(lex).unwrap();

        // P(A|E) = 1 when E ⊆ A
        let e = s.event_from_atoms([2]).unwrap();
        let a = s.event_from_atoms([1, 2, 3]).unwrap();
        assert_eq!(p.eval(&a, &e), rat_one());
        // P(.|∅) ≡ 1
        assert_eq!(p.eval(&s.empty(), &s.empty()), rat_one());
        // zero-probability evidence is still conditioned on, via level 1
        let zero_ev = s.event_from_atoms([2, 3]).unwrap();
        assert_eq!(
            p.eval(&s.event_from_atoms([2]).unwrap(), &zero_ev),
            rat(2, 3)
        );
    }

    #[test]
    fn chain_rule_holds_on_nested_triples() {
        let s = space(4);
        let lex = LexSystem::new(
            &s,
            vec![
                vec![rat(1, 3), rat(2, 3), rat_zero(), rat_zero()],
                vec![rat_zero(), rat_zero(), rat(1, 4), rat(3, 4)],
            ],
        )
        .unwrap();
        let p = ConditionalProbability::new(lex).unwrap();
        let events = all_events(&s).unwrap();
        for e in &events {
            for b in events.iter().filter(|b| b.is_subset(e)) {
                for a in events.iter().filter(|a| a.is_subset(b)) {
                    assert_eq!(p.eval(a, e), p.eval(a, b) * p.eval(b, e));
                }
            }
        }
    }

    #[test]
    fn operator_from_two_point_masses_is_forced() {
        let s = space(2);
        let lex = LexSystem::new(&s, point_mass_levels(2)).unwrap();
        let p = ConditionalProbability::new(lex).unwrap();
        let op = p.to_operator().unwrap();
        let k = s.event_from_atoms([0]).unwrap();
        assert_eq!(op.belief_set(), k);
        let ops = crate::revision::enumerate_operators(&s, &k).unwrap();
        assert_eq!(ops.len(), 1);
        assert_eq!(&ops[0], &op);
    }

    #[test]
    fn uniform_conditional_gives_the_vacuous_operator() {
        let s = space(3);
        let lex = LexSystem::new(&s, vec![vec![rat(1, 3); 3]]).unwrap();
        let p = ConditionalProbability::new(lex).unwrap();
        let op = p.to_operator().unwrap();
        assert_eq!(op.belief_set(), s.full());
        for e in all_events(&s).unwrap() {
            assert_eq!(op.revise(&e), e);
        }
    }

    #[test]
    fn measure_and_conditional_induce_the_same_operator() {
        let s = space(3);
        let lex = LexSystem::new(
            &s,
            vec![
                vec![rat(1, 2), rat(1, 2), rat_zero()],
                vec![rat_zero(), rat_zero(), rat_one()],
            ],
        )
        .unwrap();
        let p = ConditionalProbability::new(lex.clone()).unwrap();
        let m = lex.to_hyper_measure().unwrap();
        assert_eq!(p.to_operator().unwrap(), m.to_operator().unwrap());
    }

    #[test]
    fn distinct_measures_can_induce_the_same_operator() {
        // Non-injectivity witness: (1-e, e) and (1-e^2, e^2).
        let s = space(2);
        let m1 = HyperMeasure::new(&s, vec![h("1-e"), h("e")]).unwrap();
        let m2 = HyperMeasure::new(&s, vec![h("1 - e^2"), h("e^2")]).unwrap();
        assert_ne!(m1, m2);
        assert_eq!(m1.belief_set(), m2.belief_set());
        assert_eq!(m1.to_operator().unwrap(), m2.to_operator().unwrap());
    }

    #[test]
    fn lex_fixture_round_trip() {
        let s = space(3);
        let lex = LexSystem::new(
            &s,
            vec![
                vec![rat(1, 2), rat(1, 2), rat_zero()],
                vec![rat_zero(), rat_zero(), rat_one()],
            ],
        )
        .unwrap();
        let text = lex.to_fixture();
        assert_eq!(LexSystem::parse_fixture(&s, &text).unwrap(), lex);
    }
}
