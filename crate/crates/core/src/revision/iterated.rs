//! Checks of the iterated-revision postulates over an evidence sequence.
//!
//! Two revision policies are supported: Bayesian conditioning of a hyperreal
//! measure (iterated revision conditions on the running intersection of the
//! evidence) and radical upgrade of a plausibility order. For each adjacent
//! pair of evidence events the checker reports whether the postulate's
//! antecedent fires and, if so, whether the consequent holds.
//!
//! Conditioning on evidence whose running intersection has probability zero
//! is not a crash: the step is reported as `inapplicable`. That situation is
//! exactly what happens when conflicting reports are modeled in a space
//! without report coordinates.

use std::fmt;

use crate::algebra::Event;
use crate::measures::HyperMeasure;

use super::order::PlausibilityOrder;

/// The two iterated-revision postulates, in event form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IteratedPostulate {
    /// Learning the broader event first is redundant: when `F ⊆ E`,
    /// `(K*E)*F = K*F`.
    I1,
    /// Overturned evidence is discarded: when `E ∩ F = ∅`, `(K*E)*F` equals
    /// `K*F` (gloss reading) or `K*E` (literal reading).
    I2,
}

impl fmt::Display for IteratedPostulate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IteratedPostulate::I1 => "I1",
            IteratedPostulate::I2 => "I2",
        })
    }
}

/// Which consequent the disjoint-evidence postulate demands. The gloss
/// reading (`(K*E)*F = K*F`) is how the postulate is applied in the two-coin
/// conflict and is the default everywhere; the literal reading compares
/// against `K*E` instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum I2Reading {
    #[default]
    Gloss,
    Literal,
}

/// How beliefs respond to evidence: conditioning a measure on the running
/// intersection, or radically upgrading a plausibility order step by step.
#[derive(Debug, Clone)]
pub enum IterationPolicy {
    Conditioning(HyperMeasure),
    Upgrade(PlausibilityOrder),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepStatus {
    /// The antecedent did not fire for this pair.
    Vacuous,
    Holds,
    Violated,
    /// The consequent requires conditioning on an event of probability zero.
    Inapplicable,
}

impl fmt::Display for StepStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepStatus::Vacuous => "vacuous",
            StepStatus::Holds => "holds",
            StepStatus::Violated => "violated",
            StepStatus::Inapplicable => "inapplicable",
        })
    }
}

/// Outcome for one adjacent evidence pair `(E_t, E_{t+1})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepReport {
    /// Index `t` of the first event of the pair in the evidence sequence.
    pub index: usize,
    pub first: Event,
    pub second: Event,
    pub status: StepStatus,
    /// Belief sets compared by the consequent, when it was evaluated.
    pub compared: Option<(Event, Event)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IteratedReport {
    pub postulate: IteratedPostulate,
    pub reading: I2Reading,
    pub steps: Vec<StepReport>,
}

impl IteratedReport {
    /// Summary over all steps: any violation dominates, then any
    /// inapplicable step, then holds if the antecedent ever fired.
    pub fn overall(&self) -> StepStatus {
        let mut saw_holds = false;
        let mut saw_inapplicable = false;
        for s in &self.steps {
            match s.status {
                StepStatus::Violated => return StepStatus::Violated,
                StepStatus::Inapplicable => saw_inapplicable = true,
                StepStatus::Holds => saw_holds = true,
                StepStatus::Vacuous => {}
            }
        }
        if saw_inapplicable {
            StepStatus::Inapplicable
        } else if saw_holds {
            StepStatus::Holds
        } else {
            StepStatus::Vacuous
        }
    }

    /// Line-oriented rendering: `postulate<TAB>step<TAB>status<TAB>events`.
    pub fn to_lines(&self) -> Vec<String> {
        self.steps
            .iter()
            .map(|s| {
                format!(
                    "{}\t{}\t{}\t{} {}",
                    self.postulate, s.index, s.status, s.first, s.second
                )
            })
            .collect()
    }
}

/// Runs the postulate over every adjacent pair of the evidence sequence.
pub fn check_iterated(
    policy: &IterationPolicy,
    evidence: &[Event],
    postulate: IteratedPostulate,
    reading: I2Reading,
) -> IteratedReport {
    let mut steps = Vec::new();
    for t in 0..evidence.len().saturating_sub(1) {
        let first = &evidence[t];
        let second = &evidence[t + 1];
        let fired = match postulate {
            IteratedPostulate::I1 => second.is_subset(first),
            IteratedPostulate::I2 => first.is_disjoint(second),
        };
        if !fired {
            steps.push(StepReport {
                index: t,
                first: first.clone(),
                second: second.clone(),
                status: StepStatus::Vacuous,
                compared: None,
            });
            continue;
        }
        // Which single event the right-hand side learns from the context:
        // the second for I1 and the gloss reading, the first for the
        // literal reading of I2.
        let rhs_event = match (postulate, reading) {
            (IteratedPostulate::I2, I2Reading::Literal) => first,
            _ => second,
        };
        let context = &evidence[..t];
        let (status, compared) = match policy {
            IterationPolicy::Conditioning(measure) => {
                let lhs = belief_after(measure, context.iter().chain([first, second]));
                let rhs = belief_after(measure, context.iter().chain([rhs_event]));
                match (lhs, rhs) {
                    (Some(lhs), Some(rhs)) => {
                        let status = if lhs == rhs {
                            StepStatus::Holds
                        } else {
                            StepStatus::Violated
                        };
                        (status, Some((lhs, rhs)))
                    }
                    _ => (StepStatus::Inapplicable, None),
                }
            }
            IterationPolicy::Upgrade(initial) => {
                let mut order = initial.clone();
                for e in context {
                    order = order.radical_upgrade(e);
                }
                let lhs = order
                    .radical_upgrade(first)
                    .radical_upgrade(second)
                    .belief();
                let rhs = order.radical_upgrade(rhs_event).belief();
                let status = if lhs == rhs {
                    StepStatus::Holds
                } else {
                    StepStatus::Violated
                };
                (status, Some((lhs, rhs)))
            }
        };
        steps.push(StepReport {
            index: t,
            first: first.clone(),
            second: second.clone(),
            status,
            compared,
        });
    }
    IteratedReport {
        postulate,
        reading,
        steps,
    }
}

/// Belief set after conditioning on the intersection of all the given
/// events; `None` when that intersection has probability zero.
fn belief_after<'a>(
    measure: &HyperMeasure,
    events: impl IntoIterator<Item = &'a Event>,
) -> Option<Event> {
    let mut combined = measure.space().full();
    for e in events {
        combined = combined.intersect(e);
    }
    measure.condition(&combined).ok().map(|m| m.belief_set())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::OutcomeSpace;
    use crate::scenario::naive_coin_space;

    fn coin_events() -> (crate::algebra::Event, crate::algebra::Event, crate::algebra::Event) {
        let space = naive_coin_space();
        let hh = space.cylinder([("X1", "heads"), ("X2", "heads")]).unwrap();
        let tt = space.cylinder([("X1", "tails"), ("X2", "tails")]).unwrap();
        let e_h1 = space.cylinder([("X1", "heads")]).unwrap();
        (hh, tt, e_h1)
    }

    #[test]
    fn conditioning_without_report_coordinates_is_inapplicable() {
        let space = naive_coin_space();
        let (hh, tt, e_h1) = coin_events();
        let policy = IterationPolicy::Conditioning(crate::measures::HyperMeasure::uniform(&space));
        let report = check_iterated(
            &policy,
            &[hh, tt, e_h1],
            IteratedPostulate::I2,
            I2Reading::Gloss,
        );
        // {H1H2} and {T1T2} are disjoint, so the antecedent fires, but
        // conditioning on their intersection is impossible.
        assert_eq!(report.steps[0].status, StepStatus::Inapplicable);
        assert_eq!(report.steps[1].status, StepStatus::Inapplicable);
        assert_eq!(report.overall(), StepStatus::Inapplicable);
    }

    #[test]
    fn upgrade_policy_satisfies_the_gloss_reading_but_not_the_literal_one() {
        let space = naive_coin_space();
        let (hh, tt, e_h1) = coin_events();
        let policy = IterationPolicy::Upgrade(PlausibilityOrder::uniform(&space));
        let evidence = [hh, tt, e_h1];

        let gloss = check_iterated(&policy, &evidence, IteratedPostulate::I2, I2Reading::Gloss);
        assert_eq!(gloss.overall(), StepStatus::Holds);

        let literal = check_iterated(
            &policy,
            &evidence,
            IteratedPostulate::I2,
            I2Reading::Literal,
        );
        assert_eq!(literal.overall(), StepStatus::Violated);
    }

    #[test]
    fn i1_with_nested_evidence_holds_under_conditioning() {
        let space = OutcomeSpace::abstract_atoms(4).unwrap();
        let measure = crate::measures::HyperMeasure::uniform(&space);
        let broad = space.event_from_atoms([0, 1, 2]).unwrap();
        let narrow = space.event_from_atoms([1, 2]).unwrap();
        let report = check_iterated(
            &IterationPolicy::Conditioning(measure),
            &[broad, narrow],
            IteratedPostulate::I1,
            I2Reading::Gloss,
        );
        assert_eq!(report.overall(), StepStatus::Holds);
    }

    #[test]
    fn vacuous_when_no_antecedent_fires() {
        let space = OutcomeSpace::abstract_atoms(4).unwrap();
        let measure = crate::measures::HyperMeasure::uniform(&space);
        let a = space.event_from_atoms([0, 1]).unwrap();
        let b = space.event_from_atoms([1, 2]).unwrap();
        let report = check_iterated(
            &IterationPolicy::Conditioning(measure),
            &[a, b],
            IteratedPostulate::I2,
            I2Reading::Gloss,
        );
        assert_eq!(report.overall(), StepStatus::Vacuous);
        let lines = report.to_lines();
        assert_eq!(lines.len(), 1);
        assert!(lines[0].starts_with("I2\t0\tvacuous\t"));
    }
}
