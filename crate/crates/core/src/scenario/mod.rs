//! The two-coin report scenario: two fair coins hidden in boxes, three
//! stages of expert reports about them, and posterior odds computed by exact
//! Bayesian conditioning.
//!
//! The outcome space carries one coordinate per coin and one per possible
//! report, so background assumptions about the reporters (independence,
//! shared fate, or a correlation between the late reporters) become ordinary
//! likelihoods. The reliability parameter can be bound to the infinitesimal
//! `e`, which turns the posterior odds into exact powers of `e` and the
//! induced beliefs into full belief sets, or to a small rational for numeric
//! cross-checks.

mod table;

pub use table::{compare_table, CellDiff, OddsTable, StageColumn, TableDiff, TableFixture};

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{AlgebraError, Event, OutcomeSpace};
use crate::hyperreal::{Hyperreal, HyperrealError};
use crate::measures::{HyperMeasure, MeasureError};
use crate::rational::Rational;

#[derive(Debug, Error, PartialEq, Clone)]
pub enum ScenarioError {
    #[error("bad config field `{field}`: {message}")]
    Config { field: String, message: String },
    #[error("bad table fixture: {0}")]
    Fixture(String),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Hyperreal(#[from] HyperrealError),
}

fn config_err(field: &str, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Config {
        field: field.to_string(),
        message: message.into(),
    }
}

/// Position of a coin (or the content of a report about one).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coin {
    Heads,
    Tails,
}

impl Coin {
    /// Index into the `["heads", "tails"]` value list of every variable.
    pub fn value_index(self) -> usize {
        match self {
            Coin::Heads => 0,
            Coin::Tails => 1,
        }
    }

    /// Numeral used in hypothesis and report labels: heads is 1, tails is 0.
    pub fn bit(self) -> u8 {
        match self {
            Coin::Heads => 1,
            Coin::Tails => 0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Coin::Heads => "heads",
            Coin::Tails => "tails",
        }
    }
}

impl FromStr for Coin {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "heads" | "h" | "1" => Ok(Coin::Heads),
            "tails" | "t" | "0" => Ok(Coin::Tails),
            other => Err(config_err(
                "reports",
                format!("expected `heads` or `tails`, got `{other}`"),
            )),
        }
    }
}

/// A joint hypothesis about the two coins. Labelled `X^ik` with `i` the box-1
/// bit and `k` the box-2 bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hypothesis {
    pub box1: Coin,
    pub box2: Coin,
}

impl Hypothesis {
    /// Table row order: `X^11, X^10, X^01, X^00`.
    pub const ALL: [Hypothesis; 4] = [
        Hypothesis {
            box1: Coin::Heads,
            box2: Coin::Heads,
        },
        Hypothesis {
            box1: Coin::Heads,
            box2: Coin::Tails,
        },
        Hypothesis {
            box1: Coin::Tails,
            box2: Coin::Heads,
        },
        Hypothesis {
            box1: Coin::Tails,
            box2: Coin::Tails,
        },
    ];

    pub fn label(&self) -> String {
        format!("X^{}{}", self.box1.bit(), self.box2.bit())
    }

    pub fn from_label(s: &str) -> Option<Hypothesis> {
        Hypothesis::ALL.iter().copied().find(|h| h.label() == s)
    }

    /// The coin-coordinate cylinder for this hypothesis.
    pub fn event(&self, space: &Arc<OutcomeSpace>) -> Event {
        space
            .cylinder([("X1", self.box1.label()), ("X2", self.box2.label())])
            .expect("coin variables exist")
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// The likelihood regime tying reports to coins.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Every report is independently reliable, with reliability improving by
    /// one order per stage.
    Independent,
    /// Within the first two stages the paired reports stand or fall
    /// together.
    Dependent,
    /// The stage-3 reporter second-guesses the stage-2 pair: his report is
    /// keyed to whether their reports were right.
    Correlated,
    /// Variant in which every stage after the first uses the same
    /// second-order reliability factor.
    Footnote4,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Independent,
        Family::Dependent,
        Family::Correlated,
        Family::Footnote4,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Independent => "independent",
            Family::Dependent => "dependent",
            Family::Correlated => "correlated",
            Family::Footnote4 => "footnote4",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| {
                config_err(
                    "family",
                    format!(
                        "unknown family `{s}` (expected one of independent, dependent, correlated, footnote4)"
                    ),
                )
            })
    }
}

/// The reliability parameter: the infinitesimal `e`, or a positive rational
/// below one for numeric cross-validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gamma {
    Infinitesimal,
    Numeric(Rational),
}

impl Gamma {
    pub fn numeric(q: Rational) -> Result<Gamma, ScenarioError> {
        if q <= Rational::zero() || q >= Rational::one() {
            return Err(config_err("gamma", "numeric gamma must lie strictly between 0 and 1"));
        }
        Ok(Gamma::Numeric(q))
    }

    pub fn value(&self) -> Hyperreal {
        match self {
            Gamma::Infinitesimal => Hyperreal::epsilon(),
            Gamma::Numeric(q) => Hyperreal::from_rational(q.clone()),
        }
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, Gamma::Infinitesimal)
    }
}

impl FromStr for Gamma {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("eps") {
            return Ok(Gamma::Infinitesimal);
        }
        let q: Rational = s
            .parse()
            .map_err(|e| config_err("gamma", format!("expected `eps` or a rational, got `{s}` ({e})")))?;
        Gamma::numeric(q)
    }
}

impl fmt::Display for Gamma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gamma::Infinitesimal => f.write_str("eps"),
            Gamma::Numeric(q) => write!(f, "{q}"),
        }
    }
}

/// What the reporters say, per stage. The defaults reproduce the conflict:
/// both heads, then both tails, then heads on box 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportSchedule {
    pub stage1: (Coin, Coin),
    pub stage2: (Coin, Coin),
    pub stage3: Coin,
}

impl Default for ReportSchedule {
    fn default() -> Self {
        ReportSchedule {
            stage1: (Coin::Heads, Coin::Heads),
            stage2: (Coin::Tails, Coin::Tails),
            stage3: Coin::Heads,
        }
    }
}

impl ReportSchedule {
    /// Label of the event learned at stage `t`, e.g. `R1^11` or `R13^1`.
    pub fn learned_label(&self, t: usize) -> String {
        match t {
            1 => format!("R1^{}{}", self.stage1.0.bit(), self.stage1.1.bit()),
            2 => format!("R2^{}{}", self.stage2.0.bit(), self.stage2.1.bit()),
            3 => format!("R13^{}", self.stage3.bit()),
            _ => unreachable!("stages are 1..=3"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioConfig {
    pub family: Family,
    pub gamma: Gamma,
    pub reports: ReportSchedule,
}

impl ScenarioConfig {
    pub fn new(family: Family) -> ScenarioConfig {
        ScenarioConfig {
            family,
            gamma: Gamma::Infinitesimal,
            reports: ReportSchedule::default(),
        }
    }

    pub fn with_gamma(mut self, gamma: Gamma) -> ScenarioConfig {
        self.gamma = gamma;
        self
    }
}

/// The four-state space over the coins alone, without report coordinates.
pub fn naive_coin_space() -> Arc<OutcomeSpace> {
    OutcomeSpace::new([
        ("X1", vec!["heads", "tails"]),
        ("X2", vec!["heads", "tails"]),
    ])
    .expect("static schema")
}

/// The full space: coins `X1 X2`, stage-1 reports `R11 R21`, stage-2 reports
/// `R12 R22`, and stage-3 coordinates `R13 R23`. All binary, 256 atoms, in
/// exactly this variable order.
pub fn build_space() -> Arc<OutcomeSpace> {
    let names = ["X1", "X2", "R11", "R21", "R12", "R22", "R13", "R23"];
    OutcomeSpace::new(names.map(|n| (n, vec!["heads", "tails"]))).expect("static schema")
}

/// The per-stage report events `R1^{uv}`, `R2^{uv}`, `R13^u` for a schedule.
pub fn stage_events(space: &Arc<OutcomeSpace>, reports: &ReportSchedule) -> [Event; 3] {
    let e1 = space
        .cylinder([
            ("R11", reports.stage1.0.label()),
            ("R21", reports.stage1.1.label()),
        ])
        .expect("report variables exist");
    let e2 = space
        .cylinder([
            ("R12", reports.stage2.0.label()),
            ("R22", reports.stage2.1.label()),
        ])
        .expect("report variables exist");
    let e3 = space
        .cylinder([("R13", reports.stage3.label())])
        .expect("report variables exist");
    [e1, e2, e3]
}

/// The joint prior over coins and reports for a likelihood family: fair
/// independent coins (mass 1/4 per hypothesis) times the stagewise report
/// likelihoods. In symbolic mode the result is regular.
pub fn build_prior(cfg: &ScenarioConfig) -> Result<HyperMeasure, ScenarioError> {
    build_prior_scaled(cfg, &[(); 3].map(|_| Rational::one()))
}

/// Same as [`build_prior`], with every stage-`t` likelihood scaled by a
/// positive rational before the final normalization. Posteriors and odds are
/// invariant under such scaling, which the tests pin down.
fn build_prior_scaled(
    cfg: &ScenarioConfig,
    stage_scales: &[Rational; 3],
) -> Result<HyperMeasure, ScenarioError> {
    let space = build_space();
    let gamma = cfg.gamma.value();
    let gamma_pow = |k: u32| gamma.pow(k);

    // Eq-style per-report factor at stage t: matching reports carry weight 1,
    // mismatches gamma^exp, normalized so the two report values sum to one.
    let single = |matches: bool, exp: u32| -> Hyperreal {
        let z = &Hyperreal::one() + &gamma_pow(exp);
        if matches {
            &Hyperreal::one() / &z
        } else {
            &gamma_pow(exp) / &z
        }
    };

    // Dependent-family joint factor for a stage-t report pair.
    let pair = |m1: bool, m2: bool, t: u32| -> Hyperreal {
        let z = &(&Hyperreal::one() + &(&Hyperreal::from(2) * &gamma_pow(1 + t)))
            + &gamma_pow(2 + t);
        let mass = match (m1, m2) {
            (true, true) => Hyperreal::one(),
            (false, false) => gamma_pow(2 + t),
            _ => gamma_pow(1 + t),
        };
        &mass / &z
    };

    // Correlated-family stage-3 factor: the report u about box 1 is keyed to
    // the coins (i, k) and the stage-2 reports (v, w). The four listed cases
    // share one normalizer; the opposite report value takes the complement
    // so the two values of u sum to one.
    let elmer = |u: Coin, i: Coin, k: Coin, v: Coin, w: Coin| -> Hyperreal {
        let z = &(&(&Hyperreal::one() + &gamma_pow(2)) + &gamma_pow(3)) + &gamma_pow(5);
        let listed = |u: Coin| -> Option<Hyperreal> {
            let num = if u == i && i != v && w != k {
                Hyperreal::one()
            } else if u == i && i != v && w == k {
                gamma_pow(2)
            } else if u != i && i == v && w != k {
                gamma_pow(3)
            } else if u != i && i == v && w == k {
                gamma_pow(5)
            } else {
                return None;
            };
            Some(&num / &z)
        };
        match listed(u) {
            Some(value) => value,
            None => {
                let opposite = if u == Coin::Heads { Coin::Tails } else { Coin::Heads };
                &Hyperreal::one() - &listed(opposite).expect("one of the two values is listed")
            }
        }
    };

    let scale = |t: usize| Hyperreal::from_rational(stage_scales[t - 1].clone());

    let mut masses = Vec::with_capacity(space.atom_count());
    for atom in 0..space.atom_count() {
        let digit = |var: usize| -> Coin {
            if space.digit(atom, var) == 0 {
                Coin::Heads
            } else {
                Coin::Tails
            }
        };
        let (x1, x2) = (digit(0), digit(1));
        let (r11, r21, r12, r22, r13) = (digit(2), digit(3), digit(4), digit(5), digit(6));

        let stage1;
        let stage2;
        let stage3;
        match cfg.family {
            Family::Independent => {
                stage1 = &single(r11 == x1, 1) * &single(r21 == x2, 1);
                stage2 = &single(r12 == x1, 2) * &single(r22 == x2, 2);
                stage3 = single(r13 == x1, 3);
            }
            Family::Dependent => {
                stage1 = pair(r11 == x1, r21 == x2, 1);
                stage2 = pair(r12 == x1, r22 == x2, 2);
                stage3 = single(r13 == x1, 3);
            }
            Family::Correlated => {
                stage1 = &single(r11 == x1, 1) * &single(r21 == x2, 1);
                stage2 = &single(r12 == x1, 2) * &single(r22 == x2, 2);
                stage3 = elmer(r13, x1, x2, r12, r22);
            }
            Family::Footnote4 => {
                stage1 = &single(r11 == x1, 1) * &single(r21 == x2, 1);
                stage2 = &single(r12 == x1, 2) * &single(r22 == x2, 2);
                stage3 = single(r13 == x1, 2);
            }
        }

        // 1/4 for the fair independent coins, 1/2 for the silent second
        // coordinate of stage 3, which is never conditioned on.
        let mut mass = Hyperreal::from_ratio(1, 8);
        mass = &mass * &(&stage1 * &scale(1));
        mass = &mass * &(&stage2 * &scale(2));
        mass = &mass * &(&stage3 * &scale(3));
        masses.push(mass);
    }
    Ok(HyperMeasure::from_masses(&space, masses)?)
}

/// Everything computed about one update stage.
#[derive(Debug, Clone)]
pub struct StageOutcome {
    pub t: usize,
    /// Cumulative evidence `S_t`.
    pub evidence: Event,
    pub posterior: HyperMeasure,
    /// Belief set of the posterior (full space).
    pub belief: Event,
    /// Hypotheses compatible with the belief set.
    pub belief_hypotheses: Vec<Hypothesis>,
    /// The most probable hypothesis (first in row order on ties).
    pub argmax: Hypothesis,
}

#[derive(Debug, Clone)]
pub struct ScenarioRun {
    pub config: ScenarioConfig,
    pub table: OddsTable,
    pub stages: Vec<StageOutcome>,
}

impl ScenarioRun {
    pub fn space(&self) -> &Arc<OutcomeSpace> {
        self.stages[0].evidence.space()
    }

    pub fn final_belief_hypotheses(&self) -> &[Hypothesis] {
        &self.stages.last().expect("three stages").belief_hypotheses
    }
}

/// Conditions the family prior cumulatively on the three report events and
/// assembles the odds table plus per-stage belief sets.
pub fn run(cfg: &ScenarioConfig) -> Result<ScenarioRun, ScenarioError> {
    let prior = build_prior(cfg)?;
    let space = Arc::clone(prior.space());
    let events = stage_events(&space, &cfg.reports);

    let mut cumulative = space.full();
    let mut stages = Vec::with_capacity(3);
    let mut columns = Vec::with_capacity(3);
    for (i, event) in events.iter().enumerate() {
        let t = i + 1;
        cumulative = cumulative.intersect(event);
        let evidence_prob = prior.measure_of(&cumulative);
        let posterior = prior.condition(&cumulative)?;

        let masses: Vec<Hyperreal> = Hypothesis::ALL
            .iter()
            .map(|h| posterior.measure_of(&h.event(&space)))
            .collect();
        let max = masses.iter().max().expect("four hypotheses").clone();
        let odds: Vec<Hyperreal> = masses.iter().map(|m| m / &max).collect();
        let argmax = Hypothesis::ALL[masses
            .iter()
            .position(|m| *m == max)
            .expect("max is attained")];

        let belief = posterior.belief_set();
        let belief_hypotheses = Hypothesis::ALL
            .iter()
            .copied()
            .filter(|h| !h.event(&space).is_disjoint(&belief))
            .collect();

        columns.push(StageColumn {
            t,
            learned: cfg.reports.learned_label(t),
            odds,
            evidence: evidence_prob,
        });
        stages.push(StageOutcome {
            t,
            evidence: cumulative.clone(),
            posterior,
            belief,
            belief_hypotheses,
            argmax,
        });
    }

    Ok(ScenarioRun {
        config: cfg.clone(),
        table: OddsTable {
            family: cfg.family,
            gamma: cfg.gamma.clone(),
            stages: columns,
        },
        stages,
    })
}

#[cfg(test)]
mod tests;
