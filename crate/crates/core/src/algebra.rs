//! Finite outcome spaces with named multi-valued variables, and events as
//! subsets of their atoms.
//!
//! Atoms are indexed by mixed-radix encoding of the variable values in
//! declared variable order, with the first variable most significant. That
//! ordering is part of the public contract so serialized fixtures stay stable.
//!
//! Event literals come in two forms: a cylinder `{X1=heads, R13=heads}`
//! (every atom agreeing with the listed assignments; `{}` is the full event)
//! and an explicit atom list `#[0,3,17]`.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum AlgebraError {
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("variable `{0}` needs at least two values")]
    TooFewValues(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{variable}` has no value `{value}`")]
    UnknownValue { variable: String, value: String },
    #[error("atom index {index} out of range for a space of {count} atoms")]
    AtomOutOfRange { index: usize, count: usize },
    #[error("bad event literal: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Variable {
    name: String,
    values: Vec<String>,
}

impl Variable {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn values(&self) -> &[String] {
        &self.values
    }
}

/// A product space of named variables. Immutable after construction and
/// shared behind an [`Arc`]; two spaces built from the same schema are
/// interchangeable.
#[derive(Debug)]
pub struct OutcomeSpace {
    vars: Vec<Variable>,
    strides: Vec<usize>,
    atom_count: usize,
    token: u64,
}

impl PartialEq for OutcomeSpace {
    fn eq(&self, other: &Self) -> bool {
        self.token == other.token && self.atom_count == other.atom_count
    }
}

impl Eq for OutcomeSpace {}

impl OutcomeSpace {
    pub fn new<N, V>(
        schema: impl IntoIterator<Item = (N, Vec<V>)>,
    ) -> Result<Arc<OutcomeSpace>, AlgebraError>
    where
        N: Into<String>,
        V: Into<String>,
    {
        let mut vars: Vec<Variable> = Vec::new();
        for (name, values) in schema {
            let name = name.into();
            if vars.iter().any(|v| v.name == name) {
                return Err(AlgebraError::DuplicateVariable(name));
            }
            let values: Vec<String> = values.into_iter().map(Into::into).collect();
            if values.len() < 2 {
                return Err(AlgebraError::TooFewValues(name));
            }
            vars.push(Variable { name, values });
        }
        let mut atom_count = 1usize;
        for v in &vars {
            atom_count *= v.values.len();
        }
        // strides[i] = product of radices of the variables after i
        let mut strides = vec![1usize; vars.len()];
        for i in (0..vars.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * vars[i + 1].values.len();
        }
        let mut hasher = DefaultHasher::new();
        vars.hash(&mut hasher);
        let token = hasher.finish();
        Ok(Arc::new(OutcomeSpace {
            vars,
            strides,
            atom_count,
            token,
        }))
    }

    /// An anonymous space of `n` bare atoms (one variable `w` with values
    /// `0..n`), handy for enumeration oracles. Requires `n >= 2`.
    pub fn abstract_atoms(n: usize) -> Result<Arc<OutcomeSpace>, AlgebraError> {
        OutcomeSpace::new([("w", (0..n).map(|i| i.to_string()).collect::<Vec<_>>())])
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn atom_count(&self) -> usize {
        self.atom_count
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    /// Value index of `atom` for variable `var`.
    pub fn digit(&self, atom: usize, var: usize) -> usize {
        (atom / self.strides[var]) % self.vars[var].values.len()
    }

    /// Value indices of `atom` for every variable, in declared order.
    pub fn assignment_of(&self, atom: usize) -> Vec<usize> {
        (0..self.vars.len()).map(|v| self.digit(atom, v)).collect()
    }

    /// Human-readable rendering of an atom as `X1=heads R11=tails ...`.
    pub fn atom_label(&self, atom: usize) -> String {
        self.vars
            .iter()
            .enumerate()
            .map(|(i, v)| format!("{}={}", v.name, v.values[self.digit(atom, i)]))
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn resolve(&self, variable: &str, value: &str) -> Result<(usize, usize), AlgebraError> {
        let vi = self
            .var_index(variable)
            .ok_or_else(|| AlgebraError::UnknownVariable(variable.to_string()))?;
        let pi = self.vars[vi]
            .values
            .iter()
            .position(|s| s == value)
            .ok_or_else(|| AlgebraError::UnknownValue {
                variable: variable.to_string(),
                value: value.to_string(),
            })?;
        Ok((vi, pi))
    }
}

/// Constructors that hand out [`Event`]s need the `Arc` so the event can hold
/// a reference to its space.
impl OutcomeSpace {
    pub fn full(self: &Arc<Self>) -> Event {
        let mut e = self.empty();
        for w in e.bits.iter_mut() {
            *w = !0;
        }
        e.trim();
        e
    }

    pub fn empty(self: &Arc<Self>) -> Event {
        Event {
            space: Arc::clone(self),
            bits: vec![0; self.atom_count.div_ceil(64)],
        }
    }

    /// Event of all atoms agreeing with every `variable=value` assignment.
    /// The empty assignment list yields the full event.
    pub fn cylinder<'a>(
        self: &Arc<Self>,
        assignments: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Event, AlgebraError> {
        let mut resolved: Vec<(usize, usize)> = Vec::new();
        for (var, val) in assignments {
            resolved.push(self.resolve(var, val)?);
        }
        let mut e = self.empty();
        'atoms: for atom in 0..self.atom_count {
            for (vi, pi) in &resolved {
                if self.digit(atom, *vi) != *pi {
                    continue 'atoms;
                }
            }
            e.insert(atom);
        }
        Ok(e)
    }

    /// Cylinder from already-resolved `(variable index, value index)` pairs.
    pub fn cylinder_indices(self: &Arc<Self>, assignments: &[(usize, usize)]) -> Event {
        let mut e = self.empty();
        'atoms: for atom in 0..self.atom_count {
            for (vi, pi) in assignments {
                if self.digit(atom, *vi) != *pi {
                    continue 'atoms;
                }
            }
            e.insert(atom);
        }
        e
    }

    pub fn event_from_atoms(
        self: &Arc<Self>,
        atoms: impl IntoIterator<Item = usize>,
    ) -> Result<Event, AlgebraError> {
        let mut e = self.empty();
        for atom in atoms {
            if atom >= self.atom_count {
                return Err(AlgebraError::AtomOutOfRange {
                    index: atom,
                    count: self.atom_count,
                });
            }
            e.insert(atom);
        }
        Ok(e)
    }

    /// Parses an event literal: `{X1=heads, R13=heads}` or `#[0,3,17]`.
    pub fn parse_event(self: &Arc<Self>, s: &str) -> Result<Event, AlgebraError> {
        let s = s.trim();
        if let Some(body) = s.strip_prefix("#[").and_then(|r| r.strip_suffix(']')) {
            let mut atoms = Vec::new();
            for part in body.split(',') {
                let part = part.trim();
                if part.is_empty() {
                    continue;
                }
                let idx: usize = part
                    .parse()
                    .map_err(|_| AlgebraError::Parse(format!("bad atom index `{part}`")))?;
                atoms.push(idx);
            }
            return self.event_from_atoms(atoms);
        }
        if let Some(body) = s.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
            let mut assignments = Vec::new();
            for part in body.split(',') {
                let part = part.trim();
                if part.is_empty() {
                    continue;
                }
                let (var, val) = part.split_once('=').ok_or_else(|| {
                    AlgebraError::Parse(format!("expected `variable=value`, got `{part}`"))
                })?;
                assignments.push((var.trim().to_string(), val.trim().to_string()));
            }
            return self.cylinder(assignments.iter().map(|(a, b)| (a.as_str(), b.as_str())));
        }
        Err(AlgebraError::Parse(format!(
            "expected `{{var=value, ...}}` or `#[i, ...]`, got `{s}`"
        )))
    }
}

/// A subset of the atoms of one outcome space, stored as a bitset. Events
/// carry their space and check it on every binary operation; combining events
/// from different spaces is a programming error and panics.
#[derive(Debug, Clone)]
pub struct Event {
    space: Arc<OutcomeSpace>,
    bits: Vec<u64>,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.bits == other.bits
    }
}

impl Eq for Event {}

impl Hash for Event {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.space.token.hash(state);
        self.bits.hash(state);
    }
}

impl Event {
    pub fn space(&self) -> &Arc<OutcomeSpace> {
        &self.space
    }

    fn check_space(&self, other: &Event) {
        assert!(
            self.space == other.space,
            "events belong to different outcome spaces"
        );
    }

    fn trim(&mut self) {
        // clear bits beyond atom_count in the last word
        let n = self.space.atom_count;
        let tail = n % 64;
        if tail != 0 {
            let last = self.bits.len() - 1;
            self.bits[last] &= (1u64 << tail) - 1;
        }
    }

    fn insert(&mut self, atom: usize) {
        self.bits[atom / 64] |= 1u64 << (atom % 64);
    }

    pub fn contains(&self, atom: usize) -> bool {
        atom < self.space.atom_count && self.bits[atom / 64] >> (atom % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|w| *w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.space.atom_count
    }

    pub fn iter_atoms(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.space.atom_count).filter(move |a| self.contains(*a))
    }

    pub fn complement(&self) -> Event {
        let mut out = self.clone();
        for w in out.bits.iter_mut() {
            *w = !*w;
        }
        out.trim();
        out
    }

    pub fn intersect(&self, other: &Event) -> Event {
        self.check_space(other);
        let mut out = self.clone();
        for (w, o) in out.bits.iter_mut().zip(&other.bits) {
            *w &= o;
        }
        out
    }

    pub fn union(&self, other: &Event) -> Event {
        self.check_space(other);
        let mut out = self.clone();
        for (w, o) in out.bits.iter_mut().zip(&other.bits) {
            *w |= o;
        }
        out
    }

    pub fn difference(&self, other: &Event) -> Event {
        self.check_space(other);
        let mut out = self.clone();
        for (w, o) in out.bits.iter_mut().zip(&other.bits) {
            *w &= !o;
        }
        out
    }

    pub fn is_subset(&self, other: &Event) -> bool {
        self.check_space(other);
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Event) -> bool {
        self.check_space(other);
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & b == 0)
    }

    /// Value-index tuples over the given variables realized by some atom of
    /// the event (the projection onto those coordinates).
    pub fn project(&self, vars: &[usize]) -> std::collections::BTreeSet<Vec<usize>> {
        self.iter_atoms()
            .map(|a| vars.iter().map(|v| self.space.digit(a, *v)).collect())
            .collect()
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#[")?;
        for (i, atom) in self.iter_atoms().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{atom}")?;
        }
        write!(f, "]")
    }
}
