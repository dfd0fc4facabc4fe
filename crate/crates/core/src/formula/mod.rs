//! CNF data model: literals, clauses, formulas with occurrence counts, and
//! (partial) assignments.

mod dimacs;
mod propagate;
mod simplify;

pub use dimacs::{parse_dimacs, write_dimacs, write_solution, ParseError, ParseStats};
pub use propagate::{unit_resolution, UnitPropagator};
pub use simplify::{reconstruct, simplify, ReconstructError, ReconstructionMap, Simplified, Substitution};

use std::fmt;

use thiserror::Error;

/// Stable clause identifier assigned at parse (or construction) time.
pub type ClauseId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: u32,
    pub negated: bool,
}

impl Literal {
    pub fn new(var: u32, negated: bool) -> Self {
        debug_assert!(var >= 1, "variables are 1-based");
        Literal { var, negated }
    }

    pub fn pos(var: u32) -> Self {
        Literal::new(var, false)
    }

    pub fn neg(var: u32) -> Self {
        Literal::new(var, true)
    }

    /// Converts a nonzero DIMACS integer.
    pub fn from_dimacs(lit: i64) -> Self {
        debug_assert!(lit != 0);
        Literal::new(lit.unsigned_abs() as u32, lit < 0)
    }

    pub fn to_dimacs(self) -> i64 {
        if self.negated {
            -(self.var as i64)
        } else {
            self.var as i64
        }
    }

    pub fn negate(self) -> Self {
        Literal { var: self.var, negated: !self.negated }
    }

    /// Truth value of the literal when its variable takes `value`.
    #[inline]
    pub fn eval(self, value: bool) -> bool {
        value != self.negated
    }

    /// Dense index usable for per-literal tables (`2 * var + negated`).
    #[inline]
    pub fn index(self) -> usize {
        2 * self.var as usize + self.negated as usize
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub id: ClauseId,
    pub literals: Vec<Literal>,
}

/// Outcome of normalizing a raw literal list into a [`Clause`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClauseBuild {
    Clause { clause: Clause, duplicates_removed: usize },
    Tautology,
    Empty,
}

impl Clause {
    /// Normalizes `literals`: drops repeated literals (keeping first
    /// occurrences in order) and rejects tautologies and empty clauses.
    pub fn build(id: ClauseId, literals: impl IntoIterator<Item = Literal>) -> ClauseBuild {
        let mut out: Vec<Literal> = Vec::new();
        let mut duplicates_removed = 0;
        for lit in literals {
            if out.contains(&lit) {
                duplicates_removed += 1;
            } else if out.contains(&lit.negate()) {
                return ClauseBuild::Tautology;
            } else {
                out.push(lit);
            }
        }
        if out.is_empty() {
            ClauseBuild::Empty
        } else {
            ClauseBuild::Clause { clause: Clause { id, literals: out }, duplicates_removed }
        }
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = u32> + '_ {
        self.literals.iter().map(|l| l.var)
    }

    pub fn contains_var(&self, var: u32) -> bool {
        self.literals.iter().any(|l| l.var == var)
    }

    /// `Some(true)` if some literal is true, `Some(false)` if all are false,
    /// `None` if undecided under a partial assignment.
    pub fn value(&self, a: &Assignment) -> Option<bool> {
        let mut undecided = false;
        for &lit in &self.literals {
            match a.lit_value(lit) {
                Some(true) => return Some(true),
                Some(false) => {}
                None => undecided = true,
            }
        }
        if undecided {
            None
        } else {
            Some(false)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: u32,
    clauses: Vec<Clause>,
    occ: Vec<u32>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("literal {lit} in clause {clause} exceeds the declared {num_vars} variables")]
    VarOutOfRange { lit: i64, clause: ClauseId, num_vars: u32 },
    #[error("variable {0} is unassigned; evaluate requires a total assignment")]
    PartialAssignment(u32),
    #[error("assignment covers {assignment} variables but the formula has {formula}")]
    SizeMismatch { assignment: u32, formula: u32 },
}

impl CnfFormula {
    /// Builds a formula from already-normalized clauses.
    pub fn new(num_vars: u32, clauses: Vec<Clause>) -> Result<Self, FormulaError> {
        for c in &clauses {
            if let Some(l) = c.literals.iter().find(|l| l.var > num_vars || l.var == 0) {
                return Err(FormulaError::VarOutOfRange { lit: l.to_dimacs(), clause: c.id, num_vars });
            }
        }
        let occ = count_occurrences(num_vars, &clauses);
        Ok(CnfFormula { num_vars, clauses, occ })
    }

    /// Convenience constructor from DIMACS-style integer clauses. Clause ids
    /// are positions in `clauses`; tautologies are skipped (their ids are
    /// simply absent) and empty clauses are rejected as out-of-range.
    pub fn from_dimacs_clauses(num_vars: u32, clauses: &[Vec<i64>]) -> Result<Self, FormulaError> {
        let mut out = Vec::with_capacity(clauses.len());
        for (id, raw) in clauses.iter().enumerate() {
            let id = id as ClauseId;
            if let Some(&bad) = raw.iter().find(|&&l| l == 0 || l.unsigned_abs() > num_vars as u64) {
                return Err(FormulaError::VarOutOfRange { lit: bad, clause: id, num_vars });
            }
            match Clause::build(id, raw.iter().map(|&l| Literal::from_dimacs(l))) {
                ClauseBuild::Clause { clause, .. } => out.push(clause),
                ClauseBuild::Tautology => {}
                ClauseBuild::Empty => return Err(FormulaError::VarOutOfRange { lit: 0, clause: id, num_vars }),
            }
        }
        CnfFormula::new(num_vars, out)
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Number of clauses mentioning `var` in either polarity.
    pub fn occ(&self, var: u32) -> u32 {
        self.occ.get(var as usize).copied().unwrap_or(0)
    }

    /// Number of variables with at least one occurrence.
    pub fn active_vars(&self) -> u32 {
        self.occ.iter().filter(|&&c| c > 0).count() as u32
    }

    /// Recounts occurrences from scratch and compares with the stored table.
    pub fn occurrences_consistent(&self) -> bool {
        count_occurrences(self.num_vars, &self.clauses) == self.occ
    }

    /// Keeps the clauses for which `keep` returns true, in order.
    pub fn filter_clauses(&self, mut keep: impl FnMut(&Clause) -> bool) -> CnfFormula {
        let clauses: Vec<Clause> = self.clauses.iter().filter(|c| keep(c)).cloned().collect();
        let occ = count_occurrences(self.num_vars, &clauses);
        CnfFormula { num_vars: self.num_vars, clauses, occ }
    }

    pub fn evaluate(&self, a: &Assignment) -> Result<EvalReport, FormulaError> {
        evaluate(self, a)
    }
}

fn count_occurrences(num_vars: u32, clauses: &[Clause]) -> Vec<u32> {
    let mut occ = vec![0u32; num_vars as usize + 1];
    for c in clauses {
        for l in &c.literals {
            occ[l.var as usize] += 1;
        }
    }
    occ
}

/// Partial or total mapping from variables `1..=num_vars` to truth values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: Vec<Option<bool>>,
}

impl Assignment {
    /// Empty partial assignment.
    pub fn new(num_vars: u32) -> Self {
        Assignment { values: vec![None; num_vars as usize + 1] }
    }

    /// Total assignment setting every variable to `value`.
    pub fn filled(num_vars: u32, value: bool) -> Self {
        let mut values = vec![Some(value); num_vars as usize + 1];
        values[0] = None;
        Assignment { values }
    }

    /// Total assignment from a dense vector indexed by `var - 1`.
    pub fn from_bools(bits: &[bool]) -> Self {
        let mut values = Vec::with_capacity(bits.len() + 1);
        values.push(None);
        values.extend(bits.iter().map(|&b| Some(b)));
        Assignment { values }
    }

    pub fn num_vars(&self) -> u32 {
        (self.values.len() - 1) as u32
    }

    #[inline]
    pub fn get(&self, var: u32) -> Option<bool> {
        self.values.get(var as usize).copied().flatten()
    }

    #[inline]
    pub fn is_assigned(&self, var: u32) -> bool {
        self.get(var).is_some()
    }

    #[inline]
    pub fn set(&mut self, var: u32, value: bool) {
        debug_assert!(var >= 1 && (var as usize) < self.values.len());
        self.values[var as usize] = Some(value);
    }

    pub fn unset(&mut self, var: u32) {
        self.values[var as usize] = None;
    }

    #[inline]
    pub fn lit_value(&self, lit: Literal) -> Option<bool> {
        self.get(lit.var).map(|v| lit.eval(v))
    }

    /// Makes `lit` true.
    #[inline]
    pub fn assign_lit(&mut self, lit: Literal) {
        self.set(lit.var, !lit.negated);
    }

    pub fn is_total(&self) -> bool {
        self.values[1..].iter().all(Option::is_some)
    }

    pub fn assigned_count(&self) -> usize {
        self.values[1..].iter().filter(|v| v.is_some()).count()
    }

    /// Assigns `value` to every unassigned variable.
    pub fn complete_with(&mut self, value: bool) {
        for v in &mut self.values[1..] {
            v.get_or_insert(value);
        }
    }

    /// Assigned `(var, value)` pairs in increasing variable order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, bool)> + '_ {
        self.values.iter().enumerate().skip(1).filter_map(|(v, val)| val.map(|b| (v as u32, b)))
    }

    /// True if every assignment in `self` is also present in `other`.
    pub fn is_subset_of(&self, other: &Assignment) -> bool {
        self.iter().all(|(v, b)| other.get(v) == Some(b))
    }

    /// Model as signed DIMACS literals, for assigned variables only.
    pub fn to_dimacs(&self) -> Vec<i64> {
        self.iter().map(|(v, b)| if b { v as i64 } else { -(v as i64) }).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalReport {
    pub satisfied: bool,
    /// Ids of falsified clauses, ascending.
    pub unsatisfied: Vec<ClauseId>,
}

/// Checks a total assignment against every clause.
pub fn evaluate(f: &CnfFormula, a: &Assignment) -> Result<EvalReport, FormulaError> {
    if a.num_vars() < f.num_vars() {
        return Err(FormulaError::SizeMismatch { assignment: a.num_vars(), formula: f.num_vars() });
    }
    if let Some(v) = (1..=f.num_vars()).find(|&v| !a.is_assigned(v)) {
        return Err(FormulaError::PartialAssignment(v));
    }
    let mut unsatisfied: Vec<ClauseId> = f
        .clauses()
        .iter()
        .filter(|c| !c.literals.iter().any(|&l| a.lit_value(l) == Some(true)))
        .map(|c| c.id)
        .collect();
    unsatisfied.sort_unstable();
    Ok(EvalReport { satisfied: unsatisfied.is_empty(), unsatisfied })
}
