//! Unit-clause and binary-equivalency reduction with an undo log.
//!
//! Passes alternate to a fixpoint: unit propagation first, then every
//! equivalency pair `{-x v y}, {x v -y}` (or its negated form
//! `{x v y}, {-x v -y}`) is collapsed onto the lower-numbered variable.
//! Variable numbering is preserved; eliminated variables simply stop
//! occurring and are recorded in the [`ReconstructionMap`].

use std::collections::{HashSet, VecDeque};

use thiserror::Error;

use super::{Assignment, Clause, ClauseBuild, ClauseId, CnfFormula, Literal};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Substitution {
    Fixed {
        var: u32,
        value: bool,
    },
    /// `var` takes the value of `rep`.
    Equiv {
        var: u32,
        rep: Literal,
    },
}

impl Substitution {
    pub fn var(&self) -> u32 {
        match *self {
            Substitution::Fixed { var, .. } | Substitution::Equiv { var, .. } => var,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReconstructionMap {
    records: Vec<Substitution>,
}

impl ReconstructionMap {
    pub fn new(records: Vec<Substitution>) -> Self {
        ReconstructionMap { records }
    }

    pub fn records(&self) -> &[Substitution] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn fixed_count(&self) -> usize {
        self.records.iter().filter(|r| matches!(r, Substitution::Fixed { .. })).count()
    }

    pub fn equiv_count(&self) -> usize {
        self.records.len() - self.fixed_count()
    }
}

#[derive(Clone, Debug)]
pub struct Simplified {
    pub formula: CnfFormula,
    pub map: ReconstructionMap,
    /// An empty clause was derived: the input is unsatisfiable. The formula
    /// and map are unspecified when set.
    pub conflict: bool,
    pub passes: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReconstructError {
    #[error("record for x{var} refers to unassigned x{rep}")]
    UnassignedRepresentative { var: u32, rep: u32 },
}

struct Work {
    num_vars: u32,
    clauses: Vec<Option<(ClauseId, Vec<Literal>)>>,
    fixed: Vec<Option<bool>>,
    // subst[v] = Some(lit): v has been replaced by lit
    subst: Vec<Option<Literal>>,
    records: Vec<Substitution>,
}

impl Work {
    fn propagate_units(&mut self) -> Result<(), ()> {
        let mut occ: Vec<Vec<usize>> = vec![Vec::new(); self.num_vars as usize + 1];
        let mut queue: VecDeque<Literal> = VecDeque::new();
        for (pos, c) in self.clauses.iter().enumerate() {
            if let Some((_, lits)) = c {
                for l in lits {
                    occ[l.var as usize].push(pos);
                }
                if lits.len() == 1 {
                    queue.push_back(lits[0]);
                }
            }
        }
        while let Some(lit) = queue.pop_front() {
            match self.fixed[lit.var as usize] {
                Some(v) if lit.eval(v) => continue,
                Some(_) => return Err(()),
                None => {}
            }
            let value = !lit.negated;
            self.fixed[lit.var as usize] = Some(value);
            self.records.push(Substitution::Fixed { var: lit.var, value });
            for &pos in &occ[lit.var as usize] {
                let Some((_, lits)) = &mut self.clauses[pos] else { continue };
                if lits.contains(&lit) {
                    self.clauses[pos] = None;
                    continue;
                }
                lits.retain(|&l| l != lit.negate());
                match lits.len() {
                    0 => return Err(()),
                    1 => queue.push_back(lits[0]),
                    _ => {}
                }
            }
        }
        Ok(())
    }

    /// Follows substitutions to a root: returns `(root, flip)` meaning
    /// `var = root XOR flip`.
    fn root(&self, var: u32) -> (u32, bool) {
        let mut v = var;
        let mut flip = false;
        while let Some(l) = self.subst[v as usize] {
            flip ^= l.negated;
            v = l.var;
        }
        (v, flip)
    }

    /// Returns `Ok(true)` if at least one substitution was made.
    fn collapse_equivalences(&mut self) -> Result<bool, ()> {
        let binaries: HashSet<(Literal, Literal)> = self
            .clauses
            .iter()
            .flatten()
            .filter(|(_, lits)| lits.len() == 2)
            .map(|(_, lits)| ordered(lits[0], lits[1]))
            .collect();
        // (low, high, d) meaning high = low XOR d
        let mut pairs: Vec<(u32, u32, bool)> = binaries
            .iter()
            .filter(|&&(a, b)| binaries.contains(&ordered(a.negate(), b.negate())))
            .map(|&(a, b)| (a.var, b.var, !(a.negated ^ b.negated)))
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        if pairs.is_empty() {
            return Ok(false);
        }

        let mut changed = false;
        for (x, y, d) in pairs {
            let (rx, sx) = self.root(x);
            let (ry, sy) = self.root(y);
            let flip = sx ^ sy ^ d;
            if rx == ry {
                if flip {
                    return Err(());
                }
                continue;
            }
            let (lo, hi) = if rx < ry { (rx, ry) } else { (ry, rx) };
            let rep = Literal::new(lo, flip);
            self.subst[hi as usize] = Some(rep);
            self.records.push(Substitution::Equiv { var: hi, rep });
            changed = true;
        }
        if !changed {
            return Ok(false);
        }

        let mut clauses = std::mem::take(&mut self.clauses);
        for slot in clauses.iter_mut() {
            let Some((id, lits)) = slot.take() else { continue };
            let rewritten = lits.iter().map(|l| {
                let (r, s) = self.root(l.var);
                Literal::new(r, l.negated ^ s)
            });
            match Clause::build(id, rewritten) {
                ClauseBuild::Clause { clause, .. } => *slot = Some((id, clause.literals)),
                ClauseBuild::Tautology => {}
                ClauseBuild::Empty => return Err(()),
            }
        }
        self.clauses = clauses;
        Ok(true)
    }
}

fn ordered(a: Literal, b: Literal) -> (Literal, Literal) {
    if a.var <= b.var {
        (a, b)
    } else {
        (b, a)
    }
}

pub fn simplify(f: &CnfFormula) -> Simplified {
    let n = f.num_vars() as usize;
    let mut work = Work {
        num_vars: f.num_vars(),
        clauses: f.clauses().iter().map(|c| Some((c.id, c.literals.clone()))).collect(),
        fixed: vec![None; n + 1],
        subst: vec![None; n + 1],
        records: Vec::new(),
    };
    let mut passes = 0;
    let conflict = loop {
        passes += 1;
        if work.propagate_units().is_err() {
            break true;
        }
        match work.collapse_equivalences() {
            Err(()) => break true,
            Ok(false) => break false,
            Ok(true) => {}
        }
    };

    let clauses: Vec<Clause> =
        work.clauses.into_iter().flatten().map(|(id, literals)| Clause { id, literals }).collect();
    let formula = CnfFormula::new(f.num_vars(), clauses).expect("simplification never adds variables");
    Simplified { formula, map: ReconstructionMap { records: work.records }, conflict, passes }
}

/// Lifts an assignment of the simplified formula back to the original
/// variables by replaying the map in reverse. Variables that are neither
/// assigned nor substituted (they vanished with satisfied clauses) are
/// don't-cares and default to false.
pub fn reconstruct(a: &Assignment, map: &ReconstructionMap) -> Result<Assignment, ReconstructError> {
    let mut out = a.clone();
    let mut substituted = vec![false; out.num_vars() as usize + 1];
    for r in map.records() {
        substituted[r.var() as usize] = true;
    }
    for v in 1..=out.num_vars() {
        if !substituted[v as usize] && !out.is_assigned(v) {
            out.set(v, false);
        }
    }
    for v in 1..=out.num_vars() {
        if substituted[v as usize] {
            out.unset(v);
        }
    }
    for r in map.records().iter().rev() {
        match *r {
            Substitution::Fixed { var, value } => out.set(var, value),
            Substitution::Equiv { var, rep } => {
                let value =
                    out.lit_value(rep).ok_or(ReconstructError::UnassignedRepresentative { var, rep: rep.var })?;
                out.set(var, value);
            }
        }
    }
    Ok(out)
}
