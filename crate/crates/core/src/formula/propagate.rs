use std::collections::VecDeque;

use super::{Assignment, CnfFormula, Literal};

/// Unit resolution over a fixed formula. Builds per-literal occurrence lists
/// once so it can be rerun cheaply from many seed assignments.
#[derive(Clone, Debug)]
pub struct UnitPropagator<'f> {
    formula: &'f CnfFormula,
    // occurrences[lit.index()] = clause positions containing lit
    occurrences: Vec<Vec<u32>>,
}

enum ClauseState {
    Satisfied,
    Falsified,
    Unit(Literal),
    Open,
}

impl<'f> UnitPropagator<'f> {
    pub fn new(formula: &'f CnfFormula) -> Self {
        let mut occurrences = vec![Vec::new(); 2 * formula.num_vars() as usize + 2];
        for (pos, c) in formula.clauses().iter().enumerate() {
            for l in &c.literals {
                occurrences[l.index()].push(pos as u32);
            }
        }
        UnitPropagator { formula, occurrences }
    }

    pub fn formula(&self) -> &'f CnfFormula {
        self.formula
    }

    fn state(&self, pos: usize, a: &Assignment) -> ClauseState {
        let mut unfixed = None;
        let mut count = 0;
        for &l in &self.formula.clauses()[pos].literals {
            match a.lit_value(l) {
                Some(true) => return ClauseState::Satisfied,
                Some(false) => {}
                None => {
                    count += 1;
                    unfixed = Some(l);
                }
            }
        }
        match count {
            0 => ClauseState::Falsified,
            1 => ClauseState::Unit(unfixed.unwrap()),
            _ => ClauseState::Open,
        }
    }

    /// Extends `a` in place to the unit-resolution fixpoint. Returns `true`
    /// on conflict, in which case `a` holds the assignments made so far.
    pub fn propagate(&self, a: &mut Assignment) -> bool {
        let mut queue: VecDeque<u32> = VecDeque::new();
        for pos in 0..self.formula.num_clauses() {
            match self.state(pos, a) {
                ClauseState::Falsified => return true,
                ClauseState::Unit(_) => queue.push_back(pos as u32),
                _ => {}
            }
        }
        while let Some(pos) = queue.pop_front() {
            let lit = match self.state(pos as usize, a) {
                ClauseState::Unit(l) => l,
                ClauseState::Falsified => return true,
                _ => continue,
            };
            a.assign_lit(lit);
            for &other in &self.occurrences[lit.negate().index()] {
                match self.state(other as usize, a) {
                    ClauseState::Falsified => return true,
                    ClauseState::Unit(_) => queue.push_back(other),
                    _ => {}
                }
            }
        }
        false
    }
}

/// Repeatedly fixes the sole unfixed literal of any clause whose other
/// literals are all false. Returns the extended assignment and a conflict
/// flag (set when some clause ends up with every literal false).
pub fn unit_resolution(f: &CnfFormula, v: &Assignment) -> (Assignment, bool) {
    let mut a = v.clone();
    let conflict = UnitPropagator::new(f).propagate(&mut a);
    (a, conflict)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(nv: u32, cls: &[&[i64]]) -> CnfFormula {
        CnfFormula::from_dimacs_clauses(nv, &cls.iter().map(|c| c.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn unit_chain() {
        let g = f(2, &[&[1], &[-1, 2]]);
        let (a, conflict) = unit_resolution(&g, &Assignment::new(2));
        assert!(!conflict);
        assert_eq!((a.get(1), a.get(2)), (Some(true), Some(true)));
    }

    #[test]
    fn forced_second_literal() {
        let g = f(2, &[&[1, 2]]);
        let mut v = Assignment::new(2);
        v.set(1, false);
        let (a, conflict) = unit_resolution(&g, &v);
        assert!(!conflict);
        assert_eq!((a.get(1), a.get(2)), (Some(false), Some(true)));
    }

    #[test]
    fn hand_propagated_conflict() {
        // -x2 forces x2=F; then {x1 v x2} wants x1=T and {-x1 v x2} wants x1=F.
        let g = f(2, &[&[1, 2], &[-1, 2], &[-2]]);
        let (_, conflict) = unit_resolution(&g, &Assignment::new(2));
        assert!(conflict);
    }

    #[test]
    fn seed_already_falsifies() {
        let g = f(2, &[&[1, 2]]);
        let mut v = Assignment::new(2);
        v.set(1, false);
        v.set(2, false);
        assert!(unit_resolution(&g, &v).1);
    }

    #[test]
    fn open_clauses_left_alone() {
        let g = f(3, &[&[1, 2, 3]]);
        let mut v = Assignment::new(3);
        v.set(1, false);
        let (a, conflict) = unit_resolution(&g, &v);
        assert!(!conflict);
        assert_eq!(a.assigned_count(), 1);
    }
}
