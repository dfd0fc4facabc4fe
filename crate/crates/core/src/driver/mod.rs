//! The hybrid pipeline: simplify, recover parity equations, solve the
//! residual clauses by local search, eliminate, then repair the free
//! variables inside a small Hamming ball around the local-search answer.

mod hamming;
mod solve;

pub use hamming::{ball_size, hamming_ball, HammingBall, YCandidate};
pub use solve::{solve, solve_many, PhaseTimings, SolveResult, SolveStats, Status, UnknownReason};

use crate::formula::{Assignment, CnfFormula, UnitPropagator};
use crate::gf2::{EchelonSystem, RowSelect};

/// Checks free-variable candidates against the residual clauses.
pub struct CandidateTester<'a> {
    sys: &'a EchelonSystem,
    residual: &'a CnfFormula,
    propagator: UnitPropagator<'a>,
    residual_vars: Vec<u32>,
    fallback: Option<&'a Assignment>,
}

impl<'a> CandidateTester<'a> {
    /// `sys` must be consistent.
    pub fn new(sys: &'a EchelonSystem, residual: &'a CnfFormula) -> Self {
        assert!(!sys.is_inconsistent(), "candidate testing needs a consistent system");
        let residual_vars = (1..=residual.num_vars()).filter(|&v| residual.occ(v) > 0).collect();
        CandidateTester { sys, residual, propagator: UnitPropagator::new(residual), residual_vars, fallback: None }
    }

    /// Complete residual variables left open by unit resolution from `a`
    /// (typically the local-search answer) instead of with false. Variables
    /// `a` leaves unassigned still become false.
    pub fn with_fallback(mut self, a: &'a Assignment) -> Self {
        self.fallback = Some(a);
        self
    }

    /// Seeds unit resolution on the residual with the candidate's free
    /// values and the Z-block pivots they induce, completes any residual
    /// variable still open (with false, or from the fallback), and accepts iff every residual
    /// clause is then satisfied. Returns the (partial) assignment built.
    pub fn test(&self, y: &YCandidate) -> (bool, Assignment) {
        let mut a = Assignment::new(self.residual.num_vars());
        for (j, &var) in self.sys.free_vars().iter().enumerate() {
            a.set(var, y.bits.get(j));
        }
        self.sys.eval_into(&y.bits, RowSelect::Other, &mut a).expect("consistent system, matching length");
        if self.propagator.propagate(&mut a) {
            return (false, a);
        }
        for &v in &self.residual_vars {
            if !a.is_assigned(v) {
                let value = self.fallback.and_then(|f| f.get(v)).unwrap_or(false);
                a.set(v, value);
            }
        }
        let ok = self.residual.clauses().iter().all(|c| c.value(&a) == Some(true));
        (ok, a)
    }
}

pub fn try_candidate(y: &YCandidate, sys: &EchelonSystem, residual: &CnfFormula) -> (bool, Assignment) {
    CandidateTester::new(sys, residual).test(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::{gauss_jordan, BitVec, PivotOrder};
    use crate::xor::XorEquation;

    #[test]
    fn empty_residual_accepts() {
        let sys = gauss_jordan(&[XorEquation::new([1, 2], true)], &PivotOrder::default());
        let residual = CnfFormula::from_dimacs_clauses(2, &[]).unwrap();
        for bits in [false, true] {
            let y = YCandidate { bits: BitVec::from_bools(&[bits]), distance: 0 };
            assert!(try_candidate(&y, &sys, &residual).0);
        }
    }

    #[test]
    fn z_pivot_decides() {
        // y1 = x1, z1 = x2 with z1 = y1 forced by the system; residual {y1 v z1}
        let sys = gauss_jordan(&[XorEquation::new([1, 2], false)], &PivotOrder::new(vec![2, 1], Default::default()));
        assert_eq!(sys.free_vars(), &[1]);
        let residual = CnfFormula::from_dimacs_clauses(2, &[vec![1, 2]]).unwrap();
        let reject = YCandidate { bits: BitVec::from_bools(&[false]), distance: 0 };
        let accept = YCandidate { bits: BitVec::from_bools(&[true]), distance: 1 };
        assert!(!try_candidate(&reject, &sys, &residual).0);
        let (ok, a) = try_candidate(&accept, &sys, &residual);
        assert!(ok);
        assert_eq!((a.get(1), a.get(2)), (Some(true), Some(true)));
    }

    #[test]
    fn unit_resolution_fills_residual() {
        // residual {-x1 v x3}, {-x3 v x4}; x1 free in the system
        let sys = gauss_jordan(&[XorEquation::new([1, 2], true)], &PivotOrder::new(vec![2, 1], Default::default()));
        let residual = CnfFormula::from_dimacs_clauses(4, &[vec![-1, 3], vec![-3, 4]]).unwrap();
        let y = YCandidate { bits: BitVec::from_bools(&[true]), distance: 0 };
        let (ok, a) = try_candidate(&y, &sys, &residual);
        assert!(ok);
        assert_eq!(a.to_dimacs(), vec![1, -2, 3, 4]);
    }

    #[test]
    fn fallback_completes_open_vars() {
        // nothing forced; {x1 v x2} fails all-false but holds under the fallback
        let sys = gauss_jordan(&[], &PivotOrder::default());
        let residual = CnfFormula::from_dimacs_clauses(2, &[vec![1, 2]]).unwrap();
        let y = YCandidate { bits: BitVec::zeros(0), distance: 0 };
        assert!(!try_candidate(&y, &sys, &residual).0);
        let walk = Assignment::from_bools(&[false, true]);
        let (ok, a) = CandidateTester::new(&sys, &residual).with_fallback(&walk).test(&y);
        assert!(ok);
        assert_eq!(a.to_dimacs(), vec![-1, 2]);
    }
}
