//! Parity constraints recovered from CNF.
//!
//! A ternary equation `a ^ b ^ c = r` is exactly the conjunction of four
//! 3-literal clauses over `{a, b, c}`: the ones with an even number of
//! negations when `r = 1`, and the ones with an odd number when `r = 0`.

mod extract;

pub use extract::{
    extract, find_ternary_xors, frequent_vars, grow_chains, partition, ExtractionResult, MergeRule, Partition,
    TernaryScan, XorChain,
};

use std::fmt;

use crate::formula::ClauseId;

/// Normalized parity constraint: XOR of `vars` equals `rhs`. Variables are
/// kept sorted and unique; no negations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct XorEquation {
    vars: Vec<u32>,
    rhs: bool,
}

impl XorEquation {
    /// Builds an equation, cancelling variables that appear an even number
    /// of times.
    pub fn new(vars: impl IntoIterator<Item = u32>, rhs: bool) -> Self {
        let mut vars: Vec<u32> = vars.into_iter().collect();
        vars.sort_unstable();
        let mut out: Vec<u32> = Vec::with_capacity(vars.len());
        for v in vars {
            if out.last() == Some(&v) {
                out.pop();
            } else {
                out.push(v);
            }
        }
        XorEquation { vars: out, rhs }
    }

    /// The identity `(empty) = 0`.
    pub fn zero() -> Self {
        XorEquation { vars: Vec::new(), rhs: false }
    }

    pub fn vars(&self) -> &[u32] {
        &self.vars
    }

    pub fn rhs(&self) -> bool {
        self.rhs
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn contains(&self, var: u32) -> bool {
        self.vars.binary_search(&var).is_ok()
    }

    /// `empty = 1`: unsatisfiable.
    pub fn is_contradiction(&self) -> bool {
        self.vars.is_empty() && self.rhs
    }

    /// `empty = 0`: always true.
    pub fn is_trivial(&self) -> bool {
        self.vars.is_empty() && !self.rhs
    }

    pub fn shared_count(&self, other: &XorEquation) -> usize {
        let (mut i, mut j, mut n) = (0, 0, 0);
        while i < self.vars.len() && j < other.vars.len() {
            match self.vars[i].cmp(&other.vars[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }

    /// Sum of both equations: symmetric difference of the variable sets,
    /// XOR of the constants.
    pub fn merge(&self, other: &XorEquation) -> XorEquation {
        let (a, b) = (&self.vars, &other.vars);
        let mut vars = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    vars.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    vars.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        vars.extend_from_slice(&a[i..]);
        vars.extend_from_slice(&b[j..]);
        XorEquation { vars, rhs: self.rhs ^ other.rhs }
    }

    /// Evaluates the equation under `value(var)`.
    pub fn holds(&self, mut value: impl FnMut(u32) -> bool) -> bool {
        self.vars.iter().fold(false, |acc, &v| acc ^ value(v)) == self.rhs
    }
}

/// Line format used for debug dumps: `x <v1> <v2> ... = <0|1>`.
impl fmt::Display for XorEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x")?;
        for v in &self.vars {
            write!(f, " {v}")?;
        }
        write!(f, " = {}", self.rhs as u8)
    }
}

/// A ternary equation together with the four clauses it replaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TernaryXor {
    pub equation: XorEquation,
    pub source_clause_ids: [ClauseId; 4],
}

/// Writes one equation per line in the `x ... = c` format.
pub fn dump_equations<W: std::io::Write>(eqs: &[XorEquation], mut out: W) -> std::io::Result<()> {
    for e in eqs {
        writeln!(out, "{e}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const A: u32 = 1;
    const B: u32 = 2;
    const C: u32 = 3;
    const D: u32 = 4;
    const E: u32 = 5;
    const F: u32 = 6;

    #[test]
    fn worked_merge_example() {
        let e1 = XorEquation::new([A, B, C], true);
        let e2 = XorEquation::new([C, D, F], true);
        assert_eq!(e1.merge(&e2), XorEquation::new([A, B, D, F], false));
    }

    #[test]
    fn self_cancellation() {
        let e = XorEquation::new([A, B, C], true);
        assert!(e.merge(&e).is_trivial());
    }

    #[test]
    fn merge_with_zero_rhs() {
        let e1 = XorEquation::new([A, B, C], true);
        let e2 = XorEquation::new([C, D, E], false);
        let m = e1.merge(&e2);
        assert_eq!(m, XorEquation::new([A, B, D, E], true));
        // every model of both inputs satisfies the merge (2^5 rows)
        for bits in 0u32..32 {
            let val = |v: u32| bits >> (v - 1) & 1 == 1;
            if e1.holds(val) && e2.holds(val) {
                assert!(m.holds(val));
            }
        }
    }

    #[test]
    fn new_cancels_pairs() {
        let e = XorEquation::new([3, 1, 3, 2, 2, 2], false);
        assert_eq!(e.vars(), &[1, 2]);
        assert_eq!(e.to_string(), "x 1 2 = 0");
    }

    fn eq_strategy() -> impl Strategy<Value = XorEquation> {
        (proptest::collection::vec(1u32..12, 0..8), any::<bool>()).prop_map(|(v, r)| XorEquation::new(v, r))
    }

    proptest! {
        #[test]
        fn merge_is_commutative(a in eq_strategy(), b in eq_strategy()) {
            prop_assert_eq!(a.merge(&b), b.merge(&a));
        }

        #[test]
        fn merge_is_associative(a in eq_strategy(), b in eq_strategy(), c in eq_strategy()) {
            prop_assert_eq!(a.merge(&b).merge(&c), a.merge(&b.merge(&c)));
        }

        #[test]
        fn zero_is_identity(a in eq_strategy()) {
            prop_assert_eq!(a.merge(&XorEquation::zero()), a.clone());
        }

        #[test]
        fn shared_count_matches_sets(a in eq_strategy(), b in eq_strategy()) {
            let n = a.vars().iter().filter(|v| b.contains(**v)).count();
            prop_assert_eq!(a.shared_count(&b), n);
            prop_assert_eq!(a.merge(&b).arity(), a.arity() + b.arity() - 2 * n);
        }
    }
}
