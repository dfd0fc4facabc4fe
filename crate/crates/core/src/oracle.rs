//! Exhaustive satisfiability check for small formulas. Used as ground truth
//! in tests and by the acceptance suite.

use thiserror::Error;

use crate::formula::{Assignment, CnfFormula};

/// Largest variable count [`brute_force`] accepts.
pub const MAX_ORACLE_VARS: u32 = 26;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{0} variables exceeds the exhaustive limit of {MAX_ORACLE_VARS}")]
    TooManyVars(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BruteOutcome {
    /// The first model in counting order (bit `v - 1` of the counter is
    /// variable `v`).
    Sat(Assignment),
    Unsat,
}

impl BruteOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, BruteOutcome::Sat(_))
    }
}

pub fn brute_force(f: &CnfFormula) -> Result<BruteOutcome, OracleError> {
    let n = f.num_vars();
    if n > MAX_ORACLE_VARS {
        return Err(OracleError::TooManyVars(n));
    }
    let clauses = masks(f);
    for m in 0u32..(1u32 << n) {
        if clauses.iter().all(|&(mask, falsifying)| m & mask != falsifying) {
            let bits: Vec<bool> = (0..n).map(|i| m >> i & 1 == 1).collect();
            return Ok(BruteOutcome::Sat(Assignment::from_bools(&bits)));
        }
    }
    Ok(BruteOutcome::Unsat)
}

/// Number of models, for tests comparing solution sets.
pub fn count_models(f: &CnfFormula) -> Result<u64, OracleError> {
    let n = f.num_vars();
    if n > MAX_ORACLE_VARS {
        return Err(OracleError::TooManyVars(n));
    }
    let mut count = 0;
    let all = masks(f);
    for m in 0u32..(1u32 << n) {
        if all.iter().all(|&(mask, fz)| m & mask != fz) {
            count += 1;
        }
    }
    Ok(count)
}

// each clause as (its variables, the values of those variables that falsify it)
fn masks(f: &CnfFormula) -> Vec<(u32, u32)> {
    f.clauses()
        .iter()
        .map(|c| {
            c.literals.iter().fold((0, 0), |(m, fz), l| {
                let bit = 1u32 << (l.var - 1);
                (m | bit, if l.negated { fz | bit } else { fz })
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::evaluate;

    fn f(n: u32, cs: &[&[i64]]) -> CnfFormula {
        CnfFormula::from_dimacs_clauses(n, &cs.iter().map(|c| c.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn first_model_in_counting_order() {
        let g = f(3, &[&[2, 3], &[-3]]);
        match brute_force(&g).unwrap() {
            BruteOutcome::Sat(a) => {
                assert_eq!(a.to_dimacs(), vec![-1, 2, -3]);
                assert!(evaluate(&g, &a).unwrap().satisfied);
            }
            BruteOutcome::Unsat => panic!("satisfiable"),
        }
    }

    #[test]
    fn unsat_and_limits() {
        assert_eq!(brute_force(&f(1, &[&[1], &[-1]])).unwrap(), BruteOutcome::Unsat);
        assert_eq!(brute_force(&f(27, &[])).unwrap_err(), OracleError::TooManyVars(27));
        assert!(brute_force(&f(0, &[])).unwrap().is_sat());
    }

    #[test]
    fn model_counts() {
        assert_eq!(count_models(&f(3, &[])).unwrap(), 8);
        // x1 ^ x2 ^ x3 = 1
        let xor = f(3, &[&[1, 2, 3], &[1, -2, -3], &[-1, 2, -3], &[-1, -2, 3]]);
        assert_eq!(count_models(&xor).unwrap(), 4);
    }
}
