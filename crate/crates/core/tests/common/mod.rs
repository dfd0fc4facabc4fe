#![allow(dead_code)]

use paritysat::xor::XorEquation;
use paritysat::{Assignment, CnfFormula};
use rand::Rng;

pub fn cnf(nv: u32, cls: &[Vec<i64>]) -> CnfFormula {
    CnfFormula::from_dimacs_clauses(nv, cls).unwrap()
}

/// Clauses over `1..=nv` with lengths in `min_len..=max_len`; repeated
/// variables and tautologies are allowed (the constructor cleans them).
pub fn random_clauses<R: Rng>(rng: &mut R, nv: u32, nc: usize, min_len: usize, max_len: usize) -> Vec<Vec<i64>> {
    (0..nc)
        .map(|_| {
            let len = rng.gen_range(min_len..=max_len);
            (0..len)
                .map(|_| {
                    let v = rng.gen_range(1..=nv) as i64;
                    if rng.gen() {
                        v
                    } else {
                        -v
                    }
                })
                .collect()
        })
        .collect()
}

pub fn even_quad(a: i64, b: i64, c: i64) -> Vec<Vec<i64>> {
    vec![vec![a, -b, -c], vec![-a, b, -c], vec![-a, -b, c], vec![a, b, c]]
}

pub fn odd_quad(a: i64, b: i64, c: i64) -> Vec<Vec<i64>> {
    vec![vec![-a, -b, -c], vec![-a, b, c], vec![a, -b, c], vec![a, b, -c]]
}

/// Assignment over `n` variables from the low bits of `m` (bit `v-1` is `v`).
pub fn from_mask(n: u32, m: u64) -> Assignment {
    let bits: Vec<bool> = (0..n).map(|i| m >> i & 1 == 1).collect();
    Assignment::from_bools(&bits)
}

pub fn satisfies(f: &CnfFormula, a: &Assignment) -> bool {
    f.evaluate(a).unwrap().satisfied
}

pub fn random_system<R: Rng>(rng: &mut R, nv: u32, rows: usize) -> Vec<XorEquation> {
    (0..rows)
        .map(|_| {
            let vars: Vec<u32> = (1..=nv).filter(|_| rng.gen_bool(0.35)).collect();
            XorEquation::new(vars, rng.gen())
        })
        .collect()
}
