//! Planted-solution parity instances.
//!
//! A secret `k`-bit vector is drawn; each sample picks a random subset of
//! the bits and computes its parity through a chain of ternary XOR gates
//! (`t1 = a ^ b`, `t2 = t1 ^ c`, ...) written as 4-clause CNF blocks. The
//! observed label is the parity with `noise_flips` labels flipped; an error
//! variable `e_j = out_j ^ label_j` per sample is tied to its output by two
//! binary clauses, and a sequential counter bounds the number of true error
//! variables by `noise_flips`. A few filler 3-clauses over outputs and
//! error variables, each satisfied by the planted model, complete the
//! instance.
//!
//! Variable layout: secret bits `1..=k`, then each sample's gate outputs in
//! sample order (the last one is the sample output), then error variables,
//! then counter registers.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::formula::{Assignment, Clause, ClauseBuild, CnfFormula, Literal};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenerateError {
    #[error("need at least 2 secret bits, got {0}")]
    TooFewBits(u32),
    #[error("need at least as many samples as bits ({bits}), got {samples}")]
    TooFewSamples { bits: u32, samples: u32 },
    #[error("cannot flip {noise} of {samples} labels")]
    TooMuchNoise { noise: u32, samples: u32 },
}

#[derive(Clone, Debug)]
pub struct GeneratedInstance {
    pub formula: CnfFormula,
    /// Total over every variable of `formula`; satisfies it by construction.
    pub planted: Assignment,
    /// Number of ternary gates written (each as four clauses).
    pub ternaries: usize,
    pub bits: u32,
    pub samples: u32,
    pub noise_flips: u32,
    pub seed: u64,
}

impl GeneratedInstance {
    /// DIMACS text with a parameter comment and the planted model as a
    /// `c planted` line.
    pub fn to_dimacs(&self) -> String {
        let mut out = Vec::new();
        let header = format!(
            "c parity instance bits={} samples={} noise={} seed={}\nc planted {}\n",
            self.bits,
            self.samples,
            self.noise_flips,
            self.seed,
            self.planted.to_dimacs().iter().map(i64::to_string).collect::<Vec<_>>().join(" ")
        );
        out.extend_from_slice(header.as_bytes());
        crate::formula::write_dimacs(&self.formula, &mut out).expect("writing to a Vec");
        String::from_utf8(out).expect("ascii")
    }
}

struct Builder {
    clauses: Vec<Vec<Literal>>,
    values: Vec<bool>, // index = var, slot 0 unused
    ternaries: usize,
}

impl Builder {
    fn new_var(&mut self, value: bool) -> u32 {
        self.values.push(value);
        (self.values.len() - 1) as u32
    }

    fn clause(&mut self, lits: Vec<Literal>) {
        debug_assert!(lits.iter().any(|l| l.eval(self.values[l.var as usize])), "planted model must satisfy");
        self.clauses.push(lits);
    }

    /// Four clauses for `a ^ b ^ c = 0`: the odd-negation sign patterns.
    fn xor3_zero(&mut self, a: u32, b: u32, c: u32) {
        for mask in [0b001u8, 0b010, 0b100, 0b111] {
            let lits = [a, b, c].iter().enumerate().map(|(i, &v)| Literal::new(v, mask >> i & 1 == 1)).collect();
            self.clause(lits);
        }
        self.ternaries += 1;
    }
}

pub fn generate_parity(
    bits: u32,
    samples: u32,
    noise_flips: u32,
    seed: u64,
) -> Result<GeneratedInstance, GenerateError> {
    if bits < 2 {
        return Err(GenerateError::TooFewBits(bits));
    }
    if samples < bits {
        return Err(GenerateError::TooFewSamples { bits, samples });
    }
    if noise_flips > samples {
        return Err(GenerateError::TooMuchNoise { noise: noise_flips, samples });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = Builder { clauses: Vec::new(), values: vec![false], ternaries: 0 };

    let secret: Vec<u32> = (0..bits)
        .map(|_| {
            let v = rng.gen::<bool>();
            b.new_var(v)
        })
        .collect();

    let mut outputs = Vec::with_capacity(samples as usize);
    for _ in 0..samples {
        let mut support: Vec<u32> = secret.iter().copied().filter(|_| rng.gen::<bool>()).collect();
        while support.len() < 2 {
            let extra = secret[rng.gen_range(0..secret.len())];
            if !support.contains(&extra) {
                support.push(extra);
            }
        }
        support.sort_unstable();
        let mut acc = support[0];
        for &bit in &support[1..] {
            let value = b.values[acc as usize] ^ b.values[bit as usize];
            let out = b.new_var(value);
            b.xor3_zero(acc, bit, out);
            acc = out;
        }
        outputs.push(acc);
    }

    let mut noisy: Vec<usize> = (0..samples as usize).collect();
    noisy.shuffle(&mut rng);
    noisy.truncate(noise_flips as usize);
    let errors: Vec<u32> = (0..samples as usize)
        .map(|j| {
            let flipped = noisy.contains(&j);
            let label = b.values[outputs[j] as usize] ^ flipped;
            let e = b.new_var(flipped);
            // e == out ^ label
            let o = outputs[j];
            if label {
                b.clause(vec![Literal::pos(e), Literal::pos(o)]);
                b.clause(vec![Literal::neg(e), Literal::neg(o)]);
            } else {
                b.clause(vec![Literal::neg(e), Literal::pos(o)]);
                b.clause(vec![Literal::pos(e), Literal::neg(o)]);
            }
            e
        })
        .collect();

    at_most(&mut b, &errors, noise_flips as usize);

    let pool: Vec<u32> = outputs.iter().chain(&errors).copied().collect();
    for _ in 0..samples / 2 {
        let mut vars: Vec<u32> = pool.choose_multiple(&mut rng, 3.min(pool.len())).copied().collect();
        vars.sort_unstable();
        let mut lits: Vec<Literal> = vars.iter().map(|&v| Literal::new(v, rng.gen())).collect();
        if !lits.iter().any(|l| l.eval(b.values[l.var as usize])) {
            let k = rng.gen_range(0..lits.len());
            lits[k] = lits[k].negate();
        }
        b.clause(lits);
    }

    let num_vars = (b.values.len() - 1) as u32;
    let clauses: Vec<Clause> = b
        .clauses
        .into_iter()
        .enumerate()
        .map(|(id, lits)| match Clause::build(id as u32, lits) {
            ClauseBuild::Clause { clause, .. } => clause,
            other => unreachable!("generator emits clean clauses, got {other:?}"),
        })
        .collect();
    let formula = CnfFormula::new(num_vars, clauses).expect("generator stays within its variables");
    let planted = Assignment::from_bools(&b.values[1..]);
    Ok(GeneratedInstance { formula, planted, ternaries: b.ternaries, bits, samples, noise_flips, seed })
}

/// Sequential-counter encoding of `sum(xs) <= k`.
fn at_most(b: &mut Builder, xs: &[u32], k: usize) {
    let n = xs.len();
    if k >= n {
        return;
    }
    if k == 0 {
        for &x in xs {
            b.clause(vec![Literal::neg(x)]);
        }
        return;
    }
    let val = |b: &Builder, v: u32| b.values[v as usize];
    // regs[i][j]: at least j+1 of xs[0..=i] are true
    let mut regs: Vec<Vec<u32>> = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let count = xs[..=i].iter().filter(|&&x| val(b, x)).count();
        let row: Vec<u32> = (0..k).map(|j| b.new_var(count > j)).collect();
        regs.push(row);
    }
    b.clause(vec![Literal::neg(xs[0]), Literal::pos(regs[0][0])]);
    for &r in &regs[0][1..] {
        b.clause(vec![Literal::neg(r)]);
    }
    for i in 1..n - 1 {
        b.clause(vec![Literal::neg(xs[i]), Literal::pos(regs[i][0])]);
        b.clause(vec![Literal::neg(regs[i - 1][0]), Literal::pos(regs[i][0])]);
        for j in 1..k {
            b.clause(vec![Literal::neg(xs[i]), Literal::neg(regs[i - 1][j - 1]), Literal::pos(regs[i][j])]);
            b.clause(vec![Literal::neg(regs[i - 1][j]), Literal::pos(regs[i][j])]);
        }
        b.clause(vec![Literal::neg(xs[i]), Literal::neg(regs[i - 1][k - 1])]);
    }
    b.clause(vec![Literal::neg(xs[n - 1]), Literal::neg(regs[n - 2][k - 1])]);
}
