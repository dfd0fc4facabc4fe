//! Gauss-Jordan elimination over GF(2).
//!
//! The solved system expresses every pivot variable as an affine function
//! of the free variables `Y`:
//!
//! ```text
//! pivot_i = c_i ^ a_i1 y_1 ^ a_i2 y_2 ^ ... ^ a_in y_n
//! ```
//!
//! Rows whose pivot is a frequent variable form the X block; the rest form
//! the Z block. Rows are bit-packed into `u64` words.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::{self, Write};

use thiserror::Error;

use crate::formula::{Assignment, CnfFormula};
use crate::xor::XorEquation;

/// Fixed-length bit vector packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Parity of the bitwise AND, i.e. the GF(2) inner product.
    #[inline]
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones()) & 1 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn hamming(&self, other: &BitVec) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).map(|(a, b)| (a ^ b).count_ones() as usize).sum()
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + tz)
            })
        })
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", self.get(i) as u8)?;
        }
        Ok(())
    }
}

/// Column order for pivot selection plus the frequent set used to classify
/// rows.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PivotOrder {
    order: Vec<u32>,
    frequent: BTreeSet<u32>,
}

impl PivotOrder {
    pub fn new(order: Vec<u32>, frequent: BTreeSet<u32>) -> Self {
        PivotOrder { order, frequent }
    }

    /// Frequent variables first, then the rest; within each group by
    /// descending occurrence count, ties to the lower index.
    pub fn by_occurrence(f: &CnfFormula, frequent: &BTreeSet<u32>) -> Self {
        let mut order: Vec<u32> = (1..=f.num_vars()).collect();
        order.sort_by_key(|&v| (!frequent.contains(&v), std::cmp::Reverse(f.occ(v)), v));
        PivotOrder { order, frequent: frequent.clone() }
    }

    pub fn order(&self) -> &[u32] {
        &self.order
    }

    pub fn frequent(&self) -> &BTreeSet<u32> {
        &self.frequent
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RowClass {
    /// Pivot is a frequent variable (X block).
    Frequent,
    /// Any other pivot (Z block).
    Other,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowSelect {
    Frequent,
    Other,
    All,
}

impl RowSelect {
    fn accepts(self, class: RowClass) -> bool {
        match self {
            RowSelect::All => true,
            RowSelect::Frequent => class == RowClass::Frequent,
            RowSelect::Other => class == RowClass::Other,
        }
    }
}

/// `pivot = constant ^ <coeffs, y>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EchelonRow {
    pub pivot: u32,
    pub coeffs: BitVec,
    pub constant: bool,
    pub class: RowClass,
}

impl EchelonRow {
    pub fn eval(&self, y: &BitVec) -> bool {
        self.constant ^ self.coeffs.dot(y)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EchelonSystem {
    free_vars: Vec<u32>,
    rows: Vec<EchelonRow>,
    inconsistent: bool,
    dropped_rows: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("the equation system is inconsistent")]
    Inconsistent,
    #[error("free-variable vector has {got} bits, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
}

impl EchelonSystem {
    /// Free variables `y_1..y_n`, ascending.
    pub fn free_vars(&self) -> &[u32] {
        &self.free_vars
    }

    /// Rows in pivot-selection order.
    pub fn rows(&self) -> &[EchelonRow] {
        &self.rows
    }

    pub fn is_inconsistent(&self) -> bool {
        self.inconsistent
    }

    /// Rows that reduced to `empty = 0` and were discarded.
    pub fn dropped_rows(&self) -> usize {
        self.dropped_rows
    }

    pub fn count(&self, class: RowClass) -> usize {
        self.rows.iter().filter(|r| r.class == class).count()
    }

    /// Evaluates the selected rows at `y`, returning `(pivot, value)` pairs.
    pub fn eval_rows(&self, y: &BitVec, which: RowSelect) -> Result<Vec<(u32, bool)>, Gf2Error> {
        self.check(y)?;
        Ok(self.rows.iter().filter(|r| which.accepts(r.class)).map(|r| (r.pivot, r.eval(y))).collect())
    }

    /// Like [`eval_rows`](Self::eval_rows) but writes into an assignment.
    pub fn eval_into(&self, y: &BitVec, which: RowSelect, a: &mut Assignment) -> Result<(), Gf2Error> {
        self.check(y)?;
        for r in self.rows.iter().filter(|r| which.accepts(r.class)) {
            a.set(r.pivot, r.eval(y));
        }
        Ok(())
    }

    fn check(&self, y: &BitVec) -> Result<(), Gf2Error> {
        if self.inconsistent {
            return Err(Gf2Error::Inconsistent);
        }
        if y.len() != self.free_vars.len() {
            return Err(Gf2Error::LengthMismatch { got: y.len(), expected: self.free_vars.len() });
        }
        Ok(())
    }

    /// The rows rewritten as equations `pivot ^ sum(y) = constant`.
    pub fn to_equations(&self) -> Vec<XorEquation> {
        self.rows
            .iter()
            .map(|r| {
                let vars = std::iter::once(r.pivot).chain(r.coeffs.iter_ones().map(|j| self.free_vars[j]));
                XorEquation::new(vars, r.constant)
            })
            .collect()
    }

    /// Augmented 0/1 matrix. The header names the free variables.
    pub fn dump<W: Write>(&self, mut out: W) -> io::Result<()> {
        let header: Vec<String> = self.free_vars.iter().map(u32::to_string).collect();
        writeln!(out, "pivot class | {} | c", header.join(" "))?;
        for r in &self.rows {
            let bits: Vec<&str> = (0..self.free_vars.len()).map(|j| if r.coeffs.get(j) { "1" } else { "0" }).collect();
            let class = match r.class {
                RowClass::Frequent => "X",
                RowClass::Other => "Z",
            };
            writeln!(out, "{} {} | {} | {}", r.pivot, class, bits.join(" "), r.constant as u8)?;
        }
        Ok(())
    }
}

/// Column-by-column Gauss-Jordan. Columns are visited in `pref` order
/// (variables missing from it come last, ascending); the first unprocessed
/// row containing the column becomes its pivot row and the column is
/// cleared from every other row.
pub fn gauss_jordan(eqs: &[XorEquation], pref: &PivotOrder) -> EchelonSystem {
    let vars: BTreeSet<u32> = eqs.iter().flat_map(|e| e.vars().iter().copied()).collect();
    let cols: Vec<u32> = vars.iter().copied().collect();
    let col_of: HashMap<u32, usize> = cols.iter().enumerate().map(|(i, &v)| (v, i)).collect();

    let mut rows: Vec<(BitVec, bool)> = eqs
        .iter()
        .map(|e| {
            let mut bits = BitVec::zeros(cols.len());
            for v in e.vars() {
                bits.set(col_of[v], true);
            }
            (bits, e.rhs())
        })
        .collect();

    let mut visit: Vec<u32> = pref.order.iter().copied().filter(|v| vars.contains(v)).collect();
    let listed: BTreeSet<u32> = visit.iter().copied().collect();
    visit.extend(vars.iter().copied().filter(|v| !listed.contains(v)));
    visit.dedup();

    let mut processed = vec![false; rows.len()];
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col) in selection order
    for var in visit {
        let c = col_of[&var];
        let Some(r) = (0..rows.len()).find(|&r| !processed[r] && rows[r].0.get(c)) else { continue };
        processed[r] = true;
        let (pivot_bits, pivot_rhs) = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != r && row.0.get(c) {
                row.0.xor_assign(&pivot_bits);
                row.1 ^= pivot_rhs;
            }
        }
        pivots.push((r, c));
    }

    let mut inconsistent = false;
    let mut dropped_rows = 0;
    for (k, (bits, rhs)) in rows.iter().enumerate() {
        if !processed[k] {
            debug_assert!(bits.is_zero());
            if *rhs {
                inconsistent = true;
            } else {
                dropped_rows += 1;
            }
        }
    }
    if inconsistent {
        return EchelonSystem { free_vars: Vec::new(), rows: Vec::new(), inconsistent, dropped_rows };
    }

    let mut is_pivot_col = vec![false; cols.len()];
    for &(_, c) in &pivots {
        is_pivot_col[c] = true;
    }
    let free_cols: Vec<usize> = (0..cols.len()).filter(|&c| !is_pivot_col[c]).collect();
    let free_vars: Vec<u32> = free_cols.iter().map(|&c| cols[c]).collect();
    let out_rows = pivots
        .iter()
        .map(|&(r, c)| {
            let (bits, rhs) = &rows[r];
            let mut coeffs = BitVec::zeros(free_cols.len());
            for (j, &fc) in free_cols.iter().enumerate() {
                if bits.get(fc) {
                    coeffs.set(j, true);
                }
            }
            let pivot = cols[c];
            let class = if pref.frequent.contains(&pivot) { RowClass::Frequent } else { RowClass::Other };
            EchelonRow { pivot, coeffs, constant: *rhs, class }
        })
        .collect();
    EchelonSystem { free_vars, rows: out_rows, inconsistent: false, dropped_rows }
}
