use crate::walk::WalkConfig;
use crate::xor::MergeRule;

/// Solver knobs. The defaults reproduce the reference configuration:
/// `theta = 3 * ceil(#clause / #var) + 2`, Hamming radius 3, two tries of
/// `2 * #clause` flips each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub theta_multiplier: u32,
    pub theta_offset: u32,
    /// Absolute threshold; replaces the formula-derived one when set.
    pub theta_override: Option<u32>,
    /// Which shared variables chain growth may cancel.
    pub merge_rule: MergeRule,
    pub radius: usize,
    pub flip_multiplier: usize,
    pub tries: usize,
    /// Test Hamming-ball candidates on the rayon pool. Ignored without the
    /// `parallel` feature. Results are identical either way.
    pub parallel: bool,
    /// Record the local-search flip trace.
    pub trace: bool,
    /// Recount local-search bookkeeping after every flip.
    pub audit: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            theta_multiplier: 3,
            theta_offset: 2,
            theta_override: None,
            merge_rule: MergeRule::Private,
            radius: 3,
            flip_multiplier: 2,
            tries: 2,
            parallel: cfg!(feature = "parallel"),
            trace: false,
            audit: false,
        }
    }
}

impl SolverConfig {
    /// Frequency threshold for a formula with the given counts. A variable
    /// is frequent when it occurs in strictly more clauses than this.
    pub fn theta(&self, num_clauses: usize, num_vars: u32) -> u32 {
        if let Some(t) = self.theta_override {
            return t;
        }
        let ratio = if num_vars == 0 { 0 } else { num_clauses.div_ceil(num_vars as usize) as u32 };
        self.theta_multiplier * ratio + self.theta_offset
    }

    pub fn walk(&self) -> WalkConfig {
        WalkConfig { tries: self.tries, flip_multiplier: self.flip_multiplier, audit: self.audit, trace: self.trace }
    }

    pub fn sequential(mut self) -> Self {
        self.parallel = false;
        self
    }
}
