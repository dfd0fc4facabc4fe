//! Derandomized WalkSAT with a deterministic Novelty+ pick.
//!
//! Two tries (all-false, then all-true start), a flip budget proportional
//! to the clause count, round-robin selection among unsatisfied clauses,
//! and no random number generator anywhere.

use std::collections::BTreeSet;
use std::fmt;

use crate::formula::{Assignment, Clause, ClauseId, CnfFormula};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkConfig {
    pub tries: usize,
    /// Flips per try = `flip_multiplier * #clauses`.
    pub flip_multiplier: usize,
    /// Recheck incremental bookkeeping against a full recount after every
    /// flip (panics on mismatch).
    pub audit: bool,
    pub trace: bool,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig { tries: 2, flip_multiplier: 2, audit: false, trace: false }
    }
}

/// Mutable state of one try.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchState {
    /// Indexed by variable; slot 0 unused.
    values: Vec<bool>,
    /// Flip timestamp per variable; 0 = never flipped.
    last_flip: Vec<u64>,
    flip_counter: u64,
    clause_cursor: usize,
    /// Positions (not ids) of unsatisfied clauses.
    unsat: BTreeSet<usize>,
    true_count: Vec<u32>,
}

impl SearchState {
    pub fn value(&self, var: u32) -> bool {
        self.values[var as usize]
    }

    pub fn last_flip(&self, var: u32) -> u64 {
        self.last_flip[var as usize]
    }

    pub fn flip_counter(&self) -> u64 {
        self.flip_counter
    }

    pub fn unsat_count(&self) -> usize {
        self.unsat.len()
    }

    pub fn unsat_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.unsat.iter().copied()
    }

    pub fn assignment(&self) -> Assignment {
        Assignment::from_bools(&self.values[1..])
    }

    /// Overrides flip bookkeeping, for setting up scripted scenarios.
    pub fn set_history(&mut self, last_flip: &[(u32, u64)], flip_counter: u64) {
        for &(v, t) in last_flip {
            self.last_flip[v as usize] = t;
        }
        self.flip_counter = flip_counter;
    }
}

/// Occurrence index over a formula, shared by every try.
#[derive(Clone, Debug)]
pub struct WalkIndex<'f> {
    formula: &'f CnfFormula,
    // per variable: (clause position, literal negated)
    occurrences: Vec<Vec<(u32, bool)>>,
}

impl<'f> WalkIndex<'f> {
    pub fn new(formula: &'f CnfFormula) -> Self {
        let mut occurrences = vec![Vec::new(); formula.num_vars() as usize + 1];
        for (pos, c) in formula.clauses().iter().enumerate() {
            for l in &c.literals {
                occurrences[l.var as usize].push((pos as u32, l.negated));
            }
        }
        WalkIndex { formula, occurrences }
    }

    pub fn state_from(&self, values: &[bool]) -> SearchState {
        let n = self.formula.num_vars() as usize;
        assert_eq!(values.len(), n, "one value per variable");
        let mut full = Vec::with_capacity(n + 1);
        full.push(false);
        full.extend_from_slice(values);
        let true_count: Vec<u32> = self
            .formula
            .clauses()
            .iter()
            .map(|c| c.literals.iter().filter(|l| l.eval(full[l.var as usize])).count() as u32)
            .collect();
        let unsat = true_count.iter().enumerate().filter(|(_, &t)| t == 0).map(|(i, _)| i).collect();
        SearchState { values: full, last_flip: vec![0; n + 1], flip_counter: 0, clause_cursor: 0, unsat, true_count }
    }

    pub fn initial_state(&self, value: bool) -> SearchState {
        self.state_from(&vec![value; self.formula.num_vars() as usize])
    }

    /// makes - breaks for flipping `var`.
    pub fn score(&self, var: u32, s: &SearchState) -> i64 {
        let current = s.values[var as usize];
        let mut score = 0i64;
        for &(pos, negated) in &self.occurrences[var as usize] {
            match s.true_count[pos as usize] {
                0 => score += 1,
                1 if current != negated => score -= 1,
                _ => {}
            }
        }
        score
    }

    /// Variable of `clause` to flip next.
    pub fn novelty_pick(&self, clause: &Clause, s: &SearchState) -> u32 {
        if clause.len() == 1 {
            return clause.literals[0].var;
        }
        let mut ranked: Vec<(i64, u64, u32)> =
            clause.vars().map(|v| (-self.score(v, s), s.last_flip[v as usize], v)).collect();
        ranked.sort_unstable();
        let best = ranked[0];
        let newest = ranked.iter().map(|r| r.1).max().unwrap_or(0);
        let best_is_newest = best.1 > 0 && best.1 == newest;
        if !best_is_newest || s.flip_counter.is_multiple_of(2) {
            best.2
        } else {
            ranked[1].2
        }
    }

    pub fn flip(&self, var: u32, s: &mut SearchState) {
        let old = s.values[var as usize];
        for &(pos, negated) in &self.occurrences[var as usize] {
            let pos = pos as usize;
            if old != negated {
                s.true_count[pos] -= 1;
                if s.true_count[pos] == 0 {
                    s.unsat.insert(pos);
                }
            } else {
                if s.true_count[pos] == 0 {
                    s.unsat.remove(&pos);
                }
                s.true_count[pos] += 1;
            }
        }
        s.values[var as usize] = !old;
        s.flip_counter += 1;
        s.last_flip[var as usize] = s.flip_counter;
    }

    /// Next unsatisfied clause at or after the cursor, wrapping around.
    fn select_clause(&self, s: &mut SearchState) -> Option<usize> {
        let pos = s.unsat.range(s.clause_cursor..).next().or_else(|| s.unsat.iter().next()).copied()?;
        s.clause_cursor = pos + 1;
        Some(pos)
    }

    /// Compares the incremental counters with a from-scratch recount.
    pub fn audit(&self, s: &SearchState) -> Result<(), String> {
        let fresh = self.state_from(&s.values[1..]);
        if fresh.true_count != s.true_count {
            return Err("true-literal counts drifted".into());
        }
        if fresh.unsat != s.unsat {
            return Err("unsatisfied set drifted".into());
        }
        if let Some(v) = (1..s.last_flip.len()).find(|&v| s.last_flip[v] > s.flip_counter) {
            return Err(format!("x{v} has a flip timestamp beyond the counter"));
        }
        Ok(())
    }
}

/// Recount-based score: clauses `var` would newly satisfy minus clauses it
/// would newly falsify.
pub fn score(var: u32, s: &SearchState, f: &CnfFormula) -> i64 {
    WalkIndex::new(f).score(var, s)
}

pub fn novelty_pick(c: &Clause, s: &SearchState, f: &CnfFormula) -> u32 {
    WalkIndex::new(f).novelty_pick(c, s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub try_no: usize,
    pub flip: u64,
    pub clause: ClauseId,
    pub var: u32,
}

/// `t <try> f <flip#> c <clauseid> v <var>`
impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t {} f {} c {} v {}", self.try_no, self.flip, self.clause, self.var)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WalkStats {
    pub tries_run: usize,
    pub flips_per_try: Vec<u64>,
    pub budget_per_try: u64,
    pub found_in_try: Option<usize>,
    /// Fewest unsatisfied clauses seen over all states.
    pub best_unsat: usize,
}

impl WalkStats {
    pub fn total_flips(&self) -> u64 {
        self.flips_per_try.iter().sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkOutcome {
    pub found: bool,
    /// The model when `found`, else the state with the fewest unsatisfied
    /// clauses (earliest on ties).
    pub assignment: Assignment,
    pub stats: WalkStats,
    pub trace: Vec<TraceStep>,
}

pub fn swalksat(f: &CnfFormula, cfg: &WalkConfig) -> WalkOutcome {
    let index = WalkIndex::new(f);
    let budget = (cfg.flip_multiplier * f.num_clauses()) as u64;
    let mut stats = WalkStats { budget_per_try: budget, best_unsat: usize::MAX, ..Default::default() };
    let mut trace = Vec::new();
    let mut best: Vec<bool> = vec![false; f.num_vars() as usize + 1];

    for try_no in 1..=cfg.tries {
        stats.tries_run = try_no;
        let mut s = index.initial_state(try_no % 2 == 0);
        let mut note_best = |s: &SearchState, stats: &mut WalkStats| {
            if s.unsat.len() < stats.best_unsat {
                stats.best_unsat = s.unsat.len();
                best.clone_from(&s.values);
            }
        };
        note_best(&s, &mut stats);

        let mut flips = 0u64;
        while flips < budget && !s.unsat.is_empty() {
            let pos = index.select_clause(&mut s).expect("unsat set is nonempty");
            let clause = &f.clauses()[pos];
            let var = index.novelty_pick(clause, &s);
            index.flip(var, &mut s);
            flips += 1;
            if cfg.trace {
                trace.push(TraceStep { try_no, flip: s.flip_counter, clause: clause.id, var });
            }
            if cfg.audit {
                if let Err(e) = index.audit(&s) {
                    panic!("local search audit failed after flip {flips} of try {try_no}: {e}");
                }
            }
            note_best(&s, &mut stats);
        }
        stats.flips_per_try.push(flips);

        if s.unsat.is_empty() {
            stats.found_in_try = Some(try_no);
            return WalkOutcome { found: true, assignment: s.assignment(), stats, trace };
        }
    }

    if stats.best_unsat == usize::MAX {
        stats.best_unsat = 0;
    }
    WalkOutcome { found: false, assignment: Assignment::from_bools(&best[1..]), stats, trace }
}
