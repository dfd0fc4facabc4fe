use std::time::{Duration, Instant};

use super::{hamming_ball, CandidateTester, YCandidate};
use crate::config::SolverConfig;
use crate::formula::{evaluate, reconstruct, simplify, Assignment, CnfFormula, ReconstructionMap, UnitPropagator};
use crate::gf2::{gauss_jordan, BitVec, EchelonSystem, PivotOrder, RowClass, RowSelect};
use crate::walk::{swalksat, TraceStep};
use crate::xor::extract;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Satisfied,
    Unknown,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Satisfied => "SATISFIABLE",
            Status::Unknown => "UNKNOWN",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnknownReason {
    /// Simplification derived the empty clause.
    SimplifyConflict,
    /// The recovered parity equations are inconsistent.
    XorInconsistent,
    /// No candidate in the Hamming ball produced a verified model.
    BallExhausted,
}

impl UnknownReason {
    pub fn code(self) -> &'static str {
        match self {
            UnknownReason::SimplifyConflict => "simplify-conflict",
            UnknownReason::XorInconsistent => "xor-inconsistent",
            UnknownReason::BallExhausted => "ball-exhausted",
        }
    }
}

/// Deterministic counters; identical inputs and config give identical
/// stats.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub num_vars: u32,
    pub num_clauses: usize,
    pub simplified_vars: u32,
    pub simplified_clauses: usize,
    pub fixed_vars: usize,
    pub equivalences: usize,
    pub theta: u32,
    pub frequent_vars: usize,
    pub ternaries: usize,
    pub contradictory_triples: usize,
    pub equations: usize,
    pub equation_vars: usize,
    pub structured_clauses: usize,
    pub residual_clauses: usize,
    pub residual_vars: u32,
    pub free_vars: usize,
    pub x_rows: usize,
    pub z_rows: usize,
    pub dropped_rows: usize,
    pub walk_found: bool,
    pub walk_tries: usize,
    pub walk_flips: u64,
    pub walk_best_unsat: usize,
    /// The ball was centred on a best-effort (not satisfying) walk result.
    pub walk_fallback: bool,
    pub candidates_tested: u64,
    pub hit_distance: Option<usize>,
    /// Candidates the residual check accepted but whose assembled model
    /// failed the final check against the input formula.
    pub verify_rejections: u64,
}

impl SolveStats {
    pub fn to_kv(&self) -> Vec<(&'static str, String)> {
        vec![
            ("vars", self.num_vars.to_string()),
            ("clauses", self.num_clauses.to_string()),
            ("simplified_vars", self.simplified_vars.to_string()),
            ("simplified_clauses", self.simplified_clauses.to_string()),
            ("fixed_vars", self.fixed_vars.to_string()),
            ("equivalences", self.equivalences.to_string()),
            ("theta", self.theta.to_string()),
            ("frequent_vars", self.frequent_vars.to_string()),
            ("ternaries", self.ternaries.to_string()),
            ("contradictory_triples", self.contradictory_triples.to_string()),
            ("equations", self.equations.to_string()),
            ("equation_vars", self.equation_vars.to_string()),
            ("structured_clauses", self.structured_clauses.to_string()),
            ("residual_clauses", self.residual_clauses.to_string()),
            ("residual_vars", self.residual_vars.to_string()),
            ("free_vars", self.free_vars.to_string()),
            ("x_rows", self.x_rows.to_string()),
            ("z_rows", self.z_rows.to_string()),
            ("dropped_rows", self.dropped_rows.to_string()),
            ("walk_found", self.walk_found.to_string()),
            ("walk_tries", self.walk_tries.to_string()),
            ("walk_flips", self.walk_flips.to_string()),
            ("walk_best_unsat", self.walk_best_unsat.to_string()),
            ("walk_fallback", self.walk_fallback.to_string()),
            ("candidates_tested", self.candidates_tested.to_string()),
            ("hit_distance", self.hit_distance.map_or_else(|| "-".to_string(), |d| d.to_string())),
            ("verify_rejections", self.verify_rejections.to_string()),
        ]
    }
}

/// Wall-clock time per pipeline phase.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PhaseTimings {
    pub simplify: Duration,
    pub extract: Duration,
    pub walk: Duration,
    pub eliminate: Duration,
    pub repair: Duration,
    pub total: Duration,
}

impl PhaseTimings {
    pub fn to_kv(&self) -> Vec<(&'static str, String)> {
        let secs = |d: Duration| format!("{:.6}", d.as_secs_f64());
        vec![
            ("time_simplify", secs(self.simplify)),
            ("time_extract", secs(self.extract)),
            ("time_walk", secs(self.walk)),
            ("time_eliminate", secs(self.eliminate)),
            ("time_repair", secs(self.repair)),
            ("time_total", secs(self.total)),
        ]
    }
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub status: Status,
    /// Total over the input variables; present iff satisfied, and always
    /// checked against the input formula before being returned.
    pub model: Option<Assignment>,
    pub reason: Option<UnknownReason>,
    pub stats: SolveStats,
    pub timings: PhaseTimings,
    pub trace: Vec<TraceStep>,
}

impl SolveResult {
    pub fn is_satisfied(&self) -> bool {
        self.status == Status::Satisfied
    }

    /// Flat `key=value` report including timings.
    pub fn report(&self) -> Vec<(&'static str, String)> {
        let mut kv = vec![("status", self.status.as_str().to_string())];
        kv.push(("reason", self.reason.map_or("-", UnknownReason::code).to_string()));
        kv.extend(self.stats.to_kv());
        kv.extend(self.timings.to_kv());
        kv
    }
}

enum Outcome {
    Rejected,
    VerifyFailed,
    Hit(Assignment),
}

struct Repair<'a> {
    original: &'a CnfFormula,
    simplified: &'a CnfFormula,
    map: &'a ReconstructionMap,
    sys: &'a EchelonSystem,
    tester: CandidateTester<'a>,
    full: UnitPropagator<'a>,
}

impl Repair<'_> {
    fn outcome(&self, y: &YCandidate) -> Outcome {
        let (accepted, mut a) = self.tester.test(y);
        if !accepted {
            return Outcome::Rejected;
        }
        self.sys.eval_into(&y.bits, RowSelect::Frequent, &mut a).expect("consistent system");
        // Variables summed out of the merged equations are recovered from
        // their ternary clauses; anything still open is a don't-care.
        if self.full.propagate(&mut a) {
            return Outcome::VerifyFailed;
        }
        a.complete_with(false);
        debug_assert_eq!(a.num_vars(), self.simplified.num_vars());
        let Ok(model) = reconstruct(&a, self.map) else { return Outcome::VerifyFailed };
        match evaluate(self.original, &model) {
            Ok(r) if r.satisfied => Outcome::Hit(model),
            _ => Outcome::VerifyFailed,
        }
    }
}

/// Runs the full pipeline on `f`.
pub fn solve(f: &CnfFormula, cfg: &SolverConfig) -> SolveResult {
    let start = Instant::now();
    let mut timings = PhaseTimings::default();
    let mut stats = SolveStats { num_vars: f.num_vars(), num_clauses: f.num_clauses(), ..Default::default() };
    let unknown = |reason, stats, mut timings: PhaseTimings, trace| {
        timings.total = start.elapsed();
        SolveResult { status: Status::Unknown, model: None, reason: Some(reason), stats, timings, trace }
    };

    let t = Instant::now();
    let simplified = simplify(f);
    timings.simplify = t.elapsed();
    if simplified.conflict {
        return unknown(UnknownReason::SimplifyConflict, stats, timings, Vec::new());
    }
    let g = &simplified.formula;
    stats.simplified_vars = g.active_vars();
    stats.simplified_clauses = g.num_clauses();
    stats.fixed_vars = simplified.map.fixed_count();
    stats.equivalences = simplified.map.equiv_count();

    let t = Instant::now();
    stats.theta = cfg.theta(g.num_clauses(), g.active_vars());
    let ex = extract(g, stats.theta, cfg.merge_rule);
    timings.extract = t.elapsed();
    stats.frequent_vars = ex.frequent_vars.len();
    stats.ternaries = ex.ternaries.len();
    stats.contradictory_triples = ex.contradictory.len();
    stats.equations = ex.chains.len();
    stats.equation_vars = ex.equation_vars();
    stats.structured_clauses = ex.structured_clause_ids.len();
    stats.residual_clauses = ex.residual.num_clauses();
    stats.residual_vars = ex.residual.active_vars();

    let t = Instant::now();
    let walk = swalksat(&ex.residual, &cfg.walk());
    timings.walk = t.elapsed();
    stats.walk_found = walk.found;
    stats.walk_fallback = !walk.found;
    stats.walk_tries = walk.stats.tries_run;
    stats.walk_flips = walk.stats.total_flips();
    stats.walk_best_unsat = walk.stats.best_unsat;

    let t = Instant::now();
    let pref = PivotOrder::by_occurrence(g, &ex.frequent_vars);
    let sys = gauss_jordan(&ex.equations(), &pref);
    timings.eliminate = t.elapsed();
    if sys.is_inconsistent() {
        return unknown(UnknownReason::XorInconsistent, stats, timings, walk.trace);
    }
    stats.free_vars = sys.free_vars().len();
    stats.x_rows = sys.count(RowClass::Frequent);
    stats.z_rows = sys.count(RowClass::Other);
    stats.dropped_rows = sys.dropped_rows();

    // Y': local-search values of the free variables; those the residual
    // never mentions have no value there and start at false.
    let center: Vec<bool> =
        sys.free_vars().iter().map(|&v| ex.residual.occ(v) > 0 && walk.assignment.get(v) == Some(true)).collect();

    let t = Instant::now();
    let repair = Repair {
        original: f,
        simplified: g,
        map: &simplified.map,
        sys: &sys,
        tester: CandidateTester::new(&sys, &ex.residual).with_fallback(&walk.assignment),
        full: UnitPropagator::new(g),
    };
    let hit = search_ball(&repair, hamming_ball(&BitVec::from_bools(&center), cfg.radius), cfg.parallel, &mut stats);
    timings.repair = t.elapsed();

    match hit {
        Some((distance, model)) => {
            stats.hit_distance = Some(distance);
            timings.total = start.elapsed();
            SolveResult {
                status: Status::Satisfied,
                model: Some(model),
                reason: None,
                stats,
                timings,
                trace: walk.trace,
            }
        }
        None => unknown(UnknownReason::BallExhausted, stats, timings, walk.trace),
    }
}

/// Walks the ball in canonical order and returns the first verified hit.
/// The parallel path tests growing chunks concurrently but scans each chunk
/// in order, so the hit and the counters match the sequential run.
fn search_ball(
    repair: &Repair<'_>,
    mut ball: impl Iterator<Item = YCandidate>,
    parallel: bool,
    stats: &mut SolveStats,
) -> Option<(usize, Assignment)> {
    if !parallel || !cfg!(feature = "parallel") {
        for y in ball {
            stats.candidates_tested += 1;
            match repair.outcome(&y) {
                Outcome::Hit(m) => return Some((y.distance, m)),
                Outcome::VerifyFailed => stats.verify_rejections += 1,
                Outcome::Rejected => {}
            }
        }
        return None;
    }

    let mut chunk_len = 64usize;
    loop {
        let chunk: Vec<YCandidate> = ball.by_ref().take(chunk_len).collect();
        if chunk.is_empty() {
            return None;
        }
        let outcomes = par_outcomes(repair, &chunk);
        for (y, outcome) in chunk.iter().zip(outcomes) {
            stats.candidates_tested += 1;
            match outcome {
                Outcome::Hit(m) => return Some((y.distance, m)),
                Outcome::VerifyFailed => stats.verify_rejections += 1,
                Outcome::Rejected => {}
            }
        }
        chunk_len = (chunk_len * 2).min(4096);
    }
}

#[cfg(feature = "parallel")]
fn par_outcomes(repair: &Repair<'_>, chunk: &[YCandidate]) -> Vec<Outcome> {
    use rayon::prelude::*;
    chunk.par_iter().map(|y| repair.outcome(y)).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_outcomes(repair: &Repair<'_>, chunk: &[YCandidate]) -> Vec<Outcome> {
    chunk.iter().map(|y| repair.outcome(y)).collect()
}

/// Solves independent formulas, on the rayon pool when `cfg.parallel` is
/// set. Each solve itself runs its candidate loop sequentially here so the
/// pool is not oversubscribed.
pub fn solve_many(formulas: &[CnfFormula], cfg: &SolverConfig) -> Vec<SolveResult> {
    let inner = cfg.clone().sequential();
    #[cfg(feature = "parallel")]
    if cfg.parallel {
        use rayon::prelude::*;
        return formulas.par_iter().map(|f| solve(f, &inner)).collect();
    }
    formulas.iter().map(|f| solve(f, &inner)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(nv: u32, cls: &[&[i64]]) -> CnfFormula {
        CnfFormula::from_dimacs_clauses(nv, &cls.iter().map(|c| c.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn empty_formula_is_all_false() {
        let r = solve(&f(3, &[]), &SolverConfig::default());
        assert!(r.is_satisfied());
        assert_eq!(r.model.unwrap(), Assignment::filled(3, false));
        assert_eq!(r.stats.hit_distance, Some(0));
    }

    #[test]
    fn simplify_conflict_is_unknown() {
        let r = solve(&f(1, &[&[1], &[-1]]), &SolverConfig::default());
        assert_eq!(r.status, Status::Unknown);
        assert_eq!(r.reason, Some(UnknownReason::SimplifyConflict));
    }

    #[test]
    fn no_ternaries_is_pure_local_search() {
        let g = f(4, &[&[1, 2], &[-1, -2], &[3, 4], &[-2, 3], &[-3, -4, 1]]);
        let r = solve(&g, &SolverConfig::default());
        assert_eq!(r.stats.ternaries, 0);
        assert_eq!(r.stats.free_vars, 0);
        assert!(r.is_satisfied(), "{:?}", r.report());
        assert!(evaluate(&g, r.model.as_ref().unwrap()).unwrap().satisfied);
    }

    #[test]
    fn inconsistent_parity_is_unknown() {
        // (1,2,3)=1 + (1,2,4)=0 says x3^x4=1; (3,5,6)=0 + (4,5,6)=0 says x3^x4=0
        let mut cls: Vec<Vec<i64>> = vec![vec![1, -2, -3], vec![-1, 2, -3], vec![-1, -2, 3], vec![1, 2, 3]];
        for (a, b, c) in [(1, 2, 4), (3, 5, 6), (4, 5, 6)] {
            cls.extend([vec![-a, -b, -c], vec![-a, b, c], vec![a, -b, c], vec![a, b, -c]]);
        }
        let g = CnfFormula::from_dimacs_clauses(6, &cls).unwrap();
        let r = solve(&g, &SolverConfig::default());
        assert_eq!(r.stats.ternaries, 4);
        assert_eq!(r.status, Status::Unknown);
        assert_eq!(r.reason, Some(UnknownReason::XorInconsistent));
    }
}
