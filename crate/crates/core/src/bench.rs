//! Batch runs over DIMACS files with per-phase timings.

use std::fmt::Write as _;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::time::Duration;

use crate::config::SolverConfig;
use crate::driver::{solve, PhaseTimings, SolveResult};
use crate::formula::parse_dimacs;

#[derive(Clone, Debug)]
pub struct BenchRow {
    pub name: String,
    pub path: PathBuf,
    pub vars: u32,
    pub clauses: usize,
    /// `SATISFIABLE`, `UNKNOWN`, or `ERROR`.
    pub status: String,
    /// Timings of the fastest repetition.
    pub timings: PhaseTimings,
    pub ternaries: usize,
    pub equations: usize,
    pub free_vars: usize,
    pub hit_distance: Option<usize>,
    pub error: Option<String>,
}

impl BenchRow {
    fn failed(path: &Path, error: String) -> Self {
        BenchRow {
            name: file_name(path),
            path: path.to_path_buf(),
            vars: 0,
            clauses: 0,
            status: "ERROR".into(),
            timings: PhaseTimings::default(),
            ternaries: 0,
            equations: 0,
            free_vars: 0,
            hit_distance: None,
            error: Some(error),
        }
    }

    fn from_result(path: &Path, best: &SolveResult) -> Self {
        let s = &best.stats;
        BenchRow {
            name: file_name(path),
            path: path.to_path_buf(),
            vars: s.num_vars,
            clauses: s.num_clauses,
            status: best.status.as_str().into(),
            timings: best.timings,
            ternaries: s.ternaries,
            equations: s.equations,
            free_vars: s.free_vars,
            hit_distance: s.hit_distance,
            error: None,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub reps: usize,
}

fn file_name(p: &Path) -> String {
    p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| p.display().to_string())
}

fn secs(d: Duration) -> String {
    format!("{:.4}", d.as_secs_f64())
}

/// Solves each file `reps` times (at least once) and keeps the fastest
/// run. A file that cannot be read or parsed yields an `ERROR` row; the
/// remaining files still run.
pub fn run_bench<P: AsRef<Path>>(files: &[P], cfg: &SolverConfig, reps: usize) -> BenchReport {
    let reps = reps.max(1);
    let rows = files
        .iter()
        .map(|p| {
            let path = p.as_ref();
            let parsed = File::open(path)
                .map_err(|e| e.to_string())
                .and_then(|fh| parse_dimacs(BufReader::new(fh)).map_err(|e| e.to_string()));
            let formula = match parsed {
                Ok((f, _)) => f,
                Err(e) => return BenchRow::failed(path, e),
            };
            let best = (0..reps).map(|_| solve(&formula, cfg)).min_by_key(|r| r.timings.total).expect("reps >= 1");
            BenchRow::from_result(path, &best)
        })
        .collect();
    BenchReport { rows, reps }
}

impl BenchReport {
    /// Aligned table, one line per file.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let name_w = self.rows.iter().map(|r| r.name.len()).max().unwrap_or(4).max(4);
        let _ = writeln!(
            out,
            "{:<name_w$} {:>6} {:>7} {:<11} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9} {:>5} {:>5} {:>5} {:>4}",
            "name",
            "vars",
            "clauses",
            "status",
            "total",
            "simplify",
            "extract",
            "walk",
            "elim",
            "repair",
            "tern",
            "eqs",
            "free",
            "hit"
        );
        for r in &self.rows {
            let t = &r.timings;
            let hit = r.hit_distance.map_or("-".to_string(), |d| d.to_string());
            let _ = writeln!(
                out,
                "{:<name_w$} {:>6} {:>7} {:<11} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9} {:>5} {:>5} {:>5} {:>4}",
                r.name,
                r.vars,
                r.clauses,
                r.status,
                secs(t.total),
                secs(t.simplify),
                secs(t.extract),
                secs(t.walk),
                secs(t.eliminate),
                secs(t.repair),
                r.ternaries,
                r.equations,
                r.free_vars,
                hit
            );
            if let Some(e) = &r.error {
                let _ = writeln!(out, "  error: {e}");
            }
        }
        out
    }

    /// One `key=value` line per file.
    pub fn to_records(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let mut fields = vec![
                ("name", r.name.clone()),
                ("vars", r.vars.to_string()),
                ("clauses", r.clauses.to_string()),
                ("status", r.status.clone()),
                ("reps", self.reps.to_string()),
                ("ternaries", r.ternaries.to_string()),
                ("equations", r.equations.to_string()),
                ("free_vars", r.free_vars.to_string()),
                ("hit_distance", r.hit_distance.map_or("-".into(), |d| d.to_string())),
            ];
            fields.extend(r.timings.to_kv());
            if let Some(e) = &r.error {
                fields.push(("error", format!("{e:?}")));
            }
            let line: Vec<String> = fields.into_iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }
}
