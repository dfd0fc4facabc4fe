//! Hybrid satisfiability solver for CNF formulas that encode parity
//! constraints.
//!
//! The pipeline simplifies the input, recovers ternary XOR constraints
//! hidden in 4-clause blocks, merges them into longer parity equations,
//! runs a deterministic WalkSAT over the clauses the equations do not
//! cover, solves the equations by Gauss-Jordan elimination, and finally
//! searches a small Hamming ball of free-variable assignments around the
//! local-search answer. It is incomplete: it reports either a verified
//! model or `UNKNOWN`.
//!
//! ```
//! use paritysat::{parse_dimacs, solve, SolverConfig, Status};
//!
//! let text = "p cnf 3 2\n1 -2 0\n2 3 0\n";
//! let (f, _) = parse_dimacs(text.as_bytes()).unwrap();
//! let r = solve(&f, &SolverConfig::default());
//! assert_eq!(r.status, Status::Satisfied);
//! assert!(f.evaluate(r.model.as_ref().unwrap()).unwrap().satisfied);
//! ```

pub mod bench;
pub mod config;
pub mod driver;
pub mod formula;
pub mod generate;
pub mod gf2;
pub mod oracle;
pub mod walk;
pub mod xor;

pub use config::SolverConfig;
pub use driver::{solve, solve_many, SolveResult, SolveStats, Status, UnknownReason};
pub use formula::{parse_dimacs, write_dimacs, write_solution, Assignment, CnfFormula, Literal};
pub use generate::{generate_parity, GeneratedInstance};
