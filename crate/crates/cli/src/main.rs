use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use paritysat::bench::run_bench;
use paritysat::xor::MergeRule;
use paritysat::{generate_parity, parse_dimacs, solve, write_solution, SolverConfig, Status};

#[derive(Parser)]
#[command(
    name = "paritysat",
    version,
    about = "Hybrid local-search / GF(2) solver for parity CNF"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one DIMACS file. Exit status 10 when satisfied, 0 when unknown.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        tuning: Tuning,
        /// Print the local-search flip trace to stderr.
        #[arg(long)]
        trace: bool,
        /// Write `key=value` statistics to this file.
        #[arg(long, value_name = "FILE")]
        stats: Option<PathBuf>,
    },
    /// Solve several files and report per-phase timings.
    Bench {
        files: Vec<PathBuf>,
        #[command(flatten)]
        tuning: Tuning,
        /// Repetitions per file; the fastest is reported.
        #[arg(long, default_value_t = 1)]
        reps: usize,
        /// Also write `key=value` records to this file.
        #[arg(long, value_name = "FILE")]
        report: Option<PathBuf>,
    },
    /// Write a planted-solution parity instance.
    Gen {
        #[arg(long)]
        bits: u32,
        #[arg(long)]
        samples: u32,
        #[arg(long, default_value_t = 0)]
        noise: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct Tuning {
    /// Hamming radius of the repair search.
    #[arg(long, default_value_t = 3)]
    radius: usize,
    /// Absolute frequency threshold.
    #[arg(long, conflicts_with_all = ["theta_mult", "theta_off"])]
    theta: Option<u32>,
    #[arg(long, default_value_t = 3)]
    theta_mult: u32,
    #[arg(long, default_value_t = 2)]
    theta_off: u32,
    /// Flip budget per try, as a multiple of the residual clause count.
    #[arg(long, default_value_t = 2)]
    flip_mult: usize,
    /// Which shared variables equation chains may be joined across.
    #[arg(long, value_enum, default_value_t = Merge::Private)]
    merge: Merge,
}

#[derive(Clone, Copy, ValueEnum)]
enum Merge {
    /// Only variables that occur in the two joined ternaries and nowhere else.
    Private,
    /// Any single shared variable.
    Any,
}

impl Tuning {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            radius: self.radius,
            theta_override: self.theta,
            theta_multiplier: self.theta_mult,
            theta_offset: self.theta_off,
            flip_multiplier: self.flip_mult,
            merge_rule: match self.merge {
                Merge::Private => MergeRule::Private,
                Merge::Any => MergeRule::AnyShared,
            },
            ..SolverConfig::default()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Solve {
            file,
            tuning,
            trace,
            stats,
        } => {
            let cfg = SolverConfig {
                trace,
                ..tuning.config()
            };
            cmd_solve(&file, &cfg, stats.as_deref())
        }
        Command::Bench {
            files,
            tuning,
            reps,
            report,
        } => {
            let r = run_bench(&files, &tuning.config(), reps);
            print!("{}", r.to_table());
            if let Some(path) = report {
                std::fs::write(&path, r.to_records())
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(0)
        }
        Command::Gen {
            bits,
            samples,
            noise,
            seed,
            out,
        } => {
            let g = generate_parity(bits, samples, noise, seed)?;
            std::fs::write(&out, g.to_dimacs())
                .with_context(|| format!("writing {}", out.display()))?;
            eprintln!(
                "c wrote {} ({} vars, {} clauses, {} ternaries)",
                out.display(),
                g.formula.num_vars(),
                g.formula.num_clauses(),
                g.ternaries
            );
            Ok(0)
        }
    }
}

fn cmd_solve(file: &Path, cfg: &SolverConfig, stats_out: Option<&Path>) -> Result<u8> {
    let fh = File::open(file).with_context(|| format!("opening {}", file.display()))?;
    let (formula, parse) =
        parse_dimacs(BufReader::new(fh)).with_context(|| format!("parsing {}", file.display()))?;
    for w in parse.warnings() {
        eprintln!("c warning: {w}");
    }
    let result = solve(&formula, cfg);

    if cfg.trace {
        let mut err = BufWriter::new(io::stderr().lock());
        for step in &result.trace {
            writeln!(err, "{step}")?;
        }
    }
    if let Some(path) = stats_out {
        let body: String = result
            .report()
            .iter()
            .map(|(k, v)| format!("{k}={v}\n"))
            .collect();
        std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
    }

    if let Some(reason) = result.reason {
        eprintln!("c unknown: {}", reason.code());
    }
    let mut out = BufWriter::new(io::stdout().lock());
    write_solution(result.model.as_ref(), &mut out)?;
    out.flush()?;
    Ok(match result.status {
        Status::Satisfied => 10,
        Status::Unknown => 0,
    })
}
