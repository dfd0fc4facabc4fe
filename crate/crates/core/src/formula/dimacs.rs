use std::io::{self, BufRead, Write};

use thiserror::Error;

use super::{Assignment, Clause, ClauseBuild, ClauseId, CnfFormula, Literal};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: malformed header `{text}` (expected `p cnf <vars> <clauses>`)")]
    MalformedHeader { line: usize, text: String },
    #[error("line {line}: clause data before the `p cnf` header")]
    MissingHeader { line: usize },
    #[error("line {line}: no `p cnf` header found")]
    NoHeader { line: usize },
    #[error("line {line}: invalid token `{token}`")]
    InvalidToken { line: usize, token: String },
    #[error("line {line}: literal {lit} exceeds the declared {num_vars} variables")]
    VarOutOfRange { line: usize, lit: i64, num_vars: u32 },
    #[error("line {line}: empty clause (the formula is trivially unsatisfiable)")]
    EmptyClause { line: usize },
    #[error("line {line}: final clause is not terminated by 0")]
    Unterminated { line: usize },
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

/// Counters collected while reading a DIMACS file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParseStats {
    pub declared_vars: u32,
    pub declared_clauses: usize,
    /// Clauses present in the input, including filtered ones.
    pub clauses_read: usize,
    pub tautologies: usize,
    pub duplicate_literals: usize,
    /// Set when `clauses_read` differs from the header's clause count.
    pub clause_count_mismatch: bool,
}

impl ParseStats {
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.clause_count_mismatch {
            w.push(format!("header declares {} clauses but {} were read", self.declared_clauses, self.clauses_read));
        }
        if self.tautologies > 0 {
            w.push(format!("{} tautological clauses dropped", self.tautologies));
        }
        if self.duplicate_literals > 0 {
            w.push(format!("{} duplicate literals removed", self.duplicate_literals));
        }
        w
    }
}

/// Reads a DIMACS CNF stream. Clause ids are the 0-based positions of the
/// clauses in the input, so filtered tautologies leave gaps.
pub fn parse_dimacs<R: BufRead>(reader: R) -> Result<(CnfFormula, ParseStats), ParseError> {
    let mut stats = ParseStats::default();
    let mut header: Option<u32> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut current_start = 0usize;
    let mut line_no = 0usize;

    for line in reader.lines() {
        line_no += 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        // SATLIB files end with a `%` line followed by a stray `0`.
        if trimmed.starts_with('%') {
            break;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(ParseError::MalformedHeader { line: line_no, text: trimmed.to_string() });
            }
            let parts: Vec<&str> = trimmed.split_whitespace().collect();
            let parsed = match parts.as_slice() {
                ["p", "cnf", nv, nc] => nv.parse::<u32>().ok().zip(nc.parse::<usize>().ok()),
                _ => None,
            };
            let (nv, nc) =
                parsed.ok_or_else(|| ParseError::MalformedHeader { line: line_no, text: trimmed.to_string() })?;
            stats.declared_vars = nv;
            stats.declared_clauses = nc;
            header = Some(nv);
            continue;
        }
        let num_vars = header.ok_or(ParseError::MissingHeader { line: line_no })?;
        for token in trimmed.split_whitespace() {
            let lit: i64 =
                token.parse().map_err(|_| ParseError::InvalidToken { line: line_no, token: token.to_string() })?;
            if lit == 0 {
                if current.is_empty() {
                    return Err(ParseError::EmptyClause { line: line_no });
                }
                let id = stats.clauses_read as ClauseId;
                stats.clauses_read += 1;
                match Clause::build(id, current.drain(..)) {
                    ClauseBuild::Clause { clause, duplicates_removed } => {
                        stats.duplicate_literals += duplicates_removed;
                        clauses.push(clause);
                    }
                    ClauseBuild::Tautology => stats.tautologies += 1,
                    ClauseBuild::Empty => unreachable!("checked above"),
                }
                continue;
            }
            if lit.unsigned_abs() > num_vars as u64 {
                return Err(ParseError::VarOutOfRange { line: line_no, lit, num_vars });
            }
            if current.is_empty() {
                current_start = line_no;
            }
            current.push(Literal::from_dimacs(lit));
        }
    }

    let num_vars = header.ok_or(ParseError::NoHeader { line: line_no })?;
    if !current.is_empty() {
        return Err(ParseError::Unterminated { line: current_start });
    }
    stats.clause_count_mismatch = stats.clauses_read != stats.declared_clauses;
    let formula = CnfFormula::new(num_vars, clauses).expect("literal bounds checked while parsing");
    Ok((formula, stats))
}

pub fn write_dimacs<W: Write>(f: &CnfFormula, mut out: W) -> io::Result<()> {
    writeln!(out, "p cnf {} {}", f.num_vars(), f.num_clauses())?;
    for c in f.clauses() {
        for l in &c.literals {
            write!(out, "{} ", l.to_dimacs())?;
        }
        writeln!(out, "0")?;
    }
    Ok(())
}

/// SAT-competition style answer: `s SATISFIABLE` plus `v` lines for a model,
/// or `s UNKNOWN`.
pub fn write_solution<W: Write>(model: Option<&Assignment>, mut out: W) -> io::Result<()> {
    let Some(model) = model else {
        return writeln!(out, "s UNKNOWN");
    };
    writeln!(out, "s SATISFIABLE")?;
    let lits = model.to_dimacs();
    for chunk in lits.chunks(10) {
        let line: Vec<String> = chunk.iter().map(i64::to_string).collect();
        writeln!(out, "v {}", line.join(" "))?;
    }
    writeln!(out, "v 0")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<(CnfFormula, ParseStats), ParseError> {
        parse_dimacs(s.as_bytes())
    }

    #[test]
    fn basic() {
        let (f, stats) = parse("p cnf 3 2\n1 -2 0\n2 3 0\n").unwrap();
        assert_eq!(f.num_vars(), 3);
        assert_eq!(f.num_clauses(), 2);
        assert_eq!(f.clauses()[0].literals, vec![Literal::pos(1), Literal::neg(2)]);
        assert_eq!(f.clauses()[1].literals, vec![Literal::pos(2), Literal::pos(3)]);
        assert!(!stats.clause_count_mismatch);
    }

    #[test]
    fn tautology_counted() {
        let (f, stats) = parse("c comment\np cnf 1 1\n1 -1 0\n").unwrap();
        assert_eq!(f.num_vars(), 1);
        assert_eq!(f.num_clauses(), 0);
        assert_eq!(stats.tautologies, 1);
    }

    #[test]
    fn out_of_range() {
        let err = parse("p cnf 2 1\n3 0\n").unwrap_err();
        assert!(matches!(err, ParseError::VarOutOfRange { line: 2, lit: 3, num_vars: 2 }), "{err}");
    }

    #[test]
    fn clauses_span_lines_and_mismatch_tolerated() {
        let (f, stats) = parse("p cnf 4 5\n1 2\n -3 0 4\n0\n").unwrap();
        assert_eq!(f.num_clauses(), 2);
        assert_eq!(f.clauses()[0].len(), 3);
        assert!(stats.clause_count_mismatch);
        assert_eq!(stats.warnings().len(), 1);
    }

    #[test]
    fn duplicates_removed() {
        let (f, stats) = parse("p cnf 2 1\n1 1 -2 0\n").unwrap();
        assert_eq!(f.clauses()[0].len(), 2);
        assert_eq!(stats.duplicate_literals, 1);
    }

    #[test]
    fn errors_name_lines() {
        assert!(matches!(parse("p cnf x 1\n"), Err(ParseError::MalformedHeader { line: 1, .. })));
        assert!(matches!(parse("p dnf 1 1\n"), Err(ParseError::MalformedHeader { line: 1, .. })));
        assert!(matches!(parse("1 0\np cnf 1 1\n"), Err(ParseError::MissingHeader { line: 1 })));
        assert!(matches!(parse("p cnf 2 1\n1 a 0\n"), Err(ParseError::InvalidToken { line: 2, .. })));
        assert!(matches!(parse("p cnf 2 1\n\n1 2\n"), Err(ParseError::Unterminated { line: 3 })));
        assert!(matches!(parse("c nothing\n"), Err(ParseError::NoHeader { .. })));
        assert!(matches!(parse("p cnf 2 1\n0\n"), Err(ParseError::EmptyClause { line: 2 })));
    }

    #[test]
    fn satlib_trailer() {
        let (f, _) = parse("p cnf 2 1\n1 2 0\n%\n0\n").unwrap();
        assert_eq!(f.num_clauses(), 1);
    }

    #[test]
    fn solution_lines() {
        let mut buf = Vec::new();
        write_solution(Some(&Assignment::from_bools(&[true, false])), &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "s SATISFIABLE\nv 1 -2\nv 0\n");
        let mut buf = Vec::new();
        write_solution(None, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "s UNKNOWN\n");
    }
}
