//! Text formats.
//!
//! Native instance format (one byte-stable canonical form per CSP):
//!
//! ```text
//! c optional comments
//! p csp <n_vars> <d> <k> <m>
//! <var>:<value> ... (k tokens per line, variables ascending)
//! ```
//!
//! DIMACS CNF interchange is supported for d = 2 with the convention that the
//! literal `x != 0` (satisfied when x is 1) maps to the positive DIMACS
//! literal `x`, and `x != 1` to `-x`.

use std::fmt::Write as _;

use crate::csp::{Constraint, Csp, Literal};
use crate::error::{Error, Result};

/// Canonical text form; `parse(serialize(f)) == f` for every valid CSP.
pub fn serialize(csp: &Csp) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "p csp {} {} {} {}",
        csp.n_vars(),
        csp.d(),
        csp.k(),
        csp.num_constraints()
    )
    .expect("string write");
    for c in csp.constraints() {
        let line: Vec<String> = c
            .literals()
            .iter()
            .map(|l| format!("{}:{}", l.var, l.value))
            .collect();
        writeln!(out, "{}", line.join(" ")).expect("string write");
    }
    out
}

fn is_comment(line: &str) -> bool {
    line == "c" || line.starts_with("c ")
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn parse(text: &str) -> Result<Csp> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (mut n_vars, mut d, mut k, mut m) = (0usize, 0u32, 0usize, 0usize);
    let mut header_line = 0;
    for (no, line) in lines.by_ref() {
        if is_comment(line) {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 6 || fields[0] != "p" || fields[1] != "csp" {
            return Err(parse_err(no, "expected header `p csp <n_vars> <d> <k> <m>`"));
        }
        n_vars = fields[2]
            .parse()
            .map_err(|_| parse_err(no, "bad n_vars in header"))?;
        d = fields[3]
            .parse()
            .map_err(|_| parse_err(no, "bad d in header"))?;
        k = fields[4]
            .parse()
            .map_err(|_| parse_err(no, "bad k in header"))?;
        m = fields[5]
            .parse()
            .map_err(|_| parse_err(no, "bad m in header"))?;
        header_line = no;
        break;
    }
    if header_line == 0 {
        return Err(parse_err(1, "missing header"));
    }

    let mut constraints: Vec<Constraint> = Vec::with_capacity(m);
    let mut last_line = header_line;
    while constraints.len() < m {
        let Some((no, line)) = lines.next() else {
            return Err(parse_err(
                last_line,
                format!("unexpected end of file: {} of {m} constraints read", constraints.len()),
            ));
        };
        last_line = no;
        if is_comment(line) {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != k {
            return Err(parse_err(
                no,
                format!("expected {k} literals, found {}", tokens.len()),
            ));
        }
        let mut literals = Vec::with_capacity(k);
        for tok in tokens {
            let Some((vs, bs)) = tok.split_once(':') else {
                return Err(parse_err(no, format!("malformed literal `{tok}`")));
            };
            let var: u32 = vs
                .parse()
                .map_err(|_| parse_err(no, format!("bad variable in `{tok}`")))?;
            if var == 0 {
                return Err(parse_err(no, "variable identifiers are 1-based"));
            }
            let value: u32 = bs
                .parse()
                .map_err(|_| parse_err(no, format!("bad value in `{tok}`")))?;
            if value >= d {
                return Err(parse_err(
                    no,
                    format!("value {value} outside domain 0..{d}"),
                ));
            }
            literals.push(Literal::new(var, value));
        }
        for w in literals.windows(2) {
            if w[0].var == w[1].var {
                return Err(parse_err(no, format!("duplicate variable x{}", w[0].var)));
            }
            if w[0].var > w[1].var {
                return Err(parse_err(no, "variables must be ascending within a line"));
            }
        }
        constraints.push(Constraint::new(literals)?);
    }
    for (no, line) in lines {
        if !is_comment(line) && !line.trim().is_empty() {
            return Err(parse_err(no, "content after the last constraint"));
        }
    }

    let csp = Csp::new(k, d, constraints)?;
    if csp.n_vars() != n_vars {
        return Err(parse_err(
            header_line,
            format!(
                "header declares {n_vars} variables but the constraints mention {}",
                csp.n_vars()
            ),
        ));
    }
    Ok(csp)
}

/// DIMACS CNF text for a (k,2)-CSP, clauses in canonical order.
pub fn to_dimacs(csp: &Csp) -> Result<String> {
    if csp.d() != 2 {
        return Err(Error::UnsupportedDomain(csp.d()));
    }
    let n = csp.variables().last().copied().unwrap_or(0);
    let mut out = String::new();
    writeln!(out, "p cnf {n} {}", csp.num_constraints()).expect("string write");
    for c in csp.constraints() {
        for l in c.literals() {
            let lit = if l.value == 0 {
                l.var as i64
            } else {
                -(l.var as i64)
            };
            write!(out, "{lit} ").expect("string write");
        }
        writeln!(out, "0").expect("string write");
    }
    Ok(out)
}

/// Reads DIMACS CNF with uniform clause sizes into a (k,2)-CSP. Clauses may
/// span lines; everything after the declared clause count is ignored.
pub fn from_dimacs(text: &str) -> Result<Csp> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (mut n_decl, mut m) = (0u32, 0usize);
    let mut header_line = 0;
    for (no, line) in lines.by_ref() {
        if line.starts_with('c') || line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
            return Err(parse_err(no, "expected header `p cnf <n> <m>`"));
        }
        n_decl = fields[2]
            .parse()
            .map_err(|_| parse_err(no, "bad variable count in header"))?;
        m = fields[3]
            .parse()
            .map_err(|_| parse_err(no, "bad clause count in header"))?;
        header_line = no;
        break;
    }
    if header_line == 0 {
        return Err(parse_err(1, "missing header"));
    }

    let mut clauses: Vec<Vec<Literal>> = Vec::with_capacity(m);
    let mut current: Vec<Literal> = Vec::new();
    'outer: for (no, line) in lines {
        if line.starts_with('c') {
            continue;
        }
        for tok in line.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| parse_err(no, format!("bad literal `{tok}`")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
                if clauses.len() == m {
                    break 'outer;
                }
                continue;
            }
            let var = lit.unsigned_abs() as u32;
            if var > n_decl {
                return Err(parse_err(
                    no,
                    format!("variable {var} exceeds declared count {n_decl}"),
                ));
            }
            current.push(Literal::new(var, if lit > 0 { 0 } else { 1 }));
        }
    }
    if clauses.len() < m {
        return Err(parse_err(
            header_line,
            format!("{} of {m} clauses read before end of file", clauses.len()),
        ));
    }
    let k = clauses.first().map_or(0, |c| c.len());
    for (i, c) in clauses.iter().enumerate() {
        if c.len() != k {
            return Err(parse_err(
                header_line,
                format!("mixed clause sizes: clause {} has {} literals, expected {k}", i + 1, c.len()),
            ));
        }
    }
    let constraints = clauses
        .into_iter()
        .map(Constraint::new)
        .collect::<Result<Vec<_>>>()?;
    Csp::new(k, 2, constraints)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn empty_csp_round_trips() {
        let csp = Csp::new(2, 2, vec![]).unwrap();
        let text = serialize(&csp);
        assert_eq!(text, "p csp 0 2 2 0\n");
        assert_eq!(parse(&text).unwrap(), csp);
    }

    #[test]
    fn fixture_round_trips_byte_identically() {
        let csp = fixtures::six_clause_linear();
        let text = serialize(&csp);
        let back = parse(&text).unwrap();
        assert_eq!(back, csp);
        assert_eq!(serialize(&back), text);
    }

    #[test]
    fn comments_are_ignored() {
        let text = "c a comment\np csp 2 2 2 1\nc another\n1:0 2:1\nc trailing\n";
        let csp = parse(text).unwrap();
        assert_eq!(csp.num_constraints(), 1);
    }

    #[test]
    fn value_out_of_domain_reports_line() {
        let text = "p csp 2 3 2 1\n1:0 5:7\n";
        match parse(text) {
            Err(Error::Parse { line: 2, msg }) => assert!(msg.contains('7'), "{msg}"),
            other => panic!("expected line-2 parse error, got {other:?}"),
        }
    }

    #[test]
    fn wrong_token_count_reports_line() {
        let text = "p csp 3 2 2 1\n1:0 2:1 3:0\n";
        assert!(matches!(parse(text), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn duplicate_variable_in_line_is_rejected() {
        let text = "p csp 1 2 2 1\n1:0 1:1\n";
        assert!(matches!(parse(text), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn unsorted_variables_are_rejected() {
        let text = "p csp 2 2 2 1\n2:0 1:1\n";
        assert!(matches!(parse(text), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn header_variable_count_must_match() {
        let text = "p csp 3 2 2 1\n1:0 2:1\n";
        assert!(matches!(parse(text), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn dimacs_mapping_and_round_trip() {
        let csp = Csp::from_rows(2, 2, &[&[(1, 0), (2, 1)]]).unwrap();
        let text = to_dimacs(&csp).unwrap();
        assert_eq!(text, "p cnf 2 1\n1 -2 0\n");
        assert_eq!(from_dimacs(&text).unwrap(), csp);
    }

    #[test]
    fn fixture_dimacs_shape() {
        let text = to_dimacs(&fixtures::six_clause_linear()).unwrap();
        assert!(text.starts_with("p cnf 4 6\n"));
        assert_eq!(text.lines().count(), 7);
        assert_eq!(from_dimacs(&text).unwrap(), fixtures::six_clause_linear());
    }

    #[test]
    fn dimacs_requires_binary_domain() {
        let csp = Csp::from_rows(2, 3, &[&[(1, 2), (2, 0)]]).unwrap();
        assert_eq!(to_dimacs(&csp), Err(Error::UnsupportedDomain(3)));
    }

    #[test]
    fn dimacs_multiline_clauses() {
        let text = "c hi\np cnf 3 2\n1 2\n0\n-2 -3 0\n";
        let csp = from_dimacs(text).unwrap();
        assert_eq!(csp.num_constraints(), 2);
        assert_eq!(csp.k(), 2);
    }

    #[test]
    fn dimacs_mixed_sizes_rejected() {
        let text = "p cnf 3 2\n1 2 0\n3 0\n";
        assert!(from_dimacs(text).is_err());
    }
}
