//! Small built-in instances used by tests, experiments and the CLI.

use crate::csp::{Constraint, Csp, Literal};
use crate::error::{Error, Result};

/// The six-clause unsatisfiable linear 2-CNF over u,v,w,x (variables 1..4):
/// (!u | v), (!v | w), (!w | x), (!x | u), (u | w), (!v | !x),
/// encoded with the convention that a positive clause literal is `x != 0`.
pub fn six_clause_linear() -> Csp {
    let rows: &[&[(u32, u32)]] = &[
        &[(1, 1), (2, 0)], // !u | v
        &[(2, 1), (3, 0)], // !v | w
        &[(3, 1), (4, 0)], // !w | x
        &[(4, 1), (1, 0)], // !x | u
        &[(1, 0), (3, 0)], // u | w
        &[(2, 1), (4, 1)], // !v | !x
    ];
    Csp::from_rows(2, 2, rows).expect("fixture is valid")
}

/// The complete (k,d)-CSP over variables 1..=k: one constraint per point of
/// the domain cube, so it has d^k constraints and is unsatisfiable.
pub fn complete_formula(k: usize, d: u32) -> Result<Csp> {
    if d < 2 {
        return Err(Error::DomainTooSmall(d));
    }
    let total = (d as u64)
        .checked_pow(k.try_into().map_err(|_| Error::Parameter("k too large".into()))?)
        .filter(|&t| t <= 1 << 22)
        .ok_or_else(|| Error::Parameter(format!("complete formula with d^k > 2^22 (k={k}, d={d})")))?;
    let mut constraints = Vec::with_capacity(total as usize);
    for point in 0..total {
        let mut rest = point;
        let literals = (1..=k as u32)
            .map(|var| {
                let value = (rest % d as u64) as u32;
                rest /= d as u64;
                Literal::new(var, value)
            })
            .collect();
        constraints.push(Constraint::new(literals)?);
    }
    Csp::new(k, d, constraints)
}
