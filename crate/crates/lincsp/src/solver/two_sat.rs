//! Complete polynomial decision path for (2,2)-CSPs via the implication
//! graph: clause (p | q) contributes edges !p -> q and !q -> p, and the
//! formula is unsatisfiable iff some variable shares a strongly connected
//! component with its negation.

use crate::csp::{Assignment, Csp, Var};
use crate::error::{Error, Result};
use crate::solver::SolveOutcome;

/// Decides a (2,2)-CSP exactly. Errors unless `k == 2` and `d == 2`.
pub fn two_sat_solve(csp: &Csp) -> Result<SolveOutcome> {
    if csp.k() != 2 || csp.d() != 2 {
        return Err(Error::Parameter(format!(
            "2-SAT path requires k=2 and d=2, got k={}, d={}",
            csp.k(),
            csp.d()
        )));
    }
    let vars = csp.variables();
    let index: std::collections::HashMap<Var, usize> =
        vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    // Node 2i is "x_i = 1", node 2i + 1 is "x_i = 0".
    let node = |i: usize, val: u32| 2 * i + (1 - val as usize);
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); 2 * vars.len()];
    for c in csp.constraints() {
        let [a, b] = c.literals() else {
            unreachable!("arity checked above");
        };
        let (ia, ib) = (index[&a.var], index[&b.var]);
        // Literal "x != v" is satisfied exactly by x = 1 - v.
        let (la, lb) = (node(ia, 1 - a.value), node(ib, 1 - b.value));
        let (na, nb) = (node(ia, a.value), node(ib, b.value));
        adj[na].push(lb as u32);
        adj[nb].push(la as u32);
    }
    let comp = tarjan_scc(&adj);
    let mut assignment = Assignment::new();
    for (i, &v) in vars.iter().enumerate() {
        let (c1, c0) = (comp[node(i, 1)], comp[node(i, 0)]);
        if c1 == c0 {
            return Ok(SolveOutcome::Unsatisfiable);
        }
        // Components are numbered in completion order, i.e. sinks first;
        // picking the sink-side literal satisfies all implications out of it.
        assignment.set(v, if c1 < c0 { 1 } else { 0 });
    }
    assert!(
        csp.evaluate(&assignment).expect("assignment is total"),
        "implication-graph model failed verification"
    );
    Ok(SolveOutcome::Satisfied {
        assignment,
        resamples: 0,
    })
}

/// Iterative Tarjan; returns the component id of each node, ids assigned in
/// completion order (reverse topological).
fn tarjan_scc(adj: &[Vec<u32>]) -> Vec<u32> {
    const UNSET: u32 = u32::MAX;
    let n = adj.len();
    let mut comp = vec![UNSET; n];
    let mut index = vec![UNSET; n];
    let mut low = vec![UNSET; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut call: Vec<(u32, usize)> = Vec::new();
    let mut next_index = 0u32;
    let mut next_comp = 0u32;

    for root in 0..n as u32 {
        if index[root as usize] != UNSET {
            continue;
        }
        call.push((root, 0));
        while let Some(&mut (v, ref mut ei)) = call.last_mut() {
            let vu = v as usize;
            if *ei == 0 {
                index[vu] = next_index;
                low[vu] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[vu] = true;
            }
            if let Some(&w) = adj[vu].get(*ei) {
                *ei += 1;
                let wu = w as usize;
                if index[wu] == UNSET {
                    call.push((w, 0));
                } else if on_stack[wu] {
                    low[vu] = low[vu].min(index[wu]);
                }
            } else {
                if low[vu] == index[vu] {
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w as usize] = false;
                        comp[w as usize] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
                call.pop();
                if let Some(&mut (p, _)) = call.last_mut() {
                    let pu = p as usize;
                    low[pu] = low[pu].min(low[vu]);
                }
            }
        }
    }
    comp
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixture_is_unsatisfiable() {
        let out = two_sat_solve(&fixtures::six_clause_linear()).unwrap();
        assert!(out.is_unsatisfiable());
    }

    #[test]
    fn fixture_minus_u_or_w_is_satisfiable() {
        let six = fixtures::six_clause_linear();
        let keep: Vec<_> = six
            .constraints()
            .iter()
            .filter(|c| c.vars().collect::<Vec<_>>() != [1, 3])
            .cloned()
            .collect();
        let csp = Csp::new(2, 2, keep).unwrap();
        let out = two_sat_solve(&csp).unwrap();
        assert!(out.is_satisfied());
    }

    #[test]
    fn implication_chain_forces_values() {
        // x1 -> x2 -> x3 plus (x1 | x2): x2 and x3 are forced to 1.
        let csp = Csp::from_rows(
            2,
            2,
            &[
                &[(1, 1), (2, 0)], // !x1 | x2
                &[(2, 1), (3, 0)], // !x2 | x3
                &[(1, 0), (2, 0)], // x1 | x2
            ],
        )
        .unwrap();
        let out = two_sat_solve(&csp).unwrap();
        let alpha = out.assignment().unwrap();
        // x2 must be 1 (either x1=1 forces it, or x2=1 directly); then x3=1.
        assert_eq!(alpha.get(2), Some(1));
        assert_eq!(alpha.get(3), Some(1));
    }

    #[test]
    fn rejects_wrong_shape() {
        let csp = Csp::from_rows(2, 3, &[&[(1, 0), (2, 2)]]).unwrap();
        assert!(two_sat_solve(&csp).is_err());
        let csp = Csp::from_rows(3, 2, &[&[(1, 0), (2, 0), (3, 0)]]).unwrap();
        assert!(two_sat_solve(&csp).is_err());
    }

    #[test]
    fn complete_two_cnf_is_unsat() {
        let csp = fixtures::complete_formula(2, 2).unwrap();
        assert!(two_sat_solve(&csp).unwrap().is_unsatisfiable());
    }
}
