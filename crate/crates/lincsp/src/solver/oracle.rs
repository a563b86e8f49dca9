//! Ground-truth solver: backtracking over the d^n assignment tree with a
//! node budget, plus automatic dispatch to the 2-SAT path for (2,2)-CSPs.

use crate::csp::{Assignment, Csp};
use crate::solver::{two_sat_solve, SolveOutcome};

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// Complete decision with a verified model on the satisfiable side.
/// (2,2)-CSPs are decided by the implication graph and never exceed the
/// budget; everything else runs `exhaustive_solve` with the default budget.
pub fn oracle_solve(csp: &Csp) -> SolveOutcome {
    if csp.k() == 2 && csp.d() == 2 {
        return two_sat_solve(csp).expect("shape checked");
    }
    exhaustive_solve(csp, DEFAULT_NODE_BUDGET)
}

/// Backtracking search trying values in increasing order over variables in
/// increasing order. Each attempted value assignment counts one node against
/// the budget.
pub fn exhaustive_solve(csp: &Csp, node_budget: u64) -> SolveOutcome {
    // A constraint without literals forbids the empty assignment, i.e.
    // everything.
    if csp.constraints().iter().any(|c| c.is_empty()) {
        return SolveOutcome::Unsatisfiable;
    }
    let vars = csp.variables().to_vec();
    let pos: std::collections::HashMap<_, _> =
        vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    // check_at[p] lists constraints whose last variable (in search order) is
    // the variable at position p; a constraint is decidable exactly when its
    // last variable gets a value.
    let mut check_at: Vec<Vec<usize>> = vec![Vec::new(); vars.len()];
    for (ci, c) in csp.constraints().iter().enumerate() {
        let last = c.vars().map(|v| pos[&v]).max().expect("non-empty");
        check_at[last].push(ci);
    }
    let mut values: Vec<u32> = vec![0; vars.len()];
    let mut budget = node_budget;
    match search(csp, &vars, &pos, &check_at, &mut values, 0, &mut budget) {
        Search::Found => {
            let assignment =
                Assignment::from_pairs(vars.iter().copied().zip(values.iter().copied()));
            assert!(
                csp.evaluate(&assignment).expect("assignment is total"),
                "exhaustive search returned a non-model"
            );
            SolveOutcome::Satisfied {
                assignment,
                resamples: 0,
            }
        }
        Search::Exhausted => SolveOutcome::Unsatisfiable,
        Search::OutOfBudget => SolveOutcome::BudgetExceeded { resamples: 0 },
    }
}

enum Search {
    Found,
    Exhausted,
    OutOfBudget,
}

fn search(
    csp: &Csp,
    vars: &[u32],
    pos: &std::collections::HashMap<u32, usize>,
    check_at: &[Vec<usize>],
    values: &mut Vec<u32>,
    depth: usize,
    budget: &mut u64,
) -> Search {
    if depth == vars.len() {
        return Search::Found;
    }
    'values: for value in 0..csp.d() {
        if *budget == 0 {
            return Search::OutOfBudget;
        }
        *budget -= 1;
        values[depth] = value;
        for &ci in &check_at[depth] {
            let violated = csp.constraints()[ci]
                .literals()
                .iter()
                .all(|l| values[pos[&l.var]] == l.value);
            if violated {
                continue 'values;
            }
        }
        match search(csp, vars, pos, check_at, values, depth + 1, budget) {
            Search::Exhausted => continue,
            done => return done,
        }
    }
    Search::Exhausted
}
