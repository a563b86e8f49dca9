//! Moser-Tardos style resampling: draw a uniform assignment, then while some
//! constraint is violated, redraw all variables of the violated constraint
//! with the smallest index.

use std::collections::{BTreeSet, HashMap};

use rand::Rng;

use crate::csp::{Assignment, Csp, Var};
use crate::rng::rng_from_seed;
use crate::solver::SolveOutcome;

pub const DEFAULT_RESAMPLE_BUDGET: u64 = 1_000_000;

/// Runs the resampling loop for at most `max_resamples` steps. Never returns
/// `Unsatisfiable`; on unsatisfiable (or just unlucky) inputs the budget is
/// exhausted and reported as `BudgetExceeded`.
pub fn resample_solve(csp: &Csp, seed: u64, max_resamples: u64) -> SolveOutcome {
    let mut rng = rng_from_seed(seed);
    let vars = csp.variables().to_vec();
    let pos: HashMap<Var, usize> = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let d = csp.d();

    let mut values: Vec<u32> = (0..vars.len()).map(|_| rng.random_range(0..d)).collect();

    // Constraints touching each variable, for incremental violation updates.
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); vars.len()];
    for (ci, c) in csp.constraints().iter().enumerate() {
        for v in c.vars() {
            touching[pos[&v]].push(ci);
        }
    }
    // Vacuously true on an empty constraint, which indeed forbids everything.
    let is_violated = |ci: usize, values: &[u32]| {
        csp.constraints()[ci]
            .literals()
            .iter()
            .all(|l| values[pos[&l.var]] == l.value)
    };

    let mut violated: BTreeSet<usize> = (0..csp.num_constraints())
        .filter(|&ci| is_violated(ci, &values))
        .collect();

    let mut resamples = 0u64;
    while let Some(&ci) = violated.first() {
        if resamples == max_resamples {
            return SolveOutcome::BudgetExceeded { resamples };
        }
        resamples += 1;
        for l in csp.constraints()[ci].literals() {
            values[pos[&l.var]] = rng.random_range(0..d);
        }
        for l in csp.constraints()[ci].literals() {
            for &cj in &touching[pos[&l.var]] {
                if is_violated(cj, &values) {
                    violated.insert(cj);
                } else {
                    violated.remove(&cj);
                }
            }
        }
    }

    let assignment = Assignment::from_pairs(vars.into_iter().zip(values));
    assert!(
        csp.evaluate(&assignment).expect("assignment is total"),
        "resampling terminated on a non-model"
    );
    SolveOutcome::Satisfied {
        assignment,
        resamples,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn empty_csp_needs_no_resamples() {
        let csp = Csp::new(2, 2, vec![]).unwrap();
        let out = resample_solve(&csp, 0, 10);
        assert_eq!(out.resamples(), 0);
        assert!(out.is_satisfied());
    }

    #[test]
    fn single_constraint_is_solved_fast() {
        let csp =
            Csp::from_rows(4, 2, &[&[(1, 0), (2, 0), (3, 0), (4, 0)]]).unwrap();
        for seed in 0..10 {
            let out = resample_solve(&csp, seed, 1_000_000);
            assert!(out.is_satisfied(), "seed {seed}");
        }
    }

    #[test]
    fn unsatisfiable_fixture_exhausts_budget() {
        let out = resample_solve(&fixtures::six_clause_linear(), 1, 10_000);
        assert_eq!(out, SolveOutcome::BudgetExceeded { resamples: 10_000 });
    }

    #[test]
    fn seeded_runs_are_reproducible() {
        let csp = Csp::from_rows(
            2,
            3,
            &[&[(1, 0), (2, 1)], &[(2, 0), (3, 2)], &[(1, 2), (3, 0)]],
        )
        .unwrap();
        let a = resample_solve(&csp, 42, 1000);
        let b = resample_solve(&csp, 42, 1000);
        assert_eq!(a, b);
    }

    #[test]
    fn empty_constraint_never_satisfies() {
        // k=0 complete formula: the empty constraint forbids everything.
        let csp = fixtures::complete_formula(0, 2).unwrap();
        let out = resample_solve(&csp, 3, 50);
        assert_eq!(out, SolveOutcome::BudgetExceeded { resamples: 50 });
    }
}
