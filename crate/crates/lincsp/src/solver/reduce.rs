//! Frequent-variable reduction: turns an ell-disjoint (k,d)-CSP with few
//! frequent variables into a (k-ell+1,d)-CSP whose satisfying assignments
//! carry over to the input, then solves the reduced instance by resampling.

use std::collections::{BTreeSet, HashMap};

use crate::csp::{frequent_threshold, Constraint, Csp, Literal, Var};
use crate::error::{Error, Result};
use crate::solver::{resample_solve, SolveOutcome};

/// Per-input-constraint record of the literals deleted by each phase.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConstraintReduction {
    /// Phase 1: literals of frequent variables, deleted because the
    /// constraint contained fewer than `ell` frequent variables.
    pub removed_frequent: Vec<Literal>,
    /// Phase 2: literals deleted to truncate the constraint to k-ell+1.
    pub removed_truncation: Vec<Literal>,
}

#[derive(Debug, Clone)]
pub struct ReductionReport {
    /// The reduced (k-ell+1, d)-CSP. Identical reduced constraints are
    /// merged, so it may have fewer constraints than the input.
    pub reduced: Csp,
    /// Parallel to the input's constraint list.
    pub per_constraint: Vec<ConstraintReduction>,
    /// Variables frequent in the input.
    pub frequent: BTreeSet<Var>,
}

/// Largest number of frequent variables for which `solve_sparse_frequent`
/// accepts an input: `frequent_threshold(k,d,ell)^(1/(ell-1))`.
pub fn max_frequent_allowed(k: usize, d: u32, ell: usize) -> f64 {
    frequent_threshold(k, d, ell).powf(1.0 / (ell as f64 - 1.0))
}

/// Two-phase literal deletion.
///
/// Phase 1: every constraint with fewer than `ell` frequent variables loses
/// the literals of its frequent variables; constraints with at least `ell`
/// frequent variables are kept whole.
///
/// Phase 2: constraints are truncated to exactly k-ell+1 literals, repeatedly
/// deleting the literal whose variable has the largest degree in the current
/// working formula (ties broken towards the smallest variable identifier),
/// processing constraints in index order and updating degrees after every
/// deletion.
pub fn reduce_frequent(csp: &Csp, ell: usize) -> Result<ReductionReport> {
    if ell < 2 || ell > csp.k() {
        return Err(Error::EllOutOfRange { ell, k: csp.k() });
    }
    if let Some((first, second)) = csp.check_l_disjoint(ell)?.witness() {
        return Err(Error::NotDisjoint { ell, first, second });
    }
    let frequent = csp.frequent_variables(ell)?;
    let target = csp.k() - ell + 1;

    let mut working: Vec<Vec<Literal>> = Vec::with_capacity(csp.num_constraints());
    let mut per_constraint: Vec<ConstraintReduction> =
        vec![ConstraintReduction::default(); csp.num_constraints()];

    for (ci, c) in csp.constraints().iter().enumerate() {
        let freq_count = c.vars().filter(|v| frequent.contains(v)).count();
        if freq_count < ell {
            let (drop, keep): (Vec<Literal>, Vec<Literal>) = c
                .literals()
                .iter()
                .partition(|l| frequent.contains(&l.var));
            per_constraint[ci].removed_frequent = drop;
            working.push(keep);
        } else {
            working.push(c.literals().to_vec());
        }
    }

    let mut degree: HashMap<Var, usize> = HashMap::new();
    for c in &working {
        for l in c {
            *degree.entry(l.var).or_insert(0) += 1;
        }
    }
    for (ci, c) in working.iter_mut().enumerate() {
        // Phase 1 left at least k - (ell-1) = target literals in place.
        assert!(c.len() >= target, "phase 1 over-deleted");
        while c.len() > target {
            let victim = c
                .iter()
                .enumerate()
                .max_by_key(|(_, l)| (degree[&l.var], std::cmp::Reverse(l.var)))
                .map(|(i, _)| i)
                .expect("constraint longer than target is non-empty");
            let l = c.remove(victim);
            *degree.get_mut(&l.var).expect("degree tracked") -= 1;
            per_constraint[ci].removed_truncation.push(l);
        }
    }

    let mut reduced: Vec<Constraint> = working
        .into_iter()
        .map(Constraint::new)
        .collect::<Result<_>>()?;
    reduced.sort_unstable();
    reduced.dedup();
    let reduced = Csp::new(target, csp.d(), reduced)
        .map_err(|e| Error::Internal(format!("reduction produced an invalid CSP: {e}")))?;

    Ok(ReductionReport {
        reduced,
        per_constraint,
        frequent,
    })
}

/// Reduces, re-checks the degree guarantee the reduction is supposed to
/// deliver, solves the reduced CSP by resampling, and lifts the model back to
/// the input's variables (deleted variables get value 0; any value works
/// because each reduced constraint is a subset of its parent).
pub fn solve_sparse_frequent(
    csp: &Csp,
    ell: usize,
    seed: u64,
    max_resamples: u64,
) -> Result<SolveOutcome> {
    let report = reduce_frequent(csp, ell)?;
    let bound = max_frequent_allowed(csp.k(), csp.d(), ell);
    if report.frequent.len() as f64 > bound {
        return Err(Error::TooManyFrequent {
            count: report.frequent.len(),
            bound,
        });
    }
    let threshold = frequent_threshold(csp.k(), csp.d(), ell);
    if let Some((&var, &deg)) = report
        .reduced
        .degrees()
        .iter()
        .find(|&(_, &deg)| deg as f64 > threshold)
    {
        return Err(Error::Internal(format!(
            "degree guarantee violated after reduction: deg(x{var}) = {deg} > {threshold}"
        )));
    }
    match resample_solve(&report.reduced, seed, max_resamples) {
        SolveOutcome::Satisfied {
            mut assignment,
            resamples,
        } => {
            for &v in csp.variables() {
                if assignment.get(v).is_none() {
                    assignment.set(v, 0);
                }
            }
            assert!(
                csp.evaluate(&assignment).expect("assignment is total"),
                "reduced model does not satisfy the input"
            );
            Ok(SolveOutcome::Satisfied {
                assignment,
                resamples,
            })
        }
        other => Ok(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn empty_csp_reduces_to_empty() {
        let csp = Csp::new(3, 2, vec![]).unwrap();
        let report = reduce_frequent(&csp, 2).unwrap();
        assert!(report.reduced.is_empty());
        assert_eq!(report.reduced.k(), 2);
        let out = solve_sparse_frequent(&csp, 2, 0, 100).unwrap();
        assert!(out.is_satisfied());
    }

    #[test]
    fn six_clause_reduction_truncates_everything_in_phase_2() {
        // Every variable is frequent at (2,2,2), so every clause has >= 2
        // frequent variables, phase 1 deletes nothing and phase 2 truncates
        // each clause to a single literal.
        let csp = fixtures::six_clause_linear();
        let report = reduce_frequent(&csp, 2).unwrap();
        assert_eq!(
            report.frequent.iter().copied().collect::<Vec<_>>(),
            vec![1, 2, 3, 4]
        );
        for rec in &report.per_constraint {
            assert!(rec.removed_frequent.is_empty());
            assert_eq!(rec.removed_truncation.len(), 1);
        }
        assert_eq!(report.reduced.k(), 1);
        for c in report.reduced.constraints() {
            assert_eq!(c.len(), 1);
        }
    }

    #[test]
    fn reduced_constraints_are_subsets_of_parents() {
        let csp = fixtures::six_clause_linear();
        let report = reduce_frequent(&csp, 2).unwrap();
        for (ci, c) in csp.constraints().iter().enumerate() {
            let rec = &report.per_constraint[ci];
            let kept: Vec<Literal> = c
                .literals()
                .iter()
                .filter(|l| {
                    !rec.removed_frequent.contains(l) && !rec.removed_truncation.contains(l)
                })
                .copied()
                .collect();
            let kept = Constraint::new(kept).unwrap();
            assert!(
                report.reduced.constraints().contains(&kept),
                "kept part of constraint {ci} missing from reduced CSP"
            );
        }
    }

    #[test]
    fn lone_frequent_variable_is_deleted_in_phase_1() {
        // (4,3)-CSP, ell=2: threshold 81/(12e) ~ 2.48, so variable 1 with
        // degree 3 is the only frequent variable. Every constraint has one
        // frequent variable, fewer than ell, so its literals are all deleted.
        let csp = Csp::from_rows(
            4,
            3,
            &[
                &[(1, 0), (2, 0), (3, 0), (4, 0)],
                &[(1, 1), (5, 0), (6, 0), (7, 0)],
                &[(1, 2), (8, 0), (9, 0), (10, 0)],
            ],
        )
        .unwrap();
        let report = reduce_frequent(&csp, 2).unwrap();
        assert_eq!(report.frequent.iter().copied().collect::<Vec<_>>(), vec![1]);
        for rec in &report.per_constraint {
            assert_eq!(rec.removed_frequent.len(), 1);
            assert_eq!(rec.removed_frequent[0].var, 1);
            assert!(rec.removed_truncation.is_empty());
        }
        assert_eq!(report.reduced.degree(1), 0);
        assert_eq!(report.reduced.k(), 3);
    }

    #[test]
    fn non_disjoint_input_is_rejected_with_witness() {
        let csp = fixtures::complete_formula(3, 2).unwrap();
        match reduce_frequent(&csp, 2) {
            Err(Error::NotDisjoint { ell: 2, .. }) => {}
            other => panic!("expected NotDisjoint, got {other:?}"),
        }
        match solve_sparse_frequent(&csp, 2, 0, 100) {
            Err(Error::NotDisjoint { .. }) => {}
            other => panic!("expected NotDisjoint, got {other:?}"),
        }
    }

    #[test]
    fn too_many_frequent_variables_is_rejected() {
        // All four variables of the fixture are frequent but the allowed
        // bound at (2,2,2) is (1/e)^1 < 1.
        let csp = fixtures::six_clause_linear();
        match solve_sparse_frequent(&csp, 2, 0, 100) {
            Err(Error::TooManyFrequent { count: 4, .. }) => {}
            other => panic!("expected TooManyFrequent, got {other:?}"),
        }
    }

    #[test]
    fn max_frequent_allowed_hand_value() {
        let b = max_frequent_allowed(10, 2, 2);
        assert!((b - 1024.0 / (20.0 * std::f64::consts::E)).abs() < 1e-12);
        assert!((b - 18.84).abs() < 5e-3);
    }
}
