//! Solvers: Moser-Tardos style resampling, complete oracles (exhaustive
//! search and a 2-SAT implication-graph decision path), and the
//! frequent-variable reduction pipeline.

mod oracle;
mod reduce;
mod resample;
mod two_sat;

pub use oracle::{exhaustive_solve, oracle_solve, DEFAULT_NODE_BUDGET};
pub use reduce::{
    max_frequent_allowed, reduce_frequent, solve_sparse_frequent, ConstraintReduction,
    ReductionReport,
};
pub use resample::{resample_solve, DEFAULT_RESAMPLE_BUDGET};
pub use two_sat::two_sat_solve;

use crate::csp::{Assignment, Csp};

/// Result of a solve call. A satisfying assignment is always verified against
/// the input before being returned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Satisfied {
        assignment: Assignment,
        /// Resampling steps taken; 0 on oracle paths.
        resamples: u64,
    },
    Unsatisfiable,
    BudgetExceeded {
        resamples: u64,
    },
}

impl SolveOutcome {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, SolveOutcome::Satisfied { .. })
    }

    pub fn is_unsatisfiable(&self) -> bool {
        matches!(self, SolveOutcome::Unsatisfiable)
    }

    pub fn assignment(&self) -> Option<&Assignment> {
        match self {
            SolveOutcome::Satisfied { assignment, .. } => Some(assignment),
            _ => None,
        }
    }

    pub fn resamples(&self) -> u64 {
        match *self {
            SolveOutcome::Satisfied { resamples, .. } => resamples,
            SolveOutcome::Unsatisfiable => 0,
            SolveOutcome::BudgetExceeded { resamples } => resamples,
        }
    }
}

/// Report for the degree condition `deg(x,F) <= d^k/(e k)` under which a
/// uniformly random assignment avoids all forbidden points with positive
/// probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LllCondition {
    pub holds: bool,
    pub max_degree: usize,
    pub threshold: f64,
}

pub fn lll_condition(csp: &Csp) -> LllCondition {
    let threshold = if csp.k() == 0 {
        f64::INFINITY
    } else {
        let d = csp.d() as f64;
        d.powi(csp.k() as i32) / (std::f64::consts::E * csp.k() as f64)
    };
    let max_degree = csp.degrees().values().copied().max().unwrap_or(0);
    LllCondition {
        holds: max_degree as f64 <= threshold,
        max_degree,
        threshold,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::Csp;

    #[test]
    fn lll_condition_on_empty_csp() {
        let csp = Csp::new(2, 2, vec![]).unwrap();
        let cond = lll_condition(&csp);
        assert!(cond.holds);
        assert_eq!(cond.max_degree, 0);
    }

    #[test]
    fn lll_threshold_hand_values() {
        // k=4, d=2: 16/(4e) ~ 1.4715; a CSP where every variable occurs once holds.
        let csp = Csp::from_rows(4, 2, &[&[(1, 0), (2, 0), (3, 0), (4, 0)]]).unwrap();
        let cond = lll_condition(&csp);
        assert!((cond.threshold - 16.0 / (4.0 * std::f64::consts::E)).abs() < 1e-12);
        assert!((cond.threshold - 1.4715).abs() < 1e-4);
        assert!(cond.holds);

        // k=2, d=2: 4/(2e) ~ 0.7358; any non-empty (2,2)-CSP fails.
        let csp = Csp::from_rows(2, 2, &[&[(1, 0), (2, 0)]]).unwrap();
        let cond = lll_condition(&csp);
        assert!((cond.threshold - 0.7358).abs() < 1e-4);
        assert!(!cond.holds);
    }
}
