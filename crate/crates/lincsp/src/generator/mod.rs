//! Randomized construction of verified unsatisfiable instances: pick n and m
//! from the closed-form parameter formulas, pack an ell-disjoint hypergraph,
//! forbid an independently uniform point per edge, and retry until a complete
//! verifier rejects the instance.

mod hypergraph;

pub use hypergraph::{
    binomial_big, exhaustive_feasible, greedy_maximal_hypergraph, hypergraph_size_lower_bound,
    sample_packing, Hypergraph,
};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::csp::{Constraint, Csp, Literal};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, rng_from_seed};
use crate::solver::{exhaustive_solve, two_sat_solve, SolveOutcome};

/// Vertex count for which an m-edge random instance is expected to be
/// unsatisfiable: ceil((e k^2 / ell)^(ell/(ell-1)) * (ln(d) d^k)^(1/(ell-1))).
pub fn choose_n(k: usize, d: u32, ell: usize) -> Result<u64> {
    if ell < 2 || ell > k {
        return Err(Error::EllOutOfRange { ell, k });
    }
    if d < 2 {
        return Err(Error::DomainTooSmall(d));
    }
    let (kf, df, lf) = (k as f64, d as f64, ell as f64);
    let n = (std::f64::consts::E * kf * kf / lf).powf(lf / (lf - 1.0))
        * (df.ln() * df.powi(k as i32)).powf(1.0 / (lf - 1.0));
    let n = n.ceil();
    if !n.is_finite() || n > (1u64 << 40) as f64 {
        return Err(Error::Parameter(format!(
            "auto-chosen n out of supported range for k={k}, d={d}, ell={ell}"
        )));
    }
    Ok(n as u64)
}

/// Constraint count that pushes the expected satisfying-assignment count of a
/// random instance below 1: ceil(ln(d) * n * d^k).
pub fn required_m(n: u64, k: usize, d: u32) -> Result<u64> {
    if d < 2 {
        return Err(Error::DomainTooSmall(d));
    }
    let m = ((d as f64).ln() * n as f64 * (d as f64).powi(k as i32)).ceil();
    if !m.is_finite() || m > (1u64 << 53) as f64 {
        return Err(Error::Parameter(format!(
            "required m out of supported range for n={n}, k={k}, d={d}"
        )));
    }
    Ok(m as u64)
}

/// Turns each edge into a constraint forbidding one independently uniform
/// point of the edge's domain cube.
pub fn instantiate_random(h: &Hypergraph, d: u32, seed: u64) -> Result<Csp> {
    if d < 2 {
        return Err(Error::DomainTooSmall(d));
    }
    Ok(instantiate_with_rng(h, d, &mut rng_from_seed(seed)))
}

pub(crate) fn instantiate_with_rng(h: &Hypergraph, d: u32, rng: &mut ChaCha8Rng) -> Csp {
    let constraints: Vec<Constraint> = h
        .edges()
        .map(|edge| {
            Constraint::new(
                edge.iter()
                    .map(|&v| Literal::new(v, rng.random_range(0..d)))
                    .collect(),
            )
            .expect("edge vertices are distinct")
        })
        .collect();
    Csp::new(h.k(), d, constraints).expect("distinct edges give distinct constraints")
}

/// The expected number of satisfying assignments of a random instance with m
/// constraints over n variables, exactly and via the exponential upper bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SatCountEstimate {
    /// d^n (1 - d^-k)^m
    pub exact: f64,
    pub ln_exact: f64,
    /// exp(ln(d) n - d^-k m), an upper bound on `exact`.
    pub upper: f64,
    pub ln_upper: f64,
}

pub fn expected_sat_count(n: u64, m: u64, k: usize, d: u32) -> SatCountEstimate {
    let df = d as f64;
    let p_violate = (-(k as f64) * df.ln()).exp(); // d^-k
    let ln_exact = n as f64 * df.ln() + m as f64 * (-p_violate).ln_1p();
    let ln_upper = n as f64 * df.ln() - p_violate * m as f64;
    SatCountEstimate {
        exact: ln_exact.exp(),
        ln_exact,
        upper: ln_upper.exp(),
        ln_upper,
    }
}

/// How a generated instance is checked for unsatisfiability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    /// Exhaustive search; requires a small variable count.
    Oracle,
    /// Implication-graph decision; requires k=2, d=2.
    TwoSat,
    /// No check; the instance is returned with its expectation report only.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrialVerdict {
    Unsatisfiable,
    Satisfiable,
    VerifierBudgetExceeded,
}

#[derive(Debug, Clone)]
pub struct GenParams {
    pub k: usize,
    pub d: u32,
    pub ell: usize,
    /// Vertex count; `None` picks `choose_n(k, d, ell)`.
    pub n: Option<u64>,
    /// Constraint count; `None` picks `required_m(n, k, d)` scaled by `overshoot`.
    pub m: Option<u64>,
    pub seed: u64,
    pub trials: u64,
    pub verify: VerifyMode,
    /// Multiplies the automatic m to trade instance size for per-trial
    /// success probability.
    pub overshoot: f64,
}

impl GenParams {
    pub fn new(k: usize, d: u32, ell: usize, verify: VerifyMode) -> Self {
        GenParams {
            k,
            d,
            ell,
            n: None,
            m: None,
            seed: 0,
            trials: 100,
            verify,
            overshoot: 1.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GenReport {
    pub csp: Csp,
    pub n: u64,
    pub m: u64,
    pub trials_used: u64,
    pub verdicts: Vec<TrialVerdict>,
    pub estimate: SatCountEstimate,
    /// True iff the returned instance was rejected by a complete verifier.
    pub verified_unsat: bool,
}

const ORACLE_VERIFY_NODE_BUDGET: u64 = 1 << 30;

/// Repeats { pack hypergraph with a per-trial sub-seed, take the first m
/// edges, instantiate uniformly, verify } until a trial verifies
/// unsatisfiable or the trial budget runs out.
pub fn search_unsat(params: &GenParams) -> Result<GenReport> {
    let GenParams {
        k,
        d,
        ell,
        seed,
        trials,
        verify,
        overshoot,
        ..
    } = *params;
    if ell < 2 || ell > k {
        return Err(Error::EllOutOfRange { ell, k });
    }
    if d < 2 {
        return Err(Error::DomainTooSmall(d));
    }
    if !(overshoot.is_finite() && overshoot > 0.0) {
        return Err(Error::Parameter(format!("overshoot must be positive, got {overshoot}")));
    }
    if trials == 0 {
        return Err(Error::Parameter("trials must be at least 1".into()));
    }
    let n = match params.n {
        Some(n) => n,
        None => choose_n(k, d, ell)?,
    };
    if (k as u64) > n {
        return Err(Error::Parameter(format!("need k <= n, got k={k}, n={n}")));
    }
    let m = match params.m {
        Some(m) => m,
        None => {
            let auto = (required_m(n, k, d)? as f64 * overshoot).ceil();
            if !auto.is_finite() || auto > (1u64 << 53) as f64 {
                return Err(Error::Parameter("overshoot pushes m out of range".into()));
            }
            auto as u64
        }
    };
    match verify {
        VerifyMode::TwoSat if k != 2 || d != 2 => {
            return Err(Error::Parameter(format!(
                "two-sat verification requires k=2 and d=2, got k={k}, d={d}"
            )));
        }
        VerifyMode::Oracle => {
            // The verifier must sweep the whole d^n tree to certify
            // unsatisfiability; refuse scales where that cannot finish.
            if n as f64 * (d as f64).ln() > (ORACLE_VERIFY_NODE_BUDGET as f64).ln() {
                return Err(Error::Parameter(format!(
                    "oracle verification infeasible: d^n = {d}^{n} exceeds the search budget"
                )));
            }
        }
        _ => {}
    }
    let estimate = expected_sat_count(n, m, k, d);

    let mut verdicts = Vec::new();
    for trial in 0..trials {
        let mut rng = rng_from_seed(derive_seed(seed, trial));
        let h = if exhaustive_feasible(n, k) {
            let h = hypergraph::greedy_maximal_with_rng(n, k, ell, &mut rng)?;
            if (h.num_edges() as u64) < m {
                return Err(Error::NotEnoughEdges {
                    requested: m,
                    available: h.num_edges() as u64,
                });
            }
            h.truncated(m as usize)
        } else {
            hypergraph::sample_packing_with_rng(n, k, ell, &mut rng, m)?
        };
        let csp = instantiate_with_rng(&h, d, &mut rng);
        let outcome = match verify {
            VerifyMode::None => {
                return Ok(GenReport {
                    csp,
                    n,
                    m,
                    trials_used: trial + 1,
                    verdicts,
                    estimate,
                    verified_unsat: false,
                });
            }
            VerifyMode::TwoSat => two_sat_solve(&csp)?,
            VerifyMode::Oracle => exhaustive_solve(&csp, ORACLE_VERIFY_NODE_BUDGET),
        };
        let verdict = match outcome {
            SolveOutcome::Unsatisfiable => TrialVerdict::Unsatisfiable,
            SolveOutcome::Satisfied { .. } => TrialVerdict::Satisfiable,
            SolveOutcome::BudgetExceeded { .. } => TrialVerdict::VerifierBudgetExceeded,
        };
        verdicts.push(verdict);
        if verdict == TrialVerdict::Unsatisfiable {
            return Ok(GenReport {
                csp,
                n,
                m,
                trials_used: trial + 1,
                verdicts,
                estimate,
                verified_unsat: true,
            });
        }
    }
    Err(Error::TrialsExhausted { trials, verdicts })
}
