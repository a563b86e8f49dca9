//! Closed-form calculators for the size bounds on unsatisfiable ell-disjoint
//! (k,d)-CSPs, the complete-formula size, and the tower-type recursion size
//! of the classical explicit construction. All real-valued bounds are
//! computed in log space so they stay meaningful around k ~ 1000; the plain
//! fields overflow to infinity where f64 runs out.

use num_bigint::BigUint;
use num_traits::One;

use crate::csp::frequent_threshold;
use crate::error::{Error, Result};

/// Bounds on the largest m such that every ell-disjoint (k,d)-CSP with at
/// most m constraints is satisfiable.
///
/// `upper` carries an unspecified constant factor c; numerical comparisons
/// against concrete instances should use `lower` only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub k: usize,
    pub d: u32,
    pub ell: usize,
    /// (1/k) (d^k / (e d^(ell-1) k))^(1 + 1/(ell-1))
    pub lower: f64,
    pub ln_lower: f64,
    /// (e k^2 ln(d) d^k / ell)^(1 + 1/(ell-1)), times the unspecified c.
    pub upper: f64,
    pub ln_upper: f64,
    /// d^k / (e d^(ell-1) k)
    pub frequent_threshold: f64,
    /// frequent_threshold^(1/(ell-1)): the largest admissible number of
    /// frequent variables in the constructive satisfiability argument.
    pub max_frequent: f64,
}

pub fn bound_ml(k: usize, d: u32, ell: usize) -> Result<BoundReport> {
    if ell < 2 || ell > k {
        return Err(Error::EllOutOfRange { ell, k });
    }
    if d < 2 {
        return Err(Error::DomainTooSmall(d));
    }
    let (kf, df, lf) = (k as f64, d as f64, ell as f64);
    let exponent = lf / (lf - 1.0); // 1 + 1/(ell-1)
    let ln_threshold = kf * df.ln() - 1.0 - (lf - 1.0) * df.ln() - kf.ln();
    let ln_lower = -kf.ln() + exponent * ln_threshold;
    let ln_upper = exponent * (1.0 + 2.0 * kf.ln() - lf.ln() + df.ln().ln() + kf * df.ln());
    Ok(BoundReport {
        k,
        d,
        ell,
        lower: ln_lower.exp(),
        ln_lower,
        upper: ln_upper.exp(),
        ln_upper,
        frequent_threshold: frequent_threshold(k, d, ell),
        max_frequent: (ln_threshold / (lf - 1.0)).exp(),
    })
}

/// The linear k-CNF specialization: 4^k/(4 e^2 k^3) <= m(k) < k^4 4^k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearBounds {
    pub k: usize,
    pub lower: f64,
    pub ln_lower: f64,
    pub upper: f64,
    pub ln_upper: f64,
}

pub fn linear_bounds(k: usize) -> Result<LinearBounds> {
    if k < 2 {
        return Err(Error::Parameter(format!("linear bounds need k >= 2, got {k}")));
    }
    let kf = k as f64;
    let e = std::f64::consts::E;
    let lower = 4f64.powi(k as i32) / (4.0 * e * e * kf.powi(3));
    let upper = kf.powi(4) * 4f64.powi(k as i32);
    let ln4 = 4f64.ln();
    Ok(LinearBounds {
        k,
        lower,
        ln_lower: kf * ln4 - ln4 - 2.0 - 3.0 * kf.ln(),
        upper,
        ln_upper: 4.0 * kf.ln() + kf * ln4,
    })
}

/// d^k, the size of the smallest unsatisfiable (k,d)-CSP without any
/// disjointness restriction.
pub fn complete_formula_size(k: u32, d: u32) -> BigUint {
    BigUint::from(d).pow(k)
}

/// Size of the recursive explicit construction m(0) = 1,
/// m(k+1) = m(k) 2^m(k). Every value is a power of two, so the log2 column is
/// exact: log2 m(k+1) = log2 m(k) + m(k).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PszSize {
    /// The value itself, reported up to k = 3 (1, 2, 8, 2048).
    pub exact: Option<BigUint>,
    pub log2: BigUint,
}

/// Supported for k <= 5: already log2 m(6) has about 2^2059 binary digits.
pub fn psz_size(k: u32) -> Result<PszSize> {
    if k > 5 {
        return Err(Error::Parameter(format!(
            "log2 of the recursion size is not representable for k={k} (supported: k <= 5)"
        )));
    }
    use num_traits::{ToPrimitive, Zero};
    let mut log2 = BigUint::zero();
    for _ in 0..k {
        // m(i) = 2^log2 needs log2 as a machine shift amount; it stays below
        // 2^64 for every iteration reachable under the k <= 5 guard.
        let shift = log2
            .to_u64()
            .ok_or_else(|| Error::Internal("recursion depth beyond guard".into()))?;
        log2 += BigUint::one() << (shift as usize);
    }
    let exact = if k <= 3 {
        let shift = log2.to_u64().expect("tiny for k <= 3");
        Some(BigUint::one() << (shift as usize))
    } else {
        None
    };
    Ok(PszSize { exact, log2 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_ml_hand_values() {
        let r = bound_ml(3, 2, 2).unwrap();
        let direct = (1.0 / 3.0) * (8.0 / (6.0 * std::f64::consts::E)).powi(2);
        assert!((r.lower - direct).abs() / direct < 1e-12);
        assert!((r.lower - 0.0802).abs() < 1e-4);

        let r = bound_ml(10, 2, 2).unwrap();
        assert!((r.frequent_threshold - 18.84).abs() < 5e-3);
        assert!((r.max_frequent - r.frequent_threshold).abs() < 1e-9);
    }

    #[test]
    fn bound_ml_rejects_ell_one() {
        assert_eq!(bound_ml(3, 2, 1), Err(Error::EllOutOfRange { ell: 1, k: 3 }));
    }

    #[test]
    fn lower_below_upper_on_grid() {
        for d in [2, 3, 5] {
            for ell in 2..=4usize {
                for k in ell..=20 {
                    let r = bound_ml(k, d, ell).unwrap();
                    assert!(
                        r.ln_lower < r.ln_upper,
                        "k={k} d={d} ell={ell}: {} vs {}",
                        r.ln_lower,
                        r.ln_upper
                    );
                }
            }
        }
    }

    #[test]
    fn linear_bounds_hand_values() {
        let r = linear_bounds(2).unwrap();
        assert!((r.lower - 16.0 / (32.0 * std::f64::consts::E.powi(2))).abs() < 1e-12);
        assert!((r.lower - 0.0677).abs() < 1e-4);
        let r = linear_bounds(3).unwrap();
        assert_eq!(r.upper, 5184.0);
        assert!(linear_bounds(1).is_err());
    }

    #[test]
    fn linear_specializes_bound_ml() {
        for k in 2..=30 {
            let a = linear_bounds(k).unwrap().lower;
            let b = bound_ml(k, 2, 2).unwrap().lower;
            assert!(
                (a - b).abs() / a.max(b) < 1e-12,
                "k={k}: {a} vs {b}"
            );
        }
    }

    #[test]
    fn bounds_are_monotone_in_k() {
        for d in [2, 3] {
            for ell in 2..=4usize {
                let mut prev: Option<BoundReport> = None;
                for k in ell..=30 {
                    let r = bound_ml(k, d, ell).unwrap();
                    if let Some(p) = prev {
                        assert!(r.ln_lower > p.ln_lower, "lower not increasing at k={k}");
                        assert!(r.ln_upper > p.ln_upper, "upper not increasing at k={k}");
                    }
                    prev = Some(r);
                }
            }
        }
    }

    #[test]
    fn log_space_survives_k_1000() {
        let r = bound_ml(1000, 2, 2).unwrap();
        assert!(r.lower.is_infinite() && r.upper.is_infinite());
        assert!(r.ln_lower.is_finite() && r.ln_upper.is_finite());
        assert!(r.ln_lower < r.ln_upper);
    }

    #[test]
    fn complete_formula_size_hand_values() {
        assert_eq!(complete_formula_size(3, 2), 8u32.into());
        assert_eq!(complete_formula_size(0, 2), 1u32.into());
        assert_eq!(complete_formula_size(2, 3), 9u32.into());
    }

    #[test]
    fn psz_recursion_values() {
        let expect: [u32; 4] = [1, 2, 8, 2048];
        for (k, &v) in expect.iter().enumerate() {
            let s = psz_size(k as u32).unwrap();
            assert_eq!(s.exact, Some(v.into()), "k={k}");
        }
        assert_eq!(psz_size(4).unwrap().exact, None);
        assert_eq!(psz_size(4).unwrap().log2, 2059u32.into());
        // log2 m(5) = 2059 + 2^2059.
        let five = psz_size(5).unwrap().log2;
        assert_eq!(five, (BigUint::one() << 2059u32) + BigUint::from(2059u32));
        assert!(psz_size(6).is_err());
    }
}
