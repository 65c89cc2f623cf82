//! Classification of present-bias strengths that can induce mid-task
//! abandonment.
//!
//! For a fixed period `T` and cost exponent `alpha` there is a sharp
//! threshold `beta0` in (1/e, 1): an agent may abandon a task in the
//! middle (for some goal/reward pair) exactly when `beta < beta0`. The
//! threshold is the root, in `gamma = beta^(1/(alpha-1))`, of the ratio
//! between the last and first quit thresholds, which is strictly
//! decreasing in `gamma`. This module computes the exact root by
//! bisection, its analytic bracket, and a large-`T` asymptotic estimate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma::ln_gamma;
use crate::model::TaskParams;

/// Default bisection tolerance in `gamma`.
pub const DEFAULT_BETA0_TOL: f64 = 1e-12;

const MAX_BISECTION_ITERATIONS: u32 = 200;

/// The abandonment threshold `beta0` for one `(T, alpha)` pair, together
/// with its analytic bracket and asymptotic estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub beta0: f64,
    /// `(1 - 1/alpha)^(alpha-1)`, strictly below `beta0`.
    pub lower_bound: f64,
    /// `(1 - 1/alpha)^((alpha-1)/2)`, strictly above `beta0`.
    pub upper_bound: f64,
    /// Large-`T` estimate of `beta0`.
    pub beta0_asymptotic: f64,
    /// Bisection steps taken.
    pub iterations: u32,
}

fn validate(t_total: u32, alpha: f64) -> Result<()> {
    if t_total < 2 {
        return Err(Error::domain("T must be >= 2: no interior abandonment time exists for T = 1"));
    }
    if !(alpha > 1.0) || !alpha.is_finite() {
        return Err(Error::domain(format!("alpha must be a finite real > 1, got {alpha}")));
    }
    Ok(())
}

fn validate_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::domain(format!("beta must lie in (0, 1], got {beta}")));
    }
    Ok(())
}

// log of quit_threshold(T-1) / quit_threshold(0) as a function of gamma:
// (alpha-1) log(1 + (T-1)/gamma) + alpha (lnΓ(T) + lnΓ(1+gamma) − lnΓ(T+gamma)).
fn ln_threshold_ratio(gamma: f64, t_total: u32, alpha: f64) -> f64 {
    let t = t_total as f64;
    (alpha - 1.0) * (1.0 + (t - 1.0) / gamma).ln()
        + alpha * (ln_gamma(t) + ln_gamma(1.0 + gamma) - ln_gamma(t + gamma))
}

/// Ratio of the last to the first quit threshold, strictly decreasing in
/// `beta`. Values above 1 mean some later quit threshold dominates the
/// initial one, i.e. `beta` is task-abandonment inducing.
pub fn threshold_ratio(beta: f64, t_total: u32, alpha: f64) -> Result<f64> {
    validate(t_total, alpha)?;
    validate_beta(beta)?;
    let gamma = (beta.ln() / (alpha - 1.0)).exp();
    Ok(ln_threshold_ratio(gamma, t_total, alpha).exp())
}

/// Same ratio evaluated by the explicit log-sum over steps instead of
/// log-gamma. Cross-check path; cost is linear in `T`.
pub fn threshold_ratio_by_product(beta: f64, t_total: u32, alpha: f64) -> Result<f64> {
    validate(t_total, alpha)?;
    validate_beta(beta)?;
    let gamma = (beta.ln() / (alpha - 1.0)).exp();
    let t = t_total as f64;
    let mut ln_ratio = (alpha - 1.0) * (1.0 + (t - 1.0) / gamma).ln();
    for i in 1..t_total {
        let remaining = (t_total - i) as f64;
        ln_ratio += alpha * (remaining / (remaining + gamma)).ln();
    }
    Ok(ln_ratio.exp())
}

/// Exact `beta0` by bisection in `gamma` over the analytic bracket.
///
/// The ratio is strictly decreasing in `gamma`, so the root is unique and
/// bisection cannot stall; the convergence error is defensive only.
pub fn beta0_exact(t_total: u32, alpha: f64, tol: f64) -> Result<ThresholdResult> {
    validate(t_total, alpha)?;
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be > 0, got {tol}")));
    }
    let gamma_lo = 1.0 - 1.0 / alpha;
    let gamma_hi = gamma_lo.sqrt();
    let (mut lo, mut hi) = (gamma_lo, gamma_hi);
    let mut iterations = 0;
    while hi - lo > tol {
        iterations += 1;
        if iterations > MAX_BISECTION_ITERATIONS {
            return Err(Error::Convergence { iterations });
        }
        let mid = 0.5 * (lo + hi);
        if ln_threshold_ratio(mid, t_total, alpha) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let gamma0 = 0.5 * (lo + hi);
    Ok(ThresholdResult {
        beta0: gamma0.powf(alpha - 1.0),
        lower_bound: gamma_lo.powf(alpha - 1.0),
        upper_bound: gamma_lo.powf(0.5 * (alpha - 1.0)),
        beta0_asymptotic: beta0_asymptotic(t_total, alpha)?,
        iterations,
    })
}

/// Large-`T` estimate
/// `(1-1/alpha)^(alpha-1) (1 + (alpha lnΓ(1-1/alpha) + ln(1-1/alpha)) / ln T)`.
/// For `alpha = 2` this reduces to `1/2 + ln(pi/2) / (2 ln T)`.
pub fn beta0_asymptotic(t_total: u32, alpha: f64) -> Result<f64> {
    validate(t_total, alpha)?;
    let lead = 1.0 - 1.0 / alpha;
    let correction = alpha * ln_gamma(lead) + lead.ln();
    Ok(lead.powf(alpha - 1.0) * (1.0 + correction / (t_total as f64).ln()))
}

/// Whether `beta` is task-abandonment inducing for `(T, alpha)`, i.e.
/// strictly below `beta0`. For `T = 1` this is false by convention: no
/// interior abandonment time exists.
pub fn is_tai(beta: f64, t_total: u32, alpha: f64) -> Result<bool> {
    validate_beta(beta)?;
    if !(alpha > 1.0) || !alpha.is_finite() {
        return Err(Error::domain(format!("alpha must be a finite real > 1, got {alpha}")));
    }
    if t_total == 1 {
        return Ok(false);
    }
    Ok(beta < beta0_exact(t_total, alpha, DEFAULT_BETA0_TOL)?.beta0)
}

/// Direct check of the same property: does any later quit threshold exceed
/// the initial one? Must always agree with [`is_tai`]; the two routes are
/// compared in tests, not reconciled at runtime.
pub fn is_tai_by_scan(beta: f64, t_total: u32, alpha: f64) -> Result<bool> {
    validate_beta(beta)?;
    if !(alpha > 1.0) || !alpha.is_finite() {
        return Err(Error::domain(format!("alpha must be a finite real > 1, got {alpha}")));
    }
    if t_total == 1 {
        return Ok(false);
    }
    let params = TaskParams::new(t_total, alpha, beta, 1.0, 1.0)?;
    let q0 = params.quit_threshold(0);
    let mut cum = 0.0;
    for t in 1..t_total {
        cum += params.gap_ratio(t).ln();
        let ln_q = (1.0 - alpha) * ((t_total - t - 1) as f64 + params.gamma()).ln() + alpha * cum;
        if ln_q.exp() > q0 {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOLDEN: f64 = 0.6180339887498948482; // (sqrt(5) - 1) / 2

    #[test]
    fn ratio_examples() {
        // T = 2, alpha = 2 reduces to 1 / (gamma (1 + gamma)) with gamma = beta.
        for beta in [0.2, 0.5, 0.8, 1.0] {
            let want = 1.0 / (beta * (1.0 + beta));
            let got = threshold_ratio(beta, 2, 2.0).unwrap();
            assert!((got - want).abs() <= 1e-12 * want, "beta = {beta}");
        }
        // Direct product value at beta = 1, T = 3.
        let got = threshold_ratio(1.0, 3, 2.0).unwrap();
        assert!((got - 1.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn ratio_exceeds_one_at_lower_bound() {
        for alpha in [1.2f64, 1.5, 2.0, 4.0, 10.0] {
            let beta = (1.0 - 1.0 / alpha).powf(alpha - 1.0);
            for t in [2, 5, 20, 100] {
                assert!(
                    threshold_ratio(beta, t, alpha).unwrap() > 1.0,
                    "alpha = {alpha}, T = {t}"
                );
            }
        }
    }

    #[test]
    fn ratio_rejects_t1() {
        assert!(matches!(threshold_ratio(0.5, 1, 2.0), Err(Error::Domain(_))));
    }

    #[test]
    fn log_gamma_and_product_paths_agree() {
        for t in [2u32, 3, 10, 100, 1000] {
            for alpha in [1.5, 2.0, 4.0] {
                for beta in [0.3, 0.6, 0.95] {
                    let a = threshold_ratio(beta, t, alpha).unwrap();
                    let b = threshold_ratio_by_product(beta, t, alpha).unwrap();
                    // The product path sums T rounded logs, so its error
                    // budget grows linearly in T.
                    let tol = 1e-13 * t as f64 * a.abs().max(1.0);
                    assert!(
                        (a - b).abs() <= tol.max(1e-13),
                        "T = {t}, alpha = {alpha}, beta = {beta}: {a} vs {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn beta0_golden_ratio_at_t2() {
        let res = beta0_exact(2, 2.0, 1e-12).unwrap();
        assert!((res.beta0 - GOLDEN).abs() < 1e-10);
        assert!(res.iterations <= 200);
    }

    #[test]
    fn beta0_reference_values() {
        // mpmath bisection at 40 digits.
        for &(t, alpha, want) in &[
            (5u32, 2.0, 0.5839662398992330726),
            (10, 2.0, 0.5680706881003315530),
            (50, 2.0, 0.5465073557871630212),
            (100, 2.0, 0.5407775341264775301),
            (10, 1.2, 0.7455675350390192695),
            (12, 3.0, 0.5127515722082638455),
            (200, 4.0, 0.4596014675259058722),
        ] {
            let got = beta0_exact(t, alpha, 1e-12).unwrap().beta0;
            assert!((got - want).abs() < 1e-10, "T = {t}, alpha = {alpha}: {got} vs {want}");
        }
    }

    #[test]
    fn beta0_brackets_and_euler_bound() {
        for t in [2u32, 3, 7, 50, 200] {
            for alpha in [1.2, 2.0, 10.0] {
                let res = beta0_exact(t, alpha, 1e-12).unwrap();
                assert!(res.lower_bound < res.beta0 && res.beta0 < res.upper_bound);
                assert!(res.beta0 > (-1.0f64).exp());
            }
        }
    }

    #[test]
    fn asymptotic_examples() {
        // alpha = 2 closed form: 1/2 + ln(pi/2) / (2 ln T).
        let got = beta0_asymptotic(8, 2.0).unwrap();
        let want = 0.5 + (std::f64::consts::PI / 2.0).ln() / (2.0 * 8.0f64.ln());
        assert!((got - want).abs() < 1e-14);
        assert!((got - 0.6085826882453865).abs() < 1e-12);

        // The correction vanishes as T grows.
        let far = beta0_asymptotic(1_000_000_000, 2.0).unwrap();
        assert!((far - 0.5).abs() < 0.02);

        // The leading factor tends to 1/e for large alpha.
        let lead = |alpha: f64| (1.0 - 1.0 / alpha).powf(alpha - 1.0);
        assert!((lead(1e6) - (-1.0f64).exp()).abs() < 1e-5);
    }

    #[test]
    fn general_asymptotic_matches_alpha2_reduction() {
        for t in [10u32, 100, 10_000] {
            let general = beta0_asymptotic(t, 2.0).unwrap();
            let reduced = 0.5 + (std::f64::consts::PI / 2.0).ln() / (2.0 * (t as f64).ln());
            assert!((general - reduced).abs() < 1e-13);
        }
    }

    #[test]
    fn is_tai_examples() {
        assert!(is_tai(0.3, 2, 2.0).unwrap());
        assert!(is_tai(0.3, 17, 5.0).unwrap());
        assert!(!is_tai(1.0, 9, 2.0).unwrap());
        assert!(is_tai(0.55, 2, 2.0).unwrap()); // 0.55 < golden ratio
        assert!(is_tai(0.5, 10, 1.2).unwrap()); // 0.5 < beta0(10, 1.2) = 0.7456
        assert!(!is_tai(0.9, 10, 1.2).unwrap()); // above the upper bound 0.836
        assert!(!is_tai(0.5, 1, 2.0).unwrap()); // T = 1 convention
    }

    #[test]
    fn is_tai_routes_agree_near_beta0() {
        for t in [2u32, 5, 30] {
            for alpha in [1.5, 2.0, 4.0] {
                let beta0 = beta0_exact(t, alpha, 1e-12).unwrap().beta0;
                for beta in [beta0 - 1e-6, beta0 + 1e-6] {
                    assert_eq!(
                        is_tai(beta, t, alpha).unwrap(),
                        is_tai_by_scan(beta, t, alpha).unwrap(),
                        "T = {t}, alpha = {alpha}, beta = {beta}"
                    );
                }
            }
        }
    }

    #[test]
    fn bisection_tolerance_is_honored() {
        let res = beta0_exact(40, 3.0, 1e-6).unwrap();
        let tight = beta0_exact(40, 3.0, 1e-13).unwrap();
        assert!((res.beta0 - tight.beta0).abs() < 1e-5);
        assert!(res.iterations < tight.iterations);
        assert!(matches!(beta0_exact(40, 3.0, 0.0), Err(Error::Domain(_))));
    }
}
