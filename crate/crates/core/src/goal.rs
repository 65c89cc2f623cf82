//! Optimal goal setting: choose the goal that maximizes the agent's final
//! progress for a given period, cost exponent, bias, and reward.
//!
//! The solution shape depends on the regime. When `beta` is not
//! task-abandonment inducing, the optimum is the largest goal the agent
//! still commits to at time zero. When it is, two cases apply: if the
//! reward must stay claimable, the optimum is the largest goal that
//! survives every quit decision; if exploitative (never-claimed) rewards
//! are allowed, the best abandonment time is selected by maximizing the
//! progress achievable per abandonment time, which takes linear time.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma::ln_gamma;
use crate::model::TaskParams;
use crate::threshold::is_tai;

/// Relative gap under which two abandonment-progress values are reported
/// as tied.
const TIE_RTOL: f64 = 1e-12;

/// A solved goal-setting instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoalSolution {
    /// The goal to set.
    pub theta: f64,
    /// Final progress the agent achieves against that goal.
    pub final_progress: f64,
    /// Time at which the reward is abandoned; `T` means it is claimed.
    pub abandon_time: u32,
    /// True when the reward is never claimed.
    pub exploitative: bool,
    /// Progress achievable per abandonment time, when computed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_curve: Option<Vec<f64>>,
    /// True when another abandonment time ties the optimum within 1e-12
    /// relative; the reported time is then the largest (least
    /// exploitative) maximizer.
    pub argmax_tie: bool,
}

fn validate(t_total: u32, alpha: f64, beta: f64, reward: f64) -> Result<()> {
    if t_total < 1 {
        return Err(Error::domain("T must be a positive integer"));
    }
    if !(alpha > 1.0) || !alpha.is_finite() {
        return Err(Error::domain(format!("alpha must be a finite real > 1, got {alpha}")));
    }
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::domain(format!("beta must lie in (0, 1], got {beta}")));
    }
    if !(reward >= 0.0) || !reward.is_finite() {
        return Err(Error::domain(format!("R must be a finite real >= 0, got {reward}")));
    }
    Ok(())
}

// Regime preconditions are vacuous at T = 1, where the closed forms of
// both regimes coincide.
fn require_tai(t_total: u32, alpha: f64, beta: f64) -> Result<()> {
    if t_total >= 2 && !is_tai(beta, t_total, alpha)? {
        return Err(Error::regime(format!(
            "beta = {beta} is not task-abandonment inducing for T = {t_total}, alpha = {alpha}; \
             use the non-TAI goal operation"
        )));
    }
    Ok(())
}

fn require_non_tai(t_total: u32, alpha: f64, beta: f64) -> Result<()> {
    if t_total >= 2 && is_tai(beta, t_total, alpha)? {
        return Err(Error::regime(format!(
            "beta = {beta} is task-abandonment inducing for T = {t_total}, alpha = {alpha}; \
             use the TAI goal operations"
        )));
    }
    Ok(())
}

fn gamma_of(alpha: f64, beta: f64) -> f64 {
    (beta.ln() / (alpha - 1.0)).exp()
}

/// Largest goal the agent commits to at time zero:
/// `R^(1/alpha) (T - 1 + gamma)^((alpha-1)/alpha)`.
pub(crate) fn lump_goal_value(t_total: u32, alpha: f64, beta: f64, reward: f64) -> f64 {
    let gamma = gamma_of(alpha, beta);
    reward.powf(1.0 / alpha) * ((t_total - 1) as f64 + gamma).powf((alpha - 1.0) / alpha)
}

/// Largest goal that stays claimable through every quit decision:
/// `(beta R)^(1/alpha) Γ(T + gamma) / (Γ(T) Γ(1 + gamma))`.
pub(crate) fn claimable_goal_value(t_total: u32, alpha: f64, beta: f64, reward: f64) -> f64 {
    let gamma = gamma_of(alpha, beta);
    let t = t_total as f64;
    (beta * reward).powf(1.0 / alpha)
        * (ln_gamma(t + gamma) - ln_gamma(t) - ln_gamma(1.0 + gamma)).exp()
}

/// Maximum final progress when the agent abandons the reward exactly at
/// time `t`; `t = T` corresponds to claiming it.
///
/// Panics if `t` is outside `1..=T`.
pub fn abandonment_progress(t: u32, t_total: u32, alpha: f64, beta: f64, reward: f64) -> f64 {
    assert!((1..=t_total).contains(&t), "abandonment time {t} out of range 1..={t_total}");
    let gamma = gamma_of(alpha, beta);
    let total = t_total as f64;
    let remaining = (t_total - t) as f64;
    let gamma_ratio = (ln_gamma(remaining + 1.0) + ln_gamma(total + gamma)
        - ln_gamma(total)
        - ln_gamma(remaining + 1.0 + gamma))
        .exp();
    reward.powf(1.0 / alpha)
        * (remaining + gamma).powf((alpha - 1.0) / alpha)
        * (gamma_ratio - remaining / (remaining + gamma))
}

// Goal inducing abandonment exactly at time t (the supremum of the
// half-open window of goals abandoned at t).
fn goal_for_abandonment(t: u32, t_total: u32, alpha: f64, beta: f64, reward: f64) -> f64 {
    let gamma = gamma_of(alpha, beta);
    let total = t_total as f64;
    let remaining = (t_total - t) as f64;
    let gamma_ratio = (ln_gamma(remaining + 1.0) + ln_gamma(total + gamma)
        - ln_gamma(total)
        - ln_gamma(remaining + 1.0 + gamma))
        .exp();
    reward.powf(1.0 / alpha) * (remaining + gamma).powf((alpha - 1.0) / alpha) * gamma_ratio
}

fn boundary_params(
    t_total: u32,
    alpha: f64,
    beta: f64,
    reward: f64,
    theta: f64,
    target: u32,
) -> Result<TaskParams> {
    let mut params = TaskParams::new(t_total, alpha, beta, theta, reward)?;
    params.nudge_theta_to_abandonment(target);
    Ok(params)
}

/// Optimal goal when `beta` is not task-abandonment inducing. The result
/// is the same whether or not exploitative rewards are allowed.
pub fn optimal_goal_non_tai(t_total: u32, alpha: f64, beta: f64, reward: f64) -> Result<GoalSolution> {
    validate(t_total, alpha, beta, reward)?;
    require_non_tai(t_total, alpha, beta)?;
    let theta = lump_goal_value(t_total, alpha, beta, reward);
    let params = boundary_params(t_total, alpha, beta, reward, theta, t_total)?;
    Ok(GoalSolution {
        theta: params.theta(),
        final_progress: params.theta(),
        abandon_time: t_total,
        exploitative: false,
        u_curve: None,
        argmax_tie: false,
    })
}

/// Optimal claimable goal when `beta` is task-abandonment inducing.
pub fn optimal_goal_tai_nonexploitative(
    t_total: u32,
    alpha: f64,
    beta: f64,
    reward: f64,
) -> Result<GoalSolution> {
    validate(t_total, alpha, beta, reward)?;
    require_tai(t_total, alpha, beta)?;
    let theta = claimable_goal_value(t_total, alpha, beta, reward);
    let params = boundary_params(t_total, alpha, beta, reward, theta, t_total)?;
    Ok(GoalSolution {
        theta: params.theta(),
        final_progress: params.theta(),
        abandon_time: t_total,
        exploitative: false,
        u_curve: None,
        argmax_tie: false,
    })
}

/// Optimal goal when `beta` is task-abandonment inducing and exploitative
/// rewards are allowed. Maximizes the progress achievable per abandonment
/// time; ties resolve toward the largest (least exploitative) time.
pub fn optimal_goal_tai_exploitative(
    t_total: u32,
    alpha: f64,
    beta: f64,
    reward: f64,
) -> Result<GoalSolution> {
    validate(t_total, alpha, beta, reward)?;
    require_tai(t_total, alpha, beta)?;
    let u_curve: Vec<f64> =
        (1..=t_total).map(|t| abandonment_progress(t, t_total, alpha, beta, reward)).collect();
    let mut best_t = 1;
    let mut best_u = u_curve[0];
    for (i, &u) in u_curve.iter().enumerate().skip(1) {
        if u >= best_u {
            best_u = u;
            best_t = i as u32 + 1;
        }
    }
    let argmax_tie = u_curve
        .iter()
        .enumerate()
        .any(|(i, &u)| i as u32 + 1 != best_t && (u - best_u).abs() <= TIE_RTOL * best_u.abs());
    let theta = goal_for_abandonment(best_t, t_total, alpha, beta, reward);
    let params = boundary_params(t_total, alpha, beta, reward, theta, best_t)?;
    Ok(GoalSolution {
        theta: params.theta(),
        final_progress: best_u,
        abandon_time: best_t,
        exploitative: best_t < t_total,
        u_curve: Some(u_curve),
        argmax_tie,
    })
}

/// Regime-dispatching entry point: routes to the non-TAI solution or, for
/// task-abandonment-inducing `beta`, to the claimable or exploitative
/// variant according to `allow_exploitative`.
pub fn optimal_goal(
    t_total: u32,
    alpha: f64,
    beta: f64,
    reward: f64,
    allow_exploitative: bool,
) -> Result<GoalSolution> {
    validate(t_total, alpha, beta, reward)?;
    if t_total >= 2 && is_tai(beta, t_total, alpha)? {
        if allow_exploitative {
            optimal_goal_tai_exploitative(t_total, alpha, beta, reward)
        } else {
            optimal_goal_tai_nonexploitative(t_total, alpha, beta, reward)
        }
    } else {
        optimal_goal_non_tai(t_total, alpha, beta, reward)
    }
}
