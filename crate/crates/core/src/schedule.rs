//! Optimal reward scheduling: split a total period `T` and reward budget
//! `R` into consecutive segments, each with its own claimable goal, to
//! maximize the agent's total progress.
//!
//! For non-task-abandonment-inducing `beta` a single lump-sum segment is
//! optimal. Otherwise the segment lengths are chosen by an `O(T^2)`
//! dynamic program over a per-segment value kernel, the budget is split
//! across segments in proportion to that kernel, and each segment's goal
//! is the largest claimable one. At `alpha = 2` two closed-form regimes
//! bracket the DP (all-ones below `sqrt(2)-1`, lump sum at or above 1/2),
//! and a simple interval heuristic covers the window in between.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma::ln_gamma;
use crate::goal::{claimable_goal_value, lump_goal_value};
use crate::model::TaskParams;
use crate::threshold::is_tai;

/// One scheduled segment: its length, reward, goal, and realized progress.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    #[serde(rename = "T")]
    pub t_len: u32,
    #[serde(rename = "R")]
    pub reward: f64,
    pub theta: f64,
    pub progress: f64,
}

/// A complete reward schedule. Segment lengths sum to the total period and
/// rewards to the budget; every segment is claimable (no exploitative
/// rewards). Segments are emitted longest first; the objective does not
/// depend on their order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub segments: Vec<Segment>,
    pub total_progress: f64,
}

impl Schedule {
    /// Number of segments.
    pub fn k(&self) -> usize {
        self.segments.len()
    }
}

/// The scheduling dynamic-programming table: `v[T']` is the best total
/// segment value for a period of length `T'` and `choice[T']` the segment
/// length achieving it (largest maximizer on ties).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DpTable {
    pub v: Vec<f64>,
    pub choice: Vec<u32>,
}

impl DpTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("T,v,choice\n");
        for (t, (v, c)) in self.v.iter().zip(&self.choice).enumerate() {
            out.push_str(&format!("{t},{v},{c}\n"));
        }
        out
    }
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

fn gamma_of(alpha: f64, beta: f64) -> f64 {
    (beta.ln() / (alpha - 1.0)).exp()
}

/// Value a segment of `len` steps contributes to the scheduling objective:
/// `(Γ(len + gamma) / Γ(len))^(alpha/(alpha-1))`, with the zero-length
/// limit pinned to 0.
pub fn segment_value(len: u32, alpha: f64, beta: f64) -> f64 {
    if len == 0 {
        return 0.0;
    }
    let gamma = gamma_of(alpha, beta);
    let x = len as f64;
    ((ln_gamma(x + gamma) - ln_gamma(x)) * alpha / (alpha - 1.0)).exp()
}

/// Split the reward budget across fixed segment lengths in proportion to
/// each segment's value, which makes the total-progress bound tight.
pub fn split_rewards(periods: &[u32], alpha: f64, beta: f64, reward: f64) -> Result<Vec<f64>> {
    if periods.is_empty() {
        return Err(Error::domain("periods must be non-empty"));
    }
    if periods.iter().any(|&p| p == 0) {
        return Err(Error::domain("every period length must be a positive integer"));
    }
    validate(periods.iter().sum::<u32>().max(1), alpha, beta, reward)?;
    let values: Vec<f64> = periods.iter().map(|&p| segment_value(p, alpha, beta)).collect();
    let total: f64 = values.iter().sum();
    Ok(values.into_iter().map(|value| reward * value / total).collect())
}

// Build a segment whose goal sits on the claimable boundary.
fn claimable_segment(t_len: u32, alpha: f64, beta: f64, reward: f64, theta: f64) -> Result<Segment> {
    let mut params = TaskParams::new(t_len, alpha, beta, theta, reward)?;
    params.nudge_theta_to_abandonment(t_len);
    Ok(Segment { t_len, reward, theta: params.theta(), progress: params.theta() })
}

/// Optimal schedule for non-task-abandonment-inducing `beta`: one lump-sum
/// segment covering the whole period.
pub fn schedule_non_tai(t_total: u32, alpha: f64, beta: f64, reward: f64) -> Result<Schedule> {
    validate(t_total, alpha, beta, reward)?;
    if t_total >= 2 && is_tai(beta, t_total, alpha)? {
        return Err(Error::regime(format!(
            "beta = {beta} is task-abandonment inducing for T = {t_total}, alpha = {alpha}; \
             use the TAI scheduler"
        )));
    }
    let theta = lump_goal_value(t_total, alpha, beta, reward);
    let segment = claimable_segment(t_total, alpha, beta, reward, theta)?;
    let total_progress = segment.progress;
    Ok(Schedule { segments: vec![segment], total_progress })
}

/// Optimal schedule for task-abandonment-inducing `beta`: segment lengths
/// by dynamic programming over the value kernel, rewards by proportional
/// split, goals on the claimable boundary. `O(T^2)` time, `O(T)` space.
pub fn schedule_tai_dp(t_total: u32, alpha: f64, beta: f64, reward: f64) -> Result<(Schedule, DpTable)> {
    validate(t_total, alpha, beta, reward)?;
    if !(t_total >= 2 && is_tai(beta, t_total, alpha)?) {
        return Err(Error::regime(format!(
            "beta = {beta} is not task-abandonment inducing for T = {t_total}, alpha = {alpha}; \
             use the lump-sum scheduler"
        )));
    }

    let n = t_total as usize;
    let kernel: Vec<f64> = (0..=t_total).map(|len| segment_value(len, alpha, beta)).collect();
    let mut v = vec![0.0; n + 1];
    let mut choice = vec![0u32; n + 1];
    for len in 1..=n {
        let mut best = f64::NEG_INFINITY;
        let mut best_t = 0u32;
        // >= keeps the largest maximizer: fewer, longer segments on ties.
        for t in 1..=len {
            let value = kernel[t] + v[len - t];
            if value >= best {
                best = value;
                best_t = t as u32;
            }
        }
        v[len] = best;
        choice[len] = best_t;
    }

    let mut lengths = Vec::new();
    let mut remaining = n;
    while remaining > 0 {
        let take = choice[remaining];
        lengths.push(take);
        remaining -= take as usize;
    }
    lengths.sort_unstable_by(|a, b| b.cmp(a));

    let rewards = split_rewards(&lengths, alpha, beta, reward)?;
    let mut segments = Vec::with_capacity(lengths.len());
    for (&len, &r) in lengths.iter().zip(&rewards) {
        let theta = claimable_goal_value(len, alpha, beta, r);
        segments.push(claimable_segment(len, alpha, beta, r, theta)?);
    }
    let total_progress: f64 = segments.iter().map(|s| s.progress).sum();

    // The per-segment sum must reproduce the aggregate closed form; a gap
    // here means one of the two derivations was transcribed wrong.
    let gamma = gamma_of(alpha, beta);
    let closed_form = (beta * reward).powf(1.0 / alpha)
        * v[n].powf((alpha - 1.0) / alpha)
        / ln_gamma(1.0 + gamma).exp();
    assert!(
        (total_progress - closed_form).abs() <= 1e-9 * closed_form.abs().max(f64::MIN_POSITIVE),
        "per-segment progress {total_progress} disagrees with closed form {closed_form}"
    );

    Ok((Schedule { segments, total_progress }, DpTable { v, choice }))
}

/// Regime-dispatching entry point; the DP table is returned only when the
/// dynamic program ran.
pub fn optimal_schedule(
    t_total: u32,
    alpha: f64,
    beta: f64,
    reward: f64,
) -> Result<(Schedule, Option<DpTable>)> {
    validate(t_total, alpha, beta, reward)?;
    if t_total >= 2 && is_tai(beta, t_total, alpha)? {
        let (schedule, table) = schedule_tai_dp(t_total, alpha, beta, reward)?;
        Ok((schedule, Some(table)))
    } else {
        Ok((schedule_non_tai(t_total, alpha, beta, reward)?, None))
    }
}

/// Heuristic reward interval for `alpha = 2` in the window
/// `sqrt(2)-1 < beta < 1/2`: placing a reward every
/// `min(T, ceil(beta^2 / (1 - 2 beta)))` steps is nearly optimal. Outside
/// the window the closed-form schedules apply and this returns a domain
/// error.
pub fn nearly_optimal_interval(t_total: u32, beta: f64) -> Result<u32> {
    if t_total < 1 {
        return Err(Error::domain("T must be a positive integer"));
    }
    let lo = std::f64::consts::SQRT_2 - 1.0;
    if !(beta > lo && beta < 0.5) {
        return Err(Error::domain(format!(
            "beta = {beta} is outside (sqrt(2)-1, 1/2); the all-ones (beta <= sqrt(2)-1) or \
             lump-sum (beta >= 1/2) closed forms apply instead"
        )));
    }
    let interval = (beta * beta / (1.0 - 2.0 * beta)).ceil();
    Ok(interval.min(t_total as f64) as u32)
}

/// Progress ratio of the per-step schedule (`k = T`) to the lump-sum
/// schedule (`k = 1`): `T^(1-1/alpha) Γ(T) Γ(1+gamma) / Γ(T+gamma)`.
/// Grows without bound in `T` for strongly biased agents; the reward
/// budget cancels out of the ratio.
pub fn lump_vs_frequent_ratio(t_total: u32, alpha: f64, beta: f64, reward: f64) -> Result<f64> {
    validate(t_total, alpha, beta, reward)?;
    let gamma = gamma_of(alpha, beta);
    let t = t_total as f64;
    Ok(t.powf(1.0 - 1.0 / alpha)
        * (ln_gamma(t) + ln_gamma(1.0 + gamma) - ln_gamma(t + gamma)).exp())
}
