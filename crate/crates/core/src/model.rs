//! Task parameterization and the analytic agent trajectory.
//!
//! An agent accumulates progress `x_0 .. x_T` toward a goal `theta` over
//! `T` steps. Each step of size Δ costs `Δ^alpha`, the reward `R` is paid
//! only if the final progress reaches the goal, and the agent re-plans
//! every step while overweighting the current step's cost by `1/beta`
//! (quasi-hyperbolic discounting). The whole path, including the time at
//! which the agent gives up on the reward, has a closed form; this module
//! implements it together with the one-step recurrence it telescopes from.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Strictly convex per-step effort cost.
///
/// `evaluate` returns `delta^alpha` for `delta >= 0` and positive infinity
/// otherwise: progress never decreases, so backward moves are priced out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostKernel {
    alpha: f64,
}

impl CostKernel {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 1.0) || !alpha.is_finite() {
            return Err(Error::domain(format!("alpha must be a finite real > 1, got {alpha}")));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    #[inline]
    pub fn evaluate(&self, delta: f64) -> f64 {
        if delta < 0.0 {
            f64::INFINITY
        } else {
            delta.powf(self.alpha)
        }
    }
}

/// One-step effort cost `delta^alpha`, infinite for negative `delta`.
pub fn cost(delta: f64, alpha: f64) -> Result<f64> {
    Ok(CostKernel::new(alpha)?.evaluate(delta))
}

/// Parameters of one agent/task instance.
///
/// The quintuple is the period `T`, cost exponent `alpha > 1`, present-bias
/// parameter `beta` in (0, 1], goal `theta >= 0`, and reward `R >= 0`.
/// `gamma = beta^(1/(alpha-1))` is derived once at construction and cached;
/// it is the natural variable for every closed form below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTaskParams")]
pub struct TaskParams {
    #[serde(rename = "T")]
    t_total: u32,
    alpha: f64,
    beta: f64,
    theta: f64,
    #[serde(rename = "R")]
    reward: f64,
    #[serde(skip)]
    gamma: f64,
}

#[derive(Deserialize)]
struct RawTaskParams {
    #[serde(rename = "T")]
    t_total: u32,
    alpha: f64,
    beta: f64,
    theta: f64,
    #[serde(rename = "R")]
    reward: f64,
}

impl TryFrom<RawTaskParams> for TaskParams {
    type Error = Error;

    fn try_from(raw: RawTaskParams) -> Result<Self> {
        TaskParams::new(raw.t_total, raw.alpha, raw.beta, raw.theta, raw.reward)
    }
}

impl TaskParams {
    pub fn new(t_total: u32, alpha: f64, beta: f64, theta: f64, reward: f64) -> Result<Self> {
        if t_total < 1 {
            return Err(Error::domain("T must be a positive integer"));
        }
        if !(alpha > 1.0) || !alpha.is_finite() {
            return Err(Error::domain(format!("alpha must be a finite real > 1, got {alpha}")));
        }
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(Error::domain(format!("beta must lie in (0, 1], got {beta}")));
        }
        if !(theta >= 0.0) || !theta.is_finite() {
            return Err(Error::domain(format!("theta must be a finite real >= 0, got {theta}")));
        }
        if !(reward >= 0.0) || !reward.is_finite() {
            return Err(Error::domain(format!("R must be a finite real >= 0, got {reward}")));
        }
        // Single rounding site for gamma; reused everywhere.
        let gamma = (beta.ln() / (alpha - 1.0)).exp();
        Ok(Self { t_total, alpha, beta, theta, reward, gamma })
    }

    pub fn t_total(&self) -> u32 {
        self.t_total
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn reward(&self) -> f64 {
        self.reward
    }

    /// Cached `beta^(1/(alpha-1))`.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn cost_kernel(&self) -> CostKernel {
        CostKernel { alpha: self.alpha }
    }

    /// Fraction of the gap to the goal still open after step `t`, i.e.
    /// `(T-t) / (T-t+gamma)`. Lies in [0, 1); zero at `t = T`.
    ///
    /// Panics if `t` is outside `1..=T`.
    pub fn gap_ratio(&self, t: u32) -> f64 {
        assert!(
            (1..=self.t_total).contains(&t),
            "step index {t} out of range 1..={}",
            self.t_total
        );
        let remaining = (self.t_total - t) as f64;
        remaining / (remaining + self.gamma)
    }

    /// Threshold on the reward density `R / theta^alpha` below which the
    /// agent gives up at time `t`:
    /// `(T-t-1+gamma)^(1-alpha) * prod_{i<=t} gap_ratio(i)^alpha`,
    /// accumulated in log space.
    ///
    /// Panics if `t` is outside `0..=T-1`.
    pub fn quit_threshold(&self, t: u32) -> f64 {
        assert!(
            t < self.t_total,
            "quit threshold index {t} out of range 0..={}",
            self.t_total - 1
        );
        let mut cum = 0.0;
        for i in 1..=t {
            cum += self.gap_ratio(i).ln();
        }
        self.ln_quit_threshold(t, cum).exp()
    }

    // `cum` must hold sum_{i=1..t} ln(gap_ratio(i)) accumulated left to
    // right, so that incremental callers match `quit_threshold` bit for bit.
    fn ln_quit_threshold(&self, t: u32, cum: f64) -> f64 {
        (1.0 - self.alpha) * ((self.t_total - t - 1) as f64 + self.gamma).ln() + self.alpha * cum
    }

    /// Time at which the agent abandons the reward: the smallest `t` with
    /// `quit_threshold(t) > R / theta^alpha` (strict; equality continues),
    /// or `T` when no such `t` exists. `theta = 0` yields `T` and
    /// `R = 0` with a positive goal yields 0 by convention.
    pub fn abandonment_time(&self) -> u32 {
        if self.theta == 0.0 {
            return self.t_total;
        }
        if self.reward == 0.0 {
            return 0;
        }
        let density = self.reward / self.theta.powf(self.alpha);
        let mut cum = 0.0;
        for t in 0..self.t_total {
            if self.ln_quit_threshold(t, cum).exp() > density {
                return t;
            }
            if t + 1 < self.t_total {
                cum += self.gap_ratio(t + 1).ln();
            }
        }
        self.t_total
    }

    /// The realized progress sequence and abandonment time in closed form.
    pub fn trajectory(&self) -> Trajectory {
        let steps = self.t_total as usize;
        let mut xs = vec![0.0; steps + 1];
        if self.theta == 0.0 {
            return Trajectory { params: self.clone(), t_star: self.t_total, xs };
        }
        let t_star = self.abandonment_time();
        let mut cum = 0.0;
        for t in 1..=(t_star as usize) {
            if t == steps {
                // gap_ratio(T) = 0, so the product telescopes to the goal.
                xs[t] = self.theta;
            } else {
                cum += self.gap_ratio(t as u32).ln();
                xs[t] = self.theta * (1.0 - cum.exp());
            }
        }
        for t in (t_star as usize + 1)..=steps {
            xs[t] = xs[t_star as usize];
        }
        Trajectory { params: self.clone(), t_star, xs }
    }

    /// One step of the agent's re-planned move: continue toward the goal
    /// when `x_prev` is at or above the give-up boundary (equality
    /// continues), otherwise stay put.
    ///
    /// Panics if `t` is outside `1..=T`.
    pub fn recurrence_step(&self, x_prev: f64, t: u32) -> f64 {
        assert!(
            (1..=self.t_total).contains(&t),
            "step index {t} out of range 1..={}",
            self.t_total
        );
        let slack = self.reward.powf(1.0 / self.alpha)
            * ((self.t_total - t) as f64 + self.gamma).powf((self.alpha - 1.0) / self.alpha);
        if x_prev >= self.theta - slack {
            self.theta + self.gap_ratio(t) * (x_prev - self.theta)
        } else {
            x_prev
        }
    }

    /// Reports the first decision time whose quit threshold sits within
    /// 1e-9 relative of `R / theta^alpha`. The abandonment comparison is a
    /// raw strict inequality, so such instances are numerically fragile and
    /// front ends should surface a warning.
    pub fn fragile_boundary(&self) -> Option<u32> {
        if self.theta == 0.0 || self.reward == 0.0 {
            return None;
        }
        let density = self.reward / self.theta.powf(self.alpha);
        (0..self.t_total).find(|&t| (self.quit_threshold(t) - density).abs() < 1e-9 * density)
    }

    /// Shifts `theta` by a relative amount below 1e-9 until the realized
    /// abandonment time equals `target`. Closed-form optimal goals sit
    /// exactly on the abandonment boundary, where the last rounding of the
    /// formula decides the strict comparison; this pins the side the
    /// semantics require. Abandonment is monotone in `theta`, so a single
    /// expanding search in the right direction suffices.
    pub(crate) fn nudge_theta_to_abandonment(&mut self, target: u32) {
        if self.theta == 0.0 {
            return;
        }
        let t_star = self.abandonment_time();
        if t_star == target {
            return;
        }
        // Smaller theta raises the reward density, postponing abandonment.
        let direction = if t_star < target { -1.0 } else { 1.0 };
        let original = self.theta;
        let mut relative_step = f64::EPSILON;
        while relative_step <= 1e-9 {
            self.theta = original * (1.0 + direction * relative_step);
            if self.abandonment_time() == target {
                return;
            }
            relative_step *= 2.0;
        }
        self.theta = original;
        debug_assert!(false, "theta nudge failed to reach abandonment time {target} for {self:?}");
    }
}

/// The realized progress sequence `x_0 .. x_T` plus the abandonment time.
///
/// `xs` starts at zero, never decreases, never exceeds the goal, and is
/// constant from `t_star` on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    params: TaskParams,
    t_star: u32,
    xs: Vec<f64>,
}

impl Trajectory {
    pub(crate) fn from_parts(params: TaskParams, t_star: u32, xs: Vec<f64>) -> Self {
        debug_assert_eq!(xs.len(), params.t_total as usize + 1);
        debug_assert_eq!(xs[0], 0.0);
        debug_assert!(t_star <= params.t_total);
        Self { params, t_star, xs }
    }

    pub fn params(&self) -> &TaskParams {
        &self.params
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn t_star(&self) -> u32 {
        self.t_star
    }

    /// True when the goal was reached (no abandonment).
    pub fn achieved(&self) -> bool {
        self.t_star == self.params.t_total
    }

    pub fn final_progress(&self) -> f64 {
        *self.xs.last().expect("trajectory holds T+1 points")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x\n");
        for (t, x) in self.xs.iter().enumerate() {
            out.push_str(&format!("{t},{x}\n"));
        }
        out
    }
}
