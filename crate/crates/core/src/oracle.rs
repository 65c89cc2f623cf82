//! Brute-force grid simulator of the agent's per-step re-planning.
//!
//! Each move is re-derived from the minimization that defines the agent:
//! discretize progress on `[0, theta]`, evaluate the biased first-step
//! cost plus the continuation value at every candidate, and take the
//! minimizer. The continuation value is itself computed by backward
//! dynamic programming over the same grid with unbiased costs and the
//! reward granted only at the goal. None of the closed forms from the
//! analytic modules enter; agreement under grid refinement is the
//! correctness evidence for them.
//!
//! The plan is recomputed from scratch at every outer step, mirroring the
//! agent's re-planning; only the current step's cost carries the `1/beta`
//! inflation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{TaskParams, Trajectory};

/// Near-tie tolerance when recording ambiguous argmins.
const TIE_RTOL: f64 = 1e-12;

/// Discretization settings for the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridConfig {
    n_points: u32,
    refine_rounds: u32,
    budget: u64,
}

impl GridConfig {
    /// Default cap on `T * n_points` grid-cell evaluations.
    pub const DEFAULT_BUDGET: u64 = 10_000_000;

    pub fn new(n_points: u32, refine_rounds: u32) -> Result<Self> {
        if n_points < 16 {
            return Err(Error::domain(format!(
                "grid too coarse: n_points must be >= 16, got {n_points}"
            )));
        }
        Ok(Self { n_points, refine_rounds, budget: Self::DEFAULT_BUDGET })
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn n_points(&self) -> u32 {
        self.n_points
    }

    pub fn refine_rounds(&self) -> u32 {
        self.refine_rounds
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// Grid spacing for a goal of `theta`: intervals of `theta / n_points`,
    /// so resolution scales per unit of goal.
    pub fn spacing(&self, theta: f64) -> f64 {
        theta / self.n_points as f64
    }
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { n_points: 4096, refine_rounds: 1, budget: Self::DEFAULT_BUDGET }
    }
}

// out[j] = min over j' >= j of ((j'-j) h)^alpha + next[j'].
//
// The candidate function is convex in j' (convex step cost plus a convex
// continuation), so its argmin is non-decreasing in j and one pointer
// sweep suffices. Equality advances the pointer, which also carries it
// across the +infinity plateau of the terminal layer.
fn climb_layer(alpha: f64, h: f64, next: &[f64], out: &mut [f64]) {
    let top = next.len() - 1;
    let mut pointer = 0usize;
    for j in 0..=top {
        if pointer < j {
            pointer = j;
        }
        let eval = |jp: usize| ((jp - j) as f64 * h).powf(alpha) + next[jp];
        let mut best = eval(pointer);
        while pointer < top {
            let candidate = eval(pointer + 1);
            if candidate <= best {
                pointer += 1;
                best = candidate;
            } else {
                break;
            }
        }
        out[j] = best;
    }
}

// Continuation cost-to-goal at time `t`: w[j] is the cheapest unbiased
// cost of climbing from grid cell j to the goal by time T. Only the
// terminal layer is infinite off the goal.
fn climb_costs(params: &TaskParams, t: u32, n: usize, h: f64) -> Vec<f64> {
    let mut w = vec![f64::INFINITY; n + 1];
    w[n] = 0.0;
    let mut scratch = vec![0.0; n + 1];
    for _ in t..params.t_total() {
        climb_layer(params.alpha(), h, &w, &mut scratch);
        std::mem::swap(&mut w, &mut scratch);
    }
    w
}

fn step_on_grid(params: &TaskParams, t: u32, j_prev: usize, grid: &GridConfig) -> (usize, bool) {
    let n = grid.n_points as usize;
    let h = grid.spacing(params.theta());
    let w = climb_costs(params, t, n, h);
    let inv_beta = 1.0 / params.beta();
    let reward = params.reward();
    let objective = |j: usize| {
        inv_beta * ((j - j_prev) as f64 * h).powf(params.alpha()) + (w[j] - reward).min(0.0)
    };
    let mut best_j = j_prev;
    let mut best = objective(j_prev);
    for j in (j_prev + 1)..=n {
        let value = objective(j);
        // Strict improvement only: ties resolve toward smaller progress.
        if value < best {
            best = value;
            best_j = j;
        }
    }
    let tol = TIE_RTOL * best.abs().max(1.0);
    let tied = (j_prev..=n).filter(|&j| (objective(j) - best).abs() <= tol).count() > 1;
    (best_j, tied)
}

/// One re-planned move on the grid: the point in `[x_prev, theta]`
/// minimizing the biased step cost plus the continuation value, ties
/// toward smaller progress. `x_prev` is snapped to the nearest grid point.
///
/// Panics if `t` is outside `1..=T`.
pub fn oracle_step(x_prev: f64, t: u32, params: &TaskParams, grid: &GridConfig) -> Result<f64> {
    assert!(
        (1..=params.t_total()).contains(&t),
        "step index {t} out of range 1..={}",
        params.t_total()
    );
    if grid.n_points < 16 {
        return Err(Error::domain(format!(
            "grid too coarse: n_points must be >= 16, got {}",
            grid.n_points
        )));
    }
    if params.theta() == 0.0 {
        return Ok(0.0);
    }
    let n = grid.n_points as usize;
    let h = grid.spacing(params.theta());
    let j_prev = ((x_prev / h).round() as usize).min(n);
    let (j, _) = step_on_grid(params, t, j_prev, grid);
    Ok(j as f64 * h)
}

/// A simulated trajectory plus bookkeeping about ambiguous argmins.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleRun {
    pub trajectory: Trajectory,
    /// Number of steps whose argmin was tied within 1e-12 relative.
    pub tie_steps: u32,
}

/// Simulate the whole trajectory on the grid. The abandonment time is the
/// step before the first move smaller than one grid spacing.
///
/// Fails with a resource error when `T * n_points` exceeds the configured
/// budget.
pub fn oracle_run(params: &TaskParams, grid: &GridConfig) -> Result<OracleRun> {
    if grid.n_points < 16 {
        return Err(Error::domain(format!(
            "grid too coarse: n_points must be >= 16, got {}",
            grid.n_points
        )));
    }
    let product = params.t_total() as u64 * grid.n_points as u64;
    if product > grid.budget {
        return Err(Error::Resource { product, budget: grid.budget });
    }

    let t_total = params.t_total();
    let steps = t_total as usize;
    if params.theta() == 0.0 {
        let xs = vec![0.0; steps + 1];
        return Ok(OracleRun {
            trajectory: Trajectory::from_parts(params.clone(), t_total, xs),
            tie_steps: 0,
        });
    }

    let h = grid.spacing(params.theta());
    let mut cells = vec![0usize; steps + 1];
    let mut tie_steps = 0;
    for t in 1..=t_total {
        let (j, tied) = step_on_grid(params, t, cells[t as usize - 1], grid);
        cells[t as usize] = j;
        tie_steps += tied as u32;
    }

    // Moves are whole grid cells, so "below one spacing" means no move.
    let t_star = (1..=steps)
        .find(|&t| cells[t] == cells[t - 1])
        .map(|t| t as u32 - 1)
        .unwrap_or(t_total);
    let xs: Vec<f64> = cells.iter().map(|&j| j as f64 * h).collect();
    Ok(OracleRun { trajectory: Trajectory::from_parts(params.clone(), t_star, xs), tie_steps })
}

/// Simulate the whole trajectory on the grid; see [`oracle_run`].
pub fn oracle_trajectory(params: &TaskParams, grid: &GridConfig) -> Result<Trajectory> {
    oracle_run(params, grid).map(|run| run.trajectory)
}

/// Comparison of one simulated trajectory against the closed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub max_abs_err: f64,
    pub grid_spacing: f64,
    pub per_t: Vec<f64>,
}

/// Compare the oracle against the analytic trajectory at the grid's base
/// resolution.
pub fn verify_trajectory(params: &TaskParams, grid: &GridConfig) -> Result<VerifyReport> {
    let analytic = params.trajectory();
    let simulated = oracle_trajectory(params, grid)?;
    let per_t: Vec<f64> = analytic
        .xs()
        .iter()
        .zip(simulated.xs())
        .map(|(a, o)| (a - o).abs())
        .collect();
    let max_abs_err = per_t.iter().cloned().fold(0.0, f64::max);
    Ok(VerifyReport { max_abs_err, grid_spacing: grid.spacing(params.theta()), per_t })
}

/// Run the comparison at the base resolution and once more per refinement
/// round, doubling the point count (halving the spacing) each time. The
/// refined grids nest the coarse one.
pub fn verify_refinement(params: &TaskParams, grid: &GridConfig) -> Result<Vec<VerifyReport>> {
    let mut reports = Vec::with_capacity(grid.refine_rounds as usize + 1);
    for round in 0..=grid.refine_rounds {
        let n = grid
            .n_points
            .checked_shl(round)
            .ok_or_else(|| Error::domain("refined grid overflows u32".to_string()))?;
        let refined = GridConfig::new(n, 0)?.with_budget(grid.budget);
        reports.push(verify_trajectory(params, &refined)?);
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(t: u32, alpha: f64, beta: f64, theta: f64, reward: f64) -> TaskParams {
        TaskParams::new(t, alpha, beta, theta, reward).unwrap()
    }

    fn brute_climb_layer(alpha: f64, h: f64, next: &[f64], out: &mut [f64]) {
        let top = next.len() - 1;
        for j in 0..=top {
            out[j] = (j..=top)
                .map(|jp| ((jp - j) as f64 * h).powf(alpha) + next[jp])
                .fold(f64::INFINITY, f64::min);
        }
    }

    #[test]
    fn pointer_layer_matches_brute_force() {
        // Terminal layer, a generic convex layer, and a noisy-but-convex one.
        let h = 1.0 / 64.0;
        let mut terminal = vec![f64::INFINITY; 65];
        terminal[64] = 0.0;
        let quadratic: Vec<f64> = (0..=64).map(|j| (64 - j) as f64 * h).map(|d| d * d).collect();
        let shifted: Vec<f64> = quadratic.iter().map(|v| 0.5 * v + 0.01).collect();
        for next in [&terminal, &quadratic, &shifted] {
            for alpha in [1.5, 2.0, 3.0, 10.0] {
                let mut fast = vec![0.0; 65];
                let mut slow = vec![0.0; 65];
                climb_layer(alpha, h, next, &mut fast);
                brute_climb_layer(alpha, h, next, &mut slow);
                assert_eq!(fast, slow, "alpha = {alpha}");
            }
        }
    }

    #[test]
    fn grid_config_validation() {
        assert!(GridConfig::new(15, 0).is_err());
        let grid = GridConfig::new(16, 2).unwrap();
        assert_eq!(grid.n_points(), 16);
        assert_eq!(grid.budget(), GridConfig::DEFAULT_BUDGET);
    }

    #[test]
    fn step_examples() {
        let grid = GridConfig::new(4096, 0).unwrap();

        // Fixed point at the goal.
        let p = params(2, 2.0, 0.5, 1.0, 1.0);
        assert_eq!(oracle_step(1.0, 1, &p, &grid).unwrap(), 1.0);

        // Continue branch converges to 1/3.
        let y = oracle_step(0.0, 1, &p, &grid).unwrap();
        assert!((y - 1.0 / 3.0).abs() <= grid.spacing(1.0), "y = {y}");

        // Give-up branch stays at zero.
        let p = params(2, 2.0, 0.5, 1.0, 0.6);
        let y = oracle_step(0.0, 1, &p, &grid).unwrap();
        assert!(y.abs() <= grid.spacing(1.0), "y = {y}");
    }

    #[test]
    fn trajectory_examples() {
        let grid = GridConfig::new(4096, 0).unwrap();

        let run = oracle_run(&params(2, 2.0, 0.5, 1.0, 1.0), &grid).unwrap();
        let xs = run.trajectory.xs();
        assert!((xs[1] - 1.0 / 3.0).abs() <= 2.0 * grid.spacing(1.0));
        assert!((xs[2] - 1.0).abs() <= 2.0 * grid.spacing(1.0));
        assert_eq!(run.trajectory.t_star(), 2);

        // Single step with a dominating reward.
        let run = oracle_run(&params(1, 2.0, 0.5, 1.0, 10.0), &grid).unwrap();
        assert_eq!(run.trajectory.xs(), &[0.0, 1.0]);

        // Unbiased agent moves linearly.
        let run = oracle_run(&params(4, 2.0, 1.0, 1.0, 1.0), &grid).unwrap();
        for (t, &x) in run.trajectory.xs().iter().enumerate() {
            assert!((x - t as f64 / 4.0).abs() <= 2.0 * grid.spacing(1.0));
        }
        assert_eq!(run.trajectory.t_star(), 4);
    }

    #[test]
    fn abandonment_cases_match_analytic() {
        let grid = GridConfig::new(2048, 0).unwrap();
        let run = oracle_run(&params(2, 2.0, 0.5, 1.0, 0.7), &grid).unwrap();
        assert_eq!(run.trajectory.t_star(), 1);
        let run = oracle_run(&params(2, 2.0, 0.5, 1.0, 0.6), &grid).unwrap();
        assert_eq!(run.trajectory.t_star(), 0);
        assert!(run.trajectory.xs().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn degenerate_goals_and_rewards() {
        let grid = GridConfig::default();
        let run = oracle_run(&params(3, 2.0, 0.5, 0.0, 1.0), &grid).unwrap();
        assert_eq!(run.trajectory.t_star(), 3);
        assert!(run.trajectory.xs().iter().all(|&x| x == 0.0));

        let run = oracle_run(&params(3, 2.0, 0.5, 1.0, 0.0), &grid).unwrap();
        assert_eq!(run.trajectory.t_star(), 0);
        assert!(run.trajectory.xs().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn progress_never_decreases() {
        let grid = GridConfig::new(512, 0).unwrap();
        for beta in [0.2, 0.5, 0.9] {
            let run = oracle_run(&params(6, 1.5, beta, 1.0, 0.8), &grid).unwrap();
            assert!(run.trajectory.xs().windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn budget_is_enforced() {
        let grid = GridConfig::new(4096, 0).unwrap();
        let err = oracle_run(&params(10_000, 2.0, 0.5, 1.0, 1.0), &grid).unwrap_err();
        match err {
            Error::Resource { product, budget } => {
                assert_eq!(product, 10_000 * 4096);
                assert_eq!(budget, GridConfig::DEFAULT_BUDGET);
            }
            other => panic!("expected resource error, got {other:?}"),
        }
    }

    #[test]
    fn verify_report_shape() {
        let grid = GridConfig::new(1024, 1).unwrap();
        let p = params(3, 2.0, 0.5, 1.0, 1.0);
        let reports = verify_refinement(&p, &grid).unwrap();
        assert_eq!(reports.len(), 2);
        assert_eq!(reports[0].per_t.len(), 4);
        assert!((reports[0].grid_spacing - 1.0 / 1024.0).abs() < 1e-18);
        assert!((reports[1].grid_spacing - 1.0 / 2048.0).abs() < 1e-18);
        for report in &reports {
            assert!(report.max_abs_err <= 3.0 * report.grid_spacing);
        }
    }
}
