//! Analytic model of goal-directed agents under present bias.
//!
//! An agent works for `T` steps toward a progress goal `theta`, paying a
//! convex cost `delta^alpha` per step of progress and earning a reward `R`
//! only if the goal is met. The agent re-plans every step, inflating the
//! current step's cost by `1/beta` (quasi-hyperbolic discounting), which
//! makes it time-inconsistent: it may procrastinate, or start a task and
//! abandon it midway with nothing changed around it.
//!
//! The crate provides:
//!
//! - [`model`]: the closed-form trajectory and abandonment time, plus the
//!   one-step recurrence they telescope from;
//! - [`oracle`]: an independent brute-force grid simulator of the same
//!   agent, used to verify every closed form;
//! - [`threshold`]: the sharp threshold `beta0` below which a bias
//!   strength can induce mid-task abandonment;
//! - [`goal`]: optimal goal setting, with and without exploitative
//!   (never-claimed) rewards;
//! - [`schedule`]: optimal splitting of a period and reward budget into
//!   independently claimable segments.
//!
//! Everything is a pure function of its inputs; instances are immutable
//! after construction and safe to share across threads.

pub mod error;
pub mod gamma;
pub mod goal;
pub mod model;
pub mod oracle;
pub mod schedule;
pub mod threshold;

pub use error::{Error, Result};
pub use goal::{optimal_goal, GoalSolution};
pub use model::{cost, CostKernel, TaskParams, Trajectory};
pub use oracle::{oracle_trajectory, GridConfig, OracleRun, VerifyReport};
pub use schedule::{optimal_schedule, DpTable, Schedule, Segment};
pub use threshold::{beta0_exact, is_tai, ThresholdResult};
