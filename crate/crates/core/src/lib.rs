//! Budget-constrained online active perception for POMDPs.
//!
//! - [`pomdp`]: models, beliefs, information sources and Bayes updates
//! - [`pbvi`]: offline point-based value iteration
//! - [`select`]: mutual-information source selection (generalized greedy,
//!   exhaustive search, bound checks)
//! - [`gridworld`]: the grid navigation scenario with patrolling UAVs and a
//!   Monte Carlo driver
//! - [`io`]: text formats for models and value functions
//! - [`random`]: seeded random instances for tests and benchmarks
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below name the double-precision instantiations used by the CLI.

pub mod error;
pub mod gridworld;
pub mod io;
pub mod pbvi;
pub mod pomdp;
pub mod random;
pub mod scalar;
pub mod select;
mod simd;

pub use error::{Error, Result};
pub use pbvi::{AlphaVector, BeliefPointSet, SolveReport, SolverConfig, StopReason, ValueFunction};
pub use pomdp::{Belief, InfoSource, PerceptionAction, Pomdp};
pub use scalar::Real;
pub use select::{BoundReport, SelectionOutcome, SelectionProblem};

pub type Pomdp64 = Pomdp<f64>;
pub type Belief64 = Belief<f64>;
pub type InfoSource64 = InfoSource<f64>;
pub type AlphaVector64 = AlphaVector<f64>;
pub type ValueFunction64 = ValueFunction<f64>;
pub type BeliefPointSet64 = BeliefPointSet<f64>;
pub type SelectionProblem64 = SelectionProblem<f64>;
pub type SelectionOutcome64 = SelectionOutcome<f64>;

pub type Pomdp32 = Pomdp<f32>;
pub type Belief32 = Belief<f32>;
pub type ValueFunction32 = ValueFunction<f32>;
pub type SelectionProblem32 = SelectionProblem<f32>;
