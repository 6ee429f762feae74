//! Grid navigation with patrolling UAVs as information sources.
//!
//! A robot moves on a `width × height` grid towards a goal cell while
//! avoiding obstacles. Its own sensor names its cell correctly only with
//! some probability; UAVs flying fixed patrol loops can be queried for a
//! report on the cells under them.

mod model;
mod scenario;
mod sim;

pub use model::{
    build_pomdp, cell_reward, field_of_view, initial_belief, transition_row, uav_sources_at, ACTION_NAMES,
    NUM_ACTIONS, STOP,
};
pub use scenario::{
    rectangle_loop, Cell, InitialBelief, PerceptionPolicy, Rewards, Scenario, SimulationSettings, SlipWeights,
    SolverSettings, UavSpec, DEFAULT_SCENARIO, SCENARIO_VERSION,
};
pub use sim::{monte_carlo, run_episode, run_scripted_episode, EpisodeRecord, SimResult, StepRecord};
