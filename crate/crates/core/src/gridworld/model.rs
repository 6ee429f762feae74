//! Grid navigation POMDP and the UAV observation models.

use crate::error::Result;
use crate::pomdp::{Belief, InfoSource, Pomdp};
use crate::scalar::Real;

use super::scenario::{Cell, InitialBelief, Scenario};

pub const NUM_ACTIONS: usize = 5;
pub const ACTION_NAMES: [&str; NUM_ACTIONS] = ["up", "right", "down", "left", "stop"];
pub const STOP: usize = 4;

/// Row/column offset of each moving action.
const MOVES: [(isize, isize); 4] = [(-1, 0), (0, 1), (1, 0), (0, -1)];

fn step(scenario: &Scenario, from: Cell, dir: usize) -> Cell {
    let (dr, dc) = MOVES[dir];
    let r = from.row as isize + dr;
    let c = from.col as isize + dc;
    if r < 0 || c < 0 || r as usize >= scenario.height || c as usize >= scenario.width {
        from
    } else {
        Cell::new(r as usize, c as usize)
    }
}

/// Reward collected on arriving in `index`.
pub fn cell_reward(scenario: &Scenario, index: usize) -> f64 {
    if index == scenario.goal_index() {
        scenario.rewards.goal
    } else if scenario.is_obstacle(index) {
        scenario.rewards.obstacle
    } else {
        scenario.rewards.step
    }
}

/// `T(s, a, ·)` as a dense row over cells.
pub fn transition_row(scenario: &Scenario, s: usize, a: usize) -> Vec<f64> {
    let n = scenario.num_cells();
    let mut row = vec![0.0; n];
    if a == STOP || s == scenario.goal_index() {
        row[s] = 1.0;
        return row;
    }
    let here = scenario.cell(s);
    let p = scenario.move_success_prob;
    let w = scenario.slip;
    let total = 2.0 * w.perpendicular + w.stay;
    let perp = (1.0 - p) * w.perpendicular / total;
    let stay = (1.0 - p) * w.stay / total;
    row[scenario.index(step(scenario, here, a))] += p;
    row[scenario.index(step(scenario, here, (a + 1) % 4))] += perp;
    row[scenario.index(step(scenario, here, (a + 3) % 4))] += perp;
    row[s] += stay;
    row
}

/// Builds the navigation model. States are cells in row-major order,
/// actions are [`ACTION_NAMES`], and observations are cell identities read
/// by the on-board sensor.
///
/// `R(s, a)` is the expected reward of the cell the robot lands in. The
/// goal is absorbing and pays nothing once reached.
pub fn build_pomdp<T: Real>(scenario: &Scenario) -> Result<Pomdp<T>> {
    scenario.validate()?;
    let n = scenario.num_cells();
    let goal = scenario.goal_index();
    let mut transition = Vec::with_capacity(n * NUM_ACTIONS * n);
    let mut reward = Vec::with_capacity(n * NUM_ACTIONS);
    let arrival: Vec<f64> = (0..n).map(|s| cell_reward(scenario, s)).collect();
    for s in 0..n {
        for a in 0..NUM_ACTIONS {
            let row = transition_row(scenario, s, a);
            let r = if s == goal {
                0.0
            } else {
                row.iter().zip(&arrival).map(|(p, r)| p * r).sum()
            };
            reward.push(T::lit(r));
            transition.extend(row.into_iter().map(T::lit));
        }
    }
    let acc = scenario.intrinsic_sensor_accuracy;
    let miss = if n > 1 { (1.0 - acc) / (n - 1) as f64 } else { 0.0 };
    let hit = if n > 1 { acc } else { 1.0 };
    let mut observation = Vec::with_capacity(n * NUM_ACTIONS * n);
    for s in 0..n {
        for _ in 0..NUM_ACTIONS {
            observation.extend((0..n).map(|o| T::lit(if o == s { hit } else { miss })));
        }
    }
    Pomdp::new(
        n,
        NUM_ACTIONS,
        n,
        transition,
        observation,
        reward,
        T::lit(scenario.discount),
    )
}

/// Cells within Chebyshev distance `radius` of `center`, row-major.
pub fn field_of_view(scenario: &Scenario, center: Cell, radius: usize) -> Vec<Cell> {
    let r0 = center.row.saturating_sub(radius);
    let r1 = (center.row + radius).min(scenario.height - 1);
    let c0 = center.col.saturating_sub(radius);
    let c1 = (center.col + radius).min(scenario.width - 1);
    (r0..=r1)
        .flat_map(|r| (c0..=c1).map(move |c| Cell::new(r, c)))
        .collect()
}

/// The UAV sources available at step `t`, one per UAV in scenario order.
///
/// Reports `0..k` name the `k` cells of the UAV's field of view (row-major)
/// and report `k` means "not seen". A robot inside the view is reported
/// correctly with the UAV's detection accuracy; the rest of the mass is
/// spread evenly over the other `k` reports.
pub fn uav_sources_at<T: Real>(scenario: &Scenario, t: usize) -> Result<Vec<InfoSource<T>>> {
    let n = scenario.num_cells();
    scenario
        .uavs
        .iter()
        .map(|uav| {
            let fov = field_of_view(scenario, uav.position(t), uav.fov_radius);
            let k = fov.len();
            let miss = (1.0 - uav.detection_accuracy) / k as f64;
            let mut rows = vec![vec![T::zero(); k + 1]; n];
            for row in rows.iter_mut() {
                row[k] = T::one();
            }
            for (j, &cell) in fov.iter().enumerate() {
                let row = &mut rows[scenario.index(cell)];
                for (o, x) in row.iter_mut().enumerate() {
                    *x = T::lit(if o == j { uav.detection_accuracy } else { miss });
                }
            }
            InfoSource::action_independent(&rows, NUM_ACTIONS, T::lit(uav.cost))
        })
        .collect()
}

pub fn initial_belief<T: Real>(scenario: &Scenario) -> Result<Belief<T>> {
    let n = scenario.num_cells();
    match scenario.initial_belief {
        InitialBelief::Start => Ok(Belief::point(n, scenario.start_index())),
        InitialBelief::UniformFree => {
            let goal = scenario.goal_index();
            let weights = (0..n)
                .map(|s| {
                    if s == goal || scenario.is_obstacle(s) {
                        T::zero()
                    } else {
                        T::one()
                    }
                })
                .collect();
            Belief::from_weights(weights)
        }
    }
}
