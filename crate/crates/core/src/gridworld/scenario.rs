//! Scenario description and its TOML file format.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;

use crate::error::{Error, Result};

/// Shipped default: an 8×8 map with 12 patrolling UAVs.
pub const DEFAULT_SCENARIO: &str = include_str!("../../scenarios/default.toml");

pub const SCENARIO_VERSION: u32 = 1;

/// A grid cell; row 0 is the top row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Deserialize)]
#[serde(from = "[usize; 2]")]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }
}

impl From<[usize; 2]> for Cell {
    fn from([row, col]: [usize; 2]) -> Self {
        Self { row, col }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.row, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rewards {
    pub goal: f64,
    pub obstacle: f64,
    pub step: f64,
}

impl Default for Rewards {
    fn default() -> Self {
        Self {
            goal: 10.0,
            obstacle: -5.0,
            step: -1.0,
        }
    }
}

/// Relative weights of where a failed move ends up: the two perpendicular
/// neighbours and the current cell.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlipWeights {
    pub perpendicular: f64,
    pub stay: f64,
}

impl Default for SlipWeights {
    fn default() -> Self {
        Self {
            perpendicular: 1.0,
            stay: 1.0,
        }
    }
}

/// A UAV flying a periodic patrol and watching the cells within Chebyshev
/// distance `fov_radius` of its position.
#[derive(Debug, Clone, PartialEq)]
pub struct UavSpec {
    pub waypoints: Vec<Cell>,
    pub fov_radius: usize,
    pub detection_accuracy: f64,
    pub cost: f64,
}

impl UavSpec {
    pub fn position(&self, t: usize) -> Cell {
        self.waypoints[t % self.waypoints.len()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialBelief {
    /// The robot knows its start cell.
    Start,
    /// Uniform over all cells that are neither obstacles nor the goal.
    UniformFree,
}

/// Online perception policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PerceptionPolicy {
    None,
    /// `k` sources drawn uniformly at random among the affordable ones.
    Random(usize),
    /// Generalized greedy selection with budget `k`.
    Greedy(usize),
}

impl PerceptionPolicy {
    /// Filesystem-friendly name, e.g. `greedy2`.
    pub fn slug(&self) -> String {
        match self {
            Self::None => "none".into(),
            Self::Random(k) => format!("random{k}"),
            Self::Greedy(k) => format!("greedy{k}"),
        }
    }

    pub fn sources_per_step(&self) -> usize {
        match *self {
            Self::None => 0,
            Self::Random(k) | Self::Greedy(k) => k,
        }
    }
}

impl fmt::Display for PerceptionPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::None => f.write_str("none"),
            Self::Random(k) => write!(f, "random:{k}"),
            Self::Greedy(k) => write!(f, "greedy:{k}"),
        }
    }
}

impl FromStr for PerceptionPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("unknown policy `{s}` (none, random:K, greedy:K)"));
        if s == "none" {
            return Ok(Self::None);
        }
        let (kind, k) = s.split_once(':').ok_or_else(bad)?;
        let k: usize = k.parse().map_err(|_| bad())?;
        match kind {
            "random" => Ok(Self::Random(k)),
            "greedy" => Ok(Self::Greedy(k)),
            _ => Err(bad()),
        }
    }
}

/// Fields missing from a `[solver]` table keep their defaults.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSettings {
    pub beliefs: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            beliefs: 2000,
            seed: 1,
            tol: 1e-3,
            max_iter: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationSettings {
    pub runs: usize,
    pub seed: u64,
    pub policies: Vec<PerceptionPolicy>,
}

impl Default for SimulationSettings {
    fn default() -> Self {
        Self {
            runs: 50,
            seed: 1,
            policies: vec![
                PerceptionPolicy::None,
                PerceptionPolicy::Random(1),
                PerceptionPolicy::Random(2),
                PerceptionPolicy::Greedy(1),
                PerceptionPolicy::Greedy(2),
            ],
        }
    }
}

/// Grid navigation task with patrolling information sources.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub width: usize,
    pub height: usize,
    pub goal: Cell,
    pub start: Cell,
    pub obstacles: Vec<Cell>,
    pub rewards: Rewards,
    pub move_success_prob: f64,
    pub slip: SlipWeights,
    pub intrinsic_sensor_accuracy: f64,
    pub uavs: Vec<UavSpec>,
    /// Largest number of (unit cost) sources the robot may query per step.
    pub budget: usize,
    pub discount: f64,
    pub horizon: usize,
    pub initial_belief: InitialBelief,
    pub solver: SolverSettings,
    pub simulation: SimulationSettings,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct UavEntry {
    waypoints: Option<Vec<Cell>>,
    /// `[top, left, bottom, right]`: clockwise loop along the rectangle's
    /// border starting at its top-left corner.
    patrol_rect: Option<[usize; 4]>,
    #[serde(default = "default_fov")]
    fov_radius: usize,
    #[serde(default = "default_detection")]
    detection_accuracy: f64,
    #[serde(default = "default_cost")]
    cost: f64,
}

fn default_fov() -> usize {
    1
}

fn default_detection() -> f64 {
    0.9
}

fn default_cost() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimulationEntry {
    runs: Option<usize>,
    seed: Option<u64>,
    policies: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    version: u32,
    width: usize,
    height: usize,
    goal: Cell,
    start: Cell,
    #[serde(default)]
    obstacles: Vec<Cell>,
    #[serde(default)]
    rewards: Rewards,
    #[serde(default = "default_move")]
    move_success_prob: f64,
    #[serde(default)]
    slip: SlipWeights,
    #[serde(default = "default_sensor")]
    intrinsic_sensor_accuracy: f64,
    #[serde(default)]
    uavs: Vec<UavEntry>,
    #[serde(default = "default_budget")]
    budget: usize,
    #[serde(default = "default_discount")]
    discount: f64,
    #[serde(default = "default_horizon")]
    horizon: usize,
    #[serde(default = "default_initial")]
    initial_belief: InitialBelief,
    #[serde(default)]
    solver: SolverSettings,
    simulation: Option<SimulationEntry>,
}

fn default_move() -> f64 {
    0.7
}

fn default_sensor() -> f64 {
    0.5
}

fn default_budget() -> usize {
    2
}

fn default_discount() -> f64 {
    0.95
}

fn default_horizon() -> usize {
    40
}

fn default_initial() -> InitialBelief {
    InitialBelief::Start
}

/// Cells along the border of `[top, left, bottom, right]`, clockwise from
/// the top-left corner, without repeating the start.
pub fn rectangle_loop(top: usize, left: usize, bottom: usize, right: usize) -> Vec<Cell> {
    if top == bottom || left == right {
        // degenerate rectangle: a back-and-forth sweep along a line
        let line: Vec<Cell> = if top == bottom {
            (left..=right).map(|c| Cell::new(top, c)).collect()
        } else {
            (top..=bottom).map(|r| Cell::new(r, left)).collect()
        };
        let back = line.iter().rev().skip(1).take(line.len().saturating_sub(2)).copied();
        return line.iter().copied().chain(back).collect();
    }
    let mut cells = Vec::new();
    cells.extend((left..right).map(|c| Cell::new(top, c)));
    cells.extend((top..bottom).map(|r| Cell::new(r, right)));
    cells.extend((left + 1..=right).rev().map(|c| Cell::new(bottom, c)));
    cells.extend((top + 1..=bottom).rev().map(|r| Cell::new(r, left)));
    cells
}

impl Scenario {
    /// The shipped 8×8 scenario.
    pub fn paper_default() -> Self {
        Self::from_toml(DEFAULT_SCENARIO).expect("shipped scenario is valid")
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let file: ScenarioFile = toml::from_str(text).map_err(|e| Error::InvalidScenario(e.to_string()))?;
        if file.version != SCENARIO_VERSION {
            return Err(Error::InvalidScenario(format!(
                "unsupported scenario version {} (expected {SCENARIO_VERSION})",
                file.version
            )));
        }
        let mut uavs = Vec::with_capacity(file.uavs.len());
        for (i, u) in file.uavs.into_iter().enumerate() {
            let waypoints = match (u.waypoints, u.patrol_rect) {
                (Some(w), None) => w,
                (None, Some([t, l, b, r])) => {
                    if t > b || l > r {
                        return Err(Error::InvalidScenario(format!("uav {i}: inverted patrol rectangle")));
                    }
                    rectangle_loop(t, l, b, r)
                }
                _ => {
                    return Err(Error::InvalidScenario(format!(
                        "uav {i}: give exactly one of `waypoints` or `patrol_rect`"
                    )))
                }
            };
            uavs.push(UavSpec {
                waypoints,
                fov_radius: u.fov_radius,
                detection_accuracy: u.detection_accuracy,
                cost: u.cost,
            });
        }
        let mut simulation = SimulationSettings::default();
        if let Some(sim) = file.simulation {
            if let Some(r) = sim.runs {
                simulation.runs = r;
            }
            if let Some(s) = sim.seed {
                simulation.seed = s;
            }
            if let Some(p) = sim.policies {
                simulation.policies = p
                    .iter()
                    .map(|s| s.parse().map_err(|e: Error| Error::InvalidScenario(e.to_string())))
                    .collect::<Result<_>>()?;
            }
        }
        let scenario = Self {
            width: file.width,
            height: file.height,
            goal: file.goal,
            start: file.start,
            obstacles: file.obstacles,
            rewards: file.rewards,
            move_success_prob: file.move_success_prob,
            slip: file.slip,
            intrinsic_sensor_accuracy: file.intrinsic_sensor_accuracy,
            uavs,
            budget: file.budget,
            discount: file.discount,
            horizon: file.horizon,
            initial_belief: file.initial_belief,
            solver: file.solver,
            simulation,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn num_cells(&self) -> usize {
        self.width * self.height
    }

    #[inline]
    pub fn index(&self, cell: Cell) -> usize {
        cell.row * self.width + cell.col
    }

    #[inline]
    pub fn cell(&self, index: usize) -> Cell {
        Cell::new(index / self.width, index % self.width)
    }

    fn in_bounds(&self, c: Cell) -> bool {
        c.row < self.height && c.col < self.width
    }

    pub fn is_obstacle(&self, index: usize) -> bool {
        self.obstacles.iter().any(|&c| self.index(c) == index)
    }

    pub fn goal_index(&self) -> usize {
        self.index(self.goal)
    }

    pub fn start_index(&self) -> usize {
        self.index(self.start)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidScenario(m));
        if self.width == 0 || self.height == 0 {
            return bad("grid dimensions must be positive".into());
        }
        for (name, c) in [("goal", self.goal), ("start", self.start)] {
            if !self.in_bounds(c) {
                return bad(format!("{name} {c} outside the grid"));
            }
        }
        for &c in &self.obstacles {
            if !self.in_bounds(c) {
                return bad(format!("obstacle {c} outside the grid"));
            }
            if c == self.goal {
                return bad("goal cell is an obstacle".into());
            }
        }
        let probs = [
            ("move_success_prob", self.move_success_prob),
            ("intrinsic_sensor_accuracy", self.intrinsic_sensor_accuracy),
        ];
        for (name, p) in probs {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} = {p} is not a probability"));
            }
        }
        if !(self.slip.perpendicular >= 0.0 && self.slip.stay >= 0.0)
            || self.slip.perpendicular + self.slip.stay <= 0.0
        {
            return bad("slip weights must be nonnegative and not both zero".into());
        }
        if !(0.0..1.0).contains(&self.discount) {
            return bad(format!("discount {} not in [0, 1)", self.discount));
        }
        for (i, u) in self.uavs.iter().enumerate() {
            if u.waypoints.is_empty() {
                return bad(format!("uav {i} has no waypoints"));
            }
            if let Some(c) = u.waypoints.iter().find(|c| !self.in_bounds(**c)) {
                return bad(format!("uav {i} waypoint {c} outside the grid"));
            }
            if !(u.detection_accuracy > 0.0 && u.detection_accuracy <= 1.0) {
                return bad(format!("uav {i} detection accuracy {} not in (0, 1]", u.detection_accuracy));
            }
            if !(u.cost > 0.0) {
                return bad(format!("uav {i} cost must be positive"));
            }
        }
        if self.solver.beliefs == 0 || self.solver.max_iter == 0 || !(self.solver.tol > 0.0) {
            return bad("solver settings need beliefs >= 1, max_iter >= 1 and tol > 0".into());
        }
        if self.simulation.runs == 0 {
            return bad("simulation needs at least one run".into());
        }
        if let Some(p) = self
            .simulation
            .policies
            .iter()
            .find(|p| p.sources_per_step() > self.budget)
        {
            return bad(format!("policy {p} exceeds the per-step budget {}", self.budget));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "version = 1\nwidth = 3\nheight = 2\ngoal = [0, 2]\nstart = [1, 0]\n";

    #[test]
    fn shipped_scenario() {
        let sc = Scenario::paper_default();
        assert_eq!((sc.width, sc.height, sc.uavs.len(), sc.budget, sc.horizon), (8, 8, 12, 2, 40));
        assert_eq!(sc.simulation.runs, 50);
        assert!(sc.uavs.iter().all(|u| u.fov_radius == 1 && u.detection_accuracy == 0.9));
    }

    #[test]
    fn missing_fields_take_defaults() {
        let sc = Scenario::from_toml(&format!("{MINIMAL}[solver]\nbeliefs = 7\n")).unwrap();
        assert_eq!(sc.solver, SolverSettings { beliefs: 7, ..SolverSettings::default() });
        assert_eq!(sc.simulation, SimulationSettings::default());
        assert_eq!((sc.move_success_prob, sc.discount), (0.7, 0.95));
    }

    #[test]
    fn rejects_bad_files() {
        for text in [
            format!("{MINIMAL}colour = 3\n"),
            MINIMAL.replace("version = 1", "version = 2"),
            MINIMAL.replace("goal = [0, 2]", "goal = [0, 3]"),
            format!("{MINIMAL}obstacles = [[0, 2]]\n"),
            format!("{MINIMAL}[[uavs]]\npatrol_rect = [1, 1, 0, 0]\n"),
            format!("{MINIMAL}[[uavs]]\n"),
            format!("{MINIMAL}[simulation]\npolicies = [\"smart:2\"]\n"),
        ] {
            assert!(matches!(Scenario::from_toml(&text), Err(Error::InvalidScenario(_))), "{text}");
        }
    }

    #[test]
    fn patrol_loops() {
        let cells = |v: Vec<Cell>| v.into_iter().map(|c| (c.row, c.col)).collect::<Vec<_>>();
        assert_eq!(
            cells(rectangle_loop(0, 0, 1, 2)),
            [(0, 0), (0, 1), (0, 2), (1, 2), (1, 1), (1, 0)]
        );
        assert_eq!(cells(rectangle_loop(2, 0, 2, 3)), [(2, 0), (2, 1), (2, 2), (2, 3), (2, 2), (2, 1)]);
        assert_eq!(cells(rectangle_loop(1, 1, 1, 1)), [(1, 1)]);
        let u = UavSpec {
            waypoints: rectangle_loop(0, 0, 2, 2),
            fov_radius: 1,
            detection_accuracy: 0.9,
            cost: 1.0,
        };
        assert_eq!(u.position(8), u.position(0));
    }

    #[test]
    fn policy_names() {
        for (text, p) in [
            ("none", PerceptionPolicy::None),
            ("random:1", PerceptionPolicy::Random(1)),
            ("greedy:2", PerceptionPolicy::Greedy(2)),
        ] {
            assert_eq!(text.parse::<PerceptionPolicy>().unwrap(), p);
            assert_eq!(p.to_string(), text);
        }
        assert_eq!(PerceptionPolicy::Greedy(2).slug(), "greedy2");
        assert!("greedy".parse::<PerceptionPolicy>().is_err());
        assert!("random:x".parse::<PerceptionPolicy>().is_err());
    }
}
