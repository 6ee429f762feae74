//! Episode rollouts and the Monte Carlo driver.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pbvi::ValueFunction;
use crate::pomdp::{belief_update_auxiliary, belief_update_intrinsic, Belief, InfoSource, PerceptionAction, Pomdp};
use crate::scalar::Real;
use crate::select::{generalized_greedy, SelectionProblem};

use super::model::{initial_belief, uav_sources_at};
use super::scenario::{PerceptionPolicy, Scenario};

// Independent random streams of one episode, so that e.g. the perception
// policy cannot shift the environment's transition draws.
const STREAM_ENV: u64 = 0;
const STREAM_SENSOR: u64 = 1;
const STREAM_UAV: u64 = 2;
const STREAM_RANDOM_SELECT: u64 = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    /// State the action was taken in.
    pub state: usize,
    pub action: usize,
    pub selected: Vec<usize>,
    /// `R(state, action)`, undiscounted.
    pub reward: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeRecord {
    pub seed: u64,
    pub steps: Vec<StepRecord>,
    pub final_state: usize,
    pub discounted_reward: f64,
    pub reached_goal: bool,
    /// Set when the episode stopped on an error (e.g. an observation the
    /// belief considered impossible).
    pub failure: Option<String>,
}

impl EpisodeRecord {
    /// `Σ_t γ^t r_t` recomputed from the stored steps.
    pub fn recompute_reward(&self, discount: f64) -> f64 {
        let mut g = 1.0;
        let mut total = 0.0;
        for s in &self.steps {
            total += g * s.reward;
            g *= discount;
        }
        total
    }
}

fn sample<T: Real, R: Rng>(rng: &mut R, probs: &[T]) -> Result<usize> {
    let dist = WeightedIndex::new(probs.iter().map(|p| p.as_f64()))
        .map_err(|e| Error::InvalidModel(format!("cannot sample from distribution: {e}")))?;
    Ok(dist.sample(rng))
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Picks the sources to query this step. Returns the problem's sources so
/// the caller can sample their reports.
fn select<T: Real, R: Rng>(
    policy: PerceptionPolicy,
    belief: &Belief<T>,
    action: usize,
    sources: Vec<InfoSource<T>>,
    rng: &mut R,
) -> Result<(PerceptionAction, Vec<InfoSource<T>>)> {
    match policy {
        PerceptionPolicy::None => Ok((PerceptionAction::empty(), sources)),
        PerceptionPolicy::Greedy(0) | PerceptionPolicy::Random(0) => Ok((PerceptionAction::empty(), sources)),
        PerceptionPolicy::Greedy(k) => {
            let problem = SelectionProblem::new(belief.clone(), action, sources, T::lit(k as f64))?;
            let outcome = generalized_greedy(&problem)?;
            Ok((outcome.selected, problem.sources))
        }
        PerceptionPolicy::Random(k) => {
            let mut order: Vec<usize> = (0..sources.len()).collect();
            order.shuffle(rng);
            let mut left = T::lit(k as f64);
            let mut picked = Vec::with_capacity(k);
            for i in order {
                if picked.len() == k {
                    break;
                }
                let c = sources[i].cost();
                if c <= left {
                    left = left - c;
                    picked.push(i);
                }
            }
            let sel = PerceptionAction::new(picked, sources.len())?;
            Ok((sel, sources))
        }
    }
}

fn rollout<T: Real>(
    pomdp: &Pomdp<T>,
    scenario: &Scenario,
    policy: PerceptionPolicy,
    seed: u64,
    mut choose: impl FnMut(usize, &Belief<T>) -> usize,
) -> Result<EpisodeRecord> {
    let mut env = stream(seed, STREAM_ENV);
    let mut sensor = stream(seed, STREAM_SENSOR);
    let mut uav = stream(seed, STREAM_UAV);
    let mut picker = stream(seed, STREAM_RANDOM_SELECT);

    let mut belief: Belief<T> = initial_belief(scenario)?;
    let mut state = sample(&mut env, belief.as_slice())?;
    let goal = scenario.goal_index();
    let gamma = scenario.discount;

    let mut record = EpisodeRecord {
        seed,
        steps: Vec::new(),
        final_state: state,
        discounted_reward: 0.0,
        reached_goal: false,
        failure: None,
    };
    let mut g = 1.0;
    for t in 0..scenario.horizon {
        if state == goal {
            break;
        }
        let action = choose(t, &belief);
        let reward = pomdp.reward(state, action).as_f64();
        record.discounted_reward += g * reward;
        g *= gamma;
        let next = sample(&mut env, pomdp.transition_row(state, action))?;
        let o = sample(&mut sensor, pomdp.observation_row(next, action))?;

        let step = (|| -> Result<Vec<usize>> {
            let b_prime = belief_update_intrinsic(pomdp, &belief, action, o)?;
            let sources = uav_sources_at::<T>(scenario, t)?;
            let (selected, sources) = select(policy, &b_prime, action, sources, &mut picker)?;
            let reports = selected
                .iter()
                .map(|i| sample(&mut uav, sources[i].row(next, action)))
                .collect::<Result<Vec<_>>>()?;
            belief = belief_update_auxiliary(&b_prime, action, &selected, &sources, &reports)?;
            Ok(selected.indices().to_vec())
        })();
        let (selected, failure) = match step {
            Ok(sel) => (sel, None),
            Err(e) => (Vec::new(), Some(e.to_string())),
        };
        record.steps.push(StepRecord {
            state,
            action,
            selected,
            reward,
        });
        state = next;
        if failure.is_some() {
            record.failure = failure;
            break;
        }
    }
    record.final_state = state;
    record.reached_goal = state == goal;
    Ok(record)
}

/// One episode acting greedily on `vf`. The robot stops as soon as it
/// stands on the goal, before choosing another action.
///
/// Errors only on malformed inputs; numerical failures during the belief
/// updates end the episode and are stored in [`EpisodeRecord::failure`].
pub fn run_episode<T: Real>(
    pomdp: &Pomdp<T>,
    vf: &ValueFunction<T>,
    scenario: &Scenario,
    policy: PerceptionPolicy,
    seed: u64,
) -> Result<EpisodeRecord> {
    check_inputs(pomdp, Some(vf), scenario, policy)?;
    rollout(pomdp, scenario, policy, seed, |_, b| vf.best_action(b))
}

/// Like [`run_episode`] but plays `actions[t]` at step `t` (the last one
/// repeated if the episode outlasts the script).
pub fn run_scripted_episode<T: Real>(
    pomdp: &Pomdp<T>,
    scenario: &Scenario,
    policy: PerceptionPolicy,
    actions: &[usize],
    seed: u64,
) -> Result<EpisodeRecord> {
    check_inputs(pomdp, None, scenario, policy)?;
    if actions.is_empty() || actions.iter().any(|&a| a >= pomdp.num_actions()) {
        return Err(Error::InvalidArgument("scripted actions must be nonempty and valid".into()));
    }
    rollout(pomdp, scenario, policy, seed, |t, _| actions[t.min(actions.len() - 1)])
}

fn check_inputs<T: Real>(
    pomdp: &Pomdp<T>,
    vf: Option<&ValueFunction<T>>,
    scenario: &Scenario,
    policy: PerceptionPolicy,
) -> Result<()> {
    if pomdp.num_states() != scenario.num_cells() {
        return Err(Error::InvalidArgument(format!(
            "model has {} states, scenario {} cells",
            pomdp.num_states(),
            scenario.num_cells()
        )));
    }
    if let Some(vf) = vf {
        if vf.num_states() != pomdp.num_states() {
            return Err(Error::InvalidArgument(format!(
                "value function covers {} states, model has {}",
                vf.num_states(),
                pomdp.num_states()
            )));
        }
        if let Some(a) = vf.alphas().iter().find(|a| a.action >= pomdp.num_actions()) {
            return Err(Error::InvalidArgument(format!("value function uses unknown action {}", a.action)));
        }
    }
    if policy.sources_per_step() > scenario.budget {
        return Err(Error::InvalidArgument(format!(
            "policy {policy} exceeds the per-step budget {}",
            scenario.budget
        )));
    }
    Ok(())
}

/// Aggregate of one policy's episodes.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub policy: PerceptionPolicy,
    pub episodes: Vec<EpisodeRecord>,
    /// `visits[row][col]`: how often the robot acted from that cell.
    pub visits: Vec<Vec<u64>>,
    pub mean_reward: f64,
    /// Sample standard deviation (0 for a single run).
    pub std_reward: f64,
}

impl SimResult {
    fn from_episodes(scenario: &Scenario, policy: PerceptionPolicy, episodes: Vec<EpisodeRecord>) -> Self {
        let mut visits = vec![vec![0u64; scenario.width]; scenario.height];
        for ep in &episodes {
            for s in &ep.steps {
                let c = scenario.cell(s.state);
                visits[c.row][c.col] += 1;
            }
        }
        let n = episodes.len() as f64;
        let mean = episodes.iter().map(|e| e.discounted_reward).sum::<f64>() / n;
        let std = if episodes.len() > 1 {
            let ss: f64 = episodes.iter().map(|e| (e.discounted_reward - mean).powi(2)).sum();
            (ss / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Self {
            policy,
            episodes,
            visits,
            mean_reward: mean,
            std_reward: std,
        }
    }

    pub fn total_steps(&self) -> usize {
        self.episodes.iter().map(|e| e.steps.len()).sum()
    }

    /// Visits summed over obstacle cells.
    pub fn obstacle_visits(&self, scenario: &Scenario) -> u64 {
        scenario.obstacles.iter().map(|c| self.visits[c.row][c.col]).sum()
    }

    pub fn failures(&self) -> usize {
        self.episodes.iter().filter(|e| e.failure.is_some()).count()
    }
}

/// Runs `n_runs` episodes per policy. Episode `i` uses seed
/// `base_seed + i` under every policy, so policies face the same draws.
pub fn monte_carlo<T: Real>(
    pomdp: &Pomdp<T>,
    vf: &ValueFunction<T>,
    scenario: &Scenario,
    policies: &[PerceptionPolicy],
    n_runs: usize,
    base_seed: u64,
) -> Result<Vec<SimResult>> {
    if n_runs == 0 {
        return Err(Error::InvalidArgument("need at least one run".into()));
    }
    policies
        .iter()
        .map(|&policy| {
            let episodes = (0..n_runs as u64)
                .map(|i| run_episode(pomdp, vf, scenario, policy, base_seed.wrapping_add(i)))
                .collect::<Result<Vec<_>>>()?;
            Ok(SimResult::from_episodes(scenario, policy, episodes))
        })
        .collect()
}
