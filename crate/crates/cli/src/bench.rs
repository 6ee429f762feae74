//! Random-instance checks of the selection guarantees.

use std::fmt::Write as _;

use apercept::pbvi::{sample_beliefs_uniform, solve};
use apercept::random::{random_pomdp, random_selection_problem, ProblemShape};
use apercept::select::{brute_force_optimal, check_distance_bound, check_value_bound, generalized_greedy, greedy_ratio};
use apercept::SolverConfig;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::csv;
use crate::error::Result;

#[derive(Debug, Clone, Copy)]
pub struct BenchConfig {
    pub instances: usize,
    pub seed: u64,
    pub shape: ProblemShape,
    pub beta: f64,
    pub joint_cap: u128,
    /// Belief points for the small solve behind the value-gap check.
    pub beliefs: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub seed: u64,
    pub n: usize,
    pub budget: f64,
    pub greedy_utility: f64,
    pub optimal_utility: f64,
    pub ratio: f64,
    pub theorem1_pass: bool,
    pub theorem2_pass: bool,
    pub theorem3_pass: bool,
}

/// Instance `i` is drawn from seed `config.seed + i`.
pub fn run_instance(config: &BenchConfig, seed: u64) -> Result<BenchRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = random_selection_problem(&mut rng, config.shape)
        .with_beta(config.beta)?
        .with_joint_cap(config.joint_cap);
    let greedy = generalized_greedy(&p)?.utility;
    let optimal = brute_force_optimal(&p)?.utility;
    let ratio = if optimal > 0.0 { greedy / optimal } else { 1.0 };
    let ns = p.belief.len();
    let pomdp = random_pomdp(&mut rng, ns, 2, 2, 0.9);
    let points = sample_beliefs_uniform(ns, config.beliefs, seed);
    let vf = solve(&pomdp, &points, SolverConfig::default())?.value_function;
    Ok(BenchRow {
        seed,
        n: p.num_sources(),
        budget: p.budget,
        greedy_utility: greedy,
        optimal_utility: optimal,
        ratio,
        theorem1_pass: greedy >= greedy_ratio() * optimal - 1e-9,
        theorem2_pass: check_distance_bound(&p, &p.belief)?.pass,
        theorem3_pass: check_value_bound(&pomdp, &vf, &p, &p.belief)?.pass,
    })
}

pub fn run(config: &BenchConfig) -> Result<Vec<BenchRow>> {
    (0..config.instances as u64)
        .map(|i| run_instance(config, config.seed.wrapping_add(i)))
        .collect()
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = csv::header("select-bench");
    out.push_str("seed,n,budget,greedy_utility,optimal_utility,ratio,theorem1_pass,theorem2_pass,theorem3_pass\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.seed,
            r.n,
            r.budget,
            r.greedy_utility,
            r.optimal_utility,
            r.ratio,
            r.theorem1_pass,
            r.theorem2_pass,
            r.theorem3_pass
        );
    }
    out
}

pub fn summary(rows: &[BenchRow]) -> String {
    let min = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let fails = |f: fn(&BenchRow) -> bool| rows.iter().filter(|r| !f(r)).count();
    format!(
        "instances {} min_ratio {min:.6} bound {:.6} theorem1_failures {} theorem2_failures {} theorem3_failures {}",
        rows.len(),
        greedy_ratio(),
        fails(|r| r.theorem1_pass),
        fails(|r| r.theorem2_pass),
        fails(|r| r.theorem3_pass),
    )
}
