//! `apercept`: solve the grid scenario, simulate perception policies,
//! benchmark the selection guarantees and summarize results as CSV.

mod bench;
mod csv;
mod error;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use apercept::gridworld::{build_pomdp, monte_carlo, PerceptionPolicy, Scenario};
use apercept::io::{read_value_function, write_value_function};
use apercept::pbvi::{initialize_value, sample_beliefs_uniform, solve_from};
use apercept::random::ProblemShape;
use apercept::select::DEFAULT_JOINT_CAP;
use apercept::{Pomdp64, SolverConfig, ValueFunction64};
use clap::{Args, Parser, Subcommand};

use crate::error::{at, CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "apercept", version, about = "Budget-constrained active perception on a grid world")]
struct Cli {
    /// Directory for every output file. Created if missing.
    #[arg(long, global = true, env = "APERCEPT_OUT_DIR", default_value = ".")]
    out_dir: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve the scenario's POMDP offline and write the value function.
    Solve(SolveArgs),
    /// Run Monte Carlo episodes and write reward and visit CSVs per policy.
    Simulate(SimulateArgs),
    /// Check the greedy selection guarantees on random instances.
    SelectBench(BenchArgs),
    /// Summarize the CSVs written by `simulate`.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
struct ScenarioArgs {
    /// Scenario TOML file; the shipped 8×8 map when omitted.
    #[arg(long)]
    scenario: Option<PathBuf>,
}

/// Overrides for the scenario's `[solver]` table.
#[derive(Debug, Args)]
struct SolverArgs {
    /// Number of sampled belief points (corners are always added).
    #[arg(long)]
    beliefs: Option<usize>,
    /// Seed for the belief sample.
    #[arg(long)]
    belief_seed: Option<u64>,
    /// ℓ1 convergence threshold over the belief points.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Print the ℓ1 change every N iterations to stderr.
    #[arg(long, value_name = "N")]
    progress: Option<usize>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[command(flatten)]
    solver: SolverArgs,
    /// Output file, relative to the output directory.
    #[arg(long, default_value = "value_function.txt")]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Previously solved value function; solved on demand when omitted.
    #[arg(long)]
    value_function: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverArgs,
    /// Perception policy (`none`, `random:K`, `greedy:K`); repeat for several.
    #[arg(long = "policy", value_name = "POLICY")]
    policies: Vec<PerceptionPolicy>,
    /// Episodes per policy.
    #[arg(long)]
    runs: Option<usize>,
    /// Seed of the first episode; episode i uses seed + i.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 1000)]
    instances: usize,
    /// Seed of the first instance; instance i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cost exponent in the greedy ratio.
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Largest joint observation alphabet an entropy evaluation may enumerate.
    #[arg(long, default_value_t = DEFAULT_JOINT_CAP)]
    joint_cap: u128,
    #[arg(long, default_value_t = 6)]
    max_states: usize,
    #[arg(long, default_value_t = 10)]
    max_sources: usize,
    #[arg(long, default_value_t = 3)]
    max_alphabet: usize,
    /// Belief points for the small solve behind the value-gap check.
    #[arg(long, default_value_t = 20)]
    beliefs: usize,
    /// Output file, relative to the output directory.
    #[arg(long, default_value = "select_bench.csv")]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct ReportArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Directory holding `rewards_*.csv` and `visits_*.csv`; defaults to the
    /// output directory.
    #[arg(long)]
    input_dir: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    std::fs::create_dir_all(&cli.out_dir).map_err(|e| CliError::File {
        path: cli.out_dir.clone(),
        source: e.into(),
    })?;
    match cli.command {
        Command::Solve(args) => cmd_solve(&cli.out_dir, args),
        Command::Simulate(args) => cmd_simulate(&cli.out_dir, args),
        Command::SelectBench(args) => cmd_select_bench(&cli.out_dir, args),
        Command::Report(args) => cmd_report(&cli.out_dir, args),
    }
}

fn load_scenario(args: &ScenarioArgs) -> Result<Scenario> {
    match &args.scenario {
        Some(path) => at(path, Scenario::from_file(path)),
        None => Ok(Scenario::paper_default()),
    }
}

fn apply_solver_flags(scenario: &mut Scenario, args: &SolverArgs) {
    let s = &mut scenario.solver;
    s.beliefs = args.beliefs.unwrap_or(s.beliefs);
    s.seed = args.belief_seed.unwrap_or(s.seed);
    s.tol = args.tol.unwrap_or(s.tol);
    s.max_iter = args.max_iter.unwrap_or(s.max_iter);
}

fn solve_scenario(scenario: &Scenario, pomdp: &Pomdp64, progress: Option<usize>) -> Result<ValueFunction64> {
    let s = &scenario.solver;
    let config = SolverConfig {
        tol: s.tol,
        max_iter: s.max_iter,
    };
    let points = sample_beliefs_uniform(pomdp.num_states(), s.beliefs, s.seed);
    let every = progress.unwrap_or(0);
    let report = solve_from(pomdp, &points, initialize_value(pomdp), config, |it, delta, size| {
        if every > 0 && it % every == 0 {
            eprintln!("iteration {it}: delta {delta:.6}, {size} vectors");
        }
    })?;
    println!(
        "stopped: {:?} after {} iterations, final l1 delta {}, {} vectors",
        report.stop,
        report.iterations,
        report.final_delta,
        report.value_function.len()
    );
    Ok(report.value_function)
}

fn cmd_solve(out_dir: &Path, args: SolveArgs) -> Result<()> {
    let mut scenario = load_scenario(&args.scenario)?;
    apply_solver_flags(&mut scenario, &args.solver);
    let pomdp: Pomdp64 = build_pomdp(&scenario)?;
    let vf = solve_scenario(&scenario, &pomdp, args.solver.progress)?;
    let path = out_dir.join(&args.output);
    csv::write(&path, &write_value_function(&vf))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_simulate(out_dir: &Path, args: SimulateArgs) -> Result<()> {
    let mut scenario = load_scenario(&args.scenario)?;
    apply_solver_flags(&mut scenario, &args.solver);
    let sim = &mut scenario.simulation;
    sim.runs = args.runs.unwrap_or(sim.runs);
    sim.seed = args.seed.unwrap_or(sim.seed);
    if !args.policies.is_empty() {
        sim.policies = args.policies.clone();
    }
    let pomdp: Pomdp64 = build_pomdp(&scenario)?;
    let vf = match &args.value_function {
        Some(path) => {
            let vf: ValueFunction64 = at(path, read_value_function(path))?;
            if vf.num_states() != pomdp.num_states() {
                return Err(CliError::Config(format!(
                    "{}: value function has {} states, scenario has {}",
                    path.display(),
                    vf.num_states(),
                    pomdp.num_states()
                )));
            }
            vf
        }
        None => {
            let vf = solve_scenario(&scenario, &pomdp, args.solver.progress)?;
            csv::write(&out_dir.join("value_function.txt"), &write_value_function(&vf))?;
            vf
        }
    };
    let sim = &scenario.simulation;
    let results = monte_carlo(&pomdp, &vf, &scenario, &sim.policies, sim.runs, sim.seed)?;
    println!("{:<10} {:>10} {:>8} {:>10} {:>6} {:>8}", "policy", "mean", "std", "obstacles", "goal", "failed");
    for r in &results {
        let slug = r.policy.slug();
        csv::write(&out_dir.join(format!("rewards_{slug}.csv")), &csv::rewards(r))?;
        csv::write(&out_dir.join(format!("visits_{slug}.csv")), &csv::visits(r))?;
        println!(
            "{:<10} {:>10.4} {:>8.4} {:>10} {:>6} {:>8}",
            r.policy.to_string(),
            r.mean_reward,
            r.std_reward,
            r.obstacle_visits(&scenario),
            r.episodes.iter().filter(|e| e.reached_goal).count(),
            r.failures()
        );
    }
    Ok(())
}

fn cmd_select_bench(out_dir: &Path, args: BenchArgs) -> Result<()> {
    if args.instances == 0 {
        return Err(CliError::Config("need at least one instance".into()));
    }
    if args.max_states < 2 || args.max_sources < 1 || args.max_alphabet < 2 {
        return Err(CliError::Config(
            "instances need at least 2 states, 1 source and alphabets of 2".into(),
        ));
    }
    if args.max_sources > apercept::select::MAX_BRUTE_FORCE_SOURCES {
        return Err(CliError::Config(format!(
            "exhaustive search is capped at {} sources",
            apercept::select::MAX_BRUTE_FORCE_SOURCES
        )));
    }
    let config = bench::BenchConfig {
        instances: args.instances,
        seed: args.seed,
        shape: ProblemShape {
            max_states: args.max_states,
            max_sources: args.max_sources,
            max_alphabet: args.max_alphabet,
        },
        beta: args.beta,
        joint_cap: args.joint_cap,
        beliefs: args.beliefs,
    };
    let rows = bench::run(&config)?;
    let path = out_dir.join(&args.output);
    csv::write(&path, &bench::to_csv(&rows))?;
    println!("{}", bench::summary(&rows));
    println!("wrote {}", path.display());
    Ok(())
}

struct PolicySummary {
    policy: String,
    runs: usize,
    mean: f64,
    std: f64,
    obstacle_visits: u64,
    total_visits: u64,
}

fn cmd_report(out_dir: &Path, args: ReportArgs) -> Result<()> {
    let scenario = load_scenario(&args.scenario)?;
    let dir = args.input_dir.unwrap_or_else(|| out_dir.to_path_buf());
    let read_dir = std::fs::read_dir(&dir).map_err(|e| CliError::File {
        path: dir.clone(),
        source: e.into(),
    })?;
    let mut slugs: Vec<String> = read_dir
        .filter_map(|e| e.ok())
        .filter_map(|e| {
            let name = e.file_name().into_string().ok()?;
            Some(name.strip_prefix("rewards_")?.strip_suffix(".csv")?.to_owned())
        })
        .collect();
    slugs.sort();
    if slugs.is_empty() {
        return Err(CliError::Config(format!("no rewards_*.csv files in {}", dir.display())));
    }
    let mut summaries = Vec::with_capacity(slugs.len());
    for slug in &slugs {
        let (policy, rewards) = csv::parse_rewards(&dir.join(format!("rewards_{slug}.csv")))?;
        let visits = csv::parse_visits(&dir.join(format!("visits_{slug}.csv")))?;
        if visits.len() != scenario.height || visits.iter().any(|r| r.len() != scenario.width) {
            return Err(CliError::Config(format!("visits_{slug}.csv does not match the scenario grid")));
        }
        let n = rewards.len() as f64;
        let mean = rewards.iter().sum::<f64>() / n;
        let std = if rewards.len() > 1 {
            (rewards.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        summaries.push(PolicySummary {
            policy,
            runs: rewards.len(),
            mean,
            std,
            obstacle_visits: scenario.obstacles.iter().map(|c| visits[c.row][c.col]).sum(),
            total_visits: visits.iter().flatten().sum(),
        });
    }
    let mut out = csv::header("report");
    out.push_str("policy,runs,mean_reward,std_reward,obstacle_visits,total_visits\n");
    for s in &summaries {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            s.policy, s.runs, s.mean, s.std, s.obstacle_visits, s.total_visits
        );
        println!(
            "{:<10} runs {:>4} mean {:>10.4} std {:>8.4} obstacle visits {:>5}",
            s.policy, s.runs, s.mean, s.std, s.obstacle_visits
        );
    }
    let path = out_dir.join("report.csv");
    csv::write(&path, &out)?;
    let find = |p: &str| summaries.iter().find(|s| s.policy == p);
    if let (Some(g2), Some(r2), Some(none)) = (find("greedy:2"), find("random:2"), find("none")) {
        println!("greedy:2 > random:2 > none: {}", g2.mean > r2.mean && r2.mean > none.mean);
        println!(
            "greedy:2 obstacle visits below none: {}",
            g2.obstacle_visits < none.obstacle_visits
        );
    }
    if let (Some(g2), Some(g1)) = (find("greedy:2"), find("greedy:1")) {
        println!("greedy:2 >= greedy:1: {}", g2.mean >= g1.mean);
    }
    println!("wrote {}", path.display());
    Ok(())
}
