use std::path::Path;
use std::process::{Command, Output};

const TWO_CELLS: &str = r#"
version = 1
width = 2
height = 1
goal = [0, 1]
start = [0, 0]

[solver]
beliefs = 20
"#;

const SMALL: &str = r#"
version = 1
width = 3
height = 3
goal = [0, 2]
start = [2, 0]
obstacles = [[1, 1]]
horizon = 15

[solver]
beliefs = 60
seed = 3

[simulation]
runs = 4
policies = ["none"]

[[uavs]]
patrol_rect = [0, 0, 2, 2]
"#;

fn apercept(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_apercept"))
        .arg("--out-dir")
        .arg(out)
        .args(args)
        .output()
        .expect("binary runs")
}

fn scenario_file(dir: &Path, text: &str) -> String {
    let path = dir.join("scenario.toml");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn read(path: impl AsRef<Path>) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn tiny_scenario_solves() {
    let dir = tempfile::tempdir().unwrap();
    let sc = scenario_file(dir.path(), TWO_CELLS);
    let out = apercept(dir.path(), &["solve", "--scenario", &sc]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("Converged"));
    assert!(read(dir.path().join("value_function.txt")).starts_with("value-function v1\nstates 2\n"));
}

#[test]
fn solve_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let sc = scenario_file(dir.path(), SMALL);
    for name in ["a.txt", "b.txt"] {
        assert!(apercept(dir.path(), &["solve", "--scenario", &sc, "--output", name]).status.success());
    }
    assert_eq!(read(dir.path().join("a.txt")), read(dir.path().join("b.txt")));
}

#[test]
fn zero_max_iter_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let sc = scenario_file(dir.path(), TWO_CELLS);
    let out = apercept(dir.path(), &["solve", "--scenario", &sc, "--max-iter", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!dir.path().join("value_function.txt").exists());
}

#[test]
fn bad_inputs_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.toml");
    let out = apercept(dir.path(), &["solve", "--scenario", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let sc = scenario_file(dir.path(), "version = 1\nwidth = 0\n");
    assert_eq!(apercept(dir.path(), &["solve", "--scenario", &sc]).status.code(), Some(1));
    assert_eq!(apercept(dir.path(), &["simulate", "--policy", "greedy"]).status.code(), Some(1));
    assert_eq!(apercept(dir.path(), &["frobnicate"]).status.code(), Some(1));
    assert_eq!(apercept(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn simulate_writes_one_file_pair_per_policy() {
    let dir = tempfile::tempdir().unwrap();
    let sc = scenario_file(dir.path(), SMALL);
    let args = [
        "simulate", "--scenario", &sc, "--runs", "7", "--policy", "none", "--policy", "random:1", "--policy", "greedy:1",
    ];
    let out = apercept(dir.path(), &args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for slug in ["none", "random1", "greedy1"] {
        let rewards = read(dir.path().join(format!("rewards_{slug}.csv")));
        let lines: Vec<&str> = rewards.lines().collect();
        assert_eq!(lines[0], "# apercept rewards v1");
        assert_eq!(lines[1], "run,policy,discounted_reward");
        // the flag beats the file's `runs = 4`
        assert_eq!(lines.len() - 2, 7);
        let visits = read(dir.path().join(format!("visits_{slug}.csv")));
        assert_eq!(visits.lines().next(), Some("# apercept visits v1"));
        assert_eq!(visits.lines().skip(1).count(), 3);
        assert!(visits.lines().skip(1).all(|l| l.split(',').count() == 3));
    }
    // solved on demand and kept
    assert!(dir.path().join("value_function.txt").exists());
}

#[test]
fn simulate_reuses_a_value_function_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let sc = scenario_file(dir.path(), SMALL);
    assert!(apercept(dir.path(), &["solve", "--scenario", &sc]).status.success());
    let vf = dir.path().join("value_function.txt");
    let mut outputs = Vec::new();
    for sub in ["one", "two"] {
        let out_dir = dir.path().join(sub);
        let out = apercept(
            &out_dir,
            &["simulate", "--scenario", &sc, "--value-function", vf.to_str().unwrap(), "--policy", "random:1"],
        );
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        assert!(!out_dir.join("value_function.txt").exists());
        outputs.push((read(out_dir.join("rewards_random1.csv")), read(out_dir.join("visits_random1.csv"))));
    }
    assert_eq!(outputs[0], outputs[1]);
    // a value function of the wrong size is rejected
    let two = dir.path().join("two_cells");
    std::fs::create_dir(&two).unwrap();
    let sc2 = scenario_file(&two, TWO_CELLS);
    let out = apercept(&two, &["simulate", "--scenario", &sc2, "--value-function", vf.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn out_dir_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let sc = scenario_file(dir.path(), TWO_CELLS);
    let target = dir.path().join("from_env");
    let out = Command::new(env!("CARGO_BIN_EXE_apercept"))
        .env("APERCEPT_OUT_DIR", &target)
        .args(["solve", "--scenario", &sc])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(target.join("value_function.txt").exists());
}

#[test]
fn select_bench_rows_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = apercept(dir.path(), &["select-bench", "--instances", "25", "--seed", "9", "--output", name]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let stdout = String::from_utf8_lossy(&out.stdout).into_owned();
        assert!(stdout.contains("bound 0.393469"));
        read(dir.path().join(name))
    };
    let a = run("a.csv");
    assert_eq!(a, run("b.csv"));
    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(lines[0], "# apercept select-bench v1");
    assert_eq!(
        lines[1],
        "seed,n,budget,greedy_utility,optimal_utility,ratio,theorem1_pass,theorem2_pass,theorem3_pass"
    );
    assert_eq!(lines.len(), 27);
    assert!(lines[2].starts_with("9,"));
    for line in &lines[2..] {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f.len(), 9);
        let ratio: f64 = f[5].parse().unwrap();
        assert!(ratio >= 1.0 - (-0.5f64).exp() - 1e-9);
        assert_eq!(f[6], "true");
    }
    let out = apercept(dir.path(), &["select-bench", "--max-sources", "30"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn report_summarizes_simulation_output() {
    let dir = tempfile::tempdir().unwrap();
    let sc = scenario_file(dir.path(), SMALL);
    let sim = apercept(dir.path(), &["simulate", "--scenario", &sc, "--policy", "none", "--policy", "greedy:1"]);
    assert!(sim.status.success());
    let out = apercept(dir.path(), &["report", "--scenario", &sc]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = read(dir.path().join("report.csv"));
    let lines: Vec<&str> = report.lines().collect();
    assert_eq!(lines[0], "# apercept report v1");
    assert_eq!(lines[1], "policy,runs,mean_reward,std_reward,obstacle_visits,total_visits");
    assert_eq!(lines.len(), 4);
    // files are read in name order: greedy1 before none
    assert!(lines[2].starts_with("greedy:1,4,"));
    assert!(lines[3].starts_with("none,4,"));
    // the mean agrees with the rewards file
    let rewards = read(dir.path().join("rewards_none.csv"));
    let vals: Vec<f64> = rewards.lines().skip(2).map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
    let mean: f64 = lines[3].split(',').nth(2).unwrap().parse().unwrap();
    assert_eq!(mean, vals.iter().sum::<f64>() / vals.len() as f64);

    let empty = tempfile::tempdir().unwrap();
    let out = apercept(empty.path(), &["report"]);
    assert_eq!(out.status.code(), Some(1));
}
