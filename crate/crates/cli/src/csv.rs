//! The CSV files written and read by the CLI.
//!
//! Every file opens with a `# apercept <kind> v1` line, then a column header
//! (except visit grids, which are bare rows of counts). Floats use shortest
//! round-trip formatting so reruns produce identical bytes.

use std::fmt::Write as _;
use std::path::Path;

use apercept::gridworld::SimResult;

use crate::error::{CliError, Result};

pub const VERSION: u32 = 1;

pub fn header(kind: &str) -> String {
    format!("# apercept {kind} v{VERSION}\n")
}

pub fn rewards(result: &SimResult) -> String {
    let mut out = header("rewards");
    out.push_str("run,policy,discounted_reward\n");
    for (run, ep) in result.episodes.iter().enumerate() {
        let _ = writeln!(out, "{run},{},{}", result.policy, ep.discounted_reward);
    }
    out
}

/// `height` rows of `width` counts, row 0 first.
pub fn visits(result: &SimResult) -> String {
    let mut out = header("visits");
    for row in &result.visits {
        let cells: Vec<String> = row.iter().map(u64::to_string).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| CliError::File {
        path: path.to_path_buf(),
        source: e.into(),
    })
}

/// Data lines of a file of the given kind, without the version line.
pub fn read_body(path: &Path, kind: &str) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::File {
        path: path.to_path_buf(),
        source: e.into(),
    })?;
    let mut lines = text.lines();
    let first = lines.next().unwrap_or_default();
    if first != header(kind).trim_end() {
        return Err(CliError::Config(format!(
            "{}: expected `{}` as first line, found `{first}`",
            path.display(),
            header(kind).trim_end()
        )));
    }
    Ok(lines.filter(|l| !l.trim().is_empty()).map(str::to_owned).collect())
}

fn bad(path: &Path, line: usize, msg: impl std::fmt::Display) -> CliError {
    // body line `line` sits below the version line
    CliError::Config(format!("{}:{}: {msg}", path.display(), line + 2))
}

/// `(policy, rewards in run order)` from a rewards file.
pub fn parse_rewards(path: &Path) -> Result<(String, Vec<f64>)> {
    let body = read_body(path, "rewards")?;
    if body.first().map(String::as_str) != Some("run,policy,discounted_reward") {
        return Err(bad(path, 0, "missing column header"));
    }
    let mut policy = None;
    let mut rewards = Vec::new();
    for (i, line) in body.iter().enumerate().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        let [_, p, r] = fields[..] else {
            return Err(bad(path, i, "expected three fields"));
        };
        if policy.get_or_insert_with(|| p.to_owned()) != p {
            return Err(bad(path, i, "mixed policies"));
        }
        rewards.push(r.parse().map_err(|_| bad(path, i, format!("bad number `{r}`")))?);
    }
    let policy = policy.ok_or_else(|| bad(path, 0, "no runs"))?;
    Ok((policy, rewards))
}

pub fn parse_visits(path: &Path) -> Result<Vec<Vec<u64>>> {
    read_body(path, "visits")?
        .iter()
        .enumerate()
        .map(|(i, line)| {
            line.split(',')
                .map(|x| x.trim().parse().map_err(|_| bad(path, i, format!("bad count `{x}`"))))
                .collect()
        })
        .collect()
}
