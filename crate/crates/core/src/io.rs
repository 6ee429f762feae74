//! Line-oriented text formats for POMDP models and value functions.
//!
//! Both formats start with a versioned header line, ignore blank lines and
//! treat everything after `#` as a comment. Numbers are whitespace separated
//! and written in shortest round-trip form, so a write/read cycle is exact
//! and repeated writes of the same data are byte-identical.
//!
//! Model (`pomdp v1`):
//!
//! ```text
//! pomdp v1
//! states 2
//! actions 1
//! observations 2
//! discount 0.95
//! transition          # |S|·|A| rows: row (s, a) holds T(s, a, ·)
//! 1 0
//! 0 1
//! observation         # |S|·|A| rows: row (s', a) holds O(s', a, ·)
//! 0.8 0.2
//! 0.2 0.8
//! reward              # |S| rows: row s holds R(s, ·)
//! 1
//! 0
//! ```
//!
//! Rows are ordered with the action varying fastest. Value function
//! (`value-function v1`): `states N`, `alphas K`, then `K` lines of
//! `action c_0 … c_{N-1}`.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::pbvi::{AlphaVector, ValueFunction};
use crate::pomdp::Pomdp;
use crate::scalar::Real;

pub const POMDP_HEADER: &str = "pomdp v1";
pub const VALUE_FUNCTION_HEADER: &str = "value-function v1";

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            inner: text.lines().enumerate(),
            last: 0,
        }
    }

    /// Next non-empty line with comments stripped, and its 1-based number.
    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        for (i, raw) in self.inner.by_ref() {
            let line = raw.split('#').next().unwrap_or("").trim();
            self.last = i + 1;
            if !line.is_empty() {
                return Some((i + 1, line));
            }
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str)> {
        self.next_content().ok_or_else(|| Error::Parse {
            line: self.last + 1,
            msg: format!("unexpected end of input, expected {what}"),
        })
    }

    fn keyword(&mut self, key: &str) -> Result<()> {
        let (line, text) = self.expect(key)?;
        if text != key {
            return Err(Error::Parse {
                line,
                msg: format!("expected `{key}`, found `{text}`"),
            });
        }
        Ok(())
    }

    fn field<V: std::str::FromStr>(&mut self, key: &str) -> Result<V> {
        let (line, text) = self.expect(key)?;
        let mut parts = text.split_whitespace();
        match (parts.next(), parts.next(), parts.next()) {
            (Some(k), Some(v), None) if k == key => v.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("bad value `{v}` for `{key}`"),
            }),
            _ => Err(Error::Parse {
                line,
                msg: format!("expected `{key} <value>`, found `{text}`"),
            }),
        }
    }

    fn numbers<T: Real>(&mut self, count: usize, what: &str) -> Result<(usize, Vec<T>)> {
        let (line, text) = self.expect(what)?;
        let values = text
            .split_whitespace()
            .map(|tok| {
                tok.parse::<T>().map_err(|_| Error::Parse {
                    line,
                    msg: format!("bad number `{tok}`"),
                })
            })
            .collect::<Result<Vec<T>>>()?;
        if values.len() != count {
            return Err(Error::Parse {
                line,
                msg: format!("{what}: expected {count} numbers, found {}", values.len()),
            });
        }
        Ok((line, values))
    }

    fn finish(&mut self) -> Result<()> {
        match self.next_content() {
            None => Ok(()),
            Some((line, text)) => Err(Error::Parse {
                line,
                msg: format!("trailing content `{text}`"),
            }),
        }
    }
}

fn push_row<T: Real>(out: &mut String, row: &[T]) {
    let mut first = true;
    for x in row {
        if !first {
            out.push(' ');
        }
        first = false;
        let _ = write!(out, "{x}");
    }
    out.push('\n');
}

pub fn write_pomdp<T: Real>(pomdp: &Pomdp<T>) -> String {
    let (ns, na, no) = (pomdp.num_states(), pomdp.num_actions(), pomdp.num_observations());
    let mut out = String::new();
    let _ = writeln!(out, "{POMDP_HEADER}");
    let _ = writeln!(out, "states {ns}\nactions {na}\nobservations {no}");
    let _ = writeln!(out, "discount {}", pomdp.discount());
    out.push_str("transition\n");
    for row in pomdp.transition_tensor().chunks(ns) {
        push_row(&mut out, row);
    }
    out.push_str("observation\n");
    for row in pomdp.observation_tensor().chunks(no) {
        push_row(&mut out, row);
    }
    out.push_str("reward\n");
    for row in pomdp.reward_tensor().chunks(na) {
        push_row(&mut out, row);
    }
    out
}

/// Parses and validates a model; rows violating the probability
/// invariants are rejected.
pub fn parse_pomdp<T: Real>(text: &str) -> Result<Pomdp<T>> {
    let mut lines = Lines::new(text);
    lines.keyword(POMDP_HEADER)?;
    let ns: usize = lines.field("states")?;
    let na: usize = lines.field("actions")?;
    let no: usize = lines.field("observations")?;
    let discount: T = lines.field("discount")?;
    let mut read_block = |key: &str, rows: usize, width: usize| -> Result<Vec<T>> {
        lines.keyword(key)?;
        let mut data = Vec::with_capacity(rows * width);
        for _ in 0..rows {
            data.extend(lines.numbers::<T>(width, key)?.1);
        }
        Ok(data)
    };
    let transition = read_block("transition", ns * na, ns)?;
    let observation = read_block("observation", ns * na, no)?;
    let reward = read_block("reward", ns, na)?;
    lines.finish()?;
    Pomdp::new(ns, na, no, transition, observation, reward, discount)
}

pub fn write_value_function<T: Real>(vf: &ValueFunction<T>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{VALUE_FUNCTION_HEADER}");
    let _ = writeln!(out, "states {}\nalphas {}", vf.num_states(), vf.len());
    for alpha in vf.alphas() {
        let _ = write!(out, "{} ", alpha.action);
        push_row(&mut out, &alpha.coeffs);
    }
    out
}

pub fn parse_value_function<T: Real>(text: &str) -> Result<ValueFunction<T>> {
    let mut lines = Lines::new(text);
    lines.keyword(VALUE_FUNCTION_HEADER)?;
    let ns: usize = lines.field("states")?;
    let count: usize = lines.field("alphas")?;
    let mut alphas = Vec::with_capacity(count);
    for _ in 0..count {
        let (line, text) = lines.expect("α-vector")?;
        let mut parts = text.split_whitespace();
        let action: usize = parts.next().and_then(|a| a.parse().ok()).ok_or_else(|| Error::Parse {
            line,
            msg: "missing action tag".into(),
        })?;
        let coeffs = parts
            .map(|tok| {
                tok.parse::<T>().map_err(|_| Error::Parse {
                    line,
                    msg: format!("bad number `{tok}`"),
                })
            })
            .collect::<Result<Vec<T>>>()?;
        if coeffs.len() != ns {
            return Err(Error::Parse {
                line,
                msg: format!("expected {ns} coefficients, found {}", coeffs.len()),
            });
        }
        alphas.push(AlphaVector::new(coeffs, action));
    }
    lines.finish()?;
    ValueFunction::new(alphas)
}

pub fn read_pomdp<T: Real>(path: &Path) -> Result<Pomdp<T>> {
    parse_pomdp(&std::fs::read_to_string(path)?)
}

pub fn read_value_function<T: Real>(path: &Path) -> Result<ValueFunction<T>> {
    parse_value_function(&std::fs::read_to_string(path)?)
}

pub fn save_value_function<T: Real>(vf: &ValueFunction<T>, path: &Path) -> Result<()> {
    std::fs::write(path, write_value_function(vf))?;
    Ok(())
}
