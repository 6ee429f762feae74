//! Seeded random instances for tests and benchmarks.

use rand::Rng;

use crate::pomdp::{Belief, InfoSource, Pomdp};
use crate::select::SelectionProblem;

/// A strictly positive distribution over `n` outcomes.
pub fn random_distribution<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 1e-3).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

/// Dense random model with rewards in `[-5, 10)`.
pub fn random_pomdp<R: Rng>(rng: &mut R, ns: usize, na: usize, no: usize, gamma: f64) -> Pomdp<f64> {
    let mut t = Vec::new();
    let mut o = Vec::new();
    for _ in 0..ns * na {
        t.extend(random_distribution(rng, ns));
        o.extend(random_distribution(rng, no));
    }
    let r = (0..ns * na).map(|_| rng.random_range(-5.0..10.0)).collect();
    Pomdp::new(ns, na, no, t, o, r, gamma).expect("rows are normalized")
}

/// Source with alphabet `m` and cost in `[0.5, 2)`.
pub fn random_source<R: Rng>(rng: &mut R, ns: usize, na: usize, m: usize) -> InfoSource<f64> {
    let mut l = Vec::new();
    for _ in 0..ns * na {
        l.extend(random_distribution(rng, m));
    }
    InfoSource::new(ns, na, m, l, rng.random_range(0.5..2.0)).expect("rows are normalized")
}

/// Size limits for [`random_selection_problem`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProblemShape {
    pub max_states: usize,
    pub max_sources: usize,
    pub max_alphabet: usize,
}

impl Default for ProblemShape {
    fn default() -> Self {
        Self {
            max_states: 6,
            max_sources: 10,
            max_alphabet: 3,
        }
    }
}

/// One action, 2..=`max_states` states, 1..=`max_sources` sources with
/// alphabets 2..=`max_alphabet`, random costs and a budget in `[0.5, 4)`.
pub fn random_selection_problem<R: Rng>(rng: &mut R, shape: ProblemShape) -> SelectionProblem<f64> {
    let ns = rng.random_range(2..=shape.max_states.max(2));
    let n = rng.random_range(1..=shape.max_sources.max(1));
    let b = Belief::new(random_distribution(rng, ns)).expect("normalized");
    let sources = (0..n)
        .map(|_| {
            let m = rng.random_range(2..=shape.max_alphabet.max(2));
            random_source(rng, ns, 1, m)
        })
        .collect();
    SelectionProblem::new(b, 0, sources, rng.random_range(0.5..4.0)).expect("valid by construction")
}
