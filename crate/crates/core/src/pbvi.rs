//! Point-based value iteration over a fixed set of sampled beliefs.
//!
//! The value function is a set of α-vectors, each tagged with the action of
//! the backup that produced it. A backup at belief `b` follows the classic
//! five steps: reward vectors per action, projected vectors
//! `α^{a,o}(s) = γ Σ_{s'} O(s',a,o) T(s,a,s') α(s')`, per-observation argmax
//! at `b`, best action at `b`, and the deduplicated union over all points.
//!
//! Projected vectors are only materialized for the argmax winners. Their
//! dot product with `b` is evaluated as `γ α·(O(·,a,o) ∘ p)` where `p` is the
//! predicted distribution, so the Step 3 scan costs `O(|Γ| |S|)` per
//! `(b, a)` instead of building every projection up front.

use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use crate::error::{Error, Result};
use crate::pomdp::{Belief, Pomdp};
use crate::scalar::{dot, Real};
use crate::simd;

/// One linear facet of the value function.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaVector<T> {
    pub coeffs: Vec<T>,
    pub action: usize,
}

impl<T: Real> AlphaVector<T> {
    pub fn new(coeffs: Vec<T>, action: usize) -> Self {
        Self { coeffs, action }
    }

    #[inline]
    pub fn dot(&self, b: &Belief<T>) -> T {
        dot(&self.coeffs, b.as_slice())
    }

    pub fn sup_norm(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.abs()))
    }
}

/// Piecewise-linear convex value function `V(b) = max_α α·b`.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueFunction<T> {
    alphas: Vec<AlphaVector<T>>,
}

impl<T: Real> ValueFunction<T> {
    /// Requires at least one vector and a common dimension.
    pub fn new(alphas: Vec<AlphaVector<T>>) -> Result<Self> {
        let Some(first) = alphas.first() else {
            return Err(Error::InvalidArgument("value function needs at least one α-vector".into()));
        };
        let n = first.coeffs.len();
        if n == 0 || alphas.iter().any(|a| a.coeffs.len() != n) {
            return Err(Error::InvalidArgument("α-vectors must share a positive dimension".into()));
        }
        Ok(Self { alphas })
    }

    pub fn alphas(&self) -> &[AlphaVector<T>] {
        &self.alphas
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    pub fn num_states(&self) -> usize {
        self.alphas[0].coeffs.len()
    }

    /// Index of the maximizing vector at `b`; ties go to the lowest index.
    pub fn argmax(&self, b: &Belief<T>) -> usize {
        self.best(b).0
    }

    /// Lowest-index maximizer at `b` and its value.
    fn best(&self, b: &Belief<T>) -> (usize, T) {
        let mut best = (0, self.alphas[0].dot(b));
        for (k, alpha) in self.alphas.iter().enumerate().skip(1) {
            let v = alpha.dot(b);
            if v > best.1 {
                best = (k, v);
            }
        }
        best
    }

    pub fn value(&self, b: &Belief<T>) -> T {
        self.best(b).1
    }

    /// Action tag of the maximizing vector at `b`.
    pub fn best_action(&self, b: &Belief<T>) -> usize {
        self.alphas[self.argmax(b)].action
    }

    pub fn max_sup_norm(&self) -> T {
        self.alphas.iter().fold(T::zero(), |m, a| m.max(a.sup_norm()))
    }
}

/// The fixed set of beliefs backups are performed at.
#[derive(Debug, Clone, PartialEq)]
pub struct BeliefPointSet<T> {
    points: Vec<Belief<T>>,
}

impl<T: Real> BeliefPointSet<T> {
    pub fn new(points: Vec<Belief<T>>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::InvalidArgument("belief point set is empty".into()));
        };
        let n = first.len();
        if points.iter().any(|b| b.len() != n) {
            return Err(Error::InvalidArgument("belief points differ in dimension".into()));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[Belief<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn num_states(&self) -> usize {
        self.points[0].len()
    }

    /// `V(b)` at every point, in order.
    pub fn values(&self, vf: &ValueFunction<T>) -> Vec<T> {
        self.points.iter().map(|b| vf.value(b)).collect()
    }
}

/// Draws `count` beliefs from the flat Dirichlet distribution on the simplex
/// and appends the uniform belief and every corner not already present.
pub fn sample_beliefs_uniform<T: Real>(num_states: usize, count: usize, seed: u64) -> BeliefPointSet<T> {
    assert!(num_states > 0, "belief simplex over zero states");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<Belief<T>> = Vec::with_capacity(count + num_states + 1);
    let mut draw = vec![0.0f64; num_states];
    for _ in 0..count {
        for x in draw.iter_mut() {
            *x = Exp1.sample(&mut rng);
        }
        let total: f64 = draw.iter().sum();
        let probs = draw.iter().map(|&x| T::lit(x / total)).collect();
        points.push(Belief::new(probs).expect("normalized Dirichlet draw"));
    }
    let mut extremes = vec![Belief::uniform(num_states)];
    extremes.extend((0..num_states).map(|s| Belief::point(num_states, s)));
    for b in extremes {
        if !points.contains(&b) {
            points.push(b);
        }
    }
    BeliefPointSet { points }
}

/// A single vector at `min R / (1 - γ)`, a lower bound on every value.
pub fn initialize_value<T: Real>(pomdp: &Pomdp<T>) -> ValueFunction<T> {
    let c = pomdp.min_reward() / (T::one() - pomdp.discount());
    ValueFunction {
        alphas: vec![AlphaVector::new(vec![c; pomdp.num_states()], 0)],
    }
}

/// Column `O(·, a, o)` stored as its most frequent value plus the entries
/// that differ from it.
#[derive(Debug, Clone)]
struct ObservationColumn<T> {
    baseline: T,
    exceptions: Vec<(usize, T)>,
}

impl<T: Real> ObservationColumn<T> {
    fn new(column: &[T]) -> Self {
        let mut sorted: Vec<T> = column.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite probabilities"));
        let (mut baseline, mut best_run) = (sorted[0], 0usize);
        let mut i = 0;
        while i < sorted.len() {
            let mut j = i;
            while j < sorted.len() && sorted[j] == sorted[i] {
                j += 1;
            }
            if j - i > best_run {
                best_run = j - i;
                baseline = sorted[i];
            }
            i = j;
        }
        let exceptions = column
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != baseline)
            .map(|(s, &v)| (s, v - baseline))
            .collect();
        Self { baseline, exceptions }
    }
}

/// Model data rearranged for fast backups.
#[derive(Debug, Clone)]
struct BackupKernel<T> {
    num_states: usize,
    num_actions: usize,
    num_observations: usize,
    discount: T,
    /// Nonzero successors of `(s, a)` at index `s * |A| + a`.
    successors: Vec<Vec<(usize, T)>>,
    /// Observation columns at index `a * |Ω| + o`.
    columns: Vec<ObservationColumn<T>>,
    /// Whether every column of action `a` deviates from its baseline at
    /// most on the state with the observation's own index.
    diagonal: Vec<bool>,
    /// `R(·, a)` per action.
    rewards: Vec<Vec<T>>,
}

impl<T: Real> BackupKernel<T> {
    fn new(pomdp: &Pomdp<T>) -> Self {
        let (ns, na, no) = (pomdp.num_states(), pomdp.num_actions(), pomdp.num_observations());
        let mut successors = Vec::with_capacity(ns * na);
        for s in 0..ns {
            for a in 0..na {
                successors.push(
                    pomdp
                        .transition_row(s, a)
                        .iter()
                        .enumerate()
                        .filter(|(_, &p)| p != T::zero())
                        .map(|(next, &p)| (next, p))
                        .collect(),
                );
            }
        }
        let mut columns = Vec::with_capacity(na * no);
        let mut column = vec![T::zero(); ns];
        for a in 0..na {
            for o in 0..no {
                for (next, c) in column.iter_mut().enumerate() {
                    *c = pomdp.observation(next, a, o);
                }
                columns.push(ObservationColumn::new(&column));
            }
        }
        let diagonal = columns
            .chunks(no)
            .map(|cols| {
                no == ns
                    && cols
                        .iter()
                        .enumerate()
                        .all(|(o, c)| c.exceptions.iter().all(|&(s, _)| s == o))
            })
            .collect();
        Self {
            num_states: ns,
            num_actions: na,
            num_observations: no,
            discount: pomdp.discount(),
            successors,
            columns,
            diagonal,
            rewards: (0..na).map(|a| pomdp.reward_column(a)).collect(),
        }
    }

    fn predict(&self, b: &[T], a: usize, out: &mut [T]) {
        out.iter_mut().for_each(|x| *x = T::zero());
        for (s, &bs) in b.iter().enumerate() {
            if bs == T::zero() {
                continue;
            }
            for &(next, p) in &self.successors[s * self.num_actions + a] {
                out[next] = out[next] + p * bs;
            }
        }
    }

    /// `α^{a,o}(s) = γ Σ_{s'} O(s',a,o) T(s,a,s') α(s')`, accumulated into `out`.
    fn add_projection(&self, pomdp: &Pomdp<T>, alpha: &[T], a: usize, o: usize, out: &mut [T]) {
        for (s, acc) in out.iter_mut().enumerate() {
            let mut v = T::zero();
            for &(next, p) in &self.successors[s * self.num_actions + a] {
                v = v + pomdp.observation(next, a, o) * p * alpha[next];
            }
            *acc = *acc + self.discount * v;
        }
    }
}

/// The previous value function, state-major: `by_state[s * K + k] = α_k(s)`.
struct PrevLayout<T> {
    len: usize,
    by_state: Vec<T>,
}

impl<T: Real> PrevLayout<T> {
    fn new(prev: &ValueFunction<T>) -> Self {
        let k = prev.len();
        let ns = prev.num_states();
        let mut by_state = vec![T::zero(); ns * k];
        for (j, alpha) in prev.alphas.iter().enumerate() {
            for (s, &c) in alpha.coeffs.iter().enumerate() {
                by_state[s * k + j] = c;
            }
        }
        Self { len: k, by_state }
    }

    fn state(&self, s: usize) -> &[T] {
        &self.by_state[s * self.len..(s + 1) * self.len]
    }
}

/// Points backed up together.
const POINT_BLOCK: usize = 32;

/// Working buffers for one block of points. Slot `c = a·n + i` pairs action
/// `a` with point `i` of a block of `n`.
struct Block<T> {
    points: usize,
    predicted: Vec<T>,
    dots: Vec<T>,
    weights: Vec<T>,
    /// Step 3 maxima per slot and observation.
    best: Vec<T>,
}

impl<T: Real> Block<T> {
    fn new(slots: usize, ns: usize, nk: usize, no: usize) -> Self {
        Self {
            points: 0,
            predicted: vec![T::zero(); slots * ns],
            dots: vec![T::zero(); slots * nk],
            weights: vec![T::zero(); slots * no],
            best: vec![T::zero(); slots * no],
        }
    }
}

/// Score of vector `k` for a column that is not diagonal.
fn general_score<T: Real>(col: &ObservationColumn<T>, dot: T, p: &[T], prev: &PrevLayout<T>, k: usize) -> T {
    let mut v = col.baseline * dot;
    for &(s, delta) in &col.exceptions {
        v = v + delta * p[s] * prev.by_state[s * prev.len + k];
    }
    v
}

/// Step 3 maxima for a block of points: for every slot and observation, the
/// largest `Σ_{s'} O(s',a,o) α(s') Pr(s' | b, a)` over previous vectors.
///
/// That score equals `baseline·(α·p) + Σ_exceptions δ p(s) α(s)` with
/// `p = Pr(· | b, a)`, so the dot products `α·p` are shared by all
/// observations. Only the maxima are kept here; [`block_choice`] recovers
/// the maximizers for the action that wins.
fn block_scores<T: Real>(kernel: &BackupKernel<T>, prev: &PrevLayout<T>, points: &[Belief<T>], blk: &mut Block<T>) {
    let (ns, na, no, nk) = (kernel.num_states, kernel.num_actions, kernel.num_observations, prev.len);
    let n = points.len();
    blk.points = n;
    for a in 0..na {
        for (i, b) in points.iter().enumerate() {
            let c = a * n + i;
            kernel.predict(b.as_slice(), a, &mut blk.predicted[c * ns..(c + 1) * ns]);
        }
    }
    simd::matmul(na * n, ns, nk, &blk.predicted, &prev.by_state, &mut blk.dots);
    let (pred, dots) = (&blk.predicted, &blk.dots);
    for a in 0..na {
        let columns = &kernel.columns[a * no..(a + 1) * no];
        if !kernel.diagonal[a] {
            for i in 0..n {
                let c = a * n + i;
                let (p, d) = (&pred[c * ns..(c + 1) * ns], &dots[c * nk..(c + 1) * nk]);
                for (o, col) in columns.iter().enumerate() {
                    blk.best[c * no + o] = (0..nk)
                        .map(|k| general_score(col, d[k], p, prev, k))
                        .fold(T::neg_infinity(), |m, v| if v > m { v } else { m });
                }
            }
            continue;
        }
        for i in 0..n {
            let c = a * n + i;
            for (o, col) in columns.iter().enumerate() {
                blk.weights[c * no + o] = col.exceptions.first().map_or(T::zero(), |&(_, d)| d * pred[c * ns + o]);
            }
        }
        for o in 0..no {
            for i0 in (0..n).step_by(simd::LANES) {
                // short groups repeat their last slot
                let slot = |j: usize| a * n + (i0 + j).min(n - 1);
                let out = simd::max_affine(
                    columns[o].baseline,
                    std::array::from_fn(|j| blk.weights[slot(j) * no + o]),
                    std::array::from_fn(|j| &dots[slot(j) * nk..(slot(j) + 1) * nk]),
                    prev.state(o),
                );
                for (j, v) in out.into_iter().enumerate().take(n - i0) {
                    blk.best[slot(j) * no + o] = v;
                }
            }
        }
    }
}

/// The lowest-index maximizer behind each `blk.best` entry of point `i`
/// under action `a`.
fn block_choice<T: Real>(kernel: &BackupKernel<T>, prev: &PrevLayout<T>, blk: &Block<T>, i: usize, a: usize) -> Vec<usize> {
    let (ns, no, nk) = (kernel.num_states, kernel.num_observations, prev.len);
    let c = a * blk.points + i;
    let (p, d) = (&blk.predicted[c * ns..(c + 1) * ns], &blk.dots[c * nk..(c + 1) * nk]);
    (0..no)
        .map(|o| {
            let col = &kernel.columns[a * no + o];
            let target = blk.best[c * no + o];
            let found = if kernel.diagonal[a] {
                simd::find_affine(col.baseline, blk.weights[c * no + o], d, prev.state(o), target)
            } else {
                (0..nk).position(|k| general_score(col, d[k], p, prev, k) == target)
            };
            found.expect("the maximum is attained")
        })
        .collect()
}

fn backup_with_kernel<T: Real>(
    pomdp: &Pomdp<T>,
    kernel: &BackupKernel<T>,
    prev: &ValueFunction<T>,
    points: &BeliefPointSet<T>,
) -> ValueFunction<T> {
    let (ns, na, no) = (kernel.num_states, kernel.num_actions, kernel.num_observations);
    let layout = PrevLayout::new(prev);
    let mut blk = Block::new(POINT_BLOCK * na, ns, prev.len(), no);
    let mut seen: HashSet<(usize, Vec<(u64, i16, i8)>)> = HashSet::new();
    let mut alphas = Vec::new();
    for chunk in points.points().chunks(POINT_BLOCK) {
        block_scores(kernel, &layout, chunk, &mut blk);
        let n = chunk.len();
        for (i, b) in chunk.iter().enumerate() {
            // Step 4: best action, lowest index on ties
            let mut best: Option<(usize, T)> = None;
            for a in 0..na {
                let c = a * n + i;
                let future = blk.best[c * no..(c + 1) * no].iter().fold(T::zero(), |acc, &v| acc + v);
                let value = dot(&kernel.rewards[a], b.as_slice()) + kernel.discount * future;
                if best.is_none_or(|(_, v)| value > v) {
                    best = Some((a, value));
                }
            }
            let (action, _) = best.expect("at least one action");
            let mut coeffs = kernel.rewards[action].clone();
            for (o, k) in block_choice(kernel, &layout, &blk, i, action).into_iter().enumerate() {
                kernel.add_projection(pomdp, &prev.alphas[k].coeffs, action, o, &mut coeffs);
            }
            let key = (action, coeffs.iter().map(|c| c.bits_key()).collect());
            if seen.insert(key) {
                alphas.push(AlphaVector::new(coeffs, action));
            }
        }
    }
    ValueFunction { alphas }
}

fn check_dims<T: Real>(pomdp: &Pomdp<T>, vf: &ValueFunction<T>, points: &BeliefPointSet<T>) -> Result<()> {
    if vf.num_states() != pomdp.num_states() || points.num_states() != pomdp.num_states() {
        return Err(Error::InvalidArgument(format!(
            "dimension mismatch: model {}, value function {}, beliefs {}",
            pomdp.num_states(),
            vf.num_states(),
            points.num_states()
        )));
    }
    Ok(())
}

/// One point-based Bellman backup of `prev` at every belief in `points`.
///
/// Ties in the per-observation argmax go to the lowest vector index and ties
/// between actions to the lowest action. Identical resulting vectors are
/// merged; near-duplicates are left to [`prune`].
pub fn backup<T: Real>(
    pomdp: &Pomdp<T>,
    prev: &ValueFunction<T>,
    points: &BeliefPointSet<T>,
) -> Result<ValueFunction<T>> {
    check_dims(pomdp, prev, points)?;
    Ok(backup_with_kernel(pomdp, &BackupKernel::new(pomdp), prev, points))
}

/// Keeps exactly the vectors that are the (lowest-index) maximizer at some
/// point of `points`. Values at those points are unchanged.
pub fn prune<T: Real>(vf: &ValueFunction<T>, points: &BeliefPointSet<T>) -> ValueFunction<T> {
    prune_with_values(vf, points).0
}

/// [`prune`], also returning the value at every point.
///
/// Candidates come from one matrix product per block of points; the exact
/// maximizer is then picked among the vectors within rounding distance of
/// the block maximum, with the same dot product as [`ValueFunction::value`].
fn prune_with_values<T: Real>(vf: &ValueFunction<T>, points: &BeliefPointSet<T>) -> (ValueFunction<T>, Vec<T>) {
    let (ns, nk) = (vf.num_states(), vf.len());
    let layout = PrevLayout::new(vf);
    // both products are within (ns + 2)·ε·‖α‖∞ of the exact value
    let slack = T::epsilon() * T::lit(4.0 * (ns + 2) as f64) * vf.max_sup_norm();
    let mut keep = vec![false; nk];
    let mut values = Vec::with_capacity(points.len());
    let mut flat = Vec::with_capacity(POINT_BLOCK * ns);
    let mut scores = vec![T::zero(); POINT_BLOCK * nk];
    for chunk in points.points().chunks(POINT_BLOCK) {
        flat.clear();
        chunk.iter().for_each(|b| flat.extend_from_slice(b.as_slice()));
        simd::matmul(chunk.len(), ns, nk, &flat, &layout.by_state, &mut scores);
        for (b, row) in chunk.iter().zip(scores.chunks(nk)) {
            let top = row.iter().fold(T::neg_infinity(), |m, &v| if v > m { v } else { m });
            let mut best: Option<(usize, T)> = None;
            for (k, &v) in row.iter().enumerate() {
                if v >= top - slack {
                    let exact = vf.alphas[k].dot(b);
                    if best.is_none_or(|(_, x)| exact > x) {
                        best = Some((k, exact));
                    }
                }
            }
            let (k, v) = best.unwrap_or_else(|| vf.best(b));
            keep[k] = true;
            values.push(v);
        }
    }
    let alphas = vf
        .alphas
        .iter()
        .zip(keep)
        .filter_map(|(a, k)| k.then(|| a.clone()))
        .collect();
    (ValueFunction { alphas }, values)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Stop once `Σ_b |V_t(b) - V_{t-1}(b)|` over the point set drops below this.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-3,
            max_iter: 1000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Converged,
    MaxIterations,
}

#[derive(Debug, Clone)]
pub struct SolveReport<T> {
    pub value_function: ValueFunction<T>,
    pub iterations: usize,
    /// ℓ1 change over the point set in the final iteration.
    pub final_delta: T,
    pub stop: StopReason,
}

/// Backup-and-prune from [`initialize_value`] until the ℓ1 change at the
/// sampled points falls below `config.tol` or `config.max_iter` is reached.
///
/// Each iteration prunes the new vectors together with the current ones, so
/// a point keeps its old vector when the backup does worse there. Point
/// values then never decrease and the loop settles.
pub fn solve<T: Real>(pomdp: &Pomdp<T>, points: &BeliefPointSet<T>, config: SolverConfig) -> Result<SolveReport<T>> {
    solve_from(pomdp, points, initialize_value(pomdp), config, |_, _, _| {})
}

/// [`solve`] starting from an arbitrary value function, calling
/// `progress(iteration, delta, size)` after every iteration.
pub fn solve_from<T: Real>(
    pomdp: &Pomdp<T>,
    points: &BeliefPointSet<T>,
    init: ValueFunction<T>,
    config: SolverConfig,
    mut progress: impl FnMut(usize, T, usize),
) -> Result<SolveReport<T>> {
    if !(config.tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance {} must be positive", config.tol)));
    }
    if config.max_iter == 0 {
        return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
    }
    check_dims(pomdp, &init, points)?;
    let kernel = BackupKernel::new(pomdp);
    let tol = T::lit(config.tol);
    let mut vf = init;
    let mut values = points.values(&vf);
    let mut delta = T::infinity();
    for it in 1..=config.max_iter {
        // the previous vectors stay as candidates, so no point loses value
        let mut candidates = backup_with_kernel(pomdp, &kernel, &vf, points);
        candidates.alphas.extend(vf.alphas);
        let next;
        (vf, next) = prune_with_values(&candidates, points);
        delta = values.iter().zip(&next).fold(T::zero(), |acc, (&x, &y)| acc + (x - y).abs());
        values = next;
        progress(it, delta, vf.len());
        if delta < tol {
            return Ok(SolveReport {
                value_function: vf,
                iterations: it,
                final_delta: delta,
                stop: StopReason::Converged,
            });
        }
    }
    Ok(SolveReport {
        value_function: vf,
        iterations: config.max_iter,
        final_delta: delta,
        stop: StopReason::MaxIterations,
    })
}
