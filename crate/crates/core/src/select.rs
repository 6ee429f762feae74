//! Information-source selection under a budget.
//!
//! The utility of a subset `ι` of sources is the mutual information between
//! the state and the joint report of the subset, `f(ι) = H(s) - H(s | ω_ι)`,
//! in nats. [`generalized_greedy`] picks a budget-feasible subset by
//! cost-scaled marginal gain with a best-singleton fallback; with `β = 1`
//! it is guaranteed to reach `(1 - 1/√e)` of the optimum that
//! [`brute_force_optimal`] finds by enumeration.
//!
//! All conditional entropies are computed exactly by walking the joint
//! report alphabet of the selected sources. Branches whose unnormalized
//! weight vanishes for every state are skipped since their probability is 0.

use crate::error::{check_index, Error, Result};
use crate::pbvi::ValueFunction;
use crate::pomdp::{Belief, InfoSource, PerceptionAction, Pomdp};
use crate::scalar::{xlogx, Real};

/// Default cap on the number of joint report outcomes a single entropy
/// evaluation may enumerate.
pub const DEFAULT_JOINT_CAP: u128 = 10_000_000;

/// Exhaustive search refuses more sources than this.
pub const MAX_BRUTE_FORCE_SOURCES: usize = 20;

/// `1 - 1/√e`, the approximation ratio of the generalized greedy scheme.
pub fn greedy_ratio() -> f64 {
    1.0 - (-0.5f64).exp()
}

/// One step's selection inputs: the belief after the intrinsic update, the
/// action just taken, the available sources and the budget.
#[derive(Debug, Clone)]
pub struct SelectionProblem<T> {
    pub belief: Belief<T>,
    pub action: usize,
    pub sources: Vec<InfoSource<T>>,
    pub budget: T,
    /// Exponent applied to costs in the greedy ratio.
    pub beta: T,
    pub joint_cap: u128,
}

impl<T: Real> SelectionProblem<T> {
    /// `β = 1` and the default enumeration cap.
    pub fn new(belief: Belief<T>, action: usize, sources: Vec<InfoSource<T>>, budget: T) -> Result<Self> {
        if !(budget > T::zero()) {
            return Err(Error::InvalidArgument(format!("budget {budget} must be positive")));
        }
        for (i, src) in sources.iter().enumerate() {
            if src.num_states() != belief.len() {
                return Err(Error::InvalidArgument(format!(
                    "source {i} covers {} states, belief has {}",
                    src.num_states(),
                    belief.len()
                )));
            }
            check_index("action", action, src.num_actions())?;
        }
        Ok(Self {
            belief,
            action,
            sources,
            budget,
            beta: T::one(),
            joint_cap: DEFAULT_JOINT_CAP,
        })
    }

    pub fn with_beta(mut self, beta: T) -> Result<Self> {
        if !(beta > T::zero()) {
            return Err(Error::InvalidArgument(format!("beta {beta} must be positive")));
        }
        self.beta = beta;
        Ok(self)
    }

    pub fn with_joint_cap(mut self, cap: u128) -> Self {
        self.joint_cap = cap;
        self
    }

    pub fn num_sources(&self) -> usize {
        self.sources.len()
    }

    fn check_selection(&self, sel: &PerceptionAction) -> Result<()> {
        if let Some(last) = sel.indices().last() {
            check_index("source", *last, self.sources.len())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionOutcome<T> {
    pub selected: PerceptionAction,
    /// Mutual information of the selection, in nats.
    pub utility: T,
    pub total_cost: T,
}

/// Walks every joint report of `selection`, calling `visit(reports, w)` with
/// `w[s] = base[s] Π_k O_{i_k}(s, a, reports[k])`.
fn for_each_outcome<T: Real>(
    base: &[T],
    action: usize,
    sources: &[InfoSource<T>],
    selection: &[usize],
    cap: u128,
    mut visit: impl FnMut(&[usize], &[T]),
) -> Result<()> {
    let size = selection
        .iter()
        .fold(1u128, |acc, &i| acc.saturating_mul(sources[i].alphabet() as u128));
    if size > cap {
        return Err(Error::JointAlphabetTooLarge { size, cap });
    }
    let ns = base.len();
    let depth = selection.len();
    // levels[d] holds the weights after the first d reports
    let mut levels = vec![T::zero(); (depth + 1) * ns];
    levels[..ns].copy_from_slice(base);
    let mut reports = vec![0usize; depth];
    walk(base.len(), action, sources, selection, 0, &mut levels, &mut reports, &mut visit);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn walk<T: Real>(
    ns: usize,
    action: usize,
    sources: &[InfoSource<T>],
    selection: &[usize],
    d: usize,
    levels: &mut [T],
    reports: &mut [usize],
    visit: &mut impl FnMut(&[usize], &[T]),
) {
    if d == selection.len() {
        visit(reports, &levels[d * ns..(d + 1) * ns]);
        return;
    }
    let src = &sources[selection[d]];
    for o in 0..src.alphabet() {
        let (head, tail) = levels.split_at_mut((d + 1) * ns);
        let parent = &head[d * ns..];
        let child = &mut tail[..ns];
        let mut any = false;
        for s in 0..ns {
            let w = parent[s] * src.likelihood(s, action, o);
            any |= w > T::zero();
            child[s] = w;
        }
        if any {
            reports[d] = o;
            walk(ns, action, sources, selection, d + 1, levels, reports, visit);
        }
    }
}

/// Shannon entropy in nats, with `0 ln 0 = 0`.
pub fn entropy<T: Real>(b: &Belief<T>) -> T {
    -b.as_slice().iter().fold(T::zero(), |acc, &p| acc + xlogx(p))
}

/// `H(s | ω_ι)`: the expected posterior entropy over all joint reports of
/// the selected sources.
pub fn conditional_entropy<T: Real>(p: &SelectionProblem<T>, sel: &PerceptionAction) -> Result<T> {
    p.check_selection(sel)?;
    if sel.is_empty() {
        return Ok(entropy(&p.belief));
    }
    let mut h = T::zero();
    for_each_outcome(
        p.belief.as_slice(),
        p.action,
        &p.sources,
        sel.indices(),
        p.joint_cap,
        |_, w| {
            // -Σ_s w ln(w / W) = W ln W - Σ_s w ln w
            let total: T = w.iter().copied().sum();
            let inner = w.iter().fold(T::zero(), |acc, &x| acc + xlogx(x));
            h = h + xlogx(total) - inner;
        },
    )?;
    Ok(h)
}

/// `f(ι) = H(s) - H(s | ω_ι)`. Magnitudes below the identity tolerance are
/// reported as exactly 0.
pub fn mutual_information<T: Real>(p: &SelectionProblem<T>, sel: &PerceptionAction) -> Result<T> {
    let f = entropy(&p.belief) - conditional_entropy(p, sel)?;
    Ok(if f.abs() < T::identity_tol() { T::zero() } else { f })
}

/// `f(ι ∪ {j}) - f(ι)`.
pub fn marginal_gain<T: Real>(p: &SelectionProblem<T>, sel: &PerceptionAction, j: usize) -> Result<T> {
    check_index("source", j, p.num_sources())?;
    if sel.contains(j) {
        return Err(Error::InvalidArgument(format!("source {j} already selected")));
    }
    Ok(mutual_information(p, &sel.with(j))? - mutual_information(p, sel)?)
}

/// Entropy of the joint report distribution of `sel`.
fn report_entropy<T: Real>(p: &SelectionProblem<T>, sel: &PerceptionAction) -> Result<T> {
    let mut h = T::zero();
    for_each_outcome(
        p.belief.as_slice(),
        p.action,
        &p.sources,
        sel.indices(),
        p.joint_cap,
        |_, w| {
            let total: T = w.iter().copied().sum();
            h = h - xlogx(total);
        },
    )?;
    Ok(h)
}

/// The marginal gain of `j` through report entropies,
/// `H(ω_j | ω_ι) - H(ω_j | s)`, which only relies on the sources being
/// conditionally independent given the state. Agrees with
/// [`marginal_gain`] up to rounding.
pub fn marginal_gain_closed_form<T: Real>(p: &SelectionProblem<T>, sel: &PerceptionAction, j: usize) -> Result<T> {
    check_index("source", j, p.num_sources())?;
    p.check_selection(sel)?;
    if sel.contains(j) {
        return Err(Error::InvalidArgument(format!("source {j} already selected")));
    }
    let given_reports = report_entropy(p, &sel.with(j))? - report_entropy(p, sel)?;
    let src = &p.sources[j];
    let given_state = p
        .belief
        .as_slice()
        .iter()
        .enumerate()
        .fold(T::zero(), |acc, (s, &bs)| {
            let h = -src.row(s, p.action).iter().fold(T::zero(), |a, &x| a + xlogx(x));
            acc + bs * h
        });
    Ok(given_reports - given_state)
}

fn outcome<T: Real>(p: &SelectionProblem<T>, selected: PerceptionAction) -> Result<SelectionOutcome<T>> {
    Ok(SelectionOutcome {
        utility: mutual_information(p, &selected)?,
        total_cost: selected.total_cost(&p.sources),
        selected,
    })
}

/// Generalized greedy selection.
///
/// Repeatedly takes the remaining source with the largest
/// `(H(s|ω_ι) - H(s|ω_{ι∪j})) / c_j^β`, adds it if it still fits the budget
/// and drops it from the pool either way. The result is the better (lower
/// conditional entropy) of the built set and the best affordable singleton.
/// Ties go to the lowest source index, and to the built set.
pub fn generalized_greedy<T: Real>(p: &SelectionProblem<T>) -> Result<SelectionOutcome<T>> {
    let n = p.num_sources();
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut built = PerceptionAction::empty();
    let mut built_cost = T::zero();
    let mut h_built = entropy(&p.belief);
    while !remaining.is_empty() {
        let mut best: Option<(usize, T, T)> = None; // (position, ratio, entropy after)
        for (pos, &j) in remaining.iter().enumerate() {
            let h_with = conditional_entropy(p, &built.with(j))?;
            let ratio = (h_built - h_with) / p.sources[j].cost().powf(p.beta);
            if best.is_none_or(|(_, r, _)| ratio > r) {
                best = Some((pos, ratio, h_with));
            }
        }
        let (pos, _, h_with) = best.expect("nonempty pool");
        let j = remaining.remove(pos);
        let cost = p.sources[j].cost();
        if built_cost + cost <= p.budget {
            built = built.with(j);
            built_cost = built_cost + cost;
            h_built = h_with;
        }
    }
    let mut single: Option<(usize, T)> = None;
    for j in 0..n {
        if p.sources[j].cost() > p.budget {
            continue;
        }
        let h = conditional_entropy(p, &PerceptionAction::singleton(j))?;
        if single.is_none_or(|(_, hb)| h < hb) {
            single = Some((j, h));
        }
    }
    match single {
        Some((j, h)) if h < h_built => outcome(p, PerceptionAction::singleton(j)),
        _ => outcome(p, built),
    }
}

/// Exhaustive search over every budget-feasible subset. Ties go to the
/// lexicographically smallest index list.
pub fn brute_force_optimal<T: Real>(p: &SelectionProblem<T>) -> Result<SelectionOutcome<T>> {
    let n = p.num_sources();
    if n > MAX_BRUTE_FORCE_SOURCES {
        return Err(Error::TooManySources {
            count: n,
            cap: MAX_BRUTE_FORCE_SOURCES,
        });
    }
    let mut best = outcome(p, PerceptionAction::empty())?;
    for mask in 1u32..(1u32 << n) {
        let cost = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .fold(T::zero(), |acc, i| acc + p.sources[i].cost());
        if cost > p.budget {
            continue;
        }
        let sel = PerceptionAction::new((0..n).filter(|i| mask >> i & 1 == 1), n)?;
        let f = mutual_information(p, &sel)?;
        if f > best.utility || (f == best.utility && sel < best.selected) {
            best = SelectionOutcome {
                selected: sel,
                utility: f,
                total_cost: cost,
            };
        }
    }
    Ok(best)
}

/// Both sides of an empirical bound check.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport<T> {
    pub lhs: T,
    pub rhs: T,
    /// `lhs <= rhs + 1e-9`.
    pub pass: bool,
    pub greedy: PerceptionAction,
    pub optimal: PerceptionAction,
}

const BOUND_SLACK: f64 = 1e-9;

fn posterior_weights<T: Real>(p: &SelectionProblem<T>, sel: &[usize], union: &[usize], reports: &[usize]) -> Vec<T> {
    let mut w = p.belief.as_slice().to_vec();
    for (k, &i) in union.iter().enumerate() {
        if sel.contains(&i) {
            let src = &p.sources[i];
            for (s, x) in w.iter_mut().enumerate() {
                *x = *x * src.likelihood(s, p.action, reports[k]);
            }
        }
    }
    w
}

/// Calls `visit(prob, b_greedy, b_optimal)` for every joint report of the
/// sources in either selection, with report probabilities taken under
/// `prior`. The posteriors update `p.belief`.
fn for_each_paired_posterior<T: Real>(
    p: &SelectionProblem<T>,
    prior: &Belief<T>,
    greedy: &PerceptionAction,
    optimal: &PerceptionAction,
    mut visit: impl FnMut(T, &Belief<T>, &Belief<T>),
) -> Result<()> {
    if prior.len() != p.belief.len() {
        return Err(Error::InvalidArgument("prior and selection belief differ in dimension".into()));
    }
    let union = greedy.union(optimal);
    let mut failure = None;
    for_each_outcome(prior.as_slice(), p.action, &p.sources, union.indices(), p.joint_cap, |reports, w| {
        if failure.is_some() {
            return;
        }
        let prob: T = w.iter().copied().sum();
        if prob == T::zero() {
            return;
        }
        let bg = Belief::from_weights(posterior_weights(p, greedy.indices(), union.indices(), reports));
        let bo = Belief::from_weights(posterior_weights(p, optimal.indices(), union.indices(), reports));
        match (bg, bo) {
            (Ok(bg), Ok(bo)) => visit(prob, &bg, &bo),
            (Err(e), _) | (_, Err(e)) => failure = Some(e),
        }
    })?;
    failure.map_or(Ok(()), Err)
}

/// `E[KL(p* ‖ p0)]` over the reports of `optimal` drawn under `prior`.
fn expected_kl<T: Real>(p: &SelectionProblem<T>, prior: &Belief<T>, optimal: &PerceptionAction) -> Result<T> {
    let p0 = p.belief.as_slice();
    let mut acc = T::zero();
    let mut failure = None;
    for_each_outcome(prior.as_slice(), p.action, &p.sources, optimal.indices(), p.joint_cap, |reports, w| {
        let prob: T = w.iter().copied().sum();
        if prob == T::zero() || failure.is_some() {
            return;
        }
        let idx = optimal.indices();
        match Belief::from_weights(posterior_weights(p, idx, idx, reports)) {
            Ok(post) => {
                let kl = post
                    .as_slice()
                    .iter()
                    .zip(p0)
                    .filter(|(&q, _)| q > T::zero())
                    .fold(T::zero(), |a, (&q, &r)| a + q * (q / r).ln());
                acc = acc + prob * kl;
            }
            Err(e) => failure = Some(e),
        }
    })?;
    failure.map_or(Ok(acc), Err)
}

/// Expected ℓ1 distance between the greedy and optimal posteriors against
/// `sqrt((2/√e) E[KL(p* ‖ p0)])`.
///
/// `p0` is `p.belief`; report outcomes are drawn with the state distributed
/// as `prior`, which should be `p.belief` for the guarantee to apply.
pub fn check_distance_bound<T: Real>(p: &SelectionProblem<T>, prior: &Belief<T>) -> Result<BoundReport<T>> {
    let greedy = generalized_greedy(p)?.selected;
    let optimal = brute_force_optimal(p)?.selected;
    distance_bound_for(p, prior, greedy, optimal)
}

fn distance_bound_for<T: Real>(
    p: &SelectionProblem<T>,
    prior: &Belief<T>,
    greedy: PerceptionAction,
    optimal: PerceptionAction,
) -> Result<BoundReport<T>> {
    let mut lhs = T::zero();
    for_each_paired_posterior(p, prior, &greedy, &optimal, |prob, bg, bo| {
        lhs = lhs + prob * bg.l1_distance(bo);
    })?;
    let kl = expected_kl(p, prior, &optimal)?;
    let rhs = (T::lit(2.0) / T::lit(0.5).exp() * kl.max(T::zero())).sqrt();
    Ok(BoundReport {
        pass: lhs <= rhs + T::lit(BOUND_SLACK),
        lhs,
        rhs,
        greedy,
        optimal,
    })
}

/// Expected value gap `E[V(b^g) - V(b*)]` against
/// `δ max{|R_max|, |R_min|} / (1 - γ)`, with `δ` the distance bound.
pub fn check_value_bound<T: Real>(
    pomdp: &Pomdp<T>,
    vf: &ValueFunction<T>,
    p: &SelectionProblem<T>,
    prior: &Belief<T>,
) -> Result<BoundReport<T>> {
    if vf.num_states() != p.belief.len() || pomdp.num_states() != p.belief.len() {
        return Err(Error::InvalidArgument("value function, model and belief differ in dimension".into()));
    }
    let greedy = generalized_greedy(p)?.selected;
    let optimal = brute_force_optimal(p)?.selected;
    let delta = distance_bound_for(p, prior, greedy.clone(), optimal.clone())?.rhs;
    let mut lhs = T::zero();
    for_each_paired_posterior(p, prior, &greedy, &optimal, |prob, bg, bo| {
        lhs = lhs + prob * (vf.value(bg) - vf.value(bo));
    })?;
    let rhs = delta * pomdp.value_bound();
    Ok(BoundReport {
        pass: lhs <= rhs + T::lit(BOUND_SLACK),
        lhs,
        rhs,
        greedy,
        optimal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn uninformative(ns: usize, m: usize, cost: f64) -> InfoSource<f64> {
        InfoSource::action_independent(&vec![vec![1.0 / m as f64; m]; ns], 1, cost).unwrap()
    }

    fn revealing(ns: usize, cost: f64) -> InfoSource<f64> {
        let rows: Vec<Vec<f64>> = (0..ns)
            .map(|s| (0..ns).map(|o| if o == s { 1.0 } else { 0.0 }).collect())
            .collect();
        InfoSource::action_independent(&rows, 1, cost).unwrap()
    }

    fn random_problem(rng: &mut ChaCha8Rng, ns: usize, n: usize) -> SelectionProblem<f64> {
        let b = Belief::new(random_distribution(rng, ns)).unwrap();
        let sources = (0..n)
            .map(|_| {
                let m = rng.random_range(2..=3);
                random_source(rng, ns, 1, m)
            })
            .collect();
        SelectionProblem::new(b, 0, sources, rng.random_range(0.5..4.0)).unwrap()
    }

    #[test]
    fn entropy_values() {
        assert_eq!(entropy(&Belief::<f64>::point(3, 1)), 0.0);
        assert!((entropy(&Belief::<f64>::uniform(4)) - 4f64.ln()).abs() < 1e-12);
        let b = Belief::new(vec![0.1, 0.2, 0.7]).unwrap();
        let direct = -(0.1f64 * 0.1f64.ln() + 0.2 * 0.2f64.ln() + 0.7 * 0.7f64.ln());
        assert!((entropy(&b) - direct).abs() < 1e-15);
    }

    #[test]
    fn conditioning_on_nothing_or_noise() {
        let b = Belief::new(vec![0.1, 0.2, 0.7]).unwrap();
        let p = SelectionProblem::new(b.clone(), 0, vec![uninformative(3, 2, 1.0), revealing(3, 1.0)], 1.0).unwrap();
        assert_eq!(conditional_entropy(&p, &PerceptionAction::empty()).unwrap(), entropy(&b));
        assert!((conditional_entropy(&p, &PerceptionAction::singleton(0)).unwrap() - entropy(&b)).abs() < 1e-12);
        assert_eq!(mutual_information(&p, &PerceptionAction::empty()).unwrap(), 0.0);
        assert_eq!(mutual_information(&p, &PerceptionAction::singleton(0)).unwrap(), 0.0);
        assert!((mutual_information(&p, &PerceptionAction::singleton(1)).unwrap() - entropy(&b)).abs() < 1e-12);
        assert_eq!(marginal_gain(&p, &PerceptionAction::singleton(1), 0).unwrap(), 0.0);
    }

    /// Posterior for every joint outcome, averaged with outcome weights.
    fn conditional_entropy_oracle(p: &SelectionProblem<f64>, sel: &[usize]) -> f64 {
        let ns = p.belief.len();
        let sizes: Vec<usize> = sel.iter().map(|&i| p.sources[i].alphabet()).collect();
        let total: usize = sizes.iter().product();
        let mut h = 0.0;
        for code in 0..total {
            let mut c = code;
            let reports: Vec<usize> = sizes
                .iter()
                .map(|&m| {
                    let r = c % m;
                    c /= m;
                    r
                })
                .collect();
            let joint: Vec<f64> = (0..ns)
                .map(|s| {
                    p.belief.get(s)
                        * sel
                            .iter()
                            .zip(&reports)
                            .map(|(&i, &o)| p.sources[i].likelihood(s, p.action, o))
                            .product::<f64>()
                })
                .collect();
            let pr: f64 = joint.iter().sum();
            if pr == 0.0 {
                continue;
            }
            let post_h: f64 = joint.iter().filter(|&&x| x > 0.0).map(|&x| -(x / pr) * (x / pr).ln()).sum();
            h += pr * post_h;
        }
        h
    }

    /// I(s; ω) straight from its definition over the joint p(s, ω̄).
    fn mi_oracle(p: &SelectionProblem<f64>, sel: &[usize]) -> f64 {
        let ns = p.belief.len();
        let sizes: Vec<usize> = sel.iter().map(|&i| p.sources[i].alphabet()).collect();
        let total: usize = sizes.iter().product();
        let mut mi = 0.0;
        for code in 0..total {
            let mut c = code;
            let reports: Vec<usize> = sizes
                .iter()
                .map(|&m| {
                    let r = c % m;
                    c /= m;
                    r
                })
                .collect();
            let joint: Vec<f64> = (0..ns)
                .map(|s| {
                    p.belief.get(s)
                        * sel
                            .iter()
                            .zip(&reports)
                            .map(|(&i, &o)| p.sources[i].likelihood(s, p.action, o))
                            .product::<f64>()
                })
                .collect();
            let p_obs: f64 = joint.iter().sum();
            for s in 0..ns {
                if joint[s] > 0.0 {
                    mi += joint[s] * (joint[s] / (p.belief.get(s) * p_obs)).ln();
                }
            }
        }
        mi
    }

    #[test]
    fn entropies_match_enumeration_oracles() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..200 {
            let ns = rng.random_range(2..=6);
            let p = random_problem(&mut rng, ns, 4);
            let k = rng.random_range(0..=4);
            let mut idx: Vec<usize> = (0..4).collect();
            idx.truncate(k);
            let sel = PerceptionAction::new(idx.clone(), 4).unwrap();
            let h = conditional_entropy(&p, &sel).unwrap();
            assert!((h - conditional_entropy_oracle(&p, &idx)).abs() < 1e-12);
            let f = mutual_information(&p, &sel).unwrap();
            assert!((f - mi_oracle(&p, &idx)).abs() < 1e-10);
        }
    }

    #[test]
    fn marginal_gain_formulas_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..200 {
            let p = random_problem(&mut rng, 4, 5);
            let sel = PerceptionAction::new((0..5).filter(|_| rng.random_bool(0.4)), 5).unwrap();
            for j in (0..5).filter(|&j| !sel.contains(j)) {
                let a = marginal_gain(&p, &sel, j).unwrap();
                let b = marginal_gain_closed_form(&p, &sel, j).unwrap();
                assert!((a - b).abs() < 1e-10, "{a} vs {b}");
            }
        }
        let p = random_problem(&mut rng, 3, 2);
        let gain = marginal_gain(&p, &PerceptionAction::empty(), 1).unwrap();
        assert_eq!(gain, mutual_information(&p, &PerceptionAction::singleton(1)).unwrap());
        assert!(marginal_gain(&p, &PerceptionAction::singleton(1), 1).is_err());
    }

    #[test]
    fn joint_cap_is_enforced() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = random_problem(&mut rng, 3, 4).with_joint_cap(8);
        let all = PerceptionAction::new(0..4, 4).unwrap();
        assert!(matches!(
            conditional_entropy(&p, &all),
            Err(Error::JointAlphabetTooLarge { .. })
        ));
    }

    #[test]
    fn greedy_with_unaffordable_sources_is_empty() {
        let b = Belief::<f64>::uniform(3);
        let p = SelectionProblem::new(b, 0, vec![revealing(3, 2.0), revealing(3, 3.0)], 1.0).unwrap();
        let out = generalized_greedy(&p).unwrap();
        assert!(out.selected.is_empty());
        assert_eq!(out.utility, 0.0);
        assert_eq!(out.total_cost, 0.0);
    }

    #[test]
    fn greedy_breaks_ties_by_index() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let src = random_source(&mut rng, 4, 1, 3);
        let src = InfoSource::new(4, 1, 3, (0..12).map(|k| src.likelihood(k / 3, 0, k % 3)).collect(), 1.0).unwrap();
        let b = Belief::new(random_distribution(&mut rng, 4)).unwrap();
        let p = SelectionProblem::new(b, 0, vec![src.clone(), src], 1.0).unwrap();
        let out = generalized_greedy(&p).unwrap();
        assert_eq!(out.selected, PerceptionAction::singleton(0));
        assert_eq!(out.utility, mutual_information(&p, &PerceptionAction::singleton(0)).unwrap());
    }

    #[test]
    fn greedy_falls_back_to_best_singleton() {
        // A cheap weak source has the best ratio and blocks the expensive
        // revealing one; the singleton comparison recovers it.
        let ns = 4;
        let weak_rows: Vec<Vec<f64>> = (0..ns)
            .map(|s| if s == 0 { vec![0.6, 0.4] } else { vec![0.4, 0.6] })
            .collect();
        let weak = InfoSource::action_independent(&weak_rows, 1, 0.1).unwrap();
        let p = SelectionProblem::new(Belief::uniform(ns), 0, vec![weak, revealing(ns, 1.0)], 1.0).unwrap();
        let out = generalized_greedy(&p).unwrap();
        assert_eq!(out.selected, PerceptionAction::singleton(1));
        assert!(out.total_cost <= p.budget);
    }

    #[test]
    fn brute_force_basics() {
        let p = SelectionProblem::new(Belief::uniform(3), 0, vec![revealing(3, 1.0)], 1.0).unwrap();
        assert_eq!(brute_force_optimal(&p).unwrap().selected, PerceptionAction::singleton(0));
        let p = SelectionProblem::new(Belief::uniform(3), 0, vec![uninformative(3, 2, 1.0); 3], 5.0).unwrap();
        let out = brute_force_optimal(&p).unwrap();
        assert!(out.selected.is_empty());
        assert_eq!(out.utility, 0.0);
        let many = SelectionProblem::new(Belief::uniform(3), 0, vec![uninformative(3, 2, 1.0); 21], 5.0).unwrap();
        assert!(matches!(brute_force_optimal(&many), Err(Error::TooManySources { .. })));
    }

    #[test]
    fn greedy_within_ratio_of_optimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let c = greedy_ratio();
        assert!((c - 0.393469).abs() < 1e-6);
        for _ in 0..100 {
            let ns = rng.random_range(2..=6);
            let p = random_problem(&mut rng, ns, 8);
            let g = generalized_greedy(&p).unwrap();
            let o = brute_force_optimal(&p).unwrap();
            assert!(g.total_cost <= p.budget && o.total_cost <= p.budget);
            assert!(o.utility >= g.utility);
            assert!(g.utility >= c * o.utility - 1e-9);
        }
    }

    #[test]
    fn bounds_trivial_cases() {
        let b = Belief::new(vec![0.3, 0.3, 0.4]).unwrap();
        let p = SelectionProblem::new(b.clone(), 0, vec![uninformative(3, 2, 1.0); 2], 2.0).unwrap();
        let rep = check_distance_bound(&p, &b).unwrap();
        assert_eq!(rep.lhs, 0.0);
        assert_eq!(rep.rhs, 0.0);
        assert!(rep.pass);
        let p = SelectionProblem::new(b.clone(), 0, vec![revealing(3, 1.0)], 1.0).unwrap();
        let rep = check_distance_bound(&p, &b).unwrap();
        assert_eq!(rep.greedy, rep.optimal);
        assert_eq!(rep.lhs, 0.0);
        assert!(rep.pass);
    }

    #[test]
    fn f32_selection() {
        let rows: Vec<Vec<f32>> = vec![vec![0.9, 0.1], vec![0.2, 0.8]];
        let src = InfoSource::action_independent(&rows, 1, 1.0f32).unwrap();
        let p = SelectionProblem::new(Belief::uniform(2), 0, vec![src], 1.0f32).unwrap();
        let out = generalized_greedy(&p).unwrap();
        assert_eq!(out.selected, PerceptionAction::singleton(0));
        assert!(out.utility > 0.0);
    }
}
