//! POMDP model, beliefs, auxiliary information sources and exact Bayesian
//! belief updates.
//!
//! Tensors are stored dense and row-major:
//!
//! - transition `T[s, a, s']` at `(s * |A| + a) * |S| + s'`
//! - observation `O[s', a, o]` at `(s' * |A| + a) * |Ω| + o`
//! - reward `R[s, a]` at `s * |A| + a`
//!
//! Dense storage is fine for the tens-of-states instances this crate targets;
//! it is the main scaling limit for much larger models.

use crate::error::{check_index, Error, Result};
use crate::scalar::{dot, Real};

fn check_distribution<T: Real>(row: &[T], what: &str) -> Result<()> {
    let mut sum = T::zero();
    for &p in row {
        if !(p >= T::zero() && p <= T::one()) {
            return Err(Error::InvalidModel(format!("{what}: entry {p} outside [0, 1]")));
        }
        sum = sum + p;
    }
    if (sum - T::one()).abs() > T::model_tol() {
        return Err(Error::InvalidModel(format!("{what}: row sums to {sum}")));
    }
    Ok(())
}

/// A finite POMDP `(S, A, T, Ω, O, R, γ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pomdp<T> {
    num_states: usize,
    num_actions: usize,
    num_observations: usize,
    transition: Vec<T>,
    observation: Vec<T>,
    reward: Vec<T>,
    discount: T,
}

impl<T: Real> Pomdp<T> {
    /// Builds a model from dense row-major tensors, validating every
    /// transition and observation row and the discount.
    pub fn new(
        num_states: usize,
        num_actions: usize,
        num_observations: usize,
        transition: Vec<T>,
        observation: Vec<T>,
        reward: Vec<T>,
        discount: T,
    ) -> Result<Self> {
        if num_states == 0 || num_actions == 0 || num_observations == 0 {
            return Err(Error::InvalidModel("dimensions must be positive".into()));
        }
        let (ns, na, no) = (num_states, num_actions, num_observations);
        if transition.len() != ns * na * ns {
            return Err(Error::InvalidModel(format!(
                "transition has {} entries, expected {}",
                transition.len(),
                ns * na * ns
            )));
        }
        if observation.len() != ns * na * no {
            return Err(Error::InvalidModel(format!(
                "observation has {} entries, expected {}",
                observation.len(),
                ns * na * no
            )));
        }
        if reward.len() != ns * na {
            return Err(Error::InvalidModel(format!(
                "reward has {} entries, expected {}",
                reward.len(),
                ns * na
            )));
        }
        if !(discount >= T::zero() && discount < T::one()) {
            return Err(Error::InvalidModel(format!("discount {discount} not in [0, 1)")));
        }
        for s in 0..ns {
            for a in 0..na {
                let row = &transition[(s * na + a) * ns..(s * na + a + 1) * ns];
                check_distribution(row, &format!("transition row (s={s}, a={a})"))?;
                let row = &observation[(s * na + a) * no..(s * na + a + 1) * no];
                check_distribution(row, &format!("observation row (s'={s}, a={a})"))?;
            }
        }
        if let Some(r) = reward.iter().find(|r| !r.is_finite()) {
            return Err(Error::InvalidModel(format!("non-finite reward {r}")));
        }
        Ok(Self {
            num_states,
            num_actions,
            num_observations,
            transition,
            observation,
            reward,
            discount,
        })
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    pub fn num_observations(&self) -> usize {
        self.num_observations
    }

    pub fn discount(&self) -> T {
        self.discount
    }

    #[inline]
    pub fn transition(&self, s: usize, a: usize, next: usize) -> T {
        self.transition[(s * self.num_actions + a) * self.num_states + next]
    }

    /// The distribution `T(s, a, ·)`.
    #[inline]
    pub fn transition_row(&self, s: usize, a: usize) -> &[T] {
        let start = (s * self.num_actions + a) * self.num_states;
        &self.transition[start..start + self.num_states]
    }

    #[inline]
    pub fn observation(&self, next: usize, a: usize, o: usize) -> T {
        self.observation[(next * self.num_actions + a) * self.num_observations + o]
    }

    /// The distribution `O(s', a, ·)`.
    #[inline]
    pub fn observation_row(&self, next: usize, a: usize) -> &[T] {
        let start = (next * self.num_actions + a) * self.num_observations;
        &self.observation[start..start + self.num_observations]
    }

    #[inline]
    pub fn reward(&self, s: usize, a: usize) -> T {
        self.reward[s * self.num_actions + a]
    }

    pub fn transition_tensor(&self) -> &[T] {
        &self.transition
    }

    pub fn observation_tensor(&self) -> &[T] {
        &self.observation
    }

    pub fn reward_tensor(&self) -> &[T] {
        &self.reward
    }

    /// The column `R(·, a)`.
    pub fn reward_column(&self, a: usize) -> Vec<T> {
        (0..self.num_states).map(|s| self.reward(s, a)).collect()
    }

    pub fn min_reward(&self) -> T {
        self.reward.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn max_reward(&self) -> T {
        self.reward.iter().copied().fold(T::neg_infinity(), T::max)
    }

    /// `max{|R_max|, |R_min|} / (1 - γ)`, the sup-norm bound on any value
    /// function of this model.
    pub fn value_bound(&self) -> T {
        self.max_reward().abs().max(self.min_reward().abs()) / (T::one() - self.discount)
    }

    fn check_belief(&self, b: &Belief<T>) -> Result<()> {
        if b.len() != self.num_states {
            return Err(Error::InvalidBelief(format!(
                "belief has {} entries, model has {} states",
                b.len(),
                self.num_states
            )));
        }
        Ok(())
    }
}

/// A probability vector over states.
#[derive(Debug, Clone, PartialEq)]
pub struct Belief<T>(Vec<T>);

impl<T: Real> Belief<T> {
    /// Validates nonnegativity and unit mass within the model tolerance.
    pub fn new(probs: Vec<T>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidBelief("empty belief".into()));
        }
        let mut sum = T::zero();
        for &p in &probs {
            if !(p >= T::zero()) || !p.is_finite() {
                return Err(Error::InvalidBelief(format!("entry {p} is not a probability")));
            }
            sum = sum + p;
        }
        if (sum - T::one()).abs() > T::model_tol() {
            return Err(Error::InvalidBelief(format!("entries sum to {sum}")));
        }
        Ok(Self(probs))
    }

    /// Normalizes nonnegative weights. A zero total is reported as
    /// [`Error::ZeroLikelihoodObservation`] since every caller reaches this
    /// through a Bayes update.
    pub fn from_weights(mut weights: Vec<T>) -> Result<Self> {
        let total: T = weights.iter().copied().sum();
        if !(total > T::zero()) || !total.is_finite() {
            return Err(Error::ZeroLikelihoodObservation);
        }
        for w in &mut weights {
            *w = *w / total;
        }
        Ok(Self(weights))
    }

    pub fn uniform(num_states: usize) -> Self {
        assert!(num_states > 0, "uniform belief over zero states");
        Self(vec![T::one() / T::lit(num_states as f64); num_states])
    }

    pub fn point(num_states: usize, state: usize) -> Self {
        assert!(state < num_states, "point belief outside state space");
        let mut probs = vec![T::zero(); num_states];
        probs[state] = T::one();
        Self(probs)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<T> {
        self.0
    }

    #[inline]
    pub fn get(&self, s: usize) -> T {
        self.0[s]
    }

    pub fn l1_distance(&self, other: &Self) -> T {
        self.0
            .iter()
            .zip(&other.0)
            .fold(T::zero(), |acc, (&x, &y)| acc + (x - y).abs())
    }
}

/// An auxiliary observation channel with its own alphabet and a cost.
///
/// `likelihood[(s * |A| + a) * m + o]` is the probability that the source
/// reports `o` when the (post-transition) state is `s` and the last action
/// was `a`. Sources are conditionally independent given the state.
#[derive(Debug, Clone, PartialEq)]
pub struct InfoSource<T> {
    num_states: usize,
    num_actions: usize,
    alphabet: usize,
    likelihood: Vec<T>,
    cost: T,
}

impl<T: Real> InfoSource<T> {
    pub fn new(
        num_states: usize,
        num_actions: usize,
        alphabet: usize,
        likelihood: Vec<T>,
        cost: T,
    ) -> Result<Self> {
        if num_states == 0 || num_actions == 0 || alphabet == 0 {
            return Err(Error::InvalidModel("source dimensions must be positive".into()));
        }
        if likelihood.len() != num_states * num_actions * alphabet {
            return Err(Error::InvalidModel(format!(
                "source likelihood has {} entries, expected {}",
                likelihood.len(),
                num_states * num_actions * alphabet
            )));
        }
        if !(cost > T::zero()) || !cost.is_finite() {
            return Err(Error::InvalidModel(format!("source cost {cost} must be positive")));
        }
        for (i, row) in likelihood.chunks(alphabet).enumerate() {
            check_distribution(
                row,
                &format!("source row (s={}, a={})", i / num_actions, i % num_actions),
            )?;
        }
        Ok(Self {
            num_states,
            num_actions,
            alphabet,
            likelihood,
            cost,
        })
    }

    /// A source whose likelihood does not depend on the action: `rows[s]`
    /// is the report distribution in state `s`.
    pub fn action_independent(rows: &[Vec<T>], num_actions: usize, cost: T) -> Result<Self> {
        let alphabet = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != alphabet) {
            return Err(Error::InvalidModel("ragged source likelihood rows".into()));
        }
        let mut likelihood = Vec::with_capacity(rows.len() * num_actions * alphabet);
        for row in rows {
            for _ in 0..num_actions {
                likelihood.extend_from_slice(row);
            }
        }
        Self::new(rows.len(), num_actions, alphabet, likelihood, cost)
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn cost(&self) -> T {
        self.cost
    }

    #[inline]
    pub fn likelihood(&self, s: usize, a: usize, o: usize) -> T {
        self.likelihood[(s * self.num_actions + a) * self.alphabet + o]
    }

    /// The report distribution in state `s` after action `a`.
    #[inline]
    pub fn row(&self, s: usize, a: usize) -> &[T] {
        let start = (s * self.num_actions + a) * self.alphabet;
        &self.likelihood[start..start + self.alphabet]
    }
}

/// A subset of information sources, kept sorted and duplicate free.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PerceptionAction(Vec<usize>);

impl PerceptionAction {
    /// Validates uniqueness and that each index is below `num_sources`.
    pub fn new(indices: impl IntoIterator<Item = usize>, num_sources: usize) -> Result<Self> {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        for w in v.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidArgument(format!("source {} selected twice", w[0])));
            }
        }
        if let Some(&last) = v.last() {
            check_index("source", last, num_sources)?;
        }
        Ok(Self(v))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn singleton(j: usize) -> Self {
        Self(vec![j])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.0.binary_search(&j).is_ok()
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    /// A copy with `j` added (no-op if already present).
    pub fn with(&self, j: usize) -> Self {
        let mut v = self.0.clone();
        if let Err(pos) = v.binary_search(&j) {
            v.insert(pos, j);
        }
        Self(v)
    }

    pub fn union(&self, other: &Self) -> Self {
        other.iter().fold(self.clone(), |acc, j| acc.with(j))
    }

    pub fn total_cost<T: Real>(&self, sources: &[InfoSource<T>]) -> T {
        self.iter().fold(T::zero(), |acc, i| acc + sources[i].cost())
    }
}

/// `Σ_s T(s, a, ·) b(s)`, the predicted state distribution before observing.
pub fn predict<T: Real>(pomdp: &Pomdp<T>, b: &Belief<T>, a: usize) -> Vec<T> {
    let n = pomdp.num_states();
    let mut out = vec![T::zero(); n];
    for (s, &bs) in b.as_slice().iter().enumerate() {
        if bs == T::zero() {
            continue;
        }
        for (o, &t) in out.iter_mut().zip(pomdp.transition_row(s, a)) {
            *o = *o + t * bs;
        }
    }
    out
}

fn check_action_obs<T: Real>(pomdp: &Pomdp<T>, b: &Belief<T>, a: usize, o: usize) -> Result<()> {
    pomdp.check_belief(b)?;
    check_index("action", a, pomdp.num_actions())?;
    check_index("observation", o, pomdp.num_observations())
}

/// Bayes update after taking `a` and observing `o` through the model's own
/// sensor.
pub fn belief_update_intrinsic<T: Real>(
    pomdp: &Pomdp<T>,
    b: &Belief<T>,
    a: usize,
    o: usize,
) -> Result<Belief<T>> {
    check_action_obs(pomdp, b, a, o)?;
    let mut weights = predict(pomdp, b, a);
    for (next, w) in weights.iter_mut().enumerate() {
        *w = *w * pomdp.observation(next, a, o);
    }
    Belief::from_weights(weights)
}

/// `Pr(o | b, a)`, the normalizer of [`belief_update_intrinsic`].
pub fn observation_probability<T: Real>(
    pomdp: &Pomdp<T>,
    b: &Belief<T>,
    a: usize,
    o: usize,
) -> Result<T> {
    check_action_obs(pomdp, b, a, o)?;
    let predicted = predict(pomdp, b, a);
    Ok(predicted
        .iter()
        .enumerate()
        .fold(T::zero(), |acc, (next, &p)| acc + p * pomdp.observation(next, a, o)))
}

/// `Σ_s b(s) R(s, a)`.
pub fn expected_immediate_reward<T: Real>(pomdp: &Pomdp<T>, b: &Belief<T>, a: usize) -> Result<T> {
    pomdp.check_belief(b)?;
    check_index("action", a, pomdp.num_actions())?;
    Ok(dot(b.as_slice(), &pomdp.reward_column(a)))
}

/// Bayes update with the reports `observed[k]` of sources
/// `selection.indices()[k]`. An empty selection returns the input belief.
pub fn belief_update_auxiliary<T: Real>(
    b_prime: &Belief<T>,
    a: usize,
    selection: &PerceptionAction,
    sources: &[InfoSource<T>],
    observed: &[usize],
) -> Result<Belief<T>> {
    if observed.len() != selection.len() {
        return Err(Error::InvalidArgument(format!(
            "{} reports for {} selected sources",
            observed.len(),
            selection.len()
        )));
    }
    if selection.is_empty() {
        return Ok(b_prime.clone());
    }
    let mut weights = b_prime.as_slice().to_vec();
    for (i, &o) in selection.iter().zip(observed) {
        check_index("source", i, sources.len())?;
        let src = &sources[i];
        if src.num_states() != b_prime.len() {
            return Err(Error::InvalidArgument(format!(
                "source {i} is defined over {} states, belief over {}",
                src.num_states(),
                b_prime.len()
            )));
        }
        check_index("action", a, src.num_actions())?;
        check_index("source report", o, src.alphabet())?;
        for (s, w) in weights.iter_mut().enumerate() {
            *w = *w * src.likelihood(s, a, o);
        }
    }
    Belief::from_weights(weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn identity_model(discount: f64) -> Pomdp<f64> {
        // 2 states, 1 action, identity transition, observation reveals state.
        Pomdp::new(
            2,
            1,
            2,
            vec![1.0, 0.0, 0.0, 1.0],
            vec![1.0, 0.0, 0.0, 1.0],
            vec![0.0, 0.0],
            discount,
        )
        .unwrap()
    }

    #[test]
    fn rejects_bad_rows_and_discount() {
        let bad_t = Pomdp::new(2, 1, 1, vec![0.5, 0.4, 0.0, 1.0], vec![1.0, 1.0], vec![0.0; 2], 0.9);
        assert!(matches!(bad_t, Err(Error::InvalidModel(_))));
        let bad_o = Pomdp::new(1, 1, 2, vec![1.0], vec![0.7, 0.7], vec![0.0], 0.9);
        assert!(matches!(bad_o, Err(Error::InvalidModel(_))));
        let bad_g = Pomdp::new(1, 1, 1, vec![1.0], vec![1.0], vec![0.0], 1.0);
        assert!(matches!(bad_g, Err(Error::InvalidModel(_))));
        let neg = Pomdp::new(2, 1, 1, vec![1.2, -0.2, 0.0, 1.0], vec![1.0, 1.0], vec![0.0; 2], 0.9);
        assert!(neg.is_err());
    }

    #[test]
    fn belief_validation() {
        assert!(Belief::new(vec![0.5, 0.5]).is_ok());
        assert!(Belief::new(vec![0.5, 0.6]).is_err());
        assert!(Belief::new(vec![1.5, -0.5]).is_err());
        assert!(Belief::<f64>::new(vec![]).is_err());
        assert!(matches!(
            Belief::<f64>::from_weights(vec![0.0, 0.0]),
            Err(Error::ZeroLikelihoodObservation)
        ));
    }

    #[test]
    fn deterministic_observation_collapses_belief() {
        let m = identity_model(0.9);
        let b = Belief::new(vec![0.5, 0.5]).unwrap();
        let post = belief_update_intrinsic(&m, &b, 0, 0).unwrap();
        assert_eq!(post.as_slice(), &[1.0, 0.0]);
    }

    #[test]
    fn impossible_observation_is_an_error() {
        let m = identity_model(0.9);
        let b = Belief::point(2, 0);
        assert!(matches!(
            belief_update_intrinsic(&m, &b, 0, 1),
            Err(Error::ZeroLikelihoodObservation)
        ));
    }

    #[test]
    fn uninformative_observation_is_prediction_only() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut m = random_pomdp(&mut rng, 3, 2, 4, 0.9);
        m.observation = vec![0.25; 3 * 2 * 4];
        let b = Belief::new(random_distribution(&mut rng, 3)).unwrap();
        let post = belief_update_intrinsic(&m, &b, 1, 2).unwrap();
        let pred = predict(&m, &b, 1);
        for (x, y) in post.as_slice().iter().zip(&pred) {
            assert!((x - y).abs() < 1e-12);
        }
        for o in 0..4 {
            assert!((observation_probability(&m, &b, 1, o).unwrap() - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn intrinsic_update_matches_joint_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let m = random_pomdp(&mut rng, 4, 3, 3, 0.9);
            let b = Belief::new(random_distribution(&mut rng, 4)).unwrap();
            let a = rng.random_range(0..3);
            let o = rng.random_range(0..3);
            // joint p(s, s', o | b, a), marginalize s and condition on o
            let mut joint = vec![vec![vec![0.0; 3]; 4]; 4];
            for s in 0..4 {
                for s2 in 0..4 {
                    for w in 0..3 {
                        joint[s][s2][w] = b.get(s) * m.transition(s, a, s2) * m.observation(s2, a, w);
                    }
                }
            }
            let p_o: f64 = (0..4).flat_map(|s| (0..4).map(move |s2| (s, s2))).map(|(s, s2)| joint[s][s2][o]).sum();
            let post = belief_update_intrinsic(&m, &b, a, o).unwrap();
            for s2 in 0..4 {
                let expect: f64 = (0..4).map(|s| joint[s][s2][o]).sum::<f64>() / p_o;
                assert!((post.get(s2) - expect).abs() < 1e-12);
            }
            assert!((observation_probability(&m, &b, a, o).unwrap() - p_o).abs() < 1e-12);
            let total: f64 = (0..3).map(|w| observation_probability(&m, &b, a, w).unwrap()).sum();
            assert!((total - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn observation_probability_point_mass() {
        let m = identity_model(0.5);
        let b = Belief::point(2, 1);
        assert_eq!(observation_probability(&m, &b, 0, 1).unwrap(), 1.0);
        assert_eq!(observation_probability(&m, &b, 0, 0).unwrap(), 0.0);
    }

    #[test]
    fn immediate_reward() {
        let m = Pomdp::new(2, 1, 1, vec![1.0, 0.0, 0.0, 1.0], vec![1.0, 1.0], vec![10.0, -5.0], 0.9).unwrap();
        assert_eq!(expected_immediate_reward(&m, &Belief::uniform(2), 0).unwrap(), 2.5);
        assert_eq!(expected_immediate_reward(&m, &Belief::point(2, 1), 0).unwrap(), -5.0);
        assert!(expected_immediate_reward(&m, &Belief::uniform(2), 1).is_err());
    }

    #[test]
    fn empty_auxiliary_selection_is_identity() {
        let b = Belief::new(vec![0.2, 0.3, 0.5]).unwrap();
        let out = belief_update_auxiliary(&b, 0, &PerceptionAction::empty(), &[], &[]).unwrap();
        assert_eq!(out, b);
    }

    #[test]
    fn revealing_source_gives_point_mass() {
        let rows = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
        let src = InfoSource::action_independent(&rows, 2, 1.0).unwrap();
        let b = Belief::new(vec![0.2, 0.3, 0.5]).unwrap();
        let sel = PerceptionAction::singleton(0);
        let out = belief_update_auxiliary(&b, 1, &sel, &[src], &[2]).unwrap();
        assert_eq!(out.as_slice(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn auxiliary_update_matches_joint_alphabet_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let ns = 4;
            let srcs = vec![random_source(&mut rng, ns, 2, 2), random_source(&mut rng, ns, 2, 3)];
            let b = Belief::new(random_distribution(&mut rng, ns)).unwrap();
            let a = rng.random_range(0..2);
            // a single source over the 2x3 joint alphabet
            let mut joint = Vec::new();
            for s in 0..ns {
                for o1 in 0..2 {
                    for o2 in 0..3 {
                        joint.push(srcs[0].likelihood(s, a, o1) * srcs[1].likelihood(s, a, o2));
                    }
                }
            }
            let joint_src = InfoSource::new(ns, 1, 6, joint, 1.0).unwrap();
            let (o1, o2) = (rng.random_range(0..2), rng.random_range(0..3));
            let sel = PerceptionAction::new([0, 1], 2).unwrap();
            let got = belief_update_auxiliary(&b, a, &sel, &srcs, &[o1, o2]).unwrap();
            let want = belief_update_auxiliary(&b, 0, &PerceptionAction::singleton(0), &[joint_src], &[o1 * 3 + o2])
                .unwrap();
            for s in 0..ns {
                assert!((got.get(s) - want.get(s)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn perception_action_rules() {
        assert!(PerceptionAction::new([1, 1], 3).is_err());
        assert!(PerceptionAction::new([3], 3).is_err());
        let p = PerceptionAction::new([2, 0], 3).unwrap();
        assert_eq!(p.indices(), &[0, 2]);
        assert_eq!(p.with(1).indices(), &[0, 1, 2]);
        assert!(PerceptionAction::empty() < PerceptionAction::singleton(0));
        assert!(PerceptionAction::new([0, 1], 2).unwrap() < PerceptionAction::singleton(1));
    }

    #[test]
    fn single_precision_models_work() {
        let m: Pomdp<f32> = Pomdp::new(2, 1, 2, vec![1.0, 0.0, 0.0, 1.0], vec![0.8, 0.2, 0.2, 0.8], vec![1.0, 0.0], 0.9)
            .unwrap();
        let post = belief_update_intrinsic(&m, &Belief::uniform(2), 0, 0).unwrap();
        assert!((post.get(0) - 0.8).abs() < 1e-6);
    }
}
