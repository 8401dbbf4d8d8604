//! The exponential mechanism with an exactly computable output
//! distribution, an exhaustive differential-privacy verifier for finite
//! mechanisms, and the utility bound check.

use crate::error::{Error, Result};
use crate::model::FiniteDistribution;
use crate::rng::Rng;
use crate::scalar::Real;
use rayon::prelude::*;

/// Candidates `0..n` with their scores and the privacy parameter. Scores
/// are the un-normalized quality, e.g. agreement counts `q(S, h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredCandidates<T> {
    scores: Vec<T>,
    epsilon: T,
}

impl<T: Real> ScoredCandidates<T> {
    pub fn new(scores: Vec<T>, epsilon: T) -> Result<Self> {
        if scores.is_empty() {
            return Err(Error::Empty("candidate list"));
        }
        if scores.iter().any(|s| !s.is_finite()) {
            return Err(Error::Precondition("scores must be finite".into()));
        }
        if !(epsilon >= T::zero()) || !epsilon.is_finite() {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                value: epsilon.to_real(),
                reason: "must be a non-negative finite number",
            });
        }
        Ok(Self { scores, epsilon })
    }

    pub fn scores(&self) -> &[T] {
        &self.scores
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

/// `Pr[i] = exp(eps q_i / 2) / sum_j exp(eps q_j / 2)`, computed with the
/// maximum score subtracted before exponentiating.
pub fn exp_mech_distribution<T: Real>(sc: &ScoredCandidates<T>) -> FiniteDistribution<T> {
    let half = sc.epsilon / (T::one() + T::one());
    let top = sc
        .scores
        .iter()
        .copied()
        .fold(T::neg_infinity(), T::max);
    let weights: Vec<T> = sc
        .scores
        .iter()
        .map(|&s| (half * (s - top)).exp())
        .collect();
    let total = weights.iter().copied().fold(T::zero(), |a, b| a + b);
    let n = weights.len() as u64;
    FiniteDistribution::from_weights(n, (0..n).zip(weights.into_iter().map(|w| w / total)))
        .expect("softmax weights are a distribution")
}

/// One draw from [`exp_mech_distribution`].
pub fn exp_mech_sample<T: Real>(sc: &ScoredCandidates<T>, rng: &mut Rng) -> usize {
    exp_mech_distribution(sc).sample(rng) as usize
}

/// Largest number of databases [`dp_verify`] enumerates.
pub const DP_ENUMERATION_BUDGET: u64 = 100_000;

/// A pair of neighboring databases and an output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DpWitness {
    pub database: Vec<usize>,
    pub neighbor: Vec<usize>,
    pub output: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DpReport {
    /// `max ln(Pr[A(S1) = o] / Pr[A(S2) = o])` over neighbors and outputs,
    /// with `0/0 = 0` and `p/0 = +inf`.
    pub max_ln_ratio: f64,
    /// `max (Pr[A(S1) = o] - e^eps Pr[A(S2) = o])` over the same range.
    pub additive_slack_at_eps: f64,
    /// `max over neighbors of sum_o (Pr[A(S1) = o] - e^eps Pr[A(S2) = o])^+`,
    /// the worst additive slack over arbitrary output events.
    pub event_slack_at_eps: f64,
    /// Pair and output attaining `max_ln_ratio`.
    pub witness: Option<DpWitness>,
    pub databases: u64,
    pub neighbor_pairs: u64,
}

impl DpReport {
    pub fn is_private(&self, epsilon: f64, tol: f64) -> bool {
        self.max_ln_ratio <= epsilon + tol
    }
}

fn ln_ratio(p1: f64, p2: f64) -> f64 {
    match (p1 > 0.0, p2 > 0.0) {
        (false, _) => 0.0,
        (true, false) => f64::INFINITY,
        (true, true) => (p1 / p2).ln().max(0.0),
    }
}

fn decode(mut code: u64, universe: usize, m: usize) -> Vec<usize> {
    let mut db = vec![0; m];
    for slot in db.iter_mut() {
        *slot = (code % universe as u64) as usize;
        code /= universe as u64;
    }
    db
}

#[derive(Clone)]
struct Partial {
    ratio: f64,
    witness: Option<(u64, u64, usize)>,
    slack: f64,
    event_slack: f64,
    pairs: u64,
}

impl Partial {
    fn empty() -> Self {
        Self {
            ratio: 0.0,
            witness: None,
            slack: f64::NEG_INFINITY,
            event_slack: 0.0,
            pairs: 0,
        }
    }

    // Associative and commutative: ties in the ratio keep the
    // lexicographically smallest witness.
    fn merge(mut self, other: Partial) -> Partial {
        let take_other = other.ratio > self.ratio
            || (other.ratio == self.ratio
                && match (other.witness, self.witness) {
                    (Some(o), Some(s)) => o < s,
                    (Some(_), None) => true,
                    _ => false,
                });
        if take_other {
            self.ratio = other.ratio;
            self.witness = other.witness;
        }
        self.slack = self.slack.max(other.slack);
        self.event_slack = self.event_slack.max(other.event_slack);
        self.pairs += other.pairs;
        self
    }
}

/// Exhaustively measures the privacy loss of `mechanism`, a function from a
/// database (a vector of `m` record indices into an alphabet of size
/// `universe`) to an exact output distribution over a fixed finite set.
/// Every database, every neighbor obtained by rewriting one position, and
/// every singleton output is checked.
pub fn dp_verify<F>(mechanism: F, universe: usize, m: usize, eps_claimed: f64) -> Result<DpReport>
where
    F: Fn(&[usize]) -> Vec<f64> + Sync,
{
    if universe == 0 {
        return Err(Error::Empty("record alphabet"));
    }
    let count = (universe as f64).powi(m as i32);
    if count > DP_ENUMERATION_BUDGET as f64 {
        return Err(Error::Infeasible {
            what: "databases",
            required: count,
            budget: DP_ENUMERATION_BUDGET as f64,
        });
    }
    let count = count as u64;
    let outputs: Vec<Vec<f64>> = (0..count)
        .into_par_iter()
        .map(|code| mechanism(&decode(code, universe, m)))
        .collect();
    let width = outputs.first().map_or(0, Vec::len);
    if outputs.iter().any(|o| o.len() != width) {
        return Err(Error::Precondition(
            "mechanism output sets differ between databases".into(),
        ));
    }
    let e_eps = eps_claimed.exp();
    let u = universe as u64;

    let total = (0..count)
        .into_par_iter()
        .map(|code| {
            let mut part = Partial::empty();
            let p1 = &outputs[code as usize];
            let mut place = 1u64;
            for _ in 0..m {
                let digit = (code / place) % u;
                for sym in 0..u {
                    if sym == digit {
                        continue;
                    }
                    let other = code - digit * place + sym * place;
                    let p2 = &outputs[other as usize];
                    let mut event = 0.0;
                    for o in 0..width {
                        let r = ln_ratio(p1[o], p2[o]);
                        let key = (code, other, o);
                        if r > part.ratio
                            || (r == part.ratio && part.witness.is_none_or(|w| key < w))
                        {
                            part.ratio = r;
                            part.witness = Some(key);
                        }
                        let diff = p1[o] - e_eps * p2[o];
                        part.slack = part.slack.max(diff);
                        event += diff.max(0.0);
                    }
                    part.event_slack = part.event_slack.max(event);
                    part.pairs += 1;
                }
                place *= u;
            }
            part
        })
        .reduce(Partial::empty, Partial::merge);

    Ok(DpReport {
        max_ln_ratio: total.ratio,
        additive_slack_at_eps: if total.pairs == 0 { 0.0 } else { total.slack },
        event_slack_at_eps: total.event_slack,
        witness: total.witness.map(|(a, b, o)| DpWitness {
            database: decode(a, universe, m),
            neighbor: decode(b, universe, m),
            output: o,
        }),
        databases: count,
        neighbor_pairs: total.pairs,
    })
}

/// Outcome of [`utility_bound_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UtilityCheck {
    /// Exact mass on `{h : error_S(h) > min error + delta}`.
    pub bad_mass: f64,
    /// `|H| exp(-eps delta m / 2)`.
    pub bound: f64,
    pub pass: bool,
}

/// Checks the exponential mechanism's utility guarantee on one instance.
/// `sc` must hold agreement counts `q(S, h)` for a database of `m` records,
/// so that `error_S(h) = 1 - q/m`.
pub fn utility_bound_check(sc: &ScoredCandidates<f64>, m: usize, delta: f64) -> Result<UtilityCheck> {
    if m == 0 {
        return Err(Error::Empty("database"));
    }
    if sc.scores.iter().any(|&q| q < 0.0 || q > m as f64) {
        return Err(Error::Precondition("scores must be agreement counts in [0, m]".into()));
    }
    let dist = exp_mech_distribution(sc);
    let best = sc.scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // error_S(h) > e_min + delta  <=>  q_max - q_h > delta m
    let threshold = delta * m as f64;
    let bad_mass = dist.mass(|i| best - sc.scores[i as usize] > threshold + 1e-9);
    let bound = sc.len() as f64 * (-sc.epsilon * delta * m as f64 / 2.0).exp();
    Ok(UtilityCheck {
        bad_mass,
        bound,
        pass: bad_mass <= bound,
    })
}
