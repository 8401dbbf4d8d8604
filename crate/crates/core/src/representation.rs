//! Deterministic and probabilistic representations of concept classes.
//!
//! A [`HypothesisClass`] is a finite set of hypotheses whose size is
//! `ln |H|`. A [`HypothesisFamily`] is a distribution over classes, given
//! either by an enumerated support or by a seeded sampler; it is an
//! `(alpha, beta)` representation of a concept class when, for every concept
//! and distribution, a sampled class contains an `alpha`-good hypothesis
//! with probability at least `1 - beta`.

use crate::error::{check_open_unit, Error, Result};
use crate::lp::{LinearProgram, LpError};
use crate::model::{
    domain_size, generalization_error, ConceptClass, FiniteDistribution,
    Hypothesis, HypothesisKey, MAX_TABLE_BITS,
};
use crate::point::{self, PointParams};
use crate::rng::{derived, Rng};
use crate::scalar::{approx_le, Scalar};
use crate::stats::{ceil_count, hoeffding_sigma};
use rand::Rng as _;
use rayon::prelude::*;
use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

/// Largest product of class sizes that a majority class is materialized at.
pub const MAJORITY_MATERIALIZE_LIMIT: usize = 1_000_000;

/// Largest number of classes a family support may be enumerated into.
pub const SUPPORT_BUDGET: usize = 100_000;

/// Largest domain the minimax program is built for (`2^10` variables).
pub const MINIMAX_MAX_BITS: u32 = 10;

#[derive(Debug, Clone)]
enum ClassRepr {
    Listed(Arc<[Hypothesis]>),
    /// `MAJ(H_1, ..., H_T)`, enumerated lazily in mixed radix with `H_1` as
    /// the fastest digit.
    Majority(Arc<[HypothesisClass]>),
}

/// A non-empty finite hypothesis class over a common domain.
#[derive(Debug, Clone)]
pub struct HypothesisClass {
    bits: u32,
    repr: ClassRepr,
}

impl HypothesisClass {
    pub fn new(members: Vec<Hypothesis>) -> Result<Self> {
        let bits = members.first().ok_or(Error::Empty("hypothesis class"))?.bits();
        if let Some(bad) = members.iter().find(|h| h.bits() != bits) {
            return Err(Error::Dimension {
                expected: bits,
                found: bad.bits(),
            });
        }
        Ok(Self {
            bits,
            repr: ClassRepr::Listed(members.into()),
        })
    }

    pub fn singleton(h: Hypothesis) -> Self {
        Self::new(vec![h]).expect("one member")
    }

    pub fn from_concepts(class: &ConceptClass) -> Self {
        Self::new(class.members().to_vec()).expect("concept classes are non-empty")
    }

    /// The majority class `{maj(h_1..h_T) : h_i in H_i}`. Materialized when
    /// the product of sizes is at most [`MAJORITY_MATERIALIZE_LIMIT`].
    pub fn majority_of(classes: Vec<HypothesisClass>) -> Result<Self> {
        let lazy = Self::majority_lazy(classes)?;
        match lazy.len() {
            Some(n) if n <= MAJORITY_MATERIALIZE_LIMIT => lazy.materialize(n),
            _ => Ok(lazy),
        }
    }

    pub fn majority_lazy(classes: Vec<HypothesisClass>) -> Result<Self> {
        let bits = classes.first().ok_or(Error::Empty("majority classes"))?.bits;
        if let Some(bad) = classes.iter().find(|c| c.bits != bits) {
            return Err(Error::Dimension {
                expected: bits,
                found: bad.bits,
            });
        }
        Ok(Self {
            bits,
            repr: ClassRepr::Majority(classes.into()),
        })
    }

    /// Deduplicated union of classes, keeping first occurrences in order.
    pub fn union<'a>(classes: impl IntoIterator<Item = &'a HypothesisClass>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut members = Vec::new();
        for class in classes {
            for h in class.iter() {
                if seen.insert(h.key()) {
                    members.push(h);
                }
            }
        }
        Self::new(members)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Number of members, `None` when it overflows `usize`.
    pub fn len(&self) -> Option<usize> {
        match &self.repr {
            ClassRepr::Listed(m) => Some(m.len()),
            ClassRepr::Majority(parts) => parts
                .iter()
                .try_fold(1usize, |acc, c| c.len().and_then(|n| acc.checked_mul(n))),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `size(H) = ln |H|` (for lazy majority classes, the log of the
    /// product of part sizes).
    pub fn size(&self) -> f64 {
        match &self.repr {
            ClassRepr::Listed(m) => (m.len() as f64).ln(),
            ClassRepr::Majority(parts) => parts.iter().map(HypothesisClass::size).sum(),
        }
    }

    pub fn is_lazy(&self) -> bool {
        matches!(self.repr, ClassRepr::Majority(_))
    }

    pub fn members(&self) -> Option<&[Hypothesis]> {
        match &self.repr {
            ClassRepr::Listed(m) => Some(m),
            ClassRepr::Majority(_) => None,
        }
    }

    pub fn get(&self, mut index: usize) -> Option<Hypothesis> {
        match &self.repr {
            ClassRepr::Listed(m) => m.get(index).cloned(),
            ClassRepr::Majority(parts) => {
                if index >= self.len()? {
                    return None;
                }
                let mut chosen = Vec::with_capacity(parts.len());
                for part in parts.iter() {
                    let n = part.len()?;
                    chosen.push(part.get(index % n)?);
                    index /= n;
                }
                Hypothesis::majority(chosen).ok()
            }
        }
    }

    pub fn iter(&self) -> ClassIter<'_> {
        match &self.repr {
            ClassRepr::Listed(m) => ClassIter::Listed(m.iter()),
            ClassRepr::Majority(parts) => ClassIter::Product {
                parts: parts
                    .iter()
                    .map(|p| p.iter().collect::<Vec<_>>())
                    .collect(),
                digits: Some(vec![0; parts.len()]),
            },
        }
    }

    /// Lists every member; refuses classes larger than `limit`.
    pub fn materialize(&self, limit: usize) -> Result<Self> {
        if let ClassRepr::Listed(_) = self.repr {
            return Ok(self.clone());
        }
        match self.len() {
            Some(n) if n <= limit => Self::new(self.iter().collect()),
            _ => Err(Error::Infeasible {
                what: "majority class",
                required: self.size().exp(),
                budget: limit as f64,
            }),
        }
    }

    pub fn dedup(&self) -> Result<Self> {
        Self::union([self])
    }

    /// Index and error of the member with minimal generalization error,
    /// ties toward the lowest index.
    pub fn best<T: Scalar>(
        &self,
        target: &Hypothesis,
        dist: &FiniteDistribution<T>,
    ) -> Result<(usize, T)> {
        let mut best: Option<(usize, T)> = None;
        for (i, h) in self.iter().enumerate() {
            let e = generalization_error(target, &h, dist)?;
            if best.as_ref().is_none_or(|(_, b)| e < *b) {
                best = Some((i, e));
            }
        }
        Ok(best.expect("classes are non-empty"))
    }

    /// Whether some member has error at most `alpha` for `(target, dist)`.
    pub fn contains_good(
        &self,
        target: &Hypothesis,
        dist: &FiniteDistribution<f64>,
        alpha: f64,
    ) -> Result<bool> {
        for h in self.iter() {
            if generalization_error(target, &h, dist)? <= alpha + GOOD_SLACK {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Slack on "error at most alpha" comparisons in floating point.
pub const GOOD_SLACK: f64 = 1e-12;

pub enum ClassIter<'a> {
    Listed(std::slice::Iter<'a, Hypothesis>),
    Product {
        parts: Vec<Vec<Hypothesis>>,
        digits: Option<Vec<usize>>,
    },
}

impl Iterator for ClassIter<'_> {
    type Item = Hypothesis;

    fn next(&mut self) -> Option<Hypothesis> {
        match self {
            ClassIter::Listed(it) => it.next().cloned(),
            ClassIter::Product { parts, digits } => {
                let current = digits.as_mut()?;
                let h = Hypothesis::majority(
                    current
                        .iter()
                        .zip(parts.iter())
                        .map(|(&d, part)| part[d].clone())
                        .collect(),
                )
                .ok()?;
                // odometer step
                let mut k = 0;
                loop {
                    if k == current.len() {
                        *digits = None;
                        break;
                    }
                    current[k] += 1;
                    if current[k] < parts[k].len() {
                        break;
                    }
                    current[k] = 0;
                    k += 1;
                }
                Some(h)
            }
        }
    }
}

type SamplerFn = dyn Fn(&mut Rng) -> HypothesisClass + Send + Sync;

/// How a family draws classes.
#[derive(Clone)]
pub enum FamilyKind {
    /// Draw from the enumerated support.
    Explicit,
    /// Threshold-hash classes for `POINT_d`.
    Point(PointParams),
    /// Union of `draws` independent classes of the inner family.
    BoostBeta {
        inner: Arc<HypothesisFamily>,
        draws: usize,
    },
    /// Majority class of `rounds` independent classes of the inner family.
    BoostAlpha {
        inner: Arc<HypothesisFamily>,
        rounds: usize,
    },
    /// An opaque seeded sampler.
    Sampler { name: String, sample: Arc<SamplerFn> },
}

impl FamilyKind {
    pub fn name(&self) -> &str {
        match self {
            FamilyKind::Explicit => "explicit",
            FamilyKind::Point(_) => "point",
            FamilyKind::BoostBeta { .. } => "boost-beta",
            FamilyKind::BoostAlpha { .. } => "boost-alpha",
            FamilyKind::Sampler { name, .. } => name,
        }
    }
}

/// A distribution over hypothesis classes: the pair `(H, P)`.
#[derive(Clone)]
pub struct HypothesisFamily {
    bits: u32,
    size_bound: f64,
    kind: FamilyKind,
    support: Option<Arc<[(HypothesisClass, f64)]>>,
}

impl fmt::Debug for HypothesisFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HypothesisFamily")
            .field("kind", &self.kind.name())
            .field("bits", &self.bits)
            .field("size_bound", &self.size_bound)
            .field("support", &self.support.as_ref().map(|s| s.len()))
            .finish()
    }
}

impl HypothesisFamily {
    /// Family with an enumerated support. Probabilities must sum to 1.
    pub fn explicit(support: Vec<(HypothesisClass, f64)>) -> Result<Self> {
        let bits = support.first().ok_or(Error::Empty("family support"))?.0.bits();
        let mut total = 0.0;
        for (class, w) in &support {
            if class.bits() != bits {
                return Err(Error::Dimension {
                    expected: bits,
                    found: class.bits(),
                });
            }
            if !(*w >= 0.0) {
                return Err(Error::InvalidDistribution(format!("class weight {w}")));
            }
            total += w;
        }
        if (total - 1.0).abs() > crate::model::NORMALIZATION_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "class weights sum to {total}"
            )));
        }
        let size_bound = support
            .iter()
            .map(|(c, _)| c.size())
            .fold(f64::NEG_INFINITY, f64::max);
        Ok(Self {
            bits,
            size_bound,
            kind: FamilyKind::Explicit,
            support: Some(support.into()),
        })
    }

    /// Uniform over the given classes (repeats count with multiplicity).
    pub fn uniform(classes: Vec<HypothesisClass>) -> Result<Self> {
        let w = 1.0 / classes.len().max(1) as f64;
        Self::explicit(classes.into_iter().map(|c| (c, w)).collect())
    }

    pub fn single(class: HypothesisClass) -> Self {
        Self::explicit(vec![(class, 1.0)]).expect("one class of weight 1")
    }

    pub fn point(params: PointParams) -> Self {
        Self {
            bits: params.bits,
            size_bound: params.size_bound(),
            kind: FamilyKind::Point(params),
            support: None,
        }
    }

    pub fn from_sampler(
        name: impl Into<String>,
        bits: u32,
        size_bound: f64,
        sample: impl Fn(&mut Rng) -> HypothesisClass + Send + Sync + 'static,
    ) -> Self {
        Self {
            bits,
            size_bound,
            kind: FamilyKind::Sampler {
                name: name.into(),
                sample: Arc::new(sample),
            },
            support: None,
        }
    }

    pub(crate) fn with_size_bound(mut self, size_bound: f64) -> Self {
        self.size_bound = size_bound;
        self
    }

    pub(crate) fn from_parts(
        bits: u32,
        size_bound: f64,
        kind: FamilyKind,
        support: Option<Vec<(HypothesisClass, f64)>>,
    ) -> Self {
        Self {
            bits,
            size_bound,
            kind,
            support: support.map(Into::into),
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// `size(H) = max ln |H_i|` over the classes the family can produce.
    pub fn size_bound(&self) -> f64 {
        self.size_bound
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    pub fn explicit_support(&self) -> Option<&[(HypothesisClass, f64)]> {
        self.support.as_deref()
    }

    pub fn sample(&self, rng: &mut Rng) -> HypothesisClass {
        match &self.kind {
            FamilyKind::Point(params) => point::sample_with(params, rng),
            FamilyKind::BoostBeta { inner, draws } => {
                let drawn: Vec<_> = (0..*draws).map(|_| inner.sample(rng)).collect();
                HypothesisClass::union(&drawn).expect("non-empty union")
            }
            FamilyKind::BoostAlpha { inner, rounds } => {
                let drawn: Vec<_> = (0..*rounds).map(|_| inner.sample(rng)).collect();
                HypothesisClass::majority_of(drawn).expect("non-empty majority")
            }
            FamilyKind::Sampler { sample, .. } => sample(rng),
            FamilyKind::Explicit => {
                let support = self.support.as_ref().expect("explicit family has support");
                let u: f64 = rng.gen();
                let mut acc = 0.0;
                for (class, w) in support.iter() {
                    acc += w;
                    if u < acc {
                        return class.clone();
                    }
                }
                support.last().expect("non-empty").0.clone()
            }
        }
    }

    /// `Pr_P[sampled class contains an alpha-good hypothesis]`, computed
    /// exactly when the family allows it.
    pub fn exact_success(
        &self,
        target: &Hypothesis,
        dist: &FiniteDistribution<f64>,
        alpha: f64,
    ) -> Result<Option<f64>> {
        if let Some(support) = &self.support {
            let mut p = 0.0;
            for (class, w) in support.iter() {
                if class.contains_good(target, dist, alpha)? {
                    p += w;
                }
            }
            return Ok(Some(p));
        }
        match &self.kind {
            FamilyKind::Point(params) if (alpha - params.alpha).abs() < 1e-15 => {
                params.exact_success(target, dist).map(Some)
            }
            FamilyKind::BoostBeta { inner, draws } => Ok(inner
                .exact_success(target, dist, alpha)?
                .map(|s| 1.0 - (1.0 - s).powi(*draws as i32))),
            _ => Ok(None),
        }
    }
}

/// The fixed stress suite of distributions on `{0,1}^d`: every point mass,
/// the uniform distribution, and every two-point mixture with weights on
/// the 1/8 grid.
pub fn stress_suite(bits: u32) -> Result<Vec<FiniteDistribution<f64>>> {
    if bits > 8 {
        return Err(Error::DomainTooLarge { bits, limit: 8 });
    }
    let n = domain_size(bits);
    let mut out = Vec::new();
    for x in 0..n {
        out.push(FiniteDistribution::point_mass(n, x)?);
    }
    out.push(FiniteDistribution::uniform(n)?);
    for x in 0..n {
        for y in x + 1..n {
            for k in 1..8 {
                let w = k as f64 / 8.0;
                out.push(FiniteDistribution::from_weights(n, [(x, w), (y, 1.0 - w)])?);
            }
        }
    }
    Ok(out)
}

/// Game value `max_D min_{h in H} error_D(c, h)`, solved exactly in the
/// scalar type `T` by the simplex method.
pub fn minimax_error_in<T: Scalar>(target: &Hypothesis, class: &HypothesisClass) -> Result<T> {
    let bits = target.bits();
    if bits > MINIMAX_MAX_BITS {
        return Err(Error::DomainTooLarge {
            bits,
            limit: MINIMAX_MAX_BITS,
        });
    }
    if class.bits() != bits {
        return Err(Error::Dimension {
            expected: bits,
            found: class.bits(),
        });
    }
    let n = domain_size(bits) as usize;
    // variables D(0..n) and v
    let mut objective = vec![T::zero(); n + 1];
    objective[n] = T::one();
    let mut lp = LinearProgram::maximize(objective);
    let mut seen = HashSet::new();
    for h in class.iter() {
        let row: Vec<bool> = (0..n as u64)
            .map(|x| h.eval_index(x) != target.eval_index(x))
            .collect();
        if !seen.insert(row.clone()) {
            continue;
        }
        let mut coeffs: Vec<T> = row
            .into_iter()
            .map(|err| if err { -T::one() } else { T::zero() })
            .collect();
        coeffs.push(T::one());
        lp = lp.le(coeffs, T::zero());
    }
    let mut simplex = vec![T::one(); n];
    simplex.push(T::zero());
    lp = lp.le(simplex, T::one());
    match lp.solve() {
        Ok(sol) => Ok(sol.value),
        Err(LpError::Unbounded) => unreachable!("game value is bounded by 1"),
        Err(e) => Err(Error::Precondition(format!("malformed game program: {e:?}"))),
    }
}

pub fn minimax_error(target: &Hypothesis, class: &HypothesisClass) -> Result<f64> {
    minimax_error_in::<f64>(target, class)
}

/// Whether `class` is an `alpha`-representation of `concepts`.
pub fn drep_check(class: &HypothesisClass, concepts: &ConceptClass, alpha: f64) -> Result<bool> {
    for c in concepts.members() {
        if minimax_error(c, class)? > alpha + 1e-9 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Success frequency for one (concept, distribution) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairEstimate {
    pub concept: usize,
    pub distribution: usize,
    pub estimate: f64,
    /// Zero for exact computations.
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrepVerdict {
    /// First pair (in concept-major order) whose estimate plus `3 sigma`
    /// falls below `1 - beta`.
    pub falsified: Option<PairEstimate>,
    /// Pair with the smallest estimate.
    pub worst: PairEstimate,
    pub exact: bool,
    pub trials: usize,
}

impl PrepVerdict {
    pub fn is_falsified(&self) -> bool {
        self.falsified.is_some()
    }
}

/// Tries to falsify that `family` is an `(alpha, beta)` representation of
/// `concepts` on the given stress distributions. Exact when the family
/// supports it, Monte Carlo over `trials` sampled classes otherwise. A
/// verdict without violation is not a certificate.
pub fn prep_falsify(
    family: &HypothesisFamily,
    concepts: &ConceptClass,
    alpha: f64,
    beta: f64,
    stress: &[FiniteDistribution<f64>],
    trials: usize,
    rng: &mut Rng,
) -> Result<PrepVerdict> {
    if trials < 100 {
        return Err(Error::Precondition(format!(
            "prep_falsify needs at least 100 trials, got {trials}"
        )));
    }
    if stress.is_empty() {
        return Err(Error::Empty("stress suite"));
    }
    let pairs = concepts.len() * stress.len();
    let exact = (0..pairs)
        .map(|k| {
            let (ci, di) = (k / stress.len(), k % stress.len());
            family.exact_success(&concepts.members()[ci], &stress[di], alpha)
        })
        .collect::<Result<Option<Vec<f64>>>>()?;

    let (estimates, sigma, is_exact) = match exact {
        Some(probs) => (probs, 0.0, true),
        None => {
            let counts = coverage_counts(family, concepts, stress, alpha, trials, rng.gen())?;
            let probs = counts.iter().map(|&k| k as f64 / trials as f64).collect();
            (probs, hoeffding_sigma(trials), false)
        }
    };

    let mut worst: Option<PairEstimate> = None;
    let mut falsified = None;
    for (k, &estimate) in estimates.iter().enumerate() {
        let pair = PairEstimate {
            concept: k / stress.len(),
            distribution: k % stress.len(),
            estimate,
            sigma,
        };
        if worst.is_none_or(|w| estimate < w.estimate) {
            worst = Some(pair);
        }
        if falsified.is_none() && estimate + 3.0 * sigma < 1.0 - beta - 1e-12 {
            falsified = Some(pair);
        }
    }
    Ok(PrepVerdict {
        falsified,
        worst: worst.expect("at least one pair"),
        exact: is_exact,
        trials,
    })
}

/// For each (concept, distribution) pair in concept-major order, how many
/// of `trials` sampled classes contain an `alpha`-good hypothesis. Class
/// `i` is drawn from seed `derive_seed(master, i)`.
pub fn coverage_counts(
    family: &HypothesisFamily,
    concepts: &ConceptClass,
    stress: &[FiniteDistribution<f64>],
    alpha: f64,
    trials: usize,
    master: u64,
) -> Result<Vec<u32>> {
    let bits = family.bits();
    if concepts.bits() != bits {
        return Err(Error::Dimension {
            expected: bits,
            found: concepts.bits(),
        });
    }
    if bits > MAX_TABLE_BITS {
        return Err(Error::DomainTooLarge {
            bits,
            limit: MAX_TABLE_BITS,
        });
    }
    let concept_tables = concepts
        .members()
        .iter()
        .map(Hypothesis::truth_table)
        .collect::<Result<Vec<_>>>()?;
    let supports: Vec<Vec<(u64, f64)>> = stress.iter().map(|d| d.support().to_vec()).collect();
    let pairs = concepts.len() * stress.len();

    (0..trials)
        .into_par_iter()
        .map(|i| -> Result<Vec<u32>> {
            let class = family.sample(&mut derived(master, i as u64));
            let mut tables = Vec::new();
            let mut seen = HashSet::new();
            for h in class.iter() {
                let t = h.truth_table()?;
                if seen.insert(t.clone()) {
                    tables.push(t);
                }
            }
            let mut hits = vec![0u32; pairs];
            for (ci, ct) in concept_tables.iter().enumerate() {
                for (di, support) in supports.iter().enumerate() {
                    let good = tables.iter().any(|t| {
                        let err: f64 = support
                            .iter()
                            .filter(|(x, _)| t.get(*x) != ct.get(*x))
                            .map(|(_, w)| w)
                            .sum();
                        err <= alpha + GOOD_SLACK
                    });
                    if good {
                        hits[ci * stress.len() + di] = 1;
                    }
                }
            }
            Ok(hits)
        })
        .try_reduce(
            || vec![0u32; pairs],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                Ok(a)
            },
        )
}

/// Union of every class in an explicit family.
pub fn union_representation(family: &HypothesisFamily) -> Result<HypothesisClass> {
    let support = family.explicit_support().ok_or(Error::NoExplicitSupport)?;
    HypothesisClass::union(support.iter().map(|(c, _)| c))
}

/// `M = ceil(ln(1/beta))` draws for the union boost.
pub fn beta_boost_draws(beta_target: f64) -> usize {
    ceil_count((1.0 / beta_target).ln())
}

/// `T = ceil(14 ln(2/alpha))` rounds for the majority boost.
pub fn alpha_boost_rounds(alpha_target: f64) -> usize {
    ceil_count(14.0 * (2.0 / alpha_target).ln())
}

/// Error guarantee `(T/8) (4/3)^{-T/2}` of the majority of `T` rounds.
pub fn majority_error_bound(rounds: usize) -> f64 {
    let t = rounds as f64;
    t / 8.0 * (4.0f64 / 3.0).powf(-t / 2.0)
}

/// Reduces the failure probability by taking the union of
/// `M = ceil(ln(1/beta_target))` independent classes. The size bound grows
/// by `ln M`. When `family` is explicit and `r^M` fits the support budget
/// the result is enumerated as well.
pub fn boost_beta(family: &HypothesisFamily, beta_target: f64) -> Result<HypothesisFamily> {
    check_open_unit("beta_target", beta_target)?;
    boost_beta_draws(family, beta_boost_draws(beta_target))
}

/// Union boost with an explicit number of draws.
pub fn boost_beta_draws(family: &HypothesisFamily, draws: usize) -> Result<HypothesisFamily> {
    let draws = draws.max(1);
    let size_bound = family.size_bound() + (draws as f64).ln();
    let support = match family.explicit_support() {
        Some(inner) if (inner.len() as f64).powi(draws as i32) <= SUPPORT_BUDGET as f64 => {
            let r = inner.len();
            let total = r.pow(draws as u32);
            let mut out = Vec::with_capacity(total);
            for mut code in 0..total {
                let mut w = 1.0;
                let mut picked = Vec::with_capacity(draws);
                for _ in 0..draws {
                    let (class, p) = &inner[code % r];
                    code /= r;
                    w *= p;
                    picked.push(class);
                }
                out.push((HypothesisClass::union(picked)?, w));
            }
            Some(out)
        }
        _ => None,
    };
    Ok(HypothesisFamily::from_parts(
        family.bits(),
        size_bound,
        FamilyKind::BoostBeta {
            inner: Arc::new(family.clone()),
            draws,
        },
        support,
    ))
}

/// Majority boost with `T = ceil(14 ln(2/alpha_target))` rounds. The input
/// should already be a `(1/4, beta/T)` representation (see [`boost_beta`]).
pub fn boost_alpha(family: &HypothesisFamily, alpha_target: f64) -> Result<HypothesisFamily> {
    check_open_unit("alpha_target", alpha_target)?;
    Ok(boost_alpha_rounds(family, alpha_boost_rounds(alpha_target)))
}

pub fn boost_alpha_rounds(family: &HypothesisFamily, rounds: usize) -> HypothesisFamily {
    let rounds = rounds.max(1);
    HypothesisFamily::from_parts(
        family.bits(),
        rounds as f64 * family.size_bound(),
        FamilyKind::BoostAlpha {
            inner: Arc::new(family.clone()),
            rounds,
        },
        None,
    )
}

/// Result of the reweighting thought experiment.
#[derive(Debug, Clone)]
pub enum BoostOutcome<T> {
    Success(BoostRun<T>),
    /// Round (0-based) whose class had no 1/4-good hypothesis.
    Fail { round: usize },
}

#[derive(Debug, Clone)]
pub struct BoostRun<T> {
    /// `maj(h_1, ..., h_T)`.
    pub majority: Hypothesis,
    /// Index of `h_t` within the class of round `t`.
    pub chosen: Vec<usize>,
    /// `error_{D_t}(c, h_t)`.
    pub errors: Vec<T>,
    /// `D_1, ..., D_T`.
    pub distributions: Vec<FiniteDistribution<T>>,
}

/// Runs the boosting thought experiment: in round `t` pick the member of
/// class `t` with minimal error under `D_t` (lowest index on ties), fail if
/// that error exceeds 1/4, then double the weight of the points it gets
/// wrong and scale the rest by `1 - e/(1-e)`.
pub fn boost_oracle<T: Scalar>(
    classes: &[HypothesisClass],
    target: &Hypothesis,
    dist: &FiniteDistribution<T>,
) -> Result<BoostOutcome<T>> {
    if classes.is_empty() {
        return Err(Error::Empty("boosting rounds"));
    }
    let quarter = T::one() / T::from_count(4);
    let two = T::from_count(2);
    let mut current = dist.clone();
    let mut run = BoostRun {
        majority: target.clone(),
        chosen: Vec::with_capacity(classes.len()),
        errors: Vec::with_capacity(classes.len()),
        distributions: Vec::with_capacity(classes.len()),
    };
    let mut parts = Vec::with_capacity(classes.len());
    for (round, class) in classes.iter().enumerate() {
        let (index, err) = class.best(target, &current)?;
        if !approx_le(&err, &quarter) {
            return Ok(BoostOutcome::Fail { round });
        }
        let h = class.get(index).expect("index from best");
        let keep = T::one() - err.clone() / (T::one() - err.clone());
        let next: Vec<(u64, T)> = current
            .iter()
            .map(|(x, w)| {
                let w = if h.eval_index(x) != target.eval_index(x) {
                    two.clone() * w.clone()
                } else {
                    keep.clone() * w.clone()
                };
                (x, w)
            })
            .collect();
        let total = next.iter().fold(T::zero(), |acc, (_, w)| acc + w.clone());
        if (total.to_real() - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidDistribution(format!(
                "round {round} reweighting sums to {total}"
            )));
        }
        run.chosen.push(index);
        run.errors.push(err);
        run.distributions.push(current);
        parts.push(h);
        current = FiniteDistribution::normalized(dist.size(), next)?;
    }
    run.majority = Hypothesis::majority(parts)?;
    Ok(BoostOutcome::Success(run))
}

/// `t = ceil(d m / beta^2)` classes kept by the shrinking construction.
pub fn shrink_count(bits: u32, m: usize, beta: f64) -> usize {
    ceil_count(bits as f64 * m as f64 / (beta * beta))
}

/// Largest number of classes the shrinking construction draws.
pub const SHRINK_BUDGET: usize = 100_000;

/// Replaces `family` by the uniform distribution over `t = ceil(d m /
/// beta^2)` i.i.d. draws from it. Requires `m >= (4/gamma)(size +
/// ln(1/beta))`, the sample size at which the non-private learner with
/// threshold `gamma` on the shrunk family is a `(2 gamma, 3 beta)` learner.
pub fn shrink_family(
    family: &HypothesisFamily,
    bits: u32,
    m: usize,
    beta: f64,
    gamma: f64,
    rng: &mut Rng,
) -> Result<HypothesisFamily> {
    check_open_unit("beta", beta)?;
    check_open_unit("gamma", gamma)?;
    let required_m = 4.0 / gamma * (family.size_bound() + (1.0 / beta).ln());
    if (m as f64) < required_m - 1e-9 {
        return Err(Error::Precondition(format!(
            "shrinking needs m >= (4/gamma)(size + ln(1/beta)) = {required_m:.3}, got {m}"
        )));
    }
    let t = shrink_count(bits, m, beta);
    if t > SHRINK_BUDGET {
        return Err(Error::Infeasible {
            what: "shrunk family classes",
            required: t as f64,
            budget: SHRINK_BUDGET as f64,
        });
    }
    let master: u64 = rng.gen();
    let classes: Vec<HypothesisClass> = (0..t)
        .into_par_iter()
        .map(|i| family.sample(&mut derived(master, i as u64)))
        .collect();
    Ok(HypothesisFamily::uniform(classes)?.with_size_bound(family.size_bound()))
}

/// Convenience: `HypothesisKey`s of a class, for set comparisons in tests
/// and reports.
pub fn class_keys(class: &HypothesisClass) -> Vec<HypothesisKey> {
    let mut keys: Vec<_> = class.iter().map(|h| h.key()).collect();
    keys.sort();
    keys.dedup();
    keys
}
