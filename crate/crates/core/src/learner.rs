//! Private and non-private learners on top of hypothesis families, the
//! sample-size formulas, and the conversion from a private learner back to
//! a probabilistic representation.

use crate::error::{check_open_unit, check_positive, Error, Result};
use crate::expmech::{exp_mech_distribution, ScoredCandidates};
use crate::model::{
    domain_size, empirical_error, generalization_error, DomainPoint, FiniteDistribution,
    Hypothesis, LabeledDatabase,
};
use crate::representation::{HypothesisClass, HypothesisFamily, GOOD_SLACK};
use crate::rng::{derived, seeded, Rng};
use crate::scalar::Scalar;
use crate::stats::ceil_count;
use rand::Rng as _;
use rayon::prelude::*;
use std::sync::Arc;

/// Largest class the exponential mechanism is run over.
pub const MAX_MECHANISM_CLASS: usize = 1_000_000;

/// Which accuracy guarantee the sample size is computed for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SampleSizeMode {
    /// `m = (3 / (alpha eps)) (size + ln(1/beta))`; the learner is
    /// `(6 alpha, 4 beta, eps)`-accurate.
    SixAlpha,
    /// `m = 6 (size + ln(2/beta)) max(1/gamma^2, 1/(gamma eps))`; the
    /// learner is `(alpha + gamma, 3 beta, eps)`-accurate.
    Gamma(f64),
}

pub fn required_sample_size_real(
    alpha: f64,
    beta: f64,
    epsilon: f64,
    size: f64,
    mode: SampleSizeMode,
) -> f64 {
    match mode {
        SampleSizeMode::SixAlpha => 3.0 / (alpha * epsilon) * (size + (1.0 / beta).ln()),
        SampleSizeMode::Gamma(gamma) => {
            6.0 * (size + (2.0 / beta).ln())
                * (1.0 / (gamma * gamma)).max(1.0 / (gamma * epsilon))
        }
    }
}

pub fn required_sample_size(
    alpha: f64,
    beta: f64,
    epsilon: f64,
    size: f64,
    mode: SampleSizeMode,
) -> Result<usize> {
    check_open_unit("beta", beta)?;
    check_positive("epsilon", epsilon)?;
    if size < 0.0 || !size.is_finite() {
        return Err(Error::InvalidParameter {
            name: "size",
            value: size,
            reason: "must be a non-negative finite number",
        });
    }
    match mode {
        SampleSizeMode::SixAlpha => check_open_unit("alpha", alpha)?,
        SampleSizeMode::Gamma(gamma) => check_open_unit("gamma", gamma)?,
    }
    Ok(ceil_count(required_sample_size_real(
        alpha, beta, epsilon, size, mode,
    )))
}

/// Parameters of the private learner: the family's representation
/// parameters `(alpha, beta)`, the privacy parameter, and the sample size.
#[derive(Debug, Clone)]
pub struct LearnerConfig {
    pub alpha: f64,
    pub beta: f64,
    pub epsilon: f64,
    pub mode: SampleSizeMode,
    pub m: usize,
    pub family: HypothesisFamily,
}

impl LearnerConfig {
    /// Config with the smallest admissible sample size.
    pub fn new(
        family: HypothesisFamily,
        alpha: f64,
        beta: f64,
        epsilon: f64,
        mode: SampleSizeMode,
    ) -> Result<Self> {
        let m = required_sample_size(alpha, beta, epsilon, family.size_bound(), mode)?;
        Self::with_sample_size(family, alpha, beta, epsilon, mode, m)
    }

    pub fn with_sample_size(
        family: HypothesisFamily,
        alpha: f64,
        beta: f64,
        epsilon: f64,
        mode: SampleSizeMode,
        m: usize,
    ) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta)] {
            if !(v > 0.0 && v < 0.5) {
                return Err(Error::InvalidParameter {
                    name,
                    value: v,
                    reason: "must lie in (0, 1/2)",
                });
            }
        }
        let required = required_sample_size(alpha, beta, epsilon, family.size_bound(), mode)?;
        if m < required {
            return Err(Error::Precondition(format!(
                "sample size {m} below the required {required}"
            )));
        }
        Ok(Self {
            alpha,
            beta,
            epsilon,
            mode,
            m,
            family,
        })
    }

    /// `(accuracy, confidence)` the configuration guarantees.
    pub fn guarantee(&self) -> (f64, f64) {
        match self.mode {
            SampleSizeMode::SixAlpha => (6.0 * self.alpha, 4.0 * self.beta),
            SampleSizeMode::Gamma(gamma) => (self.alpha + gamma, 3.0 * self.beta),
        }
    }
}

fn listed_members(class: &HypothesisClass) -> Result<Vec<Hypothesis>> {
    match class.len() {
        Some(n) if n <= MAX_MECHANISM_CLASS => Ok(class.iter().collect()),
        _ => Err(Error::Infeasible {
            what: "mechanism candidates",
            required: class.size().exp(),
            budget: MAX_MECHANISM_CLASS as f64,
        }),
    }
}

/// Exact output distribution of the exponential mechanism over `class`
/// with agreement-count scores `q(S, h)`.
pub fn learner_output_distribution(
    class: &HypothesisClass,
    db: &LabeledDatabase,
    epsilon: f64,
) -> Result<FiniteDistribution<f64>> {
    let scores = class.iter().map(|h| db.agreements(&h) as f64).collect();
    Ok(exp_mech_distribution(&ScoredCandidates::new(scores, epsilon)?))
}

/// Output of one private learning run.
#[derive(Debug, Clone)]
pub struct PrivateOutput {
    pub hypothesis: Hypothesis,
    pub class: HypothesisClass,
    pub index: usize,
}

/// Samples a class from the family (independently of the data), then picks
/// a member with the exponential mechanism.
pub fn ppac_learn(cfg: &LearnerConfig, db: &LabeledDatabase, rng: &mut Rng) -> Result<PrivateOutput> {
    if db.len() != cfg.m {
        return Err(Error::Precondition(format!(
            "database has {} records, config expects {}",
            db.len(),
            cfg.m
        )));
    }
    let class = cfg.family.sample(rng);
    let members = listed_members(&class)?;
    let scores = members.iter().map(|h| db.agreements(h) as f64).collect();
    let dist = exp_mech_distribution(&ScoredCandidates::new(scores, cfg.epsilon)?);
    let index = dist.sample(rng) as usize;
    Ok(PrivateOutput {
        hypothesis: members[index].clone(),
        class,
        index,
    })
}

/// The non-private learner: sample a class, fail if every member has
/// empirical error above `gamma`, otherwise return the first member of
/// minimal empirical error.
pub fn nonprivate_learner(
    family: &HypothesisFamily,
    db: &LabeledDatabase,
    gamma: f64,
    rng: &mut Rng,
) -> Result<Option<Hypothesis>> {
    let class = family.sample(rng);
    nonprivate_on_class(&class, db, gamma)
}

pub fn nonprivate_on_class(
    class: &HypothesisClass,
    db: &LabeledDatabase,
    gamma: f64,
) -> Result<Option<Hypothesis>> {
    if db.is_empty() {
        return Err(Error::Empty("database"));
    }
    let mut best: Option<(f64, Hypothesis)> = None;
    for h in class.iter() {
        let e = empirical_error(&h, db)?;
        if best.as_ref().is_none_or(|(b, _)| e < *b) {
            best = Some((e, h));
        }
    }
    let (err, h) = best.expect("classes are non-empty");
    Ok((err <= gamma + GOOD_SLACK).then_some(h))
}

/// A learner observed only through its input/output behavior.
pub trait BlackBoxLearner: Send + Sync {
    fn learn(&self, db: &LabeledDatabase, seed: u64) -> Hypothesis;
}

impl<F> BlackBoxLearner for F
where
    F: Fn(&LabeledDatabase, u64) -> Hypothesis + Send + Sync,
{
    fn learn(&self, db: &LabeledDatabase, seed: u64) -> Hypothesis {
        self(db, seed)
    }
}

/// Runs the inner learner on the first `keep` records only.
pub struct Truncate<L> {
    pub inner: L,
    pub keep: usize,
}

impl<L: BlackBoxLearner> BlackBoxLearner for Truncate<L> {
    fn learn(&self, db: &LabeledDatabase, seed: u64) -> Hypothesis {
        self.inner.learn(&db.truncated(self.keep), seed)
    }
}

/// The exponential mechanism over a fixed class, as a black-box learner.
#[derive(Debug, Clone)]
pub struct ExpMechLearner {
    pub class: HypothesisClass,
    pub epsilon: f64,
}

impl ExpMechLearner {
    pub fn output_distribution(&self, db: &LabeledDatabase) -> FiniteDistribution<f64> {
        learner_output_distribution(&self.class, db, self.epsilon)
            .expect("epsilon validated at construction")
    }

    /// Exact `Pr[error_D(c, A(S)) <= alpha]` over `S ~ D^m` labeled by `c`
    /// and the mechanism's coins. Enumerates `|supp D|^m` samples.
    pub fn exact_accuracy(
        &self,
        target: &Hypothesis,
        dist: &FiniteDistribution<f64>,
        m: usize,
        alpha: f64,
    ) -> Result<f64> {
        let support = dist.support();
        let count = (support.len() as f64).powi(m as i32);
        if count > 1e6 {
            return Err(Error::Infeasible {
                what: "samples",
                required: count,
                budget: 1e6,
            });
        }
        let members: Vec<Hypothesis> = self.class.iter().collect();
        let good: Vec<bool> = members
            .iter()
            .map(|h| Ok(generalization_error(target, h, dist)? <= alpha + GOOD_SLACK))
            .collect::<Result<_>>()?;
        let bits = target.bits();
        let mut total = 0.0;
        for mut code in 0..count as u64 {
            let mut p = 1.0;
            let mut records = Vec::with_capacity(m);
            for _ in 0..m {
                let (x, w) = support[(code % support.len() as u64) as usize];
                code /= support.len() as u64;
                p *= w;
                records.push((DomainPoint::new(x, bits)?, target.eval_index(x)));
            }
            let out = self.output_distribution(&LabeledDatabase::new(bits, records)?);
            total += p * out.mass(|i| good[i as usize]);
        }
        Ok(total)
    }
}

impl BlackBoxLearner for ExpMechLearner {
    fn learn(&self, db: &LabeledDatabase, seed: u64) -> Hypothesis {
        let dist = self.output_distribution(db);
        let i = dist.sample(&mut seeded(seed)) as usize;
        self.class.get(i).expect("index within class")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtractionMode {
    /// `K = ceil(2 ln 4 e^{m eps})` runs on the all-zeros database (label 0).
    Plain,
    /// `K' = ceil(4 ln 4 e^{8 alpha eps m})` runs on each of the all-zeros
    /// databases labeled 0 and labeled 1.
    Scaled { alpha: f64 },
}

/// Runs per database for the given extraction mode.
pub fn extraction_runs(m: usize, epsilon: f64, mode: ExtractionMode) -> usize {
    let ln4 = 4f64.ln();
    let me = m as f64 * epsilon;
    match mode {
        ExtractionMode::Plain => ceil_count(2.0 * ln4 * me.exp()),
        ExtractionMode::Scaled { alpha } => ceil_count(4.0 * ln4 * (8.0 * alpha * me).exp()),
    }
}

/// Largest number of learner executions one extracted class may take.
pub const EXTRACTION_BUDGET: usize = 100_000;

/// Turns a private learner into a hypothesis family: a sampled class is the
/// set of outputs of `K` independent runs on constant databases. Runs use
/// seeds derived from the caller's stream and are merged as a set, so the
/// class does not depend on execution order.
pub fn extract_representation(
    learner: Arc<dyn BlackBoxLearner>,
    bits: u32,
    m: usize,
    epsilon: f64,
    mode: ExtractionMode,
) -> Result<HypothesisFamily> {
    check_positive("epsilon", epsilon)?;
    if m == 0 {
        return Err(Error::Precondition("sample size must be at least 1".into()));
    }
    if let ExtractionMode::Scaled { alpha } = mode {
        if !(alpha > 0.0 && alpha <= 0.25) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "must lie in (0, 1/4]",
            });
        }
    }
    let runs = extraction_runs(m, epsilon, mode);
    let labels: &[bool] = match mode {
        ExtractionMode::Plain => &[false],
        ExtractionMode::Scaled { .. } => &[false, true],
    };
    let total = runs * labels.len();
    if total > EXTRACTION_BUDGET {
        return Err(Error::Infeasible {
            what: "learner executions",
            required: total as f64,
            budget: EXTRACTION_BUDGET as f64,
        });
    }
    let databases: Vec<LabeledDatabase> = labels
        .iter()
        .map(|&y| LabeledDatabase::constant(bits, m, y))
        .collect();
    let name = match mode {
        ExtractionMode::Plain => "extract-plain",
        ExtractionMode::Scaled { .. } => "extract-scaled",
    };
    Ok(HypothesisFamily::from_sampler(
        name,
        bits,
        (total as f64).ln(),
        move |rng: &mut Rng| {
            let master: u64 = rng.gen();
            let mut outputs: Vec<Hypothesis> = (0..total)
                .into_par_iter()
                .map(|i| {
                    let db = &databases[i / runs];
                    learner.learn(db, derived(master, i as u64).gen())
                })
                .collect();
            outputs.sort_by_cached_key(Hypothesis::key);
            outputs.dedup_by_key(|h| h.key());
            HypothesisClass::new(outputs).expect("at least one run")
        },
    ))
}

/// `D~(0^d) = 1 - 4 alpha + 4 alpha D(0^d)`, `D~(x) = 4 alpha D(x)`
/// elsewhere. Every point keeps at least a `4 alpha` fraction of its mass.
pub fn reweight_distribution<T: Scalar>(
    dist: &FiniteDistribution<T>,
    alpha: T,
) -> Result<FiniteDistribution<T>> {
    let quarter = T::one() / T::from_count(4);
    if !(alpha > T::zero()) || alpha > quarter {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha.to_real(),
            reason: "must lie in (0, 1/4]",
        });
    }
    let four_alpha = T::from_count(4) * alpha;
    let base = T::one() - four_alpha.clone();
    let mut weights: Vec<(u64, T)> = dist
        .iter()
        .map(|(x, w)| (x, four_alpha.clone() * w.clone()))
        .collect();
    weights.push((0, base));
    FiniteDistribution::from_weights(dist.size(), weights)
}

/// Shorthand for a domain distribution sized for `bits`.
pub fn uniform_domain(bits: u32) -> FiniteDistribution<f64> {
    FiniteDistribution::uniform(domain_size(bits)).expect("non-empty domain")
}
