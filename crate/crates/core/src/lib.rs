//! Probabilistic representations of concept classes and the private
//! learners built from them.
//!
//! The crate covers the finite-domain model (points of `{0,1}^d`,
//! hypotheses, finite distributions, labeled databases), the exponential
//! mechanism with an exhaustive differential-privacy verifier, hypothesis
//! families with representation checks and boosting, the threshold-hash
//! family for point functions, private and non-private learners, and
//! private optimization with MAX-E3SAT and sanitization instances.
//!
//! Numeric routines that admit exact answers are generic over [`Scalar`],
//! so they run with `f32`, `f64` or [`BigRational`].

pub mod error;
pub mod expmech;
pub mod format;
pub mod learner;
pub mod lp;
pub mod model;
pub mod optimize;
pub mod point;
pub mod representation;
pub mod rng;
pub mod scalar;
pub mod stats;

pub use error::{Error, Result};
pub use expmech::{dp_verify, exp_mech_distribution, exp_mech_sample, DpReport, ScoredCandidates};
pub use learner::{
    extract_representation, nonprivate_learner, ppac_learn, required_sample_size,
    reweight_distribution, BlackBoxLearner, ExtractionMode, LearnerConfig, SampleSizeMode,
};
pub use model::{
    empirical_error, generalization_error, ConceptClass, DomainPoint, FiniteDistribution,
    Hypothesis, LabeledDatabase, TruthTable,
};
pub use num_rational::BigRational;
pub use optimize::{
    bounded_check, e3sat_family, private_optimize, sanitize_quality, Assignment, Clause3,
    Formula, OptimizationProblem, SolutionFamily,
};
pub use point::{point_family, sample_point_class, PointParams, ThresholdHash};
pub use representation::{
    boost_alpha, boost_beta, boost_oracle, drep_check, minimax_error, prep_falsify,
    shrink_family, HypothesisClass, HypothesisFamily,
};
pub use rng::{derive_seed, seeded, Rng};
pub use scalar::{Real, Scalar};

/// Distribution with `f64` weights.
pub type Distribution = FiniteDistribution<f64>;
/// Distribution with exact rational weights.
pub type ExactDistribution = FiniteDistribution<BigRational>;
pub type Distribution32 = FiniteDistribution<f32>;
/// Exponential-mechanism input with `f64` scores.
pub type Scores = ScoredCandidates<f64>;
pub type Scores32 = ScoredCandidates<f32>;
