//! One runner per subcommand. Trials run in parallel with seeds derived
//! from the master seed and are merged in trial order.

use crate::config::{ExperimentConfig, Subcommand};
use crate::report::{Columns, ResultTable, Row, Trial};
use crate::CliError;
use privrep_core::expmech::dp_verify;
use privrep_core::learner::{
    extraction_runs, learner_output_distribution, nonprivate_on_class,
    required_sample_size_real, ExpMechLearner,
};
use privrep_core::model::{domain_size, sample_database};
use privrep_core::optimize::{
    bounded_check, e3sat_draws, opt_extraction_runs, optimize_output_distribution, CheckScope,
    E3Sat, Sanitization,
};
use privrep_core::point::{point_class_size, PointParams};
use privrep_core::representation::{
    alpha_boost_rounds, beta_boost_draws, boost_oracle, coverage_counts, majority_error_bound,
    minimax_error_in, shrink_count, shrink_family, stress_suite, BoostOutcome,
};
use privrep_core::stats::hoeffding_sigma;
use privrep_core::{
    derive_seed, e3sat_family, extract_representation, generalization_error, point_family,
    ppac_learn, required_sample_size, seeded, Assignment, BigRational, Clause3, ConceptClass,
    DomainPoint, ExtractionMode, Formula, Hypothesis, HypothesisClass, HypothesisFamily,
    LabeledDatabase, LearnerConfig, Rng, SampleSizeMode,
};
use rand::Rng as _;
use rayon::prelude::*;
use std::sync::Arc;

type Res<T> = Result<T, CliError>;

/// Runs the configured experiment on a pool of `cfg.jobs` threads.
pub fn run_experiment(cfg: &ExperimentConfig) -> Res<ResultTable> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} workers: {e}", cfg.jobs)))?;
    pool.install(|| match cfg.subcommand {
        Subcommand::DpVerify => dp_verify_run(cfg),
        Subcommand::LearnPoint => learn_point(cfg),
        Subcommand::CheckDrep => check_drep(cfg),
        Subcommand::CheckPrep => check_prep(cfg),
        Subcommand::Boost => boost(cfg),
        Subcommand::Shrink => shrink(cfg),
        Subcommand::Extract => extract(cfg),
        Subcommand::E3sat => e3sat(cfg),
        Subcommand::Sanitize => sanitize(cfg),
        Subcommand::Formulas => formulas(cfg),
    })
}

struct Builder {
    name: &'static str,
    columns: Columns,
    rows: Vec<Row>,
}

impl Builder {
    fn new(cfg: &ExperimentConfig, columns: Columns) -> Self {
        Self {
            name: cfg.subcommand.name(),
            columns,
            rows: Vec::new(),
        }
    }

    fn push(&mut self, trial: Trial, seed: Option<u64>, metric: &str, value: f64, bound: Option<f64>, pass: Option<bool>) {
        self.rows.push(Row {
            experiment: self.name.to_string(),
            trial,
            seed,
            columns: self.columns,
            metric: metric.to_string(),
            value,
            bound,
            pass,
        });
    }

    fn trial(&mut self, i: usize, seed: Option<u64>, metric: &str, value: f64, bound: Option<f64>, pass: Option<bool>) {
        self.push(Trial::Index(i), seed, metric, value, bound, pass);
    }

    fn summary(&mut self, metric: &str, value: f64, bound: Option<f64>, pass: Option<bool>) {
        self.push(Trial::Summary, None, metric, value, bound, pass);
    }

    fn finish(self) -> ResultTable {
        ResultTable { rows: self.rows }
    }
}

/// Runs `f` for trials `0..n` in parallel; trial `i` gets the stream seeded
/// with `derive_seed(master, i)`. Results come back in trial order.
fn trials<T: Send>(master: u64, n: usize, f: impl Fn(usize, &mut Rng) -> Res<T> + Sync) -> Res<Vec<(u64, T)>> {
    trial_range(master, 0..n, f)
}

fn trial_range<T: Send>(
    master: u64,
    range: std::ops::Range<usize>,
    f: impl Fn(usize, &mut Rng) -> Res<T> + Sync,
) -> Res<Vec<(u64, T)>> {
    range
        .into_par_iter()
        .map(|i| {
            let seed = derive_seed(master, i as u64);
            f(i, &mut seeded(seed)).map(|t| (seed, t))
        })
        .collect()
}

fn bits_param(cfg: &ExperimentConfig, default: u32, max: u32) -> Res<u32> {
    let d = cfg.count("d", default as usize)?;
    if d == 0 || d > max as usize {
        return Err(CliError::Usage(format!("`d` must lie in 1..={max}, got {d}")));
    }
    Ok(d as u32)
}

fn random_table(bits: u32, rng: &mut Rng) -> Hypothesis {
    let v: Vec<bool> = (0..domain_size(bits)).map(|_| rng.gen()).collect();
    Hypothesis::from_fn(bits, |x| v[x as usize]).expect("table-sized domain")
}

fn random_class(bits: u32, k: usize, rng: &mut Rng) -> Res<HypothesisClass> {
    Ok(HypothesisClass::new((0..k).map(|_| random_table(bits, rng)).collect())?)
}

/// A test distribution around `target`: uniform, a point mass at the target
/// or elsewhere, or a two-point mixture on the 1/8 grid.
fn test_distribution(bits: u32, target: u64, rng: &mut Rng) -> Res<privrep_core::Distribution> {
    let n = domain_size(bits);
    let other = (target + rng.gen_range(1..n)) % n;
    let d = match rng.gen_range(0..4) {
        0 => privrep_core::Distribution::uniform(n)?,
        1 => privrep_core::Distribution::point_mass(n, target)?,
        2 => privrep_core::Distribution::point_mass(n, other)?,
        _ => {
            let w = rng.gen_range(1..8) as f64 / 8.0;
            privrep_core::Distribution::from_weights(n, [(target, w), (other, 1.0 - w)])?
        }
    };
    Ok(d)
}

/// Weights `2^-k` with `k` uniform in `0..16` on every point of the domain,
/// so some points carry very little mass.
fn dense_distribution(bits: u32, rng: &mut Rng) -> Res<privrep_core::Distribution> {
    let w: Vec<f64> = (0..domain_size(bits)).map(|_| 0.5f64.powi(rng.gen_range(0..16))).collect();
    Ok(privrep_core::Distribution::normalized(domain_size(bits), w.into_iter().enumerate().map(|(x, w)| (x as u64, w)))?)
}

fn record_database(bits: u32, codes: &[usize]) -> LabeledDatabase {
    let records = codes
        .iter()
        .map(|&r| (DomainPoint::new((r / 2) as u64, bits).expect("in range"), r % 2 == 1))
        .collect();
    LabeledDatabase::new(bits, records).expect("same dimension")
}

fn dp_verify_run(cfg: &ExperimentConfig) -> Res<ResultTable> {
    let bits = bits_param(cfg, 2, 6)?;
    let m = cfg.count("m", 3)?;
    let k = cfg.count("k", 5)?;
    let eps = cfg.get("epsilon", 1.0);
    let n = cfg.count("trials", 5)?;
    let mut b = Builder::new(cfg, Columns { epsilon: Some(eps), d: Some(bits), m: Some(m), trials: Some(n), ..Default::default() });
    let results = trials(cfg.master_seed, n, |_, rng| {
        let class = random_class(bits, k, rng)?;
        let mech = |codes: &[usize]| {
            learner_output_distribution(&class, &record_database(bits, codes), eps)
                .expect("validated epsilon")
                .dense()
        };
        Ok(dp_verify(mech, 2 * domain_size(bits) as usize, m, eps)?)
    })?;
    let mut worst = 0f64;
    for (i, (seed, r)) in results.iter().enumerate() {
        worst = worst.max(r.max_ln_ratio);
        b.trial(i, Some(*seed), "max_ln_ratio", r.max_ln_ratio, Some(eps), Some(r.is_private(eps, 1e-9)));
        b.trial(i, Some(*seed), "event_slack", r.event_slack_at_eps, Some(0.0), Some(r.event_slack_at_eps <= 1e-9));
    }
    b.summary("max_ln_ratio", worst, Some(eps), Some(worst <= eps + 1e-9));
    Ok(b.finish())
}

fn learn_point(cfg: &ExperimentConfig) -> Res<ResultTable> {
    let bits = bits_param(cfg, 6, 16)?;
    let alpha = cfg.get("alpha", 0.3);
    let beta = cfg.get("beta", 0.2);
    let eps = cfg.get("epsilon", 1.0);
    let n = cfg.count("trials", 500)?;
    // a (6a', 4b')-accurate learner from the (a', b') point family
    let (ra, rb) = (alpha / 6.0, beta / 4.0);
    let family = point_family(bits, ra, rb)?;
    let learner = LearnerConfig::new(family, ra, rb, eps, SampleSizeMode::SixAlpha)?;
    let m = learner.m;
    let mut b = Builder::new(cfg, Columns { alpha: Some(alpha), beta: Some(beta), epsilon: Some(eps), d: Some(bits), m: Some(m), trials: Some(n), ..Default::default() });
    let results = trials(cfg.master_seed, n, |_, rng| {
        let j = rng.gen_range(0..domain_size(bits));
        let c = Hypothesis::point(bits, j)?;
        let dist = test_distribution(bits, j, rng)?;
        let db = sample_database(&c, &dist, m, rng)?;
        let out = ppac_learn(&learner, &db, rng)?;
        Ok(generalization_error::<f64>(&c, &out.hypothesis, &dist)?)
    })?;
    let mut fails = 0;
    for (i, (seed, err)) in results.iter().enumerate() {
        let ok = *err <= alpha + 1e-12;
        fails += usize::from(!ok);
        b.trial(i, Some(*seed), "error", *err, Some(alpha), Some(ok));
    }
    let rate = fails as f64 / n.max(1) as f64;
    let bound = beta + 3.0 * hoeffding_sigma(n);
    b.summary("failure_rate", rate, Some(bound), Some(rate <= bound));
    Ok(b.finish())
}

fn check_drep(cfg: &ExperimentConfig) -> Res<ResultTable> {
    let bits = bits_param(cfg, 3, 4)?;
    let k = cfg.count("k", 32)?;
    let alpha = cfg.get("alpha", 0.25);
    let n = cfg.count("trials", 20)?;
    let concepts = ConceptClass::point(bits)?;
    let mut b = Builder::new(cfg, Columns { alpha: Some(alpha), d: Some(bits), trials: Some(n), ..Default::default() });
    let results = trials(cfg.master_seed, n, |_, rng| {
        let class = random_class(bits, k, rng)?;
        let mut worst = 0f64;
        let mut gap = 0f64;
        for c in concepts.members() {
            let v: f64 = minimax_error_in(c, &class)?;
            let q: BigRational = minimax_error_in(c, &class)?;
            gap = gap.max((v - num_to_f64(&q)).abs());
            worst = worst.max(v);
        }
        Ok((worst, gap))
    })?;
    let mut max_gap = 0f64;
    let mut represented = 0;
    for (i, (seed, (worst, gap))) in results.iter().enumerate() {
        let ok = *worst <= alpha + 1e-9;
        represented += usize::from(ok);
        max_gap = max_gap.max(*gap);
        b.trial(i, Some(*seed), "max_minimax_error", *worst, Some(alpha), Some(ok));
    }
    b.summary("represented_fraction", represented as f64 / n.max(1) as f64, None, None);
    b.summary("float_exact_gap", max_gap, Some(1e-9), Some(max_gap <= 1e-9));

    // analytic games: c in H, H = {0}, H = {0, 1}
    let c = Hypothesis::point(bits, 1)?;
    let zeros = Hypothesis::zeros(bits);
    let cases = [
        (HypothesisClass::new(vec![zeros.clone(), c.clone()])?, 0.0),
        (HypothesisClass::singleton(zeros.clone()), 1.0),
        (HypothesisClass::new(vec![zeros, Hypothesis::ones(bits)])?, 0.5),
    ];
    let mut dev = 0f64;
    for (class, want) in &cases {
        let v: f64 = minimax_error_in(&c, class)?;
        dev = dev.max((v - want).abs());
    }
    b.summary("analytic_deviation", dev, Some(1e-9), Some(dev <= 1e-9));
    Ok(b.finish())
}

fn num_to_f64(q: &BigRational) -> f64 {
    use privrep_core::Scalar;
    q.to_real()
}

fn check_prep(cfg: &ExperimentConfig) -> Res<ResultTable> {
    let bits = bits_param(cfg, 4, 6)?;
    let alpha = cfg.get("alpha", 0.25);
    let beta = cfg.get("beta", 0.25);
    let n = cfg.count("trials", 5000)?;
    let params = PointParams::new(bits, alpha, beta)?;
    let family = HypothesisFamily::point(params);
    let concepts = ConceptClass::point(bits)?;
    let stress = stress_suite(bits)?;
    let counts = coverage_counts(&family, &concepts, &stress, alpha, n, cfg.master_seed)?;
    let mut b = Builder::new(cfg, Columns { alpha: Some(alpha), beta: Some(beta), d: Some(bits), m: Some(params.class_size), trials: Some(n), ..Default::default() });
    let bound = 1.0 - beta - 3.0 * hoeffding_sigma(n);
    let mut min = f64::INFINITY;
    for (k, &hits) in counts.iter().enumerate() {
        let freq = hits as f64 / n.max(1) as f64;
        min = min.min(freq);
        b.trial(k, None, "coverage", freq, Some(bound), Some(freq >= bound));
    }
    b.summary("min_coverage", min, Some(bound), Some(min >= bound));
    Ok(b.finish())
}

fn boost(cfg: &ExperimentConfig) -> Res<ResultTable> {
    let bits = bits_param(cfg, 6, 8)?;
    let alpha = cfg.get("alpha", 0.25);
    let gamma = cfg.get("gamma", 0.3);
    let k = cfg.count("k", 8)?;
    let n = cfg.count("trials", 200)?;
    if !(0.0..=1.0).contains(&gamma) || k == 0 {
        return Err(CliError::Usage("boost needs 0 <= gamma <= 1 and k >= 1".into()));
    }
    let rounds = alpha_boost_rounds(alpha);
    let bound = majority_error_bound(rounds);
    let mut b = Builder::new(cfg, Columns { alpha: Some(alpha), gamma: Some(gamma), d: Some(bits), m: Some(rounds), trials: Some(n), ..Default::default() });
    // each class holds k copies of the target with every point flipped
    // independently with probability gamma
    let noisy = |c: &Hypothesis, rng: &mut Rng| -> Res<HypothesisClass> {
        let members = (0..k)
            .map(|_| {
                let flips: Vec<bool> = (0..domain_size(bits)).map(|_| rng.gen_bool(gamma)).collect();
                Hypothesis::from_fn(bits, |x| c.eval_index(x) != flips[x as usize])
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(HypothesisClass::new(members)?)
    };
    // instances where some round lacks a 1/4-good hypothesis are redrawn
    let cap = n.saturating_mul(20);
    let mut accepted: Vec<(usize, u64, f64)> = Vec::new();
    let mut start = 0;
    while accepted.len() < n && start < cap {
        let end = (start + (n - accepted.len()).max(16)).min(cap);
        let results = trial_range(cfg.master_seed, start..end, |_, rng| {
            let c = random_table(bits, rng);
            let dist = dense_distribution(bits, rng)?;
            let classes = (0..rounds).map(|_| noisy(&c, rng)).collect::<Res<Vec<_>>>()?;
            Ok(match boost_oracle(&classes, &c, &dist)? {
                BoostOutcome::Success(run) => Some(generalization_error::<f64>(&c, &run.majority, &dist)?),
                BoostOutcome::Fail { .. } => None,
            })
        })?;
        for (i, (seed, err)) in (start..end).zip(results) {
            if let (Some(e), true) = (err, accepted.len() < n) {
                accepted.push((i, seed, e));
            }
        }
        start = end;
    }
    let mut worst = 0f64;
    for &(i, seed, e) in &accepted {
        worst = worst.max(e);
        b.trial(i, Some(seed), "majority_error", e, Some(bound), Some(e <= bound + 1e-12));
    }
    b.summary("accepted_instances", accepted.len() as f64, Some(n as f64), Some(accepted.len() == n));
    b.summary("attempts", start as f64, None, None);
    b.summary("max_majority_error", worst, Some(bound), Some(worst <= bound + 1e-12));
    Ok(b.finish())
}

fn shrink(cfg: &ExperimentConfig) -> Res<ResultTable> {
    let bits = bits_param(cfg, 3, 8)?;
    let alpha = cfg.get("alpha", 0.25);
    let beta = cfg.get("beta", 0.5);
    let gamma = cfg.get("gamma", 0.25);
    let n = cfg.count("trials", 2000)?;
    let family = point_family(bits, alpha, 0.25)?;
    let min_m = (4.0 / gamma * (family.size_bound() + (1.0 / beta).ln()) - 1e-9).ceil() as usize;
    let m = cfg.count("m", min_m)?;
    let shrunk = shrink_family(&family, bits, m, beta, gamma, &mut seeded(derive_seed(cfg.master_seed, u64::MAX)))?;
    let concepts = ConceptClass::point(bits)?;
    let stress = stress_suite(bits)?;
    let mut b = Builder::new(cfg, Columns { alpha: Some(alpha), beta: Some(beta), gamma: Some(gamma), d: Some(bits), m: Some(m), trials: Some(n), ..Default::default() });
    let results = trials(cfg.master_seed, n, |_, rng| {
        let c = &concepts.members()[rng.gen_range(0..concepts.len())];
        let dist = &stress[rng.gen_range(0..stress.len())];
        let db = sample_database(c, dist, m, rng)?;
        let success = |fam: &HypothesisFamily, rng: &mut Rng| -> Res<bool> {
            Ok(match nonprivate_on_class(&fam.sample(rng), &db, gamma)? {
                Some(h) => generalization_error::<f64>(c, &h, dist)? <= 2.0 * gamma + 1e-12,
                None => false,
            })
        };
        Ok((success(&family, rng)?, success(&shrunk, rng)?))
    })?;
    let (mut orig, mut shr) = (0usize, 0usize);
    for (i, (seed, (a, s))) in results.iter().enumerate() {
        orig += usize::from(*a);
        shr += usize::from(*s);
        b.trial(i, Some(*seed), "paired_difference", f64::from(u8::from(*a)) - f64::from(u8::from(*s)), None, None);
    }
    let total = n.max(1) as f64;
    b.summary("original_success", orig as f64 / total, None, None);
    b.summary("shrunk_success", shr as f64 / total, None, None);
    b.summary("shrunk_classes", shrink_count(bits, m, beta) as f64, None, None);
    let bound = beta + 3.0 * hoeffding_sigma(n);
    let degradation = (orig as f64 - shr as f64) / total;
    b.summary("degradation", degradation, Some(bound), Some(degradation <= bound));
    Ok(b.finish())
}

fn extract(cfg: &ExperimentConfig) -> Res<ResultTable> {
    let bits = bits_param(cfg, 1, 4)?;
    let m = cfg.count("m", 3)?;
    let eps = cfg.get("epsilon", 0.5);
    let alpha = cfg.get("alpha", 0.25);
    let beta = cfg.get("beta", 0.25);
    let n = cfg.count("trials", 500)?;
    let concepts = ConceptClass::point(bits)?;
    let stress = stress_suite(bits)?;
    let learner = ExpMechLearner { class: HypothesisClass::from_concepts(&concepts), epsilon: eps };
    let mut b = Builder::new(cfg, Columns { alpha: Some(alpha), beta: Some(beta), epsilon: Some(eps), d: Some(bits), m: Some(m), trials: Some(n), ..Default::default() });

    let mech = |codes: &[usize]| learner.output_distribution(&record_database(bits, codes)).dense();
    let report = dp_verify(mech, 2 * domain_size(bits) as usize, m, eps)?;
    b.summary("learner_max_ln_ratio", report.max_ln_ratio, Some(eps), Some(report.is_private(eps, 1e-9)));

    let mut accuracy = f64::INFINITY;
    for c in concepts.members() {
        for d in &stress {
            accuracy = accuracy.min(learner.exact_accuracy(c, d, m, alpha)?);
        }
    }
    b.summary("learner_min_accuracy", accuracy, Some(0.5), Some(accuracy >= 0.5 - 1e-12));

    let family = extract_representation(Arc::new(learner.clone()), bits, m, eps, ExtractionMode::Plain)?;
    b.summary("extraction_runs", extraction_runs(m, eps, ExtractionMode::Plain) as f64, None, None);
    let counts = coverage_counts(&family, &concepts, &stress, alpha, n, cfg.master_seed)?;
    let bound = 1.0 - beta - 3.0 * hoeffding_sigma(n);
    let mut min = f64::INFINITY;
    for (k, &hits) in counts.iter().enumerate() {
        let freq = hits as f64 / n.max(1) as f64;
        min = min.min(freq);
        b.trial(k, None, "coverage", freq, Some(bound), Some(freq >= bound));
    }
    b.summary("min_coverage", min, Some(bound), Some(min >= bound));
    Ok(b.finish())
}

fn e3sat(cfg: &ExperimentConfig) -> Res<ResultTable> {
    let vars = cfg.count("n", 20)?;
    let m = cfg.count("m", 50)?;
    let alpha = cfg.get("alpha", 0.125);
    let beta = cfg.get("beta", 0.25);
    let eps = cfg.get("epsilon", 2.0);
    let n = cfg.count("trials", 2000)?;
    if !(3..=63).contains(&vars) {
        return Err(CliError::Usage(format!("`n` must lie in 3..=63, got {vars}")));
    }
    let vars = vars as u32;
    let family = e3sat_family(vars, alpha, beta)?;
    let target = (0.875 - alpha) * m as f64;
    let mut b = Builder::new(cfg, Columns { alpha: Some(alpha), beta: Some(beta), epsilon: Some(eps), n: Some(vars), m: Some(m), trials: Some(n), ..Default::default() });
    let results = trials(cfg.master_seed, n, |_, rng| {
        let formula = Formula::random(vars, m, rng)?;
        let class = family.sample(rng);
        Ok(class.iter().map(|&a| formula.satisfied_count(a)).max().unwrap_or(0))
    })?;
    let mut hits = 0;
    for (i, (seed, best)) in results.iter().enumerate() {
        let ok = *best as f64 >= target - 1e-9;
        hits += usize::from(ok);
        b.trial(i, Some(*seed), "best_satisfied", *best as f64, Some(target), Some(ok));
    }
    let bound = 1.0 - beta - 3.0 * hoeffding_sigma(n);
    let rate = hits as f64 / n.max(1) as f64;
    b.summary("draws", e3sat_draws(alpha, beta)? as f64, None, None);
    b.summary("ratio", family.ratio(m), None, None);
    b.summary("success_rate", rate, Some(bound), Some(rate >= bound));

    // toy instances: mechanism output against the closed form
    let toy = E3Sat { n: 3 };
    let all: Vec<Assignment> = Assignment::all(3).collect();
    let diffs = trials(derive_seed(cfg.master_seed, u64::MAX), 20, |_, rng| {
        let clauses: Vec<Clause3> = (0..2).map(|_| Clause3::random(3, rng)).collect();
        let dist = optimize_output_distribution(&toy, &all, &clauses, eps)?;
        let weights: Vec<f64> = all
            .iter()
            .map(|&a| (eps * clauses.iter().filter(|c| c.satisfied(a)).count() as f64 / 2.0).exp())
            .collect();
        let z: f64 = weights.iter().sum();
        Ok(weights
            .iter()
            .enumerate()
            .map(|(i, w)| (dist.prob(i as u64) - w / z).abs())
            .fold(0.0, f64::max))
    })?;
    let worst = diffs.iter().map(|(_, d)| *d).fold(0.0, f64::max);
    b.summary("toy_closed_form_gap", worst, Some(1e-9), Some(worst <= 1e-9));
    Ok(b.finish())
}

fn sanitize(cfg: &ExperimentConfig) -> Res<ResultTable> {
    let bits = bits_param(cfg, 2, 4)?;
    let m = cfg.count("m", 4)?;
    let k = cfg.count("k", 2)?;
    let eps = cfg.get("epsilon", 2.0);
    let mut rng = seeded(cfg.master_seed);
    let predicates = ConceptClass::new("predicates", vec![random_table(bits, &mut rng), random_table(bits, &mut rng)])?;
    let problem = Sanitization::new(predicates, (0..domain_size(bits)).collect(), k)?;
    let solutions = problem.solutions()?;
    let slack = Sanitization::accuracy_slack(solutions.len(), eps, m)?;
    let u = problem.universe.len();
    let count = u.checked_pow(m as u32).filter(|&c| c <= 100_000).ok_or_else(|| {
        CliError::Usage(format!("{u}^{m} databases exceed the enumeration budget"))
    })?;
    let mut b = Builder::new(cfg, Columns { alpha: Some(slack), epsilon: Some(eps), d: Some(bits), m: Some(m), trials: Some(count), ..Default::default() });
    let probs: Vec<f64> = (0..count)
        .into_par_iter()
        .map(|mut code| {
            let db: Vec<u64> = (0..m)
                .map(|_| {
                    let x = problem.universe[code % u];
                    code /= u;
                    x
                })
                .collect();
            let quality: Vec<f64> = solutions.iter().map(|s| problem_quality(&problem, &db, s)).collect();
            let best = quality.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let dist = optimize_output_distribution(&problem, &solutions, &db, eps)?;
            Ok(dist.mass(|i| quality[i as usize] >= best - slack - 1e-12))
        })
        .collect::<Res<_>>()?;
    let mut min = f64::INFINITY;
    for (i, p) in probs.iter().enumerate() {
        min = min.min(*p);
        b.trial(i, None, "near_optimal_mass", *p, Some(0.5), Some(*p >= 0.5));
    }
    b.summary("min_near_optimal_mass", min, Some(0.5), Some(min >= 0.5));
    let sensitivity = bounded_check(&problem, m, &solutions, CheckScope::Exhaustive)?;
    b.summary("sensitivity", sensitivity, Some(1.0), Some(sensitivity <= 1.0 + 1e-9));
    Ok(b.finish())
}

fn problem_quality(p: &Sanitization, db: &[u64], s: &Vec<u64>) -> f64 {
    use privrep_core::OptimizationProblem;
    p.quality(db, s)
}

fn formulas(cfg: &ExperimentConfig) -> Res<ResultTable> {
    let alpha = cfg.get("alpha", 0.1);
    let beta = cfg.get("beta", 0.25);
    let eps = cfg.get("epsilon", 1.0);
    let gamma = cfg.get("gamma", 0.1);
    let size = cfg.get("size", 2.0);
    let bits = cfg.count("d", 4)? as u32;
    let m = cfg.count("m", 10)?;
    let beta_hat = cfg.get("beta_hat", 0.25);
    let mut b = Builder::new(cfg, Columns { alpha: Some(alpha), beta: Some(beta), epsilon: Some(eps), gamma: Some(gamma), d: Some(bits), m: Some(m), ..Default::default() });

    let ln4 = 4f64.ln();
    let me = m as f64 * eps;
    // (metric, count, real value of the formula)
    let mut rows: Vec<(&str, usize, f64)> = vec![
        ("sample_size_six_alpha", required_sample_size(alpha, beta, eps, size, SampleSizeMode::SixAlpha)?, required_sample_size_real(alpha, beta, eps, size, SampleSizeMode::SixAlpha)),
        ("sample_size_gamma", required_sample_size(alpha, beta, eps, size, SampleSizeMode::Gamma(gamma))?, required_sample_size_real(alpha, beta, eps, size, SampleSizeMode::Gamma(gamma))),
        ("point_class_size", point_class_size(alpha, beta), 4.0 / alpha * (1.0 / beta).ln()),
        ("alpha_boost_rounds", alpha_boost_rounds(alpha), 14.0 * (2.0 / alpha).ln()),
        ("beta_boost_draws", beta_boost_draws(beta), (1.0 / beta).ln()),
        ("e3sat_draws", e3sat_draws(alpha, beta)?, (1.0 / beta).ln() / ((alpha + 0.125) / alpha).ln()),
        ("extraction_runs_plain", extraction_runs(m, eps, ExtractionMode::Plain), 2.0 * ln4 * me.exp()),
        ("shrink_count", shrink_count(bits, m, beta), bits as f64 * m as f64 / (beta * beta)),
        ("opt_extraction_runs", opt_extraction_runs(m, eps, beta, beta_hat)?, (1.0 / (1.0 - beta)) * (1.0 / beta_hat).ln() * me.exp()),
    ];
    if alpha <= 0.25 {
        rows.push((
            "extraction_runs_scaled",
            extraction_runs(m, eps, ExtractionMode::Scaled { alpha }),
            4.0 * ln4 * (8.0 * alpha * me).exp(),
        ));
    }
    let mut all = true;
    for (i, (metric, count, real)) in rows.iter().enumerate() {
        // a count is the ceiling of its formula (at least 1)
        let c = *count as f64;
        let ok = c >= real - 1e-9 && (c - 1.0 < real - 1e-9 || *count == 1);
        all &= ok;
        b.trial(i, None, metric, c, Some(*real), Some(ok));
    }
    let t = alpha_boost_rounds(alpha);
    b.trial(rows.len(), None, "majority_error_bound", majority_error_bound(t), None, None);
    b.summary("ceilings", rows.len() as f64, None, Some(all));
    Ok(b.finish())
}
