//! Private approximation of bounded optimization problems over a solution
//! representation, with MAX-E3SAT and database sanitization as instances.

use crate::error::{check_open_unit, check_positive, Error, Result};
use crate::expmech::{exp_mech_distribution, ScoredCandidates};
use crate::model::{ConceptClass, FiniteDistribution};
use crate::rng::{derived, Rng};
use crate::stats::ceil_count;
use rand::Rng as _;
use rand::seq::index::sample as sample_indices;
use rayon::prelude::*;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

/// A quality function `q : X* x F -> [0, 1]` over a finite record alphabet.
pub trait OptimizationProblem: Sync {
    type Record: Clone + Send + Sync;
    type Solution: Clone + Send + Sync;

    /// Every record value, used for exhaustive neighbor enumeration.
    fn universe(&self) -> Vec<Self::Record>;

    fn quality(&self, db: &[Self::Record], solution: &Self::Solution) -> f64;
}

/// Distribution over finite solution classes, with a size bound.
type Sampler<S> = Arc<dyn Fn(&mut Rng) -> Vec<S> + Send + Sync>;

#[derive(Clone)]
pub struct SolutionFamily<S> {
    name: String,
    size_bound: f64,
    sampler: Sampler<S>,
}

impl<S> fmt::Debug for SolutionFamily<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SolutionFamily")
            .field("name", &self.name)
            .field("size_bound", &self.size_bound)
            .finish_non_exhaustive()
    }
}

impl<S: Clone + Send + Sync + 'static> SolutionFamily<S> {
    /// The family that always returns `solutions`.
    pub fn single(solutions: Vec<S>) -> Result<Self> {
        if solutions.is_empty() {
            return Err(Error::Empty("solution class"));
        }
        let size_bound = (solutions.len() as f64).ln();
        let solutions: Arc<[S]> = solutions.into();
        Ok(Self::from_sampler("single", size_bound, move |_| solutions.to_vec()))
    }

    pub fn from_sampler(
        name: impl Into<String>,
        size_bound: f64,
        sampler: impl Fn(&mut Rng) -> Vec<S> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            size_bound,
            sampler: Arc::new(sampler),
        }
    }
}

impl<S> SolutionFamily<S> {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size_bound(&self) -> f64 {
        self.size_bound
    }

    pub fn sample(&self, rng: &mut Rng) -> Vec<S> {
        (self.sampler)(rng)
    }

    /// `Delta = m / size`; infinite for a size-zero family.
    pub fn ratio(&self, m: usize) -> f64 {
        m as f64 / self.size_bound
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckScope {
    Exhaustive,
    /// `samples` random databases, each against every neighbor.
    Sampled { samples: usize, seed: u64 },
}

/// Largest number of databases an exhaustive boundedness check visits.
pub const BOUNDED_CHECK_BUDGET: f64 = 1e5;

/// Maximum of `|m q(S1, f) - m q(S2, f)|` over neighboring databases of
/// length `m` in scope and the given solutions. Bounded problems stay at
/// or below 1.
pub fn bounded_check<P: OptimizationProblem>(
    problem: &P,
    m: usize,
    solutions: &[P::Solution],
    scope: CheckScope,
) -> Result<f64> {
    let universe = problem.universe();
    if universe.is_empty() {
        return Err(Error::Empty("record alphabet"));
    }
    let u = universe.len() as u64;
    let decode = |mut code: u64| -> Vec<P::Record> {
        (0..m)
            .map(|_| {
                let r = universe[(code % u) as usize].clone();
                code /= u;
                r
            })
            .collect()
    };
    let codes: Vec<u64> = match scope {
        CheckScope::Exhaustive => {
            let count = (u as f64).powi(m as i32);
            if count > BOUNDED_CHECK_BUDGET {
                return Err(Error::Infeasible {
                    what: "databases",
                    required: count,
                    budget: BOUNDED_CHECK_BUDGET,
                });
            }
            (0..count as u64).collect()
        }
        CheckScope::Sampled { samples, seed } => (0..samples as u64)
            .map(|i| {
                let mut rng = derived(seed, i);
                (0..m).fold((0u64, 1u64), |(c, place), _| {
                    (c + rng.gen_range(0..u) * place, place.wrapping_mul(u))
                })
                .0
            })
            .collect(),
    };
    let mass = m as f64;
    let worst = codes
        .par_iter()
        .map(|&code| {
            let db = decode(code);
            let base: Vec<f64> = solutions.iter().map(|f| problem.quality(&db, f)).collect();
            let mut worst = 0f64;
            for pos in 0..m {
                for rec in &universe {
                    let mut nb = db.clone();
                    nb[pos] = rec.clone();
                    for (f, q) in solutions.iter().zip(&base) {
                        worst = worst.max((mass * q - mass * problem.quality(&nb, f)).abs());
                    }
                }
            }
            worst
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}

/// Exact output distribution of the exponential mechanism over `class` with
/// scores `m q(S, f)`.
pub fn optimize_output_distribution<P: OptimizationProblem>(
    problem: &P,
    class: &[P::Solution],
    db: &[P::Record],
    epsilon: f64,
) -> Result<FiniteDistribution<f64>> {
    let m = db.len() as f64;
    let scores = class.iter().map(|f| m * problem.quality(db, f)).collect();
    Ok(exp_mech_distribution(&ScoredCandidates::new(scores, epsilon)?))
}

/// Samples a class from `family`, then selects a member of it with the
/// exponential mechanism on scores `m q(S, f)`.
pub fn private_optimize<P: OptimizationProblem>(
    problem: &P,
    family: &SolutionFamily<P::Solution>,
    db: &[P::Record],
    epsilon: f64,
    rng: &mut Rng,
) -> Result<P::Solution> {
    let class = family.sample(rng);
    if class.is_empty() {
        return Err(Error::Empty("solution class"));
    }
    let dist = optimize_output_distribution(problem, &class, db, epsilon)?;
    Ok(class[dist.sample(rng) as usize].clone())
}

/// `Gamma = ceil((1/(1-beta)) ln(1/beta_hat) e^{m eps})` runs of the
/// optimizer on the all-zeros database.
pub fn opt_extraction_runs(m: usize, epsilon: f64, beta: f64, beta_hat: f64) -> Result<usize> {
    if !(0.0..1.0).contains(&beta) {
        return Err(Error::InvalidParameter {
            name: "beta",
            value: beta,
            reason: "must lie in [0, 1)",
        });
    }
    check_open_unit("beta_hat", beta_hat)?;
    if epsilon < 0.0 {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            value: epsilon,
            reason: "must be non-negative",
        });
    }
    Ok(ceil_count(
        (1.0 / (1.0 - beta)) * (1.0 / beta_hat).ln() * (m as f64 * epsilon).exp(),
    ))
}

/// Largest number of optimizer executions per extracted class.
pub const OPT_EXTRACTION_BUDGET: usize = 100_000;

/// A private optimizer observed through `(database, seed) -> solution`.
pub type BlackBoxOptimizer<R, S> = Arc<dyn Fn(&[R], u64) -> S + Send + Sync>;

/// Turns a private optimizer into a solution family: a class is the set of
/// outputs of `Gamma` runs on `zero_db`.
pub fn opt_extract_representation<R, S>(
    optimizer: BlackBoxOptimizer<R, S>,
    zero_db: Vec<R>,
    epsilon: f64,
    beta: f64,
    beta_hat: f64,
) -> Result<SolutionFamily<S>>
where
    R: Send + Sync + 'static,
    S: Ord + Clone + Send + Sync + 'static,
{
    let runs = opt_extraction_runs(zero_db.len(), epsilon, beta, beta_hat)?;
    if runs > OPT_EXTRACTION_BUDGET {
        return Err(Error::Infeasible {
            what: "optimizer executions",
            required: runs as f64,
            budget: OPT_EXTRACTION_BUDGET as f64,
        });
    }
    Ok(SolutionFamily::from_sampler(
        "extract",
        (runs as f64).ln(),
        move |rng: &mut Rng| {
            let master: u64 = rng.gen();
            let mut out: Vec<S> = (0..runs as u64)
                .into_par_iter()
                .map(|i| optimizer(&zero_db, derived(master, i).gen()))
                .collect();
            out.sort();
            out.dedup();
            out
        },
    ))
}

/// Assignment to `n` boolean variables; variable `i` (1-based) is bit `i-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment {
    pub n: u32,
    pub bits: u64,
}

impl Assignment {
    pub fn new(n: u32, bits: u64) -> Result<Self> {
        if n == 0 || n > 63 {
            return Err(Error::InvalidParameter {
                name: "n",
                value: n as f64,
                reason: "must lie in 1..=63",
            });
        }
        if bits >> n != 0 {
            return Err(Error::Precondition(format!("assignment {bits:#x} has more than {n} bits")));
        }
        Ok(Self { n, bits })
    }

    pub fn value(self, var: u32) -> bool {
        self.bits >> (var - 1) & 1 == 1
    }

    pub fn all(n: u32) -> impl Iterator<Item = Assignment> {
        (0..1u64 << n).map(move |bits| Assignment { n, bits })
    }

    pub fn random(n: u32, rng: &mut Rng) -> Self {
        Self {
            n,
            bits: rng.gen_range(0..1u64 << n),
        }
    }
}

/// Disjunction of three literals on distinct variables, stored as signed
/// 1-based variable indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clause3([i32; 3]);

impl Clause3 {
    pub fn new(lits: [i32; 3]) -> Result<Self> {
        if lits.contains(&0) {
            return Err(Error::Precondition("literal 0 is not a variable".into()));
        }
        let [a, b, c] = lits.map(i32::unsigned_abs);
        if a == b || a == c || b == c {
            return Err(Error::Precondition(format!(
                "clause {lits:?} repeats a variable"
            )));
        }
        Ok(Self(lits))
    }

    pub fn literals(&self) -> [i32; 3] {
        self.0
    }

    pub fn max_var(&self) -> u32 {
        self.0.iter().map(|l| l.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn satisfied(&self, a: Assignment) -> bool {
        self.0
            .iter()
            .any(|&l| a.value(l.unsigned_abs()) == (l > 0))
    }

    /// Every clause on `n` variables, with variables in increasing order.
    pub fn all(n: u32) -> Vec<Clause3> {
        let n = n as i32;
        let mut out = Vec::new();
        for x in 1..=n {
            for y in x + 1..=n {
                for z in y + 1..=n {
                    for signs in 0..8 {
                        let s = |k: i32, v: i32| if signs >> k & 1 == 1 { -v } else { v };
                        out.push(Clause3([s(0, x), s(1, y), s(2, z)]));
                    }
                }
            }
        }
        out
    }

    pub fn random(n: u32, rng: &mut Rng) -> Self {
        let vars = sample_indices(rng, n as usize, 3);
        let mut lits = [0i32; 3];
        for (slot, v) in lits.iter_mut().zip(vars.iter()) {
            let v = v as i32 + 1;
            *slot = if rng.gen() { v } else { -v };
        }
        Self(lits)
    }
}

impl fmt::Display for Clause3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.0;
        write!(f, "{a} {b} {c} 0")
    }
}

/// A MAX-E3SAT instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    pub n: u32,
    pub clauses: Vec<Clause3>,
}

impl Formula {
    pub fn new(n: u32, clauses: Vec<Clause3>) -> Result<Self> {
        if !(3..=63).contains(&n) {
            return Err(Error::InvalidParameter {
                name: "n",
                value: n as f64,
                reason: "must lie in 3..=63",
            });
        }
        if let Some(c) = clauses.iter().find(|c| c.max_var() > n) {
            return Err(Error::Precondition(format!("clause {c} exceeds {n} variables")));
        }
        Ok(Self { n, clauses })
    }

    pub fn random(n: u32, m: usize, rng: &mut Rng) -> Result<Self> {
        let clauses = (0..m).map(|_| Clause3::random(n, rng)).collect();
        Self::new(n, clauses)
    }

    pub fn satisfied_count(&self, a: Assignment) -> usize {
        self.clauses.iter().filter(|c| c.satisfied(a)).count()
    }

    /// DIMACS-like text: an optional `p cnf n m` header, `c` comment lines,
    /// and one clause per line as three nonzero integers with an optional
    /// trailing `0`.
    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.n, self.clauses.len());
        for c in &self.clauses {
            s.push_str(&c.to_string());
            s.push('\n');
        }
        s
    }
}

impl FromStr for Formula {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut declared = None;
        let mut clauses = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            let err = |msg: String| Error::Parse { line: i + 1, msg };
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('p') {
                let fields: Vec<&str> = rest.split_whitespace().collect();
                match fields.as_slice() {
                    ["cnf", n, _] => {
                        declared = Some(n.parse::<u32>().map_err(|e| err(e.to_string()))?)
                    }
                    _ => return Err(err(format!("bad header `{line}`"))),
                }
                continue;
            }
            let mut lits: Vec<i32> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|e: std::num::ParseIntError| err(e.to_string())))
                .collect::<Result<_>>()?;
            if lits.len() == 4 && lits[3] == 0 {
                lits.pop();
            }
            let lits: [i32; 3] = lits
                .try_into()
                .map_err(|v: Vec<i32>| err(format!("expected 3 literals, found {}", v.len())))?;
            clauses.push(Clause3::new(lits).map_err(|e| err(e.to_string()))?);
        }
        let n = declared.unwrap_or_else(|| clauses.iter().map(Clause3::max_var).max().unwrap_or(3).max(3));
        Formula::new(n, clauses)
    }
}

/// MAX-E3SAT on `n` variables: records are clauses, solutions are
/// assignments, and the quality is the satisfied fraction.
#[derive(Debug, Clone, Copy)]
pub struct E3Sat {
    pub n: u32,
}

impl OptimizationProblem for E3Sat {
    type Record = Clause3;
    type Solution = Assignment;

    fn universe(&self) -> Vec<Clause3> {
        Clause3::all(self.n)
    }

    fn quality(&self, db: &[Clause3], a: &Assignment) -> f64 {
        if db.is_empty() {
            return 1.0;
        }
        db.iter().filter(|c| c.satisfied(*a)).count() as f64 / db.len() as f64
    }
}

/// `t = ceil(ln(1/beta) / ln((alpha + 1/8) / alpha))` uniform assignments.
pub fn e3sat_draws(alpha: f64, beta: f64) -> Result<usize> {
    if !(alpha > 0.0 && alpha < 0.875) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "must lie in (0, 7/8)",
        });
    }
    check_open_unit("beta", beta)?;
    Ok(ceil_count((1.0 / beta).ln() / ((alpha + 0.125) / alpha).ln()))
}

pub fn e3sat_family(n: u32, alpha: f64, beta: f64) -> Result<SolutionFamily<Assignment>> {
    Assignment::new(n, 0)?;
    let t = e3sat_draws(alpha, beta)?;
    Ok(SolutionFamily::from_sampler("e3sat", (t as f64).ln(), move |rng: &mut Rng| {
        (0..t).map(|_| Assignment::random(n, rng)).collect()
    }))
}

fn query_answer(c: &crate::model::Hypothesis, db: &[u64]) -> f64 {
    db.iter().filter(|&&x| c.eval_index(x)).count() as f64 / db.len() as f64
}

/// `1 - max_c |Q_c(S) - Q_c(S_hat)|` with `Q_c` the fraction of records
/// where `c` is 1.
pub fn sanitize_quality(concepts: &ConceptClass, db: &[u64], synthetic: &[u64]) -> Result<f64> {
    if concepts.is_empty() {
        return Err(Error::Empty("predicate class"));
    }
    if db.is_empty() || synthetic.is_empty() {
        return Err(Error::Empty("database"));
    }
    let worst = concepts
        .members()
        .iter()
        .map(|c| (query_answer(c, db) - query_answer(c, synthetic)).abs())
        .fold(0.0, f64::max);
    Ok(1.0 - worst)
}

/// Sanitization over a point-list universe: solutions are databases of
/// `k` records drawn from the same universe.
#[derive(Debug, Clone)]
pub struct Sanitization {
    pub concepts: ConceptClass,
    pub universe: Vec<u64>,
    pub k: usize,
}

/// Largest synthetic-database space that is enumerated.
pub const SANITIZATION_BUDGET: f64 = 1e5;

impl Sanitization {
    pub fn new(concepts: ConceptClass, universe: Vec<u64>, k: usize) -> Result<Self> {
        if concepts.is_empty() {
            return Err(Error::Empty("predicate class"));
        }
        if universe.is_empty() {
            return Err(Error::Empty("universe"));
        }
        if k == 0 {
            return Err(Error::Precondition("synthetic databases need a record".into()));
        }
        let size = crate::model::domain_size(concepts.bits());
        if let Some(&x) = universe.iter().find(|&&x| x >= size) {
            return Err(Error::PointOutOfRange { index: x, bits: concepts.bits() });
        }
        Ok(Self { concepts, universe, k })
    }

    /// All `|X|^k` synthetic databases, in odometer order.
    pub fn solutions(&self) -> Result<Vec<Vec<u64>>> {
        let u = self.universe.len() as u64;
        let count = (u as f64).powi(self.k as i32);
        if count > SANITIZATION_BUDGET {
            return Err(Error::Infeasible {
                what: "synthetic databases",
                required: count,
                budget: SANITIZATION_BUDGET,
            });
        }
        Ok((0..count as u64)
            .map(|mut code| {
                (0..self.k)
                    .map(|_| {
                        let x = self.universe[(code % u) as usize];
                        code /= u;
                        x
                    })
                    .collect()
            })
            .collect())
    }

    /// `alpha_hat = 2 ln(2 |B|) / (eps m)`: with a class of `|B|` solutions
    /// the mechanism's output is within `alpha_hat` of the class optimum
    /// with probability at least 1/2.
    pub fn accuracy_slack(class_len: usize, epsilon: f64, m: usize) -> Result<f64> {
        check_positive("epsilon", epsilon)?;
        if m == 0 || class_len == 0 {
            return Err(Error::Empty("database or class"));
        }
        Ok(2.0 * (2.0 * class_len as f64).ln() / (epsilon * m as f64))
    }
}

impl OptimizationProblem for Sanitization {
    type Record = u64;
    type Solution = Vec<u64>;

    fn universe(&self) -> Vec<u64> {
        self.universe.clone()
    }

    fn quality(&self, db: &[u64], synthetic: &Vec<u64>) -> f64 {
        sanitize_quality(&self.concepts, db, synthetic).unwrap_or(1.0)
    }
}
