//! Constant-size probabilistic representation of `POINT_d` built from
//! pairwise-independent threshold hashes over a prime field.
//!
//! A hypothesis is `h(x) = 1` iff `(a x + b) mod p < tau`. With `(a, b)`
//! uniform over `Z_p^2` and `p > 2^d`, the values at any two distinct points
//! are independent and each equals 1 with probability `tau / p`, where
//! `tau = ceil(alpha p / 2)`.

use crate::error::{check_open_unit, Error, Result};
use crate::model::{domain_size, generalization_error, FiniteDistribution, Hypothesis};
use crate::representation::{HypothesisClass, HypothesisFamily};
use crate::rng::Rng;
use crate::stats::ceil_count;
use rand::Rng as _;

/// `x -> [(a x + b) mod p < tau]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ThresholdHash {
    pub p: u64,
    pub a: u64,
    pub b: u64,
    pub tau: u64,
}

impl ThresholdHash {
    pub fn new(p: u64, a: u64, b: u64, tau: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Precondition(format!("modulus {p} is not prime")));
        }
        if a >= p || b >= p || tau > p {
            return Err(Error::Precondition(format!(
                "hash parameters ({a}, {b}, {tau}) out of range for p = {p}"
            )));
        }
        Ok(Self { p, a, b, tau })
    }

    #[inline]
    pub fn eval(&self, x: u64) -> bool {
        if self.p < 1 << 32 && x < 1 << 32 {
            return (self.a * x + self.b) % self.p < self.tau;
        }
        let v = (u128::from(self.a) * u128::from(x) + u128::from(self.b)) % u128::from(self.p);
        v < u128::from(self.tau)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve prime bases are exact for
/// every 64-bit integer.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: u64) -> u64 {
    let mut k = n + 1;
    while !is_prime(k) {
        k += 1;
    }
    k
}

/// Parameters of the threshold-hash construction for `POINT_d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointParams {
    pub bits: u32,
    pub alpha: f64,
    pub beta: f64,
    /// Field modulus, the smallest prime exceeding `max(8/alpha, 2^d)`.
    pub p: u64,
    /// Threshold `ceil(alpha p / 2)`.
    pub tau: u64,
    /// Hypotheses per class, `ceil((4/alpha) ln(1/beta))`.
    pub class_size: usize,
}

impl PointParams {
    pub fn new(bits: u32, alpha: f64, beta: f64) -> Result<Self> {
        check_open_unit("alpha", alpha)?;
        check_open_unit("beta", beta)?;
        if bits > 40 {
            return Err(Error::DomainTooLarge { bits, limit: 40 });
        }
        let p = field_modulus(bits, alpha);
        Ok(Self {
            bits,
            alpha,
            beta,
            p,
            tau: threshold(alpha, p),
            class_size: point_class_size(alpha, beta),
        })
    }

    /// Probability that a random hash outputs 1 at a fixed point.
    pub fn rate(&self) -> f64 {
        self.tau as f64 / self.p as f64
    }

    pub fn size_bound(&self) -> f64 {
        (self.class_size as f64).ln()
    }

    pub fn hash(&self, a: u64, b: u64) -> ThresholdHash {
        ThresholdHash {
            p: self.p,
            a,
            b,
            tau: self.tau,
        }
    }

    pub fn hypothesis(&self, a: u64, b: u64) -> Hypothesis {
        Hypothesis::threshold_hash(self.bits, self.hash(a, b))
    }

    /// Number of pairs `(a, b)` whose hypothesis is `alpha`-good for
    /// `(target, dist)`. Exhausts all `p^2` pairs.
    pub fn good_pairs(&self, target: &Hypothesis, dist: &FiniteDistribution<f64>) -> Result<u64> {
        let mut good = 0;
        for a in 0..self.p {
            for b in 0..self.p {
                let h = self.hypothesis(a, b);
                if generalization_error(target, &h, dist)? <= self.alpha + 1e-12 {
                    good += 1;
                }
            }
        }
        Ok(good)
    }

    /// Exact probability that a sampled class contains an `alpha`-good
    /// hypothesis: `1 - (1 - g/p^2)^M` for `g` good pairs.
    pub fn exact_success(&self, target: &Hypothesis, dist: &FiniteDistribution<f64>) -> Result<f64> {
        let g = self.good_pairs(target, dist)? as f64;
        let pairs = (self.p * self.p) as f64;
        Ok(1.0 - (1.0 - g / pairs).powi(self.class_size as i32))
    }
}

pub fn field_modulus(bits: u32, alpha: f64) -> u64 {
    let scale = (8.0 / alpha + 1e-9).floor() as u64;
    next_prime(scale.max(domain_size(bits)))
}

pub fn threshold(alpha: f64, p: u64) -> u64 {
    (alpha * p as f64 / 2.0 - 1e-9).ceil() as u64
}

pub fn point_class_size(alpha: f64, beta: f64) -> usize {
    ceil_count(4.0 / alpha * (1.0 / beta).ln())
}

/// Draws one class of `M` independent threshold hashes.
pub fn sample_point_class(bits: u32, alpha: f64, beta: f64, rng: &mut Rng) -> Result<HypothesisClass> {
    let params = PointParams::new(bits, alpha, beta)?;
    Ok(sample_with(&params, rng))
}

pub(crate) fn sample_with(params: &PointParams, rng: &mut Rng) -> HypothesisClass {
    let members = (0..params.class_size)
        .map(|_| {
            let a = rng.gen_range(0..params.p);
            let b = rng.gen_range(0..params.p);
            params.hypothesis(a, b)
        })
        .collect();
    HypothesisClass::new(members).expect("non-empty class of equal dimension")
}

/// The `(alpha, beta)` family for `POINT_d`, with size bound `ln M`.
pub fn point_family(bits: u32, alpha: f64, beta: f64) -> Result<HypothesisFamily> {
    Ok(HypothesisFamily::point(PointParams::new(bits, alpha, beta)?))
}

/// Budget on the number of classes in an enumerated point family.
pub const EXPLICIT_POINT_BUDGET: f64 = 1e5;

/// The same family with its support enumerated: every `M`-tuple of `(a, b)`
/// pairs, each with probability `p^{-2M}`.
pub fn point_family_explicit(bits: u32, alpha: f64, beta: f64) -> Result<HypothesisFamily> {
    let params = PointParams::new(bits, alpha, beta)?;
    let pairs = params.p * params.p;
    let classes = (pairs as f64).powi(params.class_size as i32);
    if classes > EXPLICIT_POINT_BUDGET {
        return Err(Error::Infeasible {
            what: "point family support",
            required: classes,
            budget: EXPLICIT_POINT_BUDGET,
        });
    }
    let total = classes as u64;
    let weight = 1.0 / classes;
    let support = (0..total)
        .map(|mut code| {
            let members = (0..params.class_size)
                .map(|_| {
                    let pair = code % pairs;
                    code /= pairs;
                    params.hypothesis(pair / params.p, pair % params.p)
                })
                .collect();
            (HypothesisClass::new(members).expect("non-empty"), weight)
        })
        .collect();
    HypothesisFamily::explicit(support).map(|f| f.with_size_bound(params.size_bound()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn primes() {
        assert_eq!(next_prime(2), 3);
        assert_eq!(next_prime(8), 11);
        assert_eq!(next_prime(13), 17);
        assert_eq!(next_prime(1), 2);
        assert_eq!(next_prime(32), 37);
        let trial_division = |n: u64| n >= 2 && (2..n).take_while(|k| k * k <= n).all(|k| !n.is_multiple_of(k));
        for n in 0..5000 {
            assert_eq!(is_prime(n), trial_division(n), "n = {n}");
        }
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
    }

    #[test]
    fn class_size_formula() {
        assert_eq!(point_class_size(0.25, 0.25), 23);
        assert_eq!(point_class_size(0.25, 0.999), 1);
    }

    #[test]
    fn field_parameters_at_quarter() {
        let params = PointParams::new(3, 0.25, 0.25).unwrap();
        assert_eq!(params.p, 37);
        assert_eq!(params.tau, 5);
        let params = PointParams::new(8, 0.25, 0.25).unwrap();
        assert_eq!(params.p, 257);
    }

    #[test]
    fn size_bound_independent_of_dimension() {
        let a = point_family(3, 0.25, 0.25).unwrap();
        let b = point_family(8, 0.25, 0.25).unwrap();
        assert_eq!(a.size_bound(), b.size_bound());
        assert!((a.size_bound() - 23f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn rate_window() {
        for &alpha in &[0.05, 0.1, 0.25, 0.3, 0.49] {
            for bits in [1, 3, 6] {
                let params = PointParams::new(bits, alpha, 0.25).unwrap();
                let r = params.rate();
                assert!(r >= alpha / 2.0 - 1e-12);
                assert!(r <= alpha / 2.0 + 1.0 / params.p as f64 + 1e-12);
                assert!(r <= 5.0 * alpha / 8.0 + 1e-12);
            }
        }
    }

    #[test]
    fn per_point_rate_is_exact_under_enumeration() {
        let params = PointParams::new(3, 0.25, 0.25).unwrap();
        for x in 0..8 {
            let ones = (0..params.p)
                .flat_map(|a| (0..params.p).map(move |b| (a, b)))
                .filter(|&(a, b)| params.hash(a, b).eval(x))
                .count() as u64;
            assert_eq!(ones, params.tau * params.p);
        }
    }

    #[test]
    fn sampled_classes_are_deterministic() {
        let a = sample_point_class(4, 0.25, 0.25, &mut seeded(3)).unwrap();
        let b = sample_point_class(4, 0.25, 0.25, &mut seeded(3)).unwrap();
        assert_eq!(a.len(), Some(23));
        let ka: Vec<_> = a.iter().map(|h| h.to_string()).collect();
        let kb: Vec<_> = b.iter().map(|h| h.to_string()).collect();
        assert_eq!(ka, kb);
    }

    #[test]
    fn explicit_support_budget() {
        let f = point_family_explicit(3, 0.25, 0.999).unwrap();
        assert_eq!(f.explicit_support().unwrap().len(), 37 * 37);
        assert!(matches!(
            point_family_explicit(3, 0.25, 0.25),
            Err(Error::Infeasible { .. })
        ));
    }
}
