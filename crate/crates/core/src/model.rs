//! Domain points, hypotheses, concept classes, finite distributions and
//! labeled databases, plus the generalization and empirical error
//! functionals.

use crate::error::{Error, Result};
use crate::point::ThresholdHash;
use crate::rng::Rng;
use crate::scalar::Scalar;
use rand::Rng as _;
use std::fmt;
use std::sync::Arc;

/// Largest bit-length for which truth tables (and therefore extensional
/// equality) are available.
pub const MAX_TABLE_BITS: u32 = 16;

/// Largest bit-length supported at all; points are `u64` indices.
pub const MAX_BITS: u32 = 62;

pub fn domain_size(bits: u32) -> u64 {
    1u64 << bits
}

/// A point of `{0,1}^d`, stored as its integer index. Bit `i` of the index
/// is coordinate `i` of the bit string; `0^d` is index 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DomainPoint {
    index: u64,
    bits: u32,
}

impl DomainPoint {
    pub fn new(index: u64, bits: u32) -> Result<Self> {
        if bits > MAX_BITS {
            return Err(Error::DomainTooLarge {
                bits,
                limit: MAX_BITS,
            });
        }
        if index >= domain_size(bits) {
            return Err(Error::PointOutOfRange { index, bits });
        }
        Ok(Self { index, bits })
    }

    pub fn zero(bits: u32) -> Self {
        Self { index: 0, bits }
    }

    pub fn from_bit_string(s: &str) -> Result<Self> {
        let bits = s.len() as u32;
        let mut index = 0u64;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => index |= 1 << i,
                _ => {
                    return Err(Error::Parse {
                        line: 0,
                        msg: format!("bad bit `{ch}` in `{s}`"),
                    })
                }
            }
        }
        Self::new(index, bits)
    }

    pub fn index(self) -> u64 {
        self.index
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn bit(self, i: u32) -> bool {
        i < self.bits && (self.index >> i) & 1 == 1
    }

    /// Coordinates in order `x_0 x_1 ... x_{d-1}`.
    pub fn to_bit_string(self) -> String {
        (0..self.bits)
            .map(|i| if self.bit(i) { '1' } else { '0' })
            .collect()
    }

    /// All points of `{0,1}^d` in index order.
    pub fn all(bits: u32) -> impl Iterator<Item = DomainPoint> {
        (0..domain_size(bits)).map(move |index| DomainPoint { index, bits })
    }
}

/// Materialized truth table of a hypothesis on `{0,1}^d`, `d <= 16`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruthTable {
    bits: u32,
    words: Vec<u64>,
}

impl TruthTable {
    pub fn from_fn(bits: u32, f: impl Fn(u64) -> bool) -> Result<Self> {
        if bits > MAX_TABLE_BITS {
            return Err(Error::DomainTooLarge {
                bits,
                limit: MAX_TABLE_BITS,
            });
        }
        let n = domain_size(bits);
        let mut words = vec![0u64; n.div_ceil(64) as usize];
        for x in 0..n {
            if f(x) {
                words[(x / 64) as usize] |= 1 << (x % 64);
            }
        }
        Ok(Self { bits, words })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn get(&self, x: u64) -> bool {
        (self.words[(x / 64) as usize] >> (x % 64)) & 1 == 1
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    /// Hex rendering of the table read as a big-endian integer whose bit
    /// `x` is `h(x)`. Always `max(1, 2^d / 4)` digits.
    pub fn to_hex(&self) -> String {
        let digits = (domain_size(self.bits) / 4).max(1) as usize;
        let mut out = String::with_capacity(digits);
        for k in (0..digits).rev() {
            let word = self.words[k / 16];
            let nibble = (word >> ((k % 16) * 4)) & 0xf;
            out.push(char::from_digit(nibble as u32, 16).unwrap());
        }
        out
    }

    pub fn from_hex(bits: u32, hex: &str) -> Result<Self> {
        let digits = (domain_size(bits) / 4).max(1) as usize;
        if bits > MAX_TABLE_BITS || hex.len() != digits {
            return Err(Error::Parse {
                line: 0,
                msg: format!("truth table `{hex}` does not fit {bits} bits"),
            });
        }
        let mut words = vec![0u64; domain_size(bits).div_ceil(64) as usize];
        for (pos, ch) in hex.chars().enumerate() {
            let k = digits - 1 - pos;
            let nibble = ch.to_digit(16).ok_or_else(|| Error::Parse {
                line: 0,
                msg: format!("bad hex digit `{ch}`"),
            })? as u64;
            words[k / 16] |= nibble << ((k % 16) * 4);
        }
        let n = domain_size(bits);
        if n < 4 && words[0] >> n != 0 {
            return Err(Error::Parse {
                line: 0,
                msg: format!("truth table `{hex}` sets bits beyond 2^{bits}"),
            });
        }
        Ok(Self { bits, words })
    }
}

#[derive(Debug, Clone)]
enum Evaluator {
    Table(Arc<TruthTable>),
    Constant(bool),
    Point(u64),
    Hash(ThresholdHash),
    Majority(Arc<[Hypothesis]>),
    Not(Arc<Hypothesis>),
}

/// A total boolean function on `{0,1}^d`.
#[derive(Debug, Clone)]
pub struct Hypothesis {
    bits: u32,
    eval: Evaluator,
}

impl Hypothesis {
    pub fn table(table: TruthTable) -> Self {
        Self {
            bits: table.bits(),
            eval: Evaluator::Table(Arc::new(table)),
        }
    }

    pub fn from_fn(bits: u32, f: impl Fn(u64) -> bool) -> Result<Self> {
        TruthTable::from_fn(bits, f).map(Self::table)
    }

    pub fn constant(bits: u32, value: bool) -> Self {
        Self {
            bits,
            eval: Evaluator::Constant(value),
        }
    }

    pub fn zeros(bits: u32) -> Self {
        Self::constant(bits, false)
    }

    pub fn ones(bits: u32) -> Self {
        Self::constant(bits, true)
    }

    /// The concept `c_j`: 1 exactly on point `j`.
    pub fn point(bits: u32, j: u64) -> Result<Self> {
        DomainPoint::new(j, bits)?;
        Ok(Self {
            bits,
            eval: Evaluator::Point(j),
        })
    }

    pub fn threshold_hash(bits: u32, hash: ThresholdHash) -> Self {
        Self {
            bits,
            eval: Evaluator::Hash(hash),
        }
    }

    /// `maj(parts)(x) = 1` iff at least `T/2` of the parts output 1.
    pub fn majority(parts: Vec<Hypothesis>) -> Result<Self> {
        let first = parts.first().ok_or(Error::Empty("majority parts"))?;
        let bits = first.bits;
        if let Some(bad) = parts.iter().find(|h| h.bits != bits) {
            return Err(Error::Dimension {
                expected: bits,
                found: bad.bits,
            });
        }
        Ok(Self {
            bits,
            eval: Evaluator::Majority(parts.into()),
        })
    }

    pub fn complement(&self) -> Self {
        Self {
            bits: self.bits,
            eval: Evaluator::Not(Arc::new(self.clone())),
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn as_threshold_hash(&self) -> Option<&ThresholdHash> {
        match &self.eval {
            Evaluator::Hash(h) => Some(h),
            _ => None,
        }
    }

    pub fn majority_parts(&self) -> Option<&[Hypothesis]> {
        match &self.eval {
            Evaluator::Majority(parts) => Some(parts),
            _ => None,
        }
    }

    pub fn as_point(&self) -> Option<u64> {
        match self.eval {
            Evaluator::Point(j) => Some(j),
            _ => None,
        }
    }

    #[inline]
    pub fn eval_index(&self, x: u64) -> bool {
        match &self.eval {
            Evaluator::Table(t) => t.get(x),
            Evaluator::Constant(v) => *v,
            Evaluator::Point(j) => x == *j,
            Evaluator::Hash(h) => h.eval(x),
            Evaluator::Majority(parts) => {
                let ones = parts.iter().filter(|h| h.eval_index(x)).count();
                2 * ones >= parts.len()
            }
            Evaluator::Not(h) => !h.eval_index(x),
        }
    }

    pub fn eval(&self, x: DomainPoint) -> bool {
        debug_assert_eq!(x.bits(), self.bits);
        self.eval_index(x.index())
    }

    pub fn truth_table(&self) -> Result<TruthTable> {
        if let Evaluator::Table(t) = &self.eval {
            return Ok((**t).clone());
        }
        TruthTable::from_fn(self.bits, |x| self.eval_index(x))
    }

    /// Replaces the evaluator by its truth table.
    pub fn materialize(&self) -> Result<Self> {
        self.truth_table().map(Self::table)
    }

    /// Extensional equality; only defined for `d <= 16`.
    pub fn extensionally_eq(&self, other: &Hypothesis) -> Result<bool> {
        if self.bits != other.bits {
            return Err(Error::Dimension {
                expected: self.bits,
                found: other.bits,
            });
        }
        Ok(self.truth_table()? == other.truth_table()?)
    }

    /// Deduplication key: the truth table when available, otherwise the
    /// structural description.
    pub fn key(&self) -> HypothesisKey {
        match self.truth_table() {
            Ok(t) => HypothesisKey::Table(t),
            Err(_) => HypothesisKey::Structural(format!("{self}")),
        }
    }

    pub(crate) fn describe(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.eval {
            Evaluator::Table(t) => write!(f, "table:{}", t.to_hex()),
            Evaluator::Constant(v) => write!(f, "const:{}", u8::from(*v)),
            Evaluator::Point(j) => write!(f, "point:{j}"),
            Evaluator::Hash(h) => write!(f, "hash:{},{},{},{}", h.p, h.a, h.b, h.tau),
            Evaluator::Majority(parts) => {
                write!(f, "maj(")?;
                for (i, h) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    h.describe(f)?;
                }
                write!(f, ")")
            }
            Evaluator::Not(h) => {
                write!(f, "not(")?;
                h.describe(f)?;
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.describe(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HypothesisKey {
    Table(TruthTable),
    Structural(String),
}

/// A named, non-empty set of concepts over a common domain.
#[derive(Debug, Clone)]
pub struct ConceptClass {
    name: String,
    members: Vec<Hypothesis>,
}

impl ConceptClass {
    pub fn new(name: impl Into<String>, members: Vec<Hypothesis>) -> Result<Self> {
        let bits = members
            .first()
            .ok_or(Error::Empty("concept class"))?
            .bits();
        if let Some(bad) = members.iter().find(|h| h.bits() != bits) {
            return Err(Error::Dimension {
                expected: bits,
                found: bad.bits(),
            });
        }
        Ok(Self {
            name: name.into(),
            members,
        })
    }

    /// `POINT_d`: the `2^d` point functions.
    pub fn point(bits: u32) -> Result<Self> {
        if bits > MAX_TABLE_BITS {
            return Err(Error::DomainTooLarge {
                bits,
                limit: MAX_TABLE_BITS,
            });
        }
        let members = (0..domain_size(bits))
            .map(|j| Hypothesis::point(bits, j))
            .collect::<Result<Vec<_>>>()?;
        Self::new(format!("POINT_{bits}"), members)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn bits(&self) -> u32 {
        self.members[0].bits()
    }

    pub fn members(&self) -> &[Hypothesis] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Probability weights over `{0, ..., size - 1}`, stored sparsely and sorted
/// by index. Zero weights are dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteDistribution<T> {
    size: u64,
    support: Vec<(u64, T)>,
}

/// Normalization tolerance for distributions.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

impl<T: Scalar> FiniteDistribution<T> {
    pub fn from_weights(size: u64, weights: impl IntoIterator<Item = (u64, T)>) -> Result<Self> {
        let mut support: Vec<(u64, T)> = Vec::new();
        for (i, w) in weights {
            if i >= size {
                return Err(Error::InvalidDistribution(format!(
                    "index {i} outside ground set of size {size}"
                )));
            }
            if w.is_negative() {
                return Err(Error::InvalidDistribution(format!(
                    "negative weight {w} at {i}"
                )));
            }
            if !w.is_zero() {
                support.push((i, w));
            }
        }
        support.sort_by_key(|(i, _)| *i);
        // merge duplicates
        let mut merged: Vec<(u64, T)> = Vec::with_capacity(support.len());
        for (i, w) in support {
            match merged.last_mut() {
                Some((j, acc)) if *j == i => *acc = acc.clone() + w,
                _ => merged.push((i, w)),
            }
        }
        let total = merged.iter().fold(T::zero(), |acc, (_, w)| acc + w.clone());
        let err = (total.clone() - T::one()).abs();
        if err > T::from_real(NORMALIZATION_TOLERANCE) {
            return Err(Error::InvalidDistribution(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(Self {
            size,
            support: merged,
        })
    }

    pub fn from_dense(weights: Vec<T>) -> Result<Self> {
        let size = weights.len() as u64;
        Self::from_weights(size, (0..size).zip(weights))
    }

    /// Normalizes non-negative weights.
    pub fn normalized(size: u64, weights: impl IntoIterator<Item = (u64, T)>) -> Result<Self> {
        let raw: Vec<(u64, T)> = weights.into_iter().collect();
        let total = raw.iter().fold(T::zero(), |acc, (_, w)| acc + w.clone());
        if !(total > T::zero()) {
            return Err(Error::InvalidDistribution("zero total weight".into()));
        }
        Self::from_weights(
            size,
            raw.into_iter().map(|(i, w)| (i, w / total.clone())),
        )
    }

    pub fn point_mass(size: u64, at: u64) -> Result<Self> {
        Self::from_weights(size, [(at, T::one())])
    }

    pub fn uniform(size: u64) -> Result<Self> {
        if size == 0 {
            return Err(Error::Empty("uniform distribution"));
        }
        let w = T::one() / T::from_real(size as f64);
        Ok(Self {
            size,
            support: (0..size).map(|i| (i, w.clone())).collect(),
        })
    }

    /// Size of the ground set.
    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn support(&self) -> &[(u64, T)] {
        &self.support
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &T)> {
        self.support.iter().map(|(i, w)| (*i, w))
    }

    pub fn prob(&self, i: u64) -> T {
        match self.support.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(pos) => self.support[pos].1.clone(),
            Err(_) => T::zero(),
        }
    }

    /// Probability mass of the elements satisfying `pred`.
    pub fn mass(&self, mut pred: impl FnMut(u64) -> bool) -> T {
        self.support
            .iter()
            .filter(|(i, _)| pred(*i))
            .fold(T::zero(), |acc, (_, w)| acc + w.clone())
    }

    pub fn dense(&self) -> Vec<T> {
        let mut out = vec![T::zero(); self.size as usize];
        for (i, w) in &self.support {
            out[*i as usize] = w.clone();
        }
        out
    }

    pub fn to_f64(&self) -> FiniteDistribution<f64> {
        FiniteDistribution {
            size: self.size,
            support: self
                .support
                .iter()
                .map(|(i, w)| (*i, w.to_real()))
                .collect(),
        }
    }

    /// One draw by inverting the cumulative sum; a uniform draw landing on a
    /// boundary goes to the lower index.
    pub fn sample(&self, rng: &mut Rng) -> u64 {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for (i, w) in &self.support {
            acc += w.to_real();
            if u < acc {
                return *i;
            }
        }
        // rounding left the total slightly below 1
        self.support.last().map(|(i, _)| *i).unwrap_or(0)
    }
}

/// A labeled example database. Neighbors have equal length and differ in
/// exactly one position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledDatabase {
    bits: u32,
    records: Vec<(DomainPoint, bool)>,
}

impl LabeledDatabase {
    pub fn new(bits: u32, records: Vec<(DomainPoint, bool)>) -> Result<Self> {
        if let Some((p, _)) = records.iter().find(|(p, _)| p.bits() != bits) {
            return Err(Error::Dimension {
                expected: bits,
                found: p.bits(),
            });
        }
        Ok(Self { bits, records })
    }

    /// The database of `m` copies of `(0^d, label)`.
    pub fn constant(bits: u32, m: usize, label: bool) -> Self {
        Self {
            bits,
            records: vec![(DomainPoint::zero(bits), label); m],
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn records(&self) -> &[(DomainPoint, bool)] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn truncated(&self, keep: usize) -> Self {
        Self {
            bits: self.bits,
            records: self.records.iter().take(keep).copied().collect(),
        }
    }

    pub fn is_neighbor(&self, other: &LabeledDatabase) -> bool {
        self.bits == other.bits
            && self.len() == other.len()
            && self
                .records
                .iter()
                .zip(&other.records)
                .filter(|(a, b)| a != b)
                .count()
                == 1
    }

    /// Number of records on which `h` agrees with the label, `q(S, h)`.
    pub fn agreements(&self, h: &Hypothesis) -> usize {
        self.records
            .iter()
            .filter(|(x, y)| h.eval(*x) == *y)
            .count()
    }
}

fn check_bits(expected: u32, found: u32) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected, found })
    }
}

/// `error_D(c, h) = Pr_{x ~ D}[h(x) != c(x)]`.
pub fn generalization_error<T: Scalar>(
    c: &Hypothesis,
    h: &Hypothesis,
    dist: &FiniteDistribution<T>,
) -> Result<T> {
    check_bits(c.bits(), h.bits())?;
    if dist.size() != domain_size(c.bits()) {
        return Err(Error::InvalidDistribution(format!(
            "distribution over {} elements used on a domain of {} bits",
            dist.size(),
            c.bits()
        )));
    }
    Ok(dist.mass(|x| c.eval_index(x) != h.eval_index(x)))
}

/// Fraction of records mislabeled by `h`.
pub fn empirical_error(h: &Hypothesis, db: &LabeledDatabase) -> Result<f64> {
    if db.is_empty() {
        return Err(Error::Empty("database"));
    }
    check_bits(db.bits(), h.bits())?;
    Ok((db.len() - db.agreements(h)) as f64 / db.len() as f64)
}

/// Draws `m` i.i.d. points from `dist` and labels them with `target`.
pub fn sample_database(
    target: &Hypothesis,
    dist: &FiniteDistribution<f64>,
    m: usize,
    rng: &mut Rng,
) -> Result<LabeledDatabase> {
    if m == 0 {
        return Err(Error::Precondition("sample size must be at least 1".into()));
    }
    let bits = target.bits();
    if dist.size() != domain_size(bits) {
        return Err(Error::InvalidDistribution(format!(
            "distribution over {} elements used on a domain of {bits} bits",
            dist.size()
        )));
    }
    let records = (0..m)
        .map(|_| {
            let x = DomainPoint {
                index: dist.sample(rng),
                bits,
            };
            (x, target.eval(x))
        })
        .collect();
    Ok(LabeledDatabase { bits, records })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn uniform(bits: u32) -> FiniteDistribution<f64> {
        FiniteDistribution::uniform(domain_size(bits)).unwrap()
    }

    #[test]
    fn identical_functions_have_zero_error() {
        let h = Hypothesis::point(3, 5).unwrap();
        let d = uniform(3);
        assert_eq!(generalization_error(&h, &h, &d).unwrap(), 0.0);
    }

    #[test]
    fn point_function_against_zeros_errs_on_one_point() {
        for bits in 1..6 {
            let c = Hypothesis::point(bits, 1).unwrap();
            let h = Hypothesis::zeros(bits);
            let e = generalization_error(&c, &h, &uniform(bits)).unwrap();
            assert!((e - 1.0 / domain_size(bits) as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn weighted_disagreement() {
        // disagree on points 0 and 2
        let c = Hypothesis::from_fn(2, |x| x == 0 || x == 2).unwrap();
        let h = Hypothesis::zeros(2);
        let d = FiniteDistribution::from_dense(vec![0.5, 0.25, 0.25, 0.0]).unwrap();
        assert!((generalization_error::<f64>(&c, &h, &d).unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let c = Hypothesis::zeros(2);
        let h = Hypothesis::zeros(3);
        let d = uniform(2);
        assert!(matches!(
            generalization_error(&c, &h, &d),
            Err(Error::Dimension { .. })
        ));
        assert!(generalization_error(&c, &c, &uniform(3)).is_err());
    }

    #[test]
    fn empirical_error_counts() {
        let bits = 2;
        let p = |i| DomainPoint::new(i, bits).unwrap();
        let c = Hypothesis::point(bits, 1).unwrap();
        let db = LabeledDatabase::new(
            bits,
            vec![(p(0), false), (p(1), true), (p(2), false), (p(3), false)],
        )
        .unwrap();
        assert_eq!(empirical_error(&c, &db).unwrap(), 0.0);
        assert_eq!(empirical_error(&c.complement(), &db).unwrap(), 1.0);
        assert_eq!(empirical_error(&Hypothesis::zeros(bits), &db).unwrap(), 0.25);
        let empty = LabeledDatabase::new(bits, vec![]).unwrap();
        assert!(matches!(
            empirical_error(&c, &empty),
            Err(Error::Empty(_))
        ));
    }

    #[test]
    fn point_mass_sampling_and_determinism() {
        let c = Hypothesis::point(3, 6).unwrap();
        let d = FiniteDistribution::point_mass(8, 6).unwrap();
        let db = sample_database(&c, &d, 20, &mut seeded(1)).unwrap();
        assert!(db.records().iter().all(|(x, y)| x.index() == 6 && *y));

        let u = uniform(3);
        let a = sample_database(&c, &u, 50, &mut seeded(9)).unwrap();
        let b = sample_database(&c, &u, 50, &mut seeded(9)).unwrap();
        assert_eq!(a, b);
        assert!(sample_database(&c, &u, 0, &mut seeded(9)).is_err());
    }

    #[test]
    fn two_point_frequencies_within_three_sigma() {
        let c = Hypothesis::zeros(1);
        let d = FiniteDistribution::from_dense(vec![0.5, 0.5]).unwrap();
        let m = 10_000;
        let db = sample_database(&c, &d, m, &mut seeded(2024)).unwrap();
        let ones = db.records().iter().filter(|(x, _)| x.index() == 1).count();
        let freq = ones as f64 / m as f64;
        let sigma = crate::stats::hoeffding_sigma(m);
        assert!((freq - 0.5).abs() <= 3.0 * sigma, "freq {freq}");
    }

    #[test]
    fn neighbors_differ_in_one_position() {
        let bits = 1;
        let p = |i| DomainPoint::new(i, bits).unwrap();
        let a = LabeledDatabase::new(bits, vec![(p(0), false), (p(1), true)]).unwrap();
        let b = LabeledDatabase::new(bits, vec![(p(0), true), (p(1), true)]).unwrap();
        let c = LabeledDatabase::new(bits, vec![(p(1), true), (p(0), false)]).unwrap();
        assert!(a.is_neighbor(&b));
        assert!(!a.is_neighbor(&a));
        assert!(!a.is_neighbor(&c));
        assert!(!a.is_neighbor(&a.truncated(1)));
    }

    #[test]
    fn bit_string_view_matches_index() {
        let x = DomainPoint::from_bit_string("1010").unwrap();
        assert_eq!(x.index(), 0b0101);
        assert_eq!(x.to_bit_string(), "1010");
        assert!(DomainPoint::new(16, 4).is_err());
    }

    #[test]
    fn truth_table_hex_round_trip() {
        for bits in 0..=6 {
            let h = Hypothesis::from_fn(bits, |x| (x * 7 + 3) % 5 < 2).unwrap();
            let t = h.truth_table().unwrap();
            let back = TruthTable::from_hex(bits, &t.to_hex()).unwrap();
            assert_eq!(t, back);
        }
        assert_eq!(Hypothesis::point(3, 0).unwrap().truth_table().unwrap().to_hex(), "01");
        assert_eq!(Hypothesis::point(3, 7).unwrap().truth_table().unwrap().to_hex(), "80");
    }

    #[test]
    fn extensional_equality_limited_to_small_domains() {
        let a = Hypothesis::point(2, 3).unwrap();
        let b = Hypothesis::from_fn(2, |x| x == 3).unwrap();
        assert!(a.extensionally_eq(&b).unwrap());
        let big = Hypothesis::zeros(20);
        assert!(big.extensionally_eq(&big).is_err());
    }

    #[test]
    fn distribution_validation() {
        assert!(FiniteDistribution::from_dense(vec![0.5, 0.4]).is_err());
        assert!(FiniteDistribution::from_dense(vec![1.5, -0.5]).is_err());
        let d = FiniteDistribution::from_dense(vec![0.25, 0.0, 0.75]).unwrap();
        assert_eq!(d.support().len(), 2);
        assert_eq!(d.prob(1), 0.0);
        assert_eq!(d.prob(2), 0.75);
    }

    #[test]
    fn exact_rational_error() {
        use num_rational::BigRational;
        let third = BigRational::new(1.into(), 3.into());
        let d = FiniteDistribution::from_dense(vec![
            third.clone(),
            third.clone(),
            third.clone(),
            BigRational::from_integer(0.into()),
        ])
        .unwrap();
        let c = Hypothesis::point(2, 0).unwrap();
        let e = generalization_error(&c, &Hypothesis::zeros(2), &d).unwrap();
        assert_eq!(e, third);
    }
}
