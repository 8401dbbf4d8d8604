//! Scalar abstractions.
//!
//! Probability arithmetic that only needs field operations (distributions,
//! error functionals, the minimax linear program) is written against
//! [`Scalar`], which covers `f32`, `f64` and exact big rationals. Anything
//! that needs `exp`/`ln` (the exponential mechanism) is written against
//! [`Real`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive};
use std::fmt::{Debug, Display};

pub trait Scalar:
    Clone + Num + Signed + PartialOrd + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync
{
    /// Comparison slack used by pivoting and feasibility tests. Zero for
    /// exact types.
    fn tolerance() -> Self;

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    /// Lossy conversion from `f64`; exact types convert the binary value
    /// exactly.
    fn from_real(x: f64) -> Self {
        Self::from_f64(x).expect("finite value")
    }

    fn to_real(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn is_exact() -> bool {
        Self::tolerance().is_zero()
    }
}

impl Scalar for f64 {
    fn tolerance() -> Self {
        1e-12
    }
}

impl Scalar for f32 {
    fn tolerance() -> Self {
        1e-5
    }
}

impl Scalar for BigRational {
    fn tolerance() -> Self {
        BigRational::from_integer(BigInt::from(0))
    }
}

/// Floating scalars.
pub trait Real: Scalar + Float {}

impl Real for f64 {}
impl Real for f32 {}

pub(crate) fn approx_le<T: Scalar>(a: &T, b: &T) -> bool {
    a.clone() <= b.clone() + T::tolerance()
}
