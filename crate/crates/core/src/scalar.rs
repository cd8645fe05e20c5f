//! Coefficient and scalar traits.
//!
//! Series only need a commutative ring ([`Coeff`]). Euler class evaluation
//! divides, so it needs a field that can embed the integers ([`Scalar`]).

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::Ratio;

/// Ring of series coefficients.
pub trait Coeff: num_traits::Num + Clone + Debug + Send + Sync {}

impl<T: num_traits::Num + Clone + Debug + Send + Sync> Coeff for T {}

/// Field used for evaluating equivariant Euler classes.
pub trait Scalar: Coeff {
    fn from_i64(v: i64) -> Self;
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }
}

impl Scalar for f32 {
    fn from_i64(v: i64) -> Self {
        v as f32
    }
}

impl Scalar for Ratio<i64> {
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(v)
    }
}

impl Scalar for Ratio<i128> {
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(v as i128)
    }
}

impl Scalar for Ratio<BigInt> {
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(BigInt::from(v))
    }
}
