//! Exact coefficient fields.
//!
//! Everything in this crate is an exact identity check, so the coefficient
//! type must have exact equality and division. Floating-point types do not
//! implement [`Scalar`].

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed};

/// An exact field of characteristic zero.
pub trait Scalar: Num + Signed + FromPrimitive + Clone + Debug + Display + FromStr + Send + Sync + 'static {
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("integer fits the scalar type")
    }

    fn half() -> Self {
        Self::one() / Self::from_int(2)
    }
}

impl<T> Scalar for Ratio<T>
where
    T: Integer + Signed + Clone + Debug + Display + FromStr + Send + Sync + 'static,
    Ratio<T>: FromPrimitive,
{
}
