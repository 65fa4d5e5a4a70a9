use std::fmt::Debug;

use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Signed, ToPrimitive};

/// Integer type usable for exact elimination. Fixed-width types report
/// overflow through the checked operations; `BigInt` never overflows.
pub trait Scalar:
    Clone + Debug + PartialEq + Integer + Signed + CheckedAdd + CheckedSub + CheckedMul + FromPrimitive + ToPrimitive
{
}

impl<T> Scalar for T where
    T: Clone + Debug + PartialEq + Integer + Signed + CheckedAdd + CheckedSub + CheckedMul + FromPrimitive + ToPrimitive
{
}

/// A fixed-width computation left its range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

#[inline]
pub(crate) fn add<T: Scalar>(a: &T, b: &T) -> Result<T, Overflow> {
    a.checked_add(b).ok_or(Overflow)
}

#[inline]
pub(crate) fn sub<T: Scalar>(a: &T, b: &T) -> Result<T, Overflow> {
    a.checked_sub(b).ok_or(Overflow)
}

#[inline]
pub(crate) fn mul<T: Scalar>(a: &T, b: &T) -> Result<T, Overflow> {
    a.checked_mul(b).ok_or(Overflow)
}

/// `a - q*b`.
#[inline]
pub(crate) fn sub_mul<T: Scalar>(a: &T, q: &T, b: &T) -> Result<T, Overflow> {
    sub(a, &mul(q, b)?)
}

pub(crate) fn from_i64<T: Scalar>(x: i64) -> T {
    T::from_i64(x).expect("every scalar type holds an i64")
}

/// Least non-negative residue of `x` modulo `m > 0`, as an `i64`.
pub(crate) fn residue<T: Scalar>(x: &T, m: u64) -> i64 {
    let m_t = T::from_u64(m).expect("modulus fits the scalar type");
    x.mod_floor(&m_t).to_i64().expect("residue below an i64 modulus")
}
