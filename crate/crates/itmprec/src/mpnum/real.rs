//! Binary floating-point values with an explicit significand width.
//!
//! `MpFloat` wraps an MPFR float. Every arithmetic operation takes a target
//! precision `p` and produces the exact result rounded to `p` significand
//! bits, round-to-nearest ties-to-even. Elementary functions are correctly
//! rounded as well (MPFR guarantees this), which exceeds the faithful-
//! rounding contract this crate promises for them.
//!
//! The exponent range is effectively unbounded: there is no overflow to
//! infinity or underflow to subnormals except when narrowing with
//! [`MpFloat::to_f64`]. Values are immutable after construction and every
//! operation is a pure function of its operands and `p`, so values may be
//! shared freely across threads.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Round;
use rug::ops::Pow;
use rug::Float;

use super::env::Real;

/// Minimum supported significand width.
pub const MIN_PRECISION: u32 = 2;

/// A sign-magnitude binary float with `p` significand bits.
///
/// The stored value always has exactly the precision it was rounded to;
/// the `p` field is the *working* precision that operator sugar (`a + b`)
/// rounds results to. Constants embedded via [`MpFloat::constant`] keep
/// their exact 53-bit double value while still tagging the working
/// precision, mirroring how a ported reference keeps double literals as
/// operands of `*_d` multiprecision calls.
#[derive(Clone, Debug)]
pub struct MpFloat {
    v: Float,
    p: u32,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum MpError {
    #[error("precision {0} is below the minimum of {MIN_PRECISION} bits")]
    BadPrecision(u32),
    #[error("malformed decimal numeral: {0:?}")]
    Parse(String),
}

fn check_prec(p: u32) -> Result<(), MpError> {
    if p < MIN_PRECISION {
        Err(MpError::BadPrecision(p))
    } else {
        Ok(())
    }
}

impl MpFloat {
    /// Parse a signed decimal numeral to the nearest `p`-bit value.
    pub fn parse(text: &str, p: u32) -> Result<Self, MpError> {
        check_prec(p)?;
        let inc = Float::parse(text).map_err(|_| MpError::Parse(text.to_owned()))?;
        Ok(Self {
            v: Float::with_val(p, inc),
            p,
        })
    }

    /// Round a native double to `p` bits.
    pub fn from_f64(x: f64, p: u32) -> Self {
        assert!(p >= MIN_PRECISION);
        Self {
            v: Float::with_val(p, x),
            p,
        }
    }

    /// Embed a double constant exactly, tagged with working precision `p`.
    pub(crate) fn constant(x: f64, p: u32) -> Self {
        debug_assert!(p >= MIN_PRECISION);
        Self {
            v: Float::with_val(53, x),
            p,
        }
    }

    /// The working precision in bits.
    pub fn prec(&self) -> u32 {
        self.p
    }

    /// Re-round to a (possibly different) precision.
    pub fn with_prec(&self, p: u32) -> Self {
        Self {
            v: Float::with_val(p, &self.v),
            p,
        }
    }

    pub fn add(&self, rhs: &Self, p: u32) -> Self {
        Self {
            v: Float::with_val(p, &self.v + &rhs.v),
            p,
        }
    }

    pub fn sub(&self, rhs: &Self, p: u32) -> Self {
        Self {
            v: Float::with_val(p, &self.v - &rhs.v),
            p,
        }
    }

    pub fn mul(&self, rhs: &Self, p: u32) -> Self {
        Self {
            v: Float::with_val(p, &self.v * &rhs.v),
            p,
        }
    }

    pub fn div(&self, rhs: &Self, p: u32) -> Self {
        Self {
            v: Float::with_val(p, &self.v / &rhs.v),
            p,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            v: Float::with_val(self.v.prec(), -&self.v),
            p: self.p,
        }
    }

    pub fn abs(&self, p: u32) -> Self {
        Self {
            v: Float::with_val(p, self.v.abs_ref()),
            p,
        }
    }

    pub fn sqrt(&self, p: u32) -> Self {
        Self {
            v: Float::with_val(p, self.v.sqrt_ref()),
            p,
        }
    }

    pub fn exp(&self, p: u32) -> Self {
        Self {
            v: Float::with_val(p, self.v.exp_ref()),
            p,
        }
    }

    pub fn ln(&self, p: u32) -> Self {
        Self {
            v: Float::with_val(p, self.v.ln_ref()),
            p,
        }
    }

    pub fn log10(&self, p: u32) -> Self {
        Self {
            v: Float::with_val(p, self.v.log10_ref()),
            p,
        }
    }

    pub fn pow(&self, e: &Self, p: u32) -> Self {
        Self {
            v: Float::with_val(p, (&self.v).pow(&e.v)),
            p,
        }
    }

    pub fn sin(&self, p: u32) -> Self {
        Self {
            v: Float::with_val(p, self.v.sin_ref()),
            p,
        }
    }

    pub fn cos(&self, p: u32) -> Self {
        Self {
            v: Float::with_val(p, self.v.cos_ref()),
            p,
        }
    }

    /// Four-quadrant arctangent of `self / x`.
    pub fn atan2(&self, x: &Self, p: u32) -> Self {
        Self {
            v: Float::with_val(p, self.v.atan2_ref(&x.v)),
            p,
        }
    }

    pub fn floor(&self, p: u32) -> Self {
        Self {
            v: Float::with_val(p, self.v.floor_ref()),
            p,
        }
    }

    pub fn min(&self, rhs: &Self, p: u32) -> Self {
        if self.v.is_nan() || rhs.v.is_nan() {
            return Self {
                v: Float::with_val(p, rug::float::Special::Nan),
                p,
            };
        }
        let r = if rhs.v < self.v { rhs } else { self };
        r.with_prec(p)
    }

    pub fn max(&self, rhs: &Self, p: u32) -> Self {
        if self.v.is_nan() || rhs.v.is_nan() {
            return Self {
                v: Float::with_val(p, rug::float::Special::Nan),
                p,
            };
        }
        let r = if self.v < rhs.v { rhs } else { self };
        r.with_prec(p)
    }

    /// Narrow to a native double: round to 53 bits, then apply the IEEE
    /// double exponent range (overflow to infinity, gradual underflow).
    pub fn to_f64(&self) -> f64 {
        self.v.to_f64()
    }

    pub fn is_nan(&self) -> bool {
        self.v.is_nan()
    }

    pub fn is_finite(&self) -> bool {
        self.v.is_finite()
    }

    pub fn is_infinite(&self) -> bool {
        self.v.is_infinite()
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_sign_negative(&self) -> bool {
        self.v.is_sign_negative()
    }

    pub(crate) fn raw(&self) -> &Float {
        &self.v
    }

    pub(crate) fn from_raw(v: Float, p: u32) -> Self {
        Self { v, p }
    }
}

impl fmt::Display for MpFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.v.fmt(f)
    }
}

impl PartialEq for MpFloat {
    fn eq(&self, other: &Self) -> bool {
        self.v == other.v
    }
}

impl PartialOrd for MpFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.v.partial_cmp(&other.v)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for MpFloat {
            type Output = MpFloat;
            fn $method(self, rhs: MpFloat) -> MpFloat {
                MpFloat::$method(&self, &rhs, self.p)
            }
        }

        impl $trait<&MpFloat> for &MpFloat {
            type Output = MpFloat;
            fn $method(self, rhs: &MpFloat) -> MpFloat {
                MpFloat::$method(self, rhs, self.p)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for MpFloat {
    type Output = MpFloat;
    fn neg(self) -> MpFloat {
        MpFloat::neg(&self)
    }
}

impl Neg for &MpFloat {
    type Output = MpFloat;
    fn neg(self) -> MpFloat {
        MpFloat::neg(self)
    }
}

impl Real for MpFloat {
    fn abs(self) -> Self {
        MpFloat::abs(&self, self.p)
    }
    fn sqrt(self) -> Self {
        MpFloat::sqrt(&self, self.p)
    }
    fn exp(self) -> Self {
        MpFloat::exp(&self, self.p)
    }
    fn ln(self) -> Self {
        MpFloat::ln(&self, self.p)
    }
    fn log10(self) -> Self {
        MpFloat::log10(&self, self.p)
    }
    fn pow(self, e: Self) -> Self {
        MpFloat::pow(&self, &e, self.p)
    }
    fn sin(self) -> Self {
        MpFloat::sin(&self, self.p)
    }
    fn cos(self) -> Self {
        MpFloat::cos(&self, self.p)
    }
    fn atan2(self, x: Self) -> Self {
        MpFloat::atan2(&self, &x, self.p)
    }
    fn floor(self) -> Self {
        MpFloat::floor(&self, self.p)
    }
    fn to_f64(&self) -> f64 {
        MpFloat::to_f64(self)
    }
    fn trunc_i64(&self) -> i64 {
        self.v.to_f64_round(Round::Zero) as i64
    }
    fn is_nan(&self) -> bool {
        MpFloat::is_nan(self)
    }
    fn is_finite(&self) -> bool {
        MpFloat::is_finite(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powers_of_two_exact_at_any_precision() {
        let x = MpFloat::parse("1.0", 11).unwrap();
        assert_eq!(x.to_f64(), 1.0);
        let x = MpFloat::parse("-0.5", 2).unwrap();
        assert_eq!(x.to_f64(), -0.5);
    }

    #[test]
    fn tenth_at_single_precision() {
        // 0.1 rounded to 24 bits is 13421773 * 2^-27.
        let x = MpFloat::parse("0.1", 24).unwrap();
        assert_eq!(x.to_f64(), 13421773.0 * 2f64.powi(-27));
        assert_eq!(x.to_f64(), 0.1f32 as f64);
    }

    #[test]
    fn tenth_at_double_precision_matches_native_parse() {
        let x = MpFloat::parse("0.1", 53).unwrap();
        assert_eq!(x.to_f64().to_bits(), 0.1f64.to_bits());
    }

    #[test]
    fn low_bit_rounds_away_at_11_bits() {
        let one = MpFloat::from_f64(1.0, 11);
        let tiny = MpFloat::from_f64(2f64.powi(-12), 11);
        assert_eq!(one.add(&tiny, 11).to_f64(), 1.0);
        // Half-ulp tie rounds to even.
        let half_ulp = MpFloat::from_f64(2f64.powi(-11), 11);
        assert_eq!(one.add(&half_ulp, 11).to_f64(), 1.0);
    }

    #[test]
    fn div_matches_native_double() {
        let a = MpFloat::from_f64(1.0, 53);
        let b = MpFloat::from_f64(3.0, 53);
        assert_eq!(a.div(&b, 53).to_f64().to_bits(), (1.0f64 / 3.0).to_bits());
    }

    #[test]
    fn ln_2000_verified_against_high_precision() {
        let hi = MpFloat::from_f64(2000.0, 256).ln(256);
        let lo = MpFloat::from_f64(2000.0, 53).ln(53);
        assert_eq!(lo.to_f64(), hi.to_f64());
        assert_eq!(lo.to_f64(), 7.600902459542082);
    }

    #[test]
    fn atan2_of_zero_is_zero() {
        let y = MpFloat::from_f64(0.0, 24);
        let x = MpFloat::from_f64(1.0, 24);
        assert_eq!(y.atan2(&x, 24).to_f64(), 0.0);
    }

    #[test]
    fn domain_violations_produce_nan() {
        let neg = MpFloat::from_f64(-1.0, 53);
        assert!(neg.ln(53).is_nan());
        assert!(neg.sqrt(53).is_nan());
        assert!(neg.log10(53).is_nan());
    }

    #[test]
    fn specials_propagate() {
        let inf = MpFloat::from_f64(f64::INFINITY, 53);
        let one = MpFloat::from_f64(1.0, 53);
        assert!(inf.add(&one, 53).is_infinite());
        assert!(one.div(&MpFloat::from_f64(0.0, 53), 53).is_infinite());
        assert!(MpFloat::from_f64(0.0, 53)
            .div(&MpFloat::from_f64(0.0, 53), 53)
            .is_nan());
        assert_eq!(inf.to_f64(), f64::INFINITY);
    }

    #[test]
    fn to_f64_overflow_saturates_to_infinity() {
        let huge = MpFloat::from_f64(2.0, 64);
        let e = MpFloat::from_f64(4096.0, 64);
        let x = huge.pow(&e, 64); // 2^4096, out of double range
        assert!(x.is_finite());
        assert_eq!(x.to_f64(), f64::INFINITY);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(matches!(
            MpFloat::parse("12.5x", 53),
            Err(MpError::Parse(_))
        ));
        assert!(matches!(
            MpFloat::parse("1.0", 1),
            Err(MpError::BadPrecision(1))
        ));
    }

    #[test]
    fn trunc_toward_zero() {
        assert_eq!(MpFloat::from_f64(4.999, 53).trunc_i64(), 4);
        assert_eq!(MpFloat::from_f64(-4.999, 53).trunc_i64(), -4);
        assert_eq!(MpFloat::from_f64(4.999, 11).trunc_i64(), 4);
    }
}
