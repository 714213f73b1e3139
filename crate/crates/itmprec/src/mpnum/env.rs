//! Numeric environments: the abstraction that lets the propagation model run
//! unchanged on native machine doubles and on explicit-precision floats.
//!
//! An [`Env`] hands out values of its scalar type [`Env::R`] and complex type
//! [`Env::C`]. [`NativeEnv`] is plain `f64`; [`MpEnv`] wraps every operation
//! in round-to-nearest arithmetic at a caller-chosen significand width.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::complex::MpComplex;
use super::real::MpFloat;

/// Scalar operations required by the propagation model.
///
/// Operators consume their operands; values are cheap to clone in both
/// implementations. `vmin`/`vmax` follow C `std::min`/`std::max` comparison
/// semantics rather than IEEE minNum/maxNum.
pub trait Real:
    Sized
    + Clone
    + PartialOrd
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn log10(self) -> Self;
    fn pow(self, e: Self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn atan2(self, x: Self) -> Self;
    fn floor(self) -> Self;

    /// `std::min(self, o)`: returns `o` iff `o < self`.
    fn vmin(self, o: Self) -> Self {
        if o < self {
            o
        } else {
            self
        }
    }

    /// `std::max(self, o)`: returns `o` iff `self < o`.
    fn vmax(self, o: Self) -> Self {
        if self < o {
            o
        } else {
            self
        }
    }

    /// Narrow to a native double, rounding to nearest (ties to even).
    fn to_f64(&self) -> f64;

    /// C-style `(int)` cast: truncation toward zero.
    fn trunc_i64(&self) -> i64;

    fn is_nan(&self) -> bool;
    fn is_finite(&self) -> bool;
}

/// Complex operations required by the model (ground impedance and the
/// two-ray reflection coefficient).
pub trait Cplx: Sized + Clone + Debug + Send + Sync {
    type R: Real;

    fn re(&self) -> Self::R;
    fn im(&self) -> Self::R;
    fn div(&self, den: &Self) -> Self;
    /// Principal square root.
    fn sqrt(&self) -> Self;
    /// `re^2 + im^2`.
    fn norm_sqr(&self) -> Self::R;
    /// `hypot(re, im)`.
    fn abs(&self) -> Self::R;
}

/// A numeric environment: a factory for scalar and complex values.
pub trait Env: Copy + Send + Sync + 'static {
    type R: Real;
    type C: Cplx<R = Self::R>;

    /// Embed a compile-time double constant.
    ///
    /// The constant keeps its full double value; only the results of
    /// operations on it are rounded to the working precision. This mirrors
    /// multiprecision `*_d` entry points, where a double operand enters an
    /// operation exactly.
    fn lit(&self, v: f64) -> Self::R;

    /// Convert a runtime double input (terrain sample, model parameter)
    /// into a working value, rounding to the working precision.
    fn from_f64(&self, v: f64) -> Self::R;

    fn complex(&self, re: Self::R, im: Self::R) -> Self::C;

    /// Significand width in bits, or `None` for native machine arithmetic.
    fn precision_bits(&self) -> Option<u32>;
}

/// Native IEEE double arithmetic.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct NativeEnv;

/// Complex double with the classic libm formulas for division (Smith's
/// algorithm) and the principal square root.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct C64 {
    pub re: f64,
    pub im: f64,
}

impl Real for f64 {
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    fn sqrt(self) -> f64 {
        f64::sqrt(self)
    }
    fn exp(self) -> f64 {
        f64::exp(self)
    }
    fn ln(self) -> f64 {
        f64::ln(self)
    }
    fn log10(self) -> f64 {
        f64::log10(self)
    }
    fn pow(self, e: f64) -> f64 {
        f64::powf(self, e)
    }
    fn sin(self) -> f64 {
        f64::sin(self)
    }
    fn cos(self) -> f64 {
        f64::cos(self)
    }
    fn atan2(self, x: f64) -> f64 {
        f64::atan2(self, x)
    }
    fn floor(self) -> f64 {
        f64::floor(self)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn trunc_i64(&self) -> i64 {
        *self as i64
    }
    fn is_nan(&self) -> bool {
        f64::is_nan(*self)
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl Cplx for C64 {
    type R = f64;

    fn re(&self) -> f64 {
        self.re
    }

    fn im(&self) -> f64 {
        self.im
    }

    fn div(&self, den: &C64) -> C64 {
        // Smith's algorithm, as in compiler-provided complex division.
        let (a, b, c, d) = (self.re, self.im, den.re, den.im);
        if c.abs() >= d.abs() {
            let r = d / c;
            let dn = c + d * r;
            C64 {
                re: (a + b * r) / dn,
                im: (b - a * r) / dn,
            }
        } else {
            let r = c / d;
            let dn = c * r + d;
            C64 {
                re: (a * r + b) / dn,
                im: (b * r - a) / dn,
            }
        }
    }

    fn sqrt(&self) -> C64 {
        if self.re == 0.0 && self.im == 0.0 {
            return C64 {
                re: 0.0,
                im: self.im,
            };
        }
        let big = (0.5 * (self.re.hypot(self.im) + self.re.abs())).sqrt();
        if self.re >= 0.0 {
            C64 {
                re: big,
                im: self.im / (2.0 * big),
            }
        } else {
            C64 {
                re: self.im.abs() / (2.0 * big),
                im: big.copysign(self.im),
            }
        }
    }

    fn norm_sqr(&self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

impl Env for NativeEnv {
    type R = f64;
    type C = C64;

    fn lit(&self, v: f64) -> f64 {
        v
    }

    fn from_f64(&self, v: f64) -> f64 {
        v
    }

    fn complex(&self, re: f64, im: f64) -> C64 {
        C64 { re, im }
    }

    fn precision_bits(&self) -> Option<u32> {
        None
    }
}

/// Explicit-precision arithmetic at `prec` significand bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MpEnv {
    prec: u32,
}

impl MpEnv {
    /// `prec` is the significand width in bits; must be at least 2.
    pub fn new(prec: u32) -> Self {
        assert!(prec >= 2, "precision must be at least 2 bits");
        Self { prec }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }
}

impl Env for MpEnv {
    type R = MpFloat;
    type C = MpComplex;

    fn lit(&self, v: f64) -> MpFloat {
        MpFloat::constant(v, self.prec)
    }

    fn from_f64(&self, v: f64) -> MpFloat {
        MpFloat::from_f64(v, self.prec)
    }

    fn complex(&self, re: MpFloat, im: MpFloat) -> MpComplex {
        MpComplex::new(re, im)
    }

    fn precision_bits(&self) -> Option<u32> {
        Some(self.prec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smith_division_matches_naive_on_tame_inputs() {
        let a = C64 { re: 1.5, im: -2.0 };
        let b = C64 { re: 0.5, im: 3.0 };
        let q = a.div(&b);
        let n = b.norm_sqr();
        let re = (a.re * b.re + a.im * b.im) / n;
        let im = (a.im * b.re - a.re * b.im) / n;
        assert!((q.re - re).abs() < 1e-15 && (q.im - im).abs() < 1e-15);
    }

    #[test]
    fn complex_sqrt_principal_branch() {
        let z = C64 { re: -1.0, im: 0.0 };
        let r = z.sqrt();
        assert_eq!((r.re, r.im), (0.0, 1.0));
        let z = C64 { re: 3.0, im: 4.0 };
        let r = z.sqrt();
        assert!((r.re - 2.0).abs() < 1e-15 && (r.im - 1.0).abs() < 1e-15);
    }

    #[test]
    fn vmin_vmax_follow_comparison_semantics() {
        assert_eq!(2.0f64.vmin(3.0), 2.0);
        assert_eq!(2.0f64.vmax(3.0), 3.0);
        // NaN comparisons are false, so the first operand wins.
        assert!(f64::NAN.vmin(1.0).is_nan());
        assert_eq!(1.0f64.vmin(f64::NAN), 1.0);
    }
}
