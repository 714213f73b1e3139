//! Complex arithmetic over [`MpFloat`] components.
//!
//! Addition is correctly rounded componentwise. Multiplication, division,
//! magnitude, and the principal square root evaluate internally with exact
//! products (or guard bits) before a single final rounding per component,
//! which keeps every component within one ulp of the true value.

use rug::Float;

use super::env::Cplx;
use super::real::MpFloat;

const GUARD_BITS: u32 = 32;

/// A complex value whose real and imaginary parts share one precision.
#[derive(Clone, Debug, PartialEq)]
pub struct MpComplex {
    re: MpFloat,
    im: MpFloat,
}

impl MpComplex {
    pub fn new(re: MpFloat, im: MpFloat) -> Self {
        assert_eq!(
            re.prec(),
            im.prec(),
            "complex components must share a precision"
        );
        Self { re, im }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn re(&self) -> &MpFloat {
        &self.re
    }

    pub fn im(&self) -> &MpFloat {
        &self.im
    }

    pub fn add(&self, rhs: &Self, p: u32) -> Self {
        Self {
            re: self.re.add(&rhs.re, p),
            im: self.im.add(&rhs.im, p),
        }
    }

    pub fn mul(&self, rhs: &Self, p: u32) -> Self {
        let (a, b) = (self.re.raw(), self.im.raw());
        let (c, d) = (rhs.re.raw(), rhs.im.raw());
        // Exact cross products, one rounding at 2p+4, final rounding at p.
        let wide = a.prec().max(b.prec()).max(c.prec()).max(d.prec()) * 2 + 4;
        let ac = Float::with_val(a.prec() + c.prec(), a * c);
        let bd = Float::with_val(b.prec() + d.prec(), b * d);
        let ad = Float::with_val(a.prec() + d.prec(), a * d);
        let bc = Float::with_val(b.prec() + c.prec(), b * c);
        let re = Float::with_val(p, Float::with_val(wide, &ac - &bd));
        let im = Float::with_val(p, Float::with_val(wide, &ad + &bc));
        Self {
            re: MpFloat::from_raw(re, p),
            im: MpFloat::from_raw(im, p),
        }
    }

    pub fn div(&self, rhs: &Self, p: u32) -> Self {
        let (a, b) = (self.re.raw(), self.im.raw());
        let (c, d) = (rhs.re.raw(), rhs.im.raw());
        let wide = a.prec().max(b.prec()).max(c.prec()).max(d.prec()) * 2 + 4;
        let ac = Float::with_val(a.prec() + c.prec(), a * c);
        let bd = Float::with_val(b.prec() + d.prec(), b * d);
        let ad = Float::with_val(a.prec() + d.prec(), a * d);
        let bc = Float::with_val(b.prec() + c.prec(), b * c);
        let cc = Float::with_val(c.prec() * 2, c * c);
        let dd = Float::with_val(d.prec() * 2, d * d);
        let den = Float::with_val(wide, &cc + &dd);
        let num_re = Float::with_val(wide, &ac + &bd);
        let num_im = Float::with_val(wide, &bc - &ad);
        Self {
            re: MpFloat::from_raw(Float::with_val(p, &num_re / &den), p),
            im: MpFloat::from_raw(Float::with_val(p, &num_im / &den), p),
        }
    }

    /// Magnitude `hypot(re, im)`, within one ulp at `p`.
    pub fn abs(&self, p: u32) -> MpFloat {
        let w = p + GUARD_BITS;
        let h = Float::with_val(w, self.re.raw().hypot_ref(self.im.raw()));
        MpFloat::from_raw(Float::with_val(p, h), p)
    }

    /// Principal square root.
    pub fn sqrt(&self, p: u32) -> Self {
        if self.re.is_zero() && self.im.is_zero() {
            return Self {
                re: MpFloat::from_f64(0.0, p),
                im: self.im.with_prec(p),
            };
        }
        let w = p + GUARD_BITS;
        let hyp = Float::with_val(w, self.re.raw().hypot_ref(self.im.raw()));
        let abs_re = Float::with_val(w, self.re.raw().abs_ref());
        let big = Float::with_val(w, (hyp + abs_re) / 2u32).sqrt();
        if !self.re.is_sign_negative() || self.re.is_nan() {
            let im = Float::with_val(p, self.im.raw() / Float::with_val(w, 2u32 * &big));
            Self {
                re: MpFloat::from_raw(Float::with_val(p, big), p),
                im: MpFloat::from_raw(im, p),
            }
        } else {
            let small = Float::with_val(
                p,
                Float::with_val(w, self.im.raw().abs_ref()) / Float::with_val(w, 2u32 * &big),
            );
            let signed_big = if self.im.is_sign_negative() {
                Float::with_val(p, -big)
            } else {
                Float::with_val(p, big)
            };
            Self {
                re: MpFloat::from_raw(small, p),
                im: MpFloat::from_raw(signed_big, p),
            }
        }
    }

    /// `re^2 + im^2` with each step rounded at `p`, matching a direct port
    /// of real-arithmetic source lines.
    pub fn norm_sqr(&self, p: u32) -> MpFloat {
        let rr = self.re.mul(&self.re, p);
        let ii = self.im.mul(&self.im, p);
        rr.add(&ii, p)
    }
}

impl Cplx for MpComplex {
    type R = MpFloat;

    fn re(&self) -> MpFloat {
        self.re.clone()
    }

    fn im(&self) -> MpFloat {
        self.im.clone()
    }

    fn div(&self, den: &Self) -> Self {
        MpComplex::div(self, den, self.prec())
    }

    fn sqrt(&self) -> Self {
        MpComplex::sqrt(self, self.prec())
    }

    fn norm_sqr(&self) -> MpFloat {
        MpComplex::norm_sqr(self, self.prec())
    }

    fn abs(&self) -> MpFloat {
        MpComplex::abs(self, self.prec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64, p: u32) -> MpComplex {
        MpComplex::new(MpFloat::from_f64(re, p), MpFloat::from_f64(im, p))
    }

    #[test]
    fn pythagorean_magnitude_exact() {
        for p in [3, 11, 24, 53, 256] {
            assert_eq!(c(3.0, 4.0, p).abs(p).to_f64(), 5.0);
        }
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = c(0.0, 1.0, 24);
        let r = i.mul(&i, 24);
        assert_eq!(r.re().to_f64(), -1.0);
        assert_eq!(r.im().to_f64(), 0.0);
    }

    #[test]
    fn principal_sqrt_of_minus_one() {
        let r = c(-1.0, 0.0, 53).sqrt(53);
        assert_eq!(r.re().to_f64(), 0.0);
        assert_eq!(r.im().to_f64(), 1.0);
        // Below the branch cut the root flips to -i.
        let r = c(-1.0, -0.0, 53).sqrt(53);
        assert_eq!(r.im().to_f64(), -1.0);
    }

    #[test]
    fn division_round_trip() {
        let a = c(1.5, -2.25, 53);
        let b = c(0.75, 3.0, 53);
        let q = a.div(&b, 53);
        let back = q.mul(&b, 53);
        assert!((back.re().to_f64() - 1.5).abs() < 1e-15);
        assert!((back.im().to_f64() + 2.25).abs() < 1e-15);
    }

    #[test]
    fn sqrt_of_zero() {
        let r = c(0.0, 0.0, 53).sqrt(53);
        assert!(r.re().is_zero() && r.im().is_zero());
    }
}
