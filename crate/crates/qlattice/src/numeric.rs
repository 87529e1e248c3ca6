//! Arbitrary-precision complex values and interval-style error tracking.
//!
//! Every analytic quantity produced by this crate is a value together with
//! an error bound (`RealBall`, `ComplexBall`). Exact data (rationals,
//! cyclotomic numbers) never carries a bound; the bound appears the moment
//! a series is truncated or a transcendental function is evaluated.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 128;

/// Complex number with explicit binary precision.
#[derive(Debug, Clone, PartialEq)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

impl BigComplex {
    pub fn new(re: Float, im: Float) -> Self {
        BigComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        BigComplex::new(Float::new(prec), Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        BigComplex::new(Float::with_val(prec, 1), Float::new(prec))
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        BigComplex::new(Float::with_val(prec, r), Float::new(prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.prec().max(other.prec());
        BigComplex::new(
            Float::with_val(p, &self.re + &other.re),
            Float::with_val(p, &self.im + &other.im),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.prec().max(other.prec());
        BigComplex::new(
            Float::with_val(p, &self.re - &other.re),
            Float::with_val(p, &self.im - &other.im),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.prec().max(other.prec());
        let re = Float::with_val(p, &self.re * &other.re) - Float::with_val(p, &self.im * &other.im);
        let im = Float::with_val(p, &self.re * &other.im) + Float::with_val(p, &self.im * &other.re);
        BigComplex::new(Float::with_val(p, re), Float::with_val(p, im))
    }

    pub fn scale(&self, s: &Float) -> Self {
        let p = self.prec().max(s.prec());
        BigComplex::new(Float::with_val(p, &self.re * s), Float::with_val(p, &self.im * s))
    }

    pub fn div_float(&self, s: &Float) -> Self {
        let p = self.prec().max(s.prec());
        BigComplex::new(Float::with_val(p, &self.re / s), Float::with_val(p, &self.im / s))
    }

    pub fn conj(&self) -> Self {
        BigComplex::new(self.re.clone(), Float::with_val(self.im.prec(), -&self.im))
    }

    pub fn neg(&self) -> Self {
        BigComplex::new(
            Float::with_val(self.re.prec(), -&self.re),
            Float::with_val(self.im.prec(), -&self.im),
        )
    }

    pub fn abs(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.clone().hypot(&self.im))
    }

    pub fn div(&self, other: &Self) -> Self {
        let p = self.prec().max(other.prec());
        let d = Float::with_val(p, &other.re * &other.re) + Float::with_val(p, &other.im * &other.im);
        let num = self.mul(&other.conj());
        BigComplex::new(Float::with_val(p, &num.re / &d), Float::with_val(p, &num.im / &d))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl Serialize for BigComplex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("BigComplex", 3)?;
        s.serialize_field("re", &format_float(&self.re))?;
        s.serialize_field("im", &format_float(&self.im))?;
        s.serialize_field("precision", &self.prec())?;
        s.end()
    }
}

/// Deterministic decimal rendering: digit count derived from the precision,
/// so identical inputs give byte-identical output.
pub fn format_float(x: &Float) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let digits = (x.prec() as f64 * 0.30103).ceil() as usize + 2;
    x.to_string_radix(10, Some(digits))
}

/// A real value with a certified (or documented-heuristic) error radius:
/// the represented quantity lies in `[value - radius, value + radius]`.
#[derive(Debug, Clone)]
pub struct RealBall {
    pub value: Float,
    pub radius: Float,
}

impl RealBall {
    pub fn exact(value: Float) -> Self {
        let p = value.prec();
        RealBall { value, radius: Float::new(p) }
    }

    pub fn new(value: Float, radius: Float) -> Self {
        RealBall { value, radius }
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.value.prec().max(other.value.prec());
        RealBall {
            value: Float::with_val(p, &self.value + &other.value),
            radius: Float::with_val(p, &self.radius + &other.radius),
        }
    }

    /// Contains zero within the combined radius of `self` and `other`?
    pub fn agrees_with(&self, other: &Self) -> bool {
        let p = self.value.prec().max(other.value.prec());
        let diff = Float::with_val(p, &self.value - &other.value).abs();
        diff <= Float::with_val(p, &self.radius + &other.radius)
    }
}

/// Complex value with error radius (radius bounds |true - value|).
#[derive(Debug, Clone)]
pub struct ComplexBall {
    pub value: BigComplex,
    pub radius: Float,
}

impl ComplexBall {
    pub fn exact(value: BigComplex) -> Self {
        let p = value.prec();
        ComplexBall { value, radius: Float::new(p) }
    }

    pub fn new(value: BigComplex, radius: Float) -> Self {
        ComplexBall { value, radius }
    }

    pub fn agrees_with(&self, other: &Self) -> bool {
        let p = self.value.prec().max(other.value.prec());
        let diff = self.value.sub(&other.value).abs();
        diff <= Float::with_val(p, &self.radius + &other.radius)
    }

    /// Quotient with first-order error propagation; `den` must be bounded
    /// away from zero by its own radius.
    pub fn div_real(&self, den: &RealBall) -> ComplexBall {
        let p = self.value.prec().max(den.value.prec());
        let value = self.value.div_float(&den.value);
        let den_low = Float::with_val(p, &den.value - &den.radius).abs();
        let vabs = value.abs();
        let radius = Float::with_val(p, &self.radius + vabs * &den.radius) / den_low;
        ComplexBall { value, radius: Float::with_val(p, radius) }
    }
}

/// pi at the requested precision.
pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// exp(2 pi i k / n) at the requested precision, with k reduced mod n.
pub fn root_of_unity(n: u64, k: i64, prec: u32) -> BigComplex {
    let kk = k.rem_euclid(n as i64) as u64;
    let angle = Float::with_val(prec, 2u32) * pi(prec) * Float::with_val(prec, kk)
        / Float::with_val(prec, n);
    let (s, c) = angle.sin_cos(Float::new(prec));
    BigComplex::new(c, s)
}

/// x^y for positive real base, arbitrary real exponent.
pub fn real_pow(x: &Float, y: &Float) -> Float {
    let p = x.prec().max(y.prec());
    Float::with_val(p, x.pow(y))
}

/// n^{-beta} for a positive integer n.
pub fn int_pow_neg(n: u64, beta: &Float) -> Float {
    let p = beta.prec();
    let nb = Float::with_val(p, n);
    let e = Float::with_val(p, -beta);
    Float::with_val(p, nb.pow(e))
}

/// 2^{-(prec - slack)} as a Float; the conventional rounding-noise bound
/// used when an operation is exact up to floating-point error.
pub fn rounding_bound(prec: u32, slack: u32) -> Float {
    let mut f = Float::with_val(32, 1);
    f >>= prec.saturating_sub(slack);
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_field_ops() {
        let i = BigComplex::new(Float::new(64), Float::with_val(64, 1));
        let m1 = i.mul(&i);
        assert_eq!(m1.re, Float::with_val(64, -1));
        assert!(m1.im.is_zero());
        let q = i.div(&i);
        assert_eq!(q.re, 1);
        assert!(q.im.is_zero());
    }

    #[test]
    fn roots_of_unity_cycle() {
        // 4th root: i. 8th root squared = 4th root.
        let z4 = root_of_unity(4, 1, 128);
        assert!(z4.re.clone().abs() < rounding_bound(128, 8));
        assert!((z4.im.clone() - 1u32).abs() < rounding_bound(128, 8));
        let z8 = root_of_unity(8, 1, 128);
        let sq = z8.mul(&z8);
        assert!(sq.sub(&z4).abs() < rounding_bound(128, 8));
    }

    #[test]
    fn format_is_deterministic() {
        let x = Float::with_val(128, 1) / Float::with_val(128, 3);
        assert_eq!(format_float(&x), format_float(&x.clone()));
    }

    #[test]
    fn ball_division_propagates() {
        let num = ComplexBall::new(BigComplex::one(64), Float::with_val(64, 1e-10));
        let den = RealBall::new(Float::with_val(64, 2), Float::with_val(64, 1e-10));
        let q = num.div_real(&den);
        assert!((q.value.re.clone() - 0.5f64).abs() < 1e-15);
        assert!(q.radius < 1e-9);
    }
}
