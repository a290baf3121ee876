use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Rational;

/// A multiplicative accumulator that pmf formulas are evaluated into.
///
/// [`Rational`] gives exact values; [`LogWeight`] keeps a sign and
/// `ln |x|` so that large supports do not overflow.
pub trait Weight: Sized {
    fn one() -> Self;
    fn mul_rational(&mut self, x: &Rational);
    /// `x` must be non-zero.
    fn div_rational(&mut self, x: &Rational);
    fn mul_big(&mut self, x: &BigUint);
    /// `x` must be non-zero.
    fn div_big(&mut self, x: &BigUint);

    fn mul_int(&mut self, k: usize) {
        self.mul_big(&BigUint::from(k));
    }

    fn div_int(&mut self, k: usize) {
        self.div_big(&BigUint::from(k));
    }
}

impl Weight for Rational {
    fn one() -> Self {
        One::one()
    }

    fn mul_rational(&mut self, x: &Rational) {
        *self *= x;
    }

    fn div_rational(&mut self, x: &Rational) {
        debug_assert!(!x.is_zero());
        *self /= x;
    }

    fn mul_big(&mut self, x: &BigUint) {
        *self *= Rational::from_integer(BigInt::from_biguint(Sign::Plus, x.clone()));
    }

    fn div_big(&mut self, x: &BigUint) {
        debug_assert!(!x.is_zero());
        *self /= Rational::from_integer(BigInt::from_biguint(Sign::Plus, x.clone()));
    }
}

/// A real number held as `sign * exp(ln_abs)`; `sign == 0` encodes zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogWeight {
    sign: i8,
    ln_abs: f64,
}

impl LogWeight {
    pub fn zero() -> Self {
        Self {
            sign: 0,
            ln_abs: f64::NEG_INFINITY,
        }
    }

    pub fn from_ln(ln: f64) -> Self {
        Self {
            sign: 1,
            ln_abs: ln,
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// `ln |x|`, `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.sign == 0 {
            f64::NEG_INFINITY
        } else {
            self.ln_abs
        }
    }

    pub fn value(&self) -> f64 {
        f64::from(self.sign) * self.ln_abs.exp()
    }

    fn absorb(&mut self, sign: i8, ln: f64, invert: bool) {
        if sign == 0 {
            assert!(!invert, "division by zero in log-space evaluation");
            self.sign = 0;
            return;
        }
        if self.sign == 0 {
            return;
        }
        self.sign *= sign;
        if invert {
            self.ln_abs -= ln;
        } else {
            self.ln_abs += ln;
        }
    }
}

impl Weight for LogWeight {
    fn one() -> Self {
        Self {
            sign: 1,
            ln_abs: 0.0,
        }
    }

    fn mul_rational(&mut self, x: &Rational) {
        self.absorb(rational_sign(x), ln_abs_rational(x), false);
    }

    fn div_rational(&mut self, x: &Rational) {
        self.absorb(rational_sign(x), ln_abs_rational(x), true);
    }

    fn mul_big(&mut self, x: &BigUint) {
        self.absorb(if x.is_zero() { 0 } else { 1 }, ln_biguint(x), false);
    }

    fn div_big(&mut self, x: &BigUint) {
        self.absorb(if x.is_zero() { 0 } else { 1 }, ln_biguint(x), true);
    }
}

fn rational_sign(x: &Rational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_negative() {
        -1
    } else {
        1
    }
}

/// `ln x` for a big unsigned integer, accurate for values far beyond `f64`.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        x.to_f64().expect("fits in f64").ln()
    } else {
        let shift = bits - 64;
        (x >> shift).to_f64().expect("fits in f64").ln() + shift as f64 * std::f64::consts::LN_2
    }
}

/// `ln |x|` for an exact rational.
pub fn ln_abs_rational(x: &Rational) -> f64 {
    ln_biguint(x.numer().magnitude()) - ln_biguint(x.denom().magnitude())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_weight_tracks_sign_and_magnitude() {
        let mut w = LogWeight::one();
        w.mul_rational(&Rational::new((-3).into(), 4.into()));
        w.div_rational(&Rational::new((-1).into(), 2.into()));
        assert_eq!(w.sign(), 1);
        assert!((w.value() - 1.5).abs() < 1e-15);
        w.mul_int(0);
        assert_eq!(w.sign(), 0);
        assert_eq!(w.ln_abs(), f64::NEG_INFINITY);
    }

    #[test]
    fn ln_of_huge_integers() {
        let big = crate::combinatorics::factorial(500);
        let expected: f64 = (1..=500).map(|k| (k as f64).ln()).sum();
        assert!((ln_biguint(&big) - expected).abs() < 1e-9 * expected);
    }
}
