//! Factor groups shared by the pmf formulas.

use num_traits::One;

use super::Weight;
use crate::combinatorics::{factorial, gamma_int};
use crate::Rational;

pub(crate) fn int(k: usize) -> Rational {
    Rational::from_integer(k.into())
}

/// `prod_{i=1}^{k-1} (theta + i alpha)`: `(theta/alpha)^{(k)} alpha^k` with
/// the leading `theta` removed.
pub(crate) fn mul_table_openings<W: Weight>(
    w: &mut W,
    theta: &Rational,
    alpha: &Rational,
    k: usize,
) {
    let mut term = theta.clone();
    for _ in 1..k {
        term += alpha;
        w.mul_rational(&term);
    }
}

/// Divides by `prod_{i=1}^{n-1} (x + i)`: `x^{(n)}` with the leading `x`
/// removed.
pub(crate) fn div_rising_tail<W: Weight>(w: &mut W, x: &Rational, n: usize) {
    let mut term = x.clone();
    for _ in 1..n {
        term += <Rational as One>::one();
        w.div_rational(&term);
    }
}

/// `prod_{t=1}^{s-1} (t - a)`: `-(-a)^{(s)} / a`.
pub(crate) fn mul_block_tail<W: Weight>(w: &mut W, a: &Rational, s: usize) {
    let mut term = -a.clone();
    for _ in 1..s {
        term += <Rational as One>::one();
        w.mul_rational(&term);
    }
}

/// `x^{(n)}` in full.
pub(crate) fn div_rising<W: Weight>(w: &mut W, x: &Rational, n: usize) {
    if n > 0 {
        w.div_rational(x);
    }
    div_rising_tail(w, x, n);
}

pub(crate) fn mul_pow<W: Weight>(w: &mut W, x: &Rational, e: usize) {
    for _ in 0..e {
        w.mul_rational(x);
    }
}

pub(crate) fn mul_factorial<W: Weight>(w: &mut W, n: usize, e: usize) {
    if n > 1 {
        let f = factorial(n);
        for _ in 0..e {
            w.mul_big(&f);
        }
    }
}

pub(crate) fn div_factorial<W: Weight>(w: &mut W, n: usize, e: usize) {
    if n > 1 {
        let f = factorial(n);
        for _ in 0..e {
            w.div_big(&f);
        }
    }
}

pub(crate) fn mul_gamma<W: Weight>(w: &mut W, k: usize) {
    if k > 2 {
        w.mul_big(&gamma_int(k));
    }
}

pub(crate) fn div_gamma<W: Weight>(w: &mut W, k: usize) {
    if k > 2 {
        w.div_big(&gamma_int(k));
    }
}
