//! Phase factors evaluated from double-double arguments.
//!
//! Coherent-state labels enter the coefficients only through phases such as
//! `exp(i γ/(n+1)²)`. Forming `γ + ωt` or `n·θ` in plain `f64` loses the low
//! bits of the label, so the label-shift identities would only hold to
//! `ulp(ωt)`. Arguments are therefore carried as unevaluated sums `hi + lo`
//! and reduced modulo 2π before the final `sin_cos`.

use std::f64::consts::TAU;
use std::ops::{Add, Div, Neg};

use num_complex::Complex64;

/// 2π split into a leading double and its rounding remainder.
const TWO_PI_HI: f64 = TAU;
const TWO_PI_LO: f64 = 2.449_293_598_294_706_4e-16;

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// A real phase argument stored as `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseArg {
    hi: f64,
    lo: f64,
}

impl PhaseArg {
    pub const ZERO: PhaseArg = PhaseArg { hi: 0.0, lo: 0.0 };

    pub fn new(x: f64) -> Self {
        PhaseArg { hi: x, lo: 0.0 }
    }

    /// The exact product `a·b` of two doubles.
    pub fn product(a: f64, b: f64) -> Self {
        let (hi, lo) = two_prod(a, b);
        PhaseArg { hi, lo }
    }

    pub fn value(self) -> f64 {
        self.hi + self.lo
    }

    pub fn scale(self, k: f64) -> Self {
        let (p, e) = two_prod(self.hi, k);
        let e = e + self.lo * k;
        let (hi, lo) = two_sum(p, e);
        PhaseArg { hi, lo }
    }

    /// Representative of the argument in roughly `[-π, π]`.
    pub fn reduce(self) -> f64 {
        let q = (self.hi / TWO_PI_HI).round();
        if q == 0.0 {
            return self.value();
        }
        let (p, pe) = two_prod(q, TWO_PI_HI);
        let (s, se) = two_sum(self.hi, -p);
        s + (se - pe + self.lo - q * TWO_PI_LO)
    }

    /// `exp(i·self)`.
    pub fn cis(self) -> Complex64 {
        let (sin, cos) = self.reduce().sin_cos();
        Complex64::new(cos, sin)
    }
}

impl Add for PhaseArg {
    type Output = PhaseArg;

    fn add(self, other: PhaseArg) -> PhaseArg {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = two_sum(s, e);
        PhaseArg { hi, lo }
    }
}

impl Neg for PhaseArg {
    type Output = PhaseArg;

    fn neg(self) -> PhaseArg {
        PhaseArg { hi: -self.hi, lo: -self.lo }
    }
}

impl Div<f64> for PhaseArg {
    type Output = PhaseArg;

    fn div(self, d: f64) -> PhaseArg {
        let q1 = self.hi / d;
        // remainder self - q1*d, computed exactly for the leading part
        let (p, pe) = two_prod(q1, d);
        let r = ((self.hi - p) - pe + self.lo) / d;
        let (hi, lo) = two_sum(q1, r);
        PhaseArg { hi, lo }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_matches_plain_evaluation_for_small_arguments() {
        for &x in &[0.0, 0.3, -2.9, 3.2, 17.5, -123.25] {
            let a = PhaseArg::new(x).cis();
            let b = Complex64::new(x.cos(), x.sin());
            assert!((a - b).norm() < 1e-14, "x = {x}");
        }
    }

    #[test]
    fn sum_keeps_low_bits() {
        let gamma = 0.1;
        let big = 1.0e6;
        let sum = PhaseArg::new(gamma) + PhaseArg::new(big);
        // the plain f64 sum rounds away part of gamma; the pair does not
        assert_eq!(sum.hi, gamma + big);
        assert!(((sum.hi - big) + sum.lo - gamma).abs() < 1e-22);
    }

    #[test]
    fn division_by_small_integers() {
        let x = PhaseArg::new(10.0) / 9.0;
        let back = x.scale(9.0);
        assert!((back.value() - 10.0).abs() < 1e-15);
        assert!((x.hi - 10.0 / 9.0).abs() <= f64::EPSILON);
    }

    #[test]
    fn whole_turns_reduce_to_zero() {
        let turns = (PhaseArg::new(TWO_PI_HI) + PhaseArg::new(TWO_PI_LO)).scale(1000.0);
        assert!(turns.reduce().abs() < 1e-12);
    }
}
