//! Double-double arithmetic (about 32 significant digits).
//!
//! Only what the Nyström oracle needs: the four operations, `sqrt`, `sin`,
//! `cos` and a logarithm of the magnitude. Error-free transformations use
//! `f64::mul_add`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

const PI_HALF: Dd = Dd {
    hi: std::f64::consts::FRAC_PI_2,
    lo: 6.123_233_995_736_766e-17,
};
pub const PI: Dd = Dd {
    hi: std::f64::consts::PI,
    lo: 1.224_646_799_147_353_2e-16,
};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub const fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    fn renorm(hi: f64, lo: f64) -> Self {
        let (hi, lo) = quick_two_sum(hi, lo);
        Dd { hi, lo }
    }

    /// Exact sum of two doubles.
    pub fn sum(a: f64, b: f64) -> Self {
        let (hi, lo) = two_sum(a, b);
        Dd { hi, lo }
    }

    /// Exact product of two doubles.
    pub fn prod(a: f64, b: f64) -> Self {
        let (hi, lo) = two_prod(a, b);
        Dd { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn is_sign_negative(self) -> bool {
        self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0)
    }

    pub fn sqr(self) -> Self {
        self * self
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return Dd::new(self.hi.sqrt());
        }
        let x = self.hi.sqrt();
        let r = self - Dd::prod(x, x);
        Dd::renorm(x, r.hi / (2.0 * x))
    }

    /// Natural log of `|self|`, accurate to double precision.
    pub fn ln_abs(self) -> f64 {
        let a = self.abs();
        a.hi.ln() + (a.lo / a.hi).ln_1p()
    }

    /// `(sin r, cos r)` for `|r| <= π/4` by Taylor series.
    fn sin_cos_reduced(r: Dd) -> (Dd, Dd) {
        let r2 = r.sqr();
        let mut term = r;
        let mut sin = r;
        let mut k = 1.0;
        loop {
            term = term * r2 / ((k + 1.0) * (k + 2.0));
            term = -term;
            sin += term;
            k += 2.0;
            if term.hi.abs() < 1e-33 {
                break;
            }
        }
        let mut term = Dd::ONE;
        let mut cos = Dd::ONE;
        let mut k = 0.0;
        loop {
            term = term * r2 / ((k + 1.0) * (k + 2.0));
            term = -term;
            cos += term;
            k += 2.0;
            if term.hi.abs() < 1e-33 {
                break;
            }
        }
        (sin, cos)
    }

    pub fn sin_cos(self) -> (Dd, Dd) {
        // k need only be near x/(π/2); |r| slightly above π/4 is harmless
        let k = Dd::new((self / PI_HALF).hi.round());
        let r = self - PI_HALF * k;
        let (s, c) = Dd::sin_cos_reduced(r);
        match (k.hi as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    pub fn sin(self) -> Dd {
        self.sin_cos().0
    }

    pub fn cos(self) -> Dd {
        self.sin_cos().1
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd::new(x)
    }
}

impl fmt::Debug for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dd({:e} + {:e})", self.hi, self.lo)
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        Dd::renorm(s, e + f)
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        Dd::renorm(p, e + (self.hi * b.lo + self.lo * b.hi))
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b * q1;
        let q2 = r.hi / b.hi;
        let r = r - b * q2;
        let q3 = r.hi / b.hi;
        Dd::renorm(q1, q2) + Dd::new(q3)
    }
}

impl Add<f64> for Dd {
    type Output = Dd;
    fn add(self, b: f64) -> Dd {
        let (s, e) = two_sum(self.hi, b);
        Dd::renorm(s, e + self.lo)
    }
}

impl Sub<f64> for Dd {
    type Output = Dd;
    fn sub(self, b: f64) -> Dd {
        self + (-b)
    }
}

impl Mul<f64> for Dd {
    type Output = Dd;
    fn mul(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        Dd::renorm(p, e + self.lo * b)
    }
}

impl Div<f64> for Dd {
    type Output = Dd;
    fn div(self, b: f64) -> Dd {
        let q1 = self.hi / b;
        let r = self - Dd::prod(q1, b);
        let q2 = r.hi / b;
        let r = r - Dd::prod(q2, b);
        Dd::renorm(q1, q2) + Dd::new(r.hi / b)
    }
}

impl AddAssign for Dd {
    fn add_assign(&mut self, b: Dd) {
        *self = *self + b;
    }
}

impl SubAssign for Dd {
    fn sub_assign(&mut self, b: Dd) {
        *self = *self - b;
    }
}

impl MulAssign for Dd {
    fn mul_assign(&mut self, b: Dd) {
        *self = *self * b;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_transforms() {
        let a = Dd::sum(1.0, 1e-20);
        assert_eq!(a.hi, 1.0);
        assert_eq!(a.lo, 1e-20);
        let p = Dd::prod(1.0 + f64::EPSILON, 1.0 - f64::EPSILON);
        assert_eq!(p.hi, 1.0);
        assert_eq!(p.lo, -f64::EPSILON * f64::EPSILON);
    }

    #[test]
    fn division_roundtrip() {
        let third = Dd::ONE / Dd::new(3.0);
        let back = third * 3.0 - 1.0;
        assert!(back.to_f64().abs() < 1e-31);
        let x = Dd::new(2.0).sqrt();
        assert!((x * x - 2.0).to_f64().abs() < 1e-31);
    }

    #[test]
    fn pi_roundoff_is_carried() {
        // sin(π) in double-double is the residue of the π constant, ~1e-32
        assert!(PI.sin().to_f64().abs() < 1e-31);
        assert!((PI_HALF.sin() - 1.0).to_f64().abs() < 1e-31);
    }

    #[test]
    fn sin_cos_agree_with_f64_and_pythagoras() {
        for &x in &[0.1, -0.7, 1.3, 2.9, 17.25, -55.5, 80.0] {
            let (s, c) = Dd::new(x).sin_cos();
            assert!((s.to_f64() - x.sin()).abs() < 4e-16);
            assert!((c.to_f64() - x.cos()).abs() < 4e-16);
            let one = s.sqr() + c.sqr() - 1.0;
            assert!(one.to_f64().abs() < 1e-30, "{x}: {one:?}");
        }
    }

    #[test]
    fn small_argument_sine_keeps_low_word() {
        // sin(x)/x for x = 1e-10: 1 − x²/6 with x²/6 far below f64 resolution of 1
        let x = Dd::new(1e-10);
        let r = x.sin() / x - 1.0;
        assert!((r.to_f64() + 1e-20 / 6.0).abs() < 1e-34);
    }

    #[test]
    fn log_magnitude() {
        let x = Dd::sum(1.0, 1e-20);
        assert!((x.ln_abs() - 1e-20).abs() < 1e-35);
        assert!((Dd::new(-std::f64::consts::E).ln_abs() - 1.0).abs() < 1e-15);
    }
}
