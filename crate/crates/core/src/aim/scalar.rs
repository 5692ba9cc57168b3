//! Scalar abstraction over the engine's arithmetic.
//!
//! The iteration runs in either plain `f64` or double-double (`Dd`,
//! roughly 32 significant digits). Both expose exact power-of-two
//! scaling, which the polynomial layer uses to keep mantissas in range
//! without perturbing root sets.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Arithmetic the iteration engine is generic over.
pub trait Scalar:
    Copy
    + PartialOrd
    + fmt::Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const ZERO: Self;
    const ONE: Self;
    /// Unit roundoff of the representation.
    const EPSILON: f64;

    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn abs(self) -> Self;
    /// Exact multiplication by 2^e.
    fn ldexp(self, e: i32) -> Self;
    /// Binary exponent: |x| ∈ [2^(e-1), 2^e). `None` for zero.
    fn exponent(self) -> Option<i32>;
    fn is_finite(self) -> bool;
}

/// 2^e as f64, valid for the normal range.
fn pow2(e: i32) -> f64 {
    debug_assert!((-1022..=1023).contains(&e));
    f64::from_bits(((e + 1023) as u64) << 52)
}

/// frexp-style decomposition: x = m * 2^e with |m| ∈ [0.5, 1).
fn frexp(x: f64) -> (f64, i32) {
    if x == 0.0 || !x.is_finite() {
        return (x, 0);
    }
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i32;
    if raw_exp == 0 {
        // subnormal: renormalize first
        let (m, e) = frexp(x * pow2(64));
        return (m, e - 64);
    }
    let mantissa = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1022u64 << 52));
    (mantissa, raw_exp - 1022)
}

fn ldexp_f64(x: f64, e: i32) -> f64 {
    if x == 0.0 || e == 0 {
        return x;
    }
    // split to dodge intermediate over/underflow
    if !(-969..=969).contains(&e) {
        let half = e / 2;
        return ldexp_f64(ldexp_f64(x, half), e - half);
    }
    x * pow2(e)
}

impl Scalar for f64 {
    const ZERO: Self = 0.0;
    const ONE: Self = 1.0;
    const EPSILON: f64 = f64::EPSILON;

    fn from_f64(x: f64) -> Self {
        x
    }

    fn to_f64(self) -> f64 {
        self
    }

    fn abs(self) -> Self {
        f64::abs(self)
    }

    fn ldexp(self, e: i32) -> Self {
        ldexp_f64(self, e)
    }

    fn exponent(self) -> Option<i32> {
        if self == 0.0 {
            None
        } else {
            Some(frexp(self).1)
        }
    }

    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

/// Double-double number: an unevaluated sum `hi + lo` with
/// |lo| ≤ ulp(hi)/2. Field order makes lexicographic comparison valid.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

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
    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = quick_two_sum(hi, lo);
        Self { hi, lo }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, rhs: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, rhs: Dd) -> Dd {
        self + (-rhs)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, rhs: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, rhs.hi);
        let p2 = p2 + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, rhs: Dd) -> Dd {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * Dd::from_f64(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * Dd::from_f64(q2);
        let q3 = r.hi / rhs.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::from_f64(q3)
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

impl Scalar for Dd {
    const ZERO: Self = Dd { hi: 0.0, lo: 0.0 };
    const ONE: Self = Dd { hi: 1.0, lo: 0.0 };
    // 2^-104
    const EPSILON: f64 = 4.930380657631324e-32;

    fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    fn ldexp(self, e: i32) -> Self {
        Dd {
            hi: ldexp_f64(self.hi, e),
            lo: ldexp_f64(self.lo, e),
        }
    }

    fn exponent(self) -> Option<i32> {
        Scalar::exponent(self.hi)
    }

    fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }
}
