//! Real-root extraction for termination polynomials.
//!
//! The derivative chain partitions the search interval into monotone
//! segments: critical points of p come from recursively solving p', so
//! every sign change brackets exactly one root and none can hide
//! between grid points. Brackets are closed by sign-preserving
//! bisection in the engine's scalar type; critical points where p
//! vanishes to within evaluation noise become multiple roots.

use super::poly::EPolynomial;
use super::scalar::Scalar;
use crate::error::AimError;

/// A located real root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyRoot {
    pub value: f64,
    pub multiplicity: u32,
}

/// All real roots of `poly` inside `interval`, sorted ascending,
/// repeated roots reported once with their multiplicity.
pub fn real_roots<S: Scalar>(
    poly: &EPolynomial<S>,
    interval: (f64, f64),
) -> Result<Vec<PolyRoot>, AimError> {
    let (lo, hi) = interval;
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return Err(AimError::DegenerateInterval { lo, hi });
    }
    if poly.is_zero() {
        return Err(AimError::ZeroPolynomial);
    }
    Ok(roots_recursive(poly, lo, hi))
}

/// Merge distance for nearby root candidates.
fn merge_tol(x: f64) -> f64 {
    1e-9 * x.abs().max(1.0)
}

/// Whether p(x) is zero to within the evaluation noise floor.
fn numerically_zero<S: Scalar>(poly: &EPolynomial<S>, x: S) -> bool {
    let value = poly.eval(x);
    if value.is_zero() {
        return true;
    }
    let scale = poly.eval_abs(x);
    value.log2_abs() < scale.log2_abs() + S::EPSILON.log2() + 12.0
}

fn sign_at<S: Scalar>(poly: &EPolynomial<S>, x: f64) -> i8 {
    if numerically_zero(poly, S::from_f64(x)) {
        0
    } else {
        poly.eval(S::from_f64(x)).signum()
    }
}

fn roots_recursive<S: Scalar>(poly: &EPolynomial<S>, lo: f64, hi: f64) -> Vec<PolyRoot> {
    let degree = match poly.degree() {
        None | Some(0) => return Vec::new(),
        Some(d) => d,
    };
    if degree == 1 {
        let c = poly.coeffs();
        let root = (-(c[0] / c[1])).to_f64();
        if (lo..=hi).contains(&root) {
            return vec![PolyRoot {
                value: root,
                multiplicity: 1,
            }];
        }
        return Vec::new();
    }

    let critical = roots_recursive(&poly.derivative(), lo, hi);
    let mut points = Vec::with_capacity(critical.len() + 2);
    points.push(lo);
    points.extend(critical.iter().map(|r| r.value));
    points.push(hi);
    points.sort_by(f64::total_cmp);
    points.dedup_by(|b, a| (*b - *a).abs() <= merge_tol(*a));

    let signs: Vec<i8> = points.iter().map(|&x| sign_at(poly, x)).collect();
    let mut found: Vec<PolyRoot> = Vec::new();

    // one bisection root per sign change between points of definite
    // sign; points where p sits in the noise are skipped over, so a
    // flat stretch cannot hide an odd root from the bracket
    let definite: Vec<usize> = (0..points.len()).filter(|&i| signs[i] != 0).collect();
    for w in definite.windows(2) {
        let (i, j) = (w[0], w[1]);
        if signs[i] != signs[j] {
            found.push(PolyRoot {
                value: bisect(poly, points[i], points[j], signs[i]),
                multiplicity: 1,
            });
        }
    }

    // critical points where p itself vanishes: multiple roots
    for c in &critical {
        if numerically_zero(poly, S::from_f64(c.value)) {
            found.push(PolyRoot {
                value: c.value,
                multiplicity: c.multiplicity + 1,
            });
        }
    }
    // interval endpoints that happen to be roots
    for (&x, &s) in points.iter().zip(&signs) {
        if s == 0 && !critical.iter().any(|c| (c.value - x).abs() <= merge_tol(x)) {
            found.push(PolyRoot {
                value: x,
                multiplicity: 1,
            });
        }
    }

    found.sort_by(|p, q| p.value.total_cmp(&q.value));
    found.dedup_by(|b, a| {
        if (b.value - a.value).abs() <= merge_tol(a.value) {
            a.multiplicity = a.multiplicity.max(b.multiplicity);
            true
        } else {
            false
        }
    });
    found
}

/// Sign-preserving bisection inside a bracket, run in `S` arithmetic to
/// the representation's limit.
fn bisect<S: Scalar>(poly: &EPolynomial<S>, a: f64, b: f64, sign_a: i8) -> f64 {
    let mut xa = S::from_f64(a);
    let mut xb = S::from_f64(b);
    let half = S::from_f64(0.5);
    for _ in 0..200 {
        let xm = (xa + xb) * half;
        if xm == xa || xm == xb {
            break;
        }
        let width = (xb - xa).abs().to_f64();
        if width <= S::EPSILON * xm.abs().to_f64().max(1e-12) {
            break;
        }
        let sm = poly.eval(xm).signum();
        if sm == 0 {
            return xm.to_f64();
        }
        if sm == sign_a {
            xa = xm;
        } else {
            xb = xm;
        }
    }
    ((xa + xb) * half).to_f64()
}
