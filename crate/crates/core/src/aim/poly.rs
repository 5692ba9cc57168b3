//! Dense polynomials in the energy variable with exact power-of-two
//! normalization.
//!
//! Iterated seed expansions blow through the f64 range after a few dozen
//! levels, so every polynomial carries a `scale_exponent`: the value it
//! represents is `2^scale_exponent · Σ c_k E^k` with max |c_k| kept in
//! [0.5, 1). Rescaling is exact, so no root moves and no precision is
//! spent on it.

use super::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct EPolynomial<S: Scalar> {
    /// Coefficient of E^k at index k; empty means the zero polynomial.
    coeffs: Vec<S>,
    scale_exponent: i64,
}

/// A number in the form `mantissa · 2^exp`, used for values whose
/// magnitude may leave the f64 range.
#[derive(Debug, Clone, Copy)]
pub struct ScaledValue<S: Scalar> {
    pub mantissa: S,
    pub exp: i64,
}

impl<S: Scalar> ScaledValue<S> {
    pub fn zero() -> Self {
        Self {
            mantissa: S::ZERO,
            exp: 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == S::ZERO
    }

    /// Sign as -1, 0, +1.
    pub fn signum(&self) -> i8 {
        if self.mantissa == S::ZERO {
            0
        } else if self.mantissa < S::ZERO {
            -1
        } else {
            1
        }
    }

    /// log2 of the magnitude; -inf for zero.
    pub fn log2_abs(&self) -> f64 {
        match self.mantissa.exponent() {
            None => f64::NEG_INFINITY,
            Some(e) => self.exp as f64 + e as f64 + self.mantissa.abs().ldexp(-e).to_f64().log2(),
        }
    }

    /// Collapse to f64, saturating out-of-range exponents.
    pub fn to_f64(&self) -> f64 {
        let clamped = self.exp.clamp(-2000, 2000) as i32;
        self.mantissa.ldexp(clamped).to_f64()
    }
}

impl<S: Scalar> EPolynomial<S> {
    pub fn zero() -> Self {
        Self {
            coeffs: Vec::new(),
            scale_exponent: 0,
        }
    }

    pub fn constant(value: f64) -> Self {
        Self::from_f64_coeffs(&[value])
    }

    /// Build from f64 coefficients (index = power of E).
    pub fn from_f64_coeffs(coeffs: &[f64]) -> Self {
        let mut p = Self {
            coeffs: coeffs.iter().map(|&c| S::from_f64(c)).collect(),
            scale_exponent: 0,
        };
        p.normalize();
        p
    }

    pub fn from_parts(coeffs: Vec<S>, scale_exponent: i64) -> Self {
        let mut p = Self {
            coeffs,
            scale_exponent,
        };
        p.normalize();
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn scale_exponent(&self) -> i64 {
        self.scale_exponent
    }

    /// Coefficient of E^k as an f64 together with the scale exponent.
    pub fn coeff_scaled(&self, k: usize) -> ScaledValue<S> {
        ScaledValue {
            mantissa: self.coeffs.get(k).copied().unwrap_or(S::ZERO),
            exp: self.scale_exponent,
        }
    }

    /// Trim trailing zeros and renormalize so max |c_k| ∈ [0.5, 1).
    fn normalize(&mut self) {
        while matches!(self.coeffs.last(), Some(&c) if c == S::ZERO) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.scale_exponent = 0;
            return;
        }
        let max_exp = self
            .coeffs
            .iter()
            .filter_map(|c| c.exponent())
            .max()
            .expect("nonzero polynomial has a nonzero coefficient");
        if max_exp != 0 {
            for c in &mut self.coeffs {
                *c = c.ldexp(-max_exp);
            }
            self.scale_exponent += max_exp as i64;
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let exp = self.scale_exponent.max(other.scale_exponent);
        let shift_a = (self.scale_exponent - exp).clamp(-4000, 0) as i32;
        let shift_b = (other.scale_exponent - exp).clamp(-4000, 0) as i32;
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(len);
        for k in 0..len {
            let a = self
                .coeffs
                .get(k)
                .map_or(S::ZERO, |c| c.ldexp(shift_a));
            let b = other
                .coeffs
                .get(k)
                .map_or(S::ZERO, |c| c.ldexp(shift_b));
            coeffs.push(a + b);
        }
        Self::from_parts(coeffs, exp)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale_by(-S::ONE))
    }

    pub fn scale_by(&self, factor: S) -> Self {
        if factor == S::ZERO {
            return Self::zero();
        }
        Self::from_parts(
            self.coeffs.iter().map(|&c| c * factor).collect(),
            self.scale_exponent,
        )
    }

    pub fn scale_f64(&self, factor: f64) -> Self {
        self.scale_by(S::from_f64(factor))
    }

    /// Multiply by the affine factor `b0 + b1·E`.
    pub fn mul_affine(&self, b0: f64, b1: f64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let b0 = S::from_f64(b0);
        let b1 = S::from_f64(b1);
        let mut coeffs = vec![S::ZERO; self.coeffs.len() + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            coeffs[k] = coeffs[k] + c * b0;
            coeffs[k + 1] = coeffs[k + 1] + c * b1;
        }
        Self::from_parts(coeffs, self.scale_exponent)
    }

    /// Full product (schoolbook convolution).
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![S::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j] + a * b;
            }
        }
        Self::from_parts(coeffs, self.scale_exponent + other.scale_exponent)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * S::from_f64(k as f64))
            .collect();
        Self::from_parts(coeffs, self.scale_exponent)
    }

    /// Drop every coefficient above `max_degree`. Determinants of seed
    /// expansions have a known true degree; what floating arithmetic
    /// leaves above it is cancellation dust, not signal.
    pub fn truncated(&self, max_degree: usize) -> Self {
        if self.coeffs.len() <= max_degree + 1 {
            return self.clone();
        }
        Self::from_parts(
            self.coeffs[..=max_degree].to_vec(),
            self.scale_exponent,
        )
    }

    /// Horner evaluation with per-step renormalization, so arbitrarily
    /// high degrees never leave the representable range.
    pub fn eval(&self, x: S) -> ScaledValue<S> {
        self.eval_impl(x, false)
    }

    /// Evaluate Σ |c_k| |x|^k, an upper scale for evaluation noise.
    pub fn eval_abs(&self, x: S) -> ScaledValue<S> {
        self.eval_impl(x, true)
    }

    fn eval_impl(&self, x: S, absolute: bool) -> ScaledValue<S> {
        if self.is_zero() {
            return ScaledValue::zero();
        }
        let x = if absolute { x.abs() } else { x };
        let mut acc = S::ZERO;
        let mut acc_exp: i64 = 0;
        for &raw in self.coeffs.iter().rev() {
            let c = if absolute { raw.abs() } else { raw };
            acc = acc * x;
            match acc.exponent() {
                Some(e) => {
                    acc = acc.ldexp(-e);
                    acc_exp += e as i64;
                }
                None => acc_exp = 0,
            }
            if c != S::ZERO {
                // bring the coefficient into the accumulator's frame
                let shift = -acc_exp;
                if shift >= 1000 {
                    // the running sum is negligible next to c
                    acc = c;
                    acc_exp = 0;
                } else if shift > -1060 {
                    acc = acc + c.ldexp(shift as i32);
                }
                // shift <= -1060: c is negligible next to the sum
            }
        }
        ScaledValue {
            mantissa: acc,
            exp: acc_exp + self.scale_exponent,
        }
    }
}
