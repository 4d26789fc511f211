use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

/// A complex value with an absolute error bound.
///
/// Arithmetic propagates bounds to first order plus the product of errors,
/// which keeps them conservative for the short combinations used by identity
/// right-hand sides.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValueWithError {
    pub value: Complex64,
    pub abs_err: f64,
    pub terms_used: u64,
    pub accelerated: bool,
}

impl ValueWithError {
    pub fn new(value: Complex64, abs_err: f64, terms_used: u64) -> Self {
        ValueWithError { value, abs_err, terms_used, accelerated: false }
    }

    /// An exactly known value.
    pub fn exact(value: Complex64) -> Self {
        ValueWithError { value, abs_err: 0.0, terms_used: 0, accelerated: false }
    }

    pub fn real(x: f64) -> Self {
        Self::exact(Complex64::new(x, 0.0))
    }

    pub fn zero() -> Self {
        Self::real(0.0)
    }

    pub fn with_accelerated(mut self, flag: bool) -> Self {
        self.accelerated = flag;
        self
    }

    pub fn scale(self, c: f64) -> Self {
        self * Complex64::new(c, 0.0)
    }

    pub fn conj(self) -> Self {
        ValueWithError { value: self.value.conj(), ..self }
    }

    pub fn powu(self, k: u32) -> Self {
        (0..k).fold(Self::real(1.0), |acc, _| acc * self)
    }
}

impl Add for ValueWithError {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        ValueWithError {
            value: self.value + o.value,
            abs_err: self.abs_err + o.abs_err,
            terms_used: self.terms_used + o.terms_used,
            accelerated: self.accelerated || o.accelerated,
        }
    }
}

impl Sub for ValueWithError {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for ValueWithError {
    type Output = Self;
    fn neg(self) -> Self {
        ValueWithError { value: -self.value, ..self }
    }
}

impl Mul for ValueWithError {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        ValueWithError {
            value: self.value * o.value,
            abs_err: self.value.norm() * o.abs_err
                + o.value.norm() * self.abs_err
                + self.abs_err * o.abs_err,
            terms_used: self.terms_used + o.terms_used,
            accelerated: self.accelerated || o.accelerated,
        }
    }
}

impl Mul<Complex64> for ValueWithError {
    type Output = Self;
    fn mul(self, c: Complex64) -> Self {
        ValueWithError { value: self.value * c, abs_err: self.abs_err * c.norm(), ..self }
    }
}

impl Mul<f64> for ValueWithError {
    type Output = Self;
    fn mul(self, c: f64) -> Self {
        self.scale_real(c)
    }
}

impl ValueWithError {
    fn scale_real(self, c: f64) -> Self {
        ValueWithError { value: self.value * c, abs_err: self.abs_err * c.abs(), ..self }
    }
}

impl std::iter::Sum for ValueWithError {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}
