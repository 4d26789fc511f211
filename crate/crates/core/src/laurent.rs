//! Truncated Laurent series around a fixed center.
//!
//! A series knows its coefficients on `[min_order, trunc_order]`. Orders
//! below `min_order` are zero; orders above `trunc_order` are unknown and
//! reading them is an error.

use crate::error::{Error, Result};
use crate::numerics::binomial;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaurentSeries {
    center: Complex64,
    min_order: i64,
    coeffs: Vec<Complex64>,
}

impl LaurentSeries {
    /// `Σ coeffs[i]·(s − center)^{min_order + i}`.
    pub fn new(center: Complex64, min_order: i64, coeffs: Vec<Complex64>) -> Self {
        LaurentSeries { center, min_order, coeffs }
    }

    /// `(s − center)^order`, known through `order + terms − 1`.
    pub fn monomial(center: Complex64, order: i64, terms: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); terms];
        if terms > 0 {
            coeffs[0] = Complex64::new(1.0, 0.0);
        }
        LaurentSeries { center, min_order: order, coeffs }
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    pub fn min_order(&self) -> i64 {
        self.min_order
    }

    pub fn trunc_order(&self) -> i64 {
        self.min_order + self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Evaluates the known window at a point.
    pub fn eval(&self, s: Complex64) -> Complex64 {
        let h = s - self.center;
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * h + c;
        }
        acc * h.powi(self.min_order as i32)
    }
}

fn same_center(a: &LaurentSeries, b: &LaurentSeries) -> Result<()> {
    if a.center != b.center {
        return Err(Error::CenterMismatch(a.center.to_string(), b.center.to_string()));
    }
    Ok(())
}

/// Coefficient-wise sum; known through the smaller truncation order.
pub fn ls_add(a: &LaurentSeries, b: &LaurentSeries) -> Result<LaurentSeries> {
    same_center(a, b)?;
    let lo = a.min_order.min(b.min_order);
    let hi = a.trunc_order().min(b.trunc_order());
    let coeffs = (lo..=hi)
        .map(|k| coeff_or_zero(a, k) + coeff_or_zero(b, k))
        .collect();
    Ok(LaurentSeries::new(a.center, lo, coeffs))
}

pub fn ls_scale(c: Complex64, a: &LaurentSeries) -> LaurentSeries {
    LaurentSeries::new(a.center, a.min_order, a.coeffs.iter().map(|x| x * c).collect())
}

fn coeff_or_zero(a: &LaurentSeries, k: i64) -> Complex64 {
    if k < a.min_order || k > a.trunc_order() {
        Complex64::new(0.0, 0.0)
    } else {
        a.coeffs[(k - a.min_order) as usize]
    }
}

/// Cauchy product on the guaranteed window
/// `[a.min + b.min, min(a.min + b.trunc, a.trunc + b.min)]`.
pub fn ls_mul(a: &LaurentSeries, b: &LaurentSeries) -> Result<LaurentSeries> {
    same_center(a, b)?;
    let lo = a.min_order + b.min_order;
    let hi = (a.min_order + b.trunc_order()).min(a.trunc_order() + b.min_order);
    let mut coeffs = Vec::with_capacity((hi - lo + 1).max(0) as usize);
    for k in lo..=hi {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, ai) in a.coeffs.iter().enumerate() {
            let j = k - a.min_order - i as i64 - b.min_order;
            if j < 0 {
                break;
            }
            if let Some(bj) = b.coeffs.get(j as usize) {
                acc += ai * bj;
            }
        }
        coeffs.push(acc);
    }
    Ok(LaurentSeries::new(a.center, lo, coeffs))
}

/// Coefficient of `(s − center)^k`; zero below the window, an error above it.
pub fn ls_coeff(a: &LaurentSeries, k: i64) -> Result<Complex64> {
    if k > a.trunc_order() {
        return Err(Error::UnknownCoefficient {
            order: k,
            min_order: a.min_order,
            trunc_order: a.trunc_order(),
        });
    }
    Ok(coeff_or_zero(a, k))
}

pub fn ls_residue(a: &LaurentSeries) -> Result<Complex64> {
    ls_coeff(a, -1)
}

/// Taylor expansion of `s^{-q}` at `a ≠ 0`:
/// `Σ_k C(k+q−1, q−1)(−1)^k a^{−q−k}(s−a)^k`, `terms` coefficients.
pub fn pole_shift_binomial(q: u32, a: Complex64, terms: usize) -> Result<LaurentSeries> {
    if a.norm() == 0.0 {
        return Err(Error::Domain("pole_shift_binomial needs a nonzero center".into()));
    }
    let inv = a.inv();
    let mut pw = inv.powi(q as i32);
    let mut coeffs = Vec::with_capacity(terms);
    for k in 0..terms {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        coeffs.push(pw * (sign * binomial(k as i64 + q as i64 - 1, q as i64 - 1)));
        pw *= inv;
    }
    Ok(LaurentSeries::new(a, 0, coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn zero() -> Complex64 {
        c(0.0)
    }

    #[test]
    fn add_and_scale() {
        let a = LaurentSeries::new(zero(), -1, vec![c(1.0), c(1.0)]);
        let b = LaurentSeries::new(zero(), -1, vec![c(-1.0), c(0.0)]);
        let s = ls_add(&a, &b).unwrap();
        assert_eq!(ls_coeff(&s, -1).unwrap(), zero());
        assert_eq!(ls_coeff(&s, 0).unwrap(), c(1.0));
        let z = ls_scale(zero(), &a);
        assert_eq!((z.min_order(), z.trunc_order()), (a.min_order(), a.trunc_order()));
        assert!(z.coeffs().iter().all(|x| *x == zero()));
        // Disjoint windows: known through the smaller truncation.
        let lo = LaurentSeries::new(zero(), -3, vec![c(1.0)]);
        let hi = LaurentSeries::new(zero(), 0, vec![c(1.0), c(2.0)]);
        let s = ls_add(&lo, &hi).unwrap();
        assert_eq!((s.min_order(), s.trunc_order()), (-3, -3));
        let other = LaurentSeries::new(c(1.0), 0, vec![c(1.0)]);
        assert!(matches!(ls_add(&a, &other), Err(Error::CenterMismatch(..))));
    }

    #[test]
    fn multiplication() {
        let inv = LaurentSeries::new(zero(), -1, vec![c(1.0), c(0.0), c(0.0)]);
        let sq = ls_mul(&inv, &inv).unwrap();
        assert_eq!(ls_coeff(&sq, -2).unwrap(), c(1.0));
        assert_eq!(ls_residue(&sq).unwrap(), zero());
        let a = LaurentSeries::new(zero(), -1, vec![c(1.0), c(1.0), c(0.0)]);
        let b = LaurentSeries::new(zero(), -1, vec![c(1.0), c(-1.0), c(0.0)]);
        let p = ls_mul(&a, &b).unwrap();
        assert_eq!(ls_coeff(&p, -2).unwrap(), c(1.0));
        assert_eq!(ls_residue(&p).unwrap(), zero());
        assert_eq!(ls_coeff(&p, 0).unwrap(), c(-1.0));
        assert_eq!(p.trunc_order(), 0);
    }

    #[test]
    fn residue_and_window() {
        let a = LaurentSeries::new(zero(), -2, vec![c(1.0), c(3.0), c(2.0)]);
        assert_eq!(ls_residue(&a).unwrap(), c(3.0));
        let analytic = LaurentSeries::new(zero(), 0, vec![c(5.0)]);
        assert_eq!(ls_residue(&analytic).unwrap(), zero());
        assert!(matches!(ls_coeff(&a, 1), Err(Error::UnknownCoefficient { .. })));
    }

    #[test]
    fn binomial_shift() {
        let s = pole_shift_binomial(1, c(1.0), 3).unwrap();
        assert_eq!(s.coeffs(), &[c(1.0), c(-1.0), c(1.0)]);
        let s = pole_shift_binomial(2, c(-1.0), 2).unwrap();
        assert_eq!(s.coeffs(), &[c(1.0), c(2.0)]);
        assert!(pole_shift_binomial(2, zero(), 2).is_err());
        let a = Complex64::new(-3.0, 0.0);
        let s = pole_shift_binomial(3, a, 12).unwrap();
        let pt = a + 0.1;
        assert!((s.eval(pt) - pt.powi(-3)).norm() < 1e-14);
    }
}
