//! Sequence acceleration for series whose terms carry a non-root phase on
//! the unit circle.

use crate::error::{Error, Result};
use crate::numerics::{binomial, record_terms, AccelMode, CompensatedSum, ValueWithError};
use num_complex::Complex64;

/// Levin u-transform order ceiling; higher orders lose digits to cancellation.
const LEVIN_MAX_ORDER: usize = 36;
const AITKEN_TERMS: usize = 61;
const RICHARDSON_LEVELS: usize = 6;

/// `L_k` of the Levin u-transform over partial sums `s[0..=k]` with
/// remainder estimates `(β + j)·a_j`, β = 1.
pub fn levin_u(partials: &[Complex64], terms: &[Complex64], k: usize) -> Option<Complex64> {
    if partials.len() <= k || terms.len() <= k {
        return None;
    }
    let beta = 1.0;
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = Complex64::new(0.0, 0.0);
    let last = beta + k as f64;
    for j in 0..=k {
        let omega = terms[j] * (beta + j as f64);
        if omega.norm() == 0.0 {
            return None;
        }
        let w = binomial(k as i64, j as i64)
            * ((beta + j as f64) / last).powi(k as i32 - 1)
            * if j % 2 == 0 { 1.0 } else { -1.0 };
        num += partials[j] * w / omega;
        den += w / omega;
    }
    if den.norm() == 0.0 {
        return None;
    }
    Some(num / den)
}

/// One sweep of Aitken's Δ² over a sequence.
pub fn aitken_step(seq: &[Complex64]) -> Vec<Complex64> {
    seq.windows(3)
        .map(|w| {
            let d2 = w[2] - 2.0 * w[1] + w[0];
            if d2.norm() <= 1e-300 {
                w[2]
            } else {
                let d = w[2] - w[1];
                w[2] - d * d / d2
            }
        })
        .collect()
}

/// Richardson table for values at `N0·2^j`, eliminating `N^{-1}, N^{-2}, …`.
/// Returns the last diagonal entry and the difference to the previous one.
pub fn richardson_integer_ladder(values: &[Complex64]) -> (Complex64, f64) {
    let mut table: Vec<Vec<Complex64>> = vec![values.to_vec()];
    for k in 1..values.len() {
        let prev = &table[k - 1];
        let f = 2f64.powi(k as i32);
        let row: Vec<Complex64> =
            (1..prev.len()).map(|j| (prev[j] * f - prev[j - 1]) / (f - 1.0)).collect();
        table.push(row);
    }
    let best = *table.last().and_then(|r| r.last()).unwrap_or(&Complex64::new(0.0, 0.0));
    let err = if table.len() >= 2 {
        let prev = table[table.len() - 2].last().copied().unwrap_or(best);
        (best - prev).norm()
    } else {
        f64::INFINITY
    };
    (best, err)
}

/// Sums `Σ_{n≥1} term(n)` with the selected accelerator.
///
/// `term` is called with strictly increasing `n`, starting at 1.
pub fn accelerate_series<F>(mut term: F, mode: AccelMode, tol: f64, max_terms: u64) -> Result<ValueWithError>
where
    F: FnMut(u64) -> Complex64,
{
    let outcome = match mode {
        AccelMode::LevinU => {
            let n = (LEVIN_MAX_ORDER + 1) as u64;
            let terms: Vec<Complex64> = (1..=n).map(&mut term).collect();
            let partials = prefix_sums(&terms);
            let mut best: Option<(Complex64, f64)> = None;
            let mut prev: Option<Complex64> = None;
            for k in 2..=LEVIN_MAX_ORDER {
                let Some(v) = levin_u(&partials, &terms, k) else { continue };
                if let Some(p) = prev {
                    let e = (v - p).norm();
                    if best.map_or(true, |(_, be)| e < be) {
                        best = Some((v, e));
                    }
                }
                prev = Some(v);
            }
            let (v, e) = best.unwrap_or((partials[partials.len() - 1], f64::INFINITY));
            (v, e.max(1e-15 * v.norm()), n)
        }
        AccelMode::AitkenIterated => {
            let terms: Vec<Complex64> = (1..=AITKEN_TERMS as u64).map(&mut term).collect();
            let mut seq = prefix_sums(&terms);
            let mut last = seq[seq.len() - 1];
            let mut err = f64::INFINITY;
            while seq.len() >= 3 {
                seq = aitken_step(&seq);
                let v = seq[seq.len() - 1];
                err = (v - last).norm();
                last = v;
            }
            (last, err.max(1e-15 * last.norm()), AITKEN_TERMS as u64)
        }
        AccelMode::RichardsonOnPartialTotals => {
            let top = max_terms.min(1 << 20);
            let n0 = (top >> (RICHARDSON_LEVELS - 1)).max(1);
            let mut sum = CompensatedSum::new();
            let mut values = Vec::new();
            let mut next = n0;
            let mut n = 0u64;
            while values.len() < RICHARDSON_LEVELS {
                n += 1;
                sum.add(term(n));
                if n == next {
                    values.push(sum.value());
                    next *= 2;
                }
            }
            let (v, e) = richardson_integer_ladder(&values);
            (v, e, n)
        }
        AccelMode::None => {
            let mut sum = CompensatedSum::new();
            let mut last = Complex64::new(0.0, 0.0);
            let mut n = 0u64;
            while n < max_terms {
                n += 1;
                last = term(n);
                sum.add(last);
                if last.norm() * (n as f64) < tol * 1e-2 {
                    break;
                }
            }
            (sum.value(), last.norm() * n as f64, n)
        }
    };
    record_terms(outcome.2);
    let (value, err, used) = outcome;
    let v = ValueWithError { value, abs_err: err, terms_used: used, accelerated: mode != AccelMode::None };
    if !(err <= tol) {
        return Err(Error::Convergence {
            message: format!("{mode} acceleration reached only {err:.3e} (tolerance {tol:.1e})"),
            best: v,
        });
    }
    Ok(v)
}

fn prefix_sums(terms: &[Complex64]) -> Vec<Complex64> {
    let mut s = CompensatedSum::new();
    terms
        .iter()
        .map(|t| {
            s.add(*t);
            s.value()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levin_alternating_log2() {
        let v = accelerate_series(
            |n| Complex64::new(if n % 2 == 1 { 1.0 } else { -1.0 } / n as f64, 0.0),
            AccelMode::LevinU,
            1e-10,
            1000,
        )
        .unwrap();
        assert!((v.value.re - std::f64::consts::LN_2).abs() < 1e-12);
        assert!(v.accelerated);
    }

    #[test]
    fn aitken_alternating_eta2() {
        let v = accelerate_series(
            |n| Complex64::new(if n % 2 == 1 { 1.0 } else { -1.0 } / (n * n) as f64, 0.0),
            AccelMode::AitkenIterated,
            1e-8,
            1000,
        )
        .unwrap();
        let eta2 = std::f64::consts::PI.powi(2) / 12.0;
        assert!((v.value.re - eta2).abs() < 1e-9);
    }

    #[test]
    fn richardson_smooth_tail() {
        let v = accelerate_series(
            |n| Complex64::new(1.0 / (n * n) as f64, 0.0),
            AccelMode::RichardsonOnPartialTotals,
            1e-8,
            1 << 14,
        )
        .unwrap();
        let z2 = std::f64::consts::PI.powi(2) / 6.0;
        assert!((v.value.re - z2).abs() < 1e-9);
    }

    #[test]
    fn unaccelerated_failure_carries_estimate() {
        let r = accelerate_series(
            |n| Complex64::new(1.0 / n as f64, 0.0) * Complex64::from_polar(1.0, n as f64),
            AccelMode::None,
            1e-12,
            100,
        );
        match r {
            Err(Error::Convergence { best, .. }) => assert_eq!(best.terms_used, 100),
            other => panic!("expected convergence failure, got {other:?}"),
        }
    }
}
