//! Tail engine for nested sums whose twists are roots of unity.
//!
//! Partial sums `A(n) = Σ_{m≤n} g(m)` of terms `g(m) = Σ c·zᵐ(ln m)^a m^{-s}`
//! are written as `A(n) = C + P(n)`, where `P` is an explicit asymptotic
//! expansion: Euler–Maclaurin for `z = 1`, and for `z ≠ 1` the Abel-summed
//! shift `−zⁿ Σ_k f^{(k)}(n)/k!·Li_{-k}(z)`. The constant `C` is fixed by one
//! exact partial sum at a large `N`, then recomputed at `3N/2` for an error
//! estimate. Interior (`|x| < 1`) twists contribute only geometrically small
//! corrections beyond `N` and are dropped from the expansions.

use crate::error::{Error, Result};
use crate::numerics::{
    bernoulli_even, factorial, neg_polylog, record_terms, stirling2_table, unit_point,
    CompensatedSum, RootOfUnity,
};
use crate::polylog::PowerIter;
use crate::numerics::Twist;
use num_complex::Complex64;
use std::collections::{BTreeMap, HashMap};

/// Orders of `1/n` kept beyond the weight of the sum.
const EXTRA_ORDERS: u32 = 16;
const BASE_TERMS: u64 = 2000;
const GEOMETRIC_EPS: f64 = 1e-18;

/// An argument the engine can expand.
#[derive(Clone, Copy, Debug)]
pub(crate) enum EngineArg {
    Root(RootOfUnity),
    Interior(Complex64),
}

impl EngineArg {
    /// Classifies a twist; `None` for points the engine cannot expand
    /// (non-root points on the circle, exterior points).
    pub(crate) fn classify(t: &Twist) -> Option<EngineArg> {
        match t.snapped() {
            Twist::Exact(r) => Some(EngineArg::Root(r)),
            Twist::Approx(z) if z.norm() < 1.0 - crate::numerics::DISK_TOL => Some(EngineArg::Interior(z)),
            Twist::Approx(_) => None,
        }
    }

    fn twist(&self) -> Twist {
        match self {
            EngineArg::Root(r) => Twist::Exact(*r),
            EngineArg::Interior(z) => Twist::Approx(*z),
        }
    }
}

/// Result of an engine run.
#[derive(Clone, Copy, Debug)]
pub(crate) struct EngineOutcome {
    pub value: Complex64,
    pub abs_err: f64,
    pub terms: u64,
}

type Key = (RootOfUnity, u32);

/// `Σ_{(z,s)} zⁿ n^{-s} Σ_a c_a (ln n)^a`.
#[derive(Clone, Debug, Default)]
struct Expansion {
    terms: BTreeMap<Key, Vec<Complex64>>,
}

fn poly_add(dst: &mut Vec<Complex64>, a: usize, c: Complex64) {
    if dst.len() <= a {
        dst.resize(a + 1, Complex64::new(0.0, 0.0));
    }
    dst[a] += c;
}

/// Derivative of `Σ c_a (ln t)^a t^{-s}`, as a polynomial at exponent `s+1`.
fn poly_derivative(poly: &[Complex64], s: u32) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); poly.len()];
    for a in 0..poly.len() {
        out[a] -= poly[a] * s as f64;
        if a > 0 {
            out[a - 1] += poly[a] * a as f64;
        }
    }
    out
}

struct Ctx {
    cap: u32,
    stirling: Vec<Vec<f64>>,
    neg_li: HashMap<RootOfUnity, Vec<Complex64>>,
}

impl Ctx {
    fn new(cap: u32) -> Self {
        Ctx { cap, stirling: stirling2_table(cap as usize + 3), neg_li: HashMap::new() }
    }

    fn neg_li(&mut self, z: RootOfUnity, k: usize) -> Complex64 {
        let cap = self.cap as usize;
        let st = &self.stirling;
        let v = self.neg_li.entry(z).or_insert_with(|| {
            let zv = z.complex_value();
            (0..=cap + 1).map(|k| neg_polylog(k, zv, st)).collect()
        });
        v[k]
    }
}

impl Expansion {
    fn constant(c: Complex64) -> Self {
        let mut e = Expansion::default();
        e.add(RootOfUnity::ONE, 0, 0, c);
        e
    }

    fn add(&mut self, z: RootOfUnity, s: u32, a: usize, c: Complex64) {
        poly_add(self.terms.entry((z, s)).or_default(), a, c);
    }

    fn add_scaled(&mut self, other: &Expansion, f: Complex64) {
        for (&(z, s), poly) in &other.terms {
            for (a, c) in poly.iter().enumerate() {
                self.add(z, s, a, c * f);
            }
        }
    }

    fn mul(&self, other: &Expansion, cap: u32) -> Expansion {
        let mut out = Expansion::default();
        for (&(z1, s1), p1) in &self.terms {
            for (&(z2, s2), p2) in &other.terms {
                let s = s1 + s2;
                if s > cap {
                    continue;
                }
                let z = z1.mul(&z2);
                for (a1, c1) in p1.iter().enumerate() {
                    for (a2, c2) in p2.iter().enumerate() {
                        out.add(z, s, a1 + a2, c1 * c2);
                    }
                }
            }
        }
        out
    }

    /// Multiplies by `zⁿ n^{-k}`.
    fn twisted(&self, z: RootOfUnity, k: u32, cap: u32) -> Expansion {
        let mut out = Expansion::default();
        for (&(z1, s1), p) in &self.terms {
            if s1 + k > cap {
                continue;
            }
            for (a, c) in p.iter().enumerate() {
                out.add(z1.mul(&z), s1 + k, a, *c);
            }
        }
        out
    }

    fn eval(&self, n: u64) -> Complex64 {
        let ln = (n as f64).ln();
        let mut sum = CompensatedSum::new();
        for (&(z, s), poly) in &self.terms {
            let zn = unit_point((z.numer() as u128 * n as u128 % z.order() as u128) as u64, z.order());
            let mut lp = 1.0;
            let mut acc = Complex64::new(0.0, 0.0);
            for c in poly {
                acc += c * lp;
                lp *= ln;
            }
            sum.add(zn * acc * (n as f64).powi(-(s as i32)));
        }
        sum.value()
    }

    /// True when no term fails to decay (`z = 1`, `s = 0`, nonzero).
    fn decays(&self) -> bool {
        self.terms
            .iter()
            .filter(|((z, s), _)| z.is_one() && *s == 0)
            .all(|(_, p)| p.iter().all(|c| c.norm() == 0.0))
    }

    /// The non-constant part `P` of `Σ_{m≤n}` of this summand expansion.
    fn partial_sum(&self, ctx: &mut Ctx) -> Expansion {
        let cap = ctx.cap;
        let mut out = Expansion::default();
        for (&(z, s), poly) in &self.terms {
            if z.is_one() {
                assert!(s >= 1, "summand with a non-decaying z = 1 term");
                // Antiderivative.
                for (a, c) in poly.iter().enumerate() {
                    if s == 1 {
                        out.add(z, 0, a + 1, c / (a + 1) as f64);
                    } else {
                        let one_minus_s = 1.0 - s as f64;
                        let mut ff = 1.0;
                        for j in 0..=a {
                            if j > 0 {
                                ff *= (a - j + 1) as f64;
                            }
                            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                            out.add(z, s - 1, a - j, c * (sign * ff / one_minus_s.powi(j as i32 + 1)));
                        }
                    }
                }
                // f(n)/2.
                for (a, c) in poly.iter().enumerate() {
                    out.add(z, s, a, c * 0.5);
                }
                // Σ B_{2j}/(2j)! f^{(2j-1)}(n).
                let mut d = poly.to_vec();
                let mut order = s;
                for k in 1..=(cap.saturating_sub(s) as usize) {
                    d = poly_derivative(&d, order);
                    order += 1;
                    if k % 2 == 1 {
                        let j = (k + 1) / 2;
                        if j > 15 {
                            break;
                        }
                        let b = bernoulli_even(j) / factorial(2 * j as u32);
                        for (a, c) in d.iter().enumerate() {
                            out.add(z, order, a, c * b);
                        }
                    }
                }
            } else {
                let mut d = poly.to_vec();
                let mut order = s;
                let mut kfact = 1.0;
                for k in 0..=(cap.saturating_sub(s) as usize) {
                    if k > 0 {
                        d = poly_derivative(&d, order);
                        order += 1;
                        kfact *= k as f64;
                    }
                    let w = -ctx.neg_li(z, k) / kfact;
                    for (a, c) in d.iter().enumerate() {
                        out.add(z, order, a, c * w);
                    }
                }
            }
        }
        out
    }
}

/// Truncation points `(N, 3N/2)` for the given arguments, or an error if the
/// geometric part needs more than `max_terms`.
fn truncation(args: &[EngineArg], max_terms: u64) -> Result<(u64, u64)> {
    let mut l = 1u64;
    let mut rho: f64 = 0.0;
    for a in args {
        match a {
            EngineArg::Root(r) => l = crate::numerics::lcm(l, r.order()),
            EngineArg::Interior(z) => rho = rho.max(z.norm()),
        }
    }
    let mut n1 = BASE_TERMS.max(40 * l);
    if rho > 0.0 {
        let geo = (GEOMETRIC_EPS.ln() / rho.ln()).ceil() as u64 + 16;
        n1 = n1.max(geo);
    }
    let n2 = n1 + n1 / 2;
    if n2 > max_terms {
        return Err(Error::Convergence {
            message: format!("tail engine needs {n2} terms, budget {max_terms}"),
            best: crate::numerics::ValueWithError::new(Complex64::new(f64::NAN, f64::NAN), f64::INFINITY, 0),
        });
    }
    Ok((n1, n2))
}

fn outcome(c1: Complex64, c2: Complex64, scale: f64, terms: u64) -> EngineOutcome {
    let err = 2.0 * (c2 - c1).norm() + 2e-15 * scale.max(1.0);
    EngineOutcome { value: c2, abs_err: err, terms }
}

/// `Li_{k₁,…,k_r}(x₁,…,x_r)` over `0 < n₁ < ⋯ < n_r`.
pub(crate) fn nested_mpl(k: &[u32], x: &[EngineArg], max_terms: u64) -> Result<EngineOutcome> {
    let r = k.len();
    let (n1, n2) = truncation(x, max_terms)?;
    let mut powers: Vec<PowerIter> = x.iter().map(|a| PowerIter::new(&a.twist())).collect();
    let mut sums = vec![CompensatedSum::new(); r + 1];
    let mut vals = vec![Complex64::new(0.0, 0.0); r + 1];
    vals[0] = Complex64::new(1.0, 0.0);
    let mut snap1 = Vec::new();
    let mut scale = 0.0f64;
    for m in 1..=n2 {
        let mf = m as f64;
        let pw: Vec<Complex64> = powers.iter_mut().map(|p| p.next_power()).collect();
        for j in (1..=r).rev() {
            let t = pw[j - 1] * mf.powi(-(k[j - 1] as i32)) * vals[j - 1];
            sums[j].add(t);
            vals[j] = sums[j].value();
        }
        if m == n1 {
            snap1 = vals.clone();
        }
    }
    for v in &vals {
        scale = scale.max(v.norm());
    }
    record_terms(n2 * r as u64);
    let cap = k.iter().sum::<u32>() + EXTRA_ORDERS;
    let c1 = mpl_constant(k, x, &snap1, n1, cap)?;
    let c2 = mpl_constant(k, x, &vals, n2, cap)?;
    Ok(outcome(c1, c2, scale, n2 * r as u64))
}

fn mpl_constant(k: &[u32], x: &[EngineArg], partial: &[Complex64], n: u64, cap: u32) -> Result<Complex64> {
    let mut ctx = Ctx::new(cap);
    let mut ea = Expansion::constant(Complex64::new(1.0, 0.0));
    let mut eg = Expansion::default();
    let mut c = Complex64::new(0.0, 0.0);
    let mut p = Expansion::default();
    for j in 0..k.len() {
        match x[j] {
            EngineArg::Root(z) => {
                let mut inner = ea.clone();
                inner.add_scaled(&eg, Complex64::new(-1.0, 0.0));
                let summand = inner.twisted(z, k[j], cap);
                p = summand.partial_sum(&mut ctx);
                c = partial[j + 1] - p.eval(n);
                ea = p.clone();
                ea.add(RootOfUnity::ONE, 0, 0, c);
                eg = summand;
            }
            EngineArg::Interior(_) => {
                c = partial[j + 1];
                p = Expansion::default();
                ea = Expansion::constant(c);
                eg = Expansion::default();
            }
        }
    }
    if !p.decays() {
        return Err(Error::Divergent("nested sum has a logarithmically growing tail".into()));
    }
    Ok(c)
}

/// `Σ_n xⁿ n^{-q} Π_j ζₙ(p_j; x_j)`.
pub(crate) fn euler_sum(p: &[u32], xs: &[EngineArg], q: u32, outer: EngineArg, max_terms: u64) -> Result<EngineOutcome> {
    let mut all: Vec<EngineArg> = xs.to_vec();
    all.push(outer);
    let (n1, n2) = truncation(&all, max_terms)?;
    let kf = xs.len();
    let mut powers: Vec<PowerIter> = all.iter().map(|a| PowerIter::new(&a.twist())).collect();
    let mut factors = vec![CompensatedSum::new(); kf];
    let mut total = CompensatedSum::new();
    let mut snap1: (Vec<Complex64>, Complex64) = (Vec::new(), Complex64::new(0.0, 0.0));
    let mut scale = 0.0f64;
    for n in 1..=n2 {
        let nf = n as f64;
        let mut prod = Complex64::new(1.0, 0.0);
        for j in 0..kf {
            let t = powers[j].next_power() * nf.powi(-(p[j] as i32));
            factors[j].add(t);
            prod *= factors[j].value();
        }
        let xo = powers[kf].next_power();
        total.add(xo * prod * nf.powi(-(q as i32)));
        if n == n1 {
            snap1 = (factors.iter().map(|f| f.value()).collect(), total.value());
        }
    }
    let fin: Vec<Complex64> = factors.iter().map(|f| f.value()).collect();
    for f in &fin {
        scale = scale.max(f.norm());
    }
    scale = scale.max(total.value().norm());
    let terms = n2 * (kf as u64 + 1);
    record_terms(terms);
    let cap = p.iter().sum::<u32>() + q + EXTRA_ORDERS;
    let c1 = euler_constant(p, xs, q, outer, &snap1.0, snap1.1, n1, cap)?;
    let c2 = euler_constant(p, xs, q, outer, &fin, total.value(), n2, cap)?;
    Ok(outcome(c1, c2, scale, terms))
}

#[allow(clippy::too_many_arguments)]
fn euler_constant(
    p: &[u32],
    xs: &[EngineArg],
    q: u32,
    outer: EngineArg,
    factors: &[Complex64],
    total: Complex64,
    n: u64,
    cap: u32,
) -> Result<Complex64> {
    let z = match outer {
        EngineArg::Interior(_) => return Ok(total),
        EngineArg::Root(z) => z,
    };
    let mut ctx = Ctx::new(cap);
    let mut prod = Expansion::constant(Complex64::new(1.0, 0.0));
    for (j, a) in xs.iter().enumerate() {
        let e = match a {
            EngineArg::Root(r) => {
                let mut e = Expansion::constant(Complex64::new(1.0, 0.0)).twisted(*r, p[j], cap).partial_sum(&mut ctx);
                let c = factors[j] - e.eval(n);
                e.add(RootOfUnity::ONE, 0, 0, c);
                e
            }
            EngineArg::Interior(_) => Expansion::constant(factors[j]),
        };
        prod = prod.mul(&e, cap);
    }
    let summand = prod.twisted(z, q, cap);
    let pe = summand.partial_sum(&mut ctx);
    if !pe.decays() {
        return Err(Error::Divergent("Euler sum has a logarithmically growing tail".into()));
    }
    Ok(total - pe.eval(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::root_of_unity;
    use std::f64::consts::PI;

    fn root(a: i64, n: u64) -> EngineArg {
        EngineArg::Root(root_of_unity(a, n).unwrap())
    }

    #[test]
    fn depth_one_values() {
        let v = nested_mpl(&[2], &[root(0, 1)], 1 << 30).unwrap();
        assert!((v.value.re - PI * PI / 6.0).abs() < 1e-14, "{}", v.value.re - PI * PI / 6.0);
        assert!(v.abs_err < 1e-13);
        let v = nested_mpl(&[1], &[root(1, 2)], 1 << 30).unwrap();
        assert!((v.value.re + std::f64::consts::LN_2).abs() < 1e-14);
        let v = nested_mpl(&[3], &[root(1, 4)], 1 << 30).unwrap();
        // Im Li_3(i) = β(3) = π³/32.
        assert!((v.value.im - PI.powi(3) / 32.0).abs() < 1e-14);
    }

    #[test]
    fn classical_euler_sums() {
        let one = root(0, 1);
        let z3 = 1.2020569031595942;
        let v = euler_sum(&[1], &[one], 2, one, 1 << 30).unwrap();
        assert!((v.value.re - 2.0 * z3).abs() < 1e-13, "{}", v.value.re - 2.0 * z3);
        let v = euler_sum(&[1], &[one], 3, one, 1 << 30).unwrap();
        assert!((v.value.re - PI.powi(4) / 72.0).abs() < 1e-13);
        // S_{1,1;2}(1,1;1) = Σ H_n²/n² = 17π⁴/360.
        let v = euler_sum(&[1, 1], &[one, one], 2, one, 1 << 30).unwrap();
        assert!((v.value.re - 17.0 * PI.powi(4) / 360.0).abs() < 1e-12);
        // ζ(2,1) = ζ(3) in the n₁ < n₂ convention: Li_{1,2}(1,1).
        let v = nested_mpl(&[1, 2], &[one, one], 1 << 30).unwrap();
        assert!((v.value.re - z3).abs() < 1e-13);
    }

    #[test]
    fn divergent_detected() {
        let one = root(0, 1);
        assert!(matches!(nested_mpl(&[2, 1], &[one, one], 1 << 30), Err(Error::Divergent(_))));
        assert!(matches!(euler_sum(&[1], &[one], 1, one, 1 << 30), Err(Error::Divergent(_))));
    }

    #[test]
    fn interior_arguments() {
        let x = EngineArg::Interior(Complex64::new(0.5, 0.0));
        let v = nested_mpl(&[1], &[x], 1 << 30).unwrap();
        assert!((v.value.re - std::f64::consts::LN_2).abs() < 1e-15);
        // Mixed: Li_{1,2}(1/2, -1) against brute force.
        let v = nested_mpl(&[1, 2], &[x, root(1, 2)], 1 << 30).unwrap();
        let mut s = 0.0;
        for n2 in 2..200000u64 {
            let inner: f64 = (1..n2.min(60)).map(|n1| 0.5f64.powi(n1 as i32) / n1 as f64).sum();
            s += if n2 % 2 == 0 { 1.0 } else { -1.0 } * inner / (n2 * n2) as f64;
        }
        assert!((v.value.re - s).abs() < 1e-10, "{}", v.value.re - s);
    }
}
