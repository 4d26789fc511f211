//! Hand-expanded residue formulas for the kernels behind the linear,
//! quadratic and cubic parity theorems.
//!
//! Each function writes the residue as an explicit combination of `Li`,
//! `ζ_n`, `ζ_{n−1}` and the `Φ` coefficients `c_m(x)`, term by term, so it
//! can be compared against [`super::kernel_residue`]. All kernels use the
//! reduced sign convention.

use super::phi_coefficient;
use crate::error::Result;
use crate::numerics::{binomial, EvalConfig, RootOfUnity, UnitParam};
use crate::polylog::{finite_polylog_sum, finite_polylog_sum_twist, polylog};
use num_complex::Complex64;

fn sgn(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

fn c(n: i64, k: i64) -> f64 {
    binomial(n, k)
}

/// All `(k_1, …, k_parts)` of nonnegative integers summing to `total`.
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Shared values at a fixed `n`.
struct Ctx<'a> {
    cfg: &'a EvalConfig,
    n: u64,
}

impl Ctx<'_> {
    fn li(&self, s: u32, x: &UnitParam) -> Result<Complex64> {
        Ok(polylog(s, x, self.cfg)?.value)
    }

    fn li_root(&self, s: u32, x: RootOfUnity) -> Result<Complex64> {
        self.li(s, &UnitParam::Exact(x))
    }

    /// `ζ_n(s;x⁻¹)`.
    fn z_inv(&self, s: u32, x: &UnitParam) -> Complex64 {
        finite_polylog_sum_twist(self.n, s, &x.to_twist().inverse())
    }

    /// `ζ_{n−1}(s;x)`.
    fn z_prev(&self, s: u32, x: &UnitParam) -> Complex64 {
        finite_polylog_sum(self.n - 1, s, x)
    }

    fn cm(&self, m: u32, x: RootOfUnity) -> Result<Complex64> {
        phi_coefficient(m, x, self.cfg)
    }

    fn npow(&self, e: i64) -> f64 {
        (self.n as f64).powi(-(e as i32))
    }

    /// `(−1)^k Li_{k+1}(x) − ζ_n(k+1;x⁻¹)`, the depth-one coefficient at `−n`.
    fn b1(&self, k: u32, x: &UnitParam) -> Result<Complex64> {
        Ok(self.li(k + 1, x)? * sgn(k as i64) - self.z_inv(k + 1, x))
    }
}

fn upow(x: &UnitParam, k: i64) -> Complex64 {
    match x {
        UnitParam::Exact(r) => r.pow(k).complex_value(),
        UnitParam::Approx(z) => z.powi(k as i32),
    }
}

fn rpow(x: RootOfUnity, k: i64) -> Complex64 {
    x.pow(k).complex_value()
}

/// Linear F kernel, residue at `n ≥ 1`: `(xy)^{−n} n^{−q}(Li_p(y) − ζ_{n−1}(p;y))`.
pub fn linear_f_pos(p: u32, q: u32, x: RootOfUnity, y: &UnitParam, n: u64, cfg: &EvalConfig) -> Result<Complex64> {
    let cx = Ctx { cfg, n };
    let n = n as i64;
    Ok(rpow(x, -n) * upow(y, -n) * cx.npow(q as i64) * (cx.li(p, y)? - cx.z_prev(p, y)))
}

/// Linear F kernel, residue at `−n`.
pub fn linear_f_neg(p: u32, q: u32, x: RootOfUnity, y: &UnitParam, n: u64, cfg: &EvalConfig) -> Result<Complex64> {
    let cx = Ctx { cfg, n };
    let (p, q) = (p as i64, q as i64);
    let xy = rpow(x, n as i64) * upow(y, n as i64);
    let sq = sgn(q);
    let mut acc = xy * (sq * c(p + q - 1, p) * cx.npow(p + q));
    acc += (cx.li(p as u32, y)? + cx.z_inv(p as u32, y) * sgn(p)) * xy * (sq * cx.npow(q));
    for m in 0..p {
        acc += cx.cm(m as u32, x)? * xy * (sq * c(p + q - m - 2, q - 1) * cx.npow(p + q - m - 1));
    }
    Ok(acc)
}

/// Linear F kernel, residue at 0.
pub fn linear_f_zero(p: u32, q: u32, x: RootOfUnity, y: &UnitParam, cfg: &EvalConfig) -> Result<Complex64> {
    let cx = Ctx { cfg, n: 0 };
    let w = p + q;
    let mut acc = cx.li_root(w, x)? * sgn(w as i64 - 1) - cx.li_root(w, x.inverse())?;
    acc += cx.li(w, y)? * (sgn(q as i64) * c(w as i64 - 1, p as i64 - 1));
    for k in compositions(q - 1, 2) {
        let (m, k) = (k[0], k[1]);
        acc += cx.li(k + p, y)? * cx.cm(m, x)? * (sgn(k as i64) * c((k + p - 1) as i64, p as i64 - 1));
    }
    Ok(acc)
}

/// `(−1)^k Li_{k+p}(x) + (−1)^p ζ_n(k+p;x⁻¹)`.
fn a_coeff(cx: &Ctx, k: u32, p: u32, x: &UnitParam) -> Result<Complex64> {
    Ok(cx.li(k + p, x)? * sgn(k as i64) + cx.z_inv(k + p, x) * sgn(p as i64))
}

/// Two-factor G kernel, residue at `−n`.
pub fn double_g_neg(p1: u32, p2: u32, q: u32, x1: &UnitParam, x2: &UnitParam, n: u64, cfg: &EvalConfig) -> Result<Complex64> {
    let cx = Ctx { cfg, n };
    let (i1, i2, iq) = (p1 as i64, p2 as i64, q as i64);
    let big = upow(x1, n as i64) * upow(x2, n as i64);
    let sq = sgn(iq);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..p2 {
        let ik = k as i64;
        let w = c(ik + i1 - 1, i1 - 1) * c(iq + i2 - ik - 2, iq - 1) * cx.npow(iq + i2 - ik - 1);
        acc += a_coeff(&cx, k, p1, x1)? * big * (sq * w);
    }
    for k in 0..p1 {
        let ik = k as i64;
        let w = c(ik + i2 - 1, i2 - 1) * c(iq + i1 - ik - 2, iq - 1) * cx.npow(iq + i1 - ik - 1);
        acc += a_coeff(&cx, k, p2, x2)? * big * (sq * w);
    }
    acc += big * (sq * c(iq + i1 + i2 - 2, iq - 1) * cx.npow(iq + i1 + i2 - 1));
    Ok(acc)
}

/// Two-factor G kernel, residue at 0.
pub fn double_g_zero(p1: u32, p2: u32, q: u32, x1: &UnitParam, x2: &UnitParam, cfg: &EvalConfig) -> Result<Complex64> {
    let cx = Ctx { cfg, n: 0 };
    let (i1, i2, iq) = (p1 as i64, p2 as i64, q as i64);
    let w = p1 + p2 + q - 1;
    let mut acc = cx.li(w, x2)? * (sgn(i1 + iq - 1) * c(i1 + i2 + iq - 2, i2 - 1));
    acc += cx.li(w, x1)? * (sgn(i2 + iq - 1) * c(i1 + i2 + iq - 2, i1 - 1));
    for k in compositions(q - 1, 2) {
        let (k1, k2) = (k[0], k[1]);
        let b = c((k1 + p1 - 1) as i64, i1 - 1) * c((k2 + p2 - 1) as i64, i2 - 1);
        acc += cx.li(k1 + p1, x1)? * cx.li(k2 + p2, x2)? * (sgn(iq - 1) * b);
    }
    Ok(acc)
}

/// Quadratic F kernel, residue at `n ≥ 1`.
pub fn quadratic_f_pos(
    p1: u32,
    p2: u32,
    q: u32,
    x: RootOfUnity,
    x1: &UnitParam,
    x2: &UnitParam,
    n: u64,
    cfg: &EvalConfig,
) -> Result<Complex64> {
    let cx = Ctx { cfg, n };
    let ni = n as i64;
    let pre = rpow(x, -ni) * upow(x1, -ni) * upow(x2, -ni);
    Ok(pre
        * (cx.li(p1, x1)? - cx.z_prev(p1, x1))
        * (cx.li(p2, x2)? - cx.z_prev(p2, x2))
        * cx.npow(q as i64))
}

/// Quadratic F kernel, residue at `−n`.
pub fn quadratic_f_neg(
    p1: u32,
    p2: u32,
    q: u32,
    x: RootOfUnity,
    x1: &UnitParam,
    x2: &UnitParam,
    n: u64,
    cfg: &EvalConfig,
) -> Result<Complex64> {
    let cx = Ctx { cfg, n };
    let (i1, i2, iq) = (p1 as i64, p2 as i64, q as i64);
    let ni = n as i64;
    let big = rpow(x, ni) * upow(x1, ni) * upow(x2, ni);
    let sq = sgn(iq);
    let mut acc = big * (sq * c(i1 + i2 + iq - 1, i1 + i2) * cx.npow(iq + i1 + i2));
    for k in 0..=p2 {
        let ik = k as i64;
        let w = c(ik + i1 - 1, i1 - 1) * c(iq + i2 - ik - 1, iq - 1) * cx.npow(i2 + iq - ik);
        acc += a_coeff(&cx, k, p1, x1)? * big * (sq * w);
    }
    for k in 0..=p1 {
        let ik = k as i64;
        let w = c(ik + i2 - 1, i2 - 1) * c(iq + i1 - ik - 1, iq - 1) * cx.npow(i1 + iq - ik);
        acc += a_coeff(&cx, k, p2, x2)? * big * (sq * w);
    }
    for s in 0..p1 {
        for k1 in 0..=s {
            let k2 = s - k1;
            let w = c(iq + i1 - s as i64 - 2, iq - 1) * c((k2 + p2 - 1) as i64, i2 - 1) * cx.npow(i1 + iq - s as i64 - 1);
            acc += cx.cm(k1, x)? * a_coeff(&cx, k2, p2, x2)? * big * (sq * w);
        }
    }
    for s in 0..p2 {
        for k1 in 0..=s {
            let k2 = s - k1;
            let w = c(iq + i2 - s as i64 - 2, iq - 1) * c((k2 + p1 - 1) as i64, i1 - 1) * cx.npow(i2 + iq - s as i64 - 1);
            acc += cx.cm(k1, x)? * a_coeff(&cx, k2, p1, x1)? * big * (sq * w);
        }
    }
    acc += a_coeff(&cx, 0, p1, x1)? * a_coeff(&cx, 0, p2, x2)? * big * (sq * cx.npow(iq));
    for k in 0..(p1 + p2) {
        let ik = k as i64;
        let w = c(iq + i1 + i2 - ik - 2, iq - 1) * cx.npow(iq + i1 + i2 - ik - 1);
        acc += cx.cm(k, x)? * big * (sq * w);
    }
    Ok(acc)
}

/// Quadratic F kernel, residue at 0.
pub fn quadratic_f_zero(
    p1: u32,
    p2: u32,
    q: u32,
    x: RootOfUnity,
    x1: &UnitParam,
    x2: &UnitParam,
    cfg: &EvalConfig,
) -> Result<Complex64> {
    let cx = Ctx { cfg, n: 0 };
    let (i1, i2, iq) = (p1 as i64, p2 as i64, q as i64);
    let w = p1 + p2 + q;
    let t1 = |k: u32| -> Result<Complex64> { Ok(cx.li(k + p1, x1)? * (sgn(k as i64) * c((k + p1 - 1) as i64, i1 - 1))) };
    let t2 = |k: u32| -> Result<Complex64> { Ok(cx.li(k + p2, x2)? * (sgn(k as i64) * c((k + p2 - 1) as i64, i2 - 1))) };
    let mut acc = Complex64::new(0.0, 0.0);
    for k in compositions(q, 2) {
        let b = c((k[0] + p1 - 1) as i64, i1 - 1) * c((k[1] + p2 - 1) as i64, i2 - 1);
        acc += cx.li(k[0] + p1, x1)? * cx.li(k[1] + p2, x2)? * (sgn(iq) * b);
    }
    acc += cx.li(w, x1)? * (c(w as i64 - 1, i1 - 1) * sgn(i2 + iq));
    acc += cx.li(w, x2)? * (c(w as i64 - 1, i2 - 1) * sgn(i1 + iq));
    for k in compositions(q - 1, 3) {
        acc += cx.cm(k[0], x)? * t1(k[1])? * t2(k[2])?;
    }
    acc += cx.li_root(w, x)? * sgn(w as i64 - 1) - cx.li_root(w, x.inverse())?;
    for k in compositions(p1 + q - 1, 2) {
        acc += cx.cm(k[0], x)? * t2(k[1])?;
    }
    for k in compositions(p2 + q - 1, 2) {
        acc += cx.cm(k[0], x)? * t1(k[1])?;
    }
    Ok(acc)
}

/// Three-factor G kernel with `p = (1,1,1)`, residue at `−n`.
pub fn triple_g_neg(q: u32, xs: [&UnitParam; 3], n: u64, cfg: &EvalConfig) -> Result<Complex64> {
    let cx = Ctx { cfg, n };
    let iq = q as i64;
    let sq = sgn(iq);
    let big: Complex64 = xs.iter().map(|x| upow(x, n as i64)).product();
    let li1: Vec<Complex64> = xs.iter().map(|x| cx.li(1, x)).collect::<Result<_>>()?;
    let li2: Vec<Complex64> = xs.iter().map(|x| cx.li(2, x)).collect::<Result<_>>()?;
    let z1: Vec<Complex64> = xs.iter().map(|x| cx.z_inv(1, x)).collect();
    let z2: Vec<Complex64> = xs.iter().map(|x| cx.z_inv(2, x)).collect();
    let mut acc = big * (sq * (q * (q + 1)) as f64 / 2.0 * cx.npow(iq + 2));
    for j in 0..3 {
        acc += (li1[j] - z1[j]) * big * (sq * q as f64 * cx.npow(iq + 1));
    }
    for (a, b, s) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        acc -= (li1[a] + li1[b]) * z1[s] * big * (sq * cx.npow(iq));
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        acc += (li1[i] * li1[j] + z1[i] * z1[j]) * big * (sq * cx.npow(iq));
    }
    for j in 0..3 {
        acc -= (li2[j] + z2[j]) * big * (sq * cx.npow(iq));
    }
    Ok(acc)
}

/// Three-factor G kernel with `p = (1,1,1)`, residue at 0.
pub fn triple_g_zero(q: u32, xs: [&UnitParam; 3], cfg: &EvalConfig) -> Result<Complex64> {
    let cx = Ctx { cfg, n: 0 };
    let iq = q as i64;
    let mut acc = Complex64::new(0.0, 0.0);
    for x in xs {
        acc += cx.li(q + 2, x)? * sgn(iq + 1);
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        for k in compositions(q, 2) {
            acc += cx.li(k[0] + 1, xs[i])? * cx.li(k[1] + 1, xs[j])? * sgn(iq);
        }
    }
    for k in compositions(q - 1, 3) {
        acc += cx.li(k[0] + 1, xs[0])? * cx.li(k[1] + 1, xs[1])? * cx.li(k[2] + 1, xs[2])? * sgn(iq - 1);
    }
    Ok(acc)
}

/// Cubic F kernel with `p = (1,1,1)`, residue at `n ≥ 1`.
pub fn cubic_f_pos(q: u32, x: RootOfUnity, xs: [&UnitParam; 3], n: u64, cfg: &EvalConfig) -> Result<Complex64> {
    let cx = Ctx { cfg, n };
    let ni = n as i64;
    let mut acc = rpow(x, -ni) * cx.npow(q as i64);
    for xi in xs {
        acc *= upow(xi, -ni) * (cx.li(1, xi)? - cx.z_prev(1, xi));
    }
    Ok(acc)
}

const PAIRS3: [(usize, usize); 3] = [(1, 2), (0, 1), (0, 2)];

/// Cubic F kernel with `p = (1,1,1)`, residue at `−n`.
pub fn cubic_f_neg(q: u32, x: RootOfUnity, xs: [&UnitParam; 3], n: u64, cfg: &EvalConfig) -> Result<Complex64> {
    let cx = Ctx { cfg, n };
    let iq = q as i64;
    let sq = sgn(iq);
    let ni = n as i64;
    let big = rpow(x, ni) * xs.iter().map(|z| upow(z, ni)).product::<Complex64>();
    let b = |i: usize, k: u32| cx.b1(k, xs[i]);
    let mut acc = big * (sq * c(iq + 2, 3) * cx.npow(iq + 3));
    for i in 0..3 {
        for k in 0..=2u32 {
            let ik = k as i64;
            acc += b(i, k)? * big * (sq * c(iq + 1 - ik, iq - 1) * cx.npow(iq - ik + 2));
        }
    }
    for (a, bb) in PAIRS3 {
        for (k1, k2) in [(0u32, 0u32), (1, 0), (0, 1)] {
            let s = (k1 + k2) as i64;
            acc += b(a, k1)? * b(bb, k2)? * big * (c(iq - s, iq - 1) * sq * cx.npow(iq - s + 1));
        }
    }
    acc += b(0, 0)? * b(1, 0)? * b(2, 0)? * big * (sq * cx.npow(iq));
    for i in 0..3 {
        for (k1, k2) in [(0u32, 0u32), (1, 0), (0, 1)] {
            let s = (k1 + k2) as i64;
            acc += cx.cm(k1, x)? * b(i, k2)? * big * (sq * c(iq - s, iq - 1) * cx.npow(iq - s + 1));
        }
    }
    for (a, bb) in [(1, 2), (0, 2), (0, 1)] {
        acc += cx.cm(0, x)? * b(a, 0)? * b(bb, 0)? * big * (sq * cx.npow(iq));
    }
    for k in 0..=2u32 {
        let ik = k as i64;
        acc += cx.cm(k, x)? * big * (c(iq - ik + 1, iq - 1) * sq * cx.npow(iq - ik + 2));
    }
    Ok(acc)
}

/// Cubic F kernel with `p = (1,1,1)`, residue at 0.
pub fn cubic_f_zero(q: u32, x: RootOfUnity, xs: [&UnitParam; 3], cfg: &EvalConfig) -> Result<Complex64> {
    let cx = Ctx { cfg, n: 0 };
    let iq = q as i64;
    let sq = sgn(iq);
    let l = |k: u32, i: usize| cx.li(k + 1, xs[i]);
    let mut acc = cx.li_root(q + 3, x)? * sq - cx.li_root(q + 3, x.inverse())?;
    for i in 0..3 {
        acc += l(q + 2, i)? * sq;
    }
    for k in compositions(q, 3) {
        acc += l(k[0], 0)? * l(k[1], 1)? * l(k[2], 2)? * sq;
    }
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        for k in compositions(q + 1, 2) {
            acc += l(k[0], a)? * l(k[1], b)? * sgn(iq + 1);
        }
    }
    for i in 0..3 {
        for k in compositions(q + 1, 2) {
            acc += l(k[0], i)? * cx.cm(k[1], x)? * sgn(k[0] as i64);
        }
    }
    for (a, b) in [(1, 2), (0, 2), (0, 1)] {
        for k in compositions(q, 3) {
            acc += l(k[0], a)? * l(k[1], b)? * cx.cm(k[2], x)? * sgn((k[0] + k[1]) as i64);
        }
    }
    for k in compositions(q - 1, 4) {
        acc += l(k[0], 0)? * l(k[1], 1)? * l(k[2], 2)? * cx.cm(k[3], x)? * sgn((k[0] + k[1] + k[2]) as i64);
    }
    Ok(acc)
}

const PAIRS4: [(usize, usize); 6] = [(2, 3), (1, 3), (1, 2), (0, 3), (0, 1), (0, 2)];
const TRIPLES4: [(usize, usize, usize); 4] = [(1, 2, 3), (0, 2, 3), (0, 1, 3), (0, 1, 2)];

/// Four-factor G kernel with `p = (1,1,1,1)`, residue at `−n`.
pub fn quartic_g_neg(q: u32, xs: [&UnitParam; 4], n: u64, cfg: &EvalConfig) -> Result<Complex64> {
    let cx = Ctx { cfg, n };
    let iq = q as i64;
    let sq = sgn(iq);
    let big: Complex64 = xs.iter().map(|z| upow(z, n as i64)).product();
    let b = |i: usize, k: u32| cx.b1(k, xs[i]);
    let mut acc = big * (sq * c(iq + 2, 3) * cx.npow(iq + 3));
    for i in 0..4 {
        for k in 0..=2u32 {
            let ik = k as i64;
            acc += b(i, k)? * big * (sq * c(iq - ik + 1, iq - 1) * cx.npow(iq - ik + 2));
        }
    }
    for (i, j) in PAIRS4 {
        for (k1, k2) in [(0u32, 0u32), (1, 0), (0, 1)] {
            let s = (k1 + k2) as i64;
            acc += b(i, k1)? * b(j, k2)? * big * (sq * c(iq - s, iq - 1) * cx.npow(iq - s + 1));
        }
    }
    for (i, j, k) in TRIPLES4 {
        acc += b(i, 0)? * b(j, 0)? * b(k, 0)? * big * (sq * cx.npow(iq));
    }
    Ok(acc)
}

/// Four-factor G kernel with `p = (1,1,1,1)`, residue at 0.
pub fn quartic_g_zero(q: u32, xs: [&UnitParam; 4], cfg: &EvalConfig) -> Result<Complex64> {
    let cx = Ctx { cfg, n: 0 };
    let iq = q as i64;
    let l = |k: u32, i: usize| cx.li(k + 1, xs[i]);
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..4 {
        acc += l(q + 2, i)? * sgn(iq);
    }
    for (i, j) in PAIRS4 {
        for k in compositions(q + 1, 2) {
            acc += l(k[0], i)? * l(k[1], j)? * sgn(iq + 1);
        }
    }
    for (i, j, m) in TRIPLES4 {
        for k in compositions(q, 3) {
            acc += l(k[0], i)? * l(k[1], j)? * l(k[2], m)? * sgn(iq);
        }
    }
    for k in compositions(q - 1, 4) {
        acc += l(k[0], 0)? * l(k[1], 1)? * l(k[2], 2)? * l(k[3], 3)? * sgn(iq - 1);
    }
    Ok(acc)
}
