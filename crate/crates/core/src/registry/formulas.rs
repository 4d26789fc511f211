//! Left- and right-hand evaluators for the catalogued identities.
//!
//! Left sides evaluate the sums being related with `euler_sum_eval` or
//! `mpl_eval`. Right sides use only `polylog`, stuffle expansions of the
//! lower-order sums into multiple polylogarithms, and `mpl_eval`, so the two
//! sides never share an evaluation path for the same object.

use super::Args;
use crate::error::{Error, Result};
use crate::eulersum::{
    euler_sum_eval, evaluate_terms, quadratic_to_mpl_chain, stuffle_linear, stuffle_quadratic, EulerSumSpec,
};
use crate::mpl::{mpl_eval, MplSpec};
use crate::numerics::{binomial, EvalConfig, RootOfUnity, Twist, UnitParam, ValueWithError};
use crate::polylog::{polylog, LI0_PAIR};
use crate::residue::closed_form::compositions;
use crate::residue::{parity_decompose, KernelSpec};

type V = ValueWithError;

fn sgn(k: u32) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn bin(n: i64, k: i64) -> f64 {
    binomial(n, k)
}

fn m1() -> Twist {
    Twist::Exact(RootOfUnity::MINUS_ONE)
}

fn one() -> Twist {
    Twist::one()
}

fn ln2() -> V {
    V::real(std::f64::consts::LN_2)
}

/// Evaluation helpers bound to one configuration.
pub(super) struct Ctx<'a> {
    pub cfg: &'a EvalConfig,
}

impl Ctx<'_> {
    fn li(&self, k: u32, x: Twist) -> Result<V> {
        polylog(k, &x.to_unit()?, self.cfg)
    }

    /// `(−1)^m Li_{m+1}(x) − Li_{m+1}(1/x)`, the Laurent coefficients of `Φ(s;x)`.
    fn cm(&self, m: u32, x: Twist) -> Result<V> {
        if x.is_one() && m % 2 == 0 {
            return Ok(V::zero());
        }
        Ok(self.li(m + 1, x)?.scale(sgn(m)) - self.li(m + 1, x.inverse())?)
    }

    /// `(−1)^l Li_l(x) + Li_l(1/x)` with the `l = 0` value pinned.
    fn pair(&self, l: u32, x: Twist) -> Result<V> {
        if l == 0 {
            return Ok(V::real(LI0_PAIR));
        }
        Ok(-self.cm(l - 1, x)?)
    }

    /// Linear sum through its stuffle expansion.
    fn s1(&self, p: u32, q: u32, x: Twist, y: Twist) -> Result<V> {
        evaluate_terms(&stuffle_linear(p, q, x, y)?, self.cfg)
    }

    /// Quadratic sum through its stuffle expansion.
    fn s2(&self, p1: u32, p2: u32, q: u32, x1: Twist, x2: Twist, y: Twist) -> Result<V> {
        evaluate_terms(&stuffle_quadratic(p1, p2, q, x1, x2, y)?, self.cfg)
    }

    /// Direct Euler-sum evaluation, reserved for left-hand sides.
    fn es(&self, p: &[u32], q: u32, xs: &[Twist], y: Twist) -> Result<V> {
        euler_sum_eval(&EulerSumSpec::new(p.to_vec(), q, xs.to_vec(), y)?, self.cfg)
    }

    fn mpl(&self, k: &[u32], x: &[Twist]) -> Result<V> {
        mpl_eval(&MplSpec::new(k.to_vec(), x.to_vec())?, self.cfg)
    }

    /// Alternating MZV `ζ(k₁,…,k_r)`; a negative entry marks a barred slot.
    fn zbar(&self, ks: &[i32]) -> Result<V> {
        let k: Vec<u32> = ks.iter().map(|k| k.unsigned_abs()).collect();
        let x: Vec<Twist> = ks.iter().map(|&k| if k < 0 { m1() } else { one() }).collect();
        if k.len() == 1 {
            return self.li(k[0], x[0]);
        }
        self.mpl(&k, &x)
    }
}

fn ctx(cfg: &EvalConfig) -> Ctx<'_> {
    Ctx { cfg }
}

// ---------------------------------------------------------------- linear

pub(super) fn thm31_lhs(a: &Args, cfg: &EvalConfig) -> Result<V> {
    let c = ctx(cfg);
    let (p, q, x, y) = (a.int("p")?, a.int("q")?, a.tw("x")?, a.tw("y")?);
    let xy = x.mul(&y);
    Ok(c.mpl(&[p, q], &[y, xy.inverse()])? - c.mpl(&[p, q], &[y.inverse(), xy])?.scale(sgn(p + q)))
}

pub(super) fn thm31_rhs(a: &Args, cfg: &EvalConfig) -> Result<V> {
    let c = ctx(cfg);
    let (p, q, x, y) = (a.int("p")?, a.int("q")?, a.tw("x")?, a.tw("y")?);
    let (pi, qi) = (p as i64, q as i64);
    let xy = x.mul(&y);
    let lp = c.li(p, y)?;
    let mut acc = lp * c.li(q, xy.inverse())? + lp * c.li(q, xy)?.scale(sgn(q)) - c.li(p + q, x.inverse())?;
    for l in 0..=p {
        let coef = sgn(q) * bin(pi + qi - l as i64 - 1, qi - 1);
        acc = acc - (c.pair(l, x)? * c.li(p + q - l, xy)?).scale(coef);
    }
    for l in 0..=q {
        let coef = sgn(q) * bin(pi + qi - l as i64 - 1, pi - 1);
        acc = acc - (c.pair(l, x.inverse())? * c.li(p + q - l, y)?).scale(coef);
    }
    Ok(acc)
}

fn thm32_weights(p1: u32, p2: u32, q: u32, k: u32) -> f64 {
    bin((k + p1) as i64 - 1, p1 as i64 - 1) * bin((q + p2) as i64 - k as i64 - 2, q as i64 - 1)
}

pub(super) fn thm32_lhs(a: &Args, cfg: &EvalConfig) -> Result<V> {
    let c = ctx(cfg);
    let (p1, p2, q, x1, x2) = (a.int("p1")?, a.int("p2")?, a.int("q")?, a.tw("x1")?, a.tw("x2")?);
    let x12 = x1.mul(&x2);
    let mut acc = V::zero();
    for k in 0..p2 {
        let s = c.es(&[k + p1], q + p2 - k - 1, &[x1.inverse()], x12)?;
        acc = acc + s.scale(sgn(p1) * thm32_weights(p1, p2, q, k));
    }
    for k in 0..p1 {
        let s = c.es(&[k + p2], q + p1 - k - 1, &[x2.inverse()], x12)?;
        acc = acc + s.scale(sgn(p2) * thm32_weights(p2, p1, q, k));
    }
    Ok(acc)
}

fn thm32_rhs_with(a: &Args, cfg: &EvalConfig, second_arg_x2: bool) -> Result<V> {
    let c = ctx(cfg);
    let (p1, p2, q, x1, x2) = (a.int("p1")?, a.int("p2")?, a.int("q")?, a.tw("x1")?, a.tw("x2")?);
    let x12 = x1.mul(&x2);
    let w = p1 + p2 + q - 1;
    let wi = w as i64;
    let mut acc = c.li(w, x2)?.scale(sgn(p1) * bin(wi - 1, p2 as i64 - 1))
        + c.li(w, x1)?.scale(sgn(p2) * bin(wi - 1, p1 as i64 - 1));
    for k in compositions(q - 1, 2) {
        let coef = bin((k[0] + p1) as i64 - 1, p1 as i64 - 1) * bin((k[1] + p2) as i64 - 1, p2 as i64 - 1);
        acc = acc + (c.li(k[0] + p1, x1)? * c.li(k[1] + p2, x2)?).scale(coef);
    }
    for k in 0..p2 {
        let coef = thm32_weights(p1, p2, q, k) * sgn(k);
        acc = acc - (c.li(k + p1, x1)? * c.li(q + p2 - k - 1, x12)?).scale(coef);
    }
    let z = if second_arg_x2 { x2 } else { x1 };
    for k in 0..p1 {
        let coef = thm32_weights(p2, p1, q, k) * sgn(k);
        acc = acc - (c.li(k + p2, z)? * c.li(q + p1 - k - 1, x12)?).scale(coef);
    }
    Ok(acc - c.li(w, x12)?.scale(bin(wi - 1, q as i64 - 1)))
}

/// Displayed form: the last single sum takes `Li_{k+p₂}(x₁)`.
pub(super) fn thm32_rhs(a: &Args, cfg: &EvalConfig) -> Result<V> {
    thm32_rhs_with(a, cfg, false)
}

/// Symmetric form: the last single sum takes `Li_{k+p₂}(x₂)`.
pub(super) fn thm32_rhs_x2(a: &Args, cfg: &EvalConfig) -> Result<V> {
    thm32_rhs_with(a, cfg, true)
}

pub(super) fn cor33_lhs(a: &Args, cfg: &EvalConfig) -> Result<V> {
    let c = ctx(cfg);
    let (q, x1, x2) = (a.int("q")?, a.tw("x1")?, a.tw("x2")?);
    let x12 = x1.mul(&x2);
    Ok(c.es(&[1], q, &[x1.inverse()], x12)? + c.es(&[1], q, &[x2.inverse()], x12)?)
}

pub(super) fn cor33_rhs(a: &Args, cfg: &EvalConfig) -> Result<V> {
    let c = ctx(cfg);
    let (q, x1, x2) = (a.int("q")?, a.tw("x1")?, a.tw("x2")?);
    let x12 = x1.mul(&x2);
    let mut acc = c.li(q + 1, x12)?.scale(q as f64)
        + c.li(q + 1, x1)?
        + c.li(q + 1, x2)?
        + (c.li(1, x1)? + c.li(1, x2)?) * c.li(q, x12)?;
    for k in compositions(q - 1, 2) {
        acc = acc - c.li(k[0] + 1, x1)? * c.li(k[1] + 1, x2)?;
    }
    Ok(acc)
}

pub(super) fn eq35_lhs(a: &Args, cfg: &EvalConfig) -> Result<V> {
    let c = ctx(cfg);
    let (q, x) = (a.int("q")?, a.tw("x")?);
    c.es(&[1], q, &[x.inverse()], x.mul(&x))
}

pub(super) fn eq35_rhs(a: &Args, cfg: &EvalConfig) -> Result<V> {
    let c = ctx(cfg);
    let (q, x) = (a.int("q")?, a.tw("x")?);
    let x2 = x.mul(&x);
    let mut acc = c.li(q + 1, x2)?.scale(q as f64 / 2.0) + c.li(q + 1, x)? + c.li(1, x)? * c.li(q, x2)?;
    for k in compositions(q - 1, 2) {
        acc = acc - (c.li(k[0] + 1, x)? * c.li(k[1] + 1, x)?).scale(0.5);
    }
    Ok(acc)
}

pub(super) fn eq36_lhs(a: &Args, cfg: &EvalConfig) -> Result<V> {
    let c = ctx(cfg);
    let q = a.int("q")?;
    c.es(&[1], q, &[one()], one())
}

pub(super) fn eq36_rhs(a: &Args, cfg: &EvalConfig) -> Result<V> {
    let c = ctx(cfg);
    let q = a.int("q")?;
    let mut acc = c.li(q + 1, one())?.scale(1.0 + q as f64 / 2.0);
    for k in 1..q.saturating_sub(1) {
        acc = acc - (c.li(k + 1, one())? * c.li(q - k, one())?).scale(0.5);
    }
    Ok(acc)
}

// ------------------------------------------------------------- quadratic

pub(super) fn thm41_lhs(a: &Args, cfg: &EvalConfig) -> Result<V> {
    let c = ctx(cfg);
    let (p1, p2, q) = (a.int("p1")?, a.int("p2")?, a.int("q")?);
    let (x, x1, x2) = (a.tw("x")?, a.tw("x1")?, a.tw("x2")?);
    let w = Twist::product(&[x, x1, x2]);
    Ok(c.es(&[p1, p2], q, &[x1, x2], w.inverse())?
        + c.es(&[p1, p2], q, &[x1.inverse(), x2.inverse()], w)?.scale(sgn(p1 + p2 + q)))
}

pub(super) fn thm41_rhs(a: &Args, cfg: &EvalConfig) -> Result<V> {
    let c = ctx(cfg);
    let (p1, p2, q) = (a.int("p1")?, a.int("p2")?, a.int("q")?);
    let (x, x1, x2) = (a.tw("x")?, a.tw("x1")?, a.tw("x2")?);
    let w = Twist::product(&[x, x1, x2]);
    let wb = w.inverse();
    let ps = [p1, p2];
    let xs = [x1, x2];
    let pt = p1 + p2 + q;
    let (qi, pti) = (q as i64, pt as i64);
    let sq = sgn(q);
    let sig = [(0usize, 1usize), (1, 0)];

    let mut acc = -(c.li(p1, x1)? * c.li(p2, x2)? * c.li(q, wb)?) - c.li(pt, x.inverse())?;
    for &(ia, ib) in &sig {
        acc = acc + c.s1(ps[ia], ps[ib] + q, xs[ia], xs[ib].mul(&wb))?;
    }
    acc = acc - c.li(pt, w)?.scale(sq * bin(pti - 1, (p1 + p2) as i64));
    for &(ia, ib) in &sig {
        let (pb, xb) = (ps[ib], xs[ib]);
        acc = acc + c.li(ps[ia], xs[ia])? * (c.s1(pb, q, xb, wb)? - c.li(pb + q, xb.mul(&wb))?);
    }
    for &(ia, ib) in &sig {
        let (pa, pb, xa) = (ps[ia], ps[ib], xs[ia]);
        for k in 0..=pb {
            let coef = bin((k + pa) as i64 - 1, pa as i64 - 1) * bin((q + pb - k) as i64 - 1, qi - 1);
            let t = (c.li(k + pa, xa)? * c.li(pb + q - k, w)?).scale(sgn(k + q))
                + c.s1(k + pa, pb + q - k, xa.inverse(), w)?.scale(sgn(pa + q));
            acc = acc - t.scale(coef);
        }
    }
    for &(ia, ib) in &sig {
        let (pa, pb, xa) = (ps[ia], ps[ib], xs[ia]);
        for tot in 0..pb {
            for k in compositions(tot, 2) {
                let (k1, k2) = (k[0], k[1]);
                let rest = pb + q - k1 - k2 - 1;
                let coef = bin((k2 + pa) as i64 - 1, pa as i64 - 1) * bin(rest as i64 - 1, qi - 1);
                let t = (c.li(k2 + pa, xa)? * c.li(rest, w)?).scale(sgn(k2 + q))
                    + c.s1(k2 + pa, rest, xa.inverse(), w)?.scale(sgn(pa + q));
                acc = acc - (c.cm(k1, x)? * t).scale(coef);
            }
        }
    }
    acc = acc - (c.li(p1, x1)? * c.li(p2, x2)? * c.li(q, w)?).scale(sq);
    for &(ia, ib) in &sig {
        let (pa, pb) = (ps[ia], ps[ib]);
        acc = acc - (c.li(pb, xs[ib])? * c.s1(pa, q, xs[ia].inverse(), w)?).scale(sgn(pa + q));
    }
    for k in 0..p1 + p2 {
        let coef = sq * bin((q + p1 + p2 - k) as i64 - 2, qi - 1);
        acc = acc - (c.cm(k, x)? * c.li(q + p1 + p2 - k - 1, w)?).scale(coef);
    }
    for k in compositions(q, 2) {
        let coef = sq * bin((k[0] + p1) as i64 - 1, p1 as i64 - 1) * bin((k[1] + p2) as i64 - 1, p2 as i64 - 1);
        acc = acc - (c.li(k[0] + p1, x1)? * c.li(k[1] + p2, x2)?).scale(coef);
    }
    acc = acc
        - c.li(pt, x1)?.scale(sgn(p2 + q) * bin(pti - 1, p1 as i64 - 1))
        - c.li(pt, x2)?.scale(sgn(p1 + q) * bin(pti - 1, p2 as i64 - 1));
    for k in compositions(q - 1, 3) {
        let f1 = c.li(k[1] + p1, x1)?.scale(bin((k[1] + p1) as i64 - 1, p1 as i64 - 1) * sgn(k[1]));
        let f2 = c.li(k[2] + p2, x2)?.scale(bin((k[2] + p2) as i64 - 1, p2 as i64 - 1) * sgn(k[2]));
        acc = acc - c.cm(k[0], x)? * f1 * f2;
    }
    acc = acc + c.li(pt, x)?.scale(sgn(pt)) + c.li(pt, x.inverse())?;
    for (pa, pb, xb) in [(p1, p2, x2), (p2, p1, x1)] {
        for k in compositions(pa + q - 1, 2) {
            let coef = bin((k[1] + pb) as i64 - 1, pb as i64 - 1) * sgn(k[1]);
            acc = acc - (c.cm(k[0], x)? * c.li(k[1] + pb, xb)?).scale(coef);
        }
    }
    Ok(acc)
}

fn cor41a_lhs_impl(a: &Args, cfg: &EvalConfig) -> Result<V> {
    let c = ctx(cfg);
    let (q, x, x1, x2) = (a.int("q")?, a.tw("x")?, a.tw("x1")?, a.tw("x2")?);
    let w = Twist::product(&[x, x1, x2]);
    Ok(c.es(&[1, 1], q, &[x1, x2], w.inverse())?
        + c.es(&[1, 1], q, &[x1.inverse(), x2.inverse()], w)?.scale(sgn(q)))
}

pub(super) fn cor41a_lhs(a: &Args, cfg: &EvalConfig) -> Result<V> {
    cor41a_lhs_impl(a, cfg)
}

fn cor41a_rhs_with(a: &Args, cfg: &EvalConfig, inverted: bool) -> Result<V> {
    let c = ctx(cfg);
    let (q, x, x1, x2) = (a.int("q")?, a.tw("x")?, a.tw("x1")?, a.tw("x2")?);
    let w = Twist::product(&[x, x1, x2]);
    let wb = w.inverse();
    let sq = sgn(q);
    let qf = q as f64;
    let (l11, l12) = (c.li(1, x1)?, c.li(1, x2)?);
    let c1 = c.cm(0, x)?;
    let c2p = c.pair(2, x)?;
    let arg = |t: Twist| if inverted { t.inverse() } else { t };
    let mut acc = -c.li(q + 2, x.inverse())? - l11 * l12 * c.li(q, wb)?
        - c.li(q + 2, w)?.scale(sq * bin(q as i64 + 1, 2))
        + c.s1(1, q + 1, x1, x.mul(&x1).inverse())?
        + c.s1(1, q + 1, x2, x.mul(&x2).inverse())?
        + l11 * c.s1(1, q, x2, wb)?
        - l11 * c.li(q + 1, arg(x.mul(&x1)))?
        + l12 * c.s1(1, q, x1, wb)?
        - l12 * c.li(q + 1, arg(x.mul(&x2)))?
        - (l11 * c.li(q + 1, w)?).scale(sq * qf)
        + c.s1(1, q + 1, x1.inverse(), w)?.scale(sq * qf)
        - (l12 * c.li(q + 1, w)?).scale(sq * qf)
        + c.s1(1, q + 1, x2.inverse(), w)?.scale(sq * qf)
        + (c.li(2, x1)? * c.li(q, w)?).scale(sq)
        + c.s1(2, q, x1.inverse(), w)?.scale(sq)
        + (c.li(2, x2)? * c.li(q, w)?).scale(sq)
        + c.s1(2, q, x2.inverse(), w)?.scale(sq)
        - c1 * (l12 * c.li(q, w)? - c.s1(1, q, x2.inverse(), w)?).scale(sq)
        - c1 * (l11 * c.li(q, w)? - c.s1(1, q, x1.inverse(), w)?).scale(sq)
        - (l11 * l12 * c.li(q, w)?).scale(sq)
        + (l11 * c.s1(1, q, x2.inverse(), w)?).scale(sq)
        + (l12 * c.s1(1, q, x1.inverse(), w)?).scale(sq)
        - (c1 * c.li(q + 1, w)?).scale(sq * qf)
        + (c2p * c.li(q, w)?).scale(sq)
        + c.li(q + 2, x1)?.scale(sq)
        + c.li(q + 2, x2)?.scale(sq);
    for k in compositions(q, 2) {
        acc = acc - (c.li(k[0] + 1, x1)? * c.li(k[1] + 1, x2)?).scale(sq);
    }
    acc = acc + c.li(q + 2, x)?.scale(sq) + c.li(q + 2, x.inverse())?;
    for k in compositions(q - 1, 3) {
        acc = acc - (c.cm(k[0], x)? * c.li(k[1] + 1, x1)? * c.li(k[2] + 1, x2)?).scale(sgn(k[1] + k[2]));
    }
    for xb in [x2, x1] {
        for k in compositions(q, 2) {
            acc = acc - (c.cm(k[0], x)? * c.li(k[1] + 1, xb)?).scale(sgn(k[1]));
        }
    }
    Ok(acc)
}

/// Displayed form with `Li_{q+1}(x·x_j)`.
pub(super) fn cor41a_rhs(a: &Args, cfg: &EvalConfig) -> Result<V> {
    cor41a_rhs_with(a, cfg, false)
}

/// Form with `Li_{q+1}((x·x_j)^{−1})`, as obtained from the general quadratic case.
pub(super) fn cor41a_rhs_inv(a: &Args, cfg: &EvalConfig) -> Result<V> {
    cor41a_rhs_with(a, cfg, true)
}

pub(super) fn ex41_lhs(a: &Args, cfg: &EvalConfig) -> Result<V> {
    let c = ctx(cfg);
    let (x, x1, x2) = (a.tw("x")?, a.tw("x1")?, a.tw("x2")?);
    let w = Twist::product(&[x, x1, x2]);
    Ok(c.es(&[1, 2], 2, &[x1, x2], w.inverse())? - c.es(&[1, 2], 2, &[x1.inverse(), x2.inverse()], w)?)
}

pub(super) fn ex41_rhs(a: &Args, cfg: &EvalConfig) -> Result<V> {
    let c = ctx(cfg);
    let (x, x1, x2) = (a.tw("x")?, a.tw("x1")?, a.tw("x2")?);
    let w = Twist::product(&[x, x1, x2]);
    let wb = w.inverse();
    let (i1, i2) = (x1.inverse(), x2.inverse());
    let li = |k, t| c.li(k, t);
    let c1 = c.cm(0, x)?;
    let c2 = c.pair(2, x)?;
    let c3 = c.cm(2, x)?;
    let c4 = c.pair(4, x)?;
    let acc = -(li(1, x1)? * li(2, x2)? * li(2, wb)?) - li(5, x.inverse())? - li(5, w)?.scale(4.0)
        + c.s1(1, 4, x1, x.mul(&x1).inverse())?
        + c.s1(2, 3, x2, x.mul(&x2).inverse())?
        + li(1, x1)? * c.s1(2, 2, x2, wb)?
        - li(1, x1)? * li(4, x.mul(&x1).inverse())?
        + li(2, x2)? * c.s1(1, 2, x1, wb)?
        - li(2, x2)? * li(3, x.mul(&x2).inverse())?
        - (li(1, x1)? * li(4, w)?).scale(3.0)
        + c.s1(1, 4, i1, w)?.scale(3.0)
        + (li(2, x1)? * li(3, w)?).scale(2.0)
        + c.s1(2, 3, i1, w)?.scale(2.0)
        - li(3, x1)? * li(2, w)?
        + c.s1(3, 2, i1, w)?
        - (li(2, x2)? * li(3, w)?).scale(2.0)
        - c.s1(2, 3, i2, w)?.scale(2.0)
        + (li(3, x2)? * li(2, w)?).scale(2.0)
        - c.s1(3, 2, i2, w)?.scale(2.0)
        - c1 * li(2, x2)? * li(2, w)?
        - c1 * c.s1(2, 2, i2, w)?
        - (c1 * li(1, x1)? * li(3, w)?).scale(2.0)
        + c2 * li(1, x1)? * li(2, w)?
        + c1 * li(2, x1)? * li(2, w)?
        + (c1 * c.s1(1, 3, i1, w)?).scale(2.0)
        - c2 * c.s1(1, 2, i1, w)?
        + c1 * c.s1(2, 2, i1, w)?
        - li(1, x1)? * li(2, x2)? * li(2, w)?
        - li(1, x1)? * c.s1(2, 2, i2, w)?
        + li(2, x2)? * c.s1(1, 2, i1, w)?
        - (c1 * li(4, w)?).scale(3.0)
        + (c2 * li(3, w)?).scale(2.0)
        - c3 * li(2, w)?
        - (li(1, x1)? * li(4, x2)?).scale(3.0)
        - li(3, x1)? * li(2, x2)?
        - (li(2, x1)? * li(3, x2)?).scale(2.0)
        - li(5, x1)?
        + li(5, x2)?.scale(4.0)
        + c2 * li(1, x1)? * li(2, x2)?
        + c1 * li(2, x1)? * li(2, x2)?
        + (c1 * li(1, x1)? * li(3, x2)?).scale(2.0)
        - li(5, x)?
        + li(5, x.inverse())?
        - (c2 * li(3, x2)?).scale(2.0)
        - c3 * li(2, x2)?
        - (c1 * li(4, x2)?).scale(3.0)
        + c4 * li(1, x1)?
        + c3 * li(2, x1)?
        + c2 * li(3, x1)?
        + c1 * li(4, x1)?;
    Ok(acc)
}

pub(super) fn ex42_lhs(a: &Args, cfg: &EvalConfig) -> Result<V> {
    let c = ctx(cfg);
    let (x, x1, x2) = (a.tw("x")?, a.tw("x1")?, a.tw("x2")?);
    let w = Twist::product(&[x, x1, x2]);
    Ok(c.es(&[1, 1], 2, &[x1, x2], w.inverse())? + c.es(&[1, 1], 2, &[x1.inverse(), x2.inverse()], w)?)
}

pub(super) fn ex42_rhs(a: &Args, cfg: &EvalConfig) -> Result<V> {
    let c = ctx(cfg);
    let (x, x1, x2) = (a.tw("x")?, a.tw("x1")?, a.tw("x2")?);
    let w = Twist::product(&[x, x1, x2]);
    let wb = w.inverse();
    let (i1, i2) = (x1.inverse(), x2.inverse());
    let li = |k, t| c.li(k, t);
    let c1 = c.cm(0, x)?;
    let c2 = c.pair(2, x)?;
    let c3 = c.cm(2, x)?;
    let acc = -li(4, x.inverse())? - li(1, x1)? * li(1, x2)? * li(2, wb)? - li(4, w)?.scale(3.0)
        + c.s1(1, 3, x1, x.mul(&x1).inverse())?
        + c.s1(1, 3, x2, x.mul(&x2).inverse())?
        + li(1, x1)? * c.s1(1, 2, x2, wb)?
        - li(1, x1)? * li(3, x.mul(&x1).inverse())?
        + li(1, x2)? * c.s1(1, 2, x1, wb)?
        - li(1, x2)? * li(3, x.mul(&x2).inverse())?
        - (li(1, x1)? * li(3, w)?).scale(2.0)
        + c.s1(1, 3, i1, w)?.scale(2.0)
        - (li(1, x2)? * li(3, w)?).scale(2.0)
        + c.s1(1, 3, i2, w)?.scale(2.0)
        + li(2, x1)? * li(2, w)?
        + c.s1(2, 2, i1, w)?
        + li(2, x2)? * li(2, w)?
        + c.s1(2, 2, i2, w)?
        - c1 * (li(1, x2)? * li(2, w)? - c.s1(1, 2, i2, w)?)
        - c1 * (li(1, x1)? * li(2, w)? - c.s1(1, 2, i1, w)?)
        - li(1, x1)? * li(1, x2)? * li(2, w)?
        + li(1, x1)? * c.s1(1, 2, i2, w)?
        + li(1, x2)? * c.s1(1, 2, i1, w)?
        - (c1 * li(3, w)?).scale(2.0)
        + c2 * li(2, w)?
        + li(4, x1)?
        + li(4, x2)?
        - li(1, x1)? * li(3, x2)?
        - li(3, x1)? * li(1, x2)?
        - li(2, x1)? * li(2, x2)?
        + li(4, x)?
        + li(4, x.inverse())?
        + c2 * li(1, x1)? * li(1, x2)?
        + c1 * li(2, x1)? * li(1, x2)?
        + c1 * li(1, x1)? * li(2, x2)?
        - c1 * li(3, x2)?
        - c2 * li(2, x2)?
        - c3 * li(1, x2)?
        - c1 * li(3, x1)?
        - c2 * li(2, x1)?
        - c3 * li(1, x1)?;
    Ok(acc)
}

fn three(a: &Args) -> Result<[Twist; 3]> {
    Ok([a.tw("x1")?, a.tw("x2")?, a.tw("x3")?])
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j));
        }
    }
    out
}

pub(super) fn thm4g_lhs(a: &Args, cfg: &EvalConfig) -> Result<V> {
    let c = ctx(cfg);
    let q = a.int("q")?;
    let xs = three(a)?;
    let big = Twist::product(&xs);
    let mut acc = V::zero();
    for (i, j) in pairs(3) {
        acc = acc + c.es(&[1, 1], q, &[xs[i].inverse(), xs[j].inverse()], big)?;
    }
    Ok(acc)
}

pub(super) fn thm4g_rhs(a: &Args, cfg: &EvalConfig) -> Result<V> {
    let c = ctx(cfg);
    let q = a.int("q")?;
    let xs = three(a)?;
    let big = Twist::product(&xs);
    let qf = q as f64;
    let l1: Vec<V> = xs.iter().map(|&t| c.li(1, t)).collect::<Result<_>>()?;
    let mut acc = V::zero();
    for i in 0..3 {
        let inv = xs[i].inverse();
        let others = l1[(i + 1) % 3] + l1[(i + 2) % 3];
        acc = acc
            + c.s1(1, q + 1, inv, big)?.scale(qf)
            + c.s1(2, q, inv, big)?
            + others * c.s1(1, q, inv, big)?
            + c.li(q + 2, xs[i])?
            - (l1[i] * c.li(q + 1, big)?).scale(qf)
            + c.li(2, xs[i])? * c.li(q, big)?;
    }
    acc = acc - c.li(q + 2, big)?.scale(qf * (qf + 1.0) / 2.0);
    for (i, j) in pairs(3) {
        acc = acc - l1[i] * l1[j] * c.li(q, big)?;
        for k in compositions(q, 2) {
            acc = acc - c.li(k[0] + 1, xs[i])? * c.li(k[1] + 1, xs[j])?;
        }
    }
    for k in compositions(q - 1, 3) {
        acc = acc + c.li(k[0] + 1, xs[0])? * c.li(k[1] + 1, xs[1])? * c.li(k[2] + 1, xs[2])?;
    }
    Ok(acc)
}

pub(super) fn eq44_lhs(a: &Args, cfg: &EvalConfig) -> Result<V> {
    let c = ctx(cfg);
    let (q, x) = (a.int("q")?, a.tw("x")?);
    let x3 = Twist::product(&[x, x, x]);
    c.es(&[1, 1], q, &[x.inverse(), x.inverse()], x3)
}

pub(super) fn eq44_rhs(a: &Args, cfg: &EvalConfig) -> Result<V> {
    let c = ctx(cfg);
    let (q, x) = (a.int("q")?, a.tw("x")?);
    let x3 = Twist::product(&[x, x, x]);
    let xi = x.inverse();
    let qf = q as f64;
    let l1 = c.li(1, x)?;
    let mut acc = c.s1(1, q + 1, xi, x3)?.scale(qf)
        + c.s1(2, q, xi, x3)?
        + (l1 * c.s1(1, q, xi, x3)?).scale(2.0)
        + c.li(q + 2, x)?
        - c.li(q + 2, x3)?.scale(qf * (qf + 1.0) / 6.0)
        - (l1 * c.li(q + 1, x3)?).scale(qf)
        + c.li(2, x)? * c.li(q, x3)?
        - l1 * l1 * c.li(q, x3)?;
    for k in compositions(q, 2) {
        acc = acc - c.li(k[0] + 1, x)? * c.li(k[1] + 1, x)?;
    }
    for k in compositions(q - 1, 3) {
        acc = acc + (c.li(k[0] + 1, x)? * c.li(k[1] + 1, x)? * c.li(k[2] + 1, x)?).scale(1.0 / 3.0);
    }
    Ok(acc)
}

pub(super) fn chain4_lhs(a: &Args, cfg: &EvalConfig) -> Result<V> {
    let c = ctx(cfg);
    let (p1, p2, q) = (a.int("p1")?, a.int("p2")?, a.int("q")?);
    let (x, x1, x2) = (a.tw("x")?, a.tw("x1")?, a.tw("x2")?);
    c.es(&[p1, p2], q, &[x1, x2], x)
}

pub(super) fn chain4_rhs(a: &Args, cfg: &EvalConfig) -> Result<V> {
    let (p1, p2, q) = (a.int("p1")?, a.int("p2")?, a.int("q")?);
    let (x, x1, x2) = (a.tw("x")?, a.tw("x1")?, a.tw("x2")?);
    evaluate_terms(&quadratic_to_mpl_chain(p1, p2, q, x1, x2, x)?, cfg)
}

// ----------------------------------------------------------------- cubic

pub(super) fn thm51_lhs(a: &Args, cfg: &EvalConfig) -> Result<V> {
    let c = ctx(cfg);
    let (q, x) = (a.int("q")?, a.tw("x")?);
    let xs = three(a)?;
    let w = Twist::product(&[x, xs[0], xs[1], xs[2]]);
    let inv = [xs[0].inverse(), xs[1].inverse(), xs[2].inverse()];
    Ok(c.es(&[1, 1, 1], q, &xs, w.inverse())? + c.es(&[1, 1, 1], q, &inv, w)?.scale(sgn(q)))
}

/// Index triples as displayed, 1-based.
const SET_A: [[usize; 3]; 3] = [[1, 2, 3], [1, 3, 2], [2, 3, 1]];
const SET_B: [[usize; 3]; 3] = [[1, 2, 3], [2, 1, 3], [3, 1, 2]];
const PAIRS_A: [[usize; 2]; 3] = [[2, 3], [1, 2], [1, 3]];

fn thm51_rhs_with(a: &Args, cfg: &EvalConfig, fix_set: bool, fix_sign: bool) -> Result<V> {
    let c = ctx(cfg);
    let (q, x) = (a.int("q")?, a.tw("x")?);
    let xs = three(a)?;
    let w = Twist::product(&[x, xs[0], xs[1], xs[2]]);
    let v = w.inverse();
    let qi = q as i64;
    let sq = sgn(q);
    let g = |i: usize| xs[i - 1];
    let gi = |i: usize| xs[i - 1].inverse();
    let l1: Vec<V> = xs.iter().map(|&t| c.li(1, t)).collect::<Result<_>>()?;
    let l = |i: usize| l1[i - 1];
    let prod = l1[0] * l1[1] * l1[2];

    let mut acc = c.li(q, v)? * prod + (c.li(q, w)? * prod).scale(sq);
    for [s1, s2, s3] in SET_A {
        acc = acc - l(s1) * l(s2) * (c.s1(1, q, g(s3), v)? - c.li(q + 1, g(s3).mul(&v))?);
    }
    for [s1, s2, s3] in SET_B {
        let (b, cc) = (g(s2), g(s3));
        let t = c.s2(1, 1, q, b, cc, v)? - c.s1(1, q + 1, b, cc.mul(&v))? - c.s1(1, q + 1, cc, b.mul(&v))?
            + c.li(q + 2, b.mul(&cc).mul(&v))?;
        acc = acc + l(s1) * t;
    }
    let set5 = if fix_set { SET_A } else { SET_B };
    for [s1, s2, s3] in set5 {
        acc = acc + c.s2(1, 1, q + 1, g(s1), g(s2), g(s3).mul(&v))?;
    }
    acc = acc + c.li(q + 3, w)?.scale(sq * bin(qi + 2, 3));
    for [s1, s2, s3] in SET_B {
        acc = acc - c.s1(1, q + 2, g(s1), g(s2).mul(&g(s3)).mul(&v))?;
    }
    acc = acc + c.li(q + 3, x.inverse())?;
    for i in 1..=3 {
        for k in 0..=2u32 {
            let coef = bin(qi - k as i64 + 1, qi - 1);
            if coef == 0.0 {
                continue;
            }
            acc = acc + (c.li(k + 1, g(i))? * c.li(q + 2 - k, w)?).scale(coef * sgn(k + q));
            acc = acc - c.s1(k + 1, q + 2 - k, gi(i), w)?.scale(coef * sq);
        }
    }
    for [s1, s2] in PAIRS_A {
        for (k1, k2) in [(0u32, 0u32), (1, 0), (0, 1)] {
            let coef = bin(qi - (k1 + k2) as i64, qi - 1);
            if coef == 0.0 {
                continue;
            }
            let rest = q - k1 - k2 + 1;
            acc = acc + (c.li(k1 + 1, g(s1))? * c.li(k2 + 1, g(s2))? * c.li(rest, w)?).scale(coef * sgn(k1 + k2 + q));
            let t = (c.li(k1 + 1, g(s1))? * c.s1(k2 + 1, rest, gi(s2), w)?).scale(sgn(k1 + q + 1))
                + (c.li(k2 + 1, g(s2))? * c.s1(k1 + 1, rest, gi(s1), w)?).scale(sgn(k2 + q + 1));
            acc = acc + t.scale(coef);
            acc = acc + c.s2(k1 + 1, k2 + 1, rest, gi(s1), gi(s2), w)?.scale(coef * sq);
        }
    }
    for [s1, s2, s3] in SET_A {
        acc = acc - (l(s1) * l(s2) * c.s1(1, q, gi(s3), w)?).scale(sq);
    }
    for [s1, s2, s3] in SET_B {
        acc = acc + (l(s1) * c.s2(1, 1, q, gi(s2), gi(s3), w)?).scale(sq);
    }
    for i in 1..=3 {
        for (k1, k2) in [(0u32, 0u32), (1, 0), (0, 1)] {
            let coef = bin(qi - (k1 + k2) as i64, qi - 1);
            if coef == 0.0 {
                continue;
            }
            let rest = q - k1 - k2 + 1;
            let cm = c.cm(k1, x)?;
            acc = acc + (cm * c.li(k2 + 1, g(i))? * c.li(rest, w)?).scale(coef * sgn(k2 + q));
            acc = acc - (cm * c.s1(k2 + 1, rest, gi(i), w)?).scale(coef * sq);
        }
    }
    let c0 = c.cm(0, x)?;
    for [s1, s2] in [[2, 3], [1, 3], [1, 2]] {
        acc = acc + (c0 * l(s1) * l(s2) * c.li(q, w)?).scale(sq);
    }
    for [s1, s2] in [[2, 3], [1, 3], [1, 2], [3, 2], [3, 1], [2, 1]] {
        acc = acc - (c0 * l(s1) * c.s1(1, q, gi(s2), w)?).scale(sq);
    }
    for [s1, s2] in [[2, 3], [1, 3], [1, 2]] {
        acc = acc + (c0 * c.s2(1, 1, q, gi(s1), gi(s2), w)?).scale(sq);
    }
    for k in 0..=2u32 {
        let coef = bin(qi - k as i64 + 1, qi - 1);
        if coef == 0.0 {
            continue;
        }
        acc = acc + (c.cm(k, x)? * c.li(q + 2 - k, w)?).scale(sq * coef);
    }
    acc = acc + c.li(q + 3, x)?.scale(sq) - c.li(q + 3, x.inverse())?;
    for i in 1..=3 {
        acc = acc + c.li(q + 3, g(i))?.scale(sq);
    }
    for k in compositions(q, 3) {
        acc = acc + (c.li(k[0] + 1, g(1))? * c.li(k[1] + 1, g(2))? * c.li(k[2] + 1, g(3))?).scale(sq);
    }
    for [s1, s2] in [[1, 2], [1, 3], [2, 3]] {
        for k in compositions(q + 1, 2) {
            acc = acc + (c.li(k[0] + 1, g(s1))? * c.li(k[1] + 1, g(s2))?).scale(sgn(q + 1));
        }
    }
    for i in 1..=3 {
        for k in compositions(q + 1, 2) {
            acc = acc + (c.li(k[0] + 1, g(i))? * c.cm(k[1], x)?).scale(sgn(k[0]));
        }
    }
    for [s1, s2] in [[1, 2], [1, 3], [2, 3]] {
        for k in compositions(q, 3) {
            acc = acc + (c.li(k[0] + 1, g(s1))? * c.li(k[1] + 1, g(s2))? * c.cm(k[2], x)?).scale(sgn(k[0] + k[1]));
        }
    }
    for k in compositions(q - 1, 4) {
        let s = if fix_sign { sgn(k[0] + k[1] + k[2]) } else { sgn(k[0] + k[1]) };
        let t = c.li(k[0] + 1, g(1))? * c.li(k[1] + 1, g(2))? * c.li(k[2] + 1, g(3))? * c.cm(k[3], x)?;
        acc = acc + t.scale(s);
    }
    Ok(acc)
}

/// Displayed form.
pub(super) fn thm51_rhs(a: &Args, cfg: &EvalConfig) -> Result<V> {
    thm51_rhs_with(a, cfg, false, false)
}

/// `S_{1,1;q+1}(x_a,x_b;x_c/w)` summed over `c = 3, 2, 1`.
pub(super) fn thm51_rhs_set(a: &Args, cfg: &EvalConfig) -> Result<V> {
    thm51_rhs_with(a, cfg, true, false)
}

/// Last four-fold sum with sign `(−1)^{k₁+k₂+k₃}`.
pub(super) fn thm51_rhs_sign(a: &Args, cfg: &EvalConfig) -> Result<V> {
    thm51_rhs_with(a, cfg, false, true)
}

/// Both corrections together.
pub(super) fn thm51_rhs_both(a: &Args, cfg: &EvalConfig) -> Result<V> {
    thm51_rhs_with(a, cfg, true, true)
}

pub(super) fn ex52a_lhs(_: &Args, cfg: &EvalConfig) -> Result<V> {
    let c = ctx(cfg);
    let m = m1();
    Ok((c.es(&[1, 2], 1, &[m, m], m)? + c.es(&[2, 1], 1, &[m, m], m)? - c.es(&[1, 1], 2, &[m, m], one())?
        + c.es(&[1, 1], 2, &[m, m], m)?)
    .scale(3.0))
}

pub(super) fn ex52a_rhs(_: &Args, cfg: &EvalConfig) -> Result<V> {
    let c = ctx(cfg);
    let m = m1();
    let l = ln2();
    let z2 = c.zbar(&[2])?;
    let zb2 = c.zbar(&[-2])?;
    let s11 = c.s1(1, 1, m, m)?;
    Ok((l * l * z2).scale(3.0) + (l * c.s1(1, 2, m, one())?).scale(6.0) - c.zbar(&[-4])?.scale(4.0)
        - c.zbar(&[4])?
        + (zb2 * zb2).scale(6.0)
        - (l * c.zbar(&[-3])?).scale(3.0)
        + c.s1(2, 2, m, m)?.scale(3.0)
        + c.s1(3, 1, m, m)?.scale(3.0)
        - (l * c.s1(1, 2, m, m)?).scale(6.0)
        - (zb2 * s11).scale(6.0)
        - (l * c.s1(2, 1, m, m)?).scale(6.0)
        - (z2 * s11).scale(6.0)
        + (zb2 * z2).scale(8.0))
}

pub(super) fn ex52b_lhs(_: &Args, cfg: &EvalConfig) -> Result<V> {
    let c = ctx(cfg);
    Ok((c.zbar(&[-2, -1, -1])? + c.zbar(&[-1, -2, -1])? + c.zbar(&[-1, -1, -2])? - c.zbar(&[-1, -1, 2])?).scale(6.0))
}

fn ex52b_rhs_with(cfg: &EvalConfig, sign_z2b_z11: f64) -> Result<V> {
    let c = ctx(cfg);
    let z = |k: &[i32]| c.zbar(k);
    let l = ln2();
    Ok(z(&[-1, -3])?.scale(6.0) + z(&[4])?.scale(8.0) + (z(&[-2])? * z(&[-2])?).scale(6.0)
        + z(&[-2, -2])?.scale(3.0)
        - (l * z(&[-1, -2])?).scale(6.0)
        - (l * z(&[3])?).scale(12.0)
        - (l * z(&[-2, -1])?).scale(6.0)
        + (z(&[-2])? * z(&[-1, -1])?).scale(6.0 * sign_z2b_z11)
        - (z(&[-2])? * z(&[2])?).scale(6.0)
        - z(&[2, -2])?.scale(3.0)
        - z(&[3, -1])?.scale(6.0)
        - z(&[-2, 2])?.scale(6.0)
        - z(&[-1, 3])?.scale(12.0)
        + (l * l * z(&[2])?).scale(3.0)
        + (l * z(&[-1, 2])?).scale(6.0)
        + (l * z(&[-3])?).scale(9.0)
        + z(&[-3, -1])?.scale(3.0)
        + z(&[2, 2])?.scale(3.0)
        - (z(&[2])? * z(&[-1, -1])?).scale(6.0)
        - (z(&[2])? * z(&[2])?).scale(6.0)
        + (z(&[2])? * z(&[-2])?).scale(8.0)
        - z(&[-4])?.scale(13.0)
        - (l * z(&[-3])?).scale(6.0))
}

/// Displayed form.
pub(super) fn ex52b_rhs(_: &Args, cfg: &EvalConfig) -> Result<V> {
    ex52b_rhs_with(cfg, 1.0)
}

/// `−6ζ(2̄)ζ(1̄,1̄)`, the sign obtained by expanding `S_{1;1}(−1;−1)` in the
/// linear-sum form.
pub(super) fn ex52b_rhs_sign(_: &Args, cfg: &EvalConfig) -> Result<V> {
    ex52b_rhs_with(cfg, -1.0)
}

fn four(a: &Args) -> Result<[Twist; 4]> {
    Ok([a.tw("x1")?, a.tw("x2")?, a.tw("x3")?, a.tw("x4")?])
}

const TRIPLES_G: [[usize; 3]; 4] = [[2, 3, 4], [1, 3, 4], [1, 2, 4], [1, 2, 3]];
const PAIRS_G: [[usize; 2]; 6] = [[3, 4], [2, 4], [2, 3], [1, 4], [1, 2], [1, 3]];
const ORDERED_H: [[usize; 3]; 12] = [
    [2, 3, 4],
    [1, 3, 4],
    [1, 2, 4],
    [1, 2, 3],
    [2, 4, 3],
    [1, 4, 3],
    [1, 4, 2],
    [1, 3, 2],
    [3, 4, 2],
    [3, 4, 1],
    [2, 4, 1],
    [2, 3, 1],
];
const ORDERED_I: [[usize; 3]; 12] = [
    [2, 3, 4],
    [1, 3, 4],
    [1, 2, 4],
    [1, 2, 3],
    [3, 2, 4],
    [3, 1, 4],
    [2, 1, 4],
    [2, 1, 3],
    [4, 2, 3],
    [4, 1, 3],
    [4, 1, 2],
    [3, 1, 2],
];

pub(super) fn thm5g_lhs(a: &Args, cfg: &EvalConfig) -> Result<V> {
    let c = ctx(cfg);
    let q = a.int("q")?;
    let xs = four(a)?;
    let big = Twist::product(&xs);
    let mut acc = V::zero();
    for [i, j, k] in TRIPLES_G {
        let args = [xs[i - 1].inverse(), xs[j - 1].inverse(), xs[k - 1].inverse()];
        acc = acc + c.es(&[1, 1, 1], q, &args, big)?;
    }
    Ok(acc.scale(-sgn(q)))
}

/// Negated sum of every term besides the cubic sums, so it equals the left side.
pub(super) fn thm5g_rhs(a: &Args, cfg: &EvalConfig) -> Result<V> {
    let c = ctx(cfg);
    let q = a.int("q")?;
    let xs = four(a)?;
    let big = Twist::product(&xs);
    let qi = q as i64;
    let sq = sgn(q);
    let g = |i: usize| xs[i - 1];
    let gi = |i: usize| xs[i - 1].inverse();
    let l1: Vec<V> = xs.iter().map(|&t| c.li(1, t)).collect::<Result<_>>()?;
    let l = |i: usize| l1[i - 1];

    let mut acc = c.li(q + 3, big)?.scale(sq * bin(qi + 2, 3));
    for i in 1..=4 {
        for k in 0..=2u32 {
            let coef = bin(qi - k as i64 + 1, qi - 1);
            if coef == 0.0 {
                continue;
            }
            let t = (c.li(k + 1, g(i))? * c.li(q + 2 - k, big)?).scale(sgn(k)) - c.s1(k + 1, q + 2 - k, gi(i), big)?;
            acc = acc + t.scale(sq * coef);
        }
    }
    for [s1, s2] in PAIRS_G {
        for (k1, k2) in [(0u32, 0u32), (1, 0), (0, 1)] {
            let coef = bin(qi - (k1 + k2) as i64, qi - 1);
            if coef == 0.0 {
                continue;
            }
            let rest = q - k1 - k2 + 1;
            acc = acc + (c.li(k1 + 1, g(s1))? * c.li(k2 + 1, g(s2))? * c.li(rest, big)?).scale(sq * coef * sgn(k1 + k2));
            let t = (c.li(k1 + 1, g(s1))? * c.s1(k2 + 1, rest, gi(s2), big)?).scale(sgn(k1 + 1))
                + (c.li(k2 + 1, g(s2))? * c.s1(k1 + 1, rest, gi(s1), big)?).scale(sgn(k2 + 1));
            acc = acc + t.scale(sq * coef);
            acc = acc + c.s2(k1 + 1, k2 + 1, rest, gi(s1), gi(s2), big)?.scale(sq * coef);
        }
    }
    for [s1, s2, s3] in TRIPLES_G {
        acc = acc + (l(s1) * l(s2) * l(s3) * c.li(q, big)?).scale(sq);
    }
    for [s1, s2, s3] in ORDERED_H {
        acc = acc + (l(s1) * l(s2) * c.s1(1, q, gi(s3), big)?).scale(sgn(q + 1));
    }
    for [s1, s2, s3] in ORDERED_I {
        acc = acc + (l(s1) * c.s2(1, 1, q, gi(s2), gi(s3), big)?).scale(sq);
    }
    for i in 1..=4 {
        acc = acc + c.li(q + 3, g(i))?.scale(sq);
    }
    for [s1, s2] in PAIRS_G {
        for k in compositions(q + 1, 2) {
            acc = acc + (c.li(k[0] + 1, g(s1))? * c.li(k[1] + 1, g(s2))?).scale(sgn(q + 1));
        }
    }
    for [s1, s2, s3] in TRIPLES_G {
        for k in compositions(q, 3) {
            acc = acc + (c.li(k[0] + 1, g(s1))? * c.li(k[1] + 1, g(s2))? * c.li(k[2] + 1, g(s3))?).scale(sq);
        }
    }
    for k in compositions(q - 1, 4) {
        let t = c.li(k[0] + 1, g(1))? * c.li(k[1] + 1, g(2))? * c.li(k[2] + 1, g(3))? * c.li(k[3] + 1, g(4))?;
        acc = acc + t.scale(sgn(q + 1));
    }
    Ok(-acc)
}

pub(super) fn ex54a_lhs(_: &Args, cfg: &EvalConfig) -> Result<V> {
    let c = ctx(cfg);
    let m = m1();
    Ok(c.es(&[1, 1, 1], 2, &[m, m, m], one())?.scale(2.0))
}

fn ex54a_rhs_with(cfg: &EvalConfig, log_sq_minus_one: V) -> Result<V> {
    let c = ctx(cfg);
    let (m, o) = (m1(), one());
    let l = ln2();
    let z = |k: &[i32]| c.zbar(k);
    Ok(c.s2(1, 1, 3, m, m, o)?.scale(6.0) + c.s2(2, 1, 2, m, m, o)?.scale(3.0) + c.s2(1, 2, 2, m, m, o)?.scale(3.0)
        + z(&[5])?.scale(2.0)
        - (l * z(&[4])?).scale(6.0)
        - c.s1(1, 4, m, o)?.scale(6.0)
        - (z(&[3])? * z(&[-2])?).scale(4.0)
        - c.s1(2, 3, m, o)?.scale(4.0)
        + (z(&[-3])? * z(&[2])?).scale(2.0)
        - c.s1(3, 2, m, o)?.scale(2.0)
        + (l * l * z(&[3])?).scale(6.0)
        + (z(&[-2])? * z(&[2])? * l).scale(6.0)
        + (l * c.s1(1, 3, m, o)?).scale(12.0)
        + (z(&[-2])? * c.s1(1, 2, m, o)?).scale(6.0)
        + (l * c.s1(2, 2, m, o)?).scale(6.0)
        - (l * l * l * z(&[2])?).scale(2.0)
        - (log_sq_minus_one * c.s1(1, 2, m, o)?).scale(6.0)
        - (l * c.s2(1, 1, 2, m, m, o)?).scale(6.0)
        + z(&[-5])?.scale(2.0)
        + (z(&[-4])? * l).scale(6.0)
        - (z(&[-2])? * z(&[-3])?).scale(6.0)
        + (z(&[-3])? * l * l).scale(6.0)
        - (z(&[-2])? * z(&[-2])? * l).scale(6.0)
        + (z(&[-2])? * l * l * l).scale(2.0))
}

/// Displayed form, `log²(−1) = (iπ)² = −π²`.
pub(super) fn ex54a_rhs(_: &Args, cfg: &EvalConfig) -> Result<V> {
    let pi = std::f64::consts::PI;
    ex54a_rhs_with(cfg, V::real(-pi * pi))
}

/// Same display with `log²(2)` in place of `log²(−1)`.
pub(super) fn ex54a_rhs_log2(_: &Args, cfg: &EvalConfig) -> Result<V> {
    let l = std::f64::consts::LN_2;
    ex54a_rhs_with(cfg, V::real(l * l))
}

pub(super) fn ex54b_lhs(_: &Args, cfg: &EvalConfig) -> Result<V> {
    Ok(ctx(cfg).zbar(&[-1, -1, -1, 2])?.scale(6.0))
}

pub(super) fn ex54b_rhs(_: &Args, cfg: &EvalConfig) -> Result<V> {
    let c = ctx(cfg);
    let z = |k: &[i32]| c.zbar(k);
    let l = ln2();
    let l2 = l * l;
    let l3 = l2 * l;
    Ok(-(l * z(&[4])?).scale(6.0) - z(&[-1, 4])?.scale(6.0) - (z(&[-2])? * z(&[3])?).scale(2.0)
        - z(&[-2, 3])?.scale(2.0)
        - z(&[-5])?.scale(6.0)
        + z(&[-3])? * z(&[2])?
        - z(&[-3, 2])?.scale(2.0)
        + (l2 * z(&[3])?).scale(3.0)
        + (l * z(&[-1, 3])?).scale(6.0)
        + z(&[-1, -1, 3])?.scale(6.0)
        + z(&[2, 3])?.scale(3.0)
        + (z(&[-2])? * z(&[2])? * l).scale(3.0)
        + (z(&[-2])? * z(&[-1, 2])?).scale(3.0)
        + (l * z(&[-2, 2])?).scale(3.0)
        + (l * z(&[-4])?).scale(12.0)
        + z(&[-2, -1, 2])?.scale(3.0)
        + z(&[-1, -2, 2])?.scale(3.0)
        + z(&[3, 2])?.scale(3.0)
        + z(&[-2, -3])?.scale(3.0)
        + z(&[-1, -4])?.scale(9.0)
        + z(&[5])?.scale(7.0)
        - l3 * z(&[2])?
        - (l2 * z(&[-1, 2])?).scale(3.0)
        - (l * z(&[-1, -1, 2])?).scale(6.0)
        - (l * z(&[2, 2])?).scale(3.0)
        - (l * z(&[-1, -3])?).scale(6.0)
        - z(&[2, -1, 2])?.scale(3.0)
        - z(&[-1, 2, 2])?.scale(3.0)
        - z(&[-1, -1, -3])?.scale(6.0)
        - z(&[2, -3])?.scale(3.0)
        - (l * z(&[-2])? * z(&[-2])?).scale(3.0)
        + l3 * z(&[-2])?)
}

// ------------------------------------------------------------- general r

/// Exponents and arguments `(p_j, x_j)` present for the general-order record.
fn general_slots(a: &Args) -> Result<(Vec<u32>, Vec<Twist>)> {
    let mut p = vec![a.int("p1")?];
    let mut x = vec![a.tw("x1")?];
    for j in 2..=3 {
        let (pn, xn) = (format!("p{j}"), format!("x{j}"));
        if !a.has(&pn) {
            break;
        }
        p.push(a.int(&pn)?);
        x.push(a.tw(&xn)?);
    }
    Ok((p, x))
}

/// Residue ladder length used for the general-order remainder.
pub(super) const GENERAL_NMAX: u64 = 4096;

pub(super) fn thm55_lhs(a: &Args, cfg: &EvalConfig) -> Result<V> {
    let c = ctx(cfg);
    let (p, xs) = general_slots(a)?;
    let (q, x) = (a.int("q")?, a.tw("x")?);
    let mut all = xs.clone();
    all.push(x);
    let w = Twist::product(&all).inverse();
    let r = p.len() as u32;
    let inv: Vec<Twist> = xs.iter().map(|t| t.inverse()).collect();
    let ps: u32 = p.iter().sum();
    Ok(c.es(&p, q, &xs, w)?.scale(sgn(r)) + c.es(&p, q, &inv, w.inverse())?.scale(sgn(ps + q)))
}

/// Lower-order side: the residue remainder plus the subset sums that come
/// from writing `ζ_{n−1} = ζ_n − xⁿ/nᵖ` in the forward sum.
pub(super) fn thm55_rhs(a: &Args, cfg: &EvalConfig) -> Result<V> {
    let c = ctx(cfg);
    let (p, xs) = general_slots(a)?;
    let (q, x) = (a.int("q")?, a.tw("x")?);
    let xr = match x {
        Twist::Exact(r) => r,
        Twist::Approx(_) => return Err(Error::Domain("x must be a root of unity".into())),
    };
    let units: Vec<UnitParam> = xs.iter().map(|t| t.to_unit()).collect::<Result<_>>()?;
    let spec = KernelSpec::f(p.clone(), q, xr, units)?;
    let dec = parity_decompose(&spec, GENERAL_NMAX, cfg)?;
    let mut all = xs.clone();
    all.push(x);
    let w = Twist::product(&all).inverse();
    let r = p.len();
    let mut subsets = V::zero();
    for mask in 1u32..(1 << r) {
        let mut rest_p = Vec::new();
        let mut rest_x = Vec::new();
        let mut q_t = q;
        let mut y = w;
        for j in 0..r {
            if mask & (1 << j) != 0 {
                q_t += p[j];
                y = y.mul(&xs[j]);
            } else {
                rest_p.push(p[j]);
                rest_x.push(xs[j]);
            }
        }
        let term = match rest_p.len() {
            0 => c.li(q_t, y)?,
            1 => c.s1(rest_p[0], q_t, rest_x[0], y)?,
            2 => c.s2(rest_p[0], rest_p[1], q_t, rest_x[0], rest_x[1], y)?,
            _ => return Err(Error::Internal("subset order above two".into())),
        };
        subsets = subsets + term.scale(sgn(mask.count_ones()));
    }
    Ok(-dec.lower_order_remainder - subsets.scale(sgn(r as u32)))
}

