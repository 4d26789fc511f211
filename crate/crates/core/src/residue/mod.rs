//! Local expansions of `φ` and `Φ` at integers, residues of the F- and
//! G-kernels, and the vanishing of their residue sums.
//!
//! Every `φ` factor enters a kernel as the normalized derivative
//! `N_p(s;x) = (−1)^{p−1}φ^{(p−1)}(s;x)/(p−1)! = Σ_{k≥0} x^k/(k+s)^p`.
//! With [`SignConvention::Reduced`] the kernel is exactly
//! `Φ(s;x)·Π N_{p_j}(s;x_j)/s^q` (F) or `Π N_{p_j}(s;x_j)/s^q` (G).

pub mod closed_form;

use crate::accel::richardson_integer_ladder;
use crate::error::{Error, Result};
use crate::laurent::{ls_mul, ls_residue, pole_shift_binomial, LaurentSeries};
use crate::numerics::{
    binomial, lcm, param_product, AccelMode, CompensatedSum, EvalConfig, RootOfUnity, UnitParam,
    ValueWithError,
};
use crate::polylog::polylog;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Poles with `|n|` up to this bound are kept in [`ResidueReport::per_pole`].
pub const PER_POLE_LIMIT: i64 = 64;

/// Levels of the Richardson ladder over partial totals.
const LADDER_LEVELS: u32 = 5;

/// Tail terms below this size end the direct sums of interior expansions.
const TAIL_EPS: f64 = 1e-19;

fn sgn(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelVariant {
    /// With the factor `Φ(s;x)`.
    F,
    /// Without `Φ`.
    G,
}

/// Global sign attached to the product of `φ` derivatives.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignConvention {
    /// `(−1)^{Σp − r}`, which turns each factor into `N_{p_j}`.
    #[default]
    Reduced,
    /// `(−1)^{Σp}`, i.e. `(−1)^r` times the reduced kernel.
    Plain,
}

/// A contour-integral kernel `Φ(s;x)^{[F]} Π φ^{(p_j−1)}(s;x_j)/((p_j−1)! s^q)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub variant: KernelVariant,
    pub p: Vec<u32>,
    pub q: u32,
    pub phi_args: Vec<UnitParam>,
    /// Argument of `Φ`; present exactly for the F variant.
    pub big_phi_arg: Option<RootOfUnity>,
    pub sign: SignConvention,
}

impl KernelSpec {
    pub fn f(p: Vec<u32>, q: u32, x: RootOfUnity, phi_args: Vec<UnitParam>) -> Result<Self> {
        let spec = KernelSpec {
            variant: KernelVariant::F,
            p,
            q,
            phi_args,
            big_phi_arg: Some(x),
            sign: SignConvention::Reduced,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn g(p: Vec<u32>, q: u32, phi_args: Vec<UnitParam>) -> Result<Self> {
        let spec =
            KernelSpec { variant: KernelVariant::G, p, q, phi_args, big_phi_arg: None, sign: SignConvention::Reduced };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_sign(mut self, sign: SignConvention) -> Self {
        self.sign = sign;
        self
    }

    /// Number of `φ` factors.
    pub fn order(&self) -> usize {
        self.p.len()
    }

    pub fn weight(&self) -> u32 {
        self.p.iter().sum::<u32>() + self.q
    }

    /// `x·x₁⋯x_r` (F) or `x₁⋯x_r` (G).
    pub fn combined_arg(&self) -> UnitParam {
        let mut all = self.phi_args.clone();
        if let Some(x) = self.big_phi_arg {
            all.push(UnitParam::Exact(x));
        }
        param_product(&all)
    }

    /// Checks shape and the convergence constraints of the residue sum.
    pub fn validate(&self) -> Result<()> {
        if self.p.is_empty() {
            return Err(Error::Domain("kernel needs at least one φ factor".into()));
        }
        if self.p.len() != self.phi_args.len() {
            return Err(Error::Domain(format!(
                "{} exponents but {} φ arguments",
                self.p.len(),
                self.phi_args.len()
            )));
        }
        if self.q == 0 || self.p.contains(&0) {
            return Err(Error::Domain("exponents must be positive".into()));
        }
        match (self.variant, self.big_phi_arg) {
            (KernelVariant::F, None) => {
                return Err(Error::Domain("F kernel needs an exact root of unity for Φ".into()))
            }
            (KernelVariant::G, Some(_)) => return Err(Error::Domain("G kernel takes no Φ argument".into())),
            _ => {}
        }
        for (j, (p, x)) in self.p.iter().zip(&self.phi_args).enumerate() {
            if x.value().norm() == 0.0 {
                return Err(Error::Domain(format!("x{} = 0", j + 1)));
            }
            if *p == 1 && x.is_one() {
                return Err(Error::Divergent(format!("(p{0},x{0})=(1,1)", j + 1)));
            }
        }
        if self.q == 1 && self.combined_arg().is_one() {
            let clause = match self.variant {
                KernelVariant::F => "(q,x·x1⋯xr)=(1,1)",
                KernelVariant::G => "(q,x1⋯xr)=(1,1)",
            };
            return Err(Error::Divergent(clause.into()));
        }
        Ok(())
    }

    /// Pole order at the integer `pole` (zero where the kernel is analytic).
    pub fn pole_order(&self, pole: i64) -> usize {
        let sp: usize = self.p.iter().map(|&p| p as usize).sum();
        let f = usize::from(self.variant == KernelVariant::F);
        match pole.signum() {
            1 => f,
            -1 => sp + f,
            _ => sp + self.q as usize + f,
        }
    }

    fn sign_factor(&self) -> f64 {
        match self.sign {
            SignConvention::Reduced => 1.0,
            SignConvention::Plain => sgn(self.order() as i64),
        }
    }

    /// Common period of every root-of-unity argument (1 if there is none).
    fn period(&self) -> u64 {
        let mut l = self.big_phi_arg.map(|x| x.order()).unwrap_or(1);
        for x in &self.phi_args {
            if let Some(r) = circle_root(x) {
                l = lcm(l, r.order());
            }
        }
        l
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.p.iter().map(|p| p.to_string()).collect();
        let xs: Vec<String> = self.phi_args.iter().map(|x| x.to_string()).collect();
        match self.big_phi_arg {
            Some(x) => write!(f, "F[p={};q={};x={};xs={}]", p.join(","), self.q, x, xs.join(",")),
            None => write!(f, "G[p={};q={};xs={}]", p.join(","), self.q, xs.join(",")),
        }
    }
}

/// The exact root behind a circle parameter, snapping floating inputs.
fn circle_root(x: &UnitParam) -> Option<RootOfUnity> {
    match x {
        UnitParam::Exact(r) => Some(*r),
        UnitParam::Approx(_) if x.on_circle() => x.to_twist().snapped().to_unit().ok().and_then(|u| u.as_root()),
        UnitParam::Approx(_) => None,
    }
}

/// Running data for one normalized factor `N_p(s;x)` at the integer `n`.
struct PhiFactor {
    p: u32,
    /// `Li_{k+p}(x)` for `k < width`.
    li: Vec<Complex64>,
    n: u64,
    state: FactorState,
}

enum FactorState {
    /// `|x| = 1`: `ζ_{n−1}(k+p;x)` and `ζ_n(k+p;x⁻¹)` as compensated sums.
    Circle { x: CirclePoint, fwd: Vec<CompensatedSum>, inv: Vec<CompensatedSum> },
    /// `|x| < 1`: `xⁿ` and the scaled sums `xⁿζ_n(k+p;x⁻¹)`, which stay bounded.
    Interior { x: Complex64, xn: Complex64, scaled: Vec<Complex64> },
}

enum CirclePoint {
    Root(RootOfUnity),
    Angle(f64),
}

impl CirclePoint {
    fn pow(&self, k: i64) -> Complex64 {
        match self {
            CirclePoint::Root(r) => r.pow(k).complex_value(),
            CirclePoint::Angle(t) => Complex64::from_polar(1.0, t * k as f64),
        }
    }
}

impl PhiFactor {
    fn new(p: u32, x: &UnitParam, width: usize, cfg: &EvalConfig) -> Result<Self> {
        if p == 0 {
            return Err(Error::Domain("φ derivative order must be positive".into()));
        }
        if p == 1 && x.is_one() {
            return Err(Error::Divergent("(p,x)=(1,1)".into()));
        }
        if x.value().norm() == 0.0 {
            return Err(Error::Domain("φ argument must be nonzero".into()));
        }
        let li = (0..width)
            .map(|k| polylog(k as u32 + p, x, cfg).map(|v| v.value))
            .collect::<Result<Vec<_>>>()?;
        let state = if x.on_circle() {
            let point = match circle_root(x) {
                Some(r) => CirclePoint::Root(r),
                None => CirclePoint::Angle(x.value().arg()),
            };
            FactorState::Circle {
                x: point,
                fwd: vec![CompensatedSum::new(); width],
                inv: vec![CompensatedSum::new(); width],
            }
        } else {
            FactorState::Interior { x: x.value(), xn: Complex64::new(1.0, 0.0), scaled: vec![czero(); width] }
        };
        Ok(PhiFactor { p, li, n: 0, state })
    }

    fn width(&self) -> usize {
        self.li.len()
    }

    fn advance(&mut self) {
        let old = self.n;
        let new = old + 1;
        let p = self.p as i32;
        match &mut self.state {
            FactorState::Circle { x, fwd, inv } => {
                if old >= 1 {
                    let xo = x.pow(old as i64);
                    for (k, s) in fwd.iter_mut().enumerate() {
                        s.add(xo * (old as f64).powi(-(k as i32 + p)));
                    }
                }
                let xi = x.pow(-(new as i64));
                for (k, s) in inv.iter_mut().enumerate() {
                    s.add(xi * (new as f64).powi(-(k as i32 + p)));
                }
            }
            FactorState::Interior { x, xn, scaled } => {
                *xn *= *x;
                for (k, z) in scaled.iter_mut().enumerate() {
                    *z = *x * *z + (new as f64).powi(-(k as i32 + p));
                }
            }
        }
        self.n = new;
    }

    fn advance_to(&mut self, n: u64) {
        while self.n < n {
            self.advance();
        }
    }

    fn xn(&self) -> Complex64 {
        match &self.state {
            FactorState::Circle { x, .. } => x.pow(self.n as i64),
            FactorState::Interior { xn, .. } => *xn,
        }
    }

    /// Expansion at `−n` with `terms ≤ width` Taylor coefficients:
    /// `xⁿ/(s+n)^p + xⁿ Σ C(k+p−1,p−1)((−1)^k Li_{k+p}(x) + (−1)^p ζ_n(k+p;x⁻¹))(s+n)^k`.
    fn neg_series(&self, terms: usize) -> LaurentSeries {
        let p = self.p as usize;
        let xn = self.xn();
        let mut coeffs = vec![czero(); p + terms];
        coeffs[0] = xn;
        for k in 0..terms.min(self.width()) {
            let scaled = match &self.state {
                FactorState::Circle { inv, .. } => xn * inv[k].value(),
                FactorState::Interior { scaled, .. } => scaled[k],
            };
            let b = binomial((k + p - 1) as i64, p as i64 - 1);
            coeffs[p + k] = (xn * self.li[k] * sgn(k as i64) + scaled * sgn(p as i64)) * b;
        }
        LaurentSeries::new(Complex64::new(-(self.n as f64), 0.0), -(p as i64), coeffs)
    }

    /// Taylor expansion at `n ≥ 1`:
    /// `x^{−n} Σ C(k+p−1,p−1)(−1)^k (Li_{k+p}(x) − ζ_{n−1}(k+p;x))(s−n)^k`.
    fn pos_series(&self, terms: usize) -> LaurentSeries {
        let p = self.p as usize;
        let n = self.n;
        let coeffs = (0..terms.min(self.width()))
            .map(|k| {
                let tail = match &self.state {
                    FactorState::Circle { x, fwd, .. } => x.pow(-(n as i64)) * (self.li[k] - fwd[k].value()),
                    FactorState::Interior { x, .. } => interior_tail(*x, (k + p) as i32, n),
                };
                tail * (binomial((k + p - 1) as i64, p as i64 - 1) * sgn(k as i64))
            })
            .collect();
        LaurentSeries::new(Complex64::new(n as f64, 0.0), 0, coeffs)
    }
}

/// `x^{−n}(Li_s(x) − ζ_{n−1}(s;x)) = Σ_{d≥0} x^d/(n+d)^s` for `|x| < 1`.
fn interior_tail(x: Complex64, s: i32, n: u64) -> Complex64 {
    let m = x.norm();
    let mut sum = CompensatedSum::new();
    let mut pw = Complex64::new(1.0, 0.0);
    let mut d = 0u64;
    loop {
        let t = pw * ((n + d) as f64).powi(-s);
        sum.add(t);
        if m.powi(d as i32) < TAIL_EPS * (1.0 - m) || d > 10_000_000 {
            break;
        }
        pw *= x;
        d += 1;
    }
    sum.value()
}

/// Coefficients `c_m(x) = (−1)^m Li_{m+1}(x) − Li_{m+1}(x⁻¹)` of `Φ(s;x)`,
/// with `c_0(1) = 0`.
struct BigPhi {
    x: RootOfUnity,
    c: Vec<Complex64>,
}

impl BigPhi {
    fn new(x: RootOfUnity, width: usize, cfg: &EvalConfig) -> Result<Self> {
        let c = (0..width).map(|m| phi_coefficient(m as u32, x, cfg)).collect::<Result<Vec<_>>>()?;
        Ok(BigPhi { x, c })
    }

    /// `x^{−a}(1/(s−a) + Σ c_m (s−a)^m)` with `terms` Taylor coefficients.
    fn series(&self, a: i64, terms: usize) -> LaurentSeries {
        let pf = self.x.pow(-a).complex_value();
        let mut coeffs = Vec::with_capacity(terms + 1);
        coeffs.push(pf);
        coeffs.extend(self.c.iter().take(terms).map(|c| pf * c));
        LaurentSeries::new(Complex64::new(a as f64, 0.0), -1, coeffs)
    }
}

/// `c_m(x)`; zero at `m = 0, x = 1`, where both polylogarithms diverge.
pub fn phi_coefficient(m: u32, x: RootOfUnity, cfg: &EvalConfig) -> Result<Complex64> {
    if x.is_one() && m % 2 == 0 {
        return Ok(czero());
    }
    let u = UnitParam::Exact(x);
    let ui = UnitParam::Exact(x.inverse());
    let a = polylog(m + 1, &u, cfg)?.value;
    let b = polylog(m + 1, &ui, cfg)?.value;
    Ok(a * sgn(m as i64) - b)
}

/// Expansion of `(−1)^{p−1}φ^{(p−1)}(s;x)/(p−1)!` at `s = −n`, with `terms`
/// Taylor coefficients after the principal part `xⁿ/(s+n)^p`.
pub fn phi_expansion_neg(n: u64, p: u32, x: &UnitParam, terms: usize, cfg: &EvalConfig) -> Result<LaurentSeries> {
    let mut f = PhiFactor::new(p, x, terms, cfg)?;
    f.advance_to(n);
    Ok(f.neg_series(terms))
}

/// Taylor expansion of `(−1)^{p−1}φ^{(p−1)}(s;x)/(p−1)!` at `s = n ≥ 1`.
pub fn phi_expansion_pos(n: u64, p: u32, x: &UnitParam, terms: usize, cfg: &EvalConfig) -> Result<LaurentSeries> {
    if n == 0 {
        return Err(Error::Domain("φ has a pole at 0; use phi_expansion_neg".into()));
    }
    let mut f = PhiFactor::new(p, x, terms, cfg)?;
    f.advance_to(n);
    Ok(f.pos_series(terms))
}

/// Laurent expansion of `Φ(s;x)` at the integer `n`, with `terms` Taylor coefficients.
pub fn big_phi_expansion(n: i64, x: RootOfUnity, terms: usize, cfg: &EvalConfig) -> Result<LaurentSeries> {
    Ok(BigPhi::new(x, terms, cfg)?.series(n, terms))
}

/// All factors of a kernel, advanced together through `n = 0, 1, 2, …`.
struct KernelState<'a> {
    spec: &'a KernelSpec,
    factors: Vec<PhiFactor>,
    big: Option<BigPhi>,
}

impl<'a> KernelState<'a> {
    fn new(spec: &'a KernelSpec, cfg: &EvalConfig) -> Result<Self> {
        spec.validate()?;
        let width = spec.pole_order(0);
        let factors = spec
            .p
            .iter()
            .zip(&spec.phi_args)
            .map(|(p, x)| PhiFactor::new(*p, x, width, cfg))
            .collect::<Result<Vec<_>>>()?;
        let big = spec.big_phi_arg.map(|x| BigPhi::new(x, width, cfg)).transpose()?;
        Ok(KernelState { spec, factors, big })
    }

    fn n(&self) -> u64 {
        self.factors[0].n
    }

    fn advance(&mut self) {
        for f in &mut self.factors {
            f.advance();
        }
    }

    /// Residue at `pole`, which must be `0` or `±n()`.
    fn residue_at(&self, pole: i64) -> Result<Complex64> {
        debug_assert_eq!(pole.unsigned_abs(), self.n());
        let order = self.spec.pole_order(pole);
        if order == 0 {
            return Ok(czero());
        }
        let q = self.spec.q;
        let center = Complex64::new(pole as f64, 0.0);
        let mut acc = if pole == 0 {
            LaurentSeries::monomial(center, -(q as i64), order)
        } else {
            pole_shift_binomial(q, center, order)?
        };
        for f in &self.factors {
            let s = if pole <= 0 { f.neg_series(order) } else { f.pos_series(order) };
            acc = ls_mul(&acc, &s)?;
        }
        if let Some(b) = &self.big {
            acc = ls_mul(&acc, &b.series(pole, order))?;
        }
        let res = ls_residue(&acc).map_err(|e| Error::Internal(format!("residue window too short: {e}")))?;
        Ok(res * self.spec.sign_factor())
    }

    /// `(−1)^r wⁿ n^{−q} Π ζ_{n−1}(p_j;x_j)`, `w = (x·x₁⋯x_r)^{−1}`: the
    /// order-r part of the residue at `+n`.
    fn forward_term(&self, w: &RootOfUnity) -> Complex64 {
        let n = self.n();
        let mut prod = w.pow(n as i64).complex_value() * (n as f64).powi(-(self.spec.q as i32));
        for f in &self.factors {
            if let FactorState::Circle { fwd, .. } = &f.state {
                prod *= fwd[0].value();
            }
        }
        prod * sgn(self.spec.order() as i64) * self.spec.sign_factor()
    }

    /// `(−1)^{Σp+q} w^{−n} n^{−q} Π ζ_n(p_j;x_j⁻¹)`: the order-r part of the
    /// residue at `−n`.
    fn mirror_term(&self, w: &RootOfUnity) -> Complex64 {
        let n = self.n();
        let mut prod = w.pow(-(n as i64)).complex_value() * (n as f64).powi(-(self.spec.q as i32));
        for f in &self.factors {
            if let FactorState::Circle { inv, .. } = &f.state {
                prod *= inv[0].value();
            }
        }
        prod * sgn(self.spec.weight() as i64) * self.spec.sign_factor()
    }
}

/// Residue of the kernel at an integer pole.
pub fn kernel_residue(spec: &KernelSpec, pole: i64, cfg: &EvalConfig) -> Result<Complex64> {
    let mut st = KernelState::new(spec, cfg)?;
    for _ in 0..pole.unsigned_abs() {
        st.advance();
    }
    st.residue_at(pole)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartialTotal {
    /// Poles with `|pole| ≤ n` are included.
    pub n: u64,
    pub total: Complex64,
}

/// Outcome of a residue-sum check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidueReport {
    pub kernel: String,
    pub n_max: u64,
    /// Residues at `|pole| ≤ min(n_max, PER_POLE_LIMIT)`.
    pub per_pole: BTreeMap<i64, Complex64>,
    /// Totals at the extrapolation checkpoints and at `n_max`.
    pub partial_totals: Vec<PartialTotal>,
    pub extrapolated_total: ValueWithError,
    pub tolerance: f64,
    pub pass: bool,
}

/// Checkpoints `N₀·2^j ≤ n_max` with `N₀` a multiple of `period`, so every
/// root-of-unity phase is 1 at each checkpoint and the tails expand in
/// integer powers of `1/N`.
fn checkpoints(n_max: u64, period: u64) -> Vec<u64> {
    let mut levels = LADDER_LEVELS;
    while levels > 1 && period.saturating_mul(1 << (levels - 1)) > n_max {
        levels -= 1;
    }
    let unit = n_max / period.saturating_mul(1 << (levels - 1));
    if unit == 0 {
        return vec![n_max];
    }
    (0..levels).map(|j| period * unit << j).collect()
}

/// Extrapolates totals recorded at `checkpoints`; `last` is the total at
/// `n_max` and `last_term` the size of the final residue pair.
fn extrapolate(values: &[Complex64], last: Complex64, last_term: f64, n_max: u64, scale: f64, mode: AccelMode) -> ValueWithError {
    let floor = 1e-15 * scale;
    if mode == AccelMode::None || values.len() < 2 {
        return ValueWithError::new(last, last_term * n_max as f64 + floor, n_max);
    }
    let (best, err) = richardson_integer_ladder(values);
    ValueWithError::new(best, err + floor, n_max).with_accelerated(true)
}

/// Sums the residues over `|pole| ≤ n_max` and extrapolates the total,
/// which vanishes for an admissible kernel.
pub fn residue_total(spec: &KernelSpec, n_max: u64, cfg: &EvalConfig) -> Result<ResidueReport> {
    let sums = run_residue_sums(spec, n_max, cfg, None)?;
    let tol = 10.0 * cfg.target_tol;
    let total = extrapolate(&sums.checkpoint_totals, sums.total, sums.last_term, n_max, sums.scale, cfg.accel_mode);
    Ok(ResidueReport {
        kernel: spec.to_string(),
        n_max,
        per_pole: sums.per_pole,
        partial_totals: sums.partials,
        pass: total.value.norm() <= tol,
        extrapolated_total: total,
        tolerance: tol,
    })
}

struct Sums {
    per_pole: BTreeMap<i64, Complex64>,
    partials: Vec<PartialTotal>,
    checkpoint_totals: Vec<Complex64>,
    total: Complex64,
    last_term: f64,
    scale: f64,
    /// Forward and mirror totals at checkpoints and at `n_max` when split.
    split: Option<Split>,
}

#[derive(Default)]
struct Split {
    forward: Vec<Complex64>,
    mirror: Vec<Complex64>,
    forward_last: Complex64,
    mirror_last: Complex64,
    forward_scale: f64,
    mirror_scale: f64,
}

fn run_residue_sums(spec: &KernelSpec, n_max: u64, cfg: &EvalConfig, w: Option<RootOfUnity>) -> Result<Sums> {
    if n_max == 0 {
        return Err(Error::Domain("n_max must be positive".into()));
    }
    cfg.validate()?;
    let mut st = KernelState::new(spec, cfg)?;
    let marks = checkpoints(n_max, spec.period());
    let mut per_pole = BTreeMap::new();
    let mut total = CompensatedSum::new();
    let r0 = st.residue_at(0)?;
    per_pole.insert(0, r0);
    total.add(r0);
    let mut scale = r0.norm();
    let mut partials = Vec::new();
    let mut checkpoint_totals = Vec::new();
    let mut split = w.map(|_| Split::default());
    let (mut fsum, mut msum) = (CompensatedSum::new(), CompensatedSum::new());
    let mut last_term = 0.0;
    for n in 1..=n_max {
        st.advance();
        let neg = st.residue_at(-(n as i64))?;
        let pos = st.residue_at(n as i64)?;
        if (n as i64) <= PER_POLE_LIMIT {
            per_pole.insert(-(n as i64), neg);
            if spec.variant == KernelVariant::F {
                per_pole.insert(n as i64, pos);
            }
        }
        total.add(neg);
        total.add(pos);
        scale = scale.max(neg.norm()).max(pos.norm());
        last_term = (neg + pos).norm();
        if let (Some(w), Some(sp)) = (&w, &mut split) {
            let f = st.forward_term(w);
            let m = st.mirror_term(w);
            fsum.add(f);
            msum.add(m);
            sp.forward_scale = sp.forward_scale.max(f.norm());
            sp.mirror_scale = sp.mirror_scale.max(m.norm());
        }
        let is_mark = marks.contains(&n);
        if is_mark {
            checkpoint_totals.push(total.value());
            if let Some(sp) = &mut split {
                sp.forward.push(fsum.value());
                sp.mirror.push(msum.value());
            }
        }
        if is_mark || n == n_max {
            partials.push(PartialTotal { n, total: total.value() });
        }
    }
    if let Some(sp) = &mut split {
        sp.forward_last = fsum.value();
        sp.mirror_last = msum.value();
    }
    Ok(Sums { per_pole, partials, checkpoint_totals, total: total.value(), last_term, scale, split })
}

/// Split of an F-kernel residue sum into its two order-r Euler-sum pieces
/// and everything of lower order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParityDecomposition {
    pub kernel: String,
    pub n_max: u64,
    /// `(−1)^r Σ wⁿ Π ζ_{n−1}(p_j;x_j)/n^q`, `w = (x·x₁⋯x_r)^{−1}`.
    pub order_r_forward: ValueWithError,
    /// `(−1)^{Σp+q} Σ w^{−n} Π ζ_n(p_j;x_j⁻¹)/n^q`.
    pub order_r_mirror: ValueWithError,
    /// Residue at 0 plus the remaining parts of the residues at `±n`.
    pub lower_order_remainder: ValueWithError,
    /// `forward + mirror + remainder`.
    pub total: ValueWithError,
    pub tolerance: f64,
    pub pass: bool,
}

/// Splits the residue sum of an F kernel whose arguments are roots of unity.
/// Signs follow `spec.sign`.
pub fn parity_decompose(spec: &KernelSpec, n_max: u64, cfg: &EvalConfig) -> Result<ParityDecomposition> {
    spec.validate()?;
    let x = match (spec.variant, spec.big_phi_arg) {
        (KernelVariant::F, Some(x)) => x,
        _ => return Err(Error::Domain("parity decomposition needs an F kernel".into())),
    };
    let mut w = x;
    for a in &spec.phi_args {
        let r = circle_root(a)
            .ok_or_else(|| Error::Domain(format!("parity decomposition needs roots of unity, got {a}")))?;
        w = w.mul(&r);
    }
    let w = w.inverse();
    let sums = run_residue_sums(spec, n_max, cfg, Some(w))?;
    let sp = sums.split.as_ref().ok_or_else(|| Error::Internal("missing split sums".into()))?;
    let mode = cfg.accel_mode;
    let forward = extrapolate(&sp.forward, sp.forward_last, 0.0, n_max, sp.forward_scale, mode);
    let mirror = extrapolate(&sp.mirror, sp.mirror_last, 0.0, n_max, sp.mirror_scale, mode);
    let rest: Vec<Complex64> = sums
        .checkpoint_totals
        .iter()
        .zip(sp.forward.iter().zip(&sp.mirror))
        .map(|(t, (f, m))| t - f - m)
        .collect();
    let rest_last = sums.total - sp.forward_last - sp.mirror_last;
    let remainder = extrapolate(&rest, rest_last, sums.last_term, n_max, sums.scale, mode);
    let total = forward + mirror + remainder;
    let tol = 10.0 * cfg.target_tol;
    Ok(ParityDecomposition {
        kernel: spec.to_string(),
        n_max,
        order_r_forward: forward,
        order_r_mirror: mirror,
        lower_order_remainder: remainder,
        pass: total.value.norm() <= tol,
        total,
        tolerance: tol,
    })
}

#[cfg(test)]
mod tests {
    use super::closed_form as cf;
    use super::*;
    use crate::laurent::ls_coeff;
    use crate::numerics::root_of_unity;
    use std::f64::consts::PI;

    fn cfg() -> EvalConfig {
        EvalConfig::default()
    }

    fn root(a: i64, n: u64) -> RootOfUnity {
        root_of_unity(a, n).unwrap()
    }

    fn u(a: i64, n: u64) -> UnitParam {
        UnitParam::Exact(root(a, n))
    }

    /// `Σ_{k<N} x^k/(k+s)^p` summed directly.
    fn direct_normalized(p: i32, x: Complex64, s: Complex64, terms: u64) -> Complex64 {
        let mut acc = CompensatedSum::new();
        let mut pw = Complex64::new(1.0, 0.0);
        for k in 0..terms {
            acc.add(pw / (s + k as f64).powi(p));
            pw *= x;
        }
        acc.value()
    }

    #[test]
    fn neg_expansion_at_zero() {
        let s = phi_expansion_neg(0, 1, &UnitParam::minus_one(), 2, &cfg()).unwrap();
        assert_eq!(s.min_order(), -1);
        assert!((ls_coeff(&s, -1).unwrap() - 1.0).norm() < 1e-15);
        assert!((ls_coeff(&s, 0).unwrap() + 2f64.ln()).norm() < 1e-14);
    }

    #[test]
    fn principal_coefficient_is_power() {
        for n in [0u64, 1, 5, 13] {
            let x = u(2, 5);
            let s = phi_expansion_neg(n, 3, &x, 2, &cfg()).unwrap();
            assert!((s.coeffs()[0] - root(2 * n as i64, 5).complex_value()).norm() < 1e-15);
        }
    }

    #[test]
    fn neg_expansion_pointwise() {
        let x = u(1, 4);
        let s = phi_expansion_neg(2, 2, &x, 16, &cfg()).unwrap();
        let pt = Complex64::new(-2.0 + 0.05, 0.0);
        let direct = direct_normalized(2, Complex64::i(), pt, 1_000_000);
        assert!((s.eval(pt) - direct).norm() < 1e-6, "{} vs {}", s.eval(pt), direct);
        let interior = UnitParam::approx(Complex64::new(0.3, 0.4)).unwrap();
        let s = phi_expansion_neg(3, 1, &interior, 16, &cfg()).unwrap();
        let pt = Complex64::new(-3.0, 0.08);
        let direct = direct_normalized(1, interior.value(), pt, 400);
        assert!((s.eval(pt) - direct).norm() < 1e-12);
    }

    #[test]
    fn pos_expansion() {
        let x = u(1, 3);
        let s = phi_expansion_pos(1, 1, &x, 3, &cfg()).unwrap();
        let li1 = polylog(1, &x, &cfg()).unwrap().value;
        assert!((s.coeffs()[0] - x.value().inv() * li1).norm() < 1e-14);
        let far = phi_expansion_pos(4000, 2, &x, 3, &cfg()).unwrap();
        assert!(far.coeffs().iter().all(|c| c.norm() < 1e-3));
        let s = phi_expansion_pos(3, 2, &u(1, 4), 16, &cfg()).unwrap();
        let pt = Complex64::new(3.0, -0.07);
        let direct = direct_normalized(2, Complex64::i(), pt, 1_000_000);
        assert!((s.eval(pt) - direct).norm() < 1e-6);
        assert!(phi_expansion_pos(0, 1, &x, 2, &cfg()).is_err());
        assert!(matches!(phi_expansion_neg(0, 1, &UnitParam::one(), 2, &cfg()), Err(Error::Divergent(_))));
    }

    #[test]
    fn big_phi_cot_and_csc() {
        let s = big_phi_expansion(0, RootOfUnity::ONE, 8, &cfg()).unwrap();
        for m in 0..8 {
            let c = ls_coeff(&s, m).unwrap();
            if m % 2 == 0 {
                assert!(c.norm() < 1e-12);
            } else {
                let want = -2.0 * crate::polylog::zeta(m as u32 + 1);
                assert!((c.re - want).abs() < 1e-12 && c.im.abs() < 1e-12);
            }
        }
        assert!((ls_coeff(&s, 1).unwrap().re + PI * PI / 3.0).abs() < 1e-12);
        let s = big_phi_expansion(0, RootOfUnity::MINUS_ONE, 8, &cfg()).unwrap();
        assert!((ls_coeff(&s, 1).unwrap().re - PI * PI / 6.0).abs() < 1e-12);
        assert!(ls_coeff(&s, 0).unwrap().norm() < 1e-12);
        let odd = big_phi_expansion(3, RootOfUnity::MINUS_ONE, 4, &cfg()).unwrap();
        assert!((ls_coeff(&odd, -1).unwrap() + 1.0).norm() < 1e-15);
        let s = big_phi_expansion(1, root(1, 4), 3, &cfg()).unwrap();
        let s0 = big_phi_expansion(0, root(1, 4), 3, &cfg()).unwrap();
        for (a, b) in s.coeffs().iter().zip(s0.coeffs()) {
            assert!((a - b * Complex64::new(0.0, -1.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn big_phi_pointwise() {
        // Σ_{k∈Z} x^k/(k+s) = π e^{iπs(1−2a)}/sin(πs) for x = e^{2πia}, 0 < a < 1.
        for (num, den) in [(1i64, 3u64), (1, 2), (3, 4)] {
            let a = num as f64 / den as f64;
            for n in [-2i64, 0, 3] {
                let s = big_phi_expansion(n, root(num, den), 20, &cfg()).unwrap();
                let pt = Complex64::new(n as f64 + 0.06, 0.03);
                let want = Complex64::from_polar(1.0, PI * (1.0 - 2.0 * a) * pt.re)
                    * (Complex64::new(0.0, PI * (1.0 - 2.0 * a)) * Complex64::new(0.0, pt.im)).exp()
                    * PI
                    / (pt * PI).sin();
                assert!((s.eval(pt) - want).norm() < 1e-12, "a={a} n={n}");
            }
        }
        let s = big_phi_expansion(2, RootOfUnity::ONE, 20, &cfg()).unwrap();
        let pt = Complex64::new(2.05, 0.0);
        assert!((s.eval(pt).re - PI / (PI * pt.re).tan()).abs() < 1e-12);
    }

    #[test]
    fn validation() {
        assert!(matches!(KernelSpec::f(vec![1], 1, RootOfUnity::ONE, vec![UnitParam::one()]), Err(Error::Divergent(_))));
        match KernelSpec::f(vec![2], 1, RootOfUnity::MINUS_ONE, vec![UnitParam::minus_one()]) {
            Err(Error::Divergent(m)) => assert!(m.contains("(q,x")),
            other => panic!("{other:?}"),
        }
        assert!(KernelSpec::g(vec![1, 1], 1, vec![u(1, 4), u(3, 4)]).is_err());
        assert!(KernelSpec::g(vec![1], 2, vec![]).is_err());
        let mut bad = KernelSpec::g(vec![1], 2, vec![u(1, 2)]).unwrap();
        bad.big_phi_arg = Some(RootOfUnity::ONE);
        assert!(bad.validate().is_err());
    }

    #[test]
    fn engine_matches_linear_closed_form() {
        let c = cfg();
        let (x, y) = (root(1, 3), u(1, 4));
        for (p, q) in [(1u32, 1u32), (2, 1), (1, 3), (3, 2)] {
            let spec = KernelSpec::f(vec![p], q, x, vec![y]).unwrap();
            let z = kernel_residue(&spec, 0, &c).unwrap();
            assert!((z - cf::linear_f_zero(p, q, x, &y, &c).unwrap()).norm() < 1e-12);
            for n in [1u64, 2, 7] {
                let a = kernel_residue(&spec, n as i64, &c).unwrap();
                assert!((a - cf::linear_f_pos(p, q, x, &y, n, &c).unwrap()).norm() < 1e-12);
                let b = kernel_residue(&spec, -(n as i64), &c).unwrap();
                assert!((b - cf::linear_f_neg(p, q, x, &y, n, &c).unwrap()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn engine_matches_triple_g_closed_form() {
        let c = cfg();
        let xs = [u(1, 2), u(1, 3), UnitParam::approx(Complex64::new(0.2, -0.5)).unwrap()];
        for q in 1..=3 {
            let spec = KernelSpec::g(vec![1, 1, 1], q, xs.to_vec()).unwrap();
            let refs = [&xs[0], &xs[1], &xs[2]];
            let z = kernel_residue(&spec, 0, &c).unwrap();
            assert!((z - cf::triple_g_zero(q, refs, &c).unwrap()).norm() < 1e-10);
            for n in [1u64, 4] {
                let b = kernel_residue(&spec, -(n as i64), &c).unwrap();
                assert!((b - cf::triple_g_neg(q, refs, n, &c).unwrap()).norm() < 1e-10);
                assert_eq!(kernel_residue(&spec, n as i64, &c).unwrap(), czero());
            }
        }
    }

    #[test]
    fn engine_matches_double_and_quadratic_closed_forms() {
        let c = cfg();
        let (x1, x2) = (u(1, 3), UnitParam::approx(Complex64::new(0.4, 0.3)).unwrap());
        let x = root(1, 4);
        for (p1, p2, q) in [(1u32, 1u32, 1u32), (2, 1, 2), (1, 3, 1), (2, 2, 3)] {
            let g = KernelSpec::g(vec![p1, p2], q, vec![x1, x2]).unwrap();
            let z = kernel_residue(&g, 0, &c).unwrap();
            assert!((z - cf::double_g_zero(p1, p2, q, &x1, &x2, &c).unwrap()).norm() < 1e-10);
            let f = KernelSpec::f(vec![p1, p2], q, x, vec![x1, x2]).unwrap();
            let z = kernel_residue(&f, 0, &c).unwrap();
            assert!((z - cf::quadratic_f_zero(p1, p2, q, x, &x1, &x2, &c).unwrap()).norm() < 1e-10);
            for n in [1u64, 3, 10] {
                let ni = n as i64;
                let b = kernel_residue(&g, -ni, &c).unwrap();
                assert!((b - cf::double_g_neg(p1, p2, q, &x1, &x2, n, &c).unwrap()).norm() < 1e-10);
                let a = kernel_residue(&f, ni, &c).unwrap();
                assert!((a - cf::quadratic_f_pos(p1, p2, q, x, &x1, &x2, n, &c).unwrap()).norm() < 1e-10);
                let b = kernel_residue(&f, -ni, &c).unwrap();
                assert!((b - cf::quadratic_f_neg(p1, p2, q, x, &x1, &x2, n, &c).unwrap()).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn engine_matches_cubic_and_quartic_closed_forms() {
        let c = cfg();
        let xs = [u(1, 2), u(2, 3), UnitParam::approx(Complex64::new(-0.5, 0.1)).unwrap(), u(1, 5)];
        let x = root(1, 6);
        for q in 1..=3 {
            let f = KernelSpec::f(vec![1, 1, 1], q, x, xs[..3].to_vec()).unwrap();
            let r3 = [&xs[0], &xs[1], &xs[2]];
            let z = kernel_residue(&f, 0, &c).unwrap();
            assert!((z - cf::cubic_f_zero(q, x, r3, &c).unwrap()).norm() < 1e-10);
            let g = KernelSpec::g(vec![1, 1, 1, 1], q, xs.to_vec()).unwrap();
            let r4 = [&xs[0], &xs[1], &xs[2], &xs[3]];
            let z = kernel_residue(&g, 0, &c).unwrap();
            assert!((z - cf::quartic_g_zero(q, r4, &c).unwrap()).norm() < 1e-10);
            for n in [1u64, 2, 9] {
                let ni = n as i64;
                let a = kernel_residue(&f, ni, &c).unwrap();
                assert!((a - cf::cubic_f_pos(q, x, r3, n, &c).unwrap()).norm() < 1e-10);
                let b = kernel_residue(&f, -ni, &c).unwrap();
                assert!((b - cf::cubic_f_neg(q, x, r3, n, &c).unwrap()).norm() < 1e-10);
                let b = kernel_residue(&g, -ni, &c).unwrap();
                assert!((b - cf::quartic_g_neg(q, r4, n, &c).unwrap()).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn lemma_total_boundary() {
        let spec = KernelSpec::f(vec![1], 2, RootOfUnity::ONE, vec![UnitParam::minus_one()]).unwrap();
        let c = cfg().with_tol(1e-6);
        let rep = residue_total(&spec, 10_000, &c).unwrap();
        assert!(rep.pass, "{:?}", rep.extrapolated_total);
        assert!(rep.extrapolated_total.value.norm() <= 1e-5);
        assert!(rep.per_pole.contains_key(&0) && rep.per_pole.contains_key(&-64) && !rep.per_pole.contains_key(&65));
        assert_eq!(rep.partial_totals.last().unwrap().n, 10_000);
    }

    #[test]
    fn lemma_total_interior() {
        let xs = vec![UnitParam::approx(Complex64::new(0.7, 0.0)).unwrap(), UnitParam::approx(Complex64::new(0.0, 0.7)).unwrap()];
        let spec = KernelSpec::g(vec![1, 1], 3, xs).unwrap();
        let c = cfg().with_tol(1e-10);
        let rep = residue_total(&spec, 400, &c).unwrap();
        assert!(rep.extrapolated_total.value.norm() <= 1e-9, "{:?}", rep.extrapolated_total);
    }

    #[test]
    fn sign_conventions_both_vanish() {
        let spec = KernelSpec::f(vec![1, 2], 2, root(1, 3), vec![u(1, 2), u(1, 4)]).unwrap();
        let c = cfg().with_tol(1e-6);
        let a = residue_total(&spec, 4096, &c).unwrap();
        let b = residue_total(&spec.clone().with_sign(SignConvention::Plain), 4096, &c).unwrap();
        assert!(a.pass && b.pass);
        assert!((a.per_pole[&-3] - b.per_pole[&-3]).norm() < 1e-15);
    }

    #[test]
    fn decomposition_vanishes() {
        let m = UnitParam::minus_one();
        let spec = KernelSpec::f(vec![1, 1], 2, RootOfUnity::MINUS_ONE, vec![m, m]).unwrap();
        let c = cfg().with_tol(1e-6);
        let d = parity_decompose(&spec, 4096, &c).unwrap();
        assert!(d.total.value.norm() <= 1e-5, "{:?}", d);
        assert!(d.order_r_forward.value.norm() > 1e-3);
        let g = KernelSpec::g(vec![1], 2, vec![m]).unwrap();
        assert!(parity_decompose(&g, 100, &c).is_err());
    }

    #[test]
    fn checkpoint_alignment() {
        assert_eq!(checkpoints(10_000, 2), vec![624, 1248, 2496, 4992, 9984]);
        assert_eq!(checkpoints(10, 12), vec![10]);
        assert_eq!(checkpoints(40, 12), vec![12, 24]);
    }
}
