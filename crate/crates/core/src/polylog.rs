//! Finite sums `ζₙ(p;x)`, polylogarithms on the closed unit disk and the
//! Hurwitz zeta backend used at roots of unity.

use crate::accel::accelerate_series;
use crate::cache;
use crate::error::{Error, Result};
use crate::numerics::{
    bernoulli_even, unit_point, record_terms, CompensatedSum, EvalConfig, RootOfUnity, Twist, UnitParam,
    ValueWithError,
};
use num_complex::Complex64;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};

/// Value assigned to `Li₀(x) + Li₀(1/x)`; `Li₀` alone is never defined.
pub const LI0_PAIR: f64 = -1.0;

/// Absolute accuracy aimed at by the exact-root and geometric paths.
const FINE_TOL: f64 = 1e-17;

/// `ζₙ(p;x) = Σ_{k≤n} x^k/k^p`, compensated.
pub fn finite_polylog_sum(n: u64, p: u32, x: &UnitParam) -> Complex64 {
    finite_polylog_sum_twist(n, p, &x.to_twist())
}

/// `ζₙ(p;x)` for any nonzero twist, including points outside the disk.
pub fn finite_polylog_sum_twist(n: u64, p: u32, x: &Twist) -> Complex64 {
    let mut sum = CompensatedSum::new();
    let mut powers = PowerIter::new(x);
    for k in 1..=n {
        let z = powers.next_power();
        sum.add(z / (k as f64).powi(p as i32));
    }
    sum.value()
}

/// Successive powers `x¹, x², …`; exact roots are read from a table.
pub(crate) struct PowerIter {
    kind: PowerKind,
    k: u64,
}

enum PowerKind {
    Table { table: Vec<Complex64>, numer: u64, order: u64 },
    Running { x: Complex64, cur: Complex64 },
}

impl PowerIter {
    pub(crate) fn new(x: &Twist) -> Self {
        let kind = match x {
            Twist::Exact(r) => PowerKind::Table {
                table: root_table(r.order()),
                numer: r.numer(),
                order: r.order(),
            },
            Twist::Approx(z) => PowerKind::Running { x: *z, cur: Complex64::new(1.0, 0.0) },
        };
        PowerIter { kind, k: 0 }
    }

    #[inline]
    pub(crate) fn next_power(&mut self) -> Complex64 {
        self.k += 1;
        match &mut self.kind {
            PowerKind::Table { table, numer, order } => {
                table[((*numer as u128 * self.k as u128) % *order as u128) as usize]
            }
            PowerKind::Running { x, cur } => {
                *cur *= *x;
                *cur
            }
        }
    }
}

/// `e^{2πik/N}` for `k = 0..N`.
pub(crate) fn root_table(order: u64) -> Vec<Complex64> {
    (0..order).map(|k| unit_point(k, order)).collect()
}

/// Hurwitz zeta `ζ(p, a) = Σ_{m≥0} (m+a)^{-p}` with an order-8 Euler–Maclaurin tail.
pub fn hurwitz_zeta(p: u32, a: f64) -> Result<f64> {
    hurwitz_zeta_em(p, a, 8).map(|(v, _)| v)
}

/// Hurwitz zeta with a chosen Euler–Maclaurin order; returns the value and
/// the size of the first neglected correction.
pub fn hurwitz_zeta_em(p: u32, a: f64, em_terms: usize) -> Result<(f64, f64)> {
    if p < 2 {
        return Err(Error::Domain(format!("hurwitz zeta needs p ≥ 2, got {p}")));
    }
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::Domain(format!("hurwitz zeta needs 0 < a ≤ 1, got {a}")));
    }
    let em = em_terms.clamp(1, 14);
    let pf = p as f64;
    // Rising factorial (p)_{2j-1} ratio between consecutive corrections.
    let neglected = |x: f64| {
        let j = em + 1;
        let mut rising = 1.0;
        for i in 0..(2 * j - 1) {
            rising *= pf + i as f64;
        }
        bernoulli_even(j).abs() / crate::numerics::factorial(2 * j as u32) * rising
            * x.powf(-pf - (2 * j - 1) as f64)
    };
    let mut m = 4usize;
    while neglected(m as f64 + a) > FINE_TOL && m < 100_000 {
        m += 2;
    }
    let mut head = 0.0f64;
    let mut comp = 0.0f64;
    for k in (0..m).rev() {
        // Smallest terms first.
        let t = (k as f64 + a).powi(-(p as i32));
        let y = t - comp;
        let s = head + y;
        comp = (s - head) - y;
        head = s;
    }
    let x = m as f64 + a;
    let mut tail = x.powf(1.0 - pf) / (pf - 1.0) + 0.5 * x.powf(-pf);
    let mut rising = pf;
    let mut xp = x.powf(-pf - 1.0);
    for j in 1..=em {
        tail += bernoulli_even(j) / crate::numerics::factorial(2 * j as u32) * rising * xp;
        rising *= (pf + (2 * j - 1) as f64) * (pf + (2 * j) as f64);
        xp /= x * x;
    }
    record_terms(m as u64 + em as u64);
    Ok((head + tail, neglected(x)))
}

/// Riemann zeta at an integer `p ≥ 2`.
pub fn zeta(p: u32) -> f64 {
    hurwitz_zeta(p, 1.0).expect("p ≥ 2")
}

fn check_admissible(p: u32, x: &UnitParam) -> Result<()> {
    if p == 0 {
        return Err(Error::Domain("polylog weight must be positive".into()));
    }
    if p == 1 && x.is_one() {
        return Err(Error::Divergent("Li_1(1): (p,x)=(1,1)".into()));
    }
    Ok(())
}

/// `Li_p(x)` on the closed unit disk, memoized.
pub fn polylog(p: u32, x: &UnitParam, cfg: &EvalConfig) -> Result<ValueWithError> {
    check_admissible(p, x)?;
    let key = format!("li|{p}|{x}|{}", cfg.cache_tag());
    cache::global().get_or_compute(key, || polylog_uncached(p, x, cfg))
}

/// `Li_p(x)` without consulting the memo cache.
pub fn polylog_uncached(p: u32, x: &UnitParam, cfg: &EvalConfig) -> Result<ValueWithError> {
    check_admissible(p, x)?;
    cfg.validate()?;
    let snapped = match x {
        UnitParam::Approx(_) if x.on_circle() => match x.to_twist().snapped() {
            Twist::Exact(r) => UnitParam::Exact(r),
            _ => *x,
        },
        _ => *x,
    };
    if p == 1 {
        let z = snapped.value();
        let v = -(Complex64::new(1.0, 0.0) - z).ln();
        return Ok(ValueWithError::new(v, 4e-16 * (v.norm() + 1.0), 0));
    }
    match snapped {
        UnitParam::Exact(r) => polylog_root(p, &r, cfg),
        UnitParam::Approx(z) => {
            let m = z.norm();
            if m == 0.0 {
                return Ok(ValueWithError::exact(Complex64::new(0.0, 0.0)));
            }
            if m < 1.0 - crate::numerics::DISK_TOL {
                if let Some(v) = polylog_geometric(p, z, m, cfg) {
                    return Ok(v);
                }
            }
            let tol = cfg.boundary_tol.max(cfg.target_tol);
            let (r, theta) = z.to_polar();
            accelerate_series(
                |n| Complex64::from_polar(r.powi(n as i32), theta * n as f64) / (n as f64).powi(p as i32),
                cfg.accel_mode,
                tol,
                cfg.max_terms,
            )
        }
    }
}

/// Direct summation for `|x| < 1`, stopping once the geometric tail bound
/// `|x|^{n+1}/((n+1)^p(1-|x|))` is negligible. `None` if the budget is too small.
fn polylog_geometric(p: u32, z: Complex64, m: f64, cfg: &EvalConfig) -> Option<ValueWithError> {
    let bound = |n: u64| m.powf(n as f64 + 1.0) / ((n as f64 + 1.0).powi(p as i32) * (1.0 - m));
    let mut sum = CompensatedSum::new();
    let mut pw = Complex64::new(1.0, 0.0);
    let mut n = 0u64;
    loop {
        n += 1;
        pw *= z;
        sum.add(pw / (n as f64).powi(p as i32));
        let tail = bound(n);
        if tail < FINE_TOL || (n >= cfg.max_terms && tail < cfg.target_tol) {
            record_terms(n);
            let v = sum.value();
            return Some(ValueWithError::new(v, tail + 1e-16 * (1.0 + v.norm()) + n as f64 * 1e-18, n));
        }
        if n >= cfg.max_terms {
            record_terms(n);
            return None;
        }
    }
}

/// `Li_p(e^{2πia/N}) = N^{-p} Σ_{j=1}^{N} e^{2πiaj/N} ζ(p, j/N)`.
fn polylog_root(p: u32, r: &RootOfUnity, cfg: &EvalConfig) -> Result<ValueWithError> {
    let n = r.order();
    let table = root_table(n);
    let mut sum = CompensatedSum::new();
    let mut scale = 0.0f64;
    let mut em_err = 0.0f64;
    for j in 1..=n {
        let (h, e) = hurwitz_zeta_em(p, j as f64 / n as f64, cfg.hurwitz_em_terms)?;
        let w = table[((r.numer() as u128 * j as u128) % n as u128) as usize];
        sum.add(w * h);
        scale += h.abs();
        em_err += e;
    }
    let np = (n as f64).powi(-(p as i32));
    let v = sum.value() * np;
    let err = (4e-16 * scale + em_err) * np + 2e-16 * v.norm();
    Ok(ValueWithError::new(v, err, n * 16))
}

/// A weight/argument pair keyed by its canonical text.
#[derive(Clone, Copy, Debug)]
pub struct PolylogKey {
    pub p: u32,
    pub x: UnitParam,
}

impl PolylogKey {
    pub fn new(p: u32, x: UnitParam) -> Self {
        PolylogKey { p, x }
    }

    pub fn canonical(&self) -> String {
        format!("{}:{}", self.p, self.x)
    }
}

impl PartialEq for PolylogKey {
    fn eq(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }
}

impl Eq for PolylogKey {}

impl Hash for PolylogKey {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical().hash(state);
    }
}

impl fmt::Display for PolylogKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Li_{}({})", self.p, self.x)
    }
}

/// Element-wise [`polylog`]; failures stay attached to their key.
pub fn polylog_batch(keys: &[PolylogKey], cfg: &EvalConfig) -> HashMap<PolylogKey, Result<ValueWithError>> {
    let mut out = HashMap::with_capacity(keys.len());
    for k in keys {
        out.entry(*k).or_insert_with(|| polylog(k.p, &k.x, cfg));
    }
    out
}
