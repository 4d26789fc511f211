//! Multiple polylogarithms `Li_{k₁,…,k_r}(x₁,…,x_r)`.
//!
//! Index convention: the sum runs over `0 < n₁ < ⋯ < n_r`, so the last pair
//! `(k_r, x_r)` sits on the outermost (largest) index and governs
//! convergence. Some references use the reversed order; this crate never does.

use crate::accel::accelerate_series;
use crate::asymptotic::{nested_mpl, EngineArg};
use crate::cache;
use crate::error::{Error, Result};
use crate::numerics::{record_terms, CompensatedSum, EvalConfig, Twist, ValueWithError, DISK_TOL};
use crate::polylog::PowerIter;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Exponents and twists of a multiple polylogarithm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MplSpec {
    k: Vec<u32>,
    x: Vec<Twist>,
}

impl MplSpec {
    /// Validates lengths and convergence: every tail product `x_j⋯x_r` lies
    /// in the closed disk, and `(k_r, x_r) ≠ (1, 1)`. A tail product on the
    /// circle must come from exact roots or interior factors unless all
    /// factors are floating points on the circle.
    pub fn new(k: Vec<u32>, x: Vec<Twist>) -> Result<Self> {
        if k.is_empty() || k.len() != x.len() {
            return Err(Error::Domain(format!(
                "MPL needs equally many exponents and arguments (got {} and {})",
                k.len(),
                x.len()
            )));
        }
        if k.contains(&0) {
            return Err(Error::Domain("MPL exponents must be positive".into()));
        }
        let r = k.len();
        let mut tail = Twist::one();
        for j in (0..r).rev() {
            tail = tail.mul(&x[j]);
            if tail.modulus() > 1.0 + DISK_TOL {
                return Err(Error::Divergent(format!(
                    "|x_{}⋯x_{}| = {:.6} > 1",
                    j + 1,
                    r,
                    tail.modulus()
                )));
            }
        }
        if k[r - 1] == 1 && x[r - 1].is_one() {
            return Err(Error::Divergent("(k_r,x_r)=(1,1)".into()));
        }
        Ok(MplSpec { k, x })
    }

    /// Convenience constructor from disk parameters.
    pub fn from_units(k: Vec<u32>, x: Vec<crate::numerics::UnitParam>) -> Result<Self> {
        Self::new(k, x.into_iter().map(Twist::from).collect())
    }

    pub fn k(&self) -> &[u32] {
        &self.k
    }

    pub fn x(&self) -> &[Twist] {
        &self.x
    }

    pub fn weight(&self) -> u32 {
        self.k.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.k.len()
    }

    pub fn conj(&self) -> MplSpec {
        MplSpec { k: self.k.clone(), x: self.x.iter().map(|t| t.conj()).collect() }
    }

    /// Moduli of the tail products `|x_j⋯x_r|`.
    fn tail_moduli(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.depth()];
        let mut tail = Twist::one();
        for j in (0..self.depth()).rev() {
            tail = tail.mul(&self.x[j]);
            out[j] = tail.modulus();
        }
        out
    }

    pub fn canonical(&self) -> String {
        let ks: Vec<String> = self.k.iter().map(|k| k.to_string()).collect();
        let xs: Vec<String> = self.x.iter().map(|x| x.to_string()).collect();
        format!("{};{}", ks.join(","), xs.join(","))
    }
}

impl fmt::Display for MplSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ks: Vec<String> = self.k.iter().map(|k| k.to_string()).collect();
        let xs: Vec<String> = self.x.iter().map(|x| x.to_string()).collect();
        write!(f, "Li_{{{}}}({})", ks.join(","), xs.join(","))
    }
}

/// Evaluates a multiple polylogarithm, memoized.
pub fn mpl_eval(spec: &MplSpec, cfg: &EvalConfig) -> Result<ValueWithError> {
    let key = format!("mpl|{}|{}", spec.canonical(), cfg.cache_tag());
    cache::global().get_or_compute(key, || mpl_eval_uncached(spec, cfg))
}

/// Evaluation route, chosen from the arguments:
/// roots of unity and interior points go through the tail engine; specs with
/// all tail products strictly inside the disk are summed directly; anything
/// else (floating points on the circle) is accelerated.
pub fn mpl_eval_uncached(spec: &MplSpec, cfg: &EvalConfig) -> Result<ValueWithError> {
    cfg.validate()?;
    let engine_args: Option<Vec<EngineArg>> = spec.x.iter().map(EngineArg::classify).collect();
    if let Some(args) = engine_args {
        match nested_mpl(&spec.k, &args, cfg.max_terms) {
            Ok(o) => return check_tol(o.value, o.abs_err, o.terms, cfg.target_tol),
            Err(Error::Convergence { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    let tails = spec.tail_moduli();
    let rho = tails.iter().cloned().fold(0.0, f64::max);
    if rho < 1.0 - DISK_TOL {
        return direct_geometric(spec, rho, cfg);
    }
    if spec.x.iter().any(|t| t.modulus() > 1.0 + DISK_TOL) {
        return Err(Error::Domain(format!(
            "{spec}: arguments outside the disk with a tail product on the circle are unsupported"
        )));
    }
    accelerated(spec, cfg)
}

fn check_tol(value: Complex64, err: f64, terms: u64, tol: f64) -> Result<ValueWithError> {
    let v = ValueWithError::new(value, err, terms);
    if err <= tol {
        Ok(v)
    } else {
        Err(Error::Convergence { message: format!("error estimate {err:.3e} above {tol:.1e}"), best: v })
    }
}

/// Runs the prefix-sum recursion, calling `outer(m, g_r(m))` for each outer term.
/// `A_j(n) = Σ_{m≤n} x_j^m m^{-k_j} A_{j-1}(m-1)`, `A_0 = 1`.
struct Prefix {
    k: Vec<u32>,
    powers: Vec<PowerIter>,
    sums: Vec<CompensatedSum>,
    vals: Vec<Complex64>,
    m: u64,
}

impl Prefix {
    fn new(spec: &MplSpec) -> Self {
        let r = spec.depth();
        let mut vals = vec![Complex64::new(0.0, 0.0); r + 1];
        vals[0] = Complex64::new(1.0, 0.0);
        Prefix {
            k: spec.k.clone(),
            powers: spec.x.iter().map(PowerIter::new).collect(),
            sums: vec![CompensatedSum::new(); r + 1],
            vals,
            m: 0,
        }
    }

    /// Advances to the next `m` and returns the outermost term `g_r(m)`.
    fn step(&mut self) -> Complex64 {
        self.m += 1;
        let mf = self.m as f64;
        let r = self.k.len();
        let pw: Vec<Complex64> = self.powers.iter_mut().map(|p| p.next_power()).collect();
        let mut last = Complex64::new(0.0, 0.0);
        for j in (1..=r).rev() {
            let t = pw[j - 1] * mf.powi(-(self.k[j - 1] as i32)) * self.vals[j - 1];
            if j == r {
                last = t;
            }
            self.sums[j].add(t);
            self.vals[j] = self.sums[j].value();
        }
        last
    }

    fn total(&self) -> Complex64 {
        self.vals[self.k.len()]
    }
}

fn direct_geometric(spec: &MplSpec, rho: f64, cfg: &EvalConfig) -> Result<ValueWithError> {
    let mut pre = Prefix::new(spec);
    let eps: f64 = 1e-17;
    let min_terms = if rho > 0.0 { ((eps.ln() / rho.ln()).ceil() as u64).max(8) } else { 8 };
    let depth = spec.depth() as i32;
    loop {
        let g = pre.step();
        let m = pre.m;
        // Remaining terms are bounded by a geometric series in ρ with a
        // polynomial factor from the inner sums.
        let tail = g.norm() * (m as f64).powi(depth) * rho / (1.0 - rho).max(1e-300);
        if m >= min_terms && tail < eps {
            record_terms(m * spec.depth() as u64);
            let v = pre.total();
            return Ok(ValueWithError::new(v, tail + 1e-15 * v.norm().max(1e-2), m));
        }
        if m >= cfg.max_terms {
            record_terms(m * spec.depth() as u64);
            let v = pre.total();
            return check_tol(v, tail.max(rho.powf(m as f64)), m, cfg.target_tol);
        }
    }
}

fn accelerated(spec: &MplSpec, cfg: &EvalConfig) -> Result<ValueWithError> {
    let mut pre = Prefix::new(spec);
    let tol = cfg.boundary_tol.max(cfg.target_tol);
    accelerate_series(|_| pre.step(), cfg.accel_mode, tol, cfg.max_terms)
}

/// Literal nested summation over `0 < n₁ < ⋯ < n_r ≤ N` (cost `N^r`).
pub fn brute_force_mpl(spec: &MplSpec, n: u64) -> Complex64 {
    let r = spec.depth();
    let terms: Vec<Vec<Complex64>> = (0..r)
        .map(|j| {
            let mut p = PowerIter::new(&spec.x[j]);
            std::iter::once(Complex64::new(0.0, 0.0))
                .chain((1..=n).map(|m| p.next_power() / (m as f64).powi(spec.k[j] as i32)))
                .collect()
        })
        .collect();
    let mut sum = CompensatedSum::new();
    nested_loop(&terms, 0, 0, Complex64::new(1.0, 0.0), n, &mut sum);
    record_terms(n.pow(r as u32));
    sum.value()
}

fn nested_loop(terms: &[Vec<Complex64>], j: usize, lower: u64, prod: Complex64, n: u64, sum: &mut CompensatedSum) {
    if j + 1 == terms.len() {
        for m in lower + 1..=n {
            sum.add(prod * terms[j][m as usize]);
        }
        return;
    }
    let remaining = (terms.len() - j - 1) as u64;
    for m in lower + 1..=n.saturating_sub(remaining) {
        nested_loop(terms, j + 1, m, prod * terms[j][m as usize], n, sum);
    }
}

/// Parses bar notation such as `bar3,2,bar1,4` (or `3-,2,1-,4`); a barred
/// index has argument −1, others +1.
pub fn parse_amzv(text: &str) -> Result<MplSpec> {
    let mut k = Vec::new();
    let mut x = Vec::new();
    for raw in text.split(',') {
        let tok = raw.trim();
        let (digits, barred) = if let Some(d) = tok.strip_prefix("bar") {
            (d, true)
        } else if let Some(d) = tok.strip_suffix('-') {
            (d, true)
        } else {
            (tok, false)
        };
        let v: u32 = digits
            .parse()
            .map_err(|_| Error::Parse(format!("bad index {tok:?} in {text:?}")))?;
        if v == 0 {
            return Err(Error::Parse(format!("index must be positive in {text:?}")));
        }
        k.push(v);
        x.push(if barred { Twist::Exact(crate::numerics::RootOfUnity::MINUS_ONE) } else { Twist::one() });
    }
    MplSpec::new(k, x)
}

/// Alternating multiple zeta value from bar notation.
pub fn amzv_eval(text: &str, cfg: &EvalConfig) -> Result<ValueWithError> {
    mpl_eval(&parse_amzv(text)?, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::UnitParam;
    use std::f64::consts::PI;

    fn c(re: f64) -> Twist {
        Twist::Approx(Complex64::new(re, 0.0))
    }

    #[test]
    fn depth_one_is_polylog() {
        let s = MplSpec::from_units(vec![2], vec![UnitParam::minus_one()]).unwrap();
        let v = mpl_eval(&s, &EvalConfig::default()).unwrap();
        assert!((v.value.re + PI * PI / 12.0).abs() < 1e-14);
    }

    #[test]
    fn brute_force_examples() {
        let s = MplSpec::new(vec![1, 1], vec![c(0.5), c(0.5)]).unwrap();
        assert!((brute_force_mpl(&s, 2).re - 1.0 / 16.0).abs() < 1e-17);
        let s = MplSpec::new(vec![2], vec![Twist::one()]).unwrap();
        assert!((brute_force_mpl(&s, 3).re - 49.0 / 36.0).abs() < 1e-15);
    }

    #[test]
    fn parse_examples() {
        let s = parse_amzv("bar3,2,bar1,4").unwrap();
        assert_eq!(s.k(), &[3, 2, 1, 4]);
        let vals: Vec<f64> = s.x().iter().map(|t| t.value().re).collect();
        assert_eq!(vals, vec![-1.0, 1.0, -1.0, 1.0]);
        assert_eq!(parse_amzv("3-,2").unwrap(), parse_amzv("bar3,2").unwrap());
        assert!(matches!(parse_amzv("1"), Err(Error::Divergent(_))));
        assert!(matches!(parse_amzv("x"), Err(Error::Parse(_))));
        assert!(matches!(parse_amzv(""), Err(Error::Parse(_))));
    }

    #[test]
    fn exterior_argument_with_interior_tails() {
        // Li_{1,2}(2, 0.25): tail products 0.5 and 0.25.
        let s = MplSpec::new(vec![1, 2], vec![c(2.0), c(0.25)]).unwrap();
        let v = mpl_eval(&s, &EvalConfig::default()).unwrap();
        let b = brute_force_mpl(&s, 200);
        assert!((v.value - b).norm() < 1e-13);
        assert!(MplSpec::new(vec![1, 2], vec![c(0.25), c(2.0)]).is_err());
    }

    #[test]
    fn non_root_boundary_accelerated() {
        let z = Twist::Approx(Complex64::from_polar(1.0, 1.0));
        let s = MplSpec::new(vec![2], vec![z]).unwrap();
        let v = mpl_eval_uncached(&s, &EvalConfig::default()).unwrap();
        assert!(v.accelerated);
        let re = PI * PI / 6.0 - (2.0 * PI - 1.0) / 4.0;
        assert!((v.value.re - re).abs() < 1e-8);
    }
}
