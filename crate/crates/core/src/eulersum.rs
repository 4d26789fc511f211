//! Generalized Euler sums `S_{p₁,…,p_k;q}(x₁,…,x_k;x) = Σ_n xⁿ n^{-q} Π_j ζₙ(p_j;x_j)`
//! and their expansions into multiple polylogarithms.

use crate::accel::accelerate_series;
use crate::asymptotic::{self, EngineArg};
use crate::cache;
use crate::error::{Error, Result};
use crate::mpl::{mpl_eval, MplSpec};
use crate::numerics::{record_terms, CompensatedSum, EvalConfig, Twist, ValueWithError, DISK_TOL};
use crate::polylog::PowerIter;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Exponents and twists of a generalized Euler sum.
///
/// The `(p_j, x_j)` pairs form a multiset; they are kept in canonical order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EulerSumSpec {
    p: Vec<u32>,
    q: u32,
    args: Vec<Twist>,
    outer: Twist,
}

impl EulerSumSpec {
    /// Validates `|x₁⋯x_k·x| ≤ 1` and `(q, x) ≠ (1, 1)`.
    pub fn new(p: Vec<u32>, q: u32, args: Vec<Twist>, outer: Twist) -> Result<Self> {
        if p.len() != args.len() {
            return Err(Error::Domain(format!(
                "Euler sum needs equally many exponents and arguments (got {} and {})",
                p.len(),
                args.len()
            )));
        }
        if q == 0 || p.contains(&0) {
            return Err(Error::Domain("Euler sum exponents must be positive".into()));
        }
        let mut all = args.clone();
        all.push(outer);
        let prod = Twist::product(&all);
        if prod.modulus() > 1.0 + DISK_TOL {
            return Err(Error::Divergent(format!("|x₁⋯x_k·x| = {:.6} > 1", prod.modulus())));
        }
        if q == 1 && outer.is_one() {
            return Err(Error::Divergent("(q,x)=(1,1)".into()));
        }
        let mut pairs: Vec<(u32, Twist)> = p.into_iter().zip(args).collect();
        pairs.sort_by_key(|(pj, xj)| (*pj, xj.to_string()));
        let (p, args) = pairs.into_iter().unzip();
        Ok(EulerSumSpec { p, q, args, outer })
    }

    pub fn from_units(
        p: Vec<u32>,
        q: u32,
        args: Vec<crate::numerics::UnitParam>,
        outer: crate::numerics::UnitParam,
    ) -> Result<Self> {
        Self::new(p, q, args.into_iter().map(Twist::from).collect(), outer.into())
    }

    pub fn p(&self) -> &[u32] {
        &self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn args(&self) -> &[Twist] {
        &self.args
    }

    pub fn outer(&self) -> Twist {
        self.outer
    }

    pub fn weight(&self) -> u32 {
        self.p.iter().sum::<u32>() + self.q
    }

    pub fn order(&self) -> usize {
        self.p.len()
    }

    pub fn conj(&self) -> EulerSumSpec {
        EulerSumSpec::new(
            self.p.clone(),
            self.q,
            self.args.iter().map(|t| t.conj()).collect(),
            self.outer.conj(),
        )
        .expect("conjugation preserves admissibility")
    }

    /// Cache key: sorted pairs, then `q` and the outer argument.
    pub fn canonical(&self) -> String {
        let pairs: Vec<String> = self.p.iter().zip(&self.args).map(|(p, x)| format!("{p}@{x}")).collect();
        format!("{};{};{}", pairs.join(","), self.q, self.outer)
    }
}

impl fmt::Display for EulerSumSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.p.iter().map(|k| k.to_string()).collect();
        let xs: Vec<String> = self.args.iter().map(|x| x.to_string()).collect();
        write!(f, "S_{{{};{}}}({};{})", ps.join(","), self.q, xs.join(","), self.outer)
    }
}

/// Evaluates a generalized Euler sum, memoized.
pub fn euler_sum_eval(spec: &EulerSumSpec, cfg: &EvalConfig) -> Result<ValueWithError> {
    let key = format!("es|{}|{}", spec.canonical(), cfg.cache_tag());
    cache::global().get_or_compute(key, || euler_sum_eval_uncached(spec, cfg))
}

/// Route: tail engine for roots of unity and interior points; direct
/// summation when `|x|·Π max(1,|x_j|) < 1`; acceleration otherwise.
pub fn euler_sum_eval_uncached(spec: &EulerSumSpec, cfg: &EvalConfig) -> Result<ValueWithError> {
    cfg.validate()?;
    let classified: Option<Vec<EngineArg>> = spec.args.iter().map(EngineArg::classify).collect();
    if let (Some(args), Some(outer)) = (classified, EngineArg::classify(&spec.outer)) {
        match asymptotic::euler_sum(&spec.p, &args, spec.q, outer, cfg.max_terms) {
            Ok(o) => {
                let v = ValueWithError::new(o.value, o.abs_err, o.terms);
                if o.abs_err > cfg.target_tol {
                    return Err(Error::Convergence {
                        message: format!("error estimate {:.3e} above {:.1e}", o.abs_err, cfg.target_tol),
                        best: v,
                    });
                }
                return Ok(v);
            }
            Err(Error::Convergence { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    let rho = spec.outer.modulus() * spec.args.iter().map(|t| t.modulus().max(1.0)).product::<f64>();
    if rho < 1.0 - DISK_TOL {
        return direct_geometric(spec, rho, cfg);
    }
    if spec.args.iter().any(|t| t.modulus() > 1.0 + DISK_TOL) {
        return Err(Error::Domain(format!(
            "{spec}: factors outside the disk with a boundary outer product are unsupported"
        )));
    }
    let mut run = Running::new(spec);
    let tol = cfg.boundary_tol.max(cfg.target_tol);
    accelerate_series(|_| run.step(), cfg.accel_mode, tol, cfg.max_terms)
}

/// Single pass over `n` keeping each running `ζₙ(p_j;x_j)`.
struct Running {
    p: Vec<u32>,
    q: u32,
    powers: Vec<PowerIter>,
    outer: PowerIter,
    factors: Vec<CompensatedSum>,
    total: CompensatedSum,
    n: u64,
}

impl Running {
    fn new(spec: &EulerSumSpec) -> Self {
        Running {
            p: spec.p.clone(),
            q: spec.q,
            powers: spec.args.iter().map(PowerIter::new).collect(),
            outer: PowerIter::new(&spec.outer),
            factors: vec![CompensatedSum::new(); spec.p.len()],
            total: CompensatedSum::new(),
            n: 0,
        }
    }

    fn step(&mut self) -> Complex64 {
        self.n += 1;
        let nf = self.n as f64;
        let mut prod = Complex64::new(1.0, 0.0);
        for j in 0..self.p.len() {
            self.factors[j].add(self.powers[j].next_power() * nf.powi(-(self.p[j] as i32)));
            prod *= self.factors[j].value();
        }
        let t = self.outer.next_power() * prod * nf.powi(-(self.q as i32));
        self.total.add(t);
        t
    }
}

fn direct_geometric(spec: &EulerSumSpec, rho: f64, cfg: &EvalConfig) -> Result<ValueWithError> {
    let mut run = Running::new(spec);
    let eps: f64 = 1e-17;
    let min_terms = if rho > 0.0 { ((eps.ln() / rho.ln()).ceil() as u64).max(8) } else { 8 };
    loop {
        let t = run.step();
        let n = run.n;
        let tail = t.norm() * (n as f64).powi(spec.order() as i32) * rho / (1.0 - rho);
        if (n >= min_terms && tail < eps) || n >= cfg.max_terms {
            record_terms(n * (spec.order() as u64 + 1));
            let v = run.total.value();
            let err = tail + 1e-15 * v.norm().max(1e-2);
            let out = ValueWithError::new(v, err, n);
            if err > cfg.target_tol {
                return Err(Error::Convergence {
                    message: format!("geometric tail {err:.3e} above {:.1e}", cfg.target_tol),
                    best: out,
                });
            }
            return Ok(out);
        }
    }
}

/// A signed product of multiple polylogarithms.
#[derive(Clone, Debug, PartialEq)]
pub struct MplTerm {
    pub coeff: f64,
    pub factors: Vec<MplSpec>,
}

impl fmt::Display for MplTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.coeff < 0.0 { "-" } else { "+" };
        let body: Vec<String> = self.factors.iter().map(|s| s.to_string()).collect();
        if (self.coeff.abs() - 1.0).abs() < 1e-15 {
            write!(f, "{sign}{}", body.join("·"))
        } else {
            write!(f, "{sign}{}·{}", self.coeff.abs(), body.join("·"))
        }
    }
}

fn li(k: Vec<u32>, x: Vec<Twist>) -> Result<MplSpec> {
    MplSpec::new(k, x)
}

fn term(coeff: f64, factors: Vec<MplSpec>) -> MplTerm {
    MplTerm { coeff, factors }
}

/// `S_{p;q}(x;y) = Li_{p,q}(x,y) + Li_{p+q}(xy)`.
pub fn stuffle_linear(p: u32, q: u32, x: Twist, y: Twist) -> Result<Vec<MplTerm>> {
    Ok(vec![
        term(1.0, vec![li(vec![p, q], vec![x, y])?]),
        term(1.0, vec![li(vec![p + q], vec![x.mul(&y)])?]),
    ])
}

/// Six-term expansion of `S_{p₁,p₂;q}(x₁,x₂;x)`.
pub fn stuffle_quadratic(p1: u32, p2: u32, q: u32, x1: Twist, x2: Twist, x: Twist) -> Result<Vec<MplTerm>> {
    let x12 = x1.mul(&x2);
    Ok(vec![
        term(1.0, vec![li(vec![p1, p2, q], vec![x1, x2, x])?]),
        term(1.0, vec![li(vec![p2, p1, q], vec![x2, x1, x])?]),
        term(1.0, vec![li(vec![p1 + p2, q], vec![x12, x])?]),
        term(1.0, vec![li(vec![p1, p2 + q], vec![x1, x2.mul(&x)])?]),
        term(1.0, vec![li(vec![p2, p1 + q], vec![x2, x1.mul(&x)])?]),
        term(1.0, vec![li(vec![p1 + p2 + q], vec![x12.mul(&x)])?]),
    ])
}

/// `S_{p₁,p₂;q}(x₁,x₂;x) = −Li_{p₂,q,p₁}(x₂,x,x₁) − Li_{p₂+q,p₁}(x₂x,x₁)
/// + Li_{p₁}(x₁)(Li_{p₂,q}(x₂,x) + Li_{p₂+q}(x₂x))`.
pub fn quadratic_to_mpl_chain(p1: u32, p2: u32, q: u32, x1: Twist, x2: Twist, x: Twist) -> Result<Vec<MplTerm>> {
    if p1 == 1 && x1.is_one() {
        return Err(Error::Domain("(p1,x1)=(1,1)".into()));
    }
    if q == 1 && x.is_one() {
        return Err(Error::Domain("(q,x)=(1,1)".into()));
    }
    let l1 = li(vec![p1], vec![x1])?;
    Ok(vec![
        term(-1.0, vec![li(vec![p2, q, p1], vec![x2, x, x1])?]),
        term(-1.0, vec![li(vec![p2 + q, p1], vec![x2.mul(&x), x1])?]),
        term(1.0, vec![l1.clone(), li(vec![p2, q], vec![x2, x])?]),
        term(1.0, vec![l1, li(vec![p2 + q], vec![x2.mul(&x)])?]),
    ])
}

/// Numeric value of a term list.
pub fn evaluate_terms(terms: &[MplTerm], cfg: &EvalConfig) -> Result<ValueWithError> {
    let mut total = ValueWithError::zero();
    for t in terms {
        let mut v = ValueWithError::real(t.coeff);
        for f in &t.factors {
            v = v * mpl_eval(f, cfg)?;
        }
        total = total + v;
    }
    Ok(total)
}
