//! Catalog of parity identities with independent left/right evaluators,
//! single-point checks and seeded sweeps.
//!
//! Every record carries a parameter schema, a constraint check, a left-hand
//! evaluator, a right-hand evaluator and optionally alternative readings of
//! the right-hand side. Alternatives are always evaluated and reported next to
//! the main reading; they never change the main verdict.

mod formulas;

use crate::error::{Error, Result};
use crate::numerics::{root_of_unity, EvalConfig, Twist, UnitParam, ValueWithError};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

/// Default tolerance when every argument is a root of unity.
pub const BOUNDARY_TOL: f64 = 1e-5;
/// Default tolerance when some argument lies strictly inside the disk.
pub const INTERIOR_TOL: f64 = 1e-8;
/// Rejection-sampling budget per draw.
pub const MAX_SAMPLER_ATTEMPTS: usize = 10_000;

const MAX_SWEEP_EXPONENT: u32 = 4;
const MAX_SWEEP_ROOT_ORDER: u64 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamKind {
    /// Positive integer exponent.
    Exponent,
    /// Root of unity.
    Root,
    /// Root of unity or a nonzero point of the open unit disk.
    Unit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamSpec {
    pub name: String,
    pub kind: ParamKind,
    /// Smallest admissible exponent (exponents only).
    pub min: u32,
    /// Value used when the caller leaves the parameter out.
    pub default: Option<String>,
    /// Present only when the record's order is at least this value; 0 means always present.
    pub rank: u32,
}

impl ParamSpec {
    fn exponent(name: &str) -> Self {
        ParamSpec { name: name.into(), kind: ParamKind::Exponent, min: 1, default: None, rank: 0 }
    }

    fn root(name: &str) -> Self {
        ParamSpec { name: name.into(), kind: ParamKind::Root, min: 0, default: None, rank: 0 }
    }

    fn unit(name: &str) -> Self {
        ParamSpec { name: name.into(), kind: ParamKind::Unit, min: 0, default: None, rank: 0 }
    }

    fn min(mut self, m: u32) -> Self {
        self.min = m;
        self
    }

    fn default(mut self, d: &str) -> Self {
        self.default = Some(d.into());
        self
    }

    fn rank(mut self, r: u32) -> Self {
        self.rank = r;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(u32),
    Unit(UnitParam),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Int(v) => write!(f, "{v}"),
            ParamValue::Unit(u) => write!(f, "{u}"),
        }
    }
}

pub type Params = BTreeMap<String, ParamValue>;

/// Read access to validated parameters.
pub struct Args<'a> {
    params: &'a Params,
}

impl Args<'_> {
    pub fn int(&self, name: &str) -> Result<u32> {
        match self.params.get(name) {
            Some(ParamValue::Int(v)) => Ok(*v),
            _ => Err(Error::Domain(format!("missing integer parameter {name}"))),
        }
    }

    pub fn tw(&self, name: &str) -> Result<Twist> {
        match self.params.get(name) {
            Some(ParamValue::Unit(u)) => Ok(u.to_twist()),
            _ => Err(Error::Domain(format!("missing argument {name}"))),
        }
    }

    pub fn has(&self, name: &str) -> bool {
        self.params.contains_key(name)
    }
}

type EvalFn = fn(&Args, &EvalConfig) -> Result<ValueWithError>;
type ConstraintFn = fn(&Args) -> Result<Option<String>>;

/// Alternative reading of a right-hand side.
#[derive(Clone)]
pub struct Reading {
    pub label: &'static str,
    eval: EvalFn,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// All arguments are roots of unity.
    Boundary,
    /// Arguments are either all roots or all interior points.
    General,
    /// Worked example at fixed exponents.
    Example,
}

#[derive(Clone)]
pub struct IdentityRecord {
    pub id: &'static str,
    pub title: &'static str,
    /// Short statement of the identity.
    pub anchor: &'static str,
    pub family: Family,
    pub params: Vec<ParamSpec>,
    /// Overrides the boundary/interior default tolerance.
    pub base_tol: Option<f64>,
    pub note: &'static str,
    pub readings: Vec<Reading>,
    lhs: EvalFn,
    rhs: EvalFn,
    constraint: ConstraintFn,
}

impl fmt::Debug for IdentityRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IdentityRecord").field("id", &self.id).field("title", &self.title).finish()
    }
}

/// Serializable summary of a record for listings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentitySummary {
    pub id: String,
    pub title: String,
    pub anchor: String,
    pub family: Family,
    pub params: Vec<ParamSpec>,
    pub readings: Vec<String>,
}

impl IdentityRecord {
    pub fn summary(&self) -> IdentitySummary {
        IdentitySummary {
            id: self.id.into(),
            title: self.title.into(),
            anchor: self.anchor.into(),
            family: self.family,
            params: self.params.clone(),
            readings: self.readings.iter().map(|r| r.label.to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReadingReport {
    pub label: String,
    pub rhs: ValueWithError,
    pub abs_diff: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub id: String,
    pub params: BTreeMap<String, String>,
    pub lhs: ValueWithError,
    pub rhs: ValueWithError,
    pub abs_diff: f64,
    pub tol_used: f64,
    pub pass: bool,
    pub notes: String,
    pub alternatives: Vec<ReadingReport>,
}

impl VerificationReport {
    /// Main reading passes, or some alternative reading does.
    pub fn pass_any(&self) -> bool {
        self.pass || self.alternatives.iter().any(|a| a.pass)
    }
}

fn verdict(lhs: &ValueWithError, rhs: &ValueWithError, tol: f64) -> (f64, bool) {
    let d = (lhs.value - rhs.value).norm();
    (d, d.is_finite() && d <= tol + lhs.abs_err + rhs.abs_err)
}

// ------------------------------------------------------------ constraints

fn prod(a: &Args, names: &[&str]) -> Result<Twist> {
    let ts: Vec<Twist> = names.iter().map(|n| a.tw(n)).collect::<Result<_>>()?;
    Ok(Twist::product(&ts))
}

fn clause(cond: bool, text: &str) -> Option<String> {
    cond.then(|| text.to_string())
}

fn first(cs: Vec<Option<String>>) -> Option<String> {
    cs.into_iter().flatten().next()
}

fn not_one(a: &Args, names: &[&str]) -> Result<Option<String>> {
    for n in names {
        if a.tw(n)?.is_one() {
            return Ok(Some(format!("{n}=1")));
        }
    }
    Ok(None)
}

fn nonzero(a: &Args, names: &[&str]) -> Result<Option<String>> {
    for n in names {
        if a.tw(n)?.modulus() == 0.0 {
            return Ok(Some(format!("{n}=0")));
        }
    }
    Ok(None)
}

fn c_thm31(a: &Args) -> Result<Option<String>> {
    let xy = prod(a, &["x", "y"])?;
    Ok(first(vec![
        clause(a.int("q")? == 1 && xy.is_one(), "(q,xy)=(1,1)"),
        clause(a.int("p")? == 1 && a.tw("y")?.is_one(), "(p,y)=(1,1)"),
    ]))
}

fn c_thm32(a: &Args) -> Result<Option<String>> {
    if let Some(c) = nonzero(a, &["x1", "x2"])?.or(not_one(a, &["x1", "x2"])?) {
        return Ok(Some(c));
    }
    Ok(clause(a.int("q")? == 1 && prod(a, &["x1", "x2"])?.is_one(), "(q,x1x2)=(1,1)"))
}

fn c_cor33(a: &Args) -> Result<Option<String>> {
    c_thm32(a)
}

fn c_eq35(a: &Args) -> Result<Option<String>> {
    if let Some(c) = nonzero(a, &["x"])?.or(not_one(a, &["x"])?) {
        return Ok(Some(c));
    }
    Ok(clause(a.int("q")? == 1 && prod(a, &["x", "x"])?.is_one(), "(q,x^2)=(1,1)"))
}

fn c_none(_: &Args) -> Result<Option<String>> {
    Ok(None)
}

fn c_quadratic_c(a: &Args) -> Result<Option<String>> {
    let w = prod(a, &["x", "x1", "x2"])?;
    let ps = [a.int("p1").unwrap_or(1), a.int("p2").unwrap_or(1)];
    let mut cs = vec![clause(a.int("q")? == 1 && w.is_one(), "(q,xx1x2)=(1,1)")];
    for (j, n) in ["x1", "x2"].iter().enumerate() {
        if ps[j] == 1 && a.tw(n)?.is_one() {
            cs.push(Some(format!("(p{},{n})=(1,1)", j + 1)));
        }
    }
    Ok(first(cs))
}

fn c_example(a: &Args) -> Result<Option<String>> {
    not_one(a, &["x1", "x2"])
}

fn c_thm4g(a: &Args) -> Result<Option<String>> {
    let names = ["x1", "x2", "x3"];
    if let Some(c) = nonzero(a, &names)?.or(not_one(a, &names)?) {
        return Ok(Some(c));
    }
    Ok(clause(a.int("q")? == 1 && prod(a, &names)?.is_one(), "(q,x1x2x3)=(1,1)"))
}

fn c_eq44(a: &Args) -> Result<Option<String>> {
    if let Some(c) = nonzero(a, &["x"])?.or(not_one(a, &["x"])?) {
        return Ok(Some(c));
    }
    Ok(clause(a.int("q")? == 1 && prod(a, &["x", "x", "x"])?.is_one(), "(q,x^3)=(1,1)"))
}

fn c_chain4(a: &Args) -> Result<Option<String>> {
    Ok(first(vec![
        clause(a.int("p1")? == 1 && a.tw("x1")?.is_one(), "(p1,x1)=(1,1)"),
        clause(a.int("q")? == 1 && a.tw("x")?.is_one(), "(q,x)=(1,1)"),
    ]))
}

fn c_thm51(a: &Args) -> Result<Option<String>> {
    if let Some(c) = not_one(a, &["x1", "x2", "x3"])? {
        return Ok(Some(c));
    }
    Ok(clause(a.int("q")? == 1 && prod(a, &["x", "x1", "x2", "x3"])?.is_one(), "(q,xx1x2x3)=(1,1)"))
}

fn c_thm5g(a: &Args) -> Result<Option<String>> {
    let names = ["x1", "x2", "x3", "x4"];
    if let Some(c) = nonzero(a, &names)?.or(not_one(a, &names)?) {
        return Ok(Some(c));
    }
    Ok(clause(a.int("q")? == 1 && prod(a, &names)?.is_one(), "(q,x1x2x3x4)=(1,1)"))
}

fn c_thm55(a: &Args) -> Result<Option<String>> {
    let mut names = vec!["x"];
    for j in 1..=3 {
        let (pn, xn) = (format!("p{j}"), format!("x{j}"));
        if !a.has(&pn) {
            break;
        }
        if a.int(&pn)? == 1 && a.tw(&xn)?.is_one() {
            return Ok(Some(format!("({pn},{xn})=(1,1)")));
        }
        names.push(["x1", "x2", "x3"][j - 1]);
    }
    Ok(clause(a.int("q")? == 1 && prod(a, &names)?.is_one(), "(q,xx1..xr)=(1,1)"))
}

// ---------------------------------------------------------------- catalog

fn rec(
    id: &'static str,
    title: &'static str,
    anchor: &'static str,
    family: Family,
    params: Vec<ParamSpec>,
    lhs: EvalFn,
    rhs: EvalFn,
    constraint: ConstraintFn,
) -> IdentityRecord {
    IdentityRecord {
        id,
        title,
        anchor,
        family,
        params,
        base_tol: None,
        note: "",
        readings: Vec::new(),
        lhs,
        rhs,
        constraint,
    }
}

impl IdentityRecord {
    fn with_readings(mut self, rs: Vec<(&'static str, EvalFn)>) -> Self {
        self.readings = rs.into_iter().map(|(label, eval)| Reading { label, eval }).collect();
        self
    }

    fn with_note(mut self, note: &'static str) -> Self {
        self.note = note;
        self
    }

    fn with_tol(mut self, tol: f64) -> Self {
        self.base_tol = Some(tol);
        self
    }
}

fn e(n: &str) -> ParamSpec {
    ParamSpec::exponent(n)
}

fn r(n: &str) -> ParamSpec {
    ParamSpec::root(n)
}

fn u(n: &str) -> ParamSpec {
    ParamSpec::unit(n)
}

/// Tolerance for worked examples.
pub const EXAMPLE_TOL: f64 = 1e-4;

/// All built-in identities, sorted by id.
pub fn register_builtin() -> Result<Vec<IdentityRecord>> {
    use formulas as f;
    use Family::*;
    let ex_args = || vec![r("x").default("root:1/2"), r("x1").default("root:1/4"), r("x2").default("root:1/3")];
    let list = vec![
        rec(
            "thm-3.1",
            "linear parity via multiple polylogarithms",
            "Li_{p,q}(y,1/(xy)) - (-1)^{p+q} Li_{p,q}(1/y,xy) in depth-one polylogarithms",
            Boundary,
            vec![e("p"), e("q"), r("x"), r("y")],
            f::thm31_lhs,
            f::thm31_rhs,
            c_thm31,
        ),
        rec(
            "thm-3.2",
            "generalized linear sums over x1x2",
            "weighted S_{k+p1;q+p2-k-1}(1/x1;x1x2) and S_{k+p2;q+p1-k-1}(1/x2;x1x2) in polylogarithms",
            General,
            vec![e("p1"), e("p2"), e("q"), u("x1"), u("x2")],
            f::thm32_lhs,
            f::thm32_rhs,
            c_thm32,
        )
        .with_readings(vec![("Li_{k+p2}(x2) in the second single sum", f::thm32_rhs_x2)])
        .with_note("the binomial in the double sum reads C(k1+p1-1,p1-1)C(k2+p2-1,p2-1)"),
        rec(
            "cor-3.3",
            "S_{1;q} pair over x1x2",
            "S_{1;q}(1/x1;x1x2) + S_{1;q}(1/x2;x1x2) in polylogarithms",
            General,
            vec![e("q"), u("x1"), u("x2")],
            f::cor33_lhs,
            f::cor33_rhs,
            c_cor33,
        ),
        rec(
            "eq-3.5",
            "S_{1;q}(1/x;x^2)",
            "S_{1;q}(1/x;x^2) in polylogarithms of x and x^2",
            General,
            vec![e("q"), u("x")],
            f::eq35_lhs,
            f::eq35_rhs,
            c_eq35,
        ),
        rec(
            "eq-3.6",
            "classical linear sum S_{1;q}",
            "S_{1;q}(1;1) = (1+q/2) zeta(q+1) - 1/2 sum zeta(k+1) zeta(q-k)",
            Boundary,
            vec![e("q").min(2)],
            f::eq36_lhs,
            f::eq36_rhs,
            c_none,
        ),
        rec(
            "thm-4.1",
            "quadratic parity",
            "S_{p1,p2;q}(x1,x2;1/(xx1x2)) + (-1)^{p1+p2+q} S_{p1,p2;q}(1/x1,1/x2;xx1x2) in linear sums",
            Boundary,
            vec![e("p1"), e("p2"), e("q"), r("x"), r("x1"), r("x2")],
            f::thm41_lhs,
            f::thm41_rhs,
            c_quadratic_c,
        ),
        rec(
            "cor-4.1a",
            "quadratic parity at p1=p2=1",
            "S_{1,1;q}(x1,x2;1/(xx1x2)) + (-1)^q S_{1,1;q}(1/x1,1/x2;xx1x2) in linear sums",
            Boundary,
            vec![e("q"), r("x"), r("x1"), r("x2")],
            f::cor41a_lhs,
            f::cor41a_rhs,
            c_quadratic_c,
        )
        .with_readings(vec![("Li_{q+1}(1/(x xj)) for the Li_1(xj) products", f::cor41a_rhs_inv)]),
        rec(
            "ex-4.1",
            "quadratic parity at (p1,p2,q)=(1,2,2)",
            "S_{1,2;2}(x1,x2;1/(xx1x2)) - S_{1,2;2}(1/x1,1/x2;xx1x2) expanded",
            Example,
            ex_args(),
            f::ex41_lhs,
            f::ex41_rhs,
            c_example,
        )
        .with_tol(EXAMPLE_TOL),
        rec(
            "ex-4.2",
            "quadratic parity at (p1,p2,q)=(1,1,2)",
            "S_{1,1;2}(x1,x2;1/(xx1x2)) + S_{1,1;2}(1/x1,1/x2;xx1x2) expanded",
            Example,
            ex_args(),
            f::ex42_lhs,
            f::ex42_rhs,
            c_example,
        )
        .with_tol(EXAMPLE_TOL),
        rec(
            "thm-4G",
            "generalized quadratic sums over x1x2x3",
            "sum over pairs of S_{1,1;q}(1/xi,1/xj;x1x2x3) in linear sums",
            General,
            vec![e("q"), u("x1"), u("x2"), u("x3")],
            f::thm4g_lhs,
            f::thm4g_rhs,
            c_thm4g,
        ),
        rec(
            "eq-4.4",
            "S_{1,1;q}(1/x,1/x;x^3)",
            "S_{1,1;q}(1/x,1/x;x^3) in linear sums",
            General,
            vec![e("q"), u("x")],
            f::eq44_lhs,
            f::eq44_rhs,
            c_eq44,
        ),
        rec(
            "chain-4",
            "quadratic sums as multiple polylogarithms",
            "S_{p1,p2;q}(x1,x2;x) = -Li_{p2,q,p1}(x2,x,x1) - Li_{p2+q,p1}(x2x,x1) + Li_{p1}(x1)(Li_{p2,q}(x2,x) + Li_{p2+q}(x2x))",
            Boundary,
            vec![e("p1"), e("p2"), e("q"), r("x"), r("x1"), r("x2")],
            f::chain4_lhs,
            f::chain4_rhs,
            c_chain4,
        ),
        rec(
            "thm-5.1",
            "cubic parity",
            "S_{1,1,1;q}(x1,x2,x3;1/(xx1x2x3)) + (-1)^q S_{1,1,1;q}(1/x1,1/x2,1/x3;xx1x2x3) in lower-order sums",
            Boundary,
            vec![e("q"), r("x"), r("x1"), r("x2"), r("x3")],
            f::thm51_lhs,
            f::thm51_rhs,
            c_thm51,
        )
        .with_readings(vec![
            ("S_{1,1;q+1} block over c=3,2,1", f::thm51_rhs_set),
            ("(-1)^{k1+k2+k3} in the four-fold sum", f::thm51_rhs_sign),
            ("both corrections", f::thm51_rhs_both),
        ]),
        rec(
            "ex-5.2a",
            "cubic parity at x=q=1, xi=-1",
            "alternating quadratic sums in linear sums and zeta values",
            Example,
            vec![],
            f::ex52a_lhs,
            f::ex52a_rhs,
            c_none,
        )
        .with_tol(EXAMPLE_TOL)
        .with_note("zeta(k bar) is Li_k(-1)"),
        rec(
            "ex-5.2b",
            "cubic parity at x=q=1, xi=-1, alternating MZV form",
            "6 zeta(2b,1b,1b) + 6 zeta(1b,2b,1b) + 6 zeta(1b,1b,2b) - 6 zeta(1b,1b,2) in depth <= 2",
            Example,
            vec![],
            f::ex52b_lhs,
            f::ex52b_rhs,
            c_none,
        )
        .with_tol(EXAMPLE_TOL)
        .with_readings(vec![("-6 zeta(2b) zeta(1b,1b) in place of +6", f::ex52b_rhs_sign)])
        .with_note("zeta(k bar) is Li_k(-1)"),
        rec(
            "thm-5G",
            "generalized cubic sums over x1x2x3x4",
            "sum over triples of S_{1,1,1;q}(1/xa,1/xb,1/xc;x1x2x3x4) in lower-order sums",
            General,
            vec![e("q"), u("x1"), u("x2"), u("x3"), u("x4")],
            f::thm5g_lhs,
            f::thm5g_rhs,
            c_thm5g,
        )
        .with_note("lhs is -(-1)^q times the cubic sums, rhs is minus every other term"),
        rec(
            "ex-5.4a",
            "generalized cubic at q=2, xi=-1",
            "2 S_{1,1,1;2}(-1,-1,-1;1) in linear and quadratic sums",
            Example,
            vec![],
            f::ex54a_lhs,
            f::ex54a_rhs,
            c_none,
        )
        .with_tol(EXAMPLE_TOL)
        .with_readings(vec![("log^2(2) in place of log^2(-1)", f::ex54a_rhs_log2)])
        .with_note("log^2(-1) is taken as (i pi)^2"),
        rec(
            "ex-5.4b",
            "generalized cubic at q=2, xi=-1, alternating MZV form",
            "6 zeta(1b,1b,1b,2) in alternating MZVs of depth <= 3",
            Example,
            vec![],
            f::ex54b_lhs,
            f::ex54b_rhs,
            c_none,
        )
        .with_tol(EXAMPLE_TOL),
        rec(
            "thm-5.5",
            "parity reduction in arbitrary order",
            "(-1)^r S_{p;q}(x;1/(x x1..xr)) + (-1)^{|p|+q} S_{p;q}(1/x;x x1..xr) in lower-order sums",
            Boundary,
            vec![
                e("p1"),
                e("p2").rank(2),
                e("p3").rank(3),
                e("q"),
                r("x"),
                r("x1"),
                r("x2").rank(2),
                r("x3").rank(3),
            ],
            f::thm55_lhs,
            f::thm55_rhs,
            c_thm55,
        )
        .with_note("rhs is the residue remainder plus subset sums from zeta_{n-1} = zeta_n - x^n/n^p"),
    ];
    let mut seen = HashSet::new();
    for r in &list {
        if !seen.insert(r.id) {
            return Err(Error::Internal(format!("duplicate identity id {}", r.id)));
        }
        if r.anchor.is_empty() {
            return Err(Error::Internal(format!("empty anchor for {}", r.id)));
        }
    }
    let mut list = list;
    list.sort_by(|a, b| a.id.cmp(b.id));
    Ok(list)
}

pub fn lookup(id: &str) -> Result<IdentityRecord> {
    register_builtin()?
        .into_iter()
        .find(|r| r.id == id)
        .ok_or_else(|| Error::UnknownIdentity(id.to_string()))
}

// ----------------------------------------------------------- parameters

fn parse_value(spec: &ParamSpec, text: &str) -> Result<ParamValue> {
    match spec.kind {
        ParamKind::Exponent => {
            let v: u32 = text
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("{}: expected a positive integer, got {text:?}", spec.name)))?;
            Ok(ParamValue::Int(v))
        }
        ParamKind::Root | ParamKind::Unit => Ok(ParamValue::Unit(UnitParam::from_str(text.trim())?)),
    }
}

/// Parses `name=value` pairs separated by commas or whitespace against a record's schema.
pub fn parse_params(record: &IdentityRecord, text: &str) -> Result<Params> {
    let mut out = Params::new();
    for item in text.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()) {
        let (name, value) =
            item.split_once('=').ok_or_else(|| Error::Parse(format!("expected name=value, got {item:?}")))?;
        let spec = record
            .params
            .iter()
            .find(|p| p.name == name.trim())
            .ok_or_else(|| Error::Parse(format!("{} has no parameter {name:?}", record.id)))?;
        out.insert(spec.name.clone(), parse_value(spec, value)?);
    }
    Ok(out)
}

/// Fills defaults and checks presence, kinds and ranges.
pub fn validate_params(record: &IdentityRecord, params: &Params) -> Result<Params> {
    let mut out = params.clone();
    for name in params.keys() {
        if !record.params.iter().any(|p| &p.name == name) {
            return Err(Error::Domain(format!("{} has no parameter {name}", record.id)));
        }
    }
    let order = record
        .params
        .iter()
        .filter(|p| p.rank > 0 && params.contains_key(&p.name))
        .map(|p| p.rank)
        .max()
        .unwrap_or(1);
    for spec in &record.params {
        if !out.contains_key(&spec.name) {
            if let Some(d) = &spec.default {
                out.insert(spec.name.clone(), parse_value(spec, d)?);
            } else if spec.rank <= order {
                return Err(Error::Domain(format!("{}: missing parameter {}", record.id, spec.name)));
            }
        }
        let Some(v) = out.get(&spec.name).cloned() else { continue };
        match (spec.kind, v) {
            (ParamKind::Exponent, ParamValue::Int(k)) => {
                if k < spec.min.max(1) {
                    return Err(Error::Domain(format!("{} must be at least {}", spec.name, spec.min.max(1))));
                }
            }
            (ParamKind::Root, ParamValue::Unit(u)) => {
                let snapped = u.to_twist().snapped();
                match snapped {
                    Twist::Exact(r) => {
                        out.insert(spec.name.clone(), ParamValue::Unit(UnitParam::Exact(r)));
                    }
                    Twist::Approx(_) => {
                        return Err(Error::Domain(format!("{} must be a root of unity, got {u}", spec.name)))
                    }
                }
            }
            (ParamKind::Unit, ParamValue::Unit(u)) => {
                let z = u.value();
                if z.norm() == 0.0 {
                    return Err(Error::Domain(format!("{}=0", spec.name)));
                }
                if u.on_circle() && !u.is_exact() {
                    if let Twist::Exact(r) = u.to_twist().snapped() {
                        out.insert(spec.name.clone(), ParamValue::Unit(UnitParam::Exact(r)));
                    }
                }
            }
            (_, v) => return Err(Error::Domain(format!("{}: wrong kind of value {v}", spec.name))),
        }
    }
    if record.family == Family::General {
        let units: Vec<&UnitParam> = out
            .values()
            .filter_map(|v| match v {
                ParamValue::Unit(u) => Some(u),
                _ => None,
            })
            .collect();
        let interior = units.iter().any(|u| !u.is_exact());
        if interior && units.iter().any(|u| u.is_exact()) {
            return Err(Error::Domain(format!(
                "{}: arguments must be all roots of unity or all interior points",
                record.id
            )));
        }
    }
    // Rank-gated slots must come in matched pairs with no gaps.
    for spec in record.params.iter().filter(|p| p.rank > 0) {
        if spec.rank > order && out.contains_key(&spec.name) {
            return Err(Error::Domain(format!("{}: {} given without lower slots", record.id, spec.name)));
        }
    }
    Ok(out)
}

fn default_tol(record: &IdentityRecord, params: &Params) -> f64 {
    if let Some(t) = record.base_tol {
        return t;
    }
    let interior = params.values().any(|v| matches!(v, ParamValue::Unit(u) if !u.is_exact()));
    if interior {
        INTERIOR_TOL
    } else {
        BOUNDARY_TOL
    }
}

// ----------------------------------------------------------------- checks

/// Checks one identity at one parameter point with the default tolerance.
pub fn check_identity(id: &str, params: &Params, cfg: &EvalConfig) -> Result<VerificationReport> {
    check_identity_with_tol(id, params, None, cfg)
}

pub fn check_identity_with_tol(
    id: &str,
    params: &Params,
    tol: Option<f64>,
    cfg: &EvalConfig,
) -> Result<VerificationReport> {
    let record = lookup(id)?;
    check_record(&record, params, tol, cfg)
}

pub fn check_record(
    record: &IdentityRecord,
    params: &Params,
    tol: Option<f64>,
    cfg: &EvalConfig,
) -> Result<VerificationReport> {
    cfg.validate()?;
    let params = validate_params(record, params)?;
    let args = Args { params: &params };
    if let Some(c) = (record.constraint)(&args)? {
        return Err(Error::Domain(format!("{}: excluded by {c}", record.id)));
    }
    let tol = tol.unwrap_or_else(|| default_tol(record, &params));
    let lhs = (record.lhs)(&args, cfg)?;
    let rhs = (record.rhs)(&args, cfg)?;
    let (abs_diff, pass) = verdict(&lhs, &rhs, tol);
    let mut alternatives = Vec::new();
    for reading in &record.readings {
        let alt = (reading.eval)(&args, cfg)?;
        let (d, p) = verdict(&lhs, &alt, tol);
        alternatives.push(ReadingReport { label: reading.label.into(), rhs: alt, abs_diff: d, pass: p });
    }
    let mut notes = record.note.to_string();
    for a in &alternatives {
        if !notes.is_empty() {
            notes.push_str("; ");
        }
        notes.push_str(&format!("alternative [{}]: |lhs-rhs| = {:.3e}", a.label, a.abs_diff));
    }
    Ok(VerificationReport {
        id: record.id.into(),
        params: params.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
        lhs,
        rhs,
        abs_diff,
        tol_used: tol,
        pass,
        notes,
        alternatives,
    })
}

// ---------------------------------------------------------------- sweeps

fn random_root(rng: &mut ChaCha8Rng) -> UnitParam {
    let n = rng.gen_range(1..=MAX_SWEEP_ROOT_ORDER);
    let a = rng.gen_range(0..n) as i64;
    UnitParam::Exact(root_of_unity(a, n).expect("order is positive"))
}

fn random_interior(rng: &mut ChaCha8Rng) -> UnitParam {
    let m = rng.gen_range(0.3..0.8);
    let t = rng.gen_range(0.0..std::f64::consts::TAU);
    UnitParam::Approx(Complex64::from_polar(m, t))
}

fn draw(record: &IdentityRecord, rng: &mut ChaCha8Rng) -> Params {
    let order = if record.params.iter().any(|p| p.rank > 0) { rng.gen_range(1..=3u32) } else { 1 };
    let interior = record.family == Family::General && rng.gen_bool(0.5);
    let mut out = Params::new();
    for spec in &record.params {
        if spec.rank > order {
            continue;
        }
        let v = match spec.kind {
            ParamKind::Exponent => ParamValue::Int(rng.gen_range(spec.min.max(1)..=MAX_SWEEP_EXPONENT)),
            ParamKind::Root => ParamValue::Unit(random_root(rng)),
            ParamKind::Unit if interior => ParamValue::Unit(random_interior(rng)),
            ParamKind::Unit => ParamValue::Unit(random_root(rng)),
        };
        out.insert(spec.name.clone(), v);
    }
    out
}

/// Draws one admissible parameter point, rejecting excluded ones.
pub fn sample_params(record: &IdentityRecord, rng: &mut ChaCha8Rng) -> Result<Params> {
    for _ in 0..MAX_SAMPLER_ATTEMPTS {
        let p = draw(record, rng);
        let Ok(p) = validate_params(record, &p) else { continue };
        if (record.constraint)(&Args { params: &p })?.is_none() {
            return Ok(p);
        }
    }
    Err(Error::SamplerExhausted { id: record.id.into(), attempts: MAX_SAMPLER_ATTEMPTS })
}

/// Deterministic parameter draws for a seed.
pub fn sweep_points(record: &IdentityRecord, seed: u64, count: usize) -> Result<Vec<Params>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| sample_params(record, &mut rng)).collect()
}

/// Checks `count` seeded random points. Evaluation failures at a point show
/// up as failing reports; reports come back in draw order.
pub fn sweep_identity(id: &str, seed: u64, count: usize, cfg: &EvalConfig) -> Result<Vec<VerificationReport>> {
    sweep_identity_with_tol(id, seed, count, None, cfg)
}

pub fn sweep_identity_with_tol(
    id: &str,
    seed: u64,
    count: usize,
    tol: Option<f64>,
    cfg: &EvalConfig,
) -> Result<Vec<VerificationReport>> {
    cfg.validate()?;
    let record = lookup(id)?;
    let points = sweep_points(&record, seed, count)?;
    Ok(points
        .par_iter()
        .map(|p| {
            check_record(&record, p, tol, cfg).unwrap_or_else(|e| VerificationReport {
                id: record.id.into(),
                params: p.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
                lhs: ValueWithError::zero(),
                rhs: ValueWithError::zero(),
                abs_diff: f64::MAX,
                tol_used: tol.unwrap_or_else(|| default_tol(&record, p)),
                pass: false,
                notes: format!("evaluation failed: {e}"),
                alternatives: Vec::new(),
            })
        })
        .collect())
}
