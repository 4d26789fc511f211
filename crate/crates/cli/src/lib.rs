//! Command-line front end: argument parsing, run reports and the persistent
//! value cache.

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use eulersum_core::cache::{self, CacheFile};
use eulersum_core::eulersum::{euler_sum_eval, EulerSumSpec};
use eulersum_core::mpl::{mpl_eval, parse_amzv, MplSpec};
use eulersum_core::numerics::{terms_summed, AccelMode, EvalConfig, Twist, UnitParam, ValueWithError};
use eulersum_core::polylog::{finite_polylog_sum, polylog};
use eulersum_core::registry::{self, VerificationReport};
use eulersum_core::residue::{parity_decompose, residue_total, KernelSpec, SignConvention};
use eulersum_core::Error;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::time::Instant;

pub const CACHE_ENV: &str = "EULERSUM_CACHE";
pub const DEFAULT_CACHE: &str = "./.eulersum-cache.json";
pub const DEFAULT_NMAX: u64 = 4096;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "eulersum", version, about = "Cyclotomic Euler sums, polylogarithms and parity identities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Print the run report as one JSON document.
    #[arg(long, global = true)]
    pub json: bool,
    /// Target accuracy for `eval`/`residue`; tolerance override for `identity`.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Term budget per series.
    #[arg(long, global = true)]
    pub max_terms: Option<u64>,
    /// Acceleration mode: none, aitken, levin or richardson.
    #[arg(long, global = true)]
    pub accel: Option<String>,
    /// Cache file; overrides the EULERSUM_CACHE variable.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Seed for identity sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of sweep samples.
    #[arg(long, global = true, default_value_t = 20)]
    pub count: usize,
    /// Residue truncation `|pole| ≤ nmax`.
    #[arg(long, global = true, default_value_t = DEFAULT_NMAX)]
    pub nmax: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a single quantity.
    #[command(subcommand)]
    Eval(EvalCmd),
    /// List, check or sweep catalogued identities.
    #[command(subcommand)]
    Identity(IdentityCmd),
    /// Residue sums of contour kernels.
    #[command(subcommand)]
    Residue(ResidueCmd),
}

#[derive(Subcommand, Debug)]
pub enum EvalCmd {
    /// Li_p(x).
    Polylog {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        x: String,
    },
    /// Truncated sum ζ_n(p;x).
    Zetan {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        x: String,
    },
    /// Li_{k1..kr}(x1..xr), summed over n1 < ... < nr.
    Mpl {
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<u32>,
        #[arg(long, value_delimiter = ',', required = true)]
        xs: Vec<String>,
    },
    /// Alternating MZV in bar notation, e.g. "bar3,2,bar1,4".
    Amzv {
        #[arg(long)]
        idx: String,
    },
    /// S_{p1..pk;q}(x1..xk;x).
    Eulersum {
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<u32>,
        #[arg(long)]
        q: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        xs: Vec<String>,
        #[arg(long)]
        x: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum IdentityCmd {
    /// Print the catalog.
    List,
    /// Verify one identity at explicit parameters.
    Check {
        #[arg(long)]
        id: String,
        /// Comma-separated `name=value` pairs.
        #[arg(long, default_value = "")]
        params: String,
    },
    /// Verify an identity at seeded random points.
    Sweep {
        #[arg(long)]
        id: String,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    F,
    G,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Reduced,
    Plain,
}

#[derive(Args, Debug)]
pub struct KernelFlags {
    #[arg(long, value_enum, ignore_case = true)]
    pub kernel: KernelArg,
    #[arg(long, value_delimiter = ',', required = true)]
    pub p: Vec<u32>,
    #[arg(long)]
    pub q: u32,
    /// Argument of Φ, required for the F kernel.
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub xs: Vec<String>,
    #[arg(long, value_enum, default_value = "reduced")]
    pub sign: SignArg,
}

#[derive(Subcommand, Debug)]
pub enum ResidueCmd {
    /// Extrapolated total of all residues.
    Check(KernelFlags),
    /// Order-r forward and mirror sums plus the lower-order remainder.
    Decompose(KernelFlags),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub eval: EvalConfig,
    pub tol_override: Option<f64>,
    pub seed: u64,
    pub count: usize,
    pub nmax: u64,
    pub cache_path: String,
    pub cache_entries_loaded: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub pass: bool,
    pub exit_code: i32,
}

impl Summary {
    fn from_flags(flags: &[bool]) -> Self {
        let passed = flags.iter().filter(|&&f| f).count();
        let failed = flags.len() - passed;
        Summary { total: flags.len(), passed, failed, pass: failed == 0, exit_code: if failed == 0 { 0 } else { 1 } }
    }

    fn error(code: i32) -> Self {
        Summary { total: 1, passed: 0, failed: 1, pass: false, exit_code: code }
    }
}

/// Everything one invocation produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub config: ConfigEcho,
    pub results: Value,
    pub error: Option<String>,
    pub wall_time_ms: f64,
    /// Series terms summed in this process; cache hits add nothing.
    pub terms_summed: u64,
    pub summary: Summary,
}

/// Cache location from the flag, the environment, or the default.
pub fn cache_path(flag: Option<&PathBuf>) -> PathBuf {
    flag.cloned()
        .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE))
}

fn build_config(cli: &Cli) -> eulersum_core::Result<EvalConfig> {
    let mut cfg = EvalConfig::default();
    if let Some(m) = cli.max_terms {
        cfg.max_terms = m;
    }
    if let Some(a) = &cli.accel {
        cfg.accel_mode = a.parse::<AccelMode>()?;
    }
    if let (Some(t), false) = (cli.tol, matches!(cli.command, Command::Identity(_))) {
        cfg.target_tol = t;
        cfg.boundary_tol = cfg.boundary_tol.min(t);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn unit(s: &str) -> eulersum_core::Result<UnitParam> {
    s.parse()
}

fn twists(v: &[String]) -> eulersum_core::Result<Vec<Twist>> {
    v.iter().map(|s| s.parse()).collect()
}

fn units(v: &[String]) -> eulersum_core::Result<Vec<UnitParam>> {
    v.iter().map(|s| s.parse()).collect()
}

/// `1` and `-1` print as plain integers, anything else in parameter grammar.
fn short_twist(t: &Twist) -> String {
    let z = t.value();
    if t.is_exact() && z.im.abs() < 1e-15 {
        format!("{}", z.re.round() as i64)
    } else {
        t.to_string()
    }
}

fn value_json(v: &ValueWithError) -> Value {
    json!({ "value": v, "abs_err": v.abs_err, "terms_used": v.terms_used })
}

struct Outcome {
    results: Value,
    flags: Vec<bool>,
    text: String,
}

fn fmt_c(z: Complex64) -> String {
    format!("{:.15} {} {:.15}i", z.re, if z.im < 0.0 { '-' } else { '+' }, z.im.abs())
}

fn fmt_value(v: &ValueWithError) -> String {
    format!("value      = {}\nabs_err    = {:.3e}\nterms_used = {}", fmt_c(v.value), v.abs_err, v.terms_used)
}

fn run_eval(cmd: &EvalCmd, cfg: &EvalConfig) -> eulersum_core::Result<Outcome> {
    let (spec, head, v) = match cmd {
        EvalCmd::Polylog { p, x } => {
            let xu = unit(x)?;
            let v = polylog(*p, &xu, cfg)?;
            (json!({ "kind": "polylog", "p": p, "x": xu }), format!("Li_{p}({xu})"), v)
        }
        EvalCmd::Zetan { n, p, x } => {
            let xu = unit(x)?;
            let z = finite_polylog_sum(*n, *p, &xu);
            let v = ValueWithError::new(z, 1e-16 * (*n as f64) * (z.norm() + 1.0), *n);
            (json!({ "kind": "zetan", "n": n, "p": p, "x": xu }), format!("zeta_{n}({p};{xu})"), v)
        }
        EvalCmd::Mpl { k, xs } => {
            let spec = MplSpec::new(k.clone(), twists(xs)?)?;
            let v = mpl_eval(&spec, cfg)?;
            (json!({ "kind": "mpl", "k": spec.k(), "x": spec.x() }), format!("Li_{:?}({})", spec.k(), join(spec.x())), v)
        }
        EvalCmd::Amzv { idx } => {
            let spec = parse_amzv(idx)?;
            let v = mpl_eval(&spec, cfg)?;
            let xs: Vec<String> = spec.x().iter().map(short_twist).collect();
            let ks: Vec<String> = spec.k().iter().map(|k| k.to_string()).collect();
            let head = format!("zeta({idx}): k=({}), x=({})", ks.join(","), xs.join(","));
            (json!({ "kind": "amzv", "idx": idx, "k": spec.k(), "x": xs }), head, v)
        }
        EvalCmd::Eulersum { p, q, xs, x } => {
            let spec = EulerSumSpec::new(p.clone(), *q, twists(xs)?, x.parse()?)?;
            let v = euler_sum_eval(&spec, cfg)?;
            let head = format!("S_{{{:?};{}}}({};{})", spec.p(), spec.q(), join(spec.args()), spec.outer());
            (json!({ "kind": "eulersum", "p": spec.p(), "q": spec.q(), "xs": spec.args(), "x": spec.outer() }), head, v)
        }
    };
    let text = format!("{head}\n{}", fmt_value(&v));
    let mut results = value_json(&v);
    results["spec"] = spec;
    Ok(Outcome { results, flags: vec![true], text })
}

fn join<T: std::fmt::Display>(v: &[T]) -> String {
    v.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(",")
}

fn report_line(r: &VerificationReport) -> String {
    let prm: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let mut s = format!(
        "{} {} [{}] diff={:.3e} tol={:.0e}",
        if r.pass { "PASS" } else { "FAIL" },
        r.id,
        prm.join(","),
        r.abs_diff,
        r.tol_used
    );
    for a in &r.alternatives {
        s.push_str(&format!("\n    reading \"{}\": diff={:.3e} {}", a.label, a.abs_diff, if a.pass { "pass" } else { "fail" }));
    }
    s
}

fn run_identity(cmd: &IdentityCmd, cli: &Cli, cfg: &EvalConfig) -> eulersum_core::Result<Outcome> {
    match cmd {
        IdentityCmd::List => {
            let all = registry::register_builtin()?;
            let text = all
                .iter()
                .map(|r| {
                    let names: Vec<&str> = r.params.iter().map(|p| p.name.as_str()).collect();
                    format!("{:<9} {}  ({})\n          {}", r.id, r.title, names.join(","), r.anchor)
                })
                .collect::<Vec<_>>()
                .join("\n");
            let list: Vec<_> = all.iter().map(|r| r.summary()).collect();
            let text = format!("{text}\n{} identities", list.len());
            Ok(Outcome { results: json!(list), flags: vec![true; all.len()], text })
        }
        IdentityCmd::Check { id, params } => {
            let record = registry::lookup(id)?;
            let prm = registry::parse_params(&record, params)?;
            let rep = registry::check_record(&record, &prm, cli.tol, cfg)?;
            let text = format!(
                "{}\nlhs = {}\nrhs = {}",
                report_line(&rep),
                fmt_c(rep.lhs.value),
                fmt_c(rep.rhs.value)
            );
            Ok(Outcome { flags: vec![rep.pass], results: json!([rep]), text })
        }
        IdentityCmd::Sweep { id } => {
            let reps = registry::sweep_identity_with_tol(id, cli.seed, cli.count, cli.tol, cfg)?;
            let flags: Vec<bool> = reps.iter().map(|r| r.pass).collect();
            let passed = flags.iter().filter(|&&f| f).count();
            let mut text: Vec<String> = reps.iter().map(report_line).collect();
            text.push(format!("{id}: {passed}/{} pass (seed {})", reps.len(), cli.seed));
            Ok(Outcome { results: json!(reps), flags, text: text.join("\n") })
        }
    }
}

fn kernel(flags: &KernelFlags) -> eulersum_core::Result<KernelSpec> {
    let xs = units(&flags.xs)?;
    let spec = match flags.kernel {
        KernelArg::F => {
            let x = flags.x.as_deref().ok_or_else(|| Error::Parse("the F kernel needs --x".into()))?;
            let root = match unit(x)? {
                UnitParam::Exact(r) => r,
                other => return Err(Error::Domain(format!("Φ argument must be a root of unity, got {other}"))),
            };
            KernelSpec::f(flags.p.clone(), flags.q, root, xs)?
        }
        KernelArg::G => {
            if flags.x.is_some() {
                return Err(Error::Parse("the G kernel takes no --x".into()));
            }
            KernelSpec::g(flags.p.clone(), flags.q, xs)?
        }
    };
    Ok(spec.with_sign(match flags.sign {
        SignArg::Reduced => SignConvention::Reduced,
        SignArg::Plain => SignConvention::Plain,
    }))
}

fn run_residue(cmd: &ResidueCmd, nmax: u64, cfg: &EvalConfig) -> eulersum_core::Result<Outcome> {
    match cmd {
        ResidueCmd::Check(f) => {
            let rep = residue_total(&kernel(f)?, nmax, cfg)?;
            let t = &rep.extrapolated_total;
            let text = format!(
                "{} {}  N={}\ntotal = {}  (|total| = {:.3e}, est. err {:.3e}, tol {:.0e})",
                if rep.pass { "PASS" } else { "FAIL" },
                rep.kernel,
                rep.n_max,
                fmt_c(t.value),
                t.value.norm(),
                t.abs_err,
                rep.tolerance
            );
            Ok(Outcome { flags: vec![rep.pass], results: json!(rep), text })
        }
        ResidueCmd::Decompose(f) => {
            let d = parity_decompose(&kernel(f)?, nmax, cfg)?;
            let text = format!(
                "{} {}  N={}\nforward   = {}\nmirror    = {}\nremainder = {}\ntotal     = {}  (|total| = {:.3e}, tol {:.0e})",
                if d.pass { "PASS" } else { "FAIL" },
                d.kernel,
                d.n_max,
                fmt_c(d.order_r_forward.value),
                fmt_c(d.order_r_mirror.value),
                fmt_c(d.lower_order_remainder.value),
                fmt_c(d.total.value),
                d.total.value.norm(),
                d.tolerance
            );
            Ok(Outcome { flags: vec![d.pass], results: json!(d), text })
        }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    if e.is_usage() {
        EXIT_USAGE
    } else {
        EXIT_FAIL
    }
}

/// Runs a parsed command line and prints its report; returns the exit code.
pub fn run(cli: &Cli, argv: Vec<String>) -> anyhow::Result<i32> {
    let start = Instant::now();
    let path = cache_path(cli.cache.as_ref());
    let loaded = CacheFile::load(&path);
    if let Some(w) = &loaded.warning {
        eprintln!("warning: {w}");
    }
    let store = cache::global();
    store.absorb(&loaded.file);
    let mut echo = ConfigEcho {
        eval: EvalConfig::default(),
        tol_override: cli.tol,
        seed: cli.seed,
        count: cli.count,
        nmax: cli.nmax,
        cache_path: path.display().to_string(),
        cache_entries_loaded: loaded.file.entries.len(),
    };
    let outcome = build_config(cli).and_then(|cfg| {
        echo.eval = cfg.clone();
        match &cli.command {
            Command::Eval(c) => run_eval(c, &cfg),
            Command::Identity(c) => run_identity(c, cli, &cfg),
            Command::Residue(c) => run_residue(c, cli.nmax, &cfg),
        }
    });
    let (results, error, summary, text) = match outcome {
        Ok(o) => (o.results, None, Summary::from_flags(&o.flags), o.text),
        Err(e) => {
            let code = exit_code_for(&e);
            let text = format!("error: {e}");
            (Value::Null, Some(e.to_string()), Summary::error(code), text)
        }
    };
    if store.len() > 0 {
        store
            .to_file()
            .store(&path)
            .with_context(|| format!("writing cache {}", path.display()))
            .unwrap_or_else(|e| eprintln!("warning: {e:#}"));
    }
    let report = RunReport {
        command: argv,
        config: echo,
        results,
        error,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        terms_summed: terms_summed(),
        summary,
    };
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&report).map_err(|e| anyhow!(e))?);
    } else if report.error.is_some() {
        eprintln!("{text}");
    } else {
        println!("{text}");
        println!("summary: {}/{} pass", report.summary.passed, report.summary.total);
    }
    Ok(report.summary.exit_code)
}
