//! Command-line front end: argument parsing, input loading, report emission.
//!
//! Every subcommand produces a list of [`VerifyReport`] rows, written as a
//! JSON array or as CSV with the fixed [`CSV_HEADER`] columns. The exit code
//! is 0 when every row passes, 1 when at least one fails and 2 when the input
//! is invalid.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use lcverify::dof::{
    check_convex, minimal_affine_cover, necessary_condition_check, pmf_degree_of_freedom,
};
use lcverify::entropy::{entropy_power, renyi_entropy};
use lcverify::families::ExtremalParams;
use lcverify::ineq::{
    search_min_slack, verify_alpha_bounds, verify_case1_domination, verify_concentration_bound,
    verify_e4, verify_e5, verify_epi, verify_min_entropy, EpiConstant, SweepSpec,
};
use lcverify::io::{pmf_from_json, potential_from_json, AnyPotential, FamilySpec};
use lcverify::pmf::{random_log_concave, random_monotone_log_concave, AnyPmf};
use lcverify::poly::identities::{coeff_check_i, d_n_check, lemma41_check, Lemma41};
use lcverify::report::CSV_HEADER;
use lcverify::scalar::{parse_scalar, Weight};
use lcverify::{Error, Pmf, Potential, RenyiOrder, Scalar, VerifyReport, DEFAULT_TOL};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

/// Exit status when every report passes.
pub const EXIT_PASS: i32 = 0;
/// Exit status when at least one report fails.
pub const EXIT_VIOLATION: i32 = 1;
/// Exit status for malformed flags or input files.
pub const EXIT_INVALID: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "lcverify",
    version,
    about = "Entropy inequalities for integer log-concave distributions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Absolute tolerance on float slacks (exact checks always use 0).
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Seed for every random corpus.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write reports here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Log-concavity and DoF of a pmf, or convexity and DoF of a potential.
    Check(Input),
    /// Renyi entropy and entropy power for a list of orders.
    Entropy {
        #[command(flatten)]
        input: Input,
        /// Comma-separated orders; `inf` for min-entropy, `1` for Shannon.
        #[arg(long, default_value = "1,2,inf")]
        alpha: String,
    },
    /// Degree of freedom and minimal affine cover.
    Dof(Input),
    /// Inequality checks.
    Verify {
        #[command(subcommand)]
        check: VerifyCommand,
    },
    /// Minimum-slack search for the min-entropy bound.
    Search {
        /// Sweep specification: a JSON file, or inline JSON starting with `{`.
        #[arg(long)]
        grid: String,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyCommand {
    /// `M^2 (1 + Var) <= 1` for a log-concave pmf.
    MinEntropy(Input),
    /// Renyi entropy power inequality for sums of independent pmfs.
    Epi {
        /// Input pmfs (repeatable); without any, random log-concave trials are drawn.
        #[arg(long = "pmf")]
        pmfs: Vec<PathBuf>,
        #[arg(long, default_value = "1.5,2,3,10,inf")]
        alpha: String,
        /// Number of random trials when no `--pmf` is given.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Use the stronger constant valid for orders up to 2.
        #[arg(long)]
        improved: bool,
    },
    /// Lower and upper bounds on the entropy power in terms of the variance.
    Bounds {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "1.5,2,5,inf")]
        alpha: String,
    },
    /// Concentration function bound.
    Concentration {
        #[command(flatten)]
        input: Input,
        /// Window length; all of 0..=5 when omitted.
        #[arg(long)]
        lambda: Option<usize>,
    },
    /// The two-sided geometric reduction, at one point or over `--grid`.
    E4 {
        #[command(flatten)]
        params: TwoSided,
        #[arg(long)]
        grid: Option<String>,
    },
    /// The quartic polynomial form, at one point or over `--grid`.
    E5 {
        #[arg(long = "N")]
        big_n: Option<u32>,
        #[arg(long = "K")]
        k: Option<u32>,
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
        #[arg(long)]
        grid: Option<String>,
    },
    /// Geometric domination of monotone pmfs; random corpus when no input is given.
    Case1 {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Exact polynomial identities, coefficient formulas and `d_n` positivity.
    Appendix {
        #[arg(long, default_value_t = 40)]
        max: usize,
    },
}

#[derive(Args, Debug, Default)]
struct TwoSided {
    #[arg(long)]
    p1: Option<String>,
    #[arg(long)]
    p2: Option<String>,
    #[arg(long = "N")]
    big_n: Option<u32>,
    #[arg(long = "K")]
    k: Option<u32>,
}

#[derive(Args, Debug, Default)]
struct Input {
    /// PMF file: `{"offset": int, "weights": [...], "exact": bool}`.
    #[arg(long)]
    pmf: Option<PathBuf>,
    /// Potential file: `{"a": int, "values": [...]}`.
    #[arg(long)]
    potential: Option<PathBuf>,
    /// geometric, two_sided_geometric, bernoulli, binomial, poisson, negbin.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    theta: Option<String>,
    #[command(flatten)]
    two_sided: TwoSided,
    /// Success probability (bernoulli, binomial).
    #[arg(long)]
    p: Option<String>,
    /// Number of trials (binomial).
    #[arg(long)]
    n: Option<u32>,
    /// Poisson rate.
    #[arg(long)]
    rate: Option<String>,
    /// Negative binomial shape and success ratio.
    #[arg(long)]
    r: Option<String>,
    #[arg(long)]
    q: Option<String>,
    /// Tail mass dropped when truncating infinite families.
    #[arg(long)]
    tail_tol: Option<String>,
}

#[derive(Debug)]
struct Invalid(String);

impl From<Error> for Invalid {
    fn from(e: Error) -> Self {
        Invalid(e.to_string())
    }
}

type Res<T> = std::result::Result<T, Invalid>;

fn invalid<T>(msg: impl Into<String>) -> Res<T> {
    Err(Invalid(msg.into()))
}

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|e| Invalid(format!("{}: {e}", path.display())))
}

impl Input {
    fn family_spec(&self) -> Res<Option<FamilySpec>> {
        let Some(name) = &self.family else {
            return Ok(None);
        };
        let mut obj = Map::new();
        obj.insert("family".into(), json!(name));
        let ts = &self.two_sided;
        for (key, value) in [
            ("theta", &self.theta),
            ("p1", &ts.p1),
            ("p2", &ts.p2),
            ("p", &self.p),
            ("lambda", &self.rate),
            ("r", &self.r),
            ("q", &self.q),
            ("tail_tol", &self.tail_tol),
        ] {
            if let Some(v) = value {
                obj.insert(key.into(), json!(v));
            }
        }
        for (key, value) in [("N", ts.big_n), ("K", ts.k), ("n", self.n)] {
            if let Some(v) = value {
                obj.insert(key.into(), json!(v));
            }
        }
        Ok(Some(FamilySpec::from_value(&Value::Object(obj))?))
    }

    fn pmf(&self) -> Res<Option<AnyPmf>> {
        match (&self.pmf, self.family_spec()?) {
            (Some(_), Some(_)) => invalid("give either --pmf or --family, not both"),
            (Some(path), None) => Ok(Some(pmf_from_json(&read(path)?)?)),
            (None, Some(spec)) => Ok(Some(spec.build()?)),
            (None, None) => Ok(None),
        }
    }

    fn require_pmf(&self) -> Res<AnyPmf> {
        self.pmf()?
            .map_or_else(|| invalid("this command needs --pmf or --family"), Ok)
    }

    fn potential(&self) -> Res<Option<AnyPotential>> {
        self.potential
            .as_deref()
            .map(|p| Ok(potential_from_json(&read(p)?)?))
            .transpose()
    }
}

fn parse_orders(list: &str) -> Res<Vec<RenyiOrder>> {
    list.split(',')
        .map(|s| s.trim().parse::<RenyiOrder>().map_err(Invalid::from))
        .collect()
}

fn parse_num(flag: &str, value: &Option<String>) -> Res<Scalar> {
    match value {
        Some(v) => Ok(parse_scalar(v)?),
        None => invalid(format!("missing --{flag}")),
    }
}

/// Runs with an explicit environment; returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_PASS
            };
        }
    };
    match execute(&cli) {
        Ok(reports) => match emit(&cli.common, &reports, out) {
            Ok(()) if reports.iter().all(|r| r.pass) => EXIT_PASS,
            Ok(()) => EXIT_VIOLATION,
            Err(Invalid(msg)) => {
                let _ = writeln!(err, "error: {msg}");
                EXIT_INVALID
            }
        },
        Err(Invalid(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INVALID
        }
    }
}

/// Runs against the process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

fn execute(cli: &Cli) -> Res<Vec<VerifyReport>> {
    if cli.common.tol.is_nan() || cli.common.tol <= 0.0 {
        return invalid("--tol must be > 0");
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cli.common.jobs {
        if jobs == 0 {
            return invalid("--jobs must be >= 1");
        }
        builder = builder.num_threads(jobs);
    }
    let pool = builder.build().map_err(|e| Invalid(e.to_string()))?;
    pool.install(|| dispatch(&cli.command, &cli.common))
}

fn dispatch(command: &Command, common: &Common) -> Res<Vec<VerifyReport>> {
    let tol = common.tol;
    match command {
        Command::Check(input) => check(input, tol),
        Command::Entropy { input, alpha } => {
            let p = input.require_pmf()?.to_float();
            parse_orders(alpha)?
                .into_iter()
                .map(|a| Ok(entropy_row(&p, a, tol)))
                .collect()
        }
        Command::Dof(input) => dof(input),
        Command::Verify { check } => verify(check, common),
        Command::Search { grid } => {
            let text = if grid.trim_start().starts_with('{') {
                grid.clone()
            } else {
                read(Path::new(grid))?
            };
            let mut spec = SweepSpec::from_json(&text)?;
            if let Some(corpus) = spec.corpus.as_mut() {
                corpus.seed = corpus.seed.wrapping_add(common.seed);
            }
            Ok(search_min_slack(&spec)?.reports())
        }
    }
}

fn entropy_row(p: &Pmf<f64>, order: RenyiOrder, tol: f64) -> VerifyReport {
    let h = renyi_entropy(p, order);
    let n = entropy_power(p, order);
    VerifyReport::new("entropy", h, n, n - 1.0, tol)
        .param("alpha", order.value())
        .with_note("lhs = H_alpha (nats), rhs = N_alpha = exp(2 H_alpha)")
}

fn log_concavity_row(p: &AnyPmf, tol: f64) -> VerifyReport {
    fn min_gap<W: Weight>(p: &Pmf<W>) -> Scalar {
        let w = p.weights();
        w.windows(3)
            .map(|t| t[1].clone() * t[1].clone() - t[0].clone() * t[2].clone())
            .min_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal))
            .unwrap_or_else(W::zero)
            .to_scalar()
    }
    let gap = match p {
        AnyPmf::Exact(p) => min_gap(p),
        AnyPmf::Float(p) => min_gap(p),
    };
    let lc = p.is_log_concave();
    let report = VerifyReport::new("log_concave", gap.clone(), Scalar::int(0), gap, tol)
        .param("offset", p.offset())
        .param("len", p.weights().len());
    if lc {
        report.with_note("log-concave: true")
    } else {
        report.fail("log-concave: false")
    }
}

fn pmf_dof_row(p: &AnyPmf) -> Res<VerifyReport> {
    let dof = match p {
        AnyPmf::Exact(p) => pmf_degree_of_freedom(p)?,
        AnyPmf::Float(p) => pmf_degree_of_freedom(p)?,
    };
    let len = p.weights().len();
    Ok(VerifyReport::new(
        "pmf_dof",
        Scalar::int(len as i64),
        Scalar::int(dof as i64),
        Scalar::int((len - dof.min(len)) as i64),
        0.0,
    )
    .param("offset", p.offset())
    .detail("dof", dof))
}

fn potential_rows<W: Weight>(
    v: &Potential<W>,
    with_cover: bool,
    tol: f64,
) -> Res<Vec<VerifyReport>> {
    let slopes = v.slopes();
    let min_step = slopes
        .windows(2)
        .map(|s| s[1].clone() - s[0].clone())
        .min_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal))
        .unwrap_or_else(W::zero);
    let convex = check_convex(v);
    let mut row = VerifyReport::new(
        "convex",
        min_step.to_scalar(),
        Scalar::int(0),
        min_step.to_scalar(),
        tol,
    )
    .param("a", v.a())
    .param("b", v.b());
    row = if convex {
        row.with_note("convex: true")
    } else {
        row.fail("convex: false")
    };
    let mut rows = vec![row];
    if !convex {
        return Ok(rows);
    }
    rows.push(necessary_condition_check(v)?);
    if with_cover {
        for piece in minimal_affine_cover(v)? {
            rows.push(
                VerifyReport::new(
                    "cover_piece",
                    piece.slope.to_scalar(),
                    piece.intercept.to_scalar(),
                    Scalar::int(0),
                    0.0,
                )
                .param("from", *piece.cover.start())
                .param("to", *piece.cover.end())
                .with_note("lhs = slope, rhs = intercept"),
            );
        }
    }
    Ok(rows)
}

fn any_potential_rows(v: &AnyPotential, with_cover: bool, tol: f64) -> Res<Vec<VerifyReport>> {
    match v {
        AnyPotential::Exact(v) => potential_rows(v, with_cover, tol),
        AnyPotential::Float(v) => potential_rows(v, with_cover, tol),
    }
}

fn check(input: &Input, tol: f64) -> Res<Vec<VerifyReport>> {
    let mut rows = Vec::new();
    if let Some(p) = input.pmf()? {
        let row = log_concavity_row(&p, tol);
        let lc = row.pass;
        rows.push(row);
        if lc {
            rows.push(pmf_dof_row(&p)?);
        }
    }
    if let Some(v) = input.potential()? {
        rows.extend(any_potential_rows(&v, false, tol)?);
    }
    if rows.is_empty() {
        return invalid("check needs --pmf, --family or --potential");
    }
    Ok(rows)
}

fn dof(input: &Input) -> Res<Vec<VerifyReport>> {
    let mut rows = Vec::new();
    if let Some(v) = input.potential()? {
        rows.extend(any_potential_rows(&v, true, 0.0)?);
    }
    if let Some(p) = input.pmf()? {
        rows.push(pmf_dof_row(&p)?);
    }
    if rows.is_empty() {
        return invalid("dof needs --potential, --pmf or --family");
    }
    Ok(rows)
}

fn with_pmf<T>(
    p: &AnyPmf,
    exact: impl FnOnce(&Pmf<lcverify::Rational>) -> lcverify::Result<T>,
    float: impl FnOnce(&Pmf<f64>) -> lcverify::Result<T>,
) -> Res<T> {
    Ok(match p {
        AnyPmf::Exact(p) => exact(p)?,
        AnyPmf::Float(p) => float(p)?,
    })
}

fn verify(check: &VerifyCommand, common: &Common) -> Res<Vec<VerifyReport>> {
    let tol = common.tol;
    match check {
        VerifyCommand::MinEntropy(input) => {
            let p = input.require_pmf()?;
            Ok(vec![with_pmf(
                &p,
                |p| verify_min_entropy(p, tol),
                |p| verify_min_entropy(p, tol),
            )?])
        }
        VerifyCommand::Epi {
            pmfs,
            alpha,
            trials,
            improved,
        } => {
            let orders = parse_orders(alpha)?;
            let constant = if *improved {
                EpiConstant::Improved
            } else {
                EpiConstant::Standard
            };
            if !pmfs.is_empty() {
                let ps = pmfs
                    .iter()
                    .map(|path| Ok(pmf_from_json(&read(path)?)?.to_float()))
                    .collect::<Res<Vec<_>>>()?;
                return orders
                    .iter()
                    .map(|a| Ok(verify_epi(&ps, *a, constant, tol)?))
                    .collect();
            }
            let jobs: Vec<(usize, RenyiOrder)> = (0..*trials)
                .flat_map(|t| orders.iter().map(move |a| (t, *a)))
                .collect();
            jobs.par_iter()
                .map(|(t, order)| {
                    let base = common
                        .seed
                        .wrapping_mul(1_000_003)
                        .wrapping_add(*t as u64 * 8);
                    let n = 2 + (base % 4) as usize;
                    let ps: Vec<Pmf<f64>> = (0..n)
                        .map(|i| random_log_concave(base + i as u64, 30))
                        .collect();
                    Ok(verify_epi(&ps, *order, constant, tol)?.param("trial", *t))
                })
                .collect()
        }
        VerifyCommand::Bounds { input, alpha } => {
            let p = input.require_pmf()?;
            parse_orders(alpha)?
                .into_iter()
                .map(|a| {
                    with_pmf(
                        &p,
                        |p| verify_alpha_bounds(p, a, tol),
                        |p| verify_alpha_bounds(p, a, tol),
                    )
                })
                .collect()
        }
        VerifyCommand::Concentration { input, lambda } => {
            let p = input.require_pmf()?;
            let lambdas: Vec<usize> = lambda.map_or_else(|| (0..=5).collect(), |l| vec![l]);
            lambdas
                .into_iter()
                .map(|l| {
                    with_pmf(
                        &p,
                        |p| verify_concentration_bound(p, l, tol),
                        |p| verify_concentration_bound(p, l, tol),
                    )
                })
                .collect()
        }
        VerifyCommand::E4 { params, grid } => e4(params, grid.as_deref(), tol),
        VerifyCommand::E5 {
            big_n,
            k,
            x,
            y,
            grid,
        } => e5(*big_n, *k, x, y, grid.as_deref(), tol),
        VerifyCommand::Case1 { input, trials } => {
            if let Some(p) = input.pmf()? {
                return Ok(vec![with_pmf(
                    &p,
                    |p| verify_case1_domination(p, tol),
                    |p| verify_case1_domination(p, tol),
                )?]);
            }
            (0..*trials as u64)
                .into_par_iter()
                .map(|i| {
                    let seed = common.seed.wrapping_add(i);
                    Ok(
                        verify_case1_domination(&random_monotone_log_concave(seed, 60), tol)?
                            .param("seed", seed as usize),
                    )
                })
                .collect()
        }
        VerifyCommand::Appendix { max } => appendix(*max),
    }
}

fn grid_axes(text: &str, names: &[&str]) -> Res<Vec<Vec<Scalar>>> {
    let text = if text.trim_start().starts_with('{') {
        text.to_owned()
    } else {
        read(Path::new(text))?
    };
    let spec = SweepSpec::from_json(&text)?;
    names
        .iter()
        .map(|name| {
            spec.axis(name)?
                .map_or_else(|| invalid(format!("grid needs axis {name:?}")), Ok)
        })
        .collect()
}

fn positive_int(v: &Scalar, name: &str) -> Res<u32> {
    let f = v.to_f64();
    if f >= 1.0 && f.fract() == 0.0 && f <= u32::MAX as f64 {
        Ok(f as u32)
    } else {
        invalid(format!("{name} = {v} must be a positive integer"))
    }
}

fn e4_point(p1: &Scalar, p2: &Scalar, n: u32, k: u32, tol: f64) -> Res<VerifyReport> {
    Ok(match (p1, p2) {
        (Scalar::Exact(a), Scalar::Exact(b)) => {
            verify_e4(&ExtremalParams::new(a.clone(), b.clone(), n, k)?, tol)
        }
        (a, b) => verify_e4(&ExtremalParams::new(a.to_f64(), b.to_f64(), n, k)?, tol),
    })
}

fn e4(params: &TwoSided, grid: Option<&str>, tol: f64) -> Res<Vec<VerifyReport>> {
    let Some(grid) = grid else {
        let n = params.big_n.ok_or_else(|| Invalid("missing --N".into()))?;
        let k = params.k.ok_or_else(|| Invalid("missing --K".into()))?;
        return Ok(vec![e4_point(
            &parse_num("p1", &params.p1)?,
            &parse_num("p2", &params.p2)?,
            n,
            k,
            tol,
        )?]);
    };
    let axes = grid_axes(grid, &["p1", "p2", "N", "K"])?;
    let ns = axes[2]
        .iter()
        .map(|v| positive_int(v, "N"))
        .collect::<Res<Vec<_>>>()?;
    let ks = axes[3]
        .iter()
        .map(|v| positive_int(v, "K"))
        .collect::<Res<Vec<_>>>()?;
    let mut points = Vec::new();
    for p1 in &axes[0] {
        for p2 in &axes[1] {
            for n in &ns {
                for k in &ks {
                    points.push((p1, p2, *n, *k));
                }
            }
        }
    }
    points
        .par_iter()
        .map(|(p1, p2, n, k)| e4_point(p1, p2, *n, *k, tol))
        .collect()
}

fn e5_point(n: u32, k: u32, x: &Scalar, y: &Scalar, tol: f64) -> Res<VerifyReport> {
    Ok(match (x, y) {
        (Scalar::Exact(x), Scalar::Exact(y)) => verify_e5(n, k, x, y, tol)?,
        (x, y) => verify_e5(n, k, &x.to_f64(), &y.to_f64(), tol)?,
    })
}

fn e5(
    big_n: Option<u32>,
    k: Option<u32>,
    x: &Option<String>,
    y: &Option<String>,
    grid: Option<&str>,
    tol: f64,
) -> Res<Vec<VerifyReport>> {
    let Some(grid) = grid else {
        let n = big_n.ok_or_else(|| Invalid("missing --N".into()))?;
        let k = k.ok_or_else(|| Invalid("missing --K".into()))?;
        return Ok(vec![e5_point(
            n,
            k,
            &parse_num("x", x)?,
            &parse_num("y", y)?,
            tol,
        )?]);
    };
    let axes = grid_axes(grid, &["N", "K", "x", "y"])?;
    let ns = axes[0]
        .iter()
        .map(|v| positive_int(v, "N"))
        .collect::<Res<Vec<_>>>()?;
    let ks = axes[1]
        .iter()
        .map(|v| positive_int(v, "K"))
        .collect::<Res<Vec<_>>>()?;
    let mut points = Vec::new();
    for n in &ns {
        for k in &ks {
            for x in &axes[2] {
                for y in &axes[3] {
                    points.push((*n, *k, x, y));
                }
            }
        }
    }
    points
        .par_iter()
        .map(|(n, k, x, y)| e5_point(*n, *k, x, y, tol))
        .collect()
}

fn appendix(max: usize) -> Res<Vec<VerifyReport>> {
    if max == 0 {
        return invalid("--max must be >= 1");
    }
    let mut jobs: Vec<(u8, Option<Lemma41>, usize)> = Lemma41::ALL
        .iter()
        .flat_map(|l| (1..=max).map(move |m| (0, Some(*l), m)))
        .collect();
    jobs.extend((1..=max).map(|m| (1, None, m)));
    jobs.extend((1..=max).map(|m| (2, None, m)));
    jobs.par_iter()
        .map(|(kind, label, m)| {
            Ok(match (kind, label) {
                (0, Some(l)) => lemma41_check(*l, *m)?,
                (1, _) => coeff_check_i(*m)?,
                _ => d_n_check(*m)?,
            })
        })
        .collect()
}

fn emit(common: &Common, reports: &[VerifyReport], out: &mut dyn Write) -> Res<()> {
    let bytes = match common.format {
        Format::Json => {
            let mut text =
                serde_json::to_string_pretty(reports).map_err(|e| Invalid(e.to_string()))?;
            text.push('\n');
            text.into_bytes()
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_HEADER)
                .map_err(|e| Invalid(e.to_string()))?;
            for r in reports {
                w.write_record(r.csv_record())
                    .map_err(|e| Invalid(e.to_string()))?;
            }
            w.into_inner().map_err(|e| Invalid(e.to_string()))?
        }
    };
    match &common.out {
        Some(path) => {
            fs::write(path, bytes).map_err(|e| Invalid(format!("{}: {e}", path.display())))
        }
        None => out.write_all(&bytes).map_err(|e| Invalid(e.to_string())),
    }
}
