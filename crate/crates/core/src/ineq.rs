//! Checks of the entropy inequalities on concrete PMFs and parameter grids,
//! plus the min-slack search over the random corpus and extremal families.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Deserialize;

use crate::entropy::{delta, entropy_power, RenyiOrder};
use crate::error::{Error, Result};
use crate::families::{geometric_truncated, two_sided_geometric, ExtremalParams};
use crate::pmf::{random_log_concave, Pmf};
use crate::poly::identities::QuarticTerms;
use crate::report::{VerifyReport, DEFAULT_TOL};
use crate::scalar::{parse_scalar, Mode, Rational, Scalar, Weight};

/// Tail mass used whenever a geometric comparator is truncated.
pub const GEOMETRIC_TAIL: f64 = 1e-12;

fn require_log_concave<W: Weight>(p: &Pmf<W>) -> Result<()> {
    if p.is_log_concave() {
        Ok(())
    } else {
        Err(Error::Precondition("input is not log-concave".into()))
    }
}

fn require_above_one(order: RenyiOrder) -> Result<()> {
    if order.value() > 1.0 && !order.is_shannon() {
        Ok(())
    } else {
        Err(Error::InvalidOrder(format!("{order} (need alpha > 1)")))
    }
}

/// `M^2 (1 + Var) <= 1`, equivalently `N_inf >= 1 + Var`.
pub fn verify_min_entropy<W: Weight>(p: &Pmf<W>, tol: f64) -> Result<VerifyReport> {
    require_log_concave(p)?;
    let m = p.m_functional();
    let var = p.moments().variance;
    let one_plus_var = W::one() + var.clone();
    let m2 = m.clone() * m.clone();
    let product = m2.clone() * one_plus_var.clone();
    let slack = W::one() - product.clone();
    let n_inf = W::one() / m2;
    Ok(VerifyReport::new(
        "min_entropy",
        W::one().to_scalar(),
        product.to_scalar(),
        slack.to_scalar(),
        tol,
    )
    .detail("M", m.to_scalar())
    .detail("variance", var.to_scalar())
    .detail("N_inf", n_inf.to_scalar())
    .detail("ratio", product.to_scalar())
    .detail(
        "n_inf_minus_one_plus_var",
        (n_inf - one_plus_var).to_scalar(),
    ))
}

/// Constant used on the right-hand side of the discrete EPI.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EpiConstant {
    /// `(alpha - 1) / (4 (3 alpha - 1))`, `1/12` at `alpha = inf`.
    #[default]
    Standard,
    /// `(alpha - 1) / (3 alpha - 1)`, only for `1 < alpha <= 2`.
    Improved,
}

pub fn epi_constant(order: RenyiOrder, which: EpiConstant) -> Result<f64> {
    require_above_one(order)?;
    let a = order.value();
    match which {
        EpiConstant::Standard if order.is_min_entropy() => Ok(1.0 / 12.0),
        EpiConstant::Standard => Ok((a - 1.0) / (4.0 * (3.0 * a - 1.0))),
        EpiConstant::Improved if a <= 2.0 => Ok((a - 1.0) / (3.0 * a - 1.0)),
        EpiConstant::Improved => Err(Error::InvalidOrder(format!(
            "{order} (improved constant needs alpha <= 2)"
        ))),
    }
}

/// `Delta_alpha(X_1 + ... + X_n) >= c_alpha sum Delta_alpha(X_i)`.
pub fn verify_epi<W: Weight>(
    ps: &[Pmf<W>],
    order: RenyiOrder,
    constant: EpiConstant,
    tol: f64,
) -> Result<VerifyReport> {
    let c = epi_constant(order, constant)?;
    if ps.is_empty() {
        return Err(Error::InvalidParam("need at least one summand".into()));
    }
    for p in ps {
        require_log_concave(p)?;
    }
    let floats: Vec<Pmf<f64>> = ps.iter().map(Pmf::to_float).collect();
    let sum = floats[1..]
        .iter()
        .fold(floats[0].clone(), |acc, p| acc.convolve(p));
    let lhs = delta(&sum, order);
    let deltas: f64 = floats.iter().map(|p| delta(p, order)).sum();
    let rhs = c * deltas;
    let name = match constant {
        EpiConstant::Standard => "epi",
        EpiConstant::Improved => "epi_improved",
    };
    Ok(VerifyReport::new(name, lhs, rhs, lhs - rhs, tol)
        .param("alpha", order.value())
        .param("n", ps.len())
        .detail("c_alpha", c))
}

/// `1 <= N_alpha <= 1 + 4(3 alpha - 1)/(alpha - 1) Var` (no log-concavity needed).
pub fn verify_alpha_bounds<W: Weight>(
    p: &Pmf<W>,
    order: RenyiOrder,
    tol: f64,
) -> Result<VerifyReport> {
    require_above_one(order)?;
    let a = order.value();
    let factor = if order.is_min_entropy() {
        12.0
    } else {
        4.0 * (3.0 * a - 1.0) / (a - 1.0)
    };
    let n = entropy_power(p, order);
    let var = p.moments().variance.to_f64();
    let upper = 1.0 + factor * var;
    let lower_slack = n - 1.0;
    let upper_slack = upper - n;
    Ok(
        VerifyReport::new("alpha_bounds", n, upper, lower_slack.min(upper_slack), tol)
            .param("alpha", a)
            .detail("lower_slack", lower_slack)
            .detail("upper_slack", upper_slack)
            .detail("upper_bound", upper),
    )
}

/// `Q(X; lambda) <= (lambda + 1) / sqrt(1 + lambda(lambda+2)/12 + Var)`.
pub fn verify_concentration_bound<W: Weight>(
    p: &Pmf<W>,
    lambda: usize,
    tol: f64,
) -> Result<VerifyReport> {
    require_log_concave(p)?;
    let q = p.concentration(lambda).to_f64();
    let l = lambda as f64;
    let var = p.moments().variance.to_f64();
    let rhs = (l + 1.0) / (1.0 + l * (l + 2.0) / 12.0 + var).sqrt();
    Ok(VerifyReport::new("concentration", rhs, q, rhs - q, tol).param("lambda", lambda))
}

/// The two-sided reduction, multiplied through by `(A+B)^2`:
/// `(A+B)^2 - 1 - Σn²-terms/(A+B) + (Σn/p2ⁿ - Σn/p1ⁿ)^2/(A+B)^2 >= 0`.
pub fn e4_lhs<W: Weight>(params: &ExtremalParams<W>) -> W {
    let s = params.sums();
    let total = s.total();
    let d = s.first_diff();
    total.clone() * total.clone() - W::one() - s.second() / total.clone()
        + d.clone() * d / (total.clone() * total)
}

/// `(A+B)^3 - (A+B) - (Σn²/p2ⁿ + Σn²/p1ⁿ)`: the reduction with the squared
/// first-moment term dropped, which can be negative.
pub fn e4_without_square_term<W: Weight>(params: &ExtremalParams<W>) -> W {
    let s = params.sums();
    let total = s.total();
    total.clone() * total.clone() * total.clone() - total - s.second()
}

pub fn verify_e4<W: Weight>(params: &ExtremalParams<W>, tol: f64) -> VerifyReport {
    let lhs = e4_lhs(params);
    let pmf = two_sided_geometric(params);
    let m = pmf.m_functional();
    let var = pmf.moments().variance;
    let total = params.sums().total();
    let scaled = total.clone() * total * (W::one() - m.clone() * m * (W::one() + var));
    let residual = lhs.clone() - scaled.clone();
    let consistent = match W::MODE {
        Mode::Exact => residual.is_zero(),
        Mode::Float => residual.to_f64().abs() <= 1e-9 * lhs.to_f64().abs().max(1.0),
    };
    let mut report = VerifyReport::new(
        "e4",
        lhs.to_scalar(),
        W::zero().to_scalar(),
        lhs.to_scalar(),
        tol,
    )
    .param("p1", params.p1().to_scalar())
    .param("p2", params.p2().to_scalar())
    .param("N", params.n() as usize)
    .param("K", params.k() as usize)
    .detail("scaled_min_entropy_slack", scaled.to_scalar())
    .detail("weakened", e4_without_square_term(params).to_scalar());
    if !consistent {
        report = report.fail(format!("disagrees with the pmf route by {residual}"));
    }
    report
}

pub fn verify_e5<W: Weight>(big_n: u32, k: u32, x: &W, y: &W, tol: f64) -> Result<VerifyReport> {
    if big_n < 1 || k < 1 {
        return Err(Error::InvalidParam(format!(
            "N = {big_n}, K = {k}; both must be >= 1"
        )));
    }
    if *x <= W::zero() || *y <= W::zero() {
        return Err(Error::InvalidParam(format!(
            "x = {x}, y = {y}; both must be > 0"
        )));
    }
    let lhs = QuarticTerms::new(big_n, k, x, y).lhs_quartic();
    Ok(VerifyReport::new(
        "e5",
        lhs.to_scalar(),
        W::zero().to_scalar(),
        lhs.to_scalar(),
        tol,
    )
    .param("N", big_n as usize)
    .param("K", k as usize)
    .param("x", x.to_scalar())
    .param("y", y.to_scalar()))
}

/// For monotone log-concave `p` on `0, 1, ...`, the geometric law with
/// `theta = 1/(E[X] + 1)` dominates in both variance and M-functional.
pub fn verify_case1_domination<W: Weight>(p: &Pmf<W>, tol: f64) -> Result<VerifyReport> {
    require_log_concave(p)?;
    if p.offset() != 0 {
        return Err(Error::Precondition(format!(
            "support starts at {} (need 0)",
            p.offset()
        )));
    }
    if !p.is_monotone_nonincreasing() {
        return Err(Error::Precondition(
            "pmf is not monotone non-increasing".into(),
        ));
    }
    let pf = p.to_float();
    let moments = pf.moments();
    let theta = 1.0 / (moments.mean + 1.0);
    let z = if moments.mean > 0.0 {
        geometric_truncated(theta, GEOMETRIC_TAIL)?
    } else {
        Pmf::point_mass(0)
    };
    let (var_z, m_z) = (z.moments().variance, z.m_functional());
    let (var_p, m_p) = (moments.variance, pf.m_functional());
    let var_slack = var_z - var_p;
    let m_slack = m_z - m_p;
    Ok(VerifyReport::new(
        "case1_domination",
        var_z,
        var_p,
        var_slack.min(m_slack),
        tol,
    )
    .param("theta", theta)
    .detail("variance_p", var_p)
    .detail("variance_geometric", var_z)
    .detail("M_p", m_p)
    .detail("M_geometric", m_z))
}

/// One axis of a sweep grid: an explicit list or an arithmetic range.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum GridAxis {
    List(Vec<serde_json::Value>),
    Range {
        start: serde_json::Value,
        stop: serde_json::Value,
        step: serde_json::Value,
    },
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
pub struct CorpusSpec {
    #[serde(default)]
    pub seed: u64,
    pub size: usize,
    #[serde(default = "default_max_support")]
    pub max_support: usize,
}

fn default_max_support() -> usize {
    60
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

/// Sweep configuration. Recognised grid names: `theta` (truncated
/// geometric), `p1`, `p2`, `N`, `K` (two-sided geometric, all four needed),
/// `x`, `y` (quartic), `lambda`.
#[derive(Clone, Debug, Deserialize)]
pub struct SweepSpec {
    #[serde(default)]
    pub grids: BTreeMap<String, GridAxis>,
    #[serde(default)]
    pub corpus: Option<CorpusSpec>,
    #[serde(default)]
    pub orders: Vec<serde_json::Value>,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn json_scalar(v: &serde_json::Value) -> Result<Scalar> {
    match v {
        serde_json::Value::String(s) => parse_scalar(s),
        serde_json::Value::Number(n) => parse_scalar(&n.to_string()),
        other => Err(Error::Parse(format!("expected a number, got {other}"))),
    }
}

impl GridAxis {
    pub fn values(&self) -> Result<Vec<Scalar>> {
        match self {
            GridAxis::List(items) => items.iter().map(json_scalar).collect(),
            GridAxis::Range { start, stop, step } => {
                let (start, stop, step) =
                    (json_scalar(start)?, json_scalar(stop)?, json_scalar(step)?);
                match (start, stop, step) {
                    (Scalar::Exact(a), Scalar::Exact(b), Scalar::Exact(h)) => {
                        if h <= Rational::from_int(0) {
                            return Err(Error::InvalidParam("grid step must be positive".into()));
                        }
                        let mut out = Vec::new();
                        let mut v = a;
                        while v <= b {
                            out.push(Scalar::Exact(v.clone()));
                            v += &h;
                        }
                        Ok(out)
                    }
                    (a, b, h) => {
                        let (a, b, h) = (a.to_f64(), b.to_f64(), h.to_f64());
                        if h.is_nan() || h <= 0.0 {
                            return Err(Error::InvalidParam("grid step must be positive".into()));
                        }
                        let count = ((b - a) / h + 1e-9).floor() as i64;
                        Ok((0..=count.max(-1))
                            .map(|i| Scalar::Float(a + i as f64 * h))
                            .collect())
                    }
                }
            }
        }
    }
}

impl SweepSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: SweepSpec =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidParam("tolerance must be > 0".into()));
        }
        if self.grids.is_empty() && self.corpus.is_none() {
            return Err(Error::InvalidParam("sweep needs a grid or a corpus".into()));
        }
        for (name, axis) in &self.grids {
            if axis.values()?.is_empty() {
                return Err(Error::InvalidParam(format!("grid {name:?} is empty")));
            }
        }
        Ok(())
    }

    pub fn axis(&self, name: &str) -> Result<Option<Vec<Scalar>>> {
        self.grids.get(name).map(GridAxis::values).transpose()
    }

    pub fn orders(&self) -> Result<Vec<RenyiOrder>> {
        self.orders
            .iter()
            .map(|v| match v {
                serde_json::Value::String(s) => s.parse(),
                other => json_scalar(other).and_then(|s| RenyiOrder::new(s.to_f64())),
            })
            .collect()
    }
}

fn axis_u32(values: &[Scalar], name: &str) -> Result<Vec<u32>> {
    values
        .iter()
        .map(|v| {
            let f = v.to_f64();
            if f >= 1.0 && f.fract() == 0.0 && f <= u32::MAX as f64 {
                Ok(f as u32)
            } else {
                Err(Error::InvalidParam(format!(
                    "{name} = {v} must be a positive integer"
                )))
            }
        })
        .collect()
}

/// Result of [`search_min_slack`].
#[derive(Clone, Debug, Default)]
pub struct SearchOutcome {
    pub evaluated: usize,
    /// Minimum-slack instance of each source (`corpus`, `geometric`, `two_sided`).
    pub per_source: Vec<VerifyReport>,
    /// Every instance whose check failed.
    pub violations: Vec<VerifyReport>,
}

impl SearchOutcome {
    pub fn best(&self) -> Option<&VerifyReport> {
        self.per_source
            .iter()
            .min_by(|a, b| a.slack.to_f64().total_cmp(&b.slack.to_f64()))
    }

    pub fn reports(&self) -> Vec<VerifyReport> {
        self.per_source
            .iter()
            .chain(&self.violations)
            .cloned()
            .collect()
    }
}

/// Evaluates `1 - M^2 (1 + Var)` over the random corpus, the truncated
/// geometric `theta` grid and the two-sided geometric grid, keeping the
/// argmin of each source and every violation.
pub fn search_min_slack(spec: &SweepSpec) -> Result<SearchOutcome> {
    spec.validate()?;
    let tol = spec.tol;
    let mut outcome = SearchOutcome::default();
    let mut absorb = |source: &str, reports: Vec<VerifyReport>| {
        outcome.evaluated += reports.len();
        let best = reports
            .iter()
            .enumerate()
            .min_by(|(i, a), (j, b)| a.slack.to_f64().total_cmp(&b.slack.to_f64()).then(i.cmp(j)))
            .map(|(_, r)| r.clone());
        if let Some(mut best) = best {
            best.check = format!("search_{source}");
            outcome.per_source.push(best);
        }
        outcome
            .violations
            .extend(reports.into_iter().filter(|r| !r.pass));
    };

    if let Some(corpus) = &spec.corpus {
        let reports: Vec<VerifyReport> = (0..corpus.size as u64)
            .into_par_iter()
            .map(|i| {
                let seed = corpus.seed + i;
                verify_min_entropy(&random_log_concave(seed, corpus.max_support), tol)
                    .map(|r| r.param("seed", Scalar::int(seed as i64)))
            })
            .collect::<Result<_>>()?;
        absorb("corpus", reports);
    }

    if let Some(thetas) = spec.axis("theta")? {
        let reports: Vec<VerifyReport> = thetas
            .par_iter()
            .map(|t| {
                let pmf = geometric_truncated(t.to_f64(), GEOMETRIC_TAIL)?;
                verify_min_entropy(&pmf, tol).map(|r| r.param("theta", t.clone()))
            })
            .collect::<Result<_>>()?;
        absorb("geometric", reports);
    }

    let axes = (
        spec.axis("p1")?,
        spec.axis("p2")?,
        spec.axis("N")?,
        spec.axis("K")?,
    );
    if let (Some(p1s), Some(p2s), Some(ns), Some(ks)) = axes {
        let ns = axis_u32(&ns, "N")?;
        let ks = axis_u32(&ks, "K")?;
        let mut points = Vec::new();
        for p1 in &p1s {
            for p2 in &p2s {
                for n in &ns {
                    for k in &ks {
                        points.push((p1.clone(), p2.clone(), *n, *k));
                    }
                }
            }
        }
        let reports: Vec<VerifyReport> = points
            .par_iter()
            .map(|(p1, p2, n, k)| {
                let params = ExtremalParams::new(p1.to_f64(), p2.to_f64(), *n, *k)?;
                verify_min_entropy(&two_sided_geometric(&params), tol).map(|r| {
                    r.param("p1", p1.clone())
                        .param("p2", p2.clone())
                        .param("N", *n as usize)
                        .param("K", *k as usize)
                })
            })
            .collect::<Result<_>>()?;
        absorb("two_sided", reports);
    }
    Ok(outcome)
}
