//! Distribution families: truncated geometric, the two-sided geometric
//! extremal family, and standard log-concave corpus members.

use crate::error::{Error, Result};
use crate::pmf::Pmf;
use crate::scalar::Weight;

/// Two-sided geometric family
/// `P(X = n) = C p1^-(N-n)` on `0..=N` and `C p2^-(n-N)` on `N+1..=N+K`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtremalParams<W: Weight> {
    p1: W,
    p2: W,
    n: u32,
    k: u32,
}

/// Power sums `sum n^j / p^n` over both sides, the building blocks of the
/// closed-form statistics.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtremalSums<W> {
    /// `A = sum_{n=0}^N p1^-n`
    pub a: W,
    /// `B = sum_{n=1}^K p2^-n`
    pub b: W,
    /// `sum_{n=1}^N n p1^-n`
    pub left_first: W,
    /// `sum_{n=1}^N n^2 p1^-n`
    pub left_second: W,
    /// `sum_{n=1}^K n p2^-n`
    pub right_first: W,
    /// `sum_{n=1}^K n^2 p2^-n`
    pub right_second: W,
}

impl<W: Weight> ExtremalSums<W> {
    pub fn total(&self) -> W {
        self.a.clone() + self.b.clone()
    }

    /// `sum n^2/p2^n + sum n^2/p1^n`
    pub fn second(&self) -> W {
        self.right_second.clone() + self.left_second.clone()
    }

    /// `sum n/p2^n - sum n/p1^n`
    pub fn first_diff(&self) -> W {
        self.right_first.clone() - self.left_first.clone()
    }
}

impl<W: Weight> ExtremalParams<W> {
    pub fn new(p1: W, p2: W, n: u32, k: u32) -> Result<Self> {
        if p1 < W::one() || p2 < W::one() {
            return Err(Error::InvalidParam(format!(
                "p1 = {p1}, p2 = {p2}; both must be >= 1"
            )));
        }
        if n < 1 || k < 1 {
            return Err(Error::InvalidParam(format!(
                "N = {n}, K = {k}; both must be >= 1"
            )));
        }
        Ok(Self { p1, p2, n, k })
    }

    pub fn p1(&self) -> &W {
        &self.p1
    }
    pub fn p2(&self) -> &W {
        &self.p2
    }
    /// Peak position `N`.
    pub fn n(&self) -> u32 {
        self.n
    }
    /// Length `K` of the right tail.
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn sums(&self) -> ExtremalSums<W> {
        let (a, left_first, left_second) = power_sums(&self.p1, 0, self.n);
        let (b, right_first, right_second) = power_sums(&self.p2, 1, self.k);
        ExtremalSums {
            a,
            b,
            left_first,
            left_second,
            right_first,
            right_second,
        }
    }

    /// Normalizing constant `C = 1 / (A + B)`, also the peak value.
    pub fn c(&self) -> W {
        W::one() / self.sums().total()
    }
}

/// `(sum p^-n, sum n p^-n, sum n^2 p^-n)` over `from..=to`.
fn power_sums<W: Weight>(p: &W, from: u32, to: u32) -> (W, W, W) {
    let inv = W::one() / p.clone();
    let mut term = inv.powi(from);
    let (mut s0, mut s1, mut s2) = (W::zero(), W::zero(), W::zero());
    for n in from..=to {
        let nw = W::from_int(n as i64);
        s0 = s0 + term.clone();
        s1 = s1 + nw.clone() * term.clone();
        s2 = s2 + nw.clone() * nw * term.clone();
        term = term * inv.clone();
    }
    (s0, s1, s2)
}

pub fn two_sided_geometric<W: Weight>(params: &ExtremalParams<W>) -> Pmf<W> {
    let inv1 = W::one() / params.p1.clone();
    let inv2 = W::one() / params.p2.clone();
    let n = params.n as usize;
    let mut raw = vec![W::zero(); n + params.k as usize + 1];
    raw[n] = W::one();
    for i in (0..n).rev() {
        raw[i] = raw[i + 1].clone() * inv1.clone();
    }
    for i in n + 1..raw.len() {
        raw[i] = raw[i - 1].clone() * inv2.clone();
    }
    Pmf::new(0, raw).expect("peak weight is 1")
}

/// Variance of [`two_sided_geometric`] from the power sums alone:
/// `((A+B)(Σn²/p2ⁿ + Σn²/p1ⁿ) − (Σn/p2ⁿ − Σn/p1ⁿ)²) / (A+B)²`.
pub fn extremal_variance_closed_form<W: Weight>(params: &ExtremalParams<W>) -> W {
    let s = params.sums();
    let total = s.total();
    let d = s.first_diff();
    (total.clone() * s.second() - d.clone() * d) / (total.clone() * total)
}

/// `p(z) = theta (1 - theta)^z` on `0..=L`, with `L` the least integer whose
/// untruncated tail `(1 - theta)^(L+1)` is below `tail_tol`, renormalized.
pub fn geometric_truncated(theta: f64, tail_tol: f64) -> Result<Pmf<f64>> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::InvalidParam(format!(
            "theta = {theta} not in (0, 1)"
        )));
    }
    if !(tail_tol > 0.0 && tail_tol < 1.0) {
        return Err(Error::InvalidParam(format!(
            "tail_tol = {tail_tol} not in (0, 1)"
        )));
    }
    let q = 1.0 - theta;
    let last = ((tail_tol.ln() / q.ln()).ceil() as i64 - 1).max(0) as usize;
    // Guard against rounding in the log quotient.
    let last = (last.saturating_sub(1)..=last + 1)
        .find(|l| q.powi(*l as i32 + 1) < tail_tol)
        .unwrap_or(last + 1);
    let raw = (0..=last).map(|z| theta * q.powi(z as i32)).collect();
    Pmf::new(0, raw)
}

/// Named members of the standard log-concave corpus.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CorpusKind {
    Bernoulli {
        p: f64,
    },
    Binomial {
        n: u32,
        p: f64,
    },
    /// Poisson(lambda) truncated at tail mass `tail_tol`.
    PoissonTrunc {
        lambda: f64,
        tail_tol: f64,
    },
    /// `P(k) ∝ Γ(k + r) / k! · q^k`, truncated at tail mass `tail_tol`;
    /// log-concave iff `r >= 1`.
    NegBinTrunc {
        r: f64,
        q: f64,
        tail_tol: f64,
    },
}

pub fn corpus_member(kind: CorpusKind) -> Result<Pmf<f64>> {
    match kind {
        CorpusKind::Bernoulli { p } => bernoulli(p),
        CorpusKind::Binomial { n, p } => binomial(n, p),
        CorpusKind::PoissonTrunc { lambda, tail_tol } => {
            if !(lambda > 0.0 && lambda.is_finite()) {
                return Err(Error::InvalidParam(format!(
                    "lambda = {lambda} must be positive"
                )));
            }
            // log w_{k+1} - log w_k = log(lambda / (k+1))
            truncated_by_tail(
                -lambda,
                |k| (lambda / (k as f64 + 1.0)).ln(),
                lambda,
                tail_tol,
            )
        }
        CorpusKind::NegBinTrunc { r, q, tail_tol } => {
            if !(r >= 1.0 && r.is_finite()) {
                return Err(Error::InvalidParam(format!("r = {r} must be >= 1")));
            }
            if !(q > 0.0 && q < 1.0) {
                return Err(Error::InvalidParam(format!("q = {q} not in (0, 1)")));
            }
            let mean = r * q / (1.0 - q);
            truncated_by_tail(
                r * (1.0 - q).ln(),
                |k| (q * (k as f64 + r) / (k as f64 + 1.0)).ln(),
                mean,
                tail_tol,
            )
        }
    }
}

pub fn bernoulli<W: Weight>(p: W) -> Result<Pmf<W>> {
    binomial(1, p)
}

pub fn binomial<W: Weight>(n: u32, p: W) -> Result<Pmf<W>> {
    if p < W::zero() || p > W::one() {
        return Err(Error::InvalidParam(format!("p = {p} not in [0, 1]")));
    }
    let q = W::one() - p.clone();
    let mut raw = Vec::with_capacity(n as usize + 1);
    let mut coeff = W::one();
    for k in 0..=n {
        raw.push(coeff.clone() * p.powi(k) * q.powi(n - k));
        coeff = coeff * W::from_int((n - k) as i64) / W::from_int(k as i64 + 1);
    }
    Pmf::new(0, raw)
}

/// Accumulates `exp(log_w)` from `k = 0` with the given log-ratio recurrence
/// until past `mean` and the remaining tail mass is below `tail_tol`.
fn truncated_by_tail(
    log_w0: f64,
    log_ratio: impl Fn(usize) -> f64,
    mean: f64,
    tail_tol: f64,
) -> Result<Pmf<f64>> {
    if !(tail_tol > 0.0 && tail_tol < 1.0) {
        return Err(Error::InvalidParam(format!(
            "tail_tol = {tail_tol} not in (0, 1)"
        )));
    }
    let mut raw = Vec::new();
    let mut log_w = log_w0;
    let mut mass = 0.0;
    let mut k = 0usize;
    loop {
        let w = log_w.exp();
        raw.push(w);
        mass += w;
        if k as f64 >= mean && 1.0 - mass < tail_tol {
            break;
        }
        if k > 1_000_000 {
            return Err(Error::InvalidParam("truncation did not converge".into()));
        }
        log_w += log_ratio(k);
        k += 1;
    }
    Pmf::new(0, raw)
}
