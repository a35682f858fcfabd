//! Finite-support probability mass functions on a contiguous integer window.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use crate::error::{Error, Result};
use crate::scalar::{Mode, Rational, Scalar, Weight};

/// Relative slack allowed by the float log-concavity test.
pub const LOG_CONCAVE_REL_TOL: f64 = 1e-9;

/// Outer weights whose potential exceeds the mode's by more than this are
/// dropped by the random generator.
const GENERATOR_POTENTIAL_CAP: f64 = 300.0;

/// PMF with `weights[i] = P(X = offset + i)`.
///
/// The first and last weights are always strictly positive; interior zeros
/// are representable (and make the PMF fail [`Pmf::is_log_concave`]).
#[derive(Clone, Debug, PartialEq)]
pub struct Pmf<W: Weight> {
    offset: i64,
    weights: Vec<W>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Moments<W> {
    pub mean: W,
    pub variance: W,
}

impl<W: Weight> Pmf<W> {
    /// Normalizes `raw` and trims zero weights at both ends.
    pub fn new(offset: i64, raw: Vec<W>) -> Result<Self> {
        if let Some(i) = raw.iter().position(|w| *w < W::zero()) {
            return Err(Error::InvalidPmf(format!(
                "negative weight {} at index {i}",
                raw[i]
            )));
        }
        let Some(first) = raw.iter().position(|w| !w.is_zero()) else {
            return Err(Error::InvalidPmf("all weights are zero".into()));
        };
        let last = raw.iter().rposition(|w| !w.is_zero()).unwrap_or(first);
        let mut weights: Vec<W> = raw[first..=last].to_vec();
        let total = weights.iter().fold(W::zero(), |acc, w| acc + w.clone());
        if W::MODE == Mode::Float && !total.to_f64().is_finite() {
            return Err(Error::InvalidPmf(
                "weights do not sum to a finite value".into(),
            ));
        }
        for w in &mut weights {
            *w = w.clone() / total.clone();
        }
        Ok(Self {
            offset: offset + first as i64,
            weights,
        })
    }

    pub fn point_mass(at: i64) -> Self {
        Self {
            offset: at,
            weights: vec![W::one()],
        }
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn weights(&self) -> &[W] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Rightmost support point.
    pub fn max_support(&self) -> i64 {
        self.offset + self.weights.len() as i64 - 1
    }

    pub fn prob(&self, z: i64) -> W {
        let i = z - self.offset;
        if i < 0 {
            return W::zero();
        }
        self.weights
            .get(i as usize)
            .cloned()
            .unwrap_or_else(W::zero)
    }

    pub fn mode(&self) -> Mode {
        W::MODE
    }

    pub fn translate(&self, k: i64) -> Self {
        Self {
            offset: self.offset + k,
            weights: self.weights.clone(),
        }
    }

    /// Contiguous support and `p(z)^2 >= p(z-1) p(z+1)` at every interior point.
    pub fn is_log_concave(&self) -> bool {
        if self.weights.iter().any(|w| w.is_zero()) {
            return false;
        }
        self.weights.windows(3).all(|w| {
            let sq = w[1].clone() * w[1].clone();
            let prod = w[0].clone() * w[2].clone();
            sq.ge_rel(&prod, &sq, LOG_CONCAVE_REL_TOL)
        })
    }

    /// Weights are non-increasing from the left end.
    pub fn is_monotone_nonincreasing(&self) -> bool {
        self.weights
            .windows(2)
            .all(|w| w[0].ge_rel(&w[1], &w[0], LOG_CONCAVE_REL_TOL))
    }

    pub fn moments(&self) -> Moments<W> {
        // Centre at the offset so large offsets do not cost float precision.
        let mut m1 = W::zero();
        let mut m2 = W::zero();
        for (i, w) in self.weights.iter().enumerate() {
            let z = W::from_int(i as i64);
            m1 = m1 + z.clone() * w.clone();
            m2 = m2 + z.clone() * z * w.clone();
        }
        let mut variance = m2 - m1.clone() * m1.clone();
        if W::MODE == Mode::Float && variance < W::zero() {
            variance = W::zero();
        }
        Moments {
            mean: m1 + W::from_int(self.offset),
            variance,
        }
    }

    /// `M(X) = max_z P(X = z)`.
    pub fn m_functional(&self) -> W {
        self.weights
            .iter()
            .skip(1)
            .fold(
                self.weights[0].clone(),
                |m, w| if *w > m { w.clone() } else { m },
            )
    }

    /// Law of the sum of independent variables distributed as `self` and `other`.
    pub fn convolve(&self, other: &Self) -> Self {
        let mut out = vec![W::zero(); self.len() + other.len() - 1];
        for (i, a) in self.weights.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.weights.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self {
            offset: self.offset + other.offset,
            weights: out,
        }
    }

    /// `Q(X; lambda) = max_z P(z <= X <= z + lambda)`.
    pub fn concentration(&self, lambda: usize) -> W {
        let win = (lambda + 1).min(self.len());
        let mut sum = self.weights[..win]
            .iter()
            .fold(W::zero(), |a, w| a + w.clone());
        let mut best = sum.clone();
        for i in win..self.len() {
            sum = sum + self.weights[i].clone() - self.weights[i - win].clone();
            if sum > best {
                best = sum.clone();
            }
        }
        best
    }

    pub fn to_float(&self) -> Pmf<f64> {
        Pmf {
            offset: self.offset,
            weights: self.weights.iter().map(Weight::to_f64).collect(),
        }
    }
}

/// A PMF whose arithmetic mode is only known at runtime (files, CLI, bindings).
#[derive(Clone, Debug, PartialEq)]
pub enum AnyPmf {
    Exact(Pmf<Rational>),
    Float(Pmf<f64>),
}

impl AnyPmf {
    pub fn mode(&self) -> Mode {
        match self {
            AnyPmf::Exact(_) => Mode::Exact,
            AnyPmf::Float(_) => Mode::Float,
        }
    }

    pub fn to_float(&self) -> Pmf<f64> {
        match self {
            AnyPmf::Exact(p) => p.to_float(),
            AnyPmf::Float(p) => p.clone(),
        }
    }

    pub fn offset(&self) -> i64 {
        match self {
            AnyPmf::Exact(p) => p.offset(),
            AnyPmf::Float(p) => p.offset(),
        }
    }

    pub fn weights(&self) -> Vec<Scalar> {
        match self {
            AnyPmf::Exact(p) => p.weights().iter().map(Weight::to_scalar).collect(),
            AnyPmf::Float(p) => p.weights().iter().map(Weight::to_scalar).collect(),
        }
    }

    pub fn is_log_concave(&self) -> bool {
        match self {
            AnyPmf::Exact(p) => p.is_log_concave(),
            AnyPmf::Float(p) => p.is_log_concave(),
        }
    }

    pub fn moments(&self) -> Moments<Scalar> {
        match self {
            AnyPmf::Exact(p) => {
                let m = p.moments();
                Moments {
                    mean: m.mean.into(),
                    variance: m.variance.into(),
                }
            }
            AnyPmf::Float(p) => {
                let m = p.moments();
                Moments {
                    mean: m.mean.into(),
                    variance: m.variance.into(),
                }
            }
        }
    }

    pub fn m_functional(&self) -> Scalar {
        match self {
            AnyPmf::Exact(p) => p.m_functional().into(),
            AnyPmf::Float(p) => p.m_functional().into(),
        }
    }

    pub fn concentration(&self, lambda: usize) -> Scalar {
        match self {
            AnyPmf::Exact(p) => p.concentration(lambda).into(),
            AnyPmf::Float(p) => p.concentration(lambda).into(),
        }
    }

    pub fn convolve(&self, other: &AnyPmf) -> Result<AnyPmf> {
        match (self, other) {
            (AnyPmf::Exact(a), AnyPmf::Exact(b)) => Ok(AnyPmf::Exact(a.convolve(b))),
            (AnyPmf::Float(a), AnyPmf::Float(b)) => Ok(AnyPmf::Float(a.convolve(b))),
            (a, b) => Err(Error::ModeError(format!(
                "cannot convolve {} with {}",
                a.mode(),
                b.mode()
            ))),
        }
    }
}

/// Builds a PMF in the requested mode from mixed scalars.
pub fn make_pmf(offset: i64, raw: &[Scalar], mode: Mode) -> Result<AnyPmf> {
    Ok(match mode {
        Mode::Exact => AnyPmf::Exact(Pmf::new(
            offset,
            raw.iter().map(Rational::from_scalar).collect(),
        )?),
        Mode::Float => AnyPmf::Float(Pmf::new(offset, raw.iter().map(Scalar::to_f64).collect())?),
    })
}

/// Seeded random log-concave PMF with support length at most `max_support`.
///
/// Support length and mode position are uniform; the potential is zero at the
/// mode and its slopes grow outward by i.i.d. Exp(1) increments.
pub fn random_log_concave(seed: u64, max_support: usize) -> Pmf<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = rng.random_range(1..=max_support.max(1));
    let mode = rng.random_range(0..len);
    build_from_mode(&mut rng, len, mode)
}

/// Like [`random_log_concave`] but with the mode at the left end, so the
/// weights are non-increasing from offset 0.
pub fn random_monotone_log_concave(seed: u64, max_support: usize) -> Pmf<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let len = rng.random_range(1..=max_support.max(1));
    build_from_mode(&mut rng, len, 0)
}

fn build_from_mode(rng: &mut ChaCha8Rng, len: usize, mode: usize) -> Pmf<f64> {
    let mut potential = vec![0.0f64; len];
    let mut slope = 0.0;
    for z in mode + 1..len {
        let inc: f64 = Exp1.sample(rng);
        slope += inc;
        potential[z] = potential[z - 1] + slope;
    }
    slope = 0.0;
    for z in (0..mode).rev() {
        let inc: f64 = Exp1.sample(rng);
        slope += inc;
        potential[z] = potential[z + 1] + slope;
    }
    let raw: Vec<f64> = potential
        .iter()
        .map(|v| {
            if *v > GENERATOR_POTENTIAL_CAP {
                0.0
            } else {
                (-v).exp()
            }
        })
        .collect();
    Pmf::new(0, raw).expect("mode weight is 1")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn normalizes_and_trims() {
        let p = Pmf::new(0, vec![1.0, 1.0]).unwrap();
        assert_eq!(p.weights(), &[0.5, 0.5]);
        let p = Pmf::new(3, vec![0.0, 2.0, 2.0, 0.0]).unwrap();
        assert_eq!(p.offset(), 4);
        assert_eq!(p.weights(), &[0.5, 0.5]);
        let p = Pmf::new(0, vec![q(1, 1), q(2, 1), q(1, 1)]).unwrap();
        assert_eq!(p.weights(), &[q(1, 4), q(1, 2), q(1, 4)]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            Pmf::new(0, vec![0.0, 0.0]),
            Err(Error::InvalidPmf(_))
        ));
        assert!(matches!(
            Pmf::new(0, vec![1.0, -0.5]),
            Err(Error::InvalidPmf(_))
        ));
        assert!(matches!(
            Pmf::<f64>::new(0, vec![]),
            Err(Error::InvalidPmf(_))
        ));
    }

    #[test]
    fn log_concavity() {
        assert!(Pmf::new(0, vec![q(1, 4), q(1, 2), q(1, 4)])
            .unwrap()
            .is_log_concave());
        let gap = Pmf::new(0, vec![0.5, 0.0, 0.5]).unwrap();
        assert_eq!(gap.len(), 3);
        assert!(!gap.is_log_concave());
        // (1/2)^2 < 1 * 1
        assert!(!Pmf::new(0, vec![q(1, 1), q(1, 2), q(1, 1)])
            .unwrap()
            .is_log_concave());
        assert!(Pmf::<f64>::point_mass(5).is_log_concave());
    }

    #[test]
    fn moments_exact_and_float() {
        let p = Pmf::<Rational>::point_mass(7).moments();
        assert_eq!((p.mean, p.variance), (q(7, 1), q(0, 1)));
        let m = Pmf::new(0, vec![q(1, 4), q(1, 2), q(1, 4)])
            .unwrap()
            .moments();
        assert_eq!((m.mean, m.variance), (q(1, 1), q(1, 2)));
        let m = Pmf::new(10, vec![q(1, 3), q(2, 3)]).unwrap().moments();
        assert_eq!((m.mean, m.variance), (q(32, 3), q(2, 9)));
    }

    #[test]
    fn geometric_moments_match_series() {
        // Independent oracle: closed forms (1-t)/t and (1-t)/t^2.
        let theta = 0.5f64;
        let raw: Vec<f64> = (0..200).map(|z| theta * (1.0 - theta).powi(z)).collect();
        let m = Pmf::new(0, raw).unwrap().moments();
        assert!((m.mean - 1.0).abs() < 1e-12);
        assert!((m.variance - 2.0).abs() < 1e-12);
    }

    #[test]
    fn m_functional_and_concentration() {
        let p = Pmf::new(0, vec![q(1, 4), q(1, 2), q(1, 4)]).unwrap();
        assert_eq!(p.m_functional(), q(1, 2));
        assert_eq!(p.concentration(0), q(1, 2));
        assert_eq!(p.concentration(1), q(3, 4));
        assert_eq!(p.concentration(2), q(1, 1));
        assert_eq!(p.concentration(50), q(1, 1));
        assert_eq!(Pmf::<Rational>::point_mass(0).m_functional(), q(1, 1));
    }

    #[test]
    fn concentration_matches_brute_force() {
        for seed in 0..50 {
            let p = random_log_concave(seed, 30);
            for lambda in 0..8usize {
                let brute = (p.offset() - 10..=p.max_support() + 10)
                    .map(|z| (z..=z + lambda as i64).map(|t| p.prob(t)).sum::<f64>())
                    .fold(0.0f64, f64::max);
                assert!((brute - p.concentration(lambda)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn convolution_basics() {
        let b = Pmf::new(0, vec![q(1, 2), q(1, 2)]).unwrap();
        assert_eq!(b.convolve(&b).weights(), &[q(1, 4), q(1, 2), q(1, 4)]);
        let p = Pmf::new(-2, vec![q(1, 3), q(1, 2), q(1, 6)]).unwrap();
        assert_eq!(p.convolve(&Pmf::point_mass(5)), p.translate(5));
    }

    #[test]
    fn convolution_adds_variances() {
        let g: Vec<f64> = (0..80).map(|z| 0.5f64.powi(z + 1)).collect();
        let g = Pmf::new(0, g).unwrap();
        let v = g.moments().variance;
        let s = g.convolve(&g).moments().variance;
        assert!((s - 2.0 * v).abs() < 1e-9);
    }

    #[test]
    fn mode_mismatch_is_reported() {
        let a = AnyPmf::Exact(Pmf::point_mass(0));
        let b = AnyPmf::Float(Pmf::point_mass(0));
        assert!(matches!(a.convolve(&b), Err(Error::ModeError(_))));
        assert!(a.convolve(&a).is_ok());
    }

    #[test]
    fn make_pmf_modes() {
        let raw = [Scalar::int(1), Scalar::int(2), Scalar::int(1)];
        let AnyPmf::Exact(p) = make_pmf(0, &raw, Mode::Exact).unwrap() else {
            panic!()
        };
        assert_eq!(p.weights(), &[q(1, 4), q(1, 2), q(1, 4)]);
        let AnyPmf::Float(p) = make_pmf(0, &raw, Mode::Float).unwrap() else {
            panic!()
        };
        assert_eq!(p.weights(), &[0.25, 0.5, 0.25]);
    }

    #[test]
    fn generator_is_deterministic_and_log_concave() {
        for seed in 0..200 {
            let p = random_log_concave(seed, 60);
            assert_eq!(p, random_log_concave(seed, 60));
            assert!(p.len() <= 60);
            assert!(p.is_log_concave(), "seed {seed}");
            let m = random_monotone_log_concave(seed, 60);
            assert!(m.is_log_concave() && m.is_monotone_nonincreasing());
            assert_eq!(m.offset(), 0);
        }
        for seed in 0..20 {
            assert_eq!(random_log_concave(seed, 1).len(), 1);
        }
    }
}
