//! Degree of freedom of `e^{-V}` for a discrete convex potential `V`, and
//! minimal max-of-affine decompositions of `V`.
//!
//! The degree of freedom equals one plus the number of affine pieces of the
//! piecewise-linear extension of `V`, i.e. one plus the number of distinct
//! values in its slope sequence (a single point has degree 1).

use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::pmf::Pmf;
use crate::report::VerifyReport;
use crate::scalar::{Mode, Scalar, Weight, FLOAT_MERGE_REL};

/// `V(a), V(a+1), ..., V(b)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Potential<W: Weight> {
    a: i64,
    values: Vec<W>,
}

/// `psi(z) = slope * z + intercept`, equal to `V` on `cover`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffinePiece<W> {
    pub slope: W,
    pub intercept: W,
    pub cover: RangeInclusive<i64>,
}

impl<W: Weight> AffinePiece<W> {
    pub fn eval(&self, z: i64) -> W {
        self.slope.clone() * W::from_int(z) + self.intercept.clone()
    }
}

impl<W: Weight> Potential<W> {
    pub fn new(a: i64, values: Vec<W>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParam(
                "potential needs at least one value".into(),
            ));
        }
        Ok(Self { a, values })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.a + self.values.len() as i64 - 1
    }

    pub fn values(&self) -> &[W] {
        &self.values
    }

    pub fn value(&self, z: i64) -> &W {
        &self.values[(z - self.a) as usize]
    }

    /// `s_z = V(z) - V(z-1)` for `z = a+1..=b`.
    pub fn slopes(&self) -> Vec<W> {
        self.values
            .windows(2)
            .map(|w| w[1].clone() - w[0].clone())
            .collect()
    }

    /// Adds the affine function `slope * z + intercept`.
    pub fn add_affine(&self, slope: &W, intercept: &W) -> Self {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                v.clone() + slope.clone() * W::from_int(self.a + i as i64) + intercept.clone()
            })
            .collect();
        Self { a: self.a, values }
    }

    fn first_concave_step(&self) -> Option<usize> {
        let s = self.slopes();
        s.windows(2)
            .position(|w| !(w[1] >= w[0] || w[1].merges_with(&w[0])))
    }
}

/// Slopes nondecreasing, i.e. `V(z-1) - 2V(z) + V(z+1) >= 0` everywhere.
pub fn check_convex<W: Weight>(v: &Potential<W>) -> bool {
    v.first_concave_step().is_none()
}

fn require_convex<W: Weight>(v: &Potential<W>) -> Result<()> {
    match v.first_concave_step() {
        Some(i) => Err(Error::NotConvex(i)),
        None => Ok(()),
    }
}

/// Maximal runs of equal slope as `(first point, last point)` offsets.
fn collinear_runs<W: Weight>(slopes: &[W]) -> Vec<(usize, usize)> {
    let mut runs = Vec::new();
    let mut start = 0;
    for i in 1..=slopes.len() {
        if i == slopes.len() || !slopes[i].merges_with(&slopes[start]) {
            runs.push((start, i));
            start = i;
        }
    }
    runs
}

pub fn degree_of_freedom<W: Weight>(v: &Potential<W>) -> Result<usize> {
    require_convex(v)?;
    if v.values.len() == 1 {
        return Ok(1);
    }
    Ok(collinear_runs(&v.slopes()).len() + 1)
}

/// A minimum-cardinality family of affine functions whose maximum over
/// `a..=b` equals `V`.
///
/// For convex `V`, each affine minorant touching `V` does so on an interval
/// contained in a maximal collinear run, so greedy interval covering over the
/// runs is optimal.
pub fn minimal_affine_cover<W: Weight>(v: &Potential<W>) -> Result<Vec<AffinePiece<W>>> {
    require_convex(v)?;
    let a = v.a;
    if v.values.len() == 1 {
        return Ok(vec![AffinePiece {
            slope: W::zero(),
            intercept: v.values[0].clone(),
            cover: a..=a,
        }]);
    }
    let slopes = v.slopes();
    let runs = collinear_runs(&slopes);
    let last = v.values.len() - 1;
    let mut pieces = Vec::new();
    let mut next_uncovered = 0usize;
    let mut r = 0usize;
    while next_uncovered <= last {
        // Among runs starting at or before the first uncovered point, take the
        // one reaching farthest right. Runs are sorted and chained, so that is
        // the last such run.
        let mut best = None;
        while r < runs.len() && runs[r].0 <= next_uncovered {
            best = Some(runs[r]);
            r += 1;
        }
        let (lo, hi) = best.expect("runs chain across the whole support");
        let slope = slopes[lo].clone();
        let z0 = a + lo as i64;
        let intercept = v.values[lo].clone() - slope.clone() * W::from_int(z0);
        pieces.push(AffinePiece {
            slope,
            intercept,
            cover: z0..=a + hi as i64,
        });
        next_uncovered = hi + 1;
    }
    Ok(pieces)
}

/// Checks that the minimal cover uses at most `DoF - 1` affine functions.
pub fn necessary_condition_check<W: Weight>(v: &Potential<W>) -> Result<VerifyReport> {
    let dof = degree_of_freedom(v)?;
    let cover = minimal_affine_cover(v)?.len();
    let bound = dof as i64 - 1;
    let report = VerifyReport::new(
        "dof_cover_bound",
        Scalar::int(bound),
        Scalar::int(cover as i64),
        Scalar::int(bound - cover as i64),
        0.0,
    )
    .param("a", v.a)
    .param("b", v.b())
    .detail("dof", dof)
    .detail("cover", cover);
    Ok(report)
}

/// Degree of freedom of a log-concave PMF, read from its weight ratios:
/// consecutive slopes of `-log p` agree iff `p(z)^2 = p(z-1) p(z+1)`.
pub fn pmf_degree_of_freedom<W: Weight>(p: &Pmf<W>) -> Result<usize> {
    if !p.is_log_concave() {
        return Err(Error::Precondition("pmf is not log-concave".into()));
    }
    let w = p.weights();
    if w.len() == 1 {
        return Ok(1);
    }
    let breaks = w
        .windows(3)
        .filter(|t| {
            let sq = t[1].clone() * t[1].clone();
            let prod = t[0].clone() * t[2].clone();
            !same_ratio(&sq, &prod)
        })
        .count();
    Ok(breaks + 2)
}

/// Exact equality, or purely relative closeness in float mode (weights can be
/// tiny, so the unit floor used for slopes does not apply).
fn same_ratio<W: Weight>(a: &W, b: &W) -> bool {
    match W::MODE {
        Mode::Exact => a == b,
        Mode::Float => {
            let (a, b) = (a.to_f64(), b.to_f64());
            (a - b).abs() <= FLOAT_MERGE_REL * a.abs().max(b.abs())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn worked_example() -> Potential<Rational> {
        Potential::new(0, vec![q(3, 1), q(2, 1), q(4, 3), q(2, 1)]).unwrap()
    }

    #[test]
    fn convexity() {
        assert!(check_convex(&worked_example()));
        assert!(check_convex(
            &Potential::new(-3, vec![q(1, 1), q(3, 1), q(5, 1), q(7, 1)]).unwrap()
        ));
        let bump = Potential::new(0, vec![q(0, 1), q(1, 1), q(0, 1)]).unwrap();
        assert!(!check_convex(&bump));
        assert_eq!(degree_of_freedom(&bump), Err(Error::NotConvex(0)));
        assert!(minimal_affine_cover(&bump).is_err());
    }

    #[test]
    fn worked_example_dof_and_cover() {
        let v = worked_example();
        assert_eq!(v.slopes(), vec![q(-1, 1), q(-2, 3), q(2, 3)]);
        assert_eq!(degree_of_freedom(&v).unwrap(), 4);
        let cover = minimal_affine_cover(&v).unwrap();
        assert_eq!(
            cover,
            vec![
                AffinePiece {
                    slope: q(-1, 1),
                    intercept: q(3, 1),
                    cover: 0..=1
                },
                AffinePiece {
                    slope: q(2, 3),
                    intercept: q(0, 1),
                    cover: 2..=3
                },
            ]
        );
        let r = necessary_condition_check(&v).unwrap();
        assert!(r.pass);
        assert_eq!(r.slack, Scalar::int(1));
    }

    #[test]
    fn point_and_affine() {
        let p = Potential::new(4, vec![q(7, 2)]).unwrap();
        assert_eq!(degree_of_freedom(&p).unwrap(), 1);
        assert_eq!(minimal_affine_cover(&p).unwrap().len(), 1);
        for len in 2..8 {
            let v: Vec<Rational> = (0..len).map(|z| q(3 * z - 5, 2)).collect();
            let v = Potential::new(-2, v).unwrap();
            assert_eq!(degree_of_freedom(&v).unwrap(), 2);
            assert_eq!(minimal_affine_cover(&v).unwrap().len(), 1);
            let r = necessary_condition_check(&v).unwrap();
            assert!(r.pass);
            assert_eq!(r.slack, Scalar::int(0));
        }
    }

    #[test]
    fn v_shape_needs_two_pieces() {
        let v = Potential::new(0, [2, 1, 0, 1, 2].map(|x| q(x, 1)).to_vec()).unwrap();
        let cover = minimal_affine_cover(&v).unwrap();
        assert_eq!(cover.len(), 2);
        assert_eq!(degree_of_freedom(&v).unwrap(), 3);
    }

    #[test]
    fn float_slopes_merge_within_tolerance() {
        let v = Potential::new(0, vec![0.0, 1.0, 2.0 + 1e-12, 3.0 + 2e-12, 5.0]).unwrap();
        assert_eq!(degree_of_freedom(&v).unwrap(), 3);
        assert_eq!(minimal_affine_cover(&v).unwrap().len(), 2);
    }

    #[test]
    fn pmf_dof_from_ratios() {
        let b = Pmf::new(0, vec![q(1, 4), q(1, 2), q(1, 4)]).unwrap();
        assert_eq!(pmf_degree_of_freedom(&b).unwrap(), 3);
        let geo = Pmf::new(0, vec![q(8, 1), q(4, 1), q(2, 1), q(1, 1)]).unwrap();
        assert_eq!(pmf_degree_of_freedom(&geo).unwrap(), 2);
        assert_eq!(
            pmf_degree_of_freedom(&Pmf::<Rational>::point_mass(1)).unwrap(),
            1
        );
        let flat = Pmf::new(0, vec![1.0; 5]).unwrap();
        assert_eq!(pmf_degree_of_freedom(&flat).unwrap(), 2);
        assert!(pmf_degree_of_freedom(&Pmf::new(0, vec![1.0, 0.5, 1.0]).unwrap()).is_err());
    }
}
