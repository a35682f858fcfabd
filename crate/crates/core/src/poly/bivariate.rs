use num_traits::Zero;

use super::{Poly, Var};
use crate::scalar::Rational;

/// Dense polynomial in `x` and `y`; `coeffs[i][j]` multiplies `x^i y^j`.
#[derive(Clone, Debug)]
pub struct BiPoly {
    coeffs: Vec<Vec<Rational>>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn lift(p: &Poly) -> Self {
        let c = p.coeffs().to_vec();
        let coeffs = match p.var() {
            Var::X => c.into_iter().map(|v| vec![v]).collect(),
            Var::Y => vec![c],
        };
        Self { coeffs }
    }

    pub fn coeff(&self, i: usize, j: usize) -> Rational {
        self.coeffs
            .get(i)
            .and_then(|row| row.get(j))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    fn dims(&self) -> (usize, usize) {
        (
            self.coeffs.len(),
            self.coeffs.iter().map(Vec::len).max().unwrap_or(0),
        )
    }

    pub fn add(&self, other: &BiPoly) -> BiPoly {
        let (r1, c1) = self.dims();
        let (r2, c2) = other.dims();
        let coeffs = (0..r1.max(r2))
            .map(|i| {
                (0..c1.max(c2))
                    .map(|j| self.coeff(i, j) + other.coeff(i, j))
                    .collect()
            })
            .collect();
        BiPoly { coeffs }
    }

    pub fn scale(&self, c: &Rational) -> BiPoly {
        BiPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|row| row.iter().map(|v| v * c).collect())
                .collect(),
        }
    }

    pub fn sub(&self, other: &BiPoly) -> BiPoly {
        self.add(&other.scale(&-Rational::from_integer(1.into())))
    }

    pub fn mul(&self, other: &BiPoly) -> BiPoly {
        let (r1, c1) = self.dims();
        let (r2, c2) = other.dims();
        if r1 == 0 || r2 == 0 {
            return BiPoly::zero();
        }
        let mut out = vec![vec![Rational::zero(); c1 + c2]; r1 + r2 - 1];
        let rhs: Vec<(usize, usize, &Rational)> = other
            .coeffs
            .iter()
            .enumerate()
            .flat_map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(move |(j, v)| (i, j, v))
            })
            .collect();
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, a) in row.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (k, l, b) in &rhs {
                    out[i + k][j + l] += a * *b;
                }
            }
        }
        BiPoly { coeffs: out }
    }

    pub fn pow(&self, exp: u32) -> BiPoly {
        let mut acc = BiPoly::lift(&Poly::one(Var::X));
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(Zero::is_zero)
    }

    /// Largest absolute coefficient.
    pub fn max_abs(&self) -> Rational {
        self.coeffs
            .iter()
            .flatten()
            .map(|v| {
                if *v < Rational::zero() {
                    -v.clone()
                } else {
                    v.clone()
                }
            })
            .fold(Rational::zero(), |m, v| if v > m { v } else { m })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    #[test]
    fn binomial_square() {
        let x = BiPoly::lift(&Poly::monomial(Var::X, int(1), 1));
        let y = BiPoly::lift(&Poly::monomial(Var::Y, int(1), 1));
        let sq = x.add(&y).pow(2);
        assert_eq!(sq.coeff(2, 0), int(1));
        assert_eq!(sq.coeff(1, 1), int(2));
        assert_eq!(sq.coeff(0, 2), int(1));
        assert_eq!(sq.coeff(1, 0), int(0));
        let diff = sq
            .sub(&x.mul(&x))
            .sub(&y.mul(&y))
            .sub(&x.mul(&y).scale(&int(2)));
        assert!(diff.is_zero());
    }
}
