//! Dense univariate polynomials with exact rational coefficients, plus the
//! bivariate expansion used once for the decomposition identity.

mod bivariate;
pub mod identities;

pub use bivariate::BiPoly;

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
}

impl Var {
    pub fn symbol(self) -> char {
        match self {
            Var::X => 'x',
            Var::Y => 'y',
        }
    }
}

/// `coeffs[n]` is the coefficient of `var^n`; trailing zeros are trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    var: Var,
    coeffs: Vec<Rational>,
}

fn int(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

impl Poly {
    pub fn zero(var: Var) -> Self {
        Self {
            var,
            coeffs: Vec::new(),
        }
    }

    pub fn one(var: Var) -> Self {
        Self::constant(var, Rational::one())
    }

    pub fn constant(var: Var, c: Rational) -> Self {
        Self::from_coeffs(var, vec![c])
    }

    pub fn monomial(var: Var, c: Rational, degree: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); degree + 1];
        coeffs[degree] = c;
        Self::from_coeffs(var, coeffs)
    }

    pub fn from_coeffs(var: Var, mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { var, coeffs }
    }

    /// `sum_{n=lo}^{hi} f(n) var^n`; empty when `lo > hi`.
    pub fn sum_range(var: Var, lo: usize, hi: usize, f: impl Fn(i64) -> Rational) -> Self {
        if lo > hi {
            return Self::zero(var);
        }
        let mut coeffs = vec![Rational::zero(); hi + 1];
        for (n, c) in coeffs.iter_mut().enumerate().skip(lo) {
            *c = f(n as i64);
        }
        Self::from_coeffs(var, coeffs)
    }

    /// `sum_{n=lo}^{hi} n^power var^n`.
    pub fn power_weighted(var: Var, lo: usize, hi: usize, power: u32) -> Self {
        Self::sum_range(var, lo, hi, |n| int(n.pow(power)))
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Rational {
        self.coeffs.get(n).cloned().unwrap_or_else(Rational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn same_var(&self, other: &Poly) -> Result<()> {
        if self.var == other.var {
            Ok(())
        } else {
            Err(Error::VarError(self.var.symbol(), other.var.symbol()))
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.same_var(other)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|n| self.coeff(n) + other.coeff(n)).collect();
        Ok(Self::from_coeffs(self.var, coeffs))
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.try_add(&other.neg())
    }

    /// Coefficient convolution.
    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.same_var(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.var));
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Ok(Self::from_coeffs(self.var, out))
    }

    pub fn pow(&self, exp: u32) -> Poly {
        let mut acc = Self::one(self.var);
        for _ in 0..exp {
            acc = acc.try_mul(self).expect("same variable");
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Self::from_coeffs(self.var, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn neg(&self) -> Poly {
        Self {
            var: self.var,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    /// Multiplies by `var^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self {
            var: self.var,
            coeffs,
        }
    }

    pub fn eval(&self, at: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * at + c)
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, c)| c * int(n as i64))
            .collect();
        Self::from_coeffs(self.var, coeffs)
    }

    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.same_var(divisor)?;
        let Some(dd) = divisor.degree() else {
            return Err(Error::InvalidParam(
                "division by the zero polynomial".into(),
            ));
        };
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let top = rem.len() - 1;
            let factor = &rem[top] / &lead;
            let shift = top - dd;
            for (i, c) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= &factor * c;
            }
            quot[shift] = factor;
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        Ok((
            Self::from_coeffs(self.var, quot),
            Self::from_coeffs(self.var, rem),
        ))
    }

    /// Number of distinct real roots in `(0, inf)`, by a Sturm sequence.
    pub fn positive_root_count(&self) -> usize {
        let Some(first) = self.coeffs.iter().position(|c| !c.is_zero()) else {
            return 0;
        };
        // Divide out var^first so the polynomial is nonzero at the origin.
        let p = Self::from_coeffs(self.var, self.coeffs[first..].to_vec());
        if p.degree() == Some(0) {
            return 0;
        }
        let mut chain = vec![p.clone(), p.derivative()];
        loop {
            let n = chain.len();
            let (_, r) = chain[n - 2]
                .div_rem(&chain[n - 1])
                .expect("nonzero divisor");
            if r.is_zero() {
                break;
            }
            chain.push(r.neg());
        }
        let at_zero: Vec<Rational> = chain.iter().map(|q| q.coeff(0)).collect();
        let at_inf: Vec<Rational> = chain
            .iter()
            .map(|q| q.coeffs.last().cloned().unwrap_or_default())
            .collect();
        sign_changes(&at_zero) - sign_changes(&at_inf)
    }

    /// Strictly positive at every `var > 0`.
    pub fn positive_on_open_half_line(&self) -> bool {
        !self.is_zero()
            && self.positive_root_count() == 0
            && self.eval(&Rational::one()).is_positive()
    }
}

fn sign_changes(values: &[Rational]) -> usize {
    let signs: Vec<bool> = values
        .iter()
        .filter(|v| !v.is_zero())
        .map(Signed::is_positive)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let v = self.var.symbol();
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, c)| match n {
                0 => format!("{c}"),
                1 => format!("{c}*{v}"),
                _ => format!("{c}*{v}^{n}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(var: Var, c: &[i64]) -> Poly {
        Poly::from_coeffs(var, c.iter().map(|v| int(*v)).collect())
    }

    #[test]
    fn arithmetic() {
        let one_plus_x = p(Var::X, &[1, 1]);
        assert_eq!(
            one_plus_x.try_mul(&one_plus_x).unwrap(),
            p(Var::X, &[1, 2, 1])
        );
        let s2 = Poly::sum_range(Var::X, 0, 2, |_| int(1));
        assert!(s2.try_mul(&Poly::zero(Var::X)).unwrap().is_zero());
        let s3 = Poly::sum_range(Var::X, 0, 3, |_| int(1));
        assert_eq!(s3.pow(4).degree(), Some(12));
        assert_eq!(s3.pow(0), Poly::one(Var::X));
        assert_eq!(one_plus_x.try_sub(&one_plus_x).unwrap(), Poly::zero(Var::X));
        assert_eq!(one_plus_x.scale(&int(3)), p(Var::X, &[3, 3]));
        assert_eq!(one_plus_x.shift(2), p(Var::X, &[0, 0, 1, 1]));
        assert_eq!(p(Var::X, &[1, 2, 3]).eval(&int(2)), int(17));
    }

    #[test]
    fn variable_mismatch() {
        let x = p(Var::X, &[0, 1]);
        let y = p(Var::Y, &[0, 1]);
        assert_eq!(x.try_mul(&y), Err(Error::VarError('x', 'y')));
        assert!(x.try_add(&y).is_err());
    }

    #[test]
    fn division() {
        // (x^3 - 1) = (x - 1)(x^2 + x + 1)
        let (q, r) = p(Var::X, &[-1, 0, 0, 1])
            .div_rem(&p(Var::X, &[-1, 1]))
            .unwrap();
        assert_eq!(q, p(Var::X, &[1, 1, 1]));
        assert!(r.is_zero());
        let (q, r) = p(Var::X, &[1, 0, 1]).div_rem(&p(Var::X, &[0, 2])).unwrap();
        assert_eq!(
            q,
            Poly::from_coeffs(Var::X, vec![int(0), Rational::new(1.into(), 2.into())])
        );
        assert_eq!(r, p(Var::X, &[1]));
    }

    #[test]
    fn sturm_counts() {
        // (x-1)(x-2)(x+3)
        let f = p(Var::X, &[6, -7, 0, 1]);
        assert_eq!(f.positive_root_count(), 2);
        // (x-1)^2 (x+1): one distinct positive root
        assert_eq!(p(Var::X, &[1, -1, -1, 1]).positive_root_count(), 1);
        assert_eq!(p(Var::X, &[1, 0, 1]).positive_root_count(), 0);
        assert!(p(Var::X, &[0, 1, -1, 2, 1]).positive_on_open_half_line());
        assert!(!p(Var::X, &[1, -1, -1, 1]).positive_on_open_half_line());
    }
}
