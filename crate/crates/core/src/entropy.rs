//! Rényi entropies (natural log), entropy powers and the discrete delta
//! `N_alpha - 1`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::pmf::Pmf;
use crate::scalar::Weight;

/// Orders closer than this to 1 use the Shannon formula.
pub const SHANNON_ROUTING: f64 = 1e-6;

/// Order `alpha` in `(0, inf]`. `alpha = inf` is the min-entropy.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct RenyiOrder(f64);

impl RenyiOrder {
    pub const SHANNON: RenyiOrder = RenyiOrder(1.0);
    pub const MIN_ENTROPY: RenyiOrder = RenyiOrder(f64::INFINITY);

    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_nan() || alpha <= 0.0 {
            return Err(Error::InvalidOrder(alpha.to_string()));
        }
        Ok(Self(alpha))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_shannon(self) -> bool {
        (self.0 - 1.0).abs() < SHANNON_ROUTING
    }

    pub fn is_min_entropy(self) -> bool {
        self.0.is_infinite()
    }
}

impl fmt::Display for RenyiOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_min_entropy() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl FromStr for RenyiOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" | "min" => Ok(Self::MIN_ENTROPY),
            "shannon" => Ok(Self::SHANNON),
            t => {
                let v = crate::scalar::parse_scalar(t)
                    .map_err(|_| Error::InvalidOrder(t.to_owned()))?;
                Self::new(v.to_f64())
            }
        }
    }
}

pub fn renyi_entropy<W: Weight>(p: &Pmf<W>, order: RenyiOrder) -> f64 {
    let w: Vec<f64> = p.weights().iter().map(Weight::to_f64).collect();
    let max = w.iter().cloned().fold(0.0f64, f64::max);
    if order.is_min_entropy() {
        return -max.ln();
    }
    if order.is_shannon() {
        return -w
            .iter()
            .filter(|x| **x > 0.0)
            .map(|x| x * x.ln())
            .sum::<f64>();
    }
    // log sum p^a = a log M + log sum (p/M)^a, stable for large a.
    let a = order.value();
    let scaled: f64 = w
        .iter()
        .filter(|x| **x > 0.0)
        .map(|x| (x / max).powf(a))
        .sum();
    let log_sum = a * max.ln() + scaled.ln();
    log_sum / (1.0 - a)
}

/// `N_alpha = exp(2 H_alpha)`; `N_inf = M^-2`.
pub fn entropy_power<W: Weight>(p: &Pmf<W>, order: RenyiOrder) -> f64 {
    if order.is_min_entropy() {
        let m = p.m_functional().to_f64();
        return 1.0 / (m * m);
    }
    (2.0 * renyi_entropy(p, order)).exp()
}

pub fn delta<W: Weight>(p: &Pmf<W>, order: RenyiOrder) -> f64 {
    entropy_power(p, order) - 1.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pmf::random_log_concave;

    fn binom2() -> Pmf<f64> {
        Pmf::new(0, vec![0.25, 0.5, 0.25]).unwrap()
    }

    #[test]
    fn order_validation() {
        assert!(matches!(RenyiOrder::new(0.0), Err(Error::InvalidOrder(_))));
        assert!(matches!(RenyiOrder::new(-2.0), Err(Error::InvalidOrder(_))));
        assert!(RenyiOrder::new(f64::NAN).is_err());
        assert!("inf".parse::<RenyiOrder>().unwrap().is_min_entropy());
        assert!("1.0000001".parse::<RenyiOrder>().unwrap().is_shannon());
        assert_eq!("3/2".parse::<RenyiOrder>().unwrap().value(), 1.5);
    }

    #[test]
    fn uniform_has_log_m_for_every_order() {
        let p = Pmf::new(0, vec![1.0; 7]).unwrap();
        for a in [0.5, 1.0, 1.5, 2.0, 10.0, f64::INFINITY] {
            let h = renyi_entropy(&p, RenyiOrder::new(a).unwrap());
            assert!((h - 7f64.ln()).abs() < 1e-12, "alpha {a}");
        }
    }

    #[test]
    fn point_mass() {
        let p = Pmf::<f64>::point_mass(3);
        for a in [0.5, 1.0, 2.0, f64::INFINITY] {
            let o = RenyiOrder::new(a).unwrap();
            assert_eq!(renyi_entropy(&p, o), 0.0);
            assert_eq!(entropy_power(&p, o), 1.0);
            assert_eq!(delta(&p, o), 0.0);
        }
    }

    #[test]
    fn min_entropy_values() {
        let p = binom2();
        assert!((renyi_entropy(&p, RenyiOrder::MIN_ENTROPY) - 2f64.ln()).abs() < 1e-15);
        assert_eq!(entropy_power(&p, RenyiOrder::MIN_ENTROPY), 4.0);
        assert_eq!(delta(&p, RenyiOrder::MIN_ENTROPY), 3.0);
    }

    #[test]
    fn collision_entropy_of_fair_coin() {
        let p = Pmf::new(0, vec![0.5, 0.5]).unwrap();
        let two = RenyiOrder::new(2.0).unwrap();
        assert!((entropy_power(&p, two) - 4.0).abs() < 1e-12);
        assert!((delta(&p, two) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn geometric_min_entropy_power() {
        let raw: Vec<f64> = (0..100).map(|z| 0.5f64.powi(z + 1)).collect();
        let p = Pmf::new(0, raw).unwrap();
        assert!((entropy_power(&p, RenyiOrder::MIN_ENTROPY) - 4.0).abs() < 1e-9);
    }

    #[test]
    fn corpus_properties() {
        let orders = [0.5, 0.9, 1.1, 1.5, 2.0, 4.0, 16.0, 200.0, f64::INFINITY];
        for seed in 0..300 {
            let p = random_log_concave(seed, 60);
            let n: Vec<f64> = orders
                .iter()
                .map(|a| entropy_power(&p, RenyiOrder::new(*a).unwrap()))
                .collect();
            for w in n.windows(2) {
                assert!(w[0] >= w[1] - 1e-9);
            }
            let m = p.m_functional();
            assert!((entropy_power(&p, RenyiOrder::MIN_ENTROPY) * m * m - 1.0).abs() < 1e-12);
            let h1 = renyi_entropy(&p, RenyiOrder::SHANNON);
            for a in [1.0 - 1e-7, 1.0 + 1e-7, 1.0 + 2e-6, 1.0 - 2e-6] {
                assert!((renyi_entropy(&p, RenyiOrder::new(a).unwrap()) - h1).abs() <= 1e-5);
            }
            let t = p.translate(-17);
            for a in orders {
                let o = RenyiOrder::new(a).unwrap();
                assert_eq!(renyi_entropy(&p, o), renyi_entropy(&t, o));
            }
        }
    }
}
