//! JSON file formats for PMFs, potentials and family specifications.

use serde::Deserialize;
use serde_json::{json, Value};

use crate::dof::Potential;
use crate::error::{Error, Result};
use crate::families::{
    corpus_member, geometric_truncated, two_sided_geometric, CorpusKind, ExtremalParams,
};
use crate::pmf::{AnyPmf, Pmf};
use crate::scalar::{parse_rational, parse_scalar, Mode, Rational, Scalar, Weight};

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

fn exact_value(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        other => Err(Error::Parse(format!("expected a number, got {other}"))),
    }
}

fn float_value(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| Error::Parse(format!("bad number {n}"))),
        Value::String(s) => parse_scalar(s).map(|s| s.to_f64()),
        other => Err(Error::Parse(format!("expected a number, got {other}"))),
    }
}

#[derive(Deserialize)]
struct PmfFile {
    #[serde(default)]
    offset: i64,
    weights: Vec<Value>,
    #[serde(default)]
    exact: bool,
}

/// `{"offset": <int>, "weights": [<number or "num/den">], "exact": <bool>}`
pub fn pmf_from_json(text: &str) -> Result<AnyPmf> {
    let file: PmfFile = serde_json::from_str(text).map_err(parse_err)?;
    if file.exact {
        let w = file
            .weights
            .iter()
            .map(exact_value)
            .collect::<Result<Vec<_>>>()?;
        Ok(AnyPmf::Exact(Pmf::new(file.offset, w)?))
    } else {
        let w = file
            .weights
            .iter()
            .map(float_value)
            .collect::<Result<Vec<_>>>()?;
        Ok(AnyPmf::Float(Pmf::new(file.offset, w)?))
    }
}

pub fn pmf_to_json(p: &AnyPmf) -> Value {
    json!({
        "offset": p.offset(),
        "weights": p.weights(),
        "exact": p.mode() == Mode::Exact,
    })
}

/// A potential whose arithmetic mode is known only at runtime.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyPotential {
    Exact(Potential<Rational>),
    Float(Potential<f64>),
}

#[derive(Deserialize)]
struct PotentialFile {
    a: i64,
    values: Vec<Value>,
    #[serde(default = "yes")]
    exact: bool,
}

fn yes() -> bool {
    true
}

/// `{"a": <int>, "values": [<number or "num/den">]}`; values are exact unless
/// `"exact": false` is given.
pub fn potential_from_json(text: &str) -> Result<AnyPotential> {
    let file: PotentialFile = serde_json::from_str(text).map_err(parse_err)?;
    if file.exact {
        let v = file
            .values
            .iter()
            .map(exact_value)
            .collect::<Result<Vec<_>>>()?;
        Ok(AnyPotential::Exact(Potential::new(file.a, v)?))
    } else {
        let v = file
            .values
            .iter()
            .map(float_value)
            .collect::<Result<Vec<_>>>()?;
        Ok(AnyPotential::Float(Potential::new(file.a, v)?))
    }
}

/// Parsed family specification, e.g.
/// `{"family":"two_sided_geometric","p1":"5/3","p2":"500","N":9,"K":1}`.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilySpec {
    Geometric { theta: f64, tail_tol: f64 },
    TwoSidedExact(ExtremalParams<Rational>),
    TwoSidedFloat(ExtremalParams<f64>),
    Corpus(CorpusKind),
    BinomialExact { n: u32, p: Rational },
}

impl FamilySpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(parse_err)?;
        Self::from_value(&v)
    }

    pub fn from_value(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("family spec must be an object".into()))?;
        let get = |k: &str| {
            obj.get(k)
                .ok_or_else(|| Error::Parse(format!("family spec needs {k:?}")))
        };
        let tail = obj
            .get("tail_tol")
            .map(float_value)
            .transpose()?
            .unwrap_or(1e-12);
        let uint = |k: &str| -> Result<u32> {
            get(k)?
                .as_u64()
                .and_then(|n| u32::try_from(n).ok())
                .ok_or_else(|| Error::Parse(format!("{k:?} must be a non-negative integer")))
        };
        let family = get("family")?
            .as_str()
            .ok_or_else(|| Error::Parse("\"family\" must be a string".into()))?;
        match family {
            "geometric" => Ok(FamilySpec::Geometric {
                theta: float_value(get("theta")?)?,
                tail_tol: tail,
            }),
            "two_sided_geometric" => {
                let (p1, p2) = (scalar_of(get("p1")?)?, scalar_of(get("p2")?)?);
                let (n, k) = (uint("N")?, uint("K")?);
                match (p1, p2) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => {
                        Ok(FamilySpec::TwoSidedExact(ExtremalParams::new(a, b, n, k)?))
                    }
                    (a, b) => Ok(FamilySpec::TwoSidedFloat(ExtremalParams::new(
                        a.to_f64(),
                        b.to_f64(),
                        n,
                        k,
                    )?)),
                }
            }
            "bernoulli" | "binomial" => {
                let n = if family == "bernoulli" { 1 } else { uint("n")? };
                match scalar_of(get("p")?)? {
                    Scalar::Exact(p) => Ok(FamilySpec::BinomialExact { n, p }),
                    Scalar::Float(p) => Ok(FamilySpec::Corpus(CorpusKind::Binomial { n, p })),
                }
            }
            "poisson" | "poisson_trunc" => Ok(FamilySpec::Corpus(CorpusKind::PoissonTrunc {
                lambda: float_value(get("lambda")?)?,
                tail_tol: tail,
            })),
            "negbin" | "negbin_trunc" => Ok(FamilySpec::Corpus(CorpusKind::NegBinTrunc {
                r: float_value(get("r")?)?,
                q: float_value(get("q")?)?,
                tail_tol: tail,
            })),
            other => Err(Error::Parse(format!("unknown family {other:?}"))),
        }
    }

    pub fn build(&self) -> Result<AnyPmf> {
        Ok(match self {
            FamilySpec::Geometric { theta, tail_tol } => {
                AnyPmf::Float(geometric_truncated(*theta, *tail_tol)?)
            }
            FamilySpec::TwoSidedExact(p) => AnyPmf::Exact(two_sided_geometric(p)),
            FamilySpec::TwoSidedFloat(p) => AnyPmf::Float(two_sided_geometric(p)),
            FamilySpec::Corpus(kind) => AnyPmf::Float(corpus_member(*kind)?),
            FamilySpec::BinomialExact { n, p } => {
                AnyPmf::Exact(crate::families::binomial(*n, p.clone())?)
            }
        })
    }
}

/// JSON strings and integers are exact; JSON decimals are floats.
fn scalar_of(v: &Value) -> Result<Scalar> {
    match v {
        Value::String(s) => parse_scalar(s),
        Value::Number(n) if n.is_i64() || n.is_u64() => {
            parse_rational(&n.to_string()).map(Scalar::Exact)
        }
        Value::Number(n) => Ok(Scalar::Float(n.as_f64().unwrap_or(f64::NAN))),
        other => Err(Error::Parse(format!("expected a number, got {other}"))),
    }
}

impl AnyPotential {
    pub fn values(&self) -> Vec<Scalar> {
        match self {
            AnyPotential::Exact(p) => p.values().iter().map(Weight::to_scalar).collect(),
            AnyPotential::Float(p) => p.values().iter().map(Weight::to_scalar).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn pmf_exact_and_float() {
        let p = pmf_from_json(r#"{"offset": 2, "weights": ["1/4", 0.5, "0.25"], "exact": true}"#)
            .unwrap();
        let AnyPmf::Exact(p) = p else { panic!() };
        assert_eq!(p.offset(), 2);
        assert_eq!(p.weights(), &[q(1, 4), q(1, 2), q(1, 4)]);
        let f = pmf_from_json(r#"{"offset": 0, "weights": [1, 1]}"#).unwrap();
        assert_eq!(f, AnyPmf::Float(Pmf::new(0, vec![0.5, 0.5]).unwrap()));
        assert!(pmf_from_json(r#"{"weights": [0, 0]}"#).is_err());
        assert!(pmf_from_json(r#"{"weights": "nope"}"#).is_err());
    }

    #[test]
    fn pmf_json_round_trip() {
        let p = AnyPmf::Exact(Pmf::new(-1, vec![q(1, 3), q(2, 3)]).unwrap());
        let text = pmf_to_json(&p).to_string();
        assert_eq!(pmf_from_json(&text).unwrap(), p);
    }

    #[test]
    fn potential_parsing() {
        let p = potential_from_json(r#"{"a": 0, "values": [3, 2, "4/3", 2]}"#).unwrap();
        assert_eq!(p.values()[2], Scalar::Exact(q(4, 3)));
        let p = potential_from_json(r#"{"a": 0, "values": [0.1]}"#).unwrap();
        assert_eq!(p.values()[0], Scalar::Exact(q(1, 10)));
        let p = potential_from_json(r#"{"a": 0, "values": [0.1], "exact": false}"#).unwrap();
        assert_eq!(p.values()[0], Scalar::Float(0.1));
    }

    #[test]
    fn family_specs() {
        let f = FamilySpec::from_json(
            r#"{"family":"two_sided_geometric","p1":"5/3","p2":"500","N":9,"K":1}"#,
        )
        .unwrap();
        let FamilySpec::TwoSidedExact(p) = &f else {
            panic!("{f:?}")
        };
        assert_eq!(p.p1(), &q(5, 3));
        assert_eq!(f.build().unwrap().mode(), Mode::Exact);
        let g = FamilySpec::from_json(r#"{"family":"geometric","theta":0.5}"#).unwrap();
        assert_eq!(g.build().unwrap().to_float().len(), 40);
        let b = FamilySpec::from_json(r#"{"family":"binomial","n":4,"p":"1/2"}"#).unwrap();
        assert_eq!(b.build().unwrap().mode(), Mode::Exact);
        assert!(FamilySpec::from_json(r#"{"family":"cauchy"}"#).is_err());
        assert!(FamilySpec::from_json(
            r#"{"family":"two_sided_geometric","p1":"1/2","p2":"2","N":1,"K":1}"#
        )
        .is_err());
    }
}
