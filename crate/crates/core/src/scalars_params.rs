//! Exact rational scalars, parameter records and the two quivers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

pub fn sc(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn checked_div(a: &Scalar, b: &Scalar) -> Result<Scalar> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(a / b)
}

pub fn checked_inv(a: &Scalar) -> Result<Scalar> {
    checked_div(&Scalar::one(), a)
}

/// Parses `"7"`, `"-3"` or `"p/q"`.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let s = s.trim();
    let bad = || Error::InvalidParam(format!("cannot parse scalar {s:?}"));
    match s.split_once('/') {
        None => s.parse::<BigInt>().map(BigRational::from_integer).map_err(|_| bad()),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
    }
}

pub fn parse_scalar_list(s: &str) -> Result<Vec<Scalar>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_scalar).collect()
}

/// Serialized form: always `p/q` in lowest terms.
pub fn scalar_to_string(x: &Scalar) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Human form: integers without denominator.
pub fn show(x: &Scalar) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn show_seq(v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(show).collect();
    format!("({})", parts.join(","))
}

pub mod scalar_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Scalar, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&scalar_to_string(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Scalar, D::Error> {
        let raw = serde_json::Value::deserialize(d)?;
        value_to_scalar(&raw).map_err(serde::de::Error::custom)
    }

    pub(crate) fn value_to_scalar(v: &serde_json::Value) -> std::result::Result<Scalar, String> {
        match v {
            serde_json::Value::String(s) => parse_scalar(s).map_err(|e| e.to_string()),
            serde_json::Value::Number(n) => n
                .as_i64()
                .map(sc)
                .ok_or_else(|| format!("non-integer number {n} must be given as a string")),
            other => Err(format!("expected scalar, got {other}")),
        }
    }
}

pub mod scalar_vec_serde {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Scalar], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&scalar_to_string(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Scalar>, D::Error> {
        let raw = Vec::<serde_json::Value>::deserialize(d)?;
        raw.iter()
            .map(|v| scalar_serde::value_to_scalar(v).map_err(serde::de::Error::custom))
            .collect()
    }
}

pub mod opt_scalar_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<Scalar>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match x {
            Some(x) => s.serialize_some(&scalar_to_string(x)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Scalar>, D::Error> {
        let raw = Option::<serde_json::Value>::deserialize(d)?;
        match raw {
            None | Some(serde_json::Value::Null) => Ok(None),
            Some(v) => scalar_serde::value_to_scalar(&v).map(Some).map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Degenerate,
    #[serde(alias = "q-deformed")]
    Q,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::Degenerate => write!(f, "degenerate"),
            Variant::Q => write!(f, "q"),
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "degenerate" | "deg" => Ok(Variant::Degenerate),
            "q" | "q-deformed" => Ok(Variant::Q),
            _ => Err(Error::InvalidParam(format!("unknown variant {s:?}"))),
        }
    }
}

/// Simply laced quiver on a finite vertex set; `h(i,j)` is 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    pub vertices: Vec<Scalar>,
    pub edges: BTreeSet<(Scalar, Scalar)>,
}

impl Quiver {
    pub fn h(&self, i: &Scalar, j: &Scalar) -> u32 {
        u32::from(self.edges.contains(&(i.clone(), j.clone())))
    }

    pub fn max_h(&self) -> u32 {
        u32::from(!self.edges.is_empty())
    }
}

fn sorted_set(v: &[Scalar]) -> Vec<Scalar> {
    let s: BTreeSet<Scalar> = v.iter().cloned().collect();
    s.into_iter().collect()
}

/// Edge i→j exactly when j + 1 = i.
pub fn build_quiver_degenerate(vertices: &[Scalar]) -> Quiver {
    let vertices = sorted_set(vertices);
    let mut edges = BTreeSet::new();
    for i in &vertices {
        for j in &vertices {
            if j + Scalar::one() == *i {
                edges.insert((i.clone(), j.clone()));
            }
        }
    }
    Quiver { vertices, edges }
}

/// Edge i→j exactly when i = q·j.
pub fn build_quiver_q(vertices: &[Scalar], q: &Scalar) -> Quiver {
    let vertices = sorted_set(vertices);
    let mut edges = BTreeSet::new();
    for i in &vertices {
        for j in &vertices {
            if *i == q * j && i != j {
                edges.insert((i.clone(), j.clone()));
            }
        }
    }
    Quiver { vertices, edges }
}

pub type Multiplicities = BTreeMap<Scalar, usize>;

/// Returns (ν, Λ): multiplicities of `a` and of `big_q` over `vertices`.
pub fn derive_multiplicities(a: &[Scalar], big_q: &[Scalar], vertices: &[Scalar]) -> (Multiplicities, Multiplicities) {
    let mut nu: Multiplicities = vertices.iter().map(|v| (v.clone(), 0)).collect();
    let mut lam = nu.clone();
    for x in a {
        *nu.entry(x.clone()).or_insert(0) += 1;
    }
    for x in big_q {
        *lam.entry(x.clone()).or_insert(0) += 1;
    }
    (nu, lam)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamSet {
    pub variant: Variant,
    pub d: usize,
    #[serde(with = "opt_scalar_serde", default)]
    pub q: Option<Scalar>,
    #[serde(rename = "Q", with = "scalar_vec_serde")]
    pub big_q: Vec<Scalar>,
    #[serde(with = "scalar_vec_serde")]
    pub a: Vec<Scalar>,
    #[serde(rename = "I", with = "scalar_vec_serde")]
    pub vertices: Vec<Scalar>,
}

impl ParamSet {
    pub fn new(variant: Variant, q: Option<Scalar>, big_q: Vec<Scalar>, a: Vec<Scalar>, vertices: Vec<Scalar>) -> Result<Self> {
        let p = ParamSet {
            variant,
            d: a.len(),
            q,
            big_q,
            a,
            vertices: sorted_set(&vertices),
        };
        p.validate()?;
        Ok(p)
    }

    /// Convenience constructor from integers.
    pub fn ints(variant: Variant, q: Option<i64>, big_q: &[i64], a: &[i64], vertices: &[i64]) -> Result<Self> {
        let v = |x: &[i64]| x.iter().map(|&n| sc(n)).collect::<Vec<_>>();
        Self::new(variant, q.map(sc), v(big_q), v(a), v(vertices))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let mut p: ParamSet = serde_json::from_str(text).map_err(|e| Error::InvalidParam(e.to_string()))?;
        p.vertices = sorted_set(&p.vertices);
        p.validate()?;
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("ParamSet serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::InvalidParam("d must be at least 1".into()));
        }
        if self.a.len() != self.d {
            return Err(Error::InvalidParam(format!("a has length {} but d = {}", self.a.len(), self.d)));
        }
        if self.big_q.is_empty() {
            return Err(Error::InvalidParam("Q must be nonempty".into()));
        }
        if self.d > 12 {
            return Err(Error::InvalidParam("d above 12 is not supported".into()));
        }
        for x in self.a.iter().chain(self.big_q.iter()) {
            if !self.vertices.contains(x) {
                return Err(Error::InvalidParam(format!("{} is not in I", show(x))));
            }
        }
        if self.variant == Variant::Q {
            let q = self.q.as_ref().ok_or_else(|| Error::InvalidParam("q-variant requires q".into()))?;
            if q.is_zero() || q.is_one() {
                return Err(Error::InvalidParam("q must differ from 0 and 1".into()));
            }
            if self.vertices.iter().any(|v| v.is_zero()) {
                return Err(Error::InvalidParam("0 may not be a label in the q-variant".into()));
            }
        }
        Ok(())
    }

    pub fn ell(&self) -> usize {
        self.big_q.len()
    }

    pub fn nu(&self) -> Multiplicities {
        derive_multiplicities(&self.a, &self.big_q, &self.vertices).0
    }

    pub fn lambda(&self) -> Multiplicities {
        derive_multiplicities(&self.a, &self.big_q, &self.vertices).1
    }

    pub fn lambda_of(&self, i: &Scalar) -> usize {
        self.big_q.iter().filter(|x| *x == i).count()
    }

    pub fn q_value(&self) -> Scalar {
        self.q.clone().unwrap_or_else(Scalar::one)
    }

    pub fn quiver(&self) -> Quiver {
        match self.variant {
            Variant::Degenerate => build_quiver_degenerate(&self.vertices),
            Variant::Q => build_quiver_q(&self.vertices, &self.q_value()),
        }
    }

    pub fn describe(&self) -> String {
        let q = match (&self.variant, &self.q) {
            (Variant::Q, Some(q)) => format!(" q={}", show(q)),
            _ => String::new(),
        };
        format!("{}{} a={} Q={} I={}", self.variant, q, show_seq(&self.a), show_seq(&self.big_q), show_seq(&self.vertices))
    }
}

pub fn is_negative(x: &Scalar) -> bool {
    x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> Vec<Scalar> {
        x.iter().map(|&n| sc(n)).collect()
    }

    #[test]
    fn quiver_rules() {
        let q = build_quiver_degenerate(&v(&[0, 1, 2]));
        assert_eq!(q.edges.len(), 2);
        assert_eq!(q.h(&sc(1), &sc(0)), 1);
        assert_eq!(q.h(&sc(2), &sc(1)), 1);
        assert_eq!(q.h(&sc(0), &sc(1)), 0);
        assert!(build_quiver_degenerate(&v(&[0])).edges.is_empty());
        assert!(build_quiver_degenerate(&v(&[0, 5])).edges.is_empty());
        let q2 = build_quiver_q(&v(&[1, 2, 4]), &sc(2));
        assert_eq!(q2.edges.len(), 2);
        assert_eq!(q2.h(&sc(2), &sc(1)), 1);
        assert_eq!(q2.h(&sc(4), &sc(2)), 1);
        assert!(build_quiver_q(&v(&[1]), &sc(2)).edges.is_empty());
        let q3 = build_quiver_q(&v(&[1, 3]), &sc(3));
        assert_eq!(q3.edges.iter().cloned().collect::<Vec<_>>(), vec![(sc(3), sc(1))]);
    }

    #[test]
    fn multiplicities() {
        let (nu, lam) = derive_multiplicities(&v(&[0, 0, 1]), &v(&[0]), &v(&[0, 1]));
        assert_eq!(nu[&sc(0)], 2);
        assert_eq!(nu[&sc(1)], 1);
        assert_eq!(lam[&sc(0)], 1);
        assert_eq!(lam[&sc(1)], 0);
        let (nu, lam) = derive_multiplicities(&v(&[1, 2, 1, 2]), &v(&[2, 2]), &v(&[1, 2]));
        assert_eq!((nu[&sc(1)], nu[&sc(2)]), (2, 2));
        assert_eq!((lam[&sc(1)], lam[&sc(2)]), (0, 2));
    }

    #[test]
    fn validation() {
        assert!(ParamSet::ints(Variant::Degenerate, None, &[0], &[0, 1], &[0, 1]).is_ok());
        assert!(matches!(ParamSet::ints(Variant::Q, Some(1), &[1], &[1, 2], &[1, 2]), Err(Error::InvalidParam(_))));
        assert!(matches!(ParamSet::ints(Variant::Degenerate, None, &[0], &[0, 7], &[0, 1]), Err(Error::InvalidParam(_))));
        assert!(ParamSet::ints(Variant::Q, Some(2), &[1], &[0, 1], &[0, 1]).is_err());
        assert!(ParamSet::ints(Variant::Q, None, &[1], &[1], &[1]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = ParamSet::new(Variant::Q, Some(frac(3, 2)), v(&[1]), v(&[1, 2]), v(&[2, 1])).unwrap();
        let s = p.to_json();
        assert!(s.contains("\"3/2\""));
        assert!(s.contains("\"I\":[\"1/1\",\"2/1\"]"));
        assert_eq!(ParamSet::from_json(&s).unwrap(), p);
        let loose = r#"{"variant":"degenerate","d":2,"Q":[0],"a":[0,"1"],"I":[0,1]}"#;
        assert_eq!(ParamSet::from_json(loose).unwrap().d, 2);
    }

    #[test]
    fn scalar_parsing() {
        assert_eq!(parse_scalar("-6/4").unwrap(), frac(-3, 2));
        assert_eq!(scalar_to_string(&frac(6, 4)), "3/2");
        assert!(parse_scalar("1/0").is_err());
        assert!(checked_div(&sc(1), &sc(0)).is_err());
    }
}
