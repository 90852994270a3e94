//! Exact linear arithmetic in Picard lattices of blown-up cubic fourfolds.
//!
//! A [`PicModel`] is a free abelian group with a named basis, a table of
//! derived class labels (integer combinations of the basis), and a canonical
//! class. Divisor classes are integer coordinate vectors over the basis;
//! coefficients are arbitrary-precision so no expression ever overflows.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PicError {
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("model mismatch: `{0}` vs `{1}`")]
    ModelMismatch(String, String),
    #[error("parse error in `{input}`: {message}")]
    Parse { input: String, message: String },
    #[error("coordinate length {got} does not match basis rank {rank}")]
    RankMismatch { got: usize, rank: usize },
}

/// Free Picard-group model: named basis, derived labels, canonical class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PicModel {
    pub name: String,
    pub basis: Vec<String>,
    #[serde(with = "coeff_map_serde")]
    pub derived: BTreeMap<String, Vec<BigInt>>,
    #[serde(with = "coeff_vec_serde")]
    pub canonical: Vec<BigInt>,
}

/// Integer divisor class over a model basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DivisorClass {
    pub model: String,
    #[serde(with = "coeff_vec_serde")]
    pub coords: Vec<BigInt>,
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl DivisorClass {
    pub fn zero(model: &PicModel) -> Self {
        DivisorClass {
            model: model.name.clone(),
            coords: vec![BigInt::zero(); model.basis.len()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PicError> {
        if self.model != other.model {
            return Err(PicError::ModelMismatch(self.model.clone(), other.model.clone()));
        }
        Ok(DivisorClass {
            model: self.model.clone(),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PicError> {
        if self.model != other.model {
            return Err(PicError::ModelMismatch(self.model.clone(), other.model.clone()));
        }
        Ok(DivisorClass {
            model: self.model.clone(),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        DivisorClass {
            model: self.model.clone(),
            coords: self.coords.iter().map(|c| c * k).collect(),
        }
    }

    /// Coordinates as i64, for the cohomology layer. Fails only on inputs far
    /// outside any geometric range.
    pub fn coords_i64(&self) -> Option<Vec<i64>> {
        self.coords.iter().map(|c| i64::try_from(c).ok()).collect()
    }
}

/// Formal integer combination of labels, e.g. `-3H + D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinExpr {
    pub terms: Vec<(BigInt, String)>,
}

impl LinExpr {
    /// Parse `[-]c*L +- c*L ...` where `*` is optional and a bare label has
    /// coefficient 1. Labels are identifiers, primes allowed (`H'`).
    pub fn parse(input: &str) -> Result<Self, PicError> {
        let err = |message: &str| PicError::Parse {
            input: input.to_string(),
            message: message.to_string(),
        };
        let mut terms = Vec::new();
        let chars: Vec<char> = input.chars().filter(|c| !c.is_whitespace()).collect();
        let mut i = 0;
        if chars.is_empty() {
            return Err(err("empty expression"));
        }
        while i < chars.len() {
            let mut sign = BigInt::from(1);
            while i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                if chars[i] == '-' {
                    sign = -sign;
                }
                i += 1;
            }
            if i >= chars.len() {
                return Err(err("trailing sign"));
            }
            let mut digits = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                digits.push(chars[i]);
                i += 1;
            }
            if i < chars.len() && chars[i] == '*' {
                i += 1;
            }
            let mut label = String::new();
            while i < chars.len()
                && (chars[i].is_ascii_alphanumeric() || chars[i] == '\'' || chars[i] == '_')
            {
                label.push(chars[i]);
                i += 1;
            }
            let coeff = if digits.is_empty() {
                sign
            } else {
                sign * digits.parse::<BigInt>().unwrap()
            };
            if label.is_empty() {
                if digits.is_empty() {
                    return Err(err("expected coefficient or label"));
                }
                if !coeff.is_zero() {
                    return Err(err("bare nonzero constant is not a divisor class"));
                }
                // a bare 0 contributes nothing
            } else {
                terms.push((coeff, label));
            }
        }
        Ok(LinExpr { terms })
    }
}

impl PicModel {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    fn label_coords(&self, label: &str) -> Result<Vec<BigInt>, PicError> {
        if let Some(pos) = self.basis.iter().position(|b| b == label) {
            let mut v = vec![BigInt::zero(); self.rank()];
            v[pos] = BigInt::from(1);
            return Ok(v);
        }
        if let Some(coords) = self.derived.get(label) {
            return Ok(coords.clone());
        }
        if label == "K" {
            return Ok(self.canonical.clone());
        }
        Err(PicError::UnknownLabel(label.to_string()))
    }

    /// Substitute derived definitions and collect coordinates over the basis.
    pub fn express(&self, expr: &LinExpr) -> Result<DivisorClass, PicError> {
        let mut coords = vec![BigInt::zero(); self.rank()];
        for (coeff, label) in &expr.terms {
            let lc = self.label_coords(label)?;
            for (acc, c) in coords.iter_mut().zip(lc) {
                *acc += coeff * c;
            }
        }
        Ok(DivisorClass { model: self.name.clone(), coords })
    }

    pub fn express_str(&self, expr: &str) -> Result<DivisorClass, PicError> {
        self.express(&LinExpr::parse(expr)?)
    }

    /// True iff both sides normalize to the same coordinates.
    pub fn verify_relation(&self, lhs: &str, rhs: &str) -> Result<bool, PicError> {
        Ok(self.express_str(lhs)? == self.express_str(rhs)?)
    }

    pub fn class(&self, coords: &[i64]) -> Result<DivisorClass, PicError> {
        if coords.len() != self.rank() {
            return Err(PicError::RankMismatch { got: coords.len(), rank: self.rank() });
        }
        Ok(DivisorClass {
            model: self.name.clone(),
            coords: coords.iter().map(|&c| BigInt::from(c)).collect(),
        })
    }

    pub fn canonical_class(&self) -> DivisorClass {
        DivisorClass { model: self.name.clone(), coords: self.canonical.clone() }
    }

    /// Render a class back through basis labels, for traces.
    pub fn render(&self, class: &DivisorClass) -> String {
        if class.is_zero() {
            return "O".to_string();
        }
        let mut out = String::new();
        for (c, label) in class.coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            if !out.is_empty() && c.is_positive() {
                out.push('+');
            }
            if *c == BigInt::from(-1) {
                out.push('-');
            } else if *c != BigInt::from(1) {
                out.push_str(&c.to_string());
            }
            out.push_str(label);
        }
        format!("O({out})")
    }
}

/// Names of the shipped models.
pub const PLANE_CASE: &str = "plane-case";
pub const SINGULAR_CASE: &str = "singular-case";

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

/// Blowup of a cubic fourfold along a contained plane, fibered in quadric
/// surfaces over P^2. Basis (H, h): hyperplane pullback and fiber-base
/// hyperplane. D = H - h is the exceptional divisor, K = -2H - h.
pub fn plane_case_model() -> PicModel {
    PicModel {
        name: PLANE_CASE.to_string(),
        basis: vec!["H".into(), "h".into()],
        derived: BTreeMap::from([("D".to_string(), vec![big(1), big(-1)])]),
        canonical: vec![big(-2), big(-1)],
    }
}

/// Blowup of a one-node cubic fourfold at the node, identified with the
/// blowup of P^4 along a (2,3) complete-intersection surface. Basis (h, D):
/// P^4 hyperplane pullback and exceptional divisor over the surface.
/// H = 3h - D, Q = 2h - D (the quadric contracted to the node), K = -5h + D.
pub fn singular_case_model() -> PicModel {
    PicModel {
        name: SINGULAR_CASE.to_string(),
        basis: vec!["h".into(), "D".into()],
        derived: BTreeMap::from([
            ("H".to_string(), vec![big(3), big(-1)]),
            ("Q".to_string(), vec![big(2), big(-1)]),
        ]),
        canonical: vec![big(-5), big(1)],
    }
}

pub fn projective_space_model(n: u32) -> PicModel {
    PicModel {
        name: format!("P{n}"),
        basis: vec!["H".into()],
        derived: BTreeMap::new(),
        canonical: vec![big(-(n as i64) - 1)],
    }
}

/// Immutable catalog: the two blowup models plus P^1..P^5.
pub fn builtin_models() -> Vec<PicModel> {
    let mut models = vec![plane_case_model(), singular_case_model()];
    for n in 1..=5 {
        models.push(projective_space_model(n));
    }
    models
}

pub fn builtin_model(name: &str) -> Option<PicModel> {
    builtin_models().into_iter().find(|m| m.name == name)
}

/// Serialize BigInt coefficients as JSON numbers when they fit in i64,
/// falling back to decimal strings beyond that.
mod coeff_serde {
    use num_bigint::BigInt;
    use serde::{Deserialize, Serialize};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    pub enum Repr {
        Small(i64),
        Big(String),
    }

    pub fn to_repr(v: &BigInt) -> Repr {
        match i64::try_from(v) {
            Ok(s) => Repr::Small(s),
            Err(_) => Repr::Big(v.to_string()),
        }
    }

    pub fn from_repr<E: serde::de::Error>(r: Repr) -> Result<BigInt, E> {
        match r {
            Repr::Small(s) => Ok(BigInt::from(s)),
            Repr::Big(s) => s.parse::<BigInt>().map_err(E::custom),
        }
    }
}

mod coeff_vec_serde {
    use super::coeff_serde::{from_repr, to_repr, Repr};
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(to_repr).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Repr>::deserialize(d)?.into_iter().map(from_repr).collect()
    }
}

mod coeff_map_serde {
    use super::coeff_serde::{from_repr, to_repr, Repr};
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(
        v: &BTreeMap<String, Vec<BigInt>>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|(k, vs)| (k.clone(), vs.iter().map(to_repr).collect::<Vec<_>>()))
            .collect::<BTreeMap<_, _>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<String, Vec<BigInt>>, D::Error> {
        let raw = BTreeMap::<String, Vec<Repr>>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, vs)| Ok((k, vs.into_iter().map(from_repr).collect::<Result<_, _>>()?)))
            .collect()
    }
}
