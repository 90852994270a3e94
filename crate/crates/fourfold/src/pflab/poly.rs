//! Homogeneous polynomials over an exact field, in a fixed number of
//! variables, stored as monomial -> coefficient maps.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalar::{Field, Scalar};

use super::PflabError;

/// Exponent vector; the degree is its sum.
pub type Monomial = Vec<u8>;

/// Homogeneous polynomial of fixed degree. Zero coefficients are never stored;
/// the zero polynomial has an empty map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogPoly<F> {
    pub nvars: usize,
    pub degree: u32,
    pub coeffs: BTreeMap<Monomial, F>,
}

impl<F: Scalar> HomogPoly<F> {
    pub fn zero(nvars: usize, degree: u32) -> Self {
        HomogPoly { nvars, degree, coeffs: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn monomial(nvars: usize, expts: &[u8], coeff: F) -> Self {
        let degree = expts.iter().map(|&e| e as u32).sum();
        let mut p = HomogPoly::zero(nvars, degree);
        p.add_term(expts.to_vec(), coeff);
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: F) {
        debug_assert_eq!(m.len(), self.nvars);
        debug_assert_eq!(m.iter().map(|&e| e as u32).sum::<u32>(), self.degree);
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.nvars, self.degree), (other.nvars, other.degree));
        let mut out = self.clone();
        for (m, c) in &other.coeffs {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, k: &F) -> Self {
        if k.is_zero() {
            return HomogPoly::zero(self.nvars, self.degree);
        }
        HomogPoly {
            nvars: self.nvars,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(m, c)| (m.clone(), c.clone() * k.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = HomogPoly::zero(self.nvars, self.degree + other.degree);
        for (m1, c1) in &self.coeffs {
            for (m2, c2) in &other.coeffs {
                let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.add_term(m, c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn eval(&self, point: &[F]) -> F {
        assert_eq!(point.len(), self.nvars);
        let mut acc = F::zero();
        for (m, c) in &self.coeffs {
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(m) {
                for _ in 0..e {
                    term = term * x.clone();
                }
            }
            acc = acc + term;
        }
        acc
    }

    /// Formal partial derivative with respect to variable `var`; drops a
    /// degree. Exponent multiples are taken in the coefficient field, so
    /// characteristic-p cancellation is handled exactly.
    pub fn partial(&self, var: usize) -> HomogPoly<F> {
        assert!(var < self.nvars);
        assert!(self.degree >= 1);
        let mut out = HomogPoly::zero(self.nvars, self.degree - 1);
        for (m, c) in &self.coeffs {
            let e = m[var];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm[var] -= 1;
            let mut mult = F::zero();
            for _ in 0..e {
                mult = mult + F::one();
            }
            out.add_term(dm, c.clone() * mult);
        }
        out
    }

    /// Insert a fresh first variable with exponent 0 in every monomial.
    pub fn prepend_variable(&self) -> HomogPoly<F> {
        HomogPoly {
            nvars: self.nvars + 1,
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .map(|(m, c)| {
                    let mut m2 = Vec::with_capacity(m.len() + 1);
                    m2.push(0u8);
                    m2.extend_from_slice(m);
                    (m2, c.clone())
                })
                .collect(),
        }
    }
}

impl<F: Scalar + fmt::Display> fmt::Display for HomogPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|(m, c)| {
                let vars: String = m
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        if e == 1 {
                            format!("z{i}")
                        } else {
                            format!("z{i}^{e}")
                        }
                    })
                    .collect::<Vec<_>>()
                    .join("*");
                if vars.is_empty() {
                    format!("{c}")
                } else {
                    format!("{c}*{vars}")
                }
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Homogeneous cubic in six variables; the ambient-degree-3 hypersurface
/// equations live here. Constructors reject the zero polynomial and wrong
/// degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicForm<F>(HomogPoly<F>);

impl<F: Field> CubicForm<F> {
    pub fn new(poly: HomogPoly<F>) -> Result<Self, PflabError> {
        if poly.nvars != 6 {
            return Err(PflabError::WrongVariableCount { got: poly.nvars, want: 6 });
        }
        if poly.degree != 3 {
            return Err(PflabError::WrongDegree { got: poly.degree, want: 3 });
        }
        if poly.is_zero() {
            return Err(PflabError::ZeroForm);
        }
        Ok(CubicForm(poly))
    }

    pub fn poly(&self) -> &HomogPoly<F> {
        &self.0
    }

    pub fn into_poly(self) -> HomogPoly<F> {
        self.0
    }

    pub fn eval(&self, point: &[F]) -> F {
        self.0.eval(point)
    }

    pub fn partials(&self) -> Vec<HomogPoly<F>> {
        (0..6).map(|v| self.0.partial(v)).collect()
    }
}

/// JSON form of a polynomial: exponent-string keys ("300000") mapped to
/// coefficient strings, plus arity and degree.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyJson {
    pub nvars: usize,
    pub degree: u32,
    pub coeffs: BTreeMap<String, String>,
}

pub trait CoeffCodec: Sized {
    fn encode(&self) -> String;
    fn decode(s: &str) -> Result<Self, PflabError>;
}

impl CoeffCodec for crate::scalar::Rat {
    fn encode(&self) -> String {
        self.to_string()
    }
    fn decode(s: &str) -> Result<Self, PflabError> {
        s.parse().map_err(|_| PflabError::BadCoefficient(s.to_string()))
    }
}

impl<const Q: u64> CoeffCodec for crate::scalar::Fp<Q> {
    fn encode(&self) -> String {
        self.value().to_string()
    }
    fn decode(s: &str) -> Result<Self, PflabError> {
        s.parse::<u64>()
            .map(Self::new)
            .map_err(|_| PflabError::BadCoefficient(s.to_string()))
    }
}

impl<const Q: u64> CoeffCodec for crate::scalar::Fp2<Q> {
    /// `c0` for base-field elements, `c0+c1x` otherwise.
    fn encode(&self) -> String {
        if self.c1().value() == 0 {
            self.c0().value().to_string()
        } else {
            format!("{}+{}x", self.c0().value(), self.c1().value())
        }
    }
    fn decode(s: &str) -> Result<Self, PflabError> {
        let bad = || PflabError::BadCoefficient(s.to_string());
        match s.split_once('+') {
            None => {
                let c0 = s.parse::<u64>().map_err(|_| bad())?;
                Ok(Self::from_base(crate::scalar::Fp::new(c0)))
            }
            Some((a, b)) => {
                let c0 = a.parse::<u64>().map_err(|_| bad())?;
                let c1 = b.strip_suffix('x').ok_or_else(bad)?.parse::<u64>().map_err(|_| bad())?;
                Ok(Self::new(crate::scalar::Fp::new(c0), crate::scalar::Fp::new(c1)))
            }
        }
    }
}

impl<F: Scalar + CoeffCodec> HomogPoly<F> {
    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            nvars: self.nvars,
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .map(|(m, c)| (m.iter().map(|e| e.to_string()).collect::<String>(), c.encode()))
                .collect(),
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<Self, PflabError> {
        let mut p = HomogPoly::zero(j.nvars, j.degree);
        for (key, cs) in &j.coeffs {
            let m: Monomial = key
                .chars()
                .map(|ch| {
                    ch.to_digit(10)
                        .map(|d| d as u8)
                        .ok_or_else(|| PflabError::BadCoefficient(key.clone()))
                })
                .collect::<Result<_, _>>()?;
            if m.len() != j.nvars || m.iter().map(|&e| e as u32).sum::<u32>() != j.degree {
                return Err(PflabError::BadCoefficient(key.clone()));
            }
            p.add_term(m, F::decode(cs)?);
        }
        Ok(p)
    }
}
