//! Exact constructions around the Pfaffian cubic: skew forms, their
//! Pfaffians, Pfaffian cubic hypersurfaces, singular loci and Grassmannian
//! zero loci over the rationals and small finite fields.

pub mod enumerate;
pub mod gen;
pub mod linalg;
pub mod pfaffian;
pub mod poly;

pub use enumerate::{
    gaussian_binomial, grassmannian_2_6, projective_points, projective_space_count, s_points,
    singular_cubic_model, singular_points, xv_points_direct, xv_points_incidence, Plane2,
    SurfaceSlice, DEFAULT_ENUM_BOUND,
};
pub use pfaffian::{det_oracle, pfaffian, pfaffian_cubic, pfaffian_partial, symbolic_pfaffian_15, upper_triangle_coords};
pub use poly::{CubicForm, HomogPoly, PolyJson};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{Field, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PflabError {
    #[error("matrix is not skew-symmetric")]
    NotSkew,
    #[error("expected {want} variables, got {got}")]
    WrongVariableCount { got: usize, want: usize },
    #[error("expected degree {want}, got {got}")]
    WrongDegree { got: u32, want: u32 },
    #[error("form is identically zero")]
    ZeroForm,
    #[error("skew forms are linearly dependent (rank {rank} < 6)")]
    DependentBasis { rank: usize },
    #[error("the span lies in the degenerate locus: the Pfaffian vanishes identically")]
    DegenerateSpan,
    #[error("enumeration of {points} candidates exceeds the bound {bound}")]
    EnumerationBound { points: u64, bound: u64 },
    #[error("unparsable coefficient `{0}`")]
    BadCoefficient(String),
    #[error("unsupported field: q={q}, ext={ext}")]
    UnsupportedField { q: u64, ext: u32 },
}

/// 6x6 skew-symmetric matrix over an exact field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewForm<F> {
    pub entries: Vec<Vec<F>>,
}

impl<F: Scalar> SkewForm<F> {
    /// Validate skewness: zero diagonal and M + M^T = 0 (both conditions
    /// checked so characteristic 2 behaves).
    pub fn new(entries: Vec<Vec<F>>) -> Result<Self, PflabError> {
        if entries.len() != 6 || entries.iter().any(|r| r.len() != 6) {
            return Err(PflabError::NotSkew);
        }
        for i in 0..6 {
            if !entries[i][i].is_zero() {
                return Err(PflabError::NotSkew);
            }
            for j in 0..6 {
                if entries[i][j].clone() + entries[j][i].clone() != F::zero() {
                    return Err(PflabError::NotSkew);
                }
            }
        }
        Ok(SkewForm { entries })
    }

    pub fn size(&self) -> usize {
        6
    }

    pub fn zero() -> Self {
        SkewForm { entries: vec![vec![F::zero(); 6]; 6] }
    }

    /// Build from the 15 upper-triangle entries in row order.
    pub fn from_upper_elems(upper: &[F]) -> Self {
        assert_eq!(upper.len(), 15);
        let mut entries = vec![vec![F::zero(); 6]; 6];
        let mut k = 0;
        for i in 0..6 {
            for j in i + 1..6 {
                entries[i][j] = upper[k].clone();
                entries[j][i] = -upper[k].clone();
                k += 1;
            }
        }
        SkewForm { entries }
    }

    /// Congruence transform A^T M A.
    pub fn congruence(&self, a: &linalg::Matrix<F>) -> SkewForm<F> {
        let n = 6;
        let mut out = vec![vec![F::zero(); n]; n];
        #[allow(clippy::needless_range_loop)]
        for i in 0..n {
            for j in 0..n {
                let mut acc = F::zero();
                for k in 0..n {
                    if a[k][i].is_zero() {
                        continue;
                    }
                    for l in 0..n {
                        acc = acc
                            + a[k][i].clone() * self.entries[k][l].clone() * a[l][j].clone();
                    }
                }
                out[i][j] = acc;
            }
        }
        SkewForm { entries: out }
    }
}

impl<F: Field> SkewForm<F> {
    /// Block-diagonal symplectic normal form: Pf = 1.
    pub fn standard_symplectic() -> Self {
        let mut entries = vec![vec![F::zero(); 6]; 6];
        for b in 0..3 {
            entries[2 * b][2 * b + 1] = F::one();
            entries[2 * b + 1][2 * b] = -F::one();
        }
        SkewForm { entries }
    }

    pub fn from_upper(upper: &[i64]) -> Self
    where
        F: From<i64>,
    {
        let elems: Vec<F> = upper.iter().map(|&x| F::from(x)).collect();
        Self::from_upper_elems(&elems)
    }
}

/// Runtime description of the coefficient field for CLI and JSON payloads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldSpec {
    Rational,
    Finite { q: u64, ext: u32 },
}

impl FieldSpec {
    pub fn finite(q: u64, ext: u32) -> Result<Self, PflabError> {
        let supported_q = [2u64, 3, 5, 7, 11, 13];
        if !supported_q.contains(&q) || !(1..=2).contains(&ext) {
            return Err(PflabError::UnsupportedField { q, ext });
        }
        Ok(FieldSpec::Finite { q, ext })
    }

    pub fn order(&self) -> Option<u64> {
        match self {
            FieldSpec::Rational => None,
            FieldSpec::Finite { q, ext } => Some(q.pow(*ext)),
        }
    }
}

/// Run a closure monomorphized at the requested finite field.
#[macro_export]
macro_rules! with_finite_field {
    ($q:expr, $ext:expr, $f:ident :: <F> ($($args:expr),* $(,)?)) => {{
        match ($q, $ext) {
            (2, 1) => $f::<$crate::scalar::F2>($($args),*),
            (3, 1) => $f::<$crate::scalar::F3>($($args),*),
            (5, 1) => $f::<$crate::scalar::F5>($($args),*),
            (7, 1) => $f::<$crate::scalar::F7>($($args),*),
            (11, 1) => $f::<$crate::scalar::F11>($($args),*),
            (13, 1) => $f::<$crate::scalar::F13>($($args),*),
            (2, 2) => $f::<$crate::scalar::F4>($($args),*),
            (3, 2) => $f::<$crate::scalar::F9>($($args),*),
            (5, 2) => $f::<$crate::scalar::F25>($($args),*),
            (7, 2) => $f::<$crate::scalar::F49>($($args),*),
            (11, 2) => $f::<$crate::scalar::Fp2<11>>($($args),*),
            (13, 2) => $f::<$crate::scalar::Fp2<13>>($($args),*),
            (q, ext) => return Err($crate::pflab::PflabError::UnsupportedField { q, ext }.into()),
        }
    }};
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, F7};

    #[test]
    fn skew_validation() {
        let mut entries = vec![vec![rat(0); 6]; 6];
        entries[0][1] = rat(3);
        assert!(SkewForm::new(entries.clone()).is_err());
        entries[1][0] = rat(-3);
        assert!(SkewForm::new(entries).is_ok());
    }

    #[test]
    fn diag_must_vanish() {
        // in characteristic 2, M = M^T does not imply zero diagonal
        let mut entries = vec![vec![crate::scalar::F2::new(0); 6]; 6];
        entries[2][2] = crate::scalar::F2::new(1);
        assert!(SkewForm::new(entries).is_err());
    }

    #[test]
    fn field_spec_validation() {
        assert!(FieldSpec::finite(7, 1).is_ok());
        assert!(FieldSpec::finite(7, 2).is_ok());
        assert!(FieldSpec::finite(4, 1).is_err());
        assert!(FieldSpec::finite(7, 3).is_err());
        assert_eq!(FieldSpec::finite(7, 2).unwrap().order(), Some(49));
    }

    #[test]
    fn congruence_is_skew() {
        let m = SkewForm::<F7>::standard_symplectic();
        let mut r = gen::rng(5);
        let a = gen::random_invertible::<F7>(&mut r);
        let t = m.congruence(&a);
        assert!(SkewForm::new(t.entries).is_ok());
    }
}
