//! Pfaffians of skew-symmetric forms over exact fields, numerically and as
//! polynomials: the Pfaffian cubic of a 6-dimensional space of skew forms,
//! and the full 15-variable Pfaffian with its partials.

use crate::scalar::Field;

use super::linalg::{det, rank, Matrix};
use super::poly::{CubicForm, HomogPoly};
use super::{PflabError, SkewForm};

/// Pfaffian by expansion along the first row:
/// Pf(M) = sum_j (-1)^j m_{0j} Pf(M with rows/columns 0, j removed).
pub fn pfaffian<F: Field>(m: &SkewForm<F>) -> F {
    pf_rec(&m.entries)
}

fn pf_rec<F: Field>(m: &Matrix<F>) -> F {
    let n = m.len();
    if n == 0 {
        return F::one();
    }
    if n % 2 == 1 {
        return F::zero();
    }
    if n == 2 {
        return m[0][1].clone();
    }
    let mut acc = F::zero();
    for j in 1..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor = strike(m, 0, j);
        let term = m[0][j].clone() * pf_rec(&minor);
        // alternating signs: + for j = 1, - for j = 2, ...
        if j % 2 == 1 {
            acc = acc + term;
        } else {
            acc = acc - term;
        }
    }
    acc
}

fn strike<F: Clone>(m: &Matrix<F>, i: usize, j: usize) -> Matrix<F> {
    let keep: Vec<usize> = (0..m.len()).filter(|&k| k != i && k != j).collect();
    keep.iter()
        .map(|&r| keep.iter().map(|&c| m[r][c].clone()).collect())
        .collect()
}

/// Partial derivative of the Pfaffian with respect to entry (i, j), i < j,
/// evaluated at M: up to sign, the Pfaffian of the complementary minor.
pub fn pfaffian_partial<F: Field>(m: &SkewForm<F>, i: usize, j: usize) -> F {
    assert!(i < j && j < m.size());
    let minor = pf_rec(&strike(&m.entries, i, j));
    // sign (-1)^(i+j+1), matching the expansion Pf = sum m_{ij} * sign * Pf(minor)
    if (i + j) % 2 == 1 {
        minor
    } else {
        -minor
    }
}

/// The 15 coordinates of a 6x6 skew form: entries above the diagonal in row
/// order (0,1), (0,2), ..., (4,5).
pub fn upper_triangle_coords<F: Field>(m: &SkewForm<F>) -> Vec<F> {
    let mut out = Vec::with_capacity(15);
    for i in 0..6 {
        for j in i + 1..6 {
            out.push(m.entries[i][j].clone());
        }
    }
    out
}

/// The Pfaffian of the generic 6x6 skew matrix as a cubic in its 15
/// upper-triangle entries.
pub fn symbolic_pfaffian_15<F: Field>() -> HomogPoly<F> {
    // entry (i,j) -> variable index in the 15-variable ring
    let mut var_of = [[usize::MAX; 6]; 6];
    let mut v = 0;
    for i in 0..6 {
        for j in i + 1..6 {
            var_of[i][j] = v;
            v += 1;
        }
    }
    let entries: Matrix<HomogPoly<F>> = (0..6)
        .map(|i| {
            (0..6)
                .map(|j| {
                    if i == j {
                        HomogPoly::zero(15, 1)
                    } else {
                        let mut e = vec![0u8; 15];
                        let (a, b) = if i < j { (i, j) } else { (j, i) };
                        e[var_of[a][b]] = 1;
                        let c = if i < j { F::one() } else { -F::one() };
                        HomogPoly::monomial(15, &e, c)
                    }
                })
                .collect()
        })
        .collect();
    pf_poly(&entries)
}

/// Pfaffian of a matrix of homogeneous linear forms; the entries must all
/// share arity and degree 1.
fn pf_poly<F: Field>(m: &Matrix<HomogPoly<F>>) -> HomogPoly<F> {
    let n = m.len();
    let nvars = m[0][0].nvars;
    if n == 2 {
        return m[0][1].clone();
    }
    let mut acc = HomogPoly::zero(nvars, n as u32 / 2);
    for j in 1..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor = strike(m, 0, j);
        let term = m[0][j].mul(&pf_poly(&minor));
        let signed = if j % 2 == 1 { term } else { term.scale(&-F::one()) };
        acc = acc.add(&signed);
    }
    acc
}

/// The cubic form Pf(x_0 w_0 + ... + x_5 w_5) attached to six skew forms.
///
/// The basis must be linearly independent (rank 6 on upper-triangle
/// coordinates). A span lying entirely inside the degenerate locus yields the
/// zero polynomial and is rejected separately.
pub fn pfaffian_cubic<F: Field>(basis: &[SkewForm<F>; 6]) -> Result<CubicForm<F>, PflabError> {
    let coord_matrix: Matrix<F> = basis.iter().map(upper_triangle_coords).collect();
    let r = rank(&coord_matrix);
    if r < 6 {
        return Err(PflabError::DependentBasis { rank: r });
    }
    // pencil entries as linear forms in the six coordinates x_0..x_5
    let entries: Matrix<HomogPoly<F>> = (0..6)
        .map(|i| {
            (0..6)
                .map(|j| {
                    let mut p = HomogPoly::zero(6, 1);
                    for (k, w) in basis.iter().enumerate() {
                        let mut e = vec![0u8; 6];
                        e[k] = 1;
                        p.add_term(e, w.entries[i][j].clone());
                    }
                    p
                })
                .collect()
        })
        .collect();
    let pf = pf_poly(&entries);
    if pf.is_zero() {
        return Err(PflabError::DegenerateSpan);
    }
    CubicForm::new(pf)
}

/// Evaluate the pencil x -> sum x_k w_k at a point; the direct route used to
/// cross-check coefficient extraction.
pub fn pencil_at<F: Field>(basis: &[SkewForm<F>; 6], x: &[F]) -> SkewForm<F> {
    let mut entries = vec![vec![F::zero(); 6]; 6];
    #[allow(clippy::needless_range_loop)]
    for i in 0..6 {
        for j in 0..6 {
            let mut acc = F::zero();
            for (k, w) in basis.iter().enumerate() {
                acc = acc + x[k].clone() * w.entries[i][j].clone();
            }
            entries[i][j] = acc;
        }
    }
    SkewForm::new(entries).expect("pencil of skew forms is skew")
}

/// det(M) computed independently by Gaussian elimination; the square of the
/// Pfaffian for any skew form.
pub fn det_oracle<F: Field>(m: &SkewForm<F>) -> F {
    det(&m.entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, F7, Rat};

    #[test]
    fn symplectic_normal_form() {
        let m = SkewForm::<Rat>::standard_symplectic();
        assert_eq!(pfaffian(&m), rat(1));
        assert_eq!(det_oracle(&m), rat(1));
    }

    #[test]
    fn low_rank_vanishes() {
        // u wedge v has rank 2; its Pfaffian vanishes
        let u = [1i64, 2, 3, 4, 5, 6];
        let v = [1i64, 0, 1, 0, 1, 0];
        let mut entries = vec![vec![rat(0); 6]; 6];
        for i in 0..6 {
            for j in 0..6 {
                entries[i][j] = rat(u[i] * v[j] - u[j] * v[i]);
            }
        }
        let m = SkewForm::new(entries).unwrap();
        assert_eq!(pfaffian(&m), rat(0));
    }

    #[test]
    fn four_by_four_formula() {
        // Pf = m01 m23 - m02 m13 + m03 m12 on the 4x4 block
        let vals = [[0i64, 2, 3, 5], [-2, 0, 7, 11], [-3, -7, 0, 13], [-5, -11, -13, 0]];
        let m: Vec<Vec<Rat>> = vals.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
        assert_eq!(pf_rec(&m), rat(2 * 13 - 3 * 11 + 5 * 7));
    }

    #[test]
    fn symbolic_pfaffian_has_fifteen_terms() {
        let p = symbolic_pfaffian_15::<Rat>();
        assert_eq!(p.degree, 3);
        assert_eq!(p.coeffs.len(), 15);
        // every coefficient is +-1
        for c in p.coeffs.values() {
            assert!(c == &rat(1) || c == &rat(-1));
        }
    }

    #[test]
    fn symbolic_pfaffian_matches_numeric() {
        let p = symbolic_pfaffian_15::<F7>();
        let m = SkewForm::<F7>::from_upper(&[1, 2, 3, 4, 5, 6, 0, 1, 2, 3, 4, 5, 6, 0, 1]);
        let coords = upper_triangle_coords(&m);
        assert_eq!(p.eval(&coords), pfaffian(&m));
    }

    #[test]
    fn dependent_basis_rejected() {
        let m = SkewForm::<F7>::standard_symplectic();
        let basis: [SkewForm<F7>; 6] = std::array::from_fn(|_| m.clone());
        assert!(matches!(
            pfaffian_cubic(&basis),
            Err(PflabError::DependentBasis { .. })
        ));
    }

    #[test]
    fn span_with_a_nondegenerate_member_gives_a_cubic() {
        // the symplectic form in the pencil guarantees a nonzero Pfaffian
        let mut r = crate::pflab::gen::rng(31);
        let basis: [SkewForm<F7>; 6] = loop {
            let mut candidate: [SkewForm<F7>; 6] =
                std::array::from_fn(|_| crate::pflab::gen::random_skew(&mut r));
            candidate[0] = SkewForm::standard_symplectic();
            let coords: Matrix<F7> = candidate.iter().map(upper_triangle_coords).collect();
            if rank(&coords) == 6 {
                break candidate;
            }
        };
        let cubic = pfaffian_cubic(&basis).unwrap();
        assert_eq!(cubic.poly().degree, 3);
    }

    #[test]
    fn common_kernel_span_is_degenerate() {
        // six independent forms supported on the first five coordinates:
        // every pencil member kills e_5, so the Pfaffian vanishes identically
        let picks = [(0usize, 1usize), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let basis: [SkewForm<F7>; 6] = std::array::from_fn(|k| {
            let (i, j) = picks[k];
            let mut entries = vec![vec![F7::new(0); 6]; 6];
            entries[i][j] = F7::new(1);
            entries[j][i] = -F7::new(1);
            SkewForm::new(entries).unwrap()
        });
        assert!(matches!(pfaffian_cubic(&basis), Err(PflabError::DegenerateSpan)));
    }
}
