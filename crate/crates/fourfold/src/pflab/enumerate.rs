//! Exhaustive point enumeration over small finite fields: projective spaces,
//! the Grassmannian Gr(2,6), zero loci of skew-form conditions, singular
//! loci of cubics, and (2,3) complete intersections in P^4.
//!
//! Projective points are canonicalized by scaling the first nonzero
//! coordinate to 1; 2-planes by the reduced row echelon form of a 2x6 basis
//! matrix. Enumeration work is split by leading coordinate and runs on the
//! rayon pool; results merge order-independently and are sorted.

use rayon::prelude::*;

use crate::scalar::FiniteField;

use super::linalg::{kernel_basis, rank, rref, Matrix};
use super::poly::HomogPoly;
use super::{CubicForm, PflabError, SkewForm};

/// Canonical projective point: first nonzero coordinate is 1.
pub type ProjPoint<F> = Vec<F>;

/// |P^n(F_q)| = (q^(n+1) - 1) / (q - 1).
pub fn projective_space_count(q: u64, n: u32) -> u64 {
    let mut acc: u64 = 0;
    let mut power: u64 = 1;
    for _ in 0..=n {
        acc += power;
        power *= q;
    }
    acc
}

/// Gaussian binomial [n choose k]_q, the number of k-planes in F_q^n.
pub fn gaussian_binomial(q: u64, n: u32, k: u32) -> u64 {
    let qpow = |e: u32| -> u128 { (0..e).fold(1u128, |acc, _| acc * q as u128) };
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= qpow(n - i) - 1;
        den *= qpow(k - i) - 1;
    }
    u64::try_from(num / den).expect("gaussian binomial overflow")
}

fn check_bound(points: u64, bound: u64) -> Result<(), PflabError> {
    if points > bound {
        Err(PflabError::EnumerationBound { points, bound })
    } else {
        Ok(())
    }
}

/// Default ceiling on the number of candidates any one enumeration may visit.
pub const DEFAULT_ENUM_BOUND: u64 = 20_000_000;

/// All points of P^n(F), canonical representatives, in a deterministic order.
pub fn projective_points<F: FiniteField>(n: u32, bound: u64) -> Result<Vec<ProjPoint<F>>, PflabError> {
    check_bound(projective_space_count(F::ORDER, n), bound)?;
    let mut out = Vec::with_capacity(projective_space_count(F::ORDER, n) as usize);
    // leading index = position of the first nonzero (unit) coordinate
    for lead in 0..=n as usize {
        let free = n as usize - lead;
        let total = F::ORDER.pow(free as u32);
        for code in 0..total {
            let mut pt = vec![F::zero(); n as usize + 1];
            pt[lead] = F::one();
            let mut c = code;
            for slot in lead + 1..=n as usize {
                pt[slot] = F::from_index(c % F::ORDER);
                c /= F::ORDER;
            }
            out.push(pt);
        }
    }
    Ok(out)
}

/// Visit P^n(F) in parallel chunks, mapping each canonical point.
pub fn par_filter_projective<F, T, G>(n: u32, bound: u64, f: G) -> Result<Vec<T>, PflabError>
where
    F: FiniteField,
    T: Send,
    G: Fn(&[F]) -> Option<T> + Send + Sync,
{
    check_bound(projective_space_count(F::ORDER, n), bound)?;
    let f = &f;
    let mut out: Vec<T> = (0..=n as usize)
        .flat_map(|lead| {
            let free = n as usize - lead;
            let total = F::ORDER.pow(free as u32);
            (0..total).into_par_iter().filter_map(move |code| {
                let mut pt = vec![F::zero(); n as usize + 1];
                pt[lead] = F::one();
                let mut c = code;
                for slot in lead + 1..=n as usize {
                    pt[slot] = F::from_index(c % F::ORDER);
                    c /= F::ORDER;
                }
                f(&pt)
            })
            .collect::<Vec<_>>()
        })
        .collect();
    out.truncate(out.len());
    Ok(out)
}

/// A 2-plane in F^6 by its canonical RREF 2x6 basis matrix.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Plane2<F>(pub [[F; 6]; 2]);

impl<F: FiniteField> Plane2<F> {
    /// Canonicalize the span of two independent vectors.
    pub fn from_span(u: &[F], v: &[F]) -> Option<Self> {
        let m: Matrix<F> = vec![u.to_vec(), v.to_vec()];
        if rank(&m) != 2 {
            return None;
        }
        let r = rref(&m);
        let mut rows = [[F::zero(); 6]; 2];
        for (i, row) in r.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                rows[i][j] = *x;
            }
        }
        Some(Plane2(rows))
    }

    pub fn basis(&self) -> (&[F; 6], &[F; 6]) {
        (&self.0[0], &self.0[1])
    }
}

/// All 2-planes of F^6 in RREF order, enumerated by pivot pair and free
/// entries. The count is the Gaussian binomial [6 choose 2]_q.
pub fn grassmannian_2_6<F: FiniteField>(bound: u64) -> Result<Vec<Plane2<F>>, PflabError> {
    let count = gaussian_binomial(F::ORDER, 6, 2);
    check_bound(count, bound)?;
    let mut out = Vec::with_capacity(count as usize);
    for p1 in 0..6usize {
        for p2 in p1 + 1..6usize {
            // free entries: row 0 in columns (p1, p2) exclusive, skipping p2;
            // both rows free in columns > p2
            let free_cols_row0: Vec<usize> =
                (p1 + 1..6).filter(|&c| c != p2).collect();
            let free_cols_row1: Vec<usize> = (p2 + 1..6).collect();
            let slots = free_cols_row0.len() + free_cols_row1.len();
            let total = F::ORDER.pow(slots as u32);
            for code in 0..total {
                let mut rows = [[F::zero(); 6]; 2];
                rows[0][p1] = F::one();
                rows[1][p2] = F::one();
                let mut c = code;
                for &col in &free_cols_row0 {
                    rows[0][col] = F::from_index(c % F::ORDER);
                    c /= F::ORDER;
                }
                for &col in &free_cols_row1 {
                    rows[1][col] = F::from_index(c % F::ORDER);
                    c /= F::ORDER;
                }
                out.push(Plane2(rows));
            }
        }
    }
    Ok(out)
}

/// Evaluate a skew form on a pair of vectors: u^T M v.
fn skew_pairing<F: FiniteField>(w: &SkewForm<F>, u: &[F], v: &[F]) -> F {
    let mut acc = F::zero();
    for i in 0..6 {
        if u[i].is_zero() {
            continue;
        }
        for j in 0..6 {
            acc = acc + u[i] * w.entries[i][j] * v[j];
        }
    }
    acc
}

/// Zero locus in Gr(2,6) of the six skew-form conditions, by direct filter
/// over the RREF enumeration. Suited to small fields.
pub fn xv_points_direct<F: FiniteField>(
    basis: &[SkewForm<F>; 6],
    bound: u64,
) -> Result<Vec<Plane2<F>>, PflabError> {
    let all = grassmannian_2_6::<F>(bound)?;
    Ok(all
        .into_par_iter()
        .filter(|plane| {
            let (u, v) = plane.basis();
            basis.iter().all(|w| skew_pairing(w, u, v).is_zero())
        })
        .collect())
}

/// Zero locus in Gr(2,6) by the incidence route: for each projective point u,
/// the planes through u in the locus correspond to lines in the common
/// kernel of the six pairings with u. Scales to larger fields than the
/// direct filter; `bound` limits the number of u-candidates. Points are
/// generated on the fly, never materialized.
pub fn xv_points_incidence<F: FiniteField>(
    basis: &[SkewForm<F>; 6],
    bound: u64,
) -> Result<Vec<Plane2<F>>, PflabError> {
    check_bound(projective_space_count(F::ORDER, 5), bound)?;
    let mut found: Vec<Plane2<F>> = (0..=5usize)
        .flat_map(|lead| {
            let free = 5 - lead;
            let total = F::ORDER.pow(free as u32);
            (0..total).into_par_iter().flat_map_iter(move |code| {
                let mut u = vec![F::zero(); 6];
                u[lead] = F::one();
                let mut c = code;
                for slot in lead + 1..=5 {
                    u[slot] = F::from_index(c % F::ORDER);
                    c /= F::ORDER;
                }
                planes_through(basis, &u)
            })
            .collect::<Vec<_>>()
        })
        .collect();
    found.par_sort_unstable();
    found.dedup();
    Ok(found)
}

/// The planes through u lying in the zero locus: one per line of the common
/// pairing kernel modulo u. The kernel always contains u; extending u to a
/// kernel basis and enumerating canonical projective coefficient tuples over
/// the complement yields each plane exactly once per incident point.
fn planes_through<F: FiniteField>(basis: &[SkewForm<F>; 6], u: &[F]) -> Vec<Plane2<F>> {
    let rows: Matrix<F> = basis
        .iter()
        .map(|w| {
            (0..6)
                .map(|j| {
                    let mut acc = F::zero();
                    for i in 0..6 {
                        acc = acc + u[i] * w.entries[i][j];
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let kernel = kernel_basis(&rows);
    if kernel.len() < 2 {
        return Vec::new();
    }
    // complete u to a basis of the kernel
    let mut extension: Vec<Vec<F>> = Vec::with_capacity(kernel.len() - 1);
    let mut stack: Matrix<F> = vec![u.to_vec()];
    for k in kernel {
        stack.push(k.clone());
        if rank(&stack) == stack.len() {
            extension.push(k);
        } else {
            stack.pop();
        }
    }
    debug_assert_eq!(extension.len() + 1, stack.len());
    // lines through u <-> projective tuples over the extension: first
    // nonzero coefficient normalized to 1
    let d = extension.len();
    let mut planes = Vec::new();
    for lead in 0..d {
        let total = F::ORDER.pow((d - lead - 1) as u32);
        for code in 0..total {
            let mut v = extension[lead].clone();
            let mut c = code;
            for w in extension.iter().skip(lead + 1) {
                let e = F::from_index(c % F::ORDER);
                c /= F::ORDER;
                for j in 0..6 {
                    v[j] = v[j] + e * w[j];
                }
            }
            if let Some(plane) = Plane2::from_span(u, &v) {
                planes.push(plane);
            }
        }
    }
    planes
}

/// All projective singular points of a cubic hypersurface in P^5: points
/// where the cubic and its six partials vanish.
pub fn singular_points<F: FiniteField>(
    cubic: &CubicForm<F>,
    bound: u64,
) -> Result<Vec<ProjPoint<F>>, PflabError> {
    let partials = cubic.partials();
    let mut pts = par_filter_projective::<F, ProjPoint<F>, _>(5, bound, |pt| {
        if !cubic.eval(pt).is_zero() {
            return None;
        }
        if partials.iter().all(|d| d.eval(pt).is_zero()) {
            Some(pt.to_vec())
        } else {
            None
        }
    })?;
    pts.par_sort_unstable_by_key(|p| p.iter().map(|x| x.to_index()).collect::<Vec<_>>());
    Ok(pts)
}

/// Point report for the (2,3) complete intersection S in P^4.
#[derive(Debug, Clone)]
pub struct SurfaceSlice<F> {
    pub points: Vec<ProjPoint<F>>,
    /// Points where the 2x5 Jacobian drops below rank 2.
    pub non_smooth_points: Vec<ProjPoint<F>>,
}

/// Enumerate {F2 = F3 = 0} in P^4 and check the Jacobian rank at every
/// rational point. Rank 2 everywhere certifies only the absence of rational
/// singular points over this field, nothing stronger.
pub fn s_points<F: FiniteField>(
    f2: &HomogPoly<F>,
    f3: &HomogPoly<F>,
    bound: u64,
) -> Result<SurfaceSlice<F>, PflabError> {
    assert_eq!((f2.nvars, f2.degree), (5, 2));
    assert_eq!((f3.nvars, f3.degree), (5, 3));
    let d2: Vec<_> = (0..5).map(|v| f2.partial(v)).collect();
    let d3: Vec<_> = (0..5).map(|v| f3.partial(v)).collect();
    let hits = par_filter_projective::<F, (ProjPoint<F>, bool), _>(4, bound, |pt| {
        if !f2.eval(pt).is_zero() || !f3.eval(pt).is_zero() {
            return None;
        }
        let jac: Matrix<F> = vec![
            d2.iter().map(|d| d.eval(pt)).collect(),
            d3.iter().map(|d| d.eval(pt)).collect(),
        ];
        Some((pt.to_vec(), rank(&jac) == 2))
    })?;
    let mut points = Vec::new();
    let mut non_smooth = Vec::new();
    for (pt, smooth) in hits {
        if !smooth {
            non_smooth.push(pt.clone());
        }
        points.push(pt);
    }
    points.par_sort_unstable_by_key(|p| p.iter().map(|x| x.to_index()).collect::<Vec<_>>());
    non_smooth.par_sort_unstable_by_key(|p| p.iter().map(|x| x.to_index()).collect::<Vec<_>>());
    Ok(SurfaceSlice { points, non_smooth_points: non_smooth })
}

/// The 6-variable cubic z0*F2 + F3 built from 5-variable forms of degrees 2
/// and 3. The hypersurface it cuts out is singular at (1:0:...:0).
pub fn singular_cubic_model<F: FiniteField>(
    f2: &HomogPoly<F>,
    f3: &HomogPoly<F>,
) -> Result<CubicForm<F>, PflabError> {
    if f2.nvars != 5 || f3.nvars != 5 {
        return Err(PflabError::WrongVariableCount {
            got: if f2.nvars != 5 { f2.nvars } else { f3.nvars },
            want: 5,
        });
    }
    if f2.degree != 2 {
        return Err(PflabError::WrongDegree { got: f2.degree, want: 2 });
    }
    if f3.degree != 3 {
        return Err(PflabError::WrongDegree { got: f3.degree, want: 3 });
    }
    let mut z0 = vec![0u8; 6];
    z0[0] = 1;
    let z0 = HomogPoly::monomial(6, &z0, F::one());
    let lifted2 = f2.prepend_variable();
    let lifted3 = f3.prepend_variable();
    CubicForm::new(z0.mul(&lifted2).add(&lifted3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{F2, F4, F7};
    use num_traits::Zero;

    #[test]
    fn projective_counts_match_closed_form() {
        assert_eq!(projective_space_count(7, 5), 19_608);
        assert_eq!(projective_space_count(2, 2), 7);
        for q in [2u64, 3, 5, 7] {
            for n in 1..=3u32 {
                let expected = projective_space_count(q, n);
                let got = match q {
                    2 => projective_points::<F2>(n, 1 << 24).unwrap().len() as u64,
                    3 => projective_points::<crate::scalar::F3>(n, 1 << 24).unwrap().len() as u64,
                    5 => projective_points::<crate::scalar::F5>(n, 1 << 24).unwrap().len() as u64,
                    7 => projective_points::<F7>(n, 1 << 24).unwrap().len() as u64,
                    _ => unreachable!(),
                };
                assert_eq!(got, expected, "q={q} n={n}");
            }
        }
        // n = 5 over F_7, the headline count
        assert_eq!(
            projective_points::<F7>(5, 1 << 24).unwrap().len() as u64,
            19_608
        );
    }

    #[test]
    fn grassmannian_count_f2() {
        assert_eq!(gaussian_binomial(2, 6, 2), 651);
        assert_eq!(grassmannian_2_6::<F2>(1 << 20).unwrap().len(), 651);
    }

    #[test]
    fn grassmannian_count_f3() {
        assert_eq!(
            grassmannian_2_6::<crate::scalar::F3>(1 << 22).unwrap().len() as u64,
            gaussian_binomial(3, 6, 2)
        );
    }

    #[test]
    fn grassmannian_planes_are_distinct() {
        let planes = grassmannian_2_6::<F2>(1 << 20).unwrap();
        let mut sorted = planes.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), planes.len());
    }

    #[test]
    fn zero_conditions_give_whole_grassmannian() {
        let zero = SkewForm::<F2>::zero();
        let basis: [SkewForm<F2>; 6] = std::array::from_fn(|_| zero.clone());
        // dependent as a basis, but the enumeration itself is well defined:
        // filter with all-zero conditions keeps everything
        let all = xv_points_direct(&basis, 1 << 20).unwrap();
        assert_eq!(all.len(), 651);
    }

    #[test]
    fn incidence_and_direct_routes_agree() {
        let basis = crate::pflab::gen::random_skew_basis::<F2>(17);
        let direct = xv_points_direct(&basis, 1 << 22).unwrap();
        let mut direct_sorted = direct.clone();
        direct_sorted.sort();
        let incidence = xv_points_incidence(&basis, 1 << 22).unwrap();
        assert_eq!(direct_sorted, incidence);

        let basis4 = crate::pflab::gen::random_skew_basis::<F4>(99);
        let direct4 = {
            let mut v = xv_points_direct(&basis4, 1 << 22).unwrap();
            v.sort();
            v
        };
        let incidence4 = xv_points_incidence(&basis4, 1 << 22).unwrap();
        assert_eq!(direct4, incidence4);
    }

    #[test]
    fn fermat_cubic_is_smooth_over_f7() {
        // partials 3 z_i^2 share no common projective zero in char 7
        let mut poly = HomogPoly::zero(6, 3);
        for i in 0..6 {
            let mut e = vec![0u8; 6];
            e[i] = 3;
            poly.add_term(e, F7::new(1));
        }
        let cubic = CubicForm::new(poly).unwrap();
        assert!(singular_points(&cubic, 1 << 24).unwrap().is_empty());
    }

    #[test]
    fn nodal_model_is_singular_at_the_node() {
        let f2 = crate::pflab::gen::random_homog::<F7>(5, 2, 3);
        let f3 = crate::pflab::gen::random_homog::<F7>(5, 3, 4);
        let cubic = singular_cubic_model(&f2, &f3).unwrap();
        let node: Vec<F7> = vec![
            F7::new(1),
            F7::new(0),
            F7::new(0),
            F7::new(0),
            F7::new(0),
            F7::new(0),
        ];
        assert!(cubic.eval(&node).is_zero());
        // every partial vanishes at the node: d/dz0 evaluates to F2, which is
        // zero there since F2 has no constant term
        for d in cubic.partials() {
            assert!(d.eval(&node).is_zero());
        }
        let sing = singular_points(&cubic, 1 << 24).unwrap();
        assert!(sing.contains(&node));
    }

    #[test]
    fn special_intersection_is_a_plane() {
        // F2 = z1^2, F3 = z2^3 in variables (z1..z5): locus is the P^2
        // {z1 = z2 = 0}, with 57 points over F_7
        let f2 = HomogPoly::monomial(5, &[2, 0, 0, 0, 0], F7::new(1));
        let f3 = HomogPoly::monomial(5, &[0, 3, 0, 0, 0], F7::new(1));
        let slice = s_points(&f2, &f3, 1 << 24).unwrap();
        assert_eq!(slice.points.len() as u64, projective_space_count(7, 2));
        assert_eq!(slice.points.len(), 57);
        // the Jacobian degenerates on this non-reduced slice
        assert!(!slice.non_smooth_points.is_empty());
    }

    #[test]
    fn cone_case_drops_the_extra_variable() {
        // with F2 = 0 the model cubic is independent of z0
        let f2 = HomogPoly::<F7>::zero(5, 2);
        let f3 = HomogPoly::monomial(5, &[0, 3, 0, 0, 0], F7::new(1));
        let cubic = singular_cubic_model(&f2, &f3).unwrap();
        assert!(cubic.poly().coeffs.keys().all(|m| m[0] == 0));
    }

    #[test]
    fn bound_is_enforced() {
        assert!(matches!(
            projective_points::<F7>(5, 100),
            Err(PflabError::EnumerationBound { .. })
        ));
    }
}
