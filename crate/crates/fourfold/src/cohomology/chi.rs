//! Euler characteristics and model-level tables for the two blowup models.
//!
//! The plane-case blowup sits inside a projectivized split bundle over P^2,
//! so both tables and chi go through the relative Euler rule. The nodal-case
//! blowup of P^4 along a (2,3) complete-intersection surface S is handled at
//! the chi level through resolutions of the ideal powers of S (negative
//! exceptional multiplicity) and through the split normal bundle O(2)+O(3)
//! of S (positive multiplicity); tables are available exactly where the
//! resolutions make every connecting map forced.

use super::{coh_pn, coh_resolution, CohTable, Pushed, SplitBundle, SpaceModel};
#[cfg(test)]
use super::CohDims;

/// chi(P^n, O(t)) as the exact binomial polynomial, valid for every t.
pub fn chi_pn(n: u32, t: i64) -> i64 {
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for i in 1..=n as i64 {
        num *= (t + i) as i128;
        den *= i as i128;
    }
    i64::try_from(num / den).expect("chi overflow")
}

/// The rank-4 split bundle over P^2 whose projectivization contains the
/// plane-case blowup: three trivial summands plus O(-1).
pub fn plane_case_bundle() -> SplitBundle {
    SplitBundle::new(vec![0, 0, 0, -1])
}

/// Class of the plane-case blowup inside the projectivized bundle,
/// in (relative hyperplane, base hyperplane) coordinates.
pub const PLANE_TY_CLASS: [i64; 2] = [2, 1];

/// chi of O(a*H' + b*h') on the projectivized bundle.
pub fn chi_proj_bundle(a: i64, b: i64) -> i64 {
    match super::pushforward_projbundle(a, &plane_case_bundle()) {
        Pushed::Zero => 0,
        Pushed::InDegree { degree, bundle } => {
            let sign = if degree % 2 == 0 { 1 } else { -1 };
            sign * bundle.summands.iter().map(|&s| chi_pn(2, s + b)).sum::<i64>()
        }
    }
}

/// chi of O(a*H + b*h) on the plane-case blowup, via the ambient sequence.
pub fn chi_plane_ty(class: &[i64]) -> i64 {
    let (a, b) = (class[0], class[1]);
    chi_proj_bundle(a, b) - chi_proj_bundle(a - PLANE_TY_CLASS[0], b - PLANE_TY_CLASS[1])
}

/// Two-term resolution of the m-th ideal power of a (2,3) complete
/// intersection in P^4: generators f^k g^(m-k), one syzygy per adjacent pair.
pub fn ideal_power_resolution(m: u32) -> (SplitBundle, SplitBundle) {
    assert!(m >= 1);
    let m = m as i64;
    let t0: Vec<i64> = (0..=m).map(|k| -(2 * k + 3 * (m - k))).collect();
    let t1: Vec<i64> = (0..m).map(|k| -(2 * k + 3 * (m - 1 - k)) - 5).collect();
    (SplitBundle::new(t1), SplitBundle::new(t0))
}

/// Table of the twisted m-th ideal power of the surface S in P^4.
pub fn ideal_power_table(m: u32, twist: i64) -> CohTable {
    let (t1, t0) = ideal_power_resolution(m);
    coh_resolution(4, &t1, &t0, twist)
}

/// chi of the twisted m-th ideal power (always available).
pub fn chi_ideal_power(m: u32, twist: i64) -> i64 {
    let (t1, t0) = ideal_power_resolution(m);
    let chi = |b: &SplitBundle| b.summands.iter().map(|&s| chi_pn(4, s + twist)).sum::<i64>();
    chi(&t0) - chi(&t1)
}

/// chi(S, O_S(t)) for the K3 surface S = (2,3) complete intersection in P^4,
/// by inclusion-exclusion over the Koszul resolution.
pub fn chi_k3_surface(t: i64) -> i64 {
    chi_pn(4, t) - chi_pn(4, t - 2) - chi_pn(4, t - 3) + chi_pn(4, t - 5)
}

/// chi of O(a*h + b*D) on the nodal-case blowup of P^4 along S.
///
/// Nonpositive b goes through the ideal-power resolutions. Positive b climbs
/// the exceptional-divisor restriction sequence; the exceptional divisor is
/// the projectivized split normal bundle O_S(2) + O_S(3), so fiber degree -1
/// contributes nothing and fiber degree -b for b >= 2 contributes
/// Sym^(b-2)(N) tensor det N in fiber degree 1.
pub fn chi_singular_ty(class: &[i64]) -> i64 {
    let (a, b) = (class[0], class[1]);
    if b == 0 {
        chi_pn(4, a)
    } else if b < 0 {
        chi_ideal_power((-b) as u32, a)
    } else {
        let mut acc = chi_pn(4, a);
        for m in 1..=b {
            // restriction of O(a h + m D) to the exceptional divisor
            if m >= 2 {
                let k = (m - 2) as u32;
                for i in 0..=k {
                    let j = k - i;
                    acc -= chi_k3_surface(a + 2 * i as i64 + 3 * j as i64 + 5);
                }
            }
        }
        acc
    }
}

/// Table of O(a*h + b*D) on the nodal-case blowup, where available.
pub fn table_singular_ty(class: &[i64]) -> CohTable {
    let (a, b) = (class[0], class[1]);
    if b == 0 {
        CohTable::Determined(coh_pn(4, a))
    } else if b < 0 {
        ideal_power_table((-b) as u32, a)
    } else {
        CohTable::Undetermined {
            reason: format!(
                "O({a}h+{b}D) has positive exceptional multiplicity; only chi is computed"
            ),
            attached: Vec::new(),
        }
    }
}

/// Restriction of a nodal-model class a*h + b*D to the contracted quadric Q,
/// in units of the quadric hyperplane class. D restricts as three times the
/// hyperplane, so H = 3h - D restricts to zero.
pub fn restrict_to_quadric(class: &[i64]) -> i64 {
    class[0] + 3 * class[1]
}

/// Table of O(m) on the three-dimensional quadric, via P^4.
pub fn quadric3_table(m: i64) -> CohTable {
    super::coh_divisor_restriction(&SpaceModel::ProjectiveSpace(4), &[2], &[m])
        .expect("rank-1 classes")
}

/// chi of O(m) on the three-dimensional quadric.
pub fn chi_quadric3(m: i64) -> i64 {
    chi_pn(4, m) - chi_pn(4, m - 2)
}

/// Ext groups from a pushforward off the contracted quadric to a line bundle
/// on the nodal-case blowup:
/// Ext(push(O_Q(c)), O(L)) = H^(p-1)(Q, O_Q((L + Q - c)|_Q)).
pub fn ext_quadric_pushforward_to_line(c: &[i64], line: &[i64]) -> CohTable {
    let q = [2i64, -1];
    let diff = [line[0] + q[0] - c[0], line[1] + q[1] - c[1]];
    let m = restrict_to_quadric(&diff);
    match quadric3_table(m) {
        CohTable::Determined(d) => CohTable::Determined(d.shifted(1)),
        u => u,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_polynomial_values() {
        assert_eq!(chi_pn(2, -1), 0);
        assert_eq!(chi_pn(2, -3), 1);
        assert_eq!(chi_pn(4, -5), 1);
        assert_eq!(chi_pn(5, 3), 56);
    }

    #[test]
    fn k3_surface_chi() {
        // chi(O_S) = 2 for a K3; Riemann-Roch chi(O_S(t)) = 2 + 3t^2 (degree 6)
        assert_eq!(chi_k3_surface(0), 2);
        for t in -6..=6i64 {
            assert_eq!(chi_k3_surface(t), 2 + 3 * t * t, "t={t}");
        }
    }

    #[test]
    fn ideal_sheaf_resolution_matches_known_tables() {
        // J_S(1) fully acyclic, J_S(2) a single section
        assert!(ideal_power_table(1, 1).is_zero());
        assert_eq!(
            ideal_power_table(1, 2).expect_determined("J(2)"),
            &CohDims::single(0, 1)
        );
        // J_S(5): h^0(O(2)) + h^0(O(3)) - 1 = 15 + 35 - 1
        assert_eq!(
            ideal_power_table(1, 5).expect_determined("J(5)"),
            &CohDims::single(0, 49)
        );
    }

    #[test]
    fn blowup_chi_agrees_with_cubic_hypersurface() {
        // Pullbacks of O_Y(t) along either blowup have the chi of O_Y(t)
        // on the cubic itself, computed independently on P^5.
        for t in -3..=3i64 {
            let on_p5 = chi_pn(5, t) - chi_pn(5, t - 3);
            assert_eq!(chi_plane_ty(&[t, 0]), on_p5, "plane t={t}");
            assert_eq!(chi_singular_ty(&[3 * t, -t]), on_p5, "singular t={t}");
        }
    }

    #[test]
    fn structure_sheaf_chi_is_one_on_both_blowups() {
        assert_eq!(chi_plane_ty(&[0, 0]), 1);
        assert_eq!(chi_singular_ty(&[0, 0]), 1);
    }

    #[test]
    fn exceptional_multiplicity_one_is_chi_neutral() {
        // O(a h + D) and O(a h) have equal chi: the P^1-fibers see degree -1
        for a in -4..=4i64 {
            assert_eq!(chi_singular_ty(&[a, 1]), chi_singular_ty(&[a, 0]), "a={a}");
        }
    }

    #[test]
    fn quadric_tables() {
        assert_eq!(
            quadric3_table(0).expect_determined("O_Q"),
            &CohDims::single(0, 1)
        );
        assert_eq!(chi_quadric3(0), 1);
        assert_eq!(chi_quadric3(1), 5);
    }

    #[test]
    fn pushforward_ext_lemma() {
        // Ext^p(push(O_Q), O(h)) = delta_{p,1}
        let t = ext_quadrict_helper(&[0, 0], &[1, 0]);
        assert_eq!(t.expect_determined("ext"), &CohDims::single(1, 1));
    }

    fn ext_quadrict_helper(c: &[i64], l: &[i64]) -> CohTable {
        ext_quadric_pushforward_to_line(c, l)
    }

    #[test]
    fn singular_ext_lemma_tables() {
        // Hom patterns behind the nodal-case collapses: both are J_S(2)
        let hom = table_singular_ty(&[2, -1]);
        assert_eq!(hom.expect_determined("2h-D"), &CohDims::single(0, 1));
        // orthogonality behind the transposition: J_S(1)
        assert!(table_singular_ty(&[1, -1]).is_zero());
    }
}
