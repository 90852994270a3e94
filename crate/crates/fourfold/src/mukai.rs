//! The numerical Grothendieck lattice of a degree-2 K3 surface twisted by an
//! order-2 Brauer class, and the rank-3 obstruction search that separates it
//! from the lattice of any honest surface.
//!
//! Basis conventions: the twisted lattice is generated by (2+2B, h, p) where
//! B is a half-integral lift of the Brauer class, h the polarization with
//! h^2 = 2, p the point class. Only the fractional parts {Bh} and (when
//! {Bh} = 1/2) {B^2} are well defined; the Euler pairing depends on B only
//! through the integers 2Bh and 4B^2. The untwisted comparison lattice is
//! (r, d, s) with pairing r1*s2 - 2*d1*d2 + s1*r2.

use num_rational::Rational64;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MukaiError {
    #[error("{0} is not half-integral")]
    NotHalfIntegral(Rational64),
    #[error("parity certificate requires a twisted lattice")]
    NotTwisted,
    #[error("odd h-coefficient on a null vector: {0:?}")]
    CounterexampleFound(Vec3),
}

/// Half-integral invariants of a B-field lift: Bh and B^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BData {
    pub bh: Rational64,
    pub bsq: Rational64,
}

impl BData {
    pub fn new(bh: Rational64, bsq: Rational64) -> Result<Self, MukaiError> {
        for v in [bh, bsq] {
            if (v * 2).denom() != &1 {
                return Err(MukaiError::NotHalfIntegral(v));
            }
        }
        Ok(BData { bh, bsq })
    }

    /// The representative established for a cubic fourfold with a plane:
    /// {Bh} = {B^2} = 1/2.
    pub fn half_half() -> Self {
        BData { bh: Rational64::new(1, 2), bsq: Rational64::new(1, 2) }
    }

    fn two_bh(&self) -> i64 {
        let v = self.bh * 2;
        debug_assert!(v.denom() == &1);
        v.to_integer()
    }

    fn four_bsq(&self) -> i64 {
        let v = self.bsq * 4;
        debug_assert!(v.denom() == &1);
        v.to_integer()
    }
}

pub type Vec3 = [i64; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LatticeKind {
    Twisted(BData),
    Untwisted,
}

/// Rank-3 integral lattice with the Euler pairing as Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerLattice {
    pub gram: [[i64; 3]; 3],
    pub kind: LatticeKind,
}

impl EulerLattice {
    pub fn chi(&self, v: &Vec3, w: &Vec3) -> i64 {
        let mut acc = 0;
        for i in 0..3 {
            for j in 0..3 {
                acc += v[i] * self.gram[i][j] * w[j];
            }
        }
        acc
    }

    /// Gram-row combination c with chi(x, w) = c . x for all x.
    fn functional(&self, w: &Vec3) -> Vec3 {
        let mut c = [0i64; 3];
        for i in 0..3 {
            for j in 0..3 {
                c[i] += self.gram[i][j] * w[j];
            }
        }
        c
    }

    pub fn is_symmetric(&self) -> bool {
        (0..3).all(|i| (0..3).all(|j| self.gram[i][j] == self.gram[j][i]))
    }
}

/// Euler-pairing Gram matrix in the basis (2+2B, h, p).
pub fn gram_twisted(b: BData) -> EulerLattice {
    let bh2 = b.two_bh();
    let bsq4 = b.four_bsq();
    EulerLattice {
        gram: [[8 - bsq4, -bh2, 2], [-bh2, -2, 0], [2, 0, 0]],
        kind: LatticeKind::Twisted(b),
    }
}

/// Mukai pairing in the untwisted basis (r, d, s).
pub fn gram_untwisted() -> EulerLattice {
    EulerLattice {
        gram: [[0, 0, 1], [0, -2, 0], [1, 0, 0]],
        kind: LatticeKind::Untwisted,
    }
}

fn lex_vectors(n: i64) -> impl Iterator<Item = Vec3> {
    (-n..=n).flat_map(move |x| {
        (-n..=n).flat_map(move |y| (-n..=n).map(move |z| [x, y, z]))
    })
}

/// Exhaustive double loop; the reference strategy for small boxes.
pub fn pair_search_naive(lattice: &EulerLattice, n: i64) -> Option<(Vec3, Vec3)> {
    for v1 in lex_vectors(n) {
        for v2 in lex_vectors(n) {
            if lattice.chi(&v2, &v2) == 0 && lattice.chi(&v1, &v2) == 1 {
                return Some((v1, v2));
            }
        }
    }
    None
}

/// First pair (v1, v2), in lexicographic order on the concatenated
/// coordinates, with chi(v1, v2) = 1 and chi(v2, v2) = 0; None if the box
/// holds no such pair.
///
/// Strategy: for each null v2 the map v1 -> chi(v1, v2) is the linear
/// functional given by the Gram-row combination, so v2 admits a partner only
/// if the gcd of that functional divides 1. The inner scan runs only for
/// those v2, and the lexicographic minimum over per-v2 candidates equals the
/// double-loop answer.
pub fn pair_search(lattice: &EulerLattice, n: i64) -> Option<(Vec3, Vec3)> {
    let candidates: Vec<(Vec3, Vec3)> = (-n..=n)
        .into_par_iter()
        .flat_map_iter(|x| {
            let lattice = lattice.clone();
            (-n..=n).flat_map(move |y| {
                let lattice = lattice.clone();
                (-n..=n).filter_map(move |z| {
                    let v2 = [x, y, z];
                    if lattice.chi(&v2, &v2) != 0 {
                        return None;
                    }
                    let c = lattice.functional(&v2);
                    let g = gcd3(c);
                    if g != 1 {
                        return None;
                    }
                    lex_vectors(n)
                        .find(|v1| c[0] * v1[0] + c[1] * v1[1] + c[2] * v1[2] == 1)
                        .map(|v1| (v1, v2))
                })
            })
        })
        .collect();
    candidates.into_iter().min()
}

fn gcd3(c: Vec3) -> i64 {
    use num_integer::Integer;
    c[0].abs().gcd(&c[1].abs()).gcd(&c[2].abs())
}

/// Parity report over all null vectors of a twisted lattice in a box.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityReport {
    pub box_radius: i64,
    pub null_vector_count: u64,
    pub odd_y_count: u64,
    pub identity_violations: u64,
}

impl ParityReport {
    pub fn parity_ok(&self) -> bool {
        self.odd_y_count == 0 && self.identity_violations == 0
    }
}

/// Check, for every null vector v2 = x(2+2B) + y h + z p in the box, that the
/// h-coefficient y is even, and that y^2 = x(x+y) mod 2. A violation would
/// contradict the obstruction argument and is surfaced as an error.
pub fn parity_certificate(lattice: &EulerLattice, n: i64) -> Result<ParityReport, MukaiError> {
    let b = match lattice.kind {
        LatticeKind::Twisted(b) => b,
        LatticeKind::Untwisted => return Err(MukaiError::NotTwisted),
    };
    // The evenness argument requires both 2Bh and 2B^2 odd, i.e. the
    // half-half fractional class; other twists get a plain count.
    let strict = b.two_bh() % 2 != 0 && (b.four_bsq() / 2) % 2 != 0;
    let mut report = ParityReport {
        box_radius: n,
        null_vector_count: 0,
        odd_y_count: 0,
        identity_violations: 0,
    };
    let mut first_odd: Option<Vec3> = None;
    for v in lex_vectors(n) {
        if lattice.chi(&v, &v) != 0 {
            continue;
        }
        report.null_vector_count += 1;
        let [x, y, _] = v;
        if y.rem_euclid(2) != 0 {
            report.odd_y_count += 1;
            first_odd.get_or_insert(v);
        }
        if (y * y).rem_euclid(2) != (x * (x + y)).rem_euclid(2) {
            report.identity_violations += 1;
        }
    }
    if strict {
        if let Some(v) = first_odd {
            return Err(MukaiError::CounterexampleFound(v));
        }
        if report.identity_violations > 0 {
            return Err(MukaiError::CounterexampleFound([0, 0, 0]));
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShiftMode {
    /// B -> B + u for an integral class u with pairing numbers (u.h, u^2).
    Integral,
    /// B -> B + h/2.
    HalfH,
}

/// Fractional parts of Bh and B^2 after a lift change. Integral shifts move
/// both by integers; the half-h shift moves Bh by h^2/2 = 1 and B^2 by
/// Bh + 1/2, so {B^2} survives exactly when {Bh} = 1/2.
pub fn b_invariance(b: BData, u_h: i64, u_sq: i64, mode: ShiftMode) -> (Rational64, Rational64) {
    let (bh, bsq) = match mode {
        ShiftMode::Integral => (b.bh + Rational64::from_integer(u_h), b.bsq + Rational64::from_integer(u_sq)),
        ShiftMode::HalfH => (b.bh + Rational64::one(), b.bsq + b.bh + Rational64::new(1, 2)),
    };
    (frac(bh), frac(bsq))
}

fn frac(v: Rational64) -> Rational64 {
    let f = v - v.floor();
    debug_assert!(!f.is_negative() && f < Rational64::one());
    f
}

/// chi on P^2 of the split bundle O + 3O(-1) + 3O(-2) + O(-3): the even
/// Clifford sheaf of the quadric fibration, evaluated with
/// chi(O(t)) = (t+1)(t+2)/2. The answer 2 pins {B^2} = 1/2.
pub fn chi_b0() -> i64 {
    let chi_p2 = |t: i64| (t + 1) * (t + 2) / 2;
    let summands: [(i64, i64); 4] = [(0, 1), (-1, 3), (-2, 3), (-3, 1)];
    summands.iter().map(|&(t, mult)| mult * chi_p2(t)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: i64) -> Parity {
        if n.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Each simple Hecke transformation of a P^1-bundle over a curve flips the
/// parity of deg det of the underlying rank-2 bundle.
pub fn hecke_parity(start_deg: i64, flips: u32) -> Parity {
    Parity::of(start_deg + flips as i64)
}

/// A 2-cycle T = a*P + b*H^2 on a cubic fourfold with a plane P.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleClass {
    pub a: i64,
    pub b: i64,
}

/// delta(T) = T.H.H - T.P on the span of P and H^2: delta(P) = -2 and
/// delta(H^2) = 2, so delta(aP + bH^2) = -2a + 2b, always even on this span.
pub fn delta_parity(t: CycleClass) -> i64 {
    -2 * t.a + 2 * t.b
}

/// JSON report for the obstruction search.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchReport {
    pub lattice: EulerLattice,
    #[serde(rename = "box")]
    pub box_radius: i64,
    pub found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<(Vec3, Vec3)>,
    pub null_vector_count: u64,
    pub parity_ok: bool,
}

/// Run the search plus (for twisted lattices) the parity certificate.
pub fn search_report(lattice: &EulerLattice, n: i64) -> Result<SearchReport, MukaiError> {
    let pair = pair_search(lattice, n);
    let (null_count, parity_ok) = match lattice.kind {
        LatticeKind::Twisted(_) => {
            let rep = parity_certificate(lattice, n)?;
            (rep.null_vector_count, rep.parity_ok())
        }
        LatticeKind::Untwisted => {
            let count = lex_vectors(n).filter(|v| lattice.chi(v, v) == 0).count() as u64;
            (count, true)
        }
    };
    Ok(SearchReport {
        lattice: lattice.clone(),
        box_radius: n,
        found: pair.is_some(),
        pair,
        null_vector_count: null_count,
        parity_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn half() -> Rational64 {
        Rational64::new(1, 2)
    }

    #[test]
    fn gram_half_half() {
        let l = gram_twisted(BData::half_half());
        assert_eq!(l.gram, [[6, -1, 2], [-1, -2, 0], [2, 0, 0]]);
        assert!(l.is_symmetric());
    }

    #[test]
    fn gram_other_representative() {
        let l = gram_twisted(BData::new(half(), Rational64::new(3, 2)).unwrap());
        assert_eq!(l.gram, [[2, -1, 2], [-1, -2, 0], [2, 0, 0]]);
    }

    #[test]
    fn gram_rejects_thirds() {
        assert!(BData::new(Rational64::new(1, 3), half()).is_err());
    }

    #[test]
    fn only_possibly_odd_entry_is_minus_two_bh() {
        for bsq_num in -6..=6 {
            let b = BData::new(half(), Rational64::new(bsq_num, 2)).unwrap();
            let l = gram_twisted(b);
            for i in 0..3 {
                for j in 0..3 {
                    if (i, j) == (0, 1) || (i, j) == (1, 0) {
                        continue;
                    }
                    assert_eq!(l.gram[i][j] % 2, 0, "entry ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn untwisted_pairing_values() {
        let l = gram_untwisted();
        assert_eq!(l.chi(&[1, 0, 1], &[1, 0, 1]), 2);
        assert_eq!(l.chi(&[1, 0, 1], &[0, 0, 1]), 1);
        assert_eq!(l.chi(&[0, 0, 1], &[0, 0, 1]), 0);
    }

    #[test]
    fn twisted_search_empty_small_boxes() {
        let l = gram_twisted(BData::half_half());
        for n in 0..=6 {
            assert_eq!(pair_search(&l, n), None, "N={n}");
        }
    }

    #[test]
    fn untwisted_search_finds_pair_at_one() {
        let l = gram_untwisted();
        let (v1, v2) = pair_search(&l, 1).expect("pair exists at N=1");
        assert_eq!(l.chi(&v1, &v2), 1);
        assert_eq!(l.chi(&v2, &v2), 0);
        // the structure-sheaf / point pair is itself inside the unit box
        assert_eq!(l.chi(&[1, 0, 1], &[0, 0, 1]), 1);
        assert_eq!(l.chi(&[0, 0, 1], &[0, 0, 1]), 0);
        // box 0 sees nothing
        assert_eq!(pair_search(&l, 0), None);
    }

    #[test]
    fn shortcut_agrees_with_naive_on_small_boxes() {
        for n in 0..=3i64 {
            for lattice in [
                gram_untwisted(),
                gram_twisted(BData::half_half()),
                gram_twisted(BData::new(Rational64::zero(), Rational64::zero()).unwrap()),
                gram_twisted(BData::new(half(), Rational64::new(-1, 2)).unwrap()),
            ] {
                assert_eq!(
                    pair_search(&lattice, n),
                    pair_search_naive(&lattice, n),
                    "N={n} {:?}",
                    lattice.kind
                );
            }
        }
    }

    #[test]
    fn parity_certificate_half_half() {
        let l = gram_twisted(BData::half_half());
        let rep = parity_certificate(&l, 10).unwrap();
        assert!(rep.parity_ok());
        assert!(rep.null_vector_count > 0);
    }

    #[test]
    fn parity_certificate_rejects_untwisted() {
        assert_eq!(
            parity_certificate(&gram_untwisted(), 3),
            Err(MukaiError::NotTwisted)
        );
    }

    #[test]
    fn no_null_vectors_of_unit_x_shape() {
        // v2 = (1, 0, z) has chi(v2,v2) = 6 + 4z, never zero over Z
        let l = gram_twisted(BData::half_half());
        for z in -30..=30 {
            assert_eq!(l.chi(&[1, 0, z], &[1, 0, z]), 6 + 4 * z);
            assert_ne!(l.chi(&[1, 0, z], &[1, 0, z]), 0);
        }
        // while (0, 0, 1) is null with even y
        assert_eq!(l.chi(&[0, 0, 1], &[0, 0, 1]), 0);
    }

    #[test]
    fn b_invariance_examples() {
        let b = BData::half_half();
        assert_eq!(b_invariance(b, 3, 4, ShiftMode::Integral), (half(), half()));
        assert_eq!(b_invariance(b, 0, 0, ShiftMode::HalfH), (half(), half()));
        let b0 = BData::new(Rational64::zero(), Rational64::zero()).unwrap();
        let (fbh, _) = b_invariance(b0, 5, -7, ShiftMode::Integral);
        assert_eq!(fbh, Rational64::zero());
    }

    #[test]
    fn b_invariance_constant_over_grid() {
        let b = BData::half_half();
        for u_h in -10..=10 {
            for u_sq in -10..=10 {
                assert_eq!(
                    b_invariance(b, u_h, u_sq, ShiftMode::Integral),
                    (half(), half())
                );
            }
        }
    }

    #[test]
    fn chi_b0_is_two() {
        assert_eq!(chi_b0(), 2);
        // the middle twists are acyclic on P^2
        let chi_p2 = |t: i64| (t + 1) * (t + 2) / 2;
        assert_eq!(chi_p2(-1), 0);
        assert_eq!(chi_p2(-2), 0);
        assert_eq!(chi_p2(0) + chi_p2(-3), 2);
    }

    #[test]
    fn hecke_parity_flips() {
        assert_eq!(hecke_parity(0, 3), Parity::Odd);
        assert_eq!(hecke_parity(4, 0), Parity::Even);
        assert_eq!(hecke_parity(4, 2), Parity::Even);
        assert_eq!(hecke_parity(-3, 1), Parity::Even);
    }

    #[test]
    fn delta_values() {
        assert_eq!(delta_parity(CycleClass { a: 1, b: 0 }), -2);
        assert_eq!(delta_parity(CycleClass { a: 0, b: 1 }), 2);
        assert_eq!(delta_parity(CycleClass { a: 0, b: 0 }), 0);
        for a in -100..=100 {
            for b in -100..=100 {
                assert_eq!(delta_parity(CycleClass { a, b }) % 2, 0);
            }
        }
    }

    #[test]
    fn search_report_schema() {
        let rep = search_report(&gram_untwisted(), 1).unwrap();
        let v = serde_json::to_value(&rep).unwrap();
        assert_eq!(v["found"], serde_json::json!(true));
        assert!(v["box"].is_i64());
        assert!(v["null_vector_count"].is_u64());
    }
}
