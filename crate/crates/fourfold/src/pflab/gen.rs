//! Seeded random generators for forms and matrices; every random object in
//! reports embeds its seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::scalar::{rat, FiniteField, Rat};

use super::linalg::{rank, Matrix};
use super::pfaffian::upper_triangle_coords;
use super::poly::HomogPoly;
use super::SkewForm;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_element<F: FiniteField>(r: &mut ChaCha8Rng) -> F {
    F::from_index(r.gen_range(0..F::ORDER))
}

/// Uniform skew form over a finite field.
pub fn random_skew<F: FiniteField>(r: &mut ChaCha8Rng) -> SkewForm<F> {
    let mut upper = Vec::with_capacity(15);
    for _ in 0..15 {
        upper.push(random_element::<F>(r));
    }
    SkewForm::from_upper_elems(&upper)
}

/// Skew form over Q with integer entries in [-9, 9].
pub fn random_skew_rat(r: &mut ChaCha8Rng) -> SkewForm<Rat> {
    let upper: Vec<Rat> = (0..15).map(|_| rat(r.gen_range(-9..=9))).collect();
    SkewForm::from_upper_elems(&upper)
}

/// Six linearly independent skew forms, resampling until the rank-6
/// condition holds.
pub fn random_skew_basis<F: FiniteField>(seed: u64) -> [SkewForm<F>; 6] {
    let mut r = rng(seed);
    loop {
        let basis: [SkewForm<F>; 6] = std::array::from_fn(|_| random_skew(&mut r));
        let coords: Matrix<F> = basis.iter().map(upper_triangle_coords).collect();
        if rank(&coords) == 6 {
            return basis;
        }
    }
}

/// Random invertible 6x6 matrix over a finite field.
pub fn random_invertible<F: FiniteField>(r: &mut ChaCha8Rng) -> Matrix<F> {
    loop {
        let m: Matrix<F> =
            (0..6).map(|_| (0..6).map(|_| random_element::<F>(r)).collect()).collect();
        if rank(&m) == 6 {
            return m;
        }
    }
}

/// Random invertible 6x6 over Q with entries in [-9, 9].
pub fn random_invertible_rat(r: &mut ChaCha8Rng) -> Matrix<Rat> {
    loop {
        let m: Matrix<Rat> =
            (0..6).map(|_| (0..6).map(|_| rat(r.gen_range(-9..=9))).collect()).collect();
        if rank(&m) == 6 {
            return m;
        }
    }
}

/// Dense-ish random homogeneous polynomial: uniform coefficient for every
/// monomial of the given degree. Resamples if it comes out zero.
pub fn random_homog<F: FiniteField>(nvars: usize, degree: u32, seed: u64) -> HomogPoly<F> {
    let mut r = rng(seed);
    loop {
        let mut p = HomogPoly::zero(nvars, degree);
        for m in monomials(nvars, degree) {
            p.add_term(m, random_element::<F>(&mut r));
        }
        if !p.is_zero() {
            return p;
        }
    }
}

/// All exponent vectors of the given arity and degree.
pub fn monomials(nvars: usize, degree: u32) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut current = vec![0u8; nvars];
    fn rec(slot: usize, left: u32, current: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if slot + 1 == current.len() {
            current[slot] = left as u8;
            out.push(current.clone());
            return;
        }
        for e in 0..=left {
            current[slot] = e as u8;
            rec(slot + 1, left - e, current, out);
        }
    }
    if nvars == 0 {
        return out;
    }
    rec(0, degree, &mut current, &mut out);
    out
}

/// Lift a skew form over a prime field into its quadratic extension.
pub fn lift_skew<const Q: u64>(
    m: &SkewForm<crate::scalar::Fp<Q>>,
) -> SkewForm<crate::scalar::Fp2<Q>> {
    let entries = m
        .entries
        .iter()
        .map(|row| row.iter().map(|&x| crate::scalar::Fp2::from_base(x)).collect())
        .collect();
    SkewForm { entries }
}

/// Lift a whole basis.
pub fn lift_skew_basis<const Q: u64>(
    basis: &[SkewForm<crate::scalar::Fp<Q>>; 6],
) -> [SkewForm<crate::scalar::Fp2<Q>>; 6] {
    std::array::from_fn(|i| lift_skew(&basis[i]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::F7;
    use num_traits::Zero;

    #[test]
    fn monomial_counts() {
        // C(d + n - 1, n - 1) monomials of degree d in n variables
        assert_eq!(monomials(6, 3).len(), 56);
        assert_eq!(monomials(5, 2).len(), 15);
        assert_eq!(monomials(5, 3).len(), 35);
    }

    #[test]
    fn seeded_generation_is_deterministic() {
        let a = random_skew_basis::<F7>(42);
        let b = random_skew_basis::<F7>(42);
        assert_eq!(a, b);
        let c = random_skew_basis::<F7>(43);
        assert_ne!(a, c);
    }

    #[test]
    fn random_skew_is_skew() {
        let mut r = rng(7);
        for _ in 0..10 {
            let m = random_skew::<F7>(&mut r);
            for i in 0..6 {
                assert!(m.entries[i][i].is_zero());
                for j in 0..6 {
                    assert_eq!(m.entries[i][j], -m.entries[j][i]);
                }
            }
        }
    }
}
