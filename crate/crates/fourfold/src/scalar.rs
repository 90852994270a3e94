//! Scalar types for exact arithmetic: the rationals and small finite fields.
//!
//! Everything downstream (Pfaffians, polynomial evaluation, Gaussian
//! elimination, point enumeration) is generic over [`Field`], so the same
//! code runs over `Q` and over `F_q`/`F_{q^2}`. Prime fields use a const
//! modulus; quadratic extensions pick an irreducible `x^2 - a x - b` at
//! compile time.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact rational scalar.
pub type Rat = BigRational;

/// Commutative ring element with exact equality.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Add<Output = Self>
    + Mul<Output = Self>
{
}

impl<T> Scalar for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + fmt::Display
        + Zero
        + One
        + Neg<Output = Self>
        + Sub<Output = Self>
        + Add<Output = Self>
        + Mul<Output = Self>
{
}

/// Field: scalars with exact inverses.
pub trait Field: Scalar {
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.clone() * i)
    }
}

impl Field for Rat {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::one() / self.clone())
        }
    }
}

/// Finite field with canonical element indexing, usable for exhaustive
/// enumeration and seeded sampling.
pub trait FiniteField: Field + Copy + Eq + Hash + Ord + Send + Sync + 'static {
    /// Number of elements q^k.
    const ORDER: u64;
    /// Characteristic q.
    const CHAR: u64;
    /// Extension degree k over the prime field.
    const EXT_DEGREE: u32;

    /// Bijection `0..ORDER -> field`, with 0 -> zero and 1 -> one.
    fn from_index(i: u64) -> Self;
    fn to_index(&self) -> u64;

    fn elements() -> FieldElements<Self> {
        FieldElements { next: 0, _marker: std::marker::PhantomData }
    }
}

pub struct FieldElements<F> {
    next: u64,
    _marker: std::marker::PhantomData<F>,
}

impl<F: FiniteField> Iterator for FieldElements<F> {
    type Item = F;
    fn next(&mut self) -> Option<F> {
        if self.next >= F::ORDER {
            return None;
        }
        let e = F::from_index(self.next);
        self.next += 1;
        Some(e)
    }
}

/// Prime field `F_Q` for a const prime modulus.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp<const Q: u64>(u64);

impl<const Q: u64> Fp<Q> {
    pub const fn new(v: u64) -> Self {
        Fp(v % Q)
    }

    pub fn from_i64(v: i64) -> Self {
        let q = Q as i64;
        Fp(v.rem_euclid(q) as u64)
    }

    pub const fn value(&self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp::<Q>(1 % Q);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl<const Q: u64> From<i64> for Fp<Q> {
    fn from(v: i64) -> Self {
        Fp::from_i64(v)
    }
}

impl<const Q: u64> fmt::Debug for Fp<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const Q: u64> fmt::Display for Fp<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl<const Q: u64> Add for Fp<Q> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Fp((self.0 + rhs.0) % Q)
    }
}

impl<const Q: u64> Sub for Fp<Q> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp((self.0 + Q - rhs.0) % Q)
    }
}

impl<const Q: u64> Mul for Fp<Q> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 * rhs.0 as u128) % Q as u128) as u64)
    }
}

impl<const Q: u64> Neg for Fp<Q> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp((Q - self.0) % Q)
    }
}

impl<const Q: u64> Zero for Fp<Q> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const Q: u64> One for Fp<Q> {
    fn one() -> Self {
        Fp(1 % Q)
    }
}

impl<const Q: u64> Field for Fp<Q> {
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            // Q is prime, so a^(Q-2) inverts a.
            Some(self.pow(Q - 2))
        }
    }
}

impl<const Q: u64> FiniteField for Fp<Q> {
    const ORDER: u64 = Q;
    const CHAR: u64 = Q;
    const EXT_DEGREE: u32 = 1;

    fn from_index(i: u64) -> Self {
        Fp(i % Q)
    }
    fn to_index(&self) -> u64 {
        self.0
    }
}

/// Pick `(a, b)` with `x^2 - a x - b` irreducible over `F_q`, by brute force.
const fn irreducible_quadratic(q: u64) -> (u64, u64) {
    let mut a = 0;
    while a < q {
        let mut b = 0;
        while b < q {
            // irreducible iff t^2 - a t - b has no root t in F_q
            let mut has_root = false;
            let mut t = 0;
            while t < q {
                // t^2 - a t - b mod q
                let t2 = (t as u128 * t as u128) % q as u128;
                let at = (a as u128 * t as u128) % q as u128;
                let val = (t2 + (q as u128 - at) + (q as u128 - b as u128)) % q as u128;
                if val == 0 {
                    has_root = true;
                    break;
                }
                t += 1;
            }
            if !has_root {
                return (a, b);
            }
            b += 1;
        }
        a += 1;
    }
    // unreachable for prime q: quadratic extensions always exist
    (0, 0)
}

/// Quadratic extension `F_{Q^2} = F_Q[x] / (x^2 - A x - B)` with `(A, B)`
/// chosen at compile time. Elements are `c0 + c1 x`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp2<const Q: u64> {
    c0: Fp<Q>,
    c1: Fp<Q>,
}

impl<const Q: u64> Fp2<Q> {
    const IRRED: (u64, u64) = irreducible_quadratic(Q);

    pub fn new(c0: Fp<Q>, c1: Fp<Q>) -> Self {
        Fp2 { c0, c1 }
    }

    pub fn from_base(c0: Fp<Q>) -> Self {
        Fp2 { c0, c1: Fp::new(0) }
    }

    fn irred_a() -> Fp<Q> {
        Fp::new(Self::IRRED.0)
    }
    fn irred_b() -> Fp<Q> {
        Fp::new(Self::IRRED.1)
    }

    pub fn c0(&self) -> Fp<Q> {
        self.c0
    }
    pub fn c1(&self) -> Fp<Q> {
        self.c1
    }
}

impl<const Q: u64> fmt::Debug for Fp2<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c1.is_zero() {
            write!(f, "{}", self.c0)
        } else {
            write!(f, "{}+{}x", self.c0, self.c1)
        }
    }
}

impl<const Q: u64> fmt::Display for Fp2<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl<const Q: u64> Add for Fp2<Q> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Fp2 { c0: self.c0 + rhs.c0, c1: self.c1 + rhs.c1 }
    }
}

impl<const Q: u64> Sub for Fp2<Q> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp2 { c0: self.c0 - rhs.c0, c1: self.c1 - rhs.c1 }
    }
}

impl<const Q: u64> Mul for Fp2<Q> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        // (c0 + c1 x)(d0 + d1 x) with x^2 = a x + b
        let cross = self.c0 * rhs.c1 + self.c1 * rhs.c0;
        let sq = self.c1 * rhs.c1;
        Fp2 {
            c0: self.c0 * rhs.c0 + sq * Self::irred_b(),
            c1: cross + sq * Self::irred_a(),
        }
    }
}

impl<const Q: u64> Neg for Fp2<Q> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp2 { c0: -self.c0, c1: -self.c1 }
    }
}

impl<const Q: u64> Zero for Fp2<Q> {
    fn zero() -> Self {
        Fp2 { c0: Fp::new(0), c1: Fp::new(0) }
    }
    fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }
}

impl<const Q: u64> One for Fp2<Q> {
    fn one() -> Self {
        Fp2 { c0: Fp::new(1), c1: Fp::new(0) }
    }
}

impl<const Q: u64> Field for Fp2<Q> {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // Norm against the conjugate root x' = a - x:
        // N(c0 + c1 x) = c0^2 + a c0 c1 - b c1^2, a nonzero base-field element.
        let a = Self::irred_a();
        let b = Self::irred_b();
        let n = self.c0 * self.c0 + a * self.c0 * self.c1 - b * self.c1 * self.c1;
        let ninv = n.inv()?;
        // conjugate = (c0 + a c1) - c1 x
        Some(Fp2 { c0: (self.c0 + a * self.c1) * ninv, c1: -self.c1 * ninv })
    }
}

impl<const Q: u64> FiniteField for Fp2<Q> {
    const ORDER: u64 = Q * Q;
    const CHAR: u64 = Q;
    const EXT_DEGREE: u32 = 2;

    fn from_index(i: u64) -> Self {
        let i = i % Self::ORDER;
        Fp2 { c0: Fp::new(i % Q), c1: Fp::new(i / Q) }
    }
    fn to_index(&self) -> u64 {
        self.c0.value() + Q * self.c1.value()
    }
}

pub type F2 = Fp<2>;
pub type F3 = Fp<3>;
pub type F5 = Fp<5>;
pub type F7 = Fp<7>;
pub type F11 = Fp<11>;
pub type F13 = Fp<13>;
pub type F4 = Fp2<2>;
pub type F9 = Fp2<3>;
pub type F25 = Fp2<5>;
pub type F49 = Fp2<7>;

/// Rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverses() {
        for i in 1..7u64 {
            let x = F7::new(i);
            assert_eq!(x * x.inv().unwrap(), F7::one());
        }
        assert!(F7::new(0).inv().is_none());
    }

    #[test]
    fn extension_field_is_a_field() {
        // every nonzero element of F_49 and F_4 inverts
        for i in 1..49 {
            let x = F49::from_index(i);
            assert_eq!(x * x.inv().unwrap(), F49::one());
        }
        for i in 1..4 {
            let x = F4::from_index(i);
            assert_eq!(x * x.inv().unwrap(), F4::one());
        }
    }

    #[test]
    fn extension_multiplicative_group_order() {
        // x^(q^2 - 1) = 1 for all nonzero x
        let x49 = F49::from_index(8);
        let mut acc49 = F49::one();
        for _ in 0..48 {
            acc49 = acc49 * x49;
        }
        assert_eq!(acc49, F49::one());
        let x4 = F4::from_index(2);
        let mut acc4 = F4::one();
        for _ in 0..3 {
            acc4 = acc4 * x4;
        }
        assert_eq!(acc4, F4::one());
    }

    #[test]
    fn index_roundtrip() {
        for i in 0..49 {
            assert_eq!(F49::from_index(i).to_index(), i);
        }
        assert_eq!(F7::elements().count(), 7);
        assert_eq!(F49::elements().count(), 49);
    }

    #[test]
    fn rational_field_ops() {
        let x = rat(3) / rat(2);
        assert_eq!(x.inv().unwrap(), rat(2) / rat(3));
        assert!(Rat::zero().inv().is_none());
    }
}
