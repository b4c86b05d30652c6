//! Coefficient rings for truncated q-series.
//!
//! Three rings are supported: the integers, the rationals, and the residue
//! ring Z/ℓ^B for a prime ℓ. Each ring is a small value type carrying
//! whatever context its arithmetic needs (the modulus for Z/ℓ^B), and the
//! series code is generic over the [`Ring`] trait.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Tag describing which coefficient ring a series lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingKind {
    ExactInteger,
    ExactRational,
    ModPrimePower { ell: u64, exp: u32 },
}

impl fmt::Display for RingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingKind::ExactInteger => write!(f, "Z"),
            RingKind::ExactRational => write!(f, "Q"),
            RingKind::ModPrimePower { ell, exp } => write!(f, "Z/{ell}^{exp}"),
        }
    }
}

/// A commutative ring with identity, as used for series coefficients.
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn kind(&self) -> RingKind;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Multiplicative inverse, when `a` is a unit.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// `a / b` when the quotient exists in the ring.
    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// Integer representative, if the element has one (canonical residue
    /// for Z/ℓ^B, the value itself for integral rationals).
    fn to_bigint(&self, a: &Self::Elem) -> Option<BigInt>;

    fn format(&self, a: &Self::Elem) -> String;

    /// First `len` coefficients of the product of two dense coefficient
    /// slices.
    fn convolve(&self, a: &[Self::Elem], b: &[Self::Elem], len: usize) -> Vec<Self::Elem> {
        let mut out = vec![self.zero(); len];
        for (i, x) in a.iter().enumerate().take(len) {
            if self.is_zero(x) {
                continue;
            }
            let upper = (len - i).min(b.len());
            for (j, y) in b[..upper].iter().enumerate() {
                if !self.is_zero(y) {
                    out[i + j] = self.add(&out[i + j], &self.mul(x, y));
                }
            }
        }
        out
    }

    /// `Σ a[i]·b[n-i]` over the overlap, used by decimated products.
    fn dot_rev(&self, a: &[Self::Elem], b: &[Self::Elem]) -> Self::Elem {
        let mut acc = self.zero();
        for (x, y) in a.iter().zip(b.iter().rev()) {
            if !self.is_zero(x) && !self.is_zero(y) {
                acc = self.add(&acc, &self.mul(x, y));
            }
        }
        acc
    }
}

/// The integers, with arbitrary precision.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn kind(&self) -> RingKind {
        RingKind::ExactInteger
    }
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn from_i64(&self, v: i64) -> BigInt {
        BigInt::from(v)
    }
    fn from_bigint(&self, v: &BigInt) -> BigInt {
        v.clone()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn inv(&self, a: &BigInt) -> Option<BigInt> {
        if a.abs().is_one() {
            Some(a.clone())
        } else {
            None
        }
    }
    fn div_exact(&self, a: &BigInt, b: &BigInt) -> Option<BigInt> {
        if b.is_zero() {
            return None;
        }
        let (q, r) = a.div_rem(b);
        r.is_zero().then_some(q)
    }
    fn to_bigint(&self, a: &BigInt) -> Option<BigInt> {
        Some(a.clone())
    }
    fn format(&self, a: &BigInt) -> String {
        a.to_string()
    }
    fn convolve(&self, a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); len];
        for (i, x) in a.iter().enumerate().take(len) {
            if x.is_zero() {
                continue;
            }
            let upper = (len - i).min(b.len());
            for (j, y) in b[..upper].iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        out
    }
}

/// The rationals, with arbitrary precision.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn kind(&self) -> RingKind {
        RingKind::ExactRational
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_bigint(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn to_bigint(&self, a: &BigRational) -> Option<BigInt> {
        a.is_integer().then(|| a.to_integer())
    }
    fn format(&self, a: &BigRational) -> String {
        a.to_string()
    }
}

/// The residue ring Z/ℓ^B with canonical representatives in `[0, ℓ^B)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModPrimePower {
    ell: u64,
    exp: u32,
    modulus: u64,
}

/// Largest modulus for which products fit in a `u64` before reduction;
/// below it, convolutions accumulate in `u128` without intermediate
/// reductions.
const LAZY_REDUCTION_LIMIT: u64 = 1 << 32;

impl ModPrimePower {
    /// Z/ℓ^B. Returns `None` when ℓ is not prime, B is zero, or ℓ^B does
    /// not fit in 63 bits.
    pub fn new(ell: u64, exp: u32) -> Option<Self> {
        if exp == 0 || !is_prime(ell) {
            return None;
        }
        let modulus = ell.checked_pow(exp)?;
        if modulus >= 1 << 63 {
            return None;
        }
        Some(ModPrimePower { ell, exp, modulus })
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }
    pub fn exp(&self) -> u32 {
        self.exp
    }
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Largest `e ≤ B` with ℓ^e dividing `a`.
    pub fn valuation(&self, a: u64) -> u32 {
        if a == 0 {
            return self.exp;
        }
        let mut v = 0;
        let mut x = a;
        while x % self.ell == 0 {
            x /= self.ell;
            v += 1;
        }
        v
    }

    #[inline]
    fn mulmod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }
}

impl Ring for ModPrimePower {
    type Elem = u64;

    fn kind(&self) -> RingKind {
        RingKind::ModPrimePower {
            ell: self.ell,
            exp: self.exp,
        }
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.modulus
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.modulus as i64) as u64
    }
    fn from_bigint(&self, v: &BigInt) -> u64 {
        v.mod_floor(&BigInt::from(self.modulus))
            .to_u64()
            .expect("residue fits in u64")
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.modulus - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.mulmod(*a, *b)
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if a % self.ell == 0 {
            return None;
        }
        let m = self.modulus as i128;
        let (mut old_r, mut r) = (*a as i128, m);
        let (mut old_s, mut s) = (1i128, 0i128);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_s, s) = (s, old_s - q * s);
        }
        Some(old_s.rem_euclid(m) as u64)
    }
    fn to_bigint(&self, a: &u64) -> Option<BigInt> {
        Some(BigInt::from(*a))
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }

    fn convolve(&self, a: &[u64], b: &[u64], len: usize) -> Vec<u64> {
        let m = self.modulus as u128;
        let mut out = vec![0u64; len];
        if self.modulus < LAZY_REDUCTION_LIMIT {
            // Products are below 2^64, so a u128 accumulator cannot overflow.
            for (n, slot) in out.iter_mut().enumerate() {
                let lo = n.saturating_sub(b.len().saturating_sub(1));
                let hi = n.min(a.len().saturating_sub(1));
                if a.is_empty() || b.is_empty() || lo > hi {
                    continue;
                }
                let mut acc: u128 = 0;
                for i in lo..=hi {
                    acc += a[i] as u128 * b[n - i] as u128;
                }
                *slot = (acc % m) as u64;
            }
        } else {
            for (n, slot) in out.iter_mut().enumerate() {
                let lo = n.saturating_sub(b.len().saturating_sub(1));
                let hi = n.min(a.len().saturating_sub(1));
                if a.is_empty() || b.is_empty() || lo > hi {
                    continue;
                }
                let mut acc: u128 = 0;
                for i in lo..=hi {
                    acc = (acc + a[i] as u128 * b[n - i] as u128) % m;
                }
                *slot = acc as u64;
            }
        }
        out
    }

    fn dot_rev(&self, a: &[u64], b: &[u64]) -> u64 {
        let m = self.modulus as u128;
        let mut acc: u128 = 0;
        if self.modulus < LAZY_REDUCTION_LIMIT {
            for (x, y) in a.iter().zip(b.iter().rev()) {
                acc += *x as u128 * *y as u128;
            }
        } else {
            for (x, y) in a.iter().zip(b.iter().rev()) {
                acc = (acc + *x as u128 * *y as u128) % m;
            }
        }
        (acc % m) as u64
    }
}

/// Trial-division primality test; the primes used here are tiny.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mod_ring_rejects_composites_and_zero_exponent() {
        assert!(ModPrimePower::new(4, 2).is_none());
        assert!(ModPrimePower::new(5, 0).is_none());
        assert_eq!(ModPrimePower::new(5, 3).unwrap().modulus(), 125);
    }

    #[test]
    fn least_positive_residues() {
        let r = ModPrimePower::new(5, 1).unwrap();
        assert_eq!(r.from_i64(-1), 4);
        let r = ModPrimePower::new(5, 2).unwrap();
        assert_eq!(r.from_i64(26), 1);
        assert_eq!(r.from_bigint(&BigInt::from(-625)), 0);
    }

    #[test]
    fn inverses_mod_prime_power() {
        let r = ModPrimePower::new(5, 4).unwrap();
        for a in 1..625u64 {
            match r.inv(&a) {
                Some(b) => assert_eq!(r.mul(&a, &b), 1),
                None => assert_eq!(a % 5, 0),
            }
        }
    }

    #[test]
    fn valuation_is_capped() {
        let r = ModPrimePower::new(5, 3).unwrap();
        assert_eq!(r.valuation(0), 3);
        assert_eq!(r.valuation(50), 2);
        assert_eq!(r.valuation(7), 0);
    }

    #[test]
    fn integer_exact_division() {
        let z = Integers;
        assert_eq!(z.div_exact(&BigInt::from(12), &BigInt::from(4)), Some(BigInt::from(3)));
        assert_eq!(z.div_exact(&BigInt::from(12), &BigInt::from(5)), None);
    }

    #[test]
    fn lazy_and_eager_convolution_agree() {
        let small = ModPrimePower::new(5, 5).unwrap();
        let big = ModPrimePower::new(5, 20).unwrap();
        let a: Vec<u64> = (0..30).map(|i| (i * 7919 + 3) % small.modulus()).collect();
        let b: Vec<u64> = (0..25).map(|i| (i * 104729 + 11) % small.modulus()).collect();
        let lazy = small.convolve(&a, &b, 40);
        let eager: Vec<u64> = big
            .convolve(&a, &b, 40)
            .into_iter()
            .map(|x| x % small.modulus())
            .collect();
        assert_eq!(lazy, eager);
    }
}
