use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest modulus we accept, so that products fit comfortably in `u128`.
const MAX_MODULUS: u64 = 1 << 62;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The residue ring `Z/p^k`, i.e. the scalar ring `O` truncated at
/// precision `k`.
///
/// Elements are plain `u64` residues in `[0, p^k)`. All of the heavy inner
/// loops (group-ring convolution, Hecke sums) run directly on residues
/// through this context; [`PrecisionInt`] is the self-describing wrapper used
/// at API boundaries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Zpk {
    p: u64,
    k: u32,
    modulus: u64,
}

impl Zpk {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::InvalidInput("precision k must be at least 1".into()));
        }
        let modulus = p
            .checked_pow(k)
            .filter(|&m| m <= MAX_MODULUS)
            .ok_or_else(|| Error::InvalidInput(format!("{p}^{k} exceeds the supported modulus")))?;
        Ok(Zpk { p, k, modulus })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `p^e` as a residue (zero once `e >= k`).
    pub fn p_pow(&self, e: u32) -> u64 {
        if e >= self.k {
            0
        } else {
            self.p.pow(e)
        }
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        x % self.modulus
    }

    #[inline]
    pub fn from_i128(&self, x: i128) -> u64 {
        x.rem_euclid(self.modulus as i128) as u64
    }

    pub fn from_i64(&self, x: i64) -> u64 {
        self.from_i128(x as i128)
    }

    pub fn from_bigint(&self, x: &BigInt) -> u64 {
        let m = BigInt::from(self.modulus);
        let mut r = x % &m;
        if r.is_negative() {
            r += &m;
        }
        r.to_u64().expect("residue fits in u64")
    }

    /// Symmetric lift into `(-p^k/2, p^k/2]`.
    pub fn centered(&self, x: u64) -> i128 {
        let x = x as i128;
        let m = self.modulus as i128;
        if x > m / 2 {
            x - m
        } else {
            x
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    /// `acc + a * b`.
    #[inline]
    pub fn mul_add(&self, acc: u64, a: u64, b: u64) -> u64 {
        ((acc as u128 + a as u128 * b as u128) % self.modulus as u128) as u64
    }

    pub fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.modulus;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Largest `c <= k` with `p^c | x`; zero reports `k`.
    pub fn valuation(&self, mut x: u64) -> u32 {
        if x == 0 {
            return self.k;
        }
        let mut v = 0;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            v += 1;
        }
        v
    }

    #[inline]
    pub fn is_unit(&self, x: u64) -> bool {
        !x.is_multiple_of(self.p)
    }

    pub fn inv(&self, x: u64) -> Option<u64> {
        if !self.is_unit(x) {
            return None;
        }
        let (mut r0, mut r1) = (self.modulus as i128, x as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        Some(self.from_i128(s0))
    }

    /// Splits a nonzero residue as `p^v * w` with `w` a unit.
    ///
    /// `w` is only meaningful modulo `p^(k - v)`; the returned representative
    /// is the exact integer quotient of the residue.
    pub fn split(&self, x: u64) -> (u32, u64) {
        let v = self.valuation(x);
        if v >= self.k {
            return (self.k, 0);
        }
        (v, x / self.p.pow(v))
    }

    pub fn elt(&self, x: u64) -> PrecisionInt {
        PrecisionInt { ring: *self, residue: self.reduce(x) }
    }

    pub fn elt_i64(&self, x: i64) -> PrecisionInt {
        PrecisionInt { ring: *self, residue: self.from_i64(x) }
    }
}

/// A residue modulo `p^k` carrying its own ring.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionInt {
    ring: Zpk,
    residue: u64,
}

impl PrecisionInt {
    pub fn new(p: u64, k: u32, value: i128) -> Result<Self> {
        let ring = Zpk::new(p, k)?;
        Ok(PrecisionInt { ring, residue: ring.from_i128(value) })
    }

    pub fn zero(ring: Zpk) -> Self {
        PrecisionInt { ring, residue: 0 }
    }

    pub fn one(ring: Zpk) -> Self {
        ring.elt(1)
    }

    #[inline]
    pub fn ring(&self) -> Zpk {
        self.ring
    }

    #[inline]
    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn p(&self) -> u64 {
        self.ring.p
    }

    pub fn k(&self) -> u32 {
        self.ring.k
    }

    pub fn is_zero(&self) -> bool {
        self.residue == 0
    }

    /// See [`Zpk::valuation`]: an exact zero reports `k`.
    pub fn valuation(&self) -> u32 {
        self.ring.valuation(self.residue)
    }

    pub fn is_unit(&self) -> bool {
        self.ring.is_unit(self.residue)
    }

    pub fn inverse(&self) -> Result<Self> {
        self.ring
            .inv(self.residue)
            .map(|r| PrecisionInt { ring: self.ring, residue: r })
            .ok_or(Error::NotUnit)
    }

    pub fn pow(&self, e: u64) -> Self {
        PrecisionInt { ring: self.ring, residue: self.ring.pow(self.residue, e) }
    }

    pub fn centered(&self) -> i128 {
        self.ring.centered(self.residue)
    }

    /// Reduction to a coarser precision `k' <= k`.
    pub fn truncate(&self, k: u32) -> Result<Self> {
        if k > self.ring.k {
            return Err(Error::InvalidInput(format!("cannot refine precision {} to {k}", self.ring.k)));
        }
        let ring = Zpk::new(self.ring.p, k)?;
        Ok(ring.elt(self.residue))
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.ring, other.ring, "mixed rings: Z/{}^{} vs Z/{}^{}", self.ring.p, self.ring.k, other.ring.p, other.ring.k);
    }
}

impl fmt::Debug for PrecisionInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.residue, self.ring.p, self.ring.k)
    }
}

impl fmt::Display for PrecisionInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

impl Add for PrecisionInt {
    type Output = PrecisionInt;
    fn add(self, rhs: Self) -> Self {
        self.check(&rhs);
        PrecisionInt { ring: self.ring, residue: self.ring.add(self.residue, rhs.residue) }
    }
}

impl Sub for PrecisionInt {
    type Output = PrecisionInt;
    fn sub(self, rhs: Self) -> Self {
        self.check(&rhs);
        PrecisionInt { ring: self.ring, residue: self.ring.sub(self.residue, rhs.residue) }
    }
}

impl Mul for PrecisionInt {
    type Output = PrecisionInt;
    fn mul(self, rhs: Self) -> Self {
        self.check(&rhs);
        PrecisionInt { ring: self.ring, residue: self.ring.mul(self.residue, rhs.residue) }
    }
}

impl Neg for PrecisionInt {
    type Output = PrecisionInt;
    fn neg(self) -> Self {
        PrecisionInt { ring: self.ring, residue: self.ring.neg(self.residue) }
    }
}

#[derive(Serialize, Deserialize)]
struct PrecisionIntRepr {
    p: u64,
    k: u32,
    residue: String,
}

impl Serialize for PrecisionInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PrecisionIntRepr { p: self.ring.p, k: self.ring.k, residue: self.residue.to_string() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PrecisionInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = PrecisionIntRepr::deserialize(d)?;
        let ring = Zpk::new(repr.p, repr.k).map_err(D::Error::custom)?;
        let residue: u64 = repr.residue.parse().map_err(D::Error::custom)?;
        if residue >= ring.modulus {
            return Err(D::Error::custom("residue out of range"));
        }
        Ok(PrecisionInt { ring, residue })
    }
}
