use std::fmt;

use serde::{Deserialize, Serialize};

use super::ring::{PrecisionInt, Zpk};
use crate::error::{Error, Result};

/// An element of `(Z/p^k)[ζ]` with `ζ` a primitive `p^m`-th root of unity,
/// stored in the power basis `1, ζ, …, ζ^(e-1)` with `e = φ(p^m)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicValue {
    ring: Zpk,
    m: u32,
    coeffs: Vec<u64>,
}

fn euler_phi_p_power(p: u64, m: u32) -> usize {
    if m == 0 {
        1
    } else {
        ((p - 1) * p.pow(m - 1)) as usize
    }
}

impl CyclotomicValue {
    pub fn zero(ring: Zpk, m: u32) -> Self {
        CyclotomicValue { ring, m, coeffs: vec![0; euler_phi_p_power(ring.p(), m)] }
    }

    pub fn one(ring: Zpk, m: u32) -> Self {
        Self::zeta_pow(ring, m, 0)
    }

    pub fn from_scalar(ring: Zpk, m: u32, c: u64) -> Self {
        let mut v = Self::zero(ring, m);
        v.coeffs[0] = ring.reduce(c);
        v
    }

    /// `ζ^e` for any integer exponent.
    pub fn zeta_pow(ring: Zpk, m: u32, e: i64) -> Self {
        let order = ring.p().pow(m) as i64;
        let mut table = vec![0u64; order as usize];
        table[e.rem_euclid(order) as usize] = 1;
        Self::from_power_table(ring, m, &table)
    }

    /// Folds `Σ table[i] ζ^i` (indices mod `p^m`) into the power basis.
    pub fn from_power_table(ring: Zpk, m: u32, table: &[u64]) -> Self {
        let order = ring.p().pow(m) as usize;
        let mut full = vec![0u64; order];
        for (i, &c) in table.iter().enumerate() {
            let slot = &mut full[i % order];
            *slot = ring.add(*slot, ring.reduce(c));
        }
        Self::reduce_full(ring, m, full)
    }

    /// Reduces a coefficient list of any length modulo `Φ_{p^m}(X)`.
    fn reduce_full(ring: Zpk, m: u32, mut c: Vec<u64>) -> Self {
        let e = euler_phi_p_power(ring.p(), m);
        if m == 0 {
            let s = c.iter().fold(0, |acc, &x| ring.add(acc, x));
            return CyclotomicValue { ring, m, coeffs: vec![s] };
        }
        let step = ring.p().pow(m - 1) as usize;
        // X^e = -Σ_{b < p-1} X^(b·step) modulo Φ_{p^m}.
        for i in (e..c.len()).rev() {
            let x = std::mem::take(&mut c[i]);
            if x == 0 {
                continue;
            }
            for b in 0..(ring.p() as usize - 1) {
                let t = i - e + b * step;
                c[t] = ring.sub(c[t], x);
            }
        }
        c.resize(e, 0);
        CyclotomicValue { ring, m, coeffs: c }
    }

    pub fn from_coeffs(ring: Zpk, m: u32, coeffs: Vec<u64>) -> Result<Self> {
        if coeffs.len() != euler_phi_p_power(ring.p(), m) {
            return Err(Error::InvalidInput(format!(
                "expected {} coefficients for level {m}",
                euler_phi_p_power(ring.p(), m)
            )));
        }
        Ok(CyclotomicValue { ring, m, coeffs: coeffs.into_iter().map(|c| ring.reduce(c)).collect() })
    }

    pub fn ring(&self) -> Zpk {
        self.ring
    }

    pub fn level(&self) -> u32 {
        self.m
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coefficients(&self) -> Vec<PrecisionInt> {
        self.coeffs.iter().map(|&c| self.ring.elt(c)).collect()
    }

    /// Ramification index `e = φ(p^m)`, the denominator of [`Self::valuation`].
    pub fn ramification(&self) -> u32 {
        euler_phi_p_power(self.ring.p(), self.m) as u32
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn check(&self, other: &Self) {
        assert!(self.ring == other.ring && self.m == other.m, "mixed cyclotomic rings");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| self.ring.add(a, b)).collect();
        CyclotomicValue { coeffs, ..*self }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| self.ring.sub(a, b)).collect();
        CyclotomicValue { coeffs, ..*self }
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|&a| self.ring.neg(a)).collect();
        CyclotomicValue { coeffs, ..*self }
    }

    pub fn scale(&self, c: u64) -> Self {
        let coeffs = self.coeffs.iter().map(|&a| self.ring.mul(a, c)).collect();
        CyclotomicValue { coeffs, ..*self }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let r = self.ring;
        let mut full = vec![0u64; 2 * self.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                full[i + j] = r.mul_add(full[i + j], a, b);
            }
        }
        Self::reduce_full(r, self.m, full)
    }

    /// Coordinates in the basis `1, π, …, π^(e-1)` with `π = ζ - 1`.
    pub fn pi_adic_digits(&self) -> Vec<u64> {
        // Taylor shift X -> π + 1: d_i = Σ_j a_j C(j, i).
        let r = self.ring;
        let mut d = self.coeffs.clone();
        let n = d.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                d[j] = r.add(d[j], d[j + 1]);
            }
        }
        d
    }

    /// Valuation in units of `1/e`: `min_i (e·v(d_i) + i)` over the `π`-adic
    /// digits, capped at `e·k` for zero.
    pub fn valuation(&self) -> u32 {
        let e = self.ramification();
        let cap = e * self.ring.k();
        self.pi_adic_digits()
            .iter()
            .enumerate()
            .map(|(i, &d)| (e * self.ring.valuation(d) + i as u32).min(cap))
            .min()
            .unwrap_or(cap)
    }
}

impl fmt::Debug for CyclotomicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for CyclotomicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "] mod ({}^{}, Φ_{}^{})", self.ring.p(), self.ring.k(), self.ring.p(), self.m)
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    p: u64,
    k: u32,
    m: u32,
    coeffs: Vec<String>,
}

impl Serialize for CyclotomicValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Wire {
            p: self.ring.p(),
            k: self.ring.k(),
            m: self.m,
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CyclotomicValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = Wire::deserialize(d)?;
        let ring = Zpk::new(w.p, w.k).map_err(D::Error::custom)?;
        let coeffs = w
            .coeffs
            .iter()
            .map(|c| c.parse::<u64>().map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        CyclotomicValue::from_coeffs(ring, w.m, coeffs).map_err(D::Error::custom)
    }
}
