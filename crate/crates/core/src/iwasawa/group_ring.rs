use std::fmt;

use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize};

use super::modpoly;
use crate::error::{Error, Result};
use crate::padic::{IntPolynomial, PrecisionInt, Zpk};

/// An element of `Z/p^k [(Z/p^n)^δ]`.
///
/// Coefficients are indexed by group elements `(g_1, …, g_δ)`, packed
/// little-endian in base `p^n`. The polynomial view sends the `i`-th
/// generator `γ_i` to `T_i + 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupRingElement {
    ring: Zpk,
    n: u32,
    delta: usize,
    coeffs: Vec<u64>,
}

impl GroupRingElement {
    pub fn zero(ring: Zpk, n: u32, delta: usize) -> Self {
        let size = (ring.p().pow(n) as usize).pow(delta as u32);
        GroupRingElement { ring, n, delta, coeffs: vec![0; size] }
    }

    /// The identity element `δ_1`.
    pub fn one(ring: Zpk, n: u32, delta: usize) -> Self {
        Self::basis(ring, n, delta, 0)
    }

    /// The group element with packed index `g`.
    pub fn basis(ring: Zpk, n: u32, delta: usize, g: usize) -> Self {
        let mut x = Self::zero(ring, n, delta);
        x.coeffs[g] = 1;
        x
    }

    pub fn from_coeffs(ring: Zpk, n: u32, delta: usize, coeffs: Vec<u64>) -> Result<Self> {
        let mut x = Self::zero(ring, n, delta);
        if coeffs.len() != x.coeffs.len() {
            return Err(Error::InvalidInput(format!("expected {} coefficients, got {}", x.coeffs.len(), coeffs.len())));
        }
        x.coeffs = coeffs.into_iter().map(|c| ring.reduce(c)).collect();
        Ok(x)
    }

    pub fn ring(&self) -> Zpk {
        self.ring
    }

    pub fn p(&self) -> u64 {
        self.ring.p()
    }

    pub fn layer(&self) -> u32 {
        self.n
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    /// `p^n`, the order of each cyclic factor.
    pub fn order(&self) -> usize {
        self.ring.p().pow(self.n) as usize
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, g: usize) -> PrecisionInt {
        self.ring.elt(self.coeffs[g])
    }

    pub fn set(&mut self, g: usize, c: u64) {
        self.coeffs[g] = self.ring.reduce(c);
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn digits(&self, g: usize) -> Vec<u64> {
        let n = self.order();
        let mut g = g;
        (0..self.delta)
            .map(|_| {
                let d = g % n;
                g /= n;
                d as u64
            })
            .collect()
    }

    pub fn index(&self, digits: &[u64]) -> usize {
        let n = self.order();
        digits.iter().rev().fold(0, |acc, &d| acc * n + d as usize % n)
    }

    fn same_shape(&self, o: &Self) -> Result<()> {
        if self.ring != o.ring || self.n != o.n || self.delta != o.delta {
            return Err(Error::InvalidInput(format!(
                "group ring mismatch: layer {} / delta {} vs layer {} / delta {}",
                self.n, self.delta, o.n, o.delta
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same_shape(o)?;
        let r = self.ring;
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(&a, &b)| r.add(a, b)).collect();
        Ok(GroupRingElement { coeffs, ..*self })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.same_shape(o)?;
        let r = self.ring;
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(&a, &b)| r.sub(a, b)).collect();
        Ok(GroupRingElement { coeffs, ..*self })
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|&a| self.ring.neg(a)).collect();
        GroupRingElement { coeffs, ..*self }
    }

    pub fn scale(&self, c: u64) -> Self {
        let coeffs = self.coeffs.iter().map(|&a| self.ring.mul(a, c)).collect();
        GroupRingElement { coeffs, ..*self }
    }

    /// Packed index of `x y`, or of `x y^{-1}` when `subtract` is set.
    fn combine(&self, x: usize, y: usize, subtract: bool) -> usize {
        let n = self.order();
        let (mut x, mut y) = (x, y);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.delta {
            let (a, b) = (x % n, y % n);
            let d = if subtract { (a + n - b) % n } else { (a + b) % n };
            out += d * place;
            place *= n;
            x /= n;
            y /= n;
        }
        out
    }

    /// Convolution product.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.same_shape(o)?;
        let r = self.ring;
        let support: Vec<(usize, u64)> = o.coeffs.iter().copied().enumerate().filter(|&(_, c)| c != 0).collect();
        let coeffs = (0..self.len())
            .into_par_iter()
            .map(|z| {
                support.iter().fold(0, |acc, &(y, b)| {
                    let a = self.coeffs[self.combine(z, y, true)];
                    if a == 0 {
                        acc
                    } else {
                        r.mul_add(acc, a, b)
                    }
                })
            })
            .collect();
        Ok(GroupRingElement { coeffs, ..*self })
    }

    /// Augmentation `Σ c(σ)`.
    pub fn aug(&self) -> PrecisionInt {
        self.ring.elt(self.coeffs.iter().fold(0, |acc, &c| self.ring.add(acc, c)))
    }

    /// Largest `c <= k` with every coefficient divisible by `p^c`.
    pub fn mu(&self) -> u32 {
        self.coeffs.iter().map(|&c| self.ring.valuation(c)).min().unwrap_or(self.ring.k())
    }

    /// `σ ↦ σ^{-1}`.
    pub fn star(&self) -> Self {
        let mut coeffs = vec![0; self.len()];
        for (g, &c) in self.coeffs.iter().enumerate() {
            coeffs[self.combine(0, g, true)] = c;
        }
        GroupRingElement { coeffs, ..*self }
    }

    /// Push-forward to layer `n - 1`: sums coefficients over fibers.
    pub fn project(&self) -> Result<Self> {
        if self.n == 0 {
            return Err(Error::InvalidInput("layer 0 has no projection".into()));
        }
        let mut out = Self::zero(self.ring, self.n - 1, self.delta);
        let small = out.order() as u64;
        for (g, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let d: Vec<u64> = self.digits(g).into_iter().map(|x| x % small).collect();
            let h = out.index(&d);
            out.coeffs[h] = self.ring.add(out.coeffs[h], c);
        }
        Ok(out)
    }

    /// Repeated [`Self::project`] down to layer `m`.
    pub fn project_to(&self, m: u32) -> Result<Self> {
        if m > self.n {
            return Err(Error::InvalidInput(format!("cannot project layer {} up to {m}", self.n)));
        }
        let mut x = self.clone();
        while x.n > m {
            x = x.project()?;
        }
        Ok(x)
    }

    /// Layer `n + 1` element with the same digit table (not a ring map).
    pub fn lift(&self) -> Self {
        let mut out = Self::zero(self.ring, self.n + 1, self.delta);
        for (g, &c) in self.coeffs.iter().enumerate() {
            let h = out.index(&self.digits(g));
            out.coeffs[h] = c;
        }
        out
    }

    /// `ξ`: layer `n + 1` element with `(ξ λ)(x) = λ(π x)`.
    pub fn xi(&self) -> Self {
        let mut out = Self::zero(self.ring, self.n + 1, self.delta);
        let small = self.order() as u64;
        for x in 0..out.len() {
            let d: Vec<u64> = out.digits(x).into_iter().map(|v| v % small).collect();
            out.coeffs[x] = self.coeffs[self.index(&d)];
        }
        out
    }

    /// Coefficients in the monomials `T^i`, `0 <= i < p^n` per variable,
    /// packed like the group-ring index.
    pub fn to_polynomial_view(&self) -> Vec<u64> {
        self.transform(1)
    }

    /// Inverse of [`Self::to_polynomial_view`].
    pub fn from_polynomial_view(ring: Zpk, n: u32, delta: usize, poly: &[u64]) -> Result<Self> {
        let x = Self::from_coeffs(ring, n, delta, poly.to_vec())?;
        let coeffs = x.transform(ring.neg(1));
        Ok(GroupRingElement { coeffs, ..x })
    }

    /// Taylor shift by `s` along every axis.
    fn transform(&self, s: u64) -> Vec<u64> {
        let n = self.order();
        let mut c = self.coeffs.clone();
        let mut stride = 1;
        for _ in 0..self.delta {
            let block = stride * n;
            for base in (0..c.len()).step_by(block) {
                for off in 0..stride {
                    let mut line: Vec<u64> = (0..n).map(|i| c[base + off + i * stride]).collect();
                    modpoly::taylor_shift(&self.ring, &mut line, s);
                    for (i, v) in line.into_iter().enumerate() {
                        c[base + off + i * stride] = v;
                    }
                }
            }
            stride = block;
        }
        c
    }

    /// A one-variable polynomial in `T = γ - 1`, evaluated in the group ring.
    pub fn from_polynomial(ring: Zpk, n: u32, poly: &IntPolynomial) -> Self {
        Self::from_mod_polynomial(ring, n, &poly.reduce(&ring, 0))
    }

    pub fn from_mod_polynomial(ring: Zpk, n: u32, poly: &[u64]) -> Self {
        let size = ring.p().pow(n) as usize;
        let omega = omega_monic(&ring, n);
        let mut reduced = modpoly::rem_monic(&ring, poly, &omega);
        reduced.resize(size, 0);
        Self::from_polynomial_view(ring, n, 1, &reduced).expect("size matches")
    }

    /// Index of the first polynomial-view coefficient of least valuation
    /// (one variable only); `None` for zero.
    pub fn lambda(&self) -> Result<Option<usize>> {
        if self.delta != 1 {
            return Err(Error::UnsupportedDelta(self.delta));
        }
        let view = self.to_polynomial_view();
        let mu = view.iter().map(|&c| self.ring.valuation(c)).min().unwrap_or(self.ring.k());
        if mu >= self.ring.k() {
            return Ok(None);
        }
        Ok(view.iter().position(|&c| self.ring.valuation(c) == mu))
    }

    /// Same element at a coarser precision `k' <= k`.
    pub fn truncate(&self, k: u32) -> Result<Self> {
        let ring = Zpk::new(self.p(), k)?;
        if k > self.ring.k() {
            return Err(Error::InvalidInput("cannot refine precision".into()));
        }
        let coeffs = self.coeffs.iter().map(|&c| ring.reduce(c)).collect();
        Ok(GroupRingElement { ring, coeffs, ..*self })
    }
}

/// `(T+1)^(p^n) - 1` reduced into `ring`.
pub(crate) fn omega_monic(ring: &Zpk, n: u32) -> Vec<u64> {
    crate::padic::omega_direct(ring.p(), n).reduce(ring, 0)
}

impl fmt::Debug for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupRingElement(p={}, k={}, n={}, delta={}, {:?})", self.p(), self.ring.k(), self.n, self.delta, self.coeffs)
    }
}

fn label_string(digits: &[u64]) -> String {
    let parts: Vec<String> = digits.iter().map(|d| d.to_string()).collect();
    format!("({})", parts.join(","))
}

impl Serialize for GroupRingElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Coeffs<'a>(&'a GroupRingElement);
        impl Serialize for Coeffs<'_> {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let nz = self.0.coeffs.iter().filter(|&&c| c != 0).count();
                let mut m = s.serialize_map(Some(nz))?;
                for (g, &c) in self.0.coeffs.iter().enumerate() {
                    if c != 0 {
                        m.serialize_entry(&label_string(&self.0.digits(g)), &c.to_string())?;
                    }
                }
                m.end()
            }
        }
        let mut m = s.serialize_map(Some(5))?;
        m.serialize_entry("p", &self.p())?;
        m.serialize_entry("k", &self.ring.k())?;
        m.serialize_entry("n", &self.n)?;
        m.serialize_entry("delta", &self.delta)?;
        m.serialize_entry("coeffs", &Coeffs(self))?;
        m.end()
    }
}

#[derive(Deserialize)]
struct Wire {
    p: u64,
    k: u32,
    n: u32,
    delta: usize,
    coeffs: std::collections::BTreeMap<String, String>,
}

impl<'de> Deserialize<'de> for GroupRingElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = Wire::deserialize(d)?;
        let ring = Zpk::new(w.p, w.k).map_err(D::Error::custom)?;
        if w.delta == 0 || (w.p.pow(w.n) as u128).pow(w.delta as u32) > 1 << 24 {
            return Err(D::Error::custom("group ring too large"));
        }
        let mut x = GroupRingElement::zero(ring, w.n, w.delta);
        for (label, value) in &w.coeffs {
            let inner = label
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| D::Error::custom(format!("bad label {label}")))?;
            let digits = inner
                .split(',')
                .map(|t| t.trim().parse::<u64>().map_err(D::Error::custom))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            if digits.len() != w.delta || digits.iter().any(|&g| g >= x.order() as u64) {
                return Err(D::Error::custom(format!("label {label} outside the group")));
            }
            let g = x.index(&digits);
            x.coeffs[g] = ring.reduce(value.parse::<u64>().map_err(D::Error::custom)?);
        }
        Ok(x)
    }
}
