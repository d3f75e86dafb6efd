use std::fmt;

use serde::{Deserialize, Serialize};

use super::{modpoly, GroupRingElement};
use crate::error::{Error, Result};
use crate::padic::{cyclotomic_sigma, IntPolynomial, ModMatrix, Zpk};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `sign((-1)^n)`.
    pub fn for_layer(n: u32) -> Sign {
        if n.is_multiple_of(2) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn opposite(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    fn takes(self, j: u32) -> bool {
        match self {
            Sign::Plus => j.is_multiple_of(2),
            Sign::Minus => j % 2 == 1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaKind {
    /// `Ω_n = T · Π_{j<=n} Φ_{p^j}(T+1)`.
    Omega,
    /// `Ω̃_n^ε`: product of `Φ_{p^j}(T+1)` over `1 <= j <= n` of parity `ε`
    /// (even `j` for `+`, odd `j` for `-`).
    Tilde(Sign),
    /// `Ω_n^ε = T · Ω̃_n^ε`.
    Signed(Sign),
}

/// A member of the Ω family, one polynomial per variable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaElement {
    pub p: u64,
    pub n: u32,
    pub kind: OmegaKind,
    pub polys: Vec<IntPolynomial>,
}

fn tilde(p: u64, n: u32, sign: Sign) -> Result<IntPolynomial> {
    let mut acc = IntPolynomial::one();
    for j in (1..=n).filter(|&j| sign.takes(j)) {
        acc = &acc * &cyclotomic_sigma(p, j)?;
    }
    Ok(acc)
}

/// One variable's polynomial for `kind`.
pub fn omega_polynomial(p: u64, n: u32, kind: OmegaKind) -> Result<IntPolynomial> {
    Ok(match kind {
        OmegaKind::Omega => {
            let mut acc = IntPolynomial::t();
            for j in 1..=n {
                acc = &acc * &cyclotomic_sigma(p, j)?;
            }
            acc
        }
        OmegaKind::Tilde(s) => tilde(p, n, s)?,
        OmegaKind::Signed(s) => &IntPolynomial::t() * &tilde(p, n, s)?,
    })
}

impl OmegaElement {
    pub fn new(p: u64, n: u32, kind: OmegaKind, delta: usize) -> Result<Self> {
        if delta == 0 {
            return Err(Error::InvalidInput("delta must be positive".into()));
        }
        if kind != OmegaKind::Omega && delta != 1 {
            return Err(Error::UnsupportedDelta(delta));
        }
        let poly = omega_polynomial(p, n, kind)?;
        Ok(OmegaElement { p, n, kind, polys: vec![poly; delta] })
    }

    /// The single polynomial of a one-variable family member.
    pub fn poly(&self) -> &IntPolynomial {
        &self.polys[0]
    }

    pub fn to_group_ring(&self, ring: Zpk, layer: u32) -> Result<GroupRingElement> {
        if self.polys.len() != 1 {
            return Err(Error::UnsupportedDelta(self.polys.len()));
        }
        Ok(GroupRingElement::from_polynomial(ring, layer, self.poly()))
    }
}

/// `Ω_n, Ω̃_n^±, Ω_n^±` for one layer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaFamily {
    pub omega: OmegaElement,
    pub tilde_plus: OmegaElement,
    pub tilde_minus: OmegaElement,
    pub plus: OmegaElement,
    pub minus: OmegaElement,
}

pub fn omega_family(p: u64, n: u32, delta: usize) -> Result<OmegaFamily> {
    if delta != 1 {
        return Err(Error::UnsupportedDelta(delta));
    }
    Ok(OmegaFamily {
        omega: OmegaElement::new(p, n, OmegaKind::Omega, 1)?,
        tilde_plus: OmegaElement::new(p, n, OmegaKind::Tilde(Sign::Plus), 1)?,
        tilde_minus: OmegaElement::new(p, n, OmegaKind::Tilde(Sign::Minus), 1)?,
        plus: OmegaElement::new(p, n, OmegaKind::Signed(Sign::Plus), 1)?,
        minus: OmegaElement::new(p, n, OmegaKind::Signed(Sign::Minus), 1)?,
    })
}

/// A class in `Λ/Ω_n^ε` (one variable), held by its representative of
/// degree `< deg Ω_n^ε`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OmegaClass {
    ring: Zpk,
    n: u32,
    sign: Sign,
    rep: Vec<u64>,
}

impl OmegaClass {
    /// Class of an arbitrary polynomial over `Z/p^k`.
    pub fn from_mod_polynomial(ring: Zpk, n: u32, sign: Sign, poly: &[u64]) -> Result<Self> {
        let m = omega_polynomial(ring.p(), n, OmegaKind::Signed(sign))?.reduce(&ring, 0);
        Ok(OmegaClass { ring, n, sign, rep: modpoly::rem_monic(&ring, poly, &m) })
    }

    /// Class of a group-ring element, through its polynomial view.
    pub fn from_group_ring(x: &GroupRingElement, n: u32, sign: Sign) -> Result<Self> {
        if x.delta() != 1 {
            return Err(Error::UnsupportedDelta(x.delta()));
        }
        Self::from_mod_polynomial(x.ring(), n, sign, &x.to_polynomial_view())
    }

    pub fn ring(&self) -> Zpk {
        self.ring
    }

    pub fn layer(&self) -> u32 {
        self.n
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// Canonical representative, constant term first, trailing zeros removed.
    pub fn representative(&self) -> &[u64] {
        &self.rep
    }

    pub fn ideal(&self) -> OmegaElement {
        OmegaElement::new(self.ring.p(), self.n, OmegaKind::Signed(self.sign), 1).expect("one variable")
    }

    /// The representative as an element of the layer-`layer` group ring.
    pub fn to_group_ring(&self, layer: u32) -> GroupRingElement {
        GroupRingElement::from_mod_polynomial(self.ring, layer, &self.rep)
    }

    pub fn scale(&self, c: u64) -> Self {
        let rep = modpoly::trim(self.rep.iter().map(|&x| self.ring.mul(x, c)).collect());
        OmegaClass { rep, ..*self }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.ring != o.ring || self.n != o.n || self.sign != o.sign {
            return Err(Error::InvalidInput("classes modulo different ideals".into()));
        }
        Self::from_mod_polynomial(self.ring, self.n, self.sign, &modpoly::mul(&self.ring, &self.rep, &o.rep))
    }

    /// Image in `Λ/Ω_m^ε` for `m <= n`; `Ω_m^ε` divides `Ω_n^ε`.
    pub fn reduce_to(&self, m: u32) -> Result<Self> {
        if m > self.n {
            return Err(Error::InvalidInput(format!("cannot reduce layer {} class to layer {m}", self.n)));
        }
        Self::from_mod_polynomial(self.ring, m, self.sign, &self.rep)
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_empty()
    }

    /// Least coefficient valuation of the canonical representative.
    pub fn mu(&self) -> u32 {
        self.rep.iter().map(|&c| self.ring.valuation(c)).min().unwrap_or(self.ring.k())
    }
}

impl fmt::Debug for OmegaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OmegaClass(n={}, {}, {:?})", self.n, self.sign, self.rep)
    }
}

#[derive(Serialize, Deserialize)]
struct ClassWire {
    p: u64,
    k: u32,
    n: u32,
    sign: Sign,
    rep: Vec<String>,
    ideal: IntPolynomial,
}

impl Serialize for OmegaClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ClassWire {
            p: self.ring.p(),
            k: self.ring.k(),
            n: self.n,
            sign: self.sign,
            rep: self.rep.iter().map(|c| c.to_string()).collect(),
            ideal: self.ideal().poly().clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for OmegaClass {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = ClassWire::deserialize(d)?;
        let ring = Zpk::new(w.p, w.k).map_err(D::Error::custom)?;
        let rep = w.rep.iter().map(|c| c.parse::<u64>().map_err(D::Error::custom)).collect::<std::result::Result<Vec<_>, _>>()?;
        OmegaClass::from_mod_polynomial(ring, w.n, w.sign, &rep).map_err(D::Error::custom)
    }
}

/// The unique `Θ ∈ Λ/Ω_n^ε` with `Ω̃_n^{-ε} Θ = λ` in the layer-`n` ring.
///
/// Requires `Ω_n^ε λ = 0`. The polynomial view of `λ` (degree `< p^n`) is
/// then an exact multiple of the monic `Ω̃_n^{-ε}`, and the quotient is the
/// canonical representative.
pub fn divide_omega_tilde(lambda: &GroupRingElement, sign: Sign) -> Result<OmegaClass> {
    if lambda.delta() != 1 {
        return Err(Error::UnsupportedDelta(lambda.delta()));
    }
    let ring = lambda.ring();
    let n = lambda.layer();
    let annihilator = OmegaElement::new(ring.p(), n, OmegaKind::Signed(sign), 1)?.to_group_ring(ring, n)?;
    if !annihilator.mul(lambda)?.is_zero() {
        return Err(Error::NotDivisible(format!("Ω_{n}^{sign} does not annihilate the element")));
    }
    let divisor = omega_polynomial(ring.p(), n, OmegaKind::Tilde(sign.opposite()))?.reduce(&ring, 0);
    let (q, r) = modpoly::divrem_monic(&ring, &lambda.to_polynomial_view(), &divisor);
    if !r.is_empty() {
        return Err(Error::NotDivisible(format!("remainder modulo Ω̃_{n}^{}", sign.opposite())));
    }
    OmegaClass::from_mod_polynomial(ring, n, sign, &q)
}

/// Matrix of `x ↦ Ω̃_n^{-ε} x` from `Λ/Ω_n^ε` (basis `T^i`, `i < deg Ω_n^ε`)
/// into the layer-`n` ring in the polynomial basis.
pub fn tilde_multiplication_matrix(ring: Zpk, n: u32, sign: Sign) -> Result<ModMatrix> {
    let size = ring.p().pow(n) as usize;
    let divisor = omega_polynomial(ring.p(), n, OmegaKind::Tilde(sign.opposite()))?.reduce(&ring, 0);
    let dim = omega_polynomial(ring.p(), n, OmegaKind::Signed(sign))?.degree().unwrap_or(0);
    let omega = super::group_ring::omega_monic(&ring, n);
    let columns: Vec<Vec<u64>> = (0..dim)
        .map(|i| {
            let mut shifted = vec![0u64; i];
            shifted.extend_from_slice(&divisor);
            let mut col = modpoly::rem_monic(&ring, &shifted, &omega);
            col.resize(size, 0);
            col
        })
        .collect();
    Ok(ModMatrix::from_columns(ring, size, &columns))
}

/// Whether multiplication by `Ω̃_n^{-ε}` is injective on `Λ/Ω_n^ε`.
pub fn tilde_multiplication_injective(ring: Zpk, n: u32, sign: Sign) -> Result<bool> {
    Ok(tilde_multiplication_matrix(ring, n, sign)?.smith().is_injective())
}

/// [`divide_omega_tilde`] through the Smith-form solver instead of long
/// division; used as an independent check.
pub fn divide_omega_tilde_linear(lambda: &GroupRingElement, sign: Sign) -> Result<OmegaClass> {
    if lambda.delta() != 1 {
        return Err(Error::UnsupportedDelta(lambda.delta()));
    }
    let ring = lambda.ring();
    let n = lambda.layer();
    let a = tilde_multiplication_matrix(ring, n, sign)?;
    let x = a
        .solve(&lambda.to_polynomial_view())
        .ok_or_else(|| Error::NotDivisible("linear system is inconsistent".into()))?;
    OmegaClass::from_mod_polynomial(ring, n, sign, &x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::omega_direct;
    use proptest::prelude::*;

    #[test]
    fn family_examples() {
        let f = omega_family(3, 1, 1).unwrap();
        assert_eq!(f.omega.poly(), &IntPolynomial::from_i64s(&[0, 3, 3, 1]));
        let f2 = omega_family(3, 2, 1).unwrap();
        assert_eq!(f2.tilde_plus.poly(), &cyclotomic_sigma(3, 2).unwrap());
        assert_eq!(f2.tilde_minus.poly(), &cyclotomic_sigma(3, 1).unwrap());
        assert_eq!(omega_family(3, 2, 2), Err(Error::UnsupportedDelta(2)));
        assert!(OmegaElement::new(3, 2, OmegaKind::Omega, 2).is_ok());
        let r = Zpk::new(3, 6).unwrap();
        for n in 0..=4 {
            assert!(OmegaElement::new(3, n, OmegaKind::Omega, 1).unwrap().to_group_ring(r, n).unwrap().is_zero());
        }
    }

    #[test]
    fn factorizations() {
        for p in [2u64, 3, 5] {
            for n in 0..=5u32 {
                if p == 5 && n > 4 {
                    continue;
                }
                let eps = Sign::for_layer(n);
                let omega = omega_polynomial(p, n, OmegaKind::Omega).unwrap();
                let split = &omega_polynomial(p, n, OmegaKind::Tilde(eps.opposite())).unwrap()
                    * &omega_polynomial(p, n, OmegaKind::Signed(eps)).unwrap();
                assert_eq!(split, omega);
                assert_eq!(omega, omega_direct(p, n));
            }
        }
    }

    #[test]
    fn divide_examples() {
        let r = Zpk::new(3, 6).unwrap();
        for n in 1..=4 {
            for eps in [Sign::Plus, Sign::Minus] {
                let tilde = OmegaElement::new(3, n, OmegaKind::Tilde(eps.opposite()), 1).unwrap();
                let lam = tilde.to_group_ring(r, n).unwrap();
                let q = divide_omega_tilde(&lam, eps).unwrap();
                assert_eq!(q.representative(), &[1]);
                let zero = divide_omega_tilde(&GroupRingElement::zero(r, n, 1), eps).unwrap();
                assert!(zero.is_zero());
                assert!(tilde_multiplication_injective(r, n, eps).unwrap());
            }
        }
        let one = GroupRingElement::one(r, 2, 1);
        assert!(matches!(divide_omega_tilde(&one, Sign::Plus), Err(Error::NotDivisible(_))));
    }

    proptest! {
        #[test]
        fn divide_roundtrip(n in 1u32..=4, k in 2u32..=6, plus in any::<bool>(), seed in prop::collection::vec(0u64..1 << 20, 81)) {
            let r = Zpk::new(3, k).unwrap();
            let eps = if plus { Sign::Plus } else { Sign::Minus };
            let dim = omega_polynomial(3, n, OmegaKind::Signed(eps)).unwrap().degree().unwrap();
            let theta0: Vec<u64> = seed[..dim].iter().map(|&c| r.reduce(c)).collect();
            let tilde = omega_polynomial(3, n, OmegaKind::Tilde(eps.opposite())).unwrap().reduce(&r, 0);
            let lam = GroupRingElement::from_mod_polynomial(r, n, &modpoly::mul(&r, &tilde, &theta0));
            let got = divide_omega_tilde(&lam, eps).unwrap();
            let want = OmegaClass::from_mod_polynomial(r, n, eps, &theta0).unwrap();
            prop_assert_eq!(&got, &want);
            prop_assert_eq!(divide_omega_tilde_linear(&lam, eps).unwrap(), want);
        }
    }
}
