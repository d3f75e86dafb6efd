use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::iwasawa::GroupRingElement;
use crate::padic::{CyclotomicValue, Zpk};

/// `ρ(γ_i) = ζ_{p^m}^{e_i}` on the generators of `Z_p^δ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteOrderCharacter {
    pub p: u64,
    pub m: u32,
    pub exponents: Vec<u64>,
}

impl FiniteOrderCharacter {
    pub fn new(p: u64, m: u32, exponents: Vec<u64>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::InvalidInput("a character needs at least one exponent".into()));
        }
        let order = p
            .checked_pow(m)
            .filter(|&o| o <= 1 << 40)
            .ok_or_else(|| Error::InvalidInput(format!("p^{m} is too large for a character table")))?;
        Ok(FiniteOrderCharacter { p, m, exponents: exponents.into_iter().map(|e| e % order).collect() })
    }

    pub fn trivial(p: u64, delta: usize) -> Self {
        FiniteOrderCharacter { p, m: 0, exponents: vec![0; delta] }
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.m)
    }

    pub fn delta(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// Some `e_i` is a unit, so `ρ` does not factor through `G_{p^(m-1)}`.
    pub fn is_primitive(&self) -> bool {
        self.m == 0 || self.exponents.iter().any(|&e| e % self.p != 0)
    }

    pub fn inverse(&self) -> Self {
        let order = self.order();
        let exponents = self.exponents.iter().map(|&e| (order - e) % order).collect();
        FiniteOrderCharacter { exponents, ..self.clone() }
    }

    /// Exponent of `ζ` at the group element with the given digits.
    pub fn exponent_at(&self, digits: &[u64]) -> u64 {
        let order = self.order() as u128;
        let s = self.exponents.iter().zip(digits).fold(0u128, |acc, (&e, &g)| (acc + e as u128 * g as u128) % order.max(1));
        s as u64
    }

    /// `ρ(g)` for a group element given by its digits.
    pub fn value_at(&self, ring: Zpk, digits: &[u64]) -> CyclotomicValue {
        CyclotomicValue::zeta_pow(ring, self.m, self.exponent_at(digits) as i64)
    }

    pub(crate) fn check_layer(&self, layer: u32, delta: usize, level: usize) -> Result<()> {
        if self.delta() != delta {
            return Err(Error::InvalidInput(format!("character has {} exponents, group has {delta} variables", self.delta())));
        }
        if self.m > layer {
            return Err(Error::ConductorTooLarge { conductor: self.m, layer: level });
        }
        Ok(())
    }
}

/// `ρ(λ) = Σ_σ c(σ) ρ(σ)` in `Z/p^k[ζ_{p^m}]`.
pub fn specialize(lambda: &GroupRingElement, rho: &FiniteOrderCharacter) -> Result<CyclotomicValue> {
    if rho.p != lambda.p() {
        return Err(Error::InvalidInput("character and group ring disagree on p".into()));
    }
    rho.check_layer(lambda.layer(), lambda.delta(), lambda.layer() as usize)?;
    let r = lambda.ring();
    let mut table = vec![0u64; rho.order() as usize];
    for (g, &c) in lambda.coeffs().iter().enumerate() {
        if c != 0 {
            let e = rho.exponent_at(&lambda.digits(g)) as usize;
            table[e] = r.add(table[e], c);
        }
    }
    Ok(CyclotomicValue::from_power_table(r, rho.m, &table))
}

/// Both sides of `ρ(λ*) = ρ^{-1}(λ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarReport {
    pub lhs: CyclotomicValue,
    pub rhs: CyclotomicValue,
    pub holds: bool,
}

pub fn star_identity_check(lambda: &GroupRingElement, rho: &FiniteOrderCharacter) -> Result<StarReport> {
    let lhs = specialize(&lambda.star(), rho)?;
    let rhs = specialize(lambda, &rho.inverse())?;
    let holds = lhs == rhs;
    Ok(StarReport { lhs, rhs, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random(r: Zpk, n: u32, delta: usize, seed: &[u64]) -> GroupRingElement {
        let size = (r.p().pow(n) as usize).pow(delta as u32);
        GroupRingElement::from_coeffs(r, n, delta, seed.iter().cycle().take(size).copied().collect()).unwrap()
    }

    #[test]
    fn examples() {
        let r = Zpk::new(3, 6).unwrap();
        let lam = random(r, 2, 1, &[5, 1, 700, 3]);
        let triv = FiniteOrderCharacter::trivial(3, 1);
        assert_eq!(specialize(&lam, &triv).unwrap(), CyclotomicValue::from_scalar(r, 0, lam.aug().residue()));
        let rho = FiniteOrderCharacter::new(3, 1, vec![1]).unwrap();
        let gamma = GroupRingElement::basis(r, 2, 1, 1);
        assert_eq!(specialize(&gamma, &rho).unwrap().coeffs(), &[0, 1]);
        let rep = star_identity_check(&gamma, &rho).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.lhs, CyclotomicValue::zeta_pow(r, 1, -1));
        let big = FiniteOrderCharacter::new(3, 3, vec![1]).unwrap();
        assert_eq!(specialize(&gamma, &big), Err(Error::ConductorTooLarge { conductor: 3, layer: 2 }));
        assert!(rho.is_primitive() && !FiniteOrderCharacter::new(3, 2, vec![3]).unwrap().is_primitive());
        assert!(rho.inverse().inverse() == rho && !rho.is_trivial());
    }

    #[test]
    fn homomorphism_on_samples() {
        let r = Zpk::new(3, 6).unwrap();
        let rho = FiniteOrderCharacter::new(3, 1, vec![2]).unwrap();
        for s in 0..100u64 {
            let a = random(r, 2, 1, &[s, s * 7 + 1, 3 * s + 2, 11]);
            let b = random(r, 2, 1, &[s * s + 5, 2, s + 9]);
            let lhs = specialize(&a.mul(&b).unwrap(), &rho).unwrap();
            let rhs = specialize(&a, &rho).unwrap().mul(&specialize(&b, &rho).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    proptest! {
        #[test]
        fn star_and_homomorphism(
            seed in prop::collection::vec(0u64..1 << 30, 1..30),
            seed2 in prop::collection::vec(0u64..1 << 30, 1..30),
            e in 0u64..27, f in 0u64..27, m in 0u32..=2, two in any::<bool>(),
        ) {
            let r = Zpk::new(3, 5).unwrap();
            let delta = if two { 2 } else { 1 };
            let exps = if two { vec![e, f] } else { vec![e] };
            let rho = FiniteOrderCharacter::new(3, m, exps).unwrap();
            let a = random(r, 2, delta, &seed);
            let b = random(r, 2, delta, &seed2);
            prop_assert!(star_identity_check(&a, &rho).unwrap().holds);
            let lhs = specialize(&a.mul(&b).unwrap(), &rho).unwrap();
            prop_assert_eq!(lhs, specialize(&a, &rho).unwrap().mul(&specialize(&b, &rho).unwrap()));
            let sum = specialize(&a.add(&b).unwrap(), &rho).unwrap();
            prop_assert_eq!(sum, specialize(&a, &rho).unwrap().add(&specialize(&b, &rho).unwrap()));
        }
    }
}
