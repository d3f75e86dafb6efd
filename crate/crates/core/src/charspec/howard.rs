use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::iwasawa::GroupRingElement;

/// Labeled elements `λ_n` sharing one group ring, known modulo `p^j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HowardFamily {
    pub members: Vec<(String, GroupRingElement)>,
    pub j: u32,
}

impl HowardFamily {
    pub fn new(members: Vec<(String, GroupRingElement)>, j: u32) -> Result<Self> {
        let Some((_, first)) = members.first() else {
            return Err(Error::InvalidInput("a family needs at least one member".into()));
        };
        let shape = (first.ring(), first.layer(), first.delta());
        let mut labels = std::collections::HashSet::new();
        for (label, x) in &members {
            if !labels.insert(label.as_str()) {
                return Err(Error::InvalidInput(format!("duplicate label {label}")));
            }
            if (x.ring(), x.layer(), x.delta()) != shape {
                return Err(Error::InvalidInput(format!("member {label} lives in a different group ring")));
            }
        }
        if j == 0 || j > shape.0.k() {
            return Err(Error::InvalidInput(format!("precision j = {j} must lie in 1..={}", shape.0.k())));
        }
        if shape.1 == 0 {
            return Err(Error::InvalidInput("members must live at a layer n >= 1".into()));
        }
        Ok(HowardFamily { members, j })
    }
}

/// The height-one prime `Q` of the criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "prime", rename_all = "snake_case")]
pub enum HowardPrime {
    /// `(γ_1 - 1, …, γ_δ - 1)`: the image of `λ` is its augmentation.
    Augmentation,
    /// `(p)`: the image of `λ` modulo `p^k0` is nonzero iff `μ(λ) < k0`.
    Mu,
    /// `(g)` for a monic `g(T)` over `Z/p^k`, constant term first; one variable.
    Witness { generator: Vec<u64> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberVerdict {
    pub label: String,
    /// Least valuation of the image in `Λ/Q`, capped at `k`.
    pub valuation: u32,
    pub nontrivial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HowardReport {
    pub prime: HowardPrime,
    pub k0: u32,
    pub members: Vec<MemberVerdict>,
    /// First member with nontrivial image, if any.
    pub witness: Option<String>,
    pub passed: bool,
}

fn image_valuation(x: &GroupRingElement, prime: &HowardPrime) -> Result<u32> {
    let r = x.ring();
    Ok(match prime {
        HowardPrime::Augmentation => x.aug().valuation(),
        HowardPrime::Mu => x.mu(),
        HowardPrime::Witness { generator } => {
            if x.delta() != 1 {
                return Err(Error::UnsupportedDelta(x.delta()));
            }
            let g: Vec<u64> = generator.iter().map(|&c| r.reduce(c)).collect();
            if g.last() != Some(&1) {
                return Err(Error::InvalidInput("the witness generator must be monic".into()));
            }
            let rem = crate::iwasawa::rem_monic(&r, &x.to_polynomial_view(), &g);
            rem.iter().map(|&c| r.valuation(c)).min().unwrap_or(r.k())
        }
    })
}

/// Passes iff some member has nonzero image in `Λ/(Q, p^k0)`.
pub fn howard_check(family: &HowardFamily, prime: &HowardPrime, k0: u32) -> Result<HowardReport> {
    if k0 == 0 || k0 > family.j {
        return Err(Error::InvalidInput(format!("k0 = {k0} must lie in 1..={}", family.j)));
    }
    let members: Vec<MemberVerdict> = family
        .members
        .par_iter()
        .map(|(label, x)| {
            let valuation = image_valuation(x, prime)?;
            Ok(MemberVerdict { label: label.clone(), valuation, nontrivial: valuation < k0 })
        })
        .collect::<Result<_>>()?;
    let witness = members.iter().find(|m| m.nontrivial).map(|m| m.label.clone());
    Ok(HowardReport { prime: prime.clone(), k0, passed: witness.is_some(), members, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::Zpk;

    fn elt(r: Zpk, coeffs: &[u64]) -> GroupRingElement {
        GroupRingElement::from_coeffs(r, 1, 1, coeffs.to_vec()).unwrap()
    }

    #[test]
    fn examples() {
        let r = Zpk::new(3, 4).unwrap();
        let fam = HowardFamily::new(
            vec![("a".into(), elt(r, &[1, 2, 0])), ("b".into(), elt(r, &[1, 0, 0])), ("c".into(), elt(r, &[0, 0, 0]))],
            4,
        )
        .unwrap();
        let rep = howard_check(&fam, &HowardPrime::Augmentation, 1).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.witness.as_deref(), Some("b"));
        assert_eq!(rep.members[0].valuation, 1);

        let zeros = HowardFamily::new(vec![("z".into(), elt(r, &[0, 0, 0]))], 4).unwrap();
        assert!(!howard_check(&zeros, &HowardPrime::Augmentation, 1).unwrap().passed);
        assert!(!howard_check(&zeros, &HowardPrime::Mu, 4).unwrap().passed);

        let lam = elt(r, &[1, 5, 7]);
        let fam = HowardFamily::new(vec![("p".into(), lam.scale(3))], 4).unwrap();
        assert!(!howard_check(&fam, &HowardPrime::Mu, 1).unwrap().passed);
        assert!(howard_check(&fam, &HowardPrime::Mu, 2).unwrap().passed);
    }

    #[test]
    fn witness_prime() {
        let r = Zpk::new(3, 4).unwrap();
        // T + 3 divides (T + 3)(T + 1) = T^2 + 4T + 3 in layer 1.
        let multiple = GroupRingElement::from_mod_polynomial(r, 1, &[3, 4, 1]);
        let other = GroupRingElement::from_mod_polynomial(r, 1, &[1, 1]);
        let fam = HowardFamily::new(vec![("m".into(), multiple), ("o".into(), other)], 4).unwrap();
        let rep = howard_check(&fam, &HowardPrime::Witness { generator: vec![3, 1] }, 2).unwrap();
        assert!(!rep.members[0].nontrivial);
        assert!(rep.members[1].nontrivial);
        assert!(howard_check(&fam, &HowardPrime::Witness { generator: vec![3, 2] }, 2).is_err());
    }

    #[test]
    fn family_validation() {
        let r = Zpk::new(3, 4).unwrap();
        let a = elt(r, &[1, 0, 0]);
        assert!(HowardFamily::new(vec![("x".into(), a.clone()), ("x".into(), a.clone())], 4).is_err());
        let b = GroupRingElement::one(r, 2, 1);
        assert!(HowardFamily::new(vec![("x".into(), a.clone()), ("y".into(), b)], 4).is_err());
        let fam = HowardFamily::new(vec![("x".into(), a)], 2).unwrap();
        assert!(howard_check(&fam, &HowardPrime::Augmentation, 3).is_err());
    }
}
