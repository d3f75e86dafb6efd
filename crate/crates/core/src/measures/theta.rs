use serde::{Deserialize, Serialize};

use super::{CompatibleSystem, Mode};
use crate::error::{Error, Result};
use crate::iwasawa::{divide_omega_tilde, GroupRingElement, OmegaClass, OmegaElement, OmegaKind, Sign};
use crate::padic::PrecisionInt;

/// `ϑ_j` pushed to the free quotient, possibly normalized.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaElement {
    /// Level `j` of the tower; `value` lives in layer `m(j)`.
    pub level: usize,
    pub value: GroupRingElement,
    /// The factor `α_p^{-normalization}` is already applied to `value`.
    pub normalization: u32,
}

/// `Σ_t c_n(t) t`, summed over torsion cosets into `Z/p^k[(Z/p^m(n))^δ]`.
pub fn theta_level(sys: &CompatibleSystem, n: usize) -> Result<ThetaElement> {
    let table = sys.require_level(n)?;
    let layout = sys.layout();
    let r = sys.ring();
    let mut value = GroupRingElement::zero(r, layout.free_exponent(n), layout.delta);
    let mut coeffs = vec![0u64; value.len()];
    for (label, &c) in table.iter().enumerate() {
        let g = layout.free_part(n, label);
        coeffs[g] = r.add(coeffs[g], c);
    }
    value = GroupRingElement::from_coeffs(r, value.layer(), value.delta(), coeffs)?;
    Ok(ThetaElement { level: n, value, normalization: 0 })
}

fn unit_alpha(sys: &CompatibleSystem) -> Result<PrecisionInt> {
    if sys.mode() != Mode::Edge {
        return Err(Error::NotOrdinary("vertex towers carry no U_p eigenvalue".into()));
    }
    let alpha = sys.eigen().require_alpha_p()?;
    if !alpha.is_unit() {
        return Err(Error::NotOrdinary(format!("alpha_p = {alpha} is not a p-adic unit")));
    }
    Ok(alpha)
}

fn normalized(sys: &CompatibleSystem, n: usize, alpha: PrecisionInt) -> Result<ThetaElement> {
    let raw = theta_level(sys, n)?;
    let scale = alpha.inverse()?.pow(n as u64).residue();
    Ok(ThetaElement { value: raw.value.scale(scale), normalization: n as u32, ..raw })
}

/// `θ_n = α_p^{-n} ϑ_n`, checked against `θ_{n-1}` under projection
/// whenever the free layers of the two levels differ by one.
pub fn theta_ordinary(sys: &CompatibleSystem, n: usize) -> Result<ThetaElement> {
    let alpha = unit_alpha(sys)?;
    let theta = normalized(sys, n, alpha)?;
    let layout = sys.layout();
    if n > sys.first_level() && layout.free_exponent(n) == layout.free_exponent(n - 1) + 1 {
        let below = normalized(sys, n - 1, alpha)?;
        if theta.value.project()? != below.value {
            return Err(Error::CompatibilityViolation { layer: n });
        }
    }
    Ok(theta)
}

/// The signed class `ϑ_n^ε ∈ Λ/Ω_n^ε` at free layer `n`, `ε = sign((-1)^n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedTheta {
    pub layer: u32,
    pub sign: Sign,
    pub class: OmegaClass,
}

/// `(-1)^{n/2}` for even `n`, `(-1)^{(n+1)/2}` for odd `n`.
pub fn sign_factor(n: u32) -> i64 {
    let e = n.div_ceil(2);
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

fn supersingular_theta(sys: &CompatibleSystem, n: u32) -> Result<GroupRingElement> {
    if sys.mode() != Mode::Vertex || !sys.eigen().is_supersingular() {
        return Err(Error::NotSupersingular("the ± theory needs a vertex tower with a_p = 0".into()));
    }
    let layout = sys.layout();
    if layout.delta != 1 {
        return Err(Error::UnsupportedDelta(layout.delta));
    }
    Ok(theta_level(sys, layout.level_for_free_layer(n))?.value)
}

fn extract(sys: &CompatibleSystem, n: u32) -> Result<SignedTheta> {
    let theta = supersingular_theta(sys, n)?;
    let sign = Sign::for_layer(n);
    let annihilator = OmegaElement::new(sys.p(), n, OmegaKind::Signed(sign), 1)?.to_group_ring(sys.ring(), n)?;
    if !annihilator.mul(&theta)?.is_zero() {
        return Err(Error::NotSupersingular(format!("Ω_{n}^{sign} does not annihilate ϑ_{n}")));
    }
    let class = divide_omega_tilde(&theta, sign)?;
    let r = sys.ring();
    let class = class.scale(r.from_i64(sign_factor(n)));
    Ok(SignedTheta { layer: n, sign, class })
}

/// `ϑ_n^ε`: checks `Ω_n^ε ϑ_n = 0`, divides by `Ω̃_n^{-ε}`, applies the sign,
/// and compares with `ϑ_{n-2}^ε` modulo `Ω_{n-2}^ε` when `n >= 2`.
pub fn pm_extract(sys: &CompatibleSystem, n: u32) -> Result<SignedTheta> {
    let top = extract(sys, n)?;
    if n >= 2 {
        let below = extract(sys, n - 2)?;
        if top.class.reduce_to(n - 2)? != below.class {
            return Err(Error::CompatibilityViolation { layer: n as usize });
        }
    }
    Ok(top)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LKind {
    Ordinary,
    Plus,
    Minus,
}

impl LKind {
    fn sign(self) -> Option<Sign> {
        match self {
            LKind::Ordinary => None,
            LKind::Plus => Some(Sign::Plus),
            LKind::Minus => Some(Sign::Minus),
        }
    }
}

/// `factor · star(factor)` at one layer. For the signed kinds `value` is the
/// canonical representative of a class modulo `Ω_layer^ε`, recorded in
/// `class`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicLFunction {
    pub kind: LKind,
    /// Free layer of `value`.
    pub layer: u32,
    pub value: GroupRingElement,
    pub factor: GroupRingElement,
    pub class: Option<OmegaClass>,
}

impl PadicLFunction {
    pub fn mu_invariant(&self) -> u32 {
        match &self.class {
            Some(c) => c.mu(),
            None => self.value.mu(),
        }
    }

    /// Whether replacing the factor by `g · factor` leaves the value fixed.
    pub fn translation_invariant(&self, g: usize) -> Result<bool> {
        let f = &self.factor;
        let moved = GroupRingElement::basis(f.ring(), f.layer(), f.delta(), g).mul(f)?;
        let value = moved.mul(&moved.star())?;
        Ok(match (&self.class, self.kind.sign()) {
            (Some(c), Some(sign)) => &OmegaClass::from_group_ring(&value, self.layer, sign)? == c,
            _ => value == self.value,
        })
    }
}

/// `L_p = θ θ*` at level `n` for [`LKind::Ordinary`]; `ϑ^ε (ϑ^ε)*` at free
/// layer `n` for the signed kinds, where `n` must have parity `ε`.
pub fn lp(sys: &CompatibleSystem, n: usize, kind: LKind) -> Result<PadicLFunction> {
    let out = match kind.sign() {
        None => {
            let theta = theta_ordinary(sys, n)?;
            let value = theta.value.mul(&theta.value.star())?;
            PadicLFunction { kind, layer: value.layer(), value, factor: theta.value, class: None }
        }
        Some(sign) => {
            let n = n as u32;
            if Sign::for_layer(n) != sign {
                return Err(Error::InvalidInput(format!("the {sign} part lives at layers of the other parity than {n}")));
            }
            let signed = pm_extract(sys, n)?;
            let factor = signed.class.to_group_ring(n);
            let class = OmegaClass::from_group_ring(&factor.mul(&factor.star())?, n, sign)?;
            let value = class.to_group_ring(n);
            PadicLFunction { kind, layer: n, value, factor, class: Some(class) }
        }
    };
    let g = if out.value.len() > 1 { 1 } else { 0 };
    if !out.translation_invariant(g)? {
        return Err(Error::CompatibilityViolation { layer: out.layer as usize });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heckeforms::{local_eigen_extend, stabilize, EigenData};
    use crate::measures::{synth_system, SynthSpec};
    use crate::padic::Zpk;
    use crate::torus::{LabelLayout, QuadraticTorus};
    use crate::tree::BruhatTitsTree;

    fn synth(r: Zpk, mode: Mode, eigen: EigenData, n_max: usize, seed: u64) -> CompatibleSystem {
        let layout = LabelLayout::inert(r.p());
        synth_system(&SynthSpec { p: r.p(), k: r.k(), mode, eigen, n_max, layout, seed }).unwrap()
    }

    #[test]
    fn theta_level_examples() {
        let r = Zpk::new(3, 6).unwrap();
        let sys = synth(r, Mode::Vertex, EigenData::supersingular(r), 3, 1);
        let t0 = theta_level(&sys, 0).unwrap();
        assert_eq!(t0.value.coeffs(), sys.level(0).unwrap());
        assert_eq!(t0.value.layer(), 0);

        let tree = BruhatTitsTree::for_radius(3, 2).unwrap();
        let torus = QuadraticTorus::inert_default(tree).unwrap();
        let ball = std::sync::Arc::new(tree.ball(&crate::tree::Vertex::ORIGIN, 2).unwrap());
        let e = crate::heckeforms::EdgeForm::constant(r, tree, ball, 2, 1, 1).unwrap();
        let es = CompatibleSystem::from_tree(&e, &torus, EigenData::edge_only(r.elt(3)), 2).unwrap();
        let t2 = theta_level(&es, 2).unwrap();
        assert_eq!(t2.value.layer(), 1);
        assert!(t2.value.coeffs().iter().all(|&c| c == 4));
        assert!(matches!(theta_ordinary(&es, 2), Err(Error::NotOrdinary(_))));
    }

    #[test]
    fn ordinary_towers_are_compatible() {
        let r = Zpk::new(3, 8).unwrap();
        let eigen = EigenData::edge_only(r.elt(4));
        for seed in 0..5 {
            let sys = synth(r, Mode::Edge, eigen, 5, seed);
            for n in 1..=5 {
                let t = theta_ordinary(&sys, n).unwrap();
                let total = sys.level(n).unwrap().iter().fold(0, |a, &c| r.add(a, c));
                let inv = eigen.alpha_p.unwrap().inverse().unwrap().pow(n as u64);
                assert_eq!(t.value.aug(), inv * r.elt(total));
            }
        }
        let mut bad = synth(r, Mode::Edge, eigen, 3, 0);
        let c = bad.level(3).unwrap()[0];
        bad.set(3, 0, c + 1).unwrap();
        assert_eq!(theta_ordinary(&bad, 3), Err(Error::CompatibilityViolation { layer: 3 }));
    }

    #[test]
    fn signed_extraction_suite() {
        let r = Zpk::new(3, 6).unwrap();
        for seed in 0..4 {
            let sys = synth(r, Mode::Vertex, EigenData::supersingular(r), 6, seed);
            for n in 0..=5u32 {
                let s = pm_extract(&sys, n).unwrap();
                assert_eq!(s.sign, Sign::for_layer(n));
                let tilde = OmegaElement::new(3, n, OmegaKind::Tilde(s.sign.opposite()), 1).unwrap().to_group_ring(r, n).unwrap();
                let unsigned = s.class.scale(r.from_i64(sign_factor(n))).to_group_ring(n);
                let theta = theta_level(&sys, sys.layout().level_for_free_layer(n)).unwrap().value;
                assert_eq!(tilde.mul(&unsigned).unwrap(), theta);
            }
        }
        let ordinary = synth(r, Mode::Vertex, EigenData::new(Some(r.elt(1)), None).unwrap(), 4, 0);
        assert!(matches!(pm_extract(&ordinary, 2), Err(Error::NotSupersingular(_))));
    }

    #[test]
    fn annihilation_failure_is_reported() {
        let r = Zpk::new(3, 6).unwrap();
        let mut sys = synth(r, Mode::Vertex, EigenData::supersingular(r), 3, 2);
        let c = sys.level(3).unwrap()[5];
        sys.set(3, 5, c + 1).unwrap();
        assert!(matches!(pm_extract(&sys, 2), Err(Error::NotSupersingular(_))));
    }

    #[test]
    fn lp_examples() {
        let r = Zpk::new(3, 6).unwrap();
        let delta = GroupRingElement::basis(r, 2, 1, 4);
        let l = delta.mul(&delta.star()).unwrap();
        assert_eq!(l, GroupRingElement::one(r, 2, 1));

        let tree = BruhatTitsTree::for_radius(3, 3).unwrap();
        let torus = QuadraticTorus::inert_default(tree).unwrap();
        let f0 = local_eigen_extend(&tree, r, 2, 3, 1, 4).unwrap();
        let eigen = EigenData::ordinary(r.elt(2)).unwrap();
        let phi = stabilize(&f0, &eigen).unwrap();
        let a = CompatibleSystem::from_tree(&phi, &torus, eigen, 3).unwrap();
        let b = CompatibleSystem::from_tree_rotated(&phi, &torus, eigen, 3, 5).unwrap();
        let ta = theta_ordinary(&a, 3).unwrap();
        let tb = theta_ordinary(&b, 3).unwrap();
        assert_ne!(ta, tb);
        assert_eq!(lp(&a, 3, LKind::Ordinary).unwrap().value, lp(&b, 3, LKind::Ordinary).unwrap().value);

        let ss = synth(r, Mode::Vertex, EigenData::supersingular(r), 4, 0);
        assert!(lp(&ss, 2, LKind::Plus).is_ok());
        assert!(lp(&ss, 3, LKind::Minus).is_ok());
        assert!(matches!(lp(&ss, 2, LKind::Minus), Err(Error::InvalidInput(_))));
        assert!(matches!(lp(&a, 2, LKind::Plus), Err(Error::NotSupersingular(_))));
        assert!(matches!(lp(&ss, 2, LKind::Ordinary), Err(Error::NotOrdinary(_))));
    }
}
