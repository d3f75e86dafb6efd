use serde::{Deserialize, Serialize};

use super::{specialize, FiniteOrderCharacter};
use crate::error::{Error, Result};
use crate::iwasawa::{OmegaElement, OmegaKind};
use crate::measures::{lp, CompatibleSystem, LKind, Mode, PadicLFunction};
use crate::padic::CyclotomicValue;

/// `α_p^{-m} Σ_{t ∈ H_m} ρ(t̄) c_m(t)`, read directly off the level-`m`
/// table of an ordinary edge tower.
pub fn period_sum(sys: &CompatibleSystem, rho: &FiniteOrderCharacter, m: usize) -> Result<CyclotomicValue> {
    if sys.mode() != Mode::Edge {
        return Err(Error::NotOrdinary("period sums need an edge tower".into()));
    }
    let alpha = sys.eigen().require_alpha_p()?;
    if !alpha.is_unit() {
        return Err(Error::NotOrdinary(format!("alpha_p = {alpha} is not a p-adic unit")));
    }
    if rho.p != sys.p() {
        return Err(Error::InvalidInput("character and system disagree on p".into()));
    }
    let layout = sys.layout();
    rho.check_layer(layout.free_exponent(m), layout.delta, m)?;
    let table = sys.require_level(m)?;
    let r = sys.ring();
    let mut powers = vec![0u64; rho.order() as usize];
    for (label, &c) in table.iter().enumerate() {
        let (_, digits) = layout.split(m, label);
        let e = rho.exponent_at(&digits) as usize;
        powers[e] = r.add(powers[e], c);
    }
    let scale = alpha.inverse()?.pow(m as u64).residue();
    Ok(CyclotomicValue::from_power_table(r, rho.m, &powers).scale(scale))
}

/// `ρ(L_p)` against the product of the period sums at `ρ` and `ρ^{-1}`, with
/// valuations in units of `1/φ(p^m)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterpolationReport {
    pub lhs: CyclotomicValue,
    pub rhs: CyclotomicValue,
    pub holds: bool,
    pub valuation_lhs: u32,
    pub valuation_rho: u32,
    pub valuation_rho_inverse: u32,
}

pub fn interpolation_shape(sys: &CompatibleSystem, rho: &FiniteOrderCharacter, m: usize) -> Result<InterpolationReport> {
    let l = lp(sys, m, LKind::Ordinary)?;
    let lhs = specialize(&l.value, rho)?;
    let a = period_sum(sys, rho, m)?;
    let b = period_sum(sys, &rho.inverse(), m)?;
    let rhs = a.mul(&b);
    Ok(InterpolationReport {
        holds: lhs == rhs,
        valuation_lhs: lhs.valuation(),
        valuation_rho: a.valuation(),
        valuation_rho_inverse: b.valuation(),
        lhs,
        rhs,
    })
}

/// For a signed `L_p^±`: whether `ρ` kills `Ω_n^ε`, and if so whether
/// `ρ(L_p^±) = ρ(ϑ^±) ρ((ϑ^±)*)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedShapeReport {
    pub applicable: bool,
    pub holds: bool,
}

pub fn signed_specialization_check(l: &PadicLFunction, rho: &FiniteOrderCharacter) -> Result<SignedShapeReport> {
    let Some(class) = &l.class else {
        return Err(Error::InvalidInput("expected a signed L-function".into()));
    };
    let r = l.value.ring();
    let ideal = OmegaElement::new(r.p(), l.layer, OmegaKind::Signed(class.sign()), 1)?.to_group_ring(r, l.layer)?;
    if !specialize(&ideal, rho)?.is_zero() {
        return Ok(SignedShapeReport { applicable: false, holds: false });
    }
    let lhs = specialize(&l.value, rho)?;
    let rhs = specialize(&l.factor, rho)?.mul(&specialize(&l.factor.star(), rho)?);
    Ok(SignedShapeReport { applicable: true, holds: lhs == rhs })
}
