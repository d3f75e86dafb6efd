use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{hensel_unit_root, PrecisionInt, Zpk};

/// Hecke eigenvalues: `a_p` for `T_p` on vertices and `α_p` for `U_p` on
/// edges. When both are present `α_p^2 - a_p α_p + p ≡ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenData {
    pub a_p: Option<PrecisionInt>,
    pub alpha_p: Option<PrecisionInt>,
}

impl EigenData {
    pub fn new(a_p: Option<PrecisionInt>, alpha_p: Option<PrecisionInt>) -> Result<Self> {
        if let (Some(a), Some(al)) = (a_p, alpha_p) {
            let ring = a.ring();
            if al.ring() != ring {
                return Err(Error::InvalidInput("eigenvalues live in different rings".into()));
            }
            let p = ring.elt(ring.p());
            if !(al * al - a * al + p).is_zero() {
                return Err(Error::InvalidInput(format!("alpha_p = {al} is not a root of x^2 - {a} x + p")));
            }
        }
        Ok(EigenData { a_p, alpha_p })
    }

    /// `a_p` together with its unit root.
    pub fn ordinary(a_p: PrecisionInt) -> Result<Self> {
        let alpha = hensel_unit_root(&a_p, a_p.p() as i128)?;
        Ok(EigenData { a_p: Some(a_p), alpha_p: Some(alpha) })
    }

    /// `a_p = 0`; there is no unit root.
    pub fn supersingular(ring: Zpk) -> Self {
        EigenData { a_p: Some(ring.elt(0)), alpha_p: None }
    }

    /// Only the `U_p`-eigenvalue is known.
    pub fn edge_only(alpha_p: PrecisionInt) -> Self {
        EigenData { a_p: None, alpha_p: Some(alpha_p) }
    }

    pub fn ring(&self) -> Option<Zpk> {
        self.a_p.or(self.alpha_p).map(|x| x.ring())
    }

    pub fn require_a_p(&self) -> Result<PrecisionInt> {
        self.a_p.ok_or_else(|| Error::InvalidInput("eigen data lacks a_p".into()))
    }

    pub fn require_alpha_p(&self) -> Result<PrecisionInt> {
        self.alpha_p.ok_or(Error::MissingEigenvalue)
    }

    pub fn is_supersingular(&self) -> bool {
        self.a_p.is_some_and(|a| a.is_zero())
    }
}
