use super::ring::PrecisionInt;
use crate::error::{Error, Result};

/// Unit root of `x^2 - a x + q` in `Z/p^k`, lifted from `x ≡ a (mod p)` by
/// Newton iteration. The derivative `2x - a ≡ a` is a unit along the way.
pub fn hensel_unit_root(a: &PrecisionInt, q: i128) -> Result<PrecisionInt> {
    let ring = a.ring();
    if !a.is_unit() {
        return Err(Error::NotOrdinary(format!("a_p = {a} is not a p-adic unit")));
    }
    let q = ring.from_i128(q);
    if ring.valuation(q) == 0 {
        return Err(Error::InvalidInput("constant term must be divisible by p".into()));
    }
    let a = a.residue();
    let f = |x: u64| ring.add(ring.sub(ring.mul(x, x), ring.mul(a, x)), q);
    let mut x = a;
    // Quadratic convergence: k digits need about log2(k) steps.
    while f(x) != 0 {
        let df = ring.sub(ring.add(x, x), a);
        let inv = ring.inv(df).expect("derivative is a unit");
        x = ring.sub(x, ring.mul(f(x), inv));
    }
    Ok(ring.elt(x))
}
