//! Dense polynomials over `Z/p^k`, constant term first.

use crate::padic::Zpk;

pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn mul(r: &Zpk, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = r.mul_add(out[i + j], x, y);
        }
    }
    trim(out)
}

/// Quotient and remainder by a monic divisor.
pub fn divrem_monic(r: &Zpk, a: &[u64], m: &[u64]) -> (Vec<u64>, Vec<u64>) {
    assert_eq!(m.last(), Some(&1), "divisor must be monic");
    let d = m.len() - 1;
    let mut rem = a.to_vec();
    if rem.len() <= d {
        return (Vec::new(), trim(rem));
    }
    let mut quot = vec![0u64; rem.len() - d];
    for i in (d..rem.len()).rev() {
        let c = rem[i];
        if c == 0 {
            continue;
        }
        for (j, &mj) in m[..d].iter().enumerate() {
            rem[i - d + j] = r.sub(rem[i - d + j], r.mul(c, mj));
        }
        rem[i] = 0;
        quot[i - d] = c;
    }
    rem.truncate(d);
    (trim(quot), trim(rem))
}

pub fn rem_monic(r: &Zpk, a: &[u64], m: &[u64]) -> Vec<u64> {
    divrem_monic(r, a, m).1
}

/// `f(X + s)` by repeated synthetic steps.
pub fn taylor_shift(r: &Zpk, a: &mut [u64], s: u64) {
    let n = a.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            a[j] = r.add(a[j], r.mul(s, a[j + 1]));
        }
    }
}
