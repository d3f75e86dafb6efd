use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ring::Zpk;
use crate::error::{Error, Result};

/// Dense polynomial with exact integer coefficients, constant term first.
///
/// Trailing zeros are always stripped, so the zero polynomial has an empty
/// coefficient list and [`IntPolynomial::degree`] returns `None` for it.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// The variable `T`.
    pub fn t() -> Self {
        Self::from_i64s(&[0, 1])
    }

    /// `(T + 1)^n`, expanded with exact binomial coefficients.
    pub fn t_plus_one_pow(n: usize) -> Self {
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut c = BigInt::one();
        coeffs.push(c.clone());
        for i in 0..n {
            c = c * BigInt::from(n - i) / BigInt::from(i + 1);
            coeffs.push(c.clone());
        }
        Self::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Euclidean division by a monic polynomial, exact over `Z`.
    pub fn div_rem_monic(&self, divisor: &IntPolynomial) -> Result<(IntPolynomial, IntPolynomial)> {
        if !divisor.is_monic() {
            return Err(Error::InvalidInput("divisor must be monic".into()));
        }
        let d = divisor.degree().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - d];
        for i in (d..rem.len()).rev() {
            let c = std::mem::take(&mut rem[i]);
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs[..d].iter().enumerate() {
                rem[i - d + j] -= &c * dc;
            }
            quot[i - d] = c;
        }
        rem.truncate(d);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Coefficients reduced into `Z/p^k`, padded with zeros to length `len`
    /// (or the natural length if larger).
    pub fn reduce(&self, ring: &Zpk, len: usize) -> Vec<u64> {
        let mut out: Vec<u64> = self.coeffs.iter().map(|c| ring.from_bigint(c)).collect();
        if out.len() < len {
            out.resize(len, 0);
        }
        out
    }

    pub fn to_decimal_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*T")?,
                _ => write!(f, "{c}*T^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_decimal_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = Vec::<String>::deserialize(d)?;
        let coeffs = raw
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(IntPolynomial::new(coeffs))
    }
}

/// `Φ_{p^j}(T + 1)`: the `p^j`-th cyclotomic polynomial in the shifted
/// variable, of degree `p^(j-1) (p - 1)`.
///
/// Built as `Σ_{b<p} (T+1)^(b p^(j-1))`, which is the group-ring norm element
/// of the order-`p` kernel of `Z/p^j -> Z/p^(j-1)`.
pub fn cyclotomic_sigma(p: u64, j: u32) -> Result<IntPolynomial> {
    if j == 0 {
        return Err(Error::InvalidInput("cyclotomic_sigma needs level j >= 1".into()));
    }
    let step = (p as usize).pow(j - 1);
    let mut acc = IntPolynomial::zero();
    for b in 0..p as usize {
        acc = &acc + &IntPolynomial::t_plus_one_pow(b * step);
    }
    Ok(acc)
}

/// `(T + 1)^(p^n) - 1`, straight from the binomial theorem.
pub fn omega_direct(p: u64, n: u32) -> IntPolynomial {
    &IntPolynomial::t_plus_one_pow((p as usize).pow(n)) - &IntPolynomial::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_small_cases() {
        assert_eq!(cyclotomic_sigma(3, 1).unwrap(), IntPolynomial::from_i64s(&[3, 3, 1]));
        assert_eq!(cyclotomic_sigma(2, 1).unwrap(), IntPolynomial::from_i64s(&[2, 1]));
        assert_eq!(cyclotomic_sigma(2, 2).unwrap(), IntPolynomial::from_i64s(&[2, 2, 1]));
        assert!(cyclotomic_sigma(3, 0).is_err());
    }

    #[test]
    fn sigma_degree_is_euler_phi() {
        for p in [2u64, 3, 5, 7] {
            for j in 1..=3 {
                let deg = cyclotomic_sigma(p, j).unwrap().degree().unwrap();
                assert_eq!(deg as u64, p.pow(j - 1) * (p - 1));
            }
        }
    }

    #[test]
    fn zero_polynomial_sentinel() {
        let z = IntPolynomial::from_i64s(&[0, 0, 0]);
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
        assert_eq!(IntPolynomial::from_i64s(&[1, 2, 0]).degree(), Some(1));
    }

    #[test]
    fn monic_division() {
        let f = IntPolynomial::from_i64s(&[-1, 0, 0, 1]);
        let d = IntPolynomial::from_i64s(&[-1, 1]);
        let (q, r) = f.div_rem_monic(&d).unwrap();
        assert_eq!(q, IntPolynomial::from_i64s(&[1, 1, 1]));
        assert!(r.is_zero());
        assert!(f.div_rem_monic(&IntPolynomial::from_i64s(&[1, 2])).is_err());
    }

    #[test]
    fn json_is_decimal_strings() {
        let f = IntPolynomial::from_i64s(&[3, -3, 1]);
        assert_eq!(serde_json::to_string(&f).unwrap(), r#"["3","-3","1"]"#);
        let back: IntPolynomial = serde_json::from_str(r#"["3","-3","1","0"]"#).unwrap();
        assert_eq!(back, f);
    }
}
