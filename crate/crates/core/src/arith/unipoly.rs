use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::cyclo::{cyclotomic_coeffs, CycloScalar};
use crate::error::{Error, Result};

/// Univariate polynomial in `t` with ascending coefficients; never stores a
/// trailing zero, so the zero polynomial is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UniPoly {
    coeffs: Vec<CycloScalar>,
}

impl UniPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(CycloScalar::one())
    }

    pub fn constant(c: CycloScalar) -> Self {
        Self::new(vec![c])
    }

    pub fn new(coeffs: Vec<CycloScalar>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| CycloScalar::from_i64(c)).collect())
    }

    /// `c * t^k`.
    pub fn monomial(c: CycloScalar, k: usize) -> Self {
        let mut v = vec![CycloScalar::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(CycloScalar::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[CycloScalar] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: usize) -> CycloScalar {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&CycloScalar> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &CycloScalar) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn eval(&self, x: &CycloScalar) -> CycloScalar {
        self.coeffs
            .iter()
            .rev()
            .fold(CycloScalar::zero(), |acc, c| &(&acc * x) + c)
    }

    /// Polynomial long division; the divisor must be nonzero.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let lead = divisor.leading().ok_or(Error::DivisionByZero)?;
        let lead_inv = lead.inv()?;
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![CycloScalar::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (i, d) in divisor.coeffs.iter().enumerate() {
                    let t = &c * d;
                    rem[k + i] -= &t;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Division that must leave no remainder.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::Internal(format!(
                "{self} is not divisible by {divisor}"
            )));
        }
        Ok(q)
    }

    /// `t^deg * p(1/t)` for a fixed formal degree.
    pub fn reversed(&self, deg: usize) -> Self {
        let mut v = vec![CycloScalar::zero(); deg + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[deg - k] = c.clone();
        }
        Self::new(v)
    }

    /// Rational coefficients, if every coefficient demotes.
    pub fn rational_coeffs(&self) -> Option<Vec<BigRational>> {
        self.coeffs
            .iter()
            .map(|c| c.try_to_rational().cloned())
            .collect()
    }

    /// Coefficients as integers, if they all are.
    pub fn integer_coeffs(&self) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.rational_coeffs()?
            .into_iter()
            .map(|q| q.is_integer().then(|| q.to_integer().to_i64()).flatten())
            .collect()
    }
}

/// The `m`-th cyclotomic polynomial as a polynomial in `t`.
pub fn cyclotomic_polynomial(m: u32) -> UniPoly {
    UniPoly::from_i64s(&cyclotomic_coeffs(m))
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut v = vec![CycloScalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] += &(a * b);
            }
        }
        UniPoly::new(v)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let plain = c.conductor() == 1;
            match (k, plain && c.is_one()) {
                (0, _) => write!(f, "{c}")?,
                (_, true) => {}
                _ if plain => write!(f, "{c}*")?,
                _ => write!(f, "({c})*")?,
            }
            match k {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi12_by_division_oracle() {
        // x^12 - 1 divided by the lower-divisor cyclotomic factors
        let mut num = UniPoly::monomial(CycloScalar::one(), 12);
        num = &num - &UniPoly::one();
        for d in [1, 2, 3, 4, 6] {
            num = num.exact_div(&cyclotomic_polynomial(d)).unwrap();
        }
        assert_eq!(num, UniPoly::from_i64s(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(12), num);
        assert_eq!(cyclotomic_polynomial(1), UniPoly::from_i64s(&[-1, 1]));
        assert_eq!(
            cyclotomic_polynomial(5),
            UniPoly::from_i64s(&[1, 1, 1, 1, 1])
        );
    }

    #[test]
    fn phi_divides_x_m_minus_one() {
        for m in 1..=60u32 {
            let xm1 = &UniPoly::monomial(CycloScalar::one(), m as usize) - &UniPoly::one();
            let (_, r) = xm1.div_rem(&cyclotomic_polynomial(m)).unwrap();
            assert!(r.is_zero(), "m = {m}");
        }
    }

    #[test]
    fn zero_has_no_degree() {
        assert_eq!(UniPoly::zero().degree(), None);
        assert_eq!(UniPoly::from_i64s(&[1, 2, 0, 0]).degree(), Some(1));
        assert!(UniPoly::from_i64s(&[0, 0]).is_zero());
    }

    #[test]
    fn display_reads_naturally() {
        assert_eq!(
            UniPoly::from_i64s(&[1, 0, 2, 1]).to_string(),
            "1 + 2*t^2 + t^3"
        );
    }
}
