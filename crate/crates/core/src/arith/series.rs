use num_rational::BigRational;

use super::cyclo::CycloScalar;
use super::unipoly::UniPoly;
use crate::error::{Error, Result};

/// Power series in `t` truncated after `t^order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    order: usize,
    coeffs: Vec<CycloScalar>,
}

impl TruncSeries {
    pub fn zero(order: usize) -> Self {
        Self {
            order,
            coeffs: vec![CycloScalar::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::from_poly(&UniPoly::one(), order)
    }

    pub fn from_poly(p: &UniPoly, order: usize) -> Self {
        Self {
            order,
            coeffs: (0..=order).map(|k| p.coeff(k)).collect(),
        }
    }

    pub fn from_coeffs(coeffs: Vec<CycloScalar>) -> Self {
        assert!(!coeffs.is_empty());
        Self {
            order: coeffs.len() - 1,
            coeffs,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[CycloScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &CycloScalar {
        &self.coeffs[k]
    }

    pub fn to_poly(&self) -> UniPoly {
        UniPoly::new(self.coeffs.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order, "series orders differ");
        Self {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &CycloScalar) -> Self {
        Self {
            order: self.order,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order, "series orders differ");
        let mut out = vec![CycloScalar::zero(); self.order + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=self.order - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        Self {
            order: self.order,
            coeffs: out,
        }
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        if self.coeffs[0].is_zero() {
            return Err(Error::NonInvertibleSeries);
        }
        let c0_inv = self.coeffs[0].inv()?;
        let mut out: Vec<CycloScalar> = Vec::with_capacity(self.order + 1);
        out.push(c0_inv.clone());
        for k in 1..=self.order {
            let mut acc = CycloScalar::zero();
            for j in 1..=k {
                let a = &self.coeffs[j];
                if !a.is_zero() {
                    acc += &(a * &out[k - j]);
                }
            }
            out.push(-(&acc * &c0_inv));
        }
        Ok(Self {
            order: self.order,
            coeffs: out,
        })
    }

    /// Re-expresses every coefficient at conductor 1, failing if any is
    /// irrational.
    pub fn demote(&self) -> Option<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.try_to_rational().cloned().map(CycloScalar::from_rational))
            .collect::<Option<Vec<_>>>()?;
        Some(Self {
            order: self.order,
            coeffs,
        })
    }

    pub fn rational_coeffs(&self) -> Option<Vec<BigRational>> {
        self.coeffs
            .iter()
            .map(|c| c.try_to_rational().cloned())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &TruncSeries) -> Vec<i64> {
        s.to_poly()
            .integer_coeffs()
            .map(|mut v| {
                v.resize(s.order() + 1, 0);
                v
            })
            .unwrap()
    }

    /// Number of partitions of `k` into parts from `parts`.
    fn partitions(k: usize, parts: &[usize]) -> i64 {
        let mut ways = vec![0i64; k + 1];
        ways[0] = 1;
        for &p in parts {
            for n in p..=k {
                ways[n] += ways[n - p];
            }
        }
        ways[k]
    }

    #[test]
    fn geometric_series() {
        let s = TruncSeries::from_poly(&UniPoly::from_i64s(&[1, -1]), 3);
        assert_eq!(ints(&s.reciprocal().unwrap()), vec![1, 1, 1, 1]);
        let one = TruncSeries::one(3);
        assert_eq!(one.reciprocal().unwrap(), one);
    }

    #[test]
    fn reciprocal_matches_partition_count() {
        let p = &UniPoly::from_i64s(&[1, -1]) * &UniPoly::from_i64s(&[1, 0, -1]);
        let r = TruncSeries::from_poly(&p, 4).reciprocal().unwrap();
        let oracle: Vec<i64> = (0..=4).map(|k| partitions(k, &[1, 2])).collect();
        assert_eq!(oracle, vec![1, 1, 2, 2, 3]);
        assert_eq!(ints(&r), oracle);
    }

    #[test]
    fn zero_constant_term_is_rejected() {
        let s = TruncSeries::from_poly(&UniPoly::from_i64s(&[0, 1]), 3);
        assert!(matches!(s.reciprocal(), Err(Error::NonInvertibleSeries)));
    }
}
