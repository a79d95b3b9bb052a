//! Dense matrices over [`CycloScalar`] with exact, fraction-free elimination.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{CycloScalar, UniPoly};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<CycloScalar>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<CycloScalar>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![CycloScalar::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| CycloScalar::from_i64((i == j) as i64))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> CycloScalar) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Self { rows, cols, data }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        Self::from_fn(r, c, |i, j| CycloScalar::from_i64(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CycloScalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycloScalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[CycloScalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[CycloScalar] {
        &self.data
    }

    /// Largest conductor among the entries.
    pub fn conductor(&self) -> u32 {
        self.data
            .iter()
            .map(CycloScalar::conductor)
            .fold(1, |a, b| a.lcm(&b))
    }

    /// Lifts every entry to a common conductor.
    pub fn lifted(&self, m: u32) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.lift(m)).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self * v` for a column vector.
    pub fn mul_vec(&self, v: &[CycloScalar]) -> Result<Vec<CycloScalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `w * self` for a row vector.
    pub fn vec_mul(&self, w: &[CycloScalar]) -> Result<Vec<CycloScalar>> {
        if w.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: w.len(),
            });
        }
        Ok((0..self.cols)
            .map(|j| (0..self.rows).map(|i| &w[i] * self.get(i, j)).sum())
            .collect())
    }

    pub fn scale(&self, c: &CycloScalar) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Determinant by fraction-free (Bareiss) elimination. Rational matrices
    /// are scaled row-wise to integers and eliminated over `Z`.
    pub fn det(&self) -> Result<CycloScalar> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        if self.rows == 0 {
            return Ok(CycloScalar::one());
        }
        if self.data.iter().all(|x| x.try_to_rational().is_some()) {
            return Ok(self.det_rational());
        }
        self.det_field()
    }

    fn det_rational(&self) -> CycloScalar {
        let n = self.rows;
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let row: Vec<&BigRational> = self
                    .row(i)
                    .iter()
                    .map(|x| x.try_to_rational().unwrap())
                    .collect();
                let l = row.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
                scale *= &l;
                row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
            })
            .collect();
        let d = bareiss_int(&mut a);
        CycloScalar::from_rational(BigRational::new(d, scale))
    }

    fn det_field(&self) -> Result<CycloScalar> {
        let n = self.rows;
        let mut a: Vec<Vec<CycloScalar>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut negate = false;
        let mut prev = CycloScalar::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        negate = !negate;
                    }
                    None => return Ok(CycloScalar::zero()),
                }
            }
            let prev_inv = prev.inv()?;
            let (top, bottom) = a.split_at_mut(k + 1);
            let pivot_row = &top[k];
            bottom.par_iter_mut().for_each(|row| {
                for j in k + 1..n {
                    let t = &(&row[j] * &pivot_row[k]) - &(&row[k] * &pivot_row[j]);
                    row[j] = &t * &prev_inv;
                }
                row[k] = CycloScalar::zero();
            });
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        Ok(if negate { -d } else { d })
    }

    /// Inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        let n = self.rows;
        let mut a: Vec<Vec<CycloScalar>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| CycloScalar::from_i64((i == j) as i64)));
                r
            })
            .collect();
        for k in 0..n {
            let p = (k..n)
                .find(|&i| !a[i][k].is_zero())
                .ok_or(Error::SingularMatrix)?;
            a.swap(p, k);
            let inv = a[k][k].inv()?;
            for x in a[k].iter_mut() {
                *x = &*x * &inv;
            }
            let pivot = a[k].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i == k || row[k].is_zero() {
                    continue;
                }
                let f = row[k].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= &(&f * p);
                }
            }
        }
        Ok(Self::from_fn(n, n, |i, j| a[i][n + j].clone()))
    }

    /// Characteristic polynomial `det(x I - A)`, monic, via Berkowitz.
    pub fn charpoly(&self) -> UniPoly {
        assert!(self.is_square());
        let desc = berkowitz(&FieldRing, self.rows, |i, j| self.get(i, j).clone());
        UniPoly::new(desc.into_iter().rev().collect())
    }

    /// Solves `self * x = rhs` exactly.
    pub fn solve(&self, rhs: &[CycloScalar]) -> Result<Solution> {
        if rhs.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: rhs.len(),
            });
        }
        let (m, n) = (self.rows, self.cols);
        let mut a: Vec<Vec<CycloScalar>> = (0..m)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.push(rhs[i].clone());
                r
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..n {
            let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(p, r);
            let inv = a[r][c].inv()?;
            for x in a[r][c..].iter_mut() {
                *x = &*x * &inv;
            }
            let pivot = a[r].clone();
            a.par_iter_mut().enumerate().for_each(|(i, row)| {
                if i == r || row[c].is_zero() {
                    return;
                }
                let f = row[c].clone();
                for j in c..=n {
                    if !pivot[j].is_zero() {
                        let t = &f * &pivot[j];
                        row[j] -= &t;
                    }
                }
            });
            pivots.push(c);
            r += 1;
            if r == m {
                break;
            }
        }
        if a[r..].iter().any(|row| !row[n].is_zero()) {
            return Ok(Solution::Inconsistent);
        }
        if pivots.len() < n {
            return Ok(Solution::Underdetermined { rank: pivots.len() });
        }
        Ok(Solution::Unique((0..n).map(|i| a[i][n].clone()).collect()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<CycloScalar>),
    Underdetermined { rank: usize },
    Inconsistent,
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Bareiss elimination in place over the integers.
pub(crate) fn bareiss_int(a: &mut [Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let prev_ref = &prev;
        bottom.par_iter_mut().for_each(|row| {
            for j in k + 1..n {
                let t = &row[j] * &pivot_row[k] - &row[k] * &pivot_row[j];
                row[j] = t / prev_ref;
            }
            row[k] = BigInt::zero();
        });
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Minimal commutative-ring interface for division-free algorithms.
pub(crate) trait RingOps {
    type E: Clone;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
}

struct FieldRing;

impl RingOps for FieldRing {
    type E = CycloScalar;
    fn zero(&self) -> CycloScalar {
        CycloScalar::zero()
    }
    fn one(&self) -> CycloScalar {
        CycloScalar::one()
    }
    fn add(&self, a: &CycloScalar, b: &CycloScalar) -> CycloScalar {
        a + b
    }
    fn mul(&self, a: &CycloScalar, b: &CycloScalar) -> CycloScalar {
        a * b
    }
    fn neg(&self, a: &CycloScalar) -> CycloScalar {
        -a
    }
}

/// Coefficients of `det(x I - A)` in descending order (leading 1 first),
/// computed without division.
pub(crate) fn berkowitz<R: RingOps>(
    ring: &R,
    n: usize,
    a: impl Fn(usize, usize) -> R::E,
) -> Vec<R::E> {
    let mut p = vec![ring.one()];
    for k in 0..n {
        let mut t = Vec::with_capacity(k + 2);
        t.push(ring.one());
        t.push(ring.neg(&a(k, k)));
        let mut v: Vec<R::E> = (0..k).map(|i| a(i, k)).collect();
        for j in 0..k {
            let mut rv = ring.zero();
            for (i, vi) in v.iter().enumerate() {
                rv = ring.add(&rv, &ring.mul(&a(k, i), vi));
            }
            t.push(ring.neg(&rv));
            if j + 1 < k {
                v = (0..k)
                    .map(|i| {
                        let mut s = ring.zero();
                        for (l, vl) in v.iter().enumerate() {
                            s = ring.add(&s, &ring.mul(&a(i, l), vl));
                        }
                        s
                    })
                    .collect();
            }
        }
        p = (0..k + 2)
            .map(|i| {
                let mut s = ring.zero();
                for j in 0..=i.min(k) {
                    s = ring.add(&s, &ring.mul(&t[i - j], &p[j]));
                }
                s
            })
            .collect();
    }
    p
}
