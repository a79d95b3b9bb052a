//! Exact elements of cyclotomic fields `Q(zeta_m)`.
//!
//! An element is stored as its coordinate vector in the power basis
//! `1, z, ..., z^(phi(m)-1)` where `z = exp(2 pi i / m)`. Every operation
//! leaves the vector reduced modulo the cyclotomic polynomial, so equality at a
//! fixed conductor is coefficient comparison.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

static PHI_CACHE: Lazy<RwLock<HashMap<u32, Arc<[i64]>>>> = Lazy::new(Default::default);

/// Ascending integer coefficients of the `m`-th cyclotomic polynomial.
pub fn cyclotomic_coeffs(m: u32) -> Arc<[i64]> {
    assert!(m >= 1, "conductor must be positive");
    if let Some(p) = PHI_CACHE.read().unwrap().get(&m) {
        return p.clone();
    }
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            num = div_monic_exact(&num, &cyclotomic_coeffs(d));
        }
    }
    let p: Arc<[i64]> = num.into();
    PHI_CACHE.write().unwrap().insert(m, p.clone());
    p
}

fn div_monic_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        if c != 0 {
            for (i, &d) in den.iter().enumerate() {
                rem[k + i] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// Euler's totient.
pub fn euler_phi(m: u32) -> usize {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

fn reduce(m: u32, mut v: Vec<BigRational>) -> Vec<BigRational> {
    let p = cyclotomic_coeffs(m);
    let f = p.len() - 1;
    if v.len() < f {
        v.resize(f, BigRational::zero());
        return v;
    }
    for k in (f..v.len()).rev() {
        let t = std::mem::take(&mut v[k]);
        if t.is_zero() {
            continue;
        }
        for (i, &pi) in p[..f].iter().enumerate() {
            if pi != 0 {
                v[k - f + i] -= &t * BigInt::from(pi);
            }
        }
    }
    v.truncate(f);
    v
}

#[derive(Clone, Debug)]
pub struct CycloScalar {
    m: u32,
    c: Vec<BigRational>,
}

impl CycloScalar {
    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_i64(v: i64) -> Self {
        Self::from_rational(BigRational::from_integer(v.into()))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self { m: 1, c: vec![q] }
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(v))
    }

    /// `zeta_m ^ k`.
    pub fn root_of_unity(m: u32, k: i64) -> Self {
        let e = k.rem_euclid(m as i64) as usize;
        let mut v = vec![BigRational::zero(); e + 1];
        v[e] = BigRational::one();
        Self { m, c: reduce(m, v) }
    }

    /// Builds an element from power-basis coefficients of any length; the
    /// vector is reduced modulo the cyclotomic polynomial.
    pub fn from_coeffs(m: u32, coeffs: Vec<BigRational>) -> Self {
        assert!(m >= 1, "conductor must be positive");
        Self {
            m,
            c: reduce(m, coeffs),
        }
    }

    pub fn conductor(&self) -> u32 {
        self.m
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(Zero::is_zero)
    }

    /// Returns the rational value iff every non-constant coefficient vanishes.
    pub fn try_to_rational(&self) -> Option<&BigRational> {
        if self.c[1..].iter().all(Zero::is_zero) {
            Some(&self.c[0])
        } else {
            None
        }
    }

    /// Same value, re-expressed at conductor 1 when it is rational.
    pub fn demoted(&self) -> Self {
        match self.try_to_rational() {
            Some(q) if self.m != 1 => Self::from_rational(q.clone()),
            _ => self.clone(),
        }
    }

    /// Re-expresses the element in `Q(zeta_target)`; `target` must be a
    /// multiple of the current conductor.
    pub fn lift(&self, target: u32) -> Self {
        if target == self.m {
            return self.clone();
        }
        assert!(
            target.is_multiple_of(self.m),
            "cannot lift conductor {} to {}",
            self.m,
            target
        );
        let step = (target / self.m) as usize;
        let mut v = vec![BigRational::zero(); (self.c.len() - 1) * step + 1];
        for (j, cj) in self.c.iter().enumerate() {
            v[j * step] = cj.clone();
        }
        Self::from_coeffs(target, v)
    }

    fn align(a: &Self, b: &Self) -> (u32, Option<Self>, Option<Self>) {
        if a.m == b.m {
            return (a.m, None, None);
        }
        let l = a.m.lcm(&b.m);
        let la = (a.m != l).then(|| a.lift(l));
        let lb = (b.m != l).then(|| b.lift(l));
        (l, la, lb)
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        let (m, la, lb) = Self::align(self, other);
        let a = la.as_ref().unwrap_or(self);
        let b = lb.as_ref().unwrap_or(other);
        let c =
            a.c.iter()
                .zip(&b.c)
                .map(|(x, y)| if negate { x - y } else { x + y })
                .collect();
        Self { m, c }
    }

    fn mul_impl(&self, other: &Self) -> Self {
        let (m, la, lb) = Self::align(self, other);
        let a = la.as_ref().unwrap_or(self);
        let b = lb.as_ref().unwrap_or(other);
        if m == 1 {
            return Self::from_rational(&a.c[0] * &b.c[0]);
        }
        let mut v = vec![BigRational::zero(); a.c.len() + b.c.len() - 1];
        for (i, x) in a.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.c.iter().enumerate() {
                if !y.is_zero() {
                    v[i + j] += x * y;
                }
            }
        }
        Self { m, c: reduce(m, v) }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self {
            m: self.m,
            c: self.c.iter().map(|x| x * q).collect(),
        }
    }

    /// Image under the Galois automorphism `z -> z^k` (`k` coprime to `m`).
    pub fn galois(&self, k: u32) -> Self {
        if self.m == 1 {
            return self.clone();
        }
        let m = self.m as usize;
        let mut v = vec![BigRational::zero(); m];
        for (j, cj) in self.c.iter().enumerate() {
            v[(j * k as usize) % m] += cj;
        }
        Self::from_coeffs(self.m, v)
    }

    /// Complex conjugate, i.e. the automorphism `z -> z^-1`.
    pub fn conj(&self) -> Self {
        self.galois(self.m - 1)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.m == 1 {
            return Ok(Self::from_rational(self.c[0].recip()));
        }
        // a^-1 = (product of the other conjugates) / norm(a)
        let mut others = Self::one();
        for k in 2..self.m {
            if k.gcd(&self.m) == 1 {
                others = &others * &self.galois(k);
            }
        }
        let norm = &others * self;
        let n = norm
            .try_to_rational()
            .cloned()
            .ok_or_else(|| Error::Internal("field norm is not rational".into()))?;
        Ok(others.lift(self.m).scale(&n.recip()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one().lift(self.m);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Human-readable polynomial in `z` without the conductor, e.g.
    /// `-1 - 2*z^2 - 2*z^3`.
    pub fn to_expr(&self) -> String {
        let mut out = String::new();
        for (k, ck) in self.c.iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            let neg = ck.is_negative();
            let abs = ck.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match k {
                0 => out.push_str(&abs.to_string()),
                _ => {
                    if !abs.is_one() {
                        out.push_str(&abs.to_string());
                        out.push('*');
                    }
                    out.push('z');
                    if k > 1 {
                        out.push('^');
                        out.push_str(&k.to_string());
                    }
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Parses expressions such as `z^2 + z^3`, `-1`, `1/2*z - 3` in
    /// `Q(zeta_m)`.
    pub fn parse_expr(s: &str, m: u32) -> Result<Self> {
        let err = || Error::Parse(format!("bad cyclotomic expression {s:?}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = compact.as_bytes();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);
        let mut acc = Self::zero().lift(m);
        for term in terms {
            let (neg, body) = match term.as_bytes().first() {
                Some(b'-') => (true, &term[1..]),
                Some(b'+') => (false, &term[1..]),
                _ => (false, term),
            };
            let (coef, power) = match body.find('z') {
                None => (body, 0i64),
                Some(pos) => {
                    let coef = body[..pos].trim_end_matches('*');
                    let rest = &body[pos + 1..];
                    let power = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^')
                            .ok_or_else(err)?
                            .parse::<i64>()
                            .map_err(|_| err())?
                    };
                    (coef, power)
                }
            };
            let mut q = if coef.is_empty() {
                BigRational::one()
            } else {
                BigRational::from_str(coef).map_err(|_| err())?
            };
            if neg {
                q = -q;
            }
            acc = &acc + &Self::root_of_unity(m, power).scale(&q);
        }
        Ok(acc)
    }

    /// Canonical text key at the element's own conductor; equal keys mean
    /// equal elements when conductors agree.
    pub fn write_key(&self, out: &mut String) {
        use std::fmt::Write;
        for (i, c) in self.c.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{c}");
        }
    }
}

impl PartialEq for CycloScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.m == other.m {
            return self.c == other.c;
        }
        let (_, la, lb) = Self::align(self, other);
        la.as_ref().unwrap_or(self).c == lb.as_ref().unwrap_or(other).c
    }
}

impl Eq for CycloScalar {}

impl Default for CycloScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for CycloScalar {
    fn from(v: i64) -> Self {
        Self::from_i64(v)
    }
}

impl From<BigRational> for CycloScalar {
    fn from(q: BigRational) -> Self {
        Self::from_rational(q)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&CycloScalar> for &CycloScalar {
            type Output = CycloScalar;
            fn $method(self, rhs: &CycloScalar) -> CycloScalar {
                $body(self, rhs)
            }
        }
        impl $tr<CycloScalar> for CycloScalar {
            type Output = CycloScalar;
            fn $method(self, rhs: CycloScalar) -> CycloScalar {
                $body(&self, &rhs)
            }
        }
        impl $tr<&CycloScalar> for CycloScalar {
            type Output = CycloScalar;
            fn $method(self, rhs: &CycloScalar) -> CycloScalar {
                $body(&self, rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &CycloScalar, b: &CycloScalar| a
    .add_impl(b, false));
forward_binop!(Sub, sub, |a: &CycloScalar, b: &CycloScalar| a
    .add_impl(b, true));
forward_binop!(Mul, mul, |a: &CycloScalar, b: &CycloScalar| a.mul_impl(b));

impl AddAssign<&CycloScalar> for CycloScalar {
    fn add_assign(&mut self, rhs: &CycloScalar) {
        if self.m == rhs.m {
            for (x, y) in self.c.iter_mut().zip(&rhs.c) {
                *x += y;
            }
        } else {
            *self = self.add_impl(rhs, false);
        }
    }
}

impl SubAssign<&CycloScalar> for CycloScalar {
    fn sub_assign(&mut self, rhs: &CycloScalar) {
        if self.m == rhs.m {
            for (x, y) in self.c.iter_mut().zip(&rhs.c) {
                *x -= y;
            }
        } else {
            *self = self.add_impl(rhs, true);
        }
    }
}

impl MulAssign<&CycloScalar> for CycloScalar {
    fn mul_assign(&mut self, rhs: &CycloScalar) {
        *self = self.mul_impl(rhs);
    }
}

impl Neg for &CycloScalar {
    type Output = CycloScalar;
    fn neg(self) -> CycloScalar {
        CycloScalar {
            m: self.m,
            c: self.c.iter().map(|x| -x).collect(),
        }
    }
}

impl Neg for CycloScalar {
    type Output = CycloScalar;
    fn neg(self) -> CycloScalar {
        -&self
    }
}

impl std::iter::Sum for CycloScalar {
    fn sum<I: Iterator<Item = CycloScalar>>(iter: I) -> Self {
        iter.fold(CycloScalar::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}

impl fmt::Display for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 1 {
            write!(f, "{}", self.c[0])
        } else {
            write!(f, "{} [m={}]", self.to_expr(), self.m)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CycloRepr {
    m: u32,
    coeffs: Vec<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ScalarRepr {
    Rational(String),
    Cyclo(CycloRepr),
}

impl Serialize for CycloScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.m == 1 {
            s.serialize_str(&self.c[0].to_string())
        } else {
            CycloRepr {
                m: self.m,
                coeffs: self.c.iter().map(ToString::to_string).collect(),
            }
            .serialize(s)
        }
    }
}

impl<'de> Deserialize<'de> for CycloScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match ScalarRepr::deserialize(d)? {
            ScalarRepr::Rational(s) => BigRational::from_str(&s)
                .map(CycloScalar::from_rational)
                .map_err(|_| D::Error::custom(format!("bad rational {s:?}"))),
            ScalarRepr::Cyclo(CycloRepr { m, coeffs }) => {
                if m == 0 {
                    return Err(D::Error::custom("conductor must be positive"));
                }
                let phi = euler_phi(m);
                if coeffs.len() != phi {
                    return Err(D::Error::custom(format!(
                        "conductor {m} needs {phi} coefficients, got {}",
                        coeffs.len()
                    )));
                }
                let c = coeffs
                    .iter()
                    .map(|s| BigRational::from_str(s))
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| D::Error::custom("bad rational coefficient"))?;
                Ok(CycloScalar { m, c })
            }
        }
    }
}
