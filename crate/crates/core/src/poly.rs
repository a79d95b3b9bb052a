//! Sparse multivariate polynomials, symmetric 2-tensors with polynomial
//! entries, and linear forms.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::CycloScalar;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Exponent vector, ordered by total degree and then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Self(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    n: usize,
    terms: BTreeMap<Monomial, CycloScalar>,
}

impl MultiPoly {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: CycloScalar) -> Self {
        Self::from_terms(n, [(Monomial::one(n), c)])
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, CycloScalar::one())
    }

    /// The coordinate function `x_i` (zero-based).
    pub fn var(n: usize, i: usize) -> Self {
        Self::from_terms(n, [(Monomial::var(n, i), CycloScalar::one())])
    }

    pub fn monomial(n: usize, exp: Vec<u32>, c: CycloScalar) -> Self {
        assert_eq!(exp.len(), n);
        Self::from_terms(n, [(Monomial(exp), c)])
    }

    /// Sums duplicate exponents and drops zero coefficients.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Monomial, CycloScalar)>) -> Self {
        let mut p = Self::zero(n);
        for (m, c) in terms {
            assert_eq!(m.0.len(), n, "exponent length differs from variable count");
            p.add_term(m, &c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: &CycloScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &CycloScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> CycloScalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Splits into homogeneous components keyed by degree.
    pub fn homogeneous_components(&self) -> BTreeMap<u32, MultiPoly> {
        let mut out: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree())
                .or_insert_with(|| Self::zero(self.n))
                .terms
                .insert(m.clone(), c.clone());
        }
        out
    }

    fn check_n(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_n(other)?;
        Ok(self.add(other))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_n(other)?;
        Ok(self.mul(other))
    }

    /// Panics on a variable-count mismatch; see [`MultiPoly::try_add`].
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &CycloScalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        Self {
            n: self.n,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Panics on a variable-count mismatch; see [`MultiPoly::try_mul`].
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "variable count mismatch");
        let mut out = Self::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.n);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Partial derivative with respect to `x_i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exp = m.0.clone();
            exp[i] -= 1;
            out.add_term(Monomial(exp), &(c * &CycloScalar::from_i64(e as i64)));
        }
        out
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.n).map(|i| self.partial(i)).collect()
    }

    pub fn eval(&self, point: &[CycloScalar]) -> Result<CycloScalar> {
        if point.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: point.len(),
            });
        }
        let mut powers: Vec<Vec<CycloScalar>> = vec![vec![CycloScalar::one()]; self.n];
        let mut acc = CycloScalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap() * &point[i];
                    cache.push(next);
                }
                t = &t * &cache[e as usize];
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Substitutes `y_k -> images[k]`; the result lives in the images' ring.
    pub fn substitute(&self, images: &[MultiPoly]) -> Result<MultiPoly> {
        if images.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: images.len(),
            });
        }
        let target = images.first().map_or(0, MultiPoly::nvars);
        let mut powers: Vec<Vec<MultiPoly>> = images
            .iter()
            .map(|_| vec![MultiPoly::one(target)])
            .collect();
        let mut acc = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(target, c.clone());
            for (k, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[k];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap().mul(&images[k]);
                    cache.push(next);
                }
                t = t.mul(&cache[e as usize]);
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// `p(g x)`: substitutes `x_i -> sum_j g_ij x_j`.
    pub fn linear_substitute(&self, g: &Matrix) -> Result<MultiPoly> {
        if g.rows() != self.n || g.cols() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: g.rows(),
            });
        }
        let images: Vec<MultiPoly> = (0..self.n)
            .map(|i| LinearForm(g.row(i).to_vec()).to_poly())
            .collect();
        self.substitute(&images)
    }

    /// Re-expresses coefficients at conductor 1 where they are rational.
    pub fn demoted(&self) -> Self {
        Self {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.demoted()))
                .collect(),
        }
    }
}

impl MultiPoly {
    /// Renders with variables named `{var}1, {var}2, ...`.
    pub fn to_string_with(&self, var: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let vars: Vec<String> =
                m.0.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| match e {
                        1 => format!("{var}{}", i + 1),
                        _ => format!("{var}{}^{e}", i + 1),
                    })
                    .collect();
            parts.push(if vars.is_empty() {
                c.to_string()
            } else if c.is_one() {
                vars.join("*")
            } else if c.conductor() == 1 {
                format!("{c}*{}", vars.join("*"))
            } else {
                format!("({c})*{}", vars.join("*"))
            });
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with("x"))
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Vec<u32>,
    coeff: CycloScalar,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    n: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr {
            n: self.n,
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(m, c)| TermRepr {
                    exp: m.0.clone(),
                    coeff: c.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(d)?;
        if let Some(t) = repr.terms.iter().find(|t| t.exp.len() != repr.n) {
            return Err(D::Error::custom(format!(
                "exponent {:?} does not have {} entries",
                t.exp, repr.n
            )));
        }
        Ok(MultiPoly::from_terms(
            repr.n,
            repr.terms.into_iter().map(|t| (Monomial(t.exp), t.coeff)),
        ))
    }
}

/// Position of entry `(a, b)`, `a <= b`, in row-major upper-triangular order.
pub fn triangular_index(n: usize, a: usize, b: usize) -> usize {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    a * n - a * (a + 1) / 2 + b
}

/// Upper-triangular positions `(a, b)`, `a <= b`, row-major.
pub fn triangular_positions(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect()
}

/// Symmetric 2-tensor with polynomial entries, stored as its upper triangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymTensorPoly {
    n: usize,
    entries: Vec<MultiPoly>,
}

impl SymTensorPoly {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            entries: vec![MultiPoly::zero(n); n * (n + 1) / 2],
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> MultiPoly) -> Self {
        Self {
            n,
            entries: triangular_positions(n)
                .into_iter()
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn from_entries(n: usize, entries: Vec<MultiPoly>) -> Result<Self> {
        if entries.len() != n * (n + 1) / 2 {
            return Err(Error::DimensionMismatch {
                expected: n * (n + 1) / 2,
                got: entries.len(),
            });
        }
        if let Some(p) = entries.iter().find(|p| p.nvars() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.nvars(),
            });
        }
        Ok(Self { n, entries })
    }

    /// Constant tensor from a symmetric matrix.
    pub fn constant(m: &Matrix) -> Self {
        let n = m.rows();
        Self::from_fn(n, |a, b| MultiPoly::constant(n, m.get(a, b).clone()))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: usize, b: usize) -> &MultiPoly {
        &self.entries[triangular_index(self.n, a, b)]
    }

    pub fn entries(&self) -> &[MultiPoly] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(MultiPoly::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &CycloScalar) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn mul_poly(&self, p: &MultiPoly) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|e| e.mul(p)).collect(),
        }
    }

    /// Entrywise evaluation at a point.
    pub fn eval(&self, v: &[CycloScalar]) -> Result<Matrix> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: v.len(),
            });
        }
        let vals: Vec<CycloScalar> = self
            .entries
            .iter()
            .map(|p| p.eval(v))
            .collect::<Result<_>>()?;
        Ok(Matrix::from_fn(self.n, self.n, |a, b| {
            vals[triangular_index(self.n, a, b)].clone()
        }))
    }

    /// Degree `d` if every nonzero entry is homogeneous of degree `d`;
    /// `Some(None)` for the zero tensor, `None` when not homogeneous.
    pub fn homogeneous_degree(&self) -> Option<Option<u32>> {
        let mut deg = None;
        for e in &self.entries {
            if e.is_zero() {
                continue;
            }
            if !e.is_homogeneous() {
                return None;
            }
            let d = e.degree();
            match deg {
                None => deg = d,
                Some(_) if deg != d => return None,
                _ => {}
            }
        }
        Some(deg)
    }

    pub fn homogeneous_components(&self) -> BTreeMap<u32, SymTensorPoly> {
        let mut out: BTreeMap<u32, SymTensorPoly> = BTreeMap::new();
        for (k, e) in self.entries.iter().enumerate() {
            for (d, part) in e.homogeneous_components() {
                out.entry(d).or_insert_with(|| Self::zero(self.n)).entries[k] = part;
            }
        }
        out
    }

    /// `g^T sigma(g x) g`, the pull-back of the tensor by `x -> g x`.
    pub fn pull_back(&self, g: &Matrix) -> Result<Self> {
        let n = self.n;
        let moved: Vec<MultiPoly> = self
            .entries
            .iter()
            .map(|p| p.linear_substitute(g))
            .collect::<Result<_>>()?;
        let full = |c: usize, d: usize| &moved[triangular_index(n, c, d)];
        Ok(Self::from_fn(n, |a, b| {
            let mut acc = MultiPoly::zero(n);
            for c in 0..n {
                let gca = g.get(c, a);
                if gca.is_zero() {
                    continue;
                }
                for d in 0..n {
                    let gdb = g.get(d, b);
                    if gdb.is_zero() {
                        continue;
                    }
                    acc = acc.add(&full(c, d).scale(&(gca * gdb)));
                }
            }
            acc
        }))
    }

    pub fn demoted(&self) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(MultiPoly::demoted).collect(),
        }
    }
}

impl Serialize for SymTensorPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymTensorPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<MultiPoly>::deserialize(d)?;
        let n = entries.first().map_or(0, MultiPoly::nvars);
        SymTensorPoly::from_entries(n, entries).map_err(D::Error::custom)
    }
}

/// Symbolic Hessian: entry `(a, b)` is the second partial `d^2 p / dx_a dx_b`.
pub fn hessian_sym(p: &MultiPoly) -> SymTensorPoly {
    let grad = p.gradient();
    SymTensorPoly::from_fn(p.nvars(), |a, b| grad[a].partial(b))
}

/// Evaluates a tensor at a point (entrywise).
pub fn tensor_eval(sigma: &SymTensorPoly, v: &[CycloScalar]) -> Result<Matrix> {
    sigma.eval(v)
}

/// A linear form `v -> sum_j w_j v_j` in working coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinearForm(pub Vec<CycloScalar>);

impl LinearForm {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn eval(&self, v: &[CycloScalar]) -> Result<CycloScalar> {
        if v.len() != self.0.len() {
            return Err(Error::DimensionMismatch {
                expected: self.0.len(),
                got: v.len(),
            });
        }
        Ok(self.0.iter().zip(v).map(|(a, b)| a * b).sum())
    }

    pub fn to_poly(&self) -> MultiPoly {
        let n = self.0.len();
        MultiPoly::from_terms(
            n,
            self.0
                .iter()
                .enumerate()
                .map(|(i, c)| (Monomial::var(n, i), c.clone())),
        )
    }

    pub fn key(&self) -> String {
        let mut s = String::new();
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                s.push('|');
            }
            c.write_key(&mut s);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i)
    }

    fn c(v: i64) -> CycloScalar {
        CycloScalar::from_i64(v)
    }

    #[test]
    fn arithmetic_examples() {
        let p = x(2, 0).pow(2).add(&x(2, 1).pow(2));
        assert_eq!(p.partial(0), x(2, 0).scale(&c(2)));
        let prod = x(2, 0).add(&x(2, 1)).mul(&x(2, 0).sub(&x(2, 1)));
        assert_eq!(prod, x(2, 0).pow(2).sub(&x(2, 1).pow(2)));
        let triple = x(3, 0).mul(&x(3, 1)).mul(&x(3, 2));
        assert_eq!(triple.eval(&[c(1), c(2), c(3)]).unwrap(), c(6));
        assert!(x(2, 0).try_add(&x(3, 0)).is_err());
        assert!(triple.eval(&[c(1)]).is_err());
    }

    #[test]
    fn hessian_examples() {
        let h = hessian_sym(&x(2, 0).pow(2).add(&x(2, 1).pow(2)));
        assert_eq!(
            h.eval(&[c(5), c(-7)]).unwrap(),
            Matrix::from_i64_rows(&[vec![2, 0], vec![0, 2]])
        );
        let h = hessian_sym(&x(2, 0).mul(&x(2, 1)));
        assert_eq!(
            h.eval(&[c(3), c(4)]).unwrap(),
            Matrix::from_i64_rows(&[vec![0, 1], vec![1, 0]])
        );
        let h = hessian_sym(&x(1, 0).pow(4));
        assert_eq!(h.get(0, 0), &x(1, 0).pow(2).scale(&c(12)));
        let h = hessian_sym(&x(2, 0).pow(2).mul(&x(2, 1)));
        assert_eq!(
            h.eval(&[c(1), c(1)]).unwrap(),
            Matrix::from_i64_rows(&[vec![2, 2], vec![2, 0]])
        );
        assert_eq!(
            SymTensorPoly::zero(3).eval(&[c(1), c(2), c(3)]).unwrap(),
            Matrix::zeros(3, 3)
        );
    }

    #[test]
    fn triangular_layout() {
        let pos = triangular_positions(3);
        assert_eq!(pos, vec![(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]);
        for (k, &(a, b)) in pos.iter().enumerate() {
            assert_eq!(triangular_index(3, a, b), k);
            assert_eq!(triangular_index(3, b, a), k);
        }
    }

    #[test]
    fn json_format() {
        let p = x(2, 0)
            .pow(2)
            .add(&x(2, 1).scale(&CycloScalar::from_ratio(-1, 2)));
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(
            s,
            r#"{"n":2,"terms":[{"exp":[2,0],"coeff":"1"},{"exp":[0,1],"coeff":"-1/2"}]}"#
        );
        let back: MultiPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        let t = hessian_sym(&p.pow(2));
        let back: SymTensorPoly =
            serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        assert_eq!(back, t);
        assert!(
            serde_json::from_str::<MultiPoly>(r#"{"n":2,"terms":[{"exp":[1],"coeff":"1"}]}"#)
                .is_err()
        );
    }

    #[test]
    fn pull_back_of_swap() {
        // swapping coordinates sends dx^2 to dy^2
        let swap = Matrix::from_i64_rows(&[vec![0, 1], vec![1, 0]]);
        let dx2 = SymTensorPoly::constant(&Matrix::from_i64_rows(&[vec![1, 0], vec![0, 0]]));
        let dy2 = SymTensorPoly::constant(&Matrix::from_i64_rows(&[vec![0, 0], vec![0, 1]]));
        assert_eq!(dx2.pull_back(&swap).unwrap(), dy2);
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn poly(n: usize) -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec((prop::collection::vec(0u32..4, n), -5i64..6), 0..6).prop_map(
            move |terms| {
                MultiPoly::from_terms(
                    n,
                    terms
                        .into_iter()
                        .map(|(e, c)| (Monomial(e), CycloScalar::from_i64(c))),
                )
            },
        )
    }

    fn outer_sym(g: &[MultiPoly], h: &[MultiPoly]) -> SymTensorPoly {
        SymTensorPoly::from_fn(g.len(), |a, b| g[a].mul(&h[b]).add(&g[b].mul(&h[a])))
    }

    proptest! {
        #[test]
        fn hessian_is_symmetric(p in poly(3)) {
            let g = p.gradient();
            for a in 0..3 {
                for b in 0..3 {
                    prop_assert_eq!(g[a].partial(b), g[b].partial(a));
                }
            }
        }

        #[test]
        fn hessian_product_rule(p in poly(3), q in poly(3)) {
            let lhs = hessian_sym(&p.mul(&q));
            let rhs = hessian_sym(&q).mul_poly(&p)
                .add(&hessian_sym(&p).mul_poly(&q))
                .add(&outer_sym(&p.gradient(), &q.gradient()));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn euler_identity(p in poly(3), d in 0u32..5) {
            let h = p.homogeneous_components().remove(&d).unwrap_or_else(|| MultiPoly::zero(3));
            let euler = (0..3).fold(MultiPoly::zero(3), |acc, i| acc.add(&MultiPoly::var(3, i).mul(&h.partial(i))));
            prop_assert_eq!(euler, h.scale(&CycloScalar::from_i64(d as i64)));
        }
    }
}
