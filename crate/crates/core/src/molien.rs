//! Poincaré series of invariants and of equivariant symmetric 2-tensors by
//! census summation, cycle-index summation and closed forms, plus
//! extraction of the ratio polynomial.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{CycloScalar, TruncSeries, UniPoly};
use crate::error::{Error, Result};
use crate::groups::{Census, GroupSpec, GroupType, ReflectionGroup};

/// The tensor type whose Poincaré series is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Character {
    Trivial,
    Sym2,
}

impl FromStr for Character {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trivial" => Ok(Character::Trivial),
            "sym2" => Ok(Character::Sym2),
            _ => Err(Error::Parse(format!("unknown tensor type '{s}'"))),
        }
    }
}

/// Families with closed-form ratio polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    I2,
    A,
    B,
    D,
}

/// `sum (d_i - 1) + 2`: one step past the top coinvariant degree.
pub fn default_truncation(degrees: &[u32]) -> usize {
    degrees.iter().map(|&d| d as usize - 1).sum::<usize>() + 2
}

fn sym2_character(p: &UniPoly, n: usize) -> CycloScalar {
    let tr = -p.coeff(n - 1);
    let c2 = if n >= 2 {
        p.coeff(n - 2)
    } else {
        CycloScalar::zero()
    };
    let sq = &tr * &tr;
    let tr_sq = &sq - &c2.scale(&BigRational::from_integer(2.into()));
    (&tr_sq + &sq).scale(&BigRational::new(1.into(), 2.into()))
}

fn finish(total: TruncSeries, order: u64) -> Result<TruncSeries> {
    let s = total.scale(&CycloScalar::from_ratio(1, order as i64));
    s.demote()
        .ok_or_else(|| Error::Internal("Molien sum did not land in Q".into()))
}

/// `(1/|W|) sum_g chi(g) / det(1 - t g)`, grouped by characteristic
/// polynomial.
pub fn molien_series(census: &Census, ch: Character, order: usize) -> Result<TruncSeries> {
    let n = census.rank;
    let terms: Vec<TruncSeries> = census
        .entries
        .par_iter()
        .map(|e| {
            // det(1 - t g) = t^n charpoly(1/t)
            let det = e.charpoly.reversed(n);
            let inv = TruncSeries::from_poly(&det, order).reciprocal()?;
            let chi = match ch {
                Character::Trivial => CycloScalar::one(),
                Character::Sym2 => sym2_character(&e.charpoly, n),
            };
            Ok(inv.scale(&chi.scale(&BigRational::from_integer(e.multiplicity.into()))))
        })
        .collect::<Result<_>>()?;
    let total = terms
        .into_iter()
        .fold(TruncSeries::zero(order), |a, b| a.add(&b));
    finish(total, census.order())
}

/// Direct Molien sum for `I2(n)` over `Q(zeta_n)`: rotations `a^j` have
/// eigenvalues `xi^j, xi^-j`; the `n` reflections contribute
/// `chi / (1 - t^2)` with `chi = 1`.
pub fn molien_dihedral_census(n: u32, ch: Character, order: usize) -> Result<TruncSeries> {
    if n < 2 {
        return Err(Error::InvalidSpec(format!("I2:{n} needs n >= 2")));
    }
    let one = CycloScalar::one();
    let mut total = TruncSeries::zero(order);
    for j in 0..n as i64 {
        let x = CycloScalar::root_of_unity(n, j);
        let xi = CycloScalar::root_of_unity(n, -j);
        let det = UniPoly::new(vec![one.clone(), -(&x + &xi), one.clone()]);
        let chi = match ch {
            Character::Trivial => one.clone(),
            Character::Sym2 => &(&one + &(&x * &x)) + &(&xi * &xi),
        };
        let inv = TruncSeries::from_poly(&det, order).reciprocal()?;
        total = total.add(&inv.scale(&chi));
    }
    let refl = UniPoly::from_i64s(&[1, 0, -1]);
    let inv = TruncSeries::from_poly(&refl, order).reciprocal()?;
    total = total.add(&inv.scale(&CycloScalar::from_i64(n as i64)));
    finish(total, 2 * n as u64)
}

/// Multiplicity vectors `k` with `sum i k_i = n` (index 0 is cycle length 1).
fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, k: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(k.clone());
            return;
        }
        for part in (1..=max.min(rest)).rev() {
            k[part - 1] += 1;
            go(rest - part, part, k, out);
            k[part - 1] -= 1;
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut vec![0; n], &mut out);
    out
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * k)
}

fn binom2(k: i64) -> i64 {
    k * (k - 1) / 2
}

fn poly_pow(p: &UniPoly, e: usize) -> UniPoly {
    (0..e).fold(UniPoly::one(), |acc, _| &acc * p)
}

/// `1 -/+ t^i`.
fn one_minus(i: usize, sign: i64) -> UniPoly {
    let mut c = vec![0i64; i + 1];
    c[0] = 1;
    c[i] += -sign;
    UniPoly::from_i64s(&c)
}

/// Molien sum over cycle types (type A) or signed cycle types (types B, D).
pub fn cycle_index_molien(
    family: Family,
    n: usize,
    ch: Character,
    order: usize,
) -> Result<TruncSeries> {
    match family {
        Family::I2 => {
            return Err(Error::InvalidSpec(
                "cycle index needs type A, B or D".into(),
            ))
        }
        Family::D if n < 2 => return Err(Error::InvalidSpec("type D needs n >= 2".into())),
        _ if n == 0 => return Err(Error::InvalidSpec("rank must be positive".into())),
        _ => {}
    }
    let nfact = factorial(n);
    let mut total = TruncSeries::zero(order);
    let mut add_term = |count: BigInt, chi: i64, det: UniPoly| -> Result<()> {
        if chi == 0 {
            return Ok(());
        }
        let w = CycloScalar::from_rational(BigRational::from_integer(count * chi));
        let inv = TruncSeries::from_poly(&det, order).reciprocal()?;
        total = total.add(&inv.scale(&w));
        Ok(())
    };
    let group_order;
    match family {
        Family::A => {
            group_order = nfact.clone();
            for k in partitions(n) {
                let mut denom = BigInt::one();
                let mut det = UniPoly::one();
                for (idx, &ki) in k.iter().enumerate() {
                    let i = idx + 1;
                    denom *= BigInt::from(i).pow(ki as u32) * factorial(ki);
                    det = &det * &poly_pow(&one_minus(i, 1), ki);
                }
                let (k1, k2) = (k[0] as i64, k.get(1).copied().unwrap_or(0) as i64);
                let chi = match ch {
                    Character::Trivial => 1,
                    Character::Sym2 => (k1 * k1 + k1) / 2 + k2,
                };
                add_term(&nfact / denom, chi, det)?;
            }
        }
        Family::B | Family::D => {
            let two = BigInt::from(2);
            group_order = match family {
                Family::B => &nfact * two.pow(n as u32),
                _ => &nfact * two.pow(n as u32 - 1),
            };
            for k in partitions(n) {
                let cycles: usize = k.iter().sum();
                // split every k_i into (k_i^+, k_i^-)
                let mut split = vec![0usize; n];
                loop {
                    let neg: usize = split.iter().sum();
                    if family == Family::B || neg.is_multiple_of(2) {
                        let mut denom = BigInt::one();
                        let mut det = UniPoly::one();
                        for (idx, &ki) in k.iter().enumerate() {
                            let i = idx + 1;
                            let (kp, km) = (ki - split[idx], split[idx]);
                            denom *= BigInt::from(i).pow(ki as u32) * factorial(kp) * factorial(km);
                            det = &det * &poly_pow(&one_minus(i, 1), kp);
                            det = &det * &poly_pow(&one_minus(i, -1), km);
                        }
                        let count = &nfact * two.pow((n - cycles) as u32) / denom;
                        let kp1 = (k[0] - split[0]) as i64;
                        let km1 = split[0] as i64;
                        let (kp2, km2) = if n >= 2 {
                            ((k[1] - split[1]) as i64, split[1] as i64)
                        } else {
                            (0, 0)
                        };
                        let chi = match ch {
                            Character::Trivial => 1,
                            Character::Sym2 => {
                                kp1 + km1 + binom2(kp1) + binom2(km1) + kp2 - kp1 * km1 - km2
                            }
                        };
                        add_term(count, chi, det)?;
                    }
                    // odometer over 0..=k_i
                    let mut idx = 0;
                    while idx < n && split[idx] == k[idx] {
                        split[idx] = 0;
                        idx += 1;
                    }
                    if idx == n {
                        break;
                    }
                    split[idx] += 1;
                }
            }
        }
        Family::I2 => unreachable!(),
    }
    let s = total.scale(&CycloScalar::from_rational(BigRational::new(
        BigInt::one(),
        group_order,
    )));
    s.demote()
        .ok_or_else(|| Error::Internal("cycle-index sum did not land in Q".into()))
}

/// `P_t(Sym^2 tensors) / P_t(invariants)` as a polynomial with nonnegative
/// integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RatioPolynomial {
    coeffs: Vec<u64>,
}

impl RatioPolynomial {
    /// Ascending coefficients; trailing zeros are trimmed.
    pub fn new(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> u64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn sum(&self) -> u64 {
        self.coeffs.iter().sum()
    }

    /// Exponent multiset in ascending order.
    pub fn exponents(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .flat_map(|(e, &c)| std::iter::repeat_n(e, c as usize))
            .collect()
    }

    pub fn from_exponents(exps: impl IntoIterator<Item = usize>) -> Self {
        let mut c = Vec::new();
        for e in exps {
            if c.len() <= e {
                c.resize(e + 1, 0);
            }
            c[e] += 1;
        }
        Self::new(c)
    }

    pub fn to_unipoly(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .map(|&c| CycloScalar::from_i64(c as i64))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut c = vec![0u64; self.coeffs.len() + other.coeffs.len()];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }
}

impl fmt::Display for RatioPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match (c, e) {
                (_, 0) => write!(f, "{c}")?,
                (1, 1) => f.write_str("t")?,
                (1, _) => write!(f, "t^{e}")?,
                (_, 1) => write!(f, "{c}*t")?,
                _ => write!(f, "{c}*t^{e}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Multiplies the Sym^2 series by `prod (1 - t^{d_i})` and checks that the
/// result is a polynomial of the expected shape.
pub fn ratio_polynomial(series: &TruncSeries, degrees: &[u32]) -> Result<RatioPolynomial> {
    let order = series.order();
    let need = default_truncation(degrees);
    if order < need {
        return Err(Error::SeriesInconsistency(format!(
            "truncation {order} is below the required {need}"
        )));
    }
    let mut s = series.clone();
    for &d in degrees {
        s = s.mul(&TruncSeries::from_poly(&one_minus(d as usize, 1), order));
    }
    let top_coinv: usize = degrees.iter().map(|&d| d as usize - 1).sum();
    let max_d = degrees.iter().copied().max().unwrap_or(1) as usize;
    let bound = top_coinv.min(2 * max_d - 2);
    let q = s
        .rational_coeffs()
        .ok_or_else(|| Error::SeriesInconsistency("non-rational coefficient".into()))?;
    for (k, c) in q.iter().enumerate().skip(bound + 1) {
        if !c.is_zero() {
            return Err(Error::SeriesInconsistency(format!(
                "guard coefficient of t^{k} is {c}, expected 0"
            )));
        }
    }
    let mut coeffs = Vec::with_capacity(bound + 1);
    for (k, c) in q.iter().take(bound + 1).enumerate() {
        if !c.is_integer() || c.is_negative() {
            return Err(Error::SeriesInconsistency(format!(
                "coefficient of t^{k} is {c}, expected a nonnegative integer"
            )));
        }
        coeffs.push(c.to_integer().to_u64().unwrap_or(u64::MAX));
    }
    let r = RatioPolynomial::new(coeffs);
    let n = degrees.len() as u64;
    if r.sum() != n * (n + 1) / 2 {
        return Err(Error::SeriesInconsistency(format!(
            "coefficient sum {} differs from rank n(n+1)/2 = {}",
            r.sum(),
            n * (n + 1) / 2
        )));
    }
    if r.coeff(0) == 0 {
        return Err(Error::SeriesInconsistency(
            "constant coefficient is 0".into(),
        ));
    }
    Ok(r)
}

fn to_ratio(p: &UniPoly) -> Result<RatioPolynomial> {
    let c = p
        .integer_coeffs()
        .ok_or_else(|| Error::Internal("closed form is not an integer polynomial".into()))?;
    if c.iter().any(|&x| x < 0) {
        return Err(Error::Internal(
            "closed form has a negative coefficient".into(),
        ));
    }
    Ok(RatioPolynomial::new(
        c.into_iter().map(|x| x as u64).collect(),
    ))
}

fn t_pow(k: usize) -> UniPoly {
    UniPoly::monomial(CycloScalar::one(), k)
}

/// Closed-form ratio polynomials for the dihedral and classical families.
pub fn closed_form_ratio(family: Family, n: usize) -> Result<RatioPolynomial> {
    let om = |k: usize| one_minus(k, 1);
    let p = match family {
        Family::I2 => {
            if n < 2 {
                return Err(Error::InvalidSpec("I2 needs n >= 2".into()));
            }
            &(&UniPoly::one() + &t_pow(2)) + &t_pow(n - 2)
        }
        Family::A => {
            if n == 0 {
                return Err(Error::InvalidSpec("rank must be positive".into()));
            }
            let first = om(n).exact_div(&om(1))?;
            let second = (&om(n - 1) * &om(n)).exact_div(&(&om(1) * &om(2)))?;
            &first + &second
        }
        Family::B => {
            if n == 0 {
                return Err(Error::InvalidSpec("rank must be positive".into()));
            }
            let first = om(2 * n).exact_div(&om(2))?;
            let num = &(&om(2 * n - 2) * &om(2 * n)) * &t_pow(2);
            &first + &num.exact_div(&(&om(2) * &om(4)))?
        }
        Family::D => {
            if n < 2 {
                return Err(Error::InvalidSpec("type D needs n >= 2".into()));
            }
            let first = om(2 * n).exact_div(&om(2))?;
            let lead = &t_pow(2) + &t_pow(n - 2);
            let num = &(&lead * &om(2 * n - 2)) * &om(n);
            &first + &num.exact_div(&(&om(2) * &om(4)))?
        }
    };
    to_ratio(&p)
}

/// Ratio of a product group from its factors:
/// `r_a + r_b + (sum t^{d_i - 1})(sum t^{e_j - 1})`.
pub fn product_ratio(
    ra: &RatioPolynomial,
    da: &[u32],
    rb: &RatioPolynomial,
    db: &[u32],
) -> RatioPolynomial {
    let sa = RatioPolynomial::from_exponents(da.iter().map(|&d| d as usize - 1));
    let sb = RatioPolynomial::from_exponents(db.iter().map(|&d| d as usize - 1));
    ra.add(rb).add(&sa.mul(&sb))
}

/// `prod 1 / (1 - t^{d_i})` to the given order.
pub fn invariant_series_from_degrees(degrees: &[u32], order: usize) -> Result<TruncSeries> {
    let mut s = TruncSeries::one(order);
    for &d in degrees {
        s = s.mul(&TruncSeries::from_poly(&one_minus(d as usize, 1), order).reciprocal()?);
    }
    Ok(s)
}

/// Sym^2 ratio of a group through enumeration and its census.
pub fn census_ratio(spec: &GroupSpec, bound: u128) -> Result<RatioPolynomial> {
    let g = ReflectionGroup::with_census(spec.clone(), bound)?;
    let census = g.census().ok_or(Error::NotEnumerated)?;
    let s = molien_series(census, Character::Sym2, default_truncation(&spec.degrees))?;
    ratio_polynomial(&s, &spec.degrees)
}

impl Family {
    /// Family and parameter of a dihedral or classical group.
    pub fn of(kind: &GroupType) -> Option<(Family, usize)> {
        match kind {
            GroupType::Dihedral(n) => Some((Family::I2, *n as usize)),
            GroupType::A(n) => Some((Family::A, *n as usize)),
            GroupType::B(n) => Some((Family::B, *n as usize)),
            GroupType::D(n) => Some((Family::D, *n as usize)),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{GroupSpec, ReflectionGroup, DEFAULT_ELEMENT_BOUND};

    fn census(s: &str) -> (GroupSpec, Census) {
        let spec = GroupSpec::parse(s).unwrap();
        let g = ReflectionGroup::with_census(spec.clone(), DEFAULT_ELEMENT_BOUND).unwrap();
        (spec, g.census().unwrap().clone())
    }

    fn ints(s: &TruncSeries) -> Vec<i64> {
        s.rational_coeffs()
            .unwrap()
            .iter()
            .map(|c| c.to_integer().to_i64().unwrap())
            .collect()
    }

    fn ratio(c: &[u64]) -> RatioPolynomial {
        RatioPolynomial::new(c.to_vec())
    }

    #[test]
    fn invariant_series_examples() {
        let (_, c) = census("I2:4");
        assert_eq!(
            ints(&molien_series(&c, Character::Trivial, 8).unwrap()),
            [1, 0, 1, 0, 2, 0, 2, 0, 3]
        );
        let (_, c) = census("A:2");
        assert_eq!(
            ints(&molien_series(&c, Character::Trivial, 4).unwrap()),
            [1, 1, 2, 2, 3]
        );
        // the trivial group on R: A(1)
        let (_, c) = census("A:1");
        assert_eq!(
            ints(&molien_series(&c, Character::Sym2, 3).unwrap()),
            [1, 1, 1, 1]
        );
    }

    #[test]
    fn dihedral_direct_route() {
        for (n, want) in [
            (5u32, vec![1, 0, 1, 1]),
            (2, vec![2, 0, 1]),
            (12, vec![1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 1]),
        ] {
            let d = [2, n];
            let s = molien_dihedral_census(n, Character::Sym2, default_truncation(&d)).unwrap();
            assert_eq!(
                ratio_polynomial(&s, &d).unwrap(),
                ratio(&want.iter().map(|&x| x as u64).collect::<Vec<_>>()),
                "n={n}"
            );
        }
    }

    #[test]
    fn direct_dihedral_equals_census() {
        for n in 2..=8u32 {
            let (spec, c) = census(&format!("I2:{n}"));
            let order = default_truncation(&spec.degrees);
            for ch in [Character::Trivial, Character::Sym2] {
                assert_eq!(
                    molien_series(&c, ch, order).unwrap(),
                    molien_dihedral_census(n, ch, order).unwrap()
                );
            }
        }
    }

    #[test]
    fn cycle_index_examples() {
        let (_, c) = census("A:3");
        assert_eq!(
            cycle_index_molien(Family::A, 3, Character::Trivial, 6).unwrap(),
            molien_series(&c, Character::Trivial, 6).unwrap()
        );
        let s =
            cycle_index_molien(Family::B, 2, Character::Sym2, default_truncation(&[2, 4])).unwrap();
        assert_eq!(ratio_polynomial(&s, &[2, 4]).unwrap(), ratio(&[1, 0, 2]));
        let d = [2, 4, 6, 4];
        let s = cycle_index_molien(Family::D, 4, Character::Sym2, default_truncation(&d)).unwrap();
        assert_eq!(
            ratio_polynomial(&s, &d).unwrap(),
            ratio(&[1, 0, 3, 0, 3, 0, 3])
        );
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_form_ratio(Family::A, 3).unwrap(), ratio(&[2, 2, 2]));
        assert_eq!(closed_form_ratio(Family::B, 2).unwrap(), ratio(&[1, 0, 2]));
        assert_eq!(
            closed_form_ratio(Family::I2, 6).unwrap(),
            ratio(&[1, 0, 1, 0, 1])
        );
        assert_eq!(
            closed_form_ratio(Family::D, 3).unwrap(),
            ratio(&[1, 1, 2, 1, 1])
        );
        assert_eq!(closed_form_ratio(Family::D, 2).unwrap(), ratio(&[2, 0, 1]));
        assert_eq!(closed_form_ratio(Family::A, 1).unwrap(), ratio(&[1]));
    }

    #[test]
    fn h3_ratio_from_census() {
        let (spec, c) = census("H3");
        let s = molien_series(&c, Character::Sym2, default_truncation(&spec.degrees)).unwrap();
        assert_eq!(
            ratio_polynomial(&s, &spec.degrees).unwrap(),
            ratio(&[1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1])
        );
    }

    #[test]
    fn guard_band_detects_corruption() {
        let (spec, mut c) = census("B:2");
        c.entries[0].multiplicity += 1;
        let s = molien_series(&c, Character::Sym2, default_truncation(&spec.degrees)).unwrap();
        assert!(matches!(
            ratio_polynomial(&s, &spec.degrees),
            Err(Error::SeriesInconsistency(_))
        ));
        let short = molien_series(&census("B:2").1, Character::Sym2, 3).unwrap();
        assert!(ratio_polynomial(&short, &spec.degrees).is_err());
    }

    #[test]
    fn product_identity_on_small_products() {
        for (a, b) in [
            ("A1sign", "A1sign"),
            ("I2:3", "A1sign"),
            ("A:2", "A:2"),
            ("I2:3", "A:2"),
        ] {
            let (sa, ca) = census(a);
            let (sb, cb) = census(b);
            let (sp, cp) = census(&format!("{a}x{b}"));
            let r = |spec: &GroupSpec, c: &Census| {
                let s =
                    molien_series(c, Character::Sym2, default_truncation(&spec.degrees)).unwrap();
                ratio_polynomial(&s, &spec.degrees).unwrap()
            };
            let expect = product_ratio(&r(&sa, &ca), &sa.degrees, &r(&sb, &cb), &sb.degrees);
            assert_eq!(r(&sp, &cp), expect, "{a} x {b}");
        }
    }

    #[test]
    fn display() {
        assert_eq!(ratio(&[2, 1, 0, 3]).to_string(), "2 + t + 3*t^3");
        assert_eq!(ratio(&[1, 0, 1]).to_string(), "1 + t^2");
    }
}
