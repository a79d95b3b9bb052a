//! Candidate generator sets `T`, their Hessians at a point, and exact
//! certification of Hessian bases.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::CycloScalar;
use crate::error::{Error, Result};
use crate::invariants::{BasicInvariant, InvariantSystem, PointData, RegularVector};
use crate::linalg::Matrix;
use crate::molien::{Family, RatioPolynomial};
use crate::poly::triangular_positions;

pub const CERTIFICATE_SCHEMA: &str = "hessbasis.certificate/1";
pub const ENGINE_VERSION: &str = concat!("hessbasis ", env!("CARGO_PKG_VERSION"));

/// `rho_i` or `rho_i * rho_j` (zero-based indices, `i <= j`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CandidateEntry {
    Single(usize),
    Pair(usize, usize),
}

impl CandidateEntry {
    pub fn pair(i: usize, j: usize) -> Self {
        CandidateEntry::Pair(i.min(j), i.max(j))
    }

    /// Polynomial degree of the entry.
    pub fn degree(&self, degrees: &[u32]) -> u32 {
        match *self {
            CandidateEntry::Single(i) => degrees[i],
            CandidateEntry::Pair(i, j) => degrees[i] + degrees[j],
        }
    }

    /// Degree of its Hessian entries (negative for a linear invariant).
    pub fn hessian_degree(&self, degrees: &[u32]) -> i64 {
        self.degree(degrees) as i64 - 2
    }

    fn max_index(&self) -> usize {
        match *self {
            CandidateEntry::Single(i) => i,
            CandidateEntry::Pair(_, j) => j,
        }
    }

    fn shifted(&self, by: usize) -> Self {
        match *self {
            CandidateEntry::Single(i) => CandidateEntry::Single(i + by),
            CandidateEntry::Pair(i, j) => CandidateEntry::Pair(i + by, j + by),
        }
    }
}

impl fmt::Display for CandidateEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CandidateEntry::Single(i) => write!(f, "r{}", i + 1),
            CandidateEntry::Pair(i, j) => write!(f, "r{}*r{}", i + 1, j + 1),
        }
    }
}

impl FromStr for CandidateEntry {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let idx = |t: &str| -> Result<usize> {
            let t = t.trim();
            let body = t
                .strip_prefix('r')
                .or_else(|| t.strip_prefix("rho"))
                .ok_or_else(|| Error::Parse(format!("bad invariant name '{t}'")))?;
            match body.parse::<usize>() {
                Ok(k) if k >= 1 => Ok(k - 1),
                _ => Err(Error::Parse(format!("bad invariant name '{t}'"))),
            }
        };
        if let Some((a, e)) = s.split_once('^') {
            if e.trim() != "2" {
                return Err(Error::Parse(format!("bad candidate entry '{s}'")));
            }
            let i = idx(a)?;
            return Ok(CandidateEntry::Pair(i, i));
        }
        match s.split('*').collect::<Vec<_>>().as_slice() {
            [a] => Ok(CandidateEntry::Single(idx(a)?)),
            [a, b] => Ok(CandidateEntry::pair(idx(a)?, idx(b)?)),
            _ => Err(Error::Parse(format!("bad candidate entry '{s}'"))),
        }
    }
}

/// A candidate set `T` of invariants whose Hessians may form a basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CandidateSet {
    pub entries: Vec<CandidateEntry>,
}

impl CandidateSet {
    pub fn new(entries: Vec<CandidateEntry>) -> Self {
        Self { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn hessian_degrees(&self, degrees: &[u32]) -> Vec<i64> {
        self.entries
            .iter()
            .map(|e| e.hessian_degree(degrees))
            .collect()
    }

    /// `sum t^{deg - 2}` over the entries, if all exponents are nonnegative.
    pub fn ratio(&self, degrees: &[u32]) -> Option<RatioPolynomial> {
        let h = self.hessian_degrees(degrees);
        if h.iter().any(|&d| d < 0) {
            return None;
        }
        Some(RatioPolynomial::from_exponents(
            h.into_iter().map(|d| d as usize),
        ))
    }

    pub fn parse(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(str::parse)
            .collect::<Result<_>>()?;
        Ok(Self { entries })
    }

    fn check_for(&self, n: usize) -> Result<()> {
        let l = n * (n + 1) / 2;
        if self.entries.len() != l {
            return Err(Error::InvalidCandidate(format!(
                "set has {} entries, rank {n} needs {l}",
                self.entries.len()
            )));
        }
        if let Some(e) = self.entries.iter().find(|e| e.max_index() >= n) {
            return Err(Error::InvalidCandidate(format!(
                "{e} is out of range for rank {n}"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for CandidateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl Serialize for CandidateSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let parts: Vec<String> = self.entries.iter().map(ToString::to_string).collect();
        parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CandidateSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let parts = Vec::<String>::deserialize(d)?;
        let entries = parts
            .iter()
            .map(|p| p.parse().map_err(D::Error::custom))
            .collect::<std::result::Result<_, _>>()?;
        Ok(Self { entries })
    }
}

/// Singles `rho_i` then pairs `rho_i rho_j` (`i <= j`) in lexicographic order.
fn pool(n: usize) -> Vec<CandidateEntry> {
    let mut v: Vec<CandidateEntry> = (0..n).map(CandidateEntry::Single).collect();
    for i in 0..n {
        for j in i..n {
            v.push(CandidateEntry::Pair(i, j));
        }
    }
    v
}

fn combinations<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    fn go<T: Clone>(items: &[T], k: usize, start: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i].clone());
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, 0, &mut Vec::new(), &mut out);
    out
}

/// All subsets of `{rho_i} u {rho_i rho_j}` whose Hessian degrees match the
/// ratio polynomial, optionally forced to contain every `rho_i`.
pub fn enumerate_candidate_sets(
    degrees: &[u32],
    ratio: &RatioPolynomial,
    require_all_singles: bool,
) -> Vec<CandidateSet> {
    let n = degrees.len();
    let all = pool(n);
    let index: BTreeMap<CandidateEntry, usize> =
        all.iter().enumerate().map(|(k, e)| (*e, k)).collect();
    let mut need: BTreeMap<i64, usize> = ratio
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(e, &c)| (e as i64, c as usize))
        .collect();
    let mut forced = Vec::new();
    if require_all_singles {
        // a linear invariant has zero Hessian and is never forced
        for i in (0..n).filter(|&i| degrees[i] >= 2) {
            let e = CandidateEntry::Single(i);
            match need.get_mut(&e.hessian_degree(degrees)) {
                Some(c) if *c > 0 => *c -= 1,
                _ => return vec![],
            }
            forced.push(e);
        }
    }
    let mut by_degree: BTreeMap<i64, Vec<CandidateEntry>> = BTreeMap::new();
    for e in &all {
        if require_all_singles && matches!(e, CandidateEntry::Single(i) if degrees[*i] >= 2) {
            continue;
        }
        by_degree
            .entry(e.hessian_degree(degrees))
            .or_default()
            .push(*e);
    }
    let mut partial: Vec<Vec<CandidateEntry>> = vec![forced];
    for (&h, &k) in &need {
        if k == 0 {
            continue;
        }
        let avail = by_degree.get(&h).map(Vec::as_slice).unwrap_or(&[]);
        let combos = combinations(avail, k);
        if combos.is_empty() {
            return vec![];
        }
        partial = partial
            .iter()
            .flat_map(|p| {
                combos.iter().map(move |c| {
                    let mut v = p.clone();
                    v.extend(c);
                    v
                })
            })
            .collect();
    }
    partial
        .into_iter()
        .map(|mut v| {
            v.sort_by_key(|e| index[e]);
            CandidateSet::new(v)
        })
        .collect()
}

/// Hessian of a candidate entry at the point the data was taken at, using
/// `Hess(ab) = grad a (x) grad b + grad b (x) grad a + a Hess b + b Hess a`.
pub fn point_hessian_from(entry: CandidateEntry, data: &[PointData]) -> Matrix {
    match entry {
        CandidateEntry::Single(i) => data[i].hessian.clone(),
        CandidateEntry::Pair(i, j) => {
            let (a, b) = (&data[i], &data[j]);
            let n = a.gradient.len();
            Matrix::from_fn(n, n, |r, c| {
                let t = &(&a.gradient[r] * &b.gradient[c]) + &(&b.gradient[r] * &a.gradient[c]);
                let u = &(&a.value * b.hessian.get(r, c)) + &(&b.value * a.hessian.get(r, c));
                (&t + &u).demoted()
            })
        }
    }
}

pub fn point_hessian(
    entry: CandidateEntry,
    invs: &[BasicInvariant],
    v: &[CycloScalar],
) -> Result<Matrix> {
    let data = invs
        .iter()
        .map(|i| i.point_data(v))
        .collect::<Result<Vec<_>>>()?;
    Ok(point_hessian_from(entry, &data))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Certified,
    Degenerate,
}

/// A candidate set, an evaluation point and the exact determinant of the
/// matrix of upper-triangular Hessian entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: String,
    pub engine_version: String,
    pub group: String,
    pub set: CandidateSet,
    pub point: Vec<CycloScalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Matrix>,
    pub determinant: CycloScalar,
    pub verdict: Verdict,
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }

    pub fn without_matrix(mut self) -> Self {
        self.matrix = None;
        self
    }

    /// Recomputes the certificate from scratch and compares it field by field.
    pub fn reverify(&self) -> Result<bool> {
        let spec = crate::groups::GroupSpec::parse(&self.group)?;
        let sys = InvariantSystem::new(&spec)?;
        let v = sys.regular_vector(self.point.clone())?;
        let fresh = certify(&self.set, &sys.invariants, &v, &self.group)?;
        Ok(fresh.determinant == self.determinant
            && fresh.verdict == self.verdict
            && self
                .matrix
                .as_ref()
                .is_none_or(|m| Some(m) == fresh.matrix.as_ref()))
    }
}

/// Point data of all invariants at one certified point, shared across
/// candidate sets.
pub struct Certifier<'a> {
    group: String,
    point: &'a RegularVector,
    data: Vec<PointData>,
}

impl<'a> Certifier<'a> {
    pub fn new(invs: &[BasicInvariant], v: &'a RegularVector, group: &str) -> Result<Self> {
        if !v.certified {
            return Err(Error::NotRegular);
        }
        let data = invs
            .iter()
            .map(|i| i.point_data(&v.point))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            group: group.to_string(),
            point: v,
            data,
        })
    }

    pub fn matrix(&self, set: &CandidateSet) -> Result<Matrix> {
        let n = self.point.point.len();
        set.check_for(n)?;
        let pos = triangular_positions(n);
        let l = pos.len();
        let rows: Vec<Matrix> = set
            .entries
            .par_iter()
            .map(|&e| point_hessian_from(e, &self.data))
            .collect();
        Ok(Matrix::from_fn(l, l, |r, c| {
            let (a, b) = pos[c];
            rows[r].get(a, b).clone()
        }))
    }

    pub fn certify(&self, set: &CandidateSet) -> Result<Certificate> {
        let m = self.matrix(set)?;
        let determinant = m.det()?.demoted();
        let verdict = if determinant.is_zero() {
            Verdict::Degenerate
        } else {
            Verdict::Certified
        };
        Ok(Certificate {
            schema: CERTIFICATE_SCHEMA.into(),
            engine_version: ENGINE_VERSION.into(),
            group: self.group.clone(),
            set: set.clone(),
            point: self.point.point.clone(),
            matrix: Some(m),
            determinant,
            verdict,
        })
    }

    pub fn certify_all(&self, sets: &[CandidateSet]) -> Result<Vec<Certificate>> {
        sets.par_iter().map(|s| self.certify(s)).collect()
    }
}

/// Exact determinant of the Hessian-entry matrix of `set` at `v`.
pub fn certify(
    set: &CandidateSet,
    invs: &[BasicInvariant],
    v: &RegularVector,
    group: &str,
) -> Result<Certificate> {
    Certifier::new(invs, v, group)?.certify(set)
}

/// A required `k` and its admissible one-based pairs `(i, j)`, `i <= j`,
/// with `i + j = k`.
pub type T0Option = (usize, Vec<(usize, usize)>);

/// The pairs that may be removed into `T_0`, one group per required `k`.
pub fn classical_t0_options(family: Family, n: usize) -> Result<Vec<T0Option>> {
    let (range, top) = match family {
        Family::A if n >= 1 => (n + 2..=2 * n, n),
        Family::B if n >= 1 => (n + 1..=2 * n, n),
        Family::D if n >= 2 => (n..=2 * n - 2, n - 1),
        Family::I2 => {
            return Err(Error::InvalidSpec(
                "dihedral groups use dihedral_basis".into(),
            ))
        }
        _ => {
            return Err(Error::InvalidSpec(format!(
                "rank {n} is too small for this type"
            )))
        }
    };
    Ok(range
        .map(|k| {
            let lo = k.saturating_sub(top).max(1);
            (k, (lo..=k / 2).map(|i| (i, k - i)).collect())
        })
        .collect())
}

/// The classical `T = ({rho_i} u {rho_i rho_j}) \ T_0`. `t0_choice` lists one
/// one-based pair per required `k` in increasing `k`; `None` takes the
/// lexicographically smallest pair for each `k`.
pub fn classical_t(
    family: Family,
    n: usize,
    t0_choice: Option<&[(usize, usize)]>,
) -> Result<CandidateSet> {
    let options = classical_t0_options(family, n)?;
    let chosen: Vec<(usize, usize)> = match t0_choice {
        None => options.iter().map(|(_, o)| o[0]).collect(),
        Some(c) => {
            if c.len() != options.len() {
                return Err(Error::InvalidCandidate(format!(
                    "T0 needs one pair for each of {} values of k, got {}",
                    options.len(),
                    c.len()
                )));
            }
            for ((k, allowed), &(i, j)) in options.iter().zip(c) {
                let p = (i.min(j), i.max(j));
                if !allowed.contains(&p) {
                    return Err(Error::InvalidCandidate(format!(
                        "pair (r{i}, r{j}) is not admissible for k = {k}"
                    )));
                }
            }
            c.iter().map(|&(i, j)| (i.min(j), i.max(j))).collect()
        }
    };
    let mut t0: Vec<CandidateEntry> = chosen
        .iter()
        .map(|&(i, j)| CandidateEntry::Pair(i - 1, j - 1))
        .collect();
    match family {
        Family::A => t0.push(CandidateEntry::Single(0)),
        Family::D => t0.push(CandidateEntry::Pair(n - 2, n - 1)),
        _ => {}
    }
    Ok(CandidateSet::new(
        pool(n).into_iter().filter(|e| !t0.contains(e)).collect(),
    ))
}

/// Every classical `T` the theorem permits.
pub fn all_classical_t(family: Family, n: usize) -> Result<Vec<CandidateSet>> {
    let options = classical_t0_options(family, n)?;
    let mut choices: Vec<Vec<(usize, usize)>> = vec![vec![]];
    for (_, o) in &options {
        choices = choices
            .iter()
            .flat_map(|c| {
                o.iter().map(move |p| {
                    let mut v = c.clone();
                    v.push(*p);
                    v
                })
            })
            .collect();
    }
    choices
        .iter()
        .map(|c| classical_t(family, n, Some(c)))
        .collect()
}

/// `{rho_1, rho_1^2, rho_2}` for `I2(n)`.
pub fn dihedral_basis() -> CandidateSet {
    CandidateSet::new(vec![
        CandidateEntry::Single(0),
        CandidateEntry::Pair(0, 0),
        CandidateEntry::Single(1),
    ])
}

/// Basis for `W_a x W_b`: the factor sets plus every cross product
/// `rho_i psi_j`.
pub fn product_basis(ta: &CandidateSet, na: usize, tb: &CandidateSet, nb: usize) -> CandidateSet {
    let mut entries = ta.entries.clone();
    entries.extend(tb.entries.iter().map(|e| e.shifted(na)));
    for i in 0..na {
        for j in 0..nb {
            entries.push(CandidateEntry::Pair(i, na + j));
        }
    }
    CandidateSet::new(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::GroupSpec;
    use crate::poly::{hessian_sym, MultiPoly};

    fn set(s: &str) -> CandidateSet {
        CandidateSet::parse(s).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<CycloScalar> {
        v.iter().map(|&x| CycloScalar::from_i64(x)).collect()
    }

    #[test]
    fn parse_and_print() {
        let s = set("r1, r1*r1, r2");
        assert_eq!(s.to_string(), "r1,r1*r1,r2");
        assert_eq!(set("r2*r1").entries[0], CandidateEntry::Pair(0, 1));
        assert_eq!(set("r3^2").entries[0], CandidateEntry::Pair(2, 2));
        assert!(CandidateSet::parse("x1").is_err());
        assert!(CandidateSet::parse("r0").is_err());
    }

    #[test]
    fn dihedral_four_has_one_set() {
        let r = RatioPolynomial::new(vec![1, 0, 2]);
        let sets = enumerate_candidate_sets(&[2, 4], &r, true);
        assert_eq!(sets, vec![set("r1,r2,r1*r1")]);
    }

    #[test]
    fn type_a_does_not_force_the_linear_invariant() {
        let r = crate::molien::closed_form_ratio(Family::A, 3).unwrap();
        let t = classical_t(Family::A, 3, None).unwrap();
        assert_eq!(
            enumerate_candidate_sets(&[1, 2, 3], &r, true),
            vec![t.clone()]
        );
        assert!(enumerate_candidate_sets(&[1, 2, 3], &r, false).contains(&t));
    }

    #[test]
    fn point_hessian_examples() {
        let sys = InvariantSystem::new(&GroupSpec::parse("I2:5").unwrap()).unwrap();
        let v = ints(&[1, 2]);
        let h = point_hessian(CandidateEntry::Single(0), &sys.invariants, &v).unwrap();
        assert_eq!(h, Matrix::from_i64_rows(&[vec![2, 0], vec![0, 2]]));
        let h = point_hessian(CandidateEntry::Pair(0, 0), &sys.invariants, &v).unwrap();
        assert_eq!(h, Matrix::from_i64_rows(&[vec![28, 16], vec![16, 52]]));
    }

    #[test]
    fn chern_single_on_two_point_orbit() {
        use crate::groups::WeightOrbit;
        use crate::invariants::{InvariantRepr, OrbitInvariant};
        use crate::poly::LinearForm;
        use std::sync::Arc;
        let orbit = WeightOrbit::from_forms(vec![LinearForm(ints(&[1])), LinearForm(ints(&[-1]))]);
        let inv = BasicInvariant {
            degree: 2,
            repr: InvariantRepr::Chern(OrbitInvariant::new(Arc::new(orbit), 2)),
        };
        let h = point_hessian(CandidateEntry::Single(0), &[inv], &ints(&[7])).unwrap();
        assert_eq!(h, Matrix::from_i64_rows(&[vec![4]]));
    }

    #[test]
    fn pair_hessian_matches_symbolic() {
        for g in ["A:3", "B:2", "D:3", "I2:4"] {
            let sys = InvariantSystem::new(&GroupSpec::parse(g).unwrap()).unwrap();
            let n = sys.rank();
            let v: Vec<CycloScalar> = (0..n as i64)
                .map(|k| CycloScalar::from_ratio(2 * k + 3, k + 2))
                .collect();
            for i in 0..n {
                for j in i..n {
                    let p: MultiPoly = sys.invariants[i].expand().mul(&sys.invariants[j].expand());
                    let want = hessian_sym(&p).eval(&v).unwrap();
                    let got =
                        point_hessian(CandidateEntry::Pair(i, j), &sys.invariants, &v).unwrap();
                    assert_eq!(got, want, "{g} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn certification_examples() {
        let sys = InvariantSystem::new(&GroupSpec::parse("I2:4").unwrap()).unwrap();
        let v = sys.regular_vector(ints(&[1, 2])).unwrap();
        let c = certify(&set("r1,r2,r1*r1"), &sys.invariants, &v, "I2:4").unwrap();
        assert!(c.is_certified());
        let c = certify(&set("r1,r1*r1,r1*r1"), &sys.invariants, &v, "I2:4").unwrap();
        assert_eq!(c.verdict, Verdict::Degenerate);
        let bad = sys.regular_vector(ints(&[0, 0])).unwrap();
        assert!(matches!(
            certify(&set("r1,r2,r1*r1"), &sys.invariants, &bad, "I2:4"),
            Err(Error::NotRegular)
        ));
        assert!(certify(&set("r1,r2"), &sys.invariants, &v, "I2:4").is_err());
    }

    #[test]
    fn classical_t_examples() {
        assert_eq!(
            classical_t(Family::B, 2, Some(&[(1, 2), (2, 2)])).unwrap(),
            set("r1,r2,r1*r1")
        );
        assert_eq!(
            classical_t(Family::A, 3, Some(&[(2, 3), (3, 3)])).unwrap(),
            set("r2,r3,r1*r1,r1*r2,r1*r3,r2*r2")
        );
        assert_eq!(
            classical_t(Family::D, 3, Some(&[(1, 2), (2, 2)])).unwrap(),
            set("r1,r2,r3,r1*r1,r1*r3,r3*r3")
        );
        assert!(classical_t(Family::B, 2, Some(&[(1, 1), (2, 2)])).is_err());
        assert!(classical_t(Family::B, 2, Some(&[(1, 2)])).is_err());
        assert_eq!(classical_t(Family::A, 1, None).unwrap(), set("r1*r1"));
    }

    #[test]
    fn classical_t_matches_closed_form() {
        for (f, n0, n1) in [(Family::A, 1, 6), (Family::B, 1, 6), (Family::D, 2, 6)] {
            for n in n0..=n1 {
                let spec = match f {
                    Family::A => format!("A:{n}"),
                    Family::B => format!("B:{n}"),
                    _ => format!("D:{n}"),
                };
                let d = GroupSpec::parse(&spec).unwrap().degrees;
                let r = crate::molien::closed_form_ratio(f, n).unwrap();
                for t in all_classical_t(f, n).unwrap() {
                    assert_eq!(t.ratio(&d).as_ref(), Some(&r), "{spec} {t}");
                    assert!(enumerate_candidate_sets(&d, &r, false).contains(&t));
                }
            }
        }
    }

    #[test]
    fn product_basis_sizes() {
        let t = product_basis(&dihedral_basis(), 2, &set("r1"), 1);
        assert_eq!(t.len(), 6);
        assert_eq!(t.to_string(), "r1,r1*r1,r2,r3,r1*r3,r2*r3");
    }

    #[test]
    fn certificate_json_reverifies() {
        let sys = InvariantSystem::new(&GroupSpec::parse("I2:5").unwrap()).unwrap();
        let v = sys.default_regular_vector().unwrap();
        let c = certify(&dihedral_basis(), &sys.invariants, &v, "I2:5").unwrap();
        let json = serde_json::to_string(&c).unwrap();
        let back: Certificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
        assert_eq!(serde_json::to_string(&back).unwrap(), json);
        assert!(back.reverify().unwrap());
        let mut forged = back;
        forged.determinant = CycloScalar::from_i64(1);
        assert!(!forged.reverify().unwrap());
    }
}
