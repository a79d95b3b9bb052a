//! Equivariance checks, group averaging, and expression of an equivariant
//! tensor in a Hessian basis with invariant coefficients.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::CycloScalar;
use crate::basis::{CandidateEntry, CandidateSet};
use crate::error::{Error, Result};
use crate::groups::{enumerate_group, ReflectionGroup};
use crate::invariants::BasicInvariant;
use crate::linalg::{Matrix, Solution};
use crate::poly::{hessian_sym, Monomial, MultiPoly, SymTensorPoly};

pub const DECOMPOSITION_SCHEMA: &str = "hessbasis.decomposition/1";

/// `g^T sigma(g x) g = sigma(x)` for every generator.
pub fn check_equivariance(sigma: &SymTensorPoly, group: &ReflectionGroup) -> Result<bool> {
    if sigma.dim() != group.rank() {
        return Err(Error::DimensionMismatch {
            expected: group.rank(),
            got: sigma.dim(),
        });
    }
    for g in group.generators() {
        if sigma.pull_back(g)?.demoted() != *sigma {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(1/|W|) sum_g g^T sigma(g x) g` over the enumerated group.
pub fn symmetrize(
    sigma: &SymTensorPoly,
    group: &ReflectionGroup,
    bound: u128,
) -> Result<SymTensorPoly> {
    let owned;
    let g = match group.elements() {
        Some(_) => group,
        None => {
            owned = enumerate_group(group.clone(), bound)?;
            &owned
        }
    };
    let list = g.elements().ok_or(Error::NotEnumerated)?;
    let n = sigma.dim();
    let total = (0..list.len())
        .into_par_iter()
        .map(|i| sigma.pull_back(&list.matrix(i)))
        .try_reduce(|| SymTensorPoly::zero(n), |a, b| Ok(a.add(&b)))?;
    Ok(total
        .scale(&CycloScalar::from_ratio(1, list.len() as i64))
        .demoted())
}

/// Exponent vectors `e` with `sum e_i d_i = d`, first exponent descending.
pub fn invariant_monomial_basis(degrees: &[u32], d: u32) -> Vec<Vec<u32>> {
    fn go(degrees: &[u32], k: usize, rest: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == degrees.len() {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let dk = degrees[k].max(1);
        for e in (0..=rest / dk).rev() {
            if degrees[k] == 0 && e > 0 {
                continue;
            }
            cur.push(e);
            go(degrees, k + 1, rest - e * degrees[k], cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(degrees, 0, d, &mut Vec::new(), &mut out);
    out
}

/// `sigma = sum_i a_i(rho) Hess(Q_i)` with `a_i` polynomials in `y_1..y_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub set: CandidateSet,
    pub coeffs: Vec<MultiPoly>,
    pub residual: bool,
}

impl Decomposition {
    /// `sum_i a_i(rho) Hess(Q_i)` expanded in `x`.
    pub fn reconstruct(&self, invs: &[BasicInvariant]) -> Result<SymTensorPoly> {
        let polys = explicit(invs)?;
        let n = polys[0].nvars();
        let mut acc = SymTensorPoly::zero(n);
        for (entry, a) in self.set.entries.iter().zip(&self.coeffs) {
            if a.is_zero() {
                continue;
            }
            let h = hessian_sym(&entry_poly(*entry, &polys));
            acc = acc.add(&h.mul_poly(&a.substitute(&polys)?));
        }
        Ok(acc.demoted())
    }
}

fn explicit(invs: &[BasicInvariant]) -> Result<Vec<MultiPoly>> {
    invs.iter()
        .map(|i| {
            i.as_explicit()
                .cloned()
                .ok_or_else(|| Error::NeedsExplicit("orbit invariants are not expanded".into()))
        })
        .collect()
}

fn entry_poly(e: CandidateEntry, polys: &[MultiPoly]) -> MultiPoly {
    match e {
        CandidateEntry::Single(i) => polys[i].clone(),
        CandidateEntry::Pair(i, j) => polys[i].mul(&polys[j]),
    }
}

/// Solves degree by degree for the coefficients of `sigma` in the Hessian
/// basis given by `set`.
pub fn decompose(
    sigma: &SymTensorPoly,
    set: &CandidateSet,
    invs: &[BasicInvariant],
    group: &ReflectionGroup,
) -> Result<Decomposition> {
    let polys = explicit(invs)?;
    let n = group.rank();
    let l = n * (n + 1) / 2;
    if set.len() != l {
        return Err(Error::InvalidCandidate(format!(
            "set has {} entries, rank {n} needs {l}",
            set.len()
        )));
    }
    if !check_equivariance(sigma, group)? {
        return Err(Error::NotEquivariant);
    }
    let degrees: Vec<u32> = invs.iter().map(|i| i.degree).collect();
    let hess: Vec<SymTensorPoly> = set
        .entries
        .iter()
        .map(|e| hessian_sym(&entry_poly(*e, &polys)))
        .collect();
    let hdeg: Vec<i64> = set.hessian_degrees(&degrees);

    let components: Vec<(u32, SymTensorPoly)> =
        sigma.homogeneous_components().into_iter().collect();
    let solved = components
        .par_iter()
        .map(|(d, comp)| solve_component(*d, comp, &hess, &hdeg, &degrees, &polys))
        .collect::<Result<Vec<_>>>()?;

    let mut coeffs = vec![MultiPoly::zero(n); l];
    let mut residual = false;
    for part in solved {
        match part {
            None => residual = true,
            Some(terms) => {
                for (slot, exp, c) in terms {
                    coeffs[slot] = coeffs[slot].add(&MultiPoly::monomial(n, exp, c));
                }
            }
        }
    }
    Ok(Decomposition {
        set: set.clone(),
        coeffs: coeffs.into_iter().map(|c| c.demoted()).collect(),
        residual,
    })
}

type Terms = Vec<(usize, Vec<u32>, CycloScalar)>;

fn solve_component(
    d: u32,
    comp: &SymTensorPoly,
    hess: &[SymTensorPoly],
    hdeg: &[i64],
    degrees: &[u32],
    polys: &[MultiPoly],
) -> Result<Option<Terms>> {
    let n = degrees.len();
    let mut unknowns: Vec<(usize, Vec<u32>)> = Vec::new();
    for (slot, &h) in hdeg.iter().enumerate() {
        if h < 0 || h > d as i64 || hess[slot].is_zero() {
            continue;
        }
        for e in invariant_monomial_basis(degrees, d - h as u32) {
            unknowns.push((slot, e));
        }
    }
    let columns: Vec<SymTensorPoly> = unknowns
        .par_iter()
        .map(|(slot, e)| {
            let y = MultiPoly::monomial(n, e.clone(), CycloScalar::one());
            y.substitute(polys).map(|p| hess[*slot].mul_poly(&p))
        })
        .collect::<Result<_>>()?;

    let mut rows: BTreeMap<(usize, Monomial), usize> = BTreeMap::new();
    let mut keys = |t: &SymTensorPoly| {
        for (k, p) in t.entries().iter().enumerate() {
            for (m, _) in p.terms() {
                let len = rows.len();
                rows.entry((k, m.clone())).or_insert(len);
            }
        }
    };
    keys(comp);
    columns.iter().for_each(&mut keys);

    let mut a = Matrix::zeros(rows.len(), columns.len());
    for (c, col) in columns.iter().enumerate() {
        for (k, p) in col.entries().iter().enumerate() {
            for (m, v) in p.terms() {
                a.set(rows[&(k, m.clone())], c, v.clone());
            }
        }
    }
    let mut rhs = vec![CycloScalar::zero(); rows.len()];
    for (k, p) in comp.entries().iter().enumerate() {
        for (m, v) in p.terms() {
            rhs[rows[&(k, m.clone())]] = v.clone();
        }
    }
    match a.solve(&rhs)? {
        Solution::Unique(x) => Ok(Some(
            unknowns
                .into_iter()
                .zip(x)
                .filter(|(_, c)| !c.is_zero())
                .map(|((slot, e), c)| (slot, e, c))
                .collect(),
        )),
        Solution::Inconsistent => Ok(None),
        Solution::Underdetermined { rank } => Err(Error::Internal(format!(
            "degree {d} system has rank {rank} < {} unknowns; Hessians are dependent",
            columns.len()
        ))),
    }
}

/// A decomposition with random integer coefficients: each slot gets up to
/// three invariant monomials of weighted degree at most `max_weight`.
pub fn random_decomposition(
    set: &CandidateSet,
    degrees: &[u32],
    max_weight: u32,
    rng: &mut impl Rng,
) -> Decomposition {
    let n = degrees.len();
    let monomials: Vec<Vec<u32>> = (0..=max_weight)
        .flat_map(|w| invariant_monomial_basis(degrees, w))
        .collect();
    let coeffs = set
        .entries
        .iter()
        .map(|_| {
            let terms = (0..rng.gen_range(0..=3)).map(|_| {
                let e = monomials[rng.gen_range(0..monomials.len())].clone();
                let c = rng.gen_range(1..=4) * if rng.gen_bool(0.5) { 1 } else { -1 };
                (Monomial(e), CycloScalar::from_i64(c))
            });
            MultiPoly::from_terms(n, terms)
        })
        .collect();
    Decomposition {
        set: set.clone(),
        coeffs,
        residual: false,
    }
}

/// A symmetric tensor whose entries have a few random terms of degree at
/// most `max_degree`.
pub fn random_tensor(n: usize, max_degree: u32, rng: &mut impl Rng) -> SymTensorPoly {
    let entries = (0..n * (n + 1) / 2)
        .map(|_| {
            let terms: Vec<(Monomial, CycloScalar)> = (0..rng.gen_range(0..=2))
                .map(|_| {
                    let mut e = vec![0u32; n];
                    for _ in 0..rng.gen_range(0..=max_degree) {
                        e[rng.gen_range(0..n)] += 1;
                    }
                    (Monomial(e), CycloScalar::from_i64(rng.gen_range(-3..=3)))
                })
                .collect();
            MultiPoly::from_terms(n, terms)
        })
        .collect();
    SymTensorPoly::from_entries(n, entries).expect("entry count matches")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::dihedral_basis;
    use crate::groups::{build_generators, GroupSpec, DEFAULT_ELEMENT_BOUND};
    use crate::invariants::InvariantSystem;

    fn sys(s: &str) -> InvariantSystem {
        InvariantSystem::new(&GroupSpec::parse(s).unwrap()).unwrap()
    }

    fn dx2(n: usize) -> SymTensorPoly {
        let mut m = Matrix::zeros(n, n);
        m.set(0, 0, CycloScalar::one());
        SymTensorPoly::constant(&m)
    }

    fn y(n: usize, e: Vec<u32>, c: i64) -> MultiPoly {
        MultiPoly::monomial(n, e, CycloScalar::from_i64(c))
    }

    #[test]
    fn equivariance_examples() {
        let s = sys("I2:4");
        assert!(!check_equivariance(&dx2(2), &s.group).unwrap());
        let id = SymTensorPoly::constant(&Matrix::identity(2));
        assert!(check_equivariance(&id, &s.group).unwrap());
        for inv in &s.invariants {
            assert!(
                check_equivariance(&hessian_sym(inv.as_explicit().unwrap()), &s.group).unwrap()
            );
        }
    }

    #[test]
    fn monomial_basis_examples() {
        assert_eq!(
            invariant_monomial_basis(&[2, 4], 8),
            vec![vec![4, 0], vec![2, 1], vec![0, 2]]
        );
        assert_eq!(invariant_monomial_basis(&[2, 4], 0), vec![vec![0, 0]]);
        assert_eq!(
            invariant_monomial_basis(&[1, 2, 3], 3),
            vec![vec![3, 0, 0], vec![1, 1, 0], vec![0, 0, 1]]
        );
    }

    #[test]
    fn symmetrize_examples() {
        let klein = build_generators(&GroupSpec::parse("I2:2").unwrap()).unwrap();
        assert_eq!(
            symmetrize(&dx2(2), &klein, DEFAULT_ELEMENT_BOUND).unwrap(),
            dx2(2)
        );
        let g = build_generators(&GroupSpec::parse("I2:4").unwrap()).unwrap();
        let half =
            SymTensorPoly::constant(&Matrix::identity(2)).scale(&CycloScalar::from_ratio(1, 2));
        let s = symmetrize(&dx2(2), &g, DEFAULT_ELEMENT_BOUND).unwrap();
        assert_eq!(s, half);
        assert_eq!(symmetrize(&s, &g, DEFAULT_ELEMENT_BOUND).unwrap(), s);
    }

    #[test]
    fn decompose_examples() {
        // basis order {rho1, rho1^2, rho2}
        let t = CandidateSet::parse("r1,r1*r1,r2").unwrap();
        let s = sys("I2:5");
        let id = SymTensorPoly::constant(&Matrix::identity(2));
        let d = decompose(&id, &t, &s.invariants, &s.group).unwrap();
        assert!(!d.residual);
        assert_eq!(
            d.coeffs,
            vec![
                MultiPoly::constant(2, CycloScalar::from_ratio(1, 2)),
                MultiPoly::zero(2),
                MultiPoly::zero(2)
            ]
        );

        let s = sys("I2:4");
        let h2 = hessian_sym(s.invariants[1].as_explicit().unwrap());
        let d = decompose(&h2, &t, &s.invariants, &s.group).unwrap();
        assert_eq!(
            d.coeffs,
            vec![MultiPoly::zero(2), MultiPoly::zero(2), y(2, vec![0, 0], 1)]
        );

        let s = sys("I2:3");
        let r1 = s.invariants[0].as_explicit().unwrap();
        let r2 = s.invariants[1].as_explicit().unwrap();
        let sigma = hessian_sym(&r1.mul(r1))
            .mul_poly(r1)
            .add(&hessian_sym(r2).scale(&CycloScalar::from_i64(7)));
        let d = decompose(&sigma, &t, &s.invariants, &s.group).unwrap();
        assert_eq!(
            d.coeffs,
            vec![MultiPoly::zero(2), y(2, vec![1, 0], 1), y(2, vec![0, 0], 7)]
        );
        assert_eq!(d.reconstruct(&s.invariants).unwrap(), sigma);
        assert_eq!(
            dihedral_basis(),
            CandidateSet::parse("r1,r1*r1,r2").unwrap()
        );
    }

    #[test]
    fn rejects_non_equivariant_and_chern() {
        let s = sys("I2:4");
        assert!(matches!(
            decompose(&dx2(2), &dihedral_basis(), &s.invariants, &s.group),
            Err(Error::NotEquivariant)
        ));
        let h = sys("H3");
        let id = SymTensorPoly::constant(&Matrix::identity(3));
        let t = CandidateSet::parse("r1,r2,r3,r1*r1,r1*r2,r1*r3").unwrap();
        assert!(matches!(
            decompose(&id, &t, &h.invariants, &h.group),
            Err(Error::NeedsExplicit(_))
        ));
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::groups::{GroupSpec, DEFAULT_ELEMENT_BOUND};
    use crate::invariants::InvariantSystem;
    use crate::molien::Family;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn system(k: usize) -> (InvariantSystem, CandidateSet) {
        let specs = ["I2:3", "I2:4", "I2:5", "I2:6", "A:2", "A:3", "B:2", "B:3"];
        let spec = GroupSpec::parse(specs[k]).unwrap();
        let set = match Family::of(&spec.kind).unwrap() {
            (Family::I2, _) => crate::basis::dihedral_basis(),
            (f, n) => crate::basis::classical_t(f, n, None).unwrap(),
        };
        (InvariantSystem::new(&spec).unwrap(), set)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn reconstruct_then_decompose_round_trips(k in 0usize..8, seed in any::<u64>()) {
            let (sys, set) = system(k);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d = random_decomposition(&set, &sys.degrees(), 6, &mut rng);
            let sigma = d.reconstruct(&sys.invariants).unwrap();
            let back = decompose(&sigma, &set, &sys.invariants, &sys.group).unwrap();
            prop_assert_eq!(back, d);
        }

        #[test]
        fn symmetrized_tensors_decompose(k in 0usize..8, seed in any::<u64>()) {
            let (sys, set) = system(k);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = random_tensor(sys.rank(), 4, &mut rng);
            let s = symmetrize(&t, &sys.group, DEFAULT_ELEMENT_BOUND).unwrap();
            prop_assert!(check_equivariance(&s, &sys.group).unwrap());
            prop_assert_eq!(&symmetrize(&s, &sys.group, DEFAULT_ELEMENT_BOUND).unwrap(), &s);
            let d = decompose(&s, &set, &sys.invariants, &sys.group).unwrap();
            prop_assert!(!d.residual);
            prop_assert_eq!(d.reconstruct(&sys.invariants).unwrap(), s);
        }
    }
}
