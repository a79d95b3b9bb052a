//! Basic invariants per group type, Jacobians and regular vectors.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::CycloScalar;
use crate::error::{Error, Result};
use crate::fixtures::Fixtures;
use crate::groups::{
    build_generators, weight_orbit, GroupSpec, GroupType, ReflectionGroup, WeightOrbit,
    DEFAULT_ORBIT_BOUND,
};
use crate::linalg::Matrix;
use crate::poly::{hessian_sym, LinearForm, Monomial, MultiPoly};

/// Value, gradient and Hessian of an invariant at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct PointData {
    pub value: CycloScalar,
    pub gradient: Vec<CycloScalar>,
    pub hessian: Matrix,
}

/// `psi_m = sum_{l in O} l^m`, kept as the orbit.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitInvariant {
    orbit: Arc<WeightOrbit>,
    exponent: u32,
}

impl OrbitInvariant {
    pub fn new(orbit: Arc<WeightOrbit>, exponent: u32) -> Self {
        Self { orbit, exponent }
    }

    pub fn orbit(&self) -> &WeightOrbit {
        &self.orbit
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn point_data(&self, v: &[CycloScalar]) -> Result<PointData> {
        let n = self.orbit.dim();
        let m = self.exponent;
        let zero = || PointData {
            value: CycloScalar::zero(),
            gradient: vec![CycloScalar::zero(); n],
            hessian: Matrix::zeros(n, n),
        };
        let mf = CycloScalar::from_i64(m as i64);
        let mm1 = CycloScalar::from_i64(m as i64 * (m as i64 - 1));
        self.orbit
            .forms()
            .par_iter()
            .try_fold(zero, |mut acc, w| -> Result<PointData> {
                let a = w.eval(v)?;
                let p2 = if m >= 2 {
                    a.pow(m - 2)
                } else {
                    CycloScalar::zero()
                };
                let p1 = if m >= 2 {
                    &p2 * &a
                } else {
                    a.pow(m.saturating_sub(1))
                };
                acc.value += &(&p1 * &a);
                let g = &mf * &p1;
                let h = &mm1 * &p2;
                for (j, wj) in w.0.iter().enumerate() {
                    if wj.is_zero() {
                        continue;
                    }
                    acc.gradient[j] += &(&g * wj);
                    let hwj = &h * wj;
                    for (k, wk) in w.0.iter().enumerate() {
                        if !wk.is_zero() {
                            let cur = acc.hessian.get(j, k) + &(&hwj * wk);
                            acc.hessian.set(j, k, cur);
                        }
                    }
                }
                Ok(acc)
            })
            .try_reduce(zero, |mut a, b| {
                a.value += &b.value;
                for (x, y) in a.gradient.iter_mut().zip(&b.gradient) {
                    *x += y;
                }
                a.hessian = a.hessian.add(&b.hessian);
                Ok(a)
            })
            .map(|mut d| {
                d.value = d.value.demoted();
                d.gradient.iter_mut().for_each(|g| *g = g.demoted());
                d.hessian = Matrix::from_fn(n, n, |i, j| d.hessian.get(i, j).demoted());
                d
            })
    }

    /// Monomial expansion; only sensible for small orbits and exponents.
    pub fn expand(&self) -> MultiPoly {
        let n = self.orbit.dim();
        self.orbit
            .forms()
            .iter()
            .fold(MultiPoly::zero(n), |acc, w| {
                acc.add(&w.to_poly().pow(self.exponent))
            })
            .demoted()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum InvariantRepr {
    Explicit(MultiPoly),
    Chern(OrbitInvariant),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasicInvariant {
    pub degree: u32,
    pub repr: InvariantRepr,
}

impl BasicInvariant {
    pub fn explicit(p: MultiPoly) -> Self {
        Self {
            degree: p.degree().unwrap_or(0),
            repr: InvariantRepr::Explicit(p),
        }
    }

    pub fn as_explicit(&self) -> Option<&MultiPoly> {
        match &self.repr {
            InvariantRepr::Explicit(p) => Some(p),
            InvariantRepr::Chern(_) => None,
        }
    }

    pub fn expand(&self) -> MultiPoly {
        match &self.repr {
            InvariantRepr::Explicit(p) => p.clone(),
            InvariantRepr::Chern(o) => o.expand(),
        }
    }

    pub fn point_data(&self, v: &[CycloScalar]) -> Result<PointData> {
        match &self.repr {
            InvariantRepr::Chern(o) => o.point_data(v),
            InvariantRepr::Explicit(p) => {
                let grad = p.gradient();
                let gradient = grad.iter().map(|g| g.eval(v)).collect::<Result<Vec<_>>>()?;
                let hessian = hessian_sym(p).eval(v)?;
                Ok(PointData {
                    value: p.eval(v)?,
                    gradient,
                    hessian,
                })
            }
        }
    }

    pub fn value_at(&self, v: &[CycloScalar]) -> Result<CycloScalar> {
        match &self.repr {
            InvariantRepr::Explicit(p) => p.eval(v),
            InvariantRepr::Chern(o) => o.point_data(v).map(|d| d.value),
        }
    }

    pub fn gradient_at(&self, v: &[CycloScalar]) -> Result<Vec<CycloScalar>> {
        match &self.repr {
            InvariantRepr::Explicit(p) => p.gradient().iter().map(|g| g.eval(v)).collect(),
            InvariantRepr::Chern(o) => o.point_data(v).map(|d| d.gradient),
        }
    }

    pub fn hessian_at(&self, v: &[CycloScalar]) -> Result<Matrix> {
        self.point_data(v).map(|d| d.hessian)
    }
}

fn power_sum(n: usize, power: u32, scale: BigRational) -> MultiPoly {
    let c = CycloScalar::from_rational(scale);
    MultiPoly::from_terms(
        n,
        (0..n).map(|i| {
            let mut e = vec![0; n];
            e[i] = power;
            (Monomial(e), c.clone())
        }),
    )
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
}

fn dihedral_invariants(n: u32) -> Vec<MultiPoly> {
    let rho1 = power_sum(2, 2, BigRational::from_integer(1.into()));
    // Re((x + iy)^n)
    let rho2 = MultiPoly::from_terms(
        2,
        (0..=n / 2).map(|k| {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let c = binomial(n, 2 * k) * sign;
            (
                Monomial(vec![n - 2 * k, 2 * k]),
                CycloScalar::from_bigint(c),
            )
        }),
    );
    vec![rho1, rho2]
}

fn classical_invariants(kind: &GroupType, n: usize) -> Vec<MultiPoly> {
    let frac = |a: u32| BigRational::new(1.into(), a.into());
    match kind {
        GroupType::A(_) => (1..=n as u32).map(|j| power_sum(n, j, frac(j))).collect(),
        GroupType::B(_) => (1..=n as u32)
            .map(|j| power_sum(n, 2 * j, frac(2 * j)))
            .collect(),
        GroupType::D(_) => {
            let mut v: Vec<MultiPoly> = (1..n as u32)
                .map(|j| power_sum(n, 2 * j, frac(2 * j)))
                .collect();
            v.push(MultiPoly::monomial(n, vec![1; n], CycloScalar::one()));
            v
        }
        _ => unreachable!("not a classical type"),
    }
}

fn embed(p: &MultiPoly, total: usize, offset: usize) -> MultiPoly {
    MultiPoly::from_terms(
        total,
        p.terms().map(|(m, c)| {
            let mut e = vec![0; total];
            e[offset..offset + m.0.len()].copy_from_slice(&m.0);
            (Monomial(e), c.clone())
        }),
    )
}

fn embed_invariant(inv: &BasicInvariant, total: usize, offset: usize) -> BasicInvariant {
    let repr = match &inv.repr {
        InvariantRepr::Explicit(p) => InvariantRepr::Explicit(embed(p, total, offset)),
        InvariantRepr::Chern(o) => {
            let forms = o
                .orbit()
                .forms()
                .iter()
                .map(|w| {
                    let mut v = vec![CycloScalar::zero(); total];
                    v[offset..offset + w.dim()].clone_from_slice(&w.0);
                    LinearForm(v)
                })
                .collect();
            InvariantRepr::Chern(OrbitInvariant::new(
                Arc::new(WeightOrbit::from_forms(forms)),
                o.exponent(),
            ))
        }
    };
    BasicInvariant {
        degree: inv.degree,
        repr,
    }
}

/// `(0,...,0,1) C^{-1}` in the coroot basis, returned as its values on the
/// simple roots.
pub fn minimal_weight(c: &Matrix) -> Result<LinearForm> {
    let n = c.rows();
    if n == 0 || !c.is_square() {
        return Err(Error::MalformedCartan("matrix is not square".into()));
    }
    let inv = c.inverse()?;
    let mut e = vec![CycloScalar::zero(); n];
    e[n - 1] = CycloScalar::one();
    let coroot = inv.vec_mul(&e)?;
    let values = c.vec_mul(&coroot)?;
    Ok(LinearForm(
        values.iter().map(CycloScalar::demoted).collect(),
    ))
}

/// A group together with its basic invariants.
#[derive(Clone, Debug)]
pub struct InvariantSystem {
    pub group: ReflectionGroup,
    pub invariants: Vec<BasicInvariant>,
}

impl InvariantSystem {
    pub fn new(spec: &GroupSpec) -> Result<Self> {
        let group = build_generators(spec)?;
        let invariants = invariants_for(&group)?;
        Ok(Self { group, invariants })
    }

    pub fn spec(&self) -> &GroupSpec {
        self.group.spec()
    }

    pub fn rank(&self) -> usize {
        self.group.rank()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.invariants.iter().map(|i| i.degree).collect()
    }

    pub fn jacobian_at(&self, v: &[CycloScalar]) -> Result<Matrix> {
        jacobian_at(&self.invariants, v)
    }

    pub fn regular_vector(&self, point: Vec<CycloScalar>) -> Result<RegularVector> {
        RegularVector::certify(&self.invariants, point)
    }

    /// The default point for this group, certified.
    pub fn default_regular_vector(&self) -> Result<RegularVector> {
        let v = self.regular_vector(default_point(self.spec())?)?;
        if !v.certified {
            return Err(Error::Internal(format!(
                "default point for {} is not regular",
                self.spec().name()
            )));
        }
        Ok(v)
    }
}

fn invariants_for(group: &ReflectionGroup) -> Result<Vec<BasicInvariant>> {
    let spec = group.spec();
    let n = spec.rank;
    Ok(match &spec.kind {
        GroupType::Dihedral(m) => dihedral_invariants(*m)
            .into_iter()
            .map(BasicInvariant::explicit)
            .collect(),
        GroupType::A(_) | GroupType::B(_) | GroupType::D(_) => classical_invariants(&spec.kind, n)
            .into_iter()
            .map(BasicInvariant::explicit)
            .collect(),
        GroupType::Exceptional(_) => {
            let c = spec
                .cartan
                .as_ref()
                .ok_or_else(|| Error::MalformedCartan("missing Cartan matrix".into()))?;
            let seed = minimal_weight(c)?;
            let orbit = Arc::new(weight_orbit(group, &seed, DEFAULT_ORBIT_BOUND)?);
            spec.degrees
                .iter()
                .map(|&d| BasicInvariant {
                    degree: d,
                    repr: InvariantRepr::Chern(OrbitInvariant::new(orbit.clone(), d)),
                })
                .collect()
        }
        GroupType::Product(..) => {
            let (a, b) = (&spec.factors[0], &spec.factors[1]);
            let ia = invariants_for(&build_generators(a)?)?;
            let ib = invariants_for(&build_generators(b)?)?;
            ia.iter()
                .map(|i| embed_invariant(i, n, 0))
                .chain(ib.iter().map(|i| embed_invariant(i, n, a.rank)))
                .collect()
        }
    })
}

/// Basic invariants `rho_1..rho_n` with degrees `d_1..d_n`.
pub fn basic_invariants(spec: &GroupSpec) -> Result<Vec<BasicInvariant>> {
    InvariantSystem::new(spec).map(|s| s.invariants)
}

/// Checks every invariant against every generator: exact identity for
/// explicit invariants, equality at `samples` random rational points for
/// orbit invariants. A nonzero polynomial of degree `d` vanishes at a point
/// drawn uniformly from `S^n` with probability at most `d / |S|`.
pub fn verify_invariance(
    invs: &[BasicInvariant],
    group: &ReflectionGroup,
    samples: usize,
    seed: u64,
) -> Result<bool> {
    let n = group.rank();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Vec<CycloScalar>> = (0..samples)
        .map(|_| {
            (0..n)
                .map(|_| CycloScalar::from_ratio(rng.gen_range(-500..=500), rng.gen_range(1..=9)))
                .collect()
        })
        .collect();
    for inv in invs {
        for g in group.generators() {
            match &inv.repr {
                InvariantRepr::Explicit(p) => {
                    if p.linear_substitute(g)?.demoted() != *p {
                        return Ok(false);
                    }
                }
                InvariantRepr::Chern(_) => {
                    for v in &points {
                        if inv.value_at(&g.mul_vec(v)?)? != inv.value_at(v)? {
                            return Ok(false);
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

/// `J_ij = d rho_i / d x_j` at `v`.
pub fn jacobian_at(invs: &[BasicInvariant], v: &[CycloScalar]) -> Result<Matrix> {
    let rows = invs
        .iter()
        .map(|i| i.gradient_at(v))
        .collect::<Result<Vec<_>>>()?;
    let n = v.len();
    Ok(Matrix::from_fn(rows.len(), n, |i, j| rows[i][j].clone()))
}

/// Nonzero Jacobian determinant at `v`, and the determinant itself.
pub fn is_regular(invs: &[BasicInvariant], v: &[CycloScalar]) -> Result<(bool, CycloScalar)> {
    if invs.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: v.len(),
            got: invs.len(),
        });
    }
    let d = jacobian_at(invs, v)?.det()?.demoted();
    Ok((!d.is_zero(), d))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegularVector {
    pub point: Vec<CycloScalar>,
    pub certified: bool,
    pub jacobian_det: CycloScalar,
}

impl RegularVector {
    pub fn certify(invs: &[BasicInvariant], point: Vec<CycloScalar>) -> Result<Self> {
        let (certified, jacobian_det) = is_regular(invs, &point)?;
        Ok(Self {
            point,
            certified,
            jacobian_det,
        })
    }
}

fn default_point(spec: &GroupSpec) -> Result<Vec<CycloScalar>> {
    Ok(match &spec.kind {
        GroupType::Dihedral(_) => vec![CycloScalar::from_i64(1), CycloScalar::from_i64(2)],
        GroupType::A(_) | GroupType::B(_) | GroupType::D(_) => {
            (1..=spec.rank as i64).map(CycloScalar::from_i64).collect()
        }
        GroupType::Exceptional(e) => Fixtures::builtin().get(*e)?.regular_point(),
        GroupType::Product(..) => {
            let mut p = default_point(&spec.factors[0])?;
            p.extend(default_point(&spec.factors[1])?);
            p
        }
    })
}

/// The standard certified regular point for a group.
pub fn default_regular_vector(spec: &GroupSpec) -> Result<RegularVector> {
    InvariantSystem::new(spec)?.default_regular_vector()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Exceptional;

    fn ints(v: &[i64]) -> Vec<CycloScalar> {
        v.iter().map(|&x| CycloScalar::from_i64(x)).collect()
    }

    fn sys(s: &str) -> InvariantSystem {
        InvariantSystem::new(&GroupSpec::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn dihedral_four() {
        let s = sys("I2:4");
        let p = s.invariants[1].as_explicit().unwrap();
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        let six = CycloScalar::from_i64(6);
        let want = x
            .pow(4)
            .sub(&x.pow(2).mul(&y.pow(2)).scale(&six))
            .add(&y.pow(4));
        assert_eq!(p, &want);
        assert_eq!(s.degrees(), vec![2, 4]);
    }

    #[test]
    fn type_a_power_sums() {
        let s = sys("A:3");
        let v = ints(&[1, 2, 3]);
        assert_eq!(
            s.invariants[1].value_at(&v).unwrap(),
            CycloScalar::from_i64(7)
        );
        assert_eq!(
            s.invariants[2].value_at(&v).unwrap(),
            CycloScalar::from_i64(12)
        );
        let j = s.jacobian_at(&v).unwrap();
        assert_eq!(
            j,
            Matrix::from_i64_rows(&[vec![1, 1, 1], vec![1, 2, 3], vec![1, 4, 9]])
        );
        assert_eq!(j.det().unwrap(), CycloScalar::from_i64(2));
        assert!(!is_regular(&s.invariants, &ints(&[1, 1, 2])).unwrap().0);
    }

    #[test]
    fn invariance_holds() {
        for g in [
            "I2:5",
            "I2:6",
            "A:3",
            "B:3",
            "D:4",
            "H3",
            "F4",
            "I2:3xA1sign",
        ] {
            let s = sys(g);
            assert!(
                verify_invariance(&s.invariants, &s.group, 20, 7).unwrap(),
                "{g}"
            );
        }
    }

    #[test]
    fn minimal_weight_is_last_unit_vector() {
        for e in Exceptional::ALL {
            let c = Fixtures::builtin().get(e).unwrap().cartan_matrix().unwrap();
            let w = minimal_weight(&c).unwrap();
            let mut want = vec![CycloScalar::zero(); e.rank()];
            want[e.rank() - 1] = CycloScalar::one();
            assert_eq!(w.0, want, "{}", e.name());
        }
        assert!(minimal_weight(&Matrix::zeros(2, 2)).is_err());
    }

    #[test]
    fn chern_matches_expansion_on_h3() {
        let s = sys("H3");
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for inv in &s.invariants[..2] {
            let p = inv.expand();
            assert!(p.is_homogeneous());
            for _ in 0..5 {
                let v: Vec<CycloScalar> = (0..3)
                    .map(|_| CycloScalar::from_ratio(rng.gen_range(-9..=9), rng.gen_range(1..=4)))
                    .collect();
                let d = inv.point_data(&v).unwrap();
                assert_eq!(d.value, p.eval(&v).unwrap().demoted());
                let g: Vec<CycloScalar> = p
                    .gradient()
                    .iter()
                    .map(|q| q.eval(&v).unwrap().demoted())
                    .collect();
                assert_eq!(d.gradient, g);
                assert_eq!(d.hessian, hessian_sym(&p).eval(&v).unwrap());
            }
        }
    }

    #[test]
    fn zero_point_is_singular() {
        for g in ["B:3", "D:4", "I2:5", "H3"] {
            let s = sys(g);
            let (ok, d) = is_regular(&s.invariants, &vec![CycloScalar::zero(); s.rank()]).unwrap();
            assert!(!ok && d.is_zero(), "{g}");
        }
    }

    #[test]
    fn defaults_certify() {
        for g in ["A:4", "B:3", "D:4", "I2:7", "F4", "H3", "I2:3xA1sign"] {
            let v = default_regular_vector(&GroupSpec::parse(g).unwrap()).unwrap();
            assert!(v.certified, "{g}");
        }
        let f4 = default_regular_vector(&GroupSpec::parse("F4").unwrap()).unwrap();
        assert_eq!(f4.point, ints(&[2, -3, 5, 7]));
    }
}
