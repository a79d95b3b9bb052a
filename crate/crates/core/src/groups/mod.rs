//! Finite reflection groups: generators, enumeration, characteristic
//! polynomial census and weight orbits.

mod packed;
mod spec;

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

pub use packed::ElementList;
pub use spec::{product_group, Coordinates, Exceptional, GroupSpec, GroupType};

use crate::arith::{CycloScalar, UniPoly};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::LinearForm;

pub const DEFAULT_ELEMENT_BOUND: u128 = 1_000_000;
pub const LONG_ELEMENT_BOUND: u128 = 10_000_000;
pub const DEFAULT_ORBIT_BOUND: usize = 1_000_000;
pub const GROUP_SCHEMA: &str = "hessbasis.group/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub charpoly: UniPoly,
    pub multiplicity: u64,
}

/// Multiset of characteristic polynomials over the whole group.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Census {
    pub rank: usize,
    pub entries: Vec<CensusEntry>,
}

impl Census {
    pub fn order(&self) -> u64 {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    pub fn multiplicity_of(&self, p: &UniPoly) -> u64 {
        self.entries
            .iter()
            .filter(|e| &e.charpoly == p)
            .map(|e| e.multiplicity)
            .sum()
    }
}

#[derive(Clone, Debug)]
pub struct ReflectionGroup {
    spec: GroupSpec,
    generators: Vec<Matrix>,
    elements: Option<Arc<ElementList>>,
    census: Option<Census>,
}

impl ReflectionGroup {
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn rank(&self) -> usize {
        self.spec.rank
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    pub fn elements(&self) -> Option<&ElementList> {
        self.elements.as_deref()
    }

    pub fn census(&self) -> Option<&Census> {
        self.census.as_ref()
    }

    /// Builds generators, enumerates and computes the census in one go.
    pub fn with_census(spec: GroupSpec, bound: u128) -> Result<Self> {
        let g = enumerate_group(build_generators(&spec)?, bound)?;
        let c = charpoly_census(&g)?;
        Ok(Self {
            census: Some(c),
            ..g
        })
    }
}

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

fn transposition(n: usize, i: usize) -> Matrix {
    Matrix::from_fn(n, n, |r, c| {
        let src = if r == i {
            i + 1
        } else if r == i + 1 {
            i
        } else {
            r
        };
        CycloScalar::from_i64((c == src) as i64)
    })
}

fn dihedral_generators(n: u32) -> Vec<Matrix> {
    let big = (n as u64 * 4 / num_integer::gcd(n as u64, 4)) as u32;
    let xi = CycloScalar::root_of_unity(big, (big / n) as i64);
    let xi_inv = CycloScalar::root_of_unity(big, -((big / n) as i64));
    let minus_i = CycloScalar::root_of_unity(big, -((big / 4) as i64));
    let c = (&xi + &xi_inv).scale(&half()).demoted();
    let s = (&(&xi - &xi_inv) * &minus_i).scale(&half()).demoted();
    let a = Matrix::new(2, 2, vec![c.clone(), -&s, s, c]);
    let b = Matrix::from_i64_rows(&[vec![1, 0], vec![0, -1]]);
    vec![a, b]
}

fn cartan_reflections(c: &Matrix) -> Result<Vec<Matrix>> {
    let n = c.rows();
    if !c.is_square() {
        return Err(Error::MalformedCartan("matrix is not square".into()));
    }
    for i in 0..n {
        if c.get(i, i) != &CycloScalar::from_i64(2) {
            return Err(Error::MalformedCartan(format!(
                "diagonal entry {} is {}, expected 2",
                i + 1,
                c.get(i, i)
            )));
        }
    }
    // R_i = I - e_i C_{i,.} acting on root-coordinate column vectors
    Ok((0..n)
        .map(|i| {
            Matrix::from_fn(n, n, |r, col| {
                let id = CycloScalar::from_i64((r == col) as i64);
                if r == i {
                    (&id - c.get(i, col)).demoted()
                } else {
                    id
                }
            })
        })
        .collect())
}

fn block_diag(a: &Matrix, na: usize, b: &Matrix, nb: usize) -> Matrix {
    let n = na + nb;
    Matrix::from_fn(n, n, |r, c| match (r < na, c < na) {
        (true, true) => a.get(r, c).clone(),
        (false, false) => b.get(r - na, c - na).clone(),
        _ => CycloScalar::zero(),
    })
}

fn generators_for(spec: &GroupSpec) -> Result<Vec<Matrix>> {
    let n = spec.rank;
    Ok(match &spec.kind {
        GroupType::Dihedral(m) => dihedral_generators(*m),
        GroupType::A(_) => (0..n.saturating_sub(1))
            .map(|i| transposition(n, i))
            .collect(),
        GroupType::B(_) => {
            let mut g: Vec<Matrix> = (0..n - 1).map(|i| transposition(n, i)).collect();
            let mut s = Matrix::identity(n);
            s.set(n - 1, n - 1, CycloScalar::from_i64(-1));
            g.push(s);
            g
        }
        GroupType::D(_) => {
            let mut g: Vec<Matrix> = (0..n - 1).map(|i| transposition(n, i)).collect();
            let mut s = Matrix::identity(n);
            s.set(n - 2, n - 2, CycloScalar::zero());
            s.set(n - 1, n - 1, CycloScalar::zero());
            s.set(n - 2, n - 1, CycloScalar::from_i64(-1));
            s.set(n - 1, n - 2, CycloScalar::from_i64(-1));
            g.push(s);
            g
        }
        GroupType::Exceptional(_) => {
            let c = spec
                .cartan
                .as_ref()
                .ok_or_else(|| Error::MalformedCartan("missing Cartan matrix".into()))?;
            cartan_reflections(c)?
        }
        GroupType::Product(..) => {
            let (a, b) = (&spec.factors[0], &spec.factors[1]);
            let ga = generators_for(a)?;
            let gb = generators_for(b)?;
            let ia = Matrix::identity(a.rank);
            let ib = Matrix::identity(b.rank);
            ga.iter()
                .map(|g| block_diag(g, a.rank, &ib, b.rank))
                .chain(gb.iter().map(|g| block_diag(&ia, a.rank, g, b.rank)))
                .collect()
        }
    })
}

/// Generator matrices for the group described by `spec`.
pub fn build_generators(spec: &GroupSpec) -> Result<ReflectionGroup> {
    let generators = generators_for(spec)?;
    Ok(ReflectionGroup {
        spec: spec.clone(),
        generators,
        elements: None,
        census: None,
    })
}

/// Closes the generators under multiplication. Refuses groups whose order
/// (the product of the degrees) exceeds `bound`.
pub fn enumerate_group(g: ReflectionGroup, bound: u128) -> Result<ReflectionGroup> {
    let order = g.spec.order();
    if order > bound {
        return Err(Error::TooLarge { order, bound });
    }
    if g.elements.is_some() {
        return Ok(g);
    }
    let list = packed::closure(g.rank(), g.spec.conductor, &g.generators, order as usize)?;
    if list.len() as u128 != order {
        return Err(Error::Internal(format!(
            "enumerated {} elements but the degrees give {order}",
            list.len()
        )));
    }
    Ok(ReflectionGroup {
        elements: Some(Arc::new(list)),
        ..g
    })
}

/// Characteristic polynomials of all elements with multiplicities.
pub fn charpoly_census(g: &ReflectionGroup) -> Result<Census> {
    if let Some(c) = &g.census {
        return Ok(c.clone());
    }
    let list = g.elements().ok_or(Error::NotEnumerated)?;
    let entries = packed::census(list)
        .into_iter()
        .map(|(charpoly, multiplicity)| CensusEntry {
            charpoly,
            multiplicity,
        })
        .collect();
    Ok(Census {
        rank: g.rank(),
        entries,
    })
}

/// A W-orbit of linear forms, in breadth-first discovery order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightOrbit {
    forms: Vec<LinearForm>,
}

impl WeightOrbit {
    pub fn forms(&self) -> &[LinearForm] {
        &self.forms
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.forms.first().map_or(0, LinearForm::dim)
    }

    pub fn from_forms(forms: Vec<LinearForm>) -> Self {
        Self { forms }
    }
}

fn lifted_form(w: &[CycloScalar], m: u32) -> LinearForm {
    LinearForm(w.iter().map(|c| c.lift(m)).collect())
}

/// Orbit of `seed` under the generators, acting on forms by `w -> w g`.
pub fn weight_orbit(g: &ReflectionGroup, seed: &LinearForm, bound: usize) -> Result<WeightOrbit> {
    let n = g.rank();
    if seed.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: seed.dim(),
        });
    }
    let m = g.spec.conductor;
    let start = lifted_form(&seed.0, m);
    let mut seen = HashSet::from([start.key()]);
    let mut forms = vec![start.clone()];
    let mut queue = VecDeque::from([start]);
    while let Some(w) = queue.pop_front() {
        for s in &g.generators {
            let next = lifted_form(&s.vec_mul(&w.0)?, m);
            if seen.insert(next.key()) {
                if forms.len() >= bound {
                    return Err(Error::OrbitTooLarge(bound));
                }
                forms.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    let forms = forms
        .into_iter()
        .map(|f| LinearForm(f.0.iter().map(CycloScalar::demoted).collect()))
        .collect();
    Ok(WeightOrbit { forms })
}

#[derive(Serialize, Deserialize)]
struct GroupRepr {
    schema: String,
    spec: GroupSpec,
    generators: Vec<Matrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    census: Option<Census>,
}

impl ReflectionGroup {
    /// JSON with spec, generators and the census if present. Element lists
    /// are not serialized.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&GroupRepr {
            schema: GROUP_SCHEMA.into(),
            spec: self.spec.clone(),
            generators: self.generators.clone(),
            census: self.census.clone(),
        })?)
    }

    /// Rebuilds a group from JSON; the stored generators must match the
    /// ones regenerated from the spec.
    pub fn from_json(text: &str) -> Result<Self> {
        let r: GroupRepr = serde_json::from_str(text)?;
        if r.schema != GROUP_SCHEMA {
            return Err(Error::Parse(format!("unsupported schema '{}'", r.schema)));
        }
        let mut g = build_generators(&r.spec)?;
        if g.generators != r.generators {
            return Err(Error::Parse(
                "generators do not match the group spec".into(),
            ));
        }
        if let Some(c) = &r.census {
            if c.rank != g.rank() || c.order() as u128 != g.spec.order() {
                return Err(Error::Parse("census does not match the group".into()));
            }
        }
        g.census = r.census;
        Ok(g)
    }
}
