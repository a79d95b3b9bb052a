//! Compact integer encoding of group elements for enumeration and census.
//!
//! An element `g` is stored as the power-basis coefficients of `D * g`,
//! entry by entry, where `D` is a common denominator of the generators.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::arith::{cyclotomic_coeffs, euler_phi, CycloScalar, UniPoly};
use crate::error::{Error, Result};
use crate::linalg::{berkowitz, Matrix, RingOps};

#[derive(Clone, Debug)]
pub(crate) struct Codec {
    pub n: usize,
    pub m: u32,
    pub phi: usize,
    pub scale: i64,
    cyclo: Arc<[i64]>,
}

impl Codec {
    pub fn for_generators(n: usize, m: u32, gens: &[Matrix]) -> Result<Self> {
        let mut scale = BigInt::one();
        for g in gens {
            for e in g.entries() {
                for c in e.lift(m).coeffs() {
                    scale = scale.lcm(c.denom());
                }
            }
        }
        let scale = scale
            .to_i64()
            .ok_or_else(|| Error::Internal("generator denominators too large".into()))?;
        Ok(Self {
            n,
            m,
            phi: euler_phi(m),
            scale,
            cyclo: cyclotomic_coeffs(m),
        })
    }

    pub fn width(&self) -> usize {
        self.n * self.n * self.phi
    }

    pub fn encode(&self, g: &Matrix) -> Result<Vec<i64>> {
        let d = BigRational::from_integer(self.scale.into());
        let mut out = Vec::with_capacity(self.width());
        for e in g.entries() {
            for c in e.lift(self.m).coeffs() {
                let v = c * &d;
                if !v.is_integer() {
                    return Err(Error::Internal("entry outside the scaled lattice".into()));
                }
                out.push(
                    v.to_integer()
                        .to_i64()
                        .ok_or_else(|| Error::Internal("entry too large".into()))?,
                );
            }
        }
        Ok(out)
    }

    pub fn decode(&self, packed: &[i8]) -> Matrix {
        let n = self.n;
        let entries = (0..n * n)
            .map(|k| {
                let coeffs = packed[k * self.phi..(k + 1) * self.phi]
                    .iter()
                    .map(|&c| BigRational::new(BigInt::from(c), BigInt::from(self.scale)))
                    .collect();
                CycloScalar::from_coeffs(self.m, coeffs).demoted()
            })
            .collect();
        Matrix::new(n, n, entries)
    }

    fn pack(&self, v: &[i64]) -> Result<Box<[i8]>> {
        v.iter()
            .map(|&x| {
                i8::try_from(x)
                    .map_err(|_| Error::Internal("element entry exceeds packed range".into()))
            })
            .collect()
    }

    /// `a * b` reduced modulo the cyclotomic polynomial, accumulated into `acc`.
    fn mul_acc(&self, acc: &mut [i64], a: &[i64], b: &[i64]) {
        let f = self.phi;
        if f == 1 {
            acc[0] += a[0] * b[0];
            return;
        }
        let mut prod = vec![0i64; 2 * f - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        for k in (f..2 * f - 1).rev() {
            let t = prod[k];
            if t != 0 {
                for i in 0..f {
                    prod[k - f + i] -= t * self.cyclo[i];
                }
            }
        }
        for i in 0..f {
            acc[i] += prod[i];
        }
    }
}

/// Nonzero `(column, coefficients)` entries of one generator row.
type SparseRow = Vec<(usize, Vec<i64>)>;

/// Left multiplication by a fixed generator, skipping identity rows.
struct SparseGen {
    rows: Vec<Option<SparseRow>>,
}

impl SparseGen {
    fn new(codec: &Codec, enc: &[i64]) -> Self {
        let (n, f) = (codec.n, codec.phi);
        let entry = |i: usize, j: usize| &enc[(i * n + j) * f..(i * n + j + 1) * f];
        let rows = (0..n)
            .map(|i| {
                let is_unit_row = (0..n).all(|j| {
                    let e = entry(i, j);
                    let want = if i == j { codec.scale } else { 0 };
                    e[0] == want && e[1..].iter().all(|&c| c == 0)
                });
                if is_unit_row {
                    None
                } else {
                    Some(
                        (0..n)
                            .filter(|&j| entry(i, j).iter().any(|&c| c != 0))
                            .map(|j| (j, entry(i, j).to_vec()))
                            .collect(),
                    )
                }
            })
            .collect();
        Self { rows }
    }

    fn apply(&self, codec: &Codec, g: &[i8], out: &mut [i64]) -> Result<()> {
        let (n, f) = (codec.n, codec.phi);
        let row_len = n * f;
        let mut gk = vec![0i64; f];
        for (i, row) in self.rows.iter().enumerate() {
            let dst = &mut out[i * row_len..(i + 1) * row_len];
            match row {
                None => {
                    for (d, &s) in dst.iter_mut().zip(&g[i * row_len..(i + 1) * row_len]) {
                        *d = s as i64;
                    }
                }
                Some(terms) => {
                    dst.iter_mut().for_each(|d| *d = 0);
                    for (k, sk) in terms {
                        for j in 0..n {
                            let src = &g[(k * n + j) * f..(k * n + j + 1) * f];
                            if src.iter().all(|&c| c == 0) {
                                continue;
                            }
                            for (t, &c) in gk.iter_mut().zip(src) {
                                *t = c as i64;
                            }
                            codec.mul_acc(&mut dst[j * f..(j + 1) * f], sk, &gk);
                        }
                    }
                    for d in dst.iter_mut() {
                        if *d % codec.scale != 0 {
                            return Err(Error::Internal("product left the scaled lattice".into()));
                        }
                        *d /= codec.scale;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Full element list in packed form, sorted by packed bytes.
#[derive(Clone, Debug)]
pub struct ElementList {
    pub(crate) codec: Codec,
    pub(crate) packed: Vec<Box<[i8]>>,
}

impl ElementList {
    pub fn len(&self) -> usize {
        self.packed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.packed.is_empty()
    }

    pub fn matrix(&self, i: usize) -> Matrix {
        self.codec.decode(&self.packed[i])
    }

    pub fn matrices(&self) -> impl Iterator<Item = Matrix> + '_ {
        self.packed.iter().map(|p| self.codec.decode(p))
    }
}

pub(crate) fn closure(n: usize, m: u32, gens: &[Matrix], expected: usize) -> Result<ElementList> {
    let codec = Codec::for_generators(n, m, gens)?;
    let sparse: Vec<SparseGen> = gens
        .iter()
        .map(|g| codec.encode(g).map(|e| SparseGen::new(&codec, &e)))
        .collect::<Result<_>>()?;
    let mut id = vec![0i64; codec.width()];
    for i in 0..n {
        id[(i * n + i) * codec.phi] = codec.scale;
    }
    let id = codec.pack(&id)?;
    let mut seen: HashSet<Box<[i8]>> = HashSet::with_capacity(expected);
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    let mut buf = vec![0i64; codec.width()];
    while let Some(g) = queue.pop_front() {
        for s in &sparse {
            s.apply(&codec, &g, &mut buf)?;
            let h = codec.pack(&buf)?;
            if !seen.contains(&h) {
                if seen.len() >= expected {
                    return Err(Error::Internal(format!(
                        "closure exceeds the expected order {expected}"
                    )));
                }
                seen.insert(h.clone());
                queue.push_back(h);
            }
        }
    }
    let mut packed: Vec<Box<[i8]>> = seen.into_iter().collect();
    packed.par_sort_unstable();
    Ok(ElementList { codec, packed })
}

struct I128Ring;

impl RingOps for I128Ring {
    type E = i128;
    fn zero(&self) -> i128 {
        0
    }
    fn one(&self) -> i128 {
        1
    }
    fn add(&self, a: &i128, b: &i128) -> i128 {
        a + b
    }
    fn mul(&self, a: &i128, b: &i128) -> i128 {
        a * b
    }
    fn neg(&self, a: &i128) -> i128 {
        -a
    }
}

/// Integer cyclotomic ring `Z[x]/(Phi_m)`.
struct CycloIntRing<'a>(&'a Codec);

impl RingOps for CycloIntRing<'_> {
    type E = Vec<i64>;
    fn zero(&self) -> Vec<i64> {
        vec![0; self.0.phi]
    }
    fn one(&self) -> Vec<i64> {
        let mut v = self.zero();
        v[0] = 1;
        v
    }
    fn add(&self, a: &Vec<i64>, b: &Vec<i64>) -> Vec<i64> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }
    fn mul(&self, a: &Vec<i64>, b: &Vec<i64>) -> Vec<i64> {
        let mut acc = self.zero();
        self.0.mul_acc(&mut acc, a, b);
        acc
    }
    fn neg(&self, a: &Vec<i64>) -> Vec<i64> {
        a.iter().map(|x| -x).collect()
    }
}

/// Descending charpoly coefficients of `D * g`, flattened.
fn scaled_charpoly_key(codec: &Codec, g: &[i8]) -> Vec<i64> {
    let (n, f) = (codec.n, codec.phi);
    if f == 1 {
        berkowitz(&I128Ring, n, |i, j| g[i * n + j] as i128)
            .into_iter()
            .map(|c| i64::try_from(c).expect("charpoly coefficient fits in i64"))
            .collect()
    } else {
        let ring = CycloIntRing(codec);
        berkowitz(&ring, n, |i, j| {
            g[(i * n + j) * f..(i * n + j + 1) * f]
                .iter()
                .map(|&c| c as i64)
                .collect()
        })
        .into_iter()
        .flatten()
        .collect()
    }
}

/// Groups elements by characteristic polynomial; returns sorted
/// `(charpoly, multiplicity)` pairs.
pub(crate) fn census(list: &ElementList) -> Vec<(UniPoly, u64)> {
    let codec = &list.codec;
    let counts = list
        .packed
        .par_iter()
        .fold(HashMap::<Vec<i64>, u64>::new, |mut acc, g| {
            *acc.entry(scaled_charpoly_key(codec, g)).or_default() += 1;
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        });
    let mut keyed: Vec<(Vec<i64>, u64)> = counts.into_iter().collect();
    keyed.sort();
    let (n, f) = (codec.n, codec.phi);
    keyed
        .into_iter()
        .map(|(key, mult)| {
            // coefficient of x^(n-i) in det(xI - A/D) is p_i / D^i
            let mut asc = vec![CycloScalar::zero(); n + 1];
            let mut dpow = BigInt::one();
            for i in 0..=n {
                let coeffs = key[i * f..(i + 1) * f]
                    .iter()
                    .map(|&c| BigRational::new(c.into(), dpow.clone()))
                    .collect();
                asc[n - i] = CycloScalar::from_coeffs(codec.m, coeffs).demoted();
                dpow *= codec.scale;
            }
            debug_assert!(!asc[n].is_zero());
            (UniPoly::new(asc), mult)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codec_round_trip_with_half_entries() {
        let m = 12;
        let c = CycloScalar::from_ratio(1, 2);
        let s = (CycloScalar::root_of_unity(12, 1) + CycloScalar::root_of_unity(12, 11))
            .scale(&BigRational::new(1.into(), 2.into()));
        let g = Matrix::new(2, 2, vec![c.clone(), -&s, s, c]);
        let codec = Codec::for_generators(2, m, std::slice::from_ref(&g)).unwrap();
        assert_eq!(codec.scale, 2);
        let enc = codec.encode(&g).unwrap();
        let packed = codec.pack(&enc).unwrap();
        assert_eq!(codec.decode(&packed), g);
    }
}
