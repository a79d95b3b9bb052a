//! Reference data for the exceptional groups, loaded from
//! `data/fixtures.toml`.

use std::collections::BTreeMap;

use once_cell::sync::Lazy;
use serde::Deserialize;

use crate::arith::CycloScalar;
use crate::error::{Error, Result};
use crate::groups::Exceptional;
use crate::linalg::Matrix;

const FIXTURES_TOML: &str = include_str!("../data/fixtures.toml");

static BUILTIN: Lazy<Fixtures> =
    Lazy::new(|| Fixtures::from_toml(FIXTURES_TOML).expect("built-in fixtures parse"));

#[derive(Clone, Debug, Deserialize)]
pub struct Fixtures {
    pub groups: BTreeMap<String, ExceptionalFixture>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct ExceptionalFixture {
    pub conductor: u32,
    pub degrees: Vec<u32>,
    pub cartan: Vec<Vec<String>>,
    pub regular_vector: Vec<i64>,
    pub orbit_size: usize,
    pub ratio_terms: Vec<(usize, u64)>,
    pub candidate_count: usize,
}

impl Fixtures {
    pub fn builtin() -> &'static Fixtures {
        &BUILTIN
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn get(&self, kind: Exceptional) -> Result<&ExceptionalFixture> {
        self.groups
            .get(kind.name())
            .ok_or_else(|| Error::InvalidSpec(format!("no fixture for {}", kind.name())))
    }
}

impl ExceptionalFixture {
    pub fn cartan_matrix(&self) -> Result<Matrix> {
        let n = self.cartan.len();
        if self.cartan.iter().any(|r| r.len() != n) {
            return Err(Error::MalformedCartan("matrix is not square".into()));
        }
        let entries = self
            .cartan
            .iter()
            .flatten()
            .map(|s| CycloScalar::parse_expr(s, self.conductor).map(|x| x.demoted()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::new(n, n, entries))
    }

    /// Ascending coefficient list of the published ratio polynomial.
    pub fn ratio_coeffs(&self) -> Vec<u64> {
        let top = self.ratio_terms.iter().map(|&(e, _)| e).max().unwrap_or(0);
        let mut c = vec![0u64; top + 1];
        for &(e, k) in &self.ratio_terms {
            c[e] += k;
        }
        c
    }

    pub fn regular_point(&self) -> Vec<CycloScalar> {
        self.regular_vector
            .iter()
            .map(|&v| CycloScalar::from_i64(v))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_fixtures_are_consistent() {
        let f = Fixtures::builtin();
        assert_eq!(f.groups.len(), 6);
        for (name, g) in &f.groups {
            let n = g.degrees.len();
            assert_eq!(g.cartan.len(), n, "{name}");
            assert_eq!(g.regular_vector.len(), n, "{name}");
            let sum: u64 = g.ratio_coeffs().iter().sum();
            assert_eq!(sum as usize, n * (n + 1) / 2, "{name}");
            let c = g.cartan_matrix().unwrap();
            for i in 0..n {
                assert_eq!(c.get(i, i), &CycloScalar::from_i64(2), "{name}");
            }
        }
    }

    #[test]
    fn golden_entry_is_minus_tau() {
        let h3 = Fixtures::builtin().groups["H3"].cartan_matrix().unwrap();
        let t = h3.get(0, 1);
        // (z^2 + z^3)^2 = 1 - (z^2 + z^3), the golden-ratio relation
        assert_eq!(t * t, &CycloScalar::one() - t);
    }
}
