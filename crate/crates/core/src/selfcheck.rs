//! Reproduction of the published tables and cross-route agreement checks,
//! collected into a machine-readable report.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::CycloScalar;
use crate::basis::{
    classical_t, dihedral_basis, enumerate_candidate_sets, product_basis, CandidateSet, Certifier,
};
use crate::decompose::decompose;
use crate::error::{Error, Result};
use crate::fixtures::Fixtures;
use crate::groups::{
    build_generators, product_group, weight_orbit, Exceptional, GroupSpec, GroupType,
    ReflectionGroup, DEFAULT_ELEMENT_BOUND, DEFAULT_ORBIT_BOUND, LONG_ELEMENT_BOUND,
};
use crate::invariants::{minimal_weight, InvariantSystem};
use crate::molien::{
    census_ratio, closed_form_ratio, cycle_index_molien, default_truncation, molien_series,
    product_ratio, ratio_polynomial, Character, Family, RatioPolynomial,
};
use crate::poly::hessian_sym;

pub const REPORT_SCHEMA: &str = "hessbasis.report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Quick,
    Full,
    Long,
}

impl FromStr for Profile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Profile::Quick),
            "full" => Ok(Profile::Full),
            "long" => Ok(Profile::Long),
            _ => Err(Error::Parse(format!(
                "unknown profile '{s}' (quick, full, long)"
            ))),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::Quick => "quick",
            Profile::Full => "full",
            Profile::Long => "long",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    PublishedTable,
    DerivedOracle,
    Trivial,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub group: String,
    pub status: Status,
    pub provenance: Provenance,
    pub expected: String,
    pub computed: String,
    pub seconds: f64,
}

impl Check {
    fn run(
        name: String,
        group: &str,
        provenance: Provenance,
        expected: String,
        f: impl FnOnce() -> Result<String>,
    ) -> Self {
        let t = Instant::now();
        let (status, computed) = match f() {
            Ok(c) if c == expected => (Status::Pass, c),
            Ok(c) => (Status::Fail, c),
            Err(e) => (Status::Fail, format!("error: {e}")),
        };
        Check {
            name,
            group: group.into(),
            status,
            provenance,
            expected,
            computed,
            seconds: t.elapsed().as_secs_f64(),
        }
    }

    fn skipped(
        name: String,
        group: &str,
        provenance: Provenance,
        expected: String,
        reason: &str,
    ) -> Self {
        Check {
            name,
            group: group.into(),
            status: Status::Skipped,
            provenance,
            expected,
            computed: reason.into(),
            seconds: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub engine_version: String,
    pub profile: Profile,
    pub checks: Vec<Check>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Same report with every timing field zeroed.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        r.checks.iter_mut().for_each(|c| c.seconds = 0.0);
        r
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            write!(f, "{tag}  {}  ({:.2}s)", c.name, c.seconds)?;
            if c.status != Status::Pass {
                write!(f, "  expected: {}  computed: {}", c.expected, c.computed)?;
            }
            writeln!(f)?;
        }
        let n = |s| self.checks.iter().filter(|c| c.status == s).count();
        write!(
            f,
            "{} passed, {} failed, {} skipped",
            n(Status::Pass),
            n(Status::Fail),
            n(Status::Skipped)
        )
    }
}

#[derive(Clone, Debug)]
pub struct SelfcheckOptions<'a> {
    pub profile: Profile,
    pub fixtures: &'a Fixtures,
    /// Restrict to sections whose group label matches one of these.
    pub only: Option<Vec<String>>,
}

impl<'a> SelfcheckOptions<'a> {
    pub fn new(profile: Profile) -> Self {
        Self {
            profile,
            fixtures: Fixtures::builtin(),
            only: None,
        }
    }
}

type Section<'a> = (String, Box<dyn Fn() -> Vec<Check> + Send + Sync + 'a>);

/// Runs every check of the profile. Sections run in parallel; the report
/// order is fixed.
pub fn run_selfcheck(opts: &SelfcheckOptions<'_>) -> RunReport {
    let p = opts.profile;
    let fx = opts.fixtures;
    let mut sections: Vec<Section<'_>> = vec![
        ("dihedral".into(), Box::new(dihedral_checks)),
        ("classical".into(), Box::new(move || classical_checks(p))),
        ("product".into(), Box::new(product_checks)),
        ("decompose".into(), Box::new(decompose_checks)),
    ];
    let exceptional: &[Exceptional] = match p {
        Profile::Quick => &[Exceptional::H3, Exceptional::F4],
        _ => &Exceptional::ALL,
    };
    for &e in exceptional {
        sections.push((
            e.name().into(),
            Box::new(move || exceptional_checks(e, fx, p)),
        ));
    }
    if let Some(only) = &opts.only {
        sections.retain(|(g, _)| only.iter().any(|o| o.eq_ignore_ascii_case(g)));
    }
    let checks = sections
        .par_iter()
        .map(|(_, f)| f())
        .collect::<Vec<_>>()
        .concat();
    RunReport {
        schema: REPORT_SCHEMA.into(),
        engine_version: crate::basis::ENGINE_VERSION.into(),
        profile: p,
        checks,
    }
}

fn certified_count(
    sys: &InvariantSystem,
    point: Vec<CycloScalar>,
    sets: &[CandidateSet],
    label: &str,
) -> Result<usize> {
    let v = sys.regular_vector(point)?;
    let certs = Certifier::new(&sys.invariants, &v, label)?.certify_all(sets)?;
    Ok(certs.iter().filter(|c| c.is_certified()).count())
}

fn default_certified(spec: &GroupSpec, set: &CandidateSet) -> Result<String> {
    let sys = InvariantSystem::new(spec)?;
    let v = sys.default_regular_vector()?;
    let c = Certifier::new(&sys.invariants, &v, &spec.name())?.certify(set)?;
    Ok(if c.is_certified() {
        "certified"
    } else {
        "degenerate"
    }
    .into())
}

fn dihedral_checks() -> Vec<Check> {
    let mut out = Vec::new();
    for n in 2..=12u32 {
        let g = format!("I2({n})");
        let expected = closed_form_ratio(Family::I2, n as usize)
            .map(|r| r.to_string())
            .unwrap_or_default();
        out.push(Check::run(
            format!("{g} ratio = {expected}"),
            "dihedral",
            Provenance::PublishedTable,
            expected,
            || {
                Ok(census_ratio(
                    &GroupSpec::new(GroupType::Dihedral(n))?,
                    DEFAULT_ELEMENT_BOUND,
                )?
                .to_string())
            },
        ));
    }
    for n in 2..=12u32 {
        out.push(Check::run(
            format!("I2({n}) basis r1, r1^2, r2 certifies"),
            "dihedral",
            Provenance::PublishedTable,
            "certified".into(),
            || default_certified(&GroupSpec::new(GroupType::Dihedral(n))?, &dihedral_basis()),
        ));
    }
    out
}

fn classical_kind(f: Family, n: u32) -> GroupType {
    match f {
        Family::A => GroupType::A(n),
        Family::B => GroupType::B(n),
        Family::D => GroupType::D(n),
        Family::I2 => GroupType::Dihedral(n),
    }
}

fn classical_checks(p: Profile) -> Vec<Check> {
    let mut out = Vec::new();
    let ranges = [
        (Family::A, 1..=6u32),
        (Family::B, 1..=4),
        (Family::D, 2..=4),
    ];
    for (f, range) in ranges.clone() {
        for n in range {
            let kind = classical_kind(f, n);
            let expected = closed_form_ratio(f, n as usize)
                .map(|r| format!("{r} (sum {})", n * (n + 1) / 2))
                .unwrap_or_default();
            out.push(Check::run(
                format!("{kind}: census = cycle index = closed form"),
                "classical",
                Provenance::PublishedTable,
                expected,
                || {
                    let spec = GroupSpec::new(kind.clone())?;
                    let census = census_ratio(&spec, DEFAULT_ELEMENT_BOUND)?;
                    let order = default_truncation(&spec.degrees);
                    let ci = ratio_polynomial(
                        &cycle_index_molien(f, n as usize, Character::Sym2, order)?,
                        &spec.degrees,
                    )?;
                    let closed = closed_form_ratio(f, n as usize)?;
                    if census == ci && ci == closed {
                        Ok(format!("{census} (sum {})", census.sum()))
                    } else {
                        Ok(format!(
                            "census {census}, cycle index {ci}, closed form {closed}"
                        ))
                    }
                },
            ));
        }
    }
    let top = if p == Profile::Quick { 5 } else { 8 };
    for f in [Family::A, Family::B, Family::D] {
        let lo = if f == Family::D { 2 } else { 1 };
        for n in lo..=top {
            let kind = classical_kind(f, n);
            out.push(Check::run(
                format!("{kind}: default classical T certifies"),
                "classical",
                Provenance::PublishedTable,
                "certified".into(),
                || {
                    default_certified(
                        &GroupSpec::new(kind.clone())?,
                        &classical_t(f, n as usize, None)?,
                    )
                },
            ));
        }
    }
    out
}

fn factor_basis(spec: &GroupSpec) -> Result<CandidateSet> {
    match Family::of(&spec.kind) {
        Some((Family::I2, _)) => Ok(dihedral_basis()),
        Some((f, n)) => classical_t(f, n, None),
        None => Err(Error::InvalidSpec(format!(
            "no default basis for {}",
            spec.name()
        ))),
    }
}

fn product_checks() -> Vec<Check> {
    let mut out = Vec::new();
    for (a, b) in [("A1sign", "A1sign"), ("I2:3", "A1sign"), ("A:2", "A:2")] {
        let label = format!("{a} x {b}");
        out.push(Check::run(
            format!("{label}: product basis certifies"),
            "product",
            Provenance::PublishedTable,
            "certified".into(),
            || {
                let (sa, sb) = (GroupSpec::parse(a)?, GroupSpec::parse(b)?);
                let set = product_basis(&factor_basis(&sa)?, sa.rank, &factor_basis(&sb)?, sb.rank);
                default_certified(&product_group(sa, sb), &set)
            },
        ));
        out.push(Check::run(
            format!("{label}: product ratio identity matches census"),
            "product",
            Provenance::DerivedOracle,
            "equal".into(),
            || {
                let (sa, sb) = (GroupSpec::parse(a)?, GroupSpec::parse(b)?);
                let ra = census_ratio(&sa, DEFAULT_ELEMENT_BOUND)?;
                let rb = census_ratio(&sb, DEFAULT_ELEMENT_BOUND)?;
                let want = product_ratio(&ra, &sa.degrees, &rb, &sb.degrees);
                let got = census_ratio(&product_group(sa, sb), DEFAULT_ELEMENT_BOUND)?;
                Ok(if got == want {
                    "equal".into()
                } else {
                    format!("census {got}, identity {want}")
                })
            },
        ));
    }
    out
}

fn decompose_checks() -> Vec<Check> {
    vec![Check::run(
        "I2(3): r1 Hess(r1^2) + 7 Hess(r2) decomposes as (0, y1, 7)".into(),
        "decompose",
        Provenance::Trivial,
        "0, y1, 7".into(),
        || {
            let sys = InvariantSystem::new(&GroupSpec::new(GroupType::Dihedral(3))?)?;
            let r1 = sys.invariants[0].expand();
            let r2 = sys.invariants[1].expand();
            let sigma = hessian_sym(&r1.mul(&r1))
                .mul_poly(&r1)
                .add(&hessian_sym(&r2).scale(&CycloScalar::from_i64(7)));
            let d = decompose(&sigma, &dihedral_basis(), &sys.invariants, &sys.group)?;
            if d.residual {
                return Ok("residual".into());
            }
            Ok(d.coeffs
                .iter()
                .map(|c| c.to_string_with("y"))
                .collect::<Vec<_>>()
                .join(", "))
        },
    )]
}

fn exceptional_checks(e: Exceptional, fx: &Fixtures, p: Profile) -> Vec<Check> {
    let name = e.name();
    let fixture = match fx.get(e) {
        Ok(f) => f,
        Err(err) => {
            return vec![Check::run(
                format!("{name} fixture"),
                name,
                Provenance::PublishedTable,
                "present".into(),
                || Err(err),
            )]
        }
    };
    let spec = || GroupSpec::with_fixtures(GroupType::Exceptional(e), fx);
    let published = RatioPolynomial::new(fixture.ratio_coeffs());
    let order: u128 = fixture.degrees.iter().map(|&d| d as u128).product();
    let mut out = Vec::new();

    let enumerable = match e {
        Exceptional::E8 => false,
        Exceptional::E7 => p == Profile::Long,
        _ => true,
    };
    let bound = if p == Profile::Long {
        LONG_ELEMENT_BOUND
    } else {
        DEFAULT_ELEMENT_BOUND
    };
    let order_name = format!("{name} order = {order}");
    let ratio_name = format!("{name} ratio = {published}");
    if enumerable {
        let mut group = None;
        out.push(Check::run(
            order_name,
            name,
            Provenance::PublishedTable,
            order.to_string(),
            || {
                let g = ReflectionGroup::with_census(spec()?, bound)?;
                let size = g.census().map_or(0, |c| c.order());
                group = Some(g);
                Ok(size.to_string())
            },
        ));
        out.push(Check::run(
            ratio_name,
            name,
            Provenance::PublishedTable,
            published.to_string(),
            || {
                let g = group.ok_or(Error::NotEnumerated)?;
                let census = g.census().ok_or(Error::NotEnumerated)?;
                let s = molien_series(
                    census,
                    Character::Sym2,
                    default_truncation(&fixture.degrees),
                )?;
                Ok(ratio_polynomial(&s, &fixture.degrees)?.to_string())
            },
        ));
    } else {
        let why = if e == Exceptional::E8 {
            "not enumerable at desk scale; product of degrees, ratio taken from the published table"
        } else {
            "census runs in the long profile"
        };
        out.push(Check::skipped(
            order_name,
            name,
            Provenance::PublishedTable,
            order.to_string(),
            why,
        ));
        out.push(Check::skipped(
            ratio_name,
            name,
            Provenance::PublishedTable,
            published.to_string(),
            why,
        ));
    }

    let mut sys: Option<InvariantSystem> = None;
    out.push(Check::run(
        format!("{name} orbit size = {}", fixture.orbit_size),
        name,
        Provenance::PublishedTable,
        fixture.orbit_size.to_string(),
        || {
            let s = spec()?;
            let c = s
                .cartan
                .as_ref()
                .ok_or_else(|| Error::MalformedCartan("missing".into()))?;
            let orbit = weight_orbit(
                &build_generators(&s)?,
                &minimal_weight(c)?,
                DEFAULT_ORBIT_BOUND,
            )?;
            let size = orbit.len();
            sys = Some(InvariantSystem::new(&s)?);
            Ok(size.to_string())
        },
    ));
    let Some(sys) = sys else {
        return out;
    };

    let point = fixture.regular_point();
    out.push(Check::run(
        format!("{name} regular vector has det J != 0"),
        name,
        Provenance::PublishedTable,
        "nonzero".into(),
        || {
            Ok(if sys.regular_vector(point.clone())?.certified {
                "nonzero"
            } else {
                "zero"
            }
            .into())
        },
    ));

    let sets = enumerate_candidate_sets(&sys.degrees(), &published, true);
    out.push(Check::run(
        format!("{name} candidate count = {}", fixture.candidate_count),
        name,
        Provenance::PublishedTable,
        fixture.candidate_count.to_string(),
        || Ok(sets.len().to_string()),
    ));
    let k = fixture.candidate_count;
    out.push(Check::run(
        format!("{name}: {k}/{k} certified"),
        name,
        Provenance::PublishedTable,
        format!("{k}/{k}"),
        || {
            Ok(format!(
                "{}/{}",
                certified_count(&sys, point.clone(), &sets, name)?,
                sets.len()
            ))
        },
    ));
    out
}
