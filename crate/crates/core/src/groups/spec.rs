use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fixtures::Fixtures;
use crate::linalg::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Exceptional {
    H3,
    H4,
    F4,
    E6,
    E7,
    E8,
}

impl Exceptional {
    pub const ALL: [Exceptional; 6] = [
        Exceptional::H3,
        Exceptional::H4,
        Exceptional::F4,
        Exceptional::E6,
        Exceptional::E7,
        Exceptional::E8,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Exceptional::H3 => "H3",
            Exceptional::H4 => "H4",
            Exceptional::F4 => "F4",
            Exceptional::E6 => "E6",
            Exceptional::E7 => "E7",
            Exceptional::E8 => "E8",
        }
    }

    pub fn rank(self) -> usize {
        match self {
            Exceptional::H3 => 3,
            Exceptional::H4 | Exceptional::F4 => 4,
            Exceptional::E6 => 6,
            Exceptional::E7 => 7,
            Exceptional::E8 => 8,
        }
    }
}

/// Type tag of a reflection group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupType {
    Dihedral(u32),
    A(u32),
    B(u32),
    D(u32),
    Exceptional(Exceptional),
    Product(Box<GroupType>, Box<GroupType>),
}

/// What the coordinate slots of the group's representation mean.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coordinates {
    Cartesian,
    Standard,
    SimpleRoots,
    Mixed,
}

impl GroupType {
    pub fn rank(&self) -> usize {
        match self {
            GroupType::Dihedral(_) => 2,
            GroupType::A(n) | GroupType::B(n) | GroupType::D(n) => *n as usize,
            GroupType::Exceptional(e) => e.rank(),
            GroupType::Product(a, b) => a.rank() + b.rank(),
        }
    }

    pub fn degrees(&self) -> Vec<u32> {
        match self {
            GroupType::Dihedral(n) => vec![2, *n],
            GroupType::A(n) => (1..=*n).collect(),
            GroupType::B(n) => (1..=*n).map(|j| 2 * j).collect(),
            GroupType::D(n) => (1..*n).map(|j| 2 * j).chain([*n]).collect(),
            GroupType::Exceptional(e) => match e {
                Exceptional::H3 => vec![2, 6, 10],
                Exceptional::H4 => vec![2, 12, 20, 30],
                Exceptional::F4 => vec![2, 6, 8, 12],
                Exceptional::E6 => vec![2, 5, 6, 8, 9, 12],
                Exceptional::E7 => vec![2, 6, 8, 10, 12, 14, 18],
                Exceptional::E8 => vec![2, 8, 12, 14, 18, 20, 24, 30],
            },
            GroupType::Product(a, b) => {
                let mut d = a.degrees();
                d.extend(b.degrees());
                d
            }
        }
    }

    /// Conductor of the cyclotomic field holding the generator entries.
    pub fn conductor(&self) -> u32 {
        match self {
            GroupType::Dihedral(n) => (*n).lcm(&4),
            GroupType::A(_) | GroupType::B(_) | GroupType::D(_) => 1,
            GroupType::Exceptional(Exceptional::H3 | Exceptional::H4) => 5,
            GroupType::Exceptional(_) => 1,
            GroupType::Product(a, b) => a.conductor().lcm(&b.conductor()),
        }
    }

    pub fn coordinates(&self) -> Coordinates {
        match self {
            GroupType::Dihedral(_) => Coordinates::Cartesian,
            GroupType::A(_) | GroupType::B(_) | GroupType::D(_) => Coordinates::Standard,
            GroupType::Exceptional(_) => Coordinates::SimpleRoots,
            GroupType::Product(..) => Coordinates::Mixed,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        match self {
            GroupType::Dihedral(n) if *n < 2 => bad(format!("I2:{n} needs n >= 2")),
            GroupType::A(0) => bad("A:0 has rank 0".into()),
            GroupType::B(0) => bad("B:0 has rank 0".into()),
            GroupType::D(n) if *n < 2 => bad(format!("D:{n} needs n >= 2")),
            GroupType::Product(a, b) => {
                a.validate()?;
                b.validate()
            }
            _ => Ok(()),
        }
    }

    fn parse_atom(s: &str) -> Result<Self> {
        let s = s.trim();
        let err = || Error::InvalidSpec(format!("unrecognized group '{s}'"));
        for e in Exceptional::ALL {
            if s.eq_ignore_ascii_case(e.name()) {
                return Ok(GroupType::Exceptional(e));
            }
        }
        if s.eq_ignore_ascii_case("A1sign") {
            return Ok(GroupType::B(1));
        }
        let (head, arg) = if let Some((h, a)) = s.split_once(':') {
            (h, a)
        } else if let (Some(open), true) = (s.find('('), s.ends_with(')')) {
            (&s[..open], &s[open + 1..s.len() - 1])
        } else {
            return Err(err());
        };
        let n: u32 = arg.trim().parse().map_err(|_| err())?;
        let t = match head.trim().to_ascii_uppercase().as_str() {
            "I2" => GroupType::Dihedral(n),
            "A" => GroupType::A(n),
            "B" => GroupType::B(n),
            "D" => GroupType::D(n),
            _ => return Err(err()),
        };
        t.validate()?;
        Ok(t)
    }
}

impl FromStr for GroupType {
    type Err = Error;

    /// Accepts `I2:5`, `A:3`, `B:2`, `D:4`, `H3`..`E8`, `A1sign`, and
    /// products joined by `x` such as `I2:3xA1sign`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(['x', 'X']);
        let first = parts
            .next()
            .ok_or_else(|| Error::InvalidSpec("empty group".into()))?;
        let mut acc = Self::parse_atom(first)?;
        for p in parts {
            acc = GroupType::Product(Box::new(acc), Box::new(Self::parse_atom(p)?));
        }
        Ok(acc)
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupType::Dihedral(n) => write!(f, "I2:{n}"),
            GroupType::A(n) => write!(f, "A:{n}"),
            GroupType::B(n) => write!(f, "B:{n}"),
            GroupType::D(n) => write!(f, "D:{n}"),
            GroupType::Exceptional(e) => f.write_str(e.name()),
            GroupType::Product(a, b) => write!(f, "{a}x{b}"),
        }
    }
}

/// A reflection group by type, with its rank, degrees, scalar field and (for
/// exceptional types) Cartan matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupSpec {
    pub kind: GroupType,
    pub rank: usize,
    pub cartan: Option<Matrix>,
    pub conductor: u32,
    pub degrees: Vec<u32>,
    pub factors: Vec<GroupSpec>,
}

impl GroupSpec {
    pub fn new(kind: GroupType) -> Result<Self> {
        Self::with_fixtures(kind, Fixtures::builtin())
    }

    /// Builds a spec, taking exceptional Cartan matrices from `fixtures`.
    pub fn with_fixtures(kind: GroupType, fixtures: &Fixtures) -> Result<Self> {
        kind.validate()?;
        let (cartan, factors) = match &kind {
            GroupType::Exceptional(e) => (Some(fixtures.get(*e)?.cartan_matrix()?), vec![]),
            GroupType::Product(a, b) => (
                None,
                vec![
                    Self::with_fixtures((**a).clone(), fixtures)?,
                    Self::with_fixtures((**b).clone(), fixtures)?,
                ],
            ),
            _ => (None, vec![]),
        };
        Ok(Self {
            rank: kind.rank(),
            conductor: kind.conductor(),
            degrees: kind.degrees(),
            kind,
            cartan,
            factors,
        })
    }

    /// Exceptional spec with an explicitly supplied Cartan matrix.
    pub fn exceptional_with_cartan(e: Exceptional, cartan: Matrix) -> Result<Self> {
        if cartan.rows() != e.rank() || cartan.cols() != e.rank() {
            return Err(Error::MalformedCartan(format!(
                "{} needs a {}x{} matrix",
                e.name(),
                e.rank(),
                e.rank()
            )));
        }
        let kind = GroupType::Exceptional(e);
        Ok(Self {
            rank: kind.rank(),
            conductor: kind.conductor().lcm(&cartan.conductor()),
            degrees: kind.degrees(),
            kind,
            cartan: Some(cartan),
            factors: vec![],
        })
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::new(s.parse()?)
    }

    pub fn exceptional(&self) -> Option<Exceptional> {
        match self.kind {
            GroupType::Exceptional(e) => Some(e),
            _ => None,
        }
    }

    pub fn coordinates(&self) -> Coordinates {
        self.kind.coordinates()
    }

    /// `|W|` as the product of the degrees.
    pub fn order(&self) -> u128 {
        self.degrees.iter().map(|&d| d as u128).product()
    }

    pub fn name(&self) -> String {
        self.kind.to_string()
    }
}

/// Spec combining two factors acting block-diagonally on `V_a x V_b`.
pub fn product_group(a: GroupSpec, b: GroupSpec) -> GroupSpec {
    let kind = GroupType::Product(Box::new(a.kind.clone()), Box::new(b.kind.clone()));
    let mut degrees = a.degrees.clone();
    degrees.extend(&b.degrees);
    GroupSpec {
        rank: a.rank + b.rank,
        conductor: a.conductor.lcm(&b.conductor),
        degrees,
        kind,
        cartan: None,
        factors: vec![a, b],
    }
}

#[derive(Serialize, Deserialize)]
struct SpecRepr {
    #[serde(rename = "type")]
    kind: String,
    rank: usize,
    conductor: u32,
    degrees: Vec<u32>,
    coordinates: Coordinates,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cartan: Option<Matrix>,
}

impl Serialize for GroupSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SpecRepr {
            kind: self.name(),
            rank: self.rank,
            conductor: self.conductor,
            degrees: self.degrees.clone(),
            coordinates: self.coordinates(),
            cartan: self.cartan.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = SpecRepr::deserialize(d)?;
        let kind: GroupType = r.kind.parse().map_err(D::Error::custom)?;
        let spec = match (&kind, r.cartan) {
            (GroupType::Exceptional(e), Some(c)) => GroupSpec::exceptional_with_cartan(*e, c),
            _ => GroupSpec::new(kind),
        }
        .map_err(D::Error::custom)?;
        if spec.rank != r.rank || spec.degrees != r.degrees {
            return Err(D::Error::custom(
                "rank or degrees disagree with the group type",
            ));
        }
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints() {
        for s in [
            "I2:5", "A:3", "B:1", "D:4", "H3", "E8", "I2:3xB:1", "A:2xA:2",
        ] {
            let t: GroupType = s.parse().unwrap();
            assert_eq!(t.to_string(), s);
        }
        assert_eq!("A1sign".parse::<GroupType>().unwrap(), GroupType::B(1));
        assert_eq!(
            "I2(4)".parse::<GroupType>().unwrap(),
            GroupType::Dihedral(4)
        );
        assert!("D:1".parse::<GroupType>().is_err());
        assert!("Q7".parse::<GroupType>().is_err());
    }

    #[test]
    fn degrees_and_orders() {
        let order = |s: &str| GroupSpec::parse(s).unwrap().order();
        assert_eq!(order("A:3"), 6);
        assert_eq!(order("B:3"), 48);
        assert_eq!(order("D:4"), 192);
        assert_eq!(order("I2:7"), 14);
        assert_eq!(order("F4"), 1152);
        assert_eq!(order("E6"), 51840);
        assert_eq!(order("E8"), 696729600);
        assert_eq!(order("H3xH3"), 120 * 120);
        let d = GroupSpec::parse("D:4").unwrap().degrees;
        assert_eq!(d, vec![2, 4, 6, 4]);
    }

    #[test]
    fn product_spec_concatenates() {
        let p = product_group(
            GroupSpec::parse("H3").unwrap(),
            GroupSpec::parse("H3").unwrap(),
        );
        assert_eq!(p.rank, 6);
        assert_eq!(p.degrees, vec![2, 6, 10, 2, 6, 10]);
        assert_eq!(p, GroupSpec::parse("H3xH3").unwrap());
    }

    #[test]
    fn spec_json_round_trip() {
        for s in ["H4", "I2:6xA:2", "B:3"] {
            let spec = GroupSpec::parse(s).unwrap();
            let json = serde_json::to_string(&spec).unwrap();
            let back: GroupSpec = serde_json::from_str(&json).unwrap();
            assert_eq!(back, spec);
        }
    }
}
