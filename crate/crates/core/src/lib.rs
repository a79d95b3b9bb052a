pub mod arith;
pub mod basis;
pub mod decompose;
pub mod error;
pub mod fixtures;
pub mod groups;
pub mod invariants;
pub mod linalg;
pub mod molien;
pub mod poly;
pub mod selfcheck;

pub use arith::{CycloScalar, TruncSeries, UniPoly};
pub use error::{Error, Result};
pub use fixtures::Fixtures;
pub use groups::{
    build_generators, charpoly_census, enumerate_group, product_group, weight_orbit, Census,
    Exceptional, GroupSpec, GroupType, ReflectionGroup, WeightOrbit,
};
pub use linalg::Matrix;
pub use molien::{Character, Family, RatioPolynomial};
pub use poly::{hessian_sym, tensor_eval, LinearForm, MultiPoly, SymTensorPoly};
