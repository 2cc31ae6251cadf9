//! Exact-arithmetic engine for complete simplicial toric threefolds.
//!
//! Every type is generic over the integer ring `Z` (see [`scalar::LatticeInt`]);
//! the aliases below fix `Z = BigInt`, which is what the command-line tool and
//! the golden checklist use.

pub mod checks;
pub mod divisor;
pub mod error;
pub mod fan;
pub mod intersection;
pub mod io;
pub mod lattice;
pub mod mmp;
pub mod scalar;
pub mod singularity;
pub mod volume;

pub use error::{Error, Result};

pub use num_bigint::BigInt;

pub type Rational = scalar::Q<BigInt>;
pub type LatticePoint = lattice::LatticePoint<BigInt>;
pub type RationalVector = lattice::RationalVector<BigInt>;
pub type Fan = fan::Fan<BigInt>;
pub type Wall = fan::Wall<BigInt>;
pub type TorusDivisor = divisor::TorusDivisor<BigInt>;
pub type CurveClass = intersection::CurveClass<BigInt>;
pub type MoriCone = intersection::MoriCone<BigInt>;
pub type NefCone = intersection::NefCone<BigInt>;
pub type Polytope3 = volume::Polytope3<BigInt>;
pub type RayClassification = mmp::RayClassification<BigInt>;
pub type TwoRayGameReport = mmp::TwoRayGameReport<BigInt>;
