//! Computational finite geometry for unitals in PG(2,q²).
//!
//! The crate builds the objects involved in recognising a classical unital
//! from a cyclic 2-point stabiliser of order q² − 1 and checks them
//! exhaustively at small q:
//!
//! - [`field`]: GF(q²) with Frobenius, norm and trace.
//! - [`plane`]: points and lines of PG(2,q²).
//! - [`collineation`]: projectivities, orbits, 2-point stabilisers.
//! - [`unital`]: unitals, Hermitian curves and cones, Buekenhout–Metz
//!   unitals and the classicality test.
//! - [`quotient`]: the plane of order q whose points are orbits of a cyclic
//!   diagonal group.
//! - [`series`] and [`intersection`]: truncated power series, the Hermitian
//!   branch at O and intersection multiplicities.
//! - [`theorem`]: both sides of the characterisation on a single unital.
//! - [`io`]: text formats for unitals and quotient planes.

pub mod collineation;
pub mod error;
pub mod field;
pub mod intersection;
pub mod io;
pub mod plane;
pub mod quotient;
pub mod series;
pub mod theorem;
pub mod unital;

pub use error::{Error, Result};
pub use field::{make_tower, FieldTower, Fq2};
pub use collineation::{Projectivity, StabilizerCertificate};
pub use plane::{ProjLine, ProjPoint};
pub use quotient::{PlaneLine, QuotientPlane, WeightRule, WeightedPointSet};
pub use series::TruncatedSeries;
pub use unital::{HermitianForm, Unital, UnitalKind};
