//! Exact computations with cluster varieties that carry frozen directions:
//! seeds and their mutations, Picard groups of the partially compactified
//! `X`-space, the principal-coefficient torsor over it, Cartier lattices of
//! fan compactifications, and theta functions from rank-two scattering
//! diagrams.
//!
//! All arithmetic is exact (arbitrary-precision integers and rationals).

pub mod atlas;
pub mod cli;
pub mod error;
pub mod lattice;
pub mod laurent;
pub mod qlinalg;
pub mod report;
pub mod scattering;
pub mod seed;
pub mod theta;
pub mod torsor;

pub use error::{Error, Result};
pub use lattice::{FinAbPresentation, IntMatrix};
pub use laurent::{LaurentPoly, RationalFn, TorusPoint};
pub use seed::{DerivedMaps, PrinSeed, Seed};
