//! Exact lattice-point, normality and very-ampleness computations for
//! integral cyclic polytopes `C_d(tau_1, ..., tau_n)`.
//!
//! All arithmetic is exact (`BigInt` / `BigRational`); hot enumeration loops
//! run on checked machine integers and report overflow as
//! [`Error::InstanceTooLarge`]. Vertex indices in the public API are 1-based.

pub mod arith;
pub mod basis;
pub mod error;
pub mod facets;
mod frame;
pub mod lattice;
pub mod normality;
pub mod polytope;
pub mod spec_file;
pub mod veryample;

pub use arith::{IntegerVector, RationalVector};
pub use basis::{BVector, LatticeBasis, LatticeIndex};
pub use error::{Error, Result};
pub use facets::{Facet, FacetSet, LinearForm};
pub use lattice::{BarycentricCoords, DilatePointSet, DEFAULT_BUDGET};
pub use normality::{
    DecompositionCertificate, HeavySubset, HoleReport, IdpVerdict, MinMaxBounds,
};
pub use polytope::{build_polytope, CyclicPolytope, ParameterList, UnimodularTransform};
pub use spec_file::PolytopeSpec;
pub use veryample::{LocalCertificate, ShiftedGeneratorSet, WitnessFamily};
