//! Exact reflection-group engine.
//!
//! Builds finite reflection groups from Cartan matrices, computes Molien
//! series of covariant modules, constructs orbit Chern-class basic invariants
//! and certifies Hessian module bases with exact determinants.

pub mod cache;
pub mod cartan;
pub mod certify;
pub mod chain;
pub mod error;
pub mod expected;
pub mod group;
pub mod invariants;
pub mod matrix;
pub mod molien;
pub mod poly;
pub mod scalar;
pub mod symbolic;
pub mod tables;

pub use cartan::{catalog, catalog_str, CartanDatum, GroupLabel};
pub use certify::{certify, certify_with, compose_product_basis, CertificationReport, CertifyOptions, Provenance, Verdict};
pub use error::{Error, Result};
pub use group::{build_group, CovectorOrbit, Covector, GroupElement, ReflectionGroup};
pub use invariants::{BasicInvariantSet, CandidateSet, Certificate, PointJet};
pub use matrix::Matrix;
pub use molien::{CharPolyHistogram, CovariantClass, PoincareResult};
pub use poly::{series_inverse, TruncatedSeries, UniPoly};
pub use scalar::{Field, GoldenScalar, Rational, Scalar};
