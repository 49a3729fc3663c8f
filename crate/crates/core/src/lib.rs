//! Exact-arithmetic laboratory for the VC-dimension of polytopes presented
//! by at most `k` vertices in `R^d`.
//!
//! The crate is organised around six pieces:
//!
//! * [`geometry`] - rational points, orientation determinants, the simplex
//!   predicates built from them, convex-hull membership (by Carathéodory
//!   reduction and by an independent exact LP).
//! * [`range`] - realizability of labelings by `k`-vertex polytopes, shatter
//!   checks and lower-bound searches.
//! * [`bounds`] - certified (interval) evaluation of the closed-form upper
//!   bound machinery.
//! * [`signs`] - the orientation polynomial family, its sign patterns and the
//!   pattern-to-subset correspondence.
//! * [`construction`] - the clustered-circle lower-bound construction,
//!   apex schedule search and replayable certificates.
//! * [`document`] - JSON point-set documents.
//!
//! Everything on a decision path is exact. Batch work (labelings, sampled
//! configurations) goes through [`parallel`], which uses rayon when the
//! `parallel` feature is enabled and plain iterators otherwise.

pub mod bounds;
pub mod combinatorics;
pub mod construction;
pub mod document;
pub mod geometry;
pub mod parallel;
pub mod range;
pub mod rational;
pub mod sampling;
pub mod signs;

mod error;

pub use error::{Error, Result};
pub use geometry::{PointSet, RationalPoint, Sign, VPolytope};
pub use rational::Rational;
