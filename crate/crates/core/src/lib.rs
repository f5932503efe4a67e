//! Simulator and measurement toolkit for the area-trapping polymer model.
//!
//! A rate-one Poisson cloud is sampled in the square `[0,n]²`. Directed
//! (up-right) paths from `(0,0)` to `(n,n)` collect cloud points; the
//! area-trapping polymer is the longest such path whose trapped area is at
//! least `(1/2 + α) n²`. The crate computes these paths exactly or through a
//! Lagrangian relaxation, measures the facet and roughness geometry of their
//! concave majorants, evaluates the deterministic limit shape, and runs
//! seeded scaling experiments.
//!
//! Modules, bottom-up:
//!
//! * [`geometry`]: trapped area, concave majorants, distances, anchor angles.
//! * [`sampler`]: reproducible Poisson clouds and the cloud file format.
//! * [`lpp`]: unconstrained and region-restricted last passage percolation.
//! * [`constrained`]: the area-constrained solver.
//! * [`limitshape`]: `c_α`, `w_α`, `ψ_α` and the length functional.
//! * [`roughness`]: facets, MFL/MLR and good-α scans.
//! * [`oracle`]: brute-force ground truth for tiny instances.
//! * [`harness`]: experiment configs, sweeps, exponent fits and plots.

// `!(x > 0.0)` is the idiom here for rejecting NaN alongside bad values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constrained;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod limitshape;
pub mod lpp;
pub mod oracle;
pub mod roughness;
pub mod sampler;

pub use error::{Error, Result};
pub use geometry::{DirectedPath, IncreasingPath, Point, Polyline};
pub use sampler::{PointCloud, SeedSpec};
