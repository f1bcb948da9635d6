//! Heuristics for area-optimal polygonalization.
//!
//! Given a planar point set, build a simple polygon through all of the points
//! whose area is as large (or as small) as possible. The pipeline is a
//! penalized greedy insertion accelerated with per-edge heaps and a uniform
//! grid, followed by a path-relocation local search. Very large inputs are
//! split into grid cells whose polygons are joined by bridge quadrilaterals.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! parallel drivers live in the `polyg` crate.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
pub mod geom;
pub mod greedy;
pub mod localsearch;
pub mod merge;
pub mod model;
mod noise;
#[cfg(any(test, feature = "oracle"))]
pub mod oracle;
pub mod params;
pub mod solve;
pub mod spatial;

pub use error::Error;
pub use geom::{Point, Segment};
pub use model::{Instance, Objective, Polygon, ScoreReport};
pub use params::{Hood, SolveParams, WeightVariant};
pub use solve::{solve, Solution};
