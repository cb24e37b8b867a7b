//! Exact enumeration of threshold and 2-threshold functions on integer grids.
//!
//! A threshold function on `G(m, n) = {0..m-1} x {0..n-1}` is a `{0,1}`-valued
//! function whose true and false points have disjoint convex hulls. The crate
//! counts them exactly, along with conjunctions of two of them, proper pairs
//! of oriented prime segments and pairs of prime segments in convex position,
//! and cross-checks the counts against each other and against their
//! asymptotic main terms.

pub mod asymptotics;
pub mod census;
pub mod error;
pub mod geometry;
pub mod numtheory;
pub mod pairs;
pub mod scalar;
pub mod threshold;

pub use error::{Error, Result};
pub use geometry::Point;
pub use scalar::{Constants, Coord, Real};
pub use threshold::{GridDims, GridFunction};

/// Point with `i32` coordinates, the default for grid work.
pub type GridPoint = Point<i32>;
/// Point with `i64` coordinates.
pub type WidePoint = Point<i64>;
/// Double-double real used for extended-precision checks.
pub type Ext = qd::Quad;
