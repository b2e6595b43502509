//! Exact computations with birational maps of the projective plane: base points
//! (including infinitely near ones), proximity, point transport and the growth of
//! base-point counts under iteration.

pub mod algebra;
pub mod error;

pub use algebra::{MultiPoly, Rational, UniPoly};
pub mod plane_map;

pub mod bubble;
pub use error::{Error, Result};
pub mod dynamics;
pub use bubble::{BasePointTree, BubblePoint, ChartStep};
pub use plane_map::{Automorphism, Birational, PlaneMap, ProjPoint, Side};
pub mod registry;
pub mod verify;
