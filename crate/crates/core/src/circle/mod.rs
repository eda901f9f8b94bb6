//! Directions, arcs and exact piecewise-constant functions on the unit circle.

mod angle;
mod arc;
mod construction;
mod directions;

pub(crate) use angle::DoubleDouble;
pub use angle::Angle;
pub use arc::{evaluate, half_split, integral, is_even, rotate_arc, Arc, ArcFunction, Piece, DISJOINT_SLACK};
pub use construction::{assemble_omega, atom_sign, make_w, Construction, SignSequence};
pub use directions::{build_directions, DirectionFamily, GeometrySpec, WINDOW_HI, WINDOW_LO};
