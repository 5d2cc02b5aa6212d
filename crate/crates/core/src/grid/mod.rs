//! Parameter grids and calculus on them.

mod calculus;
pub mod diff;
mod field;
mod interp;
mod loops;
mod patch;

pub use calculus::{
    axis_weights, exterior_derivative, hodge_star_fields, hodge_star_oneform, integrate, integrate_masked,
    laplace_beltrami, laplace_beltrami_conservative, MetricField,
};
pub use diff::{derivative, partial_derivatives, Direction, Order, Partials, SecondPartials};
pub use field::{Field, FieldValue, ScalarField};
pub use interp::interpolate;
pub use loops::LoopPath;
pub use patch::{Axis, AxisKind, GridPatch};
