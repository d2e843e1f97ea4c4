//! Loop models on the ghost algebras: face operators, boundary triangles,
//! the local relations they satisfy, and commuting transfer tangles.

pub mod boundary;
pub mod calibration;
pub mod faces;
pub mod relations;
pub mod sampling;
pub mod tangle;

pub use boundary::{solve_constraint, ArcParams, BoundaryOperator, ConstraintRoots, Family, Labels};
pub use faces::{face, face_weights, TriangleShape};
pub use relations::{
    bybe_sides, check_bybe, check_crossing, check_inversion, check_ybe, commutation_residual, transfer,
    transfer_tangle, BoundarySide,
};
pub use sampling::Sampler;
pub use tangle::{Tangle, TangleBuilder};
