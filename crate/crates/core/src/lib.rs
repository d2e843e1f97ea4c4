//! Diagram algebras with ghost-decorated boundaries, exact and numeric.
//!
//! The crate covers the one- and two-boundary ghost algebras, their dilute
//! counterparts, the plain Temperley–Lieb family they contain, and the loop
//! models built on top of them (face operators, boundary triangles, transfer
//! tangles and the relations they satisfy).

pub mod algebra;
pub mod cellular;
pub mod diagram;
pub mod enumeration;
pub mod error;
pub mod json;
pub mod loop_model;
pub mod morphisms;
pub mod scalars;

pub use algebra::Element;
pub use diagram::{Boundaries, Density, Diagram, Endpoint, Link, RawDiagram, Variant};
pub use error::{Error, Result};
pub use scalars::{Coefficient, Monomial, ParamBinding, ParamId, ParamMode, Poly, Scalar, Spectral};
