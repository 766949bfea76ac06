//! Exact-arithmetic tools for deciding factoriality of nodal hypersurfaces
//! in `P^4`.
//!
//! A nodal hypersurface of degree `n` is factorial exactly when its nodes
//! impose independent conditions on forms of degree `2n - 5`; the rank of
//! `H_4` is `#nodes - I + 1` where `I` is the number of independent
//! conditions. The crate computes `I` exactly over `Q` or `F_p`, produces
//! explicit separating forms, and implements the incidence checks and
//! geometric constructions (projections, cones, sweeping) used to build
//! such forms by hand.

pub mod config;
pub mod construct;
pub mod error;
pub mod geom;
pub mod linalg;
pub mod nodes;
pub mod normality;
pub mod poly;
pub mod scalar;

pub use error::{Error, Result};
pub use geom::{PointSet, ProjectivePoint};
pub use poly::HomogeneousForm;
pub use scalar::{FieldSpec, Scalar, SeededRng};
