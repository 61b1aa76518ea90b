//! Finite-difference schemes with well-controlled dissipation for
//! nonclassical shocks of dispersive regularizations of conservation laws.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod analysis;
pub mod error;
pub mod field;
pub mod models;
pub mod oracles;
pub mod scheme;
pub mod stencil;
pub mod wcd;

pub use error::{Error, Result};
pub use field::{BoundaryCondition, FieldState, GridSpec};
pub use models::{CubicModel, DispersionKind, Model, RiemannData, SystemKind, SystemModel};
pub use scheme::{run, RunConfig, SchemeVariant, StepRecord, Trajectory};
pub use stencil::{build_stencil_set, tail_sums, SeriesBounds, StencilSet};
pub use wcd::{CoefficientMode, WcdConfig};
