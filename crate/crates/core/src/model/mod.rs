//! Constraint systems for a triangle chain: the incremental MILP, the
//! convex-combination LP, exporters and a small verification simplex.

mod build;
mod json;
mod lpformat;
mod simplex;
mod system;

pub use build::{bound_y, build_lp, build_milp, incremental_fill, relax_integrality, YBounds};
pub use json::{export_json, import_json, FORMAT_VERSION};
pub use lpformat::export_lp_format;
pub use simplex::{solve_lp, SimplexResult, SimplexStatus, MAX_PIVOTS};
pub use system::{
    ConstraintSense, ConstraintSystem, Formulation, LinConstraint, Metadata, Objective, ObjectiveSense, VarDef, VarKind,
};
