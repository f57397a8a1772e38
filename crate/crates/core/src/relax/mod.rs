//! Triangle-chain relaxations, their strength, and bound-driven refinement.

mod geometry;
mod hull;
mod refine;

pub use geometry::{
    bound_strength, build_chain, exact_strength, iteration_bound, secant_line, tangent_intersection, tangent_line,
    Line, Point, Triangle, TriangleChain,
};
pub use hull::{chain_hull, convex_hull, estimate_hausdorff, polygon_distance};
pub use refine::{refine, refine_with, RefineReport, StopReason};
