//! Rooted signed multigraphs.

mod cycles;
pub mod format;
mod graph;
mod models;
mod ocp;
mod transform;

pub use cycles::{cycle_parity, cycle_vertices, is_balanced, path_parity, shifting_equivalent};
pub use graph::{Edge, EdgeId, Parity, RootedSignedGraph, Vertex};
pub use models::{
    odd_minor_to_signed, signed_to_odd_minor, solve_shift, subdivision_to_minor, verify_minor_model,
    verify_subdivision_model, BranchTree, MinorModel, ModelViolation, OddMinorModel, SubdivisionModel,
};
pub use ocp::{max_odd_cycle_packing, ocp_exact, OCP_MAX_VERTICES};
pub use transform::{subdivide_even_edges, PathMap, SubdividedEdge};
