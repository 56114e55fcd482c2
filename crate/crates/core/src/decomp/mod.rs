//! Tree decompositions: plain, K-free, tame OCP and TDM.

mod elim;
mod exact;
pub mod format;
mod heuristic;
mod ops;
mod types;
mod validate;

pub use exact::{exact_kfree_decomposition, exact_kfree_tw, EXACT_KFREE_MAX_VERTICES};
pub use heuristic::{
    decompose_heuristic, kfree_heuristic, min_degree_decomposition, tame_heuristic, HeuristicTdm, DEFAULT_BUDGET,
    SINGLE_BAG_MAX_VERTICES,
};
pub use ops::{
    compose_tdm, compress_bags, compress_tame, compress_tdm, compress_tree, extract_from_tdm, uncontract_subdivision,
};
pub use types::*;
pub use validate::{
    kfree_width, tame_width, tdm_width, tree_width, validate, validate_kfree, validate_tame, validate_tdm,
    validate_tree, width, Violation,
};
