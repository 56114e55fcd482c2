pub mod cli;
pub mod decomp;
pub mod error;
pub mod grids;
pub mod ip;
pub mod matrix;
pub mod sgraph;
mod text;

pub use error::{Error, Result};
