//! Tropical galaxies of Laman graphs.

pub mod arboreal;
pub mod cli;
pub mod error;
pub mod excision;
pub mod fan;
pub mod flats;
pub mod galaxy;
pub mod intersect;
pub mod labels;
pub mod multigraph;

mod dsu;

pub use error::{Error, Result};
pub use labels::LabelSet;
