//! Curves, pants decompositions and finite balls of the pants graph on
//! small punctured surfaces, with exhaustive checks of the loop structure
//! that pins down the automorphisms of the pants graph.

pub mod bridge;
pub mod cli;
pub mod error;
pub mod farey;
pub mod loops;
pub mod pants;
pub mod surface;

pub use error::{Error, Result};
