pub mod bishop;
pub mod circle;
pub mod cli;
pub mod cone;
pub mod error;
pub mod expr;
pub mod extension;
pub mod levi_cone;
pub mod lift;
pub mod lp;
pub mod manifold;
pub mod report;
pub mod sampling;
pub mod scenario;
pub mod wedge;

pub use error::{Error, Result};
