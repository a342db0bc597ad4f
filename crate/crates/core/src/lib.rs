pub mod cli;
pub mod error;
pub mod fibration;
pub mod homology;
mod int;
pub mod planner;
pub mod words;

pub use error::{Error, Result};
