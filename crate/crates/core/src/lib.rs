pub mod cli;
pub mod closed_form;
pub mod error;
pub mod exact_arith;
pub mod linearization;
pub mod matrix_power;
pub mod zero_sets;

pub use error::{Error, Result};
