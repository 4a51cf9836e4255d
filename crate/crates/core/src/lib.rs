pub mod cli;
pub mod error;
pub mod fiber;
pub mod gorenstein;
pub mod group;
pub mod kernel;
pub mod model;
pub mod normality;
pub mod z3;

pub use error::{Error, Result};
