pub mod error;
pub mod poly_core;
pub mod serde_big;

pub use error::{Error, Result};
pub mod knotpoly;
pub mod cyclonorm;
pub mod ramify;
pub mod flipsearch;
pub mod cli;
