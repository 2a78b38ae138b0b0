pub mod approx;
pub mod bounds;
pub mod clus2k;
pub mod data;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod kmeans;
pub mod mincut;
pub mod rng;
pub mod sampling;
pub mod spectral;

pub use error::{Error, Result};
