pub mod error;
pub mod generators;
pub mod geom;
pub mod mesh;
pub mod mesher;
pub mod perf;
pub mod metrics;
pub mod rng;
pub mod sparse;
pub mod stats;
pub mod vem;

pub use error::{Error, Result};
