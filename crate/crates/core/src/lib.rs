//! Graph rewiring methods together with the structural and similarity
//! measurements used to compare graphs before and after rewiring.

pub mod dataset;
pub mod error;
pub mod graph;
pub mod metrics;
pub mod pipeline;
pub mod rewiring;
pub mod similarity;
pub mod spectral;
pub mod transport;

pub use dataset::{load_tudataset, DatasetBundle};
pub use error::{Error, Result};
pub use graph::{Edge, Graph};
pub use rewiring::{rewire, RewireConfig, RewireResult};
