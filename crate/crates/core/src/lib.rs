//! Connected dominating sets of size at most (10n−18)/21 (equivalently,
//! spanning trees with at least 11n/21 leaves) for planar triangulations in
//! near-linear time, with extensions to orientable surface triangulations and
//! one-bend collinear-set certificates, all validated against brute-force
//! oracles on small instances.

pub mod error;
pub mod plane;

pub mod fixtures;
pub mod critical;
pub mod greedy;
pub mod onebend;
pub mod oracle;
pub mod reduce;
pub mod surface;








pub use error::{GraphError, Result};
pub use plane::{BoundaryClassification, MutEvent, PlaneGraph, VertexId};
