//! Generalized median graphs of attributed-graph collections.
//!
//! The median is estimated by block coordinate descent: starting from a
//! set-median, the median graph (vertex attributes, adjacency, edge labels) is
//! updated in closed form for fixed vertex transformations, then the
//! transformations are recomputed with a graph edit distance solver, until
//! neither changes.
//!
//! Modules:
//! - [`graph`]: attributed graphs and transformations.
//! - [`cost`]: the edit-cost model.
//! - [`lsap`]: exact linear sum assignment.
//! - [`ged`]: exact, bipartite, IPFP and multistart GED solvers.
//! - [`median`]: set-median and the descent.
//! - [`io`]: GXL/CXL datasets and the native `gmg` format.
//! - [`eval`]: SOD and 1-NN classification experiments.

pub mod cost;
pub mod error;
pub mod eval;
pub mod ged;
pub mod graph;
pub mod io;
pub mod lsap;
pub mod median;
pub mod seed;
pub mod synthetic;

pub use cost::{transformation_cost, CostModel, EdgeSubst, VertexSubst};
pub use error::{Error, Result};
pub use ged::{compute_ged, GedMethod, GedResult, GedSolverConfig};
pub use graph::{Attribute, AttributeKind, AttributedGraph, Transformation};

pub use median::{compute_median, DescentConfig, MedianResult};
