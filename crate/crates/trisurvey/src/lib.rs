//! Distributed-style triangle surveys on metadata-decorated graphs, simulated
//! on a single machine.
//!
//! The crate ingests undirected edge lists with optional vertex/edge metadata,
//! builds the degree-ordered directed graph (DODGr) partitioned across
//! simulated ranks, and enumerates every triangle through asynchronous
//! buffered message passing. A user callback runs on the six metadata values
//! of each triangle. Two enumeration algorithms are provided, push-only and
//! push-pull, with byte-level communication accounting.
//!
//! See the `examples/` directory for one runnable example per capability.

pub mod analyses;
pub mod comm;
pub mod containers;
pub mod error;
pub mod graph;
pub mod meta;
pub mod oracle;
pub mod survey;
pub mod wire;

pub use comm::{CommConfig, CommStats, Ctx, Engine, RankId};
pub use error::{Error, Result};
pub use graph::{CleanGraph, DistGraph, IngestOptions, VertexId};
pub use meta::MetaValue;
pub use survey::{Algorithm, SurveyStats, TriangleMeta};
