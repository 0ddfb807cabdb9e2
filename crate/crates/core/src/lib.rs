//! Kernelization for Edge Triangle Packing and Edge Triangle Covering.
//!
//! The pipeline reduces an instance `(G, k)` with nine reduction rules until
//! either a verdict falls out or the graph has at most `3k` vertices. The
//! [`audit`] module re-derives that bound on each reduced instance by
//! redistributing integer charges, and [`oracle`] provides exact solvers to
//! check that every rule preserves the answer.

pub mod audit;
pub mod crown;
pub mod gen;
pub mod graph;
pub mod oracle;
pub mod packing;
pub mod rules;

pub use audit::{audit, AuditReport};
pub use crown::FatHeadCrown;
pub use gen::{generate, GenKind, GenSpec};
pub use graph::{Edge, Graph, GraphError, GraphFormat, Instance, ProblemVariant, Triangle, VertexId};
pub use oracle::Solution;
pub use packing::TrianglePacking;
pub use rules::{kernelize, lift_solution, KernelOutcome, RuleEvent, Verdict};
