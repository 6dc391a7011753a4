//! Batch-dynamic trees built on rake-compress contraction.
//!
//! The crate maintains a weighted forest under batches of edge insertions
//! and deletions and answers six families of batch queries — connectivity,
//! subtree aggregates, lowest common ancestors, path sums, path
//! minima/maxima and nearest marked vertices — each in work proportional to
//! the part of the contraction the batch actually touches rather than to
//! `batch size × log n`.
//!
//! The main entry points:
//!
//! * [`rc::RcForest`] — the core structure for forests of maximum degree 3:
//!   batch link/cut, the six query families, compressed path trees.
//! * [`ternary::TernaryForest`] — arbitrary-degree forests, translated onto
//!   a degree-3 shadow forest by maintaining chains of identity-weight
//!   dummy vertices.
//! * [`msf::IncrementalMsf`] — incremental minimum spanning forests driven
//!   by compressed path trees.
//! * [`treegen`] — a parameterized streaming random-forest generator for
//!   benchmarks.
//! * [`oracle`] — independent brute-force references used by the test
//!   suites and by `rc-bench --verify`.
//!
//! Each major capability has a runnable example under `examples/`; start
//! with `cargo run --example connectivity`.

pub mod algebra;
pub mod error;
pub mod forest;
pub mod io;
pub mod msf;
pub mod oracle;
pub mod rc;
pub mod ternary;
pub mod treegen;

pub use algebra::{AggKind, Group, GroupWeight, Max, Min, Monoid, Semigroup, Sum};
pub use error::{Error, Result};
pub use forest::{Forest, WeightedEdge};
pub use oracle::SubtreeContent;
pub use rc::{RcConfig, RcForest, Scheme, StoreConfig};
pub use ternary::{EdgeDelta, Ternarizer, TernaryForest};
