//! Chunk-sparse recovery with partial prior support information.
//!
//! The crate recovers `X` in `Y = ΦX + N` when `X` has few non-zero chunks
//! of `d` consecutive rows and part of the support is already known, as in
//! frame-to-frame massive MIMO channel tracking.

pub mod analysis;
pub mod error;
pub mod experiments;
pub mod io;
pub mod matrix;
pub mod mimo;
pub mod oracle;
pub mod pursuit;
pub mod sparsity;

pub use error::{Error, Result};
pub use matrix::{ChunkIndexing, ComplexMatrix};
pub use pursuit::{PursuitConfig, RecoveryResult, StopReason};
pub use sparsity::{ChunkSparseMatrix, ChunkSupport, PriorSupportInfo};
