//! A numerical laboratory for functions that are twice differentiable
//! everywhere, with continuous Laplacian and bounded but discontinuous Hessian.
//!
//! The construction is assembled from a single building block
//! `η(|x|) x₁x₂ |x|^{2t} φ(-ln |x|²)` placed, scaled and weighted on a ladder of
//! disjoint balls shrinking to the origin. Every derivative is analytic and is
//! checked against an independent finite-difference oracle.
//!
//! Runnable tours of each capability live in `examples/`:
//!
//! ```bash
//! cargo run --example witness_table
//! ```

pub mod block;
pub mod cli;
pub mod bounds;
pub mod cutoff;
pub mod error;
pub mod fd;
pub mod gallery;
pub mod ladder;
pub mod operators;
pub mod phi;
pub mod radial;
pub mod sampling;
pub mod verify;
pub mod search;

pub use block::{block_eval, BlockParams, PointEval};
pub use cutoff::{make_cutoff, SmoothCutoff};
pub use error::{LabError, Result};
pub use fd::{fd_gradient, fd_hessian, FdConfig, FdScheme};
pub use phi::{AdmissiblePhi, PhiKind};
