//! Exact models of Lie contact structures and the path geometry of their
//! chains.
//!
//! The crate realizes the contact-graded algebra `so(p+2,q+2)`, the split
//! quaternion structure on its `g₋₁` part, the extension pair `(i, α)` into
//! `sl(2n+2)`, the induced curvature `Ψ_α` with its Kostant codifferential,
//! chain curves on the homogeneous model of isotropic planes, and the cubic
//! tensor `S` that recovers the Segre cone. Every identity is checked in exact
//! rational arithmetic; floats appear only for sampling and export.
//!
//! Randomized and exhaustive checks fan out over [`exec::Strategy`], which uses
//! rayon when the `parallel` feature is on and a plain loop otherwise.

pub mod chains;
pub mod error;
pub mod exec;
pub mod extension;
pub mod lie;
pub mod matrix;
pub mod path_sl;
pub mod rat;
pub mod report;
pub mod sampling;
pub mod so_contact;
pub mod split_quat;

pub use error::{Error, Result};
pub use matrix::{exp_float, exp_nilpotent, rank_kernel, solve_linear, MatF, MatR};
pub use rat::{rat, Rat};
pub use so_contact::Signature;
