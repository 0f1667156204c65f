//! Numerics for the dimer model on the two-periodic Aztec diamond.
//!
//! The crate covers the finite graph (Kasteleyn matrix, dense inversion,
//! Kenyon correlations), the double contour integral representation of the
//! inverse Kasteleyn matrix, the whole-plane gas/liquid/solid kernels, the
//! saddle-point machinery with Airy-kernel boundary corrections, exact
//! sampling by weighted domino shuffling, tree-path extraction, and SVG
//! figure output.
//!
//! Everything here is pure computation over `alloc`; file formats and the
//! command line live in the companion `aztec-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod airy;
pub mod asymptotics;
pub mod error;
pub mod kasteleyn;
pub mod kernels;
pub mod lattice;
pub mod quad;
pub mod render;
pub mod sampler;
pub mod special;
pub mod treepath;

pub use error::{AccuracyError, ContourError, DomainError, Error};
pub use lattice::{AztecParams, DimerEdge, HeightField, LatticeVertex, Tiling, VertexClass};

/// Complex double, the scalar type used throughout.
pub type C64 = num_complex::Complex<f64>;
