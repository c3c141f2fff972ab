//! Exact-arithmetic workbench for the rank-2 Dipper-Donkin quantized matrix
//! algebra and the rank-2 reflection equation algebra at a primitive m-th
//! root of unity: PBW normalization, identity and centrality checking,
//! explicit module constructions, simplicity and indecomposability analysis,
//! and PI-degree computation.

pub mod error;
pub mod scalar;
pub mod ncalg;
pub mod lattice;
pub mod structure;
pub mod linalg;
pub mod repmod;
pub mod analysis;
pub mod sweep;

pub use error::{Error, Result};
