//! Exact arithmetic for the matrix cover of the variety of special lattices
//! over truncated Witt vectors: the Witt ring `W_N(F_{p^m})`, matrices over it,
//! elementary divisors, the subregular strata, degeneration witnesses and the
//! orbit/stabilizer dimension counts.

pub mod degeneration;
pub mod dimension;
pub mod error;
pub mod field;
pub mod matrix;
pub mod snf;
pub mod strata;
pub mod witt;

pub use degeneration::{degeneration_chain, embed_witness, eta_t, fac_witness, ChainStep, EmbeddedWitness, FacWitness};
pub use dimension::{DimReport, PointCensus};
pub use error::{Error, Result};
pub use field::{FieldDescriptor, FieldElem};
pub use matrix::{GroupShape, WittMat};
pub use snf::{divisor_type, snf, Cochar, SnfResult};
pub use strata::{Sampler, StratumReport};
pub use witt::{WittElem, WittRing};
