//! Fuchsian groups of signature (0; 2, 2, 2; infinity) built from Fricke
//! triples, the tree of elliptic generator triples with its Markoff-style
//! heights, horocycle shadows and excision intervals with exact overlap
//! certificates, periodic excision covers with measure bookkeeping, and the
//! continued-fraction folding / dribble / word machinery — all verifiable at
//! desk scale in exact rational or configurable-precision float arithmetic.

pub mod cf;
pub mod dribble;
pub mod error;
pub mod excision;
pub mod fricke;
pub mod lagrange;
pub mod mobius;
pub(crate) mod quad;
pub mod report;
pub mod scalar;
pub mod shadow;
pub mod tree;
pub mod words;

pub use error::{Error, Result};
pub use scalar::{Scalar, DEFAULT_PRECISION};
