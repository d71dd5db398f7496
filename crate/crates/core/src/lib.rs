//! Exact analysis of Hermite subdivision operators.
//!
//! The crate decides spectral conditions and polynomial reproduction of a
//! mask, computes de Rham transforms, checks special sum rules and runs exact
//! Hermite iterations. Everything is computed in exact rational arithmetic;
//! decimals appear only when values are rendered for export.

pub mod derham;
pub mod error;
pub mod exact;
pub mod mask;
pub mod operator;
pub mod spectral;
pub mod sumrule;

pub use error::{Error, Result};
pub use exact::{MatrixSeries, RatMatrix, RatPoly, Rational, SolutionSet};
pub use mask::{catalog, parse_mask, serialize_mask, Mask, MatrixSequence, Parity};
pub use operator::{HermiteSequence, IndexInterval, IterateFrame, Known};
pub use spectral::{PolyVector, SpectralReport};
pub use sumrule::{MomentWitness, Sign};
