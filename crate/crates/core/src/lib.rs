//! Approximate Hadamard matrices: ±1 matrices with small condition number.
//!
//! Exact integer Gram matrices, Sylvester/Paley constructions, flat
//! orthogonal matrices by submatrix orthogonalization, randomized rounding,
//! explicit families, clique lower bounds, small-order search and the
//! certificate/report layer used by the command-line tool.

pub mod certify;
pub mod constructions;
pub mod error;
pub mod families;
pub mod field;
pub mod flat;
pub mod io;
pub mod lower_bound;
pub mod matrix;
pub mod plot;
pub mod poly;
pub mod rounding;
pub mod search;
pub mod spectral;

pub use error::{Error, Result};
pub use matrix::{GramMatrix, SignMatrix};
pub use spectral::{condition_number, SpectralReport};
