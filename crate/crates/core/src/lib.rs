//! Exact computation of associated orders and freeness of rings of integers
//! for the non-classical Hopf-Galois structures of quartic Galois fields.

pub mod error;
pub mod fields;
pub mod freeness;
pub mod hopf;
pub mod linalg;
pub mod pell;
pub mod report;
