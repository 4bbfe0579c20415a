//! Exact search and explicit constructions for 0/1 matrices in which every
//! `k x k` minor contains a 1, and for mark sets hitting every box of an
//! `N x N x N` lattice cube.

pub mod bits;
pub mod bounds;
pub mod cache;
pub mod canon;
pub mod cli;
pub mod construct;
pub mod error;
pub mod lattice;
pub mod matrix;
pub mod solve;
pub mod verify;

pub use bits::Bits;
pub use error::{Error, Result};
pub use matrix::{BinaryMatrix, ColSubset, RowSubset};
pub use verify::{brute_force_zero_minor, check_row_surplus, find_zero_minor, MinorWitness};
