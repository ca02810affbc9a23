//! Exact Kazhdan–Lusztig combinatorics for the Hecke algebra of the
//! symmetric group over Z[q^{1/2}, q^{-1/2}]: the T/C/C′ bases, cells and
//! cell modules, Specht modules with explicit filtrations under induction
//! and restriction, and the correspondence between pairs of partitions and
//! unions of left cells.

pub mod cells;
pub mod hecke;
pub mod pairs;
pub mod ring;
pub mod specht;
pub mod symgroup;
pub mod tableaux;

use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("rank mismatch: {0}")]
    RankMismatch(String),
    #[error("invalid permutation one-line form: {0}")]
    InvalidPermutation(String),
    #[error("invalid composition: {0}")]
    InvalidComposition(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("rank {0} exceeds the safety bound {1}; pass --force to override")]
    RankBound(usize, usize),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("cache error: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
