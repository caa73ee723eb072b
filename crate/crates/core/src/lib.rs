//! Entanglement detection with positive, not completely positive, finite rank
//! elementary operators.
//!
//! The crate is organised bottom-up:
//!
//! - [`matcore`]: dense complex matrices, Hermitian spectra, singular values,
//!   determinants and a PSD test with an explicit tolerance.
//! - [`bipartite`]: density matrices on `H ⊗ K`, partial transpose,
//!   realignment, `(Φ ⊗ I)ρ`, Schmidt decomposition and convex mixing.
//! - [`posmaps`]: elementary operators `X ↦ Σ AᵢXBᵢ`, the built-in map
//!   families, Choi matrices, complete positivity and the quick NCP test.
//! - [`certify`]: executable positivity certificates (the `B` matrices, the
//!   determinants `f` and `h`, their multilinear coefficients, grid minima).
//! - [`states`]: the parameterised state families and their closed-form PPT
//!   and realignment predicates.
//! - [`criteria`]: PPT, realignment and positive-map criteria, the pure-state
//!   test, classification and parameter sweeps.
//!
//! # Index conventions
//!
//! Kets are zero-indexed: the basis vector written `|k⟩` with `k = 1, 2, …`
//! in the usual one-indexed notation is `|k - 1⟩` here. Product kets
//! `|i⟩ ⊗ |j⟩` of a `dA × dB` system live at flat index `i·dB + j`.
//! `E_ji` always denotes the matrix unit `|j⟩⟨i|` from the input space into the
//! output space of a map.

pub mod bipartite;
pub mod certify;
pub mod criteria;
mod error;
pub mod matcore;
pub mod posmaps;
pub mod sampling;
pub mod states;

pub use error::{Error, Result};
pub use num_complex::Complex64;
