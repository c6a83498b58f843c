//! Perron-Frobenius spectral analysis of completely positive maps.
//!
//! The crate works on dense complex matrices of desk-scale dimension and
//! covers four layers:
//!
//! * [`numerics`]: Hermitian eigensolver, SVD, complex Schur form, polar
//!   decomposition and friends.
//! * [`channels`]: Kraus-form maps, Choi matrices, composition and the
//!   embedding of nonnegative matrices as diagonal channels.
//! * [`pf`]: spectral radius, Perron-Frobenius eigenvectors, the maximal
//!   support projection, the maximal-support eigenvector `zeta`,
//!   irreducibility certificates and Collatz-Wielandt bounds.
//! * [`structure`] and [`qec`]: commutant (exchange) algebras, block
//!   decompositions, verification of the eigenspace structure, and the
//!   polar recovery map for mixed-state error correction.
//!
//! Everything is `no_std` with `alloc`; file formats and the CLI live in the
//! `pfspace` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod channels;
pub mod error;
pub mod numerics;
pub mod pf;
pub mod qec;
pub mod random;
pub mod structure;

pub use channels::{Channel, Choi, ClassicalMatrix};
pub use error::{Error, Result};
pub use numerics::{CMatrix, Tolerances, C64};
