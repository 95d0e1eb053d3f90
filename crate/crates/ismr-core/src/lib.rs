//! Core machinery for inverted strict modular relation (ISMR) problems.
//!
//! Everything here is `no_std` with `alloc`: prime-field strings and the
//! relation family, modular XOR games, dense qupit simulation, bounded
//! polynomial threshold circuits with their decision-tree tooling, the qupit
//! planar surface code with an HDRG decoder, the activation decomposer and the
//! resource-crossover solver. Randomness always comes in through a caller
//! supplied [`rand::Rng`].
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod classical;
pub mod field;
pub mod games;
pub mod ismr;
pub mod nndecomp;
pub mod qec;
pub mod qsim;
pub mod resource;
pub mod stats;

mod error;

pub use error::{Error, Result};
pub use field::{DitString, Prime};
