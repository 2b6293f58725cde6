//! Freeness, normal forms and diffeomorphism types of torus biquotients of
//! `S³×S³ = SU(2)×SU(2)`.

pub mod actions;
pub mod cli;
pub mod classify;
pub mod error;
pub mod freeness;
pub mod lattice;
pub mod sweep;
pub mod swclass;

pub use error::{Error, Result};
