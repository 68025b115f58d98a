//! Dense statevector simulator and free-fermion circuit compiler for the
//! boundary-corrected 1-D XY spin chain.

pub mod circuits;
pub mod cli;
pub mod dense;
pub mod error;
pub mod gates;
pub mod observables;
pub mod statevector;
pub mod verify;
pub mod xymodel;

pub use error::{Error, Result};
