//! Spin-squeezing parameters and pair-correlation structure of small multiqubit states.
//!
//! The crate is `no_std` and needs only `alloc`. States are built in [`states`],
//! single-qubit and pair statistics come from [`reductions`], frames and local
//! unitaries live in [`operators`], and the squeezing parameters and
//! entanglement witnesses are in [`squeezing`] and [`entanglement`].

#![no_std]

extern crate alloc;

pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod operators;
pub mod random;
pub mod reductions;
pub mod squeezing;
pub mod states;

pub use error::{Error, Result};
pub use linalg::C64;
pub use operators::{Direction, Frame, LocalUnitary};
pub use reductions::{CorrelationMatrix, MomentTable, QubitMoments};
pub use states::{DensityMatrix, MixtureTerm, PureState, SymmetricState};
