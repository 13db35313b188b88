//! Substitute counterdiabatic driving for two-level systems.
//!
//! The crate is `no_std` (with `alloc`) and purely computational:
//!
//! - [`smallmat`]: dense complex vectors and matrices of small dimension.
//! - [`frame`]: instantaneous eigenframes for an N-level Hamiltonian, the
//!   nonadiabatic coupling `iħR†Ṙ`, the counterdiabatic term and the
//!   nullification residual of an adding Hamiltonian.
//! - [`lz`]: the Landau-Zener drive in closed form (mixing angle, rotation,
//!   nonadiabatic matrix, counterdiabatic Hamiltonian).
//! - [`designer`]: substitute adding Hamiltonians solved from the
//!   nullification constraints, Hermitian and non-Hermitian.
//! - [`propagate`]: fixed-step RK4 propagation of states and density
//!   operators, plus closed-form eigen-picture solutions used as oracles.
//! - [`observables`]: populations and relative populations.
//!
//! Units: `ħ = 1`, times in `1/Ω₀`, rates and energies in `Ω₀`.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod designer;
pub mod error;
pub mod frame;
pub mod lz;
pub mod observables;
pub mod propagate;
pub mod smallmat;

pub use designer::{AddParams, AlphaLaw, GammaLaw, Nullify, SolvedAdd};
pub use error::{Error, Result};
pub use frame::{Frame, FramePath, Stencil};
pub use lz::{AngleState, LzSchedule};
pub use propagate::{IntegratorConfig, Trajectory};
pub use smallmat::{CMat, CVec, C64};
