//! Mode analysis and field propagation for the quantum volume hologram memory.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: Bessel functions `J0`, `J1` used by every kernel.
//! * [`grid`]: quadrature rules on the unit interval and sample reconstruction.
//! * [`kernels`]: the write/readout interaction kernels and the coupling constant.
//! * [`linalg`]: dense symmetric eigensolver (cyclic Jacobi).
//! * [`eigenmodes`]: shared eigenfunctions, eigenvalue pairs and overlap factors.
//! * [`dynamics`]: two independent solvers of the slow-envelope equations.
//! * [`memory_cycle`]: mode-space beamsplitter maps for write, readout and the full cycle.
//! * [`capacity`]: transverse-mode capacity and the paraxial diffraction phase.
//! * [`io`]: CSV and JSON emission.
//! * [`verify`]: the built-in consistency suite run by `holovolume verify`.
//!
//! Data-parallel loops (kernel assembly, face evaluation, sweeps) use rayon when
//! the `parallel` feature is enabled (default) and fall back to plain iterators
//! otherwise.

#[macro_use]
mod par;

pub mod capacity;
pub mod dynamics;
pub mod eigenmodes;
mod error;
pub mod grid;
pub mod io;
pub mod kernels;
pub mod linalg;
pub mod memory_cycle;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use capacity::{HologramGeometry, VolumeCapacity};
pub use dynamics::{BoundaryData, ExcitationBalance, FieldState};
pub use eigenmodes::ModeSet;
pub use grid::{GridScheme, UnitGrid};
pub use kernels::{Coupling, PhysicalCoupling};
pub use memory_cycle::{CycleConfig, ModeCoefficients};
