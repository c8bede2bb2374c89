//! Casimir energies and Green's functions for stacks of magnetodielectric
//! delta-function plates arranged by substitution rules.
//!
//! A stack is a finite sequence of infinitely thin plates on the z-axis,
//! each either an ideal conductor/permeable sheet or a sheet with constant
//! optical conductivity. Quasiperiodic arrangements (Fibonacci, Thue-Morse,
//! and friends) are generated by symbol substitution; the crate computes
//! their vacuum interaction energy through a multiple-scattering expansion
//! and reconstructs the underlying layered-media Green's functions.
//!
//! ```
//! use casimir::energy::{energy_ideal_at, energy_pair};
//! use casimir::lattice::presets;
//! use casimir::optics::Plate;
//!
//! // A conductor facing a permeable plate repels with 7/8 of the
//! // conductor-pair magnitude.
//! let boyer = energy_pair(&Plate::IdealConductor, &Plate::IdealPermeable, 1.0).unwrap();
//! assert!((boyer.value - 0.875).abs() < 1e-10);
//!
//! // Fibonacci word at iteration 3 (five plates): 3 * 7/8 - 1.
//! let e = energy_ideal_at(&presets::fibonacci(), 3, 1.0).unwrap();
//! assert_eq!(e.value, 1.625);
//! ```
//!
//! The `examples/` directory exercises each capability end to end; the
//! `casimir` binary wraps the same routines behind a small command-line
//! interface.

pub mod cli;
pub mod energy;
pub mod greens;
pub mod lattice;
pub mod optics;
mod quad;
pub mod scattering;

pub use energy::{EnergyResult, Method, PlateMaterial};
pub use lattice::{SubstitutionSystem, Symbol, Word};
pub use optics::{Mode, Plate, SpectralPoint};
pub use scattering::Stack;
