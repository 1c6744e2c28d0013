//! Energy spectra of ultracold atoms trapped in a vertical 1D optical lattice
//! close to a reflective multilayer surface.
//!
//! The crate assembles the full one-dimensional potential seen by the atom —
//! optical lattice, gravity, a finite-temperature Casimir-Polder long-range
//! term computed from the mirror's layer structure, and a constrained 12-3
//! Lennard-Jones short-range model — solves the stationary Schrödinger
//! equation on a graded mesh, classifies the resulting states (atom-surface
//! bound states vs. the surface-modified Wannier-Stark ladder), and
//! synthesizes Raman transition spectra together with parameter-sensitivity
//! scans.
//!
//! Lengths are measured in lattice units (λ_l/2) and energies in recoil
//! energies E_r everywhere except inside the Casimir-Polder tabulation, which
//! works in SI and converts at its boundary. See the guide under `book/` for
//! a narrative tour.

pub mod casimir;
pub mod constants;
pub mod mesh;
pub mod potential;
pub mod solver;
pub mod dielectric;
pub mod error;
pub mod linalg;
pub mod mirror;
pub mod polarizability;
pub mod quad;
pub mod shipped;
pub mod units;

pub use error::{Error, Result};
