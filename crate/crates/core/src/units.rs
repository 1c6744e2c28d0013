//! Program units.
//!
//! Everything downstream of the Casimir-Polder tabulation works in lattice
//! units: lengths in λ_l/2 (one lattice period of the standing wave) and
//! energies in the recoil energy E_r = ħ²k_l²/2m. This module holds the unit
//! system and the conversions in and out of SI.

use crate::constants::{PhysicalConstants, PLANCK, RB87_MASS};
use crate::error::{Error, Result};

/// The lattice unit system for a given laser wavelength and atomic mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeUnits {
    /// Lattice laser wavelength λ_l, m.
    pub lambda_l: f64,
    /// Atomic mass, kg.
    pub atom_mass: f64,
    /// Length unit λ_l/2, m.
    pub length_unit: f64,
    /// Recoil energy ħ²k_l²/2m, J.
    pub recoil_energy: f64,
    pub constants: PhysicalConstants,
}

/// Recoil energy ħ²k_l²/2m with k_l = 2π/λ_l, in J.
pub fn recoil_energy(lambda_l: f64, mass: f64) -> Result<f64> {
    if lambda_l <= 0.0 || mass <= 0.0 {
        return Err(Error::Domain(format!(
            "recoil_energy requires positive wavelength and mass, got λ={lambda_l}, m={mass}"
        )));
    }
    let k_l = std::f64::consts::TAU / lambda_l;
    Ok(crate::constants::HBAR.powi(2) * k_l * k_l / (2.0 * mass))
}

/// Bloch frequency ν_B = m g (λ_l/2) / h, in Hz: the frequency spacing of the
/// Wannier-Stark ladder under gravity.
pub fn bloch_frequency(lambda_l: f64, mass: f64, g: f64) -> Result<f64> {
    if lambda_l <= 0.0 || mass <= 0.0 || g <= 0.0 {
        return Err(Error::Domain(format!(
            "bloch_frequency requires positive inputs, got λ={lambda_l}, m={mass}, g={g}"
        )));
    }
    Ok(mass * g * (lambda_l / 2.0) / PLANCK)
}

/// Units understood by [`convert`]. Each carries one dimension; conversions
/// are exact multiplicative factors derived from the `LatticeUnits` context.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    Meter,
    Nanometer,
    Angstrom,
    /// λ_l/2.
    LatticeLength,
    Joule,
    /// E_r.
    Recoil,
    Electronvolt,
    /// Energy expressed as an equivalent frequency E/h, in Hz.
    Hertz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dimension {
    Length,
    Energy,
}

impl Unit {
    fn dimension(self) -> Dimension {
        match self {
            Unit::Meter | Unit::Nanometer | Unit::Angstrom | Unit::LatticeLength => {
                Dimension::Length
            }
            Unit::Joule | Unit::Recoil | Unit::Electronvolt | Unit::Hertz => Dimension::Energy,
        }
    }
}

impl LatticeUnits {
    pub fn new(lambda_l: f64, atom_mass: f64, constants: PhysicalConstants) -> Result<Self> {
        let recoil = recoil_energy(lambda_l, atom_mass)?;
        Ok(LatticeUnits {
            lambda_l,
            atom_mass,
            length_unit: lambda_l / 2.0,
            recoil_energy: recoil,
            constants,
        })
    }

    /// Default system: ⁸⁷Rb in a 532 nm lattice.
    pub fn rb87_532() -> Self {
        LatticeUnits::new(532e-9, RB87_MASS, PhysicalConstants::default())
            .expect("default units are valid")
    }

    /// Bloch frequency in Hz for this unit system.
    pub fn bloch_frequency(&self) -> f64 {
        bloch_frequency(self.lambda_l, self.atom_mass, self.constants.g)
            .expect("fields validated at construction")
    }

    /// h·ν_B in units of E_r: the asymptotic Wannier-Stark interval.
    pub fn bloch_interval_recoil(&self) -> f64 {
        self.bloch_frequency() * PLANCK / self.recoil_energy
    }

    /// Multiplicative factor taking `unit` to its SI base (m or J).
    fn to_si_factor(&self, unit: Unit) -> f64 {
        match unit {
            Unit::Meter => 1.0,
            Unit::Nanometer => 1e-9,
            Unit::Angstrom => 1e-10,
            Unit::LatticeLength => self.length_unit,
            Unit::Joule => 1.0,
            Unit::Recoil => self.recoil_energy,
            Unit::Electronvolt => crate::constants::ELECTRONVOLT,
            Unit::Hertz => PLANCK,
        }
    }

    /// Exact multiplicative conversion. Errors on incompatible dimensions;
    /// round trips are identity to machine precision.
    pub fn convert(&self, value: f64, from: Unit, to: Unit) -> Result<f64> {
        if from.dimension() != to.dimension() {
            return Err(Error::Unit { from: format!("{from:?}"), to: format!("{to:?}") });
        }
        Ok(value * self.to_si_factor(from) / self.to_si_factor(to))
    }

    /// Length in lattice units → m.
    pub fn length_si(&self, z_lattice: f64) -> f64 {
        z_lattice * self.length_unit
    }

    /// Length in m → lattice units.
    pub fn length_lattice(&self, z_si: f64) -> f64 {
        z_si / self.length_unit
    }

    /// Energy in J → E_r.
    pub fn energy_recoil(&self, e_si: f64) -> f64 {
        e_si / self.recoil_energy
    }

    /// Energy in E_r → an equivalent frequency in Hz.
    pub fn recoil_to_hz(&self, e_recoil: f64) -> f64 {
        e_recoil * self.recoil_energy / PLANCK
    }
}
