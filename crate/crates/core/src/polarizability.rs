//! Ground-state dynamic polarizability at imaginary frequencies.
//!
//! α(iξ) = (2/ħ) Σ_j ω_j d_j² / (ω_j² + ξ²), built from a table of transition
//! lines. The d_j are effective line strengths (the one-line reduction of the
//! full sum-over-states), shipped as data and editable.

use crate::constants::{ATOMIC_DIPOLE, FOUR_PI_EPS0, HBAR, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// One transition line: angular frequency in rad/s, effective dipole in C·m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionLine {
    pub omega: f64,
    pub dipole: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtomModel {
    pub name: String,
    /// Mass in kg.
    pub mass: f64,
    pub lines: Vec<TransitionLine>,
}

/// On-disk atomic data. Each line row gives either a wavelength in nm or an
/// angular frequency in rad/s, plus the dipole in atomic units (e·a₀); the
/// unit tags are the field names.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomFile {
    pub name: String,
    pub mass_kg: f64,
    pub lines: Vec<AtomFileLine>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomFileLine {
    #[serde(default)]
    pub wavelength_nm: Option<f64>,
    #[serde(default)]
    pub omega_rad_s: Option<f64>,
    pub dipole_ea0: f64,
}

impl AtomModel {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: AtomFile =
            toml::from_str(text).map_err(|e| Error::Config(format!("atom file parse error: {e}")))?;
        AtomModel::from_file(&file)
    }

    pub fn from_file(file: &AtomFile) -> Result<Self> {
        if file.mass_kg <= 0.0 {
            return Err(Error::Config(format!("atom {}: mass must be positive", file.name)));
        }
        if file.lines.is_empty() {
            return Err(Error::Config(format!("atom {}: empty line list", file.name)));
        }
        let mut lines = Vec::with_capacity(file.lines.len());
        for (i, row) in file.lines.iter().enumerate() {
            let omega = match (row.wavelength_nm, row.omega_rad_s) {
                (Some(_), Some(_)) => {
                    return Err(Error::Config(format!(
                        "atom {}: line {i} gives both wavelength and omega",
                        file.name
                    )))
                }
                (Some(wl), None) if wl > 0.0 => std::f64::consts::TAU * SPEED_OF_LIGHT / (wl * 1e-9),
                (None, Some(om)) if om > 0.0 => om,
                _ => {
                    return Err(Error::Config(format!(
                        "atom {}: line {i} needs a positive wavelength_nm or omega_rad_s",
                        file.name
                    )))
                }
            };
            if row.dipole_ea0 < 0.0 {
                return Err(Error::Config(format!(
                    "atom {}: line {i} has a negative dipole",
                    file.name
                )));
            }
            lines.push(TransitionLine { omega, dipole: row.dipole_ea0 * ATOMIC_DIPOLE });
        }
        Ok(AtomModel { name: file.name.clone(), mass: file.mass_kg, lines })
    }

    /// α(iξ) in SI units (C·m²/V). Positive, monotonically decreasing in ξ.
    pub fn polarizability_imag(&self, xi: f64) -> Result<f64> {
        if xi < 0.0 {
            return Err(Error::Domain(format!("polarizability needs ξ ≥ 0, got {xi}")));
        }
        if self.lines.is_empty() {
            return Err(Error::Config(format!("atom {}: empty line list", self.name)));
        }
        let mut alpha = 0.0;
        for line in &self.lines {
            alpha += line.omega * line.dipole * line.dipole / (line.omega * line.omega + xi * xi);
        }
        Ok(2.0 / HBAR * alpha)
    }

    /// α(iξ)/4πε₀, the volume convention used by the Casimir-Polder integrand, m³.
    pub fn polarizability_volume(&self, xi: f64) -> Result<f64> {
        Ok(self.polarizability_imag(xi)? / FOUR_PI_EPS0)
    }
}
