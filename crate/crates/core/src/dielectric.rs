//! Dielectric response of mirror materials at imaginary frequencies.
//!
//! Each material is a sum of Lorentz oscillators,
//!
//!   ε(iξ) = 1 + Σ_j S_j / (ω_j² + ξ² + γ_j ξ),
//!
//! which on the imaginary axis is real, ≥ 1, and monotonically decreasing in
//! ξ. The shipped fits (SiO₂, Ta₂O₅) are replaceable data inputs, not code.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// One Lorentz oscillator: strength in rad²/s², resonance and damping in rad/s.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Oscillator {
    pub strength: f64,
    pub resonance: f64,
    #[serde(default)]
    pub damping: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialModel {
    pub name: String,
    #[serde(default)]
    pub oscillators: Vec<Oscillator>,
}

impl MaterialModel {
    /// Vacuum: ε(iξ) = 1 for all ξ.
    pub fn vacuum() -> Self {
        MaterialModel { name: "vacuum".into(), oscillators: Vec::new() }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let m: MaterialModel = toml::from_str(text)
            .map_err(|e| Error::Config(format!("material file parse error: {e}")))?;
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, osc) in self.oscillators.iter().enumerate() {
            if osc.strength < 0.0 || osc.resonance <= 0.0 || osc.damping < 0.0 {
                return Err(Error::Config(format!(
                    "material {}: oscillator {i} needs strength ≥ 0, resonance > 0, damping ≥ 0",
                    self.name
                )));
            }
        }
        Ok(())
    }

    /// ε(iξ). Finite at ξ = 0, tends to 1 as ξ → ∞.
    pub fn epsilon_imag(&self, xi: f64) -> Result<f64> {
        if xi < 0.0 {
            return Err(Error::Domain(format!("epsilon_imag needs ξ ≥ 0, got {xi}")));
        }
        let mut eps = 1.0;
        for osc in &self.oscillators {
            eps += osc.strength / (osc.resonance * osc.resonance + xi * xi + osc.damping * xi);
        }
        Ok(eps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn vacuum_is_unity() {
        let vac = MaterialModel::vacuum();
        for xi in [0.0, 1e12, 1e16, 1e20] {
            assert_eq!(vac.epsilon_imag(xi).unwrap(), 1.0);
        }
    }

    #[test]
    fn single_oscillator_static_limit() {
        let m = MaterialModel {
            name: "test".into(),
            oscillators: vec![Oscillator { strength: 4.0e32, resonance: 2.0e16, damping: 0.0 }],
        };
        // ε(0) = 1 + S/ω₀²
        assert_relative_eq!(m.epsilon_imag(0.0).unwrap(), 1.0 + 4.0e32 / 4.0e32, epsilon = 1e-14);
    }

    #[test]
    fn monotone_decreasing_and_tends_to_one() {
        let m = MaterialModel {
            name: "test".into(),
            oscillators: vec![
                Oscillator { strength: 4.5e32, resonance: 2.0e16, damping: 1e14 },
                Oscillator { strength: 6.0e28, resonance: 1.9e14, damping: 0.0 },
            ],
        };
        let mut prev = m.epsilon_imag(0.0).unwrap();
        for k in 1..40 {
            let xi = 10f64.powf(10.0 + 0.25 * k as f64);
            let eps = m.epsilon_imag(xi).unwrap();
            assert!(eps >= 1.0);
            assert!(eps <= prev + 1e-15);
            prev = eps;
        }
        assert!((m.epsilon_imag(1e22).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn negative_xi_rejected() {
        assert!(MaterialModel::vacuum().epsilon_imag(-1.0).is_err());
    }
}
