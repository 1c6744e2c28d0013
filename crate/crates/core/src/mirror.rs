//! Reflection amplitudes of the layered mirror on the imaginary frequency
//! axis, by transfer matrices.
//!
//! At imaginary frequency ξ every wave is evanescent: the propagation factors
//! are pure decays e^{∓κd} and all matrix entries are real. Growth factors are
//! pulled out as a common scalar (the reflection amplitude is a ratio of
//! matrix entries, so any overall scale cancels), which keeps thick stacks
//! free of overflow.

use crate::constants::SPEED_OF_LIGHT;
use crate::dielectric::MaterialModel;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Polarization {
    TE,
    TM,
}

/// One layer of the stack: a material plus a thickness in metres.
#[derive(Debug, Clone)]
pub struct Layer {
    pub material: MaterialModel,
    pub thickness: f64,
}

/// Layer stack, ordered from the vacuum-facing side down to the semi-infinite
/// substrate.
#[derive(Debug, Clone)]
pub struct LayerStack {
    pub layers: Vec<Layer>,
    pub substrate: MaterialModel,
}

/// On-disk description of a stack: named materials and thicknesses in nm.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StackFile {
    pub substrate: String,
    #[serde(default)]
    pub layers: Vec<StackLayerEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StackLayerEntry {
    pub material: String,
    pub thickness_nm: f64,
}

impl LayerStack {
    /// Bare half-space of a single material.
    pub fn half_space(material: MaterialModel) -> Self {
        LayerStack { layers: Vec::new(), substrate: material }
    }

    /// Resolve a stack file against a registry of materials keyed by name.
    pub fn from_file_parts(
        file: &StackFile,
        materials: &BTreeMap<String, MaterialModel>,
    ) -> Result<Self> {
        let lookup = |name: &str| -> Result<MaterialModel> {
            materials
                .get(name)
                .cloned()
                .ok_or_else(|| Error::Config(format!("stack references unknown material {name:?}")))
        };
        let mut layers = Vec::with_capacity(file.layers.len());
        for entry in &file.layers {
            if entry.thickness_nm <= 0.0 {
                return Err(Error::Config(format!(
                    "layer of {} has non-positive thickness {} nm",
                    entry.material, entry.thickness_nm
                )));
            }
            layers.push(Layer { material: lookup(&entry.material)?, thickness: entry.thickness_nm * 1e-9 });
        }
        Ok(LayerStack { layers, substrate: lookup(&file.substrate)? })
    }

    pub fn parse_toml(text: &str) -> Result<StackFile> {
        toml::from_str(text).map_err(|e| Error::Config(format!("stack file parse error: {e}")))
    }
}

/// Fresnel reflection amplitude from medium i into medium j at imaginary
/// frequency ξ and transverse wavevector k, with κ_a = √(k² + ε_a ξ²/c²).
/// Real-valued; |r| ≤ 1 for ε ≥ 1.
pub fn fresnel_imag(k: f64, xi: f64, eps_i: f64, eps_j: f64, pol: Polarization) -> Result<f64> {
    if k < 0.0 || xi < 0.0 {
        return Err(Error::Domain(format!("fresnel_imag needs k, ξ ≥ 0 (got k={k}, ξ={xi})")));
    }
    if k == 0.0 && xi == 0.0 {
        return Err(Error::Domain("fresnel_imag: k = ξ = 0 is degenerate".into()));
    }
    let q2 = (xi / SPEED_OF_LIGHT).powi(2);
    let kappa_i = (k * k + eps_i * q2).sqrt();
    let kappa_j = (k * k + eps_j * q2).sqrt();
    Ok(match pol {
        Polarization::TE => (kappa_i - kappa_j) / (kappa_i + kappa_j),
        Polarization::TM => {
            (eps_j * kappa_i - eps_i * kappa_j) / (eps_j * kappa_i + eps_i * kappa_j)
        }
    })
}

/// 2×2 real matrix, kept as rows. Overall scale is irrelevant to ρ.
#[derive(Debug, Clone, Copy)]
pub struct TransferMatrix(pub [[f64; 2]; 2]);

impl TransferMatrix {
    pub fn identity() -> Self {
        TransferMatrix([[1.0, 0.0], [0.0, 1.0]])
    }

    /// Interface matrix, common 1/t̄ prefactor dropped.
    fn interface(r: f64) -> Self {
        TransferMatrix([[1.0, -r], [-r, 1.0]])
    }

    /// Decaying propagation through thickness d at decay constant κ, with the
    /// growing factor e^{+κd} pulled out: diag(e^{-2κd}, 1).
    fn propagation(kappa: f64, d: f64) -> Self {
        TransferMatrix([[(-2.0 * kappa * d).exp(), 0.0], [0.0, 1.0]])
    }

    pub fn mul(self, rhs: TransferMatrix) -> Self {
        let a = self.0;
        let b = rhs.0;
        TransferMatrix([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }

    /// Divide by the largest entry magnitude so repeated products stay in
    /// range; ρ only ever uses entry ratios.
    fn renormalized(self) -> Result<Self> {
        let m = self.0;
        let maxabs = m
            .iter()
            .flatten()
            .fold(0.0f64, |acc, &v| acc.max(v.abs()));
        if maxabs == 0.0 || !maxabs.is_finite() {
            return Err(Error::Accuracy(
                "transfer-matrix product degenerated; layer propagation overflow".into(),
            ));
        }
        Ok(TransferMatrix([
            [m[0][0] / maxabs, m[0][1] / maxabs],
            [m[1][0] / maxabs, m[1][1] / maxabs],
        ]))
    }
}

/// Total reflection amplitude ρ = -𝕋₂₁/𝕋₂₂ of a stack at (k, ξ), on the
/// imaginary axis. The composition runs from the vacuum interface inwards:
/// 𝕋 = I_N · P_N · … · P_1 · I_0.
pub fn stack_reflection(stack: &LayerStack, k: f64, xi: f64, pol: Polarization) -> Result<f64> {
    let mut eps_prev = 1.0; // vacuum side
    let mut t = TransferMatrix::identity();
    let q2 = (xi / SPEED_OF_LIGHT).powi(2);
    for layer in &stack.layers {
        let eps = layer.material.epsilon_imag(xi)?;
        let r = fresnel_imag(k, xi, eps_prev, eps, pol)?;
        let kappa = (k * k + eps * q2).sqrt();
        t = TransferMatrix::propagation(kappa, layer.thickness)
            .mul(TransferMatrix::interface(r))
            .mul(t)
            .renormalized()?;
        eps_prev = eps;
    }
    let eps_sub = stack.substrate.epsilon_imag(xi)?;
    let r = fresnel_imag(k, xi, eps_prev, eps_sub, pol)?;
    t = TransferMatrix::interface(r).mul(t);
    if t.0[1][1] == 0.0 {
        return Err(Error::Accuracy("stack reflection: T22 vanished".into()));
    }
    Ok(-t.0[1][0] / t.0[1][1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dielectric::Oscillator;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn glass() -> MaterialModel {
        MaterialModel {
            name: "glass".into(),
            oscillators: vec![Oscillator { strength: 4.5e32, resonance: 2.0e16, damping: 0.0 }],
        }
    }

    fn coating() -> MaterialModel {
        MaterialModel {
            name: "coating".into(),
            oscillators: vec![Oscillator { strength: 2.8e32, resonance: 9.0e15, damping: 0.0 }],
        }
    }

    #[test]
    fn fresnel_no_interface_is_zero() {
        for pol in [Polarization::TE, Polarization::TM] {
            let r = fresnel_imag(1e7, 1e15, 2.5, 2.5, pol).unwrap();
            assert_eq!(r, 0.0);
        }
    }

    #[test]
    fn fresnel_static_tm_limit() {
        // ξ = 0, any k: TM → (ε_j - ε_i)/(ε_j + ε_i)
        let r = fresnel_imag(3e6, 0.0, 1.0, 4.0, Polarization::TM).unwrap();
        assert_relative_eq!(r, 3.0 / 5.0, epsilon = 1e-14);
        let r_te = fresnel_imag(3e6, 0.0, 1.0, 4.0, Polarization::TE).unwrap();
        assert_eq!(r_te, 0.0);
    }

    #[test]
    fn fresnel_large_k_limits() {
        // k → ∞ at fixed ξ: TM → (ε_j-ε_i)/(ε_j+ε_i), TE → 0
        let xi = 1e15;
        let k = 1e12;
        let r_tm = fresnel_imag(k, xi, 1.0, 3.0, Polarization::TM).unwrap();
        assert_relative_eq!(r_tm, 0.5, epsilon = 1e-5);
        let r_te = fresnel_imag(k, xi, 1.0, 3.0, Polarization::TE).unwrap();
        assert!(r_te.abs() < 1e-5);
    }

    #[test]
    fn fresnel_degenerate_input() {
        assert!(fresnel_imag(0.0, 0.0, 1.0, 2.0, Polarization::TM).is_err());
    }

    #[test]
    fn vacuum_stack_reflects_nothing() {
        let stack = LayerStack {
            layers: vec![Layer { material: MaterialModel::vacuum(), thickness: 100e-9 }],
            substrate: MaterialModel::vacuum(),
        };
        for pol in [Polarization::TE, Polarization::TM] {
            let rho = stack_reflection(&stack, 1e7, 1e15, pol).unwrap();
            assert!(rho.abs() < 1e-15);
        }
    }

    #[test]
    fn zero_thickness_layer_collapses_to_substrate_fresnel() {
        let stack = LayerStack {
            layers: vec![Layer { material: coating(), thickness: 0.0 }],
            substrate: glass(),
        };
        for pol in [Polarization::TE, Polarization::TM] {
            let k = 2e7;
            let xi = 8e14;
            let rho = stack_reflection(&stack, k, xi, pol).unwrap();
            let eps_s = glass().epsilon_imag(xi).unwrap();
            let direct = fresnel_imag(k, xi, 1.0, eps_s, pol).unwrap();
            assert_relative_eq!(rho, direct, epsilon = 1e-12);
        }
    }

    /// Independent closed-form oracle for a single slab: the two-interface
    /// Airy formula r = (r01 + r12 e^{-2κ₁d}) / (1 + r01 r12 e^{-2κ₁d}).
    fn airy_slab(k: f64, xi: f64, eps1: f64, eps2: f64, d: f64, pol: Polarization) -> f64 {
        let q2 = (xi / SPEED_OF_LIGHT).powi(2);
        let r01 = fresnel_imag(k, xi, 1.0, eps1, pol).unwrap();
        let r12 = fresnel_imag(k, xi, eps1, eps2, pol).unwrap();
        let kappa1 = (k * k + eps1 * q2).sqrt();
        let a = (-2.0 * kappa1 * d).exp();
        (r01 + r12 * a) / (1.0 + r01 * r12 * a)
    }

    #[test]
    fn single_slab_matches_airy_oracle() {
        let slab = LayerStack {
            layers: vec![Layer { material: coating(), thickness: 63e-9 }],
            substrate: glass(),
        };
        for pol in [Polarization::TE, Polarization::TM] {
            for ik in 0..20 {
                for ix in 0..20 {
                    let k = 1e5 * 10f64.powf(0.2 * ik as f64);
                    let xi = 1e13 * 10f64.powf(0.2 * ix as f64);
                    let eps1 = coating().epsilon_imag(xi).unwrap();
                    let eps2 = glass().epsilon_imag(xi).unwrap();
                    let want = airy_slab(k, xi, eps1, eps2, 63e-9, pol);
                    let got = stack_reflection(&slab, k, xi, pol).unwrap();
                    assert_relative_eq!(got, want, max_relative = 1e-10, epsilon = 1e-13);
                }
            }
        }
    }

    #[test]
    fn thick_stack_no_overflow_and_bounded() {
        // 40 bilayers, huge κd products: must stay finite with |ρ| ≤ 1
        let mut layers = Vec::new();
        for _ in 0..40 {
            layers.push(Layer { material: glass(), thickness: 90e-9 });
            layers.push(Layer { material: coating(), thickness: 65e-9 });
        }
        let stack = LayerStack { layers, substrate: glass() };
        for pol in [Polarization::TE, Polarization::TM] {
            // κd up to ~1e11·1e-7·80 — far beyond exp range without rescaling
            let rho = stack_reflection(&stack, 1e11, 1e16, pol).unwrap();
            assert!(rho.is_finite());
            assert!(rho.abs() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn top_layer_dominates_at_large_kappa() {
        // κ·d_top > 30 → the buried layers no longer matter: ρ equals the
        // bare vacuum/top-layer Fresnel amplitude, which itself approaches
        // the electrostatic limit (ε_top-1)/(ε_top+1) as k → ∞.
        let stack = LayerStack {
            layers: vec![
                Layer { material: glass(), thickness: 91e-9 },
                Layer { material: coating(), thickness: 63e-9 },
            ],
            substrate: glass(),
        };
        let xi = 1e15;
        let k = 35.0 / 91e-9; // κ ≈ k here
        let rho = stack_reflection(&stack, k, xi, Polarization::TM).unwrap();
        let eps_top = glass().epsilon_imag(xi).unwrap();
        let bare = fresnel_imag(k, xi, 1.0, eps_top, Polarization::TM).unwrap();
        assert_relative_eq!(rho, bare, max_relative = 1e-10);
        assert_relative_eq!(rho, (eps_top - 1.0) / (eps_top + 1.0), max_relative = 1e-3);
    }

    proptest! {
        /// |ρ| ≤ 1 and real everywhere on the imaginary axis.
        #[test]
        fn reflection_bounded(log_k in 4.0f64..11.0, log_xi in 12.0f64..17.0,
                              pol_te in proptest::bool::ANY) {
            let stack = LayerStack {
                layers: vec![
                    Layer { material: glass(), thickness: 91e-9 },
                    Layer { material: coating(), thickness: 63e-9 },
                    Layer { material: glass(), thickness: 91e-9 },
                ],
                substrate: coating(),
            };
            let pol = if pol_te { Polarization::TE } else { Polarization::TM };
            let rho = stack_reflection(&stack, 10f64.powf(log_k), 10f64.powf(log_xi), pol).unwrap();
            prop_assert!(rho.is_finite());
            prop_assert!(rho.abs() <= 1.0 + 1e-10);
        }

        /// Associativity of the layer-matrix product: splitting one layer in
        /// two at an interior plane cannot change ρ.
        #[test]
        fn composition_associative(split in 0.05f64..0.95, log_k in 5.0f64..9.0) {
            let d = 150e-9;
            let whole = LayerStack {
                layers: vec![Layer { material: coating(), thickness: d }],
                substrate: glass(),
            };
            let split_stack = LayerStack {
                layers: vec![
                    Layer { material: coating(), thickness: split * d },
                    Layer { material: coating(), thickness: (1.0 - split) * d },
                ],
                substrate: glass(),
            };
            let k = 10f64.powf(log_k);
            for pol in [Polarization::TE, Polarization::TM] {
                let a = stack_reflection(&whole, k, 5e14, pol).unwrap();
                let b = stack_reflection(&split_stack, k, 5e14, pol).unwrap();
                prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-12));
            }
        }
    }
}
