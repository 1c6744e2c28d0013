//! Embedded copies of the shipped data files, so the binary runs without any
//! external paths. All of them are replaceable via the run configuration.

use crate::dielectric::MaterialModel;
use crate::error::Result;
use crate::mirror::LayerStack;
use crate::polarizability::AtomModel;
use std::collections::BTreeMap;

pub const RB87_TOML: &str = include_str!("../data/rb87.toml");
pub const RB87_EXTENDED_TOML: &str = include_str!("../data/rb87_extended.toml");
pub const SIO2_TOML: &str = include_str!("../data/sio2.toml");
pub const TA2O5_TOML: &str = include_str!("../data/ta2o5.toml");
pub const BRAGG_STACK_TOML: &str = include_str!("../data/bragg_stack.toml");
pub const SILICA_HALFSPACE_TOML: &str = include_str!("../data/silica_halfspace.toml");

pub fn rb87() -> AtomModel {
    AtomModel::from_toml_str(RB87_TOML).expect("shipped rb87 data parses")
}

pub fn rb87_extended() -> AtomModel {
    AtomModel::from_toml_str(RB87_EXTENDED_TOML).expect("shipped extended rb87 data parses")
}

pub fn sio2() -> MaterialModel {
    MaterialModel::from_toml_str(SIO2_TOML).expect("shipped SiO2 data parses")
}

pub fn ta2o5() -> MaterialModel {
    MaterialModel::from_toml_str(TA2O5_TOML).expect("shipped Ta2O5 data parses")
}

pub fn default_materials() -> BTreeMap<String, MaterialModel> {
    let mut m = BTreeMap::new();
    for mat in [sio2(), ta2o5()] {
        m.insert(mat.name.clone(), mat);
    }
    m
}

/// The default mirror: ten SiO₂/Ta₂O₅ quarter-wave bilayers on silica.
pub fn bragg_stack() -> Result<LayerStack> {
    let file = LayerStack::parse_toml(BRAGG_STACK_TOML)?;
    LayerStack::from_file_parts(&file, &default_materials())
}

/// Bare fused-silica half space, the single-interface reference.
pub fn silica_halfspace() -> Result<LayerStack> {
    let file = LayerStack::parse_toml(SILICA_HALFSPACE_TOML)?;
    LayerStack::from_file_parts(&file, &default_materials())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_data_parses() {
        assert_eq!(rb87().lines.len(), 2);
        assert_eq!(rb87_extended().lines.len(), 5);
        assert_eq!(bragg_stack().unwrap().layers.len(), 20);
        assert!(silica_halfspace().unwrap().layers.is_empty());
    }

    #[test]
    fn shipped_sio2_static_permittivity_in_silica_range() {
        let eps0 = sio2().epsilon_imag(0.0).unwrap();
        assert!((3.5..=4.0).contains(&eps0), "ε(0) = {eps0}");
    }

    #[test]
    fn shipped_rb87_static_polarizability() {
        // within 10% of 47.4e-30 m³ in the volume convention
        let a0 = rb87().polarizability_volume(0.0).unwrap();
        assert!((a0 - 47.4e-30).abs() / 47.4e-30 < 0.10, "α(0)/4πε₀ = {a0:.3e}");
    }
}
