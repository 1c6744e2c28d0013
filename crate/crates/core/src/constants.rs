//! Physical constants (CODATA 2018) and a few derived atomic-scale quantities.

/// Fundamental constants in SI units.
///
/// `g` is the local gravitational acceleration; it is a configuration input
/// rather than a universal constant, so it lives here with a default that can
/// be overridden from the run configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Speed of light, m/s.
    pub c: f64,
    /// Boltzmann constant, J/K.
    pub k_b: f64,
    /// Vacuum permittivity, F/m.
    pub epsilon_0: f64,
    /// Gravitational acceleration, m/s².
    pub g: f64,
    /// Bohr radius, m.
    pub bohr_radius: f64,
    /// Electronvolt, J.
    pub electronvolt: f64,
}

/// Planck constant, J·s.
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_8128e-12;
/// Bohr radius, m.
pub const BOHR_RADIUS: f64 = 5.291_772_109_03e-11;
/// Electronvolt, J.
pub const ELECTRONVOLT: f64 = 1.602_176_634e-19;
/// Elementary charge, C.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Atomic mass unit, kg.
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;
/// Electron mass, kg.
pub const ELECTRON_MASS: f64 = 9.109_383_7015e-31;
/// Default gravitational acceleration, m/s².
pub const STANDARD_GRAVITY: f64 = 9.81;

/// Mass of ⁸⁷Rb, kg (86.909180527 u).
pub const RB87_MASS: f64 = 86.909_180_527 * ATOMIC_MASS_UNIT;

/// e·a₀, the atomic unit of electric dipole moment, C·m.
pub const ATOMIC_DIPOLE: f64 = ELEMENTARY_CHARGE * BOHR_RADIUS;

/// a₀³·eV, the unit in which van der Waals C₃ coefficients are reported, J·m³.
pub const BOHR3_EV: f64 = BOHR_RADIUS * BOHR_RADIUS * BOHR_RADIUS * ELECTRONVOLT;

/// 4πε₀, F/m. Divides an SI polarizability to give the volume (a₀³) convention.
pub const FOUR_PI_EPS0: f64 = 4.0 * std::f64::consts::PI * EPSILON_0;

impl Default for PhysicalConstants {
    fn default() -> Self {
        PhysicalConstants {
            hbar: HBAR,
            c: SPEED_OF_LIGHT,
            k_b: BOLTZMANN,
            epsilon_0: EPSILON_0,
            g: STANDARD_GRAVITY,
            bohr_radius: BOHR_RADIUS,
            electronvolt: ELECTRONVOLT,
        }
    }
}

impl PhysicalConstants {
    pub fn with_gravity(g: f64) -> Self {
        PhysicalConstants { g, ..Default::default() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_positive_and_codata_consistent() {
        let pc = PhysicalConstants::default();
        for v in [pc.hbar, pc.c, pc.k_b, pc.epsilon_0, pc.g, pc.bohr_radius, pc.electronvolt] {
            assert!(v > 0.0);
        }
        // hbar = h / 2π to full precision of the defined h
        assert!((pc.hbar - PLANCK / std::f64::consts::TAU).abs() / pc.hbar < 1e-9);
        // 6-digit CODATA checks
        assert!((pc.c - 2.997_924_58e8).abs() < 1.0);
        assert!((pc.bohr_radius - 5.291_77e-11).abs() / pc.bohr_radius < 1e-5);
        assert!((RB87_MASS - 1.443_16e-25).abs() / RB87_MASS < 1e-5);
    }
}
