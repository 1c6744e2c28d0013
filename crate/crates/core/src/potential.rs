//! Assembly of the total 1D potential V(z) = V_s(z) + V_g(z) + V_op(z).
//!
//! The short-range surface physics is a 12-3 Lennard-Jones well whose depth is
//! slaved to the van der Waals coefficient through (4/3) D z₀³ = C₃, so both
//! branches share the -C₃/z³ tail; the long-range branch is the tabulated
//! Casimir-Polder potential. The two are glued at a matching distance z_m
//! where both behave as z⁻³. Public evaluation is in program units (lattice
//! lengths, recoil energies); the surface pieces convert from SI internally.

use crate::casimir::{CpInterpolator, PotentialTable};
use crate::error::{Error, Result};
use crate::units::LatticeUnits;

/// Parameters of the 12-3 Lennard-Jones model. Invariant: (4/3) D z₀³ = C₃.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LennardJonesParams {
    /// Equilibrium distance, m.
    pub z0: f64,
    /// Well depth D, J.
    pub depth: f64,
    /// Van der Waals coefficient C₃, J·m³.
    pub c3: f64,
}

/// D = 3 C₃ / (4 z₀³), J.
pub fn lj_depth_from_z0(z0: f64, c3: f64) -> Result<f64> {
    if z0 <= 0.0 || c3 <= 0.0 {
        return Err(Error::Domain(format!("lj_depth_from_z0 needs z0, C3 > 0 (got {z0}, {c3})")));
    }
    Ok(3.0 * c3 / (4.0 * z0 * z0 * z0))
}

impl LennardJonesParams {
    pub fn from_z0_c3(z0: f64, c3: f64) -> Result<Self> {
        Ok(LennardJonesParams { z0, depth: lj_depth_from_z0(z0, c3)?, c3 })
    }

    pub fn validate(&self) -> Result<()> {
        if self.z0 <= 0.0 || self.depth <= 0.0 {
            return Err(Error::Domain("Lennard-Jones parameters must be positive".into()));
        }
        let lhs = 4.0 / 3.0 * self.depth * self.z0.powi(3);
        if (lhs - self.c3).abs() > 1e-10 * self.c3 {
            return Err(Error::Domain(format!(
                "Lennard-Jones constraint violated: (4/3)Dz0³ = {lhs:.6e} vs C3 = {:.6e}",
                self.c3
            )));
        }
        Ok(())
    }
}

/// V_LJ(z) = (D/3)[(z₀/z)¹² - 4(z₀/z)³], J, for z in m.
pub fn lj_potential(z: f64, params: &LennardJonesParams) -> Result<f64> {
    if z <= 0.0 {
        return Err(Error::Domain(format!("lj_potential needs z > 0, got {z}")));
    }
    let r3 = (params.z0 / z).powi(3);
    Ok(params.depth / 3.0 * (r3 * r3 * r3 * r3 - 4.0 * r3))
}

/// Optical lattice term U(1 - cos 2k_l z)/2 in program units: z in lattice
/// lengths, result in units of U. Minima at integer z, maxima at half-integers.
pub fn optical_potential(z_lattice: f64, depth: f64) -> f64 {
    depth * (1.0 - (std::f64::consts::TAU * z_lattice).cos()) / 2.0
}

/// Gravity term -m g z, J, for z in m. The mirror hangs above the atoms, so
/// the potential falls with increasing distance from it.
pub fn gravity_potential(z: f64, mass: f64, g: f64) -> f64 {
    -mass * g * z
}

/// Find the Lennard-Jones ↔ Casimir-Polder matching distance: the smallest
/// z ≥ 5z₀ where (a) the repulsive fraction (z₀/z)⁹/4 is below 10⁻³ and
/// (b) the tabulated potential satisfies |z³V + C₃|/C₃ < 10⁻², i.e. both
/// sides are already pure -C₃/z³ at the percent level.
pub fn find_matching_distance(params: &LennardJonesParams, table: &PotentialTable) -> Result<f64> {
    params.validate()?;
    let z_cap = 50e-9;
    if table.z_min() > params.z0 || table.z_max() < z_cap {
        return Err(Error::Domain(format!(
            "matching needs the table to cover [{:.2e}, {:.2e}] m, got [{:.2e}, {:.2e}]",
            params.z0,
            z_cap,
            table.z_min(),
            table.z_max()
        )));
    }
    let interp = table.interpolator()?;
    let floor = 5.0 * params.z0;
    let candidates = std::iter::once(floor)
        .chain(table.z.iter().copied().filter(|&z| z > floor))
        .take_while(|&z| z <= z_cap);
    for z in candidates {
        let repulsive_fraction = (params.z0 / z).powi(9) / 4.0;
        if repulsive_fraction >= 1e-3 {
            continue;
        }
        let v = interp.eval(z)?;
        if (z.powi(3) * v + params.c3).abs() / params.c3 < 1e-2 {
            return Ok(z);
        }
    }
    Err(Error::Matching(format!(
        "no matching distance below 50 nm: the C3 = {:.3e} J·m³ used for the short-range \
         model is inconsistent with the tabulated potential",
        params.c3
    )))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceVariant {
    LennardJonesCp,
    PerfectSurface,
}

/// The surface term V_s(z): Lennard-Jones below z_m, interpolated
/// Casimir-Polder above, or the idealized perfect surface (0 outside, hard
/// wall at the origin, realized in the solver as a Dirichlet condition).
#[derive(Debug, Clone)]
pub struct SurfacePotential {
    pub variant: SurfaceVariant,
    lj: Option<LennardJonesParams>,
    interp: Option<CpInterpolator>,
    /// Matching distance, m (0 for the perfect surface).
    pub z_m: f64,
}

impl SurfacePotential {
    /// Build the composite surface model, choosing z_m by the two-criterion
    /// rule and verifying branch continuity there.
    pub fn lennard_jones(params: LennardJonesParams, table: &PotentialTable) -> Result<Self> {
        let z_m = find_matching_distance(&params, table)?;
        Self::lennard_jones_at(params, table, z_m)
    }

    /// Same, with an explicitly chosen matching distance (used by the z_m
    /// robustness checks and by scans that freeze z_m across steps). The
    /// continuity of the two branches at z_m is still verified.
    pub fn lennard_jones_at(
        params: LennardJonesParams,
        table: &PotentialTable,
        z_m: f64,
    ) -> Result<Self> {
        params.validate()?;
        let interp = table.interpolator()?;
        let v_cp = interp.eval(z_m)?;
        let v_lj = lj_potential(z_m, &params)?;
        if (v_lj - v_cp).abs() / v_cp.abs() > 1e-2 {
            return Err(Error::Matching(format!(
                "branches disagree by {:.2}% at z_m = {:.3e} m",
                100.0 * (v_lj - v_cp).abs() / v_cp.abs(),
                z_m
            )));
        }
        Ok(SurfacePotential {
            variant: SurfaceVariant::LennardJonesCp,
            lj: Some(params),
            interp: Some(interp),
            z_m,
        })
    }

    /// As `lennard_jones_at` but without the continuity check, for scans that
    /// deliberately hold the short-range model fixed while the long-range
    /// table is rescaled.
    pub fn lennard_jones_unchecked(
        params: LennardJonesParams,
        table: &PotentialTable,
        z_m: f64,
    ) -> Result<Self> {
        params.validate()?;
        Ok(SurfacePotential {
            variant: SurfaceVariant::LennardJonesCp,
            lj: Some(params),
            interp: Some(table.interpolator()?),
            z_m,
        })
    }

    pub fn perfect() -> Self {
        SurfacePotential {
            variant: SurfaceVariant::PerfectSurface,
            lj: None,
            interp: None,
            z_m: 0.0,
        }
    }

    pub fn params(&self) -> Option<&LennardJonesParams> {
        self.lj.as_ref()
    }

    /// V_s(z) in J for z in m.
    pub fn eval_si(&self, z: f64) -> Result<f64> {
        match self.variant {
            SurfaceVariant::PerfectSurface => {
                Ok(if z < 0.0 { f64::INFINITY } else { 0.0 })
            }
            SurfaceVariant::LennardJonesCp => {
                if z <= 0.0 {
                    return Err(Error::Domain(format!("surface potential needs z > 0, got {z}")));
                }
                if z < self.z_m {
                    lj_potential(z, self.lj.as_ref().expect("variant carries params"))
                } else {
                    self.interp.as_ref().expect("variant carries table").eval(z)
                }
            }
        }
    }
}

/// The full potential in program units.
#[derive(Debug, Clone)]
pub struct TotalPotential {
    pub units: LatticeUnits,
    /// Optical depth U in E_r.
    pub depth: f64,
    pub surface: SurfacePotential,
    pub include_gravity: bool,
    pub include_lattice: bool,
    pub include_surface: bool,
}

impl TotalPotential {
    pub fn new(units: LatticeUnits, depth: f64, surface: SurfacePotential) -> Result<Self> {
        if depth < 0.0 {
            return Err(Error::Domain(format!("optical depth must be ≥ 0, got {depth}")));
        }
        Ok(TotalPotential {
            units,
            depth,
            surface,
            include_gravity: true,
            include_lattice: true,
            include_surface: true,
        })
    }

    /// V(z) in E_r for z in lattice units.
    pub fn eval(&self, z_lattice: f64) -> Result<f64> {
        let mut v = 0.0;
        if self.include_lattice {
            v += optical_potential(z_lattice, self.depth);
        }
        if self.include_gravity {
            v -= self.units.bloch_interval_recoil() * z_lattice;
        }
        if self.include_surface {
            let z_si = self.units.length_si(z_lattice);
            v += self.surface.eval_si(z_si)? / self.units.recoil_energy;
        }
        Ok(v)
    }

    /// Largest distance at which the surface term can be evaluated, in
    /// lattice units (∞ when no tabulated branch is in play).
    pub fn max_z(&self) -> f64 {
        match (&self.include_surface, self.surface.variant) {
            (true, SurfaceVariant::LennardJonesCp) => {
                let (_, z_hi) = self.surface.interp.as_ref().unwrap().range();
                self.units.length_lattice(z_hi)
            }
            _ => f64::INFINITY,
        }
    }
}
