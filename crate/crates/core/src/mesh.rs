//! Discretization meshes for the 1D eigenproblem.
//!
//! The composite potential spans ~12 decades, so a uniform mesh is hopeless:
//! near the Lennard-Jones well the local de Broglie wavelength is ~10⁻⁴
//! lattice units while the Wannier-Stark region is happy with a few hundred
//! points per period. The graded region resolves the local wavelength
//! λ(z) = 2/√(|V|+E_s) with `density` points; inside the deeply forbidden
//! repulsive wall the resolution target switches from phase to decay once the
//! wavefunction is down by many e-folds. The lattice region is strictly
//! uniform with nodes commensurate with the period, which keeps the discrete
//! problem exactly translation-covariant far from the surface.

use crate::error::{Error, Result};
use crate::potential::{SurfaceVariant, TotalPotential};

const MAX_NODES: usize = 10_000_000;
/// e-folds of wall decay resolved at full phase density before relaxing.
const WALL_FINE_EFOLDS: f64 = 12.0;
/// nodes per e-fold in the deep wall beyond that.
const WALL_NODES_PER_EFOLD: f64 = 8.0;
/// the graded region extends until the surface term is this small (E_r).
const SURFACE_RELAX_THRESHOLD: f64 = 0.02;

/// Mesh over (z_lo, z_hi) with Dirichlet boundaries; `nodes` are the interior
/// points carrying unknowns and `weights` their trapezoid quadrature weights.
#[derive(Debug, Clone)]
pub struct Mesh {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub z_lo: f64,
    pub z_hi: f64,
    /// End of the graded region (equals z_lo for uniform meshes).
    pub graded_until: f64,
}

impl Mesh {
    fn from_interior(nodes: Vec<f64>, z_lo: f64, z_hi: f64, graded_until: f64) -> Result<Self> {
        if nodes.len() < 3 {
            return Err(Error::Domain("mesh needs at least 3 interior nodes".into()));
        }
        if nodes.windows(2).any(|w| w[1] <= w[0]) || nodes[0] <= z_lo || *nodes.last().unwrap() >= z_hi
        {
            return Err(Error::Domain("mesh nodes must increase strictly inside (z_lo, z_hi)".into()));
        }
        let n = nodes.len();
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            let left = if i == 0 { z_lo } else { nodes[i - 1] };
            let right = if i + 1 == n { z_hi } else { nodes[i + 1] };
            weights.push(0.5 * (right - left));
        }
        Ok(Mesh { nodes, weights, z_lo, z_hi, graded_until })
    }

    /// Uniform mesh with `points_per_unit` nodes per lattice unit. Node
    /// positions are commensurate with the lattice period.
    pub fn uniform(z_lo: f64, z_hi: f64, points_per_unit: usize) -> Result<Self> {
        if z_hi <= z_lo {
            return Err(Error::Domain("uniform mesh needs z_hi > z_lo".into()));
        }
        let h = 1.0 / points_per_unit as f64;
        let n_total = ((z_hi - z_lo) / h).round() as usize;
        if n_total > MAX_NODES {
            return Err(Error::Resource(format!(
                "uniform mesh would need {n_total} nodes; lower the density"
            )));
        }
        let nodes: Vec<f64> = (1..n_total).map(|i| z_lo + i as f64 * h).collect();
        Mesh::from_interior(nodes, z_lo, z_lo + n_total as f64 * h, z_lo)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Trapezoid quadrature of a sampled function against the mesh weights.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        let mut acc = crate::linalg::KahanSum::new();
        for (v, w) in values.iter().zip(&self.weights) {
            acc.add(v * w);
        }
        acc.value()
    }
}

/// Parameters controlling mesh resolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshDensity {
    /// Points per local de Broglie wavelength in the graded region (≥ 12).
    pub wavelength_points: f64,
    /// Points per lattice period in the uniform region; floored at 40 and at
    /// wavelength_points/8 so that doubling one doubles the other.
    pub lattice_points_per_period: usize,
}

impl Default for MeshDensity {
    fn default() -> Self {
        // calibrated so that doubling changes no reported energy by 1e-4 E_r
        MeshDensity { wavelength_points: 2048.0, lattice_points_per_period: 256 }
    }
}

impl MeshDensity {
    pub fn doubled(&self) -> Self {
        MeshDensity {
            wavelength_points: self.wavelength_points * 2.0,
            lattice_points_per_period: self.lattice_points_per_period * 2,
        }
    }

    fn points_per_period(&self) -> usize {
        self.lattice_points_per_period.max(40).max((self.wavelength_points / 8.0).ceil() as usize)
    }
}

/// Build the solver mesh for a potential. Perfect-surface (and surface-free)
/// potentials get a uniform mesh from 0 to z_max; the composite model gets a
/// graded region from deep inside the repulsive wall out to where the surface
/// term has decayed, then the uniform lattice mesh.
pub fn build_mesh(tp: &TotalPotential, z_max: f64, density: MeshDensity) -> Result<Mesh> {
    if z_max < 20.0 {
        return Err(Error::Domain(format!("z_max must be at least 20 lattice units, got {z_max}")));
    }
    if density.wavelength_points < 12.0 {
        return Err(Error::Domain(format!(
            "density must be at least 12 points per wavelength, got {}",
            density.wavelength_points
        )));
    }
    if z_max > tp.max_z() {
        return Err(Error::Domain(format!(
            "z_max = {z_max} exceeds the tabulated surface-potential range ({:.2})",
            tp.max_z()
        )));
    }
    let ppp = density.points_per_period();
    if !tp.include_surface || tp.surface.variant == SurfaceVariant::PerfectSurface {
        return Mesh::uniform(0.0, z_max, ppp);
    }

    let params = tp.surface.params().expect("LJ variant carries parameters");
    let z0 = tp.units.length_lattice(params.z0);
    // start deep inside the wall, where V = 3000·D
    let z_min = z0 / 9000f64.powf(1.0 / 12.0);
    let h_uniform = 1.0 / ppp as f64;
    // the graded region must reach past the last point where the surface term
    // still matters at the SURFACE_RELAX_THRESHOLD level
    let c3_lattice = params.c3 / (tp.units.recoil_energy * tp.units.length_unit.powi(3));
    let z_relax = (c3_lattice / SURFACE_RELAX_THRESHOLD).cbrt().clamp(1.0, z_max / 2.0);

    // energy scale bounding the local wavelength in classically allowed zones
    let e_scale = tp.depth.max(1.0) + 5.0;
    let window_top = 5.0 + tp.depth;

    let local_step = |z: f64, wall_efolds: f64| -> Result<f64> {
        let v = tp.eval(z)?;
        let h = if v > window_top + 40.0 {
            // deep classically forbidden wall: resolve decay, not phase
            let kappa = std::f64::consts::PI * (v - window_top).sqrt();
            if wall_efolds < WALL_FINE_EFOLDS {
                // near the turning point keep full phase resolution
                (std::f64::consts::TAU / kappa) / density.wavelength_points
            } else {
                1.0 / (WALL_NODES_PER_EFOLD * kappa)
            }
        } else {
            let k = std::f64::consts::PI * (v.abs() + e_scale).sqrt();
            (std::f64::consts::TAU / k) / density.wavelength_points
        };
        Ok(h.min(h_uniform))
    };

    // build the graded region downward from z_relax so the wall's e-fold
    // budget is counted from the turning point inwards
    let mut down_nodes = Vec::new();
    let mut z = z_relax;
    let mut wall_efolds = 0.0;
    while z > z_min {
        let v = tp.eval(z)?;
        if v > window_top {
            let kappa = std::f64::consts::PI * (v - window_top).max(0.0).sqrt();
            let h = local_step(z, wall_efolds)?;
            wall_efolds += kappa * h;
            z -= h;
        } else {
            wall_efolds = 0.0;
            z -= local_step(z, 0.0)?;
        }
        if z > z_min {
            down_nodes.push(z);
        }
        if down_nodes.len() > MAX_NODES {
            return Err(Error::Resource(format!(
                "graded mesh exceeded {MAX_NODES} nodes; lower the density"
            )));
        }
    }
    down_nodes.reverse();
    let mut nodes = down_nodes;
    nodes.push(z_relax);

    // geometric ramp from the graded spacing up to the uniform spacing
    let mut h_prev = nodes[nodes.len() - 1] - nodes[nodes.len() - 2];
    let mut z = z_relax;
    loop {
        let h = (h_prev * 1.15).min(h_uniform);
        let z_next = z + h;
        // snap onto the commensurate uniform grid once the ramp is done
        if h >= h_uniform * 0.999 {
            let snapped = (z_next / h_uniform).ceil() * h_uniform;
            z = snapped;
            break;
        }
        nodes.push(z_next);
        z = z_next;
        h_prev = h;
    }
    let n_uniform_end = (z_max / h_uniform).round() as usize;
    let mut i_uniform = (z / h_uniform).round() as usize;
    while i_uniform < n_uniform_end {
        nodes.push(i_uniform as f64 * h_uniform);
        i_uniform += 1;
    }
    if nodes.len() > MAX_NODES {
        return Err(Error::Resource(format!(
            "mesh exceeded {MAX_NODES} nodes; lower the density"
        )));
    }
    Mesh::from_interior(nodes, z_min, z_max, z_relax)
}
