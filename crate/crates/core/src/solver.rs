//! Stationary Schrödinger solver on the (possibly graded) mesh.
//!
//! In program units the equation reads -(1/π²) ψ'' + V ψ = E ψ. The second
//! derivative is discretized with the self-adjoint three-point stencil for
//! non-uniform spacing, giving a generalized problem H ψ = E W ψ with the
//! diagonal trapezoid-weight matrix W; the similarity transform
//! B = W^{-1/2} H W^{-1/2} makes it an ordinary real symmetric tridiagonal
//! problem. Dirichlet conditions close both ends: the repulsive wall makes the
//! lower truncation error exponentially small, and edge-contaminated states at
//! the upper end are filtered out of the reports.

use crate::error::{Error, Result};
use crate::linalg::{KahanSum, SymTridiag};
use crate::mesh::Mesh;
use crate::potential::TotalPotential;

/// Kinetic prefactor 1/π² in program units.
const KINETIC: f64 = 1.0 / (std::f64::consts::PI * std::f64::consts::PI);
/// A state with more than this probability mass in the outermost two lattice
/// units is a truncation artifact.
const EDGE_MASS_LIMIT: f64 = 0.01;
const EDGE_ZONE: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    /// Bound in the surface well; `v` counts from the least-bound state as -1.
    SurfaceBound { v: i32 },
    /// Member of the surface-modified Wannier-Stark ladder.
    Smwss,
}

/// One solved eigenstate. `psi` is sampled on the mesh nodes and normalized
/// so that the trapezoid quadrature of ψ² is one.
#[derive(Debug, Clone)]
pub struct EigenState {
    /// Energy in E_r.
    pub energy: f64,
    pub psi: Vec<f64>,
    /// ⟨z⟩ in lattice units.
    pub mean_z: f64,
    pub kind: StateKind,
}

impl EigenState {
    pub fn is_bound(&self) -> bool {
        matches!(self.kind, StateKind::SurfaceBound { .. })
    }
}

/// Solved spectrum: reportable states sorted by increasing ⟨z⟩ (ties broken
/// by energy), 1-based rank `n` = position in this ordering. Edge artifacts
/// are counted but not reported.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub states: Vec<EigenState>,
    pub edge_artifacts: usize,
}

impl SpectrumResult {
    /// Energy intervals E_n - E_{n-1} in rank order; entry 0 is E_1 itself,
    /// mirroring the convention of the results table.
    pub fn intervals(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.states.len());
        for (i, s) in self.states.iter().enumerate() {
            if i == 0 {
                out.push(s.energy);
            } else {
                out.push(s.energy - self.states[i - 1].energy);
            }
        }
        out
    }

    pub fn bound_states(&self) -> impl Iterator<Item = (usize, &EigenState)> {
        self.states.iter().enumerate().filter(|(_, s)| s.is_bound()).map(|(i, s)| (i + 1, s))
    }

    /// State by 1-based rank.
    pub fn state(&self, n: usize) -> Option<&EigenState> {
        self.states.get(n.checked_sub(1)?)
    }
}

/// Assembled symmetric form of the Hamiltonian plus the data needed to map
/// eigenvectors back to wavefunctions.
pub struct Hamiltonian {
    tridiag: SymTridiag,
    sqrt_w: Vec<f64>,
    /// V at the mesh nodes.
    pub v_nodes: Vec<f64>,
}

impl Hamiltonian {
    pub fn assemble(tp: &TotalPotential, mesh: &Mesh) -> Result<Self> {
        let n = mesh.len();
        let mut v_nodes = Vec::with_capacity(n);
        for &z in &mesh.nodes {
            v_nodes.push(tp.eval(z)?);
        }
        let mut d = Vec::with_capacity(n);
        let mut e = Vec::with_capacity(n - 1);
        let sqrt_w: Vec<f64> = mesh.weights.iter().map(|w| w.sqrt()).collect();
        for i in 0..n {
            let h_left = if i == 0 { mesh.nodes[0] - mesh.z_lo } else { mesh.nodes[i] - mesh.nodes[i - 1] };
            let h_right = if i + 1 == n { mesh.z_hi - mesh.nodes[i] } else { mesh.nodes[i + 1] - mesh.nodes[i] };
            let diag = KINETIC * (1.0 / h_left + 1.0 / h_right) / mesh.weights[i] + v_nodes[i];
            d.push(diag);
            if i + 1 < n {
                e.push(-KINETIC / (h_right * sqrt_w[i] * sqrt_w[i + 1]));
            }
        }
        Ok(Hamiltonian { tridiag: SymTridiag::new(d, e), sqrt_w, v_nodes })
    }

    /// Eigenstates with energy in [lo, hi), ordered by energy, without
    /// classification. The returned ψ are unit-normalized under the mesh
    /// quadrature.
    pub fn eigenstates(&self, mesh: &Mesh, lo: f64, hi: f64) -> Result<Vec<EigenState>> {
        let pairs = self.tridiag.eigenpairs_in_window(lo, hi)?;
        let mut out = Vec::with_capacity(pairs.len());
        for p in pairs {
            let psi: Vec<f64> =
                p.vector.iter().zip(&self.sqrt_w).map(|(phi, sw)| phi / sw).collect();
            let mean_z = mean_distance_raw(&psi, mesh);
            out.push(EigenState { energy: p.value, psi, mean_z, kind: StateKind::Smwss });
        }
        Ok(out)
    }

    /// Rayleigh quotient of a state in the symmetric form, for consistency
    /// checks against its eigenvalue.
    pub fn rayleigh_quotient(&self, state: &EigenState) -> f64 {
        let phi: Vec<f64> =
            state.psi.iter().zip(&self.sqrt_w).map(|(psi, sw)| psi * sw).collect();
        self.tridiag.rayleigh_quotient(&phi)
    }
}

/// ⟨ψ|z|ψ⟩ / ⟨ψ|ψ⟩ by mesh quadrature.
pub fn mean_distance(state: &EigenState, mesh: &Mesh) -> f64 {
    mean_distance_raw(&state.psi, mesh)
}

fn mean_distance_raw(psi: &[f64], mesh: &Mesh) -> f64 {
    let mut num = KahanSum::new();
    let mut den = KahanSum::new();
    for ((&p, &z), &w) in psi.iter().zip(&mesh.nodes).zip(&mesh.weights) {
        num.add(w * z * p * p);
        den.add(w * p * p);
    }
    num.value() / den.value()
}

/// ⟨ψ_a|ψ_b⟩ for two states on the same mesh.
pub fn overlap_same_mesh(a: &[f64], b: &[f64], mesh: &Mesh) -> f64 {
    let mut acc = KahanSum::new();
    for ((&x, &y), &w) in a.iter().zip(b).zip(&mesh.weights) {
        acc.add(w * x * y);
    }
    acc.value()
}

/// ⟨ψ_a|ψ_b⟩ for states living on different meshes: both are treated as
/// piecewise linear (zero outside their domain) and the product is integrated
/// exactly on the union grid with Simpson's rule per interval.
pub fn overlap_union_mesh(mesh_a: &Mesh, psi_a: &[f64], mesh_b: &Mesh, psi_b: &[f64]) -> f64 {
    fn eval(mesh: &Mesh, psi: &[f64], z: f64, hint: &mut usize) -> f64 {
        let nodes = &mesh.nodes;
        if z <= mesh.z_lo || z >= mesh.z_hi {
            return 0.0;
        }
        while *hint + 1 < nodes.len() && nodes[*hint + 1] < z {
            *hint += 1;
        }
        while *hint > 0 && nodes[*hint] > z {
            *hint -= 1;
        }
        // piecewise linear with ψ = 0 at the Dirichlet boundaries
        let (z0, p0, z1, p1) = if z < nodes[0] {
            (mesh.z_lo, 0.0, nodes[0], psi[0])
        } else if z >= nodes[nodes.len() - 1] {
            (nodes[nodes.len() - 1], psi[nodes.len() - 1], mesh.z_hi, 0.0)
        } else {
            (nodes[*hint], psi[*hint], nodes[*hint + 1], psi[*hint + 1])
        };
        p0 + (p1 - p0) * (z - z0) / (z1 - z0)
    }
    let fa = |z: f64, hint: &mut usize| eval(mesh_a, psi_a, z, hint);
    let fb = |z: f64, hint: &mut usize| eval(mesh_b, psi_b, z, hint);

    // merged breakpoints across the overlapping support
    let lo = mesh_a.z_lo.max(mesh_b.z_lo);
    let hi = mesh_a.z_hi.min(mesh_b.z_hi);
    if hi <= lo {
        return 0.0;
    }
    let mut acc = KahanSum::new();
    let (mut ia, mut ib) = (0usize, 0usize);
    let (mut ha, mut hb) = (0usize, 0usize);
    let mut z_prev = lo;
    let mut fa_prev = fa(z_prev, &mut ha);
    let mut fb_prev = fb(z_prev, &mut hb);
    loop {
        let za = mesh_a.nodes.get(ia).copied().unwrap_or(f64::INFINITY);
        let zb = mesh_b.nodes.get(ib).copied().unwrap_or(f64::INFINITY);
        let mut z_next = za.min(zb).min(hi);
        if za <= z_next {
            ia += 1;
        }
        if zb <= z_next {
            ib += 1;
        }
        if z_next <= z_prev {
            if z_prev >= hi {
                break;
            }
            continue;
        }
        z_next = z_next.min(hi);
        let zm = 0.5 * (z_prev + z_next);
        let fam = fa(zm, &mut ha);
        let fbm = fb(zm, &mut hb);
        let fa_next = fa(z_next, &mut ha);
        let fb_next = fb(z_next, &mut hb);
        // product of two linear functions: Simpson is exact
        acc.add((z_next - z_prev) / 6.0 * (fa_prev * fb_prev + 4.0 * fam * fbm + fa_next * fb_next));
        z_prev = z_next;
        fa_prev = fa_next;
        fb_prev = fb_next;
        if z_prev >= hi {
            break;
        }
    }
    acc.value()
}

/// Positions and heights of the local maxima of V on the mesh (the lattice
/// barriers, possibly submerged by the surface attraction).
fn barriers(v_nodes: &[f64], mesh: &Mesh) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for i in 1..v_nodes.len() - 1 {
        if v_nodes[i] > v_nodes[i - 1] && v_nodes[i] >= v_nodes[i + 1] {
            out.push((mesh.nodes[i], v_nodes[i]));
        }
    }
    out
}

/// Classify raw eigenstates: a state is an atom-surface bound state when more
/// than half of its probability mass sits below the first potential barrier
/// that exceeds its energy (it is classically confined against the surface);
/// bound states get vibrational indices v = -1, -2, … downward from the
/// least bound. States with more than 1% of their mass in the outermost two
/// lattice units are dropped as truncation artifacts. The survivors are
/// ranked by increasing ⟨z⟩.
pub fn classify(raw: Vec<EigenState>, v_nodes: &[f64], mesh: &Mesh) -> SpectrumResult {
    let bars = barriers(v_nodes, mesh);
    let edge_start = mesh.z_hi - EDGE_ZONE;
    let mut kept: Vec<EigenState> = Vec::with_capacity(raw.len());
    let mut edge_artifacts = 0;
    for mut state in raw {
        let mut edge_mass = 0.0;
        for ((&p, &z), &w) in state.psi.iter().zip(&mesh.nodes).zip(&mesh.weights) {
            if z >= edge_start {
                edge_mass += w * p * p;
            }
        }
        if edge_mass > EDGE_MASS_LIMIT {
            edge_artifacts += 1;
            continue;
        }
        let confining = bars.iter().find(|(_, vb)| *vb > state.energy).map(|(zb, _)| *zb);
        let bound = match confining {
            Some(z_cut) => {
                let mut inside = 0.0;
                for ((&p, &z), &w) in state.psi.iter().zip(&mesh.nodes).zip(&mesh.weights) {
                    if z < z_cut {
                        inside += w * p * p;
                    }
                }
                inside > 0.5
            }
            None => false,
        };
        state.kind = if bound { StateKind::SurfaceBound { v: 0 } } else { StateKind::Smwss };
        kept.push(state);
    }
    // vibrational indices: least bound (highest energy) is v = -1
    let mut bound_idx: Vec<usize> = (0..kept.len()).filter(|&i| kept[i].is_bound()).collect();
    bound_idx.sort_by(|&a, &b| kept[b].energy.total_cmp(&kept[a].energy));
    for (rank, idx) in bound_idx.into_iter().enumerate() {
        kept[idx].kind = StateKind::SurfaceBound { v: -(rank as i32) - 1 };
    }
    kept.sort_by(|a, b| a.mean_z.total_cmp(&b.mean_z).then(a.energy.total_cmp(&b.energy)));
    SpectrumResult { states: kept, edge_artifacts }
}

/// Solve for all states with energy inside `window` (plus, optionally, the
/// surface-bound states down to `bound_floor` below it) and classify them.
pub fn solve(
    tp: &TotalPotential,
    mesh: &Mesh,
    window: (f64, f64),
    bound_floor: Option<f64>,
) -> Result<SpectrumResult> {
    let (lo, hi) = window;
    if !(hi > lo) {
        return Err(Error::Domain(format!("empty energy window [{lo}, {hi}]")));
    }
    let ham = Hamiltonian::assemble(tp, mesh)?;
    let mut raw = ham.eigenstates(mesh, lo, hi)?;
    if let Some(floor) = bound_floor {
        if floor < lo {
            let below = ham.eigenstates(mesh, floor, lo)?;
            // keep only surface-bound states from below the window
            let classified = classify(below, &ham.v_nodes, mesh);
            raw.extend(classified.states.into_iter().filter(|s| s.is_bound()));
        }
    }
    Ok(classify(raw, &ham.v_nodes, mesh))
}
