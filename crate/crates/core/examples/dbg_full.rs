use smwss::casimir::*;
use smwss::mesh::{build_mesh, MeshDensity};
use smwss::potential::*;
use smwss::shipped;
use smwss::solver::*;
use smwss::units::LatticeUnits;
use std::time::Instant;

fn main() {
    let uu = LatticeUnits::rb87_532();
    let config = CpConfig {
        temperature: 300.0,
        atom: shipped::rb87(),
        mirror: MirrorModel::Stack(shipped::bragg_stack().unwrap()),
        matsubara_rel_tol: 1e-6,
        k_quadrature_order: 80,
    };
    let t0 = Instant::now();
    let table = PotentialTable::tabulate(&config, &GridSpec::default()).unwrap();
    println!("tabulate: {:?}", t0.elapsed());
    let c3 = extract_c3(&table).unwrap();
    println!("C3 = {:.4} a0^3 eV", c3.c3_bohr3_ev());
    let params = LennardJonesParams::from_z0_c3(2.3e-10, c3.c3).unwrap();
    let sp = SurfacePotential::lennard_jones(params, &table).unwrap();
    println!("z_m = {:.4} nm, D = {:.2} meV = {:.3e} Er", sp.z_m * 1e9,
             params.depth / smwss::constants::ELECTRONVOLT * 1e3,
             params.depth / uu.recoil_energy);
    let tp = TotalPotential::new(uu, 3.0, sp).unwrap();
    let t1 = Instant::now();
    let mesh = build_mesh(&tp, 25.0, MeshDensity::default()).unwrap();
    println!("mesh: {} nodes in {:?} (graded until {:.3})", mesh.len(), t1.elapsed(), mesh.graded_until);
    let t2 = Instant::now();
    let result = solve(&tp, &mesh, (-5.0, 5.0), None).unwrap();
    println!("solve: {:?}, {} states, {} edge artifacts", t2.elapsed(), result.states.len(), result.edge_artifacts);
    let intervals = result.intervals();
    for (i, s) in result.states.iter().enumerate() {
        let label = match s.kind {
            StateKind::SurfaceBound { v } => format!("bound v={v}"),
            StateKind::Smwss => "smwss".into(),
        };
        let int_str = if i == 0 { format!("E1 = {:+.4}", s.energy) } else { format!("{:+.4}", intervals[i]) };
        println!("{:2}  <z> = {:9.4}  {}  E = {:+.5}  [{}]", i + 1, s.mean_z, int_str, s.energy, label);
    }
}
