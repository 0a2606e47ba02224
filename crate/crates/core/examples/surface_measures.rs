//! Surface-area measures of polytopes and grid bodies, and the closure test
//! a measure must pass to be one.

use convex_bodies::{
    make_grid, surface_area_measure, surface_area_measure_of, validate_alexandrov, Direction, Polytope,
    SphericalMeasure, SupportVector, Vec3,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tetra = Polytope::hull(
        3,
        &[
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(0.0, 0.0, 1.0),
        ],
    )?;
    let m = surface_area_measure(&tetra)?;
    for a in m.atoms() {
        println!("normal {:?} area {:.6}", a.dir.vec().as_slice(), a.w);
    }
    let rep = validate_alexandrov(&m, 1e-12)?;
    println!(
        "closure residual {:.1e}, spanning {}",
        rep.closure_residual, rep.spanning
    );

    let g = make_grid(2, 720)?;
    let disk = SupportVector::origin_ball(g, 1.0)?;
    let dm = surface_area_measure_of(&disk)?;
    println!("disk: {} atoms, perimeter {:.6}", dm.len(), dm.total_mass());

    let lopsided = SphericalMeasure::new(2, [(Direction::axis(2, 0), 1.0), (Direction::axis(2, 1), 1.0)])?;
    let rep = validate_alexandrov(&lopsided, 1e-12)?;
    println!(
        "two orthogonal atoms: closure {:.3}, spanning {}, verdict {}",
        rep.closure_residual, rep.spanning, rep.verdict
    );
    Ok(())
}
