//! Variational reconstruction of a spatial polytope from its facet normals
//! and areas.

use convex_bodies::{
    reconstruct, solve_minkowski_3d, steiner_normalize, support_distance, surface_area_measure, Polytope, SolveOptions,
    SupportVector, Vec3,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let pts = [
        Vec3::new(1.2, 0.1, -0.3),
        Vec3::new(-0.8, 0.9, 0.2),
        Vec3::new(-0.4, -1.1, 0.5),
        Vec3::new(0.3, 0.2, 1.4),
        Vec3::new(0.1, -0.2, -1.0),
        Vec3::new(0.9, -0.7, 0.6),
    ];
    let p = Polytope::hull(3, &pts)?;
    let m = surface_area_measure(&p)?;
    let out = solve_minkowski_3d(&m, &SolveOptions::default())?;
    println!(
        "{} facets: residual {:.2e} after {} iterations (converged {})",
        m.len(),
        out.residual,
        out.iterations,
        out.converged
    );
    let truth = steiner_normalize(&SupportVector::from_polytope(out.body.grid().clone(), &p)?);
    println!(
        "support distance to the source after centering: {:.2e}",
        support_distance(&truth, &out.body)?
    );
    println!("volume {:.6} vs {:.6}", reconstruct(&out.body)?.volume(), p.volume());
    Ok(())
}
