//! The smallest-volume body of given mean width containing a segment is a
//! lens; its optimality conditions are then checked by the verifier.

use convex_bodies::iso::{fit_external_witness, lens_radius_for_breadth};
use convex_bodies::{
    lens_analytic, make_grid, solve_urysohn, support_distance, verify_external_urysohn, SupportVector, UrysohnSpec,
    Vec3,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = make_grid(2, 720)?;
    let segment = SupportVector::segment(g.clone(), &Vec3::new(-1.0, 0.0, 0.0), &Vec3::new(1.0, 0.0, 0.0))?;
    let breadth = 1.6;
    let sol = solve_urysohn(&UrysohnSpec::external(segment.clone(), breadth))?;
    println!("area {:.6}, KKT residual {:.1e}", sol.body.volume()?, sol.kkt_residual);

    let radius = lens_radius_for_breadth(2, 1.0, breadth)?;
    let lens = lens_analytic(1.0, radius, &g)?;
    println!(
        "arc radius {radius:.6}; distance to the analytic lens {:.1e}",
        support_distance(&sol.body, &lens)?
    );

    let w = fit_external_witness(&sol.body, &segment, 1e-6)?;
    let report = verify_external_urysohn(&sol.body, &segment, &w.measure, w.alpha, 1e-2)?;
    for c in &report.conditions {
        println!("  {:<20} residual {:.1e} holds {}", c.name, c.residual, c.holds);
    }
    println!("verdict {}", report.verdict);
    Ok(())
}
