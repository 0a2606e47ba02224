//! Convex order of point measures: a measure dominates its barycentric
//! coarsenings, and a max-affine function separates the reverse pair.

use convex_bodies::majorization::PointMeasure;
use convex_bodies::{affine_majorizes, choquet_gap, Vec3};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spread = PointMeasure::new(
        2,
        vec![
            (Vec3::new(-1.0, 0.0, 0.0), 1.0),
            (Vec3::new(1.0, 0.0, 0.0), 1.0),
            (Vec3::new(0.0, 2.0, 0.0), 2.0),
        ],
    )?;
    // Two barycenters: of the first two atoms, and the third atom itself.
    let merged = PointMeasure::new(
        2,
        vec![(Vec3::new(0.0, 0.0, 0.0), 2.0), (Vec3::new(0.0, 2.0, 0.0), 2.0)],
    )?;

    let r = affine_majorizes(&spread, &merged)?;
    println!("spread dominates merged: {}", r.holds);
    let r = affine_majorizes(&merged, &spread)?;
    println!("merged dominates spread: {}", r.holds);
    if let Some(phi) = &r.violating {
        println!(
            "  certificate: {} affine pieces, quadratic {:.3}, gap {:.4}",
            phi.pieces.len(),
            phi.quadratic,
            choquet_gap(&merged, &spread, phi)
        );
    }
    Ok(())
}
