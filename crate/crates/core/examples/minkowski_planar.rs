//! Rebuilds a polygon from its edge normals and lengths.

use convex_bodies::{solve_minkowski_2d, surface_area_measure, Direction, SphericalMeasure};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Regular hexagon with unit edges.
    let m = SphericalMeasure::new(
        2,
        (0..6).map(|k| {
            let t = k as f64 * std::f64::consts::PI / 3.0;
            (Direction::new(&[t.cos(), t.sin()]).unwrap(), 1.0)
        }),
    )?;
    let p = solve_minkowski_2d(&m)?;
    for v in p.vertices() {
        println!("vertex ({:+.6}, {:+.6})", v.x, v.y);
    }
    println!("area {:.6} (exact {:.6})", p.volume(), 1.5 * 3f64.sqrt());
    let back = surface_area_measure(&p)?;
    println!("measure recovered: {}", back.approx_eq(&m, 1e-12));
    Ok(())
}
