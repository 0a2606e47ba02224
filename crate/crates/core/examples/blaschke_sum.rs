//! Blaschke addition adds surface-area measures; in space the sum is found by
//! solving the Minkowski problem.

use convex_bodies::{blaschke_sum, make_grid, minkowski_combine, Polytope, SupportVector, Vec3};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cube = Polytope::aabb(&[-1.0, -1.0, -1.0], &[1.0, 1.0, 1.0])?;
    let tetra = Polytope::hull(
        3,
        &[
            Vec3::new(1.0, 1.0, 1.0),
            Vec3::new(1.0, -1.0, -1.0),
            Vec3::new(-1.0, 1.0, -1.0),
            Vec3::new(-1.0, -1.0, 1.0),
        ],
    )?;
    let sum = blaschke_sum(&cube, &tetra, 1.0, 1.0)?;
    let p = |v: f64| v.powf(2.0 / 3.0);
    println!(
        "V(K # L)^(2/3) = {:.6} >= V(K)^(2/3) + V(L)^(2/3) = {:.6}",
        p(sum.volume()?),
        p(cube.volume()) + p(tetra.volume())
    );

    // In the plane the two additions agree.
    let g = make_grid(2, 4)?;
    let a = SupportVector::from_polytope(g.clone(), &Polytope::aabb(&[0.0, 0.0], &[2.0, 1.0])?)?;
    let b = SupportVector::from_polytope(g, &Polytope::aabb(&[0.0, 0.0], &[1.0, 3.0])?)?;
    let bl = blaschke_sum(&a, &b, 1.0, 1.0)?;
    let mk = minkowski_combine(&[(1.0, &a), (1.0, &b)])?;
    println!(
        "planar: Blaschke area {:.6}, Minkowski area {:.6}",
        bl.volume()?,
        mk.volume()?
    );
    Ok(())
}
