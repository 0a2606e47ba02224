//! Among bodies of fixed mean width the disk and the ball have the largest
//! volume.

use convex_bodies::{make_grid, solve_urysohn, UrysohnSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sol = solve_urysohn(&UrysohnSpec::free(make_grid(2, 720)?, 2.0))?;
    println!(
        "planar: area {:.6} (pi = {:.6})",
        sol.body.volume()?,
        std::f64::consts::PI
    );
    let sol = solve_urysohn(&UrysohnSpec::free(make_grid(3, 3)?, 2.0))?;
    println!(
        "spatial: volume {:.6} (4pi/3 = {:.6}; the level-3 polytope overshoots by about 0.5%)",
        sol.body.volume()?,
        4.0 * std::f64::consts::PI / 3.0
    );
    Ok(())
}
