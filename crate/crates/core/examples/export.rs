//! Writing bodies as JSON, SVG and OBJ.

use convex_bodies::io::json::to_pretty;
use convex_bodies::io::{obj_string, svg_string, BodyFile};
use convex_bodies::{make_grid, SupportVector, Vec3};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("cbody-export");
    std::fs::create_dir_all(&dir)?;
    let tri = SupportVector::from_points(
        make_grid(2, 90)?,
        &[
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(-0.9, -0.5, 0.0),
            Vec3::new(0.9, -0.5, 0.0),
        ],
    )?;
    std::fs::write(dir.join("triangle.json"), to_pretty(&BodyFile::from_support(&tri)?)?)?;
    std::fs::write(dir.join("triangle.svg"), svg_string(&tri)?)?;
    let ball = SupportVector::origin_ball(make_grid(3, 2)?, 1.0)?;
    std::fs::write(dir.join("ball.obj"), obj_string(&ball)?)?;
    println!("wrote triangle.json, triangle.svg and ball.obj to {}", dir.display());
    Ok(())
}
