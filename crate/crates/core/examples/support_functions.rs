//! Support vectors of planar and spatial bodies: volume, Minkowski
//! combinations, Steiner point and reconstruction.

use convex_bodies::{
    make_grid, minkowski_combine, reconstruct, steiner_point, Direction, SupportFunction, SupportVector, Vec3,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = make_grid(2, 360)?;
    let square = SupportVector::from_points(
        g.clone(),
        &[
            Vec3::new(-1.0, -1.0, 0.0),
            Vec3::new(1.0, -1.0, 0.0),
            Vec3::new(1.0, 1.0, 0.0),
            Vec3::new(-1.0, 1.0, 0.0),
        ],
    )?;
    let disk = SupportVector::ball(g.clone(), &Vec3::new(3.0, 0.0, 0.0), 0.5)?;
    println!("square area {:.6}, disk area {:.6}", square.volume()?, disk.volume()?);

    let rounded = minkowski_combine(&[(1.0, &square), (1.0, &disk)])?;
    println!(
        "square + disk: area {:.6} (exact {:.6})",
        rounded.volume()?,
        4.0 + 8.0 * 0.5 + std::f64::consts::PI * 0.25
    );
    println!("Steiner point {:?}", steiner_point(&rounded));
    let u = Direction::from_vec(2, Vec3::new(1.0, 1.0, 0.0).normalize())?;
    println!("support along (1,1)/sqrt2: {:.6}", rounded.support_eval(&u)?);

    let g3 = make_grid(3, 3)?;
    let cube = SupportVector::from_points(
        g3,
        &(0..8)
            .map(|k| {
                Vec3::new(
                    if k & 1 == 0 { -1.0 } else { 1.0 },
                    if k & 2 == 0 { -1.0 } else { 1.0 },
                    if k & 4 == 0 { -1.0 } else { 1.0 },
                )
            })
            .collect::<Vec<_>>(),
    )?;
    let p = reconstruct(&cube)?;
    println!(
        "cube: {} vertices, {} facets, volume {:.6}",
        p.vertices().len(),
        p.facets().len(),
        p.volume()
    );
    Ok(())
}
