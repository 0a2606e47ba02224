//! Deciding whether one measure on the circle majorizes another, with a
//! transport witness when it does and a violating sublinear functional when
//! it does not.

use convex_bodies::{linear_majorizes, reshetnyak_gap, sample_sublinear, Direction, SphericalMeasure};

fn dir(t: f64) -> Direction {
    Direction::new(&[t.cos(), t.sin()]).unwrap()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mu = SphericalMeasure::new(2, (0..4).map(|k| (dir(k as f64 * std::f64::consts::FRAC_PI_2), 1.0)))?;
    // Merging the atoms at 0 and 90 degrees gives one atom of mass sqrt 2.
    let nu = SphericalMeasure::new(
        2,
        [
            (dir(std::f64::consts::FRAC_PI_4), 2f64.sqrt()),
            (dir(std::f64::consts::PI), 1.0),
            (dir(-std::f64::consts::FRAC_PI_2), 1.0),
        ],
    )?;
    let r = linear_majorizes(&mu, &nu)?;
    println!("mu majorizes nu: {}", r.holds);
    if let Some(w) = &r.witness {
        for row in &w.flow {
            println!("  flow {:?}", row.iter().map(|f| format!("{f:.3}")).collect::<Vec<_>>());
        }
    }
    let least = (0..1000)
        .map(|s| reshetnyak_gap(&mu, &nu, &sample_sublinear(2, 4, s)))
        .fold(f64::INFINITY, f64::min);
    println!("least gap over 1000 sampled functionals: {least:.2e}");

    let r = linear_majorizes(&nu, &mu)?;
    println!("nu majorizes mu: {}", r.holds);
    if let Some(p) = &r.violating {
        println!(
            "  certificate with {} generators, gap {:.4}",
            p.generators.len(),
            reshetnyak_gap(&nu, &mu, p)
        );
    }
    Ok(())
}
