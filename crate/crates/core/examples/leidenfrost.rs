//! Stadium sections weighing perimeter against height, and the solids of
//! revolution they generate.

use convex_bodies::iso::stadium_fit;
use convex_bodies::leidenfrost;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for lambda in [[1.0, 0.0], [1.0, 1.0], [1.0, 4.0]] {
        let (stadium, spheroid) = leidenfrost(3.0, lambda)?;
        let fit = stadium_fit(&stadium)?;
        println!(
            "weights {lambda:?}: radius {:.4}, flat length {:.4}, solid volume {:.4}",
            fit.alphas[0],
            fit.alphas[1],
            spheroid.volume()?
        );
    }
    Ok(())
}
