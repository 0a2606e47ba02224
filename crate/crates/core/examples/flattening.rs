//! Trading volume against the width along a direction, inside a disk: the
//! flattened optima and their verified optimality conditions.

use convex_bodies::iso::{fit_flattening_witness, FlatteningKind};
use convex_bodies::{
    directional_breadth, make_grid, solve_flattening, verify_flattening, Direction, FlatteningSpec, SupportVector,
    UrysohnSpec,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = make_grid(2, 720)?;
    let container = SupportVector::origin_ball(g, 1.5)?;
    let zbar = Direction::axis(2, 1);
    for lambda_flat in [0.0, 0.2, 0.5] {
        let spec = FlatteningSpec {
            base: UrysohnSpec::internal(container.clone(), 2.0),
            zbar,
            lambda_vol: 1.0,
            lambda_flat,
        };
        let p = solve_flattening(&spec)?;
        let w = fit_flattening_witness(FlatteningKind::Internal, &p.body, &container, &zbar, 1e-6)?;
        let r = verify_flattening(
            FlatteningKind::Internal,
            &p.body,
            &container,
            &zbar,
            w.alpha,
            w.beta,
            &w.x_measure,
            2e-2,
        )?;
        println!(
            "lambda {lambda_flat:.1}: area {:.4}, height {:.4}, beta {:.4}, verdict {}",
            p.body.volume()?,
            directional_breadth(&p.body, &zbar)?,
            w.beta,
            r.verdict
        );
    }
    Ok(())
}
