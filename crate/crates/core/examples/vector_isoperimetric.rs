//! Pareto front of two mixed-area objectives at fixed area: every
//! scalarized optimum is a Minkowski combination of the two generators.

use convex_bodies::{make_grid, pareto_front_vector_iso, SupportVector, Vec3};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = make_grid(2, 360)?;
    let triangle = SupportVector::from_points(
        g.clone(),
        &[
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(-0.9, -0.5, 0.0),
            Vec3::new(0.9, -0.5, 0.0),
        ],
    )?;
    let disk = SupportVector::origin_ball(g, 1.0)?;
    let weights: Vec<Vec<f64>> = (0..=4).map(|k| vec![k as f64 / 4.0, 1.0 - k as f64 / 4.0]).collect();
    for p in pareto_front_vector_iso(&[triangle, disk], 2.0, &weights)? {
        let fit = p.fit.as_ref().expect("fit");
        println!(
            "weights {:?}: objectives ({:.4}, {:.4}), alphas ({:.4}, {:.4}), fit residual {:.1e}",
            p.weights, p.objectives[0], p.objectives[1], fit.alphas[0], fit.alphas[1], fit.residual
        );
    }
    Ok(())
}
