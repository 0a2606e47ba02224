//! Bodies of revolution from planar meridian sections.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geom::{Direction, Vec3};
use crate::grid::SphereGrid;
use crate::support::SupportVector;

const SYMMETRY_TOL: f64 = 1e-8;

/// Rotates a planar body symmetric about the line through `zbar` around that
/// line; the axis becomes `e₃`. Support values are evaluated exactly from the
/// vertices of the planar body.
pub fn rotate_lift(x: &SupportVector, zbar: &Direction, grid3: &Arc<SphereGrid>) -> Result<SupportVector> {
    if x.dim() != 2 || zbar.dim() != 2 {
        return Err(Error::InvalidArgument(
            "rotate_lift expects a planar body and axis".into(),
        ));
    }
    if grid3.dim() != 3 {
        return Err(Error::InvalidArgument("rotate_lift needs a spatial grid".into()));
    }
    let c = x.convexified()?;
    if c.vertices.is_empty() {
        return Err(Error::EmptyBody);
    }
    let support = |d: &Vec3| c.vertices.iter().map(|v| d.dot(v)).fold(f64::NEG_INFINITY, f64::max) - c.thickening;
    let z = *zbar.vec();
    let perp = Vec3::new(-z.y, z.x, 0.0);

    let scale = c.h.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    for d in x.grid().dirs() {
        let u = d.vec();
        let reflected = z * (2.0 * u.dot(&z)) - u;
        if (support(u) - support(&reflected)).abs() > SYMMETRY_TOL * scale {
            return Err(Error::InvalidArgument(
                "body is not symmetric about the rotation axis".into(),
            ));
        }
    }

    let h = grid3
        .dirs()
        .iter()
        .map(|d| {
            let u = d.vec();
            let t = u.z.clamp(-1.0, 1.0);
            let r = (1.0 - t * t).max(0.0).sqrt();
            support(&(perp * r + z * t))
        })
        .collect();
    Ok(SupportVector::tight_unchecked(grid3.clone(), h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    #[test]
    fn disk_lifts_to_ball() {
        let g2 = make_grid(2, 720).unwrap();
        let g3 = make_grid(3, 4).unwrap();
        let disk = SupportVector::origin_ball(g2, 1.0).unwrap();
        let lifted = rotate_lift(&disk, &Direction::axis(2, 1), &g3).unwrap();
        let ball = SupportVector::origin_ball(g3, 1.0).unwrap();
        let gap = crate::support::support_distance(&lifted, &ball).unwrap();
        assert!(gap < 1e-4, "{gap}");
    }

    #[test]
    fn square_lifts_to_cylinder() {
        let g2 = make_grid(2, 720).unwrap();
        let g3 = make_grid(3, 5).unwrap();
        let pts = [
            Vec3::new(-1.0, -1.0, 0.0),
            Vec3::new(1.0, -1.0, 0.0),
            Vec3::new(1.0, 1.0, 0.0),
            Vec3::new(-1.0, 1.0, 0.0),
        ];
        let sq = SupportVector::from_points(g2, &pts).unwrap();
        let cyl = rotate_lift(&sq, &Direction::axis(2, 1), &g3).unwrap();
        // Radius 1, height 2.
        let exact = std::f64::consts::PI * 2.0;
        let v = cyl.volume().unwrap();
        assert!((v - exact).abs() / exact < 5e-3, "{v}");
        let top = crate::support::SupportFunction::support_eval(&cyl, &Direction::axis(3, 2)).unwrap();
        assert!((top - 1.0).abs() < 1e-9);
    }

    #[test]
    fn asymmetric_body_is_rejected() {
        let g2 = make_grid(2, 360).unwrap();
        let g3 = make_grid(3, 2).unwrap();
        let pts = [
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(2.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
        ];
        let x = SupportVector::from_points(g2, &pts).unwrap();
        assert!(matches!(
            rotate_lift(&x, &Direction::axis(2, 1), &g3),
            Err(Error::InvalidArgument(_))
        ));
    }
}
