//! Checks of the optimality conditions for given witnesses.

use crate::error::{Error, Result};
use crate::geom::{Direction, Vec3};
use crate::majorization::linear_majorization_residual;
use crate::measures::{ball_measure, pairing, surface_area_measure_of, SphericalMeasure};
use crate::support::{SupportFunction, SupportVector};
use crate::tolerance;

use super::{ConditionReport, Witnesses};

/// Heaviest atoms per side kept in the relaxed majorization LP.
const MAJORIZATION_ATOMS: usize = 80;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlatteningKind {
    Internal,
    External,
}

/// Coefficient of `β·b_z̄(x̄)` in the external flattening volume identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BreadthConvention {
    /// `1/N`, the value stationarity produces with `V₁ = (1/N)⟨h, μ⟩` and
    /// `b_z̄ = h(z̄) + h(-z̄)`.
    Pairing,
    /// `2N`, as the identity is usually printed.
    Literal,
}

impl BreadthConvention {
    pub fn coefficient(self, dim: usize) -> f64 {
        match self {
            Self::Pairing => 1.0 / dim as f64,
            Self::Literal => 2.0 * dim as f64,
        }
    }
}

pub(crate) fn check_same_grid(a: &SupportVector, b: &SupportVector) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::InvalidArgument("dimension mismatch".into()));
    }
    if !(std::sync::Arc::ptr_eq(a.grid(), b.grid()) || a.grid().same_as(b.grid())) {
        return Err(Error::InvalidArgument("bodies live on different grids".into()));
    }
    Ok(())
}

fn check_measure_dim(x: &SupportVector, m: &SphericalMeasure) -> Result<()> {
    if m.dim() != x.dim() {
        return Err(Error::InvalidArgument("measure dimension mismatch".into()));
    }
    Ok(())
}

fn size(x: &SupportVector) -> f64 {
    x.values().iter().fold(1e-300f64, |m, v| m.max(v.abs()))
}

/// `Σ |a - b|` over the union of atoms, relative to the larger mass.
pub(crate) fn l1_gap(a: &SphericalMeasure, b: &SphericalMeasure) -> f64 {
    let mut s = 0.0;
    for x in a.atoms() {
        s += (x.w - b.weight_at(x.dir.vec(), tolerance::SNAP)).abs();
    }
    for y in b.atoms() {
        if a.weight_at(y.dir.vec(), tolerance::SNAP) == 0.0 {
            s += y.w;
        }
    }
    s / a.total_mass().max(b.total_mass()).max(1e-300)
}

/// `max |x̄(z) - x₀(z)|` over the atoms of `m` (skipping `skip`), relative
/// to the size of `x̄`.
fn contact_residual(xbar: &SupportVector, x0: &SupportVector, m: &SphericalMeasure, skip: &[Vec3]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for a in m.atoms() {
        if skip.iter().any(|z| (a.dir.vec() - z).norm() <= 1e-9) {
            continue;
        }
        let d = (xbar.support_eval(&a.dir)? - x0.support_eval(&a.dir)?).abs();
        worst = worst.max(d);
    }
    Ok(worst / size(xbar))
}

fn two_atoms(z: &Direction, w: f64) -> Result<SphericalMeasure> {
    SphericalMeasure::new(z.dim(), [(*z, w), (z.neg(), w)])
}

/// Conditions for `x̄` to solve the external Urysohn problem around `x₀`:
/// `ᾱ μ(𝔷_N) ≫ μ(x̄) + μ`, the volume identity, and `x̄ = x₀` on `spt μ`.
///
/// The majorization residual is an upper bound on the relative L1 mismatch
/// of column resultants over all transport plans (zero when it holds).
pub fn verify_external_urysohn(
    xbar: &SupportVector,
    x0: &SupportVector,
    mu: &SphericalMeasure,
    alpha: f64,
    tol: f64,
) -> Result<ConditionReport> {
    check_same_grid(xbar, x0)?;
    check_measure_dim(xbar, mu)?;
    if !(alpha > 0.0) {
        return Err(Error::InvalidArgument("alpha must be positive".into()));
    }
    let grid = xbar.grid();
    let ball = ball_measure(grid, 1.0)?;
    let lhs = ball.scale(alpha)?;
    let rhs = surface_area_measure_of(xbar)?.add(mu)?;
    let mut report = ConditionReport::new(Witnesses {
        alpha: Some(alpha),
        beta: None,
        measures: vec![("mu".into(), mu.clone())],
    });
    report.push(
        "majorization",
        linear_majorization_residual(&lhs, &rhs, MAJORIZATION_ATOMS)?,
        tol,
    );
    let left = xbar.volume()? + pairing(xbar, mu)?;
    let right = alpha * pairing(xbar, &ball)?;
    report.push("volume identity", (left - right).abs() / right.abs().max(1e-300), tol);
    report.push("contact", contact_residual(xbar, x0, mu, &[])?, tol);
    Ok(report)
}

/// Flattening conditions with the default breadth convention.
#[allow(clippy::too_many_arguments)]
pub fn verify_flattening(
    kind: FlatteningKind,
    xbar: &SupportVector,
    x0: &SupportVector,
    zbar: &Direction,
    alpha: f64,
    beta: f64,
    x_measure: &SphericalMeasure,
    tol: f64,
) -> Result<ConditionReport> {
    verify_flattening_with(
        kind,
        xbar,
        x0,
        zbar,
        alpha,
        beta,
        x_measure,
        tol,
        BreadthConvention::Pairing,
    )
}

/// Internal: `μ(x̄) = μ(𝔵) + α μ(𝔷_N) + β(ε_z̄ + ε_{-z̄})` and contact on
/// `spt μ(𝔵)`. External: `μ(x̄) + μ(𝔵) ≫ α μ(𝔷_N) + β(ε_z̄ + ε_{-z̄})`, the
/// volume identity and contact. `x_measure` is `μ(𝔵)`.
#[allow(clippy::too_many_arguments)]
pub fn verify_flattening_with(
    kind: FlatteningKind,
    xbar: &SupportVector,
    x0: &SupportVector,
    zbar: &Direction,
    alpha: f64,
    beta: f64,
    x_measure: &SphericalMeasure,
    tol: f64,
    convention: BreadthConvention,
) -> Result<ConditionReport> {
    check_same_grid(xbar, x0)?;
    check_measure_dim(xbar, x_measure)?;
    if zbar.dim() != xbar.dim() {
        return Err(Error::InvalidArgument("flattening direction dimension mismatch".into()));
    }
    if !(alpha >= 0.0 && beta >= 0.0) {
        return Err(Error::InvalidArgument("alpha and beta must be nonnegative".into()));
    }
    let grid = xbar.grid();
    let ball = ball_measure(grid, 1.0)?;
    let mut target = ball.scale(alpha.max(0.0))?;
    if alpha == 0.0 {
        target = SphericalMeasure::empty(grid.dim());
    }
    if beta > 0.0 {
        target = target.add(&two_atoms(zbar, beta)?)?;
    }
    let mx = surface_area_measure_of(xbar)?;
    let mut report = ConditionReport::new(Witnesses {
        alpha: Some(alpha),
        beta: Some(beta),
        measures: vec![("x".into(), x_measure.clone())],
    });
    match kind {
        FlatteningKind::Internal => {
            let rhs = target.add(x_measure)?;
            report.push("measure equality", l1_gap(&mx, &rhs), tol);
            report.push("contact", contact_residual(xbar, x0, x_measure, &[])?, tol);
        }
        FlatteningKind::External => {
            let lhs = mx.add(x_measure)?;
            report.push(
                "majorization",
                linear_majorization_residual(&lhs, &target, MAJORIZATION_ATOMS)?,
                tol,
            );
            let coef = convention.coefficient(grid.dim());
            report.constants.push(("breadth coefficient".into(), coef));
            let b = xbar.support_eval(zbar)? + xbar.support_eval(&zbar.neg())?;
            let left = xbar.volume()? + pairing(xbar, x_measure)?;
            let right = alpha * pairing(xbar, &ball)? + coef * beta * b;
            report.push("volume identity", (left - right).abs() / right.abs().max(1e-300), tol);
            report.push("contact", contact_residual(xbar, x0, x_measure, &[])?, tol);
        }
    }
    Ok(report)
}

/// Conditions for a pair `x̄`, `ȳ` in `x₀` separated by the hyperplane with
/// normal `z0`: `x̄ = 𝔵 # ᾱ𝔷_N`, `ȳ = 𝔶 # ᾱ𝔷_N`, atoms of weight at least `β̄`
/// at `z0` in `μ(𝔵)` and at `-z0` in `μ(𝔶)`, and contact with `x₀` on the
/// supports off the cut. `alpha` is the radius `ᾱ`.
#[allow(clippy::too_many_arguments)]
pub fn verify_current_hyperplane(
    xbar: &SupportVector,
    ybar: &SupportVector,
    x0: &SupportVector,
    z0: &Direction,
    x_measure: &SphericalMeasure,
    y_measure: &SphericalMeasure,
    alpha: f64,
    beta: f64,
    tol: f64,
) -> Result<ConditionReport> {
    check_same_grid(xbar, ybar)?;
    check_same_grid(xbar, x0)?;
    check_measure_dim(xbar, x_measure)?;
    check_measure_dim(xbar, y_measure)?;
    if z0.dim() != xbar.dim() {
        return Err(Error::InvalidArgument("z0 dimension mismatch".into()));
    }
    if !(alpha >= 0.0 && beta >= 0.0) {
        return Err(Error::InvalidArgument("alpha and beta must be nonnegative".into()));
    }
    let grid = xbar.grid();
    let density = alpha.powi(grid.dim() as i32 - 1);
    let ball = if density > 0.0 {
        ball_measure(grid, 1.0)?.scale(density)?
    } else {
        SphericalMeasure::empty(grid.dim())
    };
    let mut report = ConditionReport::new(Witnesses {
        alpha: Some(alpha),
        beta: Some(beta),
        measures: vec![("x".into(), x_measure.clone()), ("y".into(), y_measure.clone())],
    });
    report.push(
        "blaschke x",
        l1_gap(&surface_area_measure_of(xbar)?, &x_measure.add(&ball)?),
        tol,
    );
    report.push(
        "blaschke y",
        l1_gap(&surface_area_measure_of(ybar)?, &y_measure.add(&ball)?),
        tol,
    );
    let zx = x_measure.weight_at(z0.vec(), 1e-9);
    let zy = y_measure.weight_at(&-z0.vec(), 1e-9);
    let deficit = (beta - zx).max(beta - zy).max(0.0);
    report.push("cut atoms", if beta > 0.0 { deficit / beta } else { 0.0 }, tol);
    if beta == 0.0 {
        report.constants.push(("cut atoms vacuous".into(), 1.0));
    }
    report.push("contact x", contact_residual(xbar, x0, x_measure, &[*z0.vec()])?, tol);
    report.push("contact y", contact_residual(ybar, x0, y_measure, &[-z0.vec()])?, tol);
    Ok(report)
}

/// Conditions for a Pareto-optimal convex hull of `x̄_k ⊂ y_k`:
/// `Σ ν_k = μ(𝔷_N)`, `x̄_k = y_k` on `spt μ_k`, `α_k μ(x̄_k) = μ_k + ν_k`.
pub fn verify_optimal_hulls(
    xbars: &[SupportVector],
    ys: &[SupportVector],
    alphas: &[f64],
    mus: &[SphericalMeasure],
    nus: &[SphericalMeasure],
    tol: f64,
) -> Result<ConditionReport> {
    let m = xbars.len();
    if m == 0 || ys.len() != m || alphas.len() != m || mus.len() != m || nus.len() != m {
        return Err(Error::InvalidArgument(
            "collections must have equal nonzero length".into(),
        ));
    }
    if alphas.iter().any(|a| !(*a >= 0.0)) || alphas.iter().all(|a| *a == 0.0) {
        return Err(Error::InvalidArgument(
            "alphas must be nonnegative and not all zero".into(),
        ));
    }
    for k in 0..m {
        check_same_grid(&xbars[0], &xbars[k])?;
        check_same_grid(&xbars[k], &ys[k])?;
        check_measure_dim(&xbars[k], &mus[k])?;
        check_measure_dim(&xbars[k], &nus[k])?;
    }
    let grid = xbars[0].grid();
    let mut total = SphericalMeasure::empty(grid.dim());
    for nu in nus {
        total = total.add(nu)?;
    }
    let mut report = ConditionReport::new(Witnesses {
        alpha: None,
        beta: None,
        measures: mus
            .iter()
            .enumerate()
            .map(|(k, m)| (format!("mu {k}"), m.clone()))
            .chain(nus.iter().enumerate().map(|(k, m)| (format!("nu {k}"), m.clone())))
            .collect(),
    });
    for (k, a) in alphas.iter().enumerate() {
        report.constants.push((format!("alpha {k}"), *a));
    }
    report.push("hull measure", l1_gap(&total, &ball_measure(grid, 1.0)?), tol);
    for k in 0..m {
        report.push(
            &format!("contact {k}"),
            contact_residual(&xbars[k], &ys[k], &mus[k], &[])?,
            tol,
        );
    }
    for k in 0..m {
        let lhs = if alphas[k] > 0.0 {
            surface_area_measure_of(&xbars[k])?.scale(alphas[k])?
        } else {
            SphericalMeasure::empty(grid.dim())
        };
        report.push(&format!("decomposition {k}"), l1_gap(&lhs, &mus[k].add(&nus[k])?), tol);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use crate::iso::{
        fit_current_hyperplane_witness, fit_external_witness, fit_flattening_witness, fit_optimal_hulls_witness,
        solve_flattening, solve_urysohn, FlatteningSpec, UrysohnSpec,
    };
    use crate::SphereGrid;
    use std::sync::Arc;

    const CONTACT: f64 = 1e-6;

    fn rect(grid: &Arc<SphereGrid>, x0: f64, x1: f64, y0: f64, y1: f64) -> SupportVector {
        let pts = [
            Vec3::new(x0, y0, 0.0),
            Vec3::new(x1, y0, 0.0),
            Vec3::new(x1, y1, 0.0),
            Vec3::new(x0, y1, 0.0),
        ];
        SupportVector::from_points(grid.clone(), &pts).unwrap()
    }

    fn segment(grid: &Arc<SphereGrid>) -> SupportVector {
        SupportVector::segment(grid.clone(), &Vec3::new(-1.0, 0.0, 0.0), &Vec3::new(1.0, 0.0, 0.0)).unwrap()
    }

    #[test]
    fn disk_is_its_own_external_optimum() {
        let g = make_grid(2, 720).unwrap();
        let disk = SupportVector::origin_ball(g.clone(), 1.0).unwrap();
        let r = verify_external_urysohn(&disk, &disk, &SphericalMeasure::empty(2), 1.0, 1e-2).unwrap();
        assert!(r.verdict, "{:?}", r.conditions);
        assert_eq!(r.conditions.len(), 3);
    }

    #[test]
    fn square_around_disk_fails_majorization() {
        let g = make_grid(2, 720).unwrap();
        let disk = SupportVector::origin_ball(g.clone(), 1.0).unwrap();
        let sq = rect(&g, -1.0, 1.0, -1.0, 1.0);
        // α from the volume identity with μ = 0.
        let ball = ball_measure(&g, 1.0).unwrap();
        let alpha = sq.volume().unwrap() / pairing(&sq, &ball).unwrap();
        let r = verify_external_urysohn(&sq, &disk, &SphericalMeasure::empty(2), alpha, 1e-2).unwrap();
        assert!(r.condition("volume identity").unwrap().holds);
        assert!(!r.condition("majorization").unwrap().holds);
        assert!(!r.verdict);
    }

    #[test]
    fn solved_lens_passes_with_fitted_witness() {
        let g = make_grid(2, 720).unwrap();
        let seg = segment(&g);
        let sol = solve_urysohn(&UrysohnSpec::external(seg.clone(), 2f64.sqrt())).unwrap();
        let w = fit_external_witness(&sol.body, &seg, CONTACT).unwrap();
        let r = verify_external_urysohn(&sol.body, &seg, &w.measure, w.alpha, 1e-2).unwrap();
        assert!(r.verdict, "{:?}", r.conditions);
        // The contact normals form the horizontal band |u₂| < d/R.
        let rr = w.alpha;
        let d = (rr * rr - 1.0).sqrt();
        for a in w.measure.atoms() {
            assert!(a.dir.vec().y.abs() * rr <= d + 1e-2);
        }
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let g2 = make_grid(2, 60).unwrap();
        let g3 = make_grid(3, 1).unwrap();
        let d2 = SupportVector::origin_ball(g2, 1.0).unwrap();
        let d3 = SupportVector::origin_ball(g3, 1.0).unwrap();
        assert!(matches!(
            verify_external_urysohn(&d2, &d3, &SphericalMeasure::empty(2), 1.0, 1e-2),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            verify_external_urysohn(&d2, &d2, &SphericalMeasure::empty(3), 1.0, 1e-2),
            Err(Error::InvalidArgument(_))
        ));
    }

    fn flatten(base: UrysohnSpec, lf: f64) -> SupportVector {
        let spec = FlatteningSpec {
            base,
            zbar: Direction::axis(2, 1),
            lambda_vol: 1.0,
            lambda_flat: lf,
        };
        solve_flattening(&spec).unwrap().body
    }

    #[test]
    fn flattened_disk_passes_internal_conditions() {
        let g = make_grid(2, 720).unwrap();
        let bx = rect(&g, -3.0, 3.0, -3.0, 3.0);
        let zbar = Direction::axis(2, 1);
        let xbar = flatten(UrysohnSpec::internal(bx.clone(), 2.0), 0.3);
        let w = fit_flattening_witness(FlatteningKind::Internal, &xbar, &bx, &zbar, CONTACT).unwrap();
        assert!(w.beta > 0.0);
        let r = verify_flattening(
            FlatteningKind::Internal,
            &xbar,
            &bx,
            &zbar,
            w.alpha,
            w.beta,
            &w.x_measure,
            2e-2,
        )
        .unwrap();
        assert!(r.verdict, "{:?}", r.conditions);
        // The atoms at ±z̄ carry β on top of the arc density.
        let mx = surface_area_measure_of(&xbar).unwrap();
        let q = g.qweights();
        let iz = g.find(zbar.vec(), 1e-9).unwrap();
        let atom = mx.weight_at(zbar.vec(), 1e-9) - w.alpha * q[iz];
        assert!((atom - w.beta).abs() < 1e-2 * w.beta.max(1.0));
    }

    #[test]
    fn untouched_disk_with_beta_fails_measure_equality() {
        let g = make_grid(2, 720).unwrap();
        let bx = rect(&g, -3.0, 3.0, -3.0, 3.0);
        let disk = SupportVector::origin_ball(g.clone(), 1.0).unwrap();
        let r = verify_flattening(
            FlatteningKind::Internal,
            &disk,
            &bx,
            &Direction::axis(2, 1),
            1.0,
            0.5,
            &SphericalMeasure::empty(2),
            2e-2,
        )
        .unwrap();
        assert!(!r.condition("measure equality").unwrap().holds);
        assert!(r.condition("contact").unwrap().holds);
    }

    #[test]
    fn external_flattening_without_beta_reduces_to_urysohn() {
        let g = make_grid(2, 720).unwrap();
        let seg = segment(&g);
        let sol = solve_urysohn(&UrysohnSpec::external(seg.clone(), 2f64.sqrt())).unwrap();
        let w = fit_external_witness(&sol.body, &seg, CONTACT).unwrap();
        let a = verify_external_urysohn(&sol.body, &seg, &w.measure, w.alpha, 1e-2).unwrap();
        let b = verify_flattening(
            FlatteningKind::External,
            &sol.body,
            &seg,
            &Direction::axis(2, 1),
            w.alpha,
            0.0,
            &w.measure,
            1e-2,
        )
        .unwrap();
        assert_eq!(a.verdict, b.verdict);
        for name in ["majorization", "volume identity", "contact"] {
            let (x, y) = (a.condition(name).unwrap(), b.condition(name).unwrap());
            assert!((x.residual - y.residual).abs() < 1e-12, "{name}");
        }
    }

    /// Stationarity pairs the atom weight `β` with `(1/N) b_z̄`; the `2N`
    /// constant misprices the breadth term for a genuine optimum.
    #[test]
    fn breadth_constant_conventions_on_a_genuine_optimum() {
        let g = make_grid(2, 720).unwrap();
        let x0 = SupportVector::origin_ball(g.clone(), 0.3).unwrap();
        let zbar = Direction::axis(2, 1);
        let xbar = flatten(UrysohnSpec::external(x0.clone(), 2.0), 0.3);
        let w = fit_flattening_witness(FlatteningKind::External, &xbar, &x0, &zbar, CONTACT).unwrap();
        assert!(w.beta > 1e-2);
        let run = |c| {
            verify_flattening_with(
                FlatteningKind::External,
                &xbar,
                &x0,
                &zbar,
                w.alpha,
                w.beta,
                &w.x_measure,
                2e-2,
                c,
            )
            .unwrap()
        };
        let pairing_form = run(BreadthConvention::Pairing);
        assert!(pairing_form.verdict, "{:?}", pairing_form.conditions);
        let literal = run(BreadthConvention::Literal);
        assert!(!literal.condition("volume identity").unwrap().holds);
        assert_eq!(literal.constants[0], ("breadth coefficient".to_string(), 4.0));
    }

    #[test]
    fn current_hyperplane_pair_in_a_slab() {
        let g = make_grid(2, 720).unwrap();
        let x0 = rect(&g, -2.0, 2.0, -1.0, 1.0);
        let z0 = Direction::axis(2, 1);
        let below = rect(&g, -2.0, 2.0, -1.0, 0.0);
        let above = rect(&g, -2.0, 2.0, 0.0, 1.0);
        let spec = |ob: SupportVector| FlatteningSpec {
            base: UrysohnSpec::internal(ob, 2.0),
            zbar: z0,
            lambda_vol: 1.0,
            lambda_flat: 0.0,
        };
        let xbar = solve_flattening(&spec(below)).unwrap().body;
        let ybar = solve_flattening(&spec(above)).unwrap().body;
        let (alpha, beta, mx, my) = fit_current_hyperplane_witness(&xbar, &ybar, &x0, &z0, CONTACT).unwrap();
        assert!(beta > 0.0);
        let r = verify_current_hyperplane(&xbar, &ybar, &x0, &z0, &mx, &my, alpha, beta, 2e-2).unwrap();
        assert!(r.verdict, "{:?}", r.conditions);

        // β = 0 with no atom at z0 is flagged as vacuous.
        let r0 = verify_current_hyperplane(
            &xbar,
            &ybar,
            &x0,
            &z0,
            &SphericalMeasure::empty(2),
            &my,
            alpha,
            0.0,
            2e-2,
        )
        .unwrap();
        assert!(r0.condition("cut atoms").unwrap().holds);
        assert!(r0.constants.iter().any(|(k, _)| k == "cut atoms vacuous"));

        // Dropping the ball part of x̄ breaks (1).
        let r1 = verify_current_hyperplane(
            &xbar,
            &ybar,
            &x0,
            &z0,
            &surface_area_measure_of(&xbar).unwrap(),
            &my,
            alpha,
            beta,
            2e-2,
        )
        .unwrap();
        assert!(!r1.condition("blaschke x").unwrap().holds);
    }

    #[test]
    fn single_disk_hull_identity() {
        let g = make_grid(2, 720).unwrap();
        let disk = SupportVector::origin_ball(g.clone(), 1.0).unwrap();
        let nu = surface_area_measure_of(&disk).unwrap();
        let r = verify_optimal_hulls(
            &[disk.clone()],
            &[disk.clone()],
            &[1.0],
            &[SphericalMeasure::empty(2)],
            &[nu.clone()],
            2e-2,
        )
        .unwrap();
        assert!(r.verdict, "{:?}", r.conditions);
        let half = nu.scale(0.5).unwrap();
        let bad = verify_optimal_hulls(
            &[disk.clone()],
            &[disk],
            &[1.0],
            &[SphericalMeasure::empty(2)],
            &[half],
            2e-2,
        )
        .unwrap();
        let c = bad.condition("hull measure").unwrap();
        assert!(!c.holds && (c.residual - 0.5).abs() < 1e-2, "{c:?}");
    }

    #[test]
    fn two_disks_in_boxes_with_fitted_witnesses() {
        let g = make_grid(2, 720).unwrap();
        let ys = [rect(&g, -3.0, -1.0, -1.0, 1.0), rect(&g, 1.0, 3.0, -1.0, 1.0)];
        let xs = [
            SupportVector::ball(g.clone(), &Vec3::new(-2.0, 0.0, 0.0), 1.0).unwrap(),
            SupportVector::ball(g.clone(), &Vec3::new(2.0, 0.0, 0.0), 1.0).unwrap(),
        ];
        let w = fit_optimal_hulls_witness(&xs, &ys, CONTACT).unwrap();
        let r = verify_optimal_hulls(&xs, &ys, &w.alphas, &w.mus, &w.nus, 2e-2).unwrap();
        assert!(r.verdict, "{:?}", r.conditions);
        assert!(matches!(
            verify_optimal_hulls(&xs, &ys[..1], &w.alphas, &w.mus, &w.nus, 2e-2),
            Err(Error::InvalidArgument(_))
        ));
    }
}
