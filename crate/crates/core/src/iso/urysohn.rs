//! Urysohn and flattening solvers, and the analytic lens.

use std::f64::consts::PI;
use std::sync::Arc;

use super::qp2d::{self, dot, AreaForm, Program};
use super::{FlatteningSpec, ParetoPoint, UrysohnKind, UrysohnSpec};
use crate::error::{Error, Result};
use crate::geom::{sphere_measure, Direction};
use crate::grid::SphereGrid;
use crate::lp::{self, LpOptions, LpStatus};
use crate::measures::breadth_values;
use crate::support::{convexify, steiner_point, SupportVector};

const FISTA_ITERS: usize = 4000;

#[derive(Clone, Debug)]
pub struct UrysohnSolution {
    pub body: SupportVector,
    /// Multiplier of the breadth constraint: free normals carry surface
    /// density `multiplier` (the ball of radius `multiplier^{1/(N-1)}`).
    pub multiplier: f64,
    pub kkt_residual: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Largest KKT residual accepted as converged.
const KKT_TOL: f64 = 1e-4;

struct Setup {
    grid: Arc<SphereGrid>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    /// `Σ q h = k` encodes the breadth target.
    k: f64,
    init: Vec<f64>,
}

fn setup(spec: &UrysohnSpec) -> Result<Setup> {
    if !(spec.breadth_target > 0.0) {
        return Err(Error::InvalidArgument("breadth target must be positive".into()));
    }
    let grid = match &spec.obstacle {
        Some(o) => o.grid().clone(),
        None => spec.grid.clone(),
    };
    let n = grid.len();
    let dim = grid.dim();
    let k = spec.breadth_target * sphere_measure(dim) / 2.0;
    let (mut lo, mut hi) = (vec![f64::NEG_INFINITY; n], vec![f64::INFINITY; n]);
    let r = spec.breadth_target / 2.0;
    let mut init = vec![r; n];
    match (spec.kind, &spec.obstacle) {
        (UrysohnKind::Free, _) => {}
        (_, None) => return Err(Error::InvalidArgument("obstacle required".into())),
        (kind, Some(ob)) => {
            let h0 = convexify(ob)?.into_values();
            let b0 = breadth_values(&grid, &h0);
            let slack = 1e-12 * b0.abs().max(1.0);
            match kind {
                UrysohnKind::Internal => {
                    if spec.breadth_target > b0 + slack {
                        return Err(Error::Infeasible(format!(
                            "breadth {} exceeds the obstacle's {}",
                            spec.breadth_target, b0
                        )));
                    }
                    let p = steiner_point(&SupportVector::new(grid.clone(), h0.clone())?);
                    let t = spec.breadth_target / b0;
                    init = (0..n)
                        .map(|i| {
                            let pu = p.dot(grid.dir(i));
                            t * (h0[i] - pu) + pu
                        })
                        .collect();
                    hi = h0;
                }
                UrysohnKind::External => {
                    if spec.breadth_target < b0 - slack {
                        return Err(Error::Infeasible(format!(
                            "breadth {} is below the obstacle's {}",
                            spec.breadth_target, b0
                        )));
                    }
                    let add = (spec.breadth_target - b0) / 2.0;
                    init = h0.iter().map(|v| v + add).collect();
                    lo = h0;
                }
                UrysohnKind::Free => unreachable!(),
            }
        }
    }
    if spec.symmetric {
        let anti: Vec<usize> = (0..n)
            .map(|i| {
                grid.antipode(i)
                    .ok_or_else(|| Error::InvalidArgument("symmetric class needs an antipodal grid".into()))
            })
            .collect::<Result<_>>()?;
        let (lo0, hi0, in0) = (lo.clone(), hi.clone(), init.clone());
        for i in 0..n {
            lo[i] = lo0[i].max(lo0[anti[i]]);
            hi[i] = hi0[i].min(hi0[anti[i]]);
            init[i] = 0.5 * (in0[i] + in0[anti[i]]);
        }
        if (0..n).any(|i| lo[i] > hi[i]) {
            return Err(Error::Infeasible("no symmetric body satisfies the bounds".into()));
        }
    }
    Ok(Setup { grid, lo, hi, k, init })
}

fn symmetrize(grid: &SphereGrid, h: &[f64]) -> Vec<f64> {
    (0..h.len())
        .map(|i| match grid.antipode(i) {
            Some(j) => 0.5 * (h[i] + h[j]),
            None => h[i],
        })
        .collect()
}

/// `max Q(h) - gᵀh` over the breadth hyperplane and bounds.
fn solve_planar(s: &Setup, g: &[f64]) -> Result<qp2d::ProgramSolution> {
    let form = AreaForm::new(&s.grid)?;
    let q = s.grid.qweights();
    let prog = Program {
        form: &form,
        c: q,
        k: s.k,
        g,
        lo: &s.lo,
        hi: &s.hi,
        w: q,
        angles: s.grid.angles(),
    };
    prog.maximize(&s.init, FISTA_ITERS)
}

fn finish(
    grid: &Arc<SphereGrid>,
    h: Vec<f64>,
    multiplier: f64,
    kkt: f64,
    iterations: usize,
    symmetric: bool,
) -> Result<UrysohnSolution> {
    let h = if symmetric { symmetrize(grid, &h) } else { h };
    let body = convexify(&SupportVector::new(grid.clone(), h)?)?;
    Ok(UrysohnSolution {
        body,
        multiplier,
        kkt_residual: kkt,
        converged: kkt <= KKT_TOL,
        iterations,
    })
}

/// Maximizes volume at fixed integral breadth under the spec's inclusion.
///
/// Planar grids solve the area quadratic program exactly (active-set
/// polish after an accelerated gradient phase); spatial grids run projected
/// gradient ascent on `V^{1/N}` with facet areas as the gradient and
/// convexification of every iterate.
pub fn solve_urysohn(spec: &UrysohnSpec) -> Result<UrysohnSolution> {
    let s = setup(spec)?;
    let n = s.grid.len();
    if s.grid.dim() == 2 {
        let sol = solve_planar(&s, &vec![0.0; n])?;
        finish(
            &s.grid,
            sol.h,
            sol.kappa,
            sol.kkt_residual,
            sol.iterations,
            spec.symmetric,
        )
    } else {
        let out = ascend_spatial(&s, &vec![0.0; n], 1.0, 3000)?;
        finish(&s.grid, out.h, out.kappa, out.kkt, out.iterations, spec.symmetric)
    }
}

struct SpatialOutcome {
    h: Vec<f64>,
    kappa: f64,
    kkt: f64,
    iterations: usize,
}

/// Projected gradient ascent of `λ_vol·V(co h)^{1/N} - gᵀh` over the
/// breadth hyperplane and bounds, with every iterate convexified.
fn ascend_spatial(s: &Setup, g: &[f64], lambda_vol: f64, max_iters: usize) -> Result<SpatialOutcome> {
    let grid = &s.grid;
    let q = grid.qweights();
    let nd = grid.dim() as f64;
    let feasible = |y: &[f64]| -> Result<Vec<f64>> {
        let mut h = qp2d::project(q, q, s.k, &s.lo, &s.hi, y)?;
        for _ in 0..3 {
            let t = convexify(&SupportVector::new(grid.clone(), h)?)?.into_values();
            h = qp2d::project(q, q, s.k, &s.lo, &s.hi, &t)?;
        }
        Ok(h)
    };
    let eval = |h: &[f64]| -> Result<(f64, Vec<f64>, f64)> {
        let c = SupportVector::new(grid.clone(), h.to_vec())?.convexified()?;
        let f = lambda_vol * c.volume.max(0.0).powf(1.0 / nd) - dot(g, h);
        Ok((f, c.areas, c.volume))
    };
    let gradient = |areas: &[f64], vol: f64| -> Vec<f64> {
        let coef = lambda_vol * vol.max(1e-300).powf(1.0 / nd - 1.0) / nd;
        areas.iter().zip(g).map(|(a, gi)| coef * a - gi).collect()
    };
    let mut h = feasible(&s.init)?;
    let (mut f, mut areas, mut vol) = eval(&h)?;
    let scale = h.iter().fold(1e-300f64, |m, v| m.max(v.abs()));
    let mut step = {
        let gr = gradient(&areas, vol);
        let m = gr.iter().zip(q).fold(0.0f64, |m, (a, w)| m.max((a / w).abs()));
        0.05 * scale / m.max(1e-300)
    };
    let mut iters = 0;
    let mut stall = 0;
    while iters < max_iters {
        iters += 1;
        let gr = gradient(&areas, vol);
        let y: Vec<f64> = (0..h.len()).map(|i| h[i] + step * gr[i] / q[i]).collect();
        let trial = feasible(&y)?;
        let (ft, at, vt) = eval(&trial)?;
        let moved = trial.iter().zip(&h).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        if ft > f {
            let gain = (ft - f) / f.abs().max(1e-300);
            h = trial;
            f = ft;
            areas = at;
            vol = vt;
            step *= 1.3;
            stall = if gain < 1e-12 { stall + 1 } else { 0 };
        } else {
            step *= 0.5;
            stall += 1;
        }
        if moved <= 1e-12 * scale || stall > 40 {
            break;
        }
    }
    let gr = gradient(&areas, vol);
    let status = qp2d::status_of(&h, &s.lo, &s.hi, 1e-7);
    let kappa = qp2d::kappa_fit(&gr, q, &status);
    let kkt = qp2d::kkt_residual(&gr, q, s.k, kappa, &status, &h, &s.lo, &s.hi);
    // Report the multiplier of the volume gradient (facet-area density).
    let coef = lambda_vol * vol.max(1e-300).powf(1.0 / nd - 1.0) / nd;
    Ok(SpatialOutcome {
        h,
        kappa: if coef > 0.0 { kappa / coef } else { kappa },
        kkt,
        iterations: iters,
    })
}

fn flat_indices(grid: &SphereGrid, zbar: &Direction) -> Result<(usize, usize)> {
    if zbar.dim() != grid.dim() {
        return Err(Error::InvalidArgument("flattening direction dimension mismatch".into()));
    }
    let i = grid
        .find(zbar.vec(), 1e-9)
        .ok_or_else(|| Error::InvalidArgument("flattening direction must be a grid direction".into()))?;
    let j = grid
        .find(&-zbar.vec(), 1e-9)
        .ok_or_else(|| Error::InvalidArgument("grid lacks the antipode of the flattening direction".into()))?;
    Ok((i, j))
}

/// Weighted-sum solve of `(-V, b_z̄) → inf` under the base spec's
/// constraints. Objectives are reported as `[-V, b_z̄]`.
pub fn solve_flattening(spec: &FlatteningSpec) -> Result<ParetoPoint> {
    let (lv, lf) = (spec.lambda_vol, spec.lambda_flat);
    if !(lv >= 0.0 && lf >= 0.0) || lv + lf == 0.0 {
        return Err(Error::InvalidArgument(
            "weights must be nonnegative and not both zero".into(),
        ));
    }
    let s = setup(&spec.base)?;
    let (iz, jz) = flat_indices(&s.grid, &spec.zbar)?;
    let n = s.grid.len();
    let indicator = {
        let mut e = vec![0.0; n];
        e[iz] += 1.0;
        e[jz] += 1.0;
        e
    };
    let h = if lf == 0.0 {
        solve_urysohn(&spec.base)?.body.into_values()
    } else if s.grid.dim() == 2 {
        if lv == 0.0 {
            min_breadth_lp(&s, &indicator)?
        } else {
            flatten_planar(&s, &indicator, lf / lv)?
        }
    } else {
        if lv == 0.0 {
            return Err(Error::InvalidArgument(
                "pure flattening (zero volume weight) is supported on planar grids only".into(),
            ));
        }
        let g: Vec<f64> = indicator.iter().map(|e| lf * e).collect();
        let out = ascend_spatial(&s, &g, lv, 3000)?;
        out.h
    };
    let h = if spec.base.symmetric {
        symmetrize(&s.grid, &h)
    } else {
        h
    };
    let body = convexify(&SupportVector::new(s.grid.clone(), h)?)?;
    let v = body.volume()?;
    let b = body.values()[iz] + body.values()[jz];
    Ok(ParetoPoint {
        weights: vec![lv, lf],
        body,
        objectives: vec![-v, b],
        fit: None,
    })
}

/// `max √Q - r·eᵀh` via the equivalent `max Q - β eᵀh` with
/// `β = 2 r √Q(h_β)`, located by a safeguarded secant search on `β`.
fn flatten_planar(s: &Setup, e: &[f64], r: f64) -> Result<Vec<f64>> {
    let form = AreaForm::new(&s.grid)?;
    let q = s.grid.qweights();
    let solve = |beta: f64| -> Result<qp2d::ProgramSolution> {
        let g: Vec<f64> = e.iter().map(|v| beta * v).collect();
        let prog = Program {
            form: &form,
            c: q,
            k: s.k,
            g: &g,
            lo: &s.lo,
            hi: &s.hi,
            w: q,
            angles: s.grid.angles(),
        };
        prog.maximize(&s.init, FISTA_ITERS)
    };
    let phi = |sol: &qp2d::ProgramSolution, beta: f64| beta - 2.0 * r * form.quad(&sol.h).max(0.0).sqrt();
    let s0 = solve(0.0)?;
    let mut a = (0.0, phi(&s0, 0.0), s0);
    let b_hi = 2.0 * r * form.quad(&a.2.h).max(0.0).sqrt();
    if a.1 >= 0.0 {
        return Ok(a.2.h);
    }
    let sb = solve(b_hi)?;
    let mut b = (b_hi, phi(&sb, b_hi), sb);
    for _ in 0..60 {
        if b.1.abs() <= 1e-13 * b_hi.max(1e-300) {
            return Ok(b.2.h);
        }
        // Illinois-style regula falsi keeps the bracket.
        let t = if (b.1 - a.1).abs() > 0.0 {
            b.0 - b.1 * (b.0 - a.0) / (b.1 - a.1)
        } else {
            0.5 * (a.0 + b.0)
        };
        let t = if t <= a.0.min(b.0) || t >= a.0.max(b.0) {
            0.5 * (a.0 + b.0)
        } else {
            t
        };
        let st = solve(t)?;
        let ft = phi(&st, t);
        if ft.signum() == b.1.signum() {
            a.1 *= 0.5;
            b = (t, ft, st);
        } else {
            a = b;
            b = (t, ft, st);
        }
        if (a.0 - b.0).abs() <= 1e-14 * b_hi {
            break;
        }
    }
    Ok(b.2.h)
}

/// `min eᵀh` over convex `h` (nonnegative edge lengths) meeting the breadth
/// and bound constraints.
fn min_breadth_lp(s: &Setup, e: &[f64]) -> Result<Vec<f64>> {
    let form = AreaForm::new(&s.grid)?;
    let n = s.grid.len();
    let q = s.grid.qweights();
    // h = base + sign·x with x ≥ 0.
    let (base, sign): (Vec<f64>, f64) = if s.hi.iter().all(|v| v.is_finite()) {
        (s.hi.clone(), -1.0)
    } else if s.lo.iter().all(|v| v.is_finite()) {
        (s.lo.clone(), 1.0)
    } else {
        let m = 10.0 * s.k / q.iter().sum::<f64>();
        (vec![-m; n], 1.0)
    };
    let ab = form.apply(&base);
    // Columns: x (n), edge slacks (n).
    let mut a = vec![vec![0.0; 2 * n]; n + 1];
    let mut b = vec![0.0; n + 1];
    for i in 0..n {
        let mut unit = vec![0.0; n];
        unit[i] = 1.0;
        let col = form.apply(&unit);
        for (r, v) in col.iter().enumerate() {
            if *v != 0.0 {
                a[r][i] = sign * v;
            }
        }
        a[i][n + i] = -1.0;
        b[i] = -ab[i];
        a[n][i] = sign * q[i];
    }
    b[n] = s.k - dot(q, &base);
    let mut cost = vec![0.0; 2 * n];
    for i in 0..n {
        cost[i] = sign * e[i];
    }
    let sol = lp::solve(&a, &b, &cost, &LpOptions::default());
    match sol.status {
        LpStatus::Optimal => Ok((0..n).map(|i| base[i] + sign * sol.x[i]).collect()),
        LpStatus::Infeasible => Err(Error::Infeasible("no convex body meets the constraints".into())),
        LpStatus::Unbounded => Err(Error::InvalidState("breadth program is unbounded".into())),
    }
}

/// Radius `R` of the lens with rim radius `a` and integral breadth
/// `breadth`; the breadth must lie strictly between that of the flat rim
/// and that of the ball of radius `a`.
pub fn lens_radius_for_breadth(dim: usize, a: f64, breadth: f64) -> Result<f64> {
    let b = |r: f64| lens_breadth(dim, a, r);
    let (lo_b, hi_b) = (b(1e12 * a), 2.0 * a);
    if !(a > 0.0) || !(breadth > lo_b && breadth <= hi_b) {
        return Err(Error::InvalidArgument(format!(
            "breadth {breadth} outside the lens range ({lo_b}, {hi_b}]"
        )));
    }
    let (mut lo, mut hi) = (a, 2.0 * a);
    while b(hi) > breadth {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if m == lo || m == hi {
            break;
        }
        if b(m) > breadth {
            lo = m;
        } else {
            hi = m;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn lens_breadth(dim: usize, a: f64, r: f64) -> f64 {
    let d = (r * r - a * a).max(0.0).sqrt();
    let s = d / r;
    if dim == 2 {
        4.0 * r * (a / r).min(1.0).asin() / PI
    } else {
        a * (s * a / r + s.asin()) + 2.0 * r * (1.0 - s) - d * (1.0 - s * s)
    }
}

/// Support vector of the lens bounded by two congruent balls of radius
/// `alpha^{1/(N-1)}` whose rim is the `(N-2)`-sphere of radius
/// `half_width` in the hyperplane orthogonal to the last axis.
pub fn lens_analytic(half_width: f64, alpha: f64, grid: &Arc<SphereGrid>) -> Result<SupportVector> {
    let dim = grid.dim();
    if !(half_width > 0.0) || !(alpha > 0.0) {
        return Err(Error::InvalidArgument("lens parameters must be positive".into()));
    }
    let r = alpha.powf(1.0 / (dim as f64 - 1.0));
    if r < half_width {
        return Err(Error::InvalidArgument(format!(
            "ball radius {r} is smaller than the rim radius {half_width}"
        )));
    }
    let d = (r * r - half_width * half_width).sqrt();
    let axis = dim - 1;
    let h = (0..grid.len())
        .map(|i| {
            let u = grid.dir(i);
            let t = u[axis].abs();
            if t * r >= d {
                r - d * t
            } else {
                half_width * (1.0 - t * t).max(0.0).sqrt()
            }
        })
        .collect();
    Ok(SupportVector::tight_unchecked(grid.clone(), h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Vec3;
    use crate::grid::make_grid;
    use crate::support::{support_distance, SupportFunction};

    fn segment(grid: &Arc<SphereGrid>) -> SupportVector {
        SupportVector::segment(grid.clone(), &Vec3::new(-1.0, 0.0, 0.0), &Vec3::new(1.0, 0.0, 0.0)).unwrap()
    }

    fn boxed(grid: &Arc<SphereGrid>, w: f64, h: f64) -> SupportVector {
        let pts = [
            Vec3::new(-w, -h, 0.0),
            Vec3::new(w, -h, 0.0),
            Vec3::new(w, h, 0.0),
            Vec3::new(-w, h, 0.0),
        ];
        SupportVector::from_points(grid.clone(), &pts).unwrap()
    }

    #[test]
    fn free_problem_gives_the_disk() {
        let g = make_grid(2, 720).unwrap();
        let sol = solve_urysohn(&UrysohnSpec::free(g.clone(), 2.0)).unwrap();
        assert!(sol.converged, "{}", sol.kkt_residual);
        let a = sol.body.volume().unwrap();
        assert!((a - PI).abs() < 5e-3, "{a}");
        let disk = SupportVector::origin_ball(g, 1.0).unwrap();
        let d = support_distance(&crate::support::steiner_normalize(&sol.body), &disk).unwrap();
        assert!(d < 1e-6, "{d}");
        // Free normals carry the edge density of the circumscribed regular
        // polygon, 2 tan(δ/2)/δ.
        let delta = 2.0 * PI / 720.0;
        let expect = 2.0 * (delta / 2.0).tan() / delta;
        assert!((sol.multiplier - expect).abs() < 1e-9, "{}", sol.multiplier);
    }

    #[test]
    fn lens_formula_examples() {
        let g = make_grid(2, 720).unwrap();
        let lens = lens_analytic(1.0, 2f64.sqrt(), &g).unwrap();
        let up = lens.support_eval(&Direction::axis(2, 1)).unwrap();
        assert!((up - (2f64.sqrt() - 1.0)).abs() < 1e-12);
        let right = lens.support_eval(&Direction::axis(2, 0)).unwrap();
        assert!((right - 1.0).abs() < 1e-12);
        // Oracle: the extreme point of the far disk is in the lens when it
        // lies in the near disk too; otherwise the support is attained at a
        // rim corner (±1, 0).
        let r = 2f64.sqrt();
        for (i, d) in g.dirs().iter().enumerate() {
            let v = d.vec();
            let c = Vec3::new(0.0, -v.y.signum(), 0.0);
            let p = c + v * r;
            let expect = if (p + c).norm() <= r + 1e-12 {
                p.dot(v)
            } else {
                v.x.abs()
            };
            assert!((lens.values()[i] - expect).abs() < 1e-12, "{i}");
        }
        // Mirror symmetry in the rim hyperplane is exact on a grid closed
        // under the mirror.
        let dirs: Vec<Direction> = (0..50)
            .flat_map(|k| {
                let t = 0.03 + k as f64 * PI / 50.0;
                let (s, c) = t.sin_cos();
                [Direction::new(&[c, s]).unwrap(), Direction::new(&[c, -s]).unwrap()]
            })
            .collect();
        let mg = SphereGrid::from_directions(2, &dirs).unwrap();
        let ml = lens_analytic(1.0, 2f64.sqrt(), &mg).unwrap();
        for (i, d) in mg.dirs().iter().enumerate() {
            let m = Vec3::new(d.vec().x, -d.vec().y, 0.0);
            let j = mg.find(&m, 0.0).unwrap();
            assert_eq!(ml.values()[i], ml.values()[j]);
        }
        let thin = lens_analytic(1.0, 1e3, &g).unwrap();
        assert!(support_distance(&thin, &segment(&g)).unwrap() < 1e-2);
        assert!(matches!(lens_analytic(1.0, 0.5, &g), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn lens_breadth_roundtrip() {
        for dim in [2usize, 3] {
            let g = make_grid(dim, if dim == 2 { 720 } else { 4 }).unwrap();
            let r: f64 = 1.7;
            let lens = lens_analytic(1.0, r.powi(dim as i32 - 1), &g).unwrap();
            let b = lens_breadth(dim, 1.0, r);
            let numeric = breadth_values(&g, lens.values());
            assert!((b - numeric).abs() / b < 2e-3, "dim {dim}: {b} vs {numeric}");
            let back = lens_radius_for_breadth(dim, 1.0, b).unwrap();
            assert!((back - r).abs() < 1e-9);
        }
    }

    #[test]
    fn external_problem_around_segment_is_a_lens() {
        let g = make_grid(2, 720).unwrap();
        let target = 2f64.sqrt();
        let sol = solve_urysohn(&UrysohnSpec::external(segment(&g), target)).unwrap();
        assert!(sol.converged, "{}", sol.kkt_residual);
        let r = lens_radius_for_breadth(2, 1.0, target).unwrap();
        let lens = lens_analytic(1.0, r, &g).unwrap();
        let d = support_distance(&sol.body, &lens).unwrap();
        assert!(d < 1e-2, "{d}");
        assert!((sol.multiplier - r).abs() < 1e-2, "{} vs {r}", sol.multiplier);
    }

    #[test]
    fn infeasible_specs_are_rejected() {
        let g = make_grid(2, 360).unwrap();
        let sq = boxed(&g, 1.0, 1.0);
        // Breadth of the square is 8/π.
        assert!(matches!(
            solve_urysohn(&UrysohnSpec::internal(sq.clone(), 3.0)),
            Err(Error::Infeasible(_))
        ));
        assert!(matches!(
            solve_urysohn(&UrysohnSpec::external(sq, 2.0)),
            Err(Error::Infeasible(_))
        ));
        assert!(matches!(
            solve_urysohn(&UrysohnSpec::free(g, -1.0)),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn internal_problem_stays_inside_and_keeps_breadth() {
        let g = make_grid(2, 720).unwrap();
        let ob = boxed(&g, 2.0, 0.5);
        let sol = solve_urysohn(&UrysohnSpec::internal(ob.clone(), 2.0)).unwrap();
        assert!(sol.converged);
        assert!(crate::support::contains(&ob, &sol.body).unwrap());
        let b = breadth_values(&g, sol.body.values());
        assert!((b - 2.0).abs() < 1e-9, "{b}");
        // A disk of breadth 2 does not fit, so the optimum must beat every
        // disk that does and touch the long sides.
        assert!(sol.body.volume().unwrap() > PI * 0.25);
        let top = sol.body.support_eval(&Direction::axis(2, 1)).unwrap();
        assert!((top - 0.5).abs() < 1e-9);
    }

    #[test]
    fn symmetric_option_gives_even_bodies() {
        let g = make_grid(2, 360).unwrap();
        let tri = SupportVector::from_points(
            g.clone(),
            &[
                Vec3::new(-1.0, -0.5, 0.0),
                Vec3::new(1.5, -0.5, 0.0),
                Vec3::new(0.0, 1.2, 0.0),
            ],
        )
        .unwrap();
        let mut spec = UrysohnSpec::internal(tri.clone(), 1.0);
        spec.symmetric = true;
        let sol = solve_urysohn(&spec).unwrap();
        for i in 0..g.len() {
            let j = g.antipode(i).unwrap();
            assert!((sol.body.values()[i] - sol.body.values()[j]).abs() < 1e-9);
        }
        assert!(crate::support::contains(&tri, &sol.body).unwrap());
    }

    fn flat_spec(g: &Arc<SphereGrid>, lv: f64, lf: f64) -> FlatteningSpec {
        FlatteningSpec {
            base: UrysohnSpec::internal(boxed(g, 3.0, 3.0), 2.0),
            zbar: Direction::axis(2, 1),
            lambda_vol: lv,
            lambda_flat: lf,
        }
    }

    #[test]
    fn flattening_without_flat_weight_is_urysohn() {
        let g = make_grid(2, 720).unwrap();
        let spec = flat_spec(&g, 1.0, 0.0);
        let p = solve_flattening(&spec).unwrap();
        let u = solve_urysohn(&spec.base).unwrap();
        assert!(support_distance(&p.body, &u.body).unwrap() < 1e-6);
        assert!((p.objectives[0] + u.body.volume().unwrap()).abs() < 1e-8);
    }

    #[test]
    fn pure_flattening_collapses_the_breadth() {
        let g = make_grid(2, 720).unwrap();
        let p = solve_flattening(&flat_spec(&g, 0.0, 1.0)).unwrap();
        assert!(p.objectives[1] <= 1e-3, "{:?}", p.objectives);
        let b = breadth_values(&g, p.body.values());
        assert!((b - 2.0).abs() < 1e-8);
    }

    #[test]
    fn moderate_flattening_adds_atoms_at_the_poles() {
        let g = make_grid(2, 720).unwrap();
        let p = solve_flattening(&flat_spec(&g, 1.0, 0.3)).unwrap();
        let c = p.body.convexified().unwrap();
        let iz = g.find(&Vec3::new(0.0, 1.0, 0.0), 1e-9).unwrap();
        let jz = g.find(&Vec3::new(0.0, -1.0, 0.0), 1e-9).unwrap();
        let q = g.qweights();
        // Facets at ±z̄ are far longer than any arc facet.
        let arc = (0..g.len())
            .filter(|&i| i != iz && i != jz)
            .map(|i| c.areas[i] / q[i])
            .fold(0.0, f64::max);
        assert!(c.areas[iz] > 10.0 * arc * q[iz] && c.areas[jz] > 10.0 * arc * q[jz]);
        // Objectives recompute from the body.
        let b = p.body.support_eval(&Direction::axis(2, 1)).unwrap()
            + p.body.support_eval(&Direction::axis(2, 1).neg()).unwrap();
        assert!((p.objectives[1] - b).abs() < 1e-8);
        assert!((p.objectives[0] + p.body.volume().unwrap()).abs() < 1e-8);
    }

    #[test]
    fn flattening_trades_volume_for_breadth() {
        let g = make_grid(2, 360).unwrap();
        let pts: Vec<ParetoPoint> = [0.05, 0.2, 0.6]
            .iter()
            .map(|&lf| solve_flattening(&flat_spec(&g, 1.0, lf)).unwrap())
            .collect();
        for w in pts.windows(2) {
            assert!(w[1].objectives[1] < w[0].objectives[1]);
            assert!(w[1].objectives[0] > w[0].objectives[0]);
        }
    }
}
