//! Reconstruction of a convex body from its surface-area measure.
//!
//! Planar measures are solved exactly by walking the edges in angular order.
//! Spatial measures are solved variationally: the support numbers `h` on the
//! atom directions minimize `⟨h, m⟩ / V(co h)^{1/3}`, whose stationarity
//! condition says the facet areas of `co h` are proportional to `m`.

use crate::convexify::convexify_values;
use crate::error::{Error, Result};
use crate::geom::{Direction, Vec3};
use crate::grid::SphereGrid;
use crate::measures::{validate_alexandrov, SphericalMeasure};
use crate::polytope::{polygon_from_ccw, Polytope};
use crate::support::{steiner_normalize, SupportVector};
use crate::tolerance;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepRule {
    /// Barzilai–Borwein steps accepted without a decrease test.
    Fixed,
    /// Barzilai–Borwein trial steps with Armijo backtracking.
    Backtracking,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOptions {
    pub max_iters: usize,
    /// Bound on the maximum relative facet-area mismatch.
    pub tol_residual: f64,
    pub step_rule: StepRule,
    /// Starting support numbers on the atom directions (atom order); the
    /// default is the ball matching the total mass.
    pub init: Option<Vec<f64>>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            max_iters: 5000,
            tol_residual: 1e-6,
            step_rule: StepRule::Backtracking,
            init: None,
        }
    }
}

impl SolveOptions {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters < 1 || !(self.tol_residual > 0.0) {
            return Err(Error::InvalidArgument("need max_iters ≥ 1 and tol_residual > 0".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    /// Steiner-normalized body on the grid of atom directions.
    pub body: SupportVector,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Objective `⟨h, m⟩` at volume 1 after each accepted iteration.
    pub objective_trace: Vec<f64>,
}

fn check_measure(m: &SphericalMeasure) -> Result<()> {
    let rep = validate_alexandrov(m, tolerance::CLOSURE)?;
    if rep.verdict {
        Ok(())
    } else {
        Err(Error::AlexandrovViolation(format!(
            "closure residual {:.3e}, spanning {}",
            rep.closure_residual, rep.spanning
        )))
    }
}

/// Exact planar solve: edges of length `w_i` along `u_i` rotated by +90°,
/// chained in angular order, then translated so that the Steiner point (the
/// exterior-angle-weighted vertex average) is the origin.
pub fn solve_minkowski_2d(m: &SphericalMeasure) -> Result<Polytope> {
    if m.dim() != 2 {
        return Err(Error::InvalidArgument("planar solver needs a planar measure".into()));
    }
    check_measure(m)?;
    let mut atoms: Vec<(f64, Direction, f64)> = m.atoms().iter().map(|a| (a.dir.angle(), a.dir, a.w)).collect();
    atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut verts = Vec::with_capacity(atoms.len());
    let mut p = Vec3::zeros();
    for (_, u, w) in &atoms {
        verts.push(p);
        let t = Vec3::new(-u.vec().y, u.vec().x, 0.0);
        p += t * *w;
    }
    // Vertex k sits between edges k-1 and k; its exterior angle is the gap
    // between their normals.
    let n = atoms.len();
    let mut steiner = Vec3::zeros();
    for k in 0..n {
        let prev = atoms[(k + n - 1) % n].0;
        let gap = crate::geom::ccw_gap(prev, atoms[k].0);
        steiner += verts[k] * gap;
    }
    steiner /= std::f64::consts::TAU;
    let verts: Vec<Vec3> = verts.into_iter().map(|v| v - steiner).collect();
    Ok(polygon_from_ccw(verts))
}

/// `max_i |area_x(u_i) - w_i| / w_i`, with absent facets counting as area 0.
pub fn solve_residual(m: &SphericalMeasure, x: &SupportVector) -> Result<f64> {
    if m.dim() != x.dim() {
        return Err(Error::InvalidArgument("dimension mismatch".into()));
    }
    let c = convexify_values(x.grid(), x.values())?;
    let mut worst: f64 = 0.0;
    for a in m.atoms() {
        let area = x.grid().find(a.dir.vec(), tolerance::SNAP).map_or(0.0, |i| c.areas[i]);
        worst = worst.max((area - a.w).abs() / a.w);
    }
    Ok(worst)
}

/// Dispatches to the exact planar solver or the spatial variational solver.
pub fn solve_minkowski(m: &SphericalMeasure, opts: &SolveOptions) -> Result<SolveOutcome> {
    if m.dim() == 2 {
        let poly = solve_minkowski_2d(m)?;
        let dirs: Vec<Direction> = m.atoms().iter().map(|a| a.dir).collect();
        let grid = SphereGrid::from_directions(2, &dirs)?;
        let body = steiner_normalize(&SupportVector::from_polytope(grid, &poly)?);
        let residual = solve_residual(m, &body)?;
        Ok(SolveOutcome {
            body,
            residual,
            iterations: 1,
            converged: true,
            objective_trace: Vec::new(),
        })
    } else {
        solve_minkowski_3d(m, opts)
    }
}

struct State {
    h: Vec<f64>,
    areas: Vec<f64>,
    /// `⟨h, m⟩` at volume 1.
    objective: f64,
    /// Gradient of `log ⟨h,m⟩ - (1/3) log V` at the volume-1 point.
    grad: Vec<f64>,
}

/// Convexifies `f`, rescales to volume 1 and evaluates the objective.
fn evaluate(grid: &SphereGrid, f: &[f64], m: &[f64]) -> Result<State> {
    let c = convexify_values(grid, f)?;
    if !(c.volume > 0.0) {
        return Err(Error::DegenerateBody {
            affine_dim: c.body.err().unwrap_or(2),
        });
    }
    let s = c.volume.cbrt();
    let h: Vec<f64> = c.h.iter().map(|v| v / s).collect();
    let areas: Vec<f64> = c.areas.iter().map(|a| a / (s * s)).collect();
    let objective: f64 = h.iter().zip(m).map(|(h, m)| h * m).sum();
    let grad = m.iter().zip(&areas).map(|(m, a)| m / objective - a / 3.0).collect();
    Ok(State {
        h,
        areas,
        objective,
        grad,
    })
}

/// Relative facet-area mismatch after scaling the body to the total mass.
fn residual_of(areas: &[f64], m: &[f64]) -> f64 {
    let total_m: f64 = m.iter().sum();
    let total_a: f64 = areas.iter().sum();
    let s2 = total_m / total_a;
    areas
        .iter()
        .zip(m)
        .map(|(a, m)| (s2 * a - m).abs() / m)
        .fold(0.0, f64::max)
}

/// Variational spatial solve on the atom directions.
pub fn solve_minkowski_3d(m: &SphericalMeasure, opts: &SolveOptions) -> Result<SolveOutcome> {
    if m.dim() != 3 {
        return Err(Error::InvalidArgument("spatial solver needs a spatial measure".into()));
    }
    opts.validate()?;
    check_measure(m)?;
    let dirs: Vec<Direction> = m.atoms().iter().map(|a| a.dir).collect();
    let grid = SphereGrid::from_directions(3, &dirs)?;
    let w: Vec<f64> = m.atoms().iter().map(|a| a.w).collect();
    let total: f64 = w.iter().sum();

    let h0 = match &opts.init {
        Some(h) if h.len() == w.len() => h.clone(),
        Some(_) => {
            return Err(Error::InvalidArgument(
                "initial support numbers must match the atom count".into(),
            ))
        }
        None => vec![(total / (4.0 * std::f64::consts::PI)).sqrt(); w.len()],
    };
    let mut st = evaluate(&grid, &h0, &w)?;
    let mut trace = vec![st.objective];
    let mut residual = residual_of(&st.areas, &w);
    let mut best = (residual, st.h.clone());
    // Preconditioned direction d_i = -g_i / m_i (steepest descent in the
    // metric weighted by m).
    let dir_of = |g: &[f64]| -> Vec<f64> { g.iter().zip(&w).map(|(g, m)| -g / m).collect() };
    let hscale = st.h.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let mut d = dir_of(&st.grad);
    let dmax = d.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-300);
    let mut tau = 0.05 * hscale / dmax;
    let mut iterations = 0;

    while iterations < opts.max_iters && residual > opts.tol_residual {
        iterations += 1;
        let slope: f64 = st.grad.iter().zip(&d).map(|(g, d)| g * d).sum();
        let log_obj = st.objective.ln();
        let mut step = tau;
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = st.h.iter().zip(&d).map(|(h, d)| h + step * d).collect();
            match evaluate(&grid, &trial, &w) {
                Ok(next) => {
                    let ok = match opts.step_rule {
                        StepRule::Fixed => true,
                        // Near the optimum the Armijo decrease drops below the
                        // rounding noise of the volume; a step that keeps the
                        // objective within that noise and shrinks the area
                        // mismatch is taken instead.
                        StepRule::Backtracking => {
                            next.objective.ln() <= log_obj + 1e-4 * step * slope
                                || (next.objective.ln() <= log_obj + 1e-13 && residual_of(&next.areas, &w) < residual)
                        }
                    };
                    if ok {
                        accepted = Some(next);
                        break;
                    }
                }
                Err(Error::EmptyBody) | Err(Error::DegenerateBody { .. }) => {}
                Err(e) => return Err(e),
            }
            step *= 0.5;
        }
        let Some(next) = accepted else { break };
        let s: Vec<f64> = next.h.iter().zip(&st.h).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = next.grad.iter().zip(&st.grad).map(|(a, b)| a - b).collect();
        let sms: f64 = s.iter().zip(&w).map(|(s, m)| s * s * m).sum();
        let sy: f64 = s.iter().zip(&y).map(|(s, y)| s * y).sum();
        tau = if sy > 0.0 && sms > 0.0 { sms / sy } else { step * 2.0 };
        st = next;
        d = dir_of(&st.grad);
        trace.push(st.objective);
        residual = residual_of(&st.areas, &w);
        if residual < best.0 {
            best = (residual, st.h.clone());
        }
    }

    let h = if residual <= best.0 { st.h.clone() } else { best.1 };
    let c = convexify_values(&grid, &h)?;
    let area_total: f64 = c.areas.iter().sum();
    let scale = (total / area_total).sqrt();
    let body = SupportVector::new(grid.clone(), c.h.iter().map(|v| v * scale).collect())?;
    let body = steiner_normalize(&crate::support::convexify(&body)?);
    let residual = solve_residual(m, &body)?;
    Ok(SolveOutcome {
        body,
        residual,
        iterations,
        converged: residual <= opts.tol_residual,
        objective_trace: trace,
    })
}
