//! Vector isoperimetric problem and the Leidenfrost stadium.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::qp2d::{AreaForm, Program};
use super::{rotate_lift, ParetoPoint};
use crate::error::{Error, Result};
use crate::geom::{Direction, Vec3};
use crate::grid::{default_grid, SphereGrid};
use crate::measures::{pairing, surface_area_measure_of};
use crate::support::{convexify, minkowski_combine, steiner_normalize, support_distance, SupportVector};
use crate::tolerance;

/// Nonnegative coefficients of a Minkowski combination and the support
/// distance between the fitted combination and the body.
#[derive(Clone, Debug, PartialEq)]
pub struct CombinationFit {
    pub alphas: Vec<f64>,
    pub residual: f64,
}

/// Weighted nonnegative least squares `min Σ w_i (Σ_k α_k cols_k[i] - rhs_i)²`,
/// `α ≥ 0`, by the Lawson–Hanson active-set method.
pub fn nnls(cols: &[Vec<f64>], rhs: &[f64], weights: Option<&[f64]>) -> Result<Vec<f64>> {
    let m = cols.len();
    let n = rhs.len();
    if m == 0 || cols.iter().any(|c| c.len() != n) || weights.is_some_and(|w| w.len() != n) {
        return Err(Error::InvalidArgument("nnls: inconsistent shapes".into()));
    }
    let sw: Vec<f64> = match weights {
        Some(w) => {
            if w.iter().any(|v| !(*v >= 0.0)) {
                return Err(Error::InvalidArgument("nnls: weights must be nonnegative".into()));
            }
            w.iter().map(|v| v.sqrt()).collect()
        }
        None => vec![1.0; n],
    };
    let a = DMatrix::from_fn(n, m, |i, k| sw[i] * cols[k][i]);
    let b = DVector::from_fn(n, |i, _| sw[i] * rhs[i]);
    let scale = a.iter().fold(0.0f64, |s, v| s.max(v.abs())) * b.iter().fold(1.0f64, |s, v| s.max(v.abs()));
    let tol = 1e-12 * scale * n as f64;

    let solve_on = |set: &[bool]| -> DVector<f64> {
        let idx: Vec<usize> = (0..m).filter(|&k| set[k]).collect();
        let mut z = DVector::zeros(m);
        if idx.is_empty() {
            return z;
        }
        let sub = a.select_columns(&idx);
        let sol = sub
            .clone()
            .svd(true, true)
            .solve(&b, 1e-14)
            .unwrap_or_else(|_| DVector::zeros(idx.len()));
        for (j, &k) in idx.iter().enumerate() {
            z[k] = sol[j];
        }
        z
    };

    let mut x = DVector::zeros(m);
    let mut passive = vec![false; m];
    for _ in 0..3 * m + 10 {
        let grad = a.transpose() * (&b - &a * &x);
        let pick = (0..m)
            .filter(|&k| !passive[k] && grad[k] > tol)
            .max_by(|&i, &j| grad[i].total_cmp(&grad[j]));
        let Some(t) = pick else { break };
        passive[t] = true;
        loop {
            let z = solve_on(&passive);
            if (0..m).filter(|&k| passive[k]).all(|k| z[k] > 0.0) {
                x = z;
                break;
            }
            let mut step: f64 = 1.0;
            for k in 0..m {
                if passive[k] && z[k] <= 0.0 {
                    let d = x[k] - z[k];
                    if d > 0.0 {
                        step = step.min(x[k] / d);
                    }
                }
            }
            x = &x + (z - &x) * step;
            for k in 0..m {
                if passive[k] && x[k] <= 1e-15 {
                    passive[k] = false;
                    x[k] = 0.0;
                }
            }
            if !passive.iter().any(|p| *p) {
                break;
            }
        }
    }
    Ok(x.iter().map(|v| v.max(0.0)).collect())
}

/// NNLS fit of the Steiner-normalized `x` by the Steiner-normalized `ys`.
fn combination_fit(x: &SupportVector, ys: &[SupportVector]) -> Result<CombinationFit> {
    let xs = steiner_normalize(x);
    let yn: Vec<SupportVector> = ys.iter().map(steiner_normalize).collect();
    let cols: Vec<Vec<f64>> = yn.iter().map(|y| y.values().to_vec()).collect();
    let alphas = nnls(&cols, xs.values(), None)?;
    let terms: Vec<(f64, &SupportVector)> = alphas.iter().copied().zip(yn.iter()).collect();
    let fitted = minkowski_combine(&terms)?;
    Ok(CombinationFit {
        residual: support_distance(&xs, &fitted)?,
        alphas,
    })
}

/// `λ`-scalarized vector isoperimetric problem on a planar grid: minimize
/// `Σ λ_m ⟨y_m, x⟩` at area `target`, where `⟨y, x⟩ = V₁(y, x)`.
fn scalarized(ys: &[SupportVector], lambda: &[f64], target: f64) -> Result<SupportVector> {
    let grid = ys[0].grid().clone();
    let terms: Vec<(f64, &SupportVector)> = lambda.iter().copied().zip(ys.iter()).collect();
    let y = convexify(&minkowski_combine(&terms)?)?;
    let form = AreaForm::new(&grid)?;
    // ⟨Y, x⟩ = (1/2) (A h_Y)ᵀ h_x.
    let c = form.apply(y.values());
    let k = super::qp2d::dot(&c, y.values());
    if !(k > tolerance::DEGENERATE_VOLUME) {
        return Err(Error::DegenerateBody { affine_dim: 1 });
    }
    let n = grid.len();
    let (lo, hi, g) = (vec![f64::NEG_INFINITY; n], vec![f64::INFINITY; n], vec![0.0; n]);
    let r = k / c.iter().sum::<f64>().max(1e-300);
    let prog = Program {
        form: &form,
        c: &c,
        k,
        g: &g,
        lo: &lo,
        hi: &hi,
        w: grid.qweights(),
        angles: grid.angles(),
    };
    let sol = prog.maximize(&vec![r; n], 200)?;
    let area = form.quad(&sol.h);
    if !(area > 0.0) {
        return Err(Error::InvalidState("vector problem produced a flat body".into()));
    }
    let x = SupportVector::new(grid, sol.h)?.scale((target / area).sqrt())?;
    Ok(steiner_normalize(&convexify(&x)?))
}

fn non_dominated(points: &[ParetoPoint]) -> bool {
    let dominates = |a: &[f64], b: &[f64]| {
        let tol = |u: f64, v: f64| 1e-9 * u.abs().max(v.abs()).max(1.0);
        a.iter().zip(b).all(|(u, v)| *u <= *v + tol(*u, *v)) && a.iter().zip(b).any(|(u, v)| *u < *v - tol(*u, *v))
    };
    points.iter().enumerate().all(|(i, p)| {
        points
            .iter()
            .enumerate()
            .all(|(j, o)| i == j || !dominates(&o.objectives, &p.objectives))
    })
}

/// Pareto points of `(⟨y_1, x⟩, …, ⟨y_M, x⟩) → inf` at area
/// `target_volume`, one per weight vector. Planar grids only.
///
/// Each point carries the NNLS fit of its body as a Minkowski combination
/// of the `ys`. The returned front is audited for mutual non-domination.
pub fn pareto_front_vector_iso(
    ys: &[SupportVector],
    target_volume: f64,
    weight_grid: &[Vec<f64>],
) -> Result<Vec<ParetoPoint>> {
    if ys.is_empty() {
        return Err(Error::InvalidArgument("need at least one body".into()));
    }
    if ys[0].dim() != 2 {
        return Err(Error::InvalidArgument(
            "the vector problem is solved on planar grids".into(),
        ));
    }
    for y in ys {
        super::verify::check_same_grid(&ys[0], y)?;
    }
    if !(target_volume > 0.0) {
        return Err(Error::InvalidArgument("target volume must be positive".into()));
    }
    let mut out = Vec::with_capacity(weight_grid.len());
    for lambda in weight_grid {
        if lambda.len() != ys.len() || lambda.iter().any(|l| !(*l >= 0.0)) || lambda.iter().all(|l| *l == 0.0) {
            return Err(Error::InvalidArgument(
                "weights must be nonnegative, not all zero, one per body".into(),
            ));
        }
        let body = scalarized(ys, lambda, target_volume)?;
        let mu = surface_area_measure_of(&body)?;
        let objectives = ys.iter().map(|y| pairing(y, &mu)).collect::<Result<Vec<_>>>()?;
        let fit = combination_fit(&body, ys)?;
        out.push(ParetoPoint {
            weights: lambda.clone(),
            body,
            objectives,
            fit: Some(fit),
        });
    }
    if !non_dominated(&out) {
        return Err(Error::InvalidState("Pareto audit found a dominated point".into()));
    }
    Ok(out)
}

fn leidenfrost_generators(grid: &Arc<SphereGrid>) -> Result<[SupportVector; 2]> {
    Ok([
        SupportVector::origin_ball(grid.clone(), 1.0)?,
        SupportVector::segment(grid.clone(), &Vec3::new(-0.5, 0.0, 0.0), &Vec3::new(0.5, 0.0, 0.0))?,
    ])
}

/// Best nonnegative fit of `x` by a unit disk plus a horizontal unit
/// segment: `x ≈ α₁ B + α₂ [-e₁/2, e₁/2]` up to translation.
pub fn stadium_fit(x: &SupportVector) -> Result<CombinationFit> {
    if x.dim() != 2 {
        return Err(Error::InvalidArgument("stadium fit needs a planar body".into()));
    }
    combination_fit(x, &leidenfrost_generators(x.grid())?)
}

/// Leidenfrost section at the given area: minimizes
/// `λ₁·(perimeter) + λ₂·(vertical breadth)` through the vector problem with
/// generators disk and horizontal segment, certifies the result as a
/// stadium, and rotates it about the vertical axis.
pub fn leidenfrost_with(
    area: f64,
    lambda: [f64; 2],
    grid2: &Arc<SphereGrid>,
    grid3: &Arc<SphereGrid>,
) -> Result<(SupportVector, SupportVector)> {
    if grid2.dim() != 2 || grid3.dim() != 3 {
        return Err(Error::InvalidArgument("expected a planar and a spatial grid".into()));
    }
    if !(lambda[0] >= 0.0 && lambda[1] >= 0.0) || lambda[0] + lambda[1] == 0.0 {
        return Err(Error::InvalidArgument(
            "weights must be nonnegative and not both zero".into(),
        ));
    }
    // A pure segment weight has no area; keep a vanishing disk part.
    let l1 = if lambda[0] == 0.0 { 1e-9 * lambda[1] } else { lambda[0] };
    let ys = leidenfrost_generators(grid2)?;
    let front = pareto_front_vector_iso(&ys, area, &[vec![l1, lambda[1]]])?;
    let stadium = front.into_iter().next().expect("one weight vector").body;
    let fit = stadium_fit(&stadium)?;
    let scale = stadium.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if fit.residual > 1e-2 * scale {
        return Err(Error::NonConvergence { residual: fit.residual });
    }
    let spheroid = rotate_lift(&stadium, &Direction::axis(2, 1), grid3)?;
    Ok((stadium, spheroid))
}

/// [`leidenfrost_with`] on the default grids.
pub fn leidenfrost(area: f64, lambda: [f64; 2]) -> Result<(SupportVector, SupportVector)> {
    leidenfrost_with(area, lambda, &default_grid(2)?, &default_grid(3)?)
}
