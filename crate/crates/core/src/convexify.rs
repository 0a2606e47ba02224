//! Halfspace intersection of grid constraints `(x, u_i) ≤ f_i`.
//!
//! Planar grids use a cyclic elimination pass: a constraint is redundant
//! exactly when its value exceeds the support value, in its direction, of the
//! vertex formed by its two surviving neighbours. Spatial grids go through
//! point-plane duality around an interior point and a 3D convex hull.

use crate::error::{Error, Result};
use crate::geom::{ccw_gap, solve3, Vec3};
use crate::grid::SphereGrid;
use crate::hull3::convex_hull_3d;
use crate::lp;
use crate::polytope::{polytope_from_facet_polygons, Polytope};
use crate::tolerance;

/// Everything one halfspace intersection yields.
#[derive(Clone, Debug)]
pub(crate) struct Convexified {
    /// Support values of the intersection on the grid.
    pub h: Vec<f64>,
    /// Facet area per grid direction (0 where the constraint is not a facet).
    pub areas: Vec<f64>,
    pub volume: f64,
    /// Full-dimensional body, or the affine dimension of a flat one.
    pub body: std::result::Result<Polytope, usize>,
    /// Vertices of the body (of a slightly thickened copy when flat) and the
    /// thickening that has to be subtracted from their support values.
    pub vertices: Vec<Vec3>,
    pub thickening: f64,
}

pub(crate) fn convexify_values(grid: &SphereGrid, f: &[f64]) -> Result<Convexified> {
    if f.len() != grid.len() {
        return Err(Error::InvalidArgument(format!(
            "expected {} values, got {}",
            grid.len(),
            f.len()
        )));
    }
    if f.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("support values must be finite".into()));
    }
    match grid.dim() {
        2 => convexify_2d(grid, f),
        _ => convexify_3d(grid, f),
    }
}

fn scale_of(f: &[f64]) -> f64 {
    f.iter().fold(0.0f64, |a, v| a.max(v.abs()))
}

/// Value at the direction with angle offsets `a` (from `p`) and `b` (to `q`)
/// of the vertex where lines `p` and `q` meet.
#[inline]
fn vertex_value(hp: f64, hq: f64, a: f64, b: f64) -> f64 {
    (hp * b.sin() + hq * a.sin()) / (a + b).sin()
}

fn convexify_2d(grid: &SphereGrid, f: &[f64]) -> Result<Convexified> {
    let n = grid.len();
    let th = grid.angles();
    let scale = scale_of(f);
    let eps = 1e-12 * scale;
    let pi = std::f64::consts::PI;

    let mut prev: Vec<usize> = (0..n).map(|i| (i + n - 1) % n).collect();
    let mut next: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    let mut alive = vec![true; n];
    let mut count = n;
    let mut stack: Vec<usize> = (0..n).rev().collect();
    while let Some(i) = stack.pop() {
        if !alive[i] || count <= 2 {
            continue;
        }
        let (p, q) = (prev[i], next[i]);
        let a = ccw_gap(th[p], th[i]);
        let b = ccw_gap(th[i], th[q]);
        if a + b >= pi - 1e-14 {
            continue;
        }
        if f[i] > vertex_value(f[p], f[q], a, b) + eps {
            alive[i] = false;
            count -= 1;
            next[p] = q;
            prev[q] = p;
            stack.push(p);
            stack.push(q);
        }
    }

    let start = (0..n).find(|&i| alive[i]).expect("at least one constraint survives");
    let mut active = vec![start];
    let mut k = next[start];
    while k != start {
        active.push(k);
        k = next[k];
    }
    let m = active.len();
    for k in 0..m {
        let gap = if m == 1 {
            std::f64::consts::TAU
        } else {
            ccw_gap(th[active[k]], th[active[(k + 1) % m]])
        };
        if gap >= pi - 1e-14 {
            return Err(Error::EmptyBody);
        }
    }

    let line_meet = |p: usize, q: usize| -> Vec3 {
        let (sp, cp) = th[p].sin_cos();
        let (sq, cq) = th[q].sin_cos();
        let det = (th[q] - th[p]).sin();
        Vec3::new((f[p] * sq - f[q] * sp) / det, (cp * f[q] - cq * f[p]) / det, 0.0)
    };
    let mut corners = Vec::with_capacity(m);
    for k in 0..m {
        corners.push(line_meet(active[k], active[(k + 1) % m]));
    }

    let mut h = f.to_vec();
    let mut areas = vec![0.0; n];
    let len_tol = 1e-9 * scale.max(1e-300);
    for k in 0..m {
        let i = active[k];
        let p = active[(k + m - 1) % m];
        let q = active[(k + 1) % m];
        let a = ccw_gap(th[p], th[i]);
        let b = ccw_gap(th[i], th[q]);
        let len = (f[p] - f[i] * a.cos()) / a.sin() + (f[q] - f[i] * b.cos()) / b.sin();
        if len < -len_tol {
            return Err(Error::EmptyBody);
        }
        areas[i] = len.max(0.0);
        let mut j = next_index(i, n);
        while j != q {
            let aj = ccw_gap(th[i], th[j]);
            let bj = ccw_gap(th[j], th[q]);
            h[j] = vertex_value(f[i], f[q], aj, bj);
            j = next_index(j, n);
        }
    }
    let volume: f64 = 0.5 * active.iter().map(|&i| f[i] * areas[i]).sum::<f64>();
    let volume = volume.max(0.0);

    let spread = corners.iter().map(|c| (c - corners[0]).norm()).fold(0.0, f64::max);
    let body = if volume <= tolerance::DEGENERATE_VOLUME * scale.max(1e-300).powi(2) {
        for a in areas.iter_mut() {
            *a = 0.0;
        }
        Err(if spread <= 1e-9 * scale.max(1e-300) { 0 } else { 1 })
    } else {
        let mut faces = Vec::new();
        for k in 0..m {
            let i = active[k];
            if areas[i] <= 0.0 {
                continue;
            }
            faces.push((grid.dirs()[i], f[i], vec![corners[(k + m - 1) % m], corners[k]]));
        }
        Ok(polytope_from_facet_polygons(2, faces, 1e-12 * scale).0)
    };
    let volume = if body.is_ok() { volume } else { 0.0 };
    Ok(Convexified {
        h,
        areas,
        volume,
        body,
        vertices: corners,
        thickening: 0.0,
    })
}

#[inline]
fn next_index(i: usize, n: usize) -> usize {
    if i + 1 == n {
        0
    } else {
        i + 1
    }
}

/// Center and radius of the largest ball inside `{(x, u_i) ≤ f_i}`, from the
/// dual program `min fᵀy, Σ y_i u_i = 0, Σ y_i = 1, y ≥ 0`.
fn chebyshev_center(grid: &SphereGrid, f: &[f64]) -> Result<(Vec3, f64)> {
    let n = grid.len();
    let mut a = vec![vec![0.0; n]; 4];
    for i in 0..n {
        let u = grid.dir(i);
        a[0][i] = u.x;
        a[1][i] = u.y;
        a[2][i] = u.z;
        a[3][i] = 1.0;
    }
    let sol = lp::solve(&a, &[0.0, 0.0, 0.0, 1.0], f, &lp::LpOptions::default());
    match sol.status {
        lp::LpStatus::Optimal => Ok((Vec3::new(sol.y[0], sol.y[1], sol.y[2]), sol.y[3])),
        lp::LpStatus::Unbounded => Err(Error::EmptyBody),
        lp::LpStatus::Infeasible => Err(Error::InvalidGrid("directions do not positively span the space".into())),
    }
}

fn convexify_3d(grid: &SphereGrid, f: &[f64]) -> Result<Convexified> {
    let scale = scale_of(f).max(1e-300);
    let (center, radius) = chebyshev_center(grid, f)?;
    if radius < -1e-10 * scale {
        return Err(Error::EmptyBody);
    }
    if radius <= 1e-10 * scale {
        return flat_3d(grid, f, scale);
    }
    let n = grid.len();
    let dual: Vec<Vec3> = (0..n)
        .map(|i| {
            let u = grid.dir(i);
            u / (f[i] - u.dot(&center))
        })
        .collect();
    let hull = convex_hull_3d(&dual, 1e-13)?;
    let mut corners = Vec::with_capacity(hull.faces.len());
    for (face, nrm) in hull.faces.iter().zip(&hull.normals) {
        let [i, j, k] = *face;
        let rows = [grid.dir(i), grid.dir(j), grid.dir(k)];
        let det = rows[0].dot(&rows[1].cross(rows[2])).abs();
        let v = if det > 1e-10 {
            solve3(rows, [f[i], f[j], f[k]])
        } else {
            None
        };
        let v = v.unwrap_or_else(|| {
            let d = nrm.dot(&dual[i]);
            center + nrm / d
        });
        corners.push(v);
    }
    let mut polys: Vec<Vec<Vec3>> = vec![Vec::new(); n];
    for (face, v) in hull.faces.iter().zip(&corners) {
        for &i in face {
            polys[i].push(*v);
        }
    }
    let mut h = f.to_vec();
    let mut faces = Vec::new();
    let mut owners = Vec::new();
    for i in 0..n {
        if polys[i].is_empty() {
            let u = grid.dir(i);
            let best = corners.iter().map(|v| v.dot(u)).fold(f64::NEG_INFINITY, f64::max);
            h[i] = f[i].min(best);
        } else {
            owners.push(i);
            faces.push((grid.dirs()[i], f[i], std::mem::take(&mut polys[i])));
        }
    }
    let (body, origin) = polytope_from_facet_polygons(3, faces, 1e-11 * scale);
    let mut areas = vec![0.0; n];
    for (k, slot) in origin.iter().enumerate() {
        if let Some(fi) = slot {
            areas[owners[k]] = body.facets()[*fi].area;
        }
    }
    let volume = body.volume();
    let vertices = body.vertices().to_vec();
    Ok(Convexified {
        h,
        areas,
        volume,
        body: Ok(body),
        vertices,
        thickening: 0.0,
    })
}

/// Flat or single-point intersections: thicken, intersect, and report the
/// affine dimension of the thickened body's vertex cloud.
fn flat_3d(grid: &SphereGrid, f: &[f64], scale: f64) -> Result<Convexified> {
    let eps = 1e-8 * scale;
    let thick: Vec<f64> = f.iter().map(|v| v + eps).collect();
    let c = convexify_3d(grid, &thick)?;
    let h: Vec<f64> = c.h.iter().zip(f).map(|(t, v)| (t - eps).min(*v)).collect();
    let centroid = c.vertices.iter().fold(Vec3::zeros(), |a, v| a + v) / c.vertices.len() as f64;
    let mut cov = crate::geom::Mat3::zeros();
    for v in &c.vertices {
        let d = v - centroid;
        cov += d * d.transpose();
    }
    cov /= c.vertices.len() as f64;
    let eig = cov.symmetric_eigenvalues();
    let affine_dim = eig.iter().filter(|&&e| e.max(0.0).sqrt() > 100.0 * eps).count();
    Ok(Convexified {
        h,
        areas: vec![0.0; grid.len()],
        volume: 0.0,
        body: Err(affine_dim.min(2)),
        vertices: c.vertices,
        thickening: eps,
    })
}
