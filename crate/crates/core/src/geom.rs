//! Small vector helpers shared by the 2D and 3D code paths.
//!
//! Points and directions are stored as `Vector3<f64>` in both dimensions; in
//! dimension 2 the third component is always zero.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::tolerance;

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;

/// A point of the unit sphere `S^{N-1}` for `N` in {2, 3}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Direction {
    v: Vec3,
    dim: u8,
}

impl Direction {
    /// Accepts `coords` only if it already has unit norm.
    pub fn new(coords: &[f64]) -> Result<Self> {
        let (dim, v) = vec_from_slice(coords)?;
        if (v.norm() - 1.0).abs() > tolerance::UNIT_NORM {
            return Err(Error::InvalidArgument(format!(
                "direction {coords:?} is not a unit vector"
            )));
        }
        Ok(Self { v, dim })
    }

    /// Normalizes a nonzero vector.
    pub fn normalize(coords: &[f64]) -> Result<Self> {
        let (dim, v) = vec_from_slice(coords)?;
        Self::from_vec(dim as usize, v)
    }

    pub fn from_vec(dim: usize, v: Vec3) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidArgument(format!("dimension {dim} unsupported")));
        }
        let mut v = v;
        if dim == 2 {
            v.z = 0.0;
        }
        let n = v.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::InvalidArgument("cannot normalize a zero vector".into()));
        }
        Ok(Self {
            v: v / n,
            dim: dim as u8,
        })
    }

    pub fn from_angle(theta: f64) -> Self {
        Self {
            v: Vec3::new(theta.cos(), theta.sin(), 0.0),
            dim: 2,
        }
    }

    pub fn axis(dim: usize, k: usize) -> Self {
        let mut v = Vec3::zeros();
        v[k] = 1.0;
        Self { v, dim: dim as u8 }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    #[inline]
    pub fn vec(&self) -> &Vec3 {
        &self.v
    }

    pub fn coords(&self) -> Vec<f64> {
        self.v.as_slice()[..self.dim()].to_vec()
    }

    /// Polar angle in `[0, 2π)`; meaningful in dimension 2.
    pub fn angle(&self) -> f64 {
        normalize_angle(self.v.y.atan2(self.v.x))
    }

    pub fn neg(&self) -> Self {
        Self {
            v: -self.v,
            dim: self.dim,
        }
    }

    pub fn dot(&self, p: &Vec3) -> f64 {
        self.v.dot(p)
    }
}

fn vec_from_slice(coords: &[f64]) -> Result<(u8, Vec3)> {
    match coords {
        [x, y] => Ok((2, Vec3::new(*x, *y, 0.0))),
        [x, y, z] => Ok((3, Vec3::new(*x, *y, *z))),
        _ => Err(Error::InvalidArgument(format!(
            "expected 2 or 3 coordinates, got {}",
            coords.len()
        ))),
    }
}

pub(crate) fn point_from_slice(coords: &[f64]) -> Result<(usize, Vec3)> {
    vec_from_slice(coords).map(|(d, v)| (d as usize, v))
}

pub(crate) fn normalize_angle(t: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let r = t.rem_euclid(tau);
    if r >= tau {
        0.0
    } else {
        r
    }
}

/// Counter-clockwise angle from `a` to `b`, in `[0, 2π)`.
pub(crate) fn ccw_gap(a: f64, b: f64) -> f64 {
    normalize_angle(b - a)
}

/// Surface measure `σ_{N-1}` of the unit sphere.
pub fn sphere_measure(dim: usize) -> f64 {
    if dim == 2 {
        std::f64::consts::TAU
    } else {
        4.0 * std::f64::consts::PI
    }
}

/// Volume of the unit ball in `R^N`.
pub fn ball_volume(dim: usize) -> f64 {
    if dim == 2 {
        std::f64::consts::PI
    } else {
        4.0 * std::f64::consts::PI / 3.0
    }
}

/// Orthonormal basis `(e1, e2)` of the plane orthogonal to `n`.
pub(crate) fn plane_basis(n: &Vec3) -> (Vec3, Vec3) {
    let a = if n.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    let e1 = (a - n * n.dot(&a)).normalize();
    let e2 = n.cross(&e1);
    (e1, e2)
}

/// Area of the spherical triangle with unit vertices `a`, `b`, `c`.
pub(crate) fn spherical_triangle_area(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    let triple = a.dot(&b.cross(c)).abs();
    let denom = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
    2.0 * triple.atan2(denom)
}

/// Solves the 3x3 system with rows `rows` and right-hand side `rhs`.
pub(crate) fn solve3(rows: [&Vec3; 3], rhs: [f64; 3]) -> Option<Vec3> {
    let m = Mat3::from_rows(&[rows[0].transpose(), rows[1].transpose(), rows[2].transpose()]);
    m.lu().solve(&Vec3::new(rhs[0], rhs[1], rhs[2]))
}

/// Area-weighted sort of coplanar points around their centroid; returns the
/// polygon order and its area. Points must lie in the plane with normal `n`.
pub(crate) fn order_planar_polygon(points: &[Vec3], n: &Vec3) -> (Vec<usize>, f64) {
    if points.len() < 3 {
        return ((0..points.len()).collect(), 0.0);
    }
    let centroid = points.iter().fold(Vec3::zeros(), |acc, p| acc + p) / points.len() as f64;
    let (e1, e2) = plane_basis(n);
    let mut idx: Vec<(f64, usize)> = points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let d = p - centroid;
            (d.dot(&e2).atan2(d.dot(&e1)), i)
        })
        .collect();
    idx.sort_by(|a, b| a.0.total_cmp(&b.0));
    let order: Vec<usize> = idx.into_iter().map(|(_, i)| i).collect();
    let mut area = 0.0;
    for k in 0..order.len() {
        let p = points[order[k]] - centroid;
        let q = points[order[(k + 1) % order.len()]] - centroid;
        area += p.cross(&q).dot(n);
    }
    (order, 0.5 * area.abs())
}

/// Removes near-duplicate points (within `tol`), preserving first occurrences.
/// Returns the kept points and a map from input index to output index.
pub(crate) fn dedup_points(points: &[Vec3], tol: f64) -> (Vec<Vec3>, Vec<usize>) {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].x.total_cmp(&points[b].x));
    let mut rep = vec![usize::MAX; points.len()];
    for (k, &i) in order.iter().enumerate() {
        if rep[i] != usize::MAX {
            continue;
        }
        rep[i] = i;
        for &j in &order[k + 1..] {
            if points[j].x - points[i].x > tol {
                break;
            }
            if rep[j] == usize::MAX && (points[j] - points[i]).norm() <= tol {
                rep[j] = i;
            }
        }
    }
    let mut out = Vec::new();
    let mut new_index = vec![usize::MAX; points.len()];
    let mut map = vec![0; points.len()];
    for i in 0..points.len() {
        let r = rep[i];
        if new_index[r] == usize::MAX {
            new_index[r] = out.len();
            out.push(points[r]);
        }
        map[i] = new_index[r];
    }
    (out, map)
}
