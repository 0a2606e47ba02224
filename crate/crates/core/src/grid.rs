//! Discretizations of the unit sphere with quadrature weights.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geom::{ccw_gap, sphere_measure, spherical_triangle_area, Direction, Vec3};
use crate::hull3::convex_hull_3d;

/// Default number of angles for planar grids.
pub const DEFAULT_RES_2D: usize = 720;
/// Default icosphere subdivision level for spatial grids (642 directions).
pub const DEFAULT_RES_3D: usize = 3;

/// How a grid was built; recorded so it can be serialized and rebuilt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GridKind {
    /// `resolution` equally spaced angles starting at 0.
    Uniform { resolution: usize },
    /// Vertices of an icosahedron subdivided `level` times.
    Icosphere { level: usize },
    /// Arbitrary directions supplied by the caller.
    Custom,
}

/// A finite set of directions with positive quadrature weights.
#[derive(Clone, Debug)]
pub struct SphereGrid {
    dim: usize,
    dirs: Vec<Direction>,
    qweights: Vec<f64>,
    kind: GridKind,
    angles: Vec<f64>,
    z_order: Vec<usize>,
}

/// Builds the standard grid: `resolution` uniform angles in dimension 2, or
/// the icosphere of subdivision level `resolution` in dimension 3.
pub fn make_grid(dim: usize, resolution: usize) -> Result<Arc<SphereGrid>> {
    match dim {
        2 => {
            if resolution < 3 {
                return Err(Error::InvalidArgument(format!(
                    "planar grids need at least 3 directions, got {resolution}"
                )));
            }
            let step = std::f64::consts::TAU / resolution as f64;
            let angles: Vec<f64> = (0..resolution).map(|i| i as f64 * step).collect();
            let dirs = angles.iter().map(|&t| Direction::from_angle(t)).collect();
            let qweights = vec![step; resolution];
            Ok(Arc::new(SphereGrid::assemble(
                2,
                dirs,
                qweights,
                GridKind::Uniform { resolution },
            )))
        }
        3 => {
            if resolution > 7 {
                return Err(Error::InvalidArgument(format!(
                    "icosphere level {resolution} is too fine"
                )));
            }
            let pts = icosphere(resolution);
            let weights = voronoi_weights(&pts)?;
            let dirs = pts
                .into_iter()
                .map(|p| Direction::from_vec(3, p))
                .collect::<Result<Vec<_>>>()?;
            Ok(Arc::new(SphereGrid::assemble(
                3,
                dirs,
                weights,
                GridKind::Icosphere { level: resolution },
            )))
        }
        _ => Err(Error::InvalidArgument(format!("dimension {dim} unsupported"))),
    }
}

/// The default grid of the given dimension.
pub fn default_grid(dim: usize) -> Result<Arc<SphereGrid>> {
    make_grid(dim, if dim == 2 { DEFAULT_RES_2D } else { DEFAULT_RES_3D })
}

impl SphereGrid {
    /// Grid on caller-chosen directions. Weights are arc lengths of the
    /// angular Voronoi cells (dimension 2) or spherical Voronoi cell areas
    /// (dimension 3). The directions must positively span the space.
    pub fn from_directions(dim: usize, dirs: &[Direction]) -> Result<Arc<SphereGrid>> {
        if dirs.iter().any(|d| d.dim() != dim) {
            return Err(Error::InvalidArgument("direction dimension mismatch".into()));
        }
        match dim {
            2 => {
                if dirs.len() < 3 {
                    return Err(Error::InvalidGrid("fewer than 3 directions".into()));
                }
                let mut sorted: Vec<Direction> = dirs.to_vec();
                sorted.sort_by(|a, b| a.angle().total_cmp(&b.angle()));
                let n = sorted.len();
                let angles: Vec<f64> = sorted.iter().map(|d| d.angle()).collect();
                let mut qweights = vec![0.0; n];
                for i in 0..n {
                    let prev = angles[(i + n - 1) % n];
                    let next = angles[(i + 1) % n];
                    let g0 = ccw_gap(prev, angles[i]);
                    let g1 = ccw_gap(angles[i], next);
                    if g0 <= 0.0 || g1 <= 0.0 {
                        return Err(Error::InvalidGrid("repeated direction".into()));
                    }
                    if g1 >= std::f64::consts::PI {
                        return Err(Error::InvalidGrid("directions leave a gap of at least π".into()));
                    }
                    qweights[i] = 0.5 * (g0 + g1);
                }
                Ok(Arc::new(SphereGrid::assemble(2, sorted, qweights, GridKind::Custom)))
            }
            3 => {
                let pts: Vec<Vec3> = dirs.iter().map(|d| *d.vec()).collect();
                let weights = voronoi_weights(&pts)?;
                Ok(Arc::new(SphereGrid::assemble(
                    3,
                    dirs.to_vec(),
                    weights,
                    GridKind::Custom,
                )))
            }
            _ => Err(Error::InvalidArgument(format!("dimension {dim} unsupported"))),
        }
    }

    fn assemble(dim: usize, dirs: Vec<Direction>, qweights: Vec<f64>, kind: GridKind) -> Self {
        let angles = if dim == 2 {
            dirs.iter().map(|d| d.angle()).collect()
        } else {
            Vec::new()
        };
        let mut z_order: Vec<usize> = (0..dirs.len()).collect();
        z_order.sort_by(|&a, &b| dirs[a].vec().z.total_cmp(&dirs[b].vec().z));
        Self {
            dim,
            dirs,
            qweights,
            kind,
            angles,
            z_order,
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }

    #[inline]
    pub fn dirs(&self) -> &[Direction] {
        &self.dirs
    }

    #[inline]
    pub fn dir(&self, i: usize) -> &Vec3 {
        self.dirs[i].vec()
    }

    #[inline]
    pub fn qweights(&self) -> &[f64] {
        &self.qweights
    }

    pub fn kind(&self) -> &GridKind {
        &self.kind
    }

    /// Polar angles of a planar grid (empty in dimension 3).
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// `σ_{N-1}`.
    pub fn sphere_measure(&self) -> f64 {
        sphere_measure(self.dim)
    }

    /// Index of the grid direction within angular distance `tol` of `z`.
    pub fn find(&self, z: &Vec3, tol: f64) -> Option<usize> {
        if self.dim == 2 {
            let t = crate::geom::normalize_angle(z.y.atan2(z.x));
            let k = self.angles.partition_point(|&a| a < t);
            let n = self.len();
            for cand in [k % n, (k + n - 1) % n] {
                let d = ccw_gap(self.angles[cand], t).min(ccw_gap(t, self.angles[cand]));
                if d <= tol {
                    return Some(cand);
                }
            }
            None
        } else {
            let lo = self
                .z_order
                .partition_point(|&i| self.dirs[i].vec().z < z.z - 2.0 * tol);
            let mut best = None;
            for &i in &self.z_order[lo..] {
                let v = self.dirs[i].vec();
                if v.z > z.z + 2.0 * tol {
                    break;
                }
                let ang = (v - z).norm();
                if ang <= tol && best.map_or(true, |(_, d)| ang < d) {
                    best = Some((i, ang));
                }
            }
            best.map(|(i, _)| i)
        }
    }

    /// Index of `-dirs[i]` when the grid contains it.
    pub fn antipode(&self, i: usize) -> Option<usize> {
        self.find(&(-self.dir(i)), 1e-9)
    }

    /// Two grids are interchangeable when they carry the same directions.
    pub fn same_as(&self, other: &SphereGrid) -> bool {
        std::ptr::eq(self, other)
            || (self.dim == other.dim
                && self.len() == other.len()
                && self
                    .dirs
                    .iter()
                    .zip(&other.dirs)
                    .all(|(a, b)| (a.vec() - b.vec()).norm() <= 1e-12))
    }
}

/// Vertices of the subdivided icosahedron, projected to the sphere.
fn icosphere(level: usize) -> Vec<Vec3> {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut pts: Vec<Vec3> = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ]
    .iter()
    .map(|p| Vec3::new(p[0], p[1], p[2]).normalize())
    .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..level {
        let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, pts: &mut Vec<Vec3>| -> usize {
            let key = (a.min(b), a.max(b));
            *mid.entry(key).or_insert_with(|| {
                pts.push(((pts[a] + pts[b]) * 0.5).normalize());
                pts.len() - 1
            })
        };
        let mut next = Vec::with_capacity(faces.len() * 4);
        for f in &faces {
            let a = midpoint(f[0], f[1], &mut pts);
            let b = midpoint(f[1], f[2], &mut pts);
            let c = midpoint(f[2], f[0], &mut pts);
            next.push([f[0], a, c]);
            next.push([f[1], b, a]);
            next.push([f[2], c, b]);
            next.push([a, b, c]);
        }
        faces = next;
    }
    pts
}

/// Spherical Voronoi cell areas of unit vectors whose convex hull contains
/// the origin in its interior.
fn voronoi_weights(pts: &[Vec3]) -> Result<Vec<f64>> {
    if pts.len() < 4 {
        return Err(Error::InvalidGrid("fewer than 4 directions".into()));
    }
    let hull =
        convex_hull_3d(pts, 1e-12).map_err(|_| Error::InvalidGrid("directions do not span three dimensions".into()))?;
    let mut incident: Vec<Vec<Vec3>> = vec![Vec::new(); pts.len()];
    for (f, n) in hull.faces.iter().zip(&hull.normals) {
        let off = n.dot(&pts[f[0]]);
        if off <= 1e-12 {
            return Err(Error::InvalidGrid("directions do not positively span the space".into()));
        }
        for &v in f {
            incident[v].push(*n);
        }
    }
    let mut weights = Vec::with_capacity(pts.len());
    for (i, cs) in incident.iter().enumerate() {
        if cs.is_empty() {
            return Err(Error::InvalidGrid(format!("direction {i} is repeated")));
        }
        let u = pts[i];
        let (e1, e2) = crate::geom::plane_basis(&u);
        let mut ring: Vec<(f64, Vec3)> = cs.iter().map(|c| (c.dot(&e2).atan2(c.dot(&e1)), *c)).collect();
        ring.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut area = 0.0;
        for k in 0..ring.len() {
            let a = ring[k].1;
            let b = ring[(k + 1) % ring.len()].1;
            area += spherical_triangle_area(&u, &a, &b);
        }
        weights.push(area);
    }
    Ok(weights)
}
