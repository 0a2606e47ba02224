//! Vertex/facet representation of convex polytopes in dimension 2 or 3.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geom::{dedup_points, order_planar_polygon, Direction, Vec3};
use crate::hull3::convex_hull_3d;
use crate::tolerance;

/// A facet: outer unit normal, offset `(x, normal) = offset` on the facet, and
/// `(N-1)`-dimensional area. `vertices` indexes the polytope's vertex list in
/// boundary order (counter-clockwise seen from outside).
#[derive(Clone, Debug)]
pub struct Facet {
    pub normal: Direction,
    pub offset: f64,
    pub area: f64,
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vec3>,
    facets: Vec<Facet>,
}

impl Polytope {
    pub(crate) fn from_parts(dim: usize, vertices: Vec<Vec3>, facets: Vec<Facet>) -> Self {
        Self { dim, vertices, facets }
    }

    /// Convex hull of a point set; `points` holds `dim` coordinates each.
    pub fn from_points(dim: usize, points: &[Vec<f64>]) -> Result<Self> {
        let mut pts = Vec::with_capacity(points.len());
        for p in points {
            let (d, v) = crate::geom::point_from_slice(p)?;
            if d != dim {
                return Err(Error::InvalidArgument("point dimension mismatch".into()));
            }
            pts.push(v);
        }
        Self::hull(dim, &pts)
    }

    /// Convex hull of points stored as `Vec3` (third component ignored in 2D).
    pub fn hull(dim: usize, pts: &[Vec3]) -> Result<Self> {
        match dim {
            2 => hull_2d(pts),
            3 => hull_3d(pts),
            _ => Err(Error::InvalidArgument(format!("dimension {dim} unsupported"))),
        }
    }

    /// Axis-parallel box `[lo, hi]`.
    pub fn aabb(lo: &[f64], hi: &[f64]) -> Result<Self> {
        let dim = lo.len();
        if hi.len() != dim {
            return Err(Error::InvalidArgument("corner dimension mismatch".into()));
        }
        let mut pts = Vec::new();
        for mask in 0..(1usize << dim) {
            let p: Vec<f64> = (0..dim)
                .map(|k| if mask >> k & 1 == 1 { hi[k] } else { lo[k] })
                .collect();
            pts.push(p);
        }
        Self::from_points(dim, &pts)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// `V = (1/N) Σ offset_f · area_f`.
    pub fn volume(&self) -> f64 {
        self.facets.iter().map(|f| f.offset * f.area).sum::<f64>() / self.dim as f64
    }

    pub fn surface_area(&self) -> f64 {
        self.facets.iter().map(|f| f.area).sum()
    }

    /// Maximum of `(v, z)` over vertices.
    pub fn support(&self, z: &Vec3) -> f64 {
        self.vertices.iter().map(|v| v.dot(z)).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn centroid_of_vertices(&self) -> Vec3 {
        self.vertices.iter().fold(Vec3::zeros(), |a, v| a + v) / self.vertices.len() as f64
    }

    pub fn translate(&self, v: &Vec3) -> Self {
        let mut v = *v;
        if self.dim == 2 {
            v.z = 0.0;
        }
        Self {
            dim: self.dim,
            vertices: self.vertices.iter().map(|p| p + v).collect(),
            facets: self
                .facets
                .iter()
                .map(|f| Facet {
                    normal: f.normal,
                    offset: f.offset + f.normal.dot(&v),
                    area: f.area,
                    vertices: f.vertices.clone(),
                })
                .collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Result<Self> {
        if !(s > 0.0) {
            return Err(Error::InvalidArgument("scale factor must be positive".into()));
        }
        let p = (self.dim - 1) as i32;
        Ok(Self {
            dim: self.dim,
            vertices: self.vertices.iter().map(|v| v * s).collect(),
            facets: self
                .facets
                .iter()
                .map(|f| Facet {
                    normal: f.normal,
                    offset: f.offset * s,
                    area: f.area * s.powi(p),
                    vertices: f.vertices.clone(),
                })
                .collect(),
        })
    }

    /// `‖Σ area_f normal_f‖ / Σ area_f`.
    pub fn closure_residual(&self) -> f64 {
        let s = self
            .facets
            .iter()
            .fold(Vec3::zeros(), |a, f| a + f.normal.vec() * f.area);
        s.norm() / self.surface_area()
    }

    /// Checks the vertex-in-halfspace, positive-area and closure invariants.
    pub fn check_invariants(&self) -> Result<()> {
        let scale = self.vertices.iter().map(|v| v.amax()).fold(1.0, f64::max);
        for f in &self.facets {
            if !(f.area > 0.0) {
                return Err(Error::InvalidState("facet with nonpositive area".into()));
            }
            for v in &self.vertices {
                if f.normal.dot(v) > f.offset + tolerance::SUPPORT * scale {
                    return Err(Error::InvalidState("vertex outside a facet halfspace".into()));
                }
            }
        }
        if self.closure_residual() > tolerance::CLOSURE {
            return Err(Error::InvalidState(format!(
                "closure residual {:.3e}",
                self.closure_residual()
            )));
        }
        Ok(())
    }
}

fn cross2(o: &Vec3, a: &Vec3, b: &Vec3) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

fn hull_2d(pts: &[Vec3]) -> Result<Polytope> {
    let mut p: Vec<Vec3> = pts.iter().map(|v| Vec3::new(v.x, v.y, 0.0)).collect();
    if p.is_empty() {
        return Err(Error::DegenerateBody { affine_dim: 0 });
    }
    p.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    let scale = p.iter().map(|v| v.amax()).fold(1e-300, f64::max);
    let eps = 1e-13 * scale * scale;
    let mut hull: Vec<Vec3> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Vec3>> = if pass == 0 {
            Box::new(p.iter())
        } else {
            Box::new(p.iter().rev())
        };
        for q in iter {
            while hull.len() >= start + 2 && cross2(&hull[hull.len() - 2], &hull[hull.len() - 1], q) <= eps {
                hull.pop();
            }
            hull.push(*q);
        }
        hull.pop();
    }
    let spread = p.iter().map(|q| (q - p[0]).norm()).fold(0.0, f64::max);
    if hull.len() < 3 {
        let affine_dim = if spread <= 1e-12 * scale { 0 } else { 1 };
        return Err(Error::DegenerateBody { affine_dim });
    }
    let mut area2 = 0.0;
    for i in 0..hull.len() {
        area2 += cross2(&Vec3::zeros(), &hull[i], &hull[(i + 1) % hull.len()]);
    }
    if area2 <= 1e-12 * spread * spread {
        return Err(Error::DegenerateBody { affine_dim: 1 });
    }
    Ok(polygon_from_ccw(hull))
}

/// Polytope from a counter-clockwise polygon without repeated vertices.
pub(crate) fn polygon_from_ccw(verts: Vec<Vec3>) -> Polytope {
    let n = verts.len();
    let mut facets = Vec::with_capacity(n);
    for i in 0..n {
        let a = verts[i];
        let b = verts[(i + 1) % n];
        let e = b - a;
        let len = e.norm();
        if len <= 0.0 {
            continue;
        }
        let normal = Direction::from_vec(2, Vec3::new(e.y, -e.x, 0.0)).expect("nonzero edge");
        facets.push(Facet {
            normal,
            offset: normal.dot(&a),
            area: len,
            vertices: vec![i, (i + 1) % n],
        });
    }
    Polytope::from_parts(2, verts, facets)
}

fn hull_3d(pts: &[Vec3]) -> Result<Polytope> {
    let h = convex_hull_3d(pts, 1e-12)?;
    let nf = h.faces.len();
    // Merge adjacent coplanar triangles with union-find.
    let mut parent: Vec<usize> = (0..nf).collect();
    fn root(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for f in 0..nf {
        for &g in &h.neighbors[f] {
            if h.normals[f].dot(&h.normals[g]) > 1.0 - 1e-12 {
                let (a, b) = (root(&mut parent, f), root(&mut parent, g));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for f in 0..nf {
        let r = root(&mut parent, f);
        groups.entry(r).or_default().push(f);
    }
    let mut used: Vec<usize> = h.faces.iter().flatten().copied().collect();
    used.sort_unstable();
    used.dedup();
    let vertices: Vec<Vec3> = used.iter().map(|&i| pts[i]).collect();
    let local: HashMap<usize, usize> = used.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let mut keys: Vec<usize> = groups.keys().copied().collect();
    keys.sort_unstable();
    let mut facets = Vec::new();
    for key in keys {
        let tris = &groups[&key];
        let n = tris.iter().fold(Vec3::zeros(), |a, &t| a + h.normals[t]).normalize();
        let mut vs: Vec<usize> = tris.iter().flat_map(|&t| h.faces[t]).map(|i| local[&i]).collect();
        vs.sort_unstable();
        vs.dedup();
        let poly: Vec<Vec3> = vs.iter().map(|&i| vertices[i]).collect();
        let (order, area) = order_planar_polygon(&poly, &n);
        if area <= 0.0 {
            continue;
        }
        let offset = poly.iter().map(|p| n.dot(p)).sum::<f64>() / poly.len() as f64;
        facets.push(Facet {
            normal: Direction::from_vec(3, n)?,
            offset,
            area,
            vertices: order.into_iter().map(|k| vs[k]).collect(),
        });
    }
    Ok(Polytope::from_parts(3, vertices, facets))
}

/// Polytope from facet planes and polygon vertex lists computed elsewhere
/// (halfspace intersection). Each entry is `(normal, offset, polygon points)`.
pub(crate) fn polytope_from_facet_polygons(
    dim: usize,
    faces: Vec<(Direction, f64, Vec<Vec3>)>,
    merge_tol: f64,
) -> (Polytope, Vec<Option<usize>>) {
    let all: Vec<Vec3> = faces.iter().flat_map(|f| f.2.iter().copied()).collect();
    let (vertices, map) = dedup_points(&all, merge_tol);
    let mut facets = Vec::new();
    let mut origin = Vec::with_capacity(faces.len());
    let mut cursor = 0;
    for (normal, offset, poly) in faces {
        origin.push(None);
        let ids: Vec<usize> = (cursor..cursor + poly.len()).map(|k| map[k]).collect();
        cursor += poly.len();
        let mut uniq = ids.clone();
        uniq.sort_unstable();
        uniq.dedup();
        if dim == 2 {
            if uniq.len() < 2 {
                continue;
            }
            let a = vertices[ids[0]];
            let b = vertices[*ids.last().unwrap()];
            let area = (b - a).norm();
            if area <= 0.0 {
                continue;
            }
            *origin.last_mut().unwrap() = Some(facets.len());
            facets.push(Facet {
                normal,
                offset,
                area,
                vertices: vec![ids[0], *ids.last().unwrap()],
            });
        } else {
            if uniq.len() < 3 {
                continue;
            }
            let pts: Vec<Vec3> = uniq.iter().map(|&i| vertices[i]).collect();
            let (order, area) = order_planar_polygon(&pts, normal.vec());
            if area <= 0.0 {
                continue;
            }
            *origin.last_mut().unwrap() = Some(facets.len());
            facets.push(Facet {
                normal,
                offset,
                area,
                vertices: order.into_iter().map(|k| uniq[k]).collect(),
            });
        }
    }
    (Polytope::from_parts(dim, vertices, facets), origin)
}
