//! Incremental 3D convex hull with conflict lists.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geom::Vec3;

/// Triangulated hull surface; faces are counter-clockwise seen from outside.
#[derive(Clone, Debug)]
pub struct Hull3 {
    pub faces: Vec<[usize; 3]>,
    /// Unit outward normals, one per face.
    pub normals: Vec<Vec3>,
    /// `neighbors[f][k]` is the face across edge `(v_k, v_{k+1})` of face `f`.
    pub neighbors: Vec<[usize; 3]>,
}

struct Face {
    v: [usize; 3],
    n: Vec3,
    d: f64,
    outside: Vec<usize>,
    alive: bool,
}

impl Face {
    fn new(pts: &[Vec3], v: [usize; 3]) -> Self {
        let n = (pts[v[1]] - pts[v[0]]).cross(&(pts[v[2]] - pts[v[0]]));
        let len = n.norm();
        let n = if len > 0.0 { n / len } else { n };
        let d = n.dot(&pts[v[0]]);
        Self {
            v,
            n,
            d,
            outside: Vec::new(),
            alive: true,
        }
    }

    #[inline]
    fn dist(&self, p: &Vec3) -> f64 {
        self.n.dot(p) - self.d
    }
}

/// Convex hull of `pts`. `eps_rel` scales with the point-cloud extent and is
/// the distance below which a point counts as lying on a face plane.
///
/// Fails with [`Error::DegenerateBody`] when the points do not span 3D.
pub fn convex_hull_3d(pts: &[Vec3], eps_rel: f64) -> Result<Hull3> {
    if pts.is_empty() {
        return Err(Error::DegenerateBody { affine_dim: 0 });
    }
    let scale = pts.iter().map(|p| p.amax()).fold(0.0, f64::max).max(1e-300);
    let eps = eps_rel * scale;

    let i0 = (0..pts.len()).min_by(|&a, &b| pts[a].x.total_cmp(&pts[b].x)).unwrap();
    let i1 = argmax(pts, |p| (p - pts[i0]).norm());
    if (pts[i1] - pts[i0]).norm() <= eps {
        return Err(Error::DegenerateBody { affine_dim: 0 });
    }
    let dir = (pts[i1] - pts[i0]).normalize();
    let i2 = argmax(pts, |p| {
        let w = p - pts[i0];
        (w - dir * w.dot(&dir)).norm()
    });
    let w2 = pts[i2] - pts[i0];
    if (w2 - dir * w2.dot(&dir)).norm() <= eps {
        return Err(Error::DegenerateBody { affine_dim: 1 });
    }
    let pn = dir.cross(&w2).normalize();
    let i3 = argmax(pts, |p| (p - pts[i0]).dot(&pn).abs());
    if (pts[i3] - pts[i0]).dot(&pn).abs() <= eps {
        return Err(Error::DegenerateBody { affine_dim: 2 });
    }

    let centroid = (pts[i0] + pts[i1] + pts[i2] + pts[i3]) / 4.0;
    let mut faces: Vec<Face> = Vec::new();
    for tri in [[i0, i1, i2], [i0, i1, i3], [i0, i2, i3], [i1, i2, i3]] {
        let mut f = Face::new(pts, tri);
        if f.dist(&centroid) > 0.0 {
            f = Face::new(pts, [tri[0], tri[2], tri[1]]);
        }
        faces.push(f);
    }
    let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
    for (fi, f) in faces.iter().enumerate() {
        for k in 0..3 {
            edges.insert((f.v[k], f.v[(k + 1) % 3]), fi);
        }
    }
    for (p, pt) in pts.iter().enumerate() {
        if p == i0 || p == i1 || p == i2 || p == i3 {
            continue;
        }
        if let Some(f) = faces.iter_mut().find(|f| f.dist(pt) > eps) {
            f.outside.push(p);
        }
    }

    let mut cursor = 0;
    let mut visible: Vec<usize> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut mark: Vec<u32> = vec![0; faces.len()];
    let mut stamp = 0u32;
    while cursor < faces.len() {
        if !faces[cursor].alive || faces[cursor].outside.is_empty() {
            cursor += 1;
            continue;
        }
        let eye = {
            let f = &faces[cursor];
            *f.outside
                .iter()
                .max_by(|&&a, &&b| f.dist(&pts[a]).total_cmp(&f.dist(&pts[b])))
                .unwrap()
        };
        let ep = pts[eye];
        stamp += 1;
        mark.resize(faces.len(), 0);
        visible.clear();
        stack.clear();
        stack.push(cursor);
        mark[cursor] = stamp;
        while let Some(fi) = stack.pop() {
            visible.push(fi);
            let v = faces[fi].v;
            for k in 0..3 {
                let nb = edges[&(v[(k + 1) % 3], v[k])];
                if mark[nb] != stamp && faces[nb].dist(&ep) > eps {
                    mark[nb] = stamp;
                    stack.push(nb);
                }
            }
        }
        let mut horizon: Vec<(usize, usize)> = Vec::new();
        let mut orphans: Vec<usize> = Vec::new();
        for &fi in &visible {
            let v = faces[fi].v;
            for k in 0..3 {
                let (a, b) = (v[k], v[(k + 1) % 3]);
                let nb = edges[&(b, a)];
                if mark[nb] != stamp {
                    horizon.push((a, b));
                }
            }
            let f = &mut faces[fi];
            f.alive = false;
            orphans.append(&mut f.outside);
        }
        for &fi in &visible {
            let v = faces[fi].v;
            for k in 0..3 {
                edges.remove(&(v[k], v[(k + 1) % 3]));
            }
        }
        let first_new = faces.len();
        for &(a, b) in &horizon {
            let fi = faces.len();
            faces.push(Face::new(pts, [a, b, eye]));
            edges.insert((a, b), fi);
            edges.insert((b, eye), fi);
            edges.insert((eye, a), fi);
        }
        for p in orphans {
            if p == eye {
                continue;
            }
            let pt = &pts[p];
            if let Some(f) = faces[first_new..].iter_mut().find(|f| f.dist(pt) > eps) {
                f.outside.push(p);
            }
        }
    }

    let mut index = vec![usize::MAX; faces.len()];
    let mut out = Hull3 {
        faces: Vec::new(),
        normals: Vec::new(),
        neighbors: Vec::new(),
    };
    for (fi, f) in faces.iter().enumerate() {
        if f.alive {
            index[fi] = out.faces.len();
            out.faces.push(f.v);
            out.normals.push(f.n);
        }
    }
    for f in &out.faces {
        let mut nb = [0; 3];
        for k in 0..3 {
            nb[k] = index[edges[&(f[(k + 1) % 3], f[k])]];
        }
        out.neighbors.push(nb);
    }
    Ok(out)
}

fn argmax(pts: &[Vec3], key: impl Fn(&Vec3) -> f64) -> usize {
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for (i, p) in pts.iter().enumerate() {
        let k = key(p);
        if k > best_val {
            best_val = k;
            best = i;
        }
    }
    best
}
