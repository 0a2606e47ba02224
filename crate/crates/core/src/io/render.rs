//! SVG (planar) and Wavefront OBJ (spatial) emitters.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geom::Vec3;
use crate::support::{convexify, reconstruct, SupportVector};

/// Decimal with `digits` significant digits, trailing zeros trimmed.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

fn num(x: f64) -> String {
    fmt_sig(x, 9)
}

/// Points where consecutive support lines of the tight planar body meet,
/// one per grid direction (repeated at corners).
pub fn boundary_points(x: &SupportVector) -> Result<Vec<Vec3>> {
    if x.dim() != 2 {
        return Err(Error::InvalidArgument("planar body expected".into()));
    }
    let t = convexify(x)?;
    let scale = t.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if !(t.volume()? > 1e-9 * scale * scale) {
        return Err(Error::DegenerateBody { affine_dim: 1 });
    }
    let th = x.grid().angles();
    let h = t.values();
    let n = th.len();
    Ok((0..n)
        .map(|i| {
            let j = (i + 1) % n;
            let (sa, ca) = th[i].sin_cos();
            let (sb, cb) = th[j].sin_cos();
            let det = ca * sb - sa * cb;
            Vec3::new((h[i] * sb - h[j] * sa) / det, (ca * h[j] - cb * h[i]) / det, 0.0)
        })
        .collect())
}

/// Closed polygon path of a planar body in a unit-scaled view box.
pub fn svg_string(x: &SupportVector) -> Result<String> {
    let pts = boundary_points(x)?;
    let r = pts.iter().fold(0.0f64, |m, p| m.max(p.norm()));
    let mut d = String::new();
    for (i, p) in pts.iter().enumerate() {
        let cmd = if i == 0 { 'M' } else { 'L' };
        // SVG's y axis points down.
        let _ = write!(d, "{cmd}{} {} ", num(p.x / r), num(-p.y / r));
    }
    d.push('Z');
    Ok(format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"-1.05 -1.05 2.1 2.1\">\n\
         <path d=\"{d}\" fill=\"none\" stroke=\"black\" stroke-width=\"0.005\"/>\n\
         </svg>\n"
    ))
}

/// Vertices and facets of a spatial body, each facet fanned from its
/// centroid (appended after the body's vertices).
pub fn obj_string(x: &SupportVector) -> Result<String> {
    if x.dim() != 3 {
        return Err(Error::InvalidArgument("OBJ output needs a spatial body".into()));
    }
    let p = reconstruct(x)?;
    let mut s = String::new();
    for v in p.vertices() {
        let _ = writeln!(s, "v {} {} {}", num(v.x), num(v.y), num(v.z));
    }
    let nv = p.vertices().len();
    for f in p.facets() {
        let c = f.vertices.iter().map(|&i| p.vertices()[i]).sum::<Vec3>() / f.vertices.len() as f64;
        let _ = writeln!(s, "v {} {} {}", num(c.x), num(c.y), num(c.z));
    }
    for (k, f) in p.facets().iter().enumerate() {
        let c = nv + k + 1;
        let m = f.vertices.len();
        for i in 0..m {
            let _ = writeln!(s, "f {c} {} {}", f.vertices[i] + 1, f.vertices[(i + 1) % m] + 1);
        }
    }
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunKind {
    /// One grid normal carrying a long edge.
    Straight,
    /// Consecutive normals with comparable edge density.
    Arc,
    /// Normals with (numerically) zero edge length.
    Corner,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryRun {
    pub kind: RunKind,
    pub start: usize,
    pub len: usize,
}

/// Splits the boundary of a planar body by the edge density `ℓ_i / q_i`:
/// zero gives corners, more than `jump` times the median positive density
/// gives straight edges, the rest arcs. Runs are cyclic and start at a kind
/// change.
pub fn boundary_runs(x: &SupportVector, jump: f64) -> Result<Vec<BoundaryRun>> {
    let pts = boundary_points(x)?;
    let n = pts.len();
    let q = x.grid().qweights();
    let len: Vec<f64> = (0..n).map(|i| (pts[i] - pts[(i + n - 1) % n]).norm()).collect();
    let scale = len.iter().fold(0.0f64, |m, v| m.max(*v));
    let mut dens: Vec<f64> = (0..n)
        .filter(|&i| len[i] > 1e-9 * scale)
        .map(|i| len[i] / q[i])
        .collect();
    dens.sort_by(f64::total_cmp);
    let median = dens[dens.len() / 2];
    let kind: Vec<RunKind> = (0..n)
        .map(|i| {
            if len[i] <= 1e-9 * scale {
                RunKind::Corner
            } else if len[i] / q[i] > jump * median {
                RunKind::Straight
            } else {
                RunKind::Arc
            }
        })
        .collect();
    let Some(first) = (0..n).find(|&i| kind[i] != kind[(i + n - 1) % n]) else {
        return Ok(vec![BoundaryRun {
            kind: kind[0],
            start: 0,
            len: n,
        }]);
    };
    let mut runs: Vec<BoundaryRun> = Vec::new();
    for k in 0..n {
        let i = (first + k) % n;
        match runs.last_mut() {
            Some(r) if r.kind == kind[i] && kind[i] != RunKind::Straight => r.len += 1,
            _ => runs.push(BoundaryRun {
                kind: kind[i],
                start: i,
                len: 1,
            }),
        }
    }
    Ok(runs)
}
