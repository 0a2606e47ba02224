//! Support vectors: convex bodies sampled on a [`SphereGrid`], and the
//! Minkowski calculus on them.

use std::sync::Arc;

use crate::convexify::{convexify_values, Convexified};
use crate::error::{Error, Result};
use crate::geom::{ccw_gap, Direction, Mat3, Vec3};
use crate::grid::SphereGrid;
use crate::polytope::Polytope;
use crate::tolerance;

/// Support-function samples `h_i = h(u_i)` on a grid.
///
/// `tight` marks values known to be the support function of the body they
/// cut out; raw grid functions (for instance differences) are not tight.
#[derive(Clone, Debug)]
pub struct SupportVector {
    grid: Arc<SphereGrid>,
    h: Vec<f64>,
    tight: bool,
}

/// Anything with a support function.
pub trait SupportFunction {
    fn support_eval(&self, z: &Direction) -> Result<f64>;
}

impl SupportVector {
    /// Raw grid function; not assumed to be a support function.
    pub fn new(grid: Arc<SphereGrid>, h: Vec<f64>) -> Result<Self> {
        if h.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} values, got {}",
                grid.len(),
                h.len()
            )));
        }
        if h.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("support values must be finite".into()));
        }
        Ok(Self { grid, h, tight: false })
    }

    pub(crate) fn tight_unchecked(grid: Arc<SphereGrid>, h: Vec<f64>) -> Self {
        Self { grid, h, tight: true }
    }

    /// Support function of the convex hull of `points`, sampled on `grid`.
    pub fn from_points(grid: Arc<SphereGrid>, points: &[Vec3]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidArgument("no points".into()));
        }
        let h = grid
            .dirs()
            .iter()
            .map(|d| points.iter().map(|p| d.dot(p)).fold(f64::NEG_INFINITY, f64::max))
            .collect();
        Ok(Self::tight_unchecked(grid, h))
    }

    pub fn from_polytope(grid: Arc<SphereGrid>, p: &Polytope) -> Result<Self> {
        if p.dim() != grid.dim() {
            return Err(Error::InvalidArgument("dimension mismatch".into()));
        }
        Self::from_points(grid, p.vertices())
    }

    /// Ball of radius `r` centered at `center`.
    pub fn ball(grid: Arc<SphereGrid>, center: &Vec3, r: f64) -> Result<Self> {
        if !(r >= 0.0) {
            return Err(Error::InvalidArgument("radius must be nonnegative".into()));
        }
        let h = grid.dirs().iter().map(|d| d.dot(center) + r).collect();
        Ok(Self::tight_unchecked(grid, h))
    }

    /// Ball of radius `r` centered at the origin.
    pub fn origin_ball(grid: Arc<SphereGrid>, r: f64) -> Result<Self> {
        Self::ball(grid, &Vec3::zeros(), r)
    }

    /// Segment `[a, b]`.
    pub fn segment(grid: Arc<SphereGrid>, a: &Vec3, b: &Vec3) -> Result<Self> {
        Self::from_points(grid, &[*a, *b])
    }

    pub fn grid(&self) -> &Arc<SphereGrid> {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn values(&self) -> &[f64] {
        &self.h
    }

    pub fn into_values(self) -> Vec<f64> {
        self.h
    }

    pub fn is_tight(&self) -> bool {
        self.tight
    }

    pub fn translate(&self, v: &Vec3) -> Self {
        let h = self.h.iter().zip(self.grid.dirs()).map(|(h, d)| h + d.dot(v)).collect();
        Self {
            grid: self.grid.clone(),
            h,
            tight: self.tight,
        }
    }

    /// Homothety with factor `s ≥ 0` about the origin.
    pub fn scale(&self, s: f64) -> Result<Self> {
        if !(s >= 0.0) {
            return Err(Error::InvalidArgument("scale factor must be nonnegative".into()));
        }
        Ok(Self {
            grid: self.grid.clone(),
            h: self.h.iter().map(|v| v * s).collect(),
            tight: self.tight,
        })
    }

    /// Volume of the body cut out by the values (0 for flat bodies).
    pub fn volume(&self) -> Result<f64> {
        Ok(convexify_values(&self.grid, &self.h)?.volume)
    }

    pub(crate) fn convexified(&self) -> Result<Convexified> {
        convexify_values(&self.grid, &self.h)
    }

    fn check_grid(&self, other: &SupportVector) -> Result<()> {
        if Arc::ptr_eq(&self.grid, &other.grid) || self.grid.same_as(&other.grid) {
            Ok(())
        } else {
            Err(Error::InvalidArgument("support vectors live on different grids".into()))
        }
    }
}

impl SupportFunction for SupportVector {
    fn support_eval(&self, z: &Direction) -> Result<f64> {
        if z.dim() != self.dim() {
            return Err(Error::InvalidArgument("direction dimension mismatch".into()));
        }
        if let Some(i) = self.grid.find(z.vec(), tolerance::SNAP) {
            if self.tight {
                return Ok(self.h[i]);
            }
        }
        if self.dim() == 2 {
            let x = if self.tight { self.clone() } else { convexify(self)? };
            let th = self.grid.angles();
            let n = th.len();
            let t = z.angle();
            let k = th.partition_point(|&a| a <= t);
            let (i, j) = ((k + n - 1) % n, k % n);
            let span = ccw_gap(th[i], th[j]);
            let s = if span > 0.0 { ccw_gap(th[i], t) / span } else { 0.0 };
            Ok((1.0 - s) * x.h[i] + s * x.h[j])
        } else {
            let c = self.convexified().map_err(|e| match e {
                Error::EmptyBody => Error::InvalidState("empty body".into()),
                other => other,
            })?;
            let best = c.vertices.iter().map(|v| z.dot(v)).fold(f64::NEG_INFINITY, f64::max);
            Ok(best - c.thickening)
        }
    }
}

impl SupportFunction for Polytope {
    fn support_eval(&self, z: &Direction) -> Result<f64> {
        if self.vertices().is_empty() {
            return Err(Error::InvalidState("empty body".into()));
        }
        Ok(self.support(z.vec()))
    }
}

/// `Σ weight_k · h_k`; tight when every input is tight.
pub fn minkowski_combine(terms: &[(f64, &SupportVector)]) -> Result<SupportVector> {
    let first = terms
        .first()
        .ok_or_else(|| Error::InvalidArgument("no terms".into()))?
        .1;
    let mut h = vec![0.0; first.h.len()];
    let mut tight = true;
    for (w, x) in terms {
        first.check_grid(x)?;
        if !(*w >= 0.0) {
            return Err(Error::InvalidArgument("weights must be nonnegative".into()));
        }
        for (acc, v) in h.iter_mut().zip(&x.h) {
            *acc += w * v;
        }
        tight &= x.tight;
    }
    Ok(SupportVector {
        grid: first.grid.clone(),
        h,
        tight,
    })
}

/// Support function of `{x : (x, u_i) ≤ f_i for all i}`.
pub fn convexify(f: &SupportVector) -> Result<SupportVector> {
    let c = f.convexified()?;
    Ok(SupportVector::tight_unchecked(f.grid.clone(), c.h))
}

/// Polytope cut out by the grid constraints.
pub fn reconstruct(x: &SupportVector) -> Result<Polytope> {
    x.convexified()?
        .body
        .map_err(|affine_dim| Error::DegenerateBody { affine_dim })
}

/// Volume of a polytope.
pub fn volume(p: &Polytope) -> f64 {
    p.volume()
}

/// Plain inclusion test on grid values.
pub fn contains(outer: &SupportVector, inner: &SupportVector) -> Result<bool> {
    outer.check_grid(inner)?;
    Ok(inner.h.iter().zip(&outer.h).all(|(i, o)| *i <= o + tolerance::SUPPORT))
}

/// Quadrature Steiner point: the least-squares translation fit
/// `(Σ w u uᵀ)⁻¹ Σ w u h`, which equals `(N/σ) Σ w u h` on symmetric grids and
/// maps a translate by `v` to the Steiner point plus `v` on any grid.
pub fn steiner_point(x: &SupportVector) -> Vec3 {
    let g = &x.grid;
    let mut m = Mat3::zeros();
    let mut rhs = Vec3::zeros();
    for ((d, w), h) in g.dirs().iter().zip(g.qweights()).zip(&x.h) {
        let u = d.vec();
        m += u * u.transpose() * *w;
        rhs += u * (w * h);
    }
    if g.dim() == 2 {
        m[(2, 2)] = 1.0;
    }
    m.lu().solve(&rhs).unwrap_or_else(Vec3::zeros)
}

/// Translate of `x` with Steiner point at the origin.
pub fn steiner_normalize(x: &SupportVector) -> SupportVector {
    x.translate(&-steiner_point(x))
}

/// `h(z) + h(-z)`.
pub fn directional_breadth(x: &SupportVector, z: &Direction) -> Result<f64> {
    Ok(x.support_eval(z)? + x.support_eval(&z.neg())?)
}

/// Maximum absolute difference of support values; the Hausdorff distance of
/// the two bodies as seen from the grid.
pub fn support_distance(a: &SupportVector, b: &SupportVector) -> Result<f64> {
    a.check_grid(b)?;
    Ok(a.h.iter().zip(&b.h).fold(0.0, |m, (x, y)| f64::max(m, (x - y).abs())))
}
