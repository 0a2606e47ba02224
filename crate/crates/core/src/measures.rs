//! Atomic measures on the sphere: surface-area measures, Alexandrov checks,
//! the pairing with support functions, mixed volumes and Blaschke sums.

use std::sync::Arc;

use crate::convexify::convexify_values;
use crate::error::{Error, Result};
use crate::geom::{ccw_gap, sphere_measure, Direction, Vec3};
use crate::grid::SphereGrid;
use crate::lp;
use crate::minkowski_solver::{solve_minkowski_2d, solve_minkowski_3d, SolveOptions};
use crate::polytope::Polytope;
use crate::support::{reconstruct, steiner_normalize, SupportVector};
use crate::tolerance;

/// One atom `w·δ_u`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Atom {
    pub dir: Direction,
    pub w: f64,
}

/// Finite positive combination of point masses on `S^{N-1}`.
///
/// Atoms closer than [`tolerance::SNAP`] are merged by adding weights; zero
/// weights are dropped.
#[derive(Clone, Debug, PartialEq)]
pub struct SphericalMeasure {
    dim: usize,
    atoms: Vec<Atom>,
}

impl SphericalMeasure {
    pub fn new(dim: usize, atoms: impl IntoIterator<Item = (Direction, f64)>) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidArgument(format!("dimension {dim} unsupported")));
        }
        let mut out: Vec<Atom> = Vec::new();
        let mut raw = Vec::new();
        for (dir, w) in atoms {
            if dir.dim() != dim {
                return Err(Error::InvalidArgument("atom dimension mismatch".into()));
            }
            if !(w >= 0.0) || !w.is_finite() {
                return Err(Error::InvalidArgument(format!("atom weight {w} is not positive")));
            }
            raw.push(Atom { dir, w });
        }
        let pts: Vec<Vec3> = raw.iter().map(|a| *a.dir.vec()).collect();
        let (_, map) = crate::geom::dedup_points(&pts, tolerance::SNAP);
        let mut slot: Vec<Option<usize>> = vec![None; raw.len()];
        for (k, a) in raw.iter().enumerate() {
            match slot[map[k]] {
                Some(j) => out[j].w += a.w,
                None => {
                    slot[map[k]] = Some(out.len());
                    out.push(*a);
                }
            }
        }
        out.retain(|a| a.w > 0.0);
        Ok(Self { dim, atoms: out })
    }

    pub fn empty(dim: usize) -> Self {
        Self { dim, atoms: Vec::new() }
    }

    /// Measure with weight `w[i]` at grid direction `i` (zero entries skipped).
    pub fn on_grid(grid: &SphereGrid, w: &[f64]) -> Result<Self> {
        if w.len() != grid.len() {
            return Err(Error::InvalidArgument("weight count does not match grid".into()));
        }
        Self::new(grid.dim(), grid.dirs().iter().copied().zip(w.iter().copied()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.w).sum()
    }

    /// `Σ w_i u_i`.
    pub fn resultant(&self) -> Vec3 {
        self.atoms.iter().fold(Vec3::zeros(), |acc, a| acc + a.dir.vec() * a.w)
    }

    pub fn scale(&self, t: f64) -> Result<Self> {
        if !(t >= 0.0) {
            return Err(Error::InvalidArgument("scale must be nonnegative".into()));
        }
        Self::new(self.dim, self.atoms.iter().map(|a| (a.dir, a.w * t)))
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &SphericalMeasure, b: f64) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::InvalidArgument("dimension mismatch".into()));
        }
        if !(a >= 0.0 && b >= 0.0) {
            return Err(Error::InvalidArgument("weights must be nonnegative".into()));
        }
        Self::new(
            self.dim,
            self.atoms
                .iter()
                .map(|x| (x.dir, a * x.w))
                .chain(other.atoms.iter().map(|x| (x.dir, b * x.w))),
        )
    }

    pub fn add(&self, other: &SphericalMeasure) -> Result<Self> {
        self.combine(1.0, other, 1.0)
    }

    /// Weight of the atom at `z` (0 if none within `tol`).
    pub fn weight_at(&self, z: &Vec3, tol: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|a| (a.dir.vec() - z).norm() <= tol)
            .map(|a| a.w)
            .sum()
    }

    /// Weights per grid direction; atoms off the grid are an error.
    pub fn to_grid(&self, grid: &SphereGrid) -> Result<Vec<f64>> {
        let mut w = vec![0.0; grid.len()];
        for a in &self.atoms {
            let i = grid
                .find(a.dir.vec(), tolerance::SNAP)
                .ok_or_else(|| Error::InvalidArgument(format!("atom {:?} is not on the grid", a.dir.coords())))?;
            w[i] += a.w;
        }
        Ok(w)
    }

    /// Largest atom-by-atom weight mismatch relative to the larger weight;
    /// an atom present on one side only counts as 1.
    pub fn max_relative_difference(&self, other: &SphericalMeasure) -> f64 {
        let mut worst: f64 = 0.0;
        for a in &self.atoms {
            let b = other.weight_at(a.dir.vec(), tolerance::SNAP);
            worst = worst.max((a.w - b).abs() / a.w.max(b));
        }
        for b in &other.atoms {
            if self.weight_at(b.dir.vec(), tolerance::SNAP) == 0.0 {
                worst = worst.max(1.0);
            }
        }
        worst
    }

    /// Atom-by-atom equality within relative tolerance `rel`.
    pub fn approx_eq(&self, other: &SphericalMeasure, rel: f64) -> bool {
        self.dim == other.dim && self.max_relative_difference(other) <= rel
    }
}

/// Outcome of [`validate_alexandrov`].
#[derive(Clone, Debug, PartialEq)]
pub struct AlexandrovReport {
    pub closure_residual: f64,
    pub spanning: bool,
    /// Discrete measures always have atoms; kept for transparency.
    pub has_atoms: bool,
    pub verdict: bool,
}

/// Surface-area measure of a polytope: one atom per facet.
pub fn surface_area_measure(p: &Polytope) -> Result<SphericalMeasure> {
    if p.facets().is_empty() || !(p.volume() > 0.0) {
        return Err(Error::DegenerateBody {
            affine_dim: p.dim().saturating_sub(1),
        });
    }
    SphericalMeasure::new(p.dim(), p.facets().iter().map(|f| (f.normal, f.area)))
}

/// Surface-area measure of the body cut out by a support vector.
pub fn surface_area_measure_of(x: &SupportVector) -> Result<SphericalMeasure> {
    let c = convexify_values(x.grid(), x.values())?;
    if let Err(affine_dim) = c.body {
        return Err(Error::DegenerateBody { affine_dim });
    }
    SphericalMeasure::on_grid(x.grid(), &c.areas)
}

/// Closure residual and spanning test (positive combinations of the atoms
/// reach every `±e_k`).
pub fn validate_alexandrov(m: &SphericalMeasure, tol: f64) -> Result<AlexandrovReport> {
    if m.is_empty() {
        return Err(Error::InvalidArgument("empty measure".into()));
    }
    let closure_residual = m.resultant().norm() / m.total_mass();
    let spanning = positively_spans(m.dim(), m.atoms().iter().map(|a| *a.dir.vec()));
    Ok(AlexandrovReport {
        closure_residual,
        spanning,
        has_atoms: true,
        verdict: closure_residual <= tol && spanning,
    })
}

pub(crate) fn positively_spans(dim: usize, dirs: impl Iterator<Item = Vec3>) -> bool {
    let dirs: Vec<Vec3> = dirs.collect();
    if dirs.len() <= dim {
        return false;
    }
    let a: Vec<Vec<f64>> = (0..dim).map(|k| dirs.iter().map(|u| u[k]).collect()).collect();
    for k in 0..dim {
        for s in [1.0, -1.0] {
            let mut b = vec![0.0; dim];
            b[k] = s;
            let sol = lp::feasible(&a, &b, &lp::LpOptions::default());
            if sol.status != lp::LpStatus::Optimal {
                return false;
            }
        }
    }
    true
}

/// `(1/N) Σ_i f(u_i) w_i` for grid values `f`.
pub fn pairing_values(grid: &SphereGrid, f: &[f64], m: &SphericalMeasure) -> Result<f64> {
    if grid.dim() != m.dim() {
        return Err(Error::InvalidArgument("dimension mismatch".into()));
    }
    let mut s = 0.0;
    for a in m.atoms() {
        let v = match grid.find(a.dir.vec(), tolerance::SNAP) {
            Some(i) => f[i],
            None if grid.dim() == 2 => interpolate_angle(grid, f, a.dir.angle()),
            None => {
                return Err(Error::InvalidArgument(format!(
                    "atom {:?} is not on the grid",
                    a.dir.coords()
                )))
            }
        };
        s += v * a.w;
    }
    Ok(s / m.dim() as f64)
}

fn interpolate_angle(grid: &SphereGrid, f: &[f64], t: f64) -> f64 {
    let th = grid.angles();
    let n = th.len();
    let k = th.partition_point(|&a| a <= t);
    let (i, j) = ((k + n - 1) % n, k % n);
    let span = ccw_gap(th[i], th[j]);
    let s = ccw_gap(th[i], t) / span;
    (1.0 - s) * f[i] + s * f[j]
}

/// `⟨f, m⟩ = (1/N) ∫ f dm`.
pub fn pairing(f: &SupportVector, m: &SphericalMeasure) -> Result<f64> {
    pairing_values(f.grid(), f.values(), m)
}

/// A body given either by support values, explicitly, or by its measure.
#[derive(Clone, Copy, Debug)]
pub enum BodyOrMeasure<'a> {
    Body(&'a SupportVector),
    Polytope(&'a Polytope),
    Measure(&'a SphericalMeasure),
}

impl<'a> From<&'a SupportVector> for BodyOrMeasure<'a> {
    fn from(x: &'a SupportVector) -> Self {
        Self::Body(x)
    }
}

impl<'a> From<&'a Polytope> for BodyOrMeasure<'a> {
    fn from(x: &'a Polytope) -> Self {
        Self::Polytope(x)
    }
}

impl<'a> From<&'a SphericalMeasure> for BodyOrMeasure<'a> {
    fn from(x: &'a SphericalMeasure) -> Self {
        Self::Measure(x)
    }
}

impl BodyOrMeasure<'_> {
    pub fn measure(&self) -> Result<SphericalMeasure> {
        match self {
            Self::Body(x) => surface_area_measure_of(x),
            Self::Polytope(p) => surface_area_measure(p),
            Self::Measure(m) => Ok((*m).clone()),
        }
    }

    fn grid(&self) -> Option<&Arc<SphereGrid>> {
        match self {
            Self::Body(x) => Some(x.grid()),
            _ => None,
        }
    }
}

/// `V₁(y, x) = ⟨x, μ(y)⟩`.
pub fn mixed_volume_v1<'a>(y: impl Into<BodyOrMeasure<'a>>, x: &SupportVector) -> Result<f64> {
    pairing(x, &y.into().measure()?)
}

/// Surface measure of the ball of radius `r` on `grid`: `r^{N-1} · qweights`.
pub fn ball_measure(grid: &SphereGrid, r: f64) -> Result<SphericalMeasure> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument("radius must be positive".into()));
    }
    let s = r.powi(grid.dim() as i32 - 1);
    let w: Vec<f64> = grid.qweights().iter().map(|q| q * s).collect();
    SphericalMeasure::on_grid(grid, &w)
}

/// Mean width, normalized so that a ball of radius `r` has breadth `2r`:
/// `(2/σ) Σ_i q_i h_i`.
pub fn integral_breadth(x: &SupportVector) -> f64 {
    breadth_values(x.grid(), x.values())
}

pub(crate) fn breadth_values(grid: &SphereGrid, h: &[f64]) -> f64 {
    let s: f64 = grid.qweights().iter().zip(h).map(|(q, v)| q * v).sum();
    2.0 * s / sphere_measure(grid.dim())
}

/// Body whose surface-area measure is `a·μ(x) + b·μ(y)`, Steiner-normalized.
///
/// The result lives on the grid of the first support-vector argument, or on
/// the grid of the combined atom directions when both arguments are
/// measures or polytopes.
pub fn blaschke_sum<'a, 'b>(
    x: impl Into<BodyOrMeasure<'a>>,
    y: impl Into<BodyOrMeasure<'b>>,
    a: f64,
    b: f64,
) -> Result<SupportVector> {
    blaschke_sum_with(x, y, a, b, &SolveOptions::default())
}

pub fn blaschke_sum_with<'a, 'b>(
    x: impl Into<BodyOrMeasure<'a>>,
    y: impl Into<BodyOrMeasure<'b>>,
    a: f64,
    b: f64,
    opts: &SolveOptions,
) -> Result<SupportVector> {
    let (x, y) = (x.into(), y.into());
    let m = x.measure()?.combine(a, &y.measure()?, b)?;
    let target = x.grid().or(y.grid()).cloned();
    body_from_measure(&m, target, opts)
}

/// Solves the Minkowski problem for `m` and returns the Steiner-normalized
/// body on `target` (or on the atom grid).
pub(crate) fn body_from_measure(
    m: &SphericalMeasure,
    target: Option<Arc<SphereGrid>>,
    opts: &SolveOptions,
) -> Result<SupportVector> {
    let rep = validate_alexandrov(m, tolerance::CLOSURE)?;
    if !rep.verdict {
        return Err(Error::AlexandrovViolation(format!(
            "closure residual {:.3e}, spanning {}",
            rep.closure_residual, rep.spanning
        )));
    }
    let poly = if m.dim() == 2 {
        solve_minkowski_2d(m)?
    } else {
        let out = solve_minkowski_3d(m, opts)?;
        if !out.converged {
            return Err(Error::NonConvergence { residual: out.residual });
        }
        match &target {
            None => return Ok(out.body),
            Some(_) => reconstruct(&out.body)?,
        }
    };
    let grid = match target {
        Some(g) => g,
        None => {
            let dirs: Vec<Direction> = m.atoms().iter().map(|a| a.dir).collect();
            SphereGrid::from_directions(m.dim(), &dirs)?
        }
    };
    Ok(steiner_normalize(&SupportVector::from_polytope(grid, &poly)?))
}

/// `V(f) = ⟨f, μ(co f)⟩` for an arbitrary grid function.
pub fn extended_volume(f: &SupportVector) -> Result<f64> {
    let c = convexify_values(f.grid(), f.values())?;
    let s: f64 = c.areas.iter().zip(f.values()).map(|(a, v)| a * v).sum();
    Ok(s / f.dim() as f64)
}
