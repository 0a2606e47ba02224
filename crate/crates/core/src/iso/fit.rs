//! Least-squares fitting of the witnesses that the optimality conditions
//! quantify over, from solver outputs.

use crate::error::{Error, Result};
use crate::geom::Direction;
use crate::grid::SphereGrid;
use crate::measures::SphericalMeasure;
use crate::support::{convexify, SupportVector};

use super::verify::check_same_grid;
use super::FlatteningKind;

/// Free-boundary density and contact measure.
#[derive(Clone, Debug)]
pub struct ContactWitness {
    /// Surface density of the free boundary (the `ᾱ` of `ᾱ·μ(𝔷_N)`).
    pub alpha: f64,
    /// Measure supported on the contact normals.
    pub measure: SphericalMeasure,
    /// Grid indices where the body touches the obstacle.
    pub contact: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct FlatteningWitness {
    pub alpha: f64,
    pub beta: f64,
    /// Surface measure of the witness body `𝔵`.
    pub x_measure: SphericalMeasure,
    pub contact: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct HullsWitness {
    pub alphas: Vec<f64>,
    pub mus: Vec<SphericalMeasure>,
    pub nus: Vec<SphericalMeasure>,
}

pub(crate) fn areas(x: &SupportVector) -> Result<Vec<f64>> {
    Ok(x.convexified()?.areas)
}

/// Indices where the tight values of `x` and `x0` agree within `tol`
/// relative to the size of `x`.
pub(crate) fn contact_set(x: &SupportVector, x0: &SupportVector, tol: f64) -> Result<Vec<usize>> {
    check_same_grid(x, x0)?;
    let a = convexify(x)?;
    let b = convexify(x0)?;
    let scale = a.values().iter().fold(1e-300f64, |m, v| m.max(v.abs()));
    Ok((0..a.values().len())
        .filter(|&i| (a.values()[i] - b.values()[i]).abs() <= tol * scale)
        .collect())
}

/// `argmin_α Σ (a_i - α q_i)²` over the indices not excluded.
fn density(grid: &SphereGrid, a: &[f64], excluded: &[bool]) -> f64 {
    let q = grid.qweights();
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..a.len() {
        if !excluded[i] {
            num += a[i] * q[i];
            den += q[i] * q[i];
        }
    }
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

fn mask(n: usize, idx: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &i in idx {
        m[i] = true;
    }
    m
}

/// Witness for the external problem: `μ = (ᾱ q - μ(x̄))⁺` on the contact
/// normals, `ᾱ` fitted on the free ones.
pub fn fit_external_witness(xbar: &SupportVector, x0: &SupportVector, contact_tol: f64) -> Result<ContactWitness> {
    let grid = xbar.grid().clone();
    let a = areas(xbar)?;
    let contact = contact_set(xbar, x0, contact_tol)?;
    let m = mask(a.len(), &contact);
    let alpha = density(&grid, &a, &m);
    let q = grid.qweights();
    let w: Vec<f64> = (0..a.len())
        .map(|i| if m[i] { (alpha * q[i] - a[i]).max(0.0) } else { 0.0 })
        .collect();
    Ok(ContactWitness {
        alpha,
        measure: SphericalMeasure::on_grid(&grid, &w)?,
        contact,
    })
}

/// Witness for the internal problem: `μ(𝔵) = (μ(x̄) - ᾱ q)⁺` on the
/// contact normals.
pub fn fit_internal_witness(xbar: &SupportVector, x0: &SupportVector, contact_tol: f64) -> Result<ContactWitness> {
    let grid = xbar.grid().clone();
    let a = areas(xbar)?;
    let contact = contact_set(xbar, x0, contact_tol)?;
    let m = mask(a.len(), &contact);
    let alpha = density(&grid, &a, &m);
    let q = grid.qweights();
    let w: Vec<f64> = (0..a.len())
        .map(|i| if m[i] { (a[i] - alpha * q[i]).max(0.0) } else { 0.0 })
        .collect();
    Ok(ContactWitness {
        alpha,
        measure: SphericalMeasure::on_grid(&grid, &w)?,
        contact,
    })
}

/// `α`, `β` and `μ(𝔵)` of the flattening conditions: `α` from the free
/// normals, `β` from the excess at `±z̄`, `μ(𝔵)` from the contact normals.
pub fn fit_flattening_witness(
    kind: FlatteningKind,
    xbar: &SupportVector,
    x0: &SupportVector,
    zbar: &Direction,
    contact_tol: f64,
) -> Result<FlatteningWitness> {
    let grid = xbar.grid().clone();
    let a = areas(xbar)?;
    let q = grid.qweights();
    let iz = grid
        .find(zbar.vec(), 1e-9)
        .ok_or_else(|| Error::InvalidArgument("flattening direction must be a grid direction".into()))?;
    let jz = grid
        .find(&-zbar.vec(), 1e-9)
        .ok_or_else(|| Error::InvalidArgument("grid lacks the antipode of the flattening direction".into()))?;
    let contact: Vec<usize> = contact_set(xbar, x0, contact_tol)?
        .into_iter()
        .filter(|&i| i != iz && i != jz)
        .collect();
    let mut m = mask(a.len(), &contact);
    m[iz] = true;
    m[jz] = true;
    let alpha = density(&grid, &a, &m);
    let beta = (0.5 * ((a[iz] - alpha * q[iz]) + (a[jz] - alpha * q[jz]))).max(0.0);
    let w: Vec<f64> = (0..a.len())
        .map(|i| {
            if !m[i] || i == iz || i == jz {
                return 0.0;
            }
            match kind {
                FlatteningKind::Internal => (a[i] - alpha * q[i]).max(0.0),
                FlatteningKind::External => (alpha * q[i] - a[i]).max(0.0),
            }
        })
        .collect();
    Ok(FlatteningWitness {
        alpha,
        beta,
        x_measure: SphericalMeasure::on_grid(&grid, &w)?,
        contact,
    })
}

/// Witnesses for a pair separated by the hyperplane with normal `z0`:
/// a common density `ᾱ^{N-1}` fitted on both free boundaries, `μ(𝔵)`, `μ(𝔶)`
/// from the contact normals (including `±z0`), and `β̄` as the smaller of
/// the two cut atoms. Returns `(ᾱ, β̄, μ(𝔵), μ(𝔶))` with `ᾱ` a radius.
pub fn fit_current_hyperplane_witness(
    xbar: &SupportVector,
    ybar: &SupportVector,
    x0: &SupportVector,
    z0: &Direction,
    contact_tol: f64,
) -> Result<(f64, f64, SphericalMeasure, SphericalMeasure)> {
    check_same_grid(xbar, ybar)?;
    let grid = xbar.grid().clone();
    let n = grid.len();
    let iz = grid
        .find(z0.vec(), 1e-9)
        .ok_or_else(|| Error::InvalidArgument("z0 must be a grid direction".into()))?;
    let jz = grid
        .find(&-z0.vec(), 1e-9)
        .ok_or_else(|| Error::InvalidArgument("grid lacks -z0".into()))?;
    let ax = areas(xbar)?;
    let ay = areas(ybar)?;
    let mut mx = mask(n, &contact_set(xbar, x0, contact_tol)?);
    let mut my = mask(n, &contact_set(ybar, x0, contact_tol)?);
    mx[iz] = true;
    my[jz] = true;
    let q = grid.qweights();
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..n {
        if !mx[i] {
            num += ax[i] * q[i];
            den += q[i] * q[i];
        }
        if !my[i] {
            num += ay[i] * q[i];
            den += q[i] * q[i];
        }
    }
    let density = if den > 0.0 { num / den } else { 0.0 };
    let part = |a: &[f64], m: &[bool]| -> Vec<f64> {
        (0..n)
            .map(|i| if m[i] { (a[i] - density * q[i]).max(0.0) } else { 0.0 })
            .collect()
    };
    let wx = part(&ax, &mx);
    let wy = part(&ay, &my);
    let beta = wx[iz].min(wy[jz]);
    let alpha = density.max(0.0).powf(1.0 / (grid.dim() as f64 - 1.0));
    Ok((
        alpha,
        beta,
        SphericalMeasure::on_grid(&grid, &wx)?,
        SphericalMeasure::on_grid(&grid, &wy)?,
    ))
}

/// Witnesses for optimal convex hulls: `α` by nonnegative least squares of
/// `Σ_k α_k μ(x̄_k) ≈ μ(𝔷_N)` on normals where no body touches its
/// container, then per normal the excess `Σ_k α_k μ(x̄_k) - q` is assigned to
/// `μ_k` of touching bodies (up to capacity) and the rest forms `ν_k`.
pub fn fit_optimal_hulls_witness(
    xbars: &[SupportVector],
    ys: &[SupportVector],
    contact_tol: f64,
) -> Result<HullsWitness> {
    if xbars.len() != ys.len() || xbars.is_empty() {
        return Err(Error::InvalidArgument("need equally many bodies and containers".into()));
    }
    let grid = xbars[0].grid().clone();
    let n = grid.len();
    let m = xbars.len();
    let q = grid.qweights();
    let a: Vec<Vec<f64>> = xbars.iter().map(areas).collect::<Result<_>>()?;
    let touch: Vec<Vec<bool>> = xbars
        .iter()
        .zip(ys)
        .map(|(x, y)| Ok(mask(n, &contact_set(x, y, contact_tol)?)))
        .collect::<Result<_>>()?;
    let free: Vec<usize> = (0..n).filter(|&i| touch.iter().all(|t| !t[i])).collect();
    let cols: Vec<Vec<f64>> = (0..m).map(|k| free.iter().map(|&i| a[k][i]).collect()).collect();
    let rhs: Vec<f64> = free.iter().map(|&i| q[i]).collect();
    let alphas = super::vector::nnls(&cols, &rhs, None)?;
    let mut mus = vec![vec![0.0; n]; m];
    let mut nus = vec![vec![0.0; n]; m];
    for i in 0..n {
        let mut excess: f64 = (0..m).map(|k| alphas[k] * a[k][i]).sum::<f64>() - q[i];
        for k in 0..m {
            let cap = alphas[k] * a[k][i];
            let take = if touch[k][i] && excess > 0.0 {
                excess.min(cap)
            } else {
                0.0
            };
            excess -= take;
            mus[k][i] = take;
            nus[k][i] = cap - take;
        }
    }
    Ok(HullsWitness {
        alphas,
        mus: mus
            .iter()
            .map(|w| SphericalMeasure::on_grid(&grid, w))
            .collect::<Result<_>>()?,
        nus: nus
            .iter()
            .map(|w| SphericalMeasure::on_grid(&grid, w))
            .collect::<Result<_>>()?,
    })
}
