//! Planar support-value programs.
//!
//! On a planar grid the edge lengths of the polygon cut out by `h` are
//! `ℓ = A h` for a cyclic tridiagonal `A`, and its area is `Q(h) = ½ hᵀA h`.
//! `Program::maximize` solves
//!
//! ```text
//! maximize Q(h) - gᵀh   subject to   cᵀh = k,  lo ≤ h ≤ hi
//! ```
//!
//! by accelerated projected gradient followed by an exact active-set polish.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::geom::ccw_gap;
use crate::grid::SphereGrid;

/// The area form of a planar grid.
#[derive(Clone, Debug)]
pub(crate) struct AreaForm {
    diag: Vec<f64>,
    /// `off[i]` couples `i` and `i + 1` (cyclically).
    off: Vec<f64>,
}

impl AreaForm {
    pub fn new(grid: &SphereGrid) -> Result<Self> {
        if grid.dim() != 2 {
            return Err(Error::InvalidArgument("area form needs a planar grid".into()));
        }
        let th = grid.angles();
        let n = th.len();
        let gaps: Vec<f64> = (0..n).map(|i| ccw_gap(th[i], th[(i + 1) % n])).collect();
        let off: Vec<f64> = gaps.iter().map(|g| 1.0 / g.sin()).collect();
        let diag = (0..n)
            .map(|i| {
                let a = gaps[(i + n - 1) % n];
                let b = gaps[i];
                -(a.cos() / a.sin() + b.cos() / b.sin())
            })
            .collect();
        Ok(Self { diag, off })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    /// Edge lengths `A h`.
    pub fn apply(&self, h: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let p = (i + n - 1) % n;
                let q = (i + 1) % n;
                self.off[p] * h[p] + self.diag[i] * h[i] + self.off[i] * h[q]
            })
            .collect()
    }

    pub fn quad(&self, h: &[f64]) -> f64 {
        0.5 * dot(h, &self.apply(h))
    }

    /// Gershgorin bound on the spectrum of `W⁻¹A`.
    fn lipschitz(&self, w: &[f64]) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| (self.diag[i].abs() + self.off[i] + self.off[(i + n - 1) % n]) / w[i])
            .fold(0.0, f64::max)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Status {
    Free,
    Lower,
    Upper,
}

pub(crate) struct Program<'a> {
    pub form: &'a AreaForm,
    pub c: &'a [f64],
    pub k: f64,
    pub g: &'a [f64],
    pub lo: &'a [f64],
    pub hi: &'a [f64],
    /// Metric weights (quadrature weights of the grid).
    pub w: &'a [f64],
    pub angles: &'a [f64],
}

#[derive(Clone, Debug)]
pub(crate) struct ProgramSolution {
    pub h: Vec<f64>,
    /// Multiplier of `cᵀh = k`: `A h = κ c + g` on free indices.
    pub kappa: f64,
    #[cfg_attr(not(test), allow(dead_code))]
    pub status: Vec<Status>,
    pub kkt_residual: f64,
    pub iterations: usize,
}

/// Solution pieces of the free-index equations.
struct RunSplit {
    u: Vec<f64>,
    v: Vec<f64>,
    null: Option<NullMode>,
}

/// Null direction of a singular run and the residual `fu + κ fv` of the
/// equation dropped to solve it.
struct NullMode {
    nu: Vec<f64>,
    fu: f64,
    fv: f64,
}

impl Program<'_> {
    fn objective(&self, h: &[f64]) -> f64 {
        self.form.quad(h) - dot(self.g, h)
    }

    fn gradient(&self, h: &[f64]) -> Vec<f64> {
        let mut d = self.form.apply(h);
        for (x, g) in d.iter_mut().zip(self.g) {
            *x -= g;
        }
        d
    }

    fn project(&self, y: &[f64]) -> Result<Vec<f64>> {
        project(self.c, self.w, self.k, self.lo, self.hi, y)
    }

    /// Accelerated projected gradient ascent with gradient restarts.
    fn fista(&self, init: &[f64], iters: usize) -> Result<(Vec<f64>, usize)> {
        let l = self.form.lipschitz(self.w);
        let mut x = self.project(init)?;
        let mut y = x.clone();
        let mut t = 1.0f64;
        let scale = x.iter().fold(1e-300f64, |m, v| m.max(v.abs()));
        for it in 0..iters {
            let grad = self.gradient(&y);
            let step: Vec<f64> = (0..y.len()).map(|i| y[i] + grad[i] / (l * self.w[i])).collect();
            let xn = self.project(&step)?;
            let moved = (0..x.len()).fold(0.0f64, |m, i| m.max((xn[i] - x[i]).abs()));
            let restart = (0..x.len()).map(|i| grad[i] * (xn[i] - x[i])).sum::<f64>() < 0.0;
            let tn = if restart {
                1.0
            } else {
                0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt())
            };
            let mom = if restart { 0.0 } else { (t - 1.0) / tn };
            y = (0..x.len()).map(|i| xn[i] + mom * (xn[i] - x[i])).collect();
            x = xn;
            t = tn;
            if moved <= 1e-13 * scale {
                return Ok((x, it + 1));
            }
        }
        Ok((x, iters))
    }

    fn status_of(&self, h: &[f64]) -> Vec<Status> {
        status_of(h, self.lo, self.hi, 1e-9)
    }

    /// Exact stationary point for a fixed active set.
    fn solve_active(&self, status: &[Status], hint: &[f64]) -> Option<(Vec<f64>, f64)> {
        let n = status.len();
        let mut fixed: Vec<bool> = status.iter().map(|s| *s != Status::Free).collect();
        let mut h: Vec<f64> = (0..n)
            .map(|i| match status[i] {
                Status::Lower => self.lo[i],
                Status::Upper => self.hi[i],
                Status::Free => hint[i],
            })
            .collect();
        // Translations leave the equations invariant; unless the fixed
        // indices already pin them, fix extra indices at the hint values
        // (their equations are implied by the others).
        let pinned: Vec<usize> = (0..n).filter(|&i| fixed[i]).collect();
        let mut pins: Vec<usize> = Vec::new();
        match pinned.len() {
            0 => {
                pins.push(0);
                pins.push(n / 4);
            }
            _ => {
                let a = pinned[0];
                let span = pinned.iter().any(|&b| {
                    let d = ccw_gap(self.angle(a), self.angle(b));
                    (d - std::f64::consts::PI).abs() > 1e-9 && d > 1e-9
                });
                if !span {
                    pins.push((a + n / 4) % n);
                }
            }
        }
        for &p in &pins {
            fixed[p] = true;
        }
        let split = self
            .solve_runs(&fixed, &h)
            .or_else(|| self.solve_dense(&fixed, &h).map(|(u, v)| RunSplit { u, v, null: None }))?;
        let (u, v) = (&split.u, &split.v);
        let cu = dot(self.c, u);
        let cv = dot(self.c, v);
        let (kappa, s) = match &split.null {
            None => {
                if cv.abs() < 1e-300 {
                    return None;
                }
                ((self.k - cu) / cv, 0.0)
            }
            Some(m) => {
                let cn = dot(self.c, &m.nu);
                if m.fv.abs() < 1e-300 || cn.abs() < 1e-300 {
                    return None;
                }
                let kappa = -m.fu / m.fv;
                (kappa, (self.k - cu - kappa * cv) / cn)
            }
        };
        for i in 0..n {
            if !fixed[i] || pins.contains(&i) {
                h[i] = u[i] + kappa * v[i] + split.null.as_ref().map_or(0.0, |m| s * m.nu[i]);
            }
        }
        Some((h, kappa))
    }

    fn angle(&self, i: usize) -> f64 {
        self.angles[i]
    }

    /// Splits `h = u + κ v (+ s ν)` on free runs by banded solves; fixed
    /// indices go into `u` with `v = 0`.
    ///
    /// A run between antipodal fixed normals is singular: shifting that side
    /// of the polygon along the normals' common edge direction, `ν`, leaves
    /// its equations unchanged. Such a run is solved with its middle value
    /// pinned at zero; the dropped middle equation then fixes `κ` and the
    /// breadth constraint fixes `s`. At most one such run is handled.
    fn solve_runs(&self, fixed: &[bool], h: &[f64]) -> Option<RunSplit> {
        let n = fixed.len();
        let mut u = vec![0.0; n];
        let mut v = vec![0.0; n];
        for i in 0..n {
            if fixed[i] {
                u[i] = h[i];
            }
        }
        let mut null: Option<NullMode> = None;
        let start = (0..n).find(|&i| fixed[i])?;
        let mut i = start;
        loop {
            // Run of free indices after the fixed index `i`.
            let mut run = Vec::new();
            let mut j = (i + 1) % n;
            while !fixed[j] {
                run.push(j);
                j = (j + 1) % n;
            }
            if !run.is_empty() {
                let span = ccw_gap(self.angle(i), self.angle(j));
                if (span - std::f64::consts::PI).abs() > 1e-9 {
                    self.solve_segment(&run, (i, h[i]), (j, h[j]), &mut u, &mut v)?;
                } else {
                    if null.is_some() {
                        return None;
                    }
                    let mt = run.len() / 2;
                    let mid = run[mt];
                    self.solve_segment(&run[..mt], (i, h[i]), (mid, 0.0), &mut u, &mut v)?;
                    self.solve_segment(&run[mt + 1..], (mid, 0.0), (j, h[j]), &mut u, &mut v)?;
                    let (p, q) = ((mid + n - 1) % n, (mid + 1) % n);
                    let f = self.form;
                    let mut nu = vec![0.0; n];
                    for &t in &run {
                        nu[t] = (self.angle(t) - self.angle(i)).sin();
                    }
                    null = Some(NullMode {
                        nu,
                        fu: f.off[p] * u[p] + f.off[mid] * u[q] - self.g[mid],
                        fv: f.off[p] * v[p] + f.off[mid] * v[q] - self.c[mid],
                    });
                }
            }
            i = j;
            if i == start {
                break;
            }
        }
        Some(RunSplit { u, v, null })
    }

    /// Tridiagonal solves `T u = g`, `T v = c` on one run with fixed values
    /// at the neighbours `left` and `right`.
    fn solve_segment(
        &self,
        run: &[usize],
        left: (usize, f64),
        right: (usize, f64),
        u: &mut [f64],
        v: &mut [f64],
    ) -> Option<()> {
        let m = run.len();
        if m == 0 {
            return Some(());
        }
        let f = self.form;
        let mut sub = vec![0.0; m - 1];
        let mut sup = vec![0.0; m - 1];
        let mut dg = vec![0.0; m];
        let mut r1 = vec![0.0; m];
        let mut r2 = vec![0.0; m];
        for (t, &idx) in run.iter().enumerate() {
            dg[t] = f.diag[idx];
            if t + 1 < m {
                sup[t] = f.off[idx];
                sub[t] = f.off[idx];
            }
            r1[t] = self.g[idx];
            r2[t] = self.c[idx];
        }
        r1[0] -= f.off[left.0] * left.1;
        r1[m - 1] -= f.off[run[m - 1]] * right.1;
        tridiag_solve(&sub, &dg, &sup, &mut [&mut r1, &mut r2])?;
        for (t, &idx) in run.iter().enumerate() {
            u[idx] = r1[t];
            v[idx] = r2[t];
        }
        Some(())
    }

    /// Least-squares fallback for singular runs.
    fn solve_dense(&self, fixed: &[bool], h: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
        let n = fixed.len();
        let free: Vec<usize> = (0..n).filter(|&i| !fixed[i]).collect();
        let pos: Vec<Option<usize>> = {
            let mut p = vec![None; n];
            for (t, &i) in free.iter().enumerate() {
                p[i] = Some(t);
            }
            p
        };
        let m = free.len();
        let mut a = DMatrix::<f64>::zeros(m, m);
        let mut b = DMatrix::<f64>::zeros(m, 2);
        for (t, &i) in free.iter().enumerate() {
            let nb = [
                ((i + n - 1) % n, self.form.off[(i + n - 1) % n]),
                ((i + 1) % n, self.form.off[i]),
            ];
            a[(t, t)] += self.form.diag[i];
            b[(t, 0)] = self.g[i];
            b[(t, 1)] = self.c[i];
            for (j, w) in nb {
                match pos[j] {
                    Some(s) => a[(t, s)] += w,
                    None => b[(t, 0)] -= w * h[j],
                }
            }
        }
        let x = a.svd(true, true).solve(&b, 1e-12).ok()?;
        let mut u = vec![0.0; n];
        let mut v = vec![0.0; n];
        for i in 0..n {
            match pos[i] {
                Some(t) => {
                    u[i] = x[(t, 0)];
                    v[i] = x[(t, 1)];
                }
                None => u[i] = h[i],
            }
        }
        Some((u, v))
    }

    /// Gradient phase, then exact active-set rounds.
    pub fn maximize(&self, init: &[f64], fista_iters: usize) -> Result<ProgramSolution> {
        let (x, iters) = self.fista(init, fista_iters)?;
        let mut status = self.status_of(&x);
        let mut best = {
            let grad = self.gradient(&x);
            let kappa = kappa_fit(&grad, self.c, &status);
            ProgramSolution {
                kkt_residual: self.kkt(&x, kappa, &status),
                h: x.clone(),
                kappa,
                status: status.clone(),
                iterations: iters,
            }
        };
        let mut hint = x;
        for round in 0..100 {
            let Some((h, kappa)) = self.solve_active(&status, &hint) else {
                break;
            };
            let grad = self.gradient(&h);
            let r = self.kkt(&h, kappa, &status);
            if r < best.kkt_residual && self.objective(&h).is_finite() {
                best = ProgramSolution {
                    h: h.clone(),
                    kappa,
                    status: status.clone(),
                    kkt_residual: r,
                    iterations: iters + round + 1,
                };
            }
            let tol = 1e-12;
            let gs = grad.iter().fold(1e-300f64, |m, v| m.max(v.abs()));
            let mut next = status.clone();
            for i in 0..h.len() {
                let s = (grad[i] - kappa * self.c[i]) / gs;
                let hs = 1e-12 * (1.0 + h[i].abs());
                next[i] = match status[i] {
                    Status::Free if h[i] < self.lo[i] - hs => Status::Lower,
                    Status::Free if h[i] > self.hi[i] + hs => Status::Upper,
                    Status::Lower if s > tol => Status::Free,
                    Status::Upper if s < -tol => Status::Free,
                    s => s,
                };
            }
            if next == status {
                break;
            }
            status = next;
            hint = h;
        }
        Ok(best)
    }

    /// Scaled violation of the optimality conditions at `h`.
    pub fn kkt(&self, h: &[f64], kappa: f64, status: &[Status]) -> f64 {
        kkt_residual(&self.gradient(h), self.c, self.k, kappa, status, h, self.lo, self.hi)
    }
}

/// `W`-metric projection onto the feasible set:
/// `h_i = clamp(y_i + θ c_i / w_i, lo_i, hi_i)` with `θ` fixed by `cᵀh = k`.
pub(crate) fn project(c: &[f64], w: &[f64], k: f64, lo: &[f64], hi: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    let at = |t: f64| -> Vec<f64> {
        y.iter()
            .enumerate()
            .map(|(i, v)| (v + t * c[i] / w[i]).clamp(lo[i], hi[i]))
            .collect()
    };
    if !(lo.iter().any(|v| v.is_finite()) || hi.iter().any(|v| v.is_finite())) {
        let cc: f64 = c.iter().zip(w).map(|(c, w)| c * c / w).sum();
        return Ok(at((k - dot(c, y)) / cc));
    }
    let s = |t: f64| dot(c, &at(t));
    let scale = y.iter().fold(1.0f64, |m, v| m.max(v.abs())) * w.iter().fold(0.0f64, |m, v| m.max(*v))
        / c.iter().fold(f64::MAX, |m, v| if *v > 0.0 { m.min(*v) } else { m });
    let (mut a, mut b) = (-scale, scale);
    let mut grow = 0;
    while s(a) > k {
        a *= 2.0;
        grow += 1;
        if grow > 200 {
            return Err(Error::Infeasible("constraint set is empty".into()));
        }
    }
    while s(b) < k {
        b *= 2.0;
        grow += 1;
        if grow > 200 {
            return Err(Error::Infeasible("constraint set is empty".into()));
        }
    }
    if s(b) < k - 1e-9 * k.abs().max(1.0) || s(a) > k + 1e-9 * k.abs().max(1.0) {
        return Err(Error::Infeasible("constraint set is empty".into()));
    }
    for _ in 0..80 {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        if s(m) < k {
            a = m;
        } else {
            b = m;
        }
    }
    // Spread the last bisection gap over the free coordinates.
    let mut h = at(0.5 * (a + b));
    let gap = k - dot(c, &h);
    let free: Vec<usize> = (0..h.len())
        .filter(|&i| h[i] > lo[i] && h[i] < hi[i] && c[i] != 0.0)
        .collect();
    let cc: f64 = free.iter().map(|&i| c[i] * c[i] / w[i]).sum();
    if cc > 0.0 {
        for &i in &free {
            h[i] += gap * c[i] / w[i] / cc;
        }
    }
    Ok(h)
}

pub(crate) fn status_of(h: &[f64], lo: &[f64], hi: &[f64], rel: f64) -> Vec<Status> {
    h.iter()
        .enumerate()
        .map(|(i, &v)| {
            let tol = rel * (1.0 + v.abs());
            if v <= lo[i] + tol {
                Status::Lower
            } else if v >= hi[i] - tol {
                Status::Upper
            } else {
                Status::Free
            }
        })
        .collect()
}

/// Scaled violation of stationarity (`grad = κ c` on free indices, signed
/// on bound ones), of the bounds and of `cᵀh = k`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn kkt_residual(
    grad: &[f64],
    c: &[f64],
    k: f64,
    kappa: f64,
    status: &[Status],
    h: &[f64],
    lo: &[f64],
    hi: &[f64],
) -> f64 {
    let scale = grad
        .iter()
        .zip(c)
        .fold(0.0f64, |m, (a, c)| m.max(a.abs()).max((kappa * c).abs()))
        .max(1e-300);
    let hs = h.iter().fold(1e-300f64, |m, v| m.max(v.abs()));
    let mut r: f64 = 0.0;
    for i in 0..h.len() {
        let s = grad[i] - kappa * c[i];
        r = r.max(match status[i] {
            Status::Free => s.abs() / scale,
            Status::Lower => s.max(0.0) / scale,
            Status::Upper => (-s).max(0.0) / scale,
        });
        r = r.max((lo[i] - h[i]).max(0.0) / hs);
        r = r.max((h[i] - hi[i]).max(0.0) / hs);
    }
    r.max((dot(c, h) - k).abs() / k.abs().max(1e-300))
}

/// Least-squares multiplier from the free indices.
pub(crate) fn kappa_fit(grad: &[f64], c: &[f64], status: &[Status]) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..grad.len() {
        if status[i] == Status::Free {
            num += grad[i] * c[i];
            den += c[i] * c[i];
        }
    }
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

/// Tridiagonal solve with partial pivoting; `None` when singular.
fn tridiag_solve(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &mut [&mut Vec<f64>]) -> Option<()> {
    let n = diag.len();
    if n == 0 {
        return Some(());
    }
    let mut d = diag.to_vec();
    let mut dl = sub.to_vec();
    let mut du = sup.to_vec();
    let scale = d.iter().chain(&dl).chain(&du).fold(0.0f64, |m, v| m.max(v.abs()));
    let tiny = 1e-13 * scale;
    for i in 0..n.saturating_sub(1) {
        if d[i].abs() >= dl[i].abs() {
            if d[i].abs() <= tiny {
                return None;
            }
            let fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            for b in rhs.iter_mut() {
                b[i + 1] -= fact * b[i];
            }
            dl[i] = 0.0;
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            let temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if i + 2 < n {
                dl[i] = du[i + 1];
                du[i + 1] = -fact * dl[i];
            } else {
                dl[i] = 0.0;
            }
            du[i] = temp;
            for b in rhs.iter_mut() {
                let t = b[i];
                b[i] = b[i + 1];
                b[i + 1] = t - fact * b[i + 1];
            }
        }
    }
    if d[n - 1].abs() <= tiny {
        return None;
    }
    for b in rhs.iter_mut() {
        b[n - 1] /= d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - du[i] * b[i + 1] - dl[i] * b[i + 2]) / d[i];
        }
    }
    Some(())
}

/// Dense check used by tests.
#[cfg(test)]
pub(crate) fn dense_matrix(form: &AreaForm) -> DMatrix<f64> {
    let n = form.len();
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        let col = form.apply(&e);
        for j in 0..n {
            a[(j, i)] = col[j];
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use crate::support::SupportVector;
    use crate::Vec3;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_body(grid: &std::sync::Arc<SphereGrid>, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let pts: Vec<Vec3> = (0..7)
            .map(|_| Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), 0.0))
            .collect();
        SupportVector::from_points(grid.clone(), &pts).unwrap().into_values()
    }

    /// Vertices where consecutive support lines meet.
    fn line_meets(th: &[f64], h: &[f64]) -> Vec<(f64, f64)> {
        let n = th.len();
        (0..n)
            .map(|i| {
                let j = (i + 1) % n;
                let (a, b) = (th[i], th[j]);
                let det = a.cos() * b.sin() - a.sin() * b.cos();
                (
                    (h[i] * b.sin() - h[j] * a.sin()) / det,
                    (a.cos() * h[j] - b.cos() * h[i]) / det,
                )
            })
            .collect()
    }

    #[test]
    fn area_form_matches_shoelace_and_edge_lengths() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let grid = make_grid(2, 37).unwrap();
        let form = AreaForm::new(&grid).unwrap();
        for _ in 0..20 {
            let h = random_body(&grid, &mut rng);
            let v = line_meets(grid.angles(), &h);
            let n = v.len();
            let shoelace: f64 = (0..n)
                .map(|i| {
                    let (p, q) = (v[i], v[(i + 1) % n]);
                    p.0 * q.1 - p.1 * q.0
                })
                .sum::<f64>()
                / 2.0;
            assert!((form.quad(&h) - shoelace).abs() < 1e-10);
            let lengths = form.apply(&h);
            for i in 0..n {
                let (p, q) = (v[(i + n - 1) % n], v[i]);
                let d = ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt();
                assert!((lengths[i] - d).abs() < 1e-10, "{i}: {} vs {d}", lengths[i]);
            }
        }
    }

    #[test]
    fn tridiagonal_solve_matches_dense_lu() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in [1usize, 2, 3, 9, 30] {
            let sub: Vec<f64> = (0..n.saturating_sub(1)).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let sup: Vec<f64> = (0..n.saturating_sub(1)).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let diag: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.1..0.1)).collect();
            let rhs: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mut m = DMatrix::zeros(n, n);
            for i in 0..n {
                m[(i, i)] = diag[i];
                if i + 1 < n {
                    m[(i + 1, i)] = sub[i];
                    m[(i, i + 1)] = sup[i];
                }
            }
            let Some(dense) = m.lu().solve(&nalgebra::DVector::from_vec(rhs.clone())) else {
                continue;
            };
            let mut b = rhs.clone();
            tridiag_solve(&sub, &diag, &sup, &mut [&mut b]).unwrap();
            for i in 0..n {
                assert!((b[i] - dense[i]).abs() < 1e-8 * dense.amax().max(1.0));
            }
        }
    }

    /// KKT of `max Q - gᵀh` s.t. `cᵀh = k`, `lo ≤ h ≤ hi` with the dense
    /// matrix: `∇ = κc + ν`, `ν = 0` free, `ν ≥ 0` at upper, `ν ≤ 0` at lower.
    fn dense_kkt(a: &DMatrix<f64>, p: &Program, sol: &ProgramSolution) -> f64 {
        let n = p.c.len();
        let h = nalgebra::DVector::from_column_slice(&sol.h);
        let grad = a * &h;
        let scale = grad.amax().max(1.0);
        let mut worst: f64 = (dot(p.c, &sol.h) - p.k).abs() / p.k.abs().max(1.0);
        for i in 0..n {
            worst = worst.max((p.lo[i] - sol.h[i]).max(sol.h[i] - p.hi[i]).max(0.0));
            let nu = grad[i] - p.g[i] - sol.kappa * p.c[i];
            let viol = match sol.status[i] {
                Status::Free => nu.abs(),
                Status::Upper => (-nu).max(0.0),
                Status::Lower => nu.max(0.0),
            };
            worst = worst.max(viol / scale);
        }
        worst
    }

    #[test]
    fn unconstrained_optimum_is_a_disk() {
        let grid = make_grid(2, 180).unwrap();
        let form = AreaForm::new(&grid).unwrap();
        let q = grid.qweights();
        let n = grid.len();
        let (lo, hi, g) = (vec![f64::NEG_INFINITY; n], vec![f64::INFINITY; n], vec![0.0; n]);
        let k = dot(q, &vec![1.0; n]);
        let p = Program {
            form: &form,
            c: q,
            k,
            g: &g,
            lo: &lo,
            hi: &hi,
            w: q,
            angles: grid.angles(),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let init = random_body(&grid, &mut rng);
        let sol = p.maximize(&init, 500).unwrap();
        assert!(sol.kkt_residual < 1e-9);
        assert!(dense_kkt(&dense_matrix(&form), &p, &sol) < 1e-9);
        let mean = dot(q, &sol.h) / q.iter().sum::<f64>();
        let centered = SupportVector::new(grid.clone(), sol.h.clone()).unwrap();
        let c = crate::support::steiner_point(&centered);
        for (i, d) in grid.dirs().iter().enumerate() {
            assert!((sol.h[i] - d.dot(&c) - mean).abs() < 1e-8);
        }
    }

    #[test]
    fn bounded_program_satisfies_dense_kkt() {
        let grid = make_grid(2, 90).unwrap();
        let form = AreaForm::new(&grid).unwrap();
        let q = grid.qweights();
        let n = grid.len();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let hi = random_body(&grid, &mut rng);
            let lo = vec![f64::NEG_INFINITY; n];
            let g: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..0.02)).collect();
            let k = 0.8 * dot(q, &hi);
            let p = Program {
                form: &form,
                c: q,
                k,
                g: &g,
                lo: &lo,
                hi: &hi,
                w: q,
                angles: grid.angles(),
            };
            let sol = p.maximize(&hi, 2000).unwrap();
            assert!(sol.kkt_residual < 1e-8, "{}", sol.kkt_residual);
            assert!(dense_kkt(&dense_matrix(&form), &p, &sol) < 1e-8);
        }
    }
}
