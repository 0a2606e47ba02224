//! Dense two-phase simplex for small linear programs in standard form
//!
//! ```text
//! minimize cᵀx  subject to  A x = b,  x ≥ 0.
//! ```
//!
//! Pivoting uses Dantzig's rule and falls back to Bland's rule after a run of
//! degenerate pivots, which rules out cycling. Phase 1 produces a Farkas
//! certificate when the system is infeasible.

use crate::tolerance;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Primal solution (meaningful when optimal).
    pub x: Vec<f64>,
    pub objective: f64,
    /// Row multipliers `y` with `Aᵀy ≤ c` at optimality. When infeasible,
    /// a certificate with `Aᵀy ≤ 0` and `bᵀy > 0`.
    pub y: Vec<f64>,
}

/// Options controlling tolerances of a solve.
#[derive(Clone, Copy, Debug)]
pub struct LpOptions {
    pub feas_tol: f64,
    pub max_pivots: usize,
}

impl Default for LpOptions {
    fn default() -> Self {
        Self {
            feas_tol: tolerance::LP_FEAS,
            max_pivots: 200_000,
        }
    }
}

const PIVOT_TOL: f64 = 1e-11;
const COST_TOL: f64 = 1e-11;
const DEGENERATE_RUN: usize = 40;

struct Tableau {
    m: usize,
    width: usize,
    /// `m` constraint rows followed by the objective row; `width` columns,
    /// the last of which is the right-hand side.
    t: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.t[i * self.width + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.at(i, self.width - 1)
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let w = self.width;
        let p = self.at(r, q);
        for j in 0..w {
            self.t[r * w + j] /= p;
        }
        let (before, rest) = self.t.split_at_mut(r * w);
        let (row_r, after) = rest.split_at_mut(w);
        let update = |row: &mut [f64]| {
            let f = row[q];
            if f != 0.0 {
                for (x, &y) in row.iter_mut().zip(row_r.iter()) {
                    *x -= f * y;
                }
                row[q] = 0.0;
            }
        };
        for row in before.chunks_mut(w) {
            update(row);
        }
        for row in after.chunks_mut(w) {
            update(row);
        }
        self.basis[r] = q;
    }

    /// Runs simplex iterations on the objective row over columns `0..ncols`.
    /// Returns `false` when unbounded.
    fn optimize(&mut self, ncols: usize, budget: &mut usize) -> bool {
        let obj = self.m;
        let mut degenerate = 0usize;
        loop {
            if *budget == 0 {
                return true;
            }
            *budget -= 1;
            let bland = degenerate >= DEGENERATE_RUN;
            let mut q = usize::MAX;
            let mut best = -COST_TOL;
            for j in 0..ncols {
                let r = self.at(obj, j);
                if r < best {
                    q = j;
                    if bland {
                        break;
                    }
                    best = r;
                }
            }
            if q == usize::MAX {
                return true;
            }
            let mut r = usize::MAX;
            let mut ratio = f64::INFINITY;
            for i in 0..self.m {
                let a = self.at(i, q);
                if a > PIVOT_TOL {
                    let rt = self.rhs(i).max(0.0) / a;
                    if rt < ratio - 1e-15 || (rt <= ratio + 1e-15 && r != usize::MAX && self.basis[i] < self.basis[r]) {
                        ratio = rt;
                        r = i;
                    }
                }
            }
            if r == usize::MAX {
                return false;
            }
            if ratio <= 1e-14 {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(r, q);
        }
    }
}

/// Solves `min cᵀx, Ax = b, x ≥ 0` where `a` is given row-major (`m` rows of
/// length `c.len()`).
pub fn solve(a: &[Vec<f64>], b: &[f64], c: &[f64], opts: &LpOptions) -> LpSolution {
    let m = a.len();
    let n = c.len();
    let width = n + m + 1;
    let mut t = vec![0.0; (m + 1) * width];
    let mut sign = vec![1.0; m];
    for i in 0..m {
        debug_assert_eq!(a[i].len(), n);
        let s = if b[i] < 0.0 { -1.0 } else { 1.0 };
        sign[i] = s;
        for j in 0..n {
            t[i * width + j] = s * a[i][j];
        }
        t[i * width + n + i] = 1.0;
        t[i * width + width - 1] = s * b[i];
    }
    // Phase-1 objective: sum of artificials, priced out against the basis.
    for i in 0..m {
        for j in 0..n {
            t[m * width + j] -= t[i * width + j];
        }
        t[m * width + width - 1] -= t[i * width + width - 1];
    }
    let mut tab = Tableau {
        m,
        width,
        t,
        basis: (n..n + m).collect(),
    };
    let mut budget = opts.max_pivots;
    tab.optimize(n, &mut budget);

    let bscale = b.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
    let infeas = -tab.at(m, width - 1);
    if infeas > opts.feas_tol * bscale {
        // Artificial reduced costs are 1 - y_i for the phase-1 objective.
        let y: Vec<f64> = (0..m).map(|i| sign[i] * (1.0 - tab.at(m, n + i))).collect();
        return LpSolution {
            status: LpStatus::Infeasible,
            x: vec![0.0; n],
            objective: f64::NAN,
            y,
        };
    }

    // Drive zero-level artificials out of the basis where possible.
    for i in 0..m {
        if tab.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| tab.at(i, j).abs() > 1e-9) {
                tab.pivot(i, j);
            }
        }
    }

    // Phase 2 objective row.
    for j in 0..width {
        tab.t[m * width + j] = if j < n { c[j] } else { 0.0 };
    }
    for i in 0..m {
        let bj = tab.basis[i];
        let cb = if bj < n { c[bj] } else { 0.0 };
        if cb != 0.0 {
            for j in 0..width {
                tab.t[m * width + j] -= cb * tab.t[i * width + j];
            }
        }
    }
    let bounded = tab.optimize(n, &mut budget);
    let mut x = vec![0.0; n];
    for i in 0..m {
        if tab.basis[i] < n {
            x[tab.basis[i]] = tab.rhs(i).max(0.0);
        }
    }
    let objective = c.iter().zip(&x).map(|(c, x)| c * x).sum();
    let y: Vec<f64> = (0..m).map(|i| -sign[i] * tab.at(m, n + i)).collect();
    LpSolution {
        status: if bounded {
            LpStatus::Optimal
        } else {
            LpStatus::Unbounded
        },
        x,
        objective,
        y,
    }
}

/// Feasibility of `Ax = b, x ≥ 0`.
pub fn feasible(a: &[Vec<f64>], b: &[f64], opts: &LpOptions) -> LpSolution {
    let n = a.first().map_or(0, |r| r.len());
    solve(a, b, &vec![0.0; n], opts)
}
