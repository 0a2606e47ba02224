//! Linear and affine majorization of discrete measures, decided by transport
//! LPs, plus samplers of sublinear and convex test functionals.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom::Vec3;
use crate::lp::{self, LpOptions, LpStatus};
use crate::measures::SphericalMeasure;
use crate::tolerance;

/// `flow[i][j]`: mass moved from atom `i` of μ to atom `j` of ν.
#[derive(Clone, Debug, PartialEq)]
pub struct TransportWitness {
    pub flow: Vec<Vec<f64>>,
}

impl TransportWitness {
    pub fn rows(&self) -> usize {
        self.flow.len()
    }

    pub fn cols(&self) -> usize {
        self.flow.first().map_or(0, |r| r.len())
    }

    /// Witness for `μ ≫ ρ` from witnesses for `μ ≫ ν` and `ν ≫ ρ`: the mass
    /// arriving at each ν atom is forwarded in the proportions of `next`.
    pub fn compose(&self, next: &TransportWitness, nu_weights: &[f64]) -> Result<Self> {
        if self.cols() != next.rows() || nu_weights.len() != next.rows() {
            return Err(Error::InvalidArgument("witness shapes do not compose".into()));
        }
        let mut flow = vec![vec![0.0; next.cols()]; self.rows()];
        for (i, row) in self.flow.iter().enumerate() {
            for (j, &f) in row.iter().enumerate() {
                if f == 0.0 {
                    continue;
                }
                for (k, &g) in next.flow[j].iter().enumerate() {
                    flow[i][k] += f * g / nu_weights[j];
                }
            }
        }
        Ok(Self { flow })
    }

    /// Largest violation of the linear-majorization witness invariants
    /// (row sums and column resultants), relative to the total mass of μ.
    pub fn linear_violation(&self, mu: &SphericalMeasure, nu: &SphericalMeasure) -> f64 {
        let pts_mu: Vec<(Vec3, f64)> = mu.atoms().iter().map(|a| (*a.dir.vec(), a.w)).collect();
        let pts_nu: Vec<(Vec3, f64)> = nu.atoms().iter().map(|a| (*a.dir.vec(), a.w)).collect();
        self.violation(&pts_mu, &pts_nu, false)
    }

    /// As [`Self::linear_violation`], plus column masses.
    pub fn affine_violation(&self, mu: &PointMeasure, nu: &PointMeasure) -> f64 {
        self.violation(&mu.atoms, &nu.atoms, true)
    }

    fn violation(&self, mu: &[(Vec3, f64)], nu: &[(Vec3, f64)], masses: bool) -> f64 {
        if self.rows() != mu.len() || (self.cols() != nu.len() && !(nu.is_empty())) {
            return f64::INFINITY;
        }
        let total: f64 = mu.iter().map(|a| a.1).sum::<f64>().max(1e-300);
        let mut worst: f64 = 0.0;
        for (row, (_, m)) in self.flow.iter().zip(mu) {
            if row.iter().any(|&f| f < -tolerance::LP_FEAS) {
                return f64::INFINITY;
            }
            worst = worst.max((row.iter().sum::<f64>() - m).abs());
        }
        for (j, (v, n)) in nu.iter().enumerate() {
            let mut r = Vec3::zeros();
            let mut mass = 0.0;
            for (row, (u, _)) in self.flow.iter().zip(mu) {
                r += u * row[j];
                mass += row[j];
            }
            worst = worst.max((r - v * *n).norm());
            if masses {
                worst = worst.max((mass - n).abs());
            }
        }
        worst / total
    }
}

/// `p(z) = max_g (g, z)`, or the Euclidean norm when no generators are given.
#[derive(Clone, Debug, PartialEq)]
pub struct SublinearFunctional {
    pub dim: usize,
    pub generators: Vec<Vec3>,
}

impl SublinearFunctional {
    pub fn eval(&self, z: &Vec3) -> f64 {
        if self.generators.is_empty() {
            z.norm()
        } else {
            self.generators
                .iter()
                .map(|g| g.dot(z))
                .fold(f64::NEG_INFINITY, f64::max)
        }
    }
}

/// `φ(x) = max_j (c_j + (p_j, x)) + q·|x|²`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexFunctional {
    pub dim: usize,
    pub pieces: Vec<(Vec3, f64)>,
    pub quadratic: f64,
}

impl ConvexFunctional {
    pub fn eval(&self, x: &Vec3) -> f64 {
        let lin = self
            .pieces
            .iter()
            .map(|(p, c)| c + p.dot(x))
            .fold(f64::NEG_INFINITY, f64::max);
        let lin = if self.pieces.is_empty() { 0.0 } else { lin };
        lin + self.quadratic * x.norm_squared()
    }
}

/// Positive point masses in `R^N` (not restricted to the sphere).
#[derive(Clone, Debug, PartialEq)]
pub struct PointMeasure {
    pub dim: usize,
    pub atoms: Vec<(Vec3, f64)>,
}

impl PointMeasure {
    pub fn new(dim: usize, atoms: Vec<(Vec3, f64)>) -> Result<Self> {
        if atoms.iter().any(|a| !(a.1 > 0.0)) {
            return Err(Error::InvalidArgument("point masses must be positive".into()));
        }
        Ok(Self { dim, atoms })
    }

    pub fn integrate(&self, f: impl Fn(&Vec3) -> f64) -> f64 {
        self.atoms.iter().map(|(x, w)| w * f(x)).sum()
    }
}

/// Verdict of a majorization test.
#[derive(Clone, Debug)]
pub struct LinearMajorization {
    pub holds: bool,
    pub witness: Option<TransportWitness>,
    /// When the LP is infeasible: a sublinear functional with negative gap,
    /// read off the Farkas certificate.
    pub violating: Option<SublinearFunctional>,
}

#[derive(Clone, Debug)]
pub struct AffineMajorization {
    pub holds: bool,
    pub witness: Option<TransportWitness>,
    /// When infeasible: a convex functional with `∫φ dμ < ∫φ dν`.
    pub violating: Option<ConvexFunctional>,
}

/// Transport instance after removing the mass shared by both measures on
/// common directions (sending a shared atom to itself is never worse).
struct Reduced {
    rows: Vec<usize>,
    row_w: Vec<f64>,
    cols: Vec<usize>,
    col_w: Vec<f64>,
    diag: Vec<(usize, usize, f64)>,
}

fn reduce(mu: &SphericalMeasure, nu: &SphericalMeasure) -> Reduced {
    let mut row_left: Vec<f64> = mu.atoms().iter().map(|a| a.w).collect();
    let mut col_left: Vec<f64> = nu.atoms().iter().map(|a| a.w).collect();
    let mut diag = Vec::new();
    for (j, b) in nu.atoms().iter().enumerate() {
        if let Some(i) = mu
            .atoms()
            .iter()
            .position(|a| (a.dir.vec() - b.dir.vec()).norm() <= tolerance::SNAP)
        {
            let s = row_left[i].min(col_left[j]);
            row_left[i] -= s;
            col_left[j] -= s;
            diag.push((i, j, s));
        }
    }
    let eps = 1e-14 * mu.total_mass().max(nu.total_mass());
    let rows: Vec<usize> = (0..row_left.len()).filter(|&i| row_left[i] > eps).collect();
    let cols: Vec<usize> = (0..col_left.len()).filter(|&j| col_left[j] > eps).collect();
    Reduced {
        row_w: rows.iter().map(|&i| row_left[i]).collect(),
        col_w: cols.iter().map(|&j| col_left[j]).collect(),
        rows,
        cols,
        diag,
    }
}

/// Decides `μ ≫_{R^N} ν`: a flow with row sums `μ` whose columns have the
/// resultants `n_j v_j` of the ν atoms.
pub fn linear_majorizes(mu: &SphericalMeasure, nu: &SphericalMeasure) -> Result<LinearMajorization> {
    if mu.dim() != nu.dim() {
        return Err(Error::InvalidArgument("dimension mismatch".into()));
    }
    let dim = mu.dim();
    let red = reduce(mu, nu);
    let (nr, nc) = (red.rows.len(), red.cols.len() + 1);
    let nvars = nr * nc;
    let mut a = vec![vec![0.0; nvars]; nr + dim * nc];
    let mut b = vec![0.0; nr + dim * nc];
    for r in 0..nr {
        for c in 0..nc {
            a[r][r * nc + c] = 1.0;
        }
        b[r] = red.row_w[r];
        let u = mu.atoms()[red.rows[r]].dir.vec();
        for c in 0..nc {
            for k in 0..dim {
                a[nr + c * dim + k][r * nc + c] = u[k];
            }
        }
    }
    for (c, &j) in red.cols.iter().enumerate() {
        let v = nu.atoms()[j].dir.vec();
        for k in 0..dim {
            b[nr + c * dim + k] = red.col_w[c] * v[k];
        }
    }
    let scale = mu.total_mass().max(nu.total_mass()).max(1e-300);
    let opts = LpOptions {
        feas_tol: tolerance::LP_FEAS / scale.max(1.0),
        ..LpOptions::default()
    };
    let sol = lp::feasible(&a, &b, &opts);
    if sol.status != LpStatus::Optimal {
        let generators: Vec<Vec3> = (0..nc)
            .map(|c| {
                let mut p = Vec3::zeros();
                for k in 0..dim {
                    p[k] = sol.y[nr + c * dim + k];
                }
                p
            })
            .collect();
        let norm = generators.iter().map(|g| g.norm()).fold(0.0, f64::max);
        let generators = generators
            .into_iter()
            .map(|g| if norm > 0.0 { g / norm } else { g })
            .collect();
        return Ok(LinearMajorization {
            holds: false,
            witness: None,
            violating: Some(SublinearFunctional { dim, generators }),
        });
    }
    let mut flow = vec![vec![0.0; nu.len()]; mu.len()];
    for &(i, j, s) in &red.diag {
        flow[i][j] += s;
    }
    for r in 0..nr {
        let i = red.rows[r];
        for c in 0..nc {
            let f = sol.x[r * nc + c];
            if f == 0.0 {
                continue;
            }
            if c < red.cols.len() {
                flow[i][red.cols[c]] += f;
            } else if !nu.is_empty() {
                // Zero-resultant leftovers may join any column.
                flow[i][0] += f;
            }
        }
    }
    Ok(LinearMajorization {
        holds: true,
        witness: Some(TransportWitness { flow }),
        violating: None,
    })
}

/// Decides the Choquet order `μ ≫_{Aff} ν` on point measures: row sums `μ`,
/// column masses `ν`, and column barycenters at the ν atoms.
pub fn affine_majorizes(mu: &PointMeasure, nu: &PointMeasure) -> Result<AffineMajorization> {
    if mu.dim != nu.dim {
        return Err(Error::InvalidArgument("dimension mismatch".into()));
    }
    let dim = mu.dim;
    let (nr, nc) = (mu.atoms.len(), nu.atoms.len());
    let nvars = nr * nc;
    let rows = nr + nc * (dim + 1);
    let mut a = vec![vec![0.0; nvars]; rows];
    let mut b = vec![0.0; rows];
    for (r, (x, m)) in mu.atoms.iter().enumerate() {
        b[r] = *m;
        for c in 0..nc {
            let v = r * nc + c;
            a[r][v] = 1.0;
            a[nr + c * (dim + 1)][v] = 1.0;
            for k in 0..dim {
                a[nr + c * (dim + 1) + 1 + k][v] = x[k];
            }
        }
    }
    for (c, (q, n)) in nu.atoms.iter().enumerate() {
        b[nr + c * (dim + 1)] = *n;
        for k in 0..dim {
            b[nr + c * (dim + 1) + 1 + k] = n * q[k];
        }
    }
    let scale: f64 = mu.atoms.iter().map(|a| a.1).sum::<f64>().max(1.0);
    let opts = LpOptions {
        feas_tol: tolerance::LP_FEAS / scale,
        ..LpOptions::default()
    };
    let sol = lp::feasible(&a, &b, &opts);
    if sol.status != LpStatus::Optimal {
        let pieces: Vec<(Vec3, f64)> = (0..nc)
            .map(|c| {
                let base = nr + c * (dim + 1);
                let mut p = Vec3::zeros();
                for k in 0..dim {
                    p[k] = sol.y[base + 1 + k];
                }
                (p, sol.y[base])
            })
            .collect();
        return Ok(AffineMajorization {
            holds: false,
            witness: None,
            violating: Some(ConvexFunctional {
                dim,
                pieces,
                quadratic: 0.0,
            }),
        });
    }
    let flow = (0..nr).map(|r| (0..nc).map(|c| sol.x[r * nc + c]).collect()).collect();
    Ok(AffineMajorization {
        holds: true,
        witness: Some(TransportWitness { flow }),
        violating: None,
    })
}

/// Upper bound on `min ‖column resultant mismatch‖₁ / mass(μ)` over flows
/// with exact row sums. Zero exactly when `μ ≫ ν` (up to LP tolerance).
///
/// After removing shared mass, only the `max_atoms` heaviest remaining atoms
/// of each side enter the LP; each pruned atom adds its mass to the bound.
pub fn linear_majorization_residual(mu: &SphericalMeasure, nu: &SphericalMeasure, max_atoms: usize) -> Result<f64> {
    if mu.dim() != nu.dim() {
        return Err(Error::InvalidArgument("dimension mismatch".into()));
    }
    let dim = mu.dim();
    let red = reduce(mu, nu);
    let keep = |w: &[f64]| -> (Vec<usize>, f64) {
        let mut idx: Vec<usize> = (0..w.len()).collect();
        idx.sort_by(|&a, &b| w[b].total_cmp(&w[a]));
        let pruned: f64 = idx.iter().skip(max_atoms).map(|&k| w[k]).sum();
        idx.truncate(max_atoms);
        idx.sort_unstable();
        (idx, pruned)
    };
    let (kr, pruned_r) = keep(&red.row_w);
    let (kc, pruned_c) = keep(&red.col_w);
    let (nr, nc) = (kr.len(), kc.len() + 1);
    let nflow = nr * nc;
    let nslack = 2 * dim * nc;
    let nvars = nflow + nslack;
    let mut a = vec![vec![0.0; nvars]; nr + dim * nc];
    let mut b = vec![0.0; nr + dim * nc];
    let mut cost = vec![0.0; nvars];
    for (r, &kri) in kr.iter().enumerate() {
        b[r] = red.row_w[kri];
        let u = mu.atoms()[red.rows[kri]].dir.vec();
        for c in 0..nc {
            a[r][r * nc + c] = 1.0;
            for k in 0..dim {
                a[nr + c * dim + k][r * nc + c] = u[k];
            }
        }
    }
    for c in 0..nc {
        if c < kc.len() {
            let j = red.cols[kc[c]];
            let v = nu.atoms()[j].dir.vec();
            for k in 0..dim {
                b[nr + c * dim + k] = red.col_w[kc[c]] * v[k];
            }
        }
        for k in 0..dim {
            let row = nr + c * dim + k;
            let s = nflow + 2 * (c * dim + k);
            a[row][s] = 1.0;
            a[row][s + 1] = -1.0;
            cost[s] = 1.0;
            cost[s + 1] = 1.0;
        }
    }
    let sol = lp::solve(&a, &b, &cost, &LpOptions::default());
    let lp_val = match sol.status {
        LpStatus::Optimal => sol.objective.max(0.0),
        _ => return Err(Error::InvalidState("residual LP failed".into())),
    };
    let total = mu.total_mass().max(1e-300);
    Ok((lp_val + pruned_r + pruned_c) / total)
}

/// `Σ m_i p(u_i) - Σ n_j p(v_j)`.
pub fn reshetnyak_gap(mu: &SphericalMeasure, nu: &SphericalMeasure, p: &SublinearFunctional) -> f64 {
    let a: f64 = mu.atoms().iter().map(|a| a.w * p.eval(a.dir.vec())).sum();
    let b: f64 = nu.atoms().iter().map(|a| a.w * p.eval(a.dir.vec())).sum();
    a - b
}

/// `∫φ dμ - ∫φ dν`.
pub fn choquet_gap(mu: &PointMeasure, nu: &PointMeasure, phi: &ConvexFunctional) -> f64 {
    mu.integrate(|x| phi.eval(x)) - nu.integrate(|x| phi.eval(x))
}

fn uniform_in_ball(rng: &mut ChaCha8Rng, dim: usize) -> Vec3 {
    loop {
        let mut v = Vec3::zeros();
        for k in 0..dim {
            v[k] = rng.gen_range(-1.0..1.0);
        }
        if v.norm_squared() <= 1.0 {
            return v;
        }
    }
}

/// `k` generators uniform in the unit ball, reproducible from `seed`; `k = 0`
/// gives the Euclidean norm.
pub fn sample_sublinear(dim: usize, k: usize, seed: u64) -> SublinearFunctional {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SublinearFunctional {
        dim,
        generators: (0..k).map(|_| uniform_in_ball(&mut rng, dim)).collect(),
    }
}

/// Max of `k` affine pieces (slopes uniform in the unit ball, intercepts in
/// `[-1, 1]`) plus a squared norm with coefficient in `[0, 1)`.
pub fn sample_convex(dim: usize, k: usize, seed: u64) -> ConvexFunctional {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pieces = (0..k)
        .map(|_| (uniform_in_ball(&mut rng, dim), rng.gen_range(-1.0..1.0)))
        .collect();
    ConvexFunctional {
        dim,
        pieces,
        quadratic: rng.gen_range(0.0..1.0),
    }
}
