//! The `cbody` command line.
//!
//! Exit codes: 0 success, 2 invalid input, 3 solver nonconvergence,
//! 4 verification failure.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geom::{Direction, Vec3};
use crate::grid::{default_grid, make_grid, SphereGrid};
use crate::io::json::{
    parse_body_or_measure, read_body, read_measure, read_value, report_json, to_pretty, BodyFile, BodyOrMeasureFile,
    GridSpec, MeasureFile, WitnessFile,
};
use crate::io::manifest::RunManifest;
use crate::io::render::{obj_string, svg_string};
use crate::iso::{self, BreadthConvention, ConditionReport, FlatteningKind, FlatteningSpec, ParetoPoint, UrysohnSpec};
use crate::majorization::{
    affine_majorizes, choquet_gap, linear_majorizes, reshetnyak_gap, sample_convex, sample_sublinear, PointMeasure,
};
use crate::measures::{blaschke_sum_with, breadth_values, BodyOrMeasure, SphericalMeasure};
use crate::minkowski_solver::{solve_minkowski, solve_minkowski_2d, SolveOptions};
use crate::polytope::Polytope;
use crate::support::SupportVector;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "cbody", about = "Convex bodies, surface measures and Urysohn-type problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Grid resolution (angles in 2D, icosphere level in 3D) for vertex-list bodies and free problems.
    #[arg(long)]
    grid: Option<usize>,
    /// Tolerance (solver residual, or verification tolerance).
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Result JSON (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long)]
    obj: Option<PathBuf>,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reconstruct a body from its surface-area measure.
    SolveMinkowski {
        #[arg(long)]
        measure: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Body with surface measure a·μ(x) + b·μ(y).
    BlaschkeSum {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Solve an Urysohn problem from a problem file.
    Urysohn {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Solve a flattening problem from a problem file.
    Flatten {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Sweep a vector isoperimetric or Leidenfrost problem over weights.
    Pareto {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Decide μ ≫ ν (linear, or affine with --affine).
    CheckMajorization {
        #[arg(long)]
        mu: PathBuf,
        #[arg(long)]
        nu: PathBuf,
        #[arg(long)]
        affine: bool,
        /// Number of sampled test functionals.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Check optimality conditions from a verification file.
    Verify {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Emit SVG (2D) or OBJ (3D) for a body.
    Render {
        #[arg(long)]
        body: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Read a body or measure file and write it back.
    Roundtrip {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Self::SolveMinkowski { .. } => "solve-minkowski",
            Self::BlaschkeSum { .. } => "blaschke-sum",
            Self::Urysohn { .. } => "urysohn",
            Self::Flatten { .. } => "flatten",
            Self::Pareto { .. } => "pareto",
            Self::CheckMajorization { .. } => "check-majorization",
            Self::Verify { .. } => "verify",
            Self::Render { .. } => "render",
            Self::Roundtrip { .. } => "roundtrip",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Self::SolveMinkowski { common, .. }
            | Self::BlaschkeSum { common, .. }
            | Self::Urysohn { common, .. }
            | Self::Flatten { common, .. }
            | Self::Pareto { common, .. }
            | Self::CheckMajorization { common, .. }
            | Self::Verify { common, .. }
            | Self::Render { common, .. }
            | Self::Roundtrip { common, .. } => common,
        }
    }

    fn inputs(&self) -> Vec<&Path> {
        match self {
            Self::SolveMinkowski { measure, .. } => vec![measure],
            Self::BlaschkeSum { x, y, .. } => vec![x, y],
            Self::Urysohn { spec, .. }
            | Self::Flatten { spec, .. }
            | Self::Pareto { spec, .. }
            | Self::Verify { spec, .. } => {
                vec![spec]
            }
            Self::CheckMajorization { mu, nu, .. } => vec![mu, nu],
            Self::Render { body, .. } => vec![body],
            Self::Roundtrip { input, .. } => vec![input],
        }
    }

    fn options(&self) -> BTreeMap<String, String> {
        let c = self.common();
        let mut o = BTreeMap::new();
        let mut put = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                o.insert(k.to_string(), v);
            }
        };
        put("grid", c.grid.map(|v| v.to_string()));
        put("tol", c.tol.map(|v| v.to_string()));
        put("max-iters", c.max_iters.map(|v| v.to_string()));
        put("seed", Some(c.seed.to_string()));
        match self {
            Self::BlaschkeSum { a, b, .. } => {
                put("a", Some(a.to_string()));
                put("b", Some(b.to_string()));
            }
            Self::CheckMajorization { affine, samples, .. } => {
                put("affine", Some(affine.to_string()));
                put("samples", Some(samples.to_string()));
            }
            _ => {}
        }
        o
    }
}

/// What a command produced: result JSON, an optional figure body, manifest
/// residuals and the exit code.
struct Outcome {
    result: Value,
    figures: Vec<SupportVector>,
    residuals: BTreeMap<String, f64>,
    code: i32,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Self {
            result,
            figures: Vec::new(),
            residuals: BTreeMap::new(),
            code: EXIT_OK,
        }
    }
}

/// Runs the command line `argv` (program name first) and returns the exit
/// code. Diagnostics go to standard error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::NonConvergence { .. } => EXIT_NONCONVERGENCE,
                _ => EXIT_INVALID,
            }
        }
    }
}

fn execute(cmd: &Command) -> Result<i32> {
    let common = cmd.common();
    let outcome = match cmd {
        Command::SolveMinkowski { measure, .. } => solve_minkowski_cmd(measure, common)?,
        Command::BlaschkeSum { x, y, a, b, .. } => blaschke_cmd(x, y, *a, *b, common)?,
        Command::Urysohn { spec, .. } => urysohn_cmd(spec, common)?,
        Command::Flatten { spec, .. } => flatten_cmd(spec, common)?,
        Command::Pareto { spec, .. } => pareto_cmd(spec, common)?,
        Command::CheckMajorization {
            mu,
            nu,
            affine,
            samples,
            ..
        } => majorization_cmd(mu, nu, *affine, *samples, common)?,
        Command::Verify { spec, .. } => verify_cmd(spec, common)?,
        Command::Render { body, .. } => render_cmd(body, common)?,
        Command::Roundtrip { input, .. } => roundtrip_cmd(input)?,
    };
    let mut manifest = RunManifest::new(cmd.name());
    manifest.digest_inputs(&cmd.inputs())?;
    manifest.options = cmd.options();
    manifest.residuals = outcome.residuals.clone();

    let text = to_pretty(&outcome.result)?;
    match &common.out {
        Some(p) => {
            std::fs::write(p, &text)?;
            manifest.add_output(p, text.as_bytes());
        }
        None => print!("{text}"),
    }
    write_figures(&outcome.figures, common, &mut manifest)?;
    if let Some(p) = &common.manifest {
        std::fs::write(p, to_pretty(&manifest)?)?;
    }
    Ok(outcome.code)
}

/// `name.ext` for one figure, `name-k.ext` for several.
fn figure_path(base: &Path, k: usize, count: usize) -> PathBuf {
    if count == 1 {
        return base.to_path_buf();
    }
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let ext = base
        .extension()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    base.with_file_name(format!("{stem}-{k}.{ext}"))
}

fn write_figures(figs: &[SupportVector], c: &Common, manifest: &mut RunManifest) -> Result<()> {
    if let Some(base) = &c.svg {
        let planar: Vec<&SupportVector> = figs.iter().filter(|f| f.dim() == 2).collect();
        if planar.is_empty() {
            return Err(Error::InvalidArgument("--svg needs a planar result".into()));
        }
        for (k, f) in planar.iter().enumerate() {
            let p = figure_path(base, k, planar.len());
            let s = svg_string(f)?;
            std::fs::write(&p, &s)?;
            manifest.add_output(&p, s.as_bytes());
        }
    }
    if let Some(base) = &c.obj {
        let spatial: Vec<&SupportVector> = figs.iter().filter(|f| f.dim() == 3).collect();
        if spatial.is_empty() {
            return Err(Error::InvalidArgument("--obj needs a spatial result".into()));
        }
        for (k, f) in spatial.iter().enumerate() {
            let p = figure_path(base, k, spatial.len());
            let s = obj_string(f)?;
            std::fs::write(&p, &s)?;
            manifest.add_output(&p, s.as_bytes());
        }
    }
    Ok(())
}

fn grid_for(dim: usize, c: &Common) -> Result<Arc<SphereGrid>> {
    match c.grid {
        Some(r) => make_grid(dim, r),
        None => default_grid(dim),
    }
}

fn load_body(f: &BodyFile, c: &Common) -> Result<SupportVector> {
    f.to_support(Some(&grid_for(f.dim(), c)?))
}

fn body_json(x: &SupportVector) -> Result<Value> {
    Ok(serde_json::to_value(BodyFile::from_body(x)?)?)
}

fn solve_options(c: &Common) -> SolveOptions {
    let mut o = SolveOptions::default();
    if let Some(m) = c.max_iters {
        o.max_iters = m;
    }
    if let Some(t) = c.tol {
        o.tol_residual = t;
    }
    o
}

fn solve_minkowski_cmd(path: &Path, c: &Common) -> Result<Outcome> {
    let m = read_measure(path)?.to_measure()?;
    if m.dim() == 2 {
        let p = solve_minkowski_2d(&m)?;
        let mut out = match c.grid {
            Some(r) => {
                let x = SupportVector::from_polytope(make_grid(2, r)?, &p)?;
                let mut o = Outcome::ok(body_json(&x)?);
                o.figures.push(x);
                o
            }
            None => {
                let mut o = Outcome::ok(serde_json::to_value(BodyFile::from_polytope(&p))?);
                o.figures
                    .push(BodyFile::from_polytope(&p).to_support(Some(&grid_for(2, c)?))?);
                o
            }
        };
        out.residuals.insert("closure".into(), p.closure_residual());
        Ok(out)
    } else {
        let sol = solve_minkowski(&m, &solve_options(c))?;
        let p = crate::support::reconstruct(&sol.body)?;
        let mut out = Outcome::ok(serde_json::to_value(BodyFile::from_polytope(&p))?);
        out.residuals.insert("residual".into(), sol.residual);
        out.residuals.insert("iterations".into(), sol.iterations as f64);
        out.figures.push(sol.body);
        if !sol.converged {
            out.code = EXIT_NONCONVERGENCE;
        }
        Ok(out)
    }
}

fn blaschke_cmd(x: &Path, y: &Path, a: f64, b: f64, c: &Common) -> Result<Outcome> {
    enum Loaded {
        Body(SupportVector),
        Measure(SphericalMeasure),
    }
    let load = |p: &Path| -> Result<Loaded> {
        Ok(match parse_body_or_measure(read_value(p)?)? {
            BodyOrMeasureFile::Body(f) => Loaded::Body(load_body(&f, c)?),
            BodyOrMeasureFile::Measure(f) => Loaded::Measure(f.to_measure()?),
        })
    };
    let (lx, ly) = (load(x)?, load(y)?);
    fn view(l: &Loaded) -> BodyOrMeasure<'_> {
        match l {
            Loaded::Body(b) => b.into(),
            Loaded::Measure(m) => m.into(),
        }
    }
    let z = blaschke_sum_with(view(&lx), view(&ly), a, b, &solve_options(c))?;
    let mut out = Outcome::ok(body_json(&z)?);
    out.residuals.insert("volume".into(), z.volume()?);
    out.figures.push(z);
    Ok(out)
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct UrysohnFile {
    kind: String,
    #[serde(default)]
    obstacle: Option<BodyFile>,
    breadth_target: f64,
    #[serde(default)]
    dim: Option<usize>,
    #[serde(default)]
    grid: Option<GridSpec>,
    #[serde(default)]
    symmetric: bool,
}

#[derive(Deserialize, Debug)]
#[serde(tag = "problem", rename_all = "snake_case", deny_unknown_fields)]
enum ProblemFile {
    Urysohn(UrysohnFile),
    Flattening {
        base: UrysohnFile,
        zbar: Vec<f64>,
        lambda_vol: f64,
        lambda_flat: f64,
    },
    VectorIso {
        ys: Vec<BodyFile>,
        target_volume: f64,
        weights: Vec<Vec<f64>>,
    },
    Leidenfrost {
        area: f64,
        lambdas: Vec<[f64; 2]>,
        #[serde(default)]
        grid3: Option<GridSpec>,
    },
}

fn read_problem(path: &Path) -> Result<ProblemFile> {
    Ok(serde_json::from_value(read_value(path)?)?)
}

fn urysohn_spec(f: &UrysohnFile, c: &Common) -> Result<UrysohnSpec> {
    let grid = |dim: usize| -> Result<Arc<SphereGrid>> {
        match (&f.grid, c.grid) {
            (Some(g), _) => make_grid(dim, g.resolution),
            (None, _) => grid_for(dim, c),
        }
    };
    let obstacle = |b: &BodyFile| -> Result<SupportVector> {
        match b {
            BodyFile::Grid { .. } => b.to_support(None),
            BodyFile::Vertices { dim, .. } => b.to_support(Some(&grid(*dim)?)),
        }
    };
    fn need<'a>(o: &'a Option<BodyFile>, kind: &str) -> Result<&'a BodyFile> {
        o.as_ref()
            .ok_or_else(|| Error::InvalidArgument(format!("a {kind} problem needs an obstacle")))
    }
    let mut spec = match f.kind.as_str() {
        "free" => {
            if f.obstacle.is_some() {
                return Err(Error::InvalidArgument("a free problem takes no obstacle".into()));
            }
            UrysohnSpec::free(grid(f.dim.unwrap_or(2))?, f.breadth_target)
        }
        "internal" => UrysohnSpec::internal(obstacle(need(&f.obstacle, &f.kind)?)?, f.breadth_target),
        "external" => UrysohnSpec::external(obstacle(need(&f.obstacle, &f.kind)?)?, f.breadth_target),
        other => return Err(Error::InvalidArgument(format!("unknown Urysohn kind `{other}`"))),
    };
    if let (Some(d), Some(_)) = (f.dim, &f.obstacle) {
        if d != spec.grid.dim() {
            return Err(Error::InvalidArgument("dim disagrees with the obstacle".into()));
        }
    }
    spec.symmetric = f.symmetric;
    Ok(spec)
}

fn urysohn_cmd(path: &Path, c: &Common) -> Result<Outcome> {
    let ProblemFile::Urysohn(f) = read_problem(path)? else {
        return Err(Error::InvalidArgument("expected an `urysohn` problem".into()));
    };
    let spec = urysohn_spec(&f, c)?;
    let sol = iso::solve_urysohn(&spec)?;
    let mut out = Outcome::ok(json!({
        "body": body_json(&sol.body)?,
        "multiplier": sol.multiplier,
        "kkt_residual": sol.kkt_residual,
        "converged": sol.converged,
    }));
    out.residuals.insert("kkt".into(), sol.kkt_residual);
    out.residuals.insert("volume".into(), sol.body.volume()?);
    out.residuals
        .insert("breadth".into(), breadth_values(sol.body.grid(), sol.body.values()));
    if !sol.converged {
        out.code = EXIT_NONCONVERGENCE;
    }
    out.figures.push(sol.body);
    Ok(out)
}

fn pareto_json(p: &ParetoPoint) -> Result<Value> {
    Ok(json!({
        "weights": p.weights,
        "objectives": p.objectives,
        "body": body_json(&p.body)?,
        "fit": p.fit.as_ref().map(|f| json!({"alphas": f.alphas, "residual": f.residual})),
    }))
}

fn flatten_cmd(path: &Path, c: &Common) -> Result<Outcome> {
    let ProblemFile::Flattening {
        base,
        zbar,
        lambda_vol,
        lambda_flat,
    } = read_problem(path)?
    else {
        return Err(Error::InvalidArgument("expected a `flattening` problem".into()));
    };
    let spec = FlatteningSpec {
        base: urysohn_spec(&base, c)?,
        zbar: Direction::new(&zbar)?,
        lambda_vol,
        lambda_flat,
    };
    let p = iso::solve_flattening(&spec)?;
    let mut out = Outcome::ok(pareto_json(&p)?);
    out.residuals.insert("volume".into(), -p.objectives[0]);
    out.residuals.insert("flat breadth".into(), p.objectives[1]);
    out.figures.push(p.body);
    Ok(out)
}

fn pareto_cmd(path: &Path, c: &Common) -> Result<Outcome> {
    match read_problem(path)? {
        ProblemFile::VectorIso {
            ys,
            target_volume,
            weights,
        } => {
            let ys: Vec<SupportVector> = ys.iter().map(|y| load_body(y, c)).collect::<Result<_>>()?;
            let front = iso::pareto_front_vector_iso(&ys, target_volume, &weights)?;
            let worst = front
                .iter()
                .filter_map(|p| p.fit.as_ref().map(|f| f.residual))
                .fold(0.0, f64::max);
            let mut out = Outcome::ok(Value::Array(front.iter().map(pareto_json).collect::<Result<_>>()?));
            out.residuals.insert("max fit residual".into(), worst);
            out.figures = front.into_iter().map(|p| p.body).collect();
            Ok(out)
        }
        ProblemFile::Leidenfrost { area, lambdas, grid3 } => {
            let g2 = grid_for(2, c)?;
            let g3 = match grid3 {
                Some(g) => make_grid(3, g.resolution)?,
                None => default_grid(3)?,
            };
            let mut entries = Vec::new();
            let mut figures = Vec::new();
            let mut worst: f64 = 0.0;
            for l in &lambdas {
                let (st, sp) = iso::leidenfrost_with(area, *l, &g2, &g3)?;
                let fit = iso::stadium_fit(&st)?;
                worst = worst.max(fit.residual);
                entries.push(json!({
                    "weights": l,
                    "stadium": body_json(&st)?,
                    "spheroid": body_json(&sp)?,
                    "fit": {"alphas": fit.alphas, "residual": fit.residual},
                }));
                figures.push(st);
                figures.push(sp);
            }
            let mut out = Outcome::ok(Value::Array(entries));
            out.residuals.insert("max fit residual".into(), worst);
            out.figures = figures;
            Ok(out)
        }
        _ => Err(Error::InvalidArgument(
            "expected a `vector_iso` or `leidenfrost` problem".into(),
        )),
    }
}

fn point_measure(f: &MeasureFile) -> Result<PointMeasure> {
    let atoms = f
        .atoms
        .iter()
        .map(|a| {
            if a.u.len() != f.dim {
                return Err(Error::InvalidArgument("atom point dimension mismatch".into()));
            }
            let mut v = Vec3::zeros();
            for (k, x) in a.u.iter().enumerate() {
                v[k] = *x;
            }
            Ok((v, a.w))
        })
        .collect::<Result<Vec<_>>>()?;
    PointMeasure::new(f.dim, atoms)
}

fn generators_json(g: &[Vec3], dim: usize) -> Value {
    json!(g
        .iter()
        .map(|v| v.iter().take(dim).copied().collect::<Vec<f64>>())
        .collect::<Vec<_>>())
}

fn majorization_cmd(mu: &Path, nu: &Path, affine: bool, samples: usize, c: &Common) -> Result<Outcome> {
    let (fm, fn_) = (read_measure(mu)?, read_measure(nu)?);
    if fm.dim != fn_.dim {
        return Err(Error::InvalidArgument("measures of different dimensions".into()));
    }
    let dim = fm.dim;
    let mut out;
    if affine {
        let (m, n) = (point_measure(&fm)?, point_measure(&fn_)?);
        let r = affine_majorizes(&m, &n)?;
        let (mut worst, mut worst_seed) = (f64::INFINITY, c.seed);
        for k in 0..samples as u64 {
            let g = choquet_gap(&m, &n, &sample_convex(dim, 4, c.seed + k));
            if g < worst {
                worst = g;
                worst_seed = c.seed + k;
            }
        }
        let sampled = sample_convex(dim, 4, worst_seed);
        out = Outcome::ok(json!({
            "holds": r.holds,
            "witness": r.witness.as_ref().map(|w| json!({"flow": w.flow})),
            "certificate": r.violating.as_ref().map(|v| json!({
                "pieces": v.pieces.iter().map(|(p, c0)| json!({"slope": p.iter().take(dim).copied().collect::<Vec<f64>>(), "offset": c0})).collect::<Vec<_>>(),
                "quadratic": v.quadratic,
            })),
            "sampled": {
                "count": samples,
                "min_gap": if samples > 0 { json!(worst) } else { Value::Null },
                "violating": (worst < -1e-9).then(|| json!({
                    "seed": worst_seed,
                    "pieces": sampled.pieces.iter().map(|(p, c0)| json!({"slope": p.iter().take(dim).copied().collect::<Vec<f64>>(), "offset": c0})).collect::<Vec<_>>(),
                    "quadratic": sampled.quadratic,
                })),
            },
        }));
        out.code = if r.holds { EXIT_OK } else { EXIT_VERIFICATION };
    } else {
        let (m, n) = (fm.to_measure()?, fn_.to_measure()?);
        let r = linear_majorizes(&m, &n)?;
        let (mut worst, mut worst_seed) = (f64::INFINITY, c.seed);
        for k in 0..samples as u64 {
            let g = reshetnyak_gap(&m, &n, &sample_sublinear(dim, 3, c.seed + k));
            if g < worst {
                worst = g;
                worst_seed = c.seed + k;
            }
        }
        let sampled = sample_sublinear(dim, 3, worst_seed);
        out = Outcome::ok(json!({
            "holds": r.holds,
            "witness": r.witness.as_ref().map(|w| WitnessFile::new(w, &m, &n)),
            "certificate": r.violating.as_ref().map(|v| json!({"generators": generators_json(&v.generators, dim)})),
            "sampled": {
                "count": samples,
                "min_gap": if samples > 0 { json!(worst) } else { Value::Null },
                "violating": (worst < -1e-9).then(|| json!({
                    "seed": worst_seed,
                    "generators": generators_json(&sampled.generators, dim),
                })),
            },
        }));
        out.code = if r.holds { EXIT_OK } else { EXIT_VERIFICATION };
    }
    Ok(out)
}

#[derive(Deserialize, Debug)]
#[serde(tag = "check", rename_all = "snake_case", deny_unknown_fields)]
enum VerifyFile {
    ExternalUrysohn {
        xbar: BodyFile,
        x0: BodyFile,
        #[serde(default)]
        mu: Option<MeasureFile>,
        #[serde(default)]
        alpha: Option<f64>,
    },
    Flattening {
        kind: String,
        xbar: BodyFile,
        x0: BodyFile,
        zbar: Vec<f64>,
        #[serde(default)]
        alpha: Option<f64>,
        #[serde(default)]
        beta: Option<f64>,
        #[serde(default)]
        x_measure: Option<MeasureFile>,
        #[serde(default)]
        convention: Option<String>,
    },
    CurrentHyperplane {
        xbar: BodyFile,
        ybar: BodyFile,
        x0: BodyFile,
        z0: Vec<f64>,
        #[serde(default)]
        x_measure: Option<MeasureFile>,
        #[serde(default)]
        y_measure: Option<MeasureFile>,
        #[serde(default)]
        alpha: Option<f64>,
        #[serde(default)]
        beta: Option<f64>,
    },
    OptimalHulls {
        xbars: Vec<BodyFile>,
        ys: Vec<BodyFile>,
        #[serde(default)]
        alphas: Option<Vec<f64>>,
        #[serde(default)]
        mus: Option<Vec<MeasureFile>>,
        #[serde(default)]
        nus: Option<Vec<MeasureFile>>,
    },
}

/// Relative contact tolerance used when witnesses are fitted.
const FIT_CONTACT: f64 = 1e-6;

fn all_or_none<T>(items: &[&Option<T>]) -> Result<bool> {
    let given = items.iter().filter(|o| o.is_some()).count();
    if given != 0 && given != items.len() {
        return Err(Error::InvalidArgument(
            "give either all witnesses or none (to fit them)".into(),
        ));
    }
    Ok(given == items.len())
}

fn verify_cmd(path: &Path, c: &Common) -> Result<Outcome> {
    let tol = c.tol.unwrap_or(2e-2);
    let spec: VerifyFile = serde_json::from_value(read_value(path)?)?;
    let report: ConditionReport = match spec {
        VerifyFile::ExternalUrysohn { xbar, x0, mu, alpha } => {
            let (xbar, x0) = (load_body(&xbar, c)?, load_body(&x0, c)?);
            if all_or_none(&[&mu.as_ref().map(|_| ()), &alpha.map(|_| ())])? {
                let mu = mu.expect("checked").to_measure()?;
                iso::verify_external_urysohn(&xbar, &x0, &mu, alpha.expect("checked"), tol)?
            } else {
                let w = iso::fit_external_witness(&xbar, &x0, FIT_CONTACT)?;
                iso::verify_external_urysohn(&xbar, &x0, &w.measure, w.alpha, tol)?
            }
        }
        VerifyFile::Flattening {
            kind,
            xbar,
            x0,
            zbar,
            alpha,
            beta,
            x_measure,
            convention,
        } => {
            let kind = match kind.as_str() {
                "internal" => FlatteningKind::Internal,
                "external" => FlatteningKind::External,
                other => return Err(Error::InvalidArgument(format!("unknown flattening kind `{other}`"))),
            };
            let convention = match convention.as_deref() {
                None | Some("pairing") => BreadthConvention::Pairing,
                Some("literal") => BreadthConvention::Literal,
                Some(other) => return Err(Error::InvalidArgument(format!("unknown convention `{other}`"))),
            };
            let (xbar, x0) = (load_body(&xbar, c)?, load_body(&x0, c)?);
            let zbar = Direction::new(&zbar)?;
            let (a, b, m) = if all_or_none(&[&alpha.map(|_| ()), &beta.map(|_| ()), &x_measure.as_ref().map(|_| ())])? {
                (
                    alpha.expect("checked"),
                    beta.expect("checked"),
                    x_measure.expect("checked").to_measure()?,
                )
            } else {
                let w = iso::fit_flattening_witness(kind, &xbar, &x0, &zbar, FIT_CONTACT)?;
                (w.alpha, w.beta, w.x_measure)
            };
            iso::verify_flattening_with(kind, &xbar, &x0, &zbar, a, b, &m, tol, convention)?
        }
        VerifyFile::CurrentHyperplane {
            xbar,
            ybar,
            x0,
            z0,
            x_measure,
            y_measure,
            alpha,
            beta,
        } => {
            let (xbar, ybar, x0) = (load_body(&xbar, c)?, load_body(&ybar, c)?, load_body(&x0, c)?);
            let z0 = Direction::new(&z0)?;
            let given = all_or_none(&[
                &x_measure.as_ref().map(|_| ()),
                &y_measure.as_ref().map(|_| ()),
                &alpha.map(|_| ()),
                &beta.map(|_| ()),
            ])?;
            let (a, b, mx, my) = if given {
                (
                    alpha.expect("checked"),
                    beta.expect("checked"),
                    x_measure.expect("checked").to_measure()?,
                    y_measure.expect("checked").to_measure()?,
                )
            } else {
                iso::fit_current_hyperplane_witness(&xbar, &ybar, &x0, &z0, FIT_CONTACT)?
            };
            iso::verify_current_hyperplane(&xbar, &ybar, &x0, &z0, &mx, &my, a, b, tol)?
        }
        VerifyFile::OptimalHulls {
            xbars,
            ys,
            alphas,
            mus,
            nus,
        } => {
            let xbars: Vec<SupportVector> = xbars.iter().map(|b| load_body(b, c)).collect::<Result<_>>()?;
            let ys: Vec<SupportVector> = ys.iter().map(|b| load_body(b, c)).collect::<Result<_>>()?;
            let given = all_or_none(&[
                &alphas.as_ref().map(|_| ()),
                &mus.as_ref().map(|_| ()),
                &nus.as_ref().map(|_| ()),
            ])?;
            let (a, m, n) = if given {
                let conv = |v: Vec<MeasureFile>| v.iter().map(|f| f.to_measure()).collect::<Result<Vec<_>>>();
                (
                    alphas.expect("checked"),
                    conv(mus.expect("checked"))?,
                    conv(nus.expect("checked"))?,
                )
            } else {
                let w = iso::fit_optimal_hulls_witness(&xbars, &ys, FIT_CONTACT)?;
                (w.alphas, w.mus, w.nus)
            };
            iso::verify_optimal_hulls(&xbars, &ys, &a, &m, &n, tol)?
        }
    };
    let mut out = Outcome::ok(report_json(&report));
    for cond in &report.conditions {
        out.residuals.insert(cond.name.clone(), cond.residual);
    }
    out.code = if report.verdict { EXIT_OK } else { EXIT_VERIFICATION };
    Ok(out)
}

fn render_cmd(path: &Path, c: &Common) -> Result<Outcome> {
    if c.svg.is_none() && c.obj.is_none() {
        return Err(Error::InvalidArgument("render needs --svg or --obj".into()));
    }
    let f = read_body(path)?;
    let x = load_body(&f, c)?;
    let mut out = Outcome::ok(json!({"dim": x.dim(), "volume": x.volume()?}));
    out.figures.push(x);
    Ok(out)
}

fn roundtrip_cmd(path: &Path) -> Result<Outcome> {
    let v = read_value(path)?;
    let out = match parse_body_or_measure(v)? {
        BodyOrMeasureFile::Body(f) => {
            // Validate by building the body; vertex lists must form a polytope.
            match &f {
                BodyFile::Grid { .. } => {
                    f.to_support(None)?;
                }
                BodyFile::Vertices { .. } => {
                    let _: Polytope = f.to_polytope()?;
                }
            }
            serde_json::to_value(&f)?
        }
        BodyOrMeasureFile::Measure(f) => serde_json::to_value(MeasureFile::from_measure(&f.to_measure()?))?,
    };
    Ok(Outcome::ok(out))
}
