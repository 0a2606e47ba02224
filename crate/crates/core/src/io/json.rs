//! JSON formats for bodies, measures, transport witnesses and reports.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geom::{Direction, Vec3};
use crate::grid::{default_grid, make_grid, GridKind, SphereGrid};
use crate::iso::ConditionReport;
use crate::majorization::TransportWitness;
use crate::measures::SphericalMeasure;
use crate::polytope::Polytope;
use crate::support::{reconstruct, SupportVector};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub resolution: usize,
}

/// A body on disk: support values on a standard grid, or a vertex list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BodyFile {
    Grid { dim: usize, grid: GridSpec, h: Vec<f64> },
    Vertices { dim: usize, vertices: Vec<Vec<f64>> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomFile {
    pub u: Vec<f64>,
    pub w: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureFile {
    pub dim: usize,
    pub atoms: Vec<AtomFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessFile {
    pub rows: Vec<Vec<f64>>,
    pub cols: Vec<Vec<f64>>,
    pub flow: Vec<Vec<f64>>,
}

fn coords(v: &Vec3, dim: usize) -> Vec<f64> {
    v.iter().take(dim).copied().collect()
}

impl BodyFile {
    /// Support values on the body's grid; the grid must be a standard one.
    pub fn from_support(x: &SupportVector) -> Result<Self> {
        let resolution = match x.grid().kind() {
            GridKind::Uniform { resolution } => *resolution,
            GridKind::Icosphere { level } => *level,
            GridKind::Custom => {
                return Err(Error::InvalidArgument(
                    "bodies on custom grids are written as vertex lists".into(),
                ))
            }
        };
        Ok(Self::Grid {
            dim: x.dim(),
            grid: GridSpec { resolution },
            h: x.values().to_vec(),
        })
    }

    pub fn from_polytope(p: &Polytope) -> Self {
        Self::Vertices {
            dim: p.dim(),
            vertices: p.vertices().iter().map(|v| coords(v, p.dim())).collect(),
        }
    }

    /// Grid form when the grid is standard, vertex form otherwise.
    pub fn from_body(x: &SupportVector) -> Result<Self> {
        match x.grid().kind() {
            GridKind::Custom => Ok(Self::from_polytope(&reconstruct(x)?)),
            _ => Self::from_support(x),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Grid { dim, .. } | Self::Vertices { dim, .. } => *dim,
        }
    }

    /// Support vector of the body. Vertex lists are sampled on `grid`, or on
    /// the default grid of their dimension.
    pub fn to_support(&self, grid: Option<&Arc<SphereGrid>>) -> Result<SupportVector> {
        match self {
            Self::Grid { dim, grid: spec, h } => SupportVector::new(make_grid(*dim, spec.resolution)?, h.clone()),
            Self::Vertices { dim, vertices } => {
                let g = match grid {
                    Some(g) if g.dim() == *dim => g.clone(),
                    Some(_) => return Err(Error::InvalidArgument("grid dimension mismatch".into())),
                    None => default_grid(*dim)?,
                };
                // Lower-dimensional hulls (segments, flat obstacles) are fine here.
                let pts = vertices
                    .iter()
                    .map(|v| {
                        if v.len() != *dim {
                            return Err(Error::InvalidArgument(format!(
                                "vertex {v:?} does not have dimension {dim}"
                            )));
                        }
                        let mut p = Vec3::zeros();
                        for (k, x) in v.iter().enumerate() {
                            p[k] = *x;
                        }
                        Ok(p)
                    })
                    .collect::<Result<Vec<_>>>()?;
                SupportVector::from_points(g, &pts)
            }
        }
    }

    pub fn to_polytope(&self) -> Result<Polytope> {
        match self {
            Self::Vertices { dim, vertices } => Polytope::from_points(*dim, vertices),
            Self::Grid { .. } => reconstruct(&self.to_support(None)?),
        }
    }
}

impl MeasureFile {
    pub fn from_measure(m: &SphericalMeasure) -> Self {
        Self {
            dim: m.dim(),
            atoms: m
                .atoms()
                .iter()
                .map(|a| AtomFile {
                    u: coords(a.dir.vec(), m.dim()),
                    w: a.w,
                })
                .collect(),
        }
    }

    pub fn to_measure(&self) -> Result<SphericalMeasure> {
        let atoms = self
            .atoms
            .iter()
            .map(|a| {
                if a.u.len() != self.dim {
                    return Err(Error::InvalidArgument(format!(
                        "atom direction {:?} does not have dimension {}",
                        a.u, self.dim
                    )));
                }
                Ok((Direction::new(&a.u)?, a.w))
            })
            .collect::<Result<Vec<_>>>()?;
        SphericalMeasure::new(self.dim, atoms)
    }
}

impl WitnessFile {
    pub fn new(w: &TransportWitness, mu: &SphericalMeasure, nu: &SphericalMeasure) -> Self {
        let dirs = |m: &SphericalMeasure| m.atoms().iter().map(|a| coords(a.dir.vec(), m.dim())).collect();
        Self {
            rows: dirs(mu),
            cols: dirs(nu),
            flow: w.flow.clone(),
        }
    }
}

/// A body file or a measure file, told apart by the `atoms` field.
#[derive(Clone, Debug)]
pub enum BodyOrMeasureFile {
    Body(BodyFile),
    Measure(MeasureFile),
}

pub fn parse_body_or_measure(v: Value) -> Result<BodyOrMeasureFile> {
    if v.get("atoms").is_some() {
        Ok(BodyOrMeasureFile::Measure(serde_json::from_value(v)?))
    } else {
        Ok(BodyOrMeasureFile::Body(serde_json::from_value(v)?))
    }
}

pub fn read_value(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn read_body(path: &Path) -> Result<BodyFile> {
    Ok(serde_json::from_value(read_value(path)?)?)
}

pub fn read_measure(path: &Path) -> Result<MeasureFile> {
    Ok(serde_json::from_value(read_value(path)?)?)
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, to_pretty(value)?)?;
    Ok(())
}

/// Report JSON mirroring [`ConditionReport`].
pub fn report_json(r: &ConditionReport) -> Value {
    let conditions: Vec<Value> = r
        .conditions
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "holds": c.holds,
                "residual": c.residual,
                "tolerance": c.tolerance,
            })
        })
        .collect();
    let measures: serde_json::Map<String, Value> = r
        .witnesses
        .measures
        .iter()
        .map(|(k, m)| {
            (
                k.clone(),
                serde_json::to_value(MeasureFile::from_measure(m)).unwrap_or(Value::Null),
            )
        })
        .collect();
    let constants: serde_json::Map<String, Value> = r.constants.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
    json!({
        "conditions": conditions,
        "witnesses": {
            "alpha": r.witnesses.alpha,
            "beta": r.witnesses.beta,
            "measures": measures,
        },
        "constants": constants,
        "verdict": r.verdict,
    })
}
