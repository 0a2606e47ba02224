//! Urysohn-type isoperimetric problems: solvers, analytic shapes, witness
//! fitting and optimality-condition verifiers.

mod fit;
mod lift;
pub(crate) mod qp2d;
mod urysohn;
mod vector;
mod verify;

use std::sync::Arc;

use crate::geom::Direction;
use crate::grid::SphereGrid;
use crate::measures::SphericalMeasure;
use crate::support::SupportVector;

pub use fit::{
    fit_current_hyperplane_witness, fit_external_witness, fit_flattening_witness, fit_internal_witness,
    fit_optimal_hulls_witness, ContactWitness, FlatteningWitness, HullsWitness,
};
pub use lift::rotate_lift;
pub use urysohn::{lens_analytic, lens_radius_for_breadth, solve_flattening, solve_urysohn, UrysohnSolution};
pub use vector::{leidenfrost, leidenfrost_with, pareto_front_vector_iso, stadium_fit, CombinationFit};
pub use verify::{
    verify_current_hyperplane, verify_external_urysohn, verify_flattening, verify_flattening_with,
    verify_optimal_hulls, BreadthConvention, FlatteningKind,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UrysohnKind {
    Free,
    Internal,
    External,
}

/// Maximize volume at fixed integral breadth, optionally inside (internal)
/// or around (external) an obstacle.
#[derive(Clone, Debug)]
pub struct UrysohnSpec {
    pub kind: UrysohnKind,
    pub obstacle: Option<SupportVector>,
    pub breadth_target: f64,
    pub grid: Arc<SphereGrid>,
    /// Restrict to bodies symmetric about the origin.
    pub symmetric: bool,
}

impl UrysohnSpec {
    pub fn free(grid: Arc<SphereGrid>, breadth_target: f64) -> Self {
        Self {
            kind: UrysohnKind::Free,
            obstacle: None,
            breadth_target,
            grid,
            symmetric: false,
        }
    }

    pub fn internal(obstacle: SupportVector, breadth_target: f64) -> Self {
        Self {
            kind: UrysohnKind::Internal,
            grid: obstacle.grid().clone(),
            obstacle: Some(obstacle),
            breadth_target,
            symmetric: false,
        }
    }

    pub fn external(obstacle: SupportVector, breadth_target: f64) -> Self {
        Self {
            kind: UrysohnKind::External,
            grid: obstacle.grid().clone(),
            obstacle: Some(obstacle),
            breadth_target,
            symmetric: false,
        }
    }
}

/// Weighted-sum scalarization of `(-V, b_z̄)`:
/// maximize `λ_vol·V^{1/N} - λ_flat·(h(z̄) + h(-z̄))`.
#[derive(Clone, Debug)]
pub struct FlatteningSpec {
    pub base: UrysohnSpec,
    pub zbar: Direction,
    pub lambda_vol: f64,
    pub lambda_flat: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Condition {
    pub name: String,
    pub holds: bool,
    pub residual: f64,
    pub tolerance: f64,
}

/// Witness data a verdict refers to.
#[derive(Clone, Debug, Default)]
pub struct Witnesses {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub measures: Vec<(String, SphericalMeasure)>,
}

#[derive(Clone, Debug)]
pub struct ConditionReport {
    pub conditions: Vec<Condition>,
    pub witnesses: Witnesses,
    /// Conventions the residuals depend on (for instance breadth constants).
    pub constants: Vec<(String, f64)>,
    pub verdict: bool,
}

impl ConditionReport {
    pub(crate) fn new(witnesses: Witnesses) -> Self {
        Self {
            conditions: Vec::new(),
            witnesses,
            constants: Vec::new(),
            verdict: true,
        }
    }

    pub(crate) fn push(&mut self, name: &str, residual: f64, tolerance: f64) {
        let holds = residual <= tolerance;
        self.verdict &= holds;
        self.conditions.push(Condition {
            name: name.to_string(),
            holds,
            residual,
            tolerance,
        });
    }

    pub fn condition(&self, name: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

#[derive(Clone, Debug)]
pub struct ParetoPoint {
    pub weights: Vec<f64>,
    pub body: SupportVector,
    pub objectives: Vec<f64>,
    pub fit: Option<CombinationFit>,
}
