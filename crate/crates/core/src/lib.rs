//! Convex bodies on discretized spheres: support functions, surface-area
//! measures, the Minkowski problem, measure majorization, and Urysohn-type
//! isoperimetric problems with optimality-condition verifiers.
//!
//! Bodies are represented by their support values on a [`SphereGrid`]
//! ([`SupportVector`]) or explicitly as a [`Polytope`]; surface-area data by an
//! atomic [`SphericalMeasure`].

pub mod cli;
pub(crate) mod convexify;
pub mod error;
pub mod geom;
pub mod grid;
pub mod hull3;
pub mod io;
pub mod iso;
pub mod lp;
pub mod majorization;
pub mod measures;
pub mod minkowski_solver;
pub mod polytope;
pub mod support;
pub mod tolerance;

pub use error::{Error, Result};
pub use geom::{Direction, Vec3};
pub use grid::{default_grid, make_grid, SphereGrid};
pub use iso::{
    leidenfrost, lens_analytic, pareto_front_vector_iso, rotate_lift, solve_flattening, solve_urysohn,
    verify_current_hyperplane, verify_external_urysohn, verify_flattening, verify_optimal_hulls, ConditionReport,
    FlatteningSpec, ParetoPoint, UrysohnKind, UrysohnSpec,
};
pub use majorization::{
    affine_majorizes, choquet_gap, linear_majorization_residual, linear_majorizes, reshetnyak_gap, sample_convex,
    sample_sublinear, AffineMajorization, ConvexFunctional, LinearMajorization, PointMeasure, SublinearFunctional,
    TransportWitness,
};
pub use measures::{
    ball_measure, blaschke_sum, extended_volume, integral_breadth, mixed_volume_v1, pairing, surface_area_measure,
    surface_area_measure_of, validate_alexandrov, AlexandrovReport, Atom, BodyOrMeasure, SphericalMeasure,
};
pub use minkowski_solver::{
    solve_minkowski, solve_minkowski_2d, solve_minkowski_3d, solve_residual, SolveOptions, SolveOutcome, StepRule,
};
pub use polytope::{Facet, Polytope};
pub use support::{
    contains, convexify, directional_breadth, minkowski_combine, reconstruct, steiner_normalize, steiner_point,
    support_distance, volume, SupportFunction, SupportVector,
};
