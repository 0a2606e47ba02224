//! Numerical tolerances shared by every comparison in the crate.
//!
//! All invariants are checked against these values; change them in one place
//! when running grid-refinement studies.

/// Unit-norm tolerance for [`crate::Direction`].
pub const UNIT_NORM: f64 = 1e-12;
/// Support-value agreement (containment, reconstruction, tightness).
pub const SUPPORT: f64 = 1e-9;
/// Relative closure residual of a polytope or measure.
pub const CLOSURE: f64 = 1e-8;
/// Angular snapping tolerance for measure atoms onto a grid.
pub const SNAP: f64 = 1e-10;
/// Relative tolerance for atom-by-atom measure equality.
pub const MEASURE_EQ: f64 = 1e-8;
/// Absolute feasibility tolerance of the simplex solver.
pub const LP_FEAS: f64 = 1e-9;
/// Relative volume below which a reconstructed body is reported degenerate.
pub const DEGENERATE_VOLUME: f64 = 1e-12;

/// Runtime-overridable bundle of the constants above.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub unit_norm: f64,
    pub support: f64,
    pub closure: f64,
    pub snap: f64,
    pub measure_eq: f64,
    pub lp_feas: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            unit_norm: UNIT_NORM,
            support: SUPPORT,
            closure: CLOSURE,
            snap: SNAP,
            measure_eq: MEASURE_EQ,
            lp_feas: LP_FEAS,
        }
    }
}
