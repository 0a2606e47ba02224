//! File formats and figure emitters used by the command line.

pub mod json;
pub mod manifest;
pub mod render;

pub use json::{BodyFile, MeasureFile, WitnessFile};
pub use manifest::RunManifest;
pub use render::{boundary_runs, fmt_sig, obj_string, svg_string, BoundaryRun, RunKind};
