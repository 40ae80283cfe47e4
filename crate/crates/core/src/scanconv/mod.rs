//! Integer scan conversion of lines, polygons, conics and sampled curves.

mod conic;
mod curve;
mod line;
mod stroke;
pub mod topology;

use thiserror::Error;

pub(crate) use conic::steepening_chain;
pub use conic::{conic, conic_arc, conic_arc_where, conic_loop, ellipse_distance, ArcSpan, MIN_CONIC_SIDE};
pub use curve::{default_sample_count, parametric_stroke};
pub use line::{line_render, midpoint_line, pixel_art_line, polygon, run_slice};
pub use stroke::{
    bounds_of, closed_path_runs, path_runs, run_decompose, Marker, Orientation, PathRun, RunAxis, RunDecomposition,
    ShapeKind, ShapeRender, Stroke, StrokeShape,
};
pub use topology::thin;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScanError {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("shape too small: {0}")]
    TooSmall(String),
    #[error("sampler returned a non-finite value at t = {t}")]
    Numeric { t: f64 },
}
