//! Pixel-art rasterization and guideline linting for binary pin-array tactile
//! displays.
//!
//! The pipeline lowers vector shape descriptions ([`scene::Item`]) to strokes
//! ([`scanconv`]), composes them onto a [`grid::PinGrid`], and checks each
//! rendered shape against the pixel-art guidelines ([`lint`]).

pub mod catalog;
pub mod codec;
pub mod grid;
pub mod lint;
pub mod scanconv;
pub mod scene;

pub use grid::{diff_grids, extent_mm, make_grid, Coord, GridDiff, GridError, GridSpec, PinGrid, PinState};
pub use lint::{lint_render, LintReport, RuleId, Violation};
pub use scanconv::{ShapeRender, Stroke};
pub use scene::{render_scene, Item, Scene};
