//! Binary pin grid: physical spec, coordinates, single-pin edits and diffs.
//!
//! Coordinates put the origin at the top-left pin with `y` growing downward.
//! Grids are values; every edit returns a new grid.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_PITCH_MM: f64 = 2.5;
pub const DEFAULT_DOT_WIDTH_MM: f64 = 1.2;
pub const DEFAULT_DOT_HEIGHT_MM: f64 = 0.4;
/// Side length of the reference display, in pins.
pub const DESK_SIDE_PX: u32 = 27;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("invalid grid spec: {0}")]
    InvalidSpec(String),
    #[error("coordinate {at} is outside the {width}x{height} grid")]
    OutOfBounds { at: Coord, width: u32, height: u32 },
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("grid specs differ: {0} vs {1}")]
    SpecMismatch(String, String),
}

/// A pin position. Ordered row-major: by `y`, then `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[i32; 2]", into = "[i32; 2]")]
pub struct Coord {
    pub x: i32,
    pub y: i32,
}

impl Coord {
    pub const fn new(x: i32, y: i32) -> Self {
        Coord { x, y }
    }

    pub fn offset(self, dx: i32, dy: i32) -> Self {
        Coord::new(self.x + dx, self.y + dy)
    }

    /// Chebyshev adjacency (the 8-neighbourhood), excluding the point itself.
    pub fn is_adjacent8(self, other: Coord) -> bool {
        self != other && (self.x - other.x).abs() <= 1 && (self.y - other.y).abs() <= 1
    }

    pub fn is_adjacent4(self, other: Coord) -> bool {
        (self.x - other.x).abs() + (self.y - other.y).abs() == 1
    }

    pub fn neighbors8(self) -> [Coord; 8] {
        [
            self.offset(-1, -1),
            self.offset(0, -1),
            self.offset(1, -1),
            self.offset(-1, 0),
            self.offset(1, 0),
            self.offset(-1, 1),
            self.offset(0, 1),
            self.offset(1, 1),
        ]
    }

    pub fn neighbors4(self) -> [Coord; 4] {
        [self.offset(0, -1), self.offset(-1, 0), self.offset(1, 0), self.offset(0, 1)]
    }
}

impl Ord for Coord {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

impl PartialOrd for Coord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<[i32; 2]> for Coord {
    fn from([x, y]: [i32; 2]) -> Self {
        Coord { x, y }
    }
}

impl From<Coord> for [i32; 2] {
    fn from(c: Coord) -> Self {
        [c.x, c.y]
    }
}

impl From<(i32, i32)> for Coord {
    fn from((x, y): (i32, i32)) -> Self {
        Coord { x, y }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PinState {
    Actuated,
    Flat,
}

impl From<bool> for PinState {
    fn from(up: bool) -> Self {
        if up {
            PinState::Actuated
        } else {
            PinState::Flat
        }
    }
}

/// Display geometry. Field names are the interchange keys.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub width: u32,
    pub height: u32,
    #[serde(default = "default_pitch")]
    pub pitch_mm: f64,
    #[serde(default = "default_dot_width")]
    pub dot_width_mm: f64,
    #[serde(default = "default_dot_height")]
    pub dot_height_mm: f64,
}

fn default_pitch() -> f64 {
    DEFAULT_PITCH_MM
}
fn default_dot_width() -> f64 {
    DEFAULT_DOT_WIDTH_MM
}
fn default_dot_height() -> f64 {
    DEFAULT_DOT_HEIGHT_MM
}

impl Default for GridSpec {
    /// The 27x27 desk display.
    fn default() -> Self {
        GridSpec::new(DESK_SIDE_PX, DESK_SIDE_PX)
    }
}

impl GridSpec {
    pub fn new(width: u32, height: u32) -> Self {
        GridSpec {
            width,
            height,
            pitch_mm: DEFAULT_PITCH_MM,
            dot_width_mm: DEFAULT_DOT_WIDTH_MM,
            dot_height_mm: DEFAULT_DOT_HEIGHT_MM,
        }
    }

    pub fn validate(&self) -> Result<(), GridError> {
        if self.width == 0 || self.height == 0 {
            return Err(GridError::InvalidSpec(format!(
                "dimensions must be positive, got {}x{}",
                self.width, self.height
            )));
        }
        let finite = [self.pitch_mm, self.dot_width_mm, self.dot_height_mm]
            .iter()
            .all(|v| v.is_finite());
        if !finite || self.dot_width_mm <= 0.0 || self.pitch_mm <= self.dot_width_mm {
            return Err(GridError::InvalidSpec(format!(
                "need pitch > dot width > 0, got pitch {} and dot width {}",
                self.pitch_mm, self.dot_width_mm
            )));
        }
        if self.dot_height_mm <= 0.0 {
            return Err(GridError::InvalidSpec(format!(
                "dot height must be positive, got {}",
                self.dot_height_mm
            )));
        }
        Ok(())
    }

    pub fn contains(&self, at: Coord) -> bool {
        at.x >= 0 && at.y >= 0 && (at.x as i64) < self.width as i64 && (at.y as i64) < self.height as i64
    }

    pub fn cell_count(&self) -> usize {
        self.width as usize * self.height as usize
    }

    /// Physical (width, height) of the active area in millimetres.
    pub fn extent(&self) -> (f64, f64) {
        (extent_mm(self.width, self.pitch_mm), extent_mm(self.height, self.pitch_mm))
    }

    fn describe(&self) -> String {
        format!(
            "{}x{} @ {}mm (dot {}x{}mm)",
            self.width, self.height, self.pitch_mm, self.dot_width_mm, self.dot_height_mm
        )
    }
}

/// Physical size of a run of `n_px` pins. Counts pin cells, not gaps between centres,
/// so 27 pins at 2.5 mm span 67.5 mm.
pub fn extent_mm(n_px: u32, pitch_mm: f64) -> f64 {
    n_px as f64 * pitch_mm
}

#[derive(Clone, PartialEq)]
pub struct PinGrid {
    spec: GridSpec,
    cells: Vec<bool>,
}

impl PinGrid {
    /// An all-flat grid.
    pub fn new(spec: GridSpec) -> Result<Self, GridError> {
        spec.validate()?;
        Ok(PinGrid { spec, cells: vec![false; spec.cell_count()] })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn width(&self) -> u32 {
        self.spec.width
    }

    pub fn height(&self) -> u32 {
        self.spec.height
    }

    fn index(&self, at: Coord) -> Option<usize> {
        self.spec
            .contains(at)
            .then(|| at.y as usize * self.spec.width as usize + at.x as usize)
    }

    fn bounds_error(&self, at: Coord) -> GridError {
        GridError::OutOfBounds { at, width: self.spec.width, height: self.spec.height }
    }

    /// Out-of-grid coordinates read as flat.
    pub fn get(&self, at: Coord) -> bool {
        self.index(at).is_some_and(|i| self.cells[i])
    }

    pub fn state(&self, at: Coord) -> Result<PinState, GridError> {
        self.index(at).map(|i| self.cells[i].into()).ok_or_else(|| self.bounds_error(at))
    }

    pub fn actuated_count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    /// Actuated pins in row-major order.
    pub fn actuated(&self) -> impl Iterator<Item = Coord> + '_ {
        let w = self.spec.width as usize;
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, &c)| c)
            .map(move |(i, _)| Coord::new((i % w) as i32, (i / w) as i32))
    }

    pub fn rows(&self) -> impl Iterator<Item = &[bool]> {
        self.cells.chunks(self.spec.width as usize)
    }

    pub(crate) fn set_mut(&mut self, at: Coord, up: bool) -> Result<(), GridError> {
        let i = self.index(at).ok_or_else(|| self.bounds_error(at))?;
        self.cells[i] = up;
        Ok(())
    }

    /// Sets pins that fall inside the grid and ignores the rest.
    pub(crate) fn set_clipped(&mut self, at: Coord, up: bool) {
        if let Some(i) = self.index(at) {
            self.cells[i] = up;
        }
    }

    pub fn edit_pixel(&self, at: Coord, state: PinState) -> Result<PinGrid, GridError> {
        let mut next = self.clone();
        next.set_mut(at, state == PinState::Actuated)?;
        Ok(next)
    }

    /// Flattens every pin of the rectangle that lies inside the grid. Parts of the
    /// rectangle outside the grid are ignored.
    pub fn erase_rect(&self, top_left: Coord, width: i32, height: i32) -> Result<PinGrid, GridError> {
        if width <= 0 || height <= 0 {
            return Err(GridError::Argument(format!(
                "erase rectangle must have positive size, got {width}x{height}"
            )));
        }
        let mut next = self.clone();
        for y in top_left.y..top_left.y.saturating_add(height) {
            for x in top_left.x..top_left.x.saturating_add(width) {
                next.set_clipped(Coord::new(x, y), false);
            }
        }
        Ok(next)
    }

    pub fn diff(&self, after: &PinGrid) -> Result<GridDiff, GridError> {
        diff_grids(self, after)
    }

    /// Applies removals, then additions. Coordinates outside the grid are an error.
    pub fn apply(&self, diff: &GridDiff) -> Result<PinGrid, GridError> {
        let mut next = self.clone();
        for &at in &diff.removed {
            next.set_mut(at, false)?;
        }
        for &at in &diff.added {
            next.set_mut(at, true)?;
        }
        Ok(next)
    }

    pub fn from_coords(spec: GridSpec, coords: impl IntoIterator<Item = Coord>) -> Result<PinGrid, GridError> {
        let mut grid = PinGrid::new(spec)?;
        for at in coords {
            grid.set_mut(at, true)?;
        }
        Ok(grid)
    }
}

impl fmt::Debug for PinGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PinGrid {}", self.spec.describe())?;
        for row in self.rows() {
            let line: String = row.iter().map(|&c| if c { 'o' } else { '.' }).collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

pub fn make_grid(spec: GridSpec) -> Result<PinGrid, GridError> {
    PinGrid::new(spec)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridDiff {
    pub added: BTreeSet<Coord>,
    pub removed: BTreeSet<Coord>,
}

impl GridDiff {
    pub fn is_empty(&self) -> bool {
        self.added.is_empty() && self.removed.is_empty()
    }
}

pub fn diff_grids(before: &PinGrid, after: &PinGrid) -> Result<GridDiff, GridError> {
    if before.spec != after.spec {
        return Err(GridError::SpecMismatch(before.spec.describe(), after.spec.describe()));
    }
    let mut diff = GridDiff::default();
    let w = before.spec.width as usize;
    for (i, (&b, &a)) in before.cells.iter().zip(&after.cells).enumerate() {
        let at = Coord::new((i % w) as i32, (i / w) as i32);
        match (b, a) {
            (false, true) => {
                diff.added.insert(at);
            }
            (true, false) => {
                diff.removed.insert(at);
            }
            _ => {}
        }
    }
    Ok(diff)
}
