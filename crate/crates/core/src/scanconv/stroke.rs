use std::collections::BTreeSet;

use serde::Serialize;

use crate::grid::Coord;

/// How a stroke was produced, which decides the guideline checks it gets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StrokeShape {
    /// A straight edge between two points.
    Straight,
    /// A scan-converted curve, open or closed.
    Curved,
    /// Raw pixels with no path order guarantee.
    Freehand,
}

/// An ordered 8-connected pixel path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stroke {
    pub points: Vec<Coord>,
    pub closed: bool,
    pub shape: StrokeShape,
}

impl Stroke {
    pub fn open(points: Vec<Coord>, shape: StrokeShape) -> Self {
        Stroke { points, closed: false, shape }
    }

    pub fn closed(points: Vec<Coord>, shape: StrokeShape) -> Self {
        Stroke { points, closed: true, shape }
    }

    pub fn freehand(pixels: impl IntoIterator<Item = Coord>) -> Self {
        let set: BTreeSet<Coord> = pixels.into_iter().collect();
        Stroke { points: set.into_iter().collect(), closed: false, shape: StrokeShape::Freehand }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn first(&self) -> Option<Coord> {
        self.points.first().copied()
    }

    pub fn last(&self) -> Option<Coord> {
        self.points.last().copied()
    }

    pub fn pixel_set(&self) -> BTreeSet<Coord> {
        self.points.iter().copied().collect()
    }

    /// Checks the path invariants: consecutive points 8-adjacent, no immediate
    /// duplicates, and closure for closed strokes. Returns the index of the first
    /// offending point.
    pub fn path_defect(&self) -> Option<usize> {
        if self.shape == StrokeShape::Freehand {
            return None;
        }
        for (i, w) in self.points.windows(2).enumerate() {
            if !w[0].is_adjacent8(w[1]) {
                return Some(i + 1);
            }
        }
        if self.closed && self.points.len() > 1 {
            let (a, b) = (self.points[0], self.points[self.points.len() - 1]);
            if !a.is_adjacent8(b) {
                return Some(self.points.len() - 1);
            }
        }
        None
    }

    pub fn reversed(&self) -> Stroke {
        let mut s = self.clone();
        s.points.reverse();
        s
    }

    pub fn translated(&self, dx: i32, dy: i32) -> Stroke {
        Stroke {
            points: self.points.iter().map(|p| p.offset(dx, dy)).collect(),
            closed: self.closed,
            shape: self.shape,
        }
    }
}

/// A filled `size`x`size` dot whose top-left pin is `at`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Marker {
    pub at: Coord,
    pub size: u32,
}

impl Marker {
    pub fn pixels(&self) -> impl Iterator<Item = Coord> + '_ {
        let s = self.size as i32;
        (0..s).flat_map(move |dy| (0..s).map(move |dx| self.at.offset(dx, dy)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeKind {
    Line,
    Polyline,
    Polygon,
    Conic,
    Curve,
    Composite,
    Marker,
    Pixels,
}

/// A lintable unit: strokes plus the points whose role the linter needs to know.
///
/// `vertices` are intended sharp corners shared by the strokes meeting there.
/// `terminals` are intended free stroke ends and smooth joins between strokes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShapeRender {
    pub kind: ShapeKind,
    pub strokes: Vec<Stroke>,
    pub vertices: Vec<Coord>,
    pub terminals: Vec<Coord>,
    pub markers: Vec<Marker>,
}

impl ShapeRender {
    pub fn new(kind: ShapeKind) -> Self {
        ShapeRender { kind, strokes: Vec::new(), vertices: Vec::new(), terminals: Vec::new(), markers: Vec::new() }
    }

    pub fn with_stroke(mut self, stroke: Stroke) -> Self {
        self.strokes.push(stroke);
        self
    }

    pub fn stroke_pixels(&self) -> BTreeSet<Coord> {
        self.strokes.iter().flat_map(|s| s.points.iter().copied()).collect()
    }

    pub fn marker_pixels(&self) -> BTreeSet<Coord> {
        self.markers.iter().flat_map(|m| m.pixels().collect::<Vec<_>>()).collect()
    }

    /// Every pin this render raises.
    pub fn pixels(&self) -> BTreeSet<Coord> {
        let mut all = self.stroke_pixels();
        all.extend(self.marker_pixels());
        all
    }

    /// Inclusive (min, max) corners of the raised pins, if any.
    pub fn bounds(&self) -> Option<(Coord, Coord)> {
        bounds_of(self.pixels().iter().copied())
    }

    pub fn translated(&self, dx: i32, dy: i32) -> ShapeRender {
        ShapeRender {
            kind: self.kind,
            strokes: self.strokes.iter().map(|s| s.translated(dx, dy)).collect(),
            vertices: self.vertices.iter().map(|p| p.offset(dx, dy)).collect(),
            terminals: self.terminals.iter().map(|p| p.offset(dx, dy)).collect(),
            markers: self
                .markers
                .iter()
                .map(|m| Marker { at: m.at.offset(dx, dy), size: m.size })
                .collect(),
        }
    }

    /// Appends another render's content, keeping this render's kind.
    pub fn merge(&mut self, other: ShapeRender) {
        self.strokes.extend(other.strokes);
        self.vertices.extend(other.vertices);
        self.terminals.extend(other.terminals);
        self.markers.extend(other.markers);
    }
}

pub fn bounds_of(points: impl IntoIterator<Item = Coord>) -> Option<(Coord, Coord)> {
    points.into_iter().fold(None, |acc, p| match acc {
        None => Some((p, p)),
        Some((lo, hi)) => Some((
            Coord::new(lo.x.min(p.x), lo.y.min(p.y)),
            Coord::new(hi.x.max(p.x), hi.y.max(p.y)),
        )),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    HorizontalMajor,
    VerticalMajor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunDecomposition {
    pub orientation: Orientation,
    pub runs: Vec<usize>,
}

/// Splits a stroke into maximal straight runs along its dominant axis, in path order.
///
/// For a horizontal-major stroke a run is a maximal group of consecutive points
/// sharing a row; for vertical-major, sharing a column.
pub fn run_decompose(stroke: &Stroke) -> RunDecomposition {
    let orientation = match bounds_of(stroke.points.iter().copied()) {
        Some((lo, hi)) if hi.y - lo.y > hi.x - lo.x => Orientation::VerticalMajor,
        _ => Orientation::HorizontalMajor,
    };
    let key = |p: &Coord| match orientation {
        Orientation::HorizontalMajor => p.y,
        Orientation::VerticalMajor => p.x,
    };
    let mut runs: Vec<usize> = Vec::new();
    let mut prev: Option<i32> = None;
    for p in &stroke.points {
        let k = key(p);
        match (prev, runs.last_mut()) {
            (Some(q), Some(n)) if q == k => *n += 1,
            _ => runs.push(1),
        }
        prev = Some(k);
    }
    RunDecomposition { orientation, runs }
}

/// Direction of a run inside a curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunAxis {
    Horizontal,
    Vertical,
    /// A single pixel between two diagonal steps.
    Point,
}

/// A maximal straight piece of a path: `len` points starting at `start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathRun {
    pub start: usize,
    pub len: usize,
    pub axis: RunAxis,
}

impl PathRun {
    /// Slope magnitude the run stands for: 1/len for horizontal runs, len for
    /// vertical ones, 1 for a lone point.
    pub fn steepness(&self) -> f64 {
        match self.axis {
            RunAxis::Horizontal => 1.0 / self.len as f64,
            RunAxis::Vertical => self.len as f64,
            RunAxis::Point => 1.0,
        }
    }
}

/// Splits an open path at diagonal steps and at changes of step axis.
pub fn path_runs(points: &[Coord]) -> Vec<PathRun> {
    let mut runs: Vec<PathRun> = Vec::new();
    if points.is_empty() {
        return runs;
    }
    let mut cur = PathRun { start: 0, len: 1, axis: RunAxis::Point };
    for i in 1..points.len() {
        let (a, b) = (points[i - 1], points[i]);
        let step_axis = if a.y == b.y && (a.x - b.x).abs() == 1 {
            Some(RunAxis::Horizontal)
        } else if a.x == b.x && (a.y - b.y).abs() == 1 {
            Some(RunAxis::Vertical)
        } else {
            None
        };
        match step_axis {
            Some(axis) if cur.axis == RunAxis::Point || cur.axis == axis => {
                cur.axis = axis;
                cur.len += 1;
            }
            _ => {
                runs.push(cur);
                cur = PathRun { start: i, len: 1, axis: RunAxis::Point };
            }
        }
    }
    runs.push(cur);
    runs
}

/// Rotates a closed path so it starts at a run boundary, then splits it into runs.
/// Returns the rotated points alongside the runs.
pub fn closed_path_runs(points: &[Coord]) -> (Vec<Coord>, Vec<PathRun>) {
    let n = points.len();
    if n < 2 {
        return (points.to_vec(), path_runs(points));
    }
    let diagonal = |i: usize| {
        let (a, b) = (points[(i + n - 1) % n], points[i]);
        a.x != b.x && a.y != b.y
    };
    let axis_change = |i: usize| {
        let (a, b, c) = (points[(i + n - 2) % n], points[(i + n - 1) % n], points[i]);
        (a.x == b.x) != (b.x == c.x)
    };
    let start = (0..n).find(|&i| diagonal(i)).or_else(|| (0..n).find(|&i| axis_change(i))).unwrap_or(0);
    let rotated: Vec<Coord> = points[start..].iter().chain(&points[..start]).copied().collect();
    let runs = path_runs(&rotated);
    (rotated, runs)
}
