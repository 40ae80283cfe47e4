//! Axis-aligned ellipses (and circles) inscribed in a pixel bounding box.
//!
//! One quadrant is built as a chain of straight runs joined corner to corner,
//! running from the top apex to the right apex. The chain is chosen by dynamic
//! programming so that run steepness never decreases along it, every pixel
//! centre stays near the ideal ellipse, and the summed squared deviation is as
//! small as possible. The other three quadrants are reflections, which makes
//! the apex runs straight and pairwise equal by construction.

use std::collections::{BTreeMap, BTreeSet};

use super::stroke::{ShapeKind, ShapeRender, Stroke, StrokeShape};
use super::topology::trace;
use super::ScanError;
use crate::grid::Coord;

/// Smallest bounding-box side that still yields a recognizable ring.
pub const MIN_CONIC_SIDE: u32 = 3;

/// Largest allowed distance from a pixel centre to the ideal curve, in pixels.
const DEVIATION_CAP: f64 = 0.75;
const EPS: f64 = 1e-9;

/// Euclidean distance from `(x, y)` to the ellipse `x²/a² + y²/b² = 1`.
pub fn ellipse_distance(a: f64, b: f64, x: f64, y: f64) -> f64 {
    let (x, y) = (x.abs(), y.abs());
    if (a - b).abs() < 1e-12 {
        return (x.hypot(y) - a).abs();
    }
    if a >= b {
        distance_sorted(a, b, x, y)
    } else {
        distance_sorted(b, a, y, x)
    }
}

/// Closest-point distance for `major >= minor` and a first-quadrant point, found
/// by bisecting the monotone root function of the Lagrange condition.
fn distance_sorted(major: f64, minor: f64, x: f64, y: f64) -> f64 {
    if y > 0.0 {
        if x > 0.0 {
            let z0 = x / major;
            let z1 = y / minor;
            let g = z0 * z0 + z1 * z1 - 1.0;
            if g == 0.0 {
                return 0.0;
            }
            let ratio = (major / minor) * (major / minor);
            let s = lagrange_root(ratio, z0, z1, g);
            let cx = ratio * x / (s + ratio);
            let cy = y / (s + 1.0);
            (cx - x).hypot(cy - y)
        } else {
            (y - minor).abs()
        }
    } else {
        let numer = major * x;
        let denom = major * major - minor * minor;
        if numer < denom {
            let t = numer / denom;
            let cx = major * t;
            let cy = minor * (1.0 - t * t).sqrt();
            (cx - x).hypot(cy)
        } else {
            (x - major).abs()
        }
    }
}

fn lagrange_root(ratio: f64, z0: f64, z1: f64, g: f64) -> f64 {
    let n0 = ratio * z0;
    let mut lo = z1 - 1.0;
    let mut hi = if g < 0.0 { 0.0 } else { n0.hypot(z1) - 1.0 };
    let mut s = 0.0;
    for _ in 0..1100 {
        s = 0.5 * (lo + hi);
        if s == lo || s == hi {
            break;
        }
        let r0 = n0 / (s + ratio);
        let r1 = z1 / (s + 1.0);
        let v = r0 * r0 + r1 * r1 - 1.0;
        if v > 0.0 {
            lo = s;
        } else if v < 0.0 {
            hi = s;
        } else {
            break;
        }
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Axis {
    H,
    V,
}

/// Orders runs by steepness: long horizontal runs are most negative, a lone
/// pixel is zero, long vertical runs are most positive.
fn rank(axis: Axis, len: usize) -> i32 {
    let l = len as i32 - 1;
    match axis {
        Axis::H => -l,
        Axis::V => l,
    }
}

/// The upper-right quadrant lattice. Cell `(i, j)` is `i` columns right of the
/// vertical axis and `j` rows below the top row.
struct Quadrant {
    nx: usize,
    ny: usize,
    odd_w: bool,
    odd_h: bool,
    deviation: Vec<f64>,
}

impl Quadrant {
    fn new(width: u32, height: u32) -> Self {
        let a = (width as f64 - 1.0) / 2.0;
        let b = (height as f64 - 1.0) / 2.0;
        let odd_w = width % 2 == 1;
        let odd_h = height % 2 == 1;
        let nx = width.div_ceil(2) as usize;
        let ny = height.div_ceil(2) as usize;
        let x0 = if odd_w { 0.0 } else { 0.5 };
        let mut deviation = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                deviation.push(ellipse_distance(a, b, x0 + i as f64, b - j as f64));
            }
        }
        Quadrant { nx, ny, odd_w, odd_h, deviation }
    }

    fn dev(&self, i: usize, j: usize) -> f64 {
        self.deviation[j * self.nx + i]
    }

    /// Squared deviation, or `None` when the pixel is farther than `cap`.
    fn cost(&self, i: usize, j: usize, cap: f64) -> Option<f64> {
        let d = self.dev(i, j);
        (d <= cap + EPS).then_some(d * d)
    }

    /// Full apex-run length for a quadrant run touching the vertical axis.
    fn top_len(&self, len: usize) -> usize {
        if self.odd_w {
            2 * len - 1
        } else {
            2 * len
        }
    }

    fn side_len(&self, len: usize) -> usize {
        if self.odd_h {
            2 * len - 1
        } else {
            2 * len
        }
    }
}

type Cell = (usize, usize);
/// DP state: where a run ended and that run's steepness rank.
type State = (usize, usize, i32);

#[derive(Clone, Copy)]
struct Entry {
    cost: f64,
    parent: Option<State>,
    axis: Axis,
    len: usize,
}

fn run_cells(start: Cell, axis: Axis, len: usize) -> impl Iterator<Item = Cell> {
    (0..len).map(move |k| match axis {
        Axis::H => (start.0 + k, start.1),
        Axis::V => (start.0, start.1 + k),
    })
}

fn unwind(done: &BTreeMap<State, Entry>, last: State) -> Vec<Cell> {
    let mut runs = Vec::new();
    let mut cur = Some(last);
    while let Some(s) = cur {
        let e = done[&s];
        runs.push((s, e));
        cur = e.parent;
    }
    runs.reverse();
    let mut cells = Vec::new();
    for ((i, j, _), e) in runs {
        let start = match e.axis {
            Axis::H => (i + 1 - e.len, j),
            Axis::V => (i, j + 1 - e.len),
        };
        cells.extend(run_cells(start, e.axis, e.len));
    }
    cells
}

/// Run chains explored in order of where their last run ends, so every chain
/// is final before anything extends it.
struct Search<'q> {
    q: &'q Quadrant,
    cap: f64,
    frontier: BTreeMap<(usize, State), Entry>,
    done: BTreeMap<State, Entry>,
}

impl<'q> Search<'q> {
    fn new(q: &'q Quadrant, cap: f64) -> Self {
        Search { q, cap, frontier: BTreeMap::new(), done: BTreeMap::new() }
    }

    fn offer(&mut self, state: State, entry: Entry) {
        let key = (state.0 + state.1, state);
        match self.frontier.get(&key) {
            Some(old) if old.cost <= entry.cost => {}
            _ => {
                self.frontier.insert(key, entry);
            }
        }
    }

    /// Seeds horizontal opening runs from the top apex cell.
    fn seed(&mut self) {
        let mut cost = 0.0;
        for len in 1..=self.q.nx {
            let Some(c) = self.q.cost(len - 1, 0, self.cap) else { break };
            cost += c;
            let r = rank(Axis::H, self.q.top_len(len));
            self.offer((len - 1, 0, r), Entry { cost, parent: None, axis: Axis::H, len });
        }
    }

    fn pop(&mut self) -> Option<(State, Entry)> {
        let ((_, state), entry) = self.frontier.pop_first()?;
        self.done.insert(state, entry);
        Some((state, entry))
    }
}

/// Best quadrant chain for a non-square box, or `None` if no chain fits `cap`.
fn solve_general(q: &Quadrant, cap: f64) -> Option<(f64, Vec<Cell>)> {
    let (nx, ny) = (q.nx, q.ny);
    let mut search = Search::new(q, cap);
    search.seed();
    let mut best: Option<(f64, State)> = None;
    while let Some(((i, j, r), entry)) = search.pop() {
        if i == nx - 1 && j == ny - 1 {
            if best.is_none_or(|(c, _)| entry.cost < c) {
                best = Some((entry.cost, (i, j, r)));
            }
            continue;
        }
        let (si, sj) = (i + 1, j + 1);
        if si >= nx || sj >= ny {
            continue;
        }
        for axis in [Axis::H, Axis::V] {
            let mut cost = entry.cost;
            for len in 1.. {
                let (ei, ej) = match axis {
                    Axis::H => (si + len - 1, sj),
                    Axis::V => (si, sj + len - 1),
                };
                if ei >= nx || ej >= ny {
                    break;
                }
                let Some(c) = q.cost(ei, ej, cap) else { break };
                cost += c;
                if axis == Axis::V && len == 1 {
                    // a lone pixel is already offered as a length-1 horizontal run
                    continue;
                }
                let last = ei == nx - 1 && ej == ny - 1;
                let run_rank = if last {
                    if axis == Axis::H && len > 1 {
                        continue;
                    }
                    rank(Axis::V, q.side_len(len))
                } else {
                    rank(axis, len)
                };
                if run_rank < r {
                    continue;
                }
                search.offer((ei, ej, run_rank), Entry { cost, parent: Some((i, j, r)), axis, len });
            }
        }
    }
    best.map(|(c, s)| (c, unwind(&search.done, s)))
}

/// Best quadrant chain for a square box. Only the half up to the diagonal is
/// searched; the rest mirrors it across `i + j = n - 1`.
fn solve_square(q: &Quadrant, cap: f64) -> Option<(f64, Vec<Cell>)> {
    let n = q.nx;
    let mut search = Search::new(q, cap);
    search.seed();
    // (total cost, last state, shared diagonal cell)
    let mut best: Option<(f64, State, Option<Cell>)> = None;
    let consider = |best: &mut Option<(f64, State, Option<Cell>)>, total: f64, s: State, mid: Option<Cell>| {
        if best.is_none_or(|(c, _, _)| total < c) {
            *best = Some((total, s, mid));
        }
    };
    while let Some(((i, j, r), entry)) = search.pop() {
        if i + j == n - 2 {
            // the mirrored half continues with a diagonal step
            consider(&mut best, 2.0 * entry.cost, (i, j, r), None);
            continue;
        }
        if i + j + 1 >= n - 1 {
            continue;
        }
        let (si, sj) = (i + 1, j + 1);
        if si + sj == n - 1 {
            // a lone pixel on the diagonal, shared by both halves
            if r <= 0 {
                if let Some(c) = q.cost(si, sj, cap) {
                    consider(&mut best, 2.0 * entry.cost + c, (i, j, r), Some((si, sj)));
                }
            }
            continue;
        }
        let mut cost = entry.cost;
        for len in 1.. {
            let (ei, ej) = (si + len - 1, sj);
            if ei + ej > n - 2 || ei >= n {
                break;
            }
            let Some(c) = q.cost(ei, ej, cap) else { break };
            cost += c;
            let run_rank = rank(Axis::H, len);
            if run_rank < r {
                break;
            }
            search.offer((ei, ej, run_rank), Entry { cost, parent: Some((i, j, r)), axis: Axis::H, len });
        }
    }
    let (total, last, mid) = best?;
    let mut half = unwind(&search.done, last);
    let mirrored: Vec<Cell> = half.iter().rev().map(|&(i, j)| (n - 1 - j, n - 1 - i)).collect();
    if let Some(m) = mid {
        half.push(m);
    }
    half.extend(mirrored);
    Some((total, half))
}

fn solve(q: &Quadrant, square: bool, cap: f64) -> Option<(f64, Vec<Cell>)> {
    if square {
        solve_square(q, cap)
    } else {
        solve_general(q, cap)
    }
}

/// Chain within the deviation cap. When the cap cannot be met, the smallest
/// achievable maximum deviation is used as the cap instead.
fn capped_chain(q: &Quadrant, square: bool) -> Vec<Cell> {
    if let Some((_, cells)) = solve(q, square, DEVIATION_CAP) {
        return cells;
    }
    let mut caps: Vec<f64> = q.deviation.iter().copied().filter(|&d| d > DEVIATION_CAP).collect();
    caps.sort_by(f64::total_cmp);
    caps.dedup();
    let (mut lo, mut hi) = (0, caps.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if solve(q, square, caps[mid]).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    solve(q, square, caps[lo]).expect("the largest deviation admits every chain").1
}

fn quadrant_chain(width: u32, height: u32) -> Vec<Cell> {
    capped_chain(&Quadrant::new(width, height), width == height)
}

/// Run chain through an `nx` x `ny` lattice from cell `(0, 0)` to
/// `(nx - 1, ny - 1)`, moving right and down, whose runs steepen steadily.
///
/// The first run is horizontal and continues in mirror image to the left of
/// column 0, sharing its first cell when `apex_shared`. The last run is
/// vertical and continues beyond the last row, sharing its last cell when
/// `end_shared`. `deviation` holds each cell's distance to the ideal curve in
/// row-major order.
pub(crate) fn steepening_chain(
    nx: usize,
    ny: usize,
    apex_shared: bool,
    end_shared: bool,
    deviation: Vec<f64>,
) -> Vec<(usize, usize)> {
    assert!(nx >= 1 && ny >= 2 && deviation.len() == nx * ny);
    let q = Quadrant { nx, ny, odd_w: apex_shared, odd_h: end_shared, deviation };
    capped_chain(&q, false)
}

fn loop_pixels(top_left: Coord, width: u32, height: u32) -> BTreeSet<Coord> {
    let (w, h) = (width as i32, height as i32);
    let mut set = BTreeSet::new();
    for (i, j) in quadrant_chain(width, height) {
        let right = w / 2 + i as i32;
        let left = w - 1 - right;
        let (top, bottom) = (j as i32, h - 1 - j as i32);
        for (x, y) in [(right, top), (left, top), (right, bottom), (left, bottom)] {
            set.insert(top_left.offset(x, y));
        }
    }
    set
}

fn check_size(width: u32, height: u32) -> Result<(), ScanError> {
    if width < MIN_CONIC_SIDE || height < MIN_CONIC_SIDE {
        return Err(ScanError::TooSmall(format!(
            "conic needs a bounding box of at least {MIN_CONIC_SIDE}x{MIN_CONIC_SIDE}, got {width}x{height}"
        )));
    }
    Ok(())
}

fn closed_loop(top_left: Coord, width: u32, height: u32) -> Result<Vec<Coord>, ScanError> {
    check_size(width, height)?;
    let set = loop_pixels(top_left, width, height);
    let path = trace(&set, true).expect("reflected quadrant chains form a simple loop");
    Ok(path)
}

/// Closed ellipse filling the `width`x`height` box at `top_left`.
///
/// The loop runs clockwise from the left pixel of the top apex run.
pub fn conic(top_left: Coord, width: u32, height: u32) -> Result<ShapeRender, ScanError> {
    let path = closed_loop(top_left, width, height)?;
    Ok(ShapeRender::new(ShapeKind::Conic).with_stroke(Stroke::closed(path, StrokeShape::Curved)))
}

/// Which half of an ellipse [`conic_arc`] keeps. Halves include the middle
/// row or column when the box side is odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcSpan {
    Upper,
    Lower,
    Left,
    Right,
}

/// Half of the ellipse in the given box, as an open stroke in clockwise order.
pub fn conic_arc(top_left: Coord, width: u32, height: u32, span: ArcSpan) -> Result<Stroke, ScanError> {
    let (w, h) = (width as i32, height as i32);
    conic_arc_where(top_left, width, height, |p| {
        let (x, y) = (p.x - top_left.x, p.y - top_left.y);
        match span {
            ArcSpan::Upper => 2 * y < h,
            ArcSpan::Lower => 2 * y >= h - 1,
            ArcSpan::Left => 2 * x < w,
            ArcSpan::Right => 2 * x >= w - 1,
        }
    })
}

/// The stretch of the ellipse loop whose pixels satisfy `keep`, in clockwise
/// order. `keep` must select one unbroken stretch of the loop.
pub fn conic_arc_where(
    top_left: Coord,
    width: u32,
    height: u32,
    keep: impl Fn(Coord) -> bool,
) -> Result<Stroke, ScanError> {
    let path = closed_loop(top_left, width, height)?;
    let n = path.len();
    let start = (0..n).find(|&k| keep(path[k]) && !keep(path[(k + n - 1) % n])).unwrap_or(0);
    let points: Vec<Coord> = (0..n).map(|k| path[(start + k) % n]).take_while(|&p| keep(p)).collect();
    if points.is_empty() {
        return Err(ScanError::Argument("arc selection keeps no pixel of the loop".into()));
    }
    Ok(Stroke::open(points, StrokeShape::Curved))
}

/// Clockwise loop pixels of the ellipse in the given box.
pub fn conic_loop(top_left: Coord, width: u32, height: u32) -> Result<Vec<Coord>, ScanError> {
    closed_loop(top_left, width, height)
}
