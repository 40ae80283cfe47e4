//! Guideline checks for rendered shapes.
//!
//! Every check reads a [`ShapeRender`]: the strokes plus the declared corner
//! vertices and free terminals. Stroke order is rebuilt from the pixel sets, so
//! a report depends only on which pins each stroke raises.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::grid::{Coord, PinGrid};
use crate::scanconv::topology::{components8, neighborhood_connected_without, trace, TraceError};
use crate::scanconv::{
    bounds_of, closed_path_runs, path_runs, run_decompose, PathRun, RunAxis, ShapeRender, Stroke, StrokeShape,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RuleId {
    G1,
    G2,
    G3,
    G4,
    G5,
    G6,
    #[serde(rename = "ADVISORY")]
    Advisory,
}

impl RuleId {
    pub fn is_guideline(self) -> bool {
        self != RuleId::Advisory
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RuleId::G1 => "G1",
            RuleId::G2 => "G2",
            RuleId::G3 => "G3",
            RuleId::G4 => "G4",
            RuleId::G5 => "G5",
            RuleId::G6 => "G6",
            RuleId::Advisory => "ADVISORY",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: RuleId,
    pub at: Vec<Coord>,
    pub message: String,
    /// Index of the scene item the violation belongs to, when linting a scene.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub item: Option<usize>,
}

impl Violation {
    fn new(rule: RuleId, at: Vec<Coord>, message: impl Into<String>) -> Self {
        Violation { rule, at, message: message.into(), item: None }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rule)?;
        if let Some(i) = self.item {
            write!(f, " item {i}")?;
        }
        write!(f, ": {}", self.message)?;
        if !self.at.is_empty() {
            let shown: Vec<String> = self.at.iter().take(8).map(|c| c.to_string()).collect();
            write!(f, " at {}", shown.join(" "))?;
            if self.at.len() > 8 {
                write!(f, " (+{} more)", self.at.len() - 8)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LintReport {
    pub pass: bool,
    pub violations: Vec<Violation>,
}

impl LintReport {
    /// Sorts into report order and derives `pass`.
    pub fn from_violations(mut violations: Vec<Violation>) -> Self {
        violations.sort_by(|a, b| (a.rule, a.item, a.at.first()).cmp(&(b.rule, b.item, b.at.first())));
        violations.dedup();
        let pass = !violations.iter().any(|v| v.rule.is_guideline());
        LintReport { pass, violations }
    }

    pub fn count(&self, rule: RuleId) -> usize {
        self.violations.iter().filter(|v| v.rule == rule).count()
    }
}

/// Stroke pins in path order, rebuilt from the pixel set. `None` for freehand
/// strokes and for pixel sets that do not form a simple path or loop.
fn traced(stroke: &Stroke) -> Option<Vec<Coord>> {
    if stroke.shape == StrokeShape::Freehand || stroke.is_empty() {
        return None;
    }
    trace(&stroke.pixel_set(), stroke.closed).ok()
}

fn vertex_set(render: &ShapeRender) -> BTreeSet<Coord> {
    render.vertices.iter().copied().collect()
}

/// Whether `p` has both a horizontal and a vertical neighbour in `set`.
fn l_arms(set: &BTreeSet<Coord>, p: Coord) -> bool {
    let horiz = [p.offset(-1, 0), p.offset(1, 0)];
    let vert = [p.offset(0, -1), p.offset(0, 1)];
    horiz.iter().any(|h| set.contains(h)) && vert.iter().any(|v| set.contains(v))
}

/// Orthogonal arm pairs at `p` forming an L, ignoring pairs anchored on a
/// declared vertex.
fn free_l_arms(set: &BTreeSet<Coord>, vertices: &BTreeSet<Coord>, p: Coord) -> bool {
    if vertices.contains(&p) {
        return false;
    }
    let horiz = [p.offset(-1, 0), p.offset(1, 0)];
    let vert = [p.offset(0, -1), p.offset(0, 1)];
    horiz.iter().any(|h| {
        set.contains(h) && !vertices.contains(h) && vert.iter().any(|v| set.contains(v) && !vertices.contains(v))
    })
}

/// Structural soundness of each stroke, reported under G1: open strokes must be
/// simple paths, closed strokes simple loops, and declared terminals must sit at
/// the ends of open strokes and inside none of them.
pub fn check_structure(render: &ShapeRender) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut open_ends: BTreeSet<Coord> = BTreeSet::new();
    let mut open_inner: BTreeSet<Coord> = BTreeSet::new();
    for (k, stroke) in render.strokes.iter().enumerate() {
        if stroke.shape == StrokeShape::Freehand || stroke.is_empty() {
            continue;
        }
        let set = stroke.pixel_set();
        match trace(&set, stroke.closed) {
            Ok(path) => {
                if !stroke.closed {
                    open_ends.insert(path[0]);
                    open_ends.insert(path[path.len() - 1]);
                    if path.len() > 2 {
                        open_inner.extend(&path[1..path.len() - 1]);
                    }
                }
            }
            Err(TraceError::Empty) => {}
            Err(TraceError::Disconnected(_)) => {
                let firsts: Vec<Coord> = components8(&set).iter().map(|c| c[0]).collect();
                let pieces = firsts.len();
                let msg = if pieces > 1 {
                    format!("gap: stroke {k} falls apart into {pieces} pieces")
                } else {
                    format!("gap: stroke {k} is only joined through a redundant corner")
                };
                out.push(Violation::new(RuleId::G1, firsts, msg));
            }
            Err(TraceError::Branching(at)) => {
                out.push(Violation::new(RuleId::G1, at, format!("branching: stroke {k} forks instead of running as one line")));
            }
            Err(TraceError::Ends(at)) => {
                let msg = if stroke.closed {
                    format!("broken outline: closed stroke {k} has loose ends")
                } else {
                    format!("broken outline: open stroke {k} needs exactly two ends, found {}", at.len())
                };
                let at = if at.is_empty() { set.iter().take(1).copied().collect() } else { at };
                out.push(Violation::new(RuleId::G1, at, msg));
            }
        }
    }
    for &t in &render.terminals {
        if !open_ends.contains(&t) || open_inner.contains(&t) {
            out.push(Violation::new(RuleId::G1, vec![t], "misplaced terminal: declared line end is not the end of a stroke"));
        }
    }
    out
}

fn block_violations(pixels: &BTreeSet<Coord>) -> (Vec<Violation>, BTreeSet<Coord>) {
    let mut out = Vec::new();
    let mut covered = BTreeSet::new();
    for &p in pixels {
        let block = [p, p.offset(1, 0), p.offset(0, 1), p.offset(1, 1)];
        if block.iter().all(|q| pixels.contains(q)) {
            covered.extend(block);
            out.push(Violation::new(RuleId::G1, block.to_vec(), "2x2 block: outline is more than one pixel wide"));
        }
    }
    (out, covered)
}

/// Pixels removable one after another in row-major passes without splitting
/// their neighbourhood, skipping declared vertices.
fn removable_doubles(pixels: &BTreeSet<Coord>, vertices: &BTreeSet<Coord>) -> Vec<Coord> {
    let mut set = pixels.clone();
    let mut removed = Vec::new();
    loop {
        let before = removed.len();
        let order: Vec<Coord> = set.iter().copied().collect();
        for p in order {
            if !vertices.contains(&p) && l_arms(&set, p) && neighborhood_connected_without(&set, p) {
                set.remove(&p);
                removed.push(p);
            }
        }
        if removed.len() == before {
            return removed;
        }
    }
}

/// Single-pixel width: no filled 2x2 block and no redundant corner pixel
/// inside any stroke. Where distinct strokes cross or run side by side is left
/// alone.
pub fn check_g1(render: &ShapeRender) -> Vec<Violation> {
    let vertices = vertex_set(render);
    let mut out = Vec::new();
    let mut covered = BTreeSet::new();
    let mut extra: BTreeSet<Coord> = BTreeSet::new();
    for stroke in &render.strokes {
        let pixels = stroke.pixel_set();
        let (blocks, in_blocks) = block_violations(&pixels);
        out.extend(blocks);
        covered.extend(in_blocks);
        extra.extend(removable_doubles(&pixels, &vertices));
    }
    for p in extra.difference(&covered) {
        out.push(Violation::new(RuleId::G1, vec![*p], "extra pixel: removable without breaking the outline"));
    }
    out
}

/// Bare-grid form of G1, for grids with no shape information.
pub fn lint_grid_g1(grid: &PinGrid) -> LintReport {
    let pixels: BTreeSet<Coord> = grid.actuated().collect();
    let (mut out, covered) = block_violations(&pixels);
    for p in removable_doubles(&pixels, &BTreeSet::new()) {
        if !covered.contains(&p) {
            out.push(Violation::new(RuleId::G1, vec![p], "extra pixel: removable without breaking the outline"));
        }
    }
    LintReport::from_violations(out)
}

/// Diagonal-only joins: flags corner pixels where a horizontal and a vertical
/// run meet orthogonally inside one stroke. Removal is simulated greedily so a
/// staircase of joins is reported once per redundant pixel.
pub fn check_g2(render: &ShapeRender) -> Vec<Violation> {
    let vertices = vertex_set(render);
    let mut flagged: BTreeSet<Coord> = BTreeSet::new();
    for stroke in &render.strokes {
        let mut set = stroke.pixel_set();
        loop {
            let order: Vec<Coord> = set.iter().copied().collect();
            let mut changed = false;
            for p in order {
                if free_l_arms(&set, &vertices, p) {
                    set.remove(&p);
                    flagged.insert(p);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }
    flagged
        .into_iter()
        .map(|p| Violation::new(RuleId::G2, vec![p], "orthogonal join: runs should meet only diagonally"))
        .collect()
}

/// Pixel spans of the runs of a straight stroke laid out along `points`.
fn run_spans(points: &[Coord], runs: &[usize]) -> Vec<Vec<Coord>> {
    let mut spans = Vec::with_capacity(runs.len());
    let mut k = 0;
    for &len in runs {
        spans.push(points[k..k + len].to_vec());
        k += len;
    }
    spans
}

/// Run-length verdict for a straight stroke: every run within one of the
/// shortest interior run, with end runs allowed one shorter still. Returns the
/// indices of offending runs.
pub fn uneven_runs(runs: &[usize]) -> Vec<usize> {
    match runs.len() {
        0 | 1 => Vec::new(),
        2 => {
            if runs[0].abs_diff(runs[1]) > 1 {
                vec![if runs[0] < runs[1] { 0 } else { 1 }]
            } else {
                Vec::new()
            }
        }
        n => {
            let interior = &runs[1..n - 1];
            let lo = *interior.iter().min().expect("non-empty");
            let hi = *interior.iter().max().expect("non-empty");
            let mut bad = Vec::new();
            if hi - lo > 1 {
                bad.extend((1..n - 1).filter(|&k| runs[k] == hi || runs[k] == lo));
            }
            let ceiling = hi.max(lo + 1);
            for k in [0, n - 1] {
                if runs[k] + 1 < lo || runs[k] > ceiling {
                    bad.push(k);
                }
            }
            bad.sort_unstable();
            bad
        }
    }
}

/// Balanced straight lines: the runs of each straight stroke are as equal as
/// possible. A one-pixel end run on a declared vertex is the corner pixel set
/// apart from the edge and is not counted.
pub fn check_g3(render: &ShapeRender) -> Vec<Violation> {
    let vertices = vertex_set(render);
    let mut out = Vec::new();
    for stroke in &render.strokes {
        if stroke.shape != StrokeShape::Straight {
            continue;
        }
        let Some(points) = traced(stroke) else { continue };
        let decomposition = run_decompose(&Stroke::open(points.clone(), StrokeShape::Straight));
        let mut spans = run_spans(&points, &decomposition.runs);
        if spans.len() > 1 && spans[0].len() == 1 && vertices.contains(&spans[0][0]) {
            spans.remove(0);
        }
        let n = spans.len();
        if n > 1 && spans[n - 1].len() == 1 && vertices.contains(&spans[n - 1][0]) {
            spans.pop();
        }
        let runs: Vec<usize> = spans.iter().map(|s| s.len()).collect();
        for k in uneven_runs(&runs) {
            out.push(Violation::new(
                RuleId::G3,
                spans[k].clone(),
                format!("uneven runs {runs:?}: run {k} breaks the balance"),
            ));
        }
    }
    out
}

/// Indices where a sequence stops being non-decreasing.
pub fn monotone_breaks(lengths: &[f64]) -> Vec<usize> {
    (1..lengths.len()).filter(|&k| lengths[k] < lengths[k - 1] - 1e-9).collect()
}

/// Indices where a sequence rises again after having fallen.
fn unimodal_breaks(values: &[f64]) -> Vec<usize> {
    let mut fallen = false;
    let mut out = Vec::new();
    for k in 1..values.len() {
        if values[k] < values[k - 1] - 1e-9 {
            fallen = true;
        } else if values[k] > values[k - 1] + 1e-9 && fallen {
            out.push(k);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Apex {
    /// Topmost or bottommost stretch; slopes steepen when leaving it.
    Level,
    /// Leftmost or rightmost stretch; slopes flatten when leaving it.
    Plumb,
}

/// Whether `run` is a local extreme of the path, given the pixels just before
/// and after it.
fn apex_kind(points: &[Coord], run: &PathRun, before: Coord, after: Coord) -> Option<Apex> {
    let first = points[run.start];
    let same_side = |a: i32, b: i32, at: i32| (a - at).signum() == (b - at).signum() && a != at;
    let level = same_side(before.y, after.y, first.y);
    let plumb = same_side(before.x, after.x, first.x);
    match run.axis {
        RunAxis::Horizontal if level => Some(Apex::Level),
        RunAxis::Vertical if plumb => Some(Apex::Plumb),
        RunAxis::Point if level => Some(Apex::Level),
        RunAxis::Point if plumb => Some(Apex::Plumb),
        _ => None,
    }
}

fn run_pixels(points: &[Coord], run: &PathRun) -> Vec<Coord> {
    points[run.start..run.start + run.len].to_vec()
}

fn blip(points: &[Coord], run: &PathRun) -> Violation {
    Violation::new(RuleId::G4, run_pixels(points, run), "blip: run lengths do not change steadily toward the apex")
}

fn check_closed_curve(points: &[Coord]) -> Vec<Violation> {
    let (points, runs) = closed_path_runs(points);
    let n = runs.len();
    if n < 2 {
        return Vec::new();
    }
    let pixel = |k: isize| points[k.rem_euclid(points.len() as isize) as usize];
    let apexes: Vec<(usize, Apex)> = runs
        .iter()
        .enumerate()
        .filter_map(|(k, r)| {
            let before = pixel(r.start as isize - 1);
            let after = pixel((r.start + r.len) as isize);
            apex_kind(&points, r, before, after).map(|a| (k, a))
        })
        .collect();
    let mut out = Vec::new();
    for (s, &(from, kind)) in apexes.iter().enumerate() {
        let to = apexes[(s + 1) % apexes.len()].0;
        let mut idx = vec![from];
        let mut k = from;
        while k != to {
            k = (k + 1) % n;
            idx.push(k);
        }
        let signed: Vec<f64> = idx
            .iter()
            .map(|&k| match kind {
                Apex::Level => runs[k].steepness(),
                Apex::Plumb => -runs[k].steepness(),
            })
            .collect();
        for b in monotone_breaks(&signed) {
            out.push(blip(&points, &runs[idx[b]]));
        }
    }
    out
}

fn check_open_curve(points: &[Coord]) -> Vec<Violation> {
    let runs = path_runs(points);
    if runs.len() < 3 {
        return Vec::new();
    }
    let inner = &runs[1..runs.len() - 1];
    let mut cuts = vec![0];
    for (k, r) in inner.iter().enumerate() {
        let before = points[r.start - 1];
        let after = points[r.start + r.len];
        if apex_kind(points, r, before, after).is_some() {
            cuts.push(k);
        }
    }
    cuts.push(inner.len() - 1);
    cuts.dedup();
    let mut out = Vec::new();
    for w in cuts.windows(2) {
        let section = &inner[w[0]..=w[1]];
        let values: Vec<f64> = section.iter().map(PathRun::steepness).collect();
        for b in unimodal_breaks(&values) {
            out.push(blip(points, &section[b]));
        }
    }
    out
}

/// Smooth curvature: along a curved stroke the run lengths grow or shrink
/// steadily between apexes, with no dip-and-rise.
pub fn check_g4(render: &ShapeRender) -> Vec<Violation> {
    let mut out = Vec::new();
    for stroke in &render.strokes {
        if stroke.shape != StrokeShape::Curved {
            continue;
        }
        let Some(points) = traced(stroke) else { continue };
        if stroke.closed {
            out.extend(check_closed_curve(&points));
        } else {
            out.extend(check_open_curve(&points));
        }
    }
    out
}

/// Pins of `points` on the extreme row or column picked by `key`.
fn extreme_line(points: &[Coord], key: impl Fn(&Coord) -> i32, pick_max: bool) -> Vec<Coord> {
    let target = if pick_max { points.iter().map(&key).max() } else { points.iter().map(&key).min() };
    let Some(t) = target else { return Vec::new() };
    let mut line: Vec<Coord> = points.iter().copied().filter(|p| key(p) == t).collect();
    line.sort();
    line
}

fn contiguous(line: &[Coord]) -> bool {
    line.windows(2).all(|w| w[0].is_adjacent4(w[1]))
}

/// Straight, matching apexes on closed curves: the extreme rows and columns
/// are single runs, opposite apexes have equal length, and all four match on a
/// square box.
pub fn check_g5(render: &ShapeRender) -> Vec<Violation> {
    let mut out = Vec::new();
    for stroke in &render.strokes {
        if stroke.shape != StrokeShape::Curved || !stroke.closed || stroke.is_empty() {
            continue;
        }
        let points = &stroke.points;
        let cols = |v: Vec<Coord>| {
            let mut v = v;
            v.sort_by_key(|p| (p.x, p.y));
            v
        };
        let top = extreme_line(points, |p| p.y, false);
        let bottom = extreme_line(points, |p| p.y, true);
        let left = cols(extreme_line(points, |p| p.x, false));
        let right = cols(extreme_line(points, |p| p.x, true));
        let mut straight = true;
        for (name, line) in [("top", &top), ("bottom", &bottom), ("left", &left), ("right", &right)] {
            if !contiguous(line) {
                straight = false;
                out.push(Violation::new(RuleId::G5, line.to_vec(), format!("{name} apex is not one straight run")));
            }
        }
        if !straight {
            continue;
        }
        if top.len() != bottom.len() {
            let mut at = top.clone();
            at.extend(&bottom);
            out.push(Violation::new(
                RuleId::G5,
                at,
                format!("apex runs differ: top {} vs bottom {}", top.len(), bottom.len()),
            ));
        }
        if left.len() != right.len() {
            let mut at = left.clone();
            at.extend(&right);
            out.push(Violation::new(
                RuleId::G5,
                at,
                format!("apex runs differ: left {} vs right {}", left.len(), right.len()),
            ));
        }
        let (lo, hi) = bounds_of(points.iter().copied()).expect("non-empty");
        if hi.x - lo.x == hi.y - lo.y && top.len() == bottom.len() && left.len() == right.len() && top.len() != left.len()
        {
            let mut at = top.clone();
            at.extend(&left);
            out.push(Violation::new(
                RuleId::G5,
                at,
                format!("apex runs differ on a round shape: top {} vs left {}", top.len(), left.len()),
            ));
        }
    }
    out
}

/// Direction along which nothing may lie past vertex `v` at the end of `path`.
fn outward(path: &[Coord], v: Coord, shape: StrokeShape) -> (i32, i32) {
    let at_start = path[0] == v;
    let back = match shape {
        StrokeShape::Straight => {
            if at_start {
                path[path.len() - 1]
            } else {
                path[0]
            }
        }
        _ => {
            let k = 3.min(path.len() - 1);
            if at_start {
                path[k]
            } else {
                path[path.len() - 1 - k]
            }
        }
    };
    (v.x - back.x, v.y - back.y)
}

/// Sharp corners: each declared vertex is raised, ends every stroke that
/// reaches it without overshooting, joins at least two strokes, and is the only
/// pin those strokes share. Only the first failed condition is reported.
pub fn check_g6(render: &ShapeRender) -> Vec<Violation> {
    let vertices = vertex_set(render);
    let mut out = Vec::new();
    let paths: Vec<(usize, Vec<Coord>)> = render
        .strokes
        .iter()
        .enumerate()
        .filter_map(|(k, s)| {
            if s.shape == StrokeShape::Freehand {
                return None;
            }
            traced(s).or_else(|| (!s.is_empty()).then(|| s.points.clone())).map(|p| (k, p))
        })
        .collect();
    for &v in &vertices {
        let incident: Vec<&(usize, Vec<Coord>)> = paths.iter().filter(|(_, p)| p.contains(&v)).collect();
        if incident.is_empty() {
            out.push(Violation::new(RuleId::G6, vec![v], "eroded corner: the vertex pin is not raised"));
            continue;
        }
        let mut beyond: BTreeSet<Coord> = BTreeSet::new();
        let mut not_end = false;
        for (k, path) in &incident {
            let stroke = &render.strokes[*k];
            let is_end = !stroke.closed && (path[0] == v || path[path.len() - 1] == v);
            if !is_end {
                not_end = true;
                continue;
            }
            if path.len() < 2 {
                continue;
            }
            let (dx, dy) = outward(path, v, stroke.shape);
            for p in path {
                let proj = (p.x - v.x) as i64 * dx as i64 + (p.y - v.y) as i64 * dy as i64;
                if proj > 0 {
                    beyond.insert(*p);
                }
            }
        }
        if not_end || !beyond.is_empty() {
            let mut at = vec![v];
            at.extend(beyond);
            out.push(Violation::new(RuleId::G6, at, "extended corner: a stroke runs on past the vertex"));
            continue;
        }
        if incident.len() < 2 {
            out.push(Violation::new(RuleId::G6, vec![v], "detached corner: fewer than two strokes meet at the vertex"));
            continue;
        }
        let mut shared: BTreeSet<Coord> = BTreeSet::new();
        for (i, (_, a)) in incident.iter().enumerate() {
            let sa: BTreeSet<Coord> = a.iter().copied().collect();
            for (_, b) in &incident[i + 1..] {
                shared.extend(b.iter().filter(|p| sa.contains(p) && !vertices.contains(p)));
            }
        }
        if !shared.is_empty() {
            let mut at = vec![v];
            at.extend(shared);
            out.push(Violation::new(RuleId::G6, at, "overlapping edges: strokes share pins beyond the vertex"));
        }
    }
    out
}

/// Markers larger than one pin read less accurately than a single dot.
pub fn check_markers(render: &ShapeRender) -> Vec<Violation> {
    render
        .markers
        .iter()
        .filter(|m| m.size > 1)
        .map(|m| {
            Violation::new(
                RuleId::Advisory,
                m.pixels().collect(),
                format!("{0}x{0} marker: a single raised dot reads more accurately", m.size),
            )
        })
        .collect()
}

/// All checks in rule order, then advisories.
pub fn lint_render(render: &ShapeRender) -> LintReport {
    let mut all = check_structure(render);
    all.extend(check_g1(render));
    all.extend(check_g2(render));
    all.extend(check_g3(render));
    all.extend(check_g4(render));
    all.extend(check_g5(render));
    all.extend(check_g6(render));
    all.extend(check_markers(render));
    LintReport::from_violations(all)
}
