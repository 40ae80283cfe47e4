use std::collections::BTreeSet;

use super::stroke::{ShapeKind, ShapeRender, Stroke, StrokeShape};
use super::ScanError;
use crate::grid::Coord;

/// Integer midpoint line from `p0` to `p1`, inclusive of both ends.
///
/// Steps along the major axis one pin at a time and takes the candidate closest
/// to the ideal segment. An exact midpoint hit resolves to the smaller minor
/// coordinate, so the pixel set does not depend on the direction of travel.
pub fn midpoint_line(p0: Coord, p1: Coord) -> Stroke {
    let (dx, dy) = (p1.x - p0.x, p1.y - p0.y);
    let x_major = dx.abs() >= dy.abs();
    let (major, minor) = if x_major { (dx, dy) } else { (dy, dx) };
    let (da, db) = (major.abs() as i64, minor.abs() as i64);
    let (sa, sb) = (major.signum(), minor.signum());
    // decision = 2 * (ideal minor offset - (offset + 1/2)) * da
    let mut decision = -da;
    let mut offset = 0i32;
    let mut points = Vec::with_capacity(da as usize + 1);
    points.push(p0);
    for k in 1..=da as i32 {
        decision += 2 * db;
        if decision > 0 || (decision == 0 && sb < 0) {
            offset += 1;
            decision -= 2 * da;
        }
        let (a, b) = (k * sa, offset * sb);
        points.push(if x_major { p0.offset(a, b) } else { p0.offset(b, a) });
    }
    Stroke::open(points, StrokeShape::Straight)
}

/// Lengths of `n_runs` runs covering `n_px` pixels, each of length
/// floor(n_px/n_runs) or ceil(n_px/n_runs).
///
/// Boundary `i` sits at floor((2*i*n_px + n_runs) / (2*n_runs)), i.e. the
/// rounded ideal position `i*n_px/n_runs`.
pub fn run_slice(n_px: usize, n_runs: usize) -> Result<Vec<usize>, ScanError> {
    if n_runs == 0 || n_px < n_runs {
        return Err(ScanError::Argument(format!(
            "cannot split {n_px} pixels into {n_runs} non-empty runs"
        )));
    }
    let boundary = |i: usize| (2 * i * n_px + n_runs) / (2 * n_runs);
    Ok((0..n_runs).map(|i| boundary(i + 1) - boundary(i)).collect())
}

/// Run layout of a stepped line. `split_start`/`split_end` give the end pixel a
/// run of its own so the line leaves that end on a diagonal step.
fn edge_runs(n_px: usize, n_runs: usize, split_start: bool, split_end: bool) -> Vec<usize> {
    let mut lead = usize::from(split_start && n_runs >= 2);
    let mut tail = usize::from(split_end && n_runs >= 2 + lead);
    if n_runs == 1 {
        lead = 0;
        tail = 0;
    }
    let inner_runs = n_runs - lead - tail;
    let inner_px = n_px - lead - tail;
    let mut runs = Vec::with_capacity(n_runs);
    runs.extend(std::iter::repeat_n(1, lead));
    runs.extend(run_slice(inner_px, inner_runs).expect("inner px >= inner runs"));
    runs.extend(std::iter::repeat_n(1, tail));
    runs
}

/// Lays runs along the major axis from `start` to `end`, one minor step between runs.
fn stepped(start: Coord, end: Coord, runs: &[usize]) -> Vec<Coord> {
    let (dx, dy) = (end.x - start.x, end.y - start.y);
    let x_major = dx.abs() >= dy.abs();
    let (sa, sb) = if x_major { (dx.signum(), dy.signum()) } else { (dy.signum(), dx.signum()) };
    let mut points = Vec::with_capacity(runs.iter().sum());
    let mut a = 0;
    for (b, &len) in runs.iter().enumerate() {
        for _ in 0..len {
            let (ma, mb) = (a * sa, b as i32 * sb);
            points.push(if x_major { start.offset(ma, mb) } else { start.offset(mb, ma) });
            a += 1;
        }
    }
    points
}

fn extents(p0: Coord, p1: Coord) -> (usize, usize) {
    let (dx, dy) = ((p1.x - p0.x).unsigned_abs() as usize, (p1.y - p0.y).unsigned_abs() as usize);
    (dx.max(dy), dx.min(dy))
}

/// Stepped line whose end runs can be split off; always laid out from the
/// row-major-first endpoint, then reversed if needed.
fn stepped_line(p0: Coord, p1: Coord, split_p0: bool, split_p1: bool) -> Stroke {
    let (major, minor) = extents(p0, p1);
    let forward = p0 <= p1;
    let (s, e, split_s, split_e) = if forward { (p0, p1, split_p0, split_p1) } else { (p1, p0, split_p1, split_p0) };
    let runs = edge_runs(major + 1, minor + 1, split_s, split_e);
    let mut points = stepped(s, e, &runs);
    if !forward {
        points.reverse();
    }
    Stroke::open(points, StrokeShape::Straight)
}

/// Pixel-art line: one pixel per major-axis step, `minor + 1` runs of balanced
/// length joined only corner to corner.
///
/// Runs are laid out from whichever endpoint comes first in row-major order, so
/// swapping the endpoints yields exactly the reversed pixel sequence.
pub fn pixel_art_line(p0: Coord, p1: Coord) -> Stroke {
    stepped_line(p0, p1, false, false)
}

/// First step direction leaving `from` along `stroke`, where `from` is one end.
fn leaving_step(stroke: &Stroke, from: Coord) -> Option<(i32, i32)> {
    let pts = &stroke.points;
    if pts.len() < 2 {
        return None;
    }
    let next = if pts[0] == from { pts[1] } else { pts[pts.len() - 2] };
    Some((next.x - from.x, next.y - from.y))
}

fn shared_beyond(a: &Stroke, b: &Stroke, at: Coord) -> bool {
    let sa: BTreeSet<Coord> = a.pixel_set();
    b.points.iter().any(|p| *p != at && sa.contains(p))
}

/// Whether the two edges together fill a 2x2 block.
fn form_block(a: &Stroke, b: &Stroke) -> bool {
    let union: BTreeSet<Coord> = a.points.iter().chain(&b.points).copied().collect();
    union.iter().any(|p| [p.offset(1, 0), p.offset(0, 1), p.offset(1, 1)].iter().all(|q| union.contains(q)))
}

/// Polygon or polyline through `vertices`, one straight stroke per edge.
///
/// Adjacent edges share exactly their common vertex pixel. Where two edges
/// would leave a vertex along the same first step, or would thicken the corner
/// into a filled 2x2 block, the vertex pixel becomes a run of its own on one or
/// both edges so the edges diverge immediately.
pub fn polygon(vertices: &[Coord], closed: bool) -> Result<ShapeRender, ScanError> {
    let n = vertices.len();
    if n < 2 {
        return Err(ScanError::Argument(format!("polygon needs at least 2 vertices, got {n}")));
    }
    if closed && n < 3 {
        return Err(ScanError::Argument("closed polygon needs at least 3 vertices".into()));
    }
    let edge_count = if closed { n } else { n - 1 };
    for i in 0..edge_count {
        let (a, b) = (vertices[i], vertices[(i + 1) % n]);
        if a == b {
            return Err(ScanError::Argument(format!("consecutive vertices {i} and {} coincide at {a}", (i + 1) % n)));
        }
    }
    // split[i] = (split at start vertex, split at end vertex) for edge i
    let mut split = vec![(false, false); edge_count];
    let edge = |i: usize, split: &[(bool, bool)]| {
        let (a, b) = (vertices[i], vertices[(i + 1) % n]);
        stepped_line(a, b, split[i].0, split[i].1)
    };
    let joints: Vec<(usize, usize)> = if closed {
        (0..n).map(|v| ((v + n - 1) % n, v)).collect()
    } else {
        (1..n - 1).map(|v| (v - 1, v)).collect()
    };
    for &(inc, out) in &joints {
        let v = vertices[out];
        // 2: the edges leave together or overlap; 1: they only thicken the corner
        let clash = |split: &[(bool, bool)]| {
            let (ei, eo) = (edge(inc, split), edge(out, split));
            if leaving_step(&ei, v) == leaving_step(&eo, v) || shared_beyond(&ei, &eo, v) {
                2
            } else {
                u8::from(form_block(&ei, &eo))
            }
        };
        let mut best = clash(&split);
        if best == 0 {
            continue;
        }
        let base = split.clone();
        let candidates = [(true, true), (false, true), (true, false)];
        for (si, so) in candidates {
            let mut trial = base.clone();
            trial[inc].1 |= si;
            trial[out].0 |= so;
            let score = clash(&trial);
            if score < best {
                best = score;
                split = trial;
                if score == 0 {
                    break;
                }
            }
        }
    }
    let mut render = ShapeRender::new(if closed { ShapeKind::Polygon } else { ShapeKind::Polyline });
    render.strokes = (0..edge_count).map(|i| edge(i, &split)).collect();
    if closed {
        render.vertices = vertices.to_vec();
    } else {
        render.vertices = vertices[1..n - 1].to_vec();
        render.terminals = vec![vertices[0], vertices[n - 1]];
    }
    Ok(render)
}

/// A lone straight line as a render; its ends are declared free terminals.
pub fn line_render(p0: Coord, p1: Coord) -> ShapeRender {
    let stroke = pixel_art_line(p0, p1);
    let mut render = ShapeRender::new(ShapeKind::Line).with_stroke(stroke);
    render.terminals = if p0 == p1 { vec![p0] } else { vec![p0, p1] };
    render
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scanconv::stroke::run_decompose;

    fn c(x: i32, y: i32) -> Coord {
        Coord::new(x, y)
    }

    #[test]
    fn midpoint_axis_and_diagonal() {
        let h = midpoint_line(c(0, 0), c(5, 0));
        assert_eq!(h.points, (0..6).map(|x| c(x, 0)).collect::<Vec<_>>());
        let d = midpoint_line(c(0, 0), c(3, 3));
        assert_eq!(d.points, (0..4).map(|i| c(i, i)).collect::<Vec<_>>());
        assert_eq!(midpoint_line(c(4, 4), c(4, 4)).points, vec![c(4, 4)]);
    }

    #[test]
    fn midpoint_shallow_runs() {
        // per column nearest row, ties to the smaller row: 0,0,1,1,1,2,2
        let l = midpoint_line(c(0, 0), c(6, 2));
        let ys: Vec<i32> = l.points.iter().map(|p| p.y).collect();
        assert_eq!(ys, vec![0, 0, 1, 1, 1, 2, 2]);
    }

    #[test]
    fn midpoint_tie_prefers_smaller_minor() {
        // ideal y at x=1 is 0.5 exactly
        let down = midpoint_line(c(0, 0), c(2, 1));
        assert_eq!(down.points[1], c(1, 0));
        let up = midpoint_line(c(0, 1), c(2, 0));
        assert_eq!(up.points[1], c(1, 0));
    }

    #[test]
    fn run_slice_examples() {
        assert_eq!(run_slice(7, 3).unwrap(), vec![2, 3, 2]);
        assert_eq!(run_slice(6, 3).unwrap(), vec![2, 2, 2]);
        assert_eq!(run_slice(9, 5).unwrap(), vec![2, 2, 1, 2, 2]);
        assert_eq!(run_slice(11, 6).unwrap(), vec![2, 2, 2, 1, 2, 2]);
        assert!(run_slice(2, 3).is_err());
        assert!(run_slice(2, 0).is_err());
    }

    #[test]
    fn pixel_art_line_examples() {
        let l = pixel_art_line(c(0, 0), c(6, 2));
        assert_eq!(
            l.points,
            vec![c(0, 0), c(1, 0), c(2, 1), c(3, 1), c(4, 1), c(5, 2), c(6, 2)]
        );
        assert_eq!(run_decompose(&l).runs, vec![2, 3, 2]);
        let v = pixel_art_line(c(0, 0), c(0, 9));
        assert_eq!(run_decompose(&v).runs, vec![10]);
        let m = pixel_art_line(c(10, 0), c(0, 5));
        assert_eq!(m.first(), Some(c(10, 0)));
        assert_eq!(m.last(), Some(c(0, 5)));
        assert_eq!(run_decompose(&m).runs, vec![2, 2, 2, 1, 2, 2]);
        let back = pixel_art_line(c(0, 5), c(10, 0));
        assert_eq!(back.reversed(), m);
    }

    #[test]
    fn square_polygon() {
        let r = polygon(&[c(0, 0), c(9, 0), c(9, 9), c(0, 9)], true).unwrap();
        assert_eq!(r.strokes.len(), 4);
        assert_eq!(r.vertices.len(), 4);
        assert_eq!(r.stroke_pixels().len(), 36);
    }

    #[test]
    fn open_polyline_shares_corner() {
        let r = polygon(&[c(0, 0), c(4, 0), c(4, 4)], false).unwrap();
        let a = r.strokes[0].pixel_set();
        let b = r.strokes[1].pixel_set();
        assert_eq!(a.intersection(&b).copied().collect::<Vec<_>>(), vec![c(4, 0)]);
        assert_eq!(r.vertices, vec![c(4, 0)]);
        assert_eq!(r.terminals, vec![c(0, 0), c(4, 4)]);
    }

    #[test]
    fn polygon_argument_errors() {
        assert!(polygon(&[c(0, 0)], false).is_err());
        assert!(polygon(&[c(0, 0), c(0, 0), c(3, 3)], false).is_err());
        assert!(polygon(&[c(0, 0), c(3, 3), c(0, 0)], true).is_err());
        assert!(polygon(&[c(0, 0), c(3, 3)], true).is_err());
    }

    #[test]
    fn acute_apex_edges_diverge() {
        // steep isoceles triangle: both edges would start down the apex column
        let r = polygon(&[c(5, 0), c(10, 21), c(0, 21)], true).unwrap();
        let left = r.strokes[2].pixel_set();
        let right = r.strokes[0].pixel_set();
        assert_eq!(left.intersection(&right).copied().collect::<Vec<_>>(), vec![c(5, 0)]);
        assert!(right.contains(&c(6, 1)));
        assert!(left.contains(&c(4, 1)));
    }
}
