//! Reference computations written apart from the library code they check.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use pinpix_core::scanconv::{conic, thin};
use pinpix_core::{lint_render, Coord, LintReport, ShapeRender};

fn c(x: i32, y: i32) -> Coord {
    Coord::new(x, y)
}

/// Bounding-rectangle sizes in millimetres as printed for the study shapes,
/// length first.
pub const PRINTED_MM: &[(&str, f64, f64)] = &[
    ("square", 25.0, 25.0),
    ("rectangle", 25.0, 50.0),
    ("circle", 35.0, 35.0),
    ("ellipse", 35.0, 47.5),
    ("triangle", 27.5, 55.0),
    ("star", 62.5, 47.5),
    ("pentagon", 42.5, 42.5),
    ("heart", 37.5, 37.5),
    ("sine_curve", 67.5, 67.5),
    ("smiley_a", 37.5, 37.5),
    ("smiley_b", 37.5, 37.5),
    ("flower_a", 57.5, 50.0),
    ("flower_b", 57.5, 50.0),
    ("cuboid", 40.0, 32.5),
    ("glyphs", 50.0, 65.0),
];

/// Whether a default size in pins matches the printed millimetres. The
/// rectangle is laid out landscape while its printed pair lists the short
/// side first, so its sides are compared unordered.
pub fn matches_printed_mm(name: &str, (w, h): (u32, u32)) -> bool {
    let Some(&(_, l_mm, b_mm)) = PRINTED_MM.iter().find(|r| r.0 == name) else {
        return false;
    };
    let (w_mm, h_mm) = (w as f64 * 2.5, h as f64 * 2.5);
    (w_mm, h_mm) == (l_mm, b_mm) || (name == "rectangle" && (h_mm, w_mm) == (l_mm, b_mm))
}

pub fn lint_all(renders: &[ShapeRender]) -> LintReport {
    LintReport::from_violations(renders.iter().flat_map(|r| lint_render(r).violations).collect())
}

/// Per major-axis coordinate, the minor coordinate closest to the ideal
/// segment, computed in exact integer arithmetic. Ties go to the smaller
/// minor coordinate.
pub fn nearest_pixel_line(p0: Coord, p1: Coord) -> Vec<Coord> {
    let (dx, dy) = ((p1.x - p0.x) as i64, (p1.y - p0.y) as i64);
    if dx == 0 && dy == 0 {
        return vec![p0];
    }
    let x_major = dx.abs() >= dy.abs();
    let (a0, b0, da, db) = if x_major { (p0.x, p0.y, dx, dy) } else { (p0.y, p0.x, dy, dx) };
    let step = da.signum();
    (0..=da.abs())
        .map(|k| {
            let a = a0 as i64 + k * step;
            // ideal minor = b0 + (a - a0) * db / da = num / den with den > 0
            let (mut num, mut den) = (b0 as i64 * da + (a - a0 as i64) * db, da);
            if den < 0 {
                num = -num;
                den = -den;
            }
            let lo = num.div_euclid(den);
            let hi = lo + 1;
            let b = if (num - lo * den) <= (hi * den - num) { lo } else { hi };
            if x_major {
                c(a as i32, b as i32)
            } else {
                c(b as i32, a as i32)
            }
        })
        .collect()
}

/// Whether some pin has both a horizontal and a vertical neighbour.
pub fn has_l_triple(pixels: &BTreeSet<Coord>) -> bool {
    pixels.iter().any(|&p| {
        let horiz = [p.offset(-1, 0), p.offset(1, 0)].into_iter().filter(|q| pixels.contains(q)).count();
        let vert = [p.offset(0, -1), p.offset(0, 1)].into_iter().filter(|q| pixels.contains(q)).count();
        horiz > 0 && vert > 0
    })
}

/// Lengths of the maximal straight runs along a path's major axis.
pub fn major_runs(points: &[Coord]) -> Vec<usize> {
    if points.is_empty() {
        return Vec::new();
    }
    let (first, last) = (points[0], points[points.len() - 1]);
    let x_major = (last.x - first.x).abs() >= (last.y - first.y).abs();
    let minor = |p: &Coord| if x_major { p.y } else { p.x };
    let mut runs = vec![1];
    for w in points.windows(2) {
        if minor(&w[0]) == minor(&w[1]) {
            *runs.last_mut().unwrap() += 1;
        } else {
            runs.push(1);
        }
    }
    runs
}

/// Distance from a pixel centre to the ellipse inscribed in the `w` x `h`
/// box, by dense sampling and local refinement of the parametric ellipse.
pub fn sampled_distance(w: u32, h: u32, p: Coord) -> f64 {
    let (a, b) = ((w as f64 - 1.0) / 2.0, (h as f64 - 1.0) / 2.0);
    let (px, py) = (p.x as f64 - a, p.y as f64 - b);
    let d = |t: f64| (a * t.cos() - px).hypot(b * t.sin() - py);
    const N: usize = 4096;
    let best = (0..N).map(|i| 2.0 * PI * i as f64 / N as f64).min_by(|s, t| d(*s).total_cmp(&d(*t))).unwrap();
    let (mut lo, mut hi) = (best - 2.0 * PI / N as f64, best + 2.0 * PI / N as f64);
    for _ in 0..60 {
        let (m1, m2) = (lo + (hi - lo) / 3.0, hi - (hi - lo) / 3.0);
        if d(m1) < d(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    d((lo + hi) / 2.0)
}

/// Largest sampled distance of any pin of the `w` x `h` conic loop.
pub fn conic_deviation(w: u32, h: u32) -> f64 {
    let render = conic(c(0, 0), w, h).unwrap();
    render.pixels().into_iter().map(|p| sampled_distance(w, h, p)).fold(0.0, f64::max)
}

/// Step kind between consecutive loop pins.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Step {
    H,
    V,
    D,
}

fn steepness((axis, len): (Step, usize)) -> f64 {
    match axis {
        Step::H => 1.0 / len as f64,
        Step::V => len as f64,
        Step::D => 1.0,
    }
}

/// Straight runs of an open path as (axis, pins). A pin where the path
/// turns without a diagonal step ends one run and starts the next.
pub fn path_runs(points: &[Coord]) -> Vec<(Step, usize)> {
    let mut runs: Vec<(Step, usize)> = Vec::new();
    let mut cur: (Step, usize) = (Step::D, 1);
    for i in 1..points.len() {
        let (p, q) = (points[i - 1], points[i]);
        let s = match (p.x == q.x, p.y == q.y) {
            (false, true) => Step::H,
            (true, false) => Step::V,
            _ => Step::D,
        };
        if s == Step::D {
            runs.push(cur);
            cur = (Step::D, 1);
        } else if cur.0 == Step::D || cur.0 == s {
            cur = (s, cur.1 + 1);
        } else {
            runs.push((cur.0, cur.1 - 1));
            cur = (s, 2);
        }
    }
    runs.push(cur);
    runs
}

/// Structural properties every conic must have; deviation is checked apart.
/// Returns the first property the `w` x `h` loop lacks.
pub fn conic_shape_defect(w: u32, h: u32) -> Option<String> {
    let render = match conic(c(0, 0), w, h) {
        Ok(r) => r,
        Err(e) => return Some(format!("{w}x{h}: {e}")),
    };
    if render.strokes.len() != 1 || !render.strokes[0].closed {
        return Some(format!("{w}x{h}: not a single closed stroke"));
    }
    let points = render.strokes[0].points.clone();
    let pixels = render.strokes[0].pixel_set();
    let (r, b) = (w as i32 - 1, h as i32 - 1);
    let fail = |what: &str| Some(format!("{w}x{h}: {what}"));
    if pixels.len() != points.len() {
        return fail("loop revisits a pin");
    }
    let n = points.len();
    if (0..n).any(|i| !points[i].is_adjacent8(points[(i + 1) % n])) {
        return fail("loop is not 8-connected");
    }
    let xs = pixels.iter().map(|p| p.x);
    let ys = pixels.iter().map(|p| p.y);
    if (xs.clone().min(), ys.clone().min(), xs.max(), ys.max()) != (Some(0), Some(0), Some(r), Some(b)) {
        return fail("does not touch all four sides of its box");
    }
    let mirrored = |f: &dyn Fn(&Coord) -> Coord| pixels.iter().map(f).collect::<BTreeSet<_>>() == pixels;
    if !mirrored(&|p| c(r - p.x, p.y)) || !mirrored(&|p| c(p.x, b - p.y)) {
        return fail("not mirror symmetric");
    }
    if w == h && !mirrored(&|p| c(p.y, p.x)) {
        return fail("not diagonal symmetric");
    }
    if thin(&pixels, &BTreeSet::new()) != pixels {
        return fail("thinning removes pins");
    }
    for x in 0..r {
        for y in 0..b {
            if [c(x, y), c(x + 1, y), c(x, y + 1), c(x + 1, y + 1)].iter().all(|p| pixels.contains(p)) {
                return fail("contains a filled 2x2 block");
            }
        }
    }
    let row = |y: i32| pixels.iter().filter(|p| p.y == y).map(|p| p.x).collect::<Vec<_>>();
    let col = |x: i32| pixels.iter().filter(|p| p.x == x).map(|p| p.y).collect::<Vec<_>>();
    for line in [row(0), row(b), col(0), col(r)] {
        if line.len() as i32 != line.last().unwrap() - line[0] + 1 {
            return fail("apex run has a gap");
        }
    }
    if row(0).len() != row(b).len() || col(0).len() != col(r).len() || (w == h && row(0).len() != col(0).len()) {
        return fail("opposite apex runs differ");
    }
    // runs steepen steadily from the top apex clockwise round to the right apex
    let mut walk_from = points.clone();
    let top_left = *pixels.iter().filter(|p| p.y == 0).min_by_key(|p| p.x).unwrap();
    let at = walk_from.iter().position(|&p| p == top_left).unwrap();
    if walk_from[(at + 1) % n].x < top_left.x {
        walk_from.reverse();
    }
    let at = walk_from.iter().position(|&p| p == top_left).unwrap();
    let mut walk: Vec<Coord> = walk_from[at..].iter().chain(&walk_from[..at]).copied().collect();
    let right_end = walk.iter().position(|p| p.x == r).unwrap() + col(r).len();
    walk.truncate(right_end);
    let quarter = path_runs(&walk);
    let s: Vec<f64> = quarter.iter().map(|&run| steepness(run)).collect();
    if (1..s.len()).any(|i| s[i] < s[i - 1] - 1e-12) {
        return fail(&format!("runs {quarter:?} do not steepen steadily"));
    }
    None
}

/// Every way to lower one raised stroke pin, or raise one lowered pin next to
/// a stroke, as a mutated copy of `renders`.
pub fn single_pin_mutations(renders: &[ShapeRender]) -> Vec<(String, Vec<ShapeRender>)> {
    let raised: BTreeSet<Coord> = renders.iter().flat_map(|r| r.pixels()).collect();
    let mut out = Vec::new();
    for (ri, render) in renders.iter().enumerate() {
        for p in render.stroke_pixels() {
            let mut m = renders.to_vec();
            for s in &mut m[ri].strokes {
                s.points.retain(|&q| q != p);
            }
            out.push((format!("lower {p}"), m));
        }
        for (si, stroke) in render.strokes.iter().enumerate() {
            let own = stroke.pixel_set();
            let around: BTreeSet<Coord> =
                own.iter().flat_map(|p| p.neighbors8()).filter(|q| !raised.contains(q)).collect();
            for q in around {
                let mut m = renders.to_vec();
                m[ri].strokes[si].points.push(q);
                out.push((format!("raise {q} on stroke {si}"), m));
            }
        }
    }
    out
}
