//! The shape inventory: outlines, composite pictures and letter strokes, each
//! buildable at its default size or at any bounding box above its minimum.
//!
//! Every builder draws at the origin; scenes translate the result.

use std::f64::consts::PI;

use thiserror::Error;

use crate::grid::{extent_mm, Coord, DEFAULT_PITCH_MM};
use crate::scanconv::{
    conic, conic_arc, conic_arc_where, default_sample_count, line_render, parametric_stroke, pixel_art_line,
    polygon, steepening_chain, ArcSpan, Marker, ScanError, ShapeKind, ShapeRender, Stroke, StrokeShape,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("unknown catalog shape {0:?}")]
    NotFound(String),
    #[error("{name} needs a bounding box of at least {min_w}x{min_h}, got {w}x{h}")]
    TooSmall { name: String, min_w: u32, min_h: u32, w: u32, h: u32 },
    #[error(transparent)]
    Scan(#[from] ScanError),
}

type Builder = fn(u32, u32) -> Result<Vec<ShapeRender>, ScanError>;

#[derive(Clone, Copy)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub default_bbox: (u32, u32),
    pub min_bbox: (u32, u32),
    /// Which group of study shapes the entry belongs to.
    pub source: &'static str,
    pub builder: Builder,
}

impl CatalogEntry {
    /// Default size in millimetres at the standard pitch.
    pub fn default_size_mm(&self) -> (f64, f64) {
        (extent_mm(self.default_bbox.0, DEFAULT_PITCH_MM), extent_mm(self.default_bbox.1, DEFAULT_PITCH_MM))
    }
}

impl std::fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CatalogEntry")
            .field("name", &self.name)
            .field("default_bbox", &self.default_bbox)
            .field("min_bbox", &self.min_bbox)
            .field("source", &self.source)
            .finish()
    }
}

const BASIC: &str = "basic shapes";
const COMPOUND: &str = "compound shapes";
const GRAPHICS: &str = "graphics";
const CO_DESIGN: &str = "co-design iterations";

static ENTRIES: [CatalogEntry; 15] = [
    CatalogEntry { name: "square", default_bbox: (10, 10), min_bbox: (2, 2), source: BASIC, builder: square },
    CatalogEntry { name: "rectangle", default_bbox: (20, 10), min_bbox: (2, 2), source: BASIC, builder: square },
    CatalogEntry { name: "circle", default_bbox: (14, 14), min_bbox: (3, 3), source: BASIC, builder: ellipse },
    CatalogEntry { name: "ellipse", default_bbox: (14, 19), min_bbox: (3, 3), source: BASIC, builder: ellipse },
    CatalogEntry { name: "triangle", default_bbox: (11, 22), min_bbox: (3, 3), source: BASIC, builder: triangle },
    CatalogEntry { name: "star", default_bbox: (25, 19), min_bbox: (11, 9), source: BASIC, builder: star },
    CatalogEntry { name: "pentagon", default_bbox: (17, 17), min_bbox: (7, 7), source: COMPOUND, builder: pentagon },
    CatalogEntry { name: "heart", default_bbox: (15, 15), min_bbox: (9, 9), source: COMPOUND, builder: heart },
    CatalogEntry { name: "sine_curve", default_bbox: (27, 27), min_bbox: (9, 9), source: GRAPHICS, builder: sine_curve },
    CatalogEntry { name: "smiley_a", default_bbox: (15, 15), min_bbox: (15, 15), source: CO_DESIGN, builder: smiley_a },
    CatalogEntry { name: "smiley_b", default_bbox: (15, 15), min_bbox: (15, 15), source: CO_DESIGN, builder: smiley_b },
    CatalogEntry { name: "flower_a", default_bbox: (23, 20), min_bbox: (23, 20), source: CO_DESIGN, builder: flower_a },
    CatalogEntry { name: "flower_b", default_bbox: (23, 20), min_bbox: (23, 20), source: CO_DESIGN, builder: flower_b },
    CatalogEntry { name: "cuboid", default_bbox: (16, 13), min_bbox: (6, 5), source: GRAPHICS, builder: cuboid },
    CatalogEntry { name: "glyphs", default_bbox: (20, 26), min_bbox: (20, 26), source: GRAPHICS, builder: glyphs },
];

pub fn catalog_list() -> &'static [CatalogEntry] {
    &ENTRIES
}

pub fn entry(name: &str) -> Result<&'static CatalogEntry, CatalogError> {
    ENTRIES.iter().find(|e| e.name == name).ok_or_else(|| CatalogError::NotFound(name.to_string()))
}

/// Builds a catalog shape with its bounding box at the origin.
pub fn build(name: &str, bbox: Option<(u32, u32)>) -> Result<Vec<ShapeRender>, CatalogError> {
    let e = entry(name)?;
    let (w, h) = bbox.unwrap_or(e.default_bbox);
    if w < e.min_bbox.0 || h < e.min_bbox.1 {
        return Err(CatalogError::TooSmall { name: name.to_string(), min_w: e.min_bbox.0, min_h: e.min_bbox.1, w, h });
    }
    Ok((e.builder)(w, h)?)
}

fn c(x: i32, y: i32) -> Coord {
    Coord::new(x, y)
}

fn square(w: u32, h: u32) -> Result<Vec<ShapeRender>, ScanError> {
    let (r, b) = (w as i32 - 1, h as i32 - 1);
    Ok(vec![polygon(&[c(0, 0), c(r, 0), c(r, b), c(0, b)], true)?])
}

fn ellipse(w: u32, h: u32) -> Result<Vec<ShapeRender>, ScanError> {
    Ok(vec![conic(c(0, 0), w, h)?])
}

/// Isoceles, apex centred on the top row, base along the bottom row.
fn triangle(w: u32, h: u32) -> Result<Vec<ShapeRender>, ScanError> {
    let (r, b) = (w as i32 - 1, h as i32 - 1);
    Ok(vec![polygon(&[c(r / 2, 0), c(r, b), c(0, b)], true)?])
}

/// Maps unit-space points onto the box so their extremes land on its edges.
/// Points symmetric about `x = 0` stay mirror images after rounding.
fn fit_points(unit: &[(f64, f64)], w: u32, h: u32) -> Vec<Coord> {
    let (min_x, max_x) = unit.iter().fold((f64::MAX, f64::MIN), |(lo, hi), p| (lo.min(p.0), hi.max(p.0)));
    let (min_y, max_y) = unit.iter().fold((f64::MAX, f64::MIN), |(lo, hi), p| (lo.min(p.1), hi.max(p.1)));
    let (r, b) = (w as f64 - 1.0, h as f64 - 1.0);
    unit.iter()
        .map(|&(x, y)| {
            let fx = (x - min_x) / (max_x - min_x) * r;
            // round the left half and mirror it so both sides match
            let px = if fx <= r / 2.0 { fx.round() } else { r - (r - fx).round() };
            let py = ((y - min_y) / (max_y - min_y) * b).round();
            c(px as i32, py as i32)
        })
        .collect()
}

/// Ratio of inner to outer radius of a regular five-pointed star.
const STAR_INNER_RATIO: f64 = 0.381966;

/// Five-pointed star outline, point up, stretched to the box.
fn star(w: u32, h: u32) -> Result<Vec<ShapeRender>, ScanError> {
    let unit: Vec<(f64, f64)> = (0..10)
        .map(|k| {
            let radius = if k % 2 == 0 { 1.0 } else { STAR_INNER_RATIO };
            let angle = -PI / 2.0 + k as f64 * PI / 5.0;
            (radius * angle.cos(), radius * angle.sin())
        })
        .collect();
    let mut points = fit_points(&unit, w, h);
    // A side tip level with its neighbouring inner points leaves one flat run
    // that cannot part from the edge below it, so drop the tip a row.
    for (tip, inner) in [(2, 1), (8, 9)] {
        if points[tip].y == points[inner].y {
            points[tip].y += 1;
        }
    }
    Ok(vec![polygon(&points, true)?])
}

/// Regular pentagon, point up with a flat base, stretched to the box.
fn pentagon(w: u32, h: u32) -> Result<Vec<ShapeRender>, ScanError> {
    let unit: Vec<(f64, f64)> = (0..5)
        .map(|k| {
            let angle = -PI / 2.0 + k as f64 * 2.0 * PI / 5.0;
            (angle.cos(), angle.sin())
        })
        .collect();
    Ok(vec![polygon(&fit_points(&unit, w, h), true)?])
}

/// Two rounded lobes meeting at a cusp on the top, and two diagonals meeting
/// at the bottom point. Each lobe ends one pin before its diagonal starts.
fn heart(w: u32, h: u32) -> Result<Vec<ShapeRender>, ScanError> {
    let mid = (w as i32 - 1) / 2;
    let lobe_w = mid as u32 + 1;
    let lobe_h = lobe_w.min(h / 2 + 1);
    let left_loop = crate::scanconv::conic_loop(c(0, 0), lobe_w, lobe_h)?;
    // the cusp is the upper pixel of the lobe's rightmost column
    let cusp_y = left_loop.iter().filter(|p| p.x == mid).map(|p| p.y).min().expect("lobe reaches the middle column");
    let cusp = c(mid, cusp_y);
    // the lobe wraps round from its lower-left down to the cusp
    let low_y = (lobe_h as i32 - 1) / 2 + 1;
    let left = conic_arc_where(c(0, 0), lobe_w, lobe_h, |p| p.y < low_y || p.x < mid / 2 && p.y <= low_y)?;
    let mut left_pts = left.points;
    // keep from the lowest left pixel round the top to the cusp
    let cut = left_pts.iter().position(|&p| p == cusp).expect("cusp on lobe");
    left_pts.truncate(cut + 1);
    let mirror = |p: &Coord| c(w as i32 - 1 - p.x, p.y);
    let right_pts: Vec<Coord> = left_pts.iter().rev().map(mirror).collect();
    let lobe_end = left_pts[0];
    let bottom = c(mid, h as i32 - 1);
    let diag_start = c(lobe_end.x + 1, lobe_end.y + 1);
    // an even width has no centre column: cusp and point become two-pin flats
    let mut corners = vec![diag_start, bottom];
    if mirror(&bottom) != bottom {
        corners.push(mirror(&bottom));
    }
    corners.push(mirror(&diag_start));
    let diagonals = polygon(&corners, false)?;
    let mut render = ShapeRender::new(ShapeKind::Composite);
    render.strokes.push(Stroke::open(left_pts, StrokeShape::Curved));
    render.strokes.push(Stroke::open(right_pts, StrokeShape::Curved));
    render.vertices.push(cusp);
    if mirror(&cusp) != cusp {
        render.strokes.push(Stroke::open(vec![cusp, mirror(&cusp)], StrokeShape::Straight));
        render.vertices.push(mirror(&cusp));
    }
    render.terminals.extend([lobe_end, mirror(&lobe_end)]);
    render.merge(diagonals);
    Ok(vec![render])
}

/// Amplitude of the sine curve as a fraction of the half height.
const SINE_AMPLITUDE: f64 = 10.0 / 13.0;

/// Distance from `(px, py)` to the graph of `f` over `[0, x_max]`.
fn graph_distance(f: impl Fn(f64) -> f64, x_max: f64, px: f64, py: f64) -> f64 {
    const STEP: f64 = 1.0 / 64.0;
    let dist = |x: f64| (x - px).hypot(f(x) - py);
    let lo = (px - 4.0).max(0.0);
    let hi = (px + 4.0).min(x_max);
    let mut best = lo;
    let mut x = lo;
    while x <= hi {
        if dist(x) < dist(best) {
            best = x;
        }
        x += STEP;
    }
    // golden-section refinement around the best sample
    let (mut a, mut b) = ((best - STEP).max(lo), (best + STEP).min(hi));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..40 {
        let m1 = b - g * (b - a);
        let m2 = a + g * (b - a);
        if dist(m1) < dist(m2) {
            b = m2;
        } else {
            a = m1;
        }
    }
    dist((a + b) / 2.0).min(dist(best))
}

/// One sine period as a pixel path whose runs steepen steadily from each
/// crest toward the crossings. A quarter wave from the top crest down to the
/// centre is chosen by the same run-chain search the conics use; the rest
/// follows by mirroring about the crest and a half turn about the centre.
///
/// Needs an odd `w` so the crossings and crests fall on pins or between two.
fn sine_path(w: u32, h: u32, amp: f64) -> Option<Vec<Coord>> {
    if w.is_multiple_of(2) || w < 5 {
        return None;
    }
    let r = w as i32 - 1;
    let (cx, cy) = (r / 2, (h as i32 - 1) / 2);
    let f = move |x: f64| cy as f64 - amp * (2.0 * PI * x / r as f64).sin();
    let apex_shared = r % 4 == 0;
    let x_first = if apex_shared { r / 4 } else { r / 4 + 1 };
    let y_apex = (cy as f64 - amp).round() as i32;
    let nx = (cx - x_first + 1) as usize;
    let ny = (cy - y_apex + 1) as usize;
    if ny < 2 {
        return None;
    }
    let mut deviation = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            deviation.push(graph_distance(f, r as f64, (x_first + i as i32) as f64, (y_apex + j as i32) as f64));
        }
    }
    let quarter: Vec<Coord> = steepening_chain(nx, ny, apex_shared, true, deviation)
        .into_iter()
        .map(|(i, j)| c(x_first + i as i32, y_apex + j as i32))
        .collect();
    let mut left: Vec<Coord> = quarter.iter().rev().map(|p| c(cx - p.x, p.y)).collect();
    if apex_shared {
        left.pop();
    }
    left.extend(&quarter);
    // half-turn about the centre pin
    let right = left.iter().rev().skip(1).map(|p| c(r - p.x, 2 * cy - p.y));
    let mut path = left.clone();
    path.extend(right);
    Some(path)
}

/// One full sine period across the box with the two axes through its centre.
fn sine_curve(w: u32, h: u32) -> Result<Vec<ShapeRender>, ScanError> {
    let (r, b) = (w as f64 - 1.0, h as f64 - 1.0);
    let (cx, cy) = ((w as i32 - 1) / 2, (h as i32 - 1) / 2);
    let amp = SINE_AMPLITUDE * cy as f64;
    let curve = match sine_path(w, h, amp) {
        Some(path) => Stroke::open(path, StrokeShape::Curved),
        None => {
            let sampler = move |t: f64| (r * t, cy as f64 - amp * (2.0 * PI * t).sin());
            let n = default_sample_count(&sampler, 0.0, 1.0)?;
            parametric_stroke(sampler, 0.0, 1.0, n)?
        }
    };
    let mut render = ShapeRender::new(ShapeKind::Composite);
    render.terminals.extend([curve.first().expect("non-empty"), curve.last().expect("non-empty")]);
    render.strokes.push(curve);
    render.merge(line_render(c(0, cy), c(r as i32, cy)));
    render.merge(line_render(c(cx, 0), c(cx, b as i32)));
    render.terminals.sort();
    render.terminals.dedup();
    Ok(vec![render])
}

/// Face outline, the lower half of an ellipse for the mouth, and two eyes.
/// The iterated face keeps the top-left pin of each eye.
fn smiley(w: u32, h: u32, eye_size: u32) -> Result<Vec<ShapeRender>, ScanError> {
    let (w_i, h_i) = (w as i32, h as i32);
    let mut render = conic(c(0, 0), w, h)?;
    render.kind = ShapeKind::Composite;
    let (mouth_x, eye_row) = (w_i / 5, h_i * 4 / 15);
    let mouth = conic_arc(c(mouth_x, eye_row), (w_i - 2 * mouth_x) as u32, (h_i - 2 - eye_row) as u32, ArcSpan::Lower)?;
    render.terminals.extend([mouth.first().expect("non-empty"), mouth.last().expect("non-empty")]);
    render.strokes.push(mouth);
    let eye_x = w_i * 4 / 15;
    render.markers.push(Marker { at: c(eye_x, eye_row), size: eye_size });
    render.markers.push(Marker { at: c(w_i - eye_x - 2, eye_row), size: eye_size });
    Ok(vec![render])
}

fn smiley_a(w: u32, h: u32) -> Result<Vec<ShapeRender>, ScanError> {
    smiley(w, h, 2)
}

fn smiley_b(w: u32, h: u32) -> Result<Vec<ShapeRender>, ScanError> {
    smiley(w, h, 1)
}

/// Side of the flower's centre disc.
const FLOWER_CENTRE: i32 = 5;

/// Top-left pin of the flower's centre disc in a `w` x `h` box.
fn flower_centre(w: u32, h: u32) -> Coord {
    let petals_h = h as i32 - FLOWER_CENTRE - 2;
    c((w as i32 - FLOWER_CENTRE) / 2, (petals_h + 1) / 2 + 1)
}

/// Centre disc with four elliptical petals, each one pin clear of the centre.
fn flower_parts(w: u32, h: u32) -> Result<ShapeRender, ScanError> {
    let (w_i, h_i) = (w as i32, h as i32);
    let centre = flower_centre(w, h);
    let (cx, cy, d) = (centre.x, centre.y, FLOWER_CENTRE);
    let mut render = ShapeRender::new(ShapeKind::Composite);
    for (x, y, pw, ph) in [
        (cx, cy, d, d),
        (cx, 0, d, cy - 1),
        (cx, cy + d + 1, d, h_i - cy - d - 1),
        (0, cy, cx - 1, d),
        (cx + d + 1, cy, w_i - cx - d - 1, d),
    ] {
        render.merge(conic(c(x, y), pw as u32, ph as u32)?);
    }
    Ok(render)
}

fn flower_a(w: u32, h: u32) -> Result<Vec<ShapeRender>, ScanError> {
    Ok(vec![flower_parts(w, h)?])
}

/// The flower with a curved stem running from beside the centre to the
/// bottom-right corner.
fn flower_b(w: u32, h: u32) -> Result<Vec<ShapeRender>, ScanError> {
    let mut render = flower_parts(w, h)?;
    let stem = flower_stem(w, h)?;
    render.terminals.extend([stem.first().expect("non-empty"), stem.last().expect("non-empty")]);
    render.strokes.push(stem);
    Ok(vec![render])
}

fn flower_stem(w: u32, h: u32) -> Result<Stroke, ScanError> {
    let centre = flower_centre(w, h);
    let (x0, y0) = ((centre.x + FLOWER_CENTRE) as f64, (centre.y + FLOWER_CENTRE) as f64);
    let (dx, dy) = (w as f64 - 1.0 - x0, h as f64 - 1.0 - y0);
    let sampler = move |t: f64| (x0 + dx * t, y0 + dy * t.powf(0.6));
    let n = default_sample_count(&sampler, 0.0, 1.0)?;
    parametric_stroke(sampler, 0.0, 1.0, n)
}

/// Oblique box showing its front, top and right faces.
fn cuboid(w: u32, h: u32) -> Result<Vec<ShapeRender>, ScanError> {
    let depth = ((w.min(h) as i32) / 4).max(1);
    let (r, b) = (w as i32 - 1, h as i32 - 1);
    let (fa, fb, fc, fd) = (c(0, depth), c(r - depth, depth), c(r - depth, b), c(0, b));
    let (ba, bb, bc) = (c(depth, 0), c(r, 0), c(r, b - depth));
    let mut render = polygon(&[fa, fb, fc, fd], true)?;
    render.kind = ShapeKind::Composite;
    let back = polygon(&[fa, ba, bb, bc, fc], false)?;
    render.strokes.extend(back.strokes);
    render.vertices.extend([ba, bb, bc]);
    render.strokes.push(pixel_art_line(bb, fb));
    Ok(vec![render])
}

/// Stroke letters I, T, U on the top row and C, L below, two pins apart.
/// I, T and U on the first row, C and L on the second, two pins apart. The U
/// widens to fill wider boxes.
fn glyphs(w: u32, h: u32) -> Result<Vec<ShapeRender>, ScanError> {
    let upper = (h - 1) / 2;
    let lower = h - 2 - upper;
    let second_row = upper as i32 + 2;
    Ok(vec![
        serif_letter(0, 0, upper as i32 - 1, true)?,
        serif_letter(7, 0, upper as i32 - 1, false)?,
        letter_u(14, 0, w - 14, upper)?,
        letter_c(0, second_row, 6, lower)?,
        letter_l(8, second_row, 5, lower)?,
    ])
}

/// I (with a foot bar) or T: a top bar split where the stem meets it.
fn serif_letter(x: i32, y: i32, bottom: i32, foot: bool) -> Result<ShapeRender, ScanError> {
    let stem_x = x + 2;
    let joint = c(stem_x, y);
    let mut render = ShapeRender::new(ShapeKind::Composite);
    render.strokes.push(pixel_art_line(c(x, y), joint));
    render.strokes.push(pixel_art_line(joint, c(x + 4, y)));
    render.terminals.extend([c(x, y), c(x + 4, y)]);
    if foot {
        let foot_joint = c(stem_x, y + bottom);
        render.strokes.push(pixel_art_line(joint, foot_joint));
        render.strokes.push(pixel_art_line(c(x, y + bottom), foot_joint));
        render.strokes.push(pixel_art_line(foot_joint, c(x + 4, y + bottom)));
        render.vertices.extend([joint, foot_joint]);
        render.terminals.extend([c(x, y + bottom), c(x + 4, y + bottom)]);
    } else {
        render.strokes.push(pixel_art_line(joint, c(stem_x, y + bottom)));
        render.vertices.push(joint);
        render.terminals.push(c(stem_x, y + bottom));
    }
    Ok(render)
}

/// U: two uprights joined by the lower half of an ellipse, as one stroke.
fn letter_u(x: i32, y: i32, w: u32, h: u32) -> Result<ShapeRender, ScanError> {
    let bowl_h = (w + 2).min(h);
    let bowl_top = y + h as i32 - bowl_h as i32;
    let bowl = conic_arc(c(x, bowl_top), w, bowl_h, ArcSpan::Lower)?;
    let right = x + w as i32 - 1;
    // clockwise order runs right to left along the bottom
    let bowl_start = bowl.first().expect("non-empty");
    let bowl_end = bowl.last().expect("non-empty");
    let mut points: Vec<Coord> = (y..bowl_start.y).map(|yy| c(right, yy)).collect();
    points.extend(bowl.points);
    points.extend((y..bowl_end.y).rev().map(|yy| c(x, yy)));
    let mut render = ShapeRender::new(ShapeKind::Curve);
    render.terminals.extend([c(right, y), c(x, y)]);
    render.strokes.push(Stroke::open(points, StrokeShape::Curved));
    Ok(render)
}

/// C: an ellipse with its rightmost column left open.
fn letter_c(x: i32, y: i32, w: u32, h: u32) -> Result<ShapeRender, ScanError> {
    let right = x + w as i32 - 1;
    let arc = conic_arc_where(c(x, y), w, h, |p| p.x < right)?;
    let mut render = ShapeRender::new(ShapeKind::Curve);
    render.terminals.extend([arc.first().expect("non-empty"), arc.last().expect("non-empty")]);
    render.strokes.push(arc);
    Ok(render)
}

fn letter_l(x: i32, y: i32, w: u32, h: u32) -> Result<ShapeRender, ScanError> {
    let corner = c(x, y + h as i32 - 1);
    polygon(&[c(x, y), corner, c(x + w as i32 - 1, corner.y)], false)
}
