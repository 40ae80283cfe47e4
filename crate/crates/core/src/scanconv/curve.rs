use std::collections::BTreeSet;

use super::line::midpoint_line;
use super::stroke::{bounds_of, Stroke, StrokeShape};
use super::topology::thin;
use super::ScanError;
use crate::grid::Coord;

/// Samples taken per pixel of bounding-box diagonal when no count is given.
pub const SAMPLES_PER_DIAGONAL_PX: f64 = 8.0;
const PROBE_SAMPLES: usize = 64;

fn sample_at<F>(sampler: &F, t: f64) -> Result<(f64, f64), ScanError>
where
    F: Fn(f64) -> (f64, f64),
{
    let (x, y) = sampler(t);
    if x.is_finite() && y.is_finite() {
        Ok((x, y))
    } else {
        Err(ScanError::Numeric { t })
    }
}

fn param(t0: f64, t1: f64, k: usize, n: usize) -> f64 {
    t0 + (t1 - t0) * k as f64 / (n - 1) as f64
}

/// Sample count for `parametric_stroke`: eight per pixel of the curve's
/// bounding-box diagonal, estimated from a coarse probe of the sampler.
pub fn default_sample_count<F>(sampler: &F, t0: f64, t1: f64) -> Result<usize, ScanError>
where
    F: Fn(f64) -> (f64, f64),
{
    let (mut lo, mut hi) = ((f64::INFINITY, f64::INFINITY), (f64::NEG_INFINITY, f64::NEG_INFINITY));
    for k in 0..PROBE_SAMPLES {
        let (x, y) = sample_at(sampler, param(t0, t1, k, PROBE_SAMPLES))?;
        lo = (lo.0.min(x), lo.1.min(y));
        hi = (hi.0.max(x), hi.1.max(y));
    }
    let diagonal = (hi.0 - lo.0).hypot(hi.1 - lo.1);
    Ok(((diagonal * SAMPLES_PER_DIAGONAL_PX).ceil() as usize).max(2))
}

/// Drops every closed excursion: when a pixel shows up again, everything since
/// its first visit is discarded.
fn cut_revisits(points: Vec<Coord>) -> Vec<Coord> {
    let mut out: Vec<Coord> = Vec::with_capacity(points.len());
    for p in points {
        if let Some(k) = out.iter().position(|&q| q == p) {
            out.truncate(k + 1);
        } else {
            out.push(p);
        }
    }
    out
}

/// Rasterizes a sampled curve as a single-pixel-wide open stroke.
///
/// Samples are rounded to pins and joined with midpoint lines; repeated pins and
/// loops are dropped, then redundant corner pixels are thinned away with both
/// ends kept.
pub fn parametric_stroke<F>(sampler: F, t0: f64, t1: f64, n_samples: usize) -> Result<Stroke, ScanError>
where
    F: Fn(f64) -> (f64, f64),
{
    if n_samples < 2 {
        return Err(ScanError::Argument(format!("need at least 2 samples, got {n_samples}")));
    }
    let mut pins = Vec::with_capacity(n_samples);
    for k in 0..n_samples {
        let (x, y) = sample_at(&sampler, param(t0, t1, k, n_samples))?;
        if x.abs() > i32::MAX as f64 / 2.0 || y.abs() > i32::MAX as f64 / 2.0 {
            return Err(ScanError::Numeric { t: param(t0, t1, k, n_samples) });
        }
        pins.push(Coord::new(x.round() as i32, y.round() as i32));
    }
    let mut path: Vec<Coord> = vec![pins[0]];
    for w in pins.windows(2) {
        if w[0] == w[1] {
            continue;
        }
        path.extend(midpoint_line(w[0], w[1]).points.into_iter().skip(1));
    }
    let path = cut_revisits(path);
    let ends: BTreeSet<Coord> = [path[0], path[path.len() - 1]].into_iter().collect();
    let kept = thin(&path.iter().copied().collect(), &ends);
    let points: Vec<Coord> = path.into_iter().filter(|p| kept.contains(p)).collect();
    debug_assert!(bounds_of(points.iter().copied()).is_some());
    Ok(Stroke::open(points, StrokeShape::Curved))
}
