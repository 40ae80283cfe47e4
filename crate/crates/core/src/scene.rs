//! Ordered drawing and erasing items over a grid, rendered into a pin grid
//! plus the per-item shape structure the linter needs.
//!
//! Items apply strictly in order. Erasures clear pins on the grid and also cut
//! them out of every earlier render, so a corner erased from a polygon lints as
//! an eroded corner of that polygon. Loose `pixels` that touch an earlier
//! stroke join that stroke, so pins added past a corner lint as an extension of
//! the edge they continue.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{self, CatalogError};
use crate::grid::{Coord, GridSpec, PinGrid};
use crate::lint::{lint_render, LintReport};
use crate::scanconv::{conic, line_render, polygon, Marker, ScanError, ShapeKind, ShapeRender, Stroke, StrokeShape};

/// Axis-aligned box given by its top-left pin and its size in pins.
/// Interchanged as `[x, y, w, h]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "[i32; 4]", into = "[i32; 4]")]
pub struct Rect {
    pub x: i32,
    pub y: i32,
    pub w: i32,
    pub h: i32,
}

impl Rect {
    pub const fn new(x: i32, y: i32, w: i32, h: i32) -> Self {
        Rect { x, y, w, h }
    }

    pub fn top_left(&self) -> Coord {
        Coord::new(self.x, self.y)
    }

    pub fn contains(&self, p: Coord) -> bool {
        p.x >= self.x && p.y >= self.y && p.x < self.x + self.w && p.y < self.y + self.h
    }

    fn size(&self, item: usize) -> Result<(u32, u32), Issue> {
        if self.w <= 0 || self.h <= 0 {
            return Err(Issue::new(
                item,
                IssueKind::InvalidArgument,
                format!("box size must be positive, got {}x{}", self.w, self.h),
            ));
        }
        Ok((self.w as u32, self.h as u32))
    }
}

impl From<[i32; 4]> for Rect {
    fn from([x, y, w, h]: [i32; 4]) -> Self {
        Rect { x, y, w, h }
    }
}

impl From<Rect> for [i32; 4] {
    fn from(r: Rect) -> Self {
        [r.x, r.y, r.w, r.h]
    }
}

/// One step of a scene. The interchange form is an object tagged by `kind`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Item {
    Catalog { name: String, bbox: Rect },
    Line { from: Coord, to: Coord },
    Polygon { vertices: Vec<Coord>, closed: bool },
    Conic { bbox: Rect },
    Marker { at: Coord, size: u32 },
    Pixels { coords: Vec<Coord> },
    Erase { rect: Rect },
}

impl Item {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Item::Catalog { .. } => "catalog",
            Item::Line { .. } => "line",
            Item::Polygon { .. } => "polygon",
            Item::Conic { .. } => "conic",
            Item::Marker { .. } => "marker",
            Item::Pixels { .. } => "pixels",
            Item::Erase { .. } => "erase",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scene {
    pub grid: GridSpec,
    pub items: Vec<Item>,
}

impl Scene {
    pub fn new(grid: GridSpec) -> Self {
        Scene { grid, items: Vec::new() }
    }

    pub fn with_item(mut self, item: Item) -> Self {
        self.items.push(item);
        self
    }
}

impl Default for Scene {
    fn default() -> Self {
        Scene::new(GridSpec::default())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IssueKind {
    InvalidGrid,
    OutOfBounds,
    UnknownName,
    TooSmall,
    InvalidArgument,
}

/// A reason a scene cannot be rendered as written.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Issue {
    /// The offending item, or `None` for the grid spec itself.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub item: Option<usize>,
    pub kind: IssueKind,
    pub message: String,
}

impl Issue {
    fn new(item: usize, kind: IssueKind, message: impl Into<String>) -> Self {
        Issue { item: Some(item), kind, message: message.into() }
    }
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.item {
            Some(i) => write!(f, "item {i}: {}", self.message),
            None => write!(f, "grid: {}", self.message),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SceneError {
    #[error("invalid scene: {}", .0.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Issue>),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RenderOptions {
    /// Drop pins that fall outside the grid instead of rejecting the scene.
    pub clip: bool,
}

/// A render produced by (or, after erasures and joins, descended from) one item.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ItemRender {
    pub item: usize,
    pub render: ShapeRender,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderedScene {
    pub grid: PinGrid,
    pub renders: Vec<ItemRender>,
}

impl RenderedScene {
    /// Lints every render, tagging each violation with its item index.
    pub fn lint(&self) -> LintReport {
        let violations = self.renders.iter().flat_map(|r| {
            lint_render(&r.render).violations.into_iter().map(move |mut v| {
                v.item = Some(r.item);
                v
            })
        });
        LintReport::from_violations(violations.collect())
    }
}

/// Lowers a drawing item to renders placed on the grid. `Pixels` and `Erase`
/// are applied by the caller and lower to nothing here.
fn lower(index: usize, item: &Item) -> Result<Vec<ShapeRender>, Issue> {
    let scan_issue = |e: ScanError| {
        let kind = match e {
            ScanError::TooSmall(_) => IssueKind::TooSmall,
            _ => IssueKind::InvalidArgument,
        };
        Issue::new(index, kind, e.to_string())
    };
    match item {
        Item::Catalog { name, bbox } => {
            let size = bbox.size(index)?;
            let renders = catalog::build(name, Some(size)).map_err(|e| {
                let kind = match e {
                    CatalogError::NotFound(_) => IssueKind::UnknownName,
                    CatalogError::TooSmall { .. } => IssueKind::TooSmall,
                    CatalogError::Scan(ScanError::TooSmall(_)) => IssueKind::TooSmall,
                    CatalogError::Scan(_) => IssueKind::InvalidArgument,
                };
                Issue::new(index, kind, e.to_string())
            })?;
            Ok(renders.iter().map(|r| r.translated(bbox.x, bbox.y)).collect())
        }
        Item::Line { from, to } => Ok(vec![line_render(*from, *to)]),
        Item::Polygon { vertices, closed } => Ok(vec![polygon(vertices, *closed).map_err(scan_issue)?]),
        Item::Conic { bbox } => {
            let (w, h) = bbox.size(index)?;
            Ok(vec![conic(bbox.top_left(), w, h).map_err(scan_issue)?])
        }
        Item::Marker { at, size } => {
            if *size == 0 {
                return Err(Issue::new(index, IssueKind::InvalidArgument, "marker size must be at least 1"));
            }
            let mut render = ShapeRender::new(ShapeKind::Marker);
            render.markers.push(Marker { at: *at, size: *size });
            Ok(vec![render])
        }
        Item::Pixels { .. } | Item::Erase { .. } => Ok(Vec::new()),
    }
}

/// Pins an item covers: drawn pins for drawing items, the rectangle for erasures.
fn footprint(item: &Item, lowered: &[ShapeRender]) -> Vec<Coord> {
    match item {
        Item::Pixels { coords } => coords.clone(),
        Item::Erase { rect } => vec![rect.top_left(), rect.top_left().offset(rect.w - 1, rect.h - 1)],
        _ => lowered.iter().flat_map(|r| r.pixels()).collect(),
    }
}

fn check_item(index: usize, item: &Item, spec: &GridSpec, clip: bool) -> Result<Vec<ShapeRender>, Issue> {
    if let Item::Erase { rect } = item {
        rect.size(index)?;
    }
    let lowered = lower(index, item)?;
    if !clip {
        let outside: BTreeSet<Coord> = footprint(item, &lowered).into_iter().filter(|p| !spec.contains(*p)).collect();
        if let Some(first) = outside.first() {
            return Err(Issue::new(
                index,
                IssueKind::OutOfBounds,
                format!(
                    "{} item reaches {} pin(s) outside the {}x{} grid, first at {first}",
                    item.kind_name(),
                    outside.len(),
                    spec.width,
                    spec.height
                ),
            ));
        }
    }
    Ok(lowered)
}

/// Everything that stops `scene` from rendering; empty when it is valid.
/// Out-of-bounds pins are reported unless `options.clip` is set.
pub fn validate_scene_with(scene: &Scene, options: RenderOptions) -> Vec<Issue> {
    let mut issues = Vec::new();
    if let Err(e) = scene.grid.validate() {
        issues.push(Issue { item: None, kind: IssueKind::InvalidGrid, message: e.to_string() });
    }
    for (index, item) in scene.items.iter().enumerate() {
        if let Err(issue) = check_item(index, item, &scene.grid, options.clip) {
            issues.push(issue);
        }
    }
    issues
}

pub fn validate_scene(scene: &Scene) -> Vec<Issue> {
    validate_scene_with(scene, RenderOptions::default())
}

/// Removes the pins selected by `cut` from a render. Markers that lose pins
/// survive as single-pin markers on what is left.
fn cut_render(render: &mut ShapeRender, cut: impl Fn(Coord) -> bool) {
    for stroke in &mut render.strokes {
        stroke.points.retain(|p| !cut(*p));
    }
    render.strokes.retain(|s| !s.is_empty());
    let mut markers = Vec::with_capacity(render.markers.len());
    for m in &render.markers {
        if m.pixels().any(&cut) {
            markers.extend(m.pixels().filter(|p| !cut(*p)).map(|at| Marker { at, size: 1 }));
        } else {
            markers.push(*m);
        }
    }
    render.markers = markers;
}

fn is_empty_render(render: &ShapeRender) -> bool {
    render.strokes.is_empty() && render.markers.is_empty()
}

/// Where a loose pin should join: (render, stroke, at the front).
fn join_target(renders: &[ItemRender], p: Coord) -> Option<(usize, usize, bool)> {
    // a stroke whose end step carries straight on to `p`
    for (ri, r) in renders.iter().enumerate() {
        for (si, s) in r.render.strokes.iter().enumerate() {
            if s.closed || s.shape == StrokeShape::Freehand || s.points.len() < 2 {
                continue;
            }
            let n = s.points.len();
            let (first, second) = (s.points[0], s.points[1]);
            let (last, before) = (s.points[n - 1], s.points[n - 2]);
            if last.offset(last.x - before.x, last.y - before.y) == p {
                return Some((ri, si, false));
            }
            if first.offset(first.x - second.x, first.y - second.y) == p {
                return Some((ri, si, true));
            }
        }
    }
    // otherwise the latest render touching `p`, its first touching stroke
    for (ri, r) in renders.iter().enumerate().rev() {
        for (si, s) in r.render.strokes.iter().enumerate() {
            if s.points.iter().any(|q| q.is_adjacent8(p)) {
                let front = s.first().is_some_and(|f| f.is_adjacent8(p)) && !s.last().is_some_and(|l| l.is_adjacent8(p));
                return Some((ri, si, front));
            }
        }
    }
    None
}

/// Joins loose pins to the strokes they touch, repeating until no pin joins.
/// Returns the pins left over.
fn join_pixels(renders: &mut [ItemRender], coords: &[Coord]) -> BTreeSet<Coord> {
    let drawn: BTreeSet<Coord> = renders.iter().flat_map(|r| r.render.stroke_pixels()).collect();
    let mut pending: BTreeSet<Coord> = coords.iter().copied().filter(|p| !drawn.contains(p)).collect();
    'outer: loop {
        for &p in &pending {
            if let Some((ri, si, front)) = join_target(renders, p) {
                let points = &mut renders[ri].render.strokes[si].points;
                if front {
                    points.insert(0, p);
                } else {
                    points.push(p);
                }
                pending.remove(&p);
                continue 'outer;
            }
        }
        return pending;
    }
}

pub fn render_scene_with(scene: &Scene, options: RenderOptions) -> Result<RenderedScene, SceneError> {
    let issues = validate_scene_with(scene, options);
    if !issues.is_empty() {
        return Err(SceneError::Invalid(issues));
    }
    let spec = scene.grid;
    let mut pins: BTreeSet<Coord> = BTreeSet::new();
    let mut renders: Vec<ItemRender> = Vec::new();
    for (index, item) in scene.items.iter().enumerate() {
        match item {
            Item::Erase { rect } => {
                pins.retain(|p| !rect.contains(*p));
                for r in &mut renders {
                    cut_render(&mut r.render, |p| rect.contains(p));
                }
                renders.retain(|r| !is_empty_render(&r.render));
            }
            Item::Pixels { coords } => {
                let kept: Vec<Coord> = coords.iter().copied().filter(|p| spec.contains(*p)).collect();
                pins.extend(&kept);
                let loose = join_pixels(&mut renders, &kept);
                if !loose.is_empty() {
                    let render = ShapeRender::new(ShapeKind::Pixels).with_stroke(Stroke::freehand(loose));
                    renders.push(ItemRender { item: index, render });
                }
            }
            _ => {
                let lowered = lower(index, item).map_err(|issue| SceneError::Invalid(vec![issue]))?;
                for mut render in lowered {
                    cut_render(&mut render, |p| !spec.contains(p));
                    pins.extend(render.pixels());
                    if !is_empty_render(&render) {
                        renders.push(ItemRender { item: index, render });
                    }
                }
            }
        }
    }
    let grid = PinGrid::from_coords(spec, pins).expect("pins were kept inside a validated grid");
    Ok(RenderedScene { grid, renders })
}

/// Renders a scene, rejecting pins outside the grid.
pub fn render_scene(scene: &Scene) -> Result<RenderedScene, SceneError> {
    render_scene_with(scene, RenderOptions::default())
}

pub fn lint_scene_with(scene: &Scene, options: RenderOptions) -> Result<LintReport, SceneError> {
    Ok(render_scene_with(scene, options)?.lint())
}

/// Lints each item's renders; every violation carries its item index.
pub fn lint_scene(scene: &Scene) -> Result<LintReport, SceneError> {
    lint_scene_with(scene, RenderOptions::default())
}
