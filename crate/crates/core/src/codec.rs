//! Scene documents and grid exports.
//!
//! A scene document is JSON: an object with `grid` and `items`, each item an
//! object tagged by `kind`. [`emit_scene`] writes the canonical form (fixed key
//! order, two-space indentation, arrays of plain values kept on one line) so
//! committed documents stay byte-stable.
//!
//! Grids export as text art, Braille cells, plain PBM, or a small JSON object.

use std::fmt;

use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::Deserialize;
use serde_json::{Map, Value};
use thiserror::Error;

use crate::catalog::catalog_list;
use crate::grid::{Coord, GridDiff, GridSpec, PinGrid, DEFAULT_DOT_HEIGHT_MM, DEFAULT_DOT_WIDTH_MM, DEFAULT_PITCH_MM};
use crate::scene::{Item, Rect, RenderedScene, Scene};

/// A syntax or content error at a 1-based position in the source text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn at(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError { line, column, message: message.into() }
    }
}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> Self {
        let text = e.to_string();
        // serde_json appends " at line L column C"; the fields carry that already
        let message = match text.rfind(" at line ") {
            Some(cut) => text[..cut].to_string(),
            None => text,
        };
        ParseError { line: e.line().max(1), column: e.column().max(1), message }
    }
}

const ITEM_KINDS: &[&str] = &["catalog", "line", "polygon", "conic", "marker", "pixels", "erase"];

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogFields {
    name: String,
    bbox: Rect,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LineFields {
    from: Coord,
    to: Coord,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolygonFields {
    vertices: Vec<Coord>,
    closed: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BoxFields {
    bbox: Rect,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MarkerFields {
    at: Coord,
    size: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PixelsFields {
    coords: Vec<Coord>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EraseFields {
    rect: Rect,
}

fn item_from_fields(kind: &str, fields: Map<String, Value>) -> Result<Item, serde_json::Error> {
    let value = Value::Object(fields);
    Ok(match kind {
        "catalog" => {
            let f: CatalogFields = serde_json::from_value(value)?;
            Item::Catalog { name: f.name, bbox: f.bbox }
        }
        "line" => {
            let f: LineFields = serde_json::from_value(value)?;
            Item::Line { from: f.from, to: f.to }
        }
        "polygon" => {
            let f: PolygonFields = serde_json::from_value(value)?;
            Item::Polygon { vertices: f.vertices, closed: f.closed }
        }
        "conic" => Item::Conic { bbox: serde_json::from_value::<BoxFields>(value)?.bbox },
        "marker" => {
            let f: MarkerFields = serde_json::from_value(value)?;
            Item::Marker { at: f.at, size: f.size }
        }
        "pixels" => Item::Pixels { coords: serde_json::from_value::<PixelsFields>(value)?.coords },
        "erase" => Item::Erase { rect: serde_json::from_value::<EraseFields>(value)?.rect },
        other => unreachable!("kind {other:?} was checked against the known kinds"),
    })
}

struct ItemVisitor;

impl<'de> Visitor<'de> for ItemVisitor {
    type Value = Item;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an item object with a \"kind\" field")
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Item, A::Error> {
        let mut kind: Option<String> = None;
        let mut fields = Map::new();
        while let Some(key) = map.next_key::<String>()? {
            if key == "kind" {
                if kind.is_some() {
                    return Err(de::Error::duplicate_field("kind"));
                }
                // checked here so the error points at the kind itself
                let name: String = map.next_value()?;
                if !ITEM_KINDS.contains(&name.as_str()) {
                    return Err(de::Error::unknown_variant(&name, ITEM_KINDS));
                }
                kind = Some(name);
            } else {
                if fields.contains_key(&key) {
                    return Err(de::Error::custom(format_args!("duplicate field `{key}`")));
                }
                let value: Value = map.next_value()?;
                fields.insert(key, value);
            }
        }
        let kind = kind.ok_or_else(|| de::Error::missing_field("kind"))?;
        item_from_fields(&kind, fields).map_err(|e| de::Error::custom(format_args!("{kind} item: {e}")))
    }
}

impl<'de> Deserialize<'de> for Item {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        deserializer.deserialize_map(ItemVisitor)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneDocument {
    grid: GridSpec,
    items: Vec<Item>,
}

/// Scenes deserialize from the document form, so they can be embedded in
/// larger JSON requests.
impl<'de> Deserialize<'de> for Scene {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let doc = SceneDocument::deserialize(deserializer)?;
        Ok(Scene { grid: doc.grid, items: doc.items })
    }
}

pub fn parse_scene(text: &str) -> Result<Scene, ParseError> {
    Ok(serde_json::from_str(text)?)
}

fn grid_value(spec: &GridSpec) -> Value {
    let mut m = Map::new();
    m.insert("width".into(), spec.width.into());
    m.insert("height".into(), spec.height.into());
    // physical fields appear only when they differ from the desk display
    for (key, value, default) in [
        ("pitch_mm", spec.pitch_mm, DEFAULT_PITCH_MM),
        ("dot_width_mm", spec.dot_width_mm, DEFAULT_DOT_WIDTH_MM),
        ("dot_height_mm", spec.dot_height_mm, DEFAULT_DOT_HEIGHT_MM),
    ] {
        if value != default {
            m.insert(key.into(), value.into());
        }
    }
    Value::Object(m)
}

/// Canonical document text for a scene.
pub fn emit_scene(scene: &Scene) -> String {
    let mut doc = Map::new();
    doc.insert("grid".into(), grid_value(&scene.grid));
    let items = scene
        .items
        .iter()
        .map(|item| serde_json::to_value(item).expect("items serialize to JSON"))
        .collect();
    doc.insert("items".into(), Value::Array(items));
    let mut out = String::new();
    write_canonical(&Value::Object(doc), 0, &mut out);
    out.push('\n');
    out
}

fn write_canonical(value: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| " ".repeat(n);
    match value {
        Value::Object(m) if !m.is_empty() => {
            out.push_str("{\n");
            for (i, (key, v)) in m.iter().enumerate() {
                out.push_str(&pad(indent + 2));
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                write_canonical(v, indent + 2, out);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        Value::Array(a) if a.iter().any(|v| v.is_object()) => {
            out.push_str("[\n");
            for (i, v) in a.iter().enumerate() {
                out.push_str(&pad(indent + 2));
                write_canonical(v, indent + 2, out);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Array(a) => {
            out.push('[');
            for (i, v) in a.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_canonical(v, indent, out);
            }
            out.push(']');
        }
        other => out.push_str(&other.to_string()),
    }
}

/// One text line per row: `o` for a raised pin, `.` for a flat one.
pub fn export_ascii(grid: &PinGrid) -> String {
    let mut out = String::with_capacity(grid.spec().cell_count() + grid.height() as usize);
    for row in grid.rows() {
        out.extend(row.iter().map(|&on| if on { 'o' } else { '.' }));
        out.push('\n');
    }
    out
}

/// Dot bit for the pin at `(col, row)` inside a 2x4 Braille cell.
const BRAILLE_BITS: [[u32; 2]; 4] = [[0x01, 0x08], [0x02, 0x10], [0x04, 0x20], [0x40, 0x80]];
const BRAILLE_BASE: u32 = 0x2800;

/// A `"W H"` header line, then one line of Braille cells per four pin rows.
/// Edges are padded with flat pins to whole cells.
pub fn export_braille(grid: &PinGrid) -> String {
    let (w, h) = (grid.width() as i32, grid.height() as i32);
    let mut out = format!("{w} {h}\n");
    for cell_y in (0..h).step_by(4) {
        for cell_x in (0..w).step_by(2) {
            let mut bits = 0;
            for (dy, row_bits) in BRAILLE_BITS.iter().enumerate() {
                for (dx, bit) in row_bits.iter().enumerate() {
                    let p = Coord::new(cell_x + dx as i32, cell_y + dy as i32);
                    if grid.spec().contains(p) && grid.get(p) {
                        bits |= bit;
                    }
                }
            }
            out.push(char::from_u32(BRAILLE_BASE + bits).expect("Braille block is valid"));
        }
        out.push('\n');
    }
    out
}

/// Reads the output of [`export_braille`] back into a grid of the header's size.
pub fn import_braille(text: &str) -> Result<PinGrid, ParseError> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| ParseError::at(1, 1, "missing \"W H\" header"))?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    let parse_dim = |s: &str| s.parse::<u32>().ok().filter(|&n| n > 0);
    let (w, h) = match dims.as_slice() {
        [a, b] => match (parse_dim(a), parse_dim(b)) {
            (Some(w), Some(h)) => (w, h),
            _ => return Err(ParseError::at(1, 1, format!("header {header:?} needs two positive sizes"))),
        },
        _ => return Err(ParseError::at(1, 1, format!("header {header:?} needs exactly \"W H\""))),
    };
    let cells_x = w.div_ceil(2) as usize;
    let cells_y = h.div_ceil(4) as usize;
    let spec = GridSpec::new(w, h);
    let mut on = Vec::new();
    let mut rows_seen = 0;
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        if i >= cells_y {
            if line.is_empty() {
                continue;
            }
            return Err(ParseError::at(line_no, 1, format!("expected {cells_y} cell rows for height {h}")));
        }
        rows_seen += 1;
        let chars: Vec<char> = line.chars().collect();
        if chars.len() != cells_x {
            return Err(ParseError::at(
                line_no,
                1,
                format!("expected {cells_x} cells for width {w}, found {}", chars.len()),
            ));
        }
        for (j, ch) in chars.into_iter().enumerate() {
            let code = ch as u32;
            if !(BRAILLE_BASE..=BRAILLE_BASE + 0xFF).contains(&code) {
                return Err(ParseError::at(line_no, j + 1, format!("U+{code:04X} is not a Braille pattern")));
            }
            let bits = code - BRAILLE_BASE;
            for (dy, row_bits) in BRAILLE_BITS.iter().enumerate() {
                for (dx, bit) in row_bits.iter().enumerate() {
                    if bits & bit == 0 {
                        continue;
                    }
                    let p = Coord::new((2 * j + dx) as i32, (4 * i + dy) as i32);
                    if !spec.contains(p) {
                        return Err(ParseError::at(line_no, j + 1, format!("dot at {p} lies outside the {w}x{h} grid")));
                    }
                    on.push(p);
                }
            }
        }
    }
    if rows_seen != cells_y {
        return Err(ParseError::at(rows_seen + 2, 1, format!("expected {cells_y} cell rows for height {h}")));
    }
    Ok(PinGrid::from_coords(spec, on).expect("every dot was checked against the grid"))
}

const PBM_LINE_MAX: usize = 70;

/// Plain (`P1`) portable bitmap, `1` for a raised pin, lines of at most 70 characters.
pub fn export_pbm(grid: &PinGrid) -> Vec<u8> {
    let mut out = format!("P1\n{} {}\n", grid.width(), grid.height()).into_bytes();
    for row in grid.rows() {
        for chunk in row.chunks(PBM_LINE_MAX) {
            out.extend(chunk.iter().map(|&on| if on { b'1' } else { b'0' }));
            out.push(b'\n');
        }
    }
    out
}

/// `{"width", "height", "rows"}` with each row a string of `0`/`1`.
pub fn grid_to_json(grid: &PinGrid) -> Value {
    let rows: Vec<Value> = grid
        .rows()
        .map(|row| Value::String(row.iter().map(|&on| if on { '1' } else { '0' }).collect()))
        .collect();
    let mut m = Map::new();
    m.insert("width".into(), grid.width().into());
    m.insert("height".into(), grid.height().into());
    m.insert("rows".into(), Value::Array(rows));
    Value::Object(m)
}

/// `{"added", "removed", "counts"}`, pins listed row-major.
pub fn diff_to_json(diff: &GridDiff) -> Value {
    let pins = |set: &std::collections::BTreeSet<Coord>| serde_json::to_value(set).expect("coordinates serialize");
    serde_json::json!({
        "added": pins(&diff.added),
        "removed": pins(&diff.removed),
        "counts": {"added": diff.added.len(), "removed": diff.removed.len()},
    })
}

/// Catalog entries in catalog order with their sizes in pins and millimetres.
pub fn catalog_to_json() -> Value {
    let entries: Vec<Value> = catalog_list()
        .iter()
        .map(|e| {
            let (w_mm, h_mm) = e.default_size_mm();
            serde_json::json!({
                "name": e.name,
                "default_bbox": [e.default_bbox.0, e.default_bbox.1],
                "min_bbox": [e.min_bbox.0, e.min_bbox.1],
                "default_mm": [w_mm, h_mm],
                "source": e.source,
            })
        })
        .collect();
    serde_json::json!({ "entries": entries })
}

/// Per-render outline of a rendered scene: owning item, shape kind and sizes.
pub fn renders_to_json(rendered: &RenderedScene) -> Value {
    let renders: Vec<Value> = rendered
        .renders
        .iter()
        .map(|r| {
            serde_json::json!({
                "item": r.item,
                "kind": r.render.kind,
                "strokes": r.render.strokes.len(),
                "pixels": r.render.pixels().len(),
                "vertices": r.render.vertices,
                "terminals": r.render.terminals,
                "markers": r.render.markers,
            })
        })
        .collect();
    Value::Array(renders)
}
