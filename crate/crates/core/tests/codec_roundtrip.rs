//! Interchange formats: scene documents, ASCII, Braille and PBM.

mod common;

use common::{fixtures, golden_scene_names, read_fixture, scene_fixture};
use pinpix_core::catalog::catalog_list;
use pinpix_core::codec::{emit_scene, export_ascii, export_braille, export_pbm, import_braille, parse_scene};
use pinpix_core::scene::Rect;
use pinpix_core::{Coord, GridSpec, Item, PinGrid, Scene};
use proptest::prelude::*;

fn c(x: i32, y: i32) -> Coord {
    Coord::new(x, y)
}

/// Decodes plain PBM text independently of the exporter, ignoring layout.
fn read_pbm(bytes: &[u8]) -> PinGrid {
    let text = std::str::from_utf8(bytes).unwrap();
    let mut tokens = text.split_whitespace();
    assert_eq!(tokens.next(), Some("P1"));
    let w: u32 = tokens.next().unwrap().parse().unwrap();
    let h: u32 = tokens.next().unwrap().parse().unwrap();
    let bits: Vec<char> = tokens.flat_map(str::chars).collect();
    assert_eq!(bits.len(), (w * h) as usize);
    let on = bits.iter().enumerate().filter(|(_, &b)| b == '1').map(|(i, _)| c((i as u32 % w) as i32, (i as u32 / w) as i32));
    PinGrid::from_coords(GridSpec::new(w, h), on).unwrap()
}

/// Decodes ASCII art independently of the exporter.
fn read_ascii(text: &str) -> PinGrid {
    let rows: Vec<&str> = text.lines().collect();
    let w = rows[0].len() as u32;
    let on = rows.iter().enumerate().flat_map(|(y, row)| {
        row.char_indices().filter(|&(_, ch)| ch == 'o').map(move |(x, _)| c(x as i32, y as i32))
    });
    PinGrid::from_coords(GridSpec::new(w, rows.len() as u32), on).unwrap()
}

#[test]
fn committed_scenes_are_in_canonical_form() {
    for name in golden_scene_names() {
        let text = String::from_utf8(read_fixture(&format!("scenes/{name}.scene"))).unwrap();
        let scene = parse_scene(&text).unwrap();
        assert_eq!(emit_scene(&scene), text, "{name}");
        assert_eq!(parse_scene(&emit_scene(&scene)).unwrap(), scene, "{name}");
    }
}

#[test]
fn parse_errors_carry_a_position() {
    let text = String::from_utf8(read_fixture("scenes/broken.scene")).unwrap();
    let err = parse_scene(&text).unwrap_err();
    assert!(err.message.contains("blob"), "{err}");
    assert_eq!(err.line, 13);
    assert!(err.column >= 1);
    assert!(err.to_string().starts_with("line 13, column "));

    let err = parse_scene("{\"grid\": {\"width\": 27, \"height\": 27}, \"items\": [").unwrap_err();
    assert_eq!(err.line, 1);
    let err = parse_scene("{\n  \"grid\": {\"width\": 27, \"height\": 27},\n  \"items\": [{\"kind\": \"line\", \"from\": [0, 0]}]\n}").unwrap_err();
    assert_eq!(err.line, 3);
    assert!(err.message.contains("to"), "{err}");
    assert!(parse_scene("{\"grid\": {\"width\": 27, \"height\": 27}, \"items\": [], \"extra\": 1}").is_err());
}

#[test]
fn a_minimal_document_parses() {
    let scene = parse_scene(
        r#"{"grid": {"width": 27, "height": 27}, "items": [{"kind": "conic", "bbox": [0, 0, 14, 14]}]}"#,
    )
    .unwrap();
    assert_eq!(scene.grid, GridSpec::new(27, 27));
    assert_eq!(scene.items, vec![Item::Conic { bbox: Rect::new(0, 0, 14, 14) }]);
    // coordinates read as [x, y]
    let line = parse_scene(r#"{"grid": {"width": 5, "height": 9}, "items": [{"kind": "line", "from": [1, 8], "to": [4, 0]}]}"#).unwrap();
    assert_eq!(line.items[0], Item::Line { from: c(1, 8), to: c(4, 0) });
}

#[test]
fn ascii_examples() {
    let one = PinGrid::from_coords(GridSpec::new(3, 1), [c(1, 0)]).unwrap();
    assert_eq!(export_ascii(&one), ".o.\n");
    assert_eq!(export_ascii(&PinGrid::new(GridSpec::new(2, 2)).unwrap()), "..\n..\n");
}

#[test]
fn braille_examples() {
    let full = PinGrid::from_coords(GridSpec::new(2, 4), (0..2).flat_map(|x| (0..4).map(move |y| c(x, y)))).unwrap();
    assert_eq!(export_braille(&full), "2 4\n\u{28FF}\n");
    let corner = PinGrid::from_coords(GridSpec::new(2, 4), [c(0, 0)]).unwrap();
    assert_eq!(export_braille(&corner), "2 4\n\u{2801}\n");
    let empty = PinGrid::new(GridSpec::new(27, 27)).unwrap();
    let text = export_braille(&empty);
    assert_eq!(text.lines().count(), 1 + 7);
    assert!(text.lines().skip(1).all(|l| l.chars().count() == 14));
    assert_eq!(import_braille(&text).unwrap(), empty);
    assert!(import_braille("2 4\nx\n").is_err());
    assert!(import_braille("3\n").is_err());
}

#[test]
fn pbm_examples() {
    let one = PinGrid::from_coords(GridSpec::new(1, 1), [c(0, 0)]).unwrap();
    assert_eq!(export_pbm(&one), b"P1\n1 1\n1\n");
    let empty = PinGrid::new(GridSpec::new(27, 27)).unwrap();
    let pbm = export_pbm(&empty);
    assert!(pbm.starts_with(b"P1\n27 27\n"));
    assert_eq!(pbm.iter().filter(|&&b| b == b'0').count(), 27 * 27);
    assert_eq!(read_pbm(&pbm), empty);
}

#[test]
fn catalog_goldens_agree_across_formats() {
    for e in catalog_list() {
        let ascii = String::from_utf8(read_fixture(&format!("catalog/{}.txt", e.name))).unwrap();
        let pbm = read_fixture(&format!("catalog/{}.pbm", e.name));
        let grid = read_ascii(&ascii);
        assert_eq!(read_pbm(&pbm), grid, "{}", e.name);
        assert_eq!(export_pbm(&grid), pbm, "{}", e.name);
        assert_eq!(import_braille(&export_braille(&grid)).unwrap(), grid, "{}", e.name);
    }
    assert!(fixtures().join("catalog").is_dir());
}

#[test]
fn rendered_scenes_survive_braille() {
    for name in golden_scene_names() {
        let grid = pinpix_core::render_scene(&scene_fixture(&name)).unwrap().grid;
        assert_eq!(import_braille(&export_braille(&grid)).unwrap(), grid, "{name}");
        assert_eq!(read_pbm(&export_pbm(&grid)), grid, "{name}");
    }
}

fn any_grid() -> impl Strategy<Value = PinGrid> {
    let sized = prop_oneof![Just((27u32, 27u32)), (1u32..40, 1u32..40)];
    sized.prop_flat_map(|(w, h)| {
        prop::collection::vec(any::<bool>(), (w * h) as usize).prop_map(move |bits| {
            let on = bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| c((i as u32 % w) as i32, (i as u32 / w) as i32));
            PinGrid::from_coords(GridSpec::new(w, h), on).unwrap()
        })
    })
}

fn coord() -> impl Strategy<Value = Coord> {
    (-30i32..60, -30i32..60).prop_map(|(x, y)| c(x, y))
}

fn rect() -> impl Strategy<Value = Rect> {
    (-5i32..30, -5i32..30, -2i32..30, -2i32..30).prop_map(|(x, y, w, h)| Rect::new(x, y, w, h))
}

fn item() -> impl Strategy<Value = Item> {
    let names: Vec<String> = catalog_list().iter().map(|e| e.name.to_string()).chain(["no_such_shape".into()]).collect();
    prop_oneof![
        (prop::sample::select(names), rect()).prop_map(|(name, bbox)| Item::Catalog { name, bbox }),
        (coord(), coord()).prop_map(|(from, to)| Item::Line { from, to }),
        (prop::collection::vec(coord(), 0..6), any::<bool>()).prop_map(|(vertices, closed)| Item::Polygon { vertices, closed }),
        rect().prop_map(|bbox| Item::Conic { bbox }),
        (coord(), 0u32..6).prop_map(|(at, size)| Item::Marker { at, size }),
        prop::collection::vec(coord(), 0..8).prop_map(|coords| Item::Pixels { coords }),
        rect().prop_map(|rect| Item::Erase { rect }),
    ]
}

fn scene() -> impl Strategy<Value = Scene> {
    let grid = prop_oneof![
        Just(GridSpec::default()),
        (1u32..60, 1u32..60).prop_map(|(w, h)| GridSpec::new(w, h)),
        (1u32..60, 1u32..60, 1u32..40).prop_map(|(w, h, tenths)| {
            let mut g = GridSpec::new(w, h);
            g.pitch_mm = tenths as f64 / 10.0;
            g
        }),
    ];
    (grid, prop::collection::vec(item(), 0..8)).prop_map(|(grid, items)| Scene { grid, items })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn braille_round_trips(grid in any_grid()) {
        prop_assert_eq!(import_braille(&export_braille(&grid)).unwrap(), grid);
    }

    #[test]
    fn pbm_and_ascii_decode_back(grid in any_grid()) {
        prop_assert_eq!(read_pbm(&export_pbm(&grid)), grid.clone());
        prop_assert_eq!(read_ascii(&export_ascii(&grid)), grid);
    }

    #[test]
    fn scenes_round_trip_through_text(s in scene()) {
        let text = emit_scene(&s);
        let back = parse_scene(&text).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(emit_scene(&back), text);
    }
}
