//! Fixture access shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use pinpix_core::codec::parse_scene;
use pinpix_core::scene::Scene;

pub mod oracles;

/// The workspace `fixtures/` directory.
pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn read_fixture(rel: &str) -> Vec<u8> {
    let path = fixtures().join(rel);
    std::fs::read(&path).unwrap_or_else(|e| panic!("cannot read fixture {}: {e}", path.display()))
}

pub fn scene_fixture(name: &str) -> Scene {
    let text = String::from_utf8(read_fixture(&format!("scenes/{name}.scene"))).unwrap();
    parse_scene(&text).unwrap_or_else(|e| panic!("{name}.scene: {e}"))
}

/// Every committed scene document except the deliberately broken one.
pub fn golden_scene_names() -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(fixtures().join("scenes"))
        .unwrap()
        .filter_map(|e| {
            let name = e.unwrap().file_name().into_string().unwrap();
            name.strip_suffix(".scene").map(str::to_string)
        })
        .filter(|n| n != "broken")
        .collect();
    names.sort();
    names
}

/// Compares `actual` with a committed fixture. With `PINPIX_BLESS=1` set the
/// fixture is written instead, for regenerating after a reviewed change.
pub fn assert_golden(rel: &str, actual: &[u8]) {
    let path = fixtures().join(rel);
    if std::env::var_os("PINPIX_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read(&path).unwrap_or_else(|e| panic!("missing golden {}: {e}", path.display()));
    if expected != actual {
        panic!(
            "{} differs from its golden\n--- expected\n{}\n--- actual\n{}",
            rel,
            String::from_utf8_lossy(&expected),
            String::from_utf8_lossy(actual)
        );
    }
}
