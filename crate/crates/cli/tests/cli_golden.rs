//! The installed binary against committed stdout, exit codes and stderr.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::process::{Command, Output};

use common::{assert_golden, fixtures};

/// Runs `pinpix` from the fixtures directory so paths in messages are short.
fn pinpix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pinpix")).args(args).current_dir(fixtures()).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("the process exits normally")
}

/// Invocations with committed stdout and their expected exit codes.
const GOLDEN_RUNS: &[(&str, &[&str], i32)] = &[
    ("catalog_list.txt", &["catalog"], 0),
    ("catalog_list.json", &["catalog", "--format", "json"], 0),
    ("catalog_square_ascii.txt", &["catalog", "square", "--format", "ascii"], 0),
    ("catalog_heart_braille.txt", &["catalog", "heart", "--format", "braille"], 0),
    ("lint_fig6_extended.txt", &["lint", "scenes/fig6_extended_triangle.scene"], 1),
    ("lint_fig6_eroded.json", &["lint", "scenes/fig6_eroded_triangle.scene", "--format", "json"], 1),
    ("lint_smiley_a.txt", &["lint", "scenes/smiley_a.scene"], 0),
    ("diff_smiley_a_b.txt", &["diff", "scenes/smiley_a.scene", "scenes/smiley_b.scene"], 0),
    ("diff_smiley_a_b.json", &["diff", "scenes/smiley_a.scene", "scenes/smiley_b.scene", "--format", "json"], 0),
    ("render_primitives.txt", &["render", "scenes/primitives.scene"], 0),
    ("render_smiley_b.pbm", &["render", "scenes/smiley_b.scene", "--format", "pbm"], 0),
    ("render_fig6.json", &["render", "scenes/fig6_triangle.scene", "--format", "json"], 0),
];

#[test]
fn stdout_matches_the_goldens() {
    for &(golden, args, expected) in GOLDEN_RUNS {
        let out = pinpix(args);
        assert_eq!(code(&out), expected, "pinpix {args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert_golden(&format!("cli/{golden}"), &out.stdout);
        assert_eq!(pinpix(args).stdout, out.stdout, "pinpix {args:?} is not repeatable");
    }
}

#[test]
fn square_from_the_catalog_is_a_ten_by_ten_outline() {
    let out = pinpix(&["catalog", "square", "--format", "ascii"]);
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 10);
    assert_eq!(rows[0], "oooooooooo");
    assert!(rows[1..9].iter().all(|r| *r == "o........o"));
    assert_eq!(rows[9], "oooooooooo");
}

#[test]
fn lint_prints_both_corner_violations() {
    let out = pinpix(&["lint", "scenes/fig6_extended_triangle.scene"]);
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert_eq!(text.lines().filter(|l| l.contains("G6")).count(), 2, "{text}");
    assert_eq!(code(&out), 1);
    let advisories = pinpix(&["lint", "scenes/smiley_a.scene"]);
    assert_eq!(String::from_utf8(advisories.stdout.clone()).unwrap().matches("ADVISORY").count(), 2);
    assert_eq!(code(&advisories), 0);
}

#[test]
fn failures_map_to_exit_codes() {
    let broken = pinpix(&["render", "scenes/broken.scene"]);
    assert_eq!(code(&broken), 2);
    assert!(broken.stdout.is_empty());
    let message = String::from_utf8(broken.stderr).unwrap();
    assert!(message.contains("broken.scene:13:") && message.contains("blob"), "{message}");
    assert_eq!(code(&pinpix(&["lint", "scenes/broken.scene"])), 2);

    let missing = pinpix(&["render", "scenes/no_such.scene"]);
    assert_eq!(code(&missing), 3);
    assert!(String::from_utf8(missing.stderr).unwrap().contains("no_such.scene"));

    assert_eq!(code(&pinpix(&["catalog", "hexagon"])), 2);
    assert_eq!(code(&pinpix(&["catalog", "heart", "--bbox", "2x2"])), 2);
    assert_eq!(code(&pinpix(&["render"])), 2);
    assert_eq!(code(&pinpix(&["frobnicate"])), 2);
}

#[test]
fn render_writes_to_a_file_on_request() {
    let dir = std::env::temp_dir().join(format!("pinpix-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let target = dir.join("square.pbm");
    let out = pinpix(&["render", "scenes/smiley_b.scene", "--format", "pbm", "--out", target.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&target).unwrap(), common::read_fixture("cli/render_smiley_b.pbm"));
    let unwritable = dir.join("missing-dir").join("x.pbm");
    assert_eq!(code(&pinpix(&["render", "scenes/smiley_b.scene", "--out", unwritable.to_str().unwrap()])), 3);
    std::fs::remove_dir_all(&dir).unwrap();
}
