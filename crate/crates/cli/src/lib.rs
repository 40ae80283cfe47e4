//! The `pinpix` command line: render, lint and diff scene documents, browse
//! the shape catalog, and start the HTTP service.
//!
//! Exit codes: 0 success, 1 lint found guideline violations, 2 the input could
//! not be parsed or validated, 3 a file or socket could not be used.

use std::ffi::OsString;
use std::io::Write;
use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use pinpix_core::catalog::{self, catalog_list};
use pinpix_core::codec::{
    catalog_to_json, diff_to_json, export_ascii, export_braille, export_pbm, grid_to_json, parse_scene,
    renders_to_json,
};
use pinpix_core::scene::{render_scene_with, Item, Rect, RenderOptions, RenderedScene, Scene, SceneError};
use pinpix_core::{diff_grids, GridSpec, LintReport, PinGrid};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATIONS: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_IO: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "pinpix", version, about = "Pixel-art shapes for pin-array tactile displays")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Render a scene to a grid
    Render {
        scene: PathBuf,
        #[arg(long, value_enum, default_value_t = GridFormat::Ascii)]
        format: GridFormat,
        /// Write the output here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
        /// Drop pins outside the grid instead of rejecting the scene
        #[arg(long)]
        clip: bool,
    },
    /// Check a scene against the pixel-art guidelines
    Lint {
        scene: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        #[arg(long)]
        clip: bool,
    },
    /// List the pins that differ between two scenes
    Diff {
        before: PathBuf,
        after: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        #[arg(long)]
        clip: bool,
    },
    /// List catalog shapes, or draw one
    Catalog {
        name: Option<String>,
        /// Bounding box as WxH; defaults to the shape's catalog size
        #[arg(long, value_parser = parse_bbox)]
        bbox: Option<(u32, u32)>,
        /// text or json for the list; ascii, braille, pbm or json for a shape
        #[arg(long, value_enum)]
        format: Option<CatalogFormat>,
    },
    /// Start the HTTP service
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value_t = IpAddr::V4(Ipv4Addr::LOCALHOST))]
        host: IpAddr,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GridFormat {
    Ascii,
    Braille,
    Pbm,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CatalogFormat {
    Text,
    Ascii,
    Braille,
    Pbm,
    Json,
}

fn parse_bbox(text: &str) -> Result<(u32, u32), String> {
    let bad = || format!("expected WxH with positive sizes, got {text:?}");
    let (w, h) = text.split_once(['x', 'X']).ok_or_else(bad)?;
    let w: u32 = w.parse().map_err(|_| bad())?;
    let h: u32 = h.parse().map_err(|_| bad())?;
    if w == 0 || h == 0 {
        return Err(bad());
    }
    Ok((w, h))
}

/// A failed command: exit code plus the message for the error stream.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INVALID, message: message.into() }
    }

    fn io(message: impl Into<String>) -> Self {
        Failure { code: EXIT_IO, message: message.into() }
    }
}

type Outcome = Result<u8, Failure>;

fn read_scene(path: &Path) -> Result<Scene, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::io(format!("cannot read {}: {e}", path.display())))?;
    parse_scene(&text).map_err(|e| Failure::invalid(format!("{}:{}:{}: {}", path.display(), e.line, e.column, e.message)))
}

fn scene_failure(path: &Path, e: SceneError) -> Failure {
    let SceneError::Invalid(issues) = e;
    let mut message = format!("{}: invalid scene", path.display());
    for issue in issues {
        message.push_str(&format!("\n  {issue}"));
    }
    Failure::invalid(message)
}

fn render_file(path: &Path, clip: bool) -> Result<RenderedScene, Failure> {
    let scene = read_scene(path)?;
    render_scene_with(&scene, RenderOptions { clip }).map_err(|e| scene_failure(path, e))
}

fn pretty(value: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("values serialize");
    text.push('\n');
    text
}

fn grid_bytes(grid: &PinGrid, rendered: Option<&RenderedScene>, format: GridFormat) -> Vec<u8> {
    match format {
        GridFormat::Ascii => export_ascii(grid).into_bytes(),
        GridFormat::Braille => export_braille(grid).into_bytes(),
        GridFormat::Pbm => export_pbm(grid),
        GridFormat::Json => {
            let mut value = serde_json::json!({ "grid": grid_to_json(grid) });
            if let Some(r) = rendered {
                value["renders"] = renders_to_json(r);
                value["lint"] = serde_json::to_value(r.lint()).expect("reports serialize");
            }
            pretty(&value).into_bytes()
        }
    }
}

fn emit(out: &mut dyn Write, bytes: &[u8]) -> Result<(), Failure> {
    out.write_all(bytes).map_err(|e| Failure::io(format!("cannot write output: {e}")))
}

fn report_text(report: &LintReport) -> String {
    let mut text = String::new();
    for v in &report.violations {
        text.push_str(&format!("{v}\n"));
    }
    let advisories = report.violations.iter().filter(|v| !v.rule.is_guideline()).count();
    let guideline = report.violations.len() - advisories;
    let verdict = if report.pass { "PASS" } else { "FAIL" };
    text.push_str(&format!("{verdict}: {guideline} guideline violation(s), {advisories} advisory note(s)\n"));
    text
}

fn cmd_render(out: &mut dyn Write, scene: &Path, format: GridFormat, target: Option<&Path>, clip: bool) -> Outcome {
    let rendered = render_file(scene, clip)?;
    let bytes = grid_bytes(&rendered.grid, Some(&rendered), format);
    match target {
        Some(path) => std::fs::write(path, bytes).map_err(|e| Failure::io(format!("cannot write {}: {e}", path.display())))?,
        None => emit(out, &bytes)?,
    }
    Ok(EXIT_OK)
}

fn cmd_lint(out: &mut dyn Write, scene: &Path, format: ReportFormat, clip: bool) -> Outcome {
    let report = render_file(scene, clip)?.lint();
    let text = match format {
        ReportFormat::Text => report_text(&report),
        ReportFormat::Json => pretty(&serde_json::to_value(&report).expect("reports serialize")),
    };
    emit(out, text.as_bytes())?;
    Ok(if report.pass { EXIT_OK } else { EXIT_VIOLATIONS })
}

fn cmd_diff(out: &mut dyn Write, before: &Path, after: &Path, format: ReportFormat, clip: bool) -> Outcome {
    let a = render_file(before, clip)?;
    let b = render_file(after, clip)?;
    let d = diff_grids(&a.grid, &b.grid).map_err(|e| Failure::invalid(e.to_string()))?;
    let text = match format {
        ReportFormat::Json => pretty(&diff_to_json(&d)),
        ReportFormat::Text => {
            let mut text = format!("removed {}, added {}\n", d.removed.len(), d.added.len());
            for p in &d.removed {
                text.push_str(&format!("- {p}\n"));
            }
            for p in &d.added {
                text.push_str(&format!("+ {p}\n"));
            }
            text
        }
    };
    emit(out, text.as_bytes())?;
    Ok(EXIT_OK)
}

fn cmd_catalog(out: &mut dyn Write, name: Option<&str>, bbox: Option<(u32, u32)>, format: Option<CatalogFormat>) -> Outcome {
    let Some(name) = name else {
        let text = match format.unwrap_or(CatalogFormat::Text) {
            CatalogFormat::Text => {
                let mut text = format!("{:<12} {:>7} {:>13}  {}\n", "name", "pins", "mm", "source");
                for e in catalog_list() {
                    let (w_mm, h_mm) = e.default_size_mm();
                    let pins = format!("{}x{}", e.default_bbox.0, e.default_bbox.1);
                    let mm = format!("{w_mm:.1}x{h_mm:.1}");
                    text.push_str(&format!("{:<12} {pins:>7} {mm:>13}  {}\n", e.name, e.source));
                }
                text
            }
            CatalogFormat::Json => pretty(&catalog_to_json()),
            other => return Err(Failure::invalid(format!("--format {other:?} needs a shape name").to_lowercase())),
        };
        emit(out, text.as_bytes())?;
        return Ok(EXIT_OK);
    };
    let entry = catalog::entry(name).map_err(|e| Failure::invalid(e.to_string()))?;
    let (w, h) = bbox.unwrap_or(entry.default_bbox);
    catalog::build(name, Some((w, h))).map_err(|e| Failure::invalid(e.to_string()))?;
    let scene = Scene::new(GridSpec::new(w, h))
        .with_item(Item::Catalog { name: name.to_string(), bbox: Rect::new(0, 0, w as i32, h as i32) });
    let rendered = render_scene_with(&scene, RenderOptions::default()).map_err(|e| Failure::invalid(e.to_string()))?;
    let format = match format.unwrap_or(CatalogFormat::Ascii) {
        CatalogFormat::Ascii => GridFormat::Ascii,
        CatalogFormat::Braille => GridFormat::Braille,
        CatalogFormat::Pbm => GridFormat::Pbm,
        CatalogFormat::Json => GridFormat::Json,
        CatalogFormat::Text => return Err(Failure::invalid("--format text lists the catalog; drop the shape name")),
    };
    emit(out, &grid_bytes(&rendered.grid, Some(&rendered), format))?;
    Ok(EXIT_OK)
}

fn cmd_serve(err: &mut dyn Write, addr: SocketAddr) -> Outcome {
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::io(format!("cannot start runtime: {e}")))?;
    let _ = writeln!(err, "pinpix service listening on http://{addr}");
    runtime.block_on(pinpix_service::serve(addr)).map_err(|e| Failure::io(format!("cannot serve on {addr}: {e}")))?;
    Ok(EXIT_OK)
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return e.exit_code().clamp(0, 255) as u8;
        }
    };
    let outcome = match cli.command {
        Command::Render { scene, format, out: target, clip } => cmd_render(out, &scene, format, target.as_deref(), clip),
        Command::Lint { scene, format, clip } => cmd_lint(out, &scene, format, clip),
        Command::Diff { before, after, format, clip } => cmd_diff(out, &before, &after, format, clip),
        Command::Catalog { name, bbox, format } => cmd_catalog(out, name.as_deref(), bbox, format),
        Command::Serve { port, host } => cmd_serve(err, SocketAddr::new(host, port)),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
