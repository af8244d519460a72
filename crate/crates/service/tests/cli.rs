use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use relocviz_core::vectorizer::RasterImage;
use relocviz_core::Color;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
}

fn relocviz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relocviz"))
        .args(args)
        .output()
        .unwrap()
}

fn dataset_args() -> Vec<String> {
    vec![
        "--polygons".into(),
        fixture("campus.poly").display().to_string(),
        "--colors".into(),
        fixture("campus.colors").display().to_string(),
        "--relocations".into(),
        fixture("campus.reloc").display().to_string(),
    ]
}

fn run_with_dataset(cmd: &str, extra: &[&str]) -> Output {
    let mut args = vec![cmd.to_string()];
    args.extend(dataset_args());
    args.extend(extra.iter().map(|s| s.to_string()));
    relocviz(&args.iter().map(String::as_str).collect::<Vec<_>>())
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn entry_count(poly_file: &Path) -> usize {
    let text = std::fs::read_to_string(poly_file).unwrap();
    relocviz_core::dataset_io::parse_polygon_file(&text)
        .unwrap()
        .entries
        .len()
}

#[test]
fn vectorize_uniform_image() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("map.ppm");
    let output = dir.path().join("map.poly");
    std::fs::write(&input, RasterImage::filled(8, 8, Color::new(0, 255, 0)).to_ppm()).unwrap();
    let out = relocviz(&["vectorize", input.to_str().unwrap(), "-o", output.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("1 regions"));
    assert_eq!(entry_count(&output), 1);
}

#[test]
fn vectorize_truncated_image_names_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("broken.ppm");
    let bytes = RasterImage::filled(8, 8, Color::BLACK).to_ppm();
    std::fs::write(&input, &bytes[..bytes.len() - 7]).unwrap();
    let out = relocviz(&["vectorize", input.to_str().unwrap(), "-o", "/dev/null"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("broken.ppm"), "{}", stderr(&out));

    let out = relocviz(&["vectorize", "/nonexistent/missing.ppm", "-o", "/dev/null"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("missing.ppm"));
}

#[test]
fn vectorize_min_area_filters() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("two.ppm");
    let output = dir.path().join("two.poly");
    let mut img = RasterImage::filled(8, 8, Color::new(0, 255, 0));
    for y in 3..5 {
        for x in 3..5 {
            img.set(x, y, Color::new(0, 0, 255));
        }
    }
    std::fs::write(&input, img.to_ppm()).unwrap();
    let out = relocviz(&[
        "vectorize",
        input.to_str().unwrap(),
        "-o",
        output.to_str().unwrap(),
        "--min-area",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(entry_count(&output), 1);
}

#[test]
fn validate_fixture() {
    let out = run_with_dataset("validate", &[]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(stdout(&out).trim(), "3 buildings, 4 periods, 25 relocations");
}

#[test]
fn validate_lists_every_violation_with_file_and_line() {
    let dir = tempfile::tempdir().unwrap();
    let poly = dir.path().join("bad.poly");
    std::fs::write(
        &poly,
        "canvas 64 48\nFF0000 4,4 20,4\n00FF00 40,4 60,4 60,20 40,20\n0000FF 20,30 36,30 36,44 20,44\nZZ 0,0\n",
    )
    .unwrap();
    let out = relocviz(&[
        "validate",
        "--polygons",
        poly.to_str().unwrap(),
        "--colors",
        fixture("campus.colors").to_str().unwrap(),
        "--relocations",
        fixture("campus.reloc").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("bad.poly:2:"), "{err}");
    assert!(err.contains("bad.poly:5:"), "{err}");
}

#[test]
fn validate_reports_building_without_relocation_data() {
    let dir = tempfile::tempdir().unwrap();
    let colors = dir.path().join("extra.colors");
    std::fs::write(&colors, "FF0000 A\n00FF00 B\n0000FF C\nC0C0C0 D\n").unwrap();
    let out = relocviz(&[
        "validate",
        "--polygons",
        fixture("campus.poly").to_str().unwrap(),
        "--colors",
        colors.to_str().unwrap(),
        "--relocations",
        fixture("campus.reloc").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("extra.colors:4: building D has no relocation data"), "{}", stderr(&out));
}

#[test]
fn render_is_deterministic_and_layered() {
    let dir = tempfile::tempdir().unwrap();
    let svg = |name: &str| {
        let path = dir.path().join(name);
        let out = run_with_dataset(
            "render",
            &["--from", "0", "--to", "1", "--threshold", "3", "-o", path.to_str().unwrap()],
        );
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        std::fs::read_to_string(path).unwrap()
    };
    let first = svg("a.svg");
    assert_eq!(first, svg("b.svg"));
    let doc = roxmltree::Document::parse(&first).unwrap();
    let layer1 = doc
        .descendants()
        .find(|n| n.attribute("id") == Some("layer-1"))
        .unwrap();
    assert_eq!(layer1.children().filter(|n| n.has_tag_name("path")).count(), 1);
}

#[test]
fn render_accepts_names_and_rejects_inverted_window() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sel.svg");
    let out = run_with_dataset("render", &["--selected", "A,2", "--armed", "B", "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.matches("class=\"card\"").count(), 2);

    let out = run_with_dataset("render", &["--from", "3", "--to", "2", "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("lo > hi"));

    let out = run_with_dataset("render", &["--selected", "Z", "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_overrides_reach_the_renderer() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("relocviz.conf");
    std::fs::write(
        &cfg,
        format!(
            "polygons = \"{}\"\ncolors = \"{}\"\nrelocations = \"{}\"\nsamples = 16\n",
            fixture("campus.poly").display(),
            fixture("campus.colors").display(),
            fixture("campus.reloc").display()
        ),
    )
    .unwrap();
    let path = dir.path().join("cfg.svg");
    let out = relocviz(&["render", "--config", cfg.to_str().unwrap(), "--set", "w_min=2", "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = std::fs::read_to_string(&path).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();
    let path_el = doc.descendants().find(|n| n.has_tag_name("path")).unwrap();
    assert_eq!(path_el.attribute("d").unwrap().matches('L').count(), 16);
    let widths: Vec<f64> = doc
        .descendants()
        .filter_map(|n| n.attribute("stroke-width"))
        .map(|w| w.parse().unwrap())
        .collect();
    assert!(widths.iter().all(|&w| w >= 2.0));

    let out = relocviz(&["validate", "--config", cfg.to_str().unwrap(), "--set", "nonsense=1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("nonsense"));
}

#[test]
fn missing_dataset_path_is_reported() {
    let out = relocviz(&["validate"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--polygons"));
}

#[test]
fn serve_fails_on_busy_port() {
    let busy = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let port = busy.local_addr().unwrap().port().to_string();
    let out = run_with_dataset("serve", &["--port", &port]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("cannot listen"), "{}", stderr(&out));
}
