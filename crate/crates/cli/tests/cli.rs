//! End-to-end checks of the command-line interface: exit codes, file
//! formats, determinism, and the committed golden scenes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hypervis"))
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn star_tree(m: usize) -> String {
    let mut s = format!("tree {}\n", m + 1);
    for i in 1..=m {
        s.push_str(&format!("0 {i}\n"));
    }
    s
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn extract_prints_the_star_edges() {
    let out = bin().arg("extract").arg(golden("k15_ortho.json")).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("6 5"));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn verify_passes_golden_scenes_against_their_stars() {
    let dir = tempfile::tempdir().unwrap();
    for (scene, m, max) in [
        ("k15_ortho.json", 5, 1),
        ("k16_standard.json", 6, 1),
        ("k18_standard.json", 8, 2),
        ("k110_ortho.json", 10, 2),
    ] {
        let tree = write(dir.path(), "star.tree", &star_tree(m));
        let out = bin().arg("verify").arg(golden(scene)).arg(&tree).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{scene}: {}", stdout(&out));
        let text = stdout(&out);
        assert!(text.starts_with("PASS"), "{scene}: {text}");
        assert!(text.contains(&format!("max cubes per vertex: {max}")), "{scene}: {text}");
    }
}

#[test]
fn model_assertion_flag_guards_scene_files() {
    let out = bin()
        .arg("extract").arg(golden("k15_ortho.json"))
        .args(["--model", "orthogonal"])
        .output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = bin()
        .arg("extract").arg(golden("k15_ortho.json"))
        .args(["--model", "standard"])
        .output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_fails_against_the_wrong_star() {
    let dir = tempfile::tempdir().unwrap();
    let tree = write(dir.path(), "star7.tree", &star_tree(7));
    let out = bin().arg("verify").arg(golden("k18_standard.json")).arg(&tree).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn malformed_rational_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write(
        dir.path(),
        "bad.json",
        r#"{"model":"standard","dimension":1,"cubes":[{"id":0,"center":["1/0"]}]}"#,
    );
    let out = bin().arg("extract").arg(&scene).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn empty_scene_extracts_zero_zero() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write(
        dir.path(),
        "empty.json",
        r#"{"model":"standard","dimension":2,"cubes":[]}"#,
    );
    let out = bin().arg("extract").arg(&scene).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "0 0\n");
}

#[test]
fn construct_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let tree = write(dir.path(), "p6.tree", "tree 6\n0 1\n1 2\n2 3\n3 4\n4 5\n");
    let scene = dir.path().join("p6.json");
    let out = bin()
        .arg("construct").arg("unit-bar").arg(&tree)
        .arg("--out").arg(&scene)
        .output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = bin().arg("verify").arg(&scene).arg(&tree).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn unit_bar_rejects_high_degree() {
    let dir = tempfile::tempdir().unwrap();
    let tree = write(dir.path(), "k14.tree", &star_tree(4));
    let out = bin().arg("construct").arg("unit-bar").arg(&tree).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn h_number_prints_bounds_and_exact_value() {
    let dir = tempfile::tempdir().unwrap();
    let tree = write(dir.path(), "k14.tree", &star_tree(4));
    let out = bin().arg("h-number").arg("h1perp").arg(&tree).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "2 2 2\n");

    let witness = dir.path().join("witness.json");
    let out = bin()
        .arg("h-number").arg("h1perp").arg(&tree)
        .arg("--out").arg(&witness)
        .output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("2 2 2 "));
    assert!(witness.exists());

    let out = bin().arg("h-number").arg("h2").arg(&tree).output().unwrap();
    assert_eq!(stdout(&out), "1 1 1\n");

    let out = bin().arg("h-number").arg("hnperp").arg(&tree).arg("--n").arg("2").output().unwrap();
    assert_eq!(stdout(&out), "1 1\n");
}

#[test]
fn corpus_is_deterministic_and_passes() {
    let run = || {
        bin()
            .args(["corpus", "--max-exhaustive", "6", "--random-count", "5", "--seed", "9"])
            .output()
            .unwrap()
    };
    let first = run();
    let second = run();
    assert_eq!(first.status.code(), Some(0), "{}", stdout(&first));
    assert_eq!(first.stdout, second.stdout);
    assert!(stdout(&first).trim_end().ends_with("ALL PASS"));
}

#[test]
fn corpus_supports_random_only_runs() {
    let out = bin()
        .args([
            "corpus",
            "--max-exhaustive", "0",
            "--random-count", "20",
            "--random-min", "12",
            "--random-max", "12",
            "--seed", "3",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 21);
    assert!(text.trim_end().ends_with("ALL PASS"));
}

#[test]
fn search_limit_env_reports_bounds_only() {
    let dir = tempfile::tempdir().unwrap();
    // Δ = 6 is the ambiguous case, and the limit of 3 vertices forces the
    // search to stand down and report bounds
    let tree = write(dir.path(), "k16.tree", &star_tree(6));
    let out = bin()
        .arg("h-number").arg("h1perp").arg(&tree)
        .env("HYPERVIS_SEARCH_LIMIT", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "2 3\n");
    // without the cap the exact value resolves
    let out = bin().arg("h-number").arg("h1perp").arg(&tree).output().unwrap();
    assert_eq!(stdout(&out), "2 3 2\n");
}

#[test]
fn render_golden_scene_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.svg");
    let b = dir.path().join("b.svg");
    for out in [&a, &b] {
        let status = bin()
            .arg("render").arg(golden("k16_standard.json"))
            .arg("--out").arg(out)
            .status().unwrap();
        assert_eq!(status.code(), Some(0));
    }
    let svg_a = std::fs::read(&a).unwrap();
    assert_eq!(svg_a, std::fs::read(&b).unwrap());
    let text = String::from_utf8(svg_a).unwrap();
    assert_eq!(text.matches("<rect").count(), 7);
    assert_eq!(text.matches("<line").count(), 6);
}

#[test]
fn render_star_footprint_shows_all_sightlines() {
    // the orthogonal K_{1,5} scene draws one square per cube and one
    // dashed segment per star edge
    let dir = tempfile::tempdir().unwrap();
    let svg_path = dir.path().join("k15.svg");
    let status = bin()
        .arg("render").arg(golden("k15_ortho.json"))
        .arg("--out").arg(&svg_path)
        .status().unwrap();
    assert_eq!(status.code(), Some(0));
    let text = std::fs::read_to_string(&svg_path).unwrap();
    assert_eq!(text.matches("<rect").count(), 6);
    assert_eq!(text.matches("<line").count(), 5);
}

#[test]
fn render_rejects_unsupported_dimension() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write(
        dir.path(),
        "cube3.json",
        r#"{"model":"standard","dimension":3,"cubes":[{"id":0,"vertex":0,"center":["0","0","0"]}]}"#,
    );
    let out = bin()
        .arg("render").arg(&scene)
        .arg("--out").arg(dir.path().join("x.svg"))
        .output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn golden_scenes_match_fresh_construction() {
    // constructions are deterministic, so the committed bytes match
    let dir = tempfile::tempdir().unwrap();
    let fresh = dir.path().join("k15.json");
    let out = bin()
        .args(["construct", "star-ortho", "--n", "2", "--m", "5"])
        .arg("--out").arg(&fresh)
        .output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        std::fs::read(&fresh).unwrap(),
        std::fs::read(golden("k15_ortho.json")).unwrap()
    );
}

#[test]
fn degenerate_flag_values_are_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let tree = write(dir.path(), "p3.tree", "tree 3\n0 1\n1 2\n");
    let out = bin()
        .args(["decompose", "star"]).arg(&tree).args(["--k", "0"])
        .output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .args(["h-number", "hnperp"]).arg(&tree).args(["--n", "0"])
        .output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .args(["construct", "unit-bar"]).arg(&tree).args(["--n", "0"])
        .output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn decompose_star_writes_forest_json() {
    let dir = tempfile::tempdir().unwrap();
    let tree = write(dir.path(), "k16.tree", &star_tree(6));
    let forests = dir.path().join("forests.json");
    let out = bin()
        .args(["decompose", "star"]).arg(&tree)
        .args(["--k", "3"])
        .arg("--out").arg(&forests)
        .output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&forests).unwrap();
    assert!(text.contains("forests"));
}
