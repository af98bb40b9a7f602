use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use shapetree::boundary::{format_boundary, make_ellipse};
use shapetree::synth::{harmonic_blob, transformed, Harmonic};
use shapetree::{Point, SampledBoundary, Similarity};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shapetree"))
        .args(args)
        .env_remove("SHAPETREE_WEIGHTS")
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_shape(dir: &Path, name: &str, b: &SampledBoundary) -> String {
    let path = dir.join(name);
    fs::write(&path, format_boundary(b)).unwrap();
    path.to_str().unwrap().to_owned()
}

fn blob() -> SampledBoundary {
    harmonic_blob(
        &[
            Harmonic { order: 2, amplitude: 0.1, phase: 0.3 },
            Harmonic { order: 3, amplitude: 0.05, phase: 1.1 },
        ],
        300,
    )
    .unwrap()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn column(path: &Path, col: usize) -> Vec<f64> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(col).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn sample_writes_one_row_per_point() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_shape(dir.path(), "blob.csv", &blob());
    let out = dir.path().join("o");
    let o = run(&["sample", "--method", "centroid-distance", "-n", "100", &input, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(out.join("samples.csv")).unwrap();
    assert_eq!(text.lines().next(), Some("arc_position"));
    assert_eq!(text.lines().count(), 101);
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.contains("method=centroid-distance"));
    assert!(stdout.contains("seed_arc="));
    assert!(stdout.contains("total_arc_length="));
    assert!(o.stderr.is_empty());
}

#[test]
fn bisection_rejects_non_power_of_two() {
    let o = run(&["sample", "--method", "bisection", "-n", "100", fixture("octagon_p.csv").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains("2^k"), "{e}");
    assert_eq!(e.lines().count(), 1);
}

#[test]
fn circle_has_no_seed_point() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_shape(dir.path(), "circle.csv", &make_ellipse(5.0, 5.0, 360, false).unwrap());
    let o = run(&["sample", "--method", "centroid-distance", "-n", "32", &input, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("no distinct extrema"), "{}", stderr(&o));
}

#[test]
fn rigid_copy_matches_with_zero_vector_cost() {
    let dir = tempfile::tempdir().unwrap();
    let b = blob();
    let p = write_shape(dir.path(), "p.csv", &b);
    let q = write_shape(
        dir.path(),
        "q.csv",
        &transformed(&b, &Similarity::new(1.0, 0.8, Point::new(4.0, -1.0)), 77).unwrap(),
    );
    let out = dir.path().join("m");
    let o = run(&["match", &p, &q, "-n", "48", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report = json(&out.join("match.json"));
    assert!(report["cost_terms"][0].as_f64().unwrap() < 1e-9);
    let shift = (report["root_q"].as_u64().unwrap() + 48 - report["root_p"].as_u64().unwrap()) % 48;
    let p_idx = column(&out.join("correspondences.csv"), 0);
    let q_idx = column(&out.join("correspondences.csv"), 1);
    assert_eq!(p_idx.len(), 48);
    for (i, j) in p_idx.iter().zip(&q_idx) {
        assert_eq!((*i as u64 + shift) % 48, *j as u64);
    }
}

#[test]
fn octagon_rooted_at_eighth_point_picks_eighth_point() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "match",
        fixture("octagon_p.csv").to_str().unwrap(),
        fixture("octagon_q.csv").to_str().unwrap(),
        "--method",
        "vertices",
        "--root",
        "7",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(String::from_utf8(o.stdout).unwrap().contains("root_q=7"));
    assert_eq!(json(&dir.path().join("match.json"))["root_q"], 7);
}

#[test]
fn sample_count_mismatch_is_an_argument_error() {
    let o = run(&[
        "match",
        fixture("octagon_p.csv").to_str().unwrap(),
        fixture("heptagon.csv").to_str().unwrap(),
        "--method",
        "vertices",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn differing_extrema_counts_are_not_comparable() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_shape(dir.path(), "ellipse.csv", &make_ellipse(5.0, 2.0, 300, false).unwrap());
    let q = write_shape(dir.path(), "blob.csv", &blob());
    let o = run(&["match", &p, &q, "-n", "32", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
}

fn rounded(path: &Path, col: usize) -> Vec<String> {
    column(path, col).iter().map(|v| format!("{v:.9}")).collect()
}

fn describe(input: &str, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["describe", input, "-n", "40", "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

#[test]
fn descriptors_ignore_rotation_and_scale() {
    let dir = tempfile::tempdir().unwrap();
    let b = blob();
    let base = write_shape(dir.path(), "b.csv", &b);
    let rot = write_shape(dir.path(), "r.csv", &transformed(&b, &Similarity::new(1.0, 2.0, Point::new(1.0, 1.0)), 91).unwrap());
    let big = write_shape(dir.path(), "s.csv", &transformed(&b, &Similarity::new(3.5, 0.0, Point::new(0.0, 0.0)), 0).unwrap());
    for (name, input) in [("b", &base), ("r", &rot), ("s", &big)] {
        let o = describe(input, &dir.path().join(name), &[]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let d = |n: &str| dir.path().join(n).join("descriptor.csv");
    assert_eq!(rounded(&d("b"), 0), rounded(&d("r"), 0));
    assert_eq!(rounded(&d("b"), 1), rounded(&d("s"), 1));
    let ratio = |n: &str| json(&dir.path().join(n).join("modulus_ratio.json"));
    let (a, s) = (ratio("b"), ratio("s"));
    assert!((a["re"].as_f64().unwrap() - s["re"].as_f64().unwrap()).abs() < 1e-9);
    for f in ["angle_spectrum.csv", "modulus_spectrum.csv", "angle_ratio.json"] {
        assert!(dir.path().join("b").join(f).exists());
    }
}

#[test]
fn equal_frequencies_give_unit_ratio() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_shape(dir.path(), "b.csv", &blob());
    let o = describe(&input, dir.path(), &["--omega-pair", "3,3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    for f in ["angle_ratio.json", "modulus_ratio.json"] {
        let r = json(&dir.path().join(f));
        assert_eq!((r["re"].as_f64(), r["im"].as_f64()), (Some(1.0), Some(0.0)));
    }
}

#[test]
fn equal_moduli_make_the_ratio_unstable() {
    // A fan listed from its apex with every rim point at integer distance
    // 25: all tree vectors share one length, so the modulus spectrum
    // vanishes on the frequency grid.
    let dir = tempfile::tempdir().unwrap();
    let rim = [(25, 0), (24, 7), (20, 15), (15, 20), (7, 24), (0, 25), (-7, 24), (-15, 20)];
    let mut pts = vec![Point::new(0.0, 0.0)];
    pts.extend(rim.iter().map(|&(x, y)| Point::new(x as f64, y as f64)));
    let input = write_shape(dir.path(), "fan.csv", &SampledBoundary::from_points(pts).unwrap());
    let o = run(&["describe", &input, "--method", "vertices", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(5), "{}", stderr(&o));
    assert!(stderr(&o).contains("unstable frequency pair"));
}

#[test]
fn ellipse_verification_passes_and_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify-ellipses", "--points", "41", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&dir.path().join("verdict.json"));
    assert_eq!(v["equal_within_tol"], true);
    assert_eq!(v["m_orders_by_protrusion"], true);
    for curve in ["gap_curve_3_7.csv", "gap_curve_17_69.csv"] {
        let values = column(&dir.path().join(curve), 1);
        assert_eq!(values.len(), 41);
        assert!(values.iter().all(|v| (v - 5.0).abs() < 1e-6));
    }
    let table = fs::read_to_string(dir.path().join("table1.csv")).unwrap();
    assert_eq!(table.lines().next(), Some("a,b,M"));
    assert_eq!(table.lines().count(), 11);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let b = blob();
    let p = write_shape(dir.path(), "p.csv", &b);
    let q = write_shape(dir.path(), "q.csv", &transformed(&b, &Similarity::new(2.0, 1.0, Point::new(0.0, 3.0)), 5).unwrap());
    let a = dir.path().join("a");
    let c = dir.path().join("c");
    for out in [&a, &c] {
        assert!(run(&["match", &p, &q, "-n", "32", "--cost", "full", "--out", out.to_str().unwrap()]).status.success());
    }
    for f in ["match.json", "correspondences.csv"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(c.join(f)).unwrap());
    }
}

#[test]
fn weights_come_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let (p, q) = (fixture("octagon_p.csv"), fixture("octagon_q.csv"));
    let cmd = |w: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_shapetree"));
        c.args(["match", p.to_str().unwrap(), q.to_str().unwrap(), "--method", "vertices", "--root", "7"])
            .args(["--out", dir.path().to_str().unwrap()])
            .env_remove("SHAPETREE_WEIGHTS");
        if let Some(w) = w {
            c.env("SHAPETREE_WEIGHTS", w);
        }
        c.output().unwrap()
    };
    assert!(cmd(None).status.success());
    let plain = json(&dir.path().join("match.json"));
    assert!(cmd(Some("0,1,1")).status.success());
    let no_vectors = json(&dir.path().join("match.json"));
    assert_eq!(no_vectors["cost_terms"][0], 0.0);
    assert_ne!(plain["cost"], no_vectors["cost"]);
    assert_eq!(cmd(Some("1,x,1")).status.code(), Some(2));
}

#[test]
fn full_cost_needs_positive_moment_weight() {
    let o = run(&[
        "match",
        fixture("octagon_p.csv").to_str().unwrap(),
        fixture("octagon_q.csv").to_str().unwrap(),
        "--method",
        "vertices",
        "--cost",
        "full",
        "--weights",
        "1,1,0",
    ]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn raster_input_is_traced() {
    let dir = tempfile::tempdir().unwrap();
    let mut pgm = String::from("P2\n40 30\n255\n");
    for y in 0..30 {
        let row: Vec<&str> = (0..40)
            .map(|x| {
                let inside = ((x as f64 - 18.0) / 12.0).powi(2) + ((y as f64 - 15.0) / 8.0).powi(2) <= 1.0;
                if inside { "255" } else { "0" }
            })
            .collect();
        pgm.push_str(&row.join(" "));
        pgm.push('\n');
    }
    let path = dir.path().join("blob.pgm");
    fs::write(&path, pgm).unwrap();
    let o = run(&["sample", "--method", "vertices", path.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(fs::read_to_string(dir.path().join("samples.csv")).unwrap().lines().count() > 40);
}

#[test]
fn missing_input_is_an_argument_error() {
    let o = run(&["sample", "/nonexistent/shape.csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr(&o).lines().count(), 1);
}
