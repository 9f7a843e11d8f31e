use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn btn(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_btn"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("failed to spawn btn")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> Output {
    let out = btn(dir, args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "btn {args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

#[test]
fn gen_build_verify_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(
        d,
        &[
            "gen", "--n", "64", "--D", "16", "--seed", "7", "--out", "x.txt",
        ],
    );
    ok(
        d,
        &[
            "build", "--in", "x.txt", "--mode", "perfect", "--B", "4", "--out", "m.txt",
        ],
    );
    let out = ok(d, &["verify", "--in", "m.txt", "--vectors", "x.txt"]);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 65);
    assert_eq!(text.lines().last().unwrap(), "avg 0/1 bound 0/1 ok 1");
}

#[test]
fn approx_pipeline_meets_bound() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(
        d,
        &[
            "gen", "--n", "300", "--D", "20", "--seed", "1", "--out", "x.txt",
        ],
    );
    for mode in ["approx", "approx-uncorrected"] {
        ok(
            d,
            &[
                "build", "--in", "x.txt", "--mode", mode, "--B", "3", "--out", "a.txt",
            ],
        );
        let manifest = fs::read_to_string(d.join("a.txt")).unwrap();
        assert!(manifest.starts_with(&format!("CODEC mode={mode} n=300 D=20 d=9 B=3 c=")));
        let out = ok(d, &["verify", "--in", "a.txt", "--vectors", "x.txt"]);
        assert!(stdout(&out).trim_end().ends_with("ok 1"));
    }
}

#[test]
fn approx_with_block_two_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(
        d,
        &[
            "gen", "--n", "64", "--D", "16", "--seed", "7", "--out", "x.txt",
        ],
    );
    let out = btn(
        d,
        &[
            "build", "--in", "x.txt", "--mode", "approx", "--B", "2", "--out", "a.txt",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    assert!(err.contains("--B"), "{err}");
    assert!(!d.join("a.txt").exists());
}

#[test]
fn bounds_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(
        dir.path(),
        &["bounds", "--n", "16", "--D", "13", "--d", "4"],
    );
    let text = stdout(&out);
    assert!(
        text.lines().any(|l| l.trim_start() == "lower_bound=4"),
        "{text}"
    );
}

#[test]
fn export_round_trips_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(
        d,
        &[
            "gen", "--n", "100", "--D", "12", "--seed", "3", "--out", "x.txt",
        ],
    );
    for (mode, b) in [("perfect", "4"), ("approx", "5")] {
        ok(
            d,
            &[
                "build", "--in", "x.txt", "--mode", mode, "--B", b, "--out", "m.txt",
            ],
        );
        ok(d, &["export", "--in", "m.txt", "--out", "e.txt"]);
        assert_eq!(
            fs::read(d.join("m.txt")).unwrap(),
            fs::read(d.join("e.txt")).unwrap()
        );
    }
}

#[test]
fn identical_flags_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for tag in ["1", "2"] {
        let x = format!("x{tag}.txt");
        let m = format!("m{tag}.txt");
        ok(
            d,
            &[
                "gen", "--n", "200", "--D", "30", "--seed", "42", "--out", &x,
            ],
        );
        ok(
            d,
            &[
                "build", "--in", &x, "--mode", "approx", "--B", "4", "--out", &m,
            ],
        );
    }
    for f in ["x", "m"] {
        let a = fs::read(d.join(format!("{f}1.txt"))).unwrap();
        let b = fs::read(d.join(format!("{f}2.txt"))).unwrap();
        assert_eq!(a, b, "{f} differs");
    }
    let other = ok(d, &["gen", "--n", "200", "--D", "30", "--seed", "43"]);
    assert_ne!(other.stdout, fs::read(d.join("x1.txt")).unwrap());
}

#[test]
fn eval_decodes_and_traces() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(
        d,
        &[
            "gen", "--n", "20", "--D", "8", "--seed", "5", "--out", "x.txt",
        ],
    );
    ok(
        d,
        &[
            "build", "--in", "x.txt", "--mode", "perfect", "--B", "4", "--out", "m.txt",
        ],
    );
    let vectors = fs::read_to_string(d.join("x.txt")).unwrap();
    let x13 = vectors.lines().nth(13).unwrap();

    let out = ok(d, &["eval", "--in", "m.txt", "--code", "01101"]);
    assert_eq!(stdout(&out), format!("{x13}\n"));

    let out = ok(d, &["eval", "--in", "m.txt", "--vector", x13, "--trace"]);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "code 01101");
    assert_eq!(lines[1], "layer 0 01101");
    assert_eq!(*lines.last().unwrap(), format!("layer 3 {x13}"));
}

#[test]
fn verify_flags_a_tampered_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(
        d,
        &[
            "gen", "--n", "16", "--D", "6", "--seed", "9", "--out", "x.txt",
        ],
    );
    ok(
        d,
        &[
            "build", "--in", "x.txt", "--mode", "perfect", "--B", "4", "--out", "m.txt",
        ],
    );
    let manifest = fs::read_to_string(d.join("m.txt")).unwrap();
    // raise the threshold of the first output unit so it never fires
    let mut lines: Vec<String> = manifest.lines().map(String::from).collect();
    let last_layer = lines.iter().rposition(|l| l.starts_with("LAYER")).unwrap();
    let unit = &mut lines[last_layer + 1];
    let rest = unit.splitn(3, ' ').nth(2).unwrap().to_string();
    *unit = format!("UNIT 99 {rest}");
    fs::write(d.join("bad.txt"), lines.join("\n") + "\n").unwrap();

    let out = btn(d, &["verify", "--in", "bad.txt", "--vectors", "x.txt"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).trim_end().ends_with("ok 0"));
    assert_eq!(fs::read_to_string(d.join("m.txt")).unwrap(), manifest);
}

#[test]
fn input_errors_exit_two_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("bad.txt"), "0101\n01x1\n").unwrap();
    ok(
        d,
        &[
            "gen", "--n", "8", "--D", "5", "--seed", "1", "--out", "x.txt",
        ],
    );
    ok(
        d,
        &[
            "gen", "--n", "9", "--D", "5", "--seed", "1", "--out", "y.txt",
        ],
    );
    ok(d, &["build", "--in", "x.txt", "--out", "m.txt"]);
    let cases: [&[&str]; 5] = [
        &["build", "--in", "bad.txt"],
        &["build", "--in", "missing.txt"],
        &["build", "--in", "x.txt", "--mode", "fuzzy"],
        &["verify", "--in", "m.txt", "--vectors", "y.txt"],
        &["gen", "--n", "40", "--D", "5"],
    ];
    for args in cases {
        let out = btn(d, args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert_eq!(
            String::from_utf8(out.stderr).unwrap().lines().count(),
            1,
            "{args:?}"
        );
    }
}

#[test]
fn default_block_falls_back_to_perfect() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(
        d,
        &[
            "gen", "--n", "32", "--D", "16", "--seed", "2", "--out", "x.txt",
        ],
    );
    let out = ok(
        d,
        &[
            "build", "--in", "x.txt", "--mode", "approx", "--out", "m.txt",
        ],
    );
    assert!(!out.stderr.is_empty());
    let manifest = fs::read_to_string(d.join("m.txt")).unwrap();
    assert!(manifest.starts_with("CODEC mode=perfect n=32 D=16 d=5 B=2\n"));
}
