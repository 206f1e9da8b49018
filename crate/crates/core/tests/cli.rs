use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn mvwave(args: &[&str]) -> Output {
    mvwave_with_env(args, &[])
}

fn mvwave_with_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mvwave"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

#[track_caller]
fn ok(args: &[&str]) -> Output {
    let out = mvwave(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

struct Dir(TempDir);

impl Dir {
    fn new() -> Self {
        Dir(tempfile::tempdir().unwrap())
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }

    fn s(&self, name: &str) -> String {
        self.path(name).to_str().unwrap().to_owned()
    }
}

fn read(p: impl AsRef<Path>) -> Vec<u8> {
    std::fs::read(p).unwrap()
}

/// Small tetrahedron: base 2, apex 5, 10 px cells.
fn tetrahedron(dir: &Dir) {
    ok(&[
        "tetrahedron",
        "--size",
        "8",
        "--cell",
        "10",
        "--output",
        &dir.s("tet.pgm"),
        "--scene",
        &dir.s("tet.scene"),
    ]);
}

fn energies(report: &[u8]) -> Vec<(i32, f64)> {
    let text = String::from_utf8(report.to_vec()).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("plane,energy"));
    lines
        .map(|l| {
            let (d, e) = l.split_once(',').unwrap();
            (d.parse().unwrap(), e.parse().unwrap())
        })
        .collect()
}

#[test]
fn tetrahedron_pipeline() {
    let dir = Dir::new();
    tetrahedron(&dir);
    assert!(dir.path("tet.pgm.cell").exists());
    let scene = std::fs::read_to_string(dir.path("tet.scene")).unwrap();
    assert!(scene.starts_with("canvas 8 8 cell 10 parallax fp"));

    ok(&[
        "analyze",
        "--input",
        &dir.s("tet.pgm"),
        "--output",
        &dir.s("tet.mvwv"),
        "--render-dir",
        &dir.s("planes"),
    ]);
    assert!(dir.path("planes/plane_+5.pgm").exists());
    assert!(dir.path("planes/scaling.pgm").exists());
    assert_eq!(&read(dir.path("tet.mvwv"))[..4], b"MVWV");

    let report = energies(&ok(&["depth-report", "--input", &dir.s("tet.mvwv")]).stdout);
    let depths: Vec<i32> = report.iter().map(|r| r.0).collect();
    assert_eq!(depths, vec![-5, -2, -1, 1, 2, 5]);
    let best = report.iter().max_by(|a, b| a.1.total_cmp(&b.1)).unwrap().0;
    assert_eq!(best, 2, "the base dominates the energy");

    ok(&[
        "reconstruct",
        "--input",
        &dir.s("tet.mvwv"),
        "--output",
        &dir.s("rec.pgm"),
    ]);
    assert_eq!(read(dir.path("rec.pgm.cell")), b"10\n");
    let (a, b) = (read(dir.path("tet.pgm")), read(dir.path("rec.pgm")));
    assert_eq!(a.len(), b.len());
}

#[test]
fn reversal_swaps_plane_energies() {
    let dir = Dir::new();
    tetrahedron(&dir);
    ok(&[
        "analyze",
        "--input",
        &dir.s("tet.pgm"),
        "--output",
        &dir.s("a.mvwv"),
    ]);
    ok(&[
        "reverse-depth",
        "--input",
        &dir.s("a.mvwv"),
        "--output",
        &dir.s("r.mvwv"),
    ]);
    let before = energies(
        &ok(&[
            "depth-report",
            "--input",
            &dir.s("a.mvwv"),
            "--sampling",
            "dense",
        ])
        .stdout,
    );
    let after = energies(
        &ok(&[
            "depth-report",
            "--input",
            &dir.s("r.mvwv"),
            "--sampling",
            "dense",
        ])
        .stdout,
    );
    for (d, e) in before {
        let (_, swapped) = after.iter().find(|(x, _)| *x == -d).unwrap();
        assert_eq!(e, *swapped);
    }
    ok(&[
        "reverse-depth",
        "--input",
        &dir.s("r.mvwv"),
        "--output",
        &dir.s("rr.mvwv"),
    ]);
    assert_eq!(read(dir.path("a.mvwv")), read(dir.path("rr.mvwv")));
}

#[test]
fn to_hpo_matches_reconstruct_with_hpo_kernels() {
    let dir = Dir::new();
    tetrahedron(&dir);
    ok(&[
        "analyze",
        "--input",
        &dir.s("tet.pgm"),
        "--output",
        &dir.s("a.mvwv"),
    ]);
    ok(&[
        "to-hpo",
        "--input",
        &dir.s("a.mvwv"),
        "--output",
        &dir.s("h1.pgm"),
    ]);
    ok(&[
        "reconstruct",
        "--input",
        &dir.s("a.mvwv"),
        "--output",
        &dir.s("h2.pgm"),
        "--parallax",
        "hpo",
    ]);
    assert_eq!(read(dir.path("h1.pgm")), read(dir.path("h2.pgm")));
    ok(&[
        "analyze",
        "--input",
        &dir.s("h1.pgm"),
        "--output",
        &dir.s("h.mvwv"),
        "--parallax",
        "hpo",
    ]);
    assert_eq!(read(dir.path("h.mvwv"))[6], 0, "parallax byte marks HPO");
}

#[test]
fn reruns_are_bit_identical_across_thread_counts() {
    let dir = Dir::new();
    tetrahedron(&dir);
    let mut outputs = Vec::new();
    for (i, threads) in ["1", "3", "3"].iter().enumerate() {
        let vol = dir.s(&format!("v{i}.mvwv"));
        let img = dir.s(&format!("r{i}.pgm"));
        let env = [("MVWAVE_THREADS", *threads)];
        assert!(mvwave_with_env(
            &["analyze", "--input", &dir.s("tet.pgm"), "--output", &vol],
            &env
        )
        .status
        .success());
        assert!(
            mvwave_with_env(&["reconstruct", "--input", &vol, "--output", &img], &env)
                .status
                .success()
        );
        outputs.push((read(&vol), read(&img)));
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn scenes_masks_and_kernels() {
    let dir = Dir::new();
    std::fs::write(
        dir.path("s.scene"),
        "# two voxels\ncanvas 6 6 cell 4 parallax hpo\nvoxel 2 2 -2 1\nvoxel 3 4 4 0.5\n",
    )
    .unwrap();
    ok(&[
        "render-scene",
        "--input",
        &dir.s("s.scene"),
        "--output",
        &dir.s("s.png"),
    ]);
    assert_eq!(&read(dir.path("s.png"))[1..4], b"PNG");
    ok(&[
        "mask",
        "--input",
        &dir.s("s.png"),
        "--output",
        &dir.s("m.pgm"),
        "--radius",
        "1.5",
    ]);

    ok(&[
        "gen-kernel",
        "--kind",
        "wavelet2d",
        "--depth",
        "-3",
        "--cell",
        "6",
        "--output",
        &dir.s("k.txt"),
        "--image",
        &dir.s("k.pgm"),
    ]);
    let rows = std::fs::read_to_string(dir.path("k.txt")).unwrap();
    assert!(rows.lines().count() >= 18);
    ok(&[
        "spectrum",
        "--kind",
        "wavelet1d",
        "--depth",
        "4",
        "--cell",
        "8",
        "--output",
        &dir.s("f.csv"),
    ]);
    let csv = std::fs::read_to_string(dir.path("f.csv")).unwrap();
    assert!(csv.lines().next().unwrap().starts_with("omega"));
    assert!(csv.lines().count() > 10);
}

#[test]
fn failures_exit_nonzero_without_output() {
    let dir = Dir::new();
    tetrahedron(&dir);
    let vol = dir.s("x.mvwv");

    let out = mvwave(&[
        "analyze",
        "--input",
        &dir.s("missing.pgm"),
        "--output",
        &vol,
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("mvwave: "));

    // Order 3 does not divide a 10 px cell.
    let out = mvwave(&[
        "analyze",
        "--input",
        &dir.s("tet.pgm"),
        "--output",
        &vol,
        "--planes",
        "-3..3",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let out = mvwave(&[
        "analyze",
        "--input",
        &dir.s("tet.pgm"),
        "--output",
        &vol,
        "--planes",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!dir.path("x.mvwv").exists());

    std::fs::write(dir.path("bad.mvwv"), b"MVWX\x01\x00").unwrap();
    let out = mvwave(&[
        "reconstruct",
        "--input",
        &dir.s("bad.mvwv"),
        "--output",
        &dir.s("y.pgm"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!dir.path("y.pgm").exists());

    assert_eq!(mvwave(&["analyze", "--nope"]).status.code(), Some(2));
    assert_eq!(
        mvwave(&[
            "tetrahedron",
            "--apex",
            "0",
            "--output",
            "a",
            "--scene",
            "b"
        ])
        .status
        .code(),
        Some(1)
    );

    let leftovers: Vec<_> = std::fs::read_dir(dir.0.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(
        leftovers.len(),
        4,
        "only the tetrahedron files remain: {leftovers:?}"
    );
}
