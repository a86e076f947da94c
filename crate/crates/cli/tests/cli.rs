use std::path::Path;
use std::process::{Command, Output};

use isogrow::{DomainSpec, SlotKind};

fn isogrow(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isogrow"))
        .args(args)
        .current_dir(dir)
        .env("ISOGROW_THREADS", "2")
        .output()
        .expect("run isogrow")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn lines_starting(text: &str, prefix: &str) -> usize {
    text.lines().filter(|l| l.starts_with(prefix)).count()
}

#[test]
fn grow_writes_every_vertex() {
    let dir = tempfile::tempdir().unwrap();
    let out = isogrow(dir.path(), &["grow", "--surface", "sphere_mercator", "--eps", "0.1", "--h", "0.3"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let obj = std::fs::read_to_string(dir.path().join("surface.obj")).unwrap();
    let want = DomainSpec::new(1.0, 0.3, 0.1).unwrap().indices(SlotKind::Vertex).len();
    assert_eq!(lines_starting(&obj, "v "), want);
    assert!(lines_starting(&obj, "f ") > 0);
}

#[test]
fn config_file_and_quantities_export() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.toml"),
        "[surface]\nname = \"cylinder\"\n\n[lattice]\neps = 0.1\nh = 0.2\n\n[run]\nout = \"cyl.obj\"\nexport_quantities = \"q.csv\"\n",
    )
    .unwrap();
    let out = isogrow(dir.path(), &["grow", "--config", "run.toml"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("cyl.obj").exists());
    let q = std::fs::read_to_string(dir.path().join("q.csv")).unwrap();
    assert!(q.starts_with("quantity,m,n,x,y,value\n"));
    for name in ["u_hat", "v_tilde", "k", "l"] {
        assert!(q.lines().any(|l| l.starts_with(&format!("{name},"))), "{name}");
    }
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("run.toml"), "[surface]\nname = \"cylinder\"\n[lattice]\neps = 0.1\n").unwrap();
    let out = isogrow(dir.path(), &["grow", "--config", "run.toml", "--eps", "0.05", "--h", "0.1"]);
    assert_eq!(code(&out), 0);
    let obj = std::fs::read_to_string(dir.path().join("surface.obj")).unwrap();
    assert!(obj.starts_with("# eps 0.05\n"));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 5] = [
        &["grow", "--surface", "cylinder", "--eps", "0.5", "--h", "0.3"],
        &["grow", "--surface", "torus"],
        &["transform", "--surface", "cylinder", "--kind", "darboux", "--C", "0", "--seed", "1,0,0"],
        &["transform", "--surface", "cylinder", "--kind", "darboux", "--seed", "1,0,0"],
        &["converge", "--surface", "cylinder", "--eps-list", "0.05,0.1"],
    ];
    for args in cases {
        let out = isogrow(dir.path(), args);
        assert_eq!(code(&out), 2, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn numerical_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = isogrow(dir.path(), &["grow", "--surface", "cylinder", "--r", "3", "--h", "2", "--eps", "1.5"]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn transforms_write_meshes() {
    let dir = tempfile::tempdir().unwrap();
    let out = isogrow(dir.path(), &["transform", "--surface", "sphere", "--eps", "0.1", "--out", "dual.obj"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = isogrow(
        dir.path(),
        &["transform", "--surface", "sphere", "--eps", "0.1", "--kind", "darboux", "--C", "1", "--seed", "1.2,0.3,0.4"],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let dual = std::fs::read_to_string(dir.path().join("dual.obj")).unwrap();
    let plus = std::fs::read_to_string(dir.path().join("transformed.obj")).unwrap();
    assert_eq!(lines_starting(&dual, "v "), lines_starting(&plus, "v "));
}

#[test]
fn check_passes_on_builtins() {
    let dir = tempfile::tempdir().unwrap();
    for surface in ["cylinder", "sphere"] {
        let out = isogrow(dir.path(), &["check", "--surface", surface, "--eps", "0.1"]);
        let text = String::from_utf8_lossy(&out.stdout);
        assert_eq!(code(&out), 0, "{text}");
        assert!(!text.contains("FAIL"));
    }
}

fn parse_report(text: &str) -> Vec<Vec<f64>> {
    text.lines().skip(1).map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect()
}

#[test]
fn cylinder_report_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let out = isogrow(dir.path(), &["converge", "--surface", "cylinder"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let got = std::fs::read_to_string(dir.path().join("convergence.csv")).unwrap();
    let golden =
        std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/cylinder_report.csv"))
            .unwrap();
    assert_eq!(got.lines().next(), golden.lines().next());
    let (a, b) = (parse_report(&got), parse_report(&golden));
    assert_eq!(a.len(), b.len());
    for (ra, rb) in a.iter().zip(&b) {
        for (x, y) in ra.iter().zip(rb) {
            // errors at roundoff level only need to stay there
            if y.abs() < 1e-6 {
                assert!(x.abs() < 1e-6, "{x} vs {y}");
            } else {
                assert!((x - y).abs() <= 1e-9 * y.abs(), "{x} vs {y}");
            }
        }
    }
    assert!(dir.path().join("convergence.txt").exists());
}
