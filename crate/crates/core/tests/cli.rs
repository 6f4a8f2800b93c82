//! End-to-end runs of the `qdiv` binary: exit codes, printed values,
//! determinism of written files and reports.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qdiv::cli::io::OperatorFile;
use qdiv::ComplexMatrix;
use tempfile::TempDir;

fn qdiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdiv"))
        .args(args)
        .env_remove("QDIV_SEED")
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    qdiv(args).status.code().expect("exited normally")
}

fn stdout(args: &[&str]) -> String {
    let out = qdiv(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn write_diag(dir: &Path, name: &str, diag: &[f64], role: &str) -> String {
    let n = diag.len();
    let row = |i: usize, f: &dyn Fn(usize) -> f64| {
        (0..n)
            .map(|j| if i == j { f(i).to_string() } else { "0".into() })
            .collect::<Vec<_>>()
            .join(", ")
    };
    let re: Vec<String> = (0..n)
        .map(|i| format!("[{}]", row(i, &|k| diag[k])))
        .collect();
    let im: Vec<String> = (0..n).map(|i| format!("[{}]", row(i, &|_| 0.0))).collect();
    let text = format!(
        "{{\"dim\": {n}, \"role\": \"{role}\", \"re\": [{}], \"im\": [{}]}}",
        re.join(", "),
        im.join(", ")
    );
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

#[test]
fn div_prints_twelve_decimals_and_inf() {
    let dir = TempDir::new().unwrap();
    let pure = write_diag(dir.path(), "pure.json", &[1.0, 0.0], "density");
    let mixed = write_diag(dir.path(), "mixed.json", &[0.5, 0.5], "density");

    let same = stdout(&["div", "sandwiched", "--alpha", "2", &mixed, &mixed]);
    assert_eq!(same.trim(), "0.000000000000");
    let outside = stdout(&["div", "sandwiched", "--alpha", "2", &mixed, &pure]);
    assert_eq!(outside.trim(), "inf");
    let ln2 = stdout(&["div", "umegaki", &pure, &mixed]);
    assert_eq!(ln2.trim(), "0.693147180560");
    let chi2 = stdout(&["div", "fdiv", "--f", "power:2", &pure, &mixed]);
    assert_eq!(chi2.trim(), "2.000000000000");
}

#[test]
fn exit_code_table() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let mixed = write_diag(d, "mixed.json", &[0.5, 0.5], "density");
    let not_density = write_diag(d, "bad.json", &[0.7, 0.7], "density");
    let negative = write_diag(d, "neg.json", &[1.5, -0.5], "positive");
    let three = write_diag(d, "three.json", &[0.5, 0.25, 0.25], "density");
    let garbage = d.join("garbage.json");
    fs::write(&garbage, "{\"dim\": 2, \"re\": [[1, 0]]").unwrap();
    let garbage = garbage.to_str().unwrap();
    let missing = path(&dir, "missing.json");

    let table: Vec<(Vec<&str>, i32)> = vec![
        // success
        (vec!["--help"], 0),
        (vec!["--version"], 0),
        (vec!["div", "umegaki", &mixed, &mixed], 0),
        (vec!["check", "prop1", "--alpha", "2"], 0),
        (vec!["check", "thm4", "--dim", "2"], 0),
        (vec!["sample", "unitary", "--dim", "2"], 0),
        (
            vec!["reconstruct", "--haar", "--dim", "3", "--seed", "5"],
            0,
        ),
        // validation failures
        (vec!["div", "umegaki", &not_density, &mixed], 2),
        (
            vec!["div", "sandwiched", "--alpha", "2", &negative, &mixed],
            2,
        ),
        (vec!["div", "umegaki", garbage, &mixed], 2),
        (vec!["div", "umegaki", &missing, &mixed], 2),
        (vec!["div", "umegaki", &mixed, &three], 2),
        // usage errors
        (vec![], 3),
        (vec!["frobnicate"], 3),
        (vec!["div", "bogus", &mixed, &mixed], 3),
        (vec!["div", "renyi", &mixed, &mixed], 3),
        (vec!["div", "renyi", "--alpha", "1", &mixed, &mixed], 3),
        (vec!["div", "fdiv", "--f", "nosuch", &mixed, &mixed], 3),
        (vec!["check", "nosuch"], 3),
        (vec!["check", "invariance", "--seed", "x"], 3),
        (vec!["sample", "density", "--dim", "2", "--rank", "3"], 3),
        (vec!["sample", "pd", "--dim", "2", "--kappa", "0.5"], 3),
        (vec!["sample", "density", "--dim", "0"], 3),
        (
            vec!["reconstruct", "--haar", "--transpose", "--dim", "2"],
            3,
        ),
    ];
    for (args, want) in table {
        assert_eq!(code(&args), want, "qdiv {}", args.join(" "));
    }
}

#[test]
fn suite_failure_exits_one() {
    // a tolerance of zero cannot absorb rounding in the reconstruction residual
    assert_eq!(code(&["check", "wigner", "--dim", "3", "--tol", "0"]), 1);
}

#[test]
fn tampered_images_exit_one_naming_the_pair() {
    let dir = TempDir::new().unwrap();
    let images = dir.path().join("images");
    let images_s = images.to_str().unwrap();
    let ok = qdiv(&[
        "reconstruct",
        "--haar",
        "--dim",
        "3",
        "--seed",
        "5",
        "--write-images",
        images_s,
    ]);
    assert!(ok.status.success());
    assert_eq!(code(&["reconstruct", "--images", images_s]), 0);

    // replace one superposition image by a basis image
    fs::copy(images.join("image_00.json"), images.join("image_03.json")).unwrap();
    let out = qdiv(&["reconstruct", "--images", images_s]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("transition"), "{err}");
}

#[test]
fn reconstruct_reports_kind_and_writes_the_operator() {
    let dir = TempDir::new().unwrap();
    let out_u = path(&dir, "u.json");
    let text = stdout(&[
        "reconstruct",
        "--haar",
        "--dim",
        "3",
        "--seed",
        "5",
        "--out",
        &out_u,
    ]);
    assert!(text.contains("unitary"), "{text}");
    let u = OperatorFile::read(Path::new(&out_u)).unwrap().matrix;
    assert!(u.unitarity_defect() < 1e-12);

    let text = stdout(&["reconstruct", "--transpose", "--dim", "3"]);
    assert!(text.contains("antiunitary"), "{text}");
}

#[test]
fn samples_are_byte_identical_per_seed() {
    let dir = TempDir::new().unwrap();
    for (kind, extra) in [
        ("unitary", vec![]),
        ("density", vec!["--rank", "2"]),
        ("pd", vec![]),
    ] {
        let read = |name: &str, seed: &str| -> Vec<u8> {
            let p = path(&dir, name);
            let mut args = vec!["sample", kind, "--dim", "4", "--seed", seed, "--out", &p];
            args.extend(&extra);
            assert_eq!(code(&args), 0);
            fs::read(&p).unwrap()
        };
        let first = read("a.json", "1");
        assert_eq!(first, read("b.json", "1"), "{kind}");
        assert_ne!(first, read("c.json", "2"), "{kind}");
    }
}

#[test]
fn seed_falls_back_to_the_environment() {
    let run = |env: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_qdiv"));
        c.args(["sample", "unitary", "--dim", "2"])
            .env_remove("QDIV_SEED");
        if let Some(s) = env {
            c.env("QDIV_SEED", s);
        }
        c.output().unwrap().stdout
    };
    assert_eq!(
        run(Some("9")),
        stdout(&["sample", "unitary", "--dim", "2", "--seed", "9"]).into_bytes()
    );
    assert_ne!(run(Some("9")), run(None));
}

#[test]
fn sampled_files_validate_and_round_trip() {
    let dir = TempDir::new().unwrap();
    let p = path(&dir, "pure.json");
    assert_eq!(
        code(&["sample", "density", "--dim", "2", "--rank", "1", "--seed", "9", "--out", &p]),
        0
    );
    let m = OperatorFile::read(Path::new(&p)).unwrap().matrix;
    assert!(
        (&(&m * &m) - &m).frobenius_norm() < 1e-12,
        "rank-one density is a projection"
    );

    let p = path(&dir, "scalar.json");
    assert_eq!(
        code(&["sample", "pd", "--dim", "3", "--kappa", "1", "--out", &p]),
        0
    );
    let m = OperatorFile::read(Path::new(&p)).unwrap().matrix;
    let c = m[(0, 0)].re;
    assert!((&m - &ComplexMatrix::identity(3).scale(c)).frobenius_norm() < 1e-12);

    // the in-memory sample and the file agree to 1e-15
    let mut rng = qdiv::SeededRng::new(4);
    let u = qdiv::sampling::haar_unitary(4, &mut rng);
    let p = path(&dir, "u.json");
    assert_eq!(
        code(&["sample", "unitary", "--dim", "4", "--seed", "4", "--out", &p]),
        0
    );
    let back = OperatorFile::read(Path::new(&p)).unwrap().matrix;
    assert!((&back - &u).max_abs() <= 1e-15);
}

fn report(args: &[&str], dir: &TempDir, name: &str) -> serde_json::Value {
    let p = path(dir, name);
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--report", &p]);
    qdiv(&full);
    serde_json::from_str(&fs::read_to_string(PathBuf::from(&p)).unwrap()).unwrap()
}

#[test]
fn reports_are_stable_apart_from_wall_time() {
    let dir = TempDir::new().unwrap();
    for args in [
        vec![
            "check",
            "invariance",
            "--dim",
            "2",
            "--samples",
            "20",
            "--seed",
            "3",
        ],
        vec!["check", "lemmas", "--dim", "2", "--seed", "1"],
        vec!["reconstruct", "--haar", "--dim", "2", "--seed", "1"],
    ] {
        let mut a = report(&args, &dir, "a.json");
        let mut b = report(&args, &dir, "b.json");
        assert!(a["wall_time_seconds"].is_number());
        a.as_object_mut().unwrap().remove("wall_time_seconds");
        b.as_object_mut().unwrap().remove("wall_time_seconds");
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap(),
            "{args:?}"
        );
        assert_eq!(a["passed"], serde_json::Value::Bool(true));
    }
}

#[test]
fn reports_spell_infinity_as_inf() {
    let dir = TempDir::new().unwrap();
    let pure = write_diag(dir.path(), "pure.json", &[1.0, 0.0], "density");
    let mixed = write_diag(dir.path(), "mixed.json", &[0.5, 0.5], "density");
    let r = report(&["div", "umegaki", &mixed, &pure], &dir, "r.json");
    let text = r.to_string();
    assert!(text.contains("\"inf\""), "{text}");
}
