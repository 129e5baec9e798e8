use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cheeger_cli::DomainSpec;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run_in(cwd: &Path, args: &[&str], envs: &[(&str, &Path)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cheeger"));
    cmd.current_dir(cwd)
        .args(args)
        .env_remove("CHEEGER_OUT_DIR");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    let out: Output = cmd.output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap().trim().to_string(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

struct Fixture {
    dir: tempfile::TempDir,
}

impl Fixture {
    fn new() -> Self {
        let fx = Self {
            dir: tempfile::tempdir().unwrap(),
        };
        fx.write(
            "square.json",
            r#"{"type":"rectangle","width":1,"height":1}"#,
        );
        fx.write("rect.json", r#"{"type":"rectangle","width":2,"height":1}"#);
        fx.write(
            "disk.json",
            r#"{"type":"regular_ngon","n":256,"circumradius":1,"center":[0,0]}"#,
        );
        fx.write(
            "l.json",
            r#"{"type":"polygon","vertices":[[0,0],[2,0],[2,1],[1,1],[1,2],[0,2]]}"#,
        );
        fx.write("bad.json", r#"{"type":"rectangle","width":1,"#);
        for name in ["dilation", "translation_x", "rotation", "shear"] {
            fx.write(
                &format!("{name}.json"),
                &format!(r#"{{"type":"named","name":"{name}"}}"#),
            );
        }
        fx.write(
            "xx.json",
            r#"{"type":"polynomial","vx":[[2,0,1.0]],"vy":[]}"#,
        );
        fx.write(
            "squares.json",
            r#"{"type":"polynomial","vx":[[0,2,1.0]],"vy":[[2,0,1.0]]}"#,
        );
        fx
    }

    fn write(&self, name: &str, contents: &str) {
        std::fs::write(self.dir.path().join(name), contents).unwrap();
    }

    fn path(&self) -> &Path {
        self.dir.path()
    }

    fn out(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn run(&self, args: &[&str]) -> Run {
        run_in(self.path(), args, &[])
    }
}

#[test]
fn cheeger_exact_square_and_rectangle() {
    let fx = Fixture::new();
    let r = fx.run(&[
        "cheeger",
        "square.json",
        "--solver",
        "exact",
        "--out-dir",
        "o",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout, "3.77245385091");
    let csv = std::fs::read_to_string(fx.out("o/result.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "lambda,radius,set_area,set_perimeter,solver,iterations"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[4], "exact");
    let lambda: f64 = row[0].parse().unwrap();
    assert!((lambda - (2.0 + std::f64::consts::PI.sqrt())).abs() < 1e-9);
    let svg = std::fs::read_to_string(fx.out("o/set.svg")).unwrap();
    assert!(svg.contains("stroke=\"red\"") && svg.contains("stroke=\"black\""));

    let r = fx.run(&["cheeger", "rect.json", "--out-dir", "o2"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("2.849368"));
}

#[test]
fn cheeger_grid_on_non_convex_domain() {
    let fx = Fixture::new();
    let exact = fx.run(&["cheeger", "l.json", "--out-dir", "o"]);
    assert_eq!(exact.code, 2);
    assert!(exact.stderr.contains("grid"));
    assert!(!fx.out("o").exists());

    let grid = fx.run(&[
        "cheeger",
        "l.json",
        "--solver",
        "grid",
        "--h",
        "0.03125",
        "--out-dir",
        "g",
    ]);
    assert_eq!(grid.code, 0, "{}", grid.stderr);
    let lambda: f64 = grid.stdout.parse().unwrap();
    assert!(lambda > 1.8 && lambda < 8.0 / 3.0);
    let csv = std::fs::read_to_string(fx.out("g/result.csv")).unwrap();
    assert!(csv.contains(",grid,"));
}

#[test]
fn parse_errors_exit_2_and_write_nothing() {
    let fx = Fixture::new();
    for args in [
        vec!["cheeger", "bad.json", "--out-dir", "o"],
        vec!["cheeger", "missing.json", "--out-dir", "o"],
        vec!["shape-deriv", "square.json", "bad.json", "--out-dir", "o"],
        vec!["validate", "bad.json", "dilation.json", "--out-dir", "o"],
        vec![
            "cheeger",
            "square.json",
            "--solver",
            "magic",
            "--out-dir",
            "o",
        ],
        vec!["ball-criticality", "--ngon", "2", "--out-dir", "o"],
    ] {
        let r = fx.run(&args);
        assert_eq!(r.code, 2, "{args:?}: {}", r.stderr);
        assert!(r.stdout.is_empty());
        assert!(!fx.out("o").exists(), "{args:?} wrote files");
    }
}

#[test]
fn solver_failure_exits_3() {
    let fx = Fixture::new();
    let r = fx.run(&[
        "cheeger",
        "square.json",
        "--solver",
        "grid",
        "--h",
        "0.0625",
        "--max-inner",
        "1",
        "--tol",
        "1e-12",
        "--out-dir",
        "o",
    ]);
    assert_eq!(r.code, 3, "{}", r.stderr);
    assert!(!fx.out("o").exists());
    let too_far = fx.run(&[
        "validate",
        "square.json",
        "dilation.json",
        "--t0",
        "0.9",
        "--out-dir",
        "o",
    ]);
    assert_eq!(too_far.code, 3);
}

#[test]
fn shape_derivative_values_and_corner_precondition() {
    let fx = Fixture::new();
    let r = fx.run(&[
        "shape-deriv",
        "square.json",
        "dilation.json",
        "--out-dir",
        "d",
    ]);
    assert_eq!(r.code, 0);
    let v: f64 = r.stdout.parse().unwrap();
    assert!((v + 3.77245385).abs() < 1e-8);
    let csv = std::fs::read_to_string(fx.out("d/deriv.csv")).unwrap();
    assert!(csv.starts_with("formula,value_general,value_smooth,lambda,set_area\nboth,"));

    let r = fx.run(&[
        "shape-deriv",
        "square.json",
        "translation_x.json",
        "--out-dir",
        "d",
    ]);
    assert!(r.stdout.parse::<f64>().unwrap().abs() <= 1e-9);
    let r = fx.run(&[
        "shape-deriv",
        "disk.json",
        "rotation.json",
        "--out-dir",
        "d",
    ]);
    assert!(r.stdout.parse::<f64>().unwrap().abs() <= 1e-3);

    // Raster contours have corners: the curvature formula is refused.
    let r = fx.run(&[
        "shape-deriv",
        "square.json",
        "dilation.json",
        "--solver",
        "grid",
        "--h",
        "0.03125",
        "--formula",
        "smooth",
        "--out-dir",
        "s",
    ]);
    assert_eq!(r.code, 4, "{}", r.stderr);
    assert!(!fx.out("s").exists());
    let r = fx.run(&[
        "shape-deriv",
        "square.json",
        "dilation.json",
        "--solver",
        "grid",
        "--h",
        "0.03125",
        "--out-dir",
        "s",
    ]);
    assert_eq!(r.code, 0);
    let csv = std::fs::read_to_string(fx.out("s/deriv.csv")).unwrap();
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[2], "");
}

#[test]
fn validate_pass_and_fail() {
    let fx = Fixture::new();
    for field in ["dilation.json", "shear.json"] {
        let r = fx.run(&[
            "validate",
            "square.json",
            field,
            "--backend",
            "exact",
            "--out-dir",
            "v",
        ]);
        assert_eq!(
            (r.code, r.stdout.as_str()),
            (0, "PASS"),
            "{field}: {}",
            r.stderr
        );
    }
    let r = fx.run(&["validate", "disk.json", "rotation.json", "--out-dir", "v"]);
    assert_eq!(r.stdout, "PASS");
    let csv = std::fs::read_to_string(fx.out("v/validate.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "t,lambda_t,slope_level,richardson,formula,gap");
    assert_eq!(lines.len(), 1 + 6 + 1);

    // Steps below the grid spacing leave the raster unchanged: the grid
    // backend cannot resolve the slope and the check fails.
    let r = fx.run(&[
        "validate",
        "square.json",
        "dilation.json",
        "--backend",
        "grid",
        "--h",
        "0.03125",
        "--t0",
        "0.01",
        "--out-dir",
        "f",
    ]);
    assert_eq!((r.code, r.stdout.as_str()), (5, "FAIL"), "{}", r.stderr);
    assert!(fx.out("f/validate.csv").exists());
}

#[test]
fn ball_criticality_runs() {
    let fx = Fixture::new();
    let r = fx.run(&["ball-criticality", "--out-dir", "b"]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "PASS"));
    let csv = std::fs::read_to_string(fx.out("b/criticality.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);

    let r = fx.run(&[
        "ball-criticality",
        "--ngon",
        "64",
        "--field",
        "squares.json",
        "--out-dir",
        "b64",
    ]);
    assert_eq!(r.code, 0);
    let csv = std::fs::read_to_string(fx.out("b64/criticality.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert!(cols[1].parse::<f64>().unwrap().abs() <= 1e-2);
    }
    assert!(csv.contains("user,"));

    let r = fx.run(&["ball-criticality", "--field", "xx.json", "--out-dir", "bad"]);
    assert_eq!(r.code, 2);
    assert!(!fx.out("bad").exists());
}

#[test]
fn outputs_are_deterministic() {
    let fx = Fixture::new();
    let runs = [
        (
            vec![
                "cheeger",
                "square.json",
                "--solver",
                "grid",
                "--h",
                "0.03125",
            ],
            "result.csv",
        ),
        (vec!["validate", "rect.json", "shear.json"], "validate.csv"),
        (
            vec!["shape-deriv", "rect.json", "squares.json"],
            "deriv.csv",
        ),
        (vec!["ball-criticality", "--ngon", "128"], "criticality.csv"),
    ];
    for (args, file) in runs {
        let mut contents = Vec::new();
        for k in 0..2 {
            let dir = format!("det{k}");
            let mut full = args.clone();
            full.extend(["--out-dir", dir.as_str()]);
            let r = fx.run(&full);
            assert_eq!(r.code, 0, "{args:?}: {}", r.stderr);
            contents.push((
                r.stdout,
                std::fs::read(fx.out(&format!("{dir}/{file}"))).unwrap(),
            ));
        }
        assert_eq!(contents[0], contents[1], "{args:?}");
    }
}

#[test]
fn out_dir_defaults_to_environment() {
    let fx = Fixture::new();
    let env_dir = fx.out("from-env");
    let r = run_in(
        fx.path(),
        &["cheeger", "square.json"],
        &[("CHEEGER_OUT_DIR", &env_dir)],
    );
    assert_eq!(r.code, 0);
    assert!(env_dir.join("result.csv").exists() && env_dir.join("set.svg").exists());
}

#[test]
fn domain_round_trip_through_files() {
    let fx = Fixture::new();
    let original = DomainSpec::from_json(
        r#"{"type":"regular_ngon","n":11,"circumradius":0.7071067811865476,"center":[0.1,0.2]}"#,
    )
    .unwrap();
    let poly = original.to_polygon().unwrap();
    fx.write("emitted.json", &DomainSpec::from_polygon(&poly).to_json());
    let text = std::fs::read_to_string(fx.out("emitted.json")).unwrap();
    let back = DomainSpec::from_json(&text).unwrap().to_polygon().unwrap();
    assert_eq!(back.vertices(), poly.vertices());
    // The emitted file drives the CLI to the same value as the original spec.
    fx.write("original.json", &original.to_json());
    let a = fx.run(&["cheeger", "original.json", "--out-dir", "r1"]);
    let b = fx.run(&["cheeger", "emitted.json", "--out-dir", "r2"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(
        std::fs::read(fx.out("r1/result.csv")).unwrap(),
        std::fs::read(fx.out("r2/result.csv")).unwrap()
    );
}
