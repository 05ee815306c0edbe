//! End-to-end runs of the `strat-mech` binary: exit codes, emitted files and
//! byte-level determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use strat_mech::io::Table;
use tempfile::TempDir;

const LORENTZ_CIRCLE: &str = r#"
[simulate]
engine = "reduced-lorentz"
horizon = 10.0
step = 1e-3
name = "circle"
initial = { kind = "base", position = [0.35355339059327373, 0.0, 0.35355339059327373], velocity = [0.0, 1.0, 0.0], charge = 1.0 }
"#;

fn run(dir: &Path, command: &str, config: &str, extra: &[&str]) -> Output {
    let path = dir.join(format!("{command}.toml"));
    fs::write(&path, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_strat-mech"))
        .arg(command)
        .arg("--config")
        .arg(&path)
        .arg("--out")
        .arg(dir)
        .args(extra)
        .env("STRAT_MECH_LOG", "quiet")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn out_dir() -> (TempDir, PathBuf) {
    let t = TempDir::new().unwrap();
    let p = t.path().to_path_buf();
    (t, p)
}

#[test]
fn classify_reports_the_orthonormal_pair() {
    let (_t, dir) = out_dir();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let cfg = format!(
        "[[classify.points]]\nq1 = [{h}, 0.0, 0.0, 0.0, 0.0]\nq2 = [0.0, {h}, 0.0, 0.0, 0.0]\n"
    );
    let o = run(&dir, "classify", &cfg, &[]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let json = fs::read_to_string(dir.join("classify_report.json")).unwrap();
    assert!(json.contains("regular_SO3"));
    assert!(json.contains("L2_SO3"));
    assert!(dir.join("classify_report.txt").exists());
}

#[test]
fn classify_with_no_points_writes_the_table() {
    let (_t, dir) = out_dir();
    let o = run(&dir, "classify", "", &[]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(dir.join("classify_report.txt").exists());
}

#[test]
fn classify_rejects_a_point_off_the_sphere() {
    let (_t, dir) = out_dir();
    let h = std::f64::consts::FRAC_1_SQRT_2 + 1e-3;
    let cfg = format!(
        "[[classify.points]]\nq1 = [{h}, 0.0, 0.0, 0.0, 0.0]\nq2 = [0.0, {h}, 0.0, 0.0, 0.0]\n"
    );
    let o = run(&dir, "classify", &cfg, &[]);
    assert_eq!(code(&o), 2);
    assert!(
        stderr(&o).contains("unit-norm invariant violated"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn malformed_config_is_a_validation_error() {
    let (_t, dir) = out_dir();
    let o = run(&dir, "simulate", "[simulate]\nengine = \"warp\"\n", &[]);
    assert_eq!(code(&o), 2);
}

#[test]
fn simulate_reruns_are_bitwise_identical() {
    let cfg = r#"
[simulate]
engine = "full"
horizon = 0.5
step = 1e-2
formats = ["csv", "json"]
initial = { kind = "random" }
"#;
    let (_a, da) = out_dir();
    let (_b, db) = out_dir();
    for dir in [&da, &db] {
        let o = run(dir, "simulate", cfg, &["--seed", "17", "--validate"]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    }
    for file in ["trajectory.csv", "trajectory.json"] {
        assert_eq!(
            fs::read(da.join(file)).unwrap(),
            fs::read(db.join(file)).unwrap(),
            "{file}"
        );
    }
    let (_c, dc) = out_dir();
    run(&dc, "simulate", cfg, &["--seed", "18"]);
    assert_ne!(
        fs::read(da.join("trajectory.csv")).unwrap(),
        fs::read(dc.join("trajectory.csv")).unwrap()
    );
}

#[test]
fn full_engine_at_rest_is_constant() {
    let (_t, dir) = out_dir();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let cfg = format!(
        "[simulate]\nengine = \"full\"\nhorizon = 1.0\nstep = 0.1\n\
         initial = {{ kind = \"phase\", q1 = [{h}, 0.0, 0.0, 0.0, 0.0], q2 = [0.0, 0.0, {h}, 0.0, 0.0] }}\n"
    );
    let o = run(&dir, "simulate", &cfg, &[]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let t = Table::read_csv(&dir.join("trajectory.csv")).unwrap();
    assert_eq!(t.rows.len(), 11);
    for col in ["q1_1", "q2_3", "p1_1", "energy"] {
        let v = t.numbers(col).unwrap();
        assert!(v.iter().all(|x| *x == v[0]), "{col} moved");
    }
}

#[test]
fn lorentz_circle_has_curvature_two_and_closes() {
    let (_t, dir) = out_dir();
    let o = run(&dir, "simulate", LORENTZ_CIRCLE, &["--validate"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let t = Table::read_csv(&dir.join("circle.csv")).unwrap();
    let kappa: Vec<f64> = t
        .numbers("curvature")
        .unwrap()
        .into_iter()
        .filter(|k| k.is_finite())
        .collect();
    assert!(kappa.len() > 9000);
    assert!(kappa.iter().all(|k| (k - 2.0).abs() < 1e-4));
    let period = std::f64::consts::PI / std::f64::consts::SQRT_2;
    let ts = t.numbers("t").unwrap();
    let i = ts
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - period).abs().total_cmp(&(b.1 - period).abs()))
        .unwrap()
        .0;
    let col = |c: &str| t.numbers(c).unwrap();
    let (x, y, z) = (col("base_x"), col("base_y"), col("base_z"));
    let d = ((x[i] - x[0]).powi(2) + (y[i] - y[0]).powi(2) + (z[i] - z[0]).powi(2)).sqrt();
    assert!(d < 1e-3, "distance after one period {d}");
}

#[test]
fn lorentz_with_a_regular_charge_is_rejected() {
    let (_t, dir) = out_dir();
    let cfg = LORENTZ_CIRCLE.replace("charge = 1.0", "charge = 0.5");
    let o = run(&dir, "simulate", &cfg, &[]);
    assert_eq!(code(&o), 2);
}

#[test]
fn compare_with_mismatched_steps_fails_and_writes_the_report() {
    let (_t, dir) = out_dir();
    let cfg = "[compare]\ncases = 2\nseed = 4\nreduced_step = 1e-2\n";
    let o = run(&dir, "compare", cfg, &[]);
    assert_eq!(code(&o), 4, "{}", stderr(&o));
    let text = fs::read_to_string(dir.join("compare_report.txt")).unwrap();
    assert!(text.trim_end().ends_with("FAIL"));
}

#[test]
fn compare_pole_cases_pass() {
    let (_t, dir) = out_dir();
    let cfg = "[compare]\ncases = 2\nhorizon = 0.5\nregion = \"pole\"\n";
    let o = run(&dir, "compare", cfg, &[]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

#[test]
fn plot_draws_the_circle_and_a_flat_energy() {
    let (_t, dir) = out_dir();
    assert_eq!(code(&run(&dir, "simulate", LORENTZ_CIRCLE, &[])), 0);
    let o = run(&dir, "plot", "[plot]\ninputs = [\"circle.csv\"]\n", &[]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let base = fs::read_to_string(dir.join("circle_base.svg")).unwrap();
    assert!(base.contains("<polyline"));
    assert!(base.contains("<circle"));
    assert!(dir.join("circle_energy.svg").exists());
}

#[test]
fn plot_of_a_missing_file_is_a_validation_error() {
    let (_t, dir) = out_dir();
    let o = run(&dir, "plot", "[plot]\ninputs = [\"absent.csv\"]\n", &[]);
    assert_eq!(code(&o), 2);
}

#[test]
fn rattle_failure_exits_three_with_the_step_time() {
    let (_t, dir) = out_dir();
    let cfg = r#"
[simulate]
engine = "full"
method = "rattle"
horizon = 4.0
step = 0.5
initial = { kind = "random", speed = 1.0 }
"#;
    let o = run(&dir, "simulate", cfg, &[]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    assert!(stderr(&o).contains("t = 0.5"), "{}", stderr(&o));
    assert!(!dir.join("trajectory.csv").exists());
}

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            strat_mech::config::ExperimentConfig::load(&path)
                .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            seen += 1;
        }
    }
    assert!(seen >= 5, "found {seen} configs");
}
