//! End-to-end tests running the compiled binary.

use std::process::{Command, Output};

use samspin_cli::output::{parse_adiabatic_csv, parse_dtensor_csv, parse_gshift_csv, parse_levels_csv};

fn samspin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_samspin"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 stderr")
}

#[test]
fn levels_prints_levels_transitions_and_check_line() {
    let out = samspin(&["levels"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(
        text.contains("# coupling check: w2_1 - w2_0 = w1_1 - w1_0 = 52.04 MHz"),
        "missing cross-check line in:\n{text}"
    );
    let rows = parse_levels_csv(&text).unwrap();
    assert_eq!(rows.len(), 8);
    let levels: Vec<f64> = rows
        .iter()
        .filter(|(kind, _, _)| kind == "level")
        .map(|(_, _, v)| *v)
        .collect();
    assert_eq!(levels.len(), 4);
    // levels sum to zero within the 4-significant-figure display rounding
    let sum: f64 = levels.iter().sum();
    assert!(sum.abs() <= 2.0, "level sum {sum} MHz exceeds display rounding");
    let transitions: Vec<f64> = rows
        .iter()
        .filter(|(kind, _, _)| kind == "transition")
        .map(|(_, _, v)| *v)
        .collect();
    assert_eq!(transitions.len(), 4);
    assert!(transitions.iter().all(|f| *f > 9.0e3 && *f < 11.0e3));
}

#[test]
fn freqs_is_an_alias_of_levels() {
    let a = samspin(&["levels"]);
    let b = samspin(&["freqs"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn degenerate_parameters_print_equal_frequencies() {
    let out = samspin(&["levels", "--gradient", "0", "--coupling-mhz", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = parse_levels_csv(&stdout_of(&out)).unwrap();
    let transitions: Vec<f64> = rows
        .iter()
        .filter(|(kind, _, _)| kind == "transition")
        .map(|(_, _, v)| *v)
        .collect();
    for f in &transitions {
        assert_eq!(*f, transitions[0]);
    }
}

#[test]
fn invalid_parameters_name_the_violated_invariant() {
    let out = samspin(&["levels", "--b0", "-1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("b0 must be positive"));
}

#[test]
fn sweep_endpoints_match_closed_form() {
    let out = samspin(&[
        "sweep",
        "--a-min-nm",
        "1",
        "--a-max-nm",
        "2",
        "--points",
        "11",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = samspin::dipole::parse_sweep_csv(stdout_of(&out).as_bytes()).unwrap();
    assert_eq!(rows.len(), 11);
    let oracle_1nm = 52.04101596437294;
    let oracle_2nm = 6.505126995546617;
    assert!((rows[0].d_mhz - oracle_1nm).abs() <= 1e-12 * oracle_1nm);
    assert!((rows[10].d_mhz - oracle_2nm).abs() <= 1e-12 * oracle_2nm);
    assert!(rows.iter().all(|r| r.method == samspin::TensorMethod::ClassicalPointDipole));
}

#[test]
fn sweep_single_point_usage_error() {
    let out = samspin(&["sweep", "--points", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_bad_axis_usage_error() {
    let out = samspin(&["sweep", "--axis", "0,0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = samspin(&["sweep", "--axis", "0,0,0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_density_requires_density_file() {
    let out = samspin(&["sweep", "--method", "density"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("density"));
}

#[test]
fn sweep_single_point_density_matches_classical() {
    let dir = tempfile::tempdir().unwrap();
    let density_path = dir.path().join("point.txt");
    std::fs::write(&density_path, "0 0 0 1.0\n").unwrap();

    let classical = samspin(&["sweep", "--points", "5"]);
    let density = samspin(&[
        "sweep",
        "--points",
        "5",
        "--method",
        "density",
        "--density",
        density_path.to_str().unwrap(),
    ]);
    assert_eq!(density.status.code(), Some(0), "{}", stderr_of(&density));
    let c_rows = samspin::dipole::parse_sweep_csv(stdout_of(&classical).as_bytes()).unwrap();
    let d_rows = samspin::dipole::parse_sweep_csv(stdout_of(&density).as_bytes()).unwrap();
    for (c, d) in c_rows.iter().zip(&d_rows) {
        assert_eq!(c.a_nm, d.a_nm);
        assert_eq!(c.d_mhz, d.d_mhz);
    }
}

#[test]
fn sweep_both_interleaves_classical_first() {
    let dir = tempfile::tempdir().unwrap();
    let density_path = dir.path().join("two.txt");
    std::fs::write(&density_path, "0 0 2 0.5\n0 0 -2 0.5\n").unwrap();

    let out = samspin(&[
        "sweep",
        "--method",
        "both",
        "--points",
        "4",
        "--density",
        density_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let rows = samspin::dipole::parse_sweep_csv(stdout_of(&out).as_bytes()).unwrap();
    assert_eq!(rows.len(), 8);
    for pair in rows.chunks(2) {
        assert_eq!(pair[0].a_nm, pair[1].a_nm);
        assert_eq!(pair[0].method, samspin::TensorMethod::ClassicalPointDipole);
        assert_eq!(pair[1].method, samspin::TensorMethod::PointDipoleSpinDensity);
        assert_eq!(pair[1].label, "two");
    }
}

#[test]
fn entangle_is_deterministic_and_matches_born_statistics() {
    let args = ["entangle", "--trials", "10000", "--seed", "42"];
    let first = samspin(&args);
    let second = samspin(&args);
    assert_eq!(first.status.code(), Some(0), "{}", stderr_of(&first));
    assert_eq!(first.stdout, second.stdout, "same config + seed must be byte-identical");

    let text = stdout_of(&first);
    assert!(text.contains("# concurrence: 1.000000"), "{text}");
    let histogram = samspin::OutcomeHistogram::parse_csv(text.as_bytes()).unwrap();
    assert_eq!(histogram.count(samspin::ProtocolOutcome::O2a), 0);
    assert_eq!(histogram.count(samspin::ProtocolOutcome::O3), 0);
    let o1 = histogram.fraction(samspin::ProtocolOutcome::O1);
    assert!((0.48..=0.52).contains(&o1), "O1 fraction {o1}");

    let different_seed = samspin(&["entangle", "--trials", "10000", "--seed", "7"]);
    assert_ne!(first.stdout, different_seed.stdout);
}

#[test]
fn entangle_reports_unresolvable_transitions() {
    let out = samspin(&["entangle", "--coupling-mhz", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr_of(&out);
    assert!(err.contains("w2_0") && err.contains("w2_1"), "{err}");
}

#[test]
fn adiabatic_defaults_pass_with_exit_zero() {
    let out = samspin(&["adiabatic"]);
    assert_eq!(out.status.code(), Some(0));
    let (eta, eta_max, verdict) = parse_adiabatic_csv(&stdout_of(&out)).unwrap();
    assert!((eta - 1.784e-3).abs() < 1e-6, "eta {eta}");
    assert_eq!(eta_max, 0.1);
    assert_eq!(verdict, "ADIABATIC");
}

#[test]
fn adiabatic_static_sweep_gives_zero_eta() {
    let out = samspin(&["adiabatic", "--delta-b", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let (eta, _, verdict) = parse_adiabatic_csv(&stdout_of(&out)).unwrap();
    assert_eq!(eta, 0.0);
    assert_eq!(verdict, "ADIABATIC");
}

#[test]
fn adiabatic_violation_exits_nonzero() {
    let out = samspin(&["adiabatic", "--b1", "1e-6"]);
    assert_eq!(out.status.code(), Some(1));
    let (eta, _, verdict) = parse_adiabatic_csv(&stdout_of(&out)).unwrap();
    assert!((eta - 1.784e3).abs() < 1.0, "eta {eta}");
    assert_eq!(verdict, "VIOLATED");
}

#[test]
fn gshift_prints_six_decimal_values() {
    let out = samspin(&["gshift", "8922", "0", "4206"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = parse_gshift_csv(&stdout_of(&out)).unwrap();
    assert_eq!(rows, vec![(8922.0, 2.011241), (0.0, 2.002319), (4206.0, 2.006525)]);
}

#[test]
fn gshift_rejects_non_numeric_arguments() {
    let out = samspin(&["gshift", "8922", "abc"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dtensor_emits_nine_components() {
    let out = samspin(&["dtensor"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("|D_zz|/h = 52.04 MHz"), "{text}");
    let rows = parse_dtensor_csv(&text).unwrap();
    assert_eq!(rows.len(), 9);
    let zz = rows.iter().find(|(name, _)| name == "zz").unwrap().1;
    let yy = rows.iter().find(|(name, _)| name == "yy").unwrap().1;
    assert!(zz < 0.0 && yy > 0.0);
    assert!((yy + 2.0 * zz).abs() <= 1e-10 * yy.abs());
}

#[test]
fn output_flag_writes_file_and_leaves_stdout_empty() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("levels.csv");
    let out = samspin(&["levels", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(parse_levels_csv(&written).unwrap().len(), 8);
}

#[test]
fn missing_config_file_is_a_validation_error() {
    let out = samspin(&["levels", "--config", "/nonexistent/samspin.conf"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_precedence_flag_over_file_over_default() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("run.conf");
    std::fs::write(
        &config_path,
        "\
# test configuration
b0 = 0.5
gradient = 2e5          # T/m
separation_nm = 1.5
g_zz = 2.0100
coupling_mhz = 40
b1 = 2e-3
delta_b = 0.02
fc_khz = 8
eta_max = 0.2
seed = 9
format = json
",
    )
    .unwrap();
    let config = config_path.to_str().unwrap();

    // defaults (no config): the params echo shows the built-ins
    let default_run = samspin(&["levels", "--format", "json"]);
    let default_json: serde_json::Value =
        serde_json::from_str(&stdout_of(&default_run)).unwrap();
    assert_eq!(default_json["params"]["b0_t"], 0.35);
    assert_eq!(default_json["params"]["gradient_t_per_m"], 1e5);
    assert_eq!(default_json["params"]["separation_nm"], 1.0);

    // file overrides defaults, field by field (format comes from the file)
    let file_run = samspin(&["levels", "--config", config]);
    let file_json: serde_json::Value = serde_json::from_str(&stdout_of(&file_run)).unwrap();
    assert_eq!(file_json["params"]["b0_t"], 0.5);
    assert_eq!(file_json["params"]["gradient_t_per_m"], 2e5);
    assert_eq!(file_json["params"]["separation_nm"], 1.5);
    assert_eq!(file_json["params"]["g_zz"], 2.0100);
    assert_eq!(file_json["params"]["coupling_mhz"], 40.0);

    // flags override the file
    let flag_run = samspin(&[
        "levels",
        "--config",
        config,
        "--b0",
        "0.7",
        "--coupling-mhz",
        "60",
    ]);
    let flag_json: serde_json::Value = serde_json::from_str(&stdout_of(&flag_run)).unwrap();
    assert_eq!(flag_json["params"]["b0_t"], 0.7);
    assert_eq!(flag_json["params"]["coupling_mhz"], 60.0);
    assert_eq!(flag_json["params"]["gradient_t_per_m"], 2e5); // still from file

    // adiabatic fields follow the same rule
    let adia_file = samspin(&["adiabatic", "--config", config]);
    let adia_json: serde_json::Value = serde_json::from_str(&stdout_of(&adia_file)).unwrap();
    assert_eq!(adia_json["b1_t"], 2e-3);
    assert_eq!(adia_json["delta_b_t"], 0.02);
    assert_eq!(adia_json["fc_khz"], 8.0);
    assert_eq!(adia_json["eta_max"], 0.2);
    let adia_flag = samspin(&["adiabatic", "--config", config, "--b1", "3e-3"]);
    let adia_flag_json: serde_json::Value =
        serde_json::from_str(&stdout_of(&adia_flag)).unwrap();
    assert_eq!(adia_flag_json["b1_t"], 3e-3);

    // seed: file value 9, flag wins when given
    let ent_file = samspin(&["entangle", "--config", config, "--trials", "10"]);
    let ent_json: serde_json::Value = serde_json::from_str(&stdout_of(&ent_file)).unwrap();
    assert_eq!(ent_json["seed"], 9);
    let ent_flag = samspin(&["entangle", "--config", config, "--trials", "10", "--seed", "3"]);
    let ent_flag_json: serde_json::Value =
        serde_json::from_str(&stdout_of(&ent_flag)).unwrap();
    assert_eq!(ent_flag_json["seed"], 3);

    // output: file key redirects, flag overrides
    let out_path = dir.path().join("from_file.json");
    std::fs::write(
        dir.path().join("out.conf"),
        format!("output = {}\nformat = json\n", out_path.display()),
    )
    .unwrap();
    let redirected = samspin(&[
        "levels",
        "--config",
        dir.path().join("out.conf").to_str().unwrap(),
    ]);
    assert!(redirected.stdout.is_empty());
    assert!(out_path.exists());
}

#[test]
fn json_format_is_available_everywhere() {
    for args in [
        vec!["levels", "--format", "json"],
        vec!["dtensor", "--format", "json"],
        vec!["sweep", "--format", "json", "--points", "3"],
        vec!["entangle", "--format", "json", "--trials", "20"],
        vec!["adiabatic", "--format", "json"],
        vec!["gshift", "--format", "json", "63"],
    ] {
        let out = samspin(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", stderr_of(&out));
        let parsed: Result<serde_json::Value, _> = serde_json::from_str(&stdout_of(&out));
        assert!(parsed.is_ok(), "{args:?} did not emit valid JSON");
    }
}
