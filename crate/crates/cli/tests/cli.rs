//! Behavior of the installed binary: output determinism, format
//! fidelity, and the exit-code contract.

use std::process::{Command, Output};

use serde::Deserialize;

fn bosonaim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bosonaim"))
        .args(args)
        .env_remove("AIM_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn identical_configs_give_byte_identical_output() {
    let args = [
        "solve", "--model", "bistable", "--kappa", "0.5", "--Omega", "0.1", "--depth", "18",
        "--levels", "5",
    ];
    let first = bosonaim(&args);
    let second = bosonaim(&args);
    assert_eq!(first.stdout, second.stdout);
    assert!(!first.stdout.is_empty());

    let json_args = [
        "solve", "--model", "anharmonic", "--alpha", "0.1", "--depth", "12", "--levels", "4",
        "--output", "json",
    ];
    assert_eq!(bosonaim(&json_args).stdout, bosonaim(&json_args).stdout);
}

#[derive(Deserialize)]
struct SolvePayload {
    result: bosonaim::aim::EigenResult,
}

#[test]
fn json_output_round_trips_exactly() {
    let output = bosonaim(&[
        "solve", "--model", "anharmonic", "--alpha", "0.1", "--depth", "12", "--levels", "4",
        "--output", "json",
    ]);
    assert!(output.status.success());
    let payload: SolvePayload = serde_json::from_str(&stdout(&output)).expect("parses");

    // the same run done in-process must reproduce every bit
    let h = bosonaim::models::anharmonic_hamiltonian(&bosonaim::models::AnharmonicParams {
        alpha: 0.1,
    });
    let mut expected =
        bosonaim::solve_expression(&h, &bosonaim::AimOptions::with_depth(12)).unwrap();
    expected.roots.truncate(4);
    assert_eq!(payload.result, expected);
}

#[test]
fn exit_zero_when_all_levels_converge() {
    let output = bosonaim(&[
        "solve", "--model", "anharmonic", "--alpha", "0.1", "--depth", "20", "--levels", "4",
    ]);
    assert_eq!(output.status.code(), Some(0));
}

#[test]
fn exit_two_when_unconverged() {
    // depth 4 cannot settle six anharmonic levels
    let output = bosonaim(&[
        "solve", "--model", "anharmonic", "--alpha", "0.1", "--depth", "4", "--levels", "6",
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn exit_one_on_flag_parse_error() {
    let output = bosonaim(&["solve", "--model", "anharmonic", "--alpha", "abc"]);
    assert_eq!(output.status.code(), Some(1));
    let err = String::from_utf8(output.stderr).unwrap();
    assert!(err.contains("--alpha"), "stderr should name the flag: {err}");
}

#[test]
fn exit_one_names_missing_field() {
    let output = bosonaim(&["solve", "--model", "su2", "--s", "2"]);
    assert_eq!(output.status.code(), Some(1));
    let err = String::from_utf8(output.stderr).unwrap();
    assert!(err.contains("j:"), "stderr should name the field: {err}");
}

#[test]
fn exit_one_on_missing_seed_file() {
    let output = bosonaim(&[
        "solve",
        "--model",
        "custom",
        "--seed-file",
        "/nonexistent/h.json",
    ]);
    assert_eq!(output.status.code(), Some(1));
    let err = String::from_utf8(output.stderr).unwrap();
    assert!(err.contains("seed_file"), "{err}");
}

#[test]
fn help_exits_zero() {
    let output = bosonaim(&["--help"]);
    assert_eq!(output.status.code(), Some(0));
}

#[test]
fn csv_output_has_flat_schema() {
    let output = bosonaim(&[
        "oracle", "--model", "bistable", "--kappa", "0", "--Omega", "0", "--nmax", "40",
        "--levels", "4", "--output", "csv",
    ]);
    let text = stdout(&output);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,re,im"));
    assert_eq!(lines.next(), Some("0,0,0"));
    assert_eq!(lines.next(), Some("1,1,0"));
}

#[test]
fn free_field_oracle_counts_photons() {
    let output = bosonaim(&[
        "oracle", "--model", "bistable", "--kappa", "0", "--Omega", "0", "--levels", "5",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    for n in 0..5 {
        assert!(
            text.contains(&format!("{n:2}  {n}.000000000")),
            "level {n} missing in:\n{text}"
        );
    }
}

#[test]
fn config_file_drives_a_run_and_flags_override() {
    let dir = std::env::temp_dir().join("bosonaim_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.json");
    std::fs::write(
        &path,
        r#"{
  "model": "su2",
  "parameters": {"j": "1", "s": 1, "kappa": 0.3, "omega": 1.0},
  "levels": 3
}"#,
    )
    .unwrap();
    let output = bosonaim(&["solve", "--config", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert!(text.contains("1.400000000"), "{text}");
    assert!(text.contains("2.600000000"), "{text}");

    // a flag beats the file
    let output = bosonaim(&[
        "solve", "--config", path.to_str().unwrap(), "--kappa", "0.0",
    ]);
    let text = stdout(&output);
    assert!(text.contains("2.000000000"), "{text}");
    assert!(!text.contains("1.400000000"), "{text}");
}

#[test]
fn unknown_table_is_a_config_error() {
    let output = bosonaim(&["table", "IV"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn two_mode_solve_requires_balanced_exchange() {
    let output = bosonaim(&[
        "solve", "--model", "two-mode", "--r", "2", "--s", "1", "--N", "4",
    ]);
    assert_eq!(output.status.code(), Some(1));
    let err = String::from_utf8(output.stderr).unwrap();
    assert!(err.contains("block solver"), "{err}");

    // the oracle handles the same parameters through the charge block
    let output = bosonaim(&[
        "oracle", "--model", "two-mode", "--r", "2", "--s", "1", "--N", "4", "--levels", "3",
    ]);
    assert_eq!(output.status.code(), Some(0));
}

#[test]
fn tables_report_small_deviations() {
    for (which, needle, threshold) in [
        ("I", "max deviation from reference:", 1e-5),
        ("II", "max relative deviation from reference:", 1e-6),
        ("III", "max deviation from closed forms:", 1e-9),
    ] {
        let output = bosonaim(&["table", which]);
        assert_eq!(output.status.code(), Some(0), "table {which}");
        let text = stdout(&output);
        let footer = text
            .lines()
            .find(|l| l.starts_with(needle))
            .unwrap_or_else(|| panic!("no footer in table {which}:\n{text}"));
        let value: f64 = footer
            .rsplit(' ')
            .next()
            .unwrap()
            .parse()
            .expect("footer ends with a number");
        assert!(value < threshold, "table {which}: deviation {value}");
    }
}

#[test]
fn compare_anharmonic_within_tolerance_at_depth_forty() {
    let output = bosonaim(&[
        "compare", "--model", "anharmonic", "--alpha", "0.1", "--depth", "40", "--levels", "6",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert!(text.contains("within tolerance"), "{text}");
}
