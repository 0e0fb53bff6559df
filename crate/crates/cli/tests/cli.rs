//! End-to-end tests for the fsalg binary: exit codes, determinism, diagnostics.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fsalg_core::group::{symmetric_3, GroupFile};

fn fsalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fsalg"))
        .args(args)
        .env_remove("FSALG_GROUP_DIR")
        .output()
        .expect("binary runs")
}

fn fsalg_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fsalg"))
        .args(args)
        .env_remove("FSALG_GROUP_DIR")
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

/// Fresh scratch directory under the target-level temp root.
fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fsalg-cli-{tag}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).expect("scratch dir");
    dir
}

fn write_file(path: &Path, text: &str) {
    fs::write(path, text).expect("write scratch file");
}

const EXPR_ODD_NOT_1_MOD_4: &str = r#"{
  "dim": 1,
  "positives": [{"anchor": [0], "basis": [[1]]}],
  "negatives": [
    {"anchor": [0], "basis": [[2]]},
    {"anchor": [1], "basis": [[4]]}
  ]
}"#;

#[test]
fn verify_suite_passes_and_stdout_is_byte_identical() {
    let a = fsalg(&["verify", "s3-supports"]);
    let b = fsalg(&["verify", "s3-supports"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout, "reports must be byte-identical across runs");

    let text = stdout(&a);
    assert!(text.contains("# suite\ts3-supports"));
    assert!(text.contains("# cases\t6"));
    assert!(text.contains("# failures\t0"));
    assert_eq!(text.matches("\tpass\t").count(), 6);
    // wall time is informational and lives on stderr only
    assert!(!text.contains("wall_time"));
    assert!(stderr(&a).contains("wall_time_ms"));
}

#[test]
fn verify_seeded_suite_is_deterministic() {
    let a = fsalg(&["verify", "norms", "--seed", "3"]);
    let b = fsalg(&["verify", "norms", "--seed", "3"]);
    assert_eq!(code(&a), 0, "stderr: {}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_json_report_parses_and_omits_wall_time() {
    let out = fsalg(&["--format", "json", "verify", "s3-tensor"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(v["suite"], "s3-tensor");
    assert_eq!(v["cases"].as_array().expect("cases array").len(), 6);
    assert!(v.get("wall_time_ms").is_none());
}

#[test]
fn verify_unknown_suite_exits_2() {
    let out = fsalg(&["verify", "nosuch"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("unknown suite 'nosuch'"));
    assert!(stderr(&out).contains("s3-supports"));
}

#[test]
fn verify_failing_case_exits_1_and_still_prints_the_report() {
    // trace-norm additivity on random matrices carries f64 roundoff well
    // above 1e-17, so an absurd tolerance must fail honestly
    let out = fsalg(&["verify", "norms", "--tol", "1e-17"]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("\tfail\t"));
    assert!(!text.contains("# failures\t0"));
}

#[test]
fn riesz_eval_prints_the_product_value() {
    let out = fsalg(&["riesz", "--alphas", "finite:0.5,0.3", "--eval", "x1.x2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "0.15");
}

#[test]
fn riesz_classify_reports_closed_forms() {
    let out = fsalg(&["riesz", "--alphas", "geometric:c=0.5,q=0.5", "--classify"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("class\tin_l2"));
    assert!(text.contains("beta\t0.3333333333333333"));
    assert!(text.contains("powers_all_singular\tfalse"));
}

#[test]
fn riesz_power_prints_a_reusable_spec() {
    let out = fsalg(&["riesz", "--alphas", "finite:0.5,0.3", "--power", "2"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("spec\tfinite:0.25,0.09"));

    // the printed spec parses back through --alphas
    let again = fsalg(&["riesz", "--alphas", "finite:0.25,0.09", "--eval", "x1"]);
    assert_eq!(code(&again), 0);
    assert_eq!(stdout(&again).trim(), "0.25");
}

#[test]
fn riesz_spec_errors_carry_a_column() {
    let out = fsalg(&["riesz", "--alphas", "finite:0.5,zz", "--classify"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("column 12"), "stderr: {}", stderr(&out));
}

#[test]
fn word_parse_errors_carry_a_column() {
    let out = fsalg(&["riesz", "--alphas", "finite:0.5", "--eval", "x1.y2"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("column 4"), "stderr: {}", stderr(&out));
}

#[test]
fn haagerup_norms_report_matches_the_closed_form() {
    let out = fsalg(&["haagerup", "--k", "2", "--r", "0.5", "--report", "norms"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("q\t0.75"));
    assert!(text.contains("in_l2\ttrue"));
    assert!(text.contains("norm_sq\t5.0"));
}

#[test]
fn haagerup_threshold_report_gives_the_first_square_summable_power() {
    let out = fsalg(&["haagerup", "--k", "2", "--r", "0.8", "--report", "threshold"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("regime\tabove"));
    assert!(text.contains("min_l2_power\t3"));
}

#[test]
fn haagerup_pairing_at_radius_two_sums_the_sphere() {
    let out = fsalg(&["haagerup", "--k", "2", "--r", "0.5", "--report", "pairing", "--n", "2"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("pairing\t3.0"));
}

#[test]
fn haagerup_rejects_out_of_range_parameters() {
    assert_eq!(code(&fsalg(&["haagerup", "--k", "0", "--r", "0.5", "--report", "norms"])), 2);
    assert_eq!(code(&fsalg(&["haagerup", "--k", "2", "--r", "1.5", "--report", "norms"])), 2);
}

#[test]
fn words_count_and_list_agree() {
    let count = fsalg(&["words", "count", "--k", "2", "--n", "3"]);
    assert_eq!(code(&count), 0);
    assert_eq!(stdout(&count).trim(), "36");

    let list = fsalg(&["words", "list", "--k", "1", "--n", "2"]);
    assert_eq!(code(&list), 0);
    let listed = stdout(&list);
    let lines: Vec<&str> = listed.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines.contains(&"x1^2"));
    assert!(lines.contains(&"x1^-2"));
}

#[test]
fn words_list_respects_the_cap() {
    let out = fsalg(&["words", "list", "--k", "2", "--n", "12", "--cap", "100"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("cap"));
}

#[test]
fn words_scan_window_stays_at_two_hits() {
    let out = fsalg(&["words", "scan", "--gens", "5", "--len", "2", "--powers", "20"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let hits: u64 = text
        .lines()
        .find_map(|l| l.strip_prefix("max_hits\t"))
        .expect("max_hits row")
        .parse()
        .expect("numeric max_hits");
    assert!(hits <= 2, "window scan reported {hits} hits:\n{text}");
    assert!(text.contains("witness_g\t"));
}

#[test]
fn coset_extract_finds_3_plus_4z() {
    let dir = scratch("extract");
    let file = dir.join("expr.json");
    write_file(&file, EXPR_ODD_NOT_1_MOD_4);

    let out = fsalg(&["coset", "--file", file.to_str().unwrap(), "--extract"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("anchor\t3"));
    assert!(text.contains("basis\t4"));
    assert!(text.contains("exceptions\t\n") || text.ends_with("exceptions\t"));

    let json = fsalg(&["--format", "json", "coset", "--file", file.to_str().unwrap(), "--extract"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).expect("valid json");
    assert_eq!(v["anchor"], serde_json::json!([3]));
    assert_eq!(v["basis"], serde_json::json!([[4]]));

    let _ = fs::remove_dir_all(dir);
}

#[test]
fn coset_membership_and_box_check() {
    let dir = scratch("member");
    let file = dir.join("expr.json");
    write_file(&file, EXPR_ODD_NOT_1_MOD_4);
    let path = file.to_str().unwrap();

    let yes = fsalg(&["coset", "--file", path, "--member", "3"]);
    assert_eq!(code(&yes), 0);
    assert_eq!(stdout(&yes).trim(), "true");

    let no = fsalg(&["coset", "--file", path, "--member", "5"]);
    assert_eq!(stdout(&no).trim(), "false");

    let boxed = fsalg(&["coset", "--file", path, "--check", "64"]);
    assert_eq!(code(&boxed), 0);
    assert!(stdout(&boxed).contains("indicator\ttrue"));

    let _ = fs::remove_dir_all(dir);
}

#[test]
fn coset_json_errors_carry_line_and_column() {
    let dir = scratch("badjson");
    let file = dir.join("bad.json");
    write_file(&file, "{\"dim\": 1, \"positives\": [");

    let out = fsalg(&["coset", "--file", file.to_str().unwrap(), "--extract"]);
    assert_eq!(code(&out), 2);
    let err = stderr(&out);
    assert!(err.contains("line 1") && err.contains("column"), "stderr: {err}");

    let _ = fs::remove_dir_all(dir);
}

#[test]
fn coset_double_cover_is_an_input_error() {
    let dir = scratch("cover");
    let file = dir.join("expr.json");
    // 2Z + 2Z counts points twice: not an indicator
    write_file(
        &file,
        r#"{"dim": 1,
            "positives": [{"anchor": [0], "basis": [[2]]}, {"anchor": [0], "basis": [[2]]}],
            "negatives": []}"#,
    );
    let out = fsalg(&["coset", "--file", file.to_str().unwrap(), "--check", "8"]);
    assert_eq!(code(&out), 2);

    let _ = fs::remove_dir_all(dir);
}

#[test]
fn group_bundled_summary_passes_the_audit() {
    let out = fsalg(&["group", "s3"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("group\ts3"));
    assert!(text.contains("order\t6"));
    assert!(text.contains("dims\t1;1;2"));
    assert!(text.contains("passed\ttrue"));
}

#[test]
fn group_list_names_every_bundled_catalog() {
    let out = fsalg(&["group", "--list"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let names: Vec<&str> = text.lines().collect();
    assert_eq!(names.len(), 15);
    assert!(names.contains(&"q8"));
}

#[test]
fn group_files_load_via_flag_and_directory_env() {
    let dir = scratch("groupdir");
    let (model, cat) = symmetric_3();
    let mut file = GroupFile::from_model(&model, &cat);
    file.name = "mygrp".to_string();
    let path = dir.join("mygrp.json");
    write_file(&path, &serde_json::to_string(&file).unwrap());

    let by_flag = fsalg(&["group", "--group-file", path.to_str().unwrap()]);
    assert_eq!(code(&by_flag), 0, "stderr: {}", stderr(&by_flag));
    assert!(stdout(&by_flag).contains("group\tmygrp"));

    let by_env = fsalg_env(&["group", "mygrp"], "FSALG_GROUP_DIR", dir.to_str().unwrap());
    assert_eq!(code(&by_env), 0, "stderr: {}", stderr(&by_env));
    assert!(stdout(&by_env).contains("passed\ttrue"));

    let missing = fsalg_env(&["group", "other"], "FSALG_GROUP_DIR", dir.to_str().unwrap());
    assert_eq!(code(&missing), 2);

    let _ = fs::remove_dir_all(dir);
}

#[test]
fn group_failing_audit_exits_1_with_the_witness() {
    let dir = scratch("groupbad");
    let (model, cat) = symmetric_3();
    let mut file = GroupFile::from_model(&model, &cat);
    // break unitarity of the two-dimensional irrep at one element
    file.irreps[2].matrices[1][0] = [5.0, 0.0];
    let path = dir.join("broken.json");
    write_file(&path, &serde_json::to_string(&file).unwrap());

    let out = fsalg(&["group", "--group-file", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("passed\tfalse"));
    assert!(text.contains("failures\t") && !text.contains("failures\t\n"));

    let _ = fs::remove_dir_all(dir);
}

#[test]
fn group_without_name_or_file_is_a_usage_error() {
    let out = fsalg(&["group"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("group name required"));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&fsalg(&["--help"])), 0);
    assert_eq!(code(&fsalg(&["--version"])), 0);
    assert_eq!(code(&fsalg(&["nosuch-subcommand"])), 2);
}

#[test]
fn closed_stdout_pipe_does_not_panic() {
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_fsalg"))
        .args(["words", "list", "--k", "3", "--n", "4"])
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    // closing the read end forces EPIPE on the child's write
    drop(child.stdout.take());
    let out = child.wait_with_output().expect("child exits");
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(!String::from_utf8_lossy(&out.stderr).contains("panic"));
}
