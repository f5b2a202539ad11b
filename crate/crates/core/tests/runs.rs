use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use dmnls::experiments::{
    parse_config, read_checkpoint, read_csv, read_manifest, read_series, run, run_batch, run_file, worker_count,
    ExitStatus, ManifestStatus, RunSummary, WORKERS_ENV,
};

fn free_config(out: &Path, t_final: f64, extra: &str) -> String {
    format!(
        "preset = \"free_sanity\"\noutput_dir = {:?}\nt_final = {t_final:?}\n{extra}\n\
         [grid]\npoints_per_axis = 256\nbox_length = 64.0\n\
         [checkpoints]\nevery = 0.5\n",
        out.display().to_string()
    )
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn summary(dir: &Path) -> RunSummary {
    serde_json::from_str(&fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

fn dmnls() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dmnls"))
}

#[test]
fn passing_run_leaves_complete_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("free");
    let cfg = write(tmp.path(), "free.toml", &free_config(&out, 3.0, ""));
    let outcome = run_file(&cfg).unwrap();
    assert_eq!(outcome.exit, ExitStatus::Pass);

    let manifest = read_manifest(&out.join("manifest.json")).unwrap();
    assert_eq!(manifest, outcome.manifest);
    assert_eq!(manifest.status, ManifestStatus::Pass);
    assert_eq!(manifest.exit_code, 0);
    assert_eq!(manifest.preset, "free_sanity");
    assert_eq!(manifest.config_hash.len(), 64);
    assert!(manifest.finished_unix >= manifest.started_unix);
    assert!(manifest.files.iter().any(|f| f == "summary.json"));
    for f in &manifest.files {
        assert!(out.join(f).is_file(), "{f}");
    }
    let config = parse_config(&cfg).unwrap();
    assert_eq!(manifest.config, serde_json::to_value(&config).unwrap());

    let series = read_series(&out.join("timeseries.csv")).unwrap();
    let times: Vec<f64> = series.iter().map(|r| r.t).collect();
    assert_eq!(times, config.checkpoint_times());
    let table = read_csv(&out.join("timeseries.csv")).unwrap();
    assert_eq!(table.rows.len(), times.len());

    let ckp = read_checkpoint(&out.join("final.ckp")).unwrap();
    assert_eq!(ckp.time, 3.0);
    assert_eq!(ckp.field.grid().points_per_axis(), 256);

    let s = summary(&out);
    assert_eq!(s.checks, outcome.summary.checks);
    assert!(s.checks.iter().all(|c| c.passed && c.hard));

    let leftovers: Vec<_> = fs::read_dir(tmp.path())
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().contains(".partial-"))
        .collect();
    assert!(leftovers.is_empty());
}

#[test]
fn restart_from_checkpoint_continues_the_flow() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b, c) = (tmp.path().join("a"), tmp.path().join("b"), tmp.path().join("c"));
    run_file(&write(tmp.path(), "a.toml", &free_config(&a, 2.0, ""))).unwrap();
    let restart = "[initial_data]\nkind = \"custom_file\"\npath = \"a/final.ckp\"\n";
    let text = free_config(&b, 2.0, "").replace("[grid]", &format!("{restart}[grid]"));
    assert_eq!(
        run_file(&write(tmp.path(), "b.toml", &text)).unwrap().exit,
        ExitStatus::Pass
    );
    run_file(&write(tmp.path(), "c.toml", &free_config(&c, 4.0, ""))).unwrap();
    let two_legs = read_checkpoint(&b.join("final.ckp")).unwrap().field;
    let one_leg = read_checkpoint(&c.join("final.ckp")).unwrap().field;
    assert!(two_legs.sub(&one_leg).l2_norm() < 1e-12 * one_leg.l2_norm());
}

#[test]
fn hard_and_soft_check_failures() {
    let tmp = tempfile::tempdir().unwrap();
    let strict = "[analysis.thresholds]\nfree_invariant = 1e-300\n";
    let out = tmp.path().join("hard");
    let text = free_config(&out, 1.0, "").replace("[checkpoints]", &format!("{strict}[checkpoints]"));
    let outcome = run_file(&write(tmp.path(), "hard.toml", &text)).unwrap();
    assert_eq!(outcome.exit, ExitStatus::CheckFail);
    assert_eq!(outcome.manifest.exit_code, 1);
    assert!(outcome.manifest.failed_checks.iter().any(|c| c == "kinetic_constant"));
    assert!(outcome.manifest.error.is_none());

    let out = tmp.path().join("soft");
    let text = free_config(&out, 1.0, "hard_fail = []").replace("[checkpoints]", &format!("{strict}[checkpoints]"));
    let outcome = run_file(&write(tmp.path(), "soft.toml", &text)).unwrap();
    assert_eq!(outcome.exit, ExitStatus::Pass);
    let k = outcome.summary.check("kinetic_constant").unwrap();
    assert!(!k.passed && !k.hard);
}

#[test]
fn unreadable_initial_data_is_a_runtime_error() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("junk.ckp"), b"not a checkpoint").unwrap();
    let out = tmp.path().join("r");
    let text = free_config(&out, 1.0, "").replace(
        "[grid]",
        "[initial_data]\nkind = \"custom_file\"\npath = \"junk.ckp\"\n[grid]",
    );
    let outcome = run_file(&write(tmp.path(), "r.toml", &text)).unwrap();
    assert_eq!(outcome.exit, ExitStatus::RuntimeError);
    let m = read_manifest(&out.join("manifest.json")).unwrap();
    assert_eq!(m.exit_code, 3);
    assert_eq!(m.failing_stage.as_deref(), Some("initial_data"));
    assert!(m.error.is_some());
}

#[test]
fn foreign_output_directory_is_left_alone() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("taken");
    fs::create_dir(&out).unwrap();
    fs::write(out.join("notes.txt"), "keep me").unwrap();
    let cfg = parse_config(&write(tmp.path(), "t.toml", &free_config(&out, 1.0, ""))).unwrap();
    let outcome = run(&cfg);
    assert_eq!(outcome.exit, ExitStatus::RuntimeError);
    assert_eq!(outcome.manifest.failing_stage.as_deref(), Some("publish"));
    assert_eq!(fs::read_to_string(out.join("notes.txt")).unwrap(), "keep me");
}

#[test]
fn rerun_replaces_an_earlier_run() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("again");
    let cfg = parse_config(&write(tmp.path(), "a.toml", &free_config(&out, 1.0, ""))).unwrap();
    let first = run(&cfg);
    let body = fs::read(out.join("timeseries.csv")).unwrap();
    let second = run(&cfg);
    assert_eq!(second.exit, ExitStatus::Pass);
    assert_eq!(first.manifest.config_hash, second.manifest.config_hash);
    assert_eq!(fs::read(out.join("timeseries.csv")).unwrap(), body);
}

#[test]
fn batch_rejects_shared_outputs_and_reports_worst_status() {
    let tmp = tempfile::tempdir().unwrap();
    let shared = tmp.path().join("shared");
    write(tmp.path(), "a.toml", &free_config(&shared, 1.0, ""));
    write(tmp.path(), "b.toml", &free_config(&shared, 1.5, ""));
    write(tmp.path(), "c.toml", &free_config(&tmp.path().join("own"), 1.0, ""));
    write(tmp.path(), "d.toml", "preset = \"free_sanity\"\n");
    fs::write(tmp.path().join("readme.txt"), "ignored").unwrap();

    std::env::set_var(WORKERS_ENV, "3");
    assert_eq!(worker_count(10), 3);
    assert_eq!(worker_count(2), 2);
    let report = run_batch(tmp.path()).unwrap();
    std::env::set_var(WORKERS_ENV, "zero");
    assert!(worker_count(usize::MAX) >= 1);
    std::env::remove_var(WORKERS_ENV);
    assert_eq!(report.workers, 1);
    let names: Vec<String> = report
        .entries
        .iter()
        .map(|e| e.config_path.file_name().unwrap().to_string_lossy().into_owned())
        .collect();
    assert_eq!(names, ["a.toml", "b.toml", "c.toml", "d.toml"]);
    let exits: Vec<ExitStatus> = report.entries.iter().map(|e| e.exit()).collect();
    assert_eq!(
        exits,
        [
            ExitStatus::ConfigError,
            ExitStatus::ConfigError,
            ExitStatus::Pass,
            ExitStatus::ConfigError
        ]
    );
    assert!(report.entries[0]
        .result
        .as_ref()
        .unwrap_err()
        .to_string()
        .contains("shared"));
    assert_eq!(report.exit(), ExitStatus::ConfigError);
    assert!(!shared.exists());
    assert!(tmp.path().join("own/manifest.json").is_file());
    assert!(run_batch(&tmp.path().join("own")).is_err());
}

#[test]
fn cli_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let code = |cmd: &mut Command| cmd.output().unwrap().status.code().unwrap();

    let out = dmnls().args(["exponents", "--d", "1", "--p", "4"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["s_c"], 0.0);
    assert_eq!(json["regime"], "mass_critical");
    assert_eq!(code(dmnls().args(["exponents", "--d", "0", "--p", "4"])), 2);
    assert_eq!(code(dmnls().args(["exponents", "--d", "1", "--p", "-1"])), 2);

    let good = write(tmp.path(), "good.toml", &free_config(&tmp.path().join("good"), 1.0, ""));
    assert_eq!(code(dmnls().arg("run").arg(&good)), 0);
    let strict = free_config(&tmp.path().join("bad"), 1.0, "").replace(
        "[checkpoints]",
        "[analysis.thresholds]\nfree_invariant = 1e-300\n[checkpoints]",
    );
    let failing = write(tmp.path(), "failing.toml", &strict);
    assert_eq!(code(dmnls().arg("run").arg(&failing)), 1);
    let broken = write(
        tmp.path(),
        "broken.toml",
        "preset = \"free_sanity\"\n[stepper]\ndt = 0\n",
    );
    assert_eq!(code(dmnls().arg("run").arg(&broken)), 2);
    assert_eq!(code(dmnls().arg("run").arg(tmp.path().join("missing.toml"))), 2);
    assert_eq!(code(dmnls().arg("groundstate").arg(&good)), 2);

    let junk = tmp.path().join("junk.ckp");
    fs::write(&junk, b"xx").unwrap();
    let crashing = free_config(&tmp.path().join("crash"), 1.0, "").replace(
        "[grid]",
        "[initial_data]\nkind = \"custom_file\"\npath = \"junk.ckp\"\n[grid]",
    );
    let crashing = write(tmp.path(), "crash.toml", &crashing);
    assert_eq!(code(dmnls().arg("run").arg(&crashing)), 3);

    let batch = tmp.path().join("batch");
    fs::create_dir(&batch).unwrap();
    write(&batch, "ok.toml", &free_config(&tmp.path().join("b1"), 1.0, ""));
    assert_eq!(code(dmnls().arg("batch").arg(&batch).env(WORKERS_ENV, "1")), 0);
    fs::copy(&failing, batch.join("failing.toml")).unwrap();
    assert_eq!(code(dmnls().arg("batch").arg(&batch)), 1);
    fs::copy(&broken, batch.join("broken.toml")).unwrap();
    assert_eq!(code(dmnls().arg("batch").arg(&batch)), 2);
    assert_eq!(code(dmnls().arg("batch").arg(tmp.path().join("nowhere"))), 2);
}
