use std::path::Path;

use dmnls::dynamics::Sign;
use dmnls::experiments::{parse_config, parse_config_str, preset_defaults, InitialData, Preset, RunConfig};
use proptest::prelude::*;

fn parse(text: &str) -> Result<RunConfig, Vec<String>> {
    parse_config_str(text, Path::new("/work")).map_err(|e| e.problems)
}

fn problems(text: &str) -> Vec<String> {
    parse(text).expect_err("config should be rejected")
}

fn mentions(problems: &[String], needle: &str) -> bool {
    problems.iter().any(|p| p.contains(needle))
}

#[test]
fn minimal_config_takes_preset_defaults() {
    let c = parse("preset = \"pce_check\"\noutput_dir = \"out\"\n").unwrap();
    let d = preset_defaults(Preset::PceCheck);
    assert_eq!(c.preset, Preset::PceCheck);
    assert_eq!(c.output_dir, Path::new("/work/out"));
    assert_eq!(c.model, d.model);
    assert_eq!(c.stepper, d.stepper);
    assert_eq!(c.t_final, d.t_final);
    assert_eq!(c.analysis, d.analysis);
}

#[test]
fn nested_keys_merge_into_defaults() {
    let c = parse(
        "preset = \"decay_rates\"\noutput_dir = \"o\"\n[stepper]\ndt = 0.005\n[analysis.thresholds]\nju_slope_max = 0.55\n",
    )
    .unwrap();
    let d = preset_defaults(Preset::DecayRates);
    assert_eq!(c.stepper.dt, 0.005);
    assert_eq!(c.stepper.max_dt, d.stepper.max_dt);
    assert_eq!(c.analysis.thresholds.ju_slope_max, 0.55);
    assert_eq!(c.analysis.thresholds.w_slope_max, d.analysis.thresholds.w_slope_max);
    assert_eq!(c.analysis.window, d.analysis.window);
}

#[test]
fn initial_data_table_is_replaced_whole() {
    let c = parse(
        "preset = \"small_data_scatter_intercritical\"\noutput_dir = \"o\"\n[initial_data]\nkind = \"sech\"\namplitude = 0.2\nwidth = 3.0\n",
    )
    .unwrap();
    match c.initial_data {
        InitialData::Sech { amplitude, width, .. } => assert_eq!((amplitude, width), (0.2, 3.0)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn subcritical_dichotomy_power_is_rejected() {
    let p = problems("preset = \"blowup_dichotomy\"\noutput_dir = \"o\"\n[model]\npower = 6.0\nsign = \"focusing\"\n");
    assert!(mentions(&p, "requires p > 8"), "{p:?}");
}

#[test]
fn dichotomy_needs_focusing_sign() {
    let p = problems("preset = \"blowup_dichotomy\"\noutput_dir = \"o\"\n[model]\nsign = \"defocusing\"\n");
    assert!(mentions(&p, "focusing"), "{p:?}");
}

#[test]
fn every_problem_is_reported_at_once() {
    let p = problems(
        "preset = \"pce_check\"\nt_final = -1.0\nbogus = 3\n[stepper]\ndt = -0.1\nstep_size = 2\n[initial_data]\nkind = \"gaussian\"\namplitude = 1.0\nwidth = 2.0\nwidht = 2.0\n",
    );
    assert!(mentions(&p, "output_dir"), "{p:?}");
    assert!(mentions(&p, "unknown key bogus"), "{p:?}");
    assert!(mentions(&p, "unknown key stepper.step_size"), "{p:?}");
    assert!(mentions(&p, "unknown key initial_data.widht"), "{p:?}");
    assert!(p.len() >= 4, "{p:?}");
}

#[test]
fn misspelled_required_key_is_named() {
    let p = problems(
        "preset = \"pce_check\"\noutput_dir = \"o\"\n[initial_data]\nkind = \"gaussian\"\namplitude = 1.0\nwidht = 2.0\n",
    );
    assert!(mentions(&p, "unknown key initial_data.widht"), "{p:?}");
    assert!(mentions(&p, "missing field `width`"), "{p:?}");
}

#[test]
fn semantic_problems_are_collected() {
    let p = problems("preset = \"pce_check\"\noutput_dir = \"o\"\nt_final = -1.0\n[stepper]\ndt = -0.1\n");
    assert!(mentions(&p, "dt must be positive"), "{p:?}");
    assert!(mentions(&p, "t_final"), "{p:?}");
}

#[test]
fn unknown_and_missing_presets() {
    assert!(mentions(&problems("output_dir = \"o\"\n"), "preset"));
    assert!(mentions(
        &problems("preset = \"warp_drive\"\noutput_dir = \"o\"\n"),
        "unknown preset"
    ));
    assert!(mentions(
        &problems("preset = \"pce_check\"\noutput_dir = \"o\"\n[initial_data]\nkind = \"square\"\n"),
        "unknown kind"
    ));
    assert!(mentions(&problems("preset = [1]\n"), "preset must be a string"));
    assert!(mentions(
        &problems("preset = \"pce_check\"\noutput_dir = \n"),
        "TOML syntax"
    ));
}

#[test]
fn hard_fail_names_must_be_checks_of_the_preset() {
    let p = problems("preset = \"pce_check\"\noutput_dir = \"o\"\nhard_fail = [\"pce_residual\", \"nonsense\"]\n");
    assert!(mentions(&p, "nonsense"), "{p:?}");
    let ok = parse("preset = \"pce_check\"\noutput_dir = \"o\"\nhard_fail = [\"pce_residual\"]\n").unwrap();
    assert_eq!(ok.hard_fail, vec!["pce_residual".to_string()]);
}

#[test]
fn nonscattering_requires_long_range_power_and_probe() {
    let p = problems("preset = \"nonscattering\"\noutput_dir = \"o\"\n[model]\npower = 3.0\n");
    assert!(mentions(&p, "p <= 2/d"), "{p:?}");
}

#[test]
fn custom_file_path_is_resolved_and_checked() {
    let p = problems(
        "preset = \"pce_check\"\noutput_dir = \"o\"\n[initial_data]\nkind = \"custom_file\"\npath = \"missing.ckp\"\n",
    );
    assert!(mentions(&p, "/work/missing.ckp"), "{p:?}");
}

#[test]
fn preset_defaults_round_trip_through_toml() {
    for preset in Preset::ALL {
        let mut d = preset_defaults(preset);
        d.output_dir = "/tmp/x".into();
        let back = parse_config_str(&d.to_toml(), Path::new("/")).unwrap();
        assert_eq!(back, d, "{preset}");
    }
}

#[test]
fn shipped_configs_parse_and_round_trip() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/configs");
    let mut seen = Vec::new();
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let c = parse_config(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let back = parse_config_str(&c.to_toml(), Path::new("/")).unwrap();
        assert_eq!(back, c, "{}", path.display());
        seen.push(c.preset);
    }
    for preset in Preset::ALL {
        assert!(seen.contains(&preset), "no config for {preset}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn serialized_configs_parse_back_unchanged(
        amplitude in 1e-3..10.0f64,
        width in 0.1..10.0f64,
        dt in 1e-4..0.05f64,
        t_final in 4.5..60.0f64,
        power in 4.01..9.0f64,
        every in 0.01..0.1f64,
        seed in 0..=i64::MAX as u64,
    ) {
        let text = format!(
            "preset = \"decay_rates\"\noutput_dir = \"o\"\nt_final = {t_final:?}\nrng_seed = {}\n\
             [model]\npower = {power:?}\n[stepper]\ndt = {dt:?}\n[checkpoints]\nevery = {every:?}\n\
             [initial_data]\nkind = \"gaussian\"\namplitude = {amplitude:?}\nwidth = {width:?}\n\
             [analysis]\nwindow = [1.0, 4.0]\ntransient = 1.0\n",
            seed,
        );
        let c = parse(&text).unwrap();
        prop_assert_eq!(c.model.power, power);
        prop_assert_eq!(c.model.sign, Sign::Defocusing);
        let again = parse_config_str(&c.to_toml(), Path::new("/")).unwrap();
        prop_assert_eq!(again, c);
    }
}
