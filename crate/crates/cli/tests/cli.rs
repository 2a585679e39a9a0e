//! End-to-end checks of the command-line interface: deterministic output,
//! config-file fallback with flag override, and structured error objects.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_inducedym"))
}

fn run(args: &[&str]) -> (String, String, bool) {
    let out = bin().args(args).output().expect("binary runs");
    (
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
        out.status.success(),
    )
}

#[test]
fn oneplaq_det_matches_linear_law() {
    let (stdout, _, ok) = run(&[
        "oneplaq", "--nc", "3", "--nb", "2", "--alpha-b", "0.4", "--engine", "det",
    ]);
    assert!(ok);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let w = v["value"].as_f64().unwrap();
    assert!((w - 0.8).abs() < 1e-10, "{w}");
}

#[test]
fn oneplaq_residue_emits_exact_rational() {
    let (stdout, _, ok) = run(&[
        "oneplaq", "--nc", "3", "--nf", "3", "--alpha-f", "-1", "--engine", "residue",
    ]);
    assert!(ok);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["exact"], "3/2");
    assert_eq!(v["value"].as_f64().unwrap(), 1.5);
}

#[test]
fn zg_cauchy_torus_is_coth_half() {
    let (stdout, _, ok) = run(&[
        "zg", "--nc", "1", "--kind", "cauchy", "--mu", "1", "--genus", "1", "--max-entry", "40",
    ]);
    assert!(ok);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let z = v["value"].as_f64().unwrap();
    let coth_half = 1.0 / (0.5f64).tanh();
    assert!((z - coth_half).abs() < 1e-10, "{z}");
}

#[test]
fn runs_are_byte_identical() {
    let args = [
        "mc", "--complex", "", "--nc", "2", "--nb", "2", "--alpha-b", "0.5", "--steps", "200",
        "--therm", "50", "--seed", "11", "--format", "csv",
    ];
    let dir = std::env::temp_dir().join("inducedym_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let cpath = dir.join("plaq.json");
    let (json, _, ok) = run(&["complex", "--extents", "1,1"]);
    assert!(ok);
    std::fs::write(&cpath, json).unwrap();
    let mut args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    args[2] = cpath.to_string_lossy().into_owned();
    let a = bin().args(&args).output().unwrap();
    let b = bin().args(&args).output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "identical config + seed must be byte-identical");
}

#[test]
fn errors_are_structured() {
    // invalid coupling
    let (_, stderr, ok) =
        run(&["oneplaq", "--nc", "2", "--nb", "1", "--alpha-b", "1.5", "--engine", "det"]);
    assert!(!ok);
    let v: serde_json::Value = serde_json::from_str(&stderr).unwrap();
    assert_eq!(v["error"]["code"], "invalid_parameter");
    assert!(v["error"]["message"].as_str().unwrap().contains("alpha"));

    // budget violation carries its module
    let (_, stderr, ok) = run(&[
        "oneplaq", "--nc", "5", "--nb", "1", "--alpha-b", "0.5", "--engine", "residue",
    ]);
    assert!(!ok);
    let v: serde_json::Value = serde_json::from_str(&stderr).unwrap();
    assert_eq!(v["error"]["code"], "budget_exceeded");
    assert_eq!(v["error"]["module"], "residues");
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = std::env::temp_dir().join("inducedym_cli_cfg");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.toml");
    std::fs::write(
        &cfg,
        "[oneplaq]\nnc = 3\n\n[repn]\nnc = 2\nlambda = \"1,0\"\n",
    )
    .unwrap();
    // config supplies nc for oneplaq
    let (stdout, _, ok) = bin()
        .args([
            "--config",
            cfg.to_str().unwrap(),
            "oneplaq",
            "--nb",
            "1",
            "--alpha-b",
            "0.5",
            "--engine",
            "det",
        ])
        .output()
        .map(|o| {
            (
                String::from_utf8_lossy(&o.stdout).into_owned(),
                String::from_utf8_lossy(&o.stderr).into_owned(),
                o.status.success(),
            )
        })
        .unwrap();
    assert!(ok, "{stdout}");
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["n_c"], 3);
    // explicit flag overrides the config
    let (stdout, _, ok) = bin()
        .args(["--config", cfg.to_str().unwrap(), "repn", "--nc", "3", "--lambda", "1,0,-1"])
        .output()
        .map(|o| {
            (
                String::from_utf8_lossy(&o.stdout).into_owned(),
                String::from_utf8_lossy(&o.stderr).into_owned(),
                o.status.success(),
            )
        })
        .unwrap();
    assert!(ok);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["dimension"], 8);
    assert_eq!(v["casimir1"], "3/2");
}

#[test]
fn dual_subcommand_reports_value_and_tail() {
    let dir = std::env::temp_dir().join("inducedym_cli_dual");
    std::fs::create_dir_all(&dir).unwrap();
    let cpath = dir.join("torus.json");
    let (json, _, ok) = run(&["complex", "--extents", "2,2", "--periodic", "true,true"]);
    assert!(ok);
    std::fs::write(&cpath, json).unwrap();
    let (stdout, _, ok) = run(&[
        "dual", "--complex", cpath.to_str().unwrap(), "--alpha", "0.3", "--nmax", "12",
    ]);
    assert!(ok);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert!(v["value"].as_f64().unwrap() > 1.0);
    assert!(v["tail_bound"].as_f64().unwrap() >= 0.0);
    assert!(v["chain_count"].as_u64().unwrap() >= 1);
}

#[test]
fn precision_env_var_is_validated() {
    let out = bin()
        .env("INDUCEDYM_PRECISION", "quadruple")
        .args(["repn", "--nc", "1", "--lambda", "2"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&String::from_utf8_lossy(&out.stderr)).unwrap();
    assert_eq!(v["error"]["code"], "invalid_parameter");
}
