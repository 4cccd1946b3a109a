use std::process::{Command, Output};

fn lucat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lucat"))
        .args(args)
        .env_remove("LUCAT_PRECISION_BITS")
        .env_remove("LUCAT_FORMAT")
        .env_remove("LUCAT_M_MIN")
        .output()
        .expect("lucat runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn gaps_and_pell_pass() {
    for args in [&["verify", "gaps"][..], &["pell"][..]] {
        let out = lucat(args);
        assert_eq!(code(&out), 0, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(json(&out)["status"], "pass");
    }
}

#[test]
fn failing_claims_exit_one() {
    let out = lucat(&["--no-meta", "search", "v23"]);
    assert_eq!(code(&out), 1);
    let report = json(&out);
    assert_eq!(report["status"], "fail");
    let rows = report["rows"].as_array().unwrap();
    assert!(rows.iter().any(|r| r["status"] == "fail" && r["witness"].as_str().is_some_and(|w| w.contains("(17, -1, 3"))));
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(code(&lucat(&["verify", "no-such-lemma"])), 64);
    assert_eq!(code(&lucat(&["--precision-bits", "16", "tables"])), 64);
    assert_eq!(code(&lucat(&["pbc", "0"])), 64);
    assert_eq!(code(&lucat(&["--help"])), 0);
}

#[test]
fn pbc_counts_depend_on_m_min() {
    let count = |out: &Output| json(out)["rows"].as_array().unwrap().iter().filter(|r| r["claim_ref"].as_str().unwrap().starts_with("pbc.factorization")).count();
    let default = lucat(&["--no-meta", "pbc", "144"]);
    assert_eq!(code(&default), 0);
    assert_eq!(count(&default), 1);
    let with_b1 = lucat(&["--no-meta", "--m-min", "1", "pbc", "144"]);
    assert_eq!(count(&with_b1), 3);
    let neg = lucat(&["--no-meta", "pbc", "-14"]);
    assert_eq!(code(&neg), 0);
    assert!(count(&neg) >= 1);
}

#[test]
fn output_does_not_depend_on_workers() {
    for args in [&["verify", "case24"][..], &["search", "real-57"][..], &["pell"][..]] {
        let one = lucat(&[&["--no-meta", "--workers", "1"][..], args].concat());
        let four = lucat(&[&["--no-meta", "--workers", "4"][..], args].concat());
        assert_eq!(one.stdout, four.stdout, "{args:?}");
        assert_eq!(code(&one), code(&four));
    }
}

#[test]
fn csv_header_and_rows() {
    let out = lucat(&["--format", "csv", "pell"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("report,report_status,claim_ref,status,inputs,margin_lo,margin_hi,witness"));
    assert!(lines.all(|l| l.starts_with("pell,pass,")));
}

#[test]
fn env_overrides_default() {
    let out = Command::new(env!("CARGO_BIN_EXE_lucat"))
        .args(["--no-meta", "tables"])
        .env("LUCAT_PRECISION_BITS", "256")
        .output()
        .unwrap();
    assert_eq!(json(&out)["config"]["precision_bits"], "256");
    let out = Command::new(env!("CARGO_BIN_EXE_lucat")).args(["tables"]).env("LUCAT_PRECISION_BITS", "9999").output().unwrap();
    assert_eq!(code(&out), 64);
}

#[test]
fn bad_plan_file_exits_64() {
    let dir = std::env::temp_dir().join(format!("lucat-plan-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("plan.toml");
    std::fs::write(&path, "version = 1\n[pell]\nd_max = 10\n").unwrap();
    let out = lucat(&["--plan", path.to_str().unwrap(), "search", "real-57"]);
    assert_eq!(code(&out), 64);
    let out = lucat(&["--plan", dir.join("missing.toml").to_str().unwrap(), "pell"]);
    assert_eq!(code(&out), 64);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn meta_is_optional() {
    let with = json(&lucat(&["pell"]));
    assert!(with["meta"]["version"].is_string());
    let without = json(&lucat(&["--no-meta", "pell"]));
    assert!(without.get("meta").is_none());
}
