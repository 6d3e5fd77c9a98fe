use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_besselmoments"))
        .env("BESSELMOMENTS_CACHE", cache)
        .args(args)
        .output()
        .expect("binary runs")
}

fn envelopes(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("one JSON object per line"))
        .collect()
}

/// Envelope with the run-dependent fields removed.
fn stable(mut v: Value) -> Value {
    let obj = v.as_object_mut().unwrap();
    obj.remove("elapsed_ms");
    obj.remove("cache_hit");
    v
}

#[test]
fn moment_of_k0_squared() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["moment", "0", "2", "0", "--digits", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let env = &envelopes(&out)[0];
    assert_eq!(env["command"], "moment");
    assert_eq!(env["precision_digits"], 50);
    assert!(env["value"].as_str().unwrap().starts_with("2.4674011002"));

    let out = run(dir.path(), &["moment", "2", "2", "0", "--digits", "30"]);
    assert_eq!(out.status.code(), Some(0));
    let env = &envelopes(&out)[0];
    assert!(!env["value"].as_str().unwrap().starts_with('-'));
    let bound: f64 = env["error_bound"].as_str().unwrap().parse().unwrap();
    assert!(bound < 1e-30);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let code = |args: &[&str]| run(p, args).status.code();

    let out = run(p, &["moment", "3", "2", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("diverges"));

    assert_eq!(code(&["verify", "Z", "3", "2"]), Some(2));
    assert_eq!(code(&["verify", "hilbert", "kappa", "1"]), Some(2));
    assert_eq!(code(&["verify", "hilbert", "kappa_sq", "0"]), Some(2));
    assert_eq!(code(&["sequence", "domb", "5..2"]), Some(2));
    assert_eq!(code(&["sequence", "beta_m", "1..3"]), Some(2));
    assert_eq!(code(&["moment", "0", "2", "0", "--digits", "5"]), Some(2));
    assert_eq!(code(&["frobnicate"]), Some(2));
    assert_eq!(code(&["--help"]), Some(0));
    // a cap of two levels cannot reach 50 digits
    assert_eq!(code(&["--no-cache", "--max-level", "2", "moment", "0", "2", "0"]), Some(3));
}

#[test]
fn verify_reports_exact_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["verify", "crandall", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let env = &envelopes(&out)[0];
    assert_eq!(env["exact"], "1");
    assert_eq!(env["pass"], true);

    let out = run(dir.path(), &["verify", "Z", "3", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(envelopes(&out)[0]["pass"], true);

    let out = run(dir.path(), &["--fused", "verify", "Y", "4", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let env = &envelopes(&out)[0];
    assert_eq!(env["inputs"]["method"], "fused");

    let out = run(dir.path(), &["verify", "hilbert", "iota_plus", "-1"]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(dir.path(), &["verify", "rogers", "1/16", "--terms", "120"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn sequences() {
    let dir = tempfile::tempdir().unwrap();
    let values = |args: &[&str]| -> Vec<String> {
        let out = run(dir.path(), args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        envelopes(&out).iter().map(|e| e["value"].as_str().unwrap().to_string()).collect()
    };
    assert_eq!(values(&["sequence", "crandall", "1..6"]), ["0", "1", "2", "15", "302", "12559"]);
    assert_eq!(values(&["sequence", "domb", "0..5"]), ["1", "4", "28", "256", "2716", "31504"]);
    assert_eq!(values(&["sequence", "alpha", "1..=10"]).len(), 10);
    assert_eq!(values(&["sequence", "beta_m", "2", "--m", "1"]), ["1/2"]);
    assert_eq!(values(&["sequence", "br", "1..3", "--m", "4"]), ["1", "2", "15"]);
}

#[test]
fn cache_hits_match_cold_runs() {
    let dir = tempfile::tempdir().unwrap();
    for args in [&["moment", "1", "3", "1"][..], &["verify", "Z", "2", "1"][..]] {
        let cold = envelopes(&run(dir.path(), args)).remove(0);
        let warm = envelopes(&run(dir.path(), args)).remove(0);
        assert_eq!(cold["cache_hit"], false);
        assert_eq!(warm["cache_hit"], true);
        assert_eq!(stable(cold), stable(warm));
    }
    assert!(std::fs::read_dir(dir.path()).unwrap().count() >= 2);

    // a different precision never reuses the entry
    let other = envelopes(&run(dir.path(), &["moment", "1", "3", "1", "--digits", "30"])).remove(0);
    assert_eq!(other["cache_hit"], false);
}

#[test]
fn repeated_runs_are_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["--digits", "30", "verify", "hilbert", "kappa_minus", "5/2"];
    let x = envelopes(&run(a.path(), &args)).remove(0);
    let y = envelopes(&run(b.path(), &args)).remove(0);
    assert_eq!(stable(x), stable(y));

    let args = ["--no-cache", "--digits", "30", "moment", "0", "3", "2", "--pi-power", "-1"];
    let x = run(a.path(), &args);
    let y = run(a.path(), &args);
    assert_eq!(stable(envelopes(&x).remove(0)), stable(envelopes(&y).remove(0)));
    assert_eq!(std::fs::read_dir(a.path()).unwrap().count(), 1);
}

#[test]
fn text_output_is_a_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["--text", "sequence", "domb", "0..2"]);
    let s = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<_> = s.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("command"));
    assert!(lines[3].contains("28"));
}
