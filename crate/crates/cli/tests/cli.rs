use std::path::Path;
use std::process::{Command, Output};

fn lrspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lrspec"))
        .args(args)
        .env_remove("LRSPEC_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn ml_prints_exact_then_approximate() {
    let o = lrspec(&["ml", "8", "3", "11", "19"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("ml = 7/30 (≈ 0.233333333333)"), "{}", s);
    assert!(s.contains("d_value = 4/15"));
}

#[test]
fn zero_speed_is_a_domain_error() {
    let o = lrspec(&["ml", "0", "1"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("InvalidSpeeds"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&lrspec(&["ml"])), 2);
    assert_eq!(code(&lrspec(&["frobnicate"])), 2);
    assert_eq!(code(&lrspec(&["lift", "--v", "1", "2", "--eps", "x/y"])), 2);
    assert_eq!(code(&lrspec(&["enumerate", "--n", "3", "--max-vol2", "2"])), 2);
    assert_eq!(code(&lrspec(&["--threads", "0", "ml", "1", "2"])), 2);
}

#[test]
fn negative_speeds_normalize() {
    let a = stdout(&lrspec(&["ml", "-1", "2"]));
    let b = stdout(&lrspec(&["ml", "1", "2"]));
    assert_eq!(a, b);
}

#[test]
fn dist_verbs() {
    let s = stdout(&lrspec(&["dist", "cyclic", "12/25", "9/25"]));
    assert!(s.contains("d_value = 7/50"), "{}", s);
    let s = stdout(&lrspec(&["dist", "line", "1", "2", "3"]));
    assert!(s.contains("d_value = 1/4 "), "{}", s);
    let s = stdout(&lrspec(&["dist", "line", "1", "2", "--shift", "0", "0"]));
    assert!(s.contains("d_value = 1/6 "), "{}", s);
    let s = stdout(&lrspec(&["dist", "plane", "1", "0", "0", "--", "0", "1", "1"]));
    assert!(s.contains("d_value = 0\n"), "{}", s);
}

#[test]
fn lift_certificate_record() {
    let o = lrspec(&["--json", "lift", "--v", "1", "1", "--eps", "1/2"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["version"], 1);
    assert_eq!(v["delta_sq"], "1/8");
    assert_eq!(v["guaranteed"], true);
}

#[test]
fn constants_for_three_runners() {
    let s = stdout(&lrspec(&["constants", "--n", "3", "--eps", "2/25"]));
    assert!(s.contains("c_star = 625/π"), "{}", s);
    assert!(s.contains("lrc_threshold = 144/π"), "{}", s);
    assert!(s.contains("threshold_below_tao = true"));
}

#[test]
fn enumerate_lists_and_counts() {
    let s = stdout(&lrspec(&["enumerate", "--n", "2", "--max-vol2", "10"]));
    assert_eq!(s, "1 1\n1 2\n1 3\n");
    let s = stdout(&lrspec(&["enumerate", "--n", "3", "--max-vol2", "6", "--all-orderings", "--count"]));
    assert_eq!(s, "count = 4\n");
}

#[test]
fn spectrum_files_are_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let run = |threads: &str, name: &str| {
        let out = dir.path().join(name);
        let o = lrspec(&[
            "--threads", threads, "spectrum", "--n", "3", "--max-vol2", "3000", "--out", out.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0);
        (std::fs::read(&out).unwrap(), std::fs::read(out.with_extension("csv")).unwrap())
    };
    let a = run("1", "a.json");
    let b = run("3", "b.json");
    assert_eq!(a, b);
    let json = String::from_utf8(a.0).unwrap();
    assert!(json.contains("\"d\": \"1/4\""));
}

#[test]
fn threads_env_is_read_and_flag_wins() {
    let o = Command::new(env!("CARGO_BIN_EXE_lrspec"))
        .args(["verify", "fan-sun", "--r-max", "3"])
        .env("LRSPEC_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    let o = Command::new(env!("CARGO_BIN_EXE_lrspec"))
        .args(["--threads", "2", "verify", "fan-sun", "--r-max", "3"])
        .env("LRSPEC_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
}

#[test]
fn checkpointed_spectrum_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("ck.jsonl");
    let out = dir.path().join("t.json");
    let args = [
        "spectrum", "--n", "3", "--max-vol2", "2000", "--out", out.to_str().unwrap(), "--checkpoint",
        ck.to_str().unwrap(),
    ];
    assert_eq!(code(&lrspec(&args)), 0);
    let first = std::fs::read(&out).unwrap();
    assert!(Path::new(&ck).exists());
    assert_eq!(code(&lrspec(&args)), 0);
    assert_eq!(std::fs::read(&out).unwrap(), first);
}

#[test]
fn verification_verbs_pass() {
    assert_eq!(code(&lrspec(&["verify", "fan-sun", "--r-max", "20"])), 0);
    assert_eq!(code(&lrspec(&["verify", "s2", "--max-vol2", "5000"])), 0);
    assert_eq!(code(&lrspec(&["verify", "window", "strict", "--n", "3", "--max-vol2", "3000"])), 0);
}

#[test]
fn window_failure_exits_1_unless_report_only() {
    let args = ["verify", "window", "strict", "--n", "4", "--max-vol2", "600"];
    let o = lrspec(&args);
    assert_eq!(code(&o), 1, "{}", stdout(&o));
    let mut a = args.to_vec();
    a.push("--report-only");
    assert_eq!(code(&lrspec(&a)), 0);
}

#[test]
fn verify_reads_table_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s2.json");
    let o = lrspec(&["spectrum", "--n", "2", "--max-vol2", "4000", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(code(&lrspec(&["verify", "s2", "--table", out.to_str().unwrap()])), 0);
    std::fs::write(&out, "{\"version\": 7}").unwrap();
    assert_eq!(code(&lrspec(&["verify", "s2", "--table", out.to_str().unwrap()])), 2);
}

#[test]
fn prop81_small_cutoff_fails_in_the_density_step() {
    let o = lrspec(&["verify", "prop81", "--cutoff-vol2", "2000"]);
    assert_eq!(code(&o), 1);
    let s = stdout(&o);
    assert!(s.contains("phase A: PASS") && s.contains("phase B: FAIL"), "{}", s);
}

#[test]
fn prop81_coarse_pi_fails() {
    let o = lrspec(&["verify", "prop81", "--cutoff-vol2", "400", "--pi-lower", "314/100", "--pi-upper", "315/100"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn reports() {
    let s = stdout(&lrspec(&["report", "acc", "--n", "3", "--max-vol2", "1000"]));
    assert!(s.contains("1/6\t0\t"), "{}", s);
    let s = stdout(&lrspec(&["report", "mult", "--n", "2", "--max-vol2", "1000", "--threshold", "1"]));
    assert!(s.contains("1/6\t1\tno"), "{}", s);
    assert!(s.contains("0\t"), "{}", s);
}

#[test]
fn output_is_repeatable() {
    let a = lrspec(&["--json", "verify", "prop81", "--cutoff-vol2", "3000"]);
    let b = lrspec(&["--threads", "2", "--json", "verify", "prop81", "--cutoff-vol2", "3000"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn help_describes_every_verb() {
    for verb in [
        vec!["ml"],
        vec!["dist", "cyclic"],
        vec!["dist", "line"],
        vec!["dist", "plane"],
        vec!["lift"],
        vec!["constants"],
        vec!["enumerate"],
        vec!["spectrum"],
        vec!["verify", "s2"],
        vec!["verify", "fan-sun"],
        vec!["verify", "window"],
        vec!["verify", "prop81"],
        vec!["report", "acc"],
        vec!["report", "mult"],
        vec!["repro"],
    ] {
        let mut args = verb.clone();
        args.push("--help");
        let o = lrspec(&args);
        assert_eq!(code(&o), 0, "{:?}", verb);
        assert!(stdout(&o).lines().count() > 3, "{:?}", verb);
    }
}
