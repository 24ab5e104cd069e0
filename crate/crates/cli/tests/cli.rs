use assert_cmd::Command;
use serde_json::Value;

fn xrh() -> Command {
    Command::cargo_bin("xrh").unwrap()
}

fn data(name: &str) -> String {
    format!("{}/../core/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn json_lines(out: &[u8]) -> Vec<Value> {
    std::str::from_utf8(out).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn verify_trinomial_over_f64() {
    let out = xrh()
        .args(["verify", "--p", "2", "--k", "3", "--h", "1*x^2 + 1*x^1 + 1*x^-1", "--r", "1", "--oracle"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let rec = &json_lines(&out)[0];
    for flag in ["gcd_ok", "g_fixed_ok", "h_nonzero_ok", "r_permutes_ok", "oracle"] {
        assert_eq!(rec[flag], Value::Bool(true), "{flag}");
    }
    assert_eq!(rec["witnesses"], Value::Array(vec![]));
    // reproducibility metadata
    assert_eq!(rec["p"], 2);
    assert_eq!(rec["k"], 3);
    assert_eq!(rec["mid_modulus"], 11);
    assert!(rec["top_modulus"].is_u64());
    assert_eq!(rec["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn verify_failure_exits_one_with_witnesses() {
    let out = xrh()
        .args(["verify", "--p", "2", "--k", "3", "--h", "1*x^2 + 1", "--oracle"])
        .assert()
        .code(1)
        .get_output()
        .stdout
        .clone();
    let rec = &json_lines(&out)[0];
    assert_eq!(rec["h_nonzero_ok"], false);
    assert_eq!(rec["witnesses"][0]["condition"], "h_zero");
}

#[test]
fn reduce_example() {
    xrh()
        .args(["reduce", "--p", "2", "--k", "4", "--h", "1 + 1*x^2 + 1*x^-1"])
        .assert()
        .success()
        .stdout("h1 = a + 1, h2 = a\n");
}

#[test]
fn pretty_prints_basis_form() {
    // encoding 3 is z; sums of basis terms are parenthesized
    xrh()
        .args(["reduce", "--p", "3", "--k", "2", "--h", "3*x^1 + 1*x^-1", "--pretty"])
        .assert()
        .success()
        .stdout("h1 = (z + 2), h2 = a\n");
}

#[test]
fn table_one_matches_golden() {
    let want = std::fs::read_to_string(data("table_p2.csv")).unwrap();
    xrh()
        .args(["reproduce-tables", "--p", "2", "--kmin", "3", "--kmax", "12", "--golden", &data("table_p2.csv")])
        .assert()
        .success()
        .stdout(want);
}

#[test]
fn odd_tables_match_golden() {
    for (p, kmax) in [(3, 5), (5, 5), (7, 4)] {
        let path = data(&format!("table_p{p}.csv"));
        let want = std::fs::read_to_string(&path).unwrap();
        xrh()
            .args([
                "reproduce-tables",
                "--p",
                &p.to_string(),
                "--kmin",
                "2",
                "--kmax",
                &kmax.to_string(),
                "--golden",
                &path,
            ])
            .assert()
            .success()
            .stdout(want);
    }
}

#[test]
fn golden_difference_exits_one() {
    xrh()
        .args(["reproduce-tables", "--p", "2", "--kmin", "3", "--kmax", "4", "--golden", &data("table_p2.csv")])
        .assert()
        .code(1);
}

#[test]
fn output_independent_of_jobs() {
    let run = |jobs: &str| {
        xrh()
            .args([
                "verify-families",
                "--family",
                "lin_bin_i",
                "--p",
                "2",
                "--kmin",
                "2",
                "--kmax",
                "5",
                "--budget",
                "4096",
            ])
            .args(["--jobs", jobs])
            .assert()
            .success()
            .get_output()
            .stdout
            .clone()
    };
    let one = run("1");
    assert!(!one.is_empty());
    assert_eq!(one, run("3"));
}

#[test]
fn family_prediction_mismatch_exits_one() {
    xrh().args(["family", "--p", "2", "--k", "4", "--family", "PP_s_minus_2", "--oracle"]).assert().success();
    // the stated condition for this case misses q ≡ 1 (mod 4) with 2k | m
    let out = xrh()
        .args(["family", "--p", "3", "--k", "2", "--family", "odd_case_II", "--m", "4", "--oracle"])
        .assert()
        .code(1)
        .get_output()
        .stdout
        .clone();
    let rec = &json_lines(&out)[0];
    assert_eq!(rec["predicted"], false);
    assert_eq!(rec["exact"], true);
    assert_eq!(rec["oracle"], true);
}

#[test]
fn verify_known_runs_clean() {
    let out = xrh().args(["verify-known", "--kmin", "3", "--kmax", "6"]).assert().success().get_output().stdout.clone();
    let recs = json_lines(&out);
    assert_eq!(recs.len(), 4 * 9);
    assert!(recs.iter().all(|r| r["mismatch"].is_null()));
}

#[test]
fn construct_reports_f() {
    let out = xrh()
        .args(["construct", "--p", "2", "--k", "4", "--h1", "a^2", "--h2", "1", "--oracle"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let rec = &json_lines(&out)[0];
    assert_eq!(rec["h"], "1*x^3 + 1 + 1*x^-1");
    assert_eq!(rec["oracle"], true);
}

#[test]
fn usage_errors_exit_two() {
    xrh().args(["verify", "--p", "2", "--k", "3"]).assert().code(2);
    let err = xrh().args(["verify", "--p", "2", "--h", "1*x^1"]).assert().code(2).get_output().stderr.clone();
    assert!(String::from_utf8(err).unwrap().contains("--k"));
    xrh().args(["verify", "--p", "4", "--k", "1", "--h", "1*x^1"]).assert().code(2);
    xrh().args(["family", "--p", "2", "--k", "3", "--family", "nope"]).assert().code(2);
    xrh().args(["verify", "--p", "2", "--k", "3", "--h", "1*x^1", "--jobs", "0"]).assert().code(2);
}

#[test]
fn modulus_override() {
    let dir = std::env::temp_dir().join(format!("xrh-mod-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.txt");
    std::fs::write(&good, "mid: 1 0 1 1\n").unwrap();
    let out = xrh()
        .args(["verify", "--p", "2", "--k", "3", "--h", "1*x^2 + 1*x^1 + 1*x^-1", "--oracle", "--modulus"])
        .arg(&good)
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    assert_eq!(json_lines(&out)[0]["mid_modulus"], 13);
    let bad = dir.join("bad.txt");
    std::fs::write(&bad, "mid: 1 1 1 1\n").unwrap();
    xrh().args(["verify", "--p", "2", "--k", "3", "--h", "1*x^1", "--modulus"]).arg(&bad).assert().code(2);
}
