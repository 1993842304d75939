use proptest::prelude::*;
use serde_json::json;
use toeplitz_lab::checks::CheckOutcome;
use toeplitz_lab::cli::{run, Report, SCHEMA};

fn cli(args: &str) -> toeplitz_lab::cli::Outcome {
    run(std::iter::once("toeplitz-lab").chain(args.split_whitespace()))
}

#[test]
fn eval_reads_the_fourth_line() {
    let out = cli("eval ex5.7 10 --depth 3");
    assert_eq!((out.code, out.stdout.as_str()), (0, "b\n"));
    assert_eq!(cli("eval ex5.7 5 --depth 1").stdout, "?\n");
}

#[test]
fn verify_passes_and_reports_ids() {
    let out = cli("verify ex4.3-boundary-singleton --format json");
    assert_eq!(out.code, 0, "{}", out.stderr);
    let r = Report::from_json(&out.stdout).unwrap();
    assert_eq!(r.schema, SCHEMA);
    assert_eq!(r.checks.len(), 1);
    assert!(r.checks[0].passed);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(cli("frobnicate").code, 2);
    assert_eq!(cli("verify no-such-check").code, 2);
    assert_eq!(cli("eval ex5.7 ten").code, 2);
    assert_eq!(cli("eval nowhere/schedule.txt 1").code, 2);
    assert_eq!(cli("analyze ex5.7 --format yaml").code, 2);
    assert_eq!(cli("--help").code, 0);
}

#[test]
fn analyze_single_hole_family() {
    let out = cli("analyze ex4.4 --depth 1 --format json");
    assert_eq!(out.code, 0, "{}", out.stderr);
    let r = Report::from_json(&out.stdout).unwrap();
    assert_eq!(r.data["levels"][0]["density"], "63/64");
    assert!(r.data["verdicts"]["fb"]["CertifiedStructurally"].is_string());
    let out = cli("analyze ex4.4 --param tail=mini --depth 3 --format json");
    let r = Report::from_json(&out.stdout).unwrap();
    assert_eq!(r.data["levels"][2]["density"], "32767/32768");
    assert_eq!(r.data["period_structure"], true);
}

#[test]
fn text_outputs() {
    let out = cli("build sec2.2 --depth 2");
    assert!(out.stdout.contains("(aaaba?aba?bbabbb)"), "{}", out.stdout);
    let out = cli("complexity ex4.4-mini --lengths 1,2,8 --mode decomposition");
    assert_eq!(out.stdout, "length,count,exactness\n1,2,exact\n2,4,exact\n8,16,exact\n");
    let out = cli("boundary ex4.3 --depth 4 --max-nodes 3");
    assert!(out.stdout.starts_with("[1 mod 4] {ab+?}\n"), "{}", out.stdout);
    assert!(out.stdout.contains("least branch: Some([1, 5, 21, 85])"));
    let out = cli("gallery");
    assert_eq!(out.stdout.lines().count(), 7);
}

#[test]
fn factor_code_round_trip_through_a_file() {
    let dir = std::env::temp_dir().join(format!("toeplitz-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.code");
    let out = cli(&format!("factor ex5.7 --run-code 1 --depth 3 --emit {} --format json", path.display()));
    assert_eq!(out.code, 0, "{}", out.stderr);
    let a = Report::from_json(&out.stdout).unwrap();
    assert_eq!(a.data["aperiodic"], json!([["1"], ["5"], ["21"]]));
    let out = cli(&format!("factor ex5.7 --code {} --depth 3 --format json", path.display()));
    let b = Report::from_json(&out.stdout).unwrap();
    assert_eq!(a.data["aperiodic"], b.data["aperiodic"]);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn reports_round_trip() {
    for args in [
        "eval ex5.7 10 --depth 3",
        "build ex4.3 --depth 3",
        "analyze ex5.7 --depth 3",
        "boundary ex3.5 --depth 3",
        "pair ex5.7 --alternating 2",
        "complexity ex5.7 --lengths 1,4 --window 0:256 --resolution 8",
        "gallery williams --depth 2",
        "verify sec2.2-composition ex4.3-level2",
    ] {
        let out = cli(&format!("{args} --format json"));
        assert_eq!(out.code, 0, "{args}: {}", out.stderr);
        let r = Report::from_json(&out.stdout).unwrap();
        assert_eq!(Report::from_json(&r.to_json()).unwrap(), r, "{args}");
    }
}

#[test]
fn commands_are_deterministic() {
    let a = cli("boundary ex5.7 --depth 3 --format json").stdout;
    assert_eq!(a, cli("boundary ex5.7 --depth 3 --format json").stdout);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn arbitrary_reports_round_trip(
        command in "[a-z]{1,8}",
        depth in 0usize..40,
        window in proptest::option::of((-1000i64..0, 0i64..1000)),
        checks in proptest::collection::vec(("[a-z0-9.-]{1,12}", 1u8..=10, any::<bool>(), ".{0,20}"), 0..4),
        values in proptest::collection::vec(any::<i64>(), 0..5),
    ) {
        let r = Report {
            schema: SCHEMA.to_string(),
            command,
            target: None,
            depth,
            window,
            resolution: Some(depth + 2),
            checks: checks.into_iter().map(|(id, criterion, passed, detail)| CheckOutcome { id, criterion, passed, detail, provenance: String::new() }).collect(),
            data: json!({ "values": values }),
        };
        prop_assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
    }
}
