//! End-to-end tests of the `equivote` binary: golden outputs, CSV shape,
//! and exit codes.

use std::io::Write;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_equivote"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_profile(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

const PLUS: &str = "\
1 x 1>3>2>4>5
1 x 2>3>1>4>5
2 x 3>4>1>2>5
2 x 3>4>2>1>5
2 x 4>3>1>2>5
2 x 4>3>2>1>5
";

const MINUS: &str = "\
2 x 1>3>2>4>5
2 x 2>3>1>4>5
2 x 3>1>2>5>4
2 x 3>2>1>5>4
1 x 4>1>2>5>3
1 x 4>2>1>5>3
";

#[test]
fn resolve_veto_with_mfp_on_reference_profile() {
    let f = write_profile(PLUS);
    let out = run(&[
        "resolve",
        "--profile",
        f.path().to_str().unwrap(),
        "--rule",
        "veto",
        "--tiebreak",
        "mfp",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "3\n");
}

#[test]
fn explain_shows_backup_on_deadlocked_profile() {
    let f = write_profile(MINUS);
    let out = run(&[
        "resolve",
        "--profile",
        f.path().to_str().unwrap(),
        "--rule",
        "veto",
        "--tiebreak",
        "mfp",
        "--explain",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("backup fired: true"), "{text}");
    assert!(text.contains("fixed decisions: \n"), "{text}");
    assert!(text.contains("stabilizer: () (1,2)"), "{text}");
}

#[test]
fn strict_mode_rejects_problematic_profiles() {
    let f = write_profile(MINUS);
    let out = run(&[
        "resolve",
        "--profile",
        f.path().to_str().unwrap(),
        "--rule",
        "veto",
        "--strict",
    ]);
    assert_eq!(out.status.code(), Some(3));

    let f = write_profile(PLUS);
    let out = run(&[
        "resolve",
        "--profile",
        f.path().to_str().unwrap(),
        "--rule",
        "veto",
        "--strict",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn single_vote_resolves_trivially() {
    let f = write_profile("1>2>3\n");
    let out = run(&[
        "resolve",
        "--profile",
        f.path().to_str().unwrap(),
        "--rule",
        "plurality",
        "--tiebreak",
        "lex",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1\n");
}

#[test]
fn parse_errors_exit_two() {
    let f = write_profile("1>2>3\n");
    let out = run(&[
        "resolve",
        "--profile",
        f.path().to_str().unwrap(),
        "--rule",
        "no-such-rule",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["check", "--setting", "garbage", "--m", "3", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["resolve", "--profile", "/nonexistent", "--rule", "borda"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_reproduces_divisibility_pattern() {
    let out = run(&["check", "--setting", "L2>L2", "--m", "4", "--n-range", "1..12"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "m,n,setting,impossible,witness");
    for (i, line) in lines.enumerate() {
        let n = i as u64 + 1;
        let expect = n.is_multiple_of(2) || n.is_multiple_of(3);
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[1], n.to_string());
        assert_eq!(fields[3], expect.to_string(), "n={n}: {line}");
    }
}

#[test]
fn at_large_verdict_for_ranked_choice_ballot() {
    // 13 candidates, rankings of up to 5, single winner
    let out = run(&["check", "--setting", "L<=5>L1", "--m", "13", "--at-large"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "m,setting,at_large,threshold_n\n13,L<=5>L1,holds,85\n"
    );
}

#[test]
fn full_committee_setting_is_never_impossible() {
    let out = run(&["check", "--setting", "Cm>Cm", "--m", "3", "--n", "5"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("3,5,Cm>Cm,false,"));
}

#[test]
fn exact_estimate_matches_closed_form() {
    let out = run(&[
        "estimate", "--rule", "plurality", "--m", "2", "--n", "2", "--exact",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(
        text.contains("2,2,plurality,mfp,ic,0.5,0,true,-0.5,-0.5"),
        "{text}"
    );

    let out = run(&[
        "estimate", "--rule", "plurality", "--m", "3", "--n", "5", "--exact",
    ]);
    let text = stdout(&out);
    assert!(text.contains("3,5,plurality,mfp,ic,0,0,true,-inf,-inf"), "{text}");
}

#[test]
fn estimate_is_deterministic_given_seed() {
    let args = [
        "estimate", "--rule", "borda", "--m", "3", "--n", "4", "--trials", "2000", "--seed", "9",
    ];
    assert_eq!(stdout(&run(&args)), stdout(&run(&args)));
}

#[test]
fn coin_table_is_reproduced_exactly() {
    let out = run(&["table", "--name", "coins-m4-l2"]);
    assert!(out.status.success());
    let expected = "\
partition,circledast,oslash
(4),{4},{2}
\"(3,1)\",{3},{3}
\"(2,2)\",{2},\"{1,2}\"
\"(2,1,1)\",\"{1,2}\",\"{1,2}\"
\"(1,1,1,1)\",{1},{1}
";
    assert_eq!(stdout(&out), expected);
}

#[test]
fn alpha_table_is_reproduced_exactly() {
    let out = run(&["table", "--name", "alpha"]);
    assert!(out.status.success());
    let expected = "\
m,n,alpha_max,alpha_max_plus
3,5,-inf,-inf
3,8,-inf,3
5,12,20,60
6,12,360,360
";
    assert_eq!(stdout(&out), expected);
}

#[test]
fn verify_small_grid_passes() {
    let out = run(&["verify", "--grid", "small"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("0 disagreements"));
}

#[test]
fn budget_override_exits_four() {
    let out = Command::new(env!("CARGO_BIN_EXE_equivote"))
        .args(["estimate", "--rule", "plurality", "--m", "3", "--n", "8", "--exact"])
        .env("EQUIVOTE_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}
