use std::process::Command;

use zswc_cli::{CheckOutput, ConstantOutput, SetsOutput, TableRow};
use zswc_core::theory::ReportRecord;

fn zswc(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_zswc"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn sets_examples() {
    let (code, out, _) = zswc(&["sets", "--n", "9", "--family", "nonzero-squares"]);
    assert_eq!(code, 0);
    assert_eq!(out, "{1, 4, 7}\nsize 3 = 3\n");
    let (code, out, _) = zswc(&[
        "sets",
        "--n",
        "16",
        "--family",
        "unit-squares",
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    let parsed: SetsOutput = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(
        (parsed.members, parsed.enumerated, parsed.closed_form),
        (vec![1, 9], 2, 2)
    );
    let (code, out, _) = zswc(&["sets", "--n", "2"]);
    assert_eq!((code, out.as_str()), (0, "{1}\nsize 1 = 1\n"));
}

#[test]
fn check_examples() {
    let (code, out, _) = zswc(&[
        "check",
        "--n",
        "9",
        "--seq",
        "1,1,3,3",
        "--mode",
        "subsequence",
    ]);
    assert_eq!((code, out.as_str()), (0, "false\n"));
    let (code, out, _) = zswc(&[
        "check",
        "--n",
        "9",
        "--seq",
        "3,3,1,3,3,1,3,3",
        "--mode",
        "consecutive",
    ]);
    assert_eq!((code, out.as_str()), (0, "false\n"));
    let (code, out, _) = zswc(&[
        "check",
        "--n",
        "9",
        "--seq",
        "1,8",
        "--mode",
        "subsequence",
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    let parsed: CheckOutput = serde_json::from_str(out.trim()).unwrap();
    assert!(parsed.zero_sum);
    let w = parsed.witness.unwrap();
    assert_eq!((w.indices, w.coefficients), (vec![1, 2], vec![1, 1]));
}

#[test]
fn constant_examples() {
    let (code, out, _) = zswc(&["constant", "--n", "9", "--mode", "davenport"]);
    assert_eq!(code, 0);
    let parsed: ConstantOutput = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(parsed.value, Some(5));
    assert_eq!(parsed.extremal.unwrap().len(), 4);

    let (_, out, _) = zswc(&["constant", "--n", "4", "--mode", "consecutive"]);
    assert_eq!(
        serde_json::from_str::<ConstantOutput>(out.trim())
            .unwrap()
            .value,
        Some(4)
    );
    let (_, out, _) = zswc(&[
        "constant",
        "--n",
        "18",
        "--mode",
        "consecutive",
        "--threads",
        "1",
    ]);
    assert_eq!(
        serde_json::from_str::<ConstantOutput>(out.trim())
            .unwrap()
            .value,
        Some(2)
    );
}

#[test]
fn constant_undetermined_exits_3() {
    let (code, out, _) = zswc(&[
        "constant",
        "--n",
        "9",
        "--mode",
        "consecutive",
        "--cap",
        "4",
    ]);
    assert_eq!(code, 3);
    let parsed: ConstantOutput = serde_json::from_str(out.trim()).unwrap();
    assert_eq!((parsed.value, parsed.at_least), (None, Some(5)));

    let out = Command::new(env!("CARGO_BIN_EXE_zswc"))
        .args([
            "constant",
            "--n",
            "9",
            "--mode",
            "consecutive",
            "--threads",
            "1",
        ])
        .env("ZSWC_NODE_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let parsed: ConstantOutput = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(parsed.reason.as_deref(), Some("budget-exhausted"));
}

#[test]
fn verify_writes_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("reports.jsonl");
    let (code, out, _) = zswc(&[
        "verify",
        "--from",
        "2",
        "--to",
        "20",
        "--effort",
        "full",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "19/19 verified, 0 skipped, 0 failed");
    let text = std::fs::read_to_string(&path).unwrap();
    let records: Vec<ReportRecord> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(records.len(), 19);
    for r in &records {
        assert_eq!(r.d_search, Some(r.d_pred));
        let c = r.c_search.unwrap();
        assert!(r.c_pred[0] <= c && c <= r.c_pred[1]);
        // Re-serializing gives the same line.
        assert!(text.contains(&serde_json::to_string(r).unwrap()));
    }
}

#[test]
fn verify_fast_examples() {
    let (code, out, err) = zswc(&["verify", "--n", "2401", "--effort", "fast"]);
    assert_eq!(code, 0);
    assert_eq!(err.trim(), "1/1 verified, 0 skipped, 0 failed");
    let r: ReportRecord = serde_json::from_str(out.trim()).unwrap();
    assert_eq!((r.d_pred, r.c_pred, r.d_search), (5, [5, 5], None));
    assert!(r.constructions.iter().all(|c| c.pass));

    let (code, out, _) = zswc(&["verify", "--n", "81", "--effort", "fast"]);
    assert_eq!(code, 0);
    let r: ReportRecord = serde_json::from_str(out.trim()).unwrap();
    assert_eq!((r.d_pred, r.c_pred), (5, [5, 9]));
    assert!(r.lemmas.iter().all(|l| l.pass));
}

#[test]
fn verify_reports_skipped_searches() {
    let (code, _, err) = zswc(&[
        "verify", "--n", "25", "--effort", "full", "--budget", "100000",
    ]);
    assert_eq!(code, 0);
    assert_eq!(err.trim(), "0/1 verified, 1 skipped, 0 failed");
}

#[test]
fn table_examples() {
    let (code, out, _) = zswc(&["table", "--from", "2", "--to", "4"]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "n,case,d,c_lo,c_hi\n2,V2Odd,2,2,2\n3,NonSquareV2Even,3,3,3\n4,EvenSquare,4,4,4\n"
    );
    let (_, out, _) = zswc(&["table", "--from", "225", "--to", "225"]);
    assert!(out.ends_with("225,OddSquareSquarefreeRadicalSquared,5,9,9\n"));
    let (_, out, _) = zswc(&["table", "--n", "625", "--format", "json"]);
    let rows: Vec<TableRow> = serde_json::from_str(out.trim()).unwrap();
    assert_eq!((rows[0].d, rows[0].c_lo, rows[0].c_hi), (5, 5, 7));
}

#[test]
fn usage_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &[],
        &["frobnicate"],
        &["table", "--from", "5", "--to", "3"],
        &["table", "--from", "1", "--to", "3"],
        &["check", "--n", "9", "--seq", "1,x"],
        &["check", "--n", "9", "--seq", "1,9"],
        &["check", "--n", "1", "--seq", "0"],
        &["check", "--n", "9", "--seq", "1", "--weights", ""],
        &["sets", "--n", "9", "--family", "q-p"],
        &["constant", "--n", "9", "--cap", "10"],
        &["verify", "--from", "3"],
    ];
    for args in cases {
        let (code, _, err) = zswc(args);
        assert_eq!(code, 2, "{args:?}: {err}");
        assert!(!err.is_empty());
    }
    let (code, out, _) = zswc(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify"));
}
