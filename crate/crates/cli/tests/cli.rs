use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn mini(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/mini").join(name)
}

fn cqa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cqa")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Run the whole pipeline on the mini corpus into `work`.
fn run_all(work: &Path, extra: &[&str]) -> Output {
    let (corpus, raw, ann) = (mini("corpus.jsonl"), mini("raw_annotations.jsonl"), mini("annotations.jsonl"));
    let mut args = vec![
        "all",
        "--work",
        path(work),
        "--corpus",
        path(&corpus),
        "--raw-annotations",
        path(&raw),
        "--annotations",
        path(&ann),
    ];
    args.extend(extra);
    cqa(&args)
}

fn dataset_files(work: &Path) -> Vec<Vec<u8>> {
    ["train.jsonl", "dev.jsonl", "test.jsonl", "assigned.jsonl"]
        .iter()
        .map(|f| fs::read(work.join(f)).unwrap())
        .collect()
}

#[test]
fn help_and_version_exit_zero() {
    let out = cqa(&["--help"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("evaluate"));
    assert_eq!(code(&cqa(&["--version"])), 0);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&cqa(&[])), 1);
    assert_eq!(code(&cqa(&["frobnicate"])), 1);
    let dir = tempfile::tempdir().unwrap();
    let out = run_all(dir.path(), &["--yes-ratio", "1.5"]);
    assert_eq!(code(&out), 1, "{}", stderr(&out));
    let out = run_all(dir.path(), &["--split", "8:1"]);
    assert_eq!(code(&out), 1, "{}", stderr(&out));
    let config = dir.path().join("run.conf");
    fs::write(&config, "colour = red\n").unwrap();
    let out = run_all(dir.path(), &["--config", path(&config)]);
    assert_eq!(code(&out), 1, "{}", stderr(&out));
}

#[test]
fn missing_input_file_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = cqa(&["ingest", "--work", path(dir.path()), "--corpus", path(&dir.path().join("nope.jsonl"))]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    assert!(stderr(&out).contains("nope.jsonl"));
}

#[test]
fn invalid_annotation_line_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.jsonl");
    let mut text = fs::read_to_string(mini("annotations.jsonl")).unwrap();
    text.push_str("{\"id\": \"broken\"}\n");
    fs::write(&bad, text).unwrap();
    let (corpus, raw) = (mini("corpus.jsonl"), mini("raw_annotations.jsonl"));
    let out = cqa(&[
        "all",
        "--work",
        path(dir.path()),
        "--corpus",
        path(&corpus),
        "--raw-annotations",
        path(&raw),
        "--annotations",
        path(&bad),
    ]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
    assert!(stderr(&out).contains("bad.jsonl:45:"), "{}", stderr(&out));
}

#[test]
fn missing_annotations_are_listed() {
    let dir = tempfile::tempdir().unwrap();
    let partial = dir.path().join("partial.jsonl");
    let text = fs::read_to_string(mini("annotations.jsonl")).unwrap();
    let kept: Vec<&str> = text.lines().filter(|l| !l.contains("\"java-002\"") && !l.contains("\"java-040\"")).collect();
    fs::write(&partial, kept.join("\n")).unwrap();
    let (corpus, raw) = (mini("corpus.jsonl"), mini("raw_annotations.jsonl"));
    let out = cqa(&[
        "all",
        "--work",
        path(dir.path()),
        "--corpus",
        path(&corpus),
        "--raw-annotations",
        path(&raw),
        "--annotations",
        path(&partial),
    ]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
    let err = stderr(&out);
    assert!(err.contains("java-002") && err.contains("java-040"), "{err}");
}

#[test]
fn same_seed_gives_identical_files() {
    let (a, b, c) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert_eq!(code(&run_all(a.path(), &["--seed", "42"])), 0);
    assert_eq!(code(&run_all(b.path(), &["--seed", "42"])), 0);
    assert_eq!(dataset_files(a.path()), dataset_files(b.path()));
    assert_eq!(code(&run_all(c.path(), &["--seed", "7"])), 0);
    assert_ne!(dataset_files(a.path()), dataset_files(c.path()));
}

#[test]
fn stages_run_one_by_one_match_all() {
    let (whole, staged) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert_eq!(code(&run_all(whole.path(), &[])), 0);
    let (corpus, raw, ann) = (mini("corpus.jsonl"), mini("raw_annotations.jsonl"), mini("annotations.jsonl"));
    let work = path(staged.path());
    for args in [
        vec!["ingest", "--work", work, "--corpus", path(&corpus)],
        vec!["select", "--work", work, "--raw-annotations", path(&raw)],
        vec!["generate", "--work", work, "--annotations", path(&ann)],
        vec!["postprocess", "--work", work],
        vec!["split", "--work", work],
        vec!["stats", "--work", work, "--json"],
    ] {
        let out = cqa(&args);
        assert_eq!(code(&out), 0, "{args:?}: {}", stderr(&out));
    }
    assert_eq!(dataset_files(whole.path()), dataset_files(staged.path()));
    assert_eq!(fs::read(whole.path().join("stats.json")).unwrap(), fs::read(staged.path().join("stats.json")).unwrap());
}

#[test]
fn json_summary_conserves_counts() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_all(dir.path(), &["--json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
    for stage in summary["stages"].as_array().unwrap() {
        let dropped: u64 = stage["drops"].as_object().unwrap().values().map(|v| v.as_u64().unwrap()).sum();
        assert_eq!(stage["input"].as_u64().unwrap(), stage["output"].as_u64().unwrap() + dropped, "{stage}");
    }
}

#[test]
fn config_file_is_overridden_by_flags() {
    let (from_flag, from_config) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let config = from_config.path().join("run.conf");
    fs::write(&config, "# mini run\nseed = 1\nyes_ratio = 0.5\n").unwrap();
    assert_eq!(code(&run_all(from_flag.path(), &["--seed", "42"])), 0);
    assert_eq!(code(&run_all(from_config.path(), &["--config", path(&config), "--seed", "42"])), 0);
    assert_eq!(dataset_files(from_flag.path()), dataset_files(from_config.path()));

    let seeded = tempfile::tempdir().unwrap();
    let config = seeded.path().join("run.conf");
    fs::write(&config, "seed = 42\n").unwrap();
    assert_eq!(code(&run_all(seeded.path(), &["--config", path(&config)])), 0);
    assert_eq!(dataset_files(from_flag.path()), dataset_files(seeded.path()));
}

#[test]
fn group_by_code_keeps_codes_together() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run_all(dir.path(), &["--group-by-code"])), 0);
    let mut home = std::collections::BTreeMap::new();
    for split in ["train", "dev", "test"] {
        for line in fs::read_to_string(dir.path().join(format!("{split}.jsonl"))).unwrap().lines() {
            let v: Value = serde_json::from_str(line).unwrap();
            let code_id = v["code_id"].as_str().unwrap().to_string();
            assert_eq!(*home.entry(code_id).or_insert(split), split);
        }
    }
}

#[test]
fn evaluate_scores_gold_and_rejects_unknown_ids() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run_all(dir.path(), &[])), 0);
    let gold = dir.path().join("test.jsonl");
    let preds: Vec<String> = fs::read_to_string(&gold)
        .unwrap()
        .lines()
        .map(|l| {
            let v: Value = serde_json::from_str(l).unwrap();
            serde_json::json!({"id": v["id"], "prediction": v["answer"]}).to_string()
        })
        .collect();
    let pred = dir.path().join("pred.jsonl");
    fs::write(&pred, preds.join("\n")).unwrap();
    let out = cqa(&["evaluate", "--pred", path(&pred), "--gold", path(&gold), "--json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    for metric in ["bleu", "rouge_l", "em", "f1"] {
        assert_eq!(report["aggregate"][metric].as_f64().unwrap(), 100.0, "{metric}");
    }
    assert_eq!(report["missing"], 0);

    let table = cqa(&["evaluate", "--pred", path(&pred), "--gold", path(&gold), "--exclude-yes-no"]);
    assert_eq!(code(&table), 0);
    assert!(String::from_utf8_lossy(&table.stdout).contains("ROUGE-L"));

    fs::write(&pred, "{\"id\": \"nobody\", \"prediction\": \"x\"}\n").unwrap();
    let out = cqa(&["evaluate", "--pred", path(&pred), "--gold", path(&gold)]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("nobody"));
}

#[test]
fn categorize_reads_plain_questions() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("q.txt");
    fs::write(&input, "For what purpose does the code sort the list?\nWhat does it return?\nDoes it throw?\n").unwrap();
    let out = cqa(&["categorize", path(&input)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = String::from_utf8_lossy(&out.stdout);
    let types: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).map(|l| l.split('\t').next().unwrap()).collect();
    assert_eq!(types, ["For what purpose", "What", "Yes/No"]);

    let out = cqa(&["categorize", path(&input), "--json"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let total: f64 = v["distribution"].as_array().unwrap().iter().map(|d| d["percent"].as_f64().unwrap()).sum();
    assert!((total - 100.0).abs() < 0.01);
}
