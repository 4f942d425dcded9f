use std::path::Path;
use std::process::{Command, Output};

use paradecay::corpusio::{read_jsonl, read_manifest};
use paradecay::normalize::TweetRecord;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_paradecay"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().unwrap()
}

fn stderr_json(out: &Output) -> serde_json::Value {
    let text = String::from_utf8_lossy(&out.stderr);
    let line = text.lines().last().unwrap_or_default();
    serde_json::from_str(line).unwrap_or_else(|_| panic!("stderr is not JSON: {text}"))
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["normalize", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["select-para-n", "--in", "a", "--n", "0", "--out", "b"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn data_errors_exit_1_with_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["normalize", "--in", "missing.jsonl", "--out", "o.jsonl"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "io_error");

    std::fs::write(dir.path().join("bad.jsonl"), "{\"id\":\"1\",\"text\":\"x\",\"label\":\"nope\"}\n").unwrap();
    let out = run(dir.path(), &["normalize", "--in", "bad.jsonl", "--out", "o.jsonl", "--dataset", "sarc_bam"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "unknown_label");
    assert!(!dir.path().join("o.jsonl").exists());
}

#[test]
fn normalize_tsv_with_dataset_seeds() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("in.tsv"),
        "id\ttweet\tclass\n\
         1\t@amy so fun https://t.co/x #Sarcasm\tsarcastic\n\
         2\t#sarcasm\tsarcastic\n\
         3\tnice day #sarcastic #blessed\tnon-sarcastic\n",
    )
    .unwrap();
    let out = run(
        dir.path(),
        &[
            "normalize", "--in", "in.tsv", "--format", "tsv-header", "--columns",
            "id=id,text=tweet,label=class", "--dataset", "sarc_bam", "--out", "n.jsonl",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let recs: Vec<TweetRecord> = read_jsonl(&dir.path().join("n.jsonl")).unwrap();
    let texts: Vec<&str> = recs.iter().map(|r| r.text.as_str()).collect();
    assert_eq!(texts, ["USER so fun URL", "nice day #blessed"]);
    let m = read_manifest(&dir.path().join("n.jsonl.manifest.json")).unwrap();
    assert_eq!(m.artifacts["normalized"].lines, 2);
    assert_eq!(m.notes["dropped_empty"], serde_json::json!(["2"]));
    m.verify_artifacts(dir.path()).unwrap();
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("cfg.json"),
        r#"{"normalization": {"user_token": "@USER", "url_token": "HTTPURL"}}"#,
    )
    .unwrap();
    std::fs::write(dir.path().join("in.jsonl"), "{\"id\":\"1\",\"text\":\"@a see www.x.com\",\"label\":\"l\"}\n").unwrap();
    // "@USER" is rejected: it would itself look like a mention.
    let out = run(dir.path(), &["--config", "cfg.json", "normalize", "--in", "in.jsonl", "--out", "o.jsonl"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(
        dir.path(),
        &["--config", "cfg.json", "normalize", "--in", "in.jsonl", "--out", "o.jsonl", "--user-token", "USR"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let recs: Vec<TweetRecord> = read_jsonl(&dir.path().join("o.jsonl")).unwrap();
    assert_eq!(recs[0].text, "USR see HTTPURL");
}

#[test]
fn dry_run_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let lines: String = (0..10)
        .map(|i| format!("{{\"id\":\"{i}\",\"text\":\"t {i}\",\"label\":\"joy\"}}\n"))
        .collect();
    std::fs::write(dir.path().join("in.jsonl"), lines).unwrap();
    let out = run(dir.path(), &["--dry-run", "split", "--in", "in.jsonl", "--out-dir", "sp"]);
    assert!(out.status.success());
    let plan: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(plan["dry_run"], true);
    assert_eq!(plan["planned"]["train"], 8);
    assert_eq!(plan["planned"]["dev"], 1);
    assert_eq!(plan["planned"]["test"], 1);
    assert!(!dir.path().join("sp").exists());
}

#[test]
fn build_corpus_applies_label_rules() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, labels: &[u8]| {
        let body: String = labels
            .iter()
            .enumerate()
            .map(|(i, l)| {
                format!("{{\"sentence_a\":\"{name} a {i}\",\"sentence_b\":\"{name} b {i}\",\"similarity_label\":{l}}}\n")
            })
            .collect();
        std::fs::write(dir.path().join(format!("{name}.jsonl")), body).unwrap();
    };
    write("pit", &[0, 1, 2, 3, 4, 5, 5]);
    write("ln", &[0, 3, 4, 5, 6, 6]);
    write("op", &[1, 2, 3, 4, 4, 4]);
    write("qqp", &[0, 1, 1, 0]);
    let out = run(
        dir.path(),
        &[
            "build-corpus", "--sources",
            "PIT2015=pit.jsonl,LanguageNet=ln.jsonl,Opusparcus=op.jsonl,QQP=qqp.jsonl",
            "--out-dir", "corpus",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let m = read_manifest(&dir.path().join("corpus/manifest.json")).unwrap();
    assert_eq!(
        m.notes["filtered_pairs_per_source"],
        serde_json::json!({"PIT2015": 3, "LanguageNet": 4, "Opusparcus": 3, "QQP": 2})
    );
    assert_eq!(m.notes["merged_total"], 12);
    let total: usize = m.artifacts.values().map(|a| a.lines).sum();
    assert_eq!(total, 12);
    m.verify_artifacts(&dir.path().join("corpus")).unwrap();

    std::fs::write(dir.path().join("bad.jsonl"), "{\"sentence_a\":\"a\",\"sentence_b\":\"b\",\"similarity_label\":0}\n").unwrap();
    let out = run(dir.path(), &["build-corpus", "--sources", "Opusparcus=bad.jsonl", "--out-dir", "c2"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "label_out_of_range");
}

#[test]
fn audit_decay_reports_json() {
    let dir = tempfile::tempdir().unwrap();
    let ids = |n: usize| (0..n).map(|i| format!("{i}\n")).collect::<String>();
    std::fs::write(dir.path().join("orig.txt"), ids(100)).unwrap();
    std::fs::write(dir.path().join("got.txt"), ids(64)).unwrap();
    let out = run(
        dir.path(),
        &["audit-decay", "--orig", "orig.txt", "--retrieved", "got.txt", "--dataset", "waseem"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["reports"][0]["dataset"], "waseem");
    assert!((doc["reports"][0]["decay_rate"].as_f64().unwrap() - 0.36).abs() < 1e-12);
}

#[test]
fn metrics_table_and_strip_emoji() {
    let dir = tempfile::tempdir().unwrap();
    let preds = |pairs: &[(&str, &str)]| -> String {
        pairs
            .iter()
            .enumerate()
            .map(|(i, (g, p))| format!("{{\"id\":{i},\"gold\":\"{g}\",\"predicted\":\"{p}\"}}\n"))
            .collect()
    };
    std::fs::write(dir.path().join("r1.jsonl"), preds(&[("hateful", "hateful"), ("none", "none")])).unwrap();
    std::fs::write(dir.path().join("r2.jsonl"), preds(&[("hateful", "none"), ("none", "none")])).unwrap();
    let out = run(
        dir.path(),
        &["metrics", "--pred", "hate_bas=r1.jsonl", "--pred", "hate_bas=r2.jsonl", "--out", "scores.json"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("scores.json")).unwrap()).unwrap();
    // Run 1 scores 1.0, run 2 scores (0 + 2/3) / 2.
    let want = (1.0 + 1.0 / 3.0) / 2.0;
    assert!((doc["global_average"].as_f64().unwrap() - want).abs() < 1e-12);
    let table = String::from_utf8_lossy(&out.stdout);
    assert!(table.contains("Average"), "{table}");
    assert!(table.contains("66.67"), "{table}");

    std::fs::write(
        dir.path().join("e.jsonl"),
        "{\"id\":\"1\",\"text\":\"so happy 😂😂 👍🏽\",\"label\":\"joy\"}\n{\"id\":\"2\",\"text\":\"🎉\",\"label\":\"joy\"}\n{\"id\":\"3\",\"text\":\"plain\",\"label\":\"sadness\"}\n",
    )
    .unwrap();
    let out = run(dir.path(), &["strip-emoji", "--in", "e.jsonl", "--out", "s.jsonl"]);
    assert!(out.status.success());
    let m = read_manifest(&dir.path().join("s.jsonl.manifest.json")).unwrap();
    assert_eq!(m.notes["records_with_emoji"], 2);
    assert_eq!(m.notes["emoji_total"], 4);
    let recs: Vec<TweetRecord> = read_jsonl(&dir.path().join("s.jsonl")).unwrap();
    assert_eq!(recs.iter().map(|r| r.text.as_str()).collect::<Vec<_>>(), ["so happy", "plain"]);
}

#[test]
fn export_train_config_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["export-train-config", "--out", "train.json"]);
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("train.json")).unwrap()).unwrap();
    assert_eq!(v["paraphraser"]["epochs"], 20);
    assert_eq!(v["classifier"]["schedule"], "linear-peak");
}
