use paradecay_web::{explore_json, normalize_json, similarity};
use serde_json::Value;

#[test]
fn normalize_masks_and_counts() {
    let out: Value = serde_json::from_str(
        &normalize_json("@bob see https://t.co/q #Sarcasm 😂", "#sarcasm", true, "USER", "URL").unwrap(),
    )
    .unwrap();
    assert_eq!(out["text"], "USER see URL");
    assert_eq!(out["emoji_in_input"], 1);
}

#[test]
fn normalize_rejects_bad_tokens() {
    assert!(normalize_json("x", "", false, "@u", "URL").is_err());
    assert!(normalize_json("x", "", false, "USER", "").is_err());
}

#[test]
fn similarity_matches_core() {
    assert_eq!(similarity("a b c d", "a b c d"), 1.0);
    assert_eq!(similarity("a b c", "x y z"), 0.0);
    assert!((similarity("a b c d", "a b c e") - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn explorer_reports_each_candidate() {
    let out: Value = serde_json::from_str(
        &explore_json(
            "i love waiting in line for hours",
            "i love waiting in line for hours\nwaiting in line for hours is great\nwaiting in line for hours is great fun\nbananas\n",
            0.95,
            0.5,
        )
        .unwrap(),
    )
    .unwrap();
    let reasons: Vec<&str> = out["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["reason"].as_str().unwrap())
        .collect();
    assert_eq!(reasons, ["copy", "none", "near_duplicate", "zero_overlap"]);
    assert_eq!(out["kept"], 1);

    // Raising the dedup threshold lets the near duplicate through.
    let loose: Value = serde_json::from_str(
        &explore_json(
            "i love waiting in line for hours",
            "waiting in line for hours is great\nwaiting in line for hours is great fun",
            0.95,
            0.9,
        )
        .unwrap(),
    )
    .unwrap();
    assert_eq!(loose["kept"], 2);
    assert!(explore_json("a", "b", 0.4, 0.5).is_err());
}
