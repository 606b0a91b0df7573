//! Fixtures shared by the benchmarks.

use std::path::Path;

use cqa_core::{parse_annotation, AnnotatedComment, QAPair, QType, Split};

/// Gold annotations of the bundled mini corpus.
pub fn mini_annotations() -> Vec<AnnotatedComment> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/mini/annotations.jsonl");
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    text.lines().map(|l| parse_annotation(l).expect("bundled annotation is valid")).collect()
}

/// Prediction/gold answer pairs of mixed overlap.
pub fn answer_pairs(n: usize) -> Vec<(String, String)> {
    const WORDS: &[&str] = &["the", "given", "child", "in", "asc", "order", "buffer", "size", "of", "returns", "new", "list"];
    (0..n)
        .map(|i| {
            let pick = |k: usize, len: usize| -> String {
                (0..len).map(|j| WORDS[(i * 7 + j * k) % WORDS.len()]).collect::<Vec<_>>().join(" ")
            };
            (pick(3, 2 + i % 6), pick(5, 2 + i % 9))
        })
        .collect()
}

pub fn synthetic_pairs(n: usize) -> Vec<QAPair> {
    (0..n)
        .map(|i| QAPair {
            id: format!("p{i}"),
            code_id: format!("c{}", i / 4),
            question: "What does the code return?".into(),
            answer: if i % 5 == 0 { "Yes".into() } else { format!("value {i}") },
            qtype: QType::What,
            source: if i % 5 == 0 { "yesno".into() } else { "dp:dobj".into() },
            split: Split::Unassigned,
            answer_start: 0,
        })
        .collect()
}
