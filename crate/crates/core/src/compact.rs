//! A compact text notation for hand-written annotations.
//!
//! ```text
//! id: trims
//! tokens: The/the/DT/1/det code/code/NN/2/nsubj trims/trim/VBZ/-1/root ...
//! srl 2: ARG0 0-1; V 2; ARG1 3-9
//! ner 5: PERSON
//! ```
//!
//! Each token is `form/lemma/pos/head/deprel` with 0-based heads and `-1` for
//! the root. `srl <predicate>:` lists inclusive spans per label; `ner <i>[-<j>]:`
//! tags tokens with an entity type. Blocks are separated by blank lines and `#`
//! starts a comment line.

use crate::annotation::{AnnotatedComment, AnnotationRecord, FrameRecord};
use crate::error::ValidationError;

fn parse_range(text: &str) -> Result<(usize, usize), ValidationError> {
    let bad = || ValidationError::new("compact", format!("bad range {text:?}"));
    let (a, b) = match text.split_once('-') {
        Some((a, b)) => (a, b),
        None => (text, text),
    };
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if b < a {
        return Err(bad());
    }
    Ok((a, b))
}

/// Parse one block into the wire record.
pub fn parse_compact_record(block: &str) -> Result<AnnotationRecord, ValidationError> {
    let mut rec = AnnotationRecord {
        id: String::new(),
        tokens: vec![],
        lemmas: vec![],
        pos: vec![],
        heads: vec![],
        deprels: vec![],
        srl: vec![],
        ner: vec![],
    };
    let mut frames: Vec<(usize, Vec<(String, usize, usize)>)> = Vec::new();
    let mut entities: Vec<(usize, usize, String)> = Vec::new();
    for line in block.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| ValidationError::new("compact", format!("missing ':' in {line:?}")))?;
        let value = value.trim();
        if key == "id" {
            rec.id = value.to_string();
        } else if key == "tokens" {
            for (i, item) in value.split_whitespace().enumerate() {
                let parts: Vec<&str> = item.rsplitn(5, '/').collect();
                if parts.len() != 5 {
                    return Err(ValidationError::new(
                        format!("tokens[{i}]"),
                        format!("expected form/lemma/pos/head/deprel, got {item:?}"),
                    ));
                }
                let head: i64 = parts[1].parse().map_err(|_| {
                    ValidationError::new(format!("tokens[{i}]"), format!("bad head {:?}", parts[1]))
                })?;
                rec.tokens.push(parts[4].to_string());
                rec.lemmas.push(parts[3].to_string());
                rec.pos.push(parts[2].to_string());
                rec.heads.push(head);
                rec.deprels.push(parts[0].to_string());
            }
        } else if let Some(pred) = key.strip_prefix("srl ") {
            let pred: usize = pred.trim().parse().map_err(|_| {
                ValidationError::new("compact", format!("bad predicate index in {key:?}"))
            })?;
            let mut spans = Vec::new();
            for part in value.split(';').map(str::trim).filter(|p| !p.is_empty()) {
                let (label, range) = part.split_once(' ').ok_or_else(|| {
                    ValidationError::new("compact", format!("bad srl argument {part:?}"))
                })?;
                let (a, b) = parse_range(range)?;
                spans.push((label.to_string(), a, b));
            }
            frames.push((pred, spans));
        } else if let Some(range) = key.strip_prefix("ner ") {
            let (a, b) = parse_range(range)?;
            entities.push((a, b, value.to_string()));
        } else {
            return Err(ValidationError::new("compact", format!("unknown key {key:?}")));
        }
    }
    let n = rec.tokens.len();
    rec.ner = vec!["O".to_string(); n];
    for (a, b, label) in entities {
        for i in a..=b.min(n.saturating_sub(1)) {
            rec.ner[i] = if i == a { format!("B-{label}") } else { format!("I-{label}") };
        }
    }
    for (pred, spans) in frames {
        let mut tags = vec!["O".to_string(); n];
        for (label, a, b) in spans {
            if b >= n {
                return Err(ValidationError::new("compact", format!("span {a}-{b} out of range")));
            }
            for (k, tag) in tags.iter_mut().enumerate().take(b + 1).skip(a) {
                *tag = if k == a { format!("B-{label}") } else { format!("I-{label}") };
            }
        }
        rec.srl.push(FrameRecord { predicate: pred as i64, tags });
    }
    Ok(rec)
}

/// Parse and validate one block.
pub fn parse_compact(block: &str) -> Result<AnnotatedComment, ValidationError> {
    AnnotatedComment::try_from(parse_compact_record(block)?)
}

/// Split a document into blocks at blank lines.
pub fn compact_blocks(text: &str) -> Vec<String> {
    let mut blocks = Vec::new();
    let mut current = String::new();
    for line in text.lines() {
        if line.trim().is_empty() {
            if current.lines().any(|l| !l.trim().is_empty() && !l.trim().starts_with('#')) {
                blocks.push(std::mem::take(&mut current));
            }
            current.clear();
        } else {
            current.push_str(line);
            current.push('\n');
        }
    }
    if current.lines().any(|l| !l.trim().is_empty() && !l.trim().starts_with('#')) {
        blocks.push(current);
    }
    blocks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_block() {
        let a = parse_compact(
            "id: x\n\
             tokens: The/the/DT/1/det code/code/NN/2/nsubj runs/run/VBZ/-1/root ./././2/punct\n\
             srl 2: ARG0 0-1; V 2\n\
             ner 1: PERSON",
        );
        let a = a.unwrap_or_else(|e| panic!("{e}"));
        assert_eq!(a.id, "x");
        assert_eq!(a.tokens, ["The", "code", "runs", "."]);
        assert_eq!(a.nodes[2].xpos.as_deref(), Some("VBZ"));
        assert_eq!(a.nodes[3].head, Some(2));
        assert_eq!(a.frames[0].arguments().first("ARG0").unwrap().end, 1);
        assert_eq!(a.ner[1], "B-PERSON");
    }

    #[test]
    fn rejects_malformed_tokens() {
        assert!(parse_compact("id: x\ntokens: a/b/NN").is_err());
        assert!(parse_compact("id: x\ntokens: a/a/NN/-1/root\nsrl 0: V 0-3").is_err());
    }

    #[test]
    fn splits_blocks() {
        let doc = "# header\n\nid: a\ntokens: x/x/NN/-1/root\n\n\nid: b\ntokens: y/y/NN/-1/root\n";
        assert_eq!(compact_blocks(doc).len(), 2);
    }
}
