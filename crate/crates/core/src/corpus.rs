//! Loading code-comment records and tokenizing raw source.

use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, ValidationError};

pub const NUM_PLACEHOLDER: &str = "_NUM";
pub const STRING_PLACEHOLDER: &str = "STRING";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    Java,
    Python,
}

impl Language {
    pub fn as_str(&self) -> &'static str {
        match self {
            Language::Java => "java",
            Language::Python => "python",
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Language {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "java" => Ok(Language::Java),
            "python" => Ok(Language::Python),
            other => Err(format!("unsupported language {other:?} (expected java or python)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeCommentRecord {
    pub id: String,
    pub language: Language,
    pub code: String,
    pub code_tokens: Vec<String>,
    pub comment: String,
}

/// Wire shape of a corpus line. `code_tokens` is optional: pre-tokenized
/// corpora supply it and it is then taken verbatim.
#[derive(Debug, Deserialize)]
struct RawRecord {
    id: Option<String>,
    language: Option<String>,
    code: Option<String>,
    code_tokens: Option<Vec<String>>,
    comment: Option<String>,
}

/// A malformed corpus line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineError {
    pub line: usize,
    pub error: ValidationError,
}

impl fmt::Display for LineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.error)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LoadSummary {
    pub lines: usize,
    pub records: usize,
    pub errors: Vec<LineError>,
}

/// Parse one corpus line. `line_no` is 1-based and used to synthesize ids.
pub fn parse_record(
    line: &str,
    line_no: usize,
    language: Option<Language>,
) -> Result<CodeCommentRecord, ValidationError> {
    let raw: RawRecord = serde_json::from_str(line)
        .map_err(|e| ValidationError::new("$", format!("invalid json: {e}")))?;
    let lang = match (raw.language.as_deref(), language) {
        (Some(s), expected) => {
            let lang = s.parse::<Language>().map_err(|e| ValidationError::new("language", e))?;
            if let Some(expected) = expected.filter(|e| *e != lang) {
                return Err(ValidationError::new(
                    "language",
                    format!("record is {lang}, corpus is {expected}"),
                ));
            }
            lang
        }
        (None, Some(expected)) => expected,
        (None, None) => return Err(ValidationError::new("language", "missing field")),
    };
    let code = raw.code.ok_or_else(|| ValidationError::new("code", "missing field"))?;
    let comment = raw.comment.ok_or_else(|| ValidationError::new("comment", "missing field"))?;
    let code_tokens = match raw.code_tokens {
        Some(tokens) => tokens,
        None => tokenize_code(&code, lang),
    };
    if code_tokens.is_empty() && !code.trim().is_empty() {
        return Err(ValidationError::new("code_tokens", "empty token list for non-empty code"));
    }
    let id = raw.id.unwrap_or_else(|| format!("{lang}-{line_no}"));
    Ok(CodeCommentRecord { id, language: lang, code, code_tokens, comment })
}

/// Streaming reader over a line-delimited corpus file.
///
/// Malformed lines are yielded as `Err(LineError)` so callers can tally them
/// without aborting the stream.
pub struct CorpusReader<R> {
    lines: std::io::Lines<R>,
    line_no: usize,
    language: Option<Language>,
    seen: HashSet<String>,
}

impl<R: BufRead> CorpusReader<R> {
    pub fn new(reader: R, language: Option<Language>) -> Self {
        CorpusReader { lines: reader.lines(), line_no: 0, language, seen: HashSet::new() }
    }
}

impl<R: BufRead> Iterator for CorpusReader<R> {
    type Item = Result<Result<CodeCommentRecord, LineError>, std::io::Error>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let line = match self.lines.next()? {
                Ok(l) => l,
                Err(e) => return Some(Err(e)),
            };
            self.line_no += 1;
            if line.trim().is_empty() {
                continue;
            }
            let parsed = parse_record(&line, self.line_no, self.language).and_then(|rec| {
                if self.seen.insert(rec.id.clone()) {
                    Ok(rec)
                } else {
                    Err(ValidationError::new("id", format!("duplicate id {:?}", rec.id)))
                }
            });
            let line_no = self.line_no;
            return Some(Ok(parsed.map_err(|error| LineError { line: line_no, error })));
        }
    }
}

/// Load every record of a corpus file in file order.
pub fn load_corpus(
    path: &Path,
    language: Option<Language>,
) -> Result<(Vec<CodeCommentRecord>, LoadSummary), Error> {
    let file = File::open(path).map_err(|e| Error::read(path, e))?;
    let mut summary = LoadSummary::default();
    let mut records = Vec::new();
    for item in CorpusReader::new(BufReader::new(file), language) {
        summary.lines += 1;
        match item.map_err(|e| Error::read(path, e))? {
            Ok(rec) => records.push(rec),
            Err(err) => summary.errors.push(err),
        }
    }
    summary.records = records.len();
    Ok((records, summary))
}

const OPERATORS: &[&str] = &[
    ">>>=", "<<=", ">>=", ">>>", "**=", "//=", "...", "==", "!=", "<=", ">=", "&&", "||", "++",
    "--", "->", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>", "::", "**", "//", ":=",
];

const PY_STRING_PREFIXES: &[&str] = &["r", "b", "f", "u", "rb", "br", "fr", "rf"];

/// Split raw source into tokens, replacing numeric literals with `_NUM` and
/// string literals with `STRING`. Comments are dropped.
pub fn tokenize_code(code: &str, language: Language) -> Vec<String> {
    let chars: Vec<char> = code.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        // Line and block comments.
        if language == Language::Python && c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if language == Language::Java && c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if language == Language::Java && c == '/' && chars.get(i + 1) == Some(&'*') {
            i += 2;
            while i < chars.len() && !(chars[i] == '*' && chars.get(i + 1) == Some(&'/')) {
                i += 1;
            }
            i = (i + 2).min(chars.len());
            continue;
        }
        if c == '"' || c == '\'' {
            i = skip_string(&chars, i);
            tokens.push(STRING_PLACEHOLDER.to_string());
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            i = skip_number(&chars, i);
            tokens.push(NUM_PLACEHOLDER.to_string());
            continue;
        }
        if is_ident_start(c) {
            let start = i;
            while i < chars.len() && is_ident_continue(chars[i]) {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let quoted = matches!(chars.get(i), Some('"') | Some('\''));
            if language == Language::Python
                && quoted
                && PY_STRING_PREFIXES.contains(&word.to_ascii_lowercase().as_str())
            {
                i = skip_string(&chars, i);
                tokens.push(STRING_PLACEHOLDER.to_string());
            } else {
                tokens.push(word);
            }
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 4)].iter().collect();
        if let Some(op) = OPERATORS.iter().find(|op| rest.starts_with(**op)) {
            tokens.push(op.to_string());
            i += op.chars().count();
        } else {
            tokens.push(c.to_string());
            i += 1;
        }
    }
    tokens
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_' || c == '$'
}

fn is_ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '$'
}

/// Index just past the string literal opening at `start`.
fn skip_string(chars: &[char], start: usize) -> usize {
    let quote = chars[start];
    let triple = chars.get(start + 1) == Some(&quote) && chars.get(start + 2) == Some(&quote);
    if triple {
        let mut i = start + 3;
        while i < chars.len() {
            if chars[i] == '\\' {
                i += 2;
                continue;
            }
            if chars[i] == quote && chars.get(i + 1) == Some(&quote) && chars.get(i + 2) == Some(&quote) {
                return i + 3;
            }
            i += 1;
        }
        return chars.len();
    }
    let mut i = start + 1;
    while i < chars.len() {
        match chars[i] {
            '\\' => i += 2,
            '\n' => return i,
            c if c == quote => return i + 1,
            _ => i += 1,
        }
    }
    chars.len()
}

fn skip_number(chars: &[char], start: usize) -> usize {
    let mut i = start;
    if chars[i] == '0' && matches!(chars.get(i + 1), Some('x' | 'X' | 'b' | 'B' | 'o' | 'O')) {
        i += 2;
        while i < chars.len() && (chars[i].is_ascii_hexdigit() || chars[i] == '_') {
            i += 1;
        }
    } else {
        while i < chars.len() {
            let c = chars[i];
            let exponent_sign = matches!(c, '+' | '-') && matches!(chars[i - 1], 'e' | 'E');
            if c.is_ascii_digit() || c == '_' || c == '.' || c == 'e' || c == 'E' || exponent_sign {
                i += 1;
            } else {
                break;
            }
        }
    }
    // Type suffixes: 10L, 1.5f, 3j.
    while i < chars.len() && matches!(chars[i], 'l' | 'L' | 'f' | 'F' | 'd' | 'D' | 'j' | 'J') {
        i += 1;
    }
    i
}
