use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Question type assigned by prefix partitioning.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum QType {
    What,
    How,
    Where,
    When,
    Why,
    #[serde(rename = "For what purpose")]
    ForWhatPurpose,
    #[serde(rename = "Yes/No")]
    YesNo,
    Other,
}

impl QType {
    pub const ALL: [QType; 8] = [
        QType::What,
        QType::How,
        QType::Where,
        QType::When,
        QType::Why,
        QType::ForWhatPurpose,
        QType::YesNo,
        QType::Other,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            QType::What => "What",
            QType::How => "How",
            QType::Where => "Where",
            QType::When => "When",
            QType::Why => "Why",
            QType::ForWhatPurpose => "For what purpose",
            QType::YesNo => "Yes/No",
            QType::Other => "Other",
        }
    }
}

impl fmt::Display for QType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Dev,
    Test,
    #[default]
    Unassigned,
}

impl Split {
    pub const ASSIGNED: [Split; 3] = [Split::Train, Split::Dev, Split::Test];

    pub fn as_str(&self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Dev => "dev",
            Split::Test => "test",
            Split::Unassigned => "unassigned",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Split {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "train" => Ok(Split::Train),
            "dev" => Ok(Split::Dev),
            "test" => Ok(Split::Test),
            "unassigned" => Ok(Split::Unassigned),
            _ => Err(format!("unknown split {s:?}")),
        }
    }
}

pub const YES: &str = "Yes";
pub const NO: &str = "No";
pub const YESNO_SOURCE: &str = "yesno";

/// A generated question-answer pair.
///
/// `source` records the heuristic that produced it: `dp:<deprel>`,
/// `srl:<modifier>`, `dp+srl` when both agree, or `yesno`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QAPair {
    pub id: String,
    pub code_id: String,
    pub question: String,
    pub answer: String,
    pub qtype: QType,
    pub source: String,
    #[serde(default)]
    pub split: Split,
    /// Token index where the answer starts in the comment; used for ordering.
    #[serde(default)]
    pub answer_start: usize,
}

impl QAPair {
    pub fn is_yes_no(&self) -> bool {
        self.source == YESNO_SOURCE
    }

    pub fn is_yes(&self) -> bool {
        self.is_yes_no() && self.answer == YES
    }

    pub fn is_no(&self) -> bool {
        self.is_yes_no() && self.answer == NO
    }
}

/// One line of a released dataset split. The comment is not part of it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetRecord {
    pub id: String,
    pub code_id: String,
    pub code_tokens: Vec<String>,
    pub question: String,
    pub answer: String,
    pub qtype: QType,
    pub source: String,
}

impl DatasetRecord {
    pub fn from_pair(pair: &QAPair, code_tokens: &[String]) -> Self {
        DatasetRecord {
            id: pair.id.clone(),
            code_id: pair.code_id.clone(),
            code_tokens: code_tokens.to_vec(),
            question: pair.question.clone(),
            answer: pair.answer.clone(),
            qtype: pair.qtype,
            source: pair.source.clone(),
        }
    }

    pub fn is_yes_no_answer(&self) -> bool {
        let a = crate::text::strip_terminal_punct(&self.answer).to_lowercase();
        a == "yes" || a == "no"
    }
}
