use serde::{Deserialize, Serialize};

/// Reference format of a source file.
///
/// `Fixed` is the card-image layout: columns 1-6 hold a sequence number,
/// column 7 is the indicator area and columns 73+ are ignored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceFormat {
    #[default]
    Free,
    Fixed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceFile {
    pub id: String,
    pub text: String,
    pub format: SourceFormat,
}

impl SourceFile {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        Self { id: id.into(), text: text.into(), format: SourceFormat::Free }
    }

    pub fn with_format(mut self, format: SourceFormat) -> Self {
        self.format = format;
        self
    }

    /// Text the lexer actually sees. Token positions refer to this text.
    pub fn normalized_text(&self) -> String {
        match self.format {
            SourceFormat::Free => self.text.replace("\r\n", "\n"),
            SourceFormat::Fixed => strip_fixed_columns(&self.text),
        }
    }
}

/// Keeps columns 7..=72 of every line; indicator `*` or `/` blanks the line.
pub fn strip_fixed_columns(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for (i, line) in text.replace("\r\n", "\n").split('\n').enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let chars: Vec<char> = line.chars().collect();
        if matches!(chars.get(6), Some('*') | Some('/')) {
            continue;
        }
        let end = chars.len().min(72);
        if end > 6 {
            out.extend(&chars[6..end]);
        }
    }
    out
}

/// Ingestion normalization: CRLF to LF and trailing whitespace stripped from
/// every line. Case is left untouched.
pub fn normalize_for_ingest(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for line in text.replace("\r\n", "\n").lines() {
        out.push_str(line.trim_end());
        out.push('\n');
    }
    // drop trailing blank lines so "a\n\n" and "a\n" hash alike
    while out.ends_with("\n\n") {
        out.pop();
    }
    if out == "\n" {
        out.clear();
    }
    out
}
