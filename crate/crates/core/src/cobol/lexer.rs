use serde::Serialize;
use thiserror::Error;

use super::source::SourceFile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TokenKind {
    Keyword,
    Identifier,
    IntLiteral,
    StringLiteral,
    Period,
    Lparen,
    Rparen,
    Operator,
    PictureClause,
}

/// A lexeme of the normalized source. `text` is the raw lexeme (string
/// literals keep their quotes); keywords and identifiers are uppercased.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub line: u32,
    pub col: u32,
    /// Byte offset into the normalized text.
    pub offset: usize,
    /// Byte length of the lexeme in the normalized text.
    pub len: usize,
}

impl Token {
    pub fn is_keyword(&self, kw: &str) -> bool {
        self.kind == TokenKind::Keyword && self.text == kw
    }

    pub fn is_operator(&self, op: &str) -> bool {
        self.kind == TokenKind::Operator && self.text == op
    }

    /// Decoded value of a string literal (quotes removed, doubled quotes collapsed).
    pub fn string_value(&self) -> Option<String> {
        if self.kind != TokenKind::StringLiteral {
            return None;
        }
        let quote = self.text.chars().next()?;
        let inner = &self.text[1..self.text.len() - 1];
        let doubled: String = [quote, quote].iter().collect();
        Some(inner.replace(&doubled, &quote.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("lex error at {line}:{col}: {reason}")]
pub struct LexError {
    pub line: u32,
    pub col: u32,
    pub offset: usize,
    pub reason: LexErrorReason,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum LexErrorReason {
    UnterminatedString,
    IllegalCharacter(char),
}

impl std::fmt::Display for LexErrorReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LexErrorReason::UnterminatedString => write!(f, "unterminated string literal"),
            LexErrorReason::IllegalCharacter(c) => write!(f, "illegal character {c:?}"),
        }
    }
}

pub const KEYWORDS: &[&str] = &[
    "ACCEPT", "ADD", "AND", "BY", "CALL", "COMPUTE", "DATA", "DISPLAY", "DIVIDE", "DIVISION",
    "ELSE", "END-EVALUATE", "END-IF", "END-PERFORM", "EVALUATE", "FROM", "GIVING", "GO",
    "IDENTIFICATION", "IF", "INTO", "IS", "MOVE", "MULTIPLY", "NOT", "OR", "OTHER", "PERFORM",
    "PIC", "PICTURE", "PROCEDURE", "PROGRAM-ID", "RUN", "SECTION", "STOP", "SUBTRACT", "THEN",
    "TIMES", "TO", "UNTIL", "USING", "VALUE", "VARYING", "WHEN", "WORKING-STORAGE",
];

pub fn is_keyword(word: &str) -> bool {
    KEYWORDS.binary_search(&word).is_ok()
}

/// Tokenizes the format-normalized text of `file`.
pub fn tokenize(file: &SourceFile) -> Result<Vec<Token>, LexError> {
    tokenize_str(&file.normalized_text())
}

pub fn tokenize_str(text: &str) -> Result<Vec<Token>, LexError> {
    Lexer::new(text).run()
}

struct Lexer<'a> {
    text: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
    line: u32,
    col: u32,
    tokens: Vec<Token>,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Self { text, chars: text.char_indices().collect(), pos: 0, line: 1, col: 1, tokens: Vec::new() }
    }

    fn peek(&self, ahead: usize) -> Option<char> {
        self.chars.get(self.pos + ahead).map(|&(_, c)| c)
    }

    fn offset_at(&self, pos: usize) -> usize {
        self.chars.get(pos).map_or(self.text.len(), |&(o, _)| o)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek(0)?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn push(&mut self, kind: TokenKind, start: usize, line: u32, col: u32, text: String) {
        let offset = self.offset_at(start);
        let len = self.offset_at(self.pos) - offset;
        self.tokens.push(Token { kind, text, line, col, offset, len });
    }

    fn error(&self, line: u32, col: u32, start: usize, reason: LexErrorReason) -> LexError {
        LexError { line, col, offset: self.offset_at(start), reason }
    }

    fn prev_allows_sign(&self) -> bool {
        match self.pos.checked_sub(1).and_then(|p| self.chars.get(p)) {
            None => true,
            Some(&(_, c)) => c.is_whitespace() || c == '(' || c == ',',
        }
    }

    fn last_is_picture_keyword(&self) -> bool {
        let n = self.tokens.len();
        match self.tokens.last() {
            Some(t) if t.is_keyword("PIC") || t.is_keyword("PICTURE") => true,
            Some(t) if t.is_keyword("IS") && n >= 2 => {
                let prev = &self.tokens[n - 2];
                prev.is_keyword("PIC") || prev.is_keyword("PICTURE")
            }
            _ => false,
        }
    }

    fn run(mut self) -> Result<Vec<Token>, LexError> {
        while let Some(c) = self.peek(0) {
            let (start, line, col) = (self.pos, self.line, self.col);
            if c.is_whitespace() || c == ',' || c == ';' {
                self.bump();
                continue;
            }
            if c == '*' && self.peek(1) == Some('>') {
                while let Some(c) = self.peek(0) {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
                continue;
            }
            if self.last_is_picture_keyword() && !c.is_whitespace() {
                self.lex_picture(start, line, col);
                continue;
            }
            match c {
                '.' => {
                    self.bump();
                    self.push(TokenKind::Period, start, line, col, ".".into());
                }
                '(' => {
                    self.bump();
                    self.push(TokenKind::Lparen, start, line, col, "(".into());
                }
                ')' => {
                    self.bump();
                    self.push(TokenKind::Rparen, start, line, col, ")".into());
                }
                '\'' | '"' => self.lex_string(c, start, line, col)?,
                '-' if self.peek(1).is_some_and(|d| d.is_ascii_digit()) && self.prev_allows_sign() => {
                    self.bump();
                    self.lex_word(start, line, col);
                }
                '<' | '>' => {
                    self.bump();
                    let mut text = c.to_string();
                    if let Some(next) = self.peek(0) {
                        if next == '=' || (c == '<' && next == '>') {
                            self.bump();
                            text.push(next);
                        }
                    }
                    self.push(TokenKind::Operator, start, line, col, text);
                }
                '+' | '-' | '*' | '/' | '=' => {
                    self.bump();
                    self.push(TokenKind::Operator, start, line, col, c.to_string());
                }
                c if c.is_ascii_alphanumeric() => self.lex_word(start, line, col),
                other => {
                    return Err(self.error(line, col, start, LexErrorReason::IllegalCharacter(other)))
                }
            }
        }
        Ok(self.tokens)
    }

    fn lex_word(&mut self, start: usize, line: u32, col: u32) {
        while let Some(c) = self.peek(0) {
            if c.is_ascii_alphanumeric() || c == '-' {
                self.bump();
            } else {
                break;
            }
        }
        // a word never ends in a hyphen; give trailing hyphens back as operators
        while self.pos > start + 1 && self.chars[self.pos - 1].1 == '-' {
            self.pos -= 1;
            self.col -= 1;
        }
        let text: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        let upper = text.to_ascii_uppercase();
        let digits = upper.strip_prefix('-').unwrap_or(&upper);
        let kind = if !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit()) {
            TokenKind::IntLiteral
        } else if is_keyword(&upper) {
            TokenKind::Keyword
        } else {
            TokenKind::Identifier
        };
        self.push(kind, start, line, col, upper);
    }

    fn lex_picture(&mut self, start: usize, line: u32, col: u32) {
        while let Some(c) = self.peek(0) {
            if c.is_whitespace() {
                break;
            }
            // a period directly followed by whitespace or end of input ends the sentence
            if c == '.' && self.peek(1).is_none_or(char::is_whitespace) {
                break;
            }
            self.bump();
        }
        let text: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        let upper = text.to_ascii_uppercase();
        let kind = if upper == "IS" && !self.tokens.last().is_some_and(|t| t.is_keyword("IS")) {
            TokenKind::Keyword
        } else {
            TokenKind::PictureClause
        };
        self.push(kind, start, line, col, upper);
    }

    fn lex_string(&mut self, quote: char, start: usize, line: u32, col: u32) -> Result<(), LexError> {
        self.bump();
        loop {
            match self.peek(0) {
                None | Some('\n') => {
                    return Err(self.error(line, col, start, LexErrorReason::UnterminatedString))
                }
                Some(c) if c == quote => {
                    self.bump();
                    if self.peek(0) == Some(quote) {
                        self.bump();
                    } else {
                        break;
                    }
                }
                Some(_) => {
                    self.bump();
                }
            }
        }
        let text: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        self.push(TokenKind::StringLiteral, start, line, col, text);
        Ok(())
    }
}
