//! Front end for the COBOL subset: lexing, parsing, repair and printing.

pub mod ast;
pub mod lexer;
pub mod nodes;
pub mod parser;
pub mod printer;
pub mod repair;
pub mod source;

pub use ast::*;
pub use lexer::{tokenize, tokenize_str, LexError, LexErrorReason, Token, TokenKind};
pub use nodes::{syntax_tree, AstIndex, AstNode, NodeKind};
pub use parser::{parse, parse_source, parse_str, FrontError, ParseError, ParseErrorKind, Scope};
pub use printer::pretty_print;
pub use repair::{repair, repair_with, RepairConfig, RepairEntry, RepairLog, RepairRule, Verdict};
pub use source::{normalize_for_ingest, SourceFile, SourceFormat};
