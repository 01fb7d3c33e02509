//! Tokenizer for PDDL source text.
//!
//! Comments run from `;` to end of line. Everything is case-folded to
//! lowercase since PDDL identifiers are case-insensitive.

use std::fmt;

use super::error::PddlError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    LParen,
    RParen,
    Symbol,
    /// `:`-prefixed, e.g. `:action`.
    Keyword,
    /// `?`-prefixed, e.g. `?x`.
    Variable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

fn is_symbol_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.' | '=' | '+' | '*' | '/' | '<' | '>')
}

pub fn tokenize(source: &str) -> Result<Vec<Token>, PddlError> {
    let mut tokens = Vec::new();
    let mut chars = source.chars().peekable();
    let mut line = 1u32;
    let mut col = 1u32;

    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            ' ' | '\t' | '\r' | '\u{feff}' => {
                chars.next();
                col += 1;
            }
            ';' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            '(' | ')' => {
                chars.next();
                tokens.push(Token {
                    kind: if c == '(' { TokenKind::LParen } else { TokenKind::RParen },
                    text: c.to_string(),
                    line,
                    col,
                });
                col += 1;
            }
            c if c == '?' || c == ':' || is_symbol_char(c) => {
                let start_col = col;
                let mut text = String::new();
                text.push(c.to_ascii_lowercase());
                chars.next();
                col += 1;
                while let Some(&n) = chars.peek() {
                    if !is_symbol_char(n) {
                        break;
                    }
                    text.push(n.to_ascii_lowercase());
                    chars.next();
                    col += 1;
                }
                let kind = match c {
                    '?' => TokenKind::Variable,
                    ':' => TokenKind::Keyword,
                    _ => TokenKind::Symbol,
                };
                if kind != TokenKind::Symbol && text.len() == 1 {
                    // a bare `?` or `:` has no name attached
                    return Err(PddlError::IllegalCharacter { ch: c, line, col: start_col });
                }
                tokens.push(Token { kind, text, line, col: start_col });
            }
            other => {
                return Err(PddlError::IllegalCharacter { ch: other, line, col });
            }
        }
    }
    Ok(tokens)
}
