//! Typed-STRIPS PDDL: lexing, parsing, validation and canonical printing.
//!
//! The accepted subset is typed STRIPS with negative preconditions,
//! equality and constant `total-cost` increases. Anything else is rejected
//! with [`PddlError::UnsupportedConstruct`] rather than silently dropped.

mod ast;
mod error;
mod lexer;
mod parser;
mod printer;

pub use ast::*;
pub use error::PddlError;
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::{parse_domain, parse_problem};
pub use printer::{print_domain, print_problem};

/// Tokenizes and parses a domain file's text.
pub fn parse_domain_str(source: &str) -> Result<Domain, PddlError> {
    parse_domain(&tokenize(source)?)
}

pub fn parse_problem_str(source: &str, domain: &Domain) -> Result<Problem, PddlError> {
    parse_problem(&tokenize(source)?, domain)
}
