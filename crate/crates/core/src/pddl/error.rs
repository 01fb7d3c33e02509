use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PddlError {
    #[error("illegal character {ch:?} at line {line}, column {col}")]
    IllegalCharacter { ch: char, line: u32, col: u32 },

    #[error("syntax error at line {line}: expected {expected}, found {found}")]
    Syntax { expected: String, found: String, line: u32 },

    #[error("unsupported construct `{construct}` at line {line}")]
    UnsupportedConstruct { construct: String, line: u32 },

    #[error("duplicate {kind} `{name}`")]
    DuplicateName { kind: &'static str, name: String },

    #[error("unknown predicate `{name}` at line {line}")]
    UnknownPredicate { name: String, line: u32 },

    #[error("predicate `{predicate}` expects {expected} arguments, found {found} (line {line})")]
    ArityMismatch { predicate: String, expected: usize, found: usize, line: u32 },

    #[error("unknown object `{name}` at line {line}")]
    UnknownObject { name: String, line: u32 },

    #[error("unknown type `{name}` at line {line}")]
    UnknownType { name: String, line: u32 },

    #[error("variable `{name}` is not a parameter of `{scope}` (line {line})")]
    UnknownVariable { name: String, scope: String, line: u32 },

    #[error("type hierarchy contains a cycle through `{name}`")]
    TypeCycle { name: String },

    #[error("problem is for domain `{found}`, expected `{expected}`")]
    DomainMismatch { expected: String, found: String },
}

impl PddlError {
    /// Source line the error points at, when it has one.
    pub fn line(&self) -> Option<u32> {
        match self {
            PddlError::IllegalCharacter { line, .. }
            | PddlError::Syntax { line, .. }
            | PddlError::UnsupportedConstruct { line, .. }
            | PddlError::UnknownPredicate { line, .. }
            | PddlError::ArityMismatch { line, .. }
            | PddlError::UnknownObject { line, .. }
            | PddlError::UnknownType { line, .. }
            | PddlError::UnknownVariable { line, .. } => Some(*line),
            _ => None,
        }
    }
}
