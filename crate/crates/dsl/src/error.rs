use std::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DslError {
    #[error("{pos}: {message}{}", expected_suffix(.expected))]
    Parse {
        pos: Pos,
        message: String,
        expected: Vec<String>,
    },
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Plan(String),
    #[error(transparent)]
    Engine(#[from] tgq_core::Error),
}

fn expected_suffix(expected: &[String]) -> String {
    if expected.is_empty() {
        String::new()
    } else {
        format!("; expected one of: {}", expected.join(", "))
    }
}

impl DslError {
    pub(crate) fn lex(pos: Pos, message: &str) -> DslError {
        DslError::Parse {
            pos,
            message: message.to_string(),
            expected: Vec::new(),
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            DslError::Parse { .. } => "PARSE_ERROR",
            DslError::Validation(_) => "VALIDATION_ERROR",
            DslError::Plan(_) => "PLAN_ERROR",
            DslError::Engine(e) => e.code(),
        }
    }
}

pub type Result<T> = std::result::Result<T, DslError>;
