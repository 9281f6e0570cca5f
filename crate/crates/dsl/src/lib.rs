//! Textual query language over temporal graphs: lexer, parser, canonical
//! printer, validation and planning onto engine operations.

pub mod ast;
pub mod corpus;
pub mod error;
pub mod gen;
pub mod lexer;
pub mod parser;
pub mod plan;
pub mod validate;

pub use ast::Query;
pub use error::{DslError, Pos, Result};
pub use parser::parse_syntax;
pub use plan::{plan, Envelope, Plan};
pub use validate::validate;

use tgq_core::task::EngineConfig;
use tgq_core::TemporalGraph;

/// Parses and validates one query.
pub fn parse(src: &str) -> Result<Query> {
    let q = parse_syntax(src)?;
    validate(&q)?;
    Ok(q)
}

/// Parses raw bytes; invalid UTF-8 is a parse error at the first bad byte.
pub fn parse_bytes(bytes: &[u8]) -> Result<Query> {
    match std::str::from_utf8(bytes) {
        Ok(s) => parse(s),
        Err(e) => {
            let before = String::from_utf8_lossy(&bytes[..e.valid_up_to()]);
            let line = before.matches('\n').count() + 1;
            let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
            Err(DslError::Parse {
                pos: Pos { line, col },
                message: "invalid UTF-8".into(),
                expected: Vec::new(),
            })
        }
    }
}

/// Parses, validates, plans and executes one query.
pub fn run(src: &str, graph: &TemporalGraph, config: &EngineConfig) -> Result<Envelope> {
    let q = parse(src)?;
    plan(&q, graph, config)?.execute(graph, config)
}
