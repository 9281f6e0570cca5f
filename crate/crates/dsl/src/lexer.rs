//! Tokenizer. Keywords are recognised case-insensitively by the parser;
//! the lexer only produces words, references, numbers, strings and symbols.

use std::fmt;

use crate::error::{DslError, Pos};

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    /// A bare word: keyword, attribute or class name.
    Word(String),
    /// `node:a`, `edge:e1`, `subset:S1`; the kind is lowercased.
    Ref(String, String),
    /// `?name`
    Var(String),
    Number(f64, String),
    Str(String),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "'{w}'"),
            Tok::Ref(k, id) => write!(f, "'{k}:{id}'"),
            Tok::Var(v) => write!(f, "'?{v}'"),
            Tok::Number(_, text) => write!(f, "number {text}"),
            Tok::Str(s) => write!(f, "string {s:?}"),
            Tok::Sym(s) => write!(f, "'{s}'"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

const SYMBOLS: [&str; 16] = [
    "<=", ">=", "!=", "(", ")", "[", "]", "{", "}", ",", "=", "<", ">", ":", ";", "~",
];

pub const REF_KINDS: [&str; 3] = ["node", "edge", "subset"];

fn word_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_' || c == '@'
}

fn word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '@'
}

/// Characters allowed in an element id after `kind:`.
pub fn id_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.' | '@')
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, DslError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, n: usize, chars: &[char]| {
        for _ in 0..n {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, 1, &chars);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col, 1, &chars);
            }
            continue;
        }
        if c == '"' {
            let mut s = String::new();
            let mut j = i + 1;
            loop {
                match chars.get(j) {
                    None => return Err(DslError::lex(pos, "unterminated string")),
                    Some('"') => break,
                    Some('\\') => match chars.get(j + 1) {
                        Some('"') => {
                            s.push('"');
                            j += 2;
                        }
                        Some('\\') => {
                            s.push('\\');
                            j += 2;
                        }
                        Some('n') => {
                            s.push('\n');
                            j += 2;
                        }
                        _ => return Err(DslError::lex(pos, "bad escape in string")),
                    },
                    Some(&ch) => {
                        s.push(ch);
                        j += 1;
                    }
                }
            }
            let n = j + 1 - i;
            advance(&mut i, &mut line, &mut col, n, &chars);
            out.push(Token { tok: Tok::Str(s), pos });
            continue;
        }
        let starts_number = c.is_ascii_digit()
            || (c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit() || *d == '.'))
            || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()));
        if starts_number {
            let mut j = i + 1;
            while j < chars.len() && (chars[j].is_ascii_digit() || chars[j] == '.') {
                j += 1;
            }
            if j < chars.len() && (chars[j] == 'e' || chars[j] == 'E') {
                let mut k = j + 1;
                if k < chars.len() && (chars[k] == '+' || chars[k] == '-') {
                    k += 1;
                }
                if k < chars.len() && chars[k].is_ascii_digit() {
                    while k < chars.len() && chars[k].is_ascii_digit() {
                        k += 1;
                    }
                    j = k;
                }
            }
            let text: String = chars[i..j].iter().collect();
            let value: f64 = text
                .parse()
                .map_err(|_| DslError::lex(pos, &format!("malformed number '{text}'")))?;
            if !value.is_finite() {
                return Err(DslError::lex(pos, &format!("number '{text}' out of range")));
            }
            let n = j - i;
            advance(&mut i, &mut line, &mut col, n, &chars);
            out.push(Token {
                tok: Tok::Number(value, text),
                pos,
            });
            continue;
        }
        if c == '?' {
            let mut j = i + 1;
            if !chars.get(j).is_some_and(|&d| word_start(d)) {
                return Err(DslError::lex(pos, "expected a variable name after '?'"));
            }
            while j < chars.len() && word_char(chars[j]) {
                j += 1;
            }
            let name: String = chars[i + 1..j].iter().collect();
            let n = j - i;
            advance(&mut i, &mut line, &mut col, n, &chars);
            out.push(Token { tok: Tok::Var(name), pos });
            continue;
        }
        if word_start(c) {
            let mut j = i + 1;
            while j < chars.len() && word_char(chars[j]) {
                j += 1;
            }
            let word: String = chars[i..j].iter().collect();
            let lower = word.to_ascii_lowercase();
            if REF_KINDS.contains(&lower.as_str()) && chars.get(j) == Some(&':') {
                let mut k = j + 1;
                let id = if chars.get(k) == Some(&'"') {
                    let mut s = String::new();
                    k += 1;
                    loop {
                        match chars.get(k) {
                            None => return Err(DslError::lex(pos, "unterminated quoted id")),
                            Some('"') => break,
                            Some('\\') if matches!(chars.get(k + 1), Some('"') | Some('\\')) => {
                                s.push(chars[k + 1]);
                                k += 2;
                            }
                            Some(&ch) => {
                                s.push(ch);
                                k += 1;
                            }
                        }
                    }
                    k += 1;
                    s
                } else {
                    let start = k;
                    while k < chars.len() && id_char(chars[k]) {
                        k += 1;
                    }
                    chars[start..k].iter().collect()
                };
                if id.is_empty() {
                    return Err(DslError::lex(pos, &format!("missing id after '{lower}:'")));
                }
                let n = k - i;
                advance(&mut i, &mut line, &mut col, n, &chars);
                out.push(Token {
                    tok: Tok::Ref(lower, id),
                    pos,
                });
                continue;
            }
            let n = j - i;
            advance(&mut i, &mut line, &mut col, n, &chars);
            out.push(Token { tok: Tok::Word(word), pos });
            continue;
        }
        let rest: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(sym) => {
                advance(&mut i, &mut line, &mut col, sym.len(), &chars);
                out.push(Token { tok: Tok::Sym(sym), pos });
            }
            None => return Err(DslError::lex(pos, &format!("unexpected character {c:?}"))),
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, col },
    });
    Ok(out)
}
