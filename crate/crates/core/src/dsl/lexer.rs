use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Tok {
    Int(BigInt),
    Ident(String),
    /// `--name`
    Flag(String),
    /// Raw flag value, everything up to the next blank.
    Word(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Colon,
    Comma,
    Equals,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Newline,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "{n}"),
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::Flag(s) => write!(f, "--{s}"),
            Tok::Word(s) => write!(f, "{s}"),
            Tok::Plus => f.write_str("+"),
            Tok::Minus => f.write_str("-"),
            Tok::Star => f.write_str("*"),
            Tok::Slash => f.write_str("/"),
            Tok::Caret => f.write_str("^"),
            Tok::Colon => f.write_str(":"),
            Tok::Comma => f.write_str(","),
            Tok::Equals => f.write_str("="),
            Tok::LParen => f.write_str("("),
            Tok::RParen => f.write_str(")"),
            Tok::LBrace => f.write_str("{"),
            Tok::RBrace => f.write_str("}"),
            Tok::Newline => f.write_str("end of line"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

/// Split `text` into tokens. `#` starts a comment running to end of line.
pub fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        let single = match c {
            '+' => Some(Tok::Plus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            ':' => Some(Tok::Colon),
            ',' => Some(Tok::Comma),
            '=' => Some(Tok::Equals),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, pos });
            i += 1;
            col += 1;
            continue;
        }
        match c {
            '\n' => {
                out.push(Token { tok: Tok::Newline, pos });
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                    col += 1;
                }
            }
            '-' => {
                if chars.get(i + 1) == Some(&'-') && chars.get(i + 2).is_some_and(|c| c.is_ascii_alphabetic()) {
                    let start = i + 2;
                    let mut j = start;
                    while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '-' || chars[j] == '_') {
                        j += 1;
                    }
                    out.push(Token { tok: Tok::Flag(chars[start..j].iter().collect()), pos });
                    col += j - i;
                    i = j;
                    while i < chars.len() && (chars[i] == ' ' || chars[i] == '\t') {
                        i += 1;
                        col += 1;
                    }
                    let starts_flag = chars.get(i) == Some(&'-') && chars.get(i + 1) == Some(&'-');
                    if i < chars.len() && !chars[i].is_whitespace() && chars[i] != '#' && !starts_flag {
                        let vpos = Pos { line, column: col };
                        let vstart = i;
                        while i < chars.len() && !chars[i].is_whitespace() {
                            i += 1;
                        }
                        col += i - vstart;
                        out.push(Token { tok: Tok::Word(chars[vstart..i].iter().collect()), pos: vpos });
                    }
                } else {
                    out.push(Token { tok: Tok::Minus, pos });
                    i += 1;
                    col += 1;
                }
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                col += i - start;
                out.push(Token { tok: Tok::Int(s.parse().expect("digits")), pos });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                col += i - start;
                out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), pos });
            }
            other => {
                return Err(Error::Syntax {
                    line,
                    column: col,
                    expected: "expression".into(),
                    found: format!("`{other}`"),
                })
            }
        }
    }
    out.push(Token { tok: Tok::Eof, pos: Pos { line, column: col } });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn flags_and_minus() {
        assert_eq!(
            toks("quantum p1 - x --cutoff 4"),
            vec![
                Tok::Ident("quantum".into()),
                Tok::Ident("p1".into()),
                Tok::Minus,
                Tok::Ident("x".into()),
                Tok::Flag("cutoff".into()),
                Tok::Word("4".into()),
                Tok::Eof
            ]
        );
        assert_eq!(toks("--3"), vec![Tok::Minus, Tok::Minus, Tok::Int(3.into()), Tok::Eof]);
        assert_eq!(
            toks("--scheme dir/c.scheme --seed 3"),
            vec![
                Tok::Flag("scheme".into()),
                Tok::Word("dir/c.scheme".into()),
                Tok::Flag("seed".into()),
                Tok::Word("3".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn positions_and_comments() {
        let t = lex("x1 # note\n  {a, b}").unwrap();
        assert_eq!(t[1].tok, Tok::Newline);
        assert_eq!(t[2].tok, Tok::LBrace);
        assert_eq!(t[2].pos, Pos { line: 2, column: 3 });
        match lex("x1 $ 2") {
            Err(Error::Syntax { line: 1, column: 4, .. }) => {}
            other => panic!("{other:?}"),
        }
    }
}
