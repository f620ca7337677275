use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::lexer::{lex, Pos, Tok, Token};
use crate::chart::ChartSpec;
use crate::error::{Error, Result};

/// Chart-independent syntax tree; names are resolved when lowering.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Ast {
    Int(BigInt),
    Name(String, Pos),
    Call(String, Vec<Ast>, Pos),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Neg(Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, BigInt),
    Pow(Box<Ast>, u32),
    Bracket(Box<Ast>, Box<Ast>),
    Jordan(Box<Ast>, Box<Ast>),
    Star(Box<Ast>),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Flag {
    pub name: String,
    pub value: String,
    pub pos: Pos,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Command {
    Chart(ChartSpec),
    Let(String, Ast),
    Normalize(Ast),
    Bracket(Ast, Ast),
    Commutator(Ast, Ast),
    DivZ(Ast),
    Classical(Ast),
    Quantum(Ast, Vec<Flag>),
    Spectrum(Vec<Flag>),
    ConstructZ(Vec<Flag>),
    Check(Vec<Flag>),
    Heisenberg(usize),
    Triple(Ast, Ast, Ast),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Stmt {
    pub line: usize,
    pub source: String,
    pub command: Command,
}

pub const KEYWORDS: &[&str] = &[
    "chart",
    "let",
    "normalize",
    "bracket",
    "commutator",
    "divz",
    "classical",
    "quantum",
    "spectrum",
    "construct",
    "check",
    "heisenberg",
    "triple",
    "star",
    "o",
    "i",
    "z",
    "e",
    "sin",
    "cos",
];

struct Parser<'a> {
    toks: &'a [Token],
    at: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if t.tok != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> Result<T> {
        let t = &self.toks[self.at];
        let found = match &t.tok {
            Tok::Newline | Tok::Eof => t.tok.to_string(),
            other => format!("`{other}`"),
        };
        Err(Error::Syntax { line: t.pos.line, column: t.pos.column, expected: expected.to_string(), found })
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(&format!("`{tok}`"))
        }
    }

    fn is_ident(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == s)
    }

    fn at_end_of_statement(&self) -> bool {
        matches!(self.peek(), Tok::Newline | Tok::Eof)
    }

    fn sum(&mut self) -> Result<Ast> {
        let mut lhs = self.product()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Ast::Add(Box::new(lhs), Box::new(self.product()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Ast::Sub(Box::new(lhs), Box::new(self.product()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn product(&mut self) -> Result<Ast> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Ast::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.bump();
                    match self.bump().tok {
                        Tok::Int(n) if n != BigInt::from(0) => lhs = Ast::Div(Box::new(lhs), n),
                        _ => {
                            self.at -= 1;
                            return self.error("nonzero integer");
                        }
                    }
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Ast> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Ast::Neg(Box::new(self.unary()?)));
        }
        self.jordan()
    }

    fn jordan(&mut self) -> Result<Ast> {
        let lhs = self.power()?;
        if self.is_ident("o") {
            self.bump();
            let rhs = self.jordan()?;
            return Ok(Ast::Jordan(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn power(&mut self) -> Result<Ast> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            return match self.peek().clone() {
                Tok::Int(n) => match n.to_u32() {
                    Some(k) => {
                        self.bump();
                        Ok(Ast::Pow(Box::new(base), k))
                    }
                    None => self.error("small natural exponent"),
                },
                _ => self.error("natural exponent"),
            };
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ast> {
        const EXPECTED: &str = "one of integer, name, `(`, `{`, `-`";
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Ast::Int(n))
            }
            Tok::LParen => {
                self.bump();
                let e = self.sum()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::LBrace => {
                self.bump();
                let a = self.sum()?;
                self.expect(Tok::Comma)?;
                let b = self.sum()?;
                self.expect(Tok::RBrace)?;
                Ok(Ast::Bracket(Box::new(a), Box::new(b)))
            }
            Tok::Ident(name) if name == "o" => self.error(EXPECTED),
            Tok::Ident(name) => {
                self.bump();
                if *self.peek() != Tok::LParen {
                    return Ok(Ast::Name(name, pos));
                }
                self.bump();
                let mut args = vec![self.sum()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    args.push(self.sum()?);
                }
                self.expect(Tok::RParen)?;
                if name == "star" {
                    if args.len() != 1 {
                        return Err(Error::MalformedExpr("star takes one argument".into()));
                    }
                    return Ok(Ast::Star(Box::new(args.pop().unwrap())));
                }
                Ok(Ast::Call(name, args, pos))
            }
            _ => self.error(EXPECTED),
        }
    }

    fn flags(&mut self) -> Result<Vec<Flag>> {
        let mut out = Vec::new();
        while let Tok::Flag(name) = self.peek().clone() {
            let pos = self.pos();
            self.bump();
            match self.peek().clone() {
                Tok::Word(value) => {
                    self.bump();
                    out.push(Flag { name, value, pos });
                }
                _ => return self.error(&format!("value for --{name}")),
            }
        }
        Ok(out)
    }

    fn end_statement(&mut self) -> Result<()> {
        if self.at_end_of_statement() {
            self.bump();
            Ok(())
        } else {
            self.error("end of line")
        }
    }

    fn two_args(&mut self) -> Result<(Ast, Ast)> {
        let a = self.sum()?;
        self.expect(Tok::Comma)?;
        Ok((a, self.sum()?))
    }

    fn chart_spec(&mut self) -> Result<ChartSpec> {
        let kind = match self.peek() {
            Tok::Ident(k) if k == "euclid" || k == "torus" => k.clone(),
            _ => return self.error("`euclid` or `torus`"),
        };
        self.bump();
        self.expect(Tok::Colon)?;
        match self.peek().clone() {
            Tok::Int(n) => {
                let pos = self.pos();
                self.bump();
                format!("{kind}:{n}").parse().map_err(|_| Error::Syntax {
                    line: pos.line,
                    column: pos.column,
                    expected: "positive dimension".into(),
                    found: format!("`{n}`"),
                })
            }
            _ => self.error("dimension"),
        }
    }

    fn statement(&mut self) -> Result<Command> {
        let keyword = match self.peek() {
            Tok::Ident(k) => k.clone(),
            _ => String::new(),
        };
        if !KEYWORDS.contains(&keyword.as_str()) {
            return Ok(Command::Normalize(self.sum()?));
        }
        match keyword.as_str() {
            "chart" => {
                self.bump();
                Ok(Command::Chart(self.chart_spec()?))
            }
            "let" => {
                self.bump();
                let name = match self.peek().clone() {
                    Tok::Ident(n) if !KEYWORDS.contains(&n.as_str()) && super::lower::builtin_name(&n).is_none() => n,
                    _ => return self.error("a fresh name"),
                };
                self.bump();
                self.expect(Tok::Equals)?;
                Ok(Command::Let(name, self.sum()?))
            }
            "normalize" => {
                self.bump();
                Ok(Command::Normalize(self.sum()?))
            }
            "bracket" => {
                self.bump();
                let (a, b) = self.two_args()?;
                Ok(Command::Bracket(a, b))
            }
            "commutator" => {
                self.bump();
                let (a, b) = self.two_args()?;
                Ok(Command::Commutator(a, b))
            }
            "divz" => {
                self.bump();
                Ok(Command::DivZ(self.sum()?))
            }
            "classical" => {
                self.bump();
                Ok(Command::Classical(self.sum()?))
            }
            "quantum" => {
                self.bump();
                let a = self.sum()?;
                Ok(Command::Quantum(a, self.flags()?))
            }
            "spectrum" => {
                self.bump();
                Ok(Command::Spectrum(self.flags()?))
            }
            "construct" => {
                self.bump();
                self.expect(Tok::Minus)?;
                if !self.is_ident("z") {
                    return self.error("`z`");
                }
                self.bump();
                Ok(Command::ConstructZ(self.flags()?))
            }
            "check" => {
                self.bump();
                Ok(Command::Check(self.flags()?))
            }
            "heisenberg" => {
                self.bump();
                match self.peek().clone() {
                    Tok::Int(n) => match n.to_usize() {
                        Some(k) if k > 0 => {
                            self.bump();
                            Ok(Command::Heisenberg(k))
                        }
                        _ => self.error("positive dimension"),
                    },
                    _ => self.error("dimension"),
                }
            }
            "triple" => {
                self.bump();
                let q = self.sum()?;
                self.expect(Tok::Comma)?;
                let g = self.sum()?;
                self.expect(Tok::Comma)?;
                Ok(Command::Triple(q, g, self.sum()?))
            }
            _ => Ok(Command::Normalize(self.sum()?)),
        }
    }
}

/// Parse a whole script, one statement per non-blank line.
pub fn parse_script(text: &str) -> Result<Vec<Stmt>> {
    let toks = lex(text)?;
    let lines: Vec<&str> = text.lines().collect();
    let mut p = Parser { toks: &toks, at: 0 };
    let mut out = Vec::new();
    loop {
        while *p.peek() == Tok::Newline {
            p.bump();
        }
        if *p.peek() == Tok::Eof {
            return Ok(out);
        }
        let line = p.pos().line;
        let command = p.statement()?;
        p.end_statement()?;
        let source = lines.get(line - 1).map(|l| l.split('#').next().unwrap_or("").trim().to_string());
        out.push(Stmt { line, source: source.unwrap_or_default(), command });
    }
}

/// Parse a single expression.
pub fn parse_expr(text: &str) -> Result<Ast> {
    let toks = lex(text)?;
    let mut p = Parser { toks: &toks, at: 0 };
    let e = p.sum()?;
    if *p.peek() != Tok::Eof {
        return p.error("one of `+`, `-`, `*`, `/`, `^`, `o`, end of input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn name(s: &str) -> Ast {
        match parse_expr(s).unwrap() {
            Ast::Name(n, _) => Ast::Name(n, Pos { line: 0, column: 0 }),
            other => other,
        }
    }

    #[test]
    fn precedence() {
        let e = parse_expr("-x1 o d1 * 2").unwrap();
        match e {
            Ast::Mul(l, r) => {
                assert!(matches!(*l, Ast::Neg(ref j) if matches!(**j, Ast::Jordan(..))));
                assert_eq!(*r, Ast::Int(2.into()));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_expr("x1^2*x2").unwrap(), Ast::Mul(ref l, _) if matches!(**l, Ast::Pow(_, 2))));
        assert!(matches!(parse_expr("1 - 2 - 3").unwrap(), Ast::Sub(ref l, _) if matches!(**l, Ast::Sub(..))));
        assert!(matches!(parse_expr("{x1, d1}").unwrap(), Ast::Bracket(..)));
        assert!(matches!(parse_expr("star(x1*d1)").unwrap(), Ast::Star(..)));
        assert!(matches!(name("x1"), Ast::Name(ref n, _) if n == "x1"));
    }

    #[test]
    fn syntax_errors_carry_position_and_expectation() {
        match parse_expr("x1 + * d1") {
            Err(Error::Syntax { line, column, expected, found }) => {
                assert_eq!((line, column), (1, 6));
                assert!(expected.contains("integer"));
                assert_eq!(found, "`*`");
            }
            other => panic!("{other:?}"),
        }
        match parse_script("chart euclid:1\n{x1, d1") {
            Err(Error::Syntax { line: 2, column: 8, expected, .. }) => assert_eq!(expected, "`}`"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_script("let x1 = 2"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn script_statements() {
        let s = parse_script(
            "# demo\nchart torus:1\nlet a = sin(t1) o dt1\nquantum a --cutoff 4 --alpha 1/3\nconstruct-z --scheme circle\n{a, e(1)}\n",
        )
        .unwrap();
        assert_eq!(s.len(), 5);
        assert_eq!(s[0].command, Command::Chart(ChartSpec::circle()));
        assert!(matches!(s[1].command, Command::Let(ref n, _) if n == "a"));
        match &s[2].command {
            Command::Quantum(_, flags) => {
                assert_eq!(flags[1].name, "alpha");
                assert_eq!(flags[1].value, "1/3");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(s[3].command, Command::ConstructZ(ref f) if f[0].value == "circle"));
        assert!(matches!(s[4].command, Command::Normalize(Ast::Bracket(..))));
        assert_eq!(s[4].line, 6);
        assert_eq!(s[4].source, "{a, e(1)}");
    }
}
