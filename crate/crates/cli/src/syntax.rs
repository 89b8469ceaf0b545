//! Tokens and the untyped syntax tree produced before name resolution.

use std::fmt;

/// One-based source position.
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

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax,
    Undeclared,
    Arity,
    Semantic,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{pos}: {}: {message}", self.kind_label())]
pub struct ParseError {
    pub pos: Pos,
    pub kind: ErrorKind,
    pub message: String,
}

impl ParseError {
    pub fn new(pos: Pos, kind: ErrorKind, message: impl Into<String>) -> Self {
        ParseError { pos, kind, message: message.into() }
    }

    fn kind_label(&self) -> &'static str {
        match self.kind {
            ErrorKind::Syntax => "syntax error",
            ErrorKind::Undeclared => "undeclared symbol",
            ErrorKind::Arity => "arity mismatch",
            ErrorKind::Semantic => "error",
        }
    }
}

pub type PResult<T> = Result<T, ParseError>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(String),
    Punct(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(s) => write!(f, "number `{s}`"),
            Tok::Punct(c) => write!(f, "`{c}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
    /// Whitespace or a comment precedes the token.
    pub spaced: bool,
}

const PUNCT: &str = ";:=,()[]+-*/^.";

pub fn lex(src: &str) -> PResult<Vec<Token>> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut chars = src.chars().peekable();
    let mut spaced = true;
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            spaced = true;
        } else if c.is_whitespace() {
            chars.next();
            col += 1;
            spaced = true;
        } else if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
                col += 1;
            }
            spaced = true;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if !(c.is_ascii_alphanumeric() || c == '_') {
                    break;
                }
                s.push(c);
                chars.next();
                col += 1;
            }
            out.push(Token { tok: Tok::Ident(s), pos, spaced });
            spaced = false;
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if !c.is_ascii_digit() {
                    break;
                }
                s.push(c);
                chars.next();
                col += 1;
            }
            out.push(Token { tok: Tok::Int(s), pos, spaced });
            spaced = false;
        } else if PUNCT.contains(c) {
            chars.next();
            col += 1;
            out.push(Token { tok: Tok::Punct(c), pos, spaced });
            spaced = false;
        } else {
            return Err(ParseError::new(pos, ErrorKind::Syntax, format!("unexpected character `{c}`")));
        }
    }
    out.push(Token { tok: Tok::Eof, pos: Pos { line, col }, spaced: true });
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Expression before symbols are resolved.
#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Num(String),
    Ident(String),
    Call(String, Vec<Spanned>),
    /// `name[k1,k2,...](args)`
    Deriv(String, Vec<u32>, Vec<Spanned>),
    Neg(Box<Spanned>),
    Bin(BinOp, Box<Spanned>, Box<Spanned>),
    Pow(Box<Spanned>, i64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Spanned {
    pub node: Node,
    pub pos: Pos,
}

/// Cursor over the token stream.
pub struct Cursor {
    toks: Vec<Token>,
    at: usize,
}

impl Cursor {
    pub fn new(toks: Vec<Token>) -> Self {
        Cursor { toks, at: 0 }
    }

    pub fn peek(&self) -> &Token {
        &self.toks[self.at]
    }

    pub fn peek_at(&self, k: usize) -> &Token {
        &self.toks[(self.at + k).min(self.toks.len() - 1)]
    }

    pub fn pos(&self) -> Pos {
        self.peek().pos
    }

    pub fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    pub fn at_eof(&self) -> bool {
        self.peek().tok == Tok::Eof
    }

    pub fn is_punct(&self, c: char) -> bool {
        self.peek().tok == Tok::Punct(c)
    }

    pub fn eat_punct(&mut self, c: char) -> bool {
        if self.is_punct(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn is_word(&self, w: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == w)
    }

    pub fn eat_word(&mut self, w: &str) -> bool {
        if self.is_word(w) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn unexpected<T>(&self, wanted: &str) -> PResult<T> {
        let t = self.peek();
        Err(ParseError::new(t.pos, ErrorKind::Syntax, format!("expected {wanted}, found {}", t.tok)))
    }

    pub fn expect_punct(&mut self, c: char) -> PResult<()> {
        if self.eat_punct(c) {
            Ok(())
        } else {
            self.unexpected(&format!("`{c}`"))
        }
    }

    pub fn expect_word(&mut self, w: &str) -> PResult<()> {
        if self.eat_word(w) {
            Ok(())
        } else {
            self.unexpected(&format!("`{w}`"))
        }
    }

    pub fn ident(&mut self) -> PResult<(String, Pos)> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                let p = self.bump().pos;
                Ok((s, p))
            }
            _ => self.unexpected("a name"),
        }
    }

    /// Hyphenated word such as `check-lie` or `thm2-3`, written without spaces.
    pub fn word(&mut self) -> PResult<(String, Pos)> {
        let pos = self.pos();
        let mut s = match &self.peek().tok {
            Tok::Ident(s) | Tok::Int(s) => s.clone(),
            _ => return self.unexpected("a name"),
        };
        self.bump();
        loop {
            let glue = matches!(self.peek().tok, Tok::Punct('-') | Tok::Punct('.')) && !self.peek().spaced;
            let next_ok = matches!(self.peek_at(1).tok, Tok::Ident(_) | Tok::Int(_)) && !self.peek_at(1).spaced;
            if !(glue && next_ok) {
                break;
            }
            if let Tok::Punct(c) = self.bump().tok {
                s.push(c);
            }
            match self.bump().tok {
                Tok::Ident(w) | Tok::Int(w) => s.push_str(&w),
                _ => unreachable!(),
            }
        }
        Ok((s, pos))
    }

    pub fn expr(&mut self) -> PResult<Spanned> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.is_punct('+') {
                BinOp::Add
            } else if self.is_punct('-') {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let pos = self.bump().pos;
            let rhs = self.term()?;
            lhs = Spanned { node: Node::Bin(op, Box::new(lhs), Box::new(rhs)), pos };
        }
    }

    fn term(&mut self) -> PResult<Spanned> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.is_punct('*') {
                BinOp::Mul
            } else if self.is_punct('/') {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let pos = self.bump().pos;
            let rhs = self.unary()?;
            lhs = Spanned { node: Node::Bin(op, Box::new(lhs), Box::new(rhs)), pos };
        }
    }

    fn unary(&mut self) -> PResult<Spanned> {
        if self.is_punct('-') {
            let pos = self.bump().pos;
            let inner = self.unary()?;
            return Ok(Spanned { node: Node::Neg(Box::new(inner)), pos });
        }
        if self.eat_punct('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> PResult<Spanned> {
        let base = self.atom()?;
        if !self.is_punct('^') {
            return Ok(base);
        }
        let pos = self.bump().pos;
        let neg = self.eat_punct('-');
        let paren = !neg && self.eat_punct('(');
        let neg = neg || (paren && self.eat_punct('-'));
        let k = match &self.peek().tok {
            Tok::Int(s) => s.parse::<i64>().ok(),
            _ => return self.unexpected("an integer exponent"),
        };
        let Some(k) = k.filter(|k| *k <= i32::MAX as i64) else {
            return Err(ParseError::new(self.pos(), ErrorKind::Syntax, "exponent out of range"));
        };
        self.bump();
        if paren {
            self.expect_punct(')')?;
        }
        Ok(Spanned { node: Node::Pow(Box::new(base), if neg { -k } else { k }), pos })
    }

    fn args(&mut self) -> PResult<Vec<Spanned>> {
        self.expect_punct('(')?;
        let mut args = Vec::new();
        if self.eat_punct(')') {
            return Ok(args);
        }
        loop {
            args.push(self.expr()?);
            if self.eat_punct(')') {
                return Ok(args);
            }
            self.expect_punct(',')?;
        }
    }

    fn atom(&mut self) -> PResult<Spanned> {
        let pos = self.pos();
        match self.peek().tok.clone() {
            Tok::Int(s) => {
                self.bump();
                Ok(Spanned { node: Node::Num(s), pos })
            }
            Tok::Punct('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect_punct(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                if self.is_punct('(') {
                    let args = self.args()?;
                    return Ok(Spanned { node: Node::Call(name, args), pos });
                }
                if self.eat_punct('[') {
                    let mut counts = Vec::new();
                    loop {
                        match &self.peek().tok {
                            Tok::Int(s) => {
                                let k = s.parse::<u32>().map_err(|_| {
                                    ParseError::new(self.pos(), ErrorKind::Syntax, "derivative count out of range")
                                })?;
                                counts.push(k);
                                self.bump();
                            }
                            _ => return self.unexpected("a derivative count"),
                        }
                        if self.eat_punct(']') {
                            break;
                        }
                        self.expect_punct(',')?;
                    }
                    let args = self.args()?;
                    return Ok(Spanned { node: Node::Deriv(name, counts, args), pos });
                }
                Ok(Spanned { node: Node::Ident(name), pos })
            }
            _ => self.unexpected("an expression"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_are_one_based() {
        let toks = lex("vars t x;\n  dep u;").unwrap();
        assert_eq!(toks[0].pos, Pos { line: 1, col: 1 });
        assert_eq!(toks[4].pos, Pos { line: 2, col: 3 });
    }

    #[test]
    fn hyphenated_words_need_no_spaces() {
        let mut c = Cursor::new(lex("check-lie heat.algebra thm2-3 a - b").unwrap());
        assert_eq!(c.word().unwrap().0, "check-lie");
        assert_eq!(c.word().unwrap().0, "heat.algebra");
        assert_eq!(c.word().unwrap().0, "thm2-3");
        assert_eq!(c.word().unwrap().0, "a");
    }

    #[test]
    fn precedence() {
        let mut c = Cursor::new(lex("-1/2*x^2 + y").unwrap());
        let e = c.expr().unwrap();
        let Node::Bin(BinOp::Add, l, _) = e.node else { panic!() };
        let Node::Bin(BinOp::Mul, a, b) = l.node else { panic!() };
        assert!(matches!(b.node, Node::Pow(_, 2)));
        let Node::Bin(BinOp::Div, n, _) = a.node else { panic!() };
        assert!(matches!(n.node, Node::Neg(_)));
    }

    #[test]
    fn bad_character() {
        let e = lex("vars t;\n x $").unwrap_err();
        assert_eq!(e.pos, Pos { line: 2, col: 4 });
        assert_eq!(e.kind, ErrorKind::Syntax);
    }
}
