//! Parser for the canonical polynomial text form, e.g. `3/2*x^2*y - v`.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::poly::{Polynomial, WeightedRing};
use crate::scalar::Q;

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

pub struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    pub line: usize,
    pub col: usize,
}

impl<'a> Lexer<'a> {
    pub fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> u8 {
        let c = self.src[self.pos];
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        c
    }

    pub fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }

    pub fn next_tok(&mut self) -> Result<Option<(Tok, usize, usize)>> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.bump();
        }
        if self.pos >= self.src.len() {
            return Ok(None);
        }
        let (line, col) = (self.line, self.col);
        let c = self.src[self.pos];
        let tok = match c {
            b'+' => {
                self.bump();
                Tok::Plus
            }
            b'-' => {
                self.bump();
                Tok::Minus
            }
            b'*' => {
                self.bump();
                Tok::Star
            }
            b'^' => {
                self.bump();
                Tok::Caret
            }
            b'/' => {
                self.bump();
                Tok::Slash
            }
            b'(' => {
                self.bump();
                Tok::LParen
            }
            b')' => {
                self.bump();
                Tok::RParen
            }
            b'0'..=b'9' => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.bump();
                }
                let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Tok::Int(s.parse().unwrap())
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.bump();
                }
                Tok::Ident(std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string())
            }
            other => return Err(self.err(format!("unexpected character `{}`", other as char))),
        };
        Ok(Some((tok, line, col)))
    }
}

pub struct PolyParser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    ring: Arc<WeightedRing>,
}

impl PolyParser {
    pub fn new(src: &str, ring: &Arc<WeightedRing>) -> Result<Self> {
        let mut lx = Lexer::new(src);
        let mut toks = Vec::new();
        while let Some(t) = lx.next_tok()? {
            toks.push(t);
        }
        Ok(PolyParser {
            toks,
            pos: 0,
            ring: ring.clone(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn err_here(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self
            .toks
            .get(self.pos)
            .map(|(_, l, c)| (*l, *c))
            .unwrap_or((1, 1));
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn expr(&mut self) -> Result<Polynomial<Q>> {
        let mut acc = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            self.term()?.neg()
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial<Q>> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial<Q>> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.toks.get(self.pos).cloned() {
                Some((Tok::Int(n), _, _)) => {
                    self.pos += 1;
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| self.err_here("exponent out of range"))?;
                    Ok(base.pow(e))
                }
                _ => Err(self.err_here("expected integer exponent after `^`")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial<Q>> {
        match self.toks.get(self.pos).cloned() {
            Some((Tok::Int(n), _, _)) => {
                self.pos += 1;
                // optional /den
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    match self.toks.get(self.pos).cloned() {
                        Some((Tok::Int(d), _, _)) => {
                            self.pos += 1;
                            if d == BigInt::from(0) {
                                return Err(self.err_here("zero denominator"));
                            }
                            Ok(Polynomial::constant(&self.ring, Q::new(n, d)))
                        }
                        _ => Err(self.err_here("expected denominator after `/`")),
                    }
                } else {
                    Ok(Polynomial::constant(&self.ring, Q::from_integer(n)))
                }
            }
            Some((Tok::Ident(name), _, _)) => {
                self.pos += 1;
                Polynomial::var_named(&self.ring, &name).map_err(|e| match e {
                    Error::UnknownVariable(v) => self.err_here(format!("unknown variable `{}`", v)),
                    other => other,
                })
            }
            Some((Tok::LParen, _, _)) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() == Some(&Tok::RParen) {
                    self.pos += 1;
                    Ok(inner)
                } else {
                    Err(self.err_here("expected `)`"))
                }
            }
            Some((Tok::Minus, _, _)) => {
                self.pos += 1;
                Ok(self.factor()?.neg())
            }
            _ => Err(self.err_here("expected polynomial atom")),
        }
    }

    pub fn parse_all(&mut self) -> Result<Polynomial<Q>> {
        let p = self.expr()?;
        if self.pos != self.toks.len() {
            return Err(self.err_here("trailing input after polynomial"));
        }
        Ok(p)
    }
}

/// Parse a polynomial in the canonical text form.
pub fn parse_poly(src: &str, ring: &Arc<WeightedRing>) -> Result<Polynomial<Q>> {
    PolyParser::new(src, ring)?.parse_all()
}
