//! Lexer and parser for the batch script language. Polynomial expressions
//! are kept as source slices and parsed against the bound ring at
//! evaluation time, so an ideal can be written before its ring is known.

use derees_core::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Punct(char),
}

#[derive(Debug, Clone)]
pub struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
    /// byte offsets into the source
    pub start: usize,
    pub end: usize,
}

pub fn lex(src: &str) -> Result<Vec<Spanned>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let (mut line, mut col, mut i) = (1usize, 1usize, 0usize);
    while i < bytes.len() {
        let c = bytes[i];
        if c == b'#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_whitespace() {
            if c == b'\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
            continue;
        }
        let (start, l, co) = (i, line, col);
        let tok = if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
                col += 1;
            }
            let s = std::str::from_utf8(&bytes[start..i]).unwrap();
            Tok::Int(s.parse().map_err(|_| Error::Parse {
                line: l,
                col: co,
                msg: "integer out of range".into(),
            })?)
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
                col += 1;
            }
            Tok::Ident(std::str::from_utf8(&bytes[start..i]).unwrap().to_string())
        } else if "():;,=[]^*+-/".contains(c as char) {
            i += 1;
            col += 1;
            Tok::Punct(c as char)
        } else {
            return Err(Error::Parse {
                line: l,
                col: co,
                msg: format!("unexpected character `{}`", c as char),
            });
        };
        out.push(Spanned {
            tok,
            line: l,
            col: co,
            start,
            end: i,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Stmt {
    Ring {
        name: String,
        vars: Vec<(String, i64)>,
    },
    Ideal {
        name: String,
        gens: Vec<String>,
    },
    ReesExt {
        name: String,
        ring: String,
        ideal: String,
    },
    ReesSym {
        name: String,
        ring: String,
        degrees: Vec<i64>,
    },
    Blowup {
        name: String,
        ring: String,
        ideal: String,
    },
    ReportConnectivity {
        target: String,
        hmin: i64,
        cutoff: u32,
    },
    ReportFibers {
        target: String,
        lo: i64,
        hi: i64,
    },
    ReportCharts {
        target: String,
    },
    ReportCotangent {
        ring: String,
        ideal: String,
        n: i64,
    },
}

impl std::fmt::Display for Stmt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Stmt::Ring { name, vars } => {
                let vs: Vec<String> = vars.iter().map(|(n, w)| format!("{}:{}", n, w)).collect();
                write!(f, "ring {} = poly({});", name, vs.join(", "))
            }
            Stmt::Ideal { name, gens } => write!(f, "ideal {} = ({});", name, gens.join(", ")),
            Stmt::ReesExt { name, ring, ideal } => {
                write!(f, "rees {} = rees_ext({}, {});", name, ring, ideal)
            }
            Stmt::ReesSym {
                name,
                ring,
                degrees,
            } => {
                let ds: Vec<String> = degrees.iter().map(|d| d.to_string()).collect();
                write!(f, "rees {} = rees_sym({}, module({}));", name, ring, ds.join(", "))
            }
            Stmt::Blowup { name, ring, ideal } => {
                write!(f, "blowup {} = blowup({}, {});", name, ring, ideal)
            }
            Stmt::ReportConnectivity {
                target,
                hmin,
                cutoff,
            } => write!(
                f,
                "report connectivity({}, hmin={}, cutoff={});",
                target, hmin, cutoff
            ),
            Stmt::ReportFibers { target, lo, hi } => {
                write!(f, "report fibers({}, range=[{},{}]);", target, lo, hi)
            }
            Stmt::ReportCharts { target } => write!(f, "report charts({});", target),
            Stmt::ReportCotangent { ring, ideal, n } => {
                write!(f, "report cotangent({}, {}, n={});", ring, ideal, n)
            }
        }
    }
}

pub struct Parser<'a> {
    src: &'a str,
    toks: Vec<Spanned>,
    pos: usize,
}

impl<'a> Parser<'a> {
    pub fn new(src: &'a str) -> Result<Self> {
        Ok(Parser {
            src,
            toks: lex(src)?,
            pos: 0,
        })
    }

    fn err_at(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self
            .toks
            .get(self.pos)
            .map(|t| (t.line, t.col))
            .unwrap_or_else(|| {
                self.toks
                    .last()
                    .map(|t| (t.line, t.col + (t.end - t.start)))
                    .unwrap_or((1, 1))
            });
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect_punct(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(Tok::Punct(p)) if *p == c => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err_at(format!("expected `{}`", c))),
        }
    }

    fn expect_ident(&mut self) -> Result<String> {
        match self.bump() {
            Some(Tok::Ident(s)) => Ok(s),
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.err_at("expected an identifier"))
            }
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<()> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err_at(format!("expected `{}`", kw))),
        }
    }

    fn expect_int(&mut self) -> Result<i64> {
        let neg = matches!(self.peek(), Some(Tok::Punct('-')));
        if neg {
            self.pos += 1;
        }
        match self.bump() {
            Some(Tok::Int(v)) => Ok(if neg { -v } else { v }),
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.err_at("expected an integer"))
            }
        }
    }

    /// Source slice of a polynomial expression up to a top-level `,` or `)`.
    fn poly_source(&mut self) -> Result<String> {
        let start = self
            .toks
            .get(self.pos)
            .ok_or_else(|| self.err_at("expected a polynomial"))?
            .start;
        let mut depth = 0usize;
        let mut end = start;
        let mut prev_atom = false;
        loop {
            match self.peek() {
                None => return Err(self.err_at("unterminated polynomial expression")),
                Some(Tok::Punct('(')) => {
                    depth += 1;
                    prev_atom = false;
                }
                Some(Tok::Punct(')')) if depth == 0 => break,
                Some(Tok::Punct(')')) => {
                    depth -= 1;
                    prev_atom = true;
                }
                Some(Tok::Punct(',')) if depth == 0 => break,
                Some(Tok::Punct(c)) if "+-*/^".contains(*c) => prev_atom = false,
                Some(Tok::Ident(_)) | Some(Tok::Int(_)) => {
                    if prev_atom {
                        return Err(self.err_at("missing separator between terms"));
                    }
                    prev_atom = true;
                }
                Some(_) => return Err(self.err_at("unexpected token in polynomial")),
            }
            end = self.toks[self.pos].end;
            self.pos += 1;
        }
        if end == start {
            return Err(self.err_at("expected a polynomial"));
        }
        Ok(self.src[start..end].to_string())
    }

    fn statement(&mut self) -> Result<Stmt> {
        let kw = self.expect_ident()?;
        let stmt = match kw.as_str() {
            "ring" => {
                let name = self.expect_ident()?;
                self.expect_punct('=')?;
                self.expect_keyword("poly")?;
                self.expect_punct('(')?;
                let mut vars = Vec::new();
                if !matches!(self.peek(), Some(Tok::Punct(')'))) {
                    loop {
                        let v = self.expect_ident()?;
                        self.expect_punct(':')?;
                        let w = self.expect_int()?;
                        vars.push((v, w));
                        if matches!(self.peek(), Some(Tok::Punct(','))) {
                            self.pos += 1;
                        } else {
                            break;
                        }
                    }
                }
                self.expect_punct(')')?;
                Stmt::Ring { name, vars }
            }
            "ideal" => {
                let name = self.expect_ident()?;
                self.expect_punct('=')?;
                self.expect_punct('(')?;
                let mut gens = Vec::new();
                if !matches!(self.peek(), Some(Tok::Punct(')'))) {
                    loop {
                        gens.push(self.poly_source()?);
                        if matches!(self.peek(), Some(Tok::Punct(','))) {
                            self.pos += 1;
                        } else {
                            break;
                        }
                    }
                }
                self.expect_punct(')')?;
                Stmt::Ideal { name, gens }
            }
            "rees" => {
                let name = self.expect_ident()?;
                self.expect_punct('=')?;
                let ctor = self.expect_ident()?;
                self.expect_punct('(')?;
                let ring = self.expect_ident()?;
                self.expect_punct(',')?;
                let stmt = match ctor.as_str() {
                    "rees_ext" => {
                        let ideal = self.expect_ident()?;
                        Stmt::ReesExt { name, ring, ideal }
                    }
                    "rees_sym" => {
                        self.expect_keyword("module")?;
                        self.expect_punct('(')?;
                        let mut degrees = Vec::new();
                        if !matches!(self.peek(), Some(Tok::Punct(')'))) {
                            loop {
                                degrees.push(self.expect_int()?);
                                if matches!(self.peek(), Some(Tok::Punct(','))) {
                                    self.pos += 1;
                                } else {
                                    break;
                                }
                            }
                        }
                        self.expect_punct(')')?;
                        Stmt::ReesSym {
                            name,
                            ring,
                            degrees,
                        }
                    }
                    other => return Err(self.err_at(format!("unknown rees constructor `{}`", other))),
                };
                self.expect_punct(')')?;
                stmt
            }
            "blowup" => {
                let name = self.expect_ident()?;
                self.expect_punct('=')?;
                self.expect_keyword("blowup")?;
                self.expect_punct('(')?;
                let ring = self.expect_ident()?;
                self.expect_punct(',')?;
                let ideal = self.expect_ident()?;
                self.expect_punct(')')?;
                Stmt::Blowup { name, ring, ideal }
            }
            "report" => {
                let cmd = self.expect_ident()?;
                self.expect_punct('(')?;
                let stmt = match cmd.as_str() {
                    "connectivity" => {
                        let target = self.expect_ident()?;
                        self.expect_punct(',')?;
                        self.expect_keyword("hmin")?;
                        self.expect_punct('=')?;
                        let hmin = self.expect_int()?;
                        self.expect_punct(',')?;
                        self.expect_keyword("cutoff")?;
                        self.expect_punct('=')?;
                        let cutoff = self.expect_int()?;
                        if cutoff < 0 {
                            return Err(self.err_at("cutoff must be nonnegative"));
                        }
                        Stmt::ReportConnectivity {
                            target,
                            hmin,
                            cutoff: cutoff as u32,
                        }
                    }
                    "fibers" => {
                        let target = self.expect_ident()?;
                        self.expect_punct(',')?;
                        self.expect_keyword("range")?;
                        self.expect_punct('=')?;
                        self.expect_punct('[')?;
                        let lo = self.expect_int()?;
                        self.expect_punct(',')?;
                        let hi = self.expect_int()?;
                        self.expect_punct(']')?;
                        Stmt::ReportFibers { target, lo, hi }
                    }
                    "charts" => {
                        let target = self.expect_ident()?;
                        Stmt::ReportCharts { target }
                    }
                    "cotangent" => {
                        let ring = self.expect_ident()?;
                        self.expect_punct(',')?;
                        let ideal = self.expect_ident()?;
                        self.expect_punct(',')?;
                        self.expect_keyword("n")?;
                        self.expect_punct('=')?;
                        let n = self.expect_int()?;
                        Stmt::ReportCotangent { ring, ideal, n }
                    }
                    other => return Err(self.err_at(format!("unknown report command `{}`", other))),
                };
                self.expect_punct(')')?;
                stmt
            }
            other => return Err(self.err_at(format!("unknown statement keyword `{}`", other))),
        };
        self.expect_punct(';')?;
        Ok(stmt)
    }

    pub fn script(&mut self) -> Result<Vec<Stmt>> {
        let mut out = Vec::new();
        while self.peek().is_some() {
            out.push(self.statement()?);
        }
        Ok(out)
    }
}

pub fn parse(src: &str) -> Result<Vec<Stmt>> {
    Parser::new(src)?.script()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_ring_binding() {
        let s = parse("ring A = poly(x:0);").unwrap();
        assert_eq!(
            s,
            vec![Stmt::Ring {
                name: "A".into(),
                vars: vec![("x".into(), 0)]
            }]
        );
    }

    #[test]
    fn missing_separator_is_a_syntax_error() {
        let e = parse("ideal I = (x^2 x);").unwrap_err();
        assert!(format!("{}", e).contains("separator"));
    }

    #[test]
    fn plane_origin_script_has_four_statements() {
        let src = "ring R = poly(x:0, y:0);\n\
                   ideal I = (x, y);\n\
                   blowup B = blowup(R, I);\n\
                   report charts(B);\n";
        let s = parse(src).unwrap();
        assert_eq!(s.len(), 4);
        assert!(matches!(s[3], Stmt::ReportCharts { .. }));
    }

    #[test]
    fn negative_weights_and_ranges() {
        let s = parse("ring R = poly(t:-1);\nreport fibers(E, range=[-2,3]);").unwrap();
        assert_eq!(
            s[0],
            Stmt::Ring {
                name: "R".into(),
                vars: vec![("t".into(), -1)]
            }
        );
        assert_eq!(
            s[1],
            Stmt::ReportFibers {
                target: "E".into(),
                lo: -2,
                hi: 3
            }
        );
    }

    #[test]
    fn pretty_print_reparses_to_same_ast() {
        let src = "ring R = poly(x:0, y:0);\n\
                   ideal I = (x^2, x*y);\n\
                   rees E = rees_ext(R, I);\n\
                   rees F = rees_sym(R, module(0, 1));\n\
                   blowup B = blowup(R, I);\n\
                   report connectivity(E, hmin=-3, cutoff=6);\n\
                   report fibers(E, range=[-2,3]);\n\
                   report charts(B);\n\
                   report cotangent(R, I, n=1);\n";
        let s = parse(src).unwrap();
        let printed: Vec<String> = s.iter().map(|st| st.to_string()).collect();
        let reparsed = parse(&printed.join("\n")).unwrap();
        assert_eq!(s, reparsed);
    }

    #[test]
    fn comments_and_unknown_commands() {
        assert!(parse("# just a comment\n").unwrap().is_empty());
        assert!(parse("report frobnicate(E);").is_err());
    }
}
