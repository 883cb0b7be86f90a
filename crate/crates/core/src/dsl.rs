//! Text format for expressions and systems.
//!
//! ```text
//! system findex;            # optional header
//! coords: x, y;
//! Z: x + y*mu + x*y*mu^2 + mu^3;
//! A0: [[x*y, x^2], [y^2 - 1, x*y]];
//! A1: [[1, 0], [0, 1]];
//! ```
//!
//! Precedence from tightest: `^`, unary `-`, `* /`, `+ -`. `mu` is reserved.

use num_bigint::BigInt;

use crate::algebra::{Rational, RationalFunction as Rf, RfMatrix, Vars};
use crate::error::{Error, Result};
use crate::mu_ring::{MonicZ, MuPoly, SolutionVec};
use crate::system::{SystemSpec, TensorPoly};

pub const MU: &str = "mu";

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Op(char),
    Eof,
}

#[derive(Clone)]
struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<u8> {
        let c = *self.src.get(self.pos)?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else if (c & 0xC0) != 0x80 {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while let Some(&c) = self.src.get(self.pos) {
            if c == b'#' {
                while let Some(&d) = self.src.get(self.pos) {
                    if d == b'\n' {
                        break;
                    }
                    self.bump();
                }
            } else if c.is_ascii_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            line: self.line,
            column: self.col,
            message: message.into(),
        }
    }

    fn next(&mut self) -> Result<(Tok, usize, usize)> {
        self.skip_ws();
        let (line, col) = (self.line, self.col);
        let Some(&c) = self.src.get(self.pos) else {
            return Ok((Tok::Eof, line, col));
        };
        if c.is_ascii_alphabetic() || c == b'_' {
            let start = self.pos;
            while self
                .src
                .get(self.pos)
                .map_or(false, |d| d.is_ascii_alphanumeric() || *d == b'_')
            {
                self.bump();
            }
            let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
            return Ok((Tok::Ident(s.to_string()), line, col));
        }
        if c.is_ascii_digit() {
            let start = self.pos;
            while self.src.get(self.pos).map_or(false, u8::is_ascii_digit) {
                self.bump();
            }
            let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
            return Ok((Tok::Int(s.parse().expect("digits")), line, col));
        }
        if b"+-*/^()[],:;".contains(&c) {
            self.bump();
            return Ok((Tok::Op(c as char), line, col));
        }
        Err(self.err(format!("unexpected character `{}`", c as char)))
    }

    fn peek(&self) -> Result<Tok> {
        self.clone().next().map(|t| t.0)
    }

    fn expect(&mut self, op: char) -> Result<()> {
        let (t, line, column) = self.next()?;
        if t == Tok::Op(op) {
            Ok(())
        } else {
            Err(Error::Syntax {
                line,
                column,
                message: format!("expected `{op}`, found {}", describe(&t)),
            })
        }
    }

    fn ident(&mut self) -> Result<String> {
        let (t, line, column) = self.next()?;
        match t {
            Tok::Ident(s) => Ok(s),
            other => Err(Error::Syntax {
                line,
                column,
                message: format!("expected identifier, found {}", describe(&other)),
            }),
        }
    }

    /// Raw text up to (not including) the next `;`.
    fn raw_until_semicolon(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while let Some(&c) = self.src.get(self.pos) {
            if c == b';' {
                let s = String::from_utf8_lossy(&self.src[start..self.pos]).trim().to_string();
                return Ok(s);
            }
            self.bump();
        }
        Err(self.err("expected `;`"))
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Int(n) => format!("`{n}`"),
        Tok::Op(c) => format!("`{c}`"),
        Tok::Eof => "end of input".into(),
    }
}

struct ExprParser<'a, 'v> {
    lex: Lexer<'a>,
    vars: &'v Vars,
}

impl ExprParser<'_, '_> {
    fn expr(&mut self) -> Result<MuPoly> {
        let mut acc = self.term()?;
        loop {
            match self.lex.peek()? {
                Tok::Op('+') => {
                    self.lex.next()?;
                    acc = acc.add(&self.term()?);
                }
                Tok::Op('-') => {
                    self.lex.next()?;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MuPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.lex.peek()? {
                Tok::Op('*') => {
                    self.lex.next()?;
                    acc = acc.mul(&self.unary()?);
                }
                Tok::Op('/') => {
                    let (_, line, column) = self.lex.next()?;
                    let d = self.unary()?;
                    let d = coefficient(&d, line, column)?;
                    if d.is_zero() {
                        return Err(Error::DivisionByZero);
                    }
                    acc = acc.scale(&d.recip()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MuPoly> {
        if self.lex.peek()? == Tok::Op('-') {
            self.lex.next()?;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<MuPoly> {
        let base = self.atom()?;
        if self.lex.peek()? != Tok::Op('^') {
            return Ok(base);
        }
        let (_, line, column) = self.lex.next()?;
        let neg = if self.lex.peek()? == Tok::Op('-') {
            self.lex.next()?;
            true
        } else {
            false
        };
        let (t, l2, c2) = self.lex.next()?;
        let Tok::Int(e) = t else {
            return Err(Error::Syntax {
                line: l2,
                column: c2,
                message: format!("expected integer exponent, found {}", describe(&t)),
            });
        };
        let e: u32 = e.try_into().map_err(|_| Error::Syntax {
            line: l2,
            column: c2,
            message: "exponent too large".into(),
        })?;
        if neg {
            let b = coefficient(&base, line, column)?;
            return Ok(MuPoly::constant(b.powi(-(e as i64))?));
        }
        let mut acc = MuPoly::one(self.vars);
        for _ in 0..e {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<MuPoly> {
        let (t, line, column) = self.lex.next()?;
        match t {
            Tok::Int(n) => Ok(MuPoly::constant(Rf::constant(self.vars, Rational::from_integer(n)))),
            Tok::Ident(s) if s == MU => Ok(MuPoly::mu(self.vars)),
            Tok::Ident(s) => match self.vars.index_of(&s) {
                Ok(i) => Ok(MuPoly::constant(Rf::var(self.vars, i))),
                Err(_) => Err(Error::UnknownIdentifier(s)),
            },
            Tok::Op('(') => {
                let e = self.expr()?;
                self.lex.expect(')')?;
                Ok(e)
            }
            other => Err(Error::Syntax {
                line,
                column,
                message: format!("expected expression, found {}", describe(&other)),
            }),
        }
    }
}

fn coefficient(p: &MuPoly, _line: usize, _column: usize) -> Result<Rf> {
    match p.degree() {
        None => Ok(Rf::zero(p.vars())),
        Some(0) => Ok(p.coeff(0)),
        Some(_) => Err(Error::MuInCoefficient),
    }
}

fn finish(lex: &mut Lexer<'_>) -> Result<()> {
    let (t, line, column) = lex.next()?;
    if t == Tok::Eof {
        Ok(())
    } else {
        Err(Error::Syntax {
            line,
            column,
            message: format!("unexpected {}", describe(&t)),
        })
    }
}

/// Parses a μ-polynomial expression.
pub fn parse_mupoly(text: &str, vars: &Vars) -> Result<MuPoly> {
    let mut p = ExprParser {
        lex: Lexer::new(text),
        vars,
    };
    let e = p.expr()?;
    finish(&mut p.lex)?;
    Ok(e)
}

/// Parses a coordinate expression; `mu` is rejected.
pub fn parse_expression(text: &str, vars: &Vars) -> Result<Rf> {
    let e = parse_mupoly(text, vars)?;
    coefficient(&e, 1, 1)
}

/// Parses `(V₀, …, V_{m−1})` or a μ-polynomial of degree below `m`.
pub fn parse_solution(text: &str, vars: &Vars, m: usize) -> Result<SolutionVec> {
    let lex = Lexer::new(text);
    if lex.peek()? == Tok::Op('(') {
        let mut probe = lex.clone();
        probe.next()?;
        let mut entries = Vec::new();
        let mut p = ExprParser { lex: probe, vars };
        entries.push(p.expr()?);
        if p.lex.peek()? == Tok::Op(',') {
            while p.lex.peek()? == Tok::Op(',') {
                p.lex.next()?;
                entries.push(p.expr()?);
            }
            p.lex.expect(')')?;
            finish(&mut p.lex)?;
            if entries.len() != m {
                return Err(Error::Dimension(format!(
                    "expected {m} entries, found {}",
                    entries.len()
                )));
            }
            let es: Result<Vec<Rf>> = entries.iter().map(|e| coefficient(e, 1, 1)).collect();
            return SolutionVec::new(es?);
        }
    }
    let p = parse_mupoly(text, vars)?;
    SolutionVec::from_mupoly(&p, m)
}

/// Parses a system document.
pub fn parse_system(text: &str) -> Result<SystemSpec> {
    let mut lex = Lexer::new(text);
    let mut name = String::from("unnamed");
    if lex.peek()? == Tok::Ident("system".into()) {
        lex.next()?;
        name = lex.raw_until_semicolon()?;
        if name.is_empty() {
            return Err(lex.err("empty system name"));
        }
        lex.expect(';')?;
    }
    let (t, line, column) = lex.next()?;
    if t != Tok::Ident("coords".into()) {
        return Err(Error::Syntax {
            line,
            column,
            message: format!("expected `coords:`, found {}", describe(&t)),
        });
    }
    lex.expect(':')?;
    let mut names = vec![lex.ident()?];
    while lex.peek()? == Tok::Op(',') {
        lex.next()?;
        names.push(lex.ident()?);
    }
    lex.expect(';')?;
    if names.iter().any(|n| n == MU) {
        return Err(Error::Invalid("`mu` is reserved and cannot be a coordinate".into()));
    }
    let vars = Vars::new(&names)?;

    let (t, line, column) = lex.next()?;
    if t != Tok::Ident("Z".into()) {
        return Err(Error::Syntax {
            line,
            column,
            message: format!("expected `Z:`, found {}", describe(&t)),
        });
    }
    lex.expect(':')?;
    let mut p = ExprParser { lex, vars: &vars };
    let zp = p.expr()?;
    let mut lex = p.lex;
    lex.expect(';')?;
    let z = MonicZ::from_mupoly(&zp)?;

    let mut mats: Vec<Option<RfMatrix>> = Vec::new();
    loop {
        let (t, line, column) = lex.next()?;
        let idx = match &t {
            Tok::Eof if !mats.is_empty() => break,
            Tok::Ident(s) if s.len() > 1 && s.starts_with('A') && s[1..].bytes().all(|b| b.is_ascii_digit()) => {
                s[1..].parse::<usize>().map_err(|_| Error::Syntax {
                    line,
                    column,
                    message: "bad tensor index".into(),
                })?
            }
            other => {
                return Err(Error::Syntax {
                    line,
                    column,
                    message: format!("expected `A<i>:`, found {}", describe(other)),
                })
            }
        };
        lex.expect(':')?;
        let (mat, rest) = parse_matrix(lex, &vars)?;
        lex = rest;
        lex.expect(';')?;
        if mats.len() <= idx {
            mats.resize(idx + 1, None);
        }
        if mats[idx].is_some() {
            return Err(Error::Syntax {
                line,
                column,
                message: format!("A{idx} declared twice"),
            });
        }
        mats[idx] = Some(mat);
    }
    let n = vars.len();
    let mats: Vec<RfMatrix> = mats
        .into_iter()
        .map(|m| m.unwrap_or_else(|| RfMatrix::zeros(&vars, n, n)))
        .collect();
    SystemSpec::new(&name, &vars, z, TensorPoly::new(mats)?)
}

fn parse_matrix<'a>(mut lex: Lexer<'a>, vars: &Vars) -> Result<(RfMatrix, Lexer<'a>)> {
    lex.expect('[')?;
    let mut rows = Vec::new();
    loop {
        lex.expect('[')?;
        let mut row = Vec::new();
        loop {
            let (line, column) = {
                let mut l = lex.clone();
                l.skip_ws();
                (l.line, l.col)
            };
            let mut p = ExprParser { lex, vars };
            let e = p.expr()?;
            lex = p.lex;
            row.push(coefficient(&e, line, column)?);
            match lex.next()? {
                (Tok::Op(','), ..) => continue,
                (Tok::Op(']'), ..) => break,
                (t, line, column) => {
                    return Err(Error::Syntax {
                        line,
                        column,
                        message: format!("expected `,` or `]`, found {}", describe(&t)),
                    })
                }
            }
        }
        rows.push(row);
        match lex.next()? {
            (Tok::Op(','), ..) => continue,
            (Tok::Op(']'), ..) => break,
            (t, line, column) => {
                return Err(Error::Syntax {
                    line,
                    column,
                    message: format!("expected `,` or `]`, found {}", describe(&t)),
                })
            }
        }
    }
    Ok((RfMatrix::from_rows(vars, rows)?, lex))
}

/// Canonical text of a system; parses back to an equal value.
pub fn print_system(sys: &SystemSpec) -> String {
    let mut out = String::new();
    out.push_str(&format!("system {};\n", sys.name()));
    out.push_str(&format!("coords: {};\n", sys.vars().names().join(", ")));
    out.push_str(&format!("Z: {};\n", sys.z()));
    for (i, a) in sys.a().mats().iter().enumerate() {
        out.push_str(&format!("A{i}: {a};\n"));
    }
    out
}
