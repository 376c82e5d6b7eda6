//! Text grammar for Laurent polynomials.
//!
//! ```text
//! expr    := ['+'|'-'] term (('+'|'-') term)*
//! term    := factor (('*'|'/') factor)*
//! factor  := atom ['^' ['-'] int | '^' '(' ['-'] int ')']
//! atom    := int | var | '(' expr ')'
//! var     := 'x' | 'y' | 'z' | 'x' digits
//! ```
//!
//! Negative powers are allowed only on monomials with coefficient ±1, and
//! `a / b` is accepted only when the division is exact in `ℤ[x^±1]`.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::{ExponentVector, LaurentPoly};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        pos,
        msg: msg.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((start, Tok::Plus)),
            b'-' => out.push((start, Tok::Minus)),
            b'*' => out.push((start, Tok::Star)),
            b'/' => out.push((start, Tok::Slash)),
            b'^' => out.push((start, Tok::Caret)),
            b'(' => out.push((start, Tok::LParen)),
            b')' => out.push((start, Tok::RParen)),
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                out.push((start, Tok::Int(n)));
                continue;
            }
            b'x' => {
                i += 1;
                if i < bytes.len() && bytes[i].is_ascii_digit() {
                    let s = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    let k: usize = text[s..i]
                        .parse()
                        .map_err(|_| err(start, "variable index too large"))?;
                    if k == 0 {
                        return Err(err(start, "variables are numbered from x1"));
                    }
                    out.push((start, Tok::Var(k - 1)));
                } else {
                    out.push((start, Tok::Var(0)));
                }
                continue;
            }
            b'y' => out.push((start, Tok::Var(1))),
            b'z' => out.push((start, Tok::Var(2))),
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(err(start, format!("unexpected character {ch:?}")));
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    nvars: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        let at = self.offset();
        match self.bump() {
            Some(ref got) if *got == t => Ok(()),
            Some(got) => Err(err(at, format!("expected {t:?}, found {got:?}"))),
            None => Err(err(at, format!("expected {t:?}, found end of input"))),
        }
    }

    fn expr(&mut self) -> Result<LaurentPoly> {
        let mut acc = LaurentPoly::zero(self.nvars);
        let mut negate = false;
        match self.peek() {
            Some(Tok::Plus) => {
                self.bump();
            }
            Some(Tok::Minus) => {
                self.bump();
                negate = true;
            }
            _ => {}
        }
        loop {
            let t = self.term()?;
            acc = if negate { acc - t } else { acc + t };
            match self.peek() {
                Some(Tok::Plus) => negate = false,
                Some(Tok::Minus) => negate = true,
                _ => return Ok(acc),
            }
            self.bump();
        }
    }

    fn term(&mut self) -> Result<LaurentPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = acc * self.factor()?;
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let at = self.offset();
                    let d = self.factor()?;
                    if d.is_zero() {
                        return Err(err(at, "division by zero"));
                    }
                    acc = acc
                        .try_div_exact(&d)?
                        .ok_or_else(|| err(at, "division is not exact"))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<LaurentPoly> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        let paren = self.peek() == Some(&Tok::LParen);
        if paren {
            self.bump();
        }
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.bump();
            true
        } else {
            false
        };
        let k = match self.bump() {
            Some(Tok::Int(k)) => u32::try_from(&k).map_err(|_| err(at, "exponent too large"))?,
            _ => return Err(err(at, "expected an integer exponent")),
        };
        if paren {
            self.expect(Tok::RParen)?;
        }
        if !neg {
            return Ok(base.pow(k));
        }
        match base.terms().collect::<Vec<_>>().as_slice() {
            [(e, c)] if c.abs().is_one() => {
                let sign = if c.is_negative() && k % 2 == 1 { -1 } else { 1 };
                Ok(LaurentPoly::monomial(e.scale(-(k as i64)), sign))
            }
            _ => Err(err(at, "negative powers are only allowed on monomials")),
        }
    }

    fn atom(&mut self) -> Result<LaurentPoly> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Int(c)) => Ok(LaurentPoly::constant(self.nvars, c)),
            Some(Tok::Var(i)) => {
                if i >= self.nvars {
                    return Err(err(
                        at,
                        format!(
                            "variable {} out of range for {} variables",
                            i + 1,
                            self.nvars
                        ),
                    ));
                }
                Ok(LaurentPoly::monomial(
                    ExponentVector::unit(self.nvars, i),
                    1,
                ))
            }
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(t) => Err(err(at, format!("unexpected {t:?}"))),
            None => Err(err(at, "unexpected end of input")),
        }
    }
}

pub(super) fn parse(text: &str, nvars: Option<usize>) -> Result<LaurentPoly> {
    let toks = lex(text)?;
    let nvars = match nvars {
        Some(n) => n,
        None => toks
            .iter()
            .filter_map(|(_, t)| match t {
                Tok::Var(i) => Some(i + 1),
                _ => None,
            })
            .max()
            .unwrap_or(1),
    };
    if toks.is_empty() {
        return Err(err(0, "empty input"));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        nvars,
    };
    let out = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(err(p.offset(), "trailing input"));
    }
    Ok(out)
}

/// Parses with explicitly named variables, e.g. `["a", "b"]`.
pub fn parse_with_vars(text: &str, names: &[&str]) -> Result<LaurentPoly> {
    let mut rewritten = String::with_capacity(text.len());
    let mut chars = text.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        if c.is_ascii_alphabetic() {
            let mut j = i + c.len_utf8();
            while let Some(&(k, d)) = chars.peek() {
                if d.is_ascii_alphanumeric() || d == '_' {
                    j = k + d.len_utf8();
                    chars.next();
                } else {
                    break;
                }
            }
            let ident = &text[i..j];
            let idx = names
                .iter()
                .position(|n| *n == ident)
                .ok_or_else(|| err(i, format!("unknown variable {ident:?}")))?;
            rewritten.push_str(&format!("x{}", idx + 1));
        } else {
            rewritten.push(c);
        }
    }
    parse(&rewritten, Some(names.len()))
}
