//! Text forms of field scalars, chain ring elements and quotient ring elements.
//!
//! Element grammar, whitespace-insensitive:
//!
//! ```text
//! expr   := ["-"] term (("+" | "-") term)*
//! term   := factor ("*" factor)*
//! factor := atom ["^" int]
//! atom   := int | "[" int ("," int)* "]" | "u" | "phi" | "x" | "(" expr ")"
//! ```
//!
//! Bare integers are read modulo `p`; bracketed scalars list base-`p` digits,
//! lowest first.

use crate::chain::{ChainRing, ChainRingElement};
use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldElement};
use crate::quotient::{QuotElement, RingContext};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(u64),
    Ident(String),
    Sym(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    text: String,
    pos: usize,
}

fn perr<T>(token: &str, position: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        token: token.to_string(),
        position,
        message: message.into(),
    })
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            let v = match text.parse::<u64>() {
                Ok(v) => v,
                Err(_) => return perr(&text, pos, "integer out of range"),
            };
            out.push(Token {
                tok: Tok::Int(v),
                text,
                pos,
            });
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_alphanumeric() {
                i += 1;
            }
            let text: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            out.push(Token {
                tok: Tok::Ident(text.clone()),
                text,
                pos,
            });
        } else if "+-*^[],()".contains(c) {
            out.push(Token {
                tok: Tok::Sym(c),
                text: c.to_string(),
                pos,
            });
            i += 1;
        } else {
            return perr(&c.to_string(), pos, "unexpected character");
        }
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a RingContext,
    toks: Vec<Token>,
    at: usize,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.at)
    }

    fn peek_sym(&self, c: char) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Sym(d), .. }) if *d == c)
    }

    fn fail<T>(&self, message: &str) -> Result<T> {
        match self.peek() {
            Some(t) => perr(&t.text, t.pos, message),
            None => perr("", self.end, message),
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.peek_sym(c) {
            self.at += 1;
            Ok(())
        } else {
            self.fail(&format!("expected `{c}`"))
        }
    }

    fn int(&mut self) -> Result<u64> {
        match self.peek() {
            Some(Token { tok: Tok::Int(v), .. }) => {
                let v = *v;
                self.at += 1;
                Ok(v)
            }
            _ => self.fail("expected an integer"),
        }
    }

    fn expr(&mut self) -> Result<QuotElement> {
        let r = self.ring;
        let neg = self.peek_sym('-');
        if neg {
            self.at += 1;
        }
        let first = self.term()?;
        let mut acc = if neg { r.neg(&first) } else { first };
        loop {
            if self.peek_sym('+') {
                self.at += 1;
                acc = r.add(&acc, &self.term()?);
            } else if self.peek_sym('-') {
                self.at += 1;
                acc = r.sub(&acc, &self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<QuotElement> {
        let mut acc = self.factor()?;
        while self.peek_sym('*') {
            self.at += 1;
            acc = self.ring.mul(&acc, &self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<QuotElement> {
        let base = self.atom()?;
        if self.peek_sym('^') {
            self.at += 1;
            let e = self.int()?;
            return Ok(self.ring.pow(&base, e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<QuotElement> {
        let r = self.ring;
        let f = r.field();
        let Some(tok) = self.peek().cloned() else {
            return self.fail("unexpected end of input");
        };
        match &tok.tok {
            Tok::Int(v) => {
                self.at += 1;
                Ok(r.scalar(f.from_int((*v % f.p() as u64) as i64)))
            }
            Tok::Sym('[') => {
                self.at += 1;
                let c = scalar_digits(self, f, tok.pos)?;
                Ok(r.scalar(c))
            }
            Tok::Sym('(') => {
                self.at += 1;
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.at += 1;
                match name.as_str() {
                    "u" => Ok(r.u()),
                    "phi" => Ok(r.phi()),
                    "x" => Ok(r.x()),
                    _ => perr(name, tok.pos, "unknown symbol, expected u, phi or x"),
                }
            }
            Tok::Sym(_) => self.fail("unexpected symbol"),
        }
    }
}

/// Reads `d0,d1,...]` after an opening bracket.
fn scalar_digits(p: &mut Parser<'_>, f: &FieldContext, pos: usize) -> Result<FieldElement> {
    let mut digits = vec![p.int()?];
    while p.peek_sym(',') {
        p.at += 1;
        digits.push(p.int()?);
    }
    p.expect_sym(']')?;
    if digits.iter().any(|&d| d >= f.p() as u64) {
        return perr("[", pos, format!("digits must be below {}", f.p()));
    }
    let digits: Vec<u32> = digits.iter().map(|&d| d as u32).collect();
    f.from_digits(&digits).or_else(|e| perr("[", pos, e.to_string()))
}

pub fn parse_element(ring: &RingContext, src: &str) -> Result<QuotElement> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return perr("", 0, "empty expression");
    }
    let mut p = Parser {
        ring,
        toks,
        at: 0,
        end: src.len(),
    };
    let e = p.expr()?;
    if p.at < p.toks.len() {
        return p.fail("trailing input");
    }
    Ok(e)
}

/// Integer for prime fields, digit list otherwise.
pub fn format_scalar(f: &FieldContext, c: FieldElement) -> String {
    if f.m() == 1 {
        c.index().to_string()
    } else {
        f.format(c)
    }
}

/// Canonical sum of `c * u^k * phi^j * x^i` terms; re-parses to the same element.
pub fn format_element(ring: &RingContext, a: &QuotElement) -> String {
    let f = ring.field();
    let mut terms = Vec::new();
    for (idx, &c) in a.coords().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (k, j, i) = ring.unindex(idx);
        let mut factors = Vec::new();
        for (name, e) in [("u", k), ("phi", j), ("x", i)] {
            match e {
                0 => {}
                1 => factors.push(name.to_string()),
                _ => factors.push(format!("{name}^{e}")),
            }
        }
        if c != f.one() || factors.is_empty() {
            factors.insert(0, format_scalar(f, c));
        }
        terms.push(factors.join("*"));
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Comma-separated scalars, one per power of `u`, e.g. `1,0,1` or `[1,1],0,[0,1]`.
pub fn parse_chain_element(chain: &ChainRing, src: &str) -> Result<ChainRingElement> {
    let f = chain.field();
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    let mut items = Vec::new();
    for (i, c) in src.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                items.push((start, &src[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    items.push((start, &src[start..]));
    for (pos, item) in items {
        let trimmed = item.trim();
        let offset = pos + item.find(trimmed).unwrap_or(0);
        if trimmed.is_empty() {
            return perr("", offset, "empty scalar");
        }
        if let Some(inner) = trimmed.strip_prefix('[') {
            let Some(inner) = inner.strip_suffix(']') else {
                return perr(trimmed, offset, "unclosed bracket");
            };
            let mut digits = Vec::new();
            for d in inner.split(',') {
                match d.trim().parse::<u32>() {
                    Ok(v) if v < f.p() => digits.push(v),
                    _ => return perr(d.trim(), offset, format!("expected a digit below {}", f.p())),
                }
            }
            parts.push(
                f.from_digits(&digits)
                    .or_else(|e| perr(trimmed, offset, e.to_string()))?,
            );
        } else {
            match trimmed.parse::<i64>() {
                Ok(v) => parts.push(f.from_int(v)),
                Err(_) => return perr(trimmed, offset, "expected an integer or a bracketed digit list"),
            }
        }
    }
    if parts.len() > chain.t() {
        return perr(src, 0, format!("at most t = {} scalars expected", chain.t()));
    }
    chain.element(&parts)
}

pub fn format_chain_element(chain: &ChainRing, a: &ChainRingElement) -> String {
    let f = chain.field();
    let parts: Vec<String> = a.parts().iter().map(|&c| format_scalar(f, c)).collect();
    parts.join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::sync::Arc;

    fn ring() -> Arc<RingContext> {
        RingContext::constacyclic(3, 1, 1, 3, 1, &[1, 0, 1]).unwrap()
    }

    #[test]
    fn parse_examples() {
        let r = ring();
        assert_eq!(parse_element(&r, "0").unwrap(), r.zero());
        assert_eq!(parse_element(&r, "u^2").unwrap(), r.basis_element(2, 0, 0));
        assert_eq!(parse_element(&r, " u * phi^2 ").unwrap(), r.basis_element(1, 2, 0));
        assert_eq!(parse_element(&r, "x - 1").unwrap(), r.phi());
        assert_eq!(parse_element(&r, "4").unwrap(), r.one());
        assert_eq!(parse_element(&r, "(x+2)^3").unwrap(), r.pow(&r.phi(), 3));
        assert_eq!(
            parse_element(&r, "[2]*u").unwrap(),
            r.scale(&r.u(), r.field().from_int(2))
        );
    }

    #[test]
    fn parse_errors_carry_position() {
        let r = ring();
        match parse_element(&r, "u + y") {
            Err(Error::Parse { token, position, .. }) => assert_eq!((token.as_str(), position), ("y", 4)),
            other => panic!("{other:?}"),
        }
        match parse_element(&r, "u ^") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_element(&r, "[3]"), Err(Error::Parse { .. })));
        assert!(matches!(parse_element(&r, ""), Err(Error::Parse { .. })));
        assert!(matches!(parse_element(&r, "u u"), Err(Error::Parse { .. })));
    }

    #[test]
    fn chain_element_text() {
        let r = ring();
        let c = r.chain();
        let d = parse_chain_element(c, "1, 0,1").unwrap();
        assert_eq!(&d, r.spec().kind.delta());
        assert_eq!(format_chain_element(c, &d), "1,0,1");
        let f4 = Arc::new(FieldContext::new(2, 2).unwrap());
        let c4 = ChainRing::new(f4.clone(), 2).unwrap();
        let e = parse_chain_element(&c4, "[0,1],1").unwrap();
        assert_eq!(e.part(0), f4.from_digits(&[0, 1]).unwrap());
        assert_eq!(format_chain_element(&c4, &e), "[0,1],[1,0]");
        assert!(parse_chain_element(c, "1,0,1,1").is_err());
        assert!(parse_chain_element(c, "1,,1").is_err());
    }

    proptest! {
        #[test]
        fn format_round_trips(idx in 0u128..19683) {
            let r = ring();
            let a = r.element_at(idx);
            prop_assert_eq!(parse_element(&r, &format_element(&r, &a)).unwrap(), a);
        }

        #[test]
        fn format_round_trips_over_f4(idx in 0u128..4096) {
            let f = Arc::new(FieldContext::new(2, 2).unwrap());
            let c = ChainRing::new(f.clone(), 2).unwrap();
            let delta = c.element(&[f.from_digits(&[0, 1]).unwrap(), f.one()]).unwrap();
            let r = RingContext::new(f, 1, 2, crate::quotient::ModulusKind::Constacyclic { n: 3, delta }).unwrap();
            let a = r.element_at(idx * 4095 % r.size().unwrap());
            prop_assert_eq!(parse_element(&r, &format_element(&r, &a)).unwrap(), a);
        }
    }
}
