//! Field descriptions and element literals.
//!
//! Literals are polynomials in `x` with rational coefficients, built from
//! `+ - * / ^`, parentheses, integers and `x`; e.g. `1/2 + 3*x`. Division is
//! field division, so `1/(1+x)` is accepted.

use std::sync::Arc;

use rug::{Integer, Rational};
use serde_json::Value;

use super::{make_field, NFElement, NumberField};
use crate::error::{Error, Result};
use crate::exact::QPoly;

/// Default working precision for fields read without `precision_bits`.
pub const DEFAULT_PRECISION: u32 = 128;

/// A field description: either `"Q"` or `{"poly": [...], "precision_bits": n}`.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldSpec {
    /// Coefficients lowest first.
    pub poly: Vec<Integer>,
    pub precision_bits: Option<u32>,
}

impl FieldSpec {
    pub fn from_json(v: &Value) -> Result<FieldSpec> {
        match v {
            Value::String(s) if s == "Q" => Ok(FieldSpec { poly: vec![Integer::new(), Integer::from(1)], precision_bits: None }),
            Value::String(s) => FieldSpec::from_json(&serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?),
            Value::Object(map) => {
                let poly = map
                    .get("poly")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Parse("field needs a \"poly\" array".into()))?
                    .iter()
                    .map(json_integer)
                    .collect::<Result<Vec<_>>>()?;
                let precision_bits = match map.get("precision_bits") {
                    None | Some(Value::Null) => None,
                    Some(p) => Some(
                        p.as_u64()
                            .filter(|&b| (16..=1 << 20).contains(&b))
                            .ok_or_else(|| Error::Parse("precision_bits must be an integer in [16, 2^20]".into()))?
                            as u32,
                    ),
                };
                Ok(FieldSpec { poly, precision_bits })
            }
            _ => Err(Error::Parse(format!("not a field description: {v}"))),
        }
    }

    /// Builds the field; `precision` overrides the description when given.
    pub fn build(&self, precision: Option<u32>) -> Result<Arc<NumberField>> {
        let prec = precision.or(self.precision_bits).unwrap_or(DEFAULT_PRECISION);
        let f = QPoly::from_integers(&self.poly);
        if f == QPoly::x() {
            return Ok(NumberField::rationals(prec));
        }
        make_field(&f, prec)
    }
}

fn json_integer(v: &Value) -> Result<Integer> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(Integer::from)
            .ok_or_else(|| Error::Parse(format!("{n} is not an integer"))),
        Value::String(s) => s.trim().parse::<Integer>().map_err(|_| Error::Parse(format!("{s} is not an integer"))),
        _ => Err(Error::Parse(format!("{v} is not an integer"))),
    }
}

/// Reads an element from a JSON number or literal string.
pub fn element_from_json(field: &Arc<NumberField>, v: &Value) -> Result<NFElement> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(NFElement::from_int(field, i))
            } else {
                Err(Error::Parse(format!("{n} is not an integer; write fractions as strings")))
            }
        }
        Value::String(s) => parse_element(field, s),
        _ => Err(Error::Parse(format!("not an element literal: {v}"))),
    }
}

/// Parses a literal such as `"1/2 + 3*x"` into an element of `field`.
pub fn parse_element(field: &Arc<NumberField>, src: &str) -> Result<NFElement> {
    let tokens = tokenize(src)?;
    let mut p = Parser { field, tokens, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!("unexpected {:?} in {src:?}", p.tokens[p.pos])));
    }
    Ok(e)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Integer),
    X,
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Tok::Num(s.parse().unwrap()));
            }
            'x' | 'θ' | 't' => {
                out.push(Tok::X);
                i += 1;
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                out.push(Tok::Op(c));
                i += 1;
            }
            _ => return Err(Error::Parse(format!("unexpected character {c:?} in {src:?}"))),
        }
    }
    if out.is_empty() {
        return Err(Error::Parse("empty literal".into()));
    }
    Ok(out)
}

struct Parser<'a> {
    field: &'a Arc<NumberField>,
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    // expr := term (('+' | '-') term)*
    fn expr(&mut self) -> Result<NFElement> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    // term := unary (('*' | '/') unary | implicit factor)*
    fn term(&mut self) -> Result<NFElement> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                acc = acc.div(&d).map_err(|_| Error::DivisionByZero)?;
            } else if matches!(self.peek(), Some(Tok::X) | Some(Tok::Op('('))) {
                acc = &acc * &self.power()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<NFElement> {
        if self.eat('-') {
            return Ok(-&self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    // power := atom ('^' integer)?
    fn power(&mut self) -> Result<NFElement> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let e = match self.tokens.get(self.pos) {
            Some(Tok::Num(n)) => n.to_u32().ok_or_else(|| Error::Parse("exponent too large".into()))?,
            other => return Err(Error::Parse(format!("expected an exponent, found {other:?}"))),
        };
        self.pos += 1;
        let p = base.pow(e);
        if neg {
            p.inv().map_err(|_| Error::DivisionByZero)
        } else {
            Ok(p)
        }
    }

    fn atom(&mut self) -> Result<NFElement> {
        match self.tokens.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(NFElement::from_rational(self.field, Rational::from(n)))
            }
            Some(Tok::X) => {
                self.pos += 1;
                Ok(NFElement::theta(self.field))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("unbalanced parentheses".into()));
                }
                Ok(e)
            }
            None => Err(Error::Parse("unexpected end of input".into())),
            Some(other) => Err(Error::Parse(format!("unexpected {other:?}"))),
        }
    }
}
