//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary ('*' unary)*
//! unary   := ('+' | '-') unary | power
//! power   := primary ('^' integer)?
//! primary := integer ('/' integer)? | identifier | '(' expr ')'
//! ```
//!
//! `/` is only accepted inside a rational literal. Exponents are
//! nonnegative integer literals.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::{Poly, Rational};

/// Upper bound on a single exponent literal.
const MAX_EXPONENT: u32 = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at column {column}: {kind}")]
pub struct ParseError {
    /// 1-based character column of the offending token.
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedEnd,
    UnknownVariable(String),
    NegativeExponent,
    ExponentTooLarge,
    ZeroDenominator,
    Expected(&'static str),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character `{c}`"),
            ParseErrorKind::UnexpectedEnd => f.write_str("unexpected end of input"),
            ParseErrorKind::UnknownVariable(v) => write!(f, "unknown variable `{v}`"),
            ParseErrorKind::NegativeExponent => f.write_str("negative exponent"),
            ParseErrorKind::ExponentTooLarge => {
                write!(f, "exponent larger than {MAX_EXPONENT}")
            }
            ParseErrorKind::ZeroDenominator => f.write_str("zero denominator"),
            ParseErrorKind::Expected(what) => write!(f, "expected {what}"),
        }
    }
}

/// Parses `text` as a polynomial in the declared variables; variable `i` of
/// the result is `vars[i]`.
pub fn parse_poly<S: AsRef<str>>(text: &str, vars: &[S]) -> Result<Poly, ParseError> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        vars: vars.iter().map(|v| v.as_ref()).collect(),
    };
    let out = p.expr()?;
    p.skip_ws();
    match p.peek() {
        None => Ok(out),
        Some(c) => Err(p.error(ParseErrorKind::UnexpectedChar(c))),
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    vars: Vec<&'a str>,
}

impl Parser<'_> {
    fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        self.error_at(self.pos, kind)
    }

    fn error_at(&self, pos: usize, kind: ParseErrorKind) -> ParseError {
        ParseError {
            column: pos + 1,
            kind,
        }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    /// Consumes `c` if it is the next non-blank character.
    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
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

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.unary()?;
        while self.eat('*') {
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly, ParseError> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly, ParseError> {
        let base = self.primary()?;
        if !self.eat('^') {
            return Ok(base);
        }
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some('-') => Err(self.error(ParseErrorKind::NegativeExponent)),
            Some(c) if c.is_ascii_digit() => {
                let digits = self.integer_literal();
                let e: u32 = digits
                    .parse()
                    .ok()
                    .filter(|&e| e <= MAX_EXPONENT)
                    .ok_or_else(|| self.error_at(start, ParseErrorKind::ExponentTooLarge))?;
                Ok(base.pow(e))
            }
            Some(_) => Err(self.error(ParseErrorKind::Expected("integer exponent"))),
            None => Err(self.error(ParseErrorKind::UnexpectedEnd)),
        }
    }

    fn integer_literal(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn primary(&mut self) -> Result<Poly, ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            None => Err(self.error(ParseErrorKind::UnexpectedEnd)),
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(match self.peek() {
                        None => self.error(ParseErrorKind::UnexpectedEnd),
                        Some(_) => self.error(ParseErrorKind::Expected("`)`")),
                    });
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = self.integer_literal().parse().expect("digits");
                let mut value = Rational::from_integer(num);
                if self.eat('/') {
                    self.skip_ws();
                    let den_start = self.pos;
                    if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
                        return Err(self.error(ParseErrorKind::Expected("integer denominator")));
                    }
                    let den: BigInt = self.integer_literal().parse().expect("digits");
                    if den.is_zero() {
                        return Err(self.error_at(den_start, ParseErrorKind::ZeroDenominator));
                    }
                    value /= Rational::from_integer(den);
                }
                Ok(Poly::constant(self.nvars(), value))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                while self
                    .peek()
                    .is_some_and(|c| c.is_alphanumeric() || c == '_')
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                match self.vars.iter().position(|v| *v == name) {
                    Some(i) => Ok(Poly::var(self.nvars(), i)),
                    None => Err(self.error_at(start, ParseErrorKind::UnknownVariable(name))),
                }
            }
            Some(c) => Err(self.error(ParseErrorKind::UnexpectedChar(c))),
        }
    }
}
