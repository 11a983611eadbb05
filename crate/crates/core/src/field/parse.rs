//! Prefix-expression syntax for [`ScalarField`].
//!
//! ```text
//! expr := number | "x" | "y" | "(" op expr* ")"
//!
//! (+ e1 e2 ...)    sum, one or more terms
//! (- e)            negation
//! (- a b)          difference
//! (* e1 e2 ...)    product, one or more factors
//! (/ a b)          quotient
//! (^ e n)          integer power, n a (possibly negative) integer literal
//! (root e p q)     real-branch power e^(p/q); q odd when e can be negative
//! (abspow e g)     |e|^g with g > 2
//! ```
//!
//! Numbers use Rust float syntax (`1`, `-0.5`, `2.5e-3`). `Display` on
//! [`ScalarField`] emits this syntax, so printing and parsing round-trip.

use std::str::FromStr;

use super::ScalarField;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Token<'a> {
    Open(usize),
    Close(usize),
    Atom(usize, &'a str),
}

fn tokenize(src: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, ch) in src.char_indices() {
        let delim = ch == '(' || ch == ')' || ch.is_whitespace();
        if delim {
            if let Some(s) = start.take() {
                out.push(Token::Atom(s, &src[s..i]));
            }
            match ch {
                '(' => out.push(Token::Open(i)),
                ')' => out.push(Token::Close(i)),
                _ => {}
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token::Atom(s, &src[s..]));
    }
    out
}

struct Parser<'a> {
    tokens: Vec<Token<'a>>,
    pos: usize,
    len: usize,
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

impl<'a> Parser<'a> {
    fn byte_pos(&self) -> usize {
        match self.tokens.get(self.pos) {
            Some(Token::Open(p) | Token::Close(p) | Token::Atom(p, _)) => *p,
            None => self.len,
        }
    }

    fn next(&mut self) -> Option<Token<'a>> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<ScalarField> {
        let at = self.byte_pos();
        match self.next() {
            None => Err(err(at, "unexpected end of input")),
            Some(Token::Close(p)) => Err(err(p, "unexpected ')'")),
            Some(Token::Atom(p, a)) => atom(p, a),
            Some(Token::Open(_)) => {
                let (op_pos, op) = match self.next() {
                    Some(Token::Atom(p, a)) => (p, a),
                    _ => return Err(err(at, "expected an operator after '('")),
                };
                let mut args = Vec::new();
                loop {
                    match self.tokens.get(self.pos) {
                        Some(Token::Close(_)) => {
                            self.pos += 1;
                            break;
                        }
                        None => return Err(err(self.len, "missing ')'")),
                        _ => args.push(self.expr()?),
                    }
                }
                apply(op_pos, op, args)
            }
        }
    }
}

fn atom(pos: usize, a: &str) -> Result<ScalarField> {
    match a {
        "x" => Ok(ScalarField::x()),
        "y" => Ok(ScalarField::y()),
        _ => a
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(ScalarField::constant)
            .ok_or_else(|| err(pos, format!("unknown atom '{a}'"))),
    }
}

fn int_arg(pos: usize, e: &ScalarField, what: &str) -> Result<i64> {
    match e.as_constant() {
        Some(c) if c.fract() == 0.0 && c.abs() < 1e9 => Ok(c as i64),
        _ => Err(err(pos, format!("{what} must be an integer literal"))),
    }
}

fn apply(pos: usize, op: &str, mut args: Vec<ScalarField>) -> Result<ScalarField> {
    let arity = |n: usize, args: &[ScalarField]| {
        if args.len() == n {
            Ok(())
        } else {
            Err(err(pos, format!("'{op}' takes {n} arguments, got {}", args.len())))
        }
    };
    match op {
        "+" | "*" => {
            if args.is_empty() {
                return Err(err(pos, format!("'{op}' needs at least one argument")));
            }
            let mut it = args.into_iter();
            let first = it.next().unwrap_or_else(ScalarField::zero);
            Ok(it.fold(first, |acc, e| if op == "+" { acc + e } else { acc * e }))
        }
        "-" => match args.len() {
            1 => Ok(-args.remove(0)),
            2 => {
                let b = args.pop().unwrap_or_else(ScalarField::zero);
                let a = args.pop().unwrap_or_else(ScalarField::zero);
                Ok(a - b)
            }
            n => Err(err(pos, format!("'-' takes 1 or 2 arguments, got {n}"))),
        },
        "/" => {
            arity(2, &args)?;
            let b = args.pop().unwrap_or_else(ScalarField::zero);
            let a = args.pop().unwrap_or_else(ScalarField::zero);
            Ok(a / b)
        }
        "^" => {
            arity(2, &args)?;
            let n = int_arg(pos, &args[1], "exponent of '^'")?;
            Ok(args[0].powi(n as i32))
        }
        "root" => {
            arity(3, &args)?;
            let p = int_arg(pos, &args[1], "numerator of 'root'")?;
            let q = int_arg(pos, &args[2], "denominator of 'root'")?;
            args[0].root_pow(p, q).map_err(|e| err(pos, e.to_string()))
        }
        "abspow" => {
            arity(2, &args)?;
            let g = args[1].as_constant().ok_or_else(|| err(pos, "exponent of 'abspow' must be a literal"))?;
            ScalarField::abs_pow(args[0].clone(), g).map_err(|e| err(pos, e.to_string()))
        }
        _ => Err(err(pos, format!("unknown operator '{op}'"))),
    }
}

impl FromStr for ScalarField {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parser = Parser { tokens: tokenize(s), pos: 0, len: s.len() };
        let e = parser.expr()?;
        if parser.pos < parser.tokens.len() {
            return Err(err(parser.byte_pos(), "trailing input"));
        }
        Ok(e)
    }
}
