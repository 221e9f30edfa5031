//! A small expression language over Clifford numbers for the `algebra`
//! subcommand.
//!
//! Grammar:
//!   expr   := term (('+' | '-') term)*
//!   term   := unary ('*' unary)*
//!   unary  := '-' unary | atom
//!   atom   := NUMBER | 'i' | BLADE | FUNC '(' expr ')' | '(' expr ')'
//!   BLADE  := 'e' [1-9]+          digits multiply in the written order,
//!                                 so e21 = e2*e1 = -e12
//!   FUNC   := rev | conj | ginv | herm
//!   NUMBER := decimal float

use cliffwave::algebra::Multivector;
use cliffwave::{CliffError, Result};
use num_complex::Complex64;

pub fn evaluate(input: &str, n: usize) -> Result<Multivector> {
    let tokens = tokenize(input)?;
    let mut parser = Parser { tokens, at: 0, n };
    let value = parser.expr()?;
    if parser.at != parser.tokens.len() {
        return Err(CliffError::Config(format!(
            "unexpected trailing input at token {}",
            parser.at
        )));
    }
    Ok(value)
}

/// Highest generator index mentioned in the expression, for defaulting n.
pub fn max_generator(input: &str) -> usize {
    let mut max = 0usize;
    let bytes = input.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'e' && i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
            i += 1;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                max = max.max((bytes[i] - b'0') as usize);
                i += 1;
            }
        } else {
            i += 1;
        }
    }
    max
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(f64),
    Imag,
    Blade(Vec<usize>),
    Func(&'static str),
    Plus,
    Minus,
    Star,
    Open,
    Close,
}

fn tokenize(input: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let bytes = input.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                tokens.push(Token::Plus);
                i += 1;
            }
            '-' => {
                tokens.push(Token::Minus);
                i += 1;
            }
            '*' => {
                tokens.push(Token::Star);
                i += 1;
            }
            '(' => {
                tokens.push(Token::Open);
                i += 1;
            }
            ')' => {
                tokens.push(Token::Close);
                i += 1;
            }
            'e' if i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() => {
                i += 1;
                let mut gens = Vec::new();
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    let d = (bytes[i] - b'0') as usize;
                    if d == 0 {
                        return Err(CliffError::Config("generator indices are 1-based".into()));
                    }
                    gens.push(d);
                    i += 1;
                }
                tokens.push(Token::Blade(gens));
            }
            'i' if !next_is_alpha(bytes, i + 1) => {
                tokens.push(Token::Imag);
                i += 1;
            }
            _ if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_digit() || bytes[i] == b'.' || bytes[i] == b'e' && matches!(bytes.get(i+1), Some(b'-') | Some(b'+')) )
                {
                    if bytes[i] == b'e' {
                        i += 1; // exponent sign
                    }
                    i += 1;
                }
                let text = &input[start..i];
                let value: f64 = text
                    .parse()
                    .map_err(|_| CliffError::Config(format!("bad number literal '{text}'")))?;
                tokens.push(Token::Number(value));
            }
            _ if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
                    i += 1;
                }
                let name = &input[start..i];
                let func = match name {
                    "rev" => "rev",
                    "conj" => "conj",
                    "ginv" => "ginv",
                    "herm" => "herm",
                    other => {
                        return Err(CliffError::Config(format!(
                            "unknown identifier '{other}' (functions: rev, conj, ginv, herm)"
                        )))
                    }
                };
                tokens.push(Token::Func(func));
            }
            other => {
                return Err(CliffError::Config(format!(
                    "unexpected character '{other}' at byte {i}"
                )))
            }
        }
    }
    Ok(tokens)
}

fn next_is_alpha(bytes: &[u8], i: usize) -> bool {
    bytes.get(i).is_some_and(|b| b.is_ascii_alphanumeric())
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
    n: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.at).cloned();
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Multivector> {
        let mut acc = self.term()?;
        while let Some(op) = self.peek().cloned() {
            match op {
                Token::Plus => {
                    self.at += 1;
                    acc = acc.add(&self.term()?);
                }
                Token::Minus => {
                    self.at += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Multivector> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Token::Star) {
            self.at += 1;
            acc = acc.geometric_product(&self.unary()?)?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Multivector> {
        if self.peek() == Some(&Token::Minus) {
            self.at += 1;
            return Ok(self.unary()?.neg());
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Multivector> {
        match self.next() {
            Some(Token::Number(v)) => Ok(Multivector::real_scalar(self.n, v)),
            Some(Token::Imag) => Ok(Multivector::scalar(self.n, Complex64::new(0.0, 1.0))),
            Some(Token::Blade(gens)) => {
                let mut acc = Multivector::real_scalar(self.n, 1.0);
                for g in gens {
                    if g > self.n {
                        return Err(CliffError::Config(format!(
                            "generator e{g} exceeds the algebra dimension n = {}",
                            self.n
                        )));
                    }
                    acc = acc.geometric_product(&Multivector::basis_vector(self.n, g))?;
                }
                Ok(acc)
            }
            Some(Token::Func(name)) => {
                if self.next() != Some(Token::Open) {
                    return Err(CliffError::Config(format!("expected '(' after {name}")));
                }
                let inner = self.expr()?;
                if self.next() != Some(Token::Close) {
                    return Err(CliffError::Config(format!("missing ')' after {name}(...")));
                }
                Ok(match name {
                    "rev" => inner.reversion(),
                    "conj" => inner.conjugation(),
                    "ginv" => inner.grade_involution(),
                    "herm" => inner.hermitian_conjugate(),
                    _ => unreachable!(),
                })
            }
            Some(Token::Open) => {
                let inner = self.expr()?;
                if self.next() != Some(Token::Close) {
                    return Err(CliffError::Config("missing closing ')'".into()));
                }
                Ok(inner)
            }
            other => Err(CliffError::Config(format!(
                "expected a value, found {other:?}"
            ))),
        }
    }
}
