//! Text form: `3/2 * y1 z2 y1 - [y1, y2] + z1`. Juxtaposition is the
//! product, brackets are left-normed commutators and `−` is accepted for
//! minus.

use super::{SuperPolynomial, Variable};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Plus,
    Minus,
    Star,
    Slash,
    Open,
    Close,
    LParen,
    RParen,
    Comma,
    Number(String),
    Var(Variable),
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '+' | '-' | '\u{2212}' | '*' | '/' | '[' | ']' | '(' | ')' | ',' => {
                chars.next();
                out.push(match c {
                    '+' => Token::Plus,
                    '-' | '\u{2212}' => Token::Minus,
                    '*' => Token::Star,
                    '/' => Token::Slash,
                    '[' => Token::Open,
                    ']' => Token::Close,
                    '(' => Token::LParen,
                    ')' => Token::RParen,
                    _ => Token::Comma,
                });
            }
            '0'..='9' => {
                let mut digits = String::new();
                while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    digits.push(d);
                    chars.next();
                }
                out.push(Token::Number(digits));
            }
            'x' | 'y' | 'z' => {
                let mut name = String::from(c);
                chars.next();
                while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    name.push(d);
                    chars.next();
                }
                out.push(Token::Var(name.parse()?));
            }
            other => return Err(Error::Parse(format!("unexpected character {other:?} in polynomial"))),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Token) -> Result<()> {
        match self.next() {
            Some(t) if t == want => Ok(()),
            got => Err(Error::Parse(format!("expected {want:?}, found {got:?}"))),
        }
    }

    fn polynomial<S: Scalar>(&mut self) -> Result<SuperPolynomial<S>> {
        let mut total = SuperPolynomial::zero();
        let mut first = true;
        loop {
            let negative = match self.peek() {
                Some(Token::Plus) => {
                    self.next();
                    false
                }
                Some(Token::Minus) => {
                    self.next();
                    true
                }
                None if !first => return Ok(total),
                _ if first => false,
                Some(t) => return Err(Error::Parse(format!("expected + or -, found {t:?}"))),
                None => unreachable!(),
            };
            let term = self.term::<S>()?;
            total = if negative { total.sub(&term) } else { total.add(&term) };
            first = false;
            if self.peek().is_none() {
                return Ok(total);
            }
        }
    }

    fn number<S: Scalar>(&mut self) -> Result<S> {
        let parse = |s: &str| {
            s.parse::<S>()
                .map_err(|_| Error::Parse(format!("bad coefficient {s:?}")))
        };
        match self.next() {
            Some(Token::Number(num)) => {
                if self.peek() == Some(&Token::Slash) {
                    self.next();
                    match self.next() {
                        Some(Token::Number(den)) if den.bytes().any(|b| b != b'0') => Ok(parse(&num)? / parse(&den)?),
                        got => Err(Error::Parse(format!("bad denominator {got:?}"))),
                    }
                } else {
                    parse(&num)
                }
            }
            Some(Token::LParen) => {
                let negative = self.peek() == Some(&Token::Minus);
                if negative {
                    self.next();
                }
                let v = self.number::<S>()?;
                self.expect(Token::RParen)?;
                Ok(if negative { -v } else { v })
            }
            got => Err(Error::Parse(format!("expected a coefficient, found {got:?}"))),
        }
    }

    /// `[coef [*]] factor*`, with at least a coefficient or a factor.
    fn term<S: Scalar>(&mut self) -> Result<SuperPolynomial<S>> {
        let coef = match self.peek() {
            Some(Token::Number(_)) | Some(Token::LParen) => {
                let c = self.number::<S>()?;
                if self.peek() == Some(&Token::Star) {
                    self.next();
                    if !matches!(self.peek(), Some(Token::Var(_)) | Some(Token::Open)) {
                        return Err(Error::Parse("'*' must be followed by a variable or bracket".into()));
                    }
                }
                Some(c)
            }
            _ => None,
        };
        let product = self.product::<S>()?;
        match (coef, product) {
            (Some(c), Some(p)) => Ok(p.scale(&c)),
            (Some(c), None) => Ok(SuperPolynomial::from_terms([(vec![], c)])),
            (None, Some(p)) => Ok(p),
            (None, None) => Err(Error::Parse(format!("expected a term, found {:?}", self.peek()))),
        }
    }

    fn product<S: Scalar>(&mut self) -> Result<Option<SuperPolynomial<S>>> {
        let mut acc: Option<SuperPolynomial<S>> = None;
        loop {
            let factor = match self.peek() {
                Some(Token::Var(v)) => {
                    let v = *v;
                    self.next();
                    SuperPolynomial::variable(v)
                }
                Some(Token::Open) => {
                    self.next();
                    let mut parts = vec![self.bracket_arg::<S>()?];
                    while self.peek() == Some(&Token::Comma) {
                        self.next();
                        parts.push(self.bracket_arg::<S>()?);
                    }
                    self.expect(Token::Close)?;
                    SuperPolynomial::left_normed(&parts)?
                }
                _ => return Ok(acc),
            };
            acc = Some(match acc {
                Some(a) => a.mul(&factor),
                None => factor,
            });
        }
    }

    fn bracket_arg<S: Scalar>(&mut self) -> Result<SuperPolynomial<S>> {
        self.product()?
            .ok_or_else(|| Error::Parse(format!("expected a commutator argument, found {:?}", self.peek())))
    }
}

pub(super) fn parse<S: Scalar>(text: &str) -> Result<SuperPolynomial<S>> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut p = Parser { tokens, pos: 0 };
    p.polynomial()
}
