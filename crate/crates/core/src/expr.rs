//! Text grammar for elements of `A` and `P_A`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | atom ('^' int)?
//! atom   := rational | 'q' | 'x' | 'xt' | '(' expr ')'
//! int    := '-'? digits
//! ```
//!
//! `xt` stands for the second variable of `P_A`. Rationals are written
//! `p/r`. Negative exponents are accepted on units only, e.g. `x^-1` inside
//! a localization or `(q*x^2)^-1`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Zero};

use crate::error::{Error, ParseError, Result};
use crate::principal_parts::PPElement;
use crate::qcoeff::QScalar;
use crate::twisted_ring::{AlgebraCarrier, AlgebraElement};

pub const GRAMMAR: &str = "\
expr   := term (('+' | '-') term)*
term   := factor ('*' factor)*
factor := '-' factor | atom ('^' int)?
atom   := rational | 'q' | 'x' | 'xt' | '(' expr ')'
int    := '-'? digits";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expression {
    Number(BigRational),
    Q,
    X,
    XTilde,
    Neg(Box<Expression>),
    Add(Box<Expression>, Box<Expression>),
    Sub(Box<Expression>, Box<Expression>),
    Mul(Box<Expression>, Box<Expression>),
    Pow(Box<Expression>, i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Number(BigRational),
    Q,
    X,
    XTilde,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer {
    tokens: Vec<(Token, usize)>,
}

impl Lexer {
    fn tokenize(src: &str) -> Result<Vec<(Token, usize)>, ParseError> {
        let chars: Vec<char> = src.chars().collect();
        let mut tokens = Vec::new();
        let mut i = 0;
        let skip_ws = |i: &mut usize| {
            while *i < chars.len() && chars[*i].is_whitespace() {
                *i += 1;
            }
        };
        loop {
            skip_ws(&mut i);
            let pos = i + 1;
            let Some(&c) = chars.get(i) else {
                tokens.push((Token::End, pos));
                return Ok(tokens);
            };
            let token = match c {
                '+' => Token::Plus,
                '-' => Token::Minus,
                '*' => Token::Star,
                '^' => Token::Caret,
                '(' => Token::LParen,
                ')' => Token::RParen,
                'q' => Token::Q,
                'x' if chars.get(i + 1) == Some(&'t') => {
                    i += 1;
                    Token::XTilde
                }
                'x' => Token::X,
                d if d.is_ascii_digit() => {
                    let numer = read_digits(&chars, &mut i);
                    let mut j = i;
                    skip_ws(&mut j);
                    if chars.get(j) == Some(&'/') {
                        j += 1;
                        skip_ws(&mut j);
                        if !chars.get(j).is_some_and(char::is_ascii_digit) {
                            return Err(ParseError {
                                position: j + 1,
                                expected: vec!["digits".into()],
                            });
                        }
                        let denom = read_digits(&chars, &mut j);
                        if denom.is_zero() {
                            return Err(ParseError {
                                position: j,
                                expected: vec!["nonzero denominator".into()],
                            });
                        }
                        i = j;
                        tokens.push((Token::Number(BigRational::new(numer, denom)), pos));
                    } else {
                        tokens.push((Token::Number(BigRational::from_integer(numer)), pos));
                    }
                    continue;
                }
                _ => {
                    return Err(ParseError {
                        position: pos,
                        expected: atom_expected(),
                    })
                }
            };
            tokens.push((token, pos));
            i += 1;
        }
    }
}

fn read_digits(chars: &[char], i: &mut usize) -> BigInt {
    let start = *i;
    while *i < chars.len() && chars[*i].is_ascii_digit() {
        *i += 1;
    }
    let s: String = chars[start..*i].iter().collect();
    BigInt::from_str_radix(&s, 10).expect("ascii digits")
}

fn atom_expected() -> Vec<String> {
    ["number", "'q'", "'x'", "'xt'", "'('", "'-'"]
        .into_iter()
        .map(String::from)
        .collect()
}

struct Parser {
    lexer: Lexer,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.lexer.tokens[self.at].0
    }

    fn position(&self) -> usize {
        self.lexer.tokens[self.at].1
    }

    fn bump(&mut self) -> Token {
        let t = self.lexer.tokens[self.at].0.clone();
        if t != Token::End {
            self.at += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        ParseError {
            position: self.position(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expr(&mut self) -> Result<Expression, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Token::Plus => {
                    self.bump();
                    lhs = Expression::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Token::Minus => {
                    self.bump();
                    lhs = Expression::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expression, ParseError> {
        let mut lhs = self.factor()?;
        while *self.peek() == Token::Star {
            self.bump();
            lhs = Expression::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expression, ParseError> {
        if *self.peek() == Token::Minus {
            self.bump();
            return Ok(Expression::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if *self.peek() != Token::Caret {
            return Ok(base);
        }
        self.bump();
        let negative = *self.peek() == Token::Minus;
        if negative {
            self.bump();
        }
        let pos = self.position();
        match self.bump() {
            Token::Number(r) if r.is_integer() => {
                let e: i64 = r.to_integer().try_into().map_err(|_| ParseError {
                    position: pos,
                    expected: vec!["exponent fitting in 64 bits".into()],
                })?;
                Ok(Expression::Pow(Box::new(base), if negative { -e } else { e }))
            }
            _ => Err(ParseError {
                position: pos,
                expected: vec!["integer".into()],
            }),
        }
    }

    fn atom(&mut self) -> Result<Expression, ParseError> {
        let expected = atom_expected();
        let pos = self.position();
        match self.bump() {
            Token::Number(r) => Ok(Expression::Number(r)),
            Token::Q => Ok(Expression::Q),
            Token::X => Ok(Expression::X),
            Token::XTilde => Ok(Expression::XTilde),
            Token::LParen => {
                let inner = self.expr()?;
                if *self.peek() != Token::RParen {
                    return Err(self.error(&["'+'", "'-'", "'*'", "'^'", "')'"]));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(ParseError {
                position: pos,
                expected,
            }),
        }
    }
}

/// Parses `src` into an expression tree.
pub fn parse_expression(src: &str) -> Result<Expression, ParseError> {
    let tokens = Lexer::tokenize(src)?;
    let mut parser = Parser {
        lexer: Lexer { tokens },
        at: 0,
    };
    let expr = parser.expr()?;
    if *parser.peek() != Token::End {
        return Err(parser.error(&["'+'", "'-'", "'*'", "'^'", "end of input"]));
    }
    Ok(expr)
}

impl Expression {
    pub fn contains_xtilde(&self) -> bool {
        match self {
            Expression::XTilde => true,
            Expression::Number(_) | Expression::Q | Expression::X => false,
            Expression::Neg(a) | Expression::Pow(a, _) => a.contains_xtilde(),
            Expression::Add(a, b) | Expression::Sub(a, b) | Expression::Mul(a, b) => {
                a.contains_xtilde() || b.contains_xtilde()
            }
        }
    }

    /// Evaluates in `P_B` for the carrier `B`; `q` means the carrier's `q`.
    pub fn eval_pp(&self, carrier: &AlgebraCarrier) -> Result<PPElement> {
        let mode = carrier.mode();
        Ok(match self {
            Expression::Number(r) => {
                PPElement::from_algebra(carrier, &AlgebraElement::constant(QScalar::constant_in(r.clone(), mode)))?
            }
            Expression::Q => {
                PPElement::from_algebra(carrier, &AlgebraElement::constant(QScalar::q_in(mode)))?
            }
            Expression::X => PPElement::from_algebra(carrier, &AlgebraElement::x().in_mode(mode))?,
            Expression::XTilde => PPElement::xtilde(carrier),
            Expression::Neg(a) => -&a.eval_pp(carrier)?,
            Expression::Add(a, b) => &a.eval_pp(carrier)? + &b.eval_pp(carrier)?,
            Expression::Sub(a, b) => &a.eval_pp(carrier)? - &b.eval_pp(carrier)?,
            Expression::Mul(a, b) => &a.eval_pp(carrier)? * &b.eval_pp(carrier)?,
            Expression::Pow(a, e) => {
                let base = a.eval_pp(carrier)?;
                if *e >= 0 {
                    base.pow(*e as usize)
                } else {
                    let not_unit = || Error::NotAUnit(base.to_string());
                    if base.degree().unwrap_or(0) > 0 {
                        return Err(not_unit());
                    }
                    let inv = base.coeff(0).inverse().ok_or_else(not_unit)?;
                    let inv = carrier.reduce(&inv).map_err(|_| not_unit())?;
                    PPElement::from_algebra(carrier, &inv)?.pow(e.unsigned_abs() as usize)
                }
            }
        })
    }

    /// Evaluates in the carrier itself; `xt` is rejected.
    pub fn eval_algebra(&self, carrier: &AlgebraCarrier) -> Result<AlgebraElement> {
        if self.contains_xtilde() {
            return Err(Error::NotInCarrier("xt".into()));
        }
        Ok(self.eval_pp(carrier)?.coeff(0))
    }
}

/// Parses and evaluates an element of the carrier.
pub fn parse_element(src: &str, carrier: &AlgebraCarrier) -> Result<AlgebraElement> {
    parse_expression(src)?.eval_algebra(carrier)
}

/// Parses and evaluates an element of `P_B`.
pub fn parse_pp(src: &str, carrier: &AlgebraCarrier) -> Result<PPElement> {
    parse_expression(src)?.eval_pp(carrier)
}
