//! Literal and expression parsing.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' '-'? integer)?
//! primary := integer | name '(' expr ')' | '(' expr ')'
//! ```
//!
//! Function names: `sqrt`, `exp`, `log`. Rational literals such as `37/3`
//! and `3^-2*7` are plain expressions without function calls.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::analytic::{exp_p, log_p, sqrt};
use super::error::{PadicError, Result};
use super::number::{PadicNumber, Prime};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Call(Function, Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Function {
    Sqrt,
    Exp,
    Log,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(BigInt),
    Name(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Token::Int(digits.parse().expect("ascii digits")));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Name(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(PadicError::Parse(format!("unexpected character {c:?}")));
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

    fn eat_op(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_op(&mut self, op: char) -> Result<()> {
        if self.eat_op(op) {
            Ok(())
        } else {
            Err(PadicError::Parse(format!("expected '{op}'")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat_op('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat_op('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat_op('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat_op('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat_op('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if !self.eat_op('^') {
            return Ok(base);
        }
        let negative = self.eat_op('-');
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Int(n)) => {
                self.pos += 1;
                let e = n
                    .to_i64()
                    .ok_or_else(|| PadicError::Parse("exponent too large".into()))?;
                Ok(Expr::Pow(Box::new(base), if negative { -e } else { e }))
            }
            _ => Err(PadicError::Parse("exponent must be an integer".into())),
        }
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Token::Name(name)) => {
                self.pos += 1;
                let f = match name.as_str() {
                    "sqrt" => Function::Sqrt,
                    "exp" => Function::Exp,
                    "log" => Function::Log,
                    other => return Err(PadicError::Parse(format!("unknown function {other:?}"))),
                };
                self.expect_op('(')?;
                let arg = self.expr()?;
                self.expect_op(')')?;
                Ok(Expr::Call(f, Box::new(arg)))
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_op(')')?;
                Ok(e)
            }
            Some(t) => Err(PadicError::Parse(format!("unexpected token {t:?}"))),
            None => Err(PadicError::Parse("unexpected end of input".into())),
        }
    }
}

pub fn parse_expr(s: &str) -> Result<Expr> {
    let mut parser = Parser {
        tokens: tokenize(s)?,
        pos: 0,
    };
    let e = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(PadicError::Parse(format!(
            "trailing input after position {}",
            parser.pos
        )));
    }
    Ok(e)
}

impl Expr {
    /// Exact value in `Q`, or `None` when a transcendental function occurs.
    pub fn eval_rational(&self) -> Result<Option<BigRational>> {
        let bin = |a: &Expr, b: &Expr| -> Result<Option<(BigRational, BigRational)>> {
            Ok(match (a.eval_rational()?, b.eval_rational()?) {
                (Some(x), Some(y)) => Some((x, y)),
                _ => None,
            })
        };
        Ok(match self {
            Expr::Int(n) => Some(BigRational::from_integer(n.clone())),
            Expr::Neg(a) => a.eval_rational()?.map(|x| -x),
            Expr::Add(a, b) => bin(a, b)?.map(|(x, y)| x + y),
            Expr::Sub(a, b) => bin(a, b)?.map(|(x, y)| x - y),
            Expr::Mul(a, b) => bin(a, b)?.map(|(x, y)| x * y),
            Expr::Div(a, b) => match bin(a, b)? {
                Some((_, y)) if y.is_zero() => {
                    return Err(PadicError::Parse("division by zero".into()))
                }
                other => other.map(|(x, y)| x / y),
            },
            Expr::Pow(a, e) => match a.eval_rational()? {
                Some(x) if x.is_zero() && *e < 0 => {
                    return Err(PadicError::Parse("zero to a negative power".into()))
                }
                Some(x) => {
                    let mag = x.pow(e.unsigned_abs() as i32);
                    Some(if *e < 0 { mag.recip() } else { mag })
                }
                None => None,
            },
            Expr::Call(..) => None,
        })
    }

    /// Value in `Q_p` with `precision` relative digits for each embedded
    /// rational subexpression.
    pub fn eval_padic(&self, prime: Prime, precision: u32) -> Result<PadicNumber> {
        if let Some(r) = self.eval_rational()? {
            return Ok(PadicNumber::from_rational(prime, &r, precision));
        }
        let ev = |e: &Expr| e.eval_padic(prime, precision);
        match self {
            Expr::Int(_) => unreachable!("integers are rational"),
            Expr::Neg(a) => Ok(-ev(a)?),
            Expr::Add(a, b) => ev(a)?.checked_add(&ev(b)?),
            Expr::Sub(a, b) => ev(a)?.checked_sub(&ev(b)?),
            Expr::Mul(a, b) => ev(a)?.checked_mul(&ev(b)?),
            Expr::Div(a, b) => ev(a)?.checked_div(&ev(b)?),
            Expr::Pow(a, e) => ev(a)?.powi(*e),
            Expr::Call(f, a) => {
                let x = ev(a)?;
                match f {
                    Function::Sqrt => sqrt(&x),
                    Function::Exp => exp_p(&x),
                    Function::Log => log_p(&x),
                }
            }
        }
    }
}

/// Parses an exact rational literal such as `28`, `-7/45` or `3^2*7`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    parse_expr(s)?
        .eval_rational()?
        .ok_or_else(|| PadicError::Parse(format!("{s:?} is not a rational literal")))
}

/// Parses an expression and evaluates it in `Q_p`.
pub fn eval_expr(s: &str, prime: Prime, precision: u32) -> Result<PadicNumber> {
    parse_expr(s)?.eval_padic(prime, precision)
}

/// Renders a rational as `a` or `a/b`.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
