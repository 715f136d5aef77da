//! Integrand expressions over the coordinates `x1, x2, …` (`x` is `x1`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Const(BigRational),
    /// Zero-based coordinate index.
    Coord(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    /// A power whose exponent is an expression; it must evaluate to an integer.
    Power(Box<Expr>, Box<Expr>),
    /// `a − b·⌊a/b⌋`.
    Mod(Box<Expr>, Box<Expr>),
    Abs(Box<Expr>),
    Min(Vec<Expr>),
    Max(Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("column {col}: {message}")]
    Syntax { col: usize, message: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("coordinate x{} is not available", .0 + 1)]
    MissingCoordinate(usize),
    #[error("exponent {0} is not an integer in -{MAX_EXPONENT}..={MAX_EXPONENT}")]
    BadExponent(String),
}

/// Largest exponent magnitude accepted by [`Expr::Power`].
pub const MAX_EXPONENT: i32 = 4096;

fn power(base: BigRational, n: i32) -> Result<BigRational, ExprError> {
    if n < 0 && base.is_zero() {
        return Err(ExprError::DivisionByZero);
    }
    Ok(num_traits::Pow::pow(base, n))
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr, ExprError> {
        let mut p = Parser { chars: text.chars().collect(), pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(p.error("unexpected input"));
        }
        Ok(e)
    }

    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational, ExprError> {
        Ok(match self {
            Expr::Const(c) => c.clone(),
            Expr::Coord(i) => point.get(*i).cloned().ok_or(ExprError::MissingCoordinate(*i))?,
            Expr::Neg(e) => -e.eval(point)?,
            Expr::Add(a, b) => a.eval(point)? + b.eval(point)?,
            Expr::Sub(a, b) => a.eval(point)? - b.eval(point)?,
            Expr::Mul(a, b) => a.eval(point)? * b.eval(point)?,
            Expr::Div(a, b) => {
                let d = b.eval(point)?;
                if d.is_zero() {
                    return Err(ExprError::DivisionByZero);
                }
                a.eval(point)? / d
            }
            Expr::Pow(e, n) => power(e.eval(point)?, *n)?,
            Expr::Power(e, n) => {
                let n = n.eval(point)?;
                let exp = n
                    .is_integer()
                    .then(|| n.to_integer().to_i32())
                    .flatten()
                    .filter(|e| e.abs() <= MAX_EXPONENT)
                    .ok_or_else(|| ExprError::BadExponent(crate::numio::format_rational(&n)))?;
                power(e.eval(point)?, exp)?
            }
            Expr::Mod(a, b) => {
                let d = b.eval(point)?;
                if d.is_zero() {
                    return Err(ExprError::DivisionByZero);
                }
                let a = a.eval(point)?;
                let q = (&a / &d).floor();
                a - d * q
            }
            Expr::Abs(e) => e.eval(point)?.abs(),
            Expr::Min(es) => fold(es, point, |a, b| if b < a { b } else { a })?,
            Expr::Max(es) => fold(es, point, |a, b| if b > a { b } else { a })?,
        })
    }

    /// Number of coordinates the expression reads.
    pub fn arity(&self) -> usize {
        match self {
            Expr::Const(_) => 0,
            Expr::Coord(i) => i + 1,
            Expr::Neg(e) | Expr::Pow(e, _) | Expr::Abs(e) => e.arity(),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b)
            | Expr::Power(a, b)
            | Expr::Mod(a, b) => a.arity().max(b.arity()),
            Expr::Min(es) | Expr::Max(es) => es.iter().map(Expr::arity).max().unwrap_or(0),
        }
    }
}

fn fold(
    es: &[Expr],
    point: &[BigRational],
    pick: impl Fn(BigRational, BigRational) -> BigRational,
) -> Result<BigRational, ExprError> {
    let mut it = es.iter();
    let first = it.next().expect("min/max take at least one argument").eval(point)?;
    it.try_fold(first, |acc, e| Ok(pick(acc, e.eval(point)?)))
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, message: &str) -> ExprError {
        ExprError::Syntax { col: self.pos + 1, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.product()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn product(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.primary()?;
        if self.eat('^') {
            let negative = self.eat('-');
            self.skip_ws();
            if !negative && !self.peek().is_some_and(|c| c.is_ascii_digit()) {
                return Ok(Expr::Power(Box::new(base), Box::new(self.primary()?)));
            }
            let digits = self.take_while(|c| c.is_ascii_digit());
            let n: i32 = digits
                .parse()
                .ok()
                .filter(|n: &i32| *n <= MAX_EXPONENT)
                .ok_or_else(|| self.error("expected an integer exponent"))?;
            return Ok(Expr::Pow(Box::new(base), if negative { -n } else { n }));
        }
        Ok(base)
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|&c| pred(c)) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let text = self.take_while(|c| c.is_ascii_digit() || c == '.');
                crate::numio::parse_rational(&text).map(Expr::Const).ok_or_else(|| self.error("bad number"))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let name = self.take_while(|c| c.is_ascii_alphanumeric());
                match name.as_str() {
                    "x" => Ok(Expr::Coord(0)),
                    "abs" | "min" | "max" | "mod" => {
                        let args = self.args()?;
                        match (name.as_str(), args.len()) {
                            ("abs", 1) => Ok(Expr::Abs(Box::new(args.into_iter().next().expect("one")))),
                            ("abs", _) => Err(self.error("abs takes one argument")),
                            ("mod", 2) => {
                                let mut it = args.into_iter();
                                let a = it.next().expect("two");
                                Ok(Expr::Mod(Box::new(a), Box::new(it.next().expect("two"))))
                            }
                            ("mod", _) => Err(self.error("mod takes two arguments")),
                            (_, 0) => Err(self.error("min/max need an argument")),
                            ("min", _) => Ok(Expr::Min(args)),
                            _ => Ok(Expr::Max(args)),
                        }
                    }
                    _ => match name.strip_prefix('x').and_then(|d| d.parse::<usize>().ok()) {
                        Some(i) if i >= 1 => Ok(Expr::Coord(i - 1)),
                        _ => {
                            self.pos = start;
                            Err(self.error(&format!("unknown name `{name}`")))
                        }
                    },
                }
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn args(&mut self) -> Result<Vec<Expr>, ExprError> {
        if !self.eat('(') {
            return Err(self.error("expected `(`"));
        }
        let mut args = vec![self.expr()?];
        while self.eat(',') {
            args.push(self.expr()?);
        }
        if !self.eat(')') {
            return Err(self.error("expected `)`"));
        }
        Ok(args)
    }
}

impl From<i64> for Expr {
    fn from(v: i64) -> Self {
        Expr::Const(BigRational::from_integer(BigInt::from(v)))
    }
}
