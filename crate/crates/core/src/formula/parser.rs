//! Lexer and recursive-descent parser.
//!
//! ```text
//! formula := iff
//! iff     := imp ('<->' imp)*
//! imp     := or ('->' imp)?
//! or      := and ('|' and)*
//! and     := unary ('&' unary)*
//! unary   := '!' unary | ('exists' | 'forall') var '.' formula | primary
//! primary := term ('=' | '<') term | term 'in' SETVAR | '(' formula ')'
//! term    := factor ('+' factor)*
//! factor  := atom ('*' atom)*
//! atom    := '0' | '1' | numeral | numvar | '(' term ')'
//! ```
//!
//! Numerals `n ≥ 2` expand to `1 + 1 + … + 1`.

use super::ast::{Formula, Term};
use std::fmt;
use thiserror::Error;

/// Largest decimal literal the preprocessor expands.
pub const MAX_NUMERAL: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    SyntaxError(String),
    MixedCaseVariable(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    /// 1-based character column; end of input is `len + 1`.
    pub col: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::SyntaxError(msg) => {
                write!(f, "syntax error at line {}, col {}: {msg}", self.line, self.col)
            }
            ParseErrorKind::MixedCaseVariable(name) => {
                write!(f, "variable `{name}` at line {}, col {} mixes upper and lower case", self.line, self.col)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    NumVar(String),
    SetVar(String),
    Numeral(u64),
    Plus,
    Star,
    Equals,
    Less,
    In,
    Not,
    And,
    Or,
    Arrow,
    DoubleArrow,
    Exists,
    Forall,
    Dot,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::NumVar(v) | Tok::SetVar(v) => format!("`{v}`"),
            Tok::Numeral(n) => format!("`{n}`"),
            Tok::End => "end of input".into(),
            other => format!("{other:?}"),
        }
    }
}

struct Lexed {
    tok: Tok,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Lexed>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |col: usize, kind: ParseErrorKind| ParseError { kind, line: 1, col };
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let two: String = chars[i..chars.len().min(i + 3)].iter().collect();
        let (tok, width) = if two.starts_with("<->") {
            (Tok::DoubleArrow, 3)
        } else if two.starts_with("->") {
            (Tok::Arrow, 2)
        } else if two.starts_with("/\\") {
            (Tok::And, 2)
        } else if two.starts_with("\\/") {
            (Tok::Or, 2)
        } else {
            match c {
                '+' => (Tok::Plus, 1),
                '*' | '·' => (Tok::Star, 1),
                '=' => (Tok::Equals, 1),
                '<' => (Tok::Less, 1),
                '∈' => (Tok::In, 1),
                '!' | '~' | '¬' => (Tok::Not, 1),
                '&' | '∧' => (Tok::And, 1),
                '|' | '∨' => (Tok::Or, 1),
                '→' => (Tok::Arrow, 1),
                '↔' => (Tok::DoubleArrow, 1),
                '∃' => (Tok::Exists, 1),
                '∀' => (Tok::Forall, 1),
                '.' => (Tok::Dot, 1),
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                d if d.is_ascii_digit() => {
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    if i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                        return Err(err(
                            i + 1,
                            ParseErrorKind::SyntaxError("identifier cannot start with a digit".into()),
                        ));
                    }
                    let digits: String = chars[start..i].iter().collect();
                    let n = digits.parse::<u64>().ok().filter(|n| *n <= MAX_NUMERAL).ok_or_else(|| {
                        err(col, ParseErrorKind::SyntaxError(format!("numeral {digits} exceeds {MAX_NUMERAL}")))
                    })?;
                    out.push(Lexed { tok: Tok::Numeral(n), col });
                    continue;
                }
                a if a.is_ascii_alphabetic() => {
                    let start = i;
                    while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                        i += 1;
                    }
                    let word: String = chars[start..i].iter().collect();
                    let tok = match word.as_str() {
                        "exists" => Tok::Exists,
                        "forall" => Tok::Forall,
                        "in" => Tok::In,
                        _ => {
                            let lower = word.chars().any(|c| c.is_ascii_lowercase());
                            let upper = word.chars().any(|c| c.is_ascii_uppercase());
                            match (lower, upper) {
                                (true, false) => Tok::NumVar(word),
                                (false, true) => Tok::SetVar(word),
                                _ => return Err(err(col, ParseErrorKind::MixedCaseVariable(word))),
                            }
                        }
                    };
                    out.push(Lexed { tok, col });
                    continue;
                }
                other => return Err(err(col, ParseErrorKind::SyntaxError(format!("unexpected character `{other}`")))),
            }
        };
        out.push(Lexed { tok, col });
        i += width;
    }
    out.push(Lexed { tok: Tok::End, col: chars.len() + 1 });
    Ok(out)
}

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn col(&self) -> usize {
        self.toks[self.pos].col
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(ParseError { kind: ParseErrorKind::SyntaxError(msg.into()), line: 1, col: self.col() })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            self.error(format!("expected {what}, found {}", self.peek().describe()))
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        let mut left = self.implication()?;
        while self.eat(&Tok::DoubleArrow) {
            let right = self.implication()?;
            left = Formula::iff(left, right);
        }
        Ok(left)
    }

    fn implication(&mut self) -> PResult<Formula> {
        let left = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let right = self.implication()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut left = self.conjunction()?;
        while self.eat(&Tok::Or) {
            let right = self.conjunction()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut left = self.unary()?;
        while self.eat(&Tok::And) {
            let right = self.unary()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> PResult<Formula> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Exists | Tok::Forall => {
                let universal = self.bump() == Tok::Forall;
                let var = match self.bump() {
                    Tok::NumVar(v) | Tok::SetVar(v) => v,
                    other => {
                        self.pos -= usize::from(other != Tok::End);
                        return self
                            .error(format!("expected a variable after the quantifier, found {}", other.describe()));
                    }
                };
                self.expect(Tok::Dot, "`.`")?;
                let body = self.formula()?;
                Ok(if universal { Formula::forall(&var, body) } else { Formula::exists(&var, body) })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> PResult<Formula> {
        if self.peek() != &Tok::LParen {
            return self.atomic();
        }
        let start = self.pos;
        let as_atomic = self.atomic();
        let atomic_err = match as_atomic {
            Ok(f) => return Ok(f),
            Err(e) => e,
        };
        self.pos = start;
        self.bump();
        let inner = self.formula().and_then(|f| {
            self.expect(Tok::RParen, "`)`")?;
            Ok(f)
        });
        match inner {
            Ok(f) => Ok(f),
            Err(e) if e.col >= atomic_err.col => Err(e),
            Err(_) => Err(atomic_err),
        }
    }

    fn atomic(&mut self) -> PResult<Formula> {
        let left = self.term()?;
        match self.bump() {
            Tok::Equals => Ok(Formula::Eq(left, self.term()?)),
            Tok::Less => Ok(Formula::Lt(left, self.term()?)),
            Tok::In => match self.bump() {
                Tok::SetVar(s) => Ok(Formula::In(left, s)),
                other => {
                    self.pos -= usize::from(other != Tok::End);
                    self.error(format!("expected a set variable, found {}", other.describe()))
                }
            },
            other => {
                self.pos -= usize::from(other != Tok::End);
                self.error(format!("expected `=`, `<` or `in`, found {}", other.describe()))
            }
        }
    }

    fn term(&mut self) -> PResult<Term> {
        let mut left = self.factor()?;
        while self.eat(&Tok::Plus) {
            left = Term::plus(left, self.factor()?);
        }
        Ok(left)
    }

    fn factor(&mut self) -> PResult<Term> {
        let mut left = self.term_atom()?;
        while self.eat(&Tok::Star) {
            left = Term::times(left, self.term_atom()?);
        }
        Ok(left)
    }

    fn term_atom(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::Numeral(n) => {
                self.bump();
                Ok(if n == 1 { Term::One } else { Term::numeral(n) })
            }
            Tok::NumVar(v) => {
                self.bump();
                Ok(Term::Var(v))
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            other => self.error(format!("expected a term, found {}", other.describe())),
        }
    }
}

/// Parses one formula.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let f = p.formula()?;
    if p.peek() != &Tok::End {
        return p.error(format!("unexpected {}", p.peek().describe()));
    }
    Ok(f)
}

/// A formula taken from a formula file, with its 1-based line number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Numbered {
    pub line: usize,
    pub text: String,
    pub formula: Formula,
}

/// Parses a formula file: one formula per line, `#` starts a comment.
pub fn parse_file(text: &str) -> Result<Vec<Numbered>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let formula = parse(line).map_err(|e| ParseError { line: i + 1, ..e })?;
        out.push(Numbered { line: i + 1, text: line.trim().to_string(), formula });
    }
    Ok(out)
}
