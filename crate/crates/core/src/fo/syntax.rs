//! First-order sentences over relational signatures: AST, parser and printer.
//!
//! Textual grammar:
//!
//! ```text
//! sentence := 'forall' VAR '.' sentence | 'exists' VAR '.' sentence | disj
//! disj     := conj ('|' conj)*
//! conj     := lit ('&' lit)*
//! lit      := '!' lit | '(' sentence ')' | REL '(' VAR (',' VAR)* ')' | VAR '=' VAR
//! ```
//!
//! There is no implication token; `a -> b` prints as `!a | b`.

use std::borrow::Cow;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Rel { name: String, args: Vec<String> },
    Eq(String, String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn rel(name: &str, args: &[&str]) -> Self {
        Formula::Rel {
            name: name.into(),
            args: args.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn eq(x: &str, y: &str) -> Self {
        Formula::Eq(x.into(), y.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Self {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Self {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Formula) -> Self {
        Formula::Implies(Box::new(self), Box::new(other))
    }

    pub fn exists(var: &str, body: Formula) -> Self {
        Formula::Exists(var.into(), Box::new(body))
    }

    pub fn forall(var: &str, body: Formula) -> Self {
        Formula::Forall(var.into(), Box::new(body))
    }

    /// Left-nested conjunction; `None` for an empty list.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        parts.into_iter().reduce(Formula::and)
    }

    pub fn disjunction(parts: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        parts.into_iter().reduce(Formula::or)
    }

    /// `∀x x=x`, true in every structure including the empty one.
    pub fn tautology() -> Formula {
        Formula::forall("x", Formula::eq("x", "x"))
    }

    /// `∃x ¬x=x`, false in every structure.
    pub fn contradiction() -> Formula {
        Formula::exists("x", Formula::eq("x", "x").not())
    }

    pub fn free_variables(&self) -> BTreeSet<String> {
        fn walk(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            match f {
                Formula::Rel { args, .. } => {
                    out.extend(args.iter().filter(|a| !bound.contains(a)).cloned())
                }
                Formula::Eq(x, y) => {
                    out.extend([x, y].into_iter().filter(|a| !bound.contains(a)).cloned())
                }
                Formula::Not(a) => walk(a, bound, out),
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                    walk(a, bound, out);
                    walk(b, bound, out);
                }
                Formula::Exists(v, body) | Formula::Forall(v, body) => {
                    bound.push(v.clone());
                    walk(body, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    /// Quantifier nesting depth.
    pub fn quantifier_rank(&self) -> usize {
        match self {
            Formula::Rel { .. } | Formula::Eq(..) => 0,
            Formula::Not(a) => a.quantifier_rank(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.quantifier_rank().max(b.quantifier_rank())
            }
            Formula::Exists(_, body) | Formula::Forall(_, body) => 1 + body.quantifier_rank(),
        }
    }

    fn printable(&self) -> Cow<'_, Formula> {
        match self {
            Formula::Implies(a, b) => {
                Cow::Owned(Formula::Or(Box::new(a.as_ref().clone().not()), b.clone()))
            }
            f => Cow::Borrowed(f),
        }
    }

    fn fmt_sentence(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.printable().as_ref() {
            Formula::Forall(v, body) => {
                write!(f, "forall {v}. ")?;
                body.fmt_sentence(f)
            }
            Formula::Exists(v, body) => {
                write!(f, "exists {v}. ")?;
                body.fmt_sentence(f)
            }
            other => other.fmt_disj(f),
        }
    }

    fn fmt_disj(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.printable().as_ref() {
            Formula::Or(a, b) => {
                a.fmt_disj(f)?;
                f.write_str(" | ")?;
                b.fmt_conj(f)
            }
            other => other.fmt_conj(f),
        }
    }

    fn fmt_conj(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.printable().as_ref() {
            Formula::And(a, b) => {
                a.fmt_conj(f)?;
                f.write_str(" & ")?;
                b.fmt_lit(f)
            }
            other => other.fmt_lit(f),
        }
    }

    fn fmt_lit(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.printable().as_ref() {
            Formula::Not(a) => {
                f.write_str("!")?;
                a.fmt_lit(f)
            }
            Formula::Rel { name, args } => write!(f, "{name}({})", args.join(",")),
            Formula::Eq(x, y) => write!(f, "{x} = {y}"),
            other => {
                f.write_str("(")?;
                other.fmt_sentence(f)?;
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_sentence(f)
    }
}

/// A formula without free variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sentence(Formula);

impl Sentence {
    pub fn new(formula: Formula) -> Result<Self> {
        match formula.free_variables().into_iter().next() {
            Some(v) => Err(Error::FreeVariable(v)),
            None => Ok(Sentence(formula)),
        }
    }

    pub fn formula(&self) -> &Formula {
        &self.0
    }

    pub fn into_formula(self) -> Formula {
        self.0
    }

    pub fn and(&self, other: &Sentence) -> Sentence {
        Sentence(self.0.clone().and(other.0.clone()))
    }

    pub fn negate(&self) -> Sentence {
        Sentence(self.0.clone().not())
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for Sentence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Sentence::new(parse_formula(s)?)
    }
}

impl Serialize for Sentence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Sentence {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Bang,
    Amp,
    Bar,
    Equals,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Token)>> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        let single = match c {
            '(' => Some(Token::LParen),
            ')' => Some(Token::RParen),
            ',' => Some(Token::Comma),
            '.' => Some(Token::Dot),
            '!' => Some(Token::Bang),
            '&' => Some(Token::Amp),
            '|' => Some(Token::Bar),
            '=' => Some(Token::Equals),
            _ => None,
        };
        if let Some(t) = single {
            out.push((i, t));
            chars.next();
        } else if c.is_whitespace() {
            chars.next();
        } else if c.is_alphabetic() || c == '_' {
            let mut ident = String::new();
            while let Some(&(_, c)) = chars.peek() {
                if c.is_alphanumeric() || c == '_' {
                    ident.push(c);
                    chars.next();
                } else {
                    break;
                }
            }
            out.push((i, Token::Ident(ident)));
        } else {
            return Err(Error::Parse {
                offset: i,
                message: format!("unexpected character {c:?}"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Token> {
        self.tokens.get(self.pos + k).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.len, |(o, _)| *o)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn expect(&mut self, t: Token) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected {t:?}"))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Token::Ident(s)) if s != "forall" && s != "exists" => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.error("expected identifier"),
        }
    }

    fn sentence(&mut self) -> Result<Formula> {
        let quantifier = match self.peek() {
            Some(Token::Ident(k)) if k == "forall" || k == "exists" => Some(k.clone()),
            _ => None,
        };
        match quantifier {
            Some(k) => {
                self.pos += 1;
                let var = self.ident()?;
                self.expect(Token::Dot)?;
                let body = self.sentence()?;
                Ok(if k == "forall" {
                    Formula::forall(&var, body)
                } else {
                    Formula::exists(&var, body)
                })
            }
            None => self.disj(),
        }
    }

    fn disj(&mut self) -> Result<Formula> {
        let mut f = self.conj()?;
        while self.peek() == Some(&Token::Bar) {
            self.pos += 1;
            f = f.or(self.conj()?);
        }
        Ok(f)
    }

    fn conj(&mut self) -> Result<Formula> {
        let mut f = self.lit()?;
        while self.peek() == Some(&Token::Amp) {
            self.pos += 1;
            f = f.and(self.lit()?);
        }
        Ok(f)
    }

    fn lit(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Token::Bang) => {
                self.pos += 1;
                Ok(self.lit()?.not())
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let f = self.sentence()?;
                self.expect(Token::RParen)?;
                Ok(f)
            }
            Some(Token::Ident(_)) if self.peek_at(1) == Some(&Token::LParen) => {
                let name = self.ident()?;
                self.expect(Token::LParen)?;
                let mut args = vec![self.ident()?];
                while self.peek() == Some(&Token::Comma) {
                    self.pos += 1;
                    args.push(self.ident()?);
                }
                self.expect(Token::RParen)?;
                Ok(Formula::Rel { name, args })
            }
            Some(Token::Ident(_)) => {
                let x = self.ident()?;
                self.expect(Token::Equals)?;
                let y = self.ident()?;
                Ok(Formula::Eq(x, y))
            }
            _ => self.error("expected literal"),
        }
    }
}

/// Parses a formula (free variables allowed).
pub fn parse_formula(src: &str) -> Result<Formula> {
    let mut p = Parser {
        tokens: tokenize(src)?,
        pos: 0,
        len: src.len(),
    };
    let f = p.sentence()?;
    if p.pos != p.tokens.len() {
        return p.error("trailing input");
    }
    Ok(f)
}
