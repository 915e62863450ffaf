//! Tokenizer shared by the term, program and literal parsers, plus the term
//! parser itself.
//!
//! Term grammar, loosest binding first:
//!
//! ```text
//! sum     := product ('+' product)*
//! product := unary (';' unary)*
//! unary   := '!' unary | '[' sum ']' unary | postfix
//! postfix := atom '*'*
//! atom    := '0' | '1' | ident | ('a'|'d'|'r'|'ar') '(' sum ')' | '(' sum ')'
//! ```

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::term::Term;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at column {column}")]
pub struct ParseError {
    /// 1-based character column.
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(column: usize, message: impl Into<String>) -> Self {
        ParseError {
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Number(String),
    Plus,
    Semi,
    Star,
    Bang,
    Amp,
    Pipe,
    Comma,
    Colon,
    Eq,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Number(s) => write!(f, "`{s}`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Bang => f.write_str("`!`"),
            Tok::Amp => f.write_str("`&`"),
            Tok::Pipe => f.write_str("`|`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub column: usize,
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
            {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                column,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Number(chars[start..i].iter().collect()),
                column,
            });
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            ';' => Tok::Semi,
            '*' => Tok::Star,
            '!' => Tok::Bang,
            '&' => Tok::Amp,
            '|' => Tok::Pipe,
            ',' => Tok::Comma,
            ':' => Tok::Colon,
            '=' => Tok::Eq,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            other => return Err(ParseError::new(column, format!("unexpected character `{other}`"))),
        };
        out.push(Token { tok, column });
        i += 1;
    }
    Ok(out)
}

/// A cursor over a token stream.
pub struct Cursor {
    tokens: Vec<Token>,
    pos: usize,
    end_column: usize,
}

impl Cursor {
    pub fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Cursor {
            tokens: tokenize(text)?,
            pos: 0,
            end_column: text.chars().count() + 1,
        })
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    pub fn peek_at(&self, offset: usize) -> Option<&Tok> {
        self.tokens.get(self.pos + offset).map(|t| &t.tok)
    }

    pub fn column(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|t| t.column)
            .unwrap_or(self.end_column)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn next(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|t| t.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    pub fn expect(&mut self, tok: &Tok) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected {tok}")))
        }
    }

    pub fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.is_keyword(kw) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected `{kw}`")))
        }
    }

    pub fn unexpected(&self, what: &str) -> ParseError {
        match self.peek() {
            Some(t) => ParseError::new(self.column(), format!("{what}, found {t}")),
            None => ParseError::new(self.column(), format!("{what}, found end of input")),
        }
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    pub fn finish(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("expected end of input"))
        }
    }
}

/// Parses a term. Identifiers in `tests` become test variables, all other
/// identifiers element variables.
pub fn parse_term(text: &str, tests: &BTreeSet<String>) -> Result<Term, ParseError> {
    let mut cur = Cursor::new(text)?;
    let t = parse_sum(&mut cur, tests)?;
    cur.finish()?;
    Ok(t)
}

fn parse_sum(cur: &mut Cursor, tests: &BTreeSet<String>) -> Result<Term, ParseError> {
    let mut t = parse_product(cur, tests)?;
    while cur.eat(&Tok::Plus) {
        t = Term::plus(t, parse_product(cur, tests)?);
    }
    Ok(t)
}

fn parse_product(cur: &mut Cursor, tests: &BTreeSet<String>) -> Result<Term, ParseError> {
    let mut t = parse_unary(cur, tests)?;
    while cur.eat(&Tok::Semi) {
        t = Term::times(t, parse_unary(cur, tests)?);
    }
    Ok(t)
}

fn parse_unary(cur: &mut Cursor, tests: &BTreeSet<String>) -> Result<Term, ParseError> {
    if cur.eat(&Tok::Bang) {
        return Ok(Term::not(parse_unary(cur, tests)?));
    }
    if cur.eat(&Tok::LBracket) {
        let program = parse_sum(cur, tests)?;
        cur.expect(&Tok::RBracket)?;
        return Ok(Term::boxed(program, parse_unary(cur, tests)?));
    }
    let mut t = parse_atom(cur, tests)?;
    while cur.eat(&Tok::Star) {
        t = Term::star(t);
    }
    Ok(t)
}

fn parse_atom(cur: &mut Cursor, tests: &BTreeSet<String>) -> Result<Term, ParseError> {
    let column = cur.column();
    match cur.next() {
        Some(Tok::Number(n)) => match n.as_str() {
            "0" => Ok(Term::Zero),
            "1" => Ok(Term::One),
            _ => Err(ParseError::new(column, format!("unexpected number `{n}`; only 0 and 1 are constants"))),
        },
        Some(Tok::Ident(name)) => {
            if cur.peek() == Some(&Tok::LParen) {
                let wrap: fn(Term) -> Term = match name.as_str() {
                    "a" => Term::adom,
                    "d" => Term::dom,
                    "r" => Term::ran,
                    "ar" => Term::aran,
                    _ => return Err(ParseError::new(column, format!("unknown operator `{name}`"))),
                };
                cur.expect(&Tok::LParen)?;
                let inner = parse_sum(cur, tests)?;
                cur.expect(&Tok::RParen)?;
                Ok(wrap(inner))
            } else if tests.contains(&name) {
                Ok(Term::TestVar(name))
            } else {
                Ok(Term::Var(name))
            }
        }
        Some(Tok::LParen) => {
            let t = parse_sum(cur, tests)?;
            cur.expect(&Tok::RParen)?;
            Ok(t)
        }
        Some(t) => Err(ParseError::new(column, format!("expected a term, found {t}"))),
        None => Err(ParseError::new(column, "expected a term, found end of input")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tests_pq() -> BTreeSet<String> {
        ["p", "q", "r"].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn antidomain_witness() {
        assert_eq!(
            parse_term("a(y ; !q)", &tests_pq()).unwrap(),
            Term::adom(Term::times(Term::var("y"), Term::not(Term::test("q"))))
        );
    }

    #[test]
    fn triple_body_is_left_associated() {
        assert_eq!(
            parse_term("p ; x ; !q", &tests_pq()).unwrap(),
            Term::times(
                Term::times(Term::test("p"), Term::var("x")),
                Term::not(Term::test("q"))
            )
        );
    }

    #[test]
    fn box_sugar() {
        assert_eq!(
            parse_term("[x]q", &tests_pq()).unwrap(),
            Term::boxed(Term::var("x"), Term::test("q"))
        );
    }

    #[test]
    fn precedence() {
        let t = parse_term("x + y ; z*", &tests_pq()).unwrap();
        assert_eq!(
            t,
            Term::plus(Term::var("x"), Term::times(Term::var("y"), Term::star(Term::var("z"))))
        );
        let t = parse_term("!p* ; [x]q ; y", &tests_pq()).unwrap();
        assert_eq!(
            t,
            Term::times(
                Term::times(
                    Term::not(Term::star(Term::test("p"))),
                    Term::boxed(Term::var("x"), Term::test("q"))
                ),
                Term::var("y")
            )
        );
    }

    #[test]
    fn r_and_a_without_parens_are_variables() {
        let t = parse_term("a ; r", &tests_pq()).unwrap();
        assert_eq!(t, Term::times(Term::var("a"), Term::test("r")));
        assert_eq!(parse_term("r(x)", &tests_pq()).unwrap(), Term::ran(Term::var("x")));
        assert_eq!(parse_term("ar(x)", &tests_pq()).unwrap(), Term::aran(Term::var("x")));
    }

    #[test]
    fn errors_carry_columns() {
        let e = parse_term("x + ", &tests_pq()).unwrap_err();
        assert_eq!(e.column, 5);
        let e = parse_term("foo(x)", &tests_pq()).unwrap_err();
        assert!(e.message.contains("unknown operator `foo`"));
        assert_eq!(e.column, 1);
        let e = parse_term("x ; 2", &tests_pq()).unwrap_err();
        assert_eq!(e.column, 5);
        let e = parse_term("(x", &tests_pq()).unwrap_err();
        assert!(e.message.contains("expected `)`"));
        let e = parse_term("x $", &tests_pq()).unwrap_err();
        assert_eq!(e.column, 3);
    }
}
