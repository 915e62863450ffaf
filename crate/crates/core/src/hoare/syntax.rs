//! While programs, test expressions, and their concrete syntax.
//!
//! ```text
//! seq   := stmt (';' stmt)*
//! stmt  := 'skip' | ident | '(' seq ')'
//!        | 'if' test 'then' seq 'else' seq 'fi'
//!        | 'while' test ['invariant' test] 'do' seq 'od'
//! test  := conj ('|' conj)*
//! conj  := neg ('&' neg)*
//! neg   := '!' neg | '0' | '1' | ident | '(' test ')'
//! ```

use std::fmt;

use crate::parse::{Cursor, ParseError, Tok};

const KEYWORDS: [&str; 9] = ["skip", "if", "then", "else", "fi", "while", "invariant", "do", "od"];

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TestExpr {
    Zero,
    One,
    Name(String),
    Not(Box<TestExpr>),
    And(Box<TestExpr>, Box<TestExpr>),
    Or(Box<TestExpr>, Box<TestExpr>),
}

impl TestExpr {
    pub fn name(n: impl Into<String>) -> Self {
        TestExpr::Name(n.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(t: TestExpr) -> Self {
        TestExpr::Not(Box::new(t))
    }

    pub fn and(a: TestExpr, b: TestExpr) -> Self {
        TestExpr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: TestExpr, b: TestExpr) -> Self {
        TestExpr::Or(Box::new(a), Box::new(b))
    }

    pub fn parse(text: &str) -> Result<TestExpr, ParseError> {
        let mut cur = Cursor::new(text)?;
        let t = parse_or(&mut cur)?;
        cur.finish()?;
        Ok(t)
    }

    fn precedence(&self) -> u8 {
        match self {
            TestExpr::Or(..) => 0,
            TestExpr::And(..) => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for TestExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sub = |f: &mut fmt::Formatter<'_>, t: &TestExpr, min: u8| {
            if t.precedence() < min {
                write!(f, "({t})")
            } else {
                write!(f, "{t}")
            }
        };
        match self {
            TestExpr::Zero => f.write_str("0"),
            TestExpr::One => f.write_str("1"),
            TestExpr::Name(n) => f.write_str(n),
            TestExpr::Not(t) => {
                f.write_str("!")?;
                sub(f, t, 2)
            }
            TestExpr::And(a, b) => {
                sub(f, a, 1)?;
                f.write_str(" & ")?;
                sub(f, b, 2)
            }
            TestExpr::Or(a, b) => {
                sub(f, a, 0)?;
                f.write_str(" | ")?;
                sub(f, b, 1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Program {
    Skip,
    Atom(String),
    Seq(Box<Program>, Box<Program>),
    If(TestExpr, Box<Program>, Box<Program>),
    While {
        guard: TestExpr,
        invariant: Option<TestExpr>,
        body: Box<Program>,
    },
}

impl Program {
    pub fn atom(n: impl Into<String>) -> Self {
        Program::Atom(n.into())
    }

    pub fn seq(a: Program, b: Program) -> Self {
        Program::Seq(Box::new(a), Box::new(b))
    }

    pub fn if_(t: TestExpr, a: Program, b: Program) -> Self {
        Program::If(t, Box::new(a), Box::new(b))
    }

    pub fn while_(guard: TestExpr, body: Program) -> Self {
        Program::While {
            guard,
            invariant: None,
            body: Box::new(body),
        }
    }

    pub fn parse(text: &str) -> Result<Program, ParseError> {
        let mut cur = Cursor::new(text)?;
        let p = parse_seq(&mut cur)?;
        cur.finish()?;
        Ok(p)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Program::Skip => f.write_str("skip"),
            Program::Atom(n) => f.write_str(n),
            Program::Seq(a, b) => {
                write!(f, "{a} ; ")?;
                if matches!(**b, Program::Seq(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
            Program::If(t, a, b) => write!(f, "if {t} then {a} else {b} fi"),
            Program::While { guard, invariant, body } => {
                write!(f, "while {guard} ")?;
                if let Some(i) = invariant {
                    write!(f, "invariant {i} ")?;
                }
                write!(f, "do {body} od")
            }
        }
    }
}

fn ident(cur: &mut Cursor) -> Result<String, ParseError> {
    match cur.peek() {
        Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
            let s = s.clone();
            cur.next();
            Ok(s)
        }
        _ => Err(cur.unexpected("expected a name")),
    }
}

pub(crate) fn parse_or(cur: &mut Cursor) -> Result<TestExpr, ParseError> {
    let mut t = parse_and(cur)?;
    while cur.eat(&Tok::Pipe) {
        t = TestExpr::or(t, parse_and(cur)?);
    }
    Ok(t)
}

fn parse_and(cur: &mut Cursor) -> Result<TestExpr, ParseError> {
    let mut t = parse_neg(cur)?;
    while cur.eat(&Tok::Amp) {
        t = TestExpr::and(t, parse_neg(cur)?);
    }
    Ok(t)
}

fn parse_neg(cur: &mut Cursor) -> Result<TestExpr, ParseError> {
    if cur.eat(&Tok::Bang) {
        return Ok(TestExpr::not(parse_neg(cur)?));
    }
    if cur.eat(&Tok::LParen) {
        let t = parse_or(cur)?;
        cur.expect(&Tok::RParen)?;
        return Ok(t);
    }
    match cur.peek() {
        Some(Tok::Number(n)) if n == "0" => {
            cur.next();
            Ok(TestExpr::Zero)
        }
        Some(Tok::Number(n)) if n == "1" => {
            cur.next();
            Ok(TestExpr::One)
        }
        _ => ident(cur).map(TestExpr::Name),
    }
}

pub(crate) fn parse_seq(cur: &mut Cursor) -> Result<Program, ParseError> {
    let mut p = parse_stmt(cur)?;
    let mut rest = Vec::new();
    while cur.eat(&Tok::Semi) {
        rest.push(parse_stmt(cur)?);
    }
    // Left-nested, matching the left-associative product of terms.
    for q in rest {
        p = Program::seq(p, q);
    }
    Ok(p)
}

fn parse_stmt(cur: &mut Cursor) -> Result<Program, ParseError> {
    if cur.eat(&Tok::LParen) {
        let p = parse_seq(cur)?;
        cur.expect(&Tok::RParen)?;
        return Ok(p);
    }
    if cur.is_keyword("skip") {
        cur.next();
        return Ok(Program::Skip);
    }
    if cur.is_keyword("if") {
        cur.next();
        let t = parse_or(cur)?;
        cur.expect_keyword("then")?;
        let a = parse_seq(cur)?;
        cur.expect_keyword("else")?;
        let b = parse_seq(cur)?;
        cur.expect_keyword("fi")?;
        return Ok(Program::if_(t, a, b));
    }
    if cur.is_keyword("while") {
        cur.next();
        let guard = parse_or(cur)?;
        let invariant = if cur.is_keyword("invariant") {
            cur.next();
            Some(parse_or(cur)?)
        } else {
            None
        };
        cur.expect_keyword("do")?;
        let body = parse_seq(cur)?;
        cur.expect_keyword("od")?;
        return Ok(Program::While {
            guard,
            invariant,
            body: Box::new(body),
        });
    }
    ident(cur).map(Program::Atom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_programs() {
        let p = Program::parse("x ; if t then y else skip fi ; while !t do x od").unwrap();
        assert_eq!(
            p,
            Program::seq(
                Program::seq(
                    Program::atom("x"),
                    Program::if_(TestExpr::name("t"), Program::atom("y"), Program::Skip)
                ),
                Program::while_(TestExpr::not(TestExpr::name("t")), Program::atom("x"))
            )
        );
    }

    #[test]
    fn parses_invariants() {
        let p = Program::parse("while t invariant p & !q do x ; y od").unwrap();
        let Program::While { invariant, body, .. } = p else {
            panic!("expected a loop");
        };
        assert_eq!(invariant.unwrap().to_string(), "p & !q");
        assert_eq!(*body, Program::seq(Program::atom("x"), Program::atom("y")));
    }

    #[test]
    fn test_precedence() {
        let t = TestExpr::parse("a | b & !c").unwrap();
        assert_eq!(
            t,
            TestExpr::or(
                TestExpr::name("a"),
                TestExpr::and(TestExpr::name("b"), TestExpr::not(TestExpr::name("c")))
            )
        );
        assert_eq!(TestExpr::parse("!(a | 0) & 1").unwrap().to_string(), "!(a | 0) & 1");
    }

    #[test]
    fn round_trips() {
        for text in [
            "skip",
            "x ; y ; z",
            "x ; (y ; z)",
            "if a | b then x else y ; z fi",
            "while !t invariant p do if t then x else skip fi od",
        ] {
            assert_eq!(Program::parse(text).unwrap().to_string(), text);
        }
    }

    #[test]
    fn rejects_bad_programs() {
        assert!(Program::parse("if t then x fi").is_err());
        assert!(Program::parse("while do x od").is_err());
        assert!(Program::parse("x ;").is_err());
        assert!(Program::parse("od").is_err());
        let e = Program::parse("x y").unwrap_err();
        assert_eq!(e.column, 3);
    }
}
