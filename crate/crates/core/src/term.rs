//! Terms over the signature of Kleene algebras with tests and with domain.
//!
//! A [`Term`] is interpreted in any [`Model`](crate::model::Model). Only
//! `0`, `1`, `+`, `;`, `*`, complement, antidomain and antirange are primitive;
//! box, domain and range are sugar and are removed by [`desugar`].

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Zero,
    One,
    Var(String),
    TestVar(String),
    Plus(Box<Term>, Box<Term>),
    Times(Box<Term>, Box<Term>),
    Star(Box<Term>),
    /// Test complement.
    Not(Box<Term>),
    ADom(Box<Term>),
    Dom(Box<Term>),
    ARan(Box<Term>),
    Ran(Box<Term>),
    /// `[x]y`, the modal box.
    Box(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn test(name: impl Into<String>) -> Term {
        Term::TestVar(name.into())
    }

    pub fn plus(lhs: Term, rhs: Term) -> Term {
        Term::Plus(Box::new(lhs), Box::new(rhs))
    }

    pub fn times(lhs: Term, rhs: Term) -> Term {
        Term::Times(Box::new(lhs), Box::new(rhs))
    }

    pub fn star(t: Term) -> Term {
        Term::Star(Box::new(t))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(t: Term) -> Term {
        Term::Not(Box::new(t))
    }

    pub fn adom(t: Term) -> Term {
        Term::ADom(Box::new(t))
    }

    pub fn dom(t: Term) -> Term {
        Term::Dom(Box::new(t))
    }

    pub fn aran(t: Term) -> Term {
        Term::ARan(Box::new(t))
    }

    pub fn ran(t: Term) -> Term {
        Term::Ran(Box::new(t))
    }

    pub fn boxed(program: Term, post: Term) -> Term {
        Term::Box(Box::new(program), Box::new(post))
    }

    /// Names of all variables (element and test) in first-occurrence order.
    pub fn variables(&self) -> Vec<(String, Sort)> {
        fn walk(t: &Term, out: &mut Vec<(String, Sort)>) {
            match t {
                Term::Zero | Term::One => {}
                Term::Var(n) => push(out, n, Sort::Element),
                Term::TestVar(n) => push(out, n, Sort::Test),
                Term::Plus(a, b) | Term::Times(a, b) | Term::Box(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                Term::Star(a)
                | Term::Not(a)
                | Term::ADom(a)
                | Term::Dom(a)
                | Term::ARan(a)
                | Term::Ran(a) => walk(a, out),
            }
        }
        fn push(out: &mut Vec<(String, Sort)>, name: &str, sort: Sort) {
            if !out.iter().any(|(n, _)| n == name) {
                out.push((name.to_string(), sort));
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// Primitive operators this term uses once sugar is expanded.
    pub fn operations(&self) -> BTreeSet<Op> {
        fn walk(t: &Term, out: &mut BTreeSet<Op>) {
            match t {
                Term::Zero | Term::One | Term::Var(_) | Term::TestVar(_) => {}
                Term::Plus(a, b) => {
                    out.insert(Op::Plus);
                    walk(a, out);
                    walk(b, out);
                }
                Term::Times(a, b) => {
                    out.insert(Op::Times);
                    walk(a, out);
                    walk(b, out);
                }
                Term::Box(a, b) => {
                    out.insert(Op::Times);
                    out.insert(Op::ADom);
                    walk(a, out);
                    walk(b, out);
                }
                Term::Star(a) => {
                    out.insert(Op::Star);
                    walk(a, out);
                }
                Term::Not(a) => {
                    out.insert(Op::Not);
                    walk(a, out);
                }
                Term::ADom(a) | Term::Dom(a) => {
                    out.insert(Op::ADom);
                    walk(a, out);
                }
                Term::ARan(a) | Term::Ran(a) => {
                    out.insert(Op::ARan);
                    walk(a, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut out);
        out
    }

    pub fn is_desugared(&self) -> bool {
        match self {
            Term::Zero | Term::One | Term::Var(_) | Term::TestVar(_) => true,
            Term::Box(..) | Term::Dom(_) | Term::Ran(_) => false,
            Term::Plus(a, b) | Term::Times(a, b) => a.is_desugared() && b.is_desugared(),
            Term::Star(a) | Term::Not(a) | Term::ADom(a) | Term::ARan(a) => a.is_desugared(),
        }
    }
}

/// Primitive operators a model may or may not provide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    Plus,
    Times,
    Star,
    Not,
    ADom,
    ARan,
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Op::Plus => "plus",
            Op::Times => "times",
            Op::Star => "star",
            Op::Not => "not",
            Op::ADom => "adom",
            Op::ARan => "aran",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum Sort {
    Element,
    Test,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("sort error: complement applied to non-test term `{subterm}`")]
pub struct SortError {
    pub subterm: Term,
}

/// Computes the sort of `t`. Plain variables named in `declared_tests` count
/// as tests, as do all `TestVar`s.
pub fn sort_of(t: &Term, declared_tests: &BTreeSet<String>) -> Result<Sort, SortError> {
    use Sort::*;
    Ok(match t {
        Term::Zero | Term::One | Term::TestVar(_) => Test,
        Term::Var(n) => {
            if declared_tests.contains(n) {
                Test
            } else {
                Element
            }
        }
        Term::Plus(a, b) | Term::Times(a, b) => {
            let (sa, sb) = (sort_of(a, declared_tests)?, sort_of(b, declared_tests)?);
            if sa == Test && sb == Test {
                Test
            } else {
                Element
            }
        }
        Term::Star(a) => {
            sort_of(a, declared_tests)?;
            Element
        }
        Term::Not(a) => match sort_of(a, declared_tests)? {
            Test => Test,
            Element => {
                return Err(SortError {
                    subterm: (**a).clone(),
                })
            }
        },
        Term::ADom(a) | Term::Dom(a) | Term::ARan(a) | Term::Ran(a) => {
            sort_of(a, declared_tests)?;
            Test
        }
        Term::Box(a, b) => {
            sort_of(a, declared_tests)?;
            sort_of(b, declared_tests)?;
            Test
        }
    })
}

/// Expands box, domain and range into antidomain/antirange form.
pub fn desugar(t: &Term) -> Term {
    match t {
        Term::Zero | Term::One | Term::Var(_) | Term::TestVar(_) => t.clone(),
        Term::Plus(a, b) => Term::plus(desugar(a), desugar(b)),
        Term::Times(a, b) => Term::times(desugar(a), desugar(b)),
        Term::Star(a) => Term::star(desugar(a)),
        Term::Not(a) => Term::not(desugar(a)),
        Term::ADom(a) => Term::adom(desugar(a)),
        Term::ARan(a) => Term::aran(desugar(a)),
        Term::Dom(a) => Term::adom(Term::adom(desugar(a))),
        Term::Ran(a) => Term::aran(Term::aran(desugar(a))),
        Term::Box(x, y) => Term::adom(Term::times(desugar(x), Term::adom(desugar(y)))),
    }
}

// Printing precedence levels; higher binds tighter.
const PREC_PLUS: u8 = 0;
const PREC_TIMES: u8 = 1;
const PREC_PREFIX: u8 = 2;
const PREC_POSTFIX: u8 = 3;

fn prec(t: &Term) -> u8 {
    match t {
        Term::Plus(..) => PREC_PLUS,
        Term::Times(..) => PREC_TIMES,
        Term::Not(_) | Term::Box(..) => PREC_PREFIX,
        Term::Star(_) => PREC_POSTFIX,
        _ => u8::MAX,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, t: &Term, min: u8) -> fmt::Result {
    if prec(t) < min {
        write!(f, "(")?;
        write_term(f, t)?;
        write!(f, ")")
    } else {
        write_term(f, t)
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, t: &Term) -> fmt::Result {
    match t {
        Term::Zero => f.write_str("0"),
        Term::One => f.write_str("1"),
        Term::Var(n) | Term::TestVar(n) => f.write_str(n),
        // Both operators associate to the left.
        Term::Plus(a, b) => {
            write_at(f, a, PREC_PLUS)?;
            f.write_str(" + ")?;
            write_at(f, b, PREC_TIMES)
        }
        Term::Times(a, b) => {
            write_at(f, a, PREC_TIMES)?;
            f.write_str(" ; ")?;
            write_at(f, b, PREC_PREFIX)
        }
        Term::Star(a) => {
            write_at(f, a, PREC_POSTFIX)?;
            f.write_str("*")
        }
        Term::Not(a) => {
            f.write_str("!")?;
            write_at(f, a, PREC_PREFIX)
        }
        Term::Box(a, b) => {
            f.write_str("[")?;
            write_term(f, a)?;
            f.write_str("]")?;
            write_at(f, b, PREC_PREFIX)
        }
        Term::ADom(a) => write!(f, "a({a})"),
        Term::Dom(a) => write!(f, "d({a})"),
        Term::ARan(a) => write!(f, "ar({a})"),
        Term::Ran(a) => write!(f, "r({a})"),
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_tests() -> BTreeSet<String> {
        BTreeSet::new()
    }

    #[test]
    fn antidomain_is_test_sorted() {
        assert_eq!(sort_of(&Term::adom(Term::var("x")), &no_tests()), Ok(Sort::Test));
    }

    #[test]
    fn plain_variable_is_element() {
        assert_eq!(sort_of(&Term::var("x"), &no_tests()), Ok(Sort::Element));
    }

    #[test]
    fn complement_of_element_is_rejected() {
        let err = sort_of(&Term::not(Term::var("x")), &no_tests()).unwrap_err();
        assert_eq!(err.subterm, Term::var("x"));
    }

    #[test]
    fn declared_names_are_tests() {
        let tests: BTreeSet<String> = ["q".to_string()].into();
        assert_eq!(sort_of(&Term::not(Term::var("q")), &tests), Ok(Sort::Test));
    }

    #[test]
    fn star_of_test_is_element() {
        assert_eq!(sort_of(&Term::star(Term::test("p")), &no_tests()), Ok(Sort::Element));
    }

    #[test]
    fn box_expands_to_antidomain() {
        let t = Term::boxed(Term::var("x"), Term::test("q"));
        assert_eq!(
            desugar(&t),
            Term::adom(Term::times(Term::var("x"), Term::adom(Term::test("q"))))
        );
    }

    #[test]
    fn domain_and_range_expand() {
        assert_eq!(
            desugar(&Term::dom(Term::var("x"))),
            Term::adom(Term::adom(Term::var("x")))
        );
        assert_eq!(
            desugar(&Term::ran(Term::var("x"))),
            Term::aran(Term::aran(Term::var("x")))
        );
        assert_eq!(desugar(&Term::var("x")), Term::var("x"));
    }

    #[test]
    fn printing_parenthesizes_by_precedence() {
        let t = Term::times(
            Term::plus(Term::var("x"), Term::var("y")),
            Term::star(Term::times(Term::var("x"), Term::var("y"))),
        );
        assert_eq!(t.to_string(), "(x + y) ; (x ; y)*");
        let t = Term::plus(Term::var("x"), Term::plus(Term::var("y"), Term::var("z")));
        assert_eq!(t.to_string(), "x + (y + z)");
        let t = Term::star(Term::not(Term::test("p")));
        assert_eq!(t.to_string(), "(!p)*");
        let t = Term::not(Term::star(Term::test("p")));
        assert_eq!(t.to_string(), "!p*");
    }
}
