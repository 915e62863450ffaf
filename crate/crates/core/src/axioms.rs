//! Axiom profiles and exhaustive checking of (quasi-)equational laws.
//!
//! Laws are written in the ordinary term syntax and instantiated over the
//! carrier of a model: element variables (`x`, `y`, `z`) range over the
//! element pool, test variables (`p`, `q`, `r`) over the test pool.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::model::{eval_with, EvalError, FiniteModel, Model};
use crate::parse::parse_term;
use crate::term::{Op, Sort, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Eq(Term, Term),
    /// `lhs ≤ rhs`, decided by `lhs + rhs = rhs`.
    Leq(Term, Term),
    /// The value of the term is a test.
    IsTest(Term),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    fn terms<'a>(&'a self, out: &mut Vec<&'a Term>) {
        match self {
            Formula::Eq(a, b) | Formula::Leq(a, b) => {
                out.push(a);
                out.push(b);
            }
            Formula::IsTest(a) => out.push(a),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.terms(out);
                b.terms(out);
            }
        }
    }

    /// Parses `lhs = rhs`, `lhs <= rhs`, `test t`, and one level of `=>` or
    /// `<=>` between such atoms. `p`, `q` and `r` are test variables.
    pub fn parse(text: &str) -> Result<Formula, String> {
        let tests: BTreeSet<String> = ["p", "q", "r"].iter().map(|s| s.to_string()).collect();
        let atom = |s: &str| -> Result<Formula, String> {
            let s = s.trim();
            let term = |t: &str| parse_term(t.trim(), &tests).map_err(|e| format!("`{t}`: {e}"));
            if let Some(rest) = s.strip_prefix("test ") {
                Ok(Formula::IsTest(term(rest)?))
            } else if let Some((l, r)) = s.split_once("<=") {
                Ok(Formula::Leq(term(l)?, term(r)?))
            } else if let Some((l, r)) = s.split_once('=') {
                Ok(Formula::Eq(term(l)?, term(r)?))
            } else {
                Err(format!("not an atomic law: `{s}`"))
            }
        };
        if let Some((l, r)) = text.split_once("<=>") {
            Ok(Formula::Iff(Box::new(atom(l)?), Box::new(atom(r)?)))
        } else if let Some((l, r)) = text.split_once("=>") {
            Ok(Formula::Implies(Box::new(atom(l)?), Box::new(atom(r)?)))
        } else {
            atom(text)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::Leq(a, b) => write!(f, "{a} <= {b}"),
            Formula::IsTest(a) => write!(f, "test {a}"),
            Formula::Implies(a, b) => write!(f, "{a} => {b}"),
            Formula::Iff(a, b) => write!(f, "{a} <=> {b}"),
        }
    }
}

/// A named law with its variables in instantiation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axiom {
    pub name: String,
    pub formula: Formula,
    vars: Vec<(String, Sort)>,
    ops: BTreeSet<Op>,
}

impl Axiom {
    /// Builds a law from its textual form; panics on malformed text, which is
    /// reserved for laws written in source.
    pub fn new(name: &str, text: &str) -> Axiom {
        let formula = Formula::parse(text).unwrap_or_else(|e| panic!("law {name}: {e}"));
        Axiom::from_formula(name, formula)
    }

    pub fn from_formula(name: &str, formula: Formula) -> Axiom {
        let mut terms = Vec::new();
        formula.terms(&mut terms);
        let mut vars: Vec<(String, Sort)> = Vec::new();
        let mut ops = BTreeSet::new();
        for t in terms {
            for v in t.variables() {
                if !vars.iter().any(|(n, _)| *n == v.0) {
                    vars.push(v);
                }
            }
            ops.extend(t.operations());
        }
        vars.sort();
        Axiom {
            name: name.to_string(),
            formula,
            vars,
            ops,
        }
    }

    pub fn variables(&self) -> &[(String, Sort)] {
        &self.vars
    }

    pub fn operations(&self) -> &BTreeSet<Op> {
        &self.ops
    }

    pub fn uses_tests(&self) -> bool {
        self.vars.iter().any(|(_, s)| *s == Sort::Test)
            || matches!(self.formula, Formula::IsTest(_))
            || self.ops.contains(&Op::Not)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum AxiomProfile {
    Semiring,
    Dioid,
    Kleene,
    TestSemiring,
    Kat,
    AntidomainSemiring,
    /// Antidomain near-semiring: no left distributivity, no `x;0 = 0`.
    NearAntidomainSemiring,
    Kad,
    AntirangeSemiring,
    /// Kleene algebra with antidomain, antirange and the compatibility laws.
    KaDomainRange,
}

impl AxiomProfile {
    pub const ALL: [AxiomProfile; 10] = [
        AxiomProfile::Semiring,
        AxiomProfile::Dioid,
        AxiomProfile::Kleene,
        AxiomProfile::TestSemiring,
        AxiomProfile::Kat,
        AxiomProfile::AntidomainSemiring,
        AxiomProfile::NearAntidomainSemiring,
        AxiomProfile::Kad,
        AxiomProfile::AntirangeSemiring,
        AxiomProfile::KaDomainRange,
    ];

    pub fn cli_name(self) -> &'static str {
        match self {
            AxiomProfile::Semiring => "semiring",
            AxiomProfile::Dioid => "dioid",
            AxiomProfile::Kleene => "kleene",
            AxiomProfile::TestSemiring => "ts",
            AxiomProfile::Kat => "kat",
            AxiomProfile::AntidomainSemiring => "as",
            AxiomProfile::NearAntidomainSemiring => "near-as",
            AxiomProfile::Kad => "kad",
            AxiomProfile::AntirangeSemiring => "ars",
            AxiomProfile::KaDomainRange => "kadr",
        }
    }

    fn groups(self) -> &'static [Group] {
        use Group::*;
        match self {
            AxiomProfile::Semiring => &[SemiringCore, SemiringLeft],
            AxiomProfile::Dioid => &[SemiringCore, SemiringLeft, Idempotence],
            AxiomProfile::Kleene => &[SemiringCore, SemiringLeft, Idempotence, Star],
            AxiomProfile::TestSemiring => &[SemiringCore, SemiringLeft, Idempotence, Tests],
            AxiomProfile::Kat => &[SemiringCore, SemiringLeft, Idempotence, Star, Tests],
            AxiomProfile::AntidomainSemiring => &[SemiringCore, SemiringLeft, Antidomain],
            AxiomProfile::NearAntidomainSemiring => &[SemiringCore, Antidomain],
            AxiomProfile::Kad => &[SemiringCore, SemiringLeft, Idempotence, Star, Antidomain],
            AxiomProfile::AntirangeSemiring => &[SemiringCore, SemiringLeft, Antirange],
            AxiomProfile::KaDomainRange => &[
                SemiringCore,
                SemiringLeft,
                Idempotence,
                Star,
                Antidomain,
                Antirange,
                Compatibility,
            ],
        }
    }

    /// The axioms of this profile, in reporting order.
    pub fn axioms(self) -> Vec<&'static Axiom> {
        self.groups().iter().flat_map(|g| g.axioms().iter()).collect()
    }

    /// Whether the profile has a test algebra, and how it is obtained.
    pub fn test_source(self) -> TestSource {
        match self {
            AxiomProfile::Semiring | AxiomProfile::Dioid | AxiomProfile::Kleene => TestSource::None,
            AxiomProfile::TestSemiring | AxiomProfile::Kat => TestSource::Explicit,
            AxiomProfile::AntirangeSemiring => TestSource::Antirange,
            _ => TestSource::Antidomain,
        }
    }

    pub fn required_operations(self) -> BTreeSet<Op> {
        let mut ops: BTreeSet<Op> = self
            .axioms()
            .iter()
            .flat_map(|a| a.operations().iter().copied())
            .collect();
        ops.insert(Op::Plus);
        ops.insert(Op::Times);
        ops
    }

    /// Whether all of `x;(y+z) = x;y + x;z` and `x;0 = 0` are required.
    pub fn left_distributive(self) -> bool {
        self != AxiomProfile::NearAntidomainSemiring
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestSource {
    None,
    Explicit,
    Antidomain,
    Antirange,
}

impl fmt::Display for AxiomProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.cli_name())
    }
}

impl FromStr for AxiomProfile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AxiomProfile::ALL
            .into_iter()
            .find(|p| p.cli_name() == s.to_ascii_lowercase())
            .ok_or_else(|| {
                format!(
                    "unknown profile `{s}` (expected one of: {})",
                    AxiomProfile::ALL.map(|p| p.cli_name()).join(", ")
                )
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Group {
    SemiringCore,
    SemiringLeft,
    Idempotence,
    Star,
    Tests,
    Antidomain,
    Antirange,
    Compatibility,
}

macro_rules! law_table {
    ($($name:literal : $text:literal),* $(,)?) => {
        vec![$(Axiom::new($name, $text)),*]
    };
}

impl Group {
    fn axioms(self) -> &'static [Axiom] {
        static TABLES: OnceLock<Vec<Vec<Axiom>>> = OnceLock::new();
        let tables = TABLES.get_or_init(|| {
            vec![
                law_table![
                    "plus-assoc": "x + (y + z) = (x + y) + z",
                    "plus-comm": "x + y = y + x",
                    "plus-zero": "x + 0 = x",
                    "times-assoc": "x ; (y ; z) = (x ; y) ; z",
                    "times-unit-left": "1 ; x = x",
                    "times-unit-right": "x ; 1 = x",
                    "distrib-right": "(x + y) ; z = x ; z + y ; z",
                    "annihil-zero-times": "0 ; x = 0",
                ],
                law_table![
                    "distrib-left": "x ; (y + z) = x ; y + x ; z",
                    "annihil-times-zero": "x ; 0 = 0",
                ],
                law_table!["plus-idem": "x + x = x"],
                law_table![
                    "star-unfold-left": "1 + x ; x* = x*",
                    "star-unfold-right": "1 + x* ; x = x*",
                    "star-induct-left": "z + x ; y <= y => x* ; z <= y",
                    "star-induct-right": "z + y ; x <= y => z ; x* <= y",
                ],
                law_table![
                    "test-zero": "test 0",
                    "test-one": "test 1",
                    "test-join-closed": "test p + q",
                    "test-meet-closed": "test p ; q",
                    "test-complement-closed": "test !p",
                    "test-meet-comm": "p ; q = q ; p",
                    "test-meet-idem": "p ; p = p",
                    "test-absorb-join": "p + p ; q = p",
                    "test-absorb-meet": "p ; (p + q) = p",
                    "test-distrib": "p + q ; r = (p + q) ; (p + r)",
                    "test-complement-join": "p + !p = 1",
                    "test-complement-meet": "p ; !p = 0",
                ],
                law_table![
                    "antidomain-annihil": "a(x) ; x = 0",
                    "antidomain-locality": "a(x ; y) + a(x ; a(a(y))) = a(x ; a(a(y)))",
                    "antidomain-complement": "a(x) + a(a(x)) = 1",
                ],
                law_table![
                    "antirange-annihil": "x ; ar(x) = 0",
                    "antirange-locality": "ar(x ; y) + ar(r(x) ; y) = ar(r(x) ; y)",
                    "antirange-complement": "ar(x) + r(x) = 1",
                ],
                law_table![
                    "compat-domain-antirange": "d(ar(x)) = ar(x)",
                    "compat-range-antidomain": "r(a(x)) = a(x)",
                ],
            ]
        });
        let idx = match self {
            Group::SemiringCore => 0,
            Group::SemiringLeft => 1,
            Group::Idempotence => 2,
            Group::Star => 3,
            Group::Tests => 4,
            Group::Antidomain => 5,
            Group::Antirange => 6,
            Group::Compatibility => 7,
        };
        &tables[idx]
    }
}

/// Consequences of the antidomain axioms that hold in every antidomain
/// semiring: locality of zero products, the retraction property of domain,
/// and the boolean complement laws.
pub fn domain_laws() -> Vec<Axiom> {
    law_table![
        "zero-product-locality": "x ; y = 0 <=> x ; d(y) = 0",
        "domain-retraction": "d(d(x)) = d(x)",
        "antidomain-annihil": "a(x) ; x = 0",
        "antidomain-domain-join": "a(x) + d(x) = 1",
        "domain-left-unit": "d(x) ; x = x",
    ]
}

/// The opposition duals of [`domain_laws`].
pub fn range_laws() -> Vec<Axiom> {
    law_table![
        "zero-product-range-locality": "x ; y = 0 <=> r(x) ; y = 0",
        "range-retraction": "r(r(x)) = r(x)",
        "antirange-annihil": "x ; ar(x) = 0",
        "antirange-range-join": "ar(x) + r(x) = 1",
        "range-right-unit": "x ; r(x) = x",
    ]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: String,
    pub law: String,
    pub assignment: Vec<(String, String)>,
    pub lhs: String,
    pub rhs: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let assignment: Vec<String> = self
            .assignment
            .iter()
            .map(|(n, v)| format!("{n}={v}"))
            .collect();
        write!(
            f,
            "{} [{}] at {}: lhs = {}, rhs = {}",
            self.axiom,
            self.law,
            assignment.join(" "),
            self.lhs,
            self.rhs
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub profile: AxiomProfile,
    pub passed: bool,
    pub axioms_checked: usize,
    pub instances_checked: u64,
    /// First violating assignment of each failing axiom, in axiom order.
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("profile `{profile}` needs operation `{op}`, which the model does not provide")]
    MissingOperation { profile: String, op: Op },
    #[error("`{0}` needs a test algebra, which the model does not provide")]
    MissingTests(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Checks every axiom of `profile` at every assignment over the model's
/// full carrier.
pub fn check_axioms<M: FiniteModel>(model: &M, profile: AxiomProfile) -> Result<CheckReport, CheckError> {
    let elements = model.elements();
    let tests = model.test_elements();
    check_axioms_on(model, profile, &elements, tests.as_deref())
}

/// Checks `profile` with variables ranging over the given pools (which may
/// be samples of an infinite or very large carrier).
pub fn check_axioms_on<M: Model>(
    model: &M,
    profile: AxiomProfile,
    elements: &[M::Elem],
    tests: Option<&[M::Elem]>,
) -> Result<CheckReport, CheckError> {
    let axioms = profile.axioms();
    for op in profile.required_operations() {
        if !model.supports(op) {
            return Err(CheckError::MissingOperation {
                profile: profile.to_string(),
                op,
            });
        }
    }
    if axioms.iter().any(|a| a.uses_tests()) && tests.is_none() {
        return Err(CheckError::MissingTests(profile.to_string()));
    }
    let tests = tests.unwrap_or(&[]);
    let mut violations = Vec::new();
    let mut instances = 0;
    for ax in &axioms {
        let (n, v) = check_law(model, ax, elements, tests);
        instances += n;
        violations.extend(v);
    }
    Ok(CheckReport {
        profile,
        passed: violations.is_empty(),
        axioms_checked: axioms.len(),
        instances_checked: instances,
        violations,
    })
}

/// Checks arbitrary laws; returns one violation per failing law.
pub fn check_laws<M: Model>(
    model: &M,
    laws: &[Axiom],
    elements: &[M::Elem],
    tests: &[M::Elem],
) -> Vec<Violation> {
    laws.iter()
        .filter_map(|ax| check_law(model, ax, elements, tests).1)
        .collect()
}

/// Returns the number of instances examined and the first violation.
pub fn check_law<M: Model>(
    model: &M,
    ax: &Axiom,
    elements: &[M::Elem],
    tests: &[M::Elem],
) -> (u64, Option<Violation>) {
    let pools: Vec<&[M::Elem]> = ax
        .vars
        .iter()
        .map(|(_, s)| match s {
            Sort::Element => elements,
            Sort::Test => tests,
        })
        .collect();
    if pools.iter().any(|p| p.is_empty()) {
        return (0, None);
    }
    let mut idx = vec![0usize; pools.len()];
    let mut count = 0;
    loop {
        count += 1;
        let values: Vec<&M::Elem> = idx.iter().zip(&pools).map(|(&i, p)| &p[i]).collect();
        if let Some((lhs, rhs)) = violation_at(model, ax, &values) {
            let assignment = ax
                .vars
                .iter()
                .zip(&values)
                .map(|((n, _), v)| (n.clone(), model.show(v)))
                .collect();
            return (
                count,
                Some(Violation {
                    axiom: ax.name.clone(),
                    law: ax.formula.to_string(),
                    assignment,
                    lhs,
                    rhs,
                }),
            );
        }
        // Odometer with the last variable varying fastest.
        let mut k = pools.len();
        loop {
            if k == 0 {
                return (count, None);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < pools[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

enum Outcome {
    Holds,
    Fails(String, String),
}

fn violation_at<M: Model>(model: &M, ax: &Axiom, values: &[&M::Elem]) -> Option<(String, String)> {
    let lookup = |name: &str, _sort: Sort| -> Result<M::Elem, EvalError> {
        ax.vars
            .iter()
            .position(|(n, _)| n == name)
            .map(|i| values[i].clone())
            .ok_or_else(|| EvalError::Unbound(name.to_string()))
    };
    match judge(model, &ax.formula, &lookup) {
        Ok(Outcome::Holds) => None,
        Ok(Outcome::Fails(l, r)) => Some((l, r)),
        Err(e) => Some(("<error>".to_string(), e.to_string())),
    }
}

fn judge<M, F>(model: &M, f: &Formula, lookup: &F) -> Result<Outcome, EvalError>
where
    M: Model,
    F: Fn(&str, Sort) -> Result<M::Elem, EvalError>,
{
    let ev = |t: &Term| eval_with(model, t, lookup);
    Ok(match f {
        Formula::Eq(a, b) => {
            let (l, r) = (ev(a)?, ev(b)?);
            if l == r {
                Outcome::Holds
            } else {
                Outcome::Fails(model.show(&l), model.show(&r))
            }
        }
        Formula::Leq(a, b) => {
            let (l, r) = (ev(a)?, ev(b)?);
            if model.leq(&l, &r)? {
                Outcome::Holds
            } else {
                Outcome::Fails(model.show(&l), model.show(&r))
            }
        }
        Formula::IsTest(a) => {
            let v = ev(a)?;
            if model.is_test(&v) {
                Outcome::Holds
            } else {
                Outcome::Fails(model.show(&v), "<a test>".to_string())
            }
        }
        Formula::Implies(prem, concl) => match judge(model, prem, lookup)? {
            Outcome::Fails(..) => Outcome::Holds,
            Outcome::Holds => judge(model, concl, lookup)?,
        },
        Formula::Iff(a, b) => {
            let ha = matches!(judge(model, a, lookup)?, Outcome::Holds);
            let hb = matches!(judge(model, b, lookup)?, Outcome::Holds);
            if ha == hb {
                Outcome::Holds
            } else {
                Outcome::Fails(format!("left side {ha}"), format!("right side {hb}"))
            }
        }
    })
}
