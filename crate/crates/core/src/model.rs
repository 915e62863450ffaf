//! The interface every concrete model implements, and term evaluation over it.

use std::collections::BTreeMap;
use std::fmt::Debug;

use thiserror::Error;

use crate::term::{Op, Sort, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("operation `{0}` is not available in this model")]
    MissingOperation(Op),
    #[error("complement applied to non-test element {0}")]
    NotATest(String),
    #[error("test variable `{name}` is bound to non-test element {value}")]
    TestBinding { name: String, value: String },
    #[error("{0}")]
    Model(String),
}

/// A concrete structure in which terms can be evaluated.
///
/// Optional operations default to [`EvalError::MissingOperation`].
pub trait Model {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn plus(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem, EvalError>;
    fn times(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem, EvalError>;

    fn star(&self, _x: &Self::Elem) -> Result<Self::Elem, EvalError> {
        Err(EvalError::MissingOperation(Op::Star))
    }
    fn adom(&self, _x: &Self::Elem) -> Result<Self::Elem, EvalError> {
        Err(EvalError::MissingOperation(Op::ADom))
    }
    fn aran(&self, _x: &Self::Elem) -> Result<Self::Elem, EvalError> {
        Err(EvalError::MissingOperation(Op::ARan))
    }
    /// Boolean complement of a test.
    fn complement(&self, p: &Self::Elem) -> Result<Self::Elem, EvalError>;
    fn is_test(&self, x: &Self::Elem) -> bool;
    fn supports(&self, op: Op) -> bool;
    /// Human-readable rendering of an element, used in reports.
    fn show(&self, x: &Self::Elem) -> String;

    /// `x ≤ y` in the additive order.
    fn leq(&self, x: &Self::Elem, y: &Self::Elem) -> Result<bool, EvalError> {
        Ok(&self.plus(x, y)? == y)
    }
}

/// A model whose carrier and test set can be enumerated.
pub trait FiniteModel: Model {
    fn elements(&self) -> Vec<Self::Elem>;
    fn test_elements(&self) -> Option<Vec<Self::Elem>>;
}

/// Variable bindings for evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Env<E> {
    elements: BTreeMap<String, E>,
    tests: BTreeMap<String, E>,
}

impl<E> Default for Env<E> {
    fn default() -> Self {
        Env {
            elements: BTreeMap::new(),
            tests: BTreeMap::new(),
        }
    }
}

impl<E: Clone> Env<E> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(mut self, name: impl Into<String>, value: E) -> Self {
        self.elements.insert(name.into(), value);
        self
    }

    pub fn bind_test(mut self, name: impl Into<String>, value: E) -> Self {
        self.tests.insert(name.into(), value);
        self
    }

    pub fn insert(&mut self, name: impl Into<String>, value: E, sort: Sort) {
        match sort {
            Sort::Element => self.elements.insert(name.into(), value),
            Sort::Test => self.tests.insert(name.into(), value),
        };
    }

    /// Looks a name up in the given sort first, then in the other one.
    pub fn get(&self, name: &str, sort: Sort) -> Option<&E> {
        let (first, second) = match sort {
            Sort::Element => (&self.elements, &self.tests),
            Sort::Test => (&self.tests, &self.elements),
        };
        first.get(name).or_else(|| second.get(name))
    }

    pub fn test_names(&self) -> impl Iterator<Item = &String> {
        self.tests.keys()
    }
}

/// Evaluates `t` in `model` under `env`. Sugar (box, domain, range) is
/// interpreted by its expansion.
pub fn eval<M: Model>(model: &M, t: &Term, env: &Env<M::Elem>) -> Result<M::Elem, EvalError> {
    eval_with(model, t, &|name, sort| {
        env.get(name, sort)
            .cloned()
            .ok_or_else(|| EvalError::Unbound(name.to_string()))
    })
}

/// Evaluation with a caller-supplied variable lookup.
pub fn eval_with<M, F>(model: &M, t: &Term, lookup: &F) -> Result<M::Elem, EvalError>
where
    M: Model,
    F: Fn(&str, Sort) -> Result<M::Elem, EvalError>,
{
    let ev = |t: &Term| eval_with(model, t, lookup);
    match t {
        Term::Zero => Ok(model.zero()),
        Term::One => Ok(model.one()),
        Term::Var(n) => lookup(n, Sort::Element),
        Term::TestVar(n) => {
            let v = lookup(n, Sort::Test)?;
            if model.is_test(&v) {
                Ok(v)
            } else {
                Err(EvalError::TestBinding {
                    name: n.clone(),
                    value: model.show(&v),
                })
            }
        }
        Term::Plus(a, b) => model.plus(&ev(a)?, &ev(b)?),
        Term::Times(a, b) => model.times(&ev(a)?, &ev(b)?),
        Term::Star(a) => model.star(&ev(a)?),
        Term::Not(a) => {
            let v = ev(a)?;
            if !model.is_test(&v) {
                return Err(EvalError::NotATest(model.show(&v)));
            }
            model.complement(&v)
        }
        Term::ADom(a) => model.adom(&ev(a)?),
        Term::ARan(a) => model.aran(&ev(a)?),
        Term::Dom(a) => {
            let v = model.adom(&ev(a)?)?;
            model.adom(&v)
        }
        Term::Ran(a) => {
            let v = model.aran(&ev(a)?)?;
            model.aran(&v)
        }
        Term::Box(x, y) => {
            let post = model.adom(&ev(y)?)?;
            let v = model.times(&ev(x)?, &post)?;
            model.adom(&v)
        }
    }
}
