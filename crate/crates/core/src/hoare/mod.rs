//! Propositional Hoare logic over relations: program semantics, triples,
//! weakest liberal preconditions, intermediate assertions and the
//! invertibility of the inference rules.
//!
//! Assertions are tests, i.e. subidentities. `{p}x{q}` holds when
//! `p;x;!q = 0`.

mod file;
mod syntax;
pub mod vcgen;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::model::{EvalError, Model};
use crate::rel::{Rel, RelError, StateSpace};

pub use file::{ProgramFile, ProgramFileError};
pub use syntax::{Program, TestExpr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HoareError {
    #[error("unbound atomic program `{0}`")]
    UnboundAtom(String),
    #[error("unbound test `{0}`")]
    UnboundTest(String),
    #[error("`{0}` must be a test (subidentity)")]
    NotATest(String),
    #[error("premise {{{p}}} x;y {{{q}}} does not hold, so no intermediate assertion is promised")]
    PremiseFails { p: String, q: String },
    #[error(transparent)]
    Rel(#[from] RelError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Named relations and tests over one state space.
#[derive(Debug, Clone)]
pub struct Bindings {
    space: Arc<StateSpace>,
    rels: BTreeMap<String, Rel>,
    tests: BTreeMap<String, Rel>,
}

impl Bindings {
    pub fn new(space: Arc<StateSpace>) -> Self {
        Bindings {
            space,
            rels: BTreeMap::new(),
            tests: BTreeMap::new(),
        }
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        &self.space
    }

    pub fn bind_rel(&mut self, name: impl Into<String>, r: Rel) -> Result<(), HoareError> {
        if **r.space() != *self.space {
            return Err(RelError::SpaceMismatch.into());
        }
        self.rels.insert(name.into(), r);
        Ok(())
    }

    pub fn bind_test(&mut self, name: impl Into<String>, t: Rel) -> Result<(), HoareError> {
        let name = name.into();
        if **t.space() != *self.space {
            return Err(RelError::SpaceMismatch.into());
        }
        if !t.is_subidentity() {
            return Err(HoareError::NotATest(name));
        }
        self.tests.insert(name, t);
        Ok(())
    }

    pub fn with_rel(mut self, name: impl Into<String>, r: Rel) -> Result<Self, HoareError> {
        self.bind_rel(name, r)?;
        Ok(self)
    }

    pub fn with_test(mut self, name: impl Into<String>, t: Rel) -> Result<Self, HoareError> {
        self.bind_test(name, t)?;
        Ok(self)
    }

    pub fn rel(&self, name: &str) -> Option<&Rel> {
        self.rels.get(name)
    }

    pub fn test(&self, name: &str) -> Option<&Rel> {
        self.tests.get(name)
    }

    pub fn rels(&self) -> impl Iterator<Item = (&String, &Rel)> {
        self.rels.iter()
    }

    pub fn tests(&self) -> impl Iterator<Item = (&String, &Rel)> {
        self.tests.iter()
    }

    pub fn eval_test(&self, t: &TestExpr) -> Result<Rel, HoareError> {
        Ok(match t {
            TestExpr::Zero => Rel::empty(&self.space),
            TestExpr::One => Rel::id(&self.space),
            TestExpr::Name(n) => self.tests.get(n).cloned().ok_or_else(|| HoareError::UnboundTest(n.clone()))?,
            TestExpr::Not(a) => self.eval_test(a)?.complement_test()?,
            TestExpr::And(a, b) => self.eval_test(a)?.compose(&self.eval_test(b)?)?,
            TestExpr::Or(a, b) => self.eval_test(a)?.union(&self.eval_test(b)?)?,
        })
    }

    /// The input/output relation of a program. An atom names a relation or,
    /// failing that, a test used as an assumption.
    pub fn denote(&self, prog: &Program) -> Result<Rel, HoareError> {
        Ok(match prog {
            Program::Skip => Rel::id(&self.space),
            Program::Atom(n) => match (self.rels.get(n), self.tests.get(n)) {
                (Some(r), _) | (None, Some(r)) => r.clone(),
                (None, None) => return Err(HoareError::UnboundAtom(n.clone())),
            },
            Program::Seq(a, b) => self.denote(a)?.compose(&self.denote(b)?)?,
            Program::If(t, a, b) => {
                let t = self.eval_test(t)?;
                if_then_else(&t, &self.denote(a)?, &self.denote(b)?)?
            }
            Program::While { guard, body, .. } => while_do(&self.eval_test(guard)?, &self.denote(body)?)?,
        })
    }
}

/// `t;x + !t;y`
pub fn if_then_else(t: &Rel, x: &Rel, y: &Rel) -> Result<Rel, RelError> {
    t.compose(x)?.union(&t.complement_test()?.compose(y)?)
}

/// `(t;x)* ; !t`
pub fn while_do(t: &Rel, x: &Rel) -> Result<Rel, RelError> {
    t.compose(x)?.star().compose(&t.complement_test()?)
}

/// `{p}x{q}` for relations: `p;x;!q` is empty.
pub fn triple(p: &Rel, x: &Rel, q: &Rel) -> Result<bool, RelError> {
    Ok(p.compose(x)?.compose(&q.complement_test()?)?.is_empty())
}

/// The weakest liberal precondition `[x]q`.
pub fn wlp_rel(x: &Rel, q: &Rel) -> Result<Rel, RelError> {
    x.box_(q)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HoareTriple {
    pub pre: Rel,
    pub prog: Program,
    pub post: Rel,
}

impl HoareTriple {
    pub fn holds(&self, bindings: &Bindings) -> Result<bool, HoareError> {
        for t in [&self.pre, &self.post] {
            if !t.is_subidentity() {
                return Err(HoareError::NotATest(t.to_string()));
            }
        }
        Ok(triple(&self.pre, &bindings.denote(&self.prog)?, &self.post)?)
    }
}

/// The weakest liberal precondition of a program, computed from its denotation.
pub fn wlp(prog: &Program, post: &Rel, bindings: &Bindings) -> Result<Rel, HoareError> {
    Ok(wlp_rel(&bindings.denote(prog)?, post)?)
}

/// How to pick an intermediate assertion `r` with `{p}x{r}` and `{r}y{q}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// `a(y;!q)`, the weakest choice.
    Wlp,
    /// `r(p;x)`, the strongest choice, computed as `ar(ar(p;x))`.
    Range,
    /// The product of the two.
    Meet,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Wlp, Method::Range, Method::Meet];
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Wlp => "wlp",
            Method::Range => "range",
            Method::Meet => "meet",
        })
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Method::ALL
            .into_iter()
            .find(|m| m.to_string() == s)
            .ok_or_else(|| format!("unknown method `{s}` (expected wlp, range or meet)"))
    }
}

/// `{p}x{q}` in any model: `p;x;!q = 0`.
pub fn triple_in<M: Model>(m: &M, p: &M::Elem, x: &M::Elem, q: &M::Elem) -> Result<bool, EvalError> {
    Ok(m.times(&m.times(p, x)?, &m.complement(q)?)? == m.zero())
}

/// Synthesizes an intermediate assertion in any model supporting the
/// operations the method needs. Fails unless `{p}x;y{q}` holds.
pub fn synth_mid_in<M: Model>(
    m: &M,
    x: &M::Elem,
    y: &M::Elem,
    p: &M::Elem,
    q: &M::Elem,
    method: Method,
) -> Result<M::Elem, HoareError> {
    for t in [p, q] {
        if !m.is_test(t) {
            return Err(HoareError::NotATest(m.show(t)));
        }
    }
    if !triple_in(m, p, &m.times(x, y)?, q)? {
        return Err(HoareError::PremiseFails {
            p: m.show(p),
            q: m.show(q),
        });
    }
    let weakest = || -> Result<M::Elem, EvalError> { m.adom(&m.times(y, &m.complement(q)?)?) };
    let strongest = || -> Result<M::Elem, EvalError> { m.aran(&m.aran(&m.times(p, x)?)?) };
    Ok(match method {
        Method::Wlp => weakest()?,
        Method::Range => strongest()?,
        Method::Meet => m.times(&strongest()?, &weakest()?)?,
    })
}

/// [`synth_mid_in`] on relations.
pub fn synth_mid(x: &Rel, y: &Rel, p: &Rel, q: &Rel, method: Method) -> Result<Rel, HoareError> {
    synth_mid_in(&crate::rel::RelAlgebra::new(x.space().clone()), x, y, p, q, method)
}

/// [`synth_mid`] for programs under bindings.
pub fn synth_mid_program(
    x: &Program,
    y: &Program,
    p: &Rel,
    q: &Rel,
    method: Method,
    bindings: &Bindings,
) -> Result<Rel, HoareError> {
    synth_mid(&bindings.denote(x)?, &bindings.denote(y)?, p, q, method)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Seq,
    If,
    While,
    Conseq,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Seq => "seq",
            Rule::If => "if",
            Rule::While => "while",
            Rule::Conseq => "conseq",
        })
    }
}

/// Concrete relations for one application of a rule.
#[derive(Debug, Clone)]
pub enum RuleInstance {
    /// `{p}x{[y]q} <=> {p}x;y{q}`
    Seq { p: Rel, x: Rel, y: Rel, q: Rel },
    /// `{p;t}x{q} & {p;!t}y{q} <=> {p} if t then x else y {q}`
    If { p: Rel, t: Rel, x: Rel, y: Rel, q: Rel },
    /// `{p;t}x{p} => {p} while t do x {p;!t}`, inverted through the
    /// invariant triple `{p}(t;x)*{p}`.
    While { p: Rel, t: Rel, x: Rel },
    /// `p <= p1 & {p1}x{q1} & q1 <= q => {p}x{q}`, inverted with `p1 = [x]q`
    /// and `q1 = q`.
    Conseq { p: Rel, p1: Rel, x: Rel, q1: Rel, q: Rel },
}

impl RuleInstance {
    pub fn rule(&self) -> Rule {
        match self {
            RuleInstance::Seq { .. } => Rule::Seq,
            RuleInstance::If { .. } => Rule::If,
            RuleInstance::While { .. } => Rule::While,
            RuleInstance::Conseq { .. } => Rule::Conseq,
        }
    }
}

/// One implication evaluated on an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Direction {
    pub premise: bool,
    pub conclusion: bool,
}

impl Direction {
    pub fn holds(&self) -> bool {
        !self.premise || self.conclusion
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InversionReport {
    pub rule: Rule,
    /// The rule as an inference, premises to conclusion.
    pub forward: Direction,
    /// Its inverse, conclusion back to premises.
    pub inverse: Direction,
    /// Further implications worth reporting; these are not required to hold.
    pub diagnostics: Vec<(String, Direction)>,
}

impl InversionReport {
    pub fn invertible(&self) -> bool {
        self.forward.holds() && self.inverse.holds()
    }
}

fn require_tests(ts: &[&Rel]) -> Result<(), HoareError> {
    match ts.iter().find(|t| !t.is_subidentity()) {
        Some(t) => Err(HoareError::NotATest(t.to_string())),
        None => Ok(()),
    }
}

/// Evaluates a rule and its inverse on a concrete instance.
pub fn check_rule_inversion(instance: &RuleInstance) -> Result<InversionReport, HoareError> {
    let dir = |premise, conclusion| Direction { premise, conclusion };
    let mut diagnostics = Vec::new();
    let (forward, inverse) = match instance {
        RuleInstance::Seq { p, x, y, q } => {
            require_tests(&[p, q])?;
            let split = triple(p, x, &wlp_rel(y, q)?)?;
            let whole = triple(p, &x.compose(y)?, q)?;
            diagnostics.push(("{[y]q}y{q}".to_string(), dir(true, triple(&wlp_rel(y, q)?, y, q)?)));
            (dir(split, whole), dir(whole, split))
        }
        RuleInstance::If { p, t, x, y, q } => {
            require_tests(&[p, t, q])?;
            let branches = triple(&p.compose(t)?, x, q)? && triple(&p.compose(&t.complement_test()?)?, y, q)?;
            let whole = triple(p, &if_then_else(t, x, y)?, q)?;
            (dir(branches, whole), dir(whole, branches))
        }
        RuleInstance::While { p, t, x } => {
            require_tests(&[p, t])?;
            let body = triple(&p.compose(t)?, x, p)?;
            let invariant = triple(p, &t.compose(x)?.star(), p)?;
            let loop_ = triple(p, &while_do(t, x)?, &p.compose(&t.complement_test()?)?)?;
            diagnostics.push(("{p;t}x{p} => {p}(t;x)*{p}".to_string(), dir(body, invariant)));
            diagnostics.push(("{p} while t do x {p;!t} => {p;t}x{p}".to_string(), dir(loop_, body)));
            (dir(body, loop_), dir(invariant, body))
        }
        RuleInstance::Conseq { p, p1, x, q1, q } => {
            require_tests(&[p, p1, q1, q])?;
            let premises = p.is_subset(p1)? && triple(p1, x, q1)? && q1.is_subset(q)?;
            let whole = triple(p, x, q)?;
            let w = wlp_rel(x, q)?;
            let canonical = p.is_subset(&w)? && triple(&w, x, q)?;
            (dir(premises, whole), dir(whole, canonical))
        }
    };
    Ok(InversionReport {
        rule: instance.rule(),
        forward,
        inverse,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(n: usize) -> Arc<StateSpace> {
        StateSpace::numbered(n).unwrap()
    }

    fn rel(s: &Arc<StateSpace>, text: &str) -> Rel {
        Rel::parse(s, text).unwrap()
    }

    #[test]
    fn denotations() {
        let s = space(2);
        let b = Bindings::new(s.clone())
            .with_rel("x", rel(&s, "{(1,2)}"))
            .unwrap()
            .with_rel("y", rel(&s, "{(2,1)}"))
            .unwrap()
            .with_test("p", rel(&s, "{(1,1)}"))
            .unwrap();
        assert_eq!(b.denote(&Program::Skip).unwrap(), Rel::id(&s));
        let ite = Program::parse("if p then x else y fi").unwrap();
        assert_eq!(b.denote(&ite).unwrap(), rel(&s, "{(1,2),(2,1)}"));
        let spin = Program::parse("while p do skip od").unwrap();
        assert_eq!(b.denote(&spin).unwrap(), rel(&s, "{(2,2)}"));
        let run = Program::parse("while p do x od").unwrap();
        assert_eq!(b.denote(&run).unwrap(), rel(&s, "{(1,2),(2,2)}"));
        assert_eq!(b.denote(&Program::atom("p")).unwrap(), rel(&s, "{(1,1)}"));
        assert_eq!(
            b.denote(&Program::atom("z")).unwrap_err(),
            HoareError::UnboundAtom("z".into())
        );
        assert!(matches!(
            b.denote(&Program::parse("if q then x else y fi").unwrap()),
            Err(HoareError::UnboundTest(_))
        ));
    }

    #[test]
    fn triples() {
        let s = space(2);
        let b = Bindings::new(s.clone()).with_rel("r", rel(&s, "{(1,2)}")).unwrap();
        let t = |pre: &str, prog: &str, post: &str| HoareTriple {
            pre: rel(&s, pre),
            prog: Program::parse(prog).unwrap(),
            post: rel(&s, post),
        };
        assert!(t("id", "skip", "id").holds(&b).unwrap());
        assert!(t("id", "r", "{(2,2)}").holds(&b).unwrap());
        assert!(!t("id", "r", "{(1,1)}").holds(&b).unwrap());
        assert!(matches!(t("full", "r", "id").holds(&b), Err(HoareError::NotATest(_))));
    }

    #[test]
    fn wlp_examples() {
        let s = space(2);
        let b = Bindings::new(s.clone()).with_rel("r", rel(&s, "{(1,2)}")).unwrap();
        let q = rel(&s, "{(2,2)}");
        assert_eq!(wlp(&Program::Skip, &q, &b).unwrap(), q);
        assert_eq!(wlp(&Program::atom("r"), &q, &b).unwrap(), Rel::id(&s));
        let rr = Program::parse("r ; r").unwrap();
        let inner = wlp(&Program::atom("r"), &q, &b).unwrap();
        assert_eq!(wlp(&rr, &q, &b).unwrap(), wlp(&Program::atom("r"), &inner, &b).unwrap());
    }

    #[test]
    fn synthesis_example() {
        let s = space(3);
        let x = rel(&s, "{(1,2)}");
        let y = rel(&s, "{(2,3)}");
        let p = rel(&s, "{(1,1)}");
        let q = rel(&s, "{(3,3)}");
        assert_eq!(synth_mid(&x, &y, &p, &q, Method::Wlp).unwrap(), Rel::id(&s));
        assert_eq!(synth_mid(&x, &y, &p, &q, Method::Range).unwrap(), rel(&s, "{(2,2)}"));
        assert_eq!(synth_mid(&x, &y, &p, &q, Method::Meet).unwrap(), rel(&s, "{(2,2)}"));
        let bad = rel(&s, "{(2,2)}");
        assert!(matches!(
            synth_mid(&x, &y, &p, &bad, Method::Wlp),
            Err(HoareError::PremiseFails { .. })
        ));
    }

    #[test]
    fn synthesis_in_a_table_model() {
        // The size-2 relational algebra exported as tables agrees with the direct computation.
        let s = space(2);
        let alg = crate::rel::as_finite_algebra(&s).unwrap();
        let x = rel(&s, "{(1,2)}");
        let y = rel(&s, "{(2,1),(2,2)}");
        let p = rel(&s, "{(1,1)}");
        let q = Rel::id(&s);
        let idx = |r: &Rel| r.to_mask() as usize;
        for m in Method::ALL {
            let direct = synth_mid(&x, &y, &p, &q, m).unwrap();
            let table = synth_mid_in(&alg, &idx(&x), &idx(&y), &idx(&p), &idx(&q), m).unwrap();
            assert_eq!(table, idx(&direct));
        }
    }

    #[test]
    fn rule_examples() {
        let s = space(3);
        let x = rel(&s, "{(1,2)}");
        let y = rel(&s, "{(2,3)}");
        let p = rel(&s, "{(1,1)}");
        let q = rel(&s, "{(3,3)}");
        let r = check_rule_inversion(&RuleInstance::Seq { p, x: x.clone(), y, q }).unwrap();
        assert!(r.forward.premise && r.forward.conclusion && r.invertible());

        let empty_guard = RuleInstance::While {
            p: Rel::id(&s),
            t: Rel::empty(&s),
            x: Rel::full(&s),
        };
        let r = check_rule_inversion(&empty_guard).unwrap();
        assert!(r.invertible());
        assert!(r.diagnostics.iter().all(|(_, d)| d.holds()));

        let s2 = space(2);
        let r = check_rule_inversion(&RuleInstance::If {
            p: Rel::id(&s2),
            t: rel(&s2, "{(1,1)}"),
            x: rel(&s2, "{(1,2)}"),
            y: rel(&s2, "{(2,2)}"),
            q: rel(&s2, "{(2,2)}"),
        })
        .unwrap();
        assert!(r.forward.premise && r.forward.conclusion && r.invertible());
    }

    #[test]
    fn literal_loop_inverse_can_fail() {
        // A loop that never terminates satisfies every triple vacuously.
        let s = space(2);
        let r = check_rule_inversion(&RuleInstance::While {
            p: rel(&s, "{(1,1)}"),
            t: Rel::id(&s),
            x: rel(&s, "{(1,2)}"),
        })
        .unwrap();
        assert!(r.invertible());
        let (_, literal) = &r.diagnostics[1];
        assert!(!literal.holds());
    }

    #[test]
    fn method_names() {
        for m in Method::ALL {
            assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
        }
        assert!("best".parse::<Method>().is_err());
    }
}
