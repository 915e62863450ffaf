//! Verification-condition generation by structural wlp.
//!
//! Loops with an `invariant` annotation contribute the usual two side
//! conditions and use the invariant as their precondition; loops without
//! one use the exact wlp of the loop's denotation.

use std::fmt;

use serde::Serialize;

use super::{wlp_rel, Bindings, HoareError, Program};
use crate::rel::Rel;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vc {
    pub description: String,
    /// The condition is `lhs <= rhs` between tests.
    pub lhs: Rel,
    pub rhs: Rel,
}

impl Vc {
    pub fn holds(&self) -> bool {
        self.lhs.is_subset(&self.rhs).expect("conditions share one state space")
    }

    /// States in `lhs` but not in `rhs`.
    pub fn failing_states(&self) -> Vec<String> {
        let names = self.lhs.space().names();
        self.lhs
            .states()
            .into_iter()
            .filter(|&s| !self.rhs.contains(s, s))
            .map(|s| names[s].clone())
            .collect()
    }
}

impl fmt::Display for Vc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} <= {}", self.description, self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VcRecord {
    pub description: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
    pub failing_states: Vec<String>,
}

impl From<&Vc> for VcRecord {
    fn from(vc: &Vc) -> Self {
        VcRecord {
            description: vc.description.clone(),
            lhs: vc.lhs.to_string(),
            rhs: vc.rhs.to_string(),
            holds: vc.holds(),
            failing_states: vc.failing_states(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VcReport {
    /// The computed precondition of the whole program.
    pub precondition: Rel,
    /// The entry condition first, then loop side conditions in program order.
    pub conditions: Vec<Vc>,
}

impl VcReport {
    pub fn valid(&self) -> bool {
        self.conditions.iter().all(Vc::holds)
    }
}

/// Generates the conditions under which `{pre} prog {post}` is proved.
pub fn vcgen(prog: &Program, pre: &Rel, post: &Rel, bindings: &Bindings) -> Result<VcReport, HoareError> {
    for t in [pre, post] {
        if !t.is_subidentity() {
            return Err(HoareError::NotATest(t.to_string()));
        }
    }
    let mut side = Vec::new();
    let precondition = structural_wlp(prog, post, bindings, &mut side)?;
    let mut conditions = vec![Vc {
        description: format!("pre <= wlp({prog}, post)"),
        lhs: pre.clone(),
        rhs: precondition.clone(),
    }];
    conditions.extend(side);
    Ok(VcReport {
        precondition,
        conditions,
    })
}

fn structural_wlp(prog: &Program, q: &Rel, b: &Bindings, side: &mut Vec<Vc>) -> Result<Rel, HoareError> {
    Ok(match prog {
        Program::Skip => q.clone(),
        Program::Atom(_) => wlp_rel(&b.denote(prog)?, q)?,
        Program::Seq(x, y) => {
            let mid = structural_wlp(y, q, b, side)?;
            structural_wlp(x, &mid, b, side)?
        }
        Program::If(t, x, y) => {
            let t = b.eval_test(t)?;
            let wx = structural_wlp(x, q, b, side)?;
            let wy = structural_wlp(y, q, b, side)?;
            t.compose(&wx)?.union(&t.complement_test()?.compose(&wy)?)?
        }
        Program::While { invariant: None, .. } => wlp_rel(&b.denote(prog)?, q)?,
        Program::While {
            guard,
            invariant: Some(inv),
            body,
        } => {
            let t = b.eval_test(guard)?;
            let i = b.eval_test(inv)?;
            let mut inner = Vec::new();
            let wbody = structural_wlp(body, &i, b, &mut inner)?;
            side.push(Vc {
                description: format!("invariant {inv} preserved by {body} under {guard}"),
                lhs: i.compose(&t)?,
                rhs: wbody,
            });
            side.extend(inner);
            side.push(Vc {
                description: format!("invariant {inv} and !({guard}) establish post"),
                lhs: i.compose(&t.complement_test()?)?,
                rhs: q.clone(),
            });
            i
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hoare::{wlp, ProgramFile};

    const COUNTDOWN: &str = "\
states: 0 1 2 3
rel dec = {(1,0),(2,1),(3,2)}
test pos = {(1,1),(2,2),(3,3)}
test zero = {(0,0)}
test all = id
";

    fn setup() -> Bindings {
        ProgramFile::parse(COUNTDOWN).unwrap().bindings
    }

    #[test]
    fn loop_without_invariant_is_exact() {
        let b = setup();
        let prog = Program::parse("while pos do dec od").unwrap();
        let zero = b.test("zero").unwrap().clone();
        let r = vcgen(&prog, &Rel::id(b.space()), &zero, &b).unwrap();
        assert!(r.valid());
        assert_eq!(r.conditions.len(), 1);
        assert_eq!(r.precondition, wlp(&prog, &zero, &b).unwrap());
    }

    #[test]
    fn invariant_conditions() {
        let b = setup();
        let prog = Program::parse("while pos invariant all do dec od").unwrap();
        let zero = b.test("zero").unwrap().clone();
        let r = vcgen(&prog, &Rel::id(b.space()), &zero, &b).unwrap();
        assert_eq!(r.conditions.len(), 3);
        assert!(r.valid(), "{:?}", r.conditions);

        let weak = Program::parse("while pos invariant pos do dec od").unwrap();
        let r = vcgen(&weak, &Rel::id(b.space()), &zero, &b).unwrap();
        assert!(!r.valid());
        let failing: Vec<_> = r.conditions.iter().filter(|c| !c.holds()).collect();
        // The entry condition fails at state 0 and preservation fails at 1.
        assert_eq!(failing[0].failing_states(), ["0"]);
        assert_eq!(failing[1].failing_states(), ["1"]);
    }

    #[test]
    fn structural_matches_semantic_without_invariants() {
        let b = setup();
        let zero = b.test("zero").unwrap().clone();
        for text in [
            "dec ; dec",
            "if pos then dec else skip fi",
            "dec ; while pos do dec od ; skip",
        ] {
            let prog = Program::parse(text).unwrap();
            let r = vcgen(&prog, &zero, &zero, &b).unwrap();
            assert_eq!(r.precondition, wlp(&prog, &zero, &b).unwrap(), "{text}");
        }
    }
}
