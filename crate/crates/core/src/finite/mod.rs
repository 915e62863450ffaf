//! Finite algebras given by operation tables.

mod file;
mod search;

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::axioms::{check_axioms, AxiomProfile, CheckError, Violation};
use crate::model::{EvalError, FiniteModel, Model};
use crate::term::Op;

pub use file::ModelFileError;
pub use search::{find_models, for_each_model, Constraint, SearchConfig, SearchError};

/// Carrier elements are indices into the carrier list.
pub type Elem = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("carrier is empty")]
    EmptyCarrier,
    #[error("duplicate carrier element `{0}`")]
    DuplicateName(String),
    #[error("invalid element name `{0}`")]
    BadName(String),
    #[error("{table}: value {value} is outside the carrier")]
    OutOfRange { table: &'static str, value: usize },
    #[error("{table}: expected {expected} entries, found {found}")]
    TableSize { table: &'static str, expected: usize, found: usize },
    #[error("tests must contain zero and one")]
    TestsMissingUnit,
    #[error("tests must equal the image of the antidomain table")]
    TestsNotAntidomainImage,
    #[error("a complement table is required when tests are given without adom")]
    ComplementRequired,
    #[error("complement must be defined exactly on the tests and map into them (element {0})")]
    ComplementNotOnTests(String),
    #[error("complement is not an involution at {0}")]
    ComplementNotInvolution(String),
    #[error("complement disagrees with antidomain at {0}")]
    ComplementDisagreesWithAntidomain(String),
}

/// Raw tables for [`FiniteAlgebra::new`]. Binary tables are row-major:
/// entry `x * n + y` holds `x op y`.
#[derive(Debug, Clone, Default)]
pub struct AlgebraParts {
    pub names: Vec<String>,
    pub zero: Elem,
    pub one: Elem,
    pub plus: Vec<Elem>,
    pub times: Vec<Elem>,
    pub star: Option<Vec<Elem>>,
    pub adom: Option<Vec<Elem>>,
    pub aran: Option<Vec<Elem>>,
    /// `None` derives the tests from adom (or aran) when present.
    pub tests: Option<Vec<Elem>>,
    /// Indexed by carrier element; `Some` exactly on tests.
    pub complement: Option<Vec<Option<Elem>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteAlgebra {
    names: Vec<String>,
    zero: Elem,
    one: Elem,
    plus: Vec<Elem>,
    times: Vec<Elem>,
    star: Option<Vec<Elem>>,
    adom: Option<Vec<Elem>>,
    aran: Option<Vec<Elem>>,
    tests: Option<Vec<Elem>>,
    complement: Option<Vec<Option<Elem>>>,
}

fn image(table: &[Elem]) -> Vec<Elem> {
    table.iter().copied().collect::<BTreeSet<_>>().into_iter().collect()
}

impl FiniteAlgebra {
    pub fn new(parts: AlgebraParts) -> Result<FiniteAlgebra, AlgebraError> {
        let n = parts.names.len();
        if n == 0 {
            return Err(AlgebraError::EmptyCarrier);
        }
        let mut seen = BTreeSet::new();
        for name in &parts.names {
            if name.is_empty() || name.contains(char::is_whitespace) || name.contains('#') || name == "->" {
                return Err(AlgebraError::BadName(name.clone()));
            }
            if !seen.insert(name) {
                return Err(AlgebraError::DuplicateName(name.clone()));
            }
        }
        let check_range = |table: &'static str, values: &[Elem]| {
            values
                .iter()
                .find(|&&v| v >= n)
                .map_or(Ok(()), |&value| Err(AlgebraError::OutOfRange { table, value }))
        };
        let check_size = |table: &'static str, values: &[Elem], expected: usize| {
            if values.len() != expected {
                return Err(AlgebraError::TableSize {
                    table,
                    expected,
                    found: values.len(),
                });
            }
            check_range(table, values)
        };
        check_range("zero", &[parts.zero])?;
        check_range("one", &[parts.one])?;
        check_size("plus", &parts.plus, n * n)?;
        check_size("times", &parts.times, n * n)?;
        for (name, t) in [("star", &parts.star), ("adom", &parts.adom), ("aran", &parts.aran)] {
            if let Some(t) = t {
                check_size(name, t, n)?;
            }
        }
        let derived = parts.adom.as_deref().or(parts.aran.as_deref()).map(image);
        let tests = match (parts.tests, derived) {
            (Some(mut t), derived) => {
                check_range("tests", &t)?;
                t.sort_unstable();
                t.dedup();
                if parts.adom.is_some() && derived.as_ref() != Some(&t) {
                    return Err(AlgebraError::TestsNotAntidomainImage);
                }
                Some(t)
            }
            (None, derived) => derived,
        };
        if let Some(t) = &tests {
            if t.binary_search(&parts.zero).is_err() || t.binary_search(&parts.one).is_err() {
                return Err(AlgebraError::TestsMissingUnit);
            }
        }
        if let Some(c) = &parts.complement {
            let tests = tests.as_deref().unwrap_or(&[]);
            if c.len() != n {
                return Err(AlgebraError::TableSize {
                    table: "not",
                    expected: n,
                    found: c.len(),
                });
            }
            for (x, cx) in c.iter().enumerate() {
                let is_test = tests.binary_search(&x).is_ok();
                match cx {
                    Some(y) if is_test && tests.binary_search(y).is_ok() => {
                        if c[*y] != Some(x) {
                            return Err(AlgebraError::ComplementNotInvolution(parts.names[x].clone()));
                        }
                        if let Some(adom) = &parts.adom {
                            if adom[x] != *y {
                                return Err(AlgebraError::ComplementDisagreesWithAntidomain(
                                    parts.names[x].clone(),
                                ));
                            }
                        }
                    }
                    None if !is_test => {}
                    _ => return Err(AlgebraError::ComplementNotOnTests(parts.names[x].clone())),
                }
            }
        } else if tests.is_some() && parts.adom.is_none() && parts.aran.is_none() {
            return Err(AlgebraError::ComplementRequired);
        }
        Ok(FiniteAlgebra {
            names: parts.names,
            zero: parts.zero,
            one: parts.one,
            plus: parts.plus,
            times: parts.times,
            star: parts.star,
            adom: parts.adom,
            aran: parts.aran,
            tests,
            complement: parts.complement,
        })
    }

    /// Skips validation; used for candidate tables during model search.
    pub(crate) fn from_parts_unchecked(parts: AlgebraParts) -> FiniteAlgebra {
        let tests = parts
            .tests
            .or_else(|| parts.adom.as_deref().or(parts.aran.as_deref()).map(image));
        FiniteAlgebra {
            names: parts.names,
            zero: parts.zero,
            one: parts.one,
            plus: parts.plus,
            times: parts.times,
            star: parts.star,
            adom: parts.adom,
            aran: parts.aran,
            tests,
            complement: parts.complement,
        }
    }

    pub fn into_parts(self) -> AlgebraParts {
        AlgebraParts {
            names: self.names,
            zero: self.zero,
            one: self.one,
            plus: self.plus,
            times: self.times,
            star: self.star,
            adom: self.adom,
            aran: self.aran,
            tests: self.tests,
            complement: self.complement,
        }
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: Elem) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Option<Elem> {
        self.names.iter().position(|n| n == name)
    }

    pub fn zero_elem(&self) -> Elem {
        self.zero
    }

    pub fn one_elem(&self) -> Elem {
        self.one
    }

    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        self.plus[x * self.size() + y]
    }

    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        self.times[x * self.size() + y]
    }

    pub fn star_of(&self, x: Elem) -> Option<Elem> {
        self.star.as_ref().map(|t| t[x])
    }

    pub fn adom_of(&self, x: Elem) -> Option<Elem> {
        self.adom.as_ref().map(|t| t[x])
    }

    pub fn aran_of(&self, x: Elem) -> Option<Elem> {
        self.aran.as_ref().map(|t| t[x])
    }

    pub fn tests(&self) -> Option<&[Elem]> {
        self.tests.as_deref()
    }

    pub fn has_star(&self) -> bool {
        self.star.is_some()
    }

    pub fn has_adom(&self) -> bool {
        self.adom.is_some()
    }

    pub fn has_aran(&self) -> bool {
        self.aran.is_some()
    }

    pub fn has_complement_table(&self) -> bool {
        self.complement.is_some()
    }

    fn complement_of(&self, p: Elem) -> Option<Elem> {
        if let Some(c) = &self.complement {
            return c[p];
        }
        self.adom_of(p).or_else(|| self.aran_of(p))
    }

    /// Renames the carrier through `perm` (old index -> new index).
    pub(crate) fn permuted(&self, perm: &[Elem]) -> FiniteAlgebra {
        let n = self.size();
        let mut inv = vec![0; n];
        for (old, &new) in perm.iter().enumerate() {
            inv[new] = old;
        }
        let bin = |t: &[Elem]| -> Vec<Elem> {
            (0..n * n)
                .map(|k| perm[t[inv[k / n] * n + inv[k % n]]])
                .collect()
        };
        let un = |t: &Option<Vec<Elem>>| t.as_ref().map(|t| (0..n).map(|k| perm[t[inv[k]]]).collect());
        let mut tests = self.tests.as_ref().map(|t| t.iter().map(|&x| perm[x]).collect::<Vec<_>>());
        if let Some(t) = &mut tests {
            t.sort_unstable();
        }
        FiniteAlgebra {
            names: (0..n).map(|k| self.names[inv[k]].clone()).collect(),
            zero: perm[self.zero],
            one: perm[self.one],
            plus: bin(&self.plus),
            times: bin(&self.times),
            star: un(&self.star),
            adom: un(&self.adom),
            aran: un(&self.aran),
            tests,
            complement: self
                .complement
                .as_ref()
                .map(|c| (0..n).map(|k| c[inv[k]].map(|v| perm[v])).collect()),
        }
    }

    /// Same algebra with the carrier relabelled.
    pub fn with_names(mut self, names: Vec<String>) -> Result<FiniteAlgebra, AlgebraError> {
        if names.len() != self.size() {
            return Err(AlgebraError::TableSize {
                table: "names",
                expected: self.size(),
                found: names.len(),
            });
        }
        self.names = names;
        FiniteAlgebra::new(self.into_parts())
    }
}

impl Model for FiniteAlgebra {
    type Elem = Elem;

    fn zero(&self) -> Elem {
        self.zero
    }

    fn one(&self) -> Elem {
        self.one
    }

    fn plus(&self, x: &Elem, y: &Elem) -> Result<Elem, EvalError> {
        Ok(self.add(*x, *y))
    }

    fn times(&self, x: &Elem, y: &Elem) -> Result<Elem, EvalError> {
        Ok(self.mul(*x, *y))
    }

    fn star(&self, x: &Elem) -> Result<Elem, EvalError> {
        self.star_of(*x).ok_or(EvalError::MissingOperation(Op::Star))
    }

    fn adom(&self, x: &Elem) -> Result<Elem, EvalError> {
        self.adom_of(*x).ok_or(EvalError::MissingOperation(Op::ADom))
    }

    fn aran(&self, x: &Elem) -> Result<Elem, EvalError> {
        self.aran_of(*x).ok_or(EvalError::MissingOperation(Op::ARan))
    }

    fn complement(&self, p: &Elem) -> Result<Elem, EvalError> {
        if !self.is_test(p) {
            return Err(EvalError::NotATest(self.names[*p].clone()));
        }
        self.complement_of(*p).ok_or(EvalError::MissingOperation(Op::Not))
    }

    fn is_test(&self, x: &Elem) -> bool {
        self.tests.as_ref().is_some_and(|t| t.binary_search(x).is_ok())
    }

    fn supports(&self, op: Op) -> bool {
        match op {
            Op::Plus | Op::Times => true,
            Op::Star => self.star.is_some(),
            Op::ADom => self.adom.is_some(),
            Op::ARan => self.aran.is_some(),
            Op::Not => {
                self.tests.is_some()
                    && (self.complement.is_some() || self.adom.is_some() || self.aran.is_some())
            }
        }
    }

    fn show(&self, x: &Elem) -> String {
        self.names[*x].clone()
    }

    fn leq(&self, x: &Elem, y: &Elem) -> Result<bool, EvalError> {
        Ok(self.add(*x, *y) == *y)
    }
}

impl FiniteModel for FiniteAlgebra {
    fn elements(&self) -> Vec<Elem> {
        (0..self.size()).collect()
    }

    fn test_elements(&self) -> Option<Vec<Elem>> {
        self.tests.clone()
    }
}

/// The three-element Kleene algebra with tests `0 < a < 1`, `a;a = 0`,
/// `a* = 1`, whose only tests are `0` and `1`.
pub fn lemma4_model() -> FiniteAlgebra {
    let (z, a, o) = (0, 1, 2);
    let n = 3;
    let mut plus = vec![0; n * n];
    let mut times = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            plus[x * n + y] = x.max(y);
            times[x * n + y] = if x == o {
                y
            } else if y == o {
                x
            } else {
                debug_assert!(x == z || y == z || (x, y) == (a, a));
                z
            };
        }
    }
    FiniteAlgebra::new(AlgebraParts {
        names: vec!["0".into(), "a".into(), "1".into()],
        zero: z,
        one: o,
        plus,
        times,
        star: Some(vec![o, o, o]),
        adom: None,
        aran: None,
        tests: Some(vec![z, o]),
        complement: Some(vec![Some(o), None, Some(z)]),
    })
    .expect("lemma 4 tables are well formed")
}

/// The one-element algebra, in which `0 = 1`.
pub fn trivial_algebra() -> FiniteAlgebra {
    FiniteAlgebra::new(AlgebraParts {
        names: vec!["0".into()],
        zero: 0,
        one: 0,
        plus: vec![0],
        times: vec![0],
        star: Some(vec![0]),
        adom: Some(vec![0]),
        aran: Some(vec![0]),
        tests: None,
        complement: None,
    })
    .expect("trivial algebra is well formed")
}

/// The two-element boolean algebra `{0, 1}` with `a(0) = 1`, `a(1) = 0`.
pub fn boolean_algebra() -> FiniteAlgebra {
    FiniteAlgebra::new(AlgebraParts {
        names: vec!["0".into(), "1".into()],
        zero: 0,
        one: 1,
        plus: vec![0, 1, 1, 1],
        times: vec![0, 0, 0, 1],
        star: Some(vec![1, 1]),
        adom: Some(vec![1, 0]),
        aran: Some(vec![1, 0]),
        tests: None,
        complement: None,
    })
    .expect("boolean algebra is well formed")
}

/// Quantifier-alternating separation sentence: every valid triple
/// `{p} x;y {q}` has an intermediate test `r` with `{p} x {r}` and `{r} y {q}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhiOutcome<E> {
    pub holds: bool,
    /// First failing `(x, y, p, q)` in carrier order.
    pub witness: Option<(E, E, E, E)>,
    pub premises_checked: u64,
}

/// Brute-force check of the intermediate-assertion sentence.
pub fn check_phi<M: FiniteModel>(model: &M) -> Result<PhiOutcome<M::Elem>, CheckError> {
    let elements = model.elements();
    let tests = model
        .test_elements()
        .ok_or_else(|| CheckError::MissingTests("phi".to_string()))?;
    check_phi_on(model, &elements, &tests)
}

/// The same check with `x`, `y` ranging over `elements` and `p`, `q`, `r`
/// over `tests`.
pub fn check_phi_on<M: Model>(
    model: &M,
    elements: &[M::Elem],
    tests: &[M::Elem],
) -> Result<PhiOutcome<M::Elem>, CheckError> {
    let zero = model.zero();
    let not: Vec<M::Elem> = tests
        .iter()
        .map(|p| model.complement(p))
        .collect::<Result<_, _>>()?;
    // valid[p][x][q]  <=>  p;x;!q = 0
    let mut valid = vec![vec![vec![false; tests.len()]; elements.len()]; tests.len()];
    let mut px = Vec::with_capacity(tests.len());
    for (pi, p) in tests.iter().enumerate() {
        let row: Vec<M::Elem> = elements
            .iter()
            .map(|x| model.times(p, x))
            .collect::<Result<_, _>>()?;
        for (xi, pxv) in row.iter().enumerate() {
            for (ri, nr) in not.iter().enumerate() {
                valid[pi][xi][ri] = model.times(pxv, nr)? == zero;
            }
        }
        px.push(row);
    }
    let mut count = 0;
    for (xi, x) in elements.iter().enumerate() {
        for (yi, y) in elements.iter().enumerate() {
            for (pi, p) in tests.iter().enumerate() {
                let pxy = model.times(&px[pi][xi], y)?;
                for (qi, q) in tests.iter().enumerate() {
                    if model.times(&pxy, &not[qi])? != zero {
                        continue;
                    }
                    count += 1;
                    let found = (0..tests.len()).any(|ri| valid[pi][xi][ri] && valid[ri][yi][qi]);
                    if !found {
                        return Ok(PhiOutcome {
                            holds: false,
                            witness: Some((x.clone(), y.clone(), p.clone(), q.clone())),
                            premises_checked: count,
                        });
                    }
                }
            }
        }
    }
    Ok(PhiOutcome {
        holds: true,
        witness: None,
        premises_checked: count,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeriveError {
    #[error("the algebra has no antidomain table")]
    NoAntidomain,
    #[error("antidomain semiring axioms fail: {}", .0.first().map(|v| v.to_string()).unwrap_or_default())]
    NotAntidomainSemiring(Vec<Violation>),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Equips an antidomain semiring with its test algebra: the image of domain,
/// complemented by antidomain.
pub fn derive_test_algebra(a: &FiniteAlgebra) -> Result<FiniteAlgebra, DeriveError> {
    let adom = a.adom.as_ref().ok_or(DeriveError::NoAntidomain)?;
    let report = check_axioms(a, AxiomProfile::AntidomainSemiring).map_err(|_| DeriveError::NoAntidomain)?;
    if !report.passed {
        return Err(DeriveError::NotAntidomainSemiring(report.violations));
    }
    let tests = image(&(0..a.size()).map(|x| adom[adom[x]]).collect::<Vec<_>>());
    let complement = (0..a.size())
        .map(|x| tests.binary_search(&x).ok().map(|_| adom[x]))
        .collect();
    let mut parts = a.clone().into_parts();
    parts.tests = Some(tests);
    parts.complement = Some(complement);
    Ok(FiniteAlgebra::new(parts)?)
}

/// Searches for a bijection preserving units, every table and the tests.
pub fn is_isomorphic(a: &FiniteAlgebra, b: &FiniteAlgebra) -> bool {
    find_isomorphism(a, b).is_some()
}

/// Returns the map `a`-index -> `b`-index of an isomorphism, if any.
pub fn find_isomorphism(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Option<Vec<Elem>> {
    let n = a.size();
    if n != b.size()
        || a.star.is_some() != b.star.is_some()
        || a.adom.is_some() != b.adom.is_some()
        || a.aran.is_some() != b.aran.is_some()
        || a.tests.as_ref().map(Vec::len) != b.tests.as_ref().map(Vec::len)
    {
        return None;
    }
    let mut map: Vec<Option<Elem>> = vec![None; n];
    let mut used = vec![false; n];
    map[a.zero] = Some(b.zero);
    used[b.zero] = true;
    if a.one != a.zero {
        if b.one == b.zero {
            return None;
        }
        map[a.one] = Some(b.one);
        used[b.one] = true;
    } else if b.one != b.zero {
        return None;
    }
    fn consistent(a: &FiniteAlgebra, b: &FiniteAlgebra, map: &[Option<Elem>]) -> bool {
        let n = a.size();
        for x in 0..n {
            let Some(fx) = map[x] else { continue };
            let unary = |ta: &Option<Vec<Elem>>, tb: &Option<Vec<Elem>>| match (ta, tb) {
                (Some(ta), Some(tb)) => map[ta[x]].is_none_or(|v| v == tb[fx]),
                _ => true,
            };
            if !unary(&a.star, &b.star) || !unary(&a.adom, &b.adom) || !unary(&a.aran, &b.aran) {
                return false;
            }
            if a.is_test(&x) != b.is_test(&fx) {
                return false;
            }
            if a.is_test(&x) {
                if let (Some(cx), Some(cfx)) = (a.complement_of(x), b.complement_of(fx)) {
                    if map[cx].is_some_and(|v| v != cfx) {
                        return false;
                    }
                }
            }
            for y in 0..n {
                let Some(fy) = map[y] else { continue };
                if map[a.add(x, y)].is_some_and(|v| v != b.add(fx, fy))
                    || map[a.mul(x, y)].is_some_and(|v| v != b.mul(fx, fy))
                {
                    return false;
                }
            }
        }
        true
    }
    fn extend(
        a: &FiniteAlgebra,
        b: &FiniteAlgebra,
        map: &mut Vec<Option<Elem>>,
        used: &mut Vec<bool>,
    ) -> bool {
        if !consistent(a, b, map) {
            return false;
        }
        let Some(x) = map.iter().position(Option::is_none) else {
            return true;
        };
        for y in 0..a.size() {
            if used[y] {
                continue;
            }
            map[x] = Some(y);
            used[y] = true;
            if extend(a, b, map, used) {
                return true;
            }
            map[x] = None;
            used[y] = false;
        }
        false
    }
    if extend(a, b, &mut map, &mut used) {
        Some(map.into_iter().map(|v| v.expect("complete map")).collect())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{eval, Env};
    use crate::parse::parse_term;

    fn ev(a: &FiniteAlgebra, text: &str) -> Result<String, EvalError> {
        let t = parse_term(text, &BTreeSet::new()).unwrap();
        let mut env = Env::new();
        for (i, n) in a.names().iter().enumerate() {
            env = env.bind(n.clone(), i);
        }
        eval(a, &t, &env).map(|v| a.name(v).to_string())
    }

    #[test]
    fn lemma4_tables() {
        let m = lemma4_model();
        let a = m.index_of("a").unwrap();
        assert_eq!(m.name(m.mul(a, a)), "0");
        assert_eq!(m.name(m.star_of(a).unwrap()), "1");
        assert_eq!(m.name(m.add(a, m.one_elem())), "1");
        assert_eq!(m.name(m.star_of(m.zero_elem()).unwrap()), "1");
    }

    #[test]
    fn lemma4_products() {
        let m = lemma4_model();
        assert_eq!(ev(&m, "1 ; a ; a ; !0").unwrap(), "0");
        assert_eq!(ev(&m, "1 ; a ; !0").unwrap(), "a");
        assert_eq!(ev(&m, "1 ; a ; !1").unwrap(), "0");
        for x in ["0", "a", "1"] {
            assert_eq!(ev(&m, &format!("1 ; {x}")).unwrap(), x);
        }
    }

    #[test]
    fn complement_of_non_test_fails() {
        let m = lemma4_model();
        assert_eq!(ev(&m, "!a"), Err(EvalError::NotATest("a".into())));
        assert_eq!(ev(&m, "a(a)"), Err(EvalError::MissingOperation(Op::ADom)));
        assert_eq!(ev(&m, "x"), Err(EvalError::Unbound("x".into())));
    }

    #[test]
    fn lemma4_is_kat_but_not_kad() {
        let m = lemma4_model();
        let report = check_axioms(&m, AxiomProfile::Kat).unwrap();
        assert!(report.passed, "{:?}", report.violations);
        assert!(matches!(
            check_axioms(&m, AxiomProfile::Kad),
            Err(CheckError::MissingOperation { op: Op::ADom, .. })
        ));
    }

    #[test]
    fn broken_unit_is_reported() {
        let mut parts = lemma4_model().into_parts();
        parts.plus[1] = 0; // 0 + a = 0
        parts.plus[3] = 0; // a + 0 = 0
        let m = FiniteAlgebra::new(parts).unwrap();
        let report = check_axioms(&m, AxiomProfile::Semiring).unwrap();
        assert!(!report.passed);
        let v = report.violations.iter().find(|v| v.axiom == "plus-zero").unwrap();
        assert_eq!(v.assignment, vec![("x".to_string(), "a".to_string())]);
        assert_eq!((v.lhs.as_str(), v.rhs.as_str()), ("0", "a"));
    }

    #[test]
    fn phi_fails_on_lemma4_with_expected_witness() {
        let m = lemma4_model();
        let out = check_phi(&m).unwrap();
        assert!(!out.holds);
        let (x, y, p, q) = out.witness.unwrap();
        let names: Vec<&str> = [x, y, p, q].iter().map(|&e| m.name(e)).collect();
        assert_eq!(names, vec!["a", "a", "1", "0"]);
    }

    #[test]
    fn phi_holds_on_trivial_and_boolean() {
        assert!(check_phi(&trivial_algebra()).unwrap().holds);
        assert!(check_phi(&boolean_algebra()).unwrap().holds);
    }

    #[test]
    fn phi_needs_tests() {
        let mut parts = lemma4_model().into_parts();
        parts.tests = None;
        parts.complement = None;
        let m = FiniteAlgebra::new(parts).unwrap();
        assert!(matches!(check_phi(&m), Err(CheckError::MissingTests(_))));
    }

    #[test]
    fn derive_tests_of_small_algebras() {
        let t = derive_test_algebra(&trivial_algebra()).unwrap();
        assert_eq!(t.tests(), Some(&[0][..]));
        let b = derive_test_algebra(&boolean_algebra()).unwrap();
        assert_eq!(b.tests(), Some(&[0, 1][..]));
        assert!(check_axioms(&b, AxiomProfile::Kat).unwrap().passed);
        assert!(matches!(derive_test_algebra(&lemma4_model()), Err(DeriveError::NoAntidomain)));
    }

    #[test]
    fn derive_rejects_bad_antidomain() {
        let mut parts = boolean_algebra().into_parts();
        parts.adom = Some(vec![1, 1]);
        parts.aran = None;
        let m = FiniteAlgebra::from_parts_unchecked(parts);
        assert!(matches!(derive_test_algebra(&m), Err(DeriveError::NotAntidomainSemiring(_))));
    }

    #[test]
    fn validation_errors() {
        let mut parts = lemma4_model().into_parts();
        parts.complement = Some(vec![Some(2), None, Some(2)]);
        assert_eq!(
            FiniteAlgebra::new(parts),
            Err(AlgebraError::ComplementNotInvolution("0".into()))
        );
        let mut parts = lemma4_model().into_parts();
        parts.complement = Some(vec![Some(2), Some(1), Some(0)]);
        assert_eq!(
            FiniteAlgebra::new(parts),
            Err(AlgebraError::ComplementNotOnTests("a".into()))
        );
        let mut parts = lemma4_model().into_parts();
        parts.tests = Some(vec![0]);
        parts.complement = Some(vec![Some(0), None, None]);
        assert_eq!(FiniteAlgebra::new(parts), Err(AlgebraError::TestsMissingUnit));
        let mut parts = lemma4_model().into_parts();
        parts.complement = None;
        assert_eq!(FiniteAlgebra::new(parts), Err(AlgebraError::ComplementRequired));
        let mut parts = lemma4_model().into_parts();
        parts.times[4] = 7;
        assert!(matches!(FiniteAlgebra::new(parts), Err(AlgebraError::OutOfRange { .. })));
        let mut parts = boolean_algebra().into_parts();
        parts.tests = Some(vec![0, 1]);
        parts.adom = Some(vec![1, 1]);
        assert_eq!(FiniteAlgebra::new(parts), Err(AlgebraError::TestsNotAntidomainImage));
    }

    #[test]
    fn isomorphism_under_relabelling() {
        let m = lemma4_model();
        let renamed = m.clone().with_names(vec!["z".into(), "b".into(), "u".into()]).unwrap();
        assert!(is_isomorphic(&m, &renamed));
        assert!(!is_isomorphic(&m, &boolean_algebra()));
        let mut parts = lemma4_model().into_parts();
        parts.star = Some(vec![2, 1, 2]);
        let other = FiniteAlgebra::new(parts).unwrap();
        assert!(!is_isomorphic(&m, &other));
    }

    #[test]
    fn permutation_preserves_checks() {
        let m = lemma4_model();
        let p = m.permuted(&[2, 0, 1]);
        assert_eq!(p.name(p.zero_elem()), "0");
        assert!(is_isomorphic(&m, &p));
        assert!(check_axioms(&p, AxiomProfile::Kat).unwrap().passed);
    }
}
