//! Exhaustive search for small models of an axiom profile.
//!
//! Carriers are `0, a, b, ..., 1` with zero first and one last. Tables are
//! enumerated one operation at a time (plus, times, then each unary
//! operation and the test algebra independently), and every layer is
//! filtered by the axioms that mention only operations fixed so far. Of each
//! isomorphism class only the representative with the lexicographically
//! least tables is produced.

use std::ops::ControlFlow;

use thiserror::Error;

use super::{check_phi, AlgebraParts, Elem, FiniteAlgebra};
use crate::axioms::{check_law, Axiom, AxiomProfile, TestSource};
use crate::term::Op;

/// Test elements with their complement table.
type TestAlgebra = (Vec<Elem>, Vec<Option<Elem>>);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    PhiFails,
    PhiHolds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub max_size: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { max_size: 4 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("refusing to search models of size {size}: the configured bound is {max}")]
    TooLarge { size: usize, max: usize },
    #[error("model size must be at least 1")]
    Empty,
    #[error("profile `{0}` has no tests, so the phi constraint does not apply")]
    NoTests(AxiomProfile),
    #[error("search produced an ill-formed algebra: {0}")]
    Invalid(String),
}

/// Collects every model of the given size and profile, in canonical order.
pub fn find_models(
    size: usize,
    profile: AxiomProfile,
    constraint: Option<Constraint>,
    config: SearchConfig,
) -> Result<Vec<FiniteAlgebra>, SearchError> {
    let mut out = Vec::new();
    for_each_model(size, profile, constraint, config, |m| {
        out.push(m);
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Streams models to `visit` in canonical order; `visit` may stop early.
pub fn for_each_model<F>(
    size: usize,
    profile: AxiomProfile,
    constraint: Option<Constraint>,
    config: SearchConfig,
    mut visit: F,
) -> Result<(), SearchError>
where
    F: FnMut(FiniteAlgebra) -> ControlFlow<()>,
{
    if size == 0 {
        return Err(SearchError::Empty);
    }
    if size > config.max_size {
        return Err(SearchError::TooLarge {
            size,
            max: config.max_size,
        });
    }
    if constraint.is_some() && profile.test_source() == TestSource::None {
        return Err(SearchError::NoTests(profile));
    }
    Search::new(size, profile).run(constraint, &mut visit)
}

#[derive(Default)]
struct Buckets<'a> {
    plus: Vec<&'a Axiom>,
    times: Vec<&'a Axiom>,
    star: Vec<&'a Axiom>,
    adom: Vec<&'a Axiom>,
    aran: Vec<&'a Axiom>,
    tests: Vec<&'a Axiom>,
    cross: Vec<&'a Axiom>,
}

struct Search {
    n: usize,
    profile: AxiomProfile,
    names: Vec<String>,
    zero: Elem,
    one: Elem,
}

fn carrier_names(n: usize) -> Vec<String> {
    if n == 1 {
        return vec!["0".to_string()];
    }
    let mut names = vec!["0".to_string()];
    names.extend((0..n - 2).map(|i| ((b'a' + i as u8) as char).to_string()));
    names.push("1".to_string());
    names
}

/// All vectors of length `len` over `0..base`, in lexicographic order.
fn assignments(len: usize, base: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current = Some(vec![0; len]);
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let next = current.as_mut().unwrap();
        let mut k = len;
        loop {
            if k == 0 {
                current = None;
                break;
            }
            k -= 1;
            next[k] += 1;
            if next[k] < base {
                break;
            }
            next[k] = 0;
        }
        Some(out)
    })
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head);
            out.push(p);
        }
    }
    out
}

fn encoding(a: &FiniteAlgebra) -> Vec<usize> {
    let n = a.size();
    let mut out = Vec::new();
    out.extend_from_slice(&a.plus);
    out.extend_from_slice(&a.times);
    for t in [&a.star, &a.adom, &a.aran].into_iter().flatten() {
        out.extend_from_slice(t);
    }
    if let Some(tests) = &a.tests {
        out.push(tests.iter().map(|&t| 1usize << t).sum());
    }
    if let Some(c) = &a.complement {
        out.extend(c.iter().map(|v| v.unwrap_or(n)));
    }
    out
}

impl Search {
    fn new(n: usize, profile: AxiomProfile) -> Self {
        Search {
            n,
            profile,
            names: carrier_names(n),
            zero: 0,
            one: n - 1,
        }
    }

    fn buckets(&self) -> Buckets<'static> {
        let mut b = Buckets::default();
        for ax in self.profile.axioms() {
            let ops = ax.operations();
            let extra: Vec<Op> = [Op::Star, Op::ADom, Op::ARan, Op::Not]
                .into_iter()
                .filter(|o| ops.contains(o))
                .collect();
            let tests = ax.uses_tests() && self.profile.test_source() == TestSource::Explicit;
            match (extra.as_slice(), tests) {
                ([], false) if ops.contains(&Op::Times) => b.times.push(ax),
                ([], false) => b.plus.push(ax),
                ([Op::Star], false) => b.star.push(ax),
                ([Op::ADom], false) => b.adom.push(ax),
                ([Op::ARan], false) => b.aran.push(ax),
                ([], true) | ([Op::Not], true) => b.tests.push(ax),
                _ => b.cross.push(ax),
            }
        }
        b
    }

    fn base_parts(&self) -> AlgebraParts {
        AlgebraParts {
            names: self.names.clone(),
            zero: self.zero,
            one: self.one,
            ..AlgebraParts::default()
        }
    }

    fn satisfies(&self, a: &FiniteAlgebra, axioms: &[&Axiom]) -> bool {
        let elements: Vec<Elem> = (0..self.n).collect();
        let tests = a.tests.clone().unwrap_or_default();
        axioms
            .iter()
            .all(|ax| check_law(a, ax, &elements, &tests).1.is_none())
    }

    fn plus_tables(&self, axioms: &[&Axiom]) -> Vec<Vec<Elem>> {
        let n = self.n;
        // Commutative with zero as identity: only cells i <= j, both nonzero, are free.
        let cells: Vec<(usize, usize)> = (1..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let mut out = Vec::new();
        for values in assignments(cells.len(), n) {
            let mut table = vec![0; n * n];
            for x in 0..n {
                table[x] = x;
                table[x * n] = x;
            }
            for (&(i, j), &v) in cells.iter().zip(&values) {
                table[i * n + j] = v;
                table[j * n + i] = v;
            }
            let mut parts = self.base_parts();
            parts.plus = table.clone();
            parts.times = vec![self.zero; n * n];
            if self.satisfies(&FiniteAlgebra::from_parts_unchecked(parts), axioms) {
                out.push(table);
            }
        }
        out
    }

    fn times_tables(&self, plus: &[Elem], axioms: &[&Axiom]) -> Vec<Vec<Elem>> {
        let n = self.n;
        let (zero, one) = (self.zero, self.one);
        let right_zero = self.profile.left_distributive();
        let mut fixed = vec![None; n * n];
        for x in 0..n {
            fixed[zero * n + x] = Some(zero);
            if right_zero {
                fixed[x * n + zero] = Some(zero);
            }
            fixed[one * n + x] = Some(x);
            fixed[x * n + one] = Some(x);
        }
        // In the one-element algebra zero is one; the unit rows win.
        if n == 1 {
            fixed[0] = Some(0);
        }
        let free: Vec<usize> = (0..n * n).filter(|&k| fixed[k].is_none()).collect();
        let mut out = Vec::new();
        for values in assignments(free.len(), n) {
            let mut table: Vec<Elem> = fixed.iter().map(|v| v.unwrap_or(0)).collect();
            for (&k, &v) in free.iter().zip(&values) {
                table[k] = v;
            }
            let mut parts = self.base_parts();
            parts.plus = plus.to_vec();
            parts.times = table.clone();
            if self.satisfies(&FiniteAlgebra::from_parts_unchecked(parts), axioms) {
                out.push(table);
            }
        }
        out
    }

    fn unary_tables(
        &self,
        plus: &[Elem],
        times: &[Elem],
        op: Op,
        axioms: &[&Axiom],
    ) -> Vec<Vec<Elem>> {
        let mut out = Vec::new();
        for table in assignments(self.n, self.n) {
            let mut parts = self.base_parts();
            parts.plus = plus.to_vec();
            parts.times = times.to_vec();
            match op {
                Op::Star => parts.star = Some(table.clone()),
                Op::ADom => parts.adom = Some(table.clone()),
                Op::ARan => parts.aran = Some(table.clone()),
                _ => unreachable!("only unary tables are enumerated here"),
            }
            if self.satisfies(&FiniteAlgebra::from_parts_unchecked(parts), axioms) {
                out.push(table);
            }
        }
        out
    }

    /// Test subsets (always containing zero and one) with complement tables.
    fn test_algebras(
        &self,
        plus: &[Elem],
        times: &[Elem],
        axioms: &[&Axiom],
    ) -> Vec<TestAlgebra> {
        let n = self.n;
        let middle: Vec<Elem> = (0..n).filter(|&x| x != self.zero && x != self.one).collect();
        let mut out = Vec::new();
        for mask in 0..(1usize << middle.len()) {
            let mut tests: Vec<Elem> = vec![self.zero, self.one];
            tests.extend(middle.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x));
            tests.sort_unstable();
            tests.dedup();
            for images in assignments(tests.len(), tests.len()) {
                let mut complement = vec![None; n];
                for (&t, &i) in tests.iter().zip(&images) {
                    complement[t] = Some(tests[i]);
                }
                let mut parts = self.base_parts();
                parts.plus = plus.to_vec();
                parts.times = times.to_vec();
                parts.tests = Some(tests.clone());
                parts.complement = Some(complement.clone());
                if self.satisfies(&FiniteAlgebra::from_parts_unchecked(parts), axioms) {
                    out.push((tests.clone(), complement));
                }
            }
        }
        out
    }

    fn is_canonical(&self, a: &FiniteAlgebra) -> bool {
        if self.n <= 3 {
            return true;
        }
        let code = encoding(a);
        let middle: Vec<usize> = (1..self.n - 1).collect();
        permutations(&middle).into_iter().all(|p| {
            let mut perm = vec![self.zero];
            perm.extend(p);
            perm.push(self.one);
            encoding(&a.permuted(&perm)) >= code
        })
    }

    fn run<F>(&self, constraint: Option<Constraint>, visit: &mut F) -> Result<(), SearchError>
    where
        F: FnMut(FiniteAlgebra) -> ControlFlow<()>,
    {
        let b = self.buckets();
        let ops = self.profile.required_operations();
        let source = self.profile.test_source();
        for plus in self.plus_tables(&b.plus) {
            for times in self.times_tables(&plus, &b.times) {
                let layer = |op: Op, axioms: &[&Axiom]| -> Vec<Option<Vec<Elem>>> {
                    if ops.contains(&op) {
                        self.unary_tables(&plus, &times, op, axioms)
                            .into_iter()
                            .map(Some)
                            .collect()
                    } else {
                        vec![None]
                    }
                };
                let stars = layer(Op::Star, &b.star);
                let adoms = layer(Op::ADom, &b.adom);
                let arans = layer(Op::ARan, &b.aran);
                let test_algebras: Vec<Option<TestAlgebra>> = if source == TestSource::Explicit {
                    self.test_algebras(&plus, &times, &b.tests)
                        .into_iter()
                        .map(Some)
                        .collect()
                } else {
                    vec![None]
                };
                for star in &stars {
                    for adom in &adoms {
                        for aran in &arans {
                            for tests in &test_algebras {
                                let mut parts = self.base_parts();
                                parts.plus = plus.clone();
                                parts.times = times.clone();
                                parts.star = star.clone();
                                parts.adom = adom.clone();
                                parts.aran = aran.clone();
                                if let Some((t, c)) = tests {
                                    parts.tests = Some(t.clone());
                                    parts.complement = Some(c.clone());
                                }
                                let candidate = FiniteAlgebra::from_parts_unchecked(parts.clone());
                                if !self.satisfies(&candidate, &b.cross) || !self.is_canonical(&candidate) {
                                    continue;
                                }
                                let model = FiniteAlgebra::new(parts)
                                    .map_err(|e| SearchError::Invalid(e.to_string()))?;
                                let keep = match constraint {
                                    None => true,
                                    Some(c) => {
                                        let holds = check_phi(&model)
                                            .map_err(|e| SearchError::Invalid(e.to_string()))?
                                            .holds;
                                        holds == (c == Constraint::PhiHolds)
                                    }
                                };
                                if keep && visit(model).is_break() {
                                    return Ok(());
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
