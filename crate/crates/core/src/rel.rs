//! Binary relations over a finite state space: the standard relational
//! model of Kleene algebra with domain.
//!
//! Relations are boolean matrices stored one `u64` bitmask per row, so state
//! spaces hold at most 64 states. Tests are subidentities.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::finite::{AlgebraParts, FiniteAlgebra};
use crate::model::{EvalError, FiniteModel, Model};
use crate::parse::{Cursor, ParseError, Tok};
use crate::term::Op;

pub const MAX_STATES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelError {
    #[error("relations live over different state spaces")]
    SpaceMismatch,
    #[error("{0} is not a subidentity (test)")]
    NotSubidentity(String),
    #[error("state space must have between 1 and {MAX_STATES} states, got {0}")]
    BadSize(usize),
    #[error("duplicate state name `{0}`")]
    DuplicateState(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("{states} states give 2^{} relations, beyond the export bound of {max} states", states * states)]
    TooLarge { states: usize, max: usize },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateSpace {
    names: Vec<String>,
}

impl StateSpace {
    pub fn new<I, S>(names: I) -> Result<Arc<StateSpace>, RelError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() || names.len() > MAX_STATES {
            return Err(RelError::BadSize(names.len()));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(RelError::DuplicateState(n.clone()));
            }
        }
        Ok(Arc::new(StateSpace { names }))
    }

    /// States named `1`, `2`, ..., `n`.
    pub fn numbered(n: usize) -> Result<Arc<StateSpace>, RelError> {
        StateSpace::new((1..=n).map(|i| i.to_string()))
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

#[derive(Clone)]
pub struct Rel {
    space: Arc<StateSpace>,
    rows: Vec<u64>,
}

impl PartialEq for Rel {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && (Arc::ptr_eq(&self.space, &other.space) || self.space == other.space)
    }
}

impl Eq for Rel {}

impl std::hash::Hash for Rel {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.space.hash(state);
        self.rows.hash(state);
    }
}

impl fmt::Debug for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .pairs()
            .map(|(i, j)| format!("({},{})", self.space.names[i], self.space.names[j]))
            .collect();
        write!(f, "{{{}}}", pairs.join(","))
    }
}

fn full_row(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl Rel {
    pub fn empty(space: &Arc<StateSpace>) -> Rel {
        Rel {
            space: space.clone(),
            rows: vec![0; space.size()],
        }
    }

    pub fn id(space: &Arc<StateSpace>) -> Rel {
        Rel {
            space: space.clone(),
            rows: (0..space.size()).map(|i| 1u64 << i).collect(),
        }
    }

    pub fn full(space: &Arc<StateSpace>) -> Rel {
        Rel {
            space: space.clone(),
            rows: vec![full_row(space.size()); space.size()],
        }
    }

    /// Pairs are state indices; out-of-range pairs are rejected.
    pub fn from_pairs<I>(space: &Arc<StateSpace>, pairs: I) -> Result<Rel, RelError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut r = Rel::empty(space);
        for (i, j) in pairs {
            if i >= space.size() || j >= space.size() {
                return Err(RelError::UnknownState(format!("#{}", i.max(j))));
            }
            r.rows[i] |= 1 << j;
        }
        Ok(r)
    }

    /// Subidentity on the given states.
    pub fn test_of<I: IntoIterator<Item = usize>>(space: &Arc<StateSpace>, states: I) -> Result<Rel, RelError> {
        Rel::from_pairs(space, states.into_iter().map(|s| (s, s)))
    }

    /// Decodes bit `i * n + j` of `mask` as the pair `(i, j)`; needs `n * n <= 64`.
    pub fn from_mask(space: &Arc<StateSpace>, mask: u64) -> Rel {
        let n = space.size();
        assert!(n * n <= 64, "mask encoding needs at most 8 states");
        Rel {
            space: space.clone(),
            rows: (0..n).map(|i| (mask >> (i * n)) & full_row(n)).collect(),
        }
    }

    pub fn to_mask(&self) -> u64 {
        let n = self.space.size();
        assert!(n * n <= 64, "mask encoding needs at most 8 states");
        self.rows
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &row)| acc | (row << (i * n)))
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        &self.space
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.rows.get(i).is_some_and(|r| r >> j & 1 == 1)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.space.size();
        (0..n).flat_map(move |i| (0..n).filter(move |&j| self.contains(i, j)).map(move |j| (i, j)))
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn is_subidentity(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, &r)| r & !(1u64 << i) == 0)
    }

    /// States `s` with `(s, s)` in a subidentity.
    pub fn states(&self) -> Vec<usize> {
        (0..self.space.size()).filter(|&i| self.contains(i, i)).collect()
    }

    fn same_space(&self, other: &Rel) -> Result<(), RelError> {
        if Arc::ptr_eq(&self.space, &other.space) || self.space == other.space {
            Ok(())
        } else {
            Err(RelError::SpaceMismatch)
        }
    }

    pub fn is_subset(&self, other: &Rel) -> Result<bool, RelError> {
        self.same_space(other)?;
        Ok(self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0))
    }

    pub fn union(&self, other: &Rel) -> Result<Rel, RelError> {
        self.same_space(other)?;
        Ok(Rel {
            space: self.space.clone(),
            rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a | b).collect(),
        })
    }

    pub fn intersect(&self, other: &Rel) -> Result<Rel, RelError> {
        self.same_space(other)?;
        Ok(Rel {
            space: self.space.clone(),
            rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a & b).collect(),
        })
    }

    /// Relational product `{(a,b) | ∃c. (a,c) ∈ self ∧ (c,b) ∈ other}`.
    pub fn compose(&self, other: &Rel) -> Result<Rel, RelError> {
        self.same_space(other)?;
        let rows = self
            .rows
            .iter()
            .map(|&row| {
                let mut out = 0;
                let mut bits = row;
                while bits != 0 {
                    let k = bits.trailing_zeros() as usize;
                    out |= other.rows[k];
                    bits &= bits - 1;
                }
                out
            })
            .collect();
        Ok(Rel {
            space: self.space.clone(),
            rows,
        })
    }

    pub fn converse(&self) -> Rel {
        let n = self.space.size();
        let mut rows = vec![0u64; n];
        for (i, j) in self.pairs() {
            rows[j] |= 1 << i;
        }
        Rel {
            space: self.space.clone(),
            rows,
        }
    }

    /// Subidentity on the states without outgoing edges.
    pub fn adom(&self) -> Rel {
        Rel {
            space: self.space.clone(),
            rows: self
                .rows
                .iter()
                .enumerate()
                .map(|(i, &r)| if r == 0 { 1 << i } else { 0 })
                .collect(),
        }
    }

    pub fn dom(&self) -> Rel {
        self.adom().adom()
    }

    /// Subidentity on the states without incoming edges.
    pub fn aran(&self) -> Rel {
        let targets = self.rows.iter().fold(0, |acc, r| acc | r);
        Rel {
            space: self.space.clone(),
            rows: (0..self.space.size())
                .map(|i| if targets >> i & 1 == 0 { 1 << i } else { 0 })
                .collect(),
        }
    }

    pub fn ran(&self) -> Rel {
        self.aran().aran()
    }

    /// Reflexive-transitive closure by repeated squaring of `self ∪ id`.
    pub fn star(&self) -> Rel {
        let n = self.space.size();
        let mut r = self.union(&Rel::id(&self.space)).expect("same space");
        let rounds = usize::BITS - (n.max(1) - 1).leading_zeros() + 1;
        for _ in 0..rounds {
            r = r.compose(&r).expect("same space");
        }
        r
    }

    /// Boolean complement of a subidentity.
    pub fn complement_test(&self) -> Result<Rel, RelError> {
        if !self.is_subidentity() {
            return Err(RelError::NotSubidentity(self.to_string()));
        }
        Ok(Rel {
            space: self.space.clone(),
            rows: self.rows.iter().enumerate().map(|(i, &r)| (1u64 << i) & !r).collect(),
        })
    }

    /// `[self]q = a(self ; a(q))`: the states all of whose successors satisfy `q`.
    pub fn box_(&self, q: &Rel) -> Result<Rel, RelError> {
        if !q.is_subidentity() {
            return Err(RelError::NotSubidentity(q.to_string()));
        }
        Ok(self.compose(&q.adom())?.adom())
    }

    /// Parses `id`, `empty`, `full` or `{(s1,s2),...}` over the space's state names.
    pub fn parse(space: &Arc<StateSpace>, text: &str) -> Result<Rel, RelError> {
        let mut cur = Cursor::new(text)?;
        let r = Rel::parse_from(space, &mut cur)?;
        cur.finish()?;
        Ok(r)
    }

    pub(crate) fn parse_from(space: &Arc<StateSpace>, cur: &mut Cursor) -> Result<Rel, RelError> {
        for (kw, make) in [
            ("id", Rel::id as fn(&Arc<StateSpace>) -> Rel),
            ("empty", Rel::empty),
            ("full", Rel::full),
        ] {
            if cur.is_keyword(kw) {
                cur.next();
                return Ok(make(space));
            }
        }
        cur.expect(&Tok::LBrace)?;
        let mut pairs = Vec::new();
        if !cur.eat(&Tok::RBrace) {
            loop {
                cur.expect(&Tok::LParen)?;
                let a = state(space, cur)?;
                cur.expect(&Tok::Comma)?;
                let b = state(space, cur)?;
                cur.expect(&Tok::RParen)?;
                pairs.push((a, b));
                if cur.eat(&Tok::RBrace) {
                    break;
                }
                cur.expect(&Tok::Comma)?;
            }
        }
        Rel::from_pairs(space, pairs)
    }
}

fn state(space: &StateSpace, cur: &mut Cursor) -> Result<usize, RelError> {
    let column = cur.column();
    match cur.next() {
        Some(Tok::Ident(s)) | Some(Tok::Number(s)) => space.index_of(&s).ok_or(RelError::UnknownState(s)),
        _ => Err(RelError::Parse(ParseError::new(column, "expected a state name"))),
    }
}

impl From<RelError> for EvalError {
    fn from(e: RelError) -> Self {
        EvalError::Model(e.to_string())
    }
}

/// The algebra of all relations over a state space, as a [`Model`].
#[derive(Debug, Clone)]
pub struct RelAlgebra {
    space: Arc<StateSpace>,
}

impl RelAlgebra {
    pub fn new(space: Arc<StateSpace>) -> RelAlgebra {
        RelAlgebra { space }
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        &self.space
    }

    /// All `2^n` subidentities, in bitmask order of their state sets.
    pub fn subidentities(&self) -> Vec<Rel> {
        let n = self.space.size();
        assert!(n < 32, "too many states to enumerate tests");
        (0u64..1 << n)
            .map(|m| Rel::test_of(&self.space, (0..n).filter(|i| m >> i & 1 == 1)).expect("in range"))
            .collect()
    }

    /// All `2^(n*n)` relations, in mask order. Only for spaces of at most 4 states.
    pub fn relations(&self) -> Vec<Rel> {
        let n = self.space.size();
        assert!(n <= 4, "enumerating all relations needs at most 4 states");
        (0u64..1 << (n * n)).map(|m| Rel::from_mask(&self.space, m)).collect()
    }
}

impl Model for RelAlgebra {
    type Elem = Rel;

    fn zero(&self) -> Rel {
        Rel::empty(&self.space)
    }

    fn one(&self) -> Rel {
        Rel::id(&self.space)
    }

    fn plus(&self, x: &Rel, y: &Rel) -> Result<Rel, EvalError> {
        Ok(x.union(y)?)
    }

    fn times(&self, x: &Rel, y: &Rel) -> Result<Rel, EvalError> {
        Ok(x.compose(y)?)
    }

    fn star(&self, x: &Rel) -> Result<Rel, EvalError> {
        Ok(x.star())
    }

    fn adom(&self, x: &Rel) -> Result<Rel, EvalError> {
        Ok(x.adom())
    }

    fn aran(&self, x: &Rel) -> Result<Rel, EvalError> {
        Ok(x.aran())
    }

    fn complement(&self, p: &Rel) -> Result<Rel, EvalError> {
        p.complement_test().map_err(|_| EvalError::NotATest(p.to_string()))
    }

    fn is_test(&self, x: &Rel) -> bool {
        x.is_subidentity()
    }

    fn supports(&self, _op: Op) -> bool {
        true
    }

    fn show(&self, x: &Rel) -> String {
        x.to_string()
    }

    fn leq(&self, x: &Rel, y: &Rel) -> Result<bool, EvalError> {
        Ok(x.is_subset(y)?)
    }
}

impl FiniteModel for RelAlgebra {
    fn elements(&self) -> Vec<Rel> {
        self.relations()
    }

    fn test_elements(&self) -> Option<Vec<Rel>> {
        Some(self.subidentities())
    }
}

/// Default bound on eager export: 2 states, 16 relations.
pub const EXPORT_MAX_STATES: usize = 2;

/// The full relation algebra over `space` as a table-driven algebra whose
/// element `k` is the relation with mask `k`.
pub fn as_finite_algebra(space: &Arc<StateSpace>) -> Result<FiniteAlgebra, RelError> {
    as_finite_algebra_bounded(space, EXPORT_MAX_STATES)
}

pub fn as_finite_algebra_bounded(space: &Arc<StateSpace>, max_states: usize) -> Result<FiniteAlgebra, RelError> {
    let n = space.size();
    if n > max_states || n > 4 {
        return Err(RelError::TooLarge {
            states: n,
            max: max_states.min(4),
        });
    }
    let rels = RelAlgebra::new(space.clone()).relations();
    let size = rels.len();
    let idx = |r: &Rel| r.to_mask() as usize;
    let mut plus = Vec::with_capacity(size * size);
    let mut times = Vec::with_capacity(size * size);
    for x in &rels {
        for y in &rels {
            plus.push(idx(&x.union(y)?));
            times.push(idx(&x.compose(y)?));
        }
    }
    let tests: Vec<usize> = rels.iter().filter(|r| r.is_subidentity()).map(idx).collect();
    let algebra = FiniteAlgebra::new(AlgebraParts {
        names: rels.iter().map(|r| r.to_string()).collect(),
        zero: idx(&Rel::empty(space)),
        one: idx(&Rel::id(space)),
        plus,
        times,
        star: Some(rels.iter().map(|r| idx(&r.star())).collect()),
        adom: Some(rels.iter().map(|r| idx(&r.adom())).collect()),
        aran: Some(rels.iter().map(|r| idx(&r.aran())).collect()),
        tests: Some(tests),
        complement: None,
    })
    .expect("relation tables are well formed");
    Ok(algebra)
}
