//! Eventually periodic subsets of the naturals, the KAT on them whose tests
//! are the finite and cofinite sets, and a refuter showing that this KAT has
//! no weakest liberal precondition for a set that is neither.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::model::{EvalError, Model};
use crate::parse::{Cursor, ParseError, Tok};
use crate::term::Op;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CofiniteError {
    #[error("period must be positive")]
    ZeroPeriod,
    #[error("head element {element} is not below the threshold {threshold}")]
    HeadOutOfRange { element: usize, threshold: usize },
    #[error("residue {residue} is not below the period {period}")]
    ResidueOutOfRange { residue: usize, period: usize },
    #[error("candidate {0} is neither finite nor cofinite, so it is not a test")]
    CandidateNotTest(String),
    #[error("{0} is finite or cofinite; the refutation needs a set outside the test algebra")]
    SetIsTest(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A subset `S` of the naturals with `n ∈ S` decided by `head` below
/// `threshold` and by `residues[n mod period]` from `threshold` on.
///
/// Values are kept canonical (least period, then least threshold), so `==`
/// is set equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EvPeriodicSet {
    threshold: usize,
    head: Vec<bool>,
    period: usize,
    residues: Vec<bool>,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl EvPeriodicSet {
    fn normalized(mut self) -> Self {
        let p = self.period;
        if let Some(d) = (1..=p)
            .filter(|&d| p.is_multiple_of(d))
            .find(|&d| (0..p).all(|i| self.residues[i] == self.residues[i % d]))
        {
            self.residues.truncate(d);
            self.period = d;
        }
        while self.threshold > 0 && self.head[self.threshold - 1] == self.residues[(self.threshold - 1) % self.period] {
            self.threshold -= 1;
            self.head.pop();
        }
        self
    }

    /// `periodic(threshold; head; period; residues)` with explicit member lists.
    pub fn periodic(threshold: usize, head: &[usize], period: usize, residues: &[usize]) -> Result<Self, CofiniteError> {
        if period == 0 {
            return Err(CofiniteError::ZeroPeriod);
        }
        let mut h = vec![false; threshold];
        for &e in head {
            *h.get_mut(e).ok_or(CofiniteError::HeadOutOfRange { element: e, threshold })? = true;
        }
        let mut r = vec![false; period];
        for &e in residues {
            *r.get_mut(e).ok_or(CofiniteError::ResidueOutOfRange { residue: e, period })? = true;
        }
        Ok(EvPeriodicSet {
            threshold,
            head: h,
            period,
            residues: r,
        }
        .normalized())
    }

    pub fn empty() -> Self {
        EvPeriodicSet {
            threshold: 0,
            head: Vec::new(),
            period: 1,
            residues: vec![false],
        }
    }

    /// The whole of the naturals.
    pub fn all() -> Self {
        EvPeriodicSet::empty().complement()
    }

    pub fn finite<I: IntoIterator<Item = usize>>(elements: I) -> Self {
        let elements: BTreeSet<usize> = elements.into_iter().collect();
        let threshold = elements.last().map_or(0, |m| m + 1);
        let mut head = vec![false; threshold];
        for e in elements {
            head[e] = true;
        }
        EvPeriodicSet {
            threshold,
            head,
            period: 1,
            residues: vec![false],
        }
        .normalized()
    }

    /// Everything except the given elements.
    pub fn cofinite<I: IntoIterator<Item = usize>>(missing: I) -> Self {
        EvPeriodicSet::finite(missing).complement()
    }

    pub fn singleton(n: usize) -> Self {
        EvPeriodicSet::finite([n])
    }

    pub fn evens() -> Self {
        EvPeriodicSet::periodic(0, &[], 2, &[0]).expect("valid literal")
    }

    pub fn odds() -> Self {
        EvPeriodicSet::evens().complement()
    }

    pub fn contains(&self, n: usize) -> bool {
        if n < self.threshold {
            self.head[n]
        } else {
            self.residues[n % self.period]
        }
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn is_empty(&self) -> bool {
        self.is_finite() && !self.head.contains(&true)
    }

    pub fn is_finite(&self) -> bool {
        !self.residues.contains(&true)
    }

    pub fn is_cofinite(&self) -> bool {
        !self.residues.contains(&false)
    }

    /// Membership in the test algebra: finite or cofinite.
    pub fn in_test_algebra(&self) -> bool {
        self.is_finite() || self.is_cofinite()
    }

    /// Least member, if any.
    pub fn min_element(&self) -> Option<usize> {
        if let Some(i) = self.head.iter().position(|&b| b) {
            return Some(i);
        }
        (self.threshold..self.threshold + self.period).find(|&n| self.contains(n))
    }

    /// Members of a finite set, in increasing order.
    pub fn finite_elements(&self) -> Option<Vec<usize>> {
        self.is_finite()
            .then(|| (0..self.threshold).filter(|&n| self.head[n]).collect())
    }

    fn combine(&self, other: &Self, f: impl Fn(bool, bool) -> bool) -> Self {
        let threshold = self.threshold.max(other.threshold);
        let period = self.period / gcd(self.period, other.period) * other.period;
        let head = (0..threshold).map(|n| f(self.contains(n), other.contains(n))).collect();
        let residues = (0..period)
            .map(|i| {
                // The representative of residue class `i` at or above the threshold.
                let n = threshold + (i + period - threshold % period) % period;
                f(self.contains(n), other.contains(n))
            })
            .collect();
        EvPeriodicSet {
            threshold,
            head,
            period,
            residues,
        }
        .normalized()
    }

    pub fn union(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> Self {
        EvPeriodicSet {
            threshold: self.threshold,
            head: self.head.iter().map(|b| !b).collect(),
            period: self.period,
            residues: self.residues.iter().map(|b| !b).collect(),
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    /// The star of this KAT maps every set to the whole of the naturals.
    pub fn kat_star(&self) -> Self {
        EvPeriodicSet::all()
    }

    /// Parses `evens`, `odds`, `all`, `empty`, `finite{..}`, `cofinite{..}` or
    /// `periodic(threshold; {head}; period; {residues})`.
    pub fn parse(text: &str) -> Result<Self, CofiniteError> {
        let mut cur = Cursor::new(text)?;
        let s = EvPeriodicSet::parse_from(&mut cur)?;
        cur.finish()?;
        Ok(s)
    }

    pub(crate) fn parse_from(cur: &mut Cursor) -> Result<Self, CofiniteError> {
        let column = cur.column();
        let Some(Tok::Ident(word)) = cur.next() else {
            return Err(ParseError::new(column, "expected a set literal").into());
        };
        Ok(match word.as_str() {
            "evens" => EvPeriodicSet::evens(),
            "odds" => EvPeriodicSet::odds(),
            "all" => EvPeriodicSet::all(),
            "empty" => EvPeriodicSet::empty(),
            "finite" => EvPeriodicSet::finite(number_list(cur)?),
            "cofinite" => EvPeriodicSet::cofinite(number_list(cur)?),
            "periodic" => {
                cur.expect(&Tok::LParen)?;
                let threshold = number(cur)?;
                cur.expect(&Tok::Semi)?;
                let head = number_list(cur)?;
                cur.expect(&Tok::Semi)?;
                let period = number(cur)?;
                cur.expect(&Tok::Semi)?;
                let residues = number_list(cur)?;
                cur.expect(&Tok::RParen)?;
                EvPeriodicSet::periodic(threshold, &head, period, &residues)?
            }
            other => return Err(ParseError::new(column, format!("unknown set literal `{other}`")).into()),
        })
    }
}

fn number(cur: &mut Cursor) -> Result<usize, ParseError> {
    let column = cur.column();
    match cur.next() {
        Some(Tok::Number(s)) => s
            .parse()
            .map_err(|_| ParseError::new(column, format!("number `{s}` is too large"))),
        _ => Err(ParseError::new(column, "expected a natural number")),
    }
}

fn number_list(cur: &mut Cursor) -> Result<Vec<usize>, ParseError> {
    cur.expect(&Tok::LBrace)?;
    let mut out = Vec::new();
    if cur.eat(&Tok::RBrace) {
        return Ok(out);
    }
    loop {
        out.push(number(cur)?);
        if cur.eat(&Tok::RBrace) {
            return Ok(out);
        }
        cur.expect(&Tok::Comma)?;
    }
}

fn list(items: impl IntoIterator<Item = usize>) -> String {
    let items: Vec<String> = items.into_iter().map(|n| n.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

impl fmt::Display for EvPeriodicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == EvPeriodicSet::evens() {
            f.write_str("evens")
        } else if *self == EvPeriodicSet::odds() {
            f.write_str("odds")
        } else if self.is_finite() {
            write!(f, "finite{}", list((0..self.threshold).filter(|&n| self.head[n])))
        } else if self.is_cofinite() {
            write!(f, "cofinite{}", list((0..self.threshold).filter(|&n| !self.head[n])))
        } else {
            write!(
                f,
                "periodic({}; {}; {}; {})",
                self.threshold,
                list((0..self.threshold).filter(|&n| self.head[n])),
                self.period,
                list((0..self.period).filter(|&i| self.residues[i]))
            )
        }
    }
}

impl fmt::Debug for EvPeriodicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The KAT of eventually periodic sets: join is union, product is
/// intersection, star is constantly the full set, tests are the finite and
/// cofinite sets.
#[derive(Debug, Clone, Copy, Default)]
pub struct CofiniteKat;

impl Model for CofiniteKat {
    type Elem = EvPeriodicSet;

    fn zero(&self) -> EvPeriodicSet {
        EvPeriodicSet::empty()
    }

    fn one(&self) -> EvPeriodicSet {
        EvPeriodicSet::all()
    }

    fn plus(&self, x: &EvPeriodicSet, y: &EvPeriodicSet) -> Result<EvPeriodicSet, EvalError> {
        Ok(x.union(y))
    }

    fn times(&self, x: &EvPeriodicSet, y: &EvPeriodicSet) -> Result<EvPeriodicSet, EvalError> {
        Ok(x.intersect(y))
    }

    fn star(&self, x: &EvPeriodicSet) -> Result<EvPeriodicSet, EvalError> {
        Ok(x.kat_star())
    }

    fn complement(&self, p: &EvPeriodicSet) -> Result<EvPeriodicSet, EvalError> {
        if p.in_test_algebra() {
            Ok(p.complement())
        } else {
            Err(EvalError::NotATest(p.to_string()))
        }
    }

    fn is_test(&self, x: &EvPeriodicSet) -> bool {
        x.in_test_algebra()
    }

    fn supports(&self, op: Op) -> bool {
        matches!(op, Op::Plus | Op::Times | Op::Star | Op::Not)
    }

    fn show(&self, x: &EvPeriodicSet) -> String {
        x.to_string()
    }
}

/// Why a candidate is not the weakest liberal precondition of `C` and `∅`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// The candidate meets `C`, so it is not a precondition at all; the
    /// witness is the least common element.
    NotAPrecondition(usize),
    /// The candidate is a precondition, but `extension = candidate ∪ {witness}`
    /// is a strictly larger one in the test algebra.
    NotMaximal { witness: usize, extension: EvPeriodicSet },
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::NotAPrecondition(w) => write!(f, "not a precondition: {w} lies in the set"),
            Verdict::NotMaximal { witness, extension } => {
                write!(f, "not maximal: adding {witness} gives the larger precondition {extension}")
            }
        }
    }
}

fn require_outside_tests(c: &EvPeriodicSet) -> Result<(), CofiniteError> {
    if c.in_test_algebra() {
        Err(CofiniteError::SetIsTest(c.to_string()))
    } else {
        Ok(())
    }
}

/// Shows that the test `r` is not the weakest test disjoint from `c`.
pub fn refute_wlp_candidate(c: &EvPeriodicSet, r: &EvPeriodicSet) -> Result<Verdict, CofiniteError> {
    require_outside_tests(c)?;
    if !r.in_test_algebra() {
        return Err(CofiniteError::CandidateNotTest(r.to_string()));
    }
    if let Some(w) = r.intersect(c).min_element() {
        return Ok(Verdict::NotAPrecondition(w));
    }
    let witness = c
        .complement()
        .difference(r)
        .min_element()
        .expect("a test disjoint from a non-cofinite set leaves its complement unexhausted");
    Ok(Verdict::NotMaximal {
        witness,
        extension: r.union(&EvPeriodicSet::singleton(witness)),
    })
}

/// Independently confirms a verdict: either the witness is in `r ∩ c`, or
/// the extension is a test, strictly contains `r`, and misses `c`.
pub fn verdict_is_sound(c: &EvPeriodicSet, r: &EvPeriodicSet, verdict: &Verdict) -> bool {
    match verdict {
        Verdict::NotAPrecondition(w) => r.contains(*w) && c.contains(*w),
        Verdict::NotMaximal { witness, extension } => {
            extension.in_test_algebra()
                && r.is_subset(extension)
                && extension.contains(*witness)
                && !r.contains(*witness)
                && extension.intersect(c).is_empty()
        }
    }
}

/// Enumerates the tests disjoint from `c`.
///
/// Those are exactly the finite subsets of the complement of `c` (no
/// cofinite set misses an infinite `c`). They come in order of largest
/// element, then size, then lexicographically, starting with `∅`.
pub fn candidates(c: &EvPeriodicSet) -> Result<Candidates, CofiniteError> {
    require_outside_tests(c)?;
    Ok(Candidates {
        outside: c.complement(),
        below: Vec::new(),
        next_max: 0,
        batch: vec![Vec::new()].into_iter(),
    })
}

pub struct Candidates {
    outside: EvPeriodicSet,
    /// Elements of the complement below `next_max`.
    below: Vec<usize>,
    next_max: usize,
    batch: std::vec::IntoIter<Vec<usize>>,
}

impl Iterator for Candidates {
    type Item = EvPeriodicSet;

    fn next(&mut self) -> Option<EvPeriodicSet> {
        loop {
            if let Some(set) = self.batch.next() {
                return Some(EvPeriodicSet::finite(set));
            }
            while !self.outside.contains(self.next_max) {
                self.next_max += 1;
            }
            let m = self.next_max;
            let k = self.below.len();
            let mut subsets: Vec<Vec<usize>> = (0u64..1 << k)
                .map(|mask| {
                    let mut s: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| self.below[i]).collect();
                    s.push(m);
                    s
                })
                .collect();
            subsets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
            self.batch = subsets.into_iter();
            self.below.push(m);
            self.next_max += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(text: &str) -> EvPeriodicSet {
        EvPeriodicSet::parse(text).unwrap()
    }

    #[test]
    fn boolean_operations() {
        let evens = EvPeriodicSet::evens();
        assert!(evens.intersect(&evens.complement()).is_empty());
        assert_eq!(EvPeriodicSet::finite([0, 2]).union(&evens), evens);
        assert_eq!(evens.complement(), EvPeriodicSet::odds());
        assert_eq!(evens.union(&EvPeriodicSet::odds()), EvPeriodicSet::all());
    }

    #[test]
    fn canonical_forms() {
        let a = EvPeriodicSet::periodic(5, &[0, 2, 4], 4, &[0, 2]).unwrap();
        assert_eq!(a, EvPeriodicSet::evens());
        assert_eq!(a.period(), 2);
        assert_eq!(a.threshold(), 0);
        let b = EvPeriodicSet::periodic(3, &[1], 3, &[0]).unwrap();
        assert_eq!((b.threshold(), b.period()), (2, 3));
        let mul3 = set("periodic(0; {}; 3; {0})");
        let mul2 = EvPeriodicSet::evens();
        assert_eq!(mul3.intersect(&mul2), set("periodic(0; {}; 6; {0})"));
    }

    #[test]
    fn star_is_everything() {
        for s in [EvPeriodicSet::empty(), EvPeriodicSet::evens(), EvPeriodicSet::all()] {
            assert_eq!(s.kat_star(), EvPeriodicSet::all());
        }
    }

    #[test]
    fn test_algebra_membership() {
        assert!(!EvPeriodicSet::evens().in_test_algebra());
        assert!(EvPeriodicSet::finite([0, 1, 2]).in_test_algebra());
        assert!(EvPeriodicSet::singleton(5).complement().in_test_algebra());
        assert!(set("periodic(4; {1}; 1; {0})").in_test_algebra());
    }

    #[test]
    fn refuter_examples() {
        let c = EvPeriodicSet::evens();
        assert_eq!(
            refute_wlp_candidate(&c, &EvPeriodicSet::empty()).unwrap(),
            Verdict::NotMaximal {
                witness: 1,
                extension: EvPeriodicSet::finite([1])
            }
        );
        assert_eq!(
            refute_wlp_candidate(&c, &EvPeriodicSet::finite([1, 3])).unwrap(),
            Verdict::NotMaximal {
                witness: 5,
                extension: EvPeriodicSet::finite([1, 3, 5])
            }
        );
        assert_eq!(
            refute_wlp_candidate(&c, &EvPeriodicSet::finite([0])).unwrap(),
            Verdict::NotAPrecondition(0)
        );
        assert_eq!(
            refute_wlp_candidate(&c, &EvPeriodicSet::cofinite([0])).unwrap(),
            Verdict::NotAPrecondition(2)
        );
        assert!(matches!(
            refute_wlp_candidate(&EvPeriodicSet::finite([1]), &EvPeriodicSet::empty()),
            Err(CofiniteError::SetIsTest(_))
        ));
        assert!(matches!(
            refute_wlp_candidate(&c, &EvPeriodicSet::odds()),
            Err(CofiniteError::CandidateNotTest(_))
        ));
    }

    #[test]
    fn candidate_order() {
        let first: Vec<String> = candidates(&EvPeriodicSet::evens())
            .unwrap()
            .take(8)
            .map(|s| s.to_string())
            .collect();
        assert_eq!(
            first,
            [
                "finite{}",
                "finite{1}",
                "finite{3}",
                "finite{1,3}",
                "finite{5}",
                "finite{1,5}",
                "finite{3,5}",
                "finite{1,3,5}"
            ]
        );
        assert!(candidates(&EvPeriodicSet::all()).is_err());
    }

    #[test]
    fn literals_round_trip() {
        for text in [
            "evens",
            "odds",
            "finite{}",
            "finite{0,4,7}",
            "cofinite{}",
            "cofinite{2,3}",
            "periodic(2; {0}; 3; {1})",
        ] {
            assert_eq!(set(text).to_string(), text);
        }
        assert_eq!(set("all"), EvPeriodicSet::all());
        assert!(EvPeriodicSet::parse("periodic(1; {3}; 2; {0})").is_err());
        assert!(EvPeriodicSet::parse("periodic(1; {}; 0; {})").is_err());
        assert!(EvPeriodicSet::parse("primes").is_err());
    }
}
