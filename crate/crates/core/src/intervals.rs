//! Canonical finite unions of integer intervals.
//!
//! An [`IntervalSet`] is a sorted list of pairwise disjoint, non-adjacent
//! closed intervals whose endpoints may be infinite. Canonical form is
//! unique, so structural equality coincides with set equality.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// An interval endpoint in the extended integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bound {
    NegInf,
    Finite(i64),
    PosInf,
}

impl Bound {
    pub fn finite(self) -> Option<i64> {
        match self {
            Bound::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn succ(self) -> Bound {
        match self {
            Bound::Finite(v) => v.checked_add(1).map_or(Bound::PosInf, Bound::Finite),
            other => other,
        }
    }

    pub fn pred(self) -> Bound {
        match self {
            Bound::Finite(v) => v.checked_sub(1).map_or(Bound::NegInf, Bound::Finite),
            other => other,
        }
    }
}

impl From<i64> for Bound {
    fn from(v: i64) -> Self {
        Bound::Finite(v)
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::NegInf => f.write_str("-inf"),
            Bound::Finite(v) => write!(f, "{v}"),
            Bound::PosInf => f.write_str("inf"),
        }
    }
}

/// A set of integers stored as canonical closed intervals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntervalSet {
    intervals: Vec<(Bound, Bound)>,
}

fn check_interval(lo: Bound, hi: Bound) -> Result<()> {
    if lo > hi || lo == Bound::PosInf || hi == Bound::NegInf {
        return Err(Error::MalformedInterval(format!("[{lo},{hi}]")));
    }
    Ok(())
}

impl IntervalSet {
    /// Canonicalizes an arbitrary list of intervals.
    pub fn make<I>(intervals: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Bound, Bound)>,
    {
        let mut ivs: Vec<(Bound, Bound)> = Vec::new();
        for (lo, hi) in intervals {
            check_interval(lo, hi)?;
            ivs.push((lo, hi));
        }
        Ok(Self::from_valid(ivs))
    }

    fn from_valid(mut ivs: Vec<(Bound, Bound)>) -> Self {
        ivs.sort_unstable();
        let mut out: Vec<(Bound, Bound)> = Vec::with_capacity(ivs.len());
        for (lo, hi) in ivs {
            match out.last_mut() {
                Some(last) if lo <= last.1.succ() => {
                    if hi > last.1 {
                        last.1 = hi;
                    }
                }
                _ => out.push((lo, hi)),
            }
        }
        IntervalSet { intervals: out }
    }

    pub fn empty() -> Self {
        IntervalSet::default()
    }

    /// All of the integers.
    pub fn full() -> Self {
        IntervalSet {
            intervals: vec![(Bound::NegInf, Bound::PosInf)],
        }
    }

    pub fn singleton(v: i64) -> Self {
        IntervalSet {
            intervals: vec![(Bound::Finite(v), Bound::Finite(v))],
        }
    }

    /// `[lo, hi]`, empty when `lo > hi`.
    pub fn range(lo: impl Into<Bound>, hi: impl Into<Bound>) -> Self {
        let (lo, hi) = (lo.into(), hi.into());
        if check_interval(lo, hi).is_err() {
            return Self::empty();
        }
        IntervalSet {
            intervals: vec![(lo, hi)],
        }
    }

    /// `{ k : k >= lo }`.
    pub fn at_least(lo: impl Into<Bound>) -> Self {
        Self::range(lo, Bound::PosInf)
    }

    /// `{ k : k <= hi }`.
    pub fn at_most(hi: impl Into<Bound>) -> Self {
        Self::range(Bound::NegInf, hi)
    }

    pub fn from_values<I: IntoIterator<Item = i64>>(values: I) -> Self {
        Self::from_valid(
            values
                .into_iter()
                .map(|v| (Bound::Finite(v), Bound::Finite(v)))
                .collect(),
        )
    }

    pub fn intervals(&self) -> &[(Bound, Bound)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.intervals == [(Bound::NegInf, Bound::PosInf)]
    }

    pub fn contains(&self, v: i64) -> bool {
        let x = Bound::Finite(v);
        self.intervals
            .binary_search_by(|&(lo, hi)| {
                if hi < x {
                    Ordering::Less
                } else if lo > x {
                    Ordering::Greater
                } else {
                    Ordering::Equal
                }
            })
            .is_ok()
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut ivs = self.intervals.clone();
        ivs.extend_from_slice(&other.intervals);
        Self::from_valid(ivs)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let (a, b) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = a[i].0.max(b[j].0);
            let hi = a[i].1.min(b[j].1);
            if lo <= hi {
                out.push((lo, hi));
            }
            if a[i].1 < b[j].1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet { intervals: out }
    }

    /// Complement within the integers.
    pub fn complement(&self) -> Self {
        let mut out = Vec::with_capacity(self.intervals.len() + 1);
        let mut next = Bound::NegInf;
        for &(lo, hi) in &self.intervals {
            if lo > next {
                out.push((next, lo.pred()));
            }
            next = hi.succ();
            if hi == Bound::PosInf {
                return IntervalSet { intervals: out };
            }
        }
        out.push((next, Bound::PosInf));
        IntervalSet { intervals: out }
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.intersect(&other.complement())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.intersect(other).is_empty()
    }

    /// `{ max(k, l) : k in self, l in other }`.
    ///
    /// `max(k, l) = k` is reachable exactly when `k >= min(other)`, so the
    /// result is `(self ∩ [min other, ∞)) ∪ (other ∩ [min self, ∞))`.
    pub fn max_combine(&self, other: &Self) -> Self {
        if self.is_empty() || other.is_empty() {
            return Self::empty();
        }
        let from_self = self.intersect(&Self::at_least(other.min_element()));
        let from_other = other.intersect(&Self::at_least(self.min_element()));
        from_self.union(&from_other)
    }

    /// Least member; `NegInf` when unbounded below, `PosInf` when empty.
    pub fn min_element(&self) -> Bound {
        self.intervals.first().map_or(Bound::PosInf, |iv| iv.0)
    }

    /// Greatest member; `PosInf` when unbounded above, `NegInf` when empty.
    pub fn max_element(&self) -> Bound {
        self.intervals.last().map_or(Bound::NegInf, |iv| iv.1)
    }

    pub fn is_finite(&self) -> bool {
        self.is_empty()
            || (self.min_element() != Bound::NegInf && self.max_element() != Bound::PosInf)
    }

    /// Number of members, `None` if infinite.
    pub fn len(&self) -> Option<u64> {
        if !self.is_finite() {
            return None;
        }
        Some(
            self.intervals
                .iter()
                .map(|&(lo, hi)| match (lo, hi) {
                    (Bound::Finite(a), Bound::Finite(b)) => (b - a) as u64 + 1,
                    _ => unreachable!("finite set has finite endpoints"),
                })
                .sum(),
        )
    }

    /// Members lying in `[lo, hi]`, ascending.
    pub fn members_within(&self, lo: i64, hi: i64) -> Vec<i64> {
        let window = Self::range(lo, hi);
        let clipped = self.intersect(&window);
        let mut out = Vec::new();
        for &(a, b) in clipped.intervals() {
            let (a, b) = (a.finite().unwrap(), b.finite().unwrap());
            out.extend(a..=b);
        }
        out
    }

    /// Members of a finite set, ascending.
    pub fn members(&self) -> Option<Vec<i64>> {
        if !self.is_finite() {
            return None;
        }
        match (self.min_element(), self.max_element()) {
            (Bound::Finite(a), Bound::Finite(b)) => Some(self.members_within(a, b)),
            _ => Some(Vec::new()),
        }
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return f.write_str("{}");
        }
        for (i, &(lo, hi)) in self.intervals.iter().enumerate() {
            if i > 0 {
                f.write_str(" u ")?;
            }
            let open = if lo == Bound::NegInf { '(' } else { '[' };
            let close = if hi == Bound::PosInf { ')' } else { ']' };
            write!(f, "{open}{lo},{hi}{close}")?;
        }
        Ok(())
    }
}

fn parse_bound(s: &str) -> Result<Bound> {
    match s.trim() {
        "-inf" => Ok(Bound::NegInf),
        "inf" | "+inf" => Ok(Bound::PosInf),
        t => t
            .parse::<i64>()
            .map(Bound::Finite)
            .map_err(|_| Error::Parse(format!("bad interval endpoint '{t}'"))),
    }
}

fn parse_term(term: &str) -> Result<IntervalSet> {
    let t = term.trim();
    match t {
        "Z" => return Ok(IntervalSet::full()),
        "Z+" => return Ok(IntervalSet::at_least(1)),
        _ => {}
    }
    if let Some(inner) = t.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
        if inner.trim().is_empty() {
            return Ok(IntervalSet::empty());
        }
        let vals = inner
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad set member '{}'", v.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(IntervalSet::from_values(vals));
    }
    let bad = || Error::Parse(format!("bad interval '{t}'"));
    let open = t.chars().next().ok_or_else(bad)?;
    let close = t.chars().last().ok_or_else(bad)?;
    if !matches!(open, '[' | '(') || !matches!(close, ']' | ')') || t.len() < 2 {
        return Err(bad());
    }
    let (lo, hi) = t[1..t.len() - 1].split_once(',').ok_or_else(bad)?;
    let (lo, hi) = (parse_bound(lo)?, parse_bound(hi)?);
    // open brackets only make sense next to an infinite endpoint
    let lo_ok = (open == '(') == (lo == Bound::NegInf);
    let hi_ok = (close == ')') == (hi == Bound::PosInf);
    if !lo_ok || !hi_ok {
        return Err(bad());
    }
    IntervalSet::make([(lo, hi)])
}

impl FromStr for IntervalSet {
    type Err = Error;

    /// Accepts `[a,b]`, `(-inf,b]`, `[a,inf)`, `(-inf,inf)`, `{a,b,..}`,
    /// `{}`, `Z` and `Z+`, joined by `u`.
    fn from_str(s: &str) -> Result<Self> {
        let mut acc = IntervalSet::empty();
        for term in s.split('u') {
            let term = term.trim();
            if term.is_empty() {
                return Err(Error::Parse(format!("empty term in '{s}'")));
            }
            acc = acc.union(&parse_term(term)?);
        }
        Ok(acc)
    }
}
