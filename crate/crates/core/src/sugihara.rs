//! The symbolic algebras 𝔖_I over eventually-zero sequences indexed by
//! `I ⊆ ℤ`, their Sugihara chains, and concrete sequence witnesses.
//!
//! A [`SymElement`] is a union of atoms `Id`, `L_n`, `R_n` (`n ∈ I`)
//! stored as `(has_id, lset, rset)`, so infinite index sets are handled
//! by interval arithmetic. Composition is evaluated in closed form; see
//! [`SymElement::raw_compose`](Relation::raw_compose).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use num_traits::Num;

use crate::error::{Error, Result};
use crate::intervals::{Bound, IntervalSet};
use crate::ra_core::{bits, AtomStructure, Relation, MAX_ATOMS};

/// Index sets are plain interval sets; `U_∅` is a singleton.
pub type IndexSet = IntervalSet;

/// Scalars for sequence entries. Witness construction needs a dense order
/// without endpoints; exact rationals have one, floats only approximately.
pub trait Scalar: Num + Clone + PartialOrd + fmt::Display + FromStr {
    fn midpoint(a: &Self, b: &Self) -> Self {
        (a.clone() + b.clone()) / (Self::one() + Self::one())
    }
}

impl<T> Scalar for num_rational::Ratio<T>
where
    T: num_integer::Integer + Clone + fmt::Display + FromStr,
    Self: FromStr,
{
}

impl Scalar for f64 {}
impl Scalar for f32 {}

/// An eventually-zero sequence: entries outside the support are zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Sequence<T> {
    support: BTreeMap<i64, T>,
}

impl<T: Scalar> Sequence<T> {
    pub fn zero() -> Self {
        Sequence {
            support: BTreeMap::new(),
        }
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (i64, T)>) -> Self {
        let mut s = Self::zero();
        for (k, v) in entries {
            s.set(k, v);
        }
        s
    }

    pub fn get(&self, n: i64) -> T {
        self.support.get(&n).cloned().unwrap_or_else(T::zero)
    }

    pub fn set(&mut self, n: i64, v: T) {
        if v.is_zero() {
            self.support.remove(&n);
        } else {
            self.support.insert(n, v);
        }
    }

    pub fn support(&self) -> impl Iterator<Item = (&i64, &T)> {
        self.support.iter()
    }

    pub fn is_supported_on(&self, index: &IndexSet) -> bool {
        self.support.keys().all(|&k| index.contains(k))
    }

    /// Keeps the entries at indices `> n` and zeroes the rest.
    fn beyond(&self, n: i64) -> Self {
        Sequence {
            support: self
                .support
                .range(n.saturating_add(1)..)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }
}

impl<T: Scalar> fmt::Display for Sequence<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.support.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}: {v}")?;
        }
        f.write_str("}")
    }
}

impl<T: Scalar> FromStr for Sequence<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("sequence must be braced: '{s}'")))?;
        let mut seq = Self::zero();
        for item in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (k, v) = item
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected index: value, got '{item}'")))?;
            let k: i64 = k
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad index '{}'", k.trim())))?;
            let v: T = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad value '{}'", v.trim())))?;
            if seq.support.contains_key(&k) {
                return Err(Error::Parse(format!("index {k} repeated")));
            }
            seq.set(k, v);
        }
        Ok(seq)
    }
}

/// An atom of 𝔖_I.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Id,
    L(i64),
    R(i64),
}

impl Atom {
    pub fn converse(self) -> Atom {
        match self {
            Atom::Id => Atom::Id,
            Atom::L(n) => Atom::R(n),
            Atom::R(n) => Atom::L(n),
        }
    }

    pub fn index(self) -> Option<i64> {
        match self {
            Atom::Id => None,
            Atom::L(n) | Atom::R(n) => Some(n),
        }
    }

    /// Whether `c ⊆ self | other`, from the atom product rules.
    pub fn product_contains(self, other: Atom, c: Atom) -> bool {
        match (self, other) {
            (Atom::Id, b) => c == b,
            (a, Atom::Id) => c == a,
            (a, b) if a == b => c == a,
            (a, b) => {
                let (m, n) = (a.index().unwrap(), b.index().unwrap());
                if m == n {
                    c.index().is_none_or(|k| k <= n)
                } else if m < n {
                    c == b
                } else {
                    c == a
                }
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Id => f.write_str("Id"),
            Atom::L(n) => write!(f, "L{n}"),
            Atom::R(n) => write!(f, "R{n}"),
        }
    }
}

/// The atom containing `(q, r)`: `Id` if equal, otherwise `L_n` or `R_n`
/// at the largest index `n` where they differ, by whether `q_n < r_n`.
pub fn classify<T: Scalar>(q: &Sequence<T>, r: &Sequence<T>) -> Atom {
    let keys: BTreeSet<i64> = q.support.keys().chain(r.support.keys()).copied().collect();
    for &n in keys.iter().rev() {
        let (a, b) = (q.get(n), r.get(n));
        if a < b {
            return Atom::L(n);
        }
        if a > b {
            return Atom::R(n);
        }
    }
    Atom::Id
}

/// A sequence `s` with `(q, s) ∈ left` and `(s, r) ∈ right`, given that
/// `(q, r)` lies in `left | right`. Free entries are zero.
pub fn witness<T: Scalar>(left: Atom, right: Atom, q: &Sequence<T>, r: &Sequence<T>) -> Result<Sequence<T>> {
    let c = classify(q, r);
    if !left.product_contains(right, c) {
        return Err(Error::NotInProduct(format!("({q},{r}) is in {c}, not in {left}|{right}")));
    }
    let s = match (left, right) {
        (Atom::Id, _) => q.clone(),
        (_, Atom::Id) => r.clone(),
        (a, b) => {
            let (m, n) = (a.index().unwrap(), b.index().unwrap());
            if a == b {
                let mut s = q.beyond(n);
                s.set(n, T::midpoint(&q.get(n), &r.get(n)));
                s
            } else if m == n {
                let (qn, rn) = (q.get(n), r.get(n));
                let mut s = q.beyond(n);
                let v = match a {
                    // R_n | L_n: below both
                    Atom::R(_) => (if qn < rn { qn } else { rn }) - T::one(),
                    _ => (if qn > rn { qn } else { rn }) + T::one(),
                };
                s.set(n, v);
                s
            } else if m < n {
                let mut s = q.beyond(m);
                let qm = q.get(m);
                s.set(m, if matches!(a, Atom::L(_)) { qm + T::one() } else { qm - T::one() });
                s
            } else {
                let mut s = r.beyond(n);
                let rn = r.get(n);
                s.set(n, if matches!(b, Atom::L(_)) { rn - T::one() } else { rn + T::one() });
                s
            }
        }
    };
    if classify(q, &s) != left || classify(&s, r) != right {
        return Err(Error::NotInProduct(format!(
            "witness {s} for ({q},{r}) in {left}|{right} failed; scalar order not dense enough"
        )));
    }
    Ok(s)
}

/// An element of 𝔖_I: `Id_I` (if `has_id`) ∪ `⋃ L_n (n ∈ lset)` ∪ `⋃ R_n (n ∈ rset)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymElement {
    index: IndexSet,
    has_id: bool,
    lset: IntervalSet,
    rset: IntervalSet,
}

impl SymElement {
    /// `lset` and `rset` are clipped to `index`.
    pub fn new(index: &IndexSet, has_id: bool, lset: &IntervalSet, rset: &IntervalSet) -> Self {
        SymElement {
            index: index.clone(),
            has_id,
            lset: lset.intersect(index),
            rset: rset.intersect(index),
        }
    }

    pub fn empty(index: &IndexSet) -> Self {
        Self::new(index, false, &IntervalSet::empty(), &IntervalSet::empty())
    }

    pub fn identity_on(index: &IndexSet) -> Self {
        Self::new(index, true, &IntervalSet::empty(), &IntervalSet::empty())
    }

    pub fn diversity_on(index: &IndexSet) -> Self {
        Self::new(index, false, index, index)
    }

    pub fn universe(index: &IndexSet) -> Self {
        Self::new(index, true, index, index)
    }

    pub fn ls(index: &IndexSet, lset: &IntervalSet) -> Self {
        Self::new(index, false, lset, &IntervalSet::empty())
    }

    pub fn rs(index: &IndexSet, rset: &IntervalSet) -> Self {
        Self::new(index, false, &IntervalSet::empty(), rset)
    }

    pub fn l(index: &IndexSet, n: i64) -> Self {
        Self::ls(index, &IntervalSet::singleton(n))
    }

    pub fn r(index: &IndexSet, n: i64) -> Self {
        Self::rs(index, &IntervalSet::singleton(n))
    }

    pub fn from_atom(index: &IndexSet, a: Atom) -> Self {
        match a {
            Atom::Id => Self::identity_on(index),
            Atom::L(n) => Self::l(index, n),
            Atom::R(n) => Self::r(index, n),
        }
    }

    pub fn index(&self) -> &IndexSet {
        &self.index
    }

    pub fn has_id(&self) -> bool {
        self.has_id
    }

    pub fn lset(&self) -> &IntervalSet {
        &self.lset
    }

    pub fn rset(&self) -> &IntervalSet {
        &self.rset
    }

    pub fn contains_atom(&self, a: Atom) -> bool {
        match a {
            Atom::Id => self.has_id,
            Atom::L(n) => self.lset.contains(n),
            Atom::R(n) => self.rset.contains(n),
        }
    }

    /// Atoms of a finitely indexed element, `Id` first then `L_n`, `R_n` by `n`.
    pub fn atoms(&self) -> Option<Vec<Atom>> {
        let mut out = Vec::new();
        if self.has_id {
            out.push(Atom::Id);
        }
        let ls = self.lset.members()?;
        let rs = self.rset.members()?;
        out.extend(ls.into_iter().map(Atom::L));
        out.extend(rs.into_iter().map(Atom::R));
        out.sort();
        Some(out)
    }

    /// Bitset over the atoms of [`finite_restrict`]`(index)`.
    pub fn to_bits(&self) -> Result<u64> {
        let members = finite_members(&self.index)?;
        let mut b = u64::from(self.has_id);
        for (k, &n) in members.iter().enumerate() {
            if self.lset.contains(n) {
                b |= 1 << (2 * k + 1);
            }
            if self.rset.contains(n) {
                b |= 1 << (2 * k + 2);
            }
        }
        Ok(b)
    }

    pub fn from_bits(index: &IndexSet, b: u64) -> Result<Self> {
        let members = finite_members(index)?;
        let mut l = Vec::new();
        let mut r = Vec::new();
        for (k, &n) in members.iter().enumerate() {
            if b >> (2 * k + 1) & 1 == 1 {
                l.push(n);
            }
            if b >> (2 * k + 2) & 1 == 1 {
                r.push(n);
            }
        }
        Ok(Self::new(
            index,
            b & 1 == 1,
            &IntervalSet::from_values(l),
            &IntervalSet::from_values(r),
        ))
    }

    /// Parses the text form written by `Display`, e.g. `Id + L(-inf,3] + R5`.
    pub fn parse(index: &IndexSet, text: &str) -> Result<Self> {
        let t = text.trim();
        if t == "empty" {
            return Ok(Self::empty(index));
        }
        let mut has_id = false;
        let mut l = IntervalSet::empty();
        let mut r = IntervalSet::empty();
        for term in t.split('+').map(str::trim) {
            if term == "Id" {
                has_id = true;
                continue;
            }
            let (kind, rest) = term.split_at(term.chars().next().map_or(0, char::len_utf8));
            let set = parse_index_part(rest)?;
            match kind {
                "L" => l = l.union(&set),
                "R" => r = r.union(&set),
                _ => return Err(Error::Parse(format!("bad term '{term}'"))),
            }
        }
        Ok(Self::new(index, has_id, &l, &r))
    }
}

fn parse_index_part(s: &str) -> Result<IntervalSet> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("missing index".into()));
    }
    if let Ok(n) = s.parse::<i64>() {
        return Ok(IntervalSet::singleton(n));
    }
    s.parse()
}

fn finite_members(index: &IndexSet) -> Result<Vec<i64>> {
    let members = index
        .members()
        .ok_or_else(|| Error::InfiniteIndexSet(index.to_string()))?;
    if 2 * members.len() + 1 > MAX_ATOMS {
        return Err(Error::InvalidStructure(format!(
            "{} atoms exceed {MAX_ATOMS}",
            2 * members.len() + 1
        )));
    }
    Ok(members)
}

impl fmt::Display for SymElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        if self.has_id {
            terms.push("Id".to_string());
        }
        for (kind, set) in [("L", &self.lset), ("R", &self.rset)] {
            for &(lo, hi) in set.intervals() {
                match (lo, hi) {
                    (Bound::Finite(a), Bound::Finite(b)) if a == b => terms.push(format!("{kind}{a}")),
                    _ => terms.push(format!("{kind}{}", IntervalSet::range(lo, hi))),
                }
            }
        }
        if terms.is_empty() {
            f.write_str("empty")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

fn above(b: Bound) -> IntervalSet {
    IntervalSet::at_least(b.succ())
}

impl Relation for SymElement {
    fn compatible(&self, other: &Self) -> bool {
        self.index == other.index
    }

    fn raw_union(&self, o: &Self) -> Self {
        SymElement {
            index: self.index.clone(),
            has_id: self.has_id || o.has_id,
            lset: self.lset.union(&o.lset),
            rset: self.rset.union(&o.rset),
        }
    }

    fn raw_intersect(&self, o: &Self) -> Self {
        SymElement {
            index: self.index.clone(),
            has_id: self.has_id && o.has_id,
            lset: self.lset.intersect(&o.lset),
            rset: self.rset.intersect(&o.rset),
        }
    }

    /// Closed form of the atom rules lifted by union:
    /// equal kinds combine by maximum index; for `L_κ` against `R_λ` the
    /// larger index wins, and `κ = λ` adds `Id ∪ L(-∞,κ] ∪ R(-∞,κ]`, so
    /// only the supremum of the meeting indices matters.
    fn raw_compose(&self, o: &Self) -> Self {
        let mut has_id = self.has_id && o.has_id;
        let mut l = self.lset.max_combine(&o.lset);
        let mut r = self.rset.max_combine(&o.rset);
        if self.has_id {
            l = l.union(&o.lset);
            r = r.union(&o.rset);
        }
        if o.has_id {
            l = l.union(&self.lset);
            r = r.union(&self.rset);
        }
        // x: an L-part, y: the R-part of the other operand
        for (x, y) in [(&self.lset, &o.rset), (&o.lset, &self.rset)] {
            if x.is_empty() || y.is_empty() {
                continue;
            }
            l = l.union(&x.intersect(&above(y.min_element())));
            r = r.union(&y.intersect(&above(x.min_element())));
            let meet = x.intersect(y);
            if !meet.is_empty() {
                has_id = true;
                let down = IntervalSet::at_most(meet.max_element());
                l = l.union(&down);
                r = r.union(&down);
            }
        }
        SymElement::new(&self.index, has_id, &l, &r)
    }

    fn raw_subset(&self, o: &Self) -> bool {
        (!self.has_id || o.has_id) && self.lset.is_subset(&o.lset) && self.rset.is_subset(&o.rset)
    }

    fn complement(&self) -> Self {
        SymElement {
            index: self.index.clone(),
            has_id: !self.has_id,
            lset: self.index.difference(&self.lset),
            rset: self.index.difference(&self.rset),
        }
    }

    fn converse(&self) -> Self {
        SymElement {
            index: self.index.clone(),
            has_id: self.has_id,
            lset: self.rset.clone(),
            rset: self.lset.clone(),
        }
    }

    fn identity(&self) -> Self {
        Self::identity_on(&self.index)
    }
}

/// The finite atom structure of 𝔖_I for finite `I`, with atoms `Id`, then
/// `L_n`, `R_n` for each `n ∈ I` ascending; the table comes from the atom rules.
pub fn finite_restrict(index: &IndexSet) -> Result<AtomStructure> {
    let members = finite_members(index)?;
    let mut atoms = vec![Atom::Id];
    for &n in &members {
        atoms.push(Atom::L(n));
        atoms.push(Atom::R(n));
    }
    let k = atoms.len();
    let names = atoms.iter().map(Atom::to_string).collect();
    let converse = atoms
        .iter()
        .map(|a| atoms.iter().position(|b| *b == a.converse()).unwrap())
        .collect();
    let mut table = vec![0u64; k * k];
    for (x, &a) in atoms.iter().enumerate() {
        for (y, &b) in atoms.iter().enumerate() {
            for (z, &c) in atoms.iter().enumerate() {
                if a.product_contains(b, c) {
                    table[x * k + y] |= 1 << z;
                }
            }
        }
    }
    AtomStructure::new(format!("S{index}"), names, converse, 1, table)
}

/// Converts an atom bitset of [`finite_restrict`] back to atoms.
pub fn atoms_of_bits(index: &IndexSet, b: u64) -> Result<Vec<Atom>> {
    let members = finite_members(index)?;
    Ok(bits(b)
        .map(|i| match i {
            0 => Atom::Id,
            i if i % 2 == 1 => Atom::L(members[(i - 1) / 2]),
            i => Atom::R(members[(i - 2) / 2]),
        })
        .collect())
}

/// Kinds of chain element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChainKind {
    /// `S_n = R[-n,∞)`
    S,
    /// `T_n = R(-∞,∞) ∪ Id ∪ L(-∞,n-1]`
    T,
    /// `T̂_n = R(-∞,∞) ∪ L(-∞,n-1]`
    That,
}

pub fn chain_element(kind: ChainKind, n: i64, index: &IndexSet) -> SymElement {
    match kind {
        ChainKind::S => SymElement::rs(index, &IntervalSet::at_least(-n)),
        ChainKind::T => SymElement::new(index, true, &IntervalSet::at_most(n - 1), index),
        ChainKind::That => SymElement::new(index, false, &IntervalSet::at_most(n - 1), index),
    }
}

/// The chain `C_I` (or `C'_I` when `primed`), sorted by inclusion with
/// duplicates removed. Only indices inside `window` are produced; a window
/// is required when `I` is infinite.
pub fn enumerate_chain(
    index: &IndexSet,
    primed: bool,
    window: Option<RangeInclusive<i64>>,
) -> Result<Vec<SymElement>> {
    let window = match window {
        Some(w) => w,
        None => {
            let members = index
                .members()
                .ok_or_else(|| Error::InfiniteIndexSet(index.to_string()))?;
            match (members.first(), members.last()) {
                (Some(&a), Some(&b)) => -b.max(-a)..=b.max(-a),
                _ => return Ok(Vec::new()),
            }
        }
    };
    let top_kind = if primed { ChainKind::That } else { ChainKind::T };
    let mut out: Vec<SymElement> = Vec::new();
    for n in window {
        if index.contains(-n) {
            out.push(chain_element(ChainKind::S, n, index));
        }
        if index.contains(n) {
            out.push(chain_element(top_kind, n, index));
        }
    }
    out.sort_by(|a, b| {
        if a == b {
            std::cmp::Ordering::Equal
        } else if a.raw_subset(b) {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    out.dedup();
    Ok(out)
}

/// The chain extended by `∅` below and the top (`U²`, or `Di` when
/// `primed`) above; kept apart from [`enumerate_chain`] on purpose.
pub fn extended_chain(
    index: &IndexSet,
    primed: bool,
    window: Option<RangeInclusive<i64>>,
) -> Result<Vec<SymElement>> {
    let mut chain = enumerate_chain(index, primed, window)?;
    let top = chain_top(index, primed);
    let bottom = SymElement::empty(index);
    if chain.first() != Some(&bottom) {
        chain.insert(0, bottom);
    }
    if chain.last() != Some(&top) {
        chain.push(top);
    }
    Ok(chain)
}

fn chain_top(index: &IndexSet, primed: bool) -> SymElement {
    if primed {
        SymElement::diversity_on(index)
    } else {
        SymElement::universe(index)
    }
}

/// Where an element sits in an extended chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChainPos {
    Bottom,
    S(i64),
    T(i64),
    That(i64),
    Top,
}

impl ChainPos {
    pub fn element(self, index: &IndexSet, primed: bool) -> SymElement {
        match self {
            ChainPos::Bottom => SymElement::empty(index),
            ChainPos::Top => chain_top(index, primed),
            ChainPos::S(n) => chain_element(ChainKind::S, n, index),
            ChainPos::T(n) => chain_element(ChainKind::T, n, index),
            ChainPos::That(n) => chain_element(ChainKind::That, n, index),
        }
    }

    /// The chain involution: `~S_n = T_{-n}`, `~'S_n = T̂_{-n}`, `∅ ↔ top`.
    pub fn negate(self, primed: bool) -> ChainPos {
        match self {
            ChainPos::Bottom => ChainPos::Top,
            ChainPos::Top => ChainPos::Bottom,
            ChainPos::S(n) if primed => ChainPos::That(-n),
            ChainPos::S(n) => ChainPos::T(-n),
            ChainPos::T(n) | ChainPos::That(n) => ChainPos::S(-n),
        }
    }
}

/// Locates `x` in the extended chain `C_I` (or `C'_I`).
pub fn chain_position(x: &SymElement, primed: bool) -> Result<ChainPos> {
    let index = x.index();
    let not_in = || Error::NotInChain(x.to_string());
    if x.is_empty() {
        return Ok(ChainPos::Bottom);
    }
    if *x == chain_top(index, primed) {
        return Ok(ChainPos::Top);
    }
    if !x.has_id && x.lset.is_empty() {
        let Bound::Finite(k) = x.rset.min_element() else {
            return Err(not_in());
        };
        return if *x == chain_element(ChainKind::S, -k, index) {
            Ok(ChainPos::S(-k))
        } else {
            Err(not_in())
        };
    }
    if x.has_id == primed || x.rset != *index {
        return Err(not_in());
    }
    // T_n: n is the least member of I above max(lset)
    let above_l = match x.lset.max_element() {
        Bound::NegInf => index.clone(),
        Bound::Finite(m) => index.intersect(&IntervalSet::at_least(m + 1)),
        Bound::PosInf => return Err(not_in()),
    };
    let Bound::Finite(n) = above_l.min_element() else {
        return Err(not_in());
    };
    let (pos, kind) = if primed {
        (ChainPos::That(n), ChainKind::That)
    } else {
        (ChainPos::T(n), ChainKind::T)
    };
    if *x == chain_element(kind, n, index) {
        Ok(pos)
    } else {
        Err(not_in())
    }
}

/// The chain negation of an element of the extended chain.
pub fn chain_negation(x: &SymElement, primed: bool) -> Result<SymElement> {
    Ok(chain_position(x, primed)?
        .negate(primed)
        .element(x.index(), primed))
}

/// Sugihara implication computed from the chain order: `~a ∨ b` when
/// `a ≤ b`, otherwise `~a ∧ b`.
pub fn sugihara_arrow(a: &SymElement, b: &SymElement, primed: bool) -> Result<SymElement> {
    a.ensure(b)?;
    let na = chain_negation(a, primed)?;
    chain_position(b, primed)?;
    Ok(if a.raw_subset(b) {
        na.raw_union(b)
    } else {
        na.raw_intersect(b)
    })
}

/// Short chain name such as `S-1`, `T0`, `That1`; other elements print in full.
pub fn chain_label(x: &SymElement, primed: bool) -> String {
    match chain_position(x, primed) {
        Ok(ChainPos::Bottom) => "empty".into(),
        Ok(ChainPos::Top) => (if primed { "Di" } else { "U2" }).into(),
        Ok(ChainPos::S(n)) => format!("S{n}"),
        Ok(ChainPos::T(n)) => format!("T{n}"),
        Ok(ChainPos::That(n)) => format!("That{n}"),
        Err(_) => x.to_string(),
    }
}

/// `~a ≤ a` in the chain.
pub fn is_designated(a: &SymElement, primed: bool) -> Result<bool> {
    Ok(chain_negation(a, primed)?.raw_subset(a))
}

/// Evaluates an element expression over `index`. Terms are `Id`, `Di`,
/// `U`, `empty` and `L`/`R` followed by an index or interval, e.g. `L0`,
/// `R[1,inf)`. Operators, loosest first: `->` (right associative), `+`
/// (union), `&`, `|`, prefix `~`. A trailing `'` on `->`, `|` or `~` picks
/// the relativized operation.
pub fn eval_expr(index: &IndexSet, text: &str) -> Result<SymElement> {
    let mut p = ExprParser { index, src: text, pos: 0 };
    let e = p.arrow()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.error("unexpected input"));
    }
    Ok(e)
}

struct ExprParser<'a> {
    index: &'a IndexSet,
    src: &'a str,
    pos: usize,
}

impl ExprParser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    /// Consumes `tok` and reports whether a `'` followed it.
    fn eat(&mut self, tok: &str) -> Option<bool> {
        self.skip_ws();
        if !self.src[self.pos..].starts_with(tok) {
            return None;
        }
        self.pos += tok.len();
        let primed = self.src[self.pos..].starts_with('\'');
        if primed {
            self.pos += 1;
        }
        Some(primed)
    }

    fn arrow(&mut self) -> Result<SymElement> {
        let a = self.sum()?;
        match self.eat("->") {
            Some(primed) => {
                let b = self.arrow()?;
                if primed {
                    a.rel_residual(&b)
                } else {
                    a.residual(&b)
                }
            }
            None => Ok(a),
        }
    }

    fn sum(&mut self) -> Result<SymElement> {
        let mut a = self.meet()?;
        while self.eat("+").is_some() {
            a = a.union(&self.meet()?)?;
        }
        Ok(a)
    }

    fn meet(&mut self) -> Result<SymElement> {
        let mut a = self.product()?;
        while self.eat("&").is_some() {
            a = a.intersect(&self.product()?)?;
        }
        Ok(a)
    }

    fn product(&mut self) -> Result<SymElement> {
        let mut a = self.unary()?;
        while let Some(primed) = self.eat("|") {
            let b = self.unary()?;
            a = if primed { a.rel_compose(&b)? } else { a.compose(&b)? };
        }
        Ok(a)
    }

    fn unary(&mut self) -> Result<SymElement> {
        if let Some(primed) = self.eat("~") {
            let a = self.unary()?;
            return Ok(if primed { a.rel_conv_complement() } else { a.conv_complement() });
        }
        if self.eat("(").is_some() {
            let a = self.arrow()?;
            if self.eat(")").is_none() {
                return Err(self.error("expected ')'"));
            }
            return Ok(a);
        }
        self.term()
    }

    fn term(&mut self) -> Result<SymElement> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let word: String = rest.chars().take_while(|c| c.is_ascii_alphabetic()).collect();
        let idx = self.index;
        let fixed = match word.as_str() {
            "Id" => Some(SymElement::identity_on(idx)),
            "Di" => Some(SymElement::diversity_on(idx)),
            "U" => Some(SymElement::universe(idx)),
            "empty" => Some(SymElement::empty(idx)),
            _ => None,
        };
        if let Some(e) = fixed {
            self.pos += word.len();
            return Ok(e);
        }
        let kind = rest.chars().next().filter(|c| matches!(c, 'L' | 'R'));
        let Some(kind) = kind else {
            return Err(self.error("expected a term"));
        };
        let body = &rest[1..];
        let len = if body.starts_with(['[', '(']) {
            body.find([']', ')']).map(|k| k + 1)
        } else {
            let digits = body
                .char_indices()
                .take_while(|&(k, c)| c.is_ascii_digit() || (k == 0 && c == '-'))
                .count();
            (digits > 0).then_some(digits)
        };
        let Some(len) = len else {
            return Err(self.error("expected an index after L or R"));
        };
        let set = parse_index_part(&body[..len]).map_err(|_| self.error("bad index"))?;
        self.pos += 1 + len;
        Ok(if kind == 'L' {
            SymElement::ls(idx, &set)
        } else {
            SymElement::rs(idx, &set)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn z() -> IndexSet {
        IntervalSet::full()
    }

    fn set(s: &str) -> IntervalSet {
        s.parse().unwrap()
    }

    fn q(entries: &[(i64, i64, i64)]) -> Sequence<BigRational> {
        Sequence::from_entries(
            entries
                .iter()
                .map(|&(k, n, d)| (k, BigRational::new(n.into(), d.into()))),
        )
    }

    #[test]
    fn boolean_examples() {
        let i = set("{0,1}");
        let id = SymElement::identity_on(&i);
        assert_eq!(id.complement(), SymElement::diversity_on(&i));
        assert_eq!(
            SymElement::diversity_on(&i).union(&id).unwrap(),
            SymElement::universe(&i)
        );
        let a = SymElement::ls(&i, &set("{0,1}"));
        let b = SymElement::parse(&i, "R0 + L1").unwrap();
        assert_eq!(a.intersect(&b).unwrap(), SymElement::l(&i, 1));
    }

    #[test]
    fn compose_examples() {
        let i0 = set("{0}");
        let l0r0 = SymElement::l(&i0, 0).compose(&SymElement::r(&i0, 0)).unwrap();
        assert_eq!(l0r0, SymElement::universe(&i0));
        assert_eq!(
            SymElement::l(&z(), 3).compose(&SymElement::l(&z(), 5)).unwrap(),
            SymElement::l(&z(), 5)
        );
        let a = SymElement::ls(&z(), &IntervalSet::at_most(2));
        let b = SymElement::rs(&z(), &IntervalSet::at_least(5));
        assert_eq!(a.compose(&b).unwrap(), b);
        let a = SymElement::ls(&z(), &IntervalSet::at_most(5));
        let b = SymElement::rs(&z(), &IntervalSet::at_least(2));
        let expect = SymElement::new(&z(), true, &IntervalSet::at_most(5), &z());
        assert_eq!(a.compose(&b).unwrap(), expect);
    }

    #[test]
    fn mismatched_index_rejected() {
        let a = SymElement::l(&z(), 0);
        let b = SymElement::l(&set("{0}"), 0);
        assert_eq!(a.union(&b), Err(Error::MixedOperands));
    }

    #[test]
    fn converse_example() {
        let a = SymElement::ls(&z(), &IntervalSet::at_most(3));
        assert_eq!(a.converse(), SymElement::rs(&z(), &IntervalSet::at_most(3)));
    }

    #[test]
    fn chain_examples() {
        let i0 = set("{0}");
        assert_eq!(chain_element(ChainKind::S, 0, &i0), SymElement::r(&i0, 0));
        assert_eq!(
            chain_element(ChainKind::T, 0, &i0),
            SymElement::parse(&i0, "Id + R0").unwrap()
        );
        assert_eq!(chain_element(ChainKind::That, 0, &i0), SymElement::r(&i0, 0));
        let i01 = set("{0,1}");
        assert_eq!(
            chain_element(ChainKind::That, 1, &i01),
            SymElement::parse(&i01, "L0 + R0 + R1").unwrap()
        );
        let c = enumerate_chain(&i0, false, None).unwrap();
        assert_eq!(c, vec![chain_element(ChainKind::S, 0, &i0), chain_element(ChainKind::T, 0, &i0)]);
        let c = enumerate_chain(&i01, true, None).unwrap();
        assert_eq!(
            c,
            vec![
                chain_element(ChainKind::S, -1, &i01),
                chain_element(ChainKind::S, 0, &i01),
                chain_element(ChainKind::That, 1, &i01)
            ]
        );
        assert!(enumerate_chain(&IntervalSet::empty(), false, None).unwrap().is_empty());
        assert!(enumerate_chain(&z(), false, None).is_err());
    }

    #[test]
    fn negation_and_designation() {
        for n in -3..=3 {
            let s = chain_element(ChainKind::S, n, &z());
            let t = chain_element(ChainKind::T, -n, &z());
            assert_eq!(s.conv_complement(), t);
            assert!(!is_designated(&s, false).unwrap());
            assert!(is_designated(&t, false).unwrap());
        }
        let i = set("{0,1}");
        assert_eq!(SymElement::empty(&i).conv_complement(), SymElement::universe(&i));
        assert_eq!(SymElement::empty(&i).rel_conv_complement(), SymElement::diversity_on(&i));
    }

    #[test]
    fn arrow_on_two_chain() {
        let i0 = set("{0}");
        let s = chain_element(ChainKind::S, 0, &i0);
        let t = chain_element(ChainKind::T, 0, &i0);
        assert_eq!(sugihara_arrow(&s, &t, false).unwrap(), t.union(&s.conv_complement()).unwrap());
        assert_eq!(sugihara_arrow(&s, &t, false).unwrap(), s.residual(&t).unwrap());
        assert!(sugihara_arrow(&SymElement::l(&i0, 0), &s, false).is_err());
    }

    #[test]
    fn text_round_trip() {
        let a = SymElement::new(&z(), true, &IntervalSet::at_most(3), &set("[0,0] u [5,inf)"));
        let text = a.to_string();
        assert_eq!(text, "Id + L(-inf,3] + R0 + R[5,inf)");
        assert_eq!(SymElement::parse(&z(), &text).unwrap(), a);
        assert_eq!(SymElement::empty(&z()).to_string(), "empty");
        let s = q(&[(1, 3, 2), (4, -7, 1)]);
        assert_eq!(s.to_string(), "{1: 3/2, 4: -7}");
        assert_eq!(s.to_string().parse::<Sequence<BigRational>>().unwrap(), s);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&q(&[(0, 1, 1)]), &q(&[(0, 1, 1)])), Atom::Id);
        assert_eq!(classify(&q(&[(0, 1, 1)]), &q(&[(0, 2, 1)])), Atom::L(0));
        assert_eq!(classify(&q(&[(1, 3, 1)]), &q(&[(0, 5, 1)])), Atom::R(1));
        assert_eq!(classify(&Sequence::<f64>::zero(), &Sequence::zero()), Atom::Id);
    }

    #[test]
    fn witness_examples() {
        let s = witness(Atom::L(0), Atom::L(0), &q(&[(0, 1, 1)]), &q(&[(0, 3, 1)])).unwrap();
        assert_eq!(s, q(&[(0, 2, 1)]));
        let p = q(&[(0, 4, 1)]);
        let s = witness(Atom::R(0), Atom::L(0), &p, &p).unwrap();
        assert_eq!(s, q(&[(0, 3, 1)]));
        let (a, b) = (q(&[(0, 2, 1), (3, 1, 1)]), q(&[(0, 9, 1), (3, 2, 1)]));
        let s = witness(Atom::L(0), Atom::L(3), &a, &b).unwrap();
        assert_eq!(s, q(&[(0, 3, 1), (3, 1, 1)]));
        assert!(witness(Atom::L(0), Atom::L(0), &b, &a).is_err());
    }

    #[test]
    fn float_witness_can_fail() {
        let a = Sequence::from_entries([(0, 1.0f64)]);
        let b = Sequence::from_entries([(0, 1.0 + f64::EPSILON)]);
        assert!(witness(Atom::L(0), Atom::L(0), &a, &b).is_err());
    }

    #[test]
    fn finite_restrict_shape() {
        let s = finite_restrict(&set("{0}")).unwrap();
        assert_eq!(s.atom_names(), ["Id", "L0", "R0"]);
        let e = SymElement::parse(&set("{0,1}"), "Id + R1").unwrap();
        let b = e.to_bits().unwrap();
        assert_eq!(SymElement::from_bits(&set("{0,1}"), b).unwrap(), e);
        assert_eq!(
            atoms_of_bits(&set("{0,1}"), b).unwrap(),
            vec![Atom::Id, Atom::R(1)]
        );
    }

    #[test]
    fn expression_evaluation() {
        let i = set("{0,1}");
        let e = |t: &str| eval_expr(&i, t).unwrap();
        assert_eq!(e("L0 | R0"), SymElement::parse(&i, "Id + L0 + R0").unwrap());
        assert_eq!(e("~'(L0 + L1)"), e("L0+L1"));
        assert_eq!(e("L0+L1 ->' L1"), e("L1"));
        assert_eq!(e("~Di"), e("Id"));
        assert_eq!(e("R[0,1] & L(-inf,0] + Id"), e("Id"));
            assert_eq!(e("U"), SymElement::universe(&i));
        let z = IntervalSet::full();
        assert_eq!(eval_expr(&z, "L-2 | L[-5,-3]").unwrap(), SymElement::l(&z, -2));
    }

    #[test]
    fn expression_errors() {
        let i = set("{0}");
        assert!(matches!(eval_expr(&i, "L0 + "), Err(Error::Syntax { position: 5, .. })));
        assert!(matches!(eval_expr(&i, "(L0"), Err(Error::Syntax { position: 3, .. })));
        assert!(matches!(eval_expr(&i, "L0 R0"), Err(Error::Syntax { position: 3, .. })));
        assert!(matches!(eval_expr(&i, "Lx"), Err(Error::Syntax { position: 0, .. })));
    }
}
