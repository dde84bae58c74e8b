//! Finite atomic relation algebras and concrete relations.
//!
//! [`AtomStructure`] holds the atoms, their converses, the identity atoms
//! and the dense atom composition table. Elements ([`RaElement`]) are atom
//! bitsets and every operation is lifted from atoms by union.
//! [`ConcreteRelation`] is a boolean matrix over a small base set and
//! serves as ground truth for the finite models.
//!
//! The derived operations of the relevance-logic connectives are provided
//! once, on the [`Relation`] trait:
//!
//! * residual `A→B = -(Ă | -B)`
//! * converse-complement `~A = -Ă`
//! * relativized versions `~'A = ~A ∩ Di`, `A|'B = ((A∩Di)|(B∩Di)) ∩ Di`,
//!   `A→'B = Di ∩ -((Ă∩Di)|(-B∩Di))`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Boolean algebra of binary relations with composition, converse and
/// identity. The `raw_*` methods assume both operands share a universe;
/// the provided methods check that first.
pub trait Relation: Clone + PartialEq + fmt::Debug {
    fn compatible(&self, other: &Self) -> bool;
    fn raw_union(&self, other: &Self) -> Self;
    fn raw_intersect(&self, other: &Self) -> Self;
    fn raw_compose(&self, other: &Self) -> Self;
    fn raw_subset(&self, other: &Self) -> bool;
    fn complement(&self) -> Self;
    fn converse(&self) -> Self;
    /// Identity relation of this element's universe.
    fn identity(&self) -> Self;

    fn ensure(&self, other: &Self) -> Result<()> {
        if self.compatible(other) {
            Ok(())
        } else {
            Err(Error::MixedOperands)
        }
    }

    fn union(&self, other: &Self) -> Result<Self> {
        self.ensure(other)?;
        Ok(self.raw_union(other))
    }

    fn intersect(&self, other: &Self) -> Result<Self> {
        self.ensure(other)?;
        Ok(self.raw_intersect(other))
    }

    fn difference(&self, other: &Self) -> Result<Self> {
        self.ensure(other)?;
        Ok(self.raw_intersect(&other.complement()))
    }

    fn compose(&self, other: &Self) -> Result<Self> {
        self.ensure(other)?;
        Ok(self.raw_compose(other))
    }

    fn is_subset(&self, other: &Self) -> Result<bool> {
        self.ensure(other)?;
        Ok(self.raw_subset(other))
    }

    fn bottom(&self) -> Self {
        self.raw_intersect(&self.complement())
    }

    fn top(&self) -> Self {
        self.bottom().complement()
    }

    fn diversity(&self) -> Self {
        self.identity().complement()
    }

    fn is_empty(&self) -> bool {
        *self == self.bottom()
    }

    fn residual(&self, other: &Self) -> Result<Self> {
        self.ensure(other)?;
        Ok(self
            .converse()
            .raw_compose(&other.complement())
            .complement())
    }

    fn conv_complement(&self) -> Self {
        self.converse().complement()
    }

    fn rel_conv_complement(&self) -> Self {
        self.conv_complement().raw_intersect(&self.diversity())
    }

    fn rel_compose(&self, other: &Self) -> Result<Self> {
        self.ensure(other)?;
        let di = self.diversity();
        Ok(self
            .raw_intersect(&di)
            .raw_compose(&other.raw_intersect(&di))
            .raw_intersect(&di))
    }

    fn rel_residual(&self, other: &Self) -> Result<Self> {
        self.ensure(other)?;
        let di = self.diversity();
        let blocked = self
            .converse()
            .raw_intersect(&di)
            .raw_compose(&other.complement().raw_intersect(&di));
        Ok(di.raw_intersect(&blocked.complement()))
    }
}

/// Largest base a [`ConcreteRelation`] supports (one `u64` per row).
pub const MAX_BASE: usize = 64;
/// Largest atom count an [`AtomStructure`] supports (atoms are `u64` bits).
pub const MAX_ATOMS: usize = 64;
/// Atom count above which [`validate_algebra`] skips associativity.
pub const ASSOCIATIVITY_GUARD: usize = 12;

/// A binary relation on `{0, .., base-1}`; row `x` holds the successors of `x`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ConcreteRelation {
    base: usize,
    rows: Vec<u64>,
}

impl ConcreteRelation {
    /// The empty relation.
    ///
    /// Panics if `base` is zero or exceeds [`MAX_BASE`].
    pub fn empty(base: usize) -> Self {
        assert!(
            (1..=MAX_BASE).contains(&base),
            "base size {base} outside 1..={MAX_BASE}"
        );
        ConcreteRelation {
            base,
            rows: vec![0; base],
        }
    }

    fn row_mask(&self) -> u64 {
        if self.base == 64 {
            u64::MAX
        } else {
            (1u64 << self.base) - 1
        }
    }

    pub fn full(base: usize) -> Self {
        let mut r = Self::empty(base);
        let m = r.row_mask();
        r.rows.iter_mut().for_each(|row| *row = m);
        r
    }

    pub fn identity_on(base: usize) -> Self {
        Self::from_fn(base, |x, y| x == y)
    }

    pub fn diversity_on(base: usize) -> Self {
        Self::from_fn(base, |x, y| x != y)
    }

    pub fn from_fn(base: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut r = Self::empty(base);
        for x in 0..base {
            for y in 0..base {
                if f(x, y) {
                    r.rows[x] |= 1 << y;
                }
            }
        }
        r
    }

    pub fn from_pairs(base: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut r = Self::empty(base);
        for (x, y) in pairs {
            if x >= base || y >= base {
                return Err(Error::Parse(format!("pair ({x},{y}) outside base {base}")));
            }
            r.rows[x] |= 1 << y;
        }
        Ok(r)
    }

    /// Builds a relation from row bitmasks; bits beyond `base` are dropped.
    pub fn from_rows(base: usize, rows: &[u64]) -> Self {
        let mut r = Self::empty(base);
        let m = r.row_mask();
        for (dst, src) in r.rows.iter_mut().zip(rows) {
            *dst = src & m;
        }
        r
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.rows[x] >> y & 1 == 1
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.base).flat_map(move |x| {
            (0..self.base)
                .filter(move |&y| self.contains(x, y))
                .map(move |y| (x, y))
        })
    }

    pub fn count(&self) -> u32 {
        self.rows.iter().map(|r| r.count_ones()).sum()
    }

    /// Points with at least one successor.
    pub fn domain(&self) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, &r)| r != 0)
            .fold(0, |acc, (x, _)| acc | 1 << x)
    }
}

impl fmt::Debug for ConcreteRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rel{}{{", self.base)?;
        for (i, (x, y)) in self.pairs().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "({x},{y})")?;
        }
        f.write_str("}")
    }
}

impl fmt::Display for ConcreteRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (x, y)) in self.pairs().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "({x},{y})")?;
        }
        f.write_str("}")
    }
}

impl Relation for ConcreteRelation {
    fn compatible(&self, other: &Self) -> bool {
        self.base == other.base
    }

    fn raw_union(&self, other: &Self) -> Self {
        ConcreteRelation {
            base: self.base,
            rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a | b).collect(),
        }
    }

    fn raw_intersect(&self, other: &Self) -> Self {
        ConcreteRelation {
            base: self.base,
            rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a & b).collect(),
        }
    }

    fn raw_compose(&self, other: &Self) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|&row| {
                let mut acc = 0u64;
                let mut bits = row;
                while bits != 0 {
                    let z = bits.trailing_zeros() as usize;
                    acc |= other.rows[z];
                    bits &= bits - 1;
                }
                acc
            })
            .collect();
        ConcreteRelation {
            base: self.base,
            rows,
        }
    }

    fn raw_subset(&self, other: &Self) -> bool {
        self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0)
    }

    fn complement(&self) -> Self {
        let m = self.row_mask();
        ConcreteRelation {
            base: self.base,
            rows: self.rows.iter().map(|r| !r & m).collect(),
        }
    }

    fn converse(&self) -> Self {
        Self::from_fn(self.base, |x, y| self.contains(y, x))
    }

    fn identity(&self) -> Self {
        Self::identity_on(self.base)
    }
}

/// Concrete blocks realizing each atom of an [`AtomStructure`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcreteBlocks {
    pub base: usize,
    pub blocks: Vec<ConcreteRelation>,
}

/// Atoms, converse, identity atoms and composition table of a finite
/// atomic relation algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomStructure {
    name: String,
    atom_names: Vec<String>,
    converse: Vec<usize>,
    identity: u64,
    /// `table[x * n + y]` is the bitset of atoms below `x;y`.
    table: Vec<u64>,
    concrete: Option<ConcreteBlocks>,
}

fn valid_atom_name(name: &str) -> bool {
    !name.is_empty()
        && !name
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, ',' | '{' | '}' | ';' | '=' | '+' | '(' | ')'))
}

impl AtomStructure {
    /// Checks shape only; algebraic laws are audited by [`validate_algebra`].
    pub fn new(
        name: impl Into<String>,
        atom_names: Vec<String>,
        converse: Vec<usize>,
        identity: u64,
        table: Vec<u64>,
    ) -> Result<Self> {
        let n = atom_names.len();
        if n == 0 || n > MAX_ATOMS {
            return Err(Error::InvalidStructure(format!("{n} atoms")));
        }
        if let Some(bad) = atom_names.iter().find(|a| !valid_atom_name(a)) {
            return Err(Error::InvalidStructure(format!("bad atom name '{bad}'")));
        }
        for (i, a) in atom_names.iter().enumerate() {
            if atom_names[..i].contains(a) {
                return Err(Error::InvalidStructure(format!("duplicate atom '{a}'")));
            }
        }
        if converse.len() != n || converse.iter().any(|&c| c >= n) {
            return Err(Error::InvalidStructure("converse map has wrong shape".into()));
        }
        if table.len() != n * n {
            return Err(Error::InvalidStructure("table has wrong shape".into()));
        }
        let full = full_mask(n);
        if identity & !full != 0 || table.iter().any(|t| t & !full != 0) {
            return Err(Error::InvalidStructure("atom bit out of range".into()));
        }
        Ok(AtomStructure {
            name: name.into(),
            atom_names,
            converse,
            identity,
            table,
            concrete: None,
        })
    }

    pub fn with_concrete(mut self, concrete: ConcreteBlocks) -> Result<Self> {
        if concrete.blocks.len() != self.atom_count()
            || concrete.blocks.iter().any(|b| b.base() != concrete.base)
        {
            return Err(Error::InvalidStructure("concrete blocks do not match atoms".into()));
        }
        self.concrete = Some(concrete);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn atom_count(&self) -> usize {
        self.atom_names.len()
    }

    pub fn atom_names(&self) -> &[String] {
        &self.atom_names
    }

    pub fn atom_name(&self, i: usize) -> &str {
        &self.atom_names[i]
    }

    pub fn find_atom(&self, name: &str) -> Option<usize> {
        self.atom_names.iter().position(|a| a == name)
    }

    pub fn converse_of(&self, atom: usize) -> usize {
        self.converse[atom]
    }

    pub fn identity_mask(&self) -> u64 {
        self.identity
    }

    pub fn full_mask(&self) -> u64 {
        full_mask(self.atom_count())
    }

    pub fn concrete(&self) -> Option<&ConcreteBlocks> {
        self.concrete.as_ref()
    }

    /// Atoms below `x;y`.
    pub fn compose_atoms(&self, x: usize, y: usize) -> u64 {
        self.table[x * self.atom_count() + y]
    }

    pub fn compose_bits(&self, a: u64, b: u64) -> u64 {
        let mut acc = 0;
        for x in bits(a) {
            for y in bits(b) {
                acc |= self.compose_atoms(x, y);
            }
        }
        acc
    }

    pub fn converse_bits(&self, a: u64) -> u64 {
        bits(a).fold(0, |acc, x| acc | 1 << self.converse[x])
    }

    pub fn element(self: &Arc<Self>, atoms: u64) -> RaElement {
        RaElement {
            algebra: Arc::clone(self),
            atoms: atoms & self.full_mask(),
        }
    }

    pub fn atom(self: &Arc<Self>, i: usize) -> RaElement {
        self.element(1 << i)
    }

    pub fn element_by_names(self: &Arc<Self>, names: &[&str]) -> Result<RaElement> {
        let mut bitsv = 0;
        for n in names {
            let i = self
                .find_atom(n)
                .ok_or_else(|| Error::UnknownElement((*n).to_string()))?;
            bitsv |= 1 << i;
        }
        Ok(self.element(bitsv))
    }

    /// All `2^n` elements in bitset order.
    pub fn elements(self: &Arc<Self>) -> Vec<RaElement> {
        (0..1u64 << self.atom_count()).map(|b| self.element(b)).collect()
    }

    /// Renders a bitset as atom names joined by `+`, or `0` when empty.
    pub fn format_bits(&self, a: u64) -> String {
        if a == 0 {
            return "0".into();
        }
        bits(a)
            .map(|i| self.atom_names[i].as_str())
            .collect::<Vec<_>>()
            .join("+")
    }

    pub fn parse_bits(&self, text: &str) -> Result<u64> {
        let t = text.trim();
        if t == "0" {
            return Ok(0);
        }
        let mut acc = 0;
        for part in t.split('+') {
            let part = part.trim();
            let i = self
                .find_atom(part)
                .ok_or_else(|| Error::UnknownElement(part.to_string()))?;
            acc |= 1 << i;
        }
        Ok(acc)
    }

    /// Block-sum embedding of an element into its concrete model.
    pub fn embed(&self, a: u64) -> Option<ConcreteRelation> {
        let c = self.concrete.as_ref()?;
        Some(
            bits(a).fold(ConcreteRelation::empty(c.base), |acc, i| {
                acc.raw_union(&c.blocks[i])
            }),
        )
    }

    /// The structure with a different converse map; used to build
    /// deliberately broken tables.
    pub fn with_converse(&self, converse: Vec<usize>) -> Result<Self> {
        let mut s = AtomStructure::new(
            self.name.clone(),
            self.atom_names.clone(),
            converse,
            self.identity,
            self.table.clone(),
        )?;
        s.concrete = None;
        Ok(s)
    }

    /// The structure with one table entry replaced.
    pub fn with_entry(&self, x: usize, y: usize, value: u64) -> Self {
        let mut s = self.clone();
        let n = s.atom_count();
        s.table[x * n + y] = value & s.full_mask();
        s.concrete = None;
        s
    }

    /// Serializes into the text algebra file format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("algebra {}\n", self.name));
        out.push_str(&format!("atoms: {}\n", self.atom_names.join(" ")));
        let conv: Vec<String> = (0..self.atom_count())
            .map(|i| format!("{}={}", self.atom_names[i], self.atom_names[self.converse[i]]))
            .collect();
        out.push_str(&format!("converse: {}\n", conv.join(" ")));
        let ids: Vec<&str> = bits(self.identity).map(|i| self.atom_names[i].as_str()).collect();
        out.push_str(&format!("identity: {}\n", ids.join(" ")));
        out.push_str("table:\n");
        for x in 0..self.atom_count() {
            for y in 0..self.atom_count() {
                let entry: Vec<&str> = bits(self.compose_atoms(x, y))
                    .map(|i| self.atom_names[i].as_str())
                    .collect();
                out.push_str(&format!(
                    "  {};{} = {{{}}}\n",
                    self.atom_names[x],
                    self.atom_names[y],
                    entry.join(",")
                ));
            }
        }
        if let Some(c) = &self.concrete {
            out.push_str(&format!("blocks: {}\n", c.base));
            for (i, b) in c.blocks.iter().enumerate() {
                let pairs: Vec<String> = b.pairs().map(|(x, y)| format!("({x},{y})")).collect();
                out.push_str(&format!("  {} = {}\n", self.atom_names[i], pairs.join(" ")));
            }
        }
        out.push_str("end\n");
        out
    }

    /// Parses the text algebra file format written by [`Self::to_text`].
    pub fn from_text(text: &str) -> Result<Self> {
        let perr = |line: usize, msg: &str| Error::Parse(format!("line {}: {msg}", line + 1));
        let lines: Vec<&str> = text.lines().collect();
        let mut idx = 0;
        let mut next = |expect: &str| -> Result<(usize, &str)> {
            while idx < lines.len() && lines[idx].trim().is_empty() {
                idx += 1;
            }
            let i = idx;
            let line = lines.get(i).ok_or_else(|| perr(i, &format!("expected {expect}")))?;
            idx += 1;
            Ok((i, line))
        };

        let (ln, line) = next("algebra header")?;
        let name = line
            .strip_prefix("algebra ")
            .ok_or_else(|| perr(ln, "expected 'algebra <name>'"))?
            .trim()
            .to_string();
        let (ln, line) = next("atoms")?;
        let atom_names: Vec<String> = line
            .strip_prefix("atoms:")
            .ok_or_else(|| perr(ln, "expected 'atoms:'"))?
            .split_whitespace()
            .map(String::from)
            .collect();
        let n = atom_names.len();
        let find = |ln: usize, a: &str| -> Result<usize> {
            atom_names
                .iter()
                .position(|x| x == a)
                .ok_or_else(|| perr(ln, &format!("unknown atom '{a}'")))
        };
        let (ln, line) = next("converse")?;
        let mut converse = vec![usize::MAX; n];
        for item in line
            .strip_prefix("converse:")
            .ok_or_else(|| perr(ln, "expected 'converse:'"))?
            .split_whitespace()
        {
            let (a, b) = item.split_once('=').ok_or_else(|| perr(ln, "expected x=y"))?;
            converse[find(ln, a)?] = find(ln, b)?;
        }
        if converse.contains(&usize::MAX) {
            return Err(perr(ln, "converse map incomplete"));
        }
        let (ln, line) = next("identity")?;
        let mut identity = 0u64;
        for a in line
            .strip_prefix("identity:")
            .ok_or_else(|| perr(ln, "expected 'identity:'"))?
            .split_whitespace()
        {
            identity |= 1 << find(ln, a)?;
        }
        let (ln, line) = next("table")?;
        if line.trim() != "table:" {
            return Err(perr(ln, "expected 'table:'"));
        }
        let mut table = vec![0u64; n * n];
        let mut seen = vec![false; n * n];
        let mut concrete = None;
        loop {
            let (ln, line) = next("table entry or end")?;
            let t = line.trim();
            if t == "end" {
                break;
            }
            if let Some(base) = t.strip_prefix("blocks:") {
                let base: usize = base
                    .trim()
                    .parse()
                    .map_err(|_| perr(ln, "bad block base size"))?;
                if !(1..=MAX_BASE).contains(&base) {
                    return Err(perr(ln, "block base size out of range"));
                }
                let mut blocks = vec![None; n];
                loop {
                    let (ln, line) = next("block or end")?;
                    let t = line.trim();
                    if t == "end" {
                        break;
                    }
                    let (a, rest) = t.split_once('=').ok_or_else(|| perr(ln, "expected atom = pairs"))?;
                    let mut pairs = Vec::new();
                    for p in rest.split_whitespace() {
                        let inner = p
                            .strip_prefix('(')
                            .and_then(|p| p.strip_suffix(')'))
                            .ok_or_else(|| perr(ln, "expected (x,y)"))?;
                        let (x, y) = inner.split_once(',').ok_or_else(|| perr(ln, "expected (x,y)"))?;
                        let x: usize = x.parse().map_err(|_| perr(ln, "bad pair"))?;
                        let y: usize = y.parse().map_err(|_| perr(ln, "bad pair"))?;
                        pairs.push((x, y));
                    }
                    blocks[find(ln, a.trim())?] = Some(ConcreteRelation::from_pairs(base, pairs)?);
                }
                let blocks = blocks
                    .into_iter()
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| Error::Parse("missing concrete block".into()))?;
                concrete = Some(ConcreteBlocks { base, blocks });
                break;
            }
            let (lhs, rhs) = t.split_once('=').ok_or_else(|| perr(ln, "expected x;y = {..}"))?;
            let (x, y) = lhs.trim().split_once(';').ok_or_else(|| perr(ln, "expected x;y"))?;
            let (x, y) = (find(ln, x.trim())?, find(ln, y.trim())?);
            let set = rhs
                .trim()
                .strip_prefix('{')
                .and_then(|s| s.strip_suffix('}'))
                .ok_or_else(|| perr(ln, "expected {..}"))?;
            let mut entry = 0u64;
            for a in set.split(',').map(str::trim).filter(|a| !a.is_empty()) {
                entry |= 1 << find(ln, a)?;
            }
            table[x * n + y] = entry;
            seen[x * n + y] = true;
        }
        if seen.contains(&false) {
            return Err(Error::Parse("table incomplete".into()));
        }
        let s = AtomStructure::new(name, atom_names, converse, identity, table)?;
        match concrete {
            Some(c) => s.with_concrete(c),
            None => Ok(s),
        }
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterates the set bits of `mask`, ascending.
pub fn bits(mask: u64) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// An element of a finite atomic relation algebra: a set of atoms.
#[derive(Clone)]
pub struct RaElement {
    algebra: Arc<AtomStructure>,
    atoms: u64,
}

impl RaElement {
    pub fn algebra(&self) -> &Arc<AtomStructure> {
        &self.algebra
    }

    pub fn atoms(&self) -> u64 {
        self.atoms
    }

    /// The concrete relation this element denotes, if the structure has blocks.
    pub fn embed(&self) -> Option<ConcreteRelation> {
        self.algebra.embed(self.atoms)
    }
}

impl PartialEq for RaElement {
    fn eq(&self, other: &Self) -> bool {
        self.atoms == other.atoms && self.compatible(other)
    }
}

impl Eq for RaElement {}

impl fmt::Debug for RaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.algebra.name, self.algebra.format_bits(self.atoms))
    }
}

impl fmt::Display for RaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.algebra.format_bits(self.atoms))
    }
}

impl Relation for RaElement {
    fn compatible(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) || *self.algebra == *other.algebra
    }

    fn raw_union(&self, other: &Self) -> Self {
        self.algebra.element(self.atoms | other.atoms)
    }

    fn raw_intersect(&self, other: &Self) -> Self {
        self.algebra.element(self.atoms & other.atoms)
    }

    fn raw_compose(&self, other: &Self) -> Self {
        self.algebra
            .element(self.algebra.compose_bits(self.atoms, other.atoms))
    }

    fn raw_subset(&self, other: &Self) -> bool {
        self.atoms & !other.atoms == 0
    }

    fn complement(&self) -> Self {
        self.algebra.element(!self.atoms)
    }

    fn converse(&self) -> Self {
        self.algebra.element(self.algebra.converse_bits(self.atoms))
    }

    fn identity(&self) -> Self {
        self.algebra.element(self.algebra.identity)
    }
}

/// One audited law of [`validate_algebra`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub passed: bool,
    pub skipped: bool,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub algebra: String,
    pub checks: Vec<AxiomCheck>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || c.skipped)
    }

    pub fn check(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "algebra {}", self.algebra)?;
        for c in &self.checks {
            let status = if c.skipped {
                "SKIP"
            } else if c.passed {
                "PASS"
            } else {
                "FAIL"
            };
            match &c.witness {
                Some(w) => writeln!(f, "  {status} {} (witness {w})", c.name)?,
                None => writeln!(f, "  {status} {}", c.name)?,
            }
        }
        Ok(())
    }
}

/// Audits the relation-algebra laws on an atom structure. Failures are
/// reported with the first offending atoms; associativity enumerates atom
/// triples and is skipped above [`ASSOCIATIVITY_GUARD`] atoms.
pub fn validate_algebra(s: &AtomStructure) -> ValidationReport {
    let n = s.atom_count();
    let name = |i: usize| s.atom_name(i).to_string();
    let mut checks = Vec::new();
    let mut push = |name: &'static str, witness: Option<String>| {
        checks.push(AxiomCheck {
            name,
            passed: witness.is_none(),
            skipped: false,
            witness,
        })
    };

    let w = (0..n)
        .find(|&x| s.converse_of(s.converse_of(x)) != x)
        .map(name);
    push("converse-involution", w);

    let id = s.identity_mask();
    let w = (s.converse_bits(id) != id).then(|| s.format_bits(id));
    push("converse-identity", w);

    let w = (0..n)
        .find(|&x| s.compose_bits(1 << x, id) != 1 << x || s.compose_bits(id, 1 << x) != 1 << x)
        .map(name);
    push("identity-law", w);

    let mut w = None;
    'outer: for x in 0..n {
        for y in 0..n {
            let lhs = s.converse_bits(s.compose_atoms(x, y));
            let rhs = s.compose_atoms(s.converse_of(y), s.converse_of(x));
            if lhs != rhs {
                w = Some(format!("({},{})", name(x), name(y)));
                break 'outer;
            }
        }
    }
    push("r6-converse-of-product", w);

    let mut w = None;
    'outer: for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let a = s.compose_atoms(x, y) >> z & 1;
                let b = s.compose_atoms(s.converse_of(x), z) >> y & 1;
                let c = s.compose_atoms(z, s.converse_of(y)) >> x & 1;
                if a != b || a != c {
                    w = Some(format!("({},{},{})", name(x), name(y), name(z)));
                    break 'outer;
                }
            }
        }
    }
    push("peircean-triangle", w);

    let mut w = None;
    'outer: for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let lhs = s.compose_bits(1 << x, (1 << y) | (1 << z));
                let rhs = s.compose_atoms(x, y) | s.compose_atoms(x, z);
                if lhs != rhs {
                    w = Some(format!("({},{},{})", name(x), name(y), name(z)));
                    break 'outer;
                }
            }
        }
    }
    push("distributivity", w);

    if n > ASSOCIATIVITY_GUARD {
        checks.push(AxiomCheck {
            name: "associativity",
            passed: false,
            skipped: true,
            witness: Some(format!("{n} atoms exceed guard {ASSOCIATIVITY_GUARD}")),
        });
    } else {
        let mut w = None;
        'outer: for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let lhs = s.compose_bits(s.compose_atoms(x, y), 1 << z);
                    let rhs = s.compose_bits(1 << x, s.compose_atoms(y, z));
                    if lhs != rhs {
                        w = Some(format!("({},{},{})", name(x), name(y), name(z)));
                        break 'outer;
                    }
                }
            }
        }
        checks.push(AxiomCheck {
            name: "associativity",
            passed: w.is_none(),
            skipped: false,
            witness: w,
        });
    }

    ValidationReport {
        algebra: s.name().to_string(),
        checks,
    }
}

/// Builds the atom structure whose atoms are the given partition blocks of
/// `base²`, reading the table off concrete block compositions.
pub fn algebra_from_partition(
    name: impl Into<String>,
    base: usize,
    blocks: &[(String, ConcreteRelation)],
) -> Result<AtomStructure> {
    let n = blocks.len();
    if n == 0 || n > MAX_ATOMS {
        return Err(Error::NotAPartition(format!("{n} blocks")));
    }
    if let Some((b, _)) = blocks.iter().find(|(_, r)| r.base() != base) {
        return Err(Error::NotAPartition(format!("block {b} has the wrong base")));
    }
    let mut covered = ConcreteRelation::empty(base);
    for (bname, r) in blocks {
        if r.is_empty() {
            return Err(Error::NotAPartition(format!("block {bname} is empty")));
        }
        if !covered.raw_intersect(r).is_empty() {
            return Err(Error::NotAPartition(format!("block {bname} overlaps an earlier block")));
        }
        covered = covered.raw_union(r);
    }
    if covered != ConcreteRelation::full(base) {
        return Err(Error::NotAPartition("blocks do not cover the square".into()));
    }

    // decompose a relation as a union of blocks, if it is one
    let decompose = |r: &ConcreteRelation| -> Option<u64> {
        let mut mask = 0u64;
        let mut acc = ConcreteRelation::empty(base);
        for (i, (_, b)) in blocks.iter().enumerate() {
            let meet = r.raw_intersect(b);
            if meet == *b {
                mask |= 1 << i;
                acc = acc.raw_union(b);
            } else if !meet.is_empty() {
                return None;
            }
        }
        (acc == *r).then_some(mask)
    };

    let mut converse = Vec::with_capacity(n);
    for (bname, b) in blocks {
        let c = b.converse();
        let j = blocks
            .iter()
            .position(|(_, other)| *other == c)
            .ok_or_else(|| Error::NotConverseClosed(bname.clone()))?;
        converse.push(j);
    }
    let identity = decompose(&ConcreteRelation::identity_on(base)).ok_or(Error::IdentityNotBlockUnion)?;
    let mut table = vec![0u64; n * n];
    for (x, (xn, xb)) in blocks.iter().enumerate() {
        for (y, (yn, yb)) in blocks.iter().enumerate() {
            table[x * n + y] = decompose(&xb.raw_compose(yb))
                .ok_or_else(|| Error::CompositionNotBlockUnion(xn.clone(), yn.clone()))?;
        }
    }
    let names = blocks.iter().map(|(b, _)| b.clone()).collect();
    AtomStructure::new(name, names, converse, identity, table)?.with_concrete(ConcreteBlocks {
        base,
        blocks: blocks.iter().map(|(_, r)| r.clone()).collect(),
    })
}

/// Maps element labels to bitsets and back; used by the named models.
#[derive(Debug, Clone, Default)]
pub struct Labels {
    by_bits: BTreeMap<u64, String>,
}

impl Labels {
    pub fn new<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (u64, S)>,
        S: Into<String>,
    {
        Labels {
            by_bits: pairs.into_iter().map(|(b, s)| (b, s.into())).collect(),
        }
    }

    pub fn label(&self, s: &AtomStructure, a: u64) -> String {
        self.by_bits
            .get(&a)
            .cloned()
            .unwrap_or_else(|| s.format_bits(a))
    }

    pub fn parse(&self, s: &AtomStructure, text: &str) -> Result<u64> {
        let t = text.trim();
        if let Some((&b, _)) = self.by_bits.iter().find(|(_, l)| l.as_str() == t) {
            return Ok(b);
        }
        s.parse_bits(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order_rel(base: usize, f: impl Fn(usize, usize) -> bool) -> ConcreteRelation {
        ConcreteRelation::from_fn(base, f)
    }

    #[test]
    fn order_relations_intersect_to_identity() {
        let le = order_rel(3, |x, y| x <= y);
        let ge = order_rel(3, |x, y| x >= y);
        assert_eq!(le.intersect(&ge).unwrap(), ConcreteRelation::identity_on(3));
        assert_eq!(ConcreteRelation::empty(3).complement(), ConcreteRelation::full(3));
    }

    #[test]
    fn mixed_bases_rejected() {
        let a = ConcreteRelation::full(2);
        let b = ConcreteRelation::full(3);
        assert_eq!(a.compose(&b), Err(Error::MixedOperands));
        assert_eq!(a.residual(&b), Err(Error::MixedOperands));
    }

    #[test]
    fn residual_top_absorbs() {
        let a = order_rel(4, |x, y| x < y);
        let top = ConcreteRelation::full(4);
        assert_eq!(a.residual(&top).unwrap(), top);
        assert_eq!(ConcreteRelation::identity_on(4).converse(), ConcreteRelation::identity_on(4));
    }

    #[test]
    fn two_atom_partition() {
        let blocks = vec![
            ("Id".to_string(), ConcreteRelation::identity_on(3)),
            ("Di".to_string(), ConcreteRelation::diversity_on(3)),
        ];
        let s = Arc::new(algebra_from_partition("two", 3, &blocks).unwrap());
        let di = s.atom(1);
        let direct = ConcreteRelation::diversity_on(3).raw_compose(&ConcreteRelation::diversity_on(3));
        assert_eq!(direct, ConcreteRelation::full(3));
        assert_eq!(di.compose(&di).unwrap(), s.element(0b11));
        assert!(validate_algebra(&s).all_passed());
    }

    #[test]
    fn partition_errors() {
        let id = ConcreteRelation::identity_on(3);
        let lt = ConcreteRelation::from_fn(3, |x, y| x < y);
        let gt = ConcreteRelation::from_fn(3, |x, y| x > y);
        let r = algebra_from_partition("x", 3, &[("Id".into(), id.clone()), ("lt".into(), lt.clone())]);
        assert!(matches!(r, Err(Error::NotAPartition(_))));
        let mut ge = gt.clone();
        ge = ge.raw_union(&id);
        let r = algebra_from_partition(
            "x",
            3,
            &[("Id".into(), id.clone()), ("lt".into(), lt.clone()), ("ge".into(), ge)],
        );
        assert!(matches!(r, Err(Error::NotAPartition(_))));
        // a finite chain is not closed: lt;lt is not a union of {Id, lt, gt}
        let r = algebra_from_partition(
            "x",
            3,
            &[("Id".into(), id.clone()), ("lt".into(), lt.clone()), ("gt".into(), gt.clone())],
        );
        assert!(matches!(r, Err(Error::CompositionNotBlockUnion(_, _))));
        let skew = ConcreteRelation::from_pairs(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let rest = ConcreteRelation::diversity_on(3).difference(&skew).unwrap();
        let r = algebra_from_partition("x", 3, &[("Id".into(), id), ("a".into(), skew), ("b".into(), rest)]);
        // skew's converse is rest, so this one is converse-closed
        assert!(r.is_ok());
        let r = algebra_from_partition(
            "x",
            3,
            &[
                ("Idlt".into(), ConcreteRelation::from_fn(3, |x, y| x <= y)),
                ("gt".into(), gt),
            ],
        );
        assert!(matches!(r, Err(Error::NotConverseClosed(_))));
    }

    #[test]
    fn text_format_round_trip() {
        let blocks = vec![
            ("Id".to_string(), ConcreteRelation::identity_on(2)),
            ("Di".to_string(), ConcreteRelation::diversity_on(2)),
        ];
        let s = algebra_from_partition("two", 2, &blocks).unwrap();
        let text = s.to_text();
        let back = AtomStructure::from_text(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn format_rejects_incomplete_table() {
        let text = "algebra t\natoms: e\nconverse: e=e\nidentity: e\ntable:\nend\n";
        assert!(AtomStructure::from_text(text).is_err());
    }
}
