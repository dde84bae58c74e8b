//! Export of a finite atom structure as a ternary relational model
//! structure: points are atoms, `C(x,y,z)` iff `z ⊆ x|y`, and `*` is
//! converse.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::ra_core::{bits, AtomStructure};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelStructure {
    pub name: String,
    pub points: Vec<String>,
    /// `star[p]` is the converse point of `p`.
    pub star: Vec<usize>,
    pub zero: Vec<usize>,
    pub triples: BTreeSet<(usize, usize, usize)>,
}

/// Builds the model structure of `s`. The unrelativized export uses every
/// atom and takes the identity atoms as zero points. The relativized one
/// keeps only diversity atoms and the caller names the zero point.
pub fn export_rms(s: &AtomStructure, relativized: bool, zero: Option<&str>) -> Result<ModelStructure> {
    let id = s.identity_mask();
    let atoms: Vec<usize> = (0..s.atom_count())
        .filter(|&a| !relativized || id >> a & 1 == 0)
        .collect();
    if atoms.is_empty() {
        return Err(Error::NoDiversityAtoms);
    }
    let pos = |a: usize| atoms.iter().position(|&b| b == a);
    let points = atoms.iter().map(|&a| s.atom_name(a).to_string()).collect();
    let star = atoms
        .iter()
        .map(|&a| pos(s.converse_of(a)).expect("converse of a diversity atom is diversity"))
        .collect();
    let zero = match (relativized, zero) {
        (_, Some(name)) => {
            let z = s
                .find_atom(name)
                .and_then(pos)
                .ok_or_else(|| Error::UnknownPoint(name.to_string()))?;
            vec![z]
        }
        (false, None) => bits(id).filter_map(pos).collect(),
        (true, None) => return Err(Error::ZeroRequired),
    };
    let mut triples = BTreeSet::new();
    for (i, &x) in atoms.iter().enumerate() {
        for (j, &y) in atoms.iter().enumerate() {
            let prod = s.compose_atoms(x, y);
            for (k, &z) in atoms.iter().enumerate() {
                if prod >> z & 1 == 1 {
                    triples.insert((i, j, k));
                }
            }
        }
    }
    Ok(ModelStructure {
        name: s.name().to_string(),
        points,
        star,
        zero,
        triples,
    })
}

impl ModelStructure {
    pub fn triple_count(&self) -> usize {
        self.triples.len()
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.points.iter().position(|p| p == name)
    }

    pub fn holds(&self, x: usize, y: usize, z: usize) -> bool {
        self.triples.contains(&(x, y, z))
    }

    /// Truth set of `A -> B` read off the ternary relation: a point `a`
    /// is in it iff no `y ∈ A`, `z ∉ B` have `C(y,a,z)`.
    pub fn arrow_set(&self, a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> BTreeSet<usize> {
        (0..self.points.len())
            .filter(|&p| !self.triples.iter().any(|&(y, q, z)| q == p && a.contains(&y) && !b.contains(&z)))
            .collect()
    }

    /// Points of a proposition, by atom names of `s` that are points here.
    pub fn points_of(&self, s: &AtomStructure, atoms: u64) -> BTreeSet<usize> {
        bits(atoms)
            .filter_map(|a| self.find(s.atom_name(a)))
            .collect()
    }

    /// Text form with points, star pairs, zero points and triples each
    /// sorted by point name.
    pub fn to_text(&self) -> String {
        let mut order: Vec<usize> = (0..self.points.len()).collect();
        order.sort_by(|&a, &b| self.points[a].cmp(&self.points[b]));
        let n = |p: usize| self.points[p].as_str();
        let mut out = format!("rms {}\npoints:\n", self.name);
        for &p in &order {
            let _ = writeln!(out, "  {}", n(p));
        }
        out.push_str("star:\n");
        for &p in &order {
            let _ = writeln!(out, "  {} {}", n(p), n(self.star[p]));
        }
        out.push_str("zero:\n");
        let mut zero: Vec<&str> = self.zero.iter().map(|&z| n(z)).collect();
        zero.sort();
        for z in zero {
            let _ = writeln!(out, "  {z}");
        }
        out.push_str("triples:\n");
        let mut ts: Vec<(&str, &str, &str)> = self.triples.iter().map(|&(x, y, z)| (n(x), n(y), n(z))).collect();
        ts.sort();
        for (x, y, z) in ts {
            let _ = writeln!(out, "  {x} {y} {z}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |m: String| Error::Parse(m);
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let name = lines
            .next()
            .and_then(|l| l.strip_prefix("rms "))
            .ok_or_else(|| bad("expected 'rms <name>'".into()))?
            .trim()
            .to_string();
        let mut section = "";
        let mut points: Vec<String> = Vec::new();
        let mut star_pairs = Vec::new();
        let mut zero_names = Vec::new();
        let mut triple_names = Vec::new();
        for line in lines {
            if let Some(sec) = line.strip_suffix(':') {
                section = match sec {
                    "points" | "star" | "zero" | "triples" => sec,
                    _ => return Err(bad(format!("unknown section '{sec}'"))),
                };
                continue;
            }
            let words: Vec<&str> = line.split_whitespace().collect();
            match (section, words.as_slice()) {
                ("points", [p]) => points.push(p.to_string()),
                ("star", [a, b]) => star_pairs.push((a.to_string(), b.to_string())),
                ("zero", [z]) => zero_names.push(z.to_string()),
                ("triples", [x, y, z]) => triple_names.push([x.to_string(), y.to_string(), z.to_string()]),
                _ => return Err(bad(format!("unexpected line '{line}'"))),
            }
        }
        let find = |p: &str| {
            points
                .iter()
                .position(|q| q == p)
                .ok_or_else(|| Error::UnknownPoint(p.to_string()))
        };
        let mut star = vec![usize::MAX; points.len()];
        for (a, b) in &star_pairs {
            star[find(a)?] = find(b)?;
        }
        if let Some(p) = star.iter().position(|&s| s == usize::MAX) {
            return Err(bad(format!("no star for point '{}'", points[p])));
        }
        let zero = zero_names.iter().map(|z| find(z)).collect::<Result<Vec<_>>>()?;
        let triples = triple_names
            .iter()
            .map(|[x, y, z]| Ok((find(x)?, find(y)?, find(z)?)))
            .collect::<Result<BTreeSet<_>>>()?;
        Ok(ModelStructure {
            name,
            points,
            star,
            zero,
            triples,
        })
    }
}
