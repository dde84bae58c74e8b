//! Named algebras and matrices: the Point algebra (Belnap's M₀), the
//! crystal lattice, Church's diamond with its 9-point model, RM84 over
//! ℤ₇, and the Sugihara chains that live inside M₀.

use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::intervals::IntervalSet;
use crate::logic::{Designation, Method, RelMatrix};
use crate::ra_core::{algebra_from_partition, AtomStructure, ConcreteRelation, Labels, RaElement};
use crate::sugihara::{finite_restrict, SymElement};

/// Carrier order of the M₀ matrix.
pub const M0_LABELS: [&str; 8] = ["empty", "<", ">", "=", "!=", "<=", ">=", "Q2"];

/// An atom structure together with display names for its elements.
#[derive(Debug, Clone)]
pub struct NamedAlgebra {
    pub structure: Arc<AtomStructure>,
    pub labels: Labels,
}

impl NamedAlgebra {
    pub fn parse(&self, text: &str) -> Result<RaElement> {
        Ok(self.structure.element(self.labels.parse(&self.structure, text)?))
    }

    pub fn label(&self, e: &RaElement) -> String {
        self.labels.label(&self.structure, e.atoms())
    }

    pub fn elements(&self) -> Vec<RaElement> {
        self.structure.elements()
    }
}

/// The 3-atom algebra of `𝔖_{0}`: atom `Id` is `=`, `L0` is `<`, `R0` is `>`.
pub fn point_algebra() -> NamedAlgebra {
    let s = finite_restrict(&IntervalSet::singleton(0)).expect("{0} is finite");
    let (id, lt, gt) = (1u64, 2u64, 4u64);
    let labels = Labels::new([
        (0, "empty"),
        (lt, "<"),
        (gt, ">"),
        (id, "="),
        (lt | gt, "!="),
        (lt | id, "<="),
        (gt | id, ">="),
        (lt | gt | id, "Q2"),
    ]);
    NamedAlgebra {
        structure: Arc::new(s),
        labels,
    }
}

fn matrix_from_labels(
    name: &str,
    alg: &NamedAlgebra,
    labels: &[&str],
    method: Method,
    designation: Designation,
) -> Result<RelMatrix<RaElement>> {
    let elems = labels.iter().map(|l| alg.parse(l)).collect::<Result<Vec<_>>>()?;
    RelMatrix::new(
        name,
        elems,
        labels.iter().map(|s| s.to_string()).collect(),
        method,
        designation,
    )
}

/// Belnap's M₀: all eight point relations, First Method, identity-containing
/// elements designated.
pub fn m0_matrix() -> RelMatrix<RaElement> {
    matrix_from_labels("M0", &point_algebra(), &M0_LABELS, Method::First, Designation::ContainsIdentity)
        .expect("M0 is closed")
}

/// The ten Sugihara chains residing in M₀, each with Definition-1 designation.
pub fn m0_chain_examples() -> Vec<RelMatrix<RaElement>> {
    let alg = point_algebra();
    let first: [&[&str]; 5] = [
        &["<", "<="],
        &[">", ">="],
        &["empty", "Q2"],
        &["empty", "<", "<=", "Q2"],
        &["empty", ">", ">=", "Q2"],
    ];
    let second: [&[&str]; 5] = [&["<"], &[">"], &["empty", "!="], &["empty", "<", "!="], &["empty", ">", "!="]];
    let mut out = Vec::new();
    for (method, group) in [(Method::First, first), (Method::Second, second)] {
        for labels in group {
            let name = format!("{{{}}}", labels.join(","));
            out.push(
                matrix_from_labels(&name, &alg, labels, method, Designation::SelfNegationBelow)
                    .expect("chain is closed"),
            );
        }
    }
    out
}

/// Index set of the crystal lattice.
pub fn crystal_index() -> IntervalSet {
    IntervalSet::from_values([0, 1])
}

pub const CRYSTAL_LABELS: [&str; 6] = ["empty", "L1", "L0L1", "R0L1", "L0R0L1", "Di"];

fn crystal_element(label: &str) -> SymElement {
    let i = crystal_index();
    match label {
        "empty" => SymElement::empty(&i),
        "Di" => SymElement::diversity_on(&i),
        "L1" => SymElement::parse(&i, "L1").unwrap(),
        "L0L1" => SymElement::parse(&i, "L0 + L1").unwrap(),
        "R0L1" => SymElement::parse(&i, "R0 + L1").unwrap(),
        "L0R0L1" => SymElement::parse(&i, "L0 + R0 + L1").unwrap(),
        other => unreachable!("no crystal element {other}"),
    }
}

/// The crystal lattice `Cr ⊆ 𝔖_{0,1}` under the Second Method; designated
/// elements are those with `~'X ⊆ X`.
pub fn crystal_lattice() -> RelMatrix<SymElement> {
    RelMatrix::new(
        "crystal",
        CRYSTAL_LABELS.iter().map(|l| crystal_element(l)).collect(),
        CRYSTAL_LABELS.iter().map(|s| s.to_string()).collect(),
        Method::Second,
        Designation::SelfNegationBelow,
    )
    .expect("crystal lattice is closed")
}

/// `𝔖_{0,1}` as a finite algebra; crystal labels name its elements.
pub fn crystal_algebra() -> NamedAlgebra {
    let i = crystal_index();
    let s = finite_restrict(&i).expect("{0,1} is finite");
    let labels = Labels::new(
        CRYSTAL_LABELS
            .iter()
            .map(|l| (crystal_element(l).to_bits().unwrap(), (*l).to_string())),
    );
    NamedAlgebra {
        structure: Arc::new(s),
        labels,
    }
}

/// Base size of the Church model.
pub const CHURCH_BASE: usize = 9;

/// Blocks `Id`, `A` (within `V_i = {3i, 3i+1, 3i+2}`), `B` (across blocks).
pub fn church_blocks() -> Vec<(String, ConcreteRelation)> {
    let block = |x: usize| x / 3;
    vec![
        ("Id".into(), ConcreteRelation::identity_on(CHURCH_BASE)),
        (
            "A".into(),
            ConcreteRelation::from_fn(CHURCH_BASE, |x, y| x != y && block(x) == block(y)),
        ),
        ("B".into(), ConcreteRelation::from_fn(CHURCH_BASE, |x, y| block(x) != block(y))),
    ]
}

/// Church's 3-atom algebra read off the 9-point partition.
pub fn church_algebra() -> NamedAlgebra {
    let s = algebra_from_partition("church", CHURCH_BASE, &church_blocks()).expect("Church partition is valid");
    let labels = Labels::new([(0, "empty"), (6, "AuB"), (7, "U2")]);
    NamedAlgebra {
        structure: Arc::new(s),
        labels,
    }
}

pub const CHURCH_DIAMOND_LABELS: [&str; 4] = ["AuB", "A", "B", "empty"];

/// Church's diamond `{A∪B, A, B, ∅}` under the Second Method with
/// `{A∪B, A}` designated.
pub fn church_diamond() -> RelMatrix<RaElement> {
    matrix_from_labels(
        "church-diamond",
        &church_algebra(),
        &CHURCH_DIAMOND_LABELS,
        Method::Second,
        Designation::Explicit(vec![0, 1]),
    )
    .expect("diamond is closed")
}

/// All eight Church elements under the First Method, identity-containing
/// elements designated.
pub fn church_matrix() -> RelMatrix<RaElement> {
    let alg = church_algebra();
    let elems = alg.elements();
    let labels = elems.iter().map(|e| alg.label(e)).collect();
    RelMatrix::new("church", elems, labels, Method::First, Designation::ContainsIdentity)
        .expect("full algebra is closed")
}

/// `ρ(X) = {(y, z) : y − z ∈ X (mod 7)}`.
pub fn rho(x: &[usize]) -> ConcreteRelation {
    ConcreteRelation::from_fn(7, |y, z| x.contains(&((y + 7 - z) % 7)))
}

/// The RM84 elements in the order of its residual table.
pub const RM84_SETS: [(&str, &[usize]); 8] = [
    ("empty", &[]),
    ("{3,5,6}", &[3, 5, 6]),
    ("{1,2,4}", &[1, 2, 4]),
    ("D", &[1, 2, 3, 4, 5, 6]),
    ("{0}", &[0]),
    ("{0,1,2,4}", &[0, 1, 2, 4]),
    ("{0,3,5,6}", &[0, 3, 5, 6]),
    ("U", &[0, 1, 2, 3, 4, 5, 6]),
];

/// The algebra `𝔖Rm` with atoms `ρ{0}`, `ρ{1,2,4}`, `ρ{3,5,6}`.
pub fn rm84_algebra() -> NamedAlgebra {
    let blocks = vec![
        ("r0".to_string(), rho(&[0])),
        ("r124".to_string(), rho(&[1, 2, 4])),
        ("r356".to_string(), rho(&[3, 5, 6])),
    ];
    let s = algebra_from_partition("rm84", 7, &blocks).expect("RM84 partition is valid");
    let bits_of = |set: &[usize]| -> u64 {
        let mut b = 0;
        if set.contains(&0) {
            b |= 1;
        }
        if set.contains(&1) {
            b |= 2;
        }
        if set.contains(&3) {
            b |= 4;
        }
        b
    };
    let labels = Labels::new(RM84_SETS.iter().map(|(l, set)| (bits_of(set), *l)));
    NamedAlgebra {
        structure: Arc::new(s),
        labels,
    }
}

/// RM84 under the First Method; elements whose index set contains 0 are
/// designated. The carrier is in atom-bit order (`empty`, `{0}`,
/// `{1,2,4}`, `{0,1,2,4}`, `{3,5,6}`, ...).
pub fn rm84_matrix() -> RelMatrix<RaElement> {
    let alg = rm84_algebra();
    let elems = alg.elements();
    let labels = elems.iter().map(|e| alg.label(e)).collect();
    RelMatrix::new("RM84", elems, labels, Method::First, Designation::ContainsIdentity).expect("RM84 is closed")
}

/// CLI and file selector for the named models.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelName {
    Point,
    Crystal,
    Church,
    Rm84,
}

impl FromStr for ModelName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "point" | "m0" => Ok(ModelName::Point),
            "crystal" => Ok(ModelName::Crystal),
            "church" => Ok(ModelName::Church),
            "rm84" => Ok(ModelName::Rm84),
            _ => Err(Error::Parse(format!("unknown model '{s}'"))),
        }
    }
}

impl ModelName {
    pub fn algebra(self) -> NamedAlgebra {
        match self {
            ModelName::Point => point_algebra(),
            ModelName::Crystal => crystal_algebra(),
            ModelName::Church => church_algebra(),
            ModelName::Rm84 => rm84_algebra(),
        }
    }

    /// The logic matrix conventionally attached to the model.
    pub fn matrix(self) -> crate::logic::Matrix {
        match self {
            ModelName::Point => m0_matrix().matrix,
            ModelName::Crystal => crystal_lattice().matrix,
            ModelName::Church => church_diamond().matrix,
            ModelName::Rm84 => rm84_matrix().matrix,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ra_core::Relation;

    #[test]
    fn point_products() {
        let p = point_algebra();
        let lt = p.parse("<").unwrap();
        let gt = p.parse(">").unwrap();
        assert_eq!(lt.compose(&lt).unwrap(), lt);
        assert_eq!(p.label(&lt.compose(&gt).unwrap()), "Q2");
        let le = p.parse("<=").unwrap();
        assert_eq!(p.label(&le.residual(&gt).unwrap()), "empty");
        assert_eq!(p.label(&lt.union(&p.parse("=").unwrap()).unwrap()), "<=");
    }

    #[test]
    fn church_products() {
        let c = church_algebra();
        let a = c.parse("A").unwrap();
        let b = c.parse("B").unwrap();
        assert_eq!(a.compose(&a).unwrap(), c.parse("Id+A").unwrap());
        assert_eq!(b.compose(&b).unwrap(), c.parse("U2").unwrap());
        assert_eq!(a.compose(&b).unwrap(), b);
        assert_eq!(a.rel_conv_complement(), b);
        let aub = c.parse("AuB").unwrap();
        assert!(aub.rel_residual(&a).unwrap().is_empty());
    }

    #[test]
    fn rm84_examples() {
        let r = rm84_algebra();
        let p = |s: &str| r.parse(s).unwrap();
        assert_eq!(p("{1,2,4}").compose(&p("{1,2,4}")).unwrap(), p("D"));
        assert_eq!(p("{3,5,6}").compose(&p("{1,2,4}")).unwrap(), p("U"));
        assert_eq!(p("{0}").residual(&p("{3,5,6}")).unwrap(), p("{3,5,6}"));
        assert_eq!(p("{1,2,4}").conv_complement(), p("{0,1,2,4}"));
        assert_eq!(p("{3,5,6}").conv_complement(), p("{0,3,5,6}"));
        assert_eq!(p("{1,2,4}").residual(&p("{1,2,4}")).unwrap(), p("{0}"));
    }

    #[test]
    fn crystal_examples() {
        let m = crystal_lattice();
        let x = m.matrix.find("L0L1").unwrap();
        assert_eq!(m.matrix.neg(x), x);
        let l1 = m.matrix.find("L1").unwrap();
        assert_eq!(m.matrix.label(m.matrix.neg(l1)), "L0R0L1");
        let e = m.matrix.find("empty").unwrap();
        assert_eq!(m.matrix.label(m.matrix.neg(e)), "Di");
        assert_eq!(m.matrix.designated().len(), 4);
    }

    #[test]
    fn chain_examples_are_sugihara() {
        let ex = m0_chain_examples();
        assert_eq!(ex.len(), 10);
        for m in &ex {
            assert!(m.matrix.is_sugihara_lattice(), "{}", m.matrix.name());
        }
        let three = &ex[8].matrix;
        let lt = three.find("<").unwrap();
        assert_eq!(three.neg(lt), lt);
        let two = &ex[2].matrix;
        let (e, t) = (two.find("empty").unwrap(), two.find("Q2").unwrap());
        assert_eq!(two.arrow(t, e), e);
    }

    #[test]
    fn model_names() {
        assert_eq!("m0".parse::<ModelName>().unwrap(), ModelName::Point);
        assert!("nope".parse::<ModelName>().is_err());
    }
}
