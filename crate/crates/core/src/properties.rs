//! Relational properties behind the RM axioms: density, transitivity,
//! commutativity, K_RM membership and the axiom/property equivalences.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::logic::{axiom_suite, is_valid, RelMatrix, Suite, Verdict};
use crate::ra_core::{ConcreteRelation, Relation};

/// `a ⊆ a|a`
pub fn is_dense<E: Relation>(a: &E) -> bool {
    a.raw_subset(&a.raw_compose(a))
}

/// `a|a ⊆ a`
pub fn is_transitive<E: Relation>(a: &E) -> bool {
    a.raw_compose(a).raw_subset(a)
}

/// `a|b = b|a`
pub fn commute<E: Relation>(a: &E, b: &E) -> Result<bool> {
    Ok(a.compose(b)? == b.compose(a)?)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KrmReport {
    pub closure_failures: Vec<String>,
    pub not_dense: Vec<String>,
    pub not_transitive: Vec<String>,
    pub non_commuting: Vec<(String, String)>,
}

impl KrmReport {
    pub fn is_member(&self) -> bool {
        self.closure_failures.is_empty()
            && self.not_dense.is_empty()
            && self.not_transitive.is_empty()
            && self.non_commuting.is_empty()
    }
}

impl fmt::Display for KrmReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "K_RM member: {}", if self.is_member() { "yes" } else { "no" })?;
        for c in &self.closure_failures {
            writeln!(f, "  not closed: {c}")?;
        }
        for d in &self.not_dense {
            writeln!(f, "  not dense: {d}")?;
        }
        for t in &self.not_transitive {
            writeln!(f, "  not transitive: {t}")?;
        }
        for (a, b) in &self.non_commuting {
            writeln!(f, "  do not commute: {a}, {b}")?;
        }
        Ok(())
    }
}

/// Checks closure under `∪, ∩, →, ~, |`, density and transitivity of each
/// element, and pairwise commutativity. `labels[i]` names `elements[i]`.
pub fn krm_membership<E: Relation>(elements: &[E], labels: &[String]) -> Result<KrmReport> {
    for w in elements.windows(2) {
        w[0].ensure(&w[1])?;
    }
    let mut report = KrmReport::default();
    let inside = |e: &E| elements.contains(e);
    for (i, a) in elements.iter().enumerate() {
        if !inside(&a.conv_complement()) {
            report.closure_failures.push(format!("~{}", labels[i]));
        }
        if !is_dense(a) {
            report.not_dense.push(labels[i].clone());
        }
        if !is_transitive(a) {
            report.not_transitive.push(labels[i].clone());
        }
        for (j, b) in elements.iter().enumerate() {
            let ops: [(&str, E); 4] = [
                (" v ", a.raw_union(b)),
                (" & ", a.raw_intersect(b)),
                (" -> ", a.residual(b)?),
                (" | ", a.raw_compose(b)),
            ];
            for (op, r) in ops {
                if !inside(&r) {
                    report.closure_failures.push(format!("{}{op}{}", labels[i], labels[j]));
                }
            }
            if i < j && a.raw_compose(b) != b.raw_compose(a) {
                report.non_commuting.push((labels[i].clone(), labels[j].clone()));
            }
        }
    }
    Ok(report)
}

/// One checked implication or equivalence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ItemResult {
    pub name: &'static str,
    pub checked: u64,
    pub violations: u64,
    pub first_counterexample: Option<String>,
}

/// A recorded witness that a one-directional lemma has no converse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessResult {
    pub name: &'static str,
    pub hypothesis_holds: bool,
    pub conclusion_holds: bool,
    pub detail: String,
}

impl WitnessResult {
    /// The witness separates the two sides: conclusion holds, hypothesis fails.
    pub fn separates(&self) -> bool {
        self.conclusion_holds && !self.hypothesis_holds
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub base: usize,
    pub mode: String,
    pub items: Vec<ItemResult>,
    pub witnesses: Vec<WitnessResult>,
}

impl EquivalenceReport {
    pub fn all_hold(&self) -> bool {
        self.items.iter().all(|i| i.violations == 0) && self.witnesses.iter().all(WitnessResult::separates)
    }

    pub fn item(&self, name: &str) -> Option<&ItemResult> {
        self.items.iter().find(|i| i.name == name)
    }
}

impl fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "meanings base={} {}", self.base, self.mode)?;
        for i in &self.items {
            write!(f, "  {:<28} checked={} violations={}", i.name, i.checked, i.violations)?;
            if let Some(c) = &i.first_counterexample {
                write!(f, " first={c}")?;
            }
            writeln!(f)?;
        }
        for w in &self.witnesses {
            writeln!(
                f,
                "  witness {:<20} hypothesis={} conclusion={} {}",
                w.name, w.hypothesis_holds, w.conclusion_holds, w.detail
            )?;
        }
        Ok(())
    }
}

const ITEMS: [&str; 12] = [
    "R12 iff A|B <= B|A",
    "R14 iff transitive",
    "dense => R4",
    "R4 at B=~Id iff dense",
    "R2 hypothesis => R2",
    "R3 hypothesis => R3",
    "inc: Id <= A->B iff A <= B",
    "little: A|(A->B) <= B",
    "above: A->(B->C) = (B|A)->C",
    "mono",
    "fusion: ~(A->~B) = B|A",
    "rel fusion: ~'(A->'~'B) = B|'A",
];

struct Tally {
    items: Vec<ItemResult>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            items: ITEMS
                .iter()
                .map(|&name| ItemResult {
                    name,
                    checked: 0,
                    violations: 0,
                    first_counterexample: None,
                })
                .collect(),
        }
    }

    fn record(&mut self, k: usize, ok: bool, ctx: impl FnOnce() -> String) {
        let it = &mut self.items[k];
        it.checked += 1;
        if !ok {
            it.violations += 1;
            if it.first_counterexample.is_none() {
                it.first_counterexample = Some(ctx());
            }
        }
    }
}

fn check_triple(a: &ConcreteRelation, b: &ConcreteRelation, c: &ConcreteRelation, t: &mut Tally) {
    let ctx = || format!("A={a} B={b} C={c}");
    let r = |x: &ConcreteRelation, y: &ConcreteRelation| x.raw_residual(y);
    let id = a.identity();

    let lhs = r(a, &b.conv_complement()).raw_subset(&r(b, &a.conv_complement()));
    let rhs = a.raw_compose(b).raw_subset(&b.raw_compose(a));
    t.record(0, lhs == rhs, ctx);

    t.record(1, is_transitive(a) == a.raw_subset(&r(a, a)), ctx);

    let r4 = r(a, &r(a, b)).raw_subset(&r(a, b));
    t.record(2, !is_dense(a) || r4, ctx);

    let na = a.conv_complement();
    let r4_inst = r(a, &r(a, &id.conv_complement())).raw_subset(&r(a, &id.conv_complement()));
    let direct = r(a, &na).raw_subset(&na);
    t.record(3, r4_inst == is_dense(a) && direct == is_dense(a), ctx);

    let ab = r(a, b);
    let bc = r(b, c);
    let hyp = bc.raw_compose(&ab).raw_subset(&ab.raw_compose(&bc));
    let concl = ab.raw_subset(&r(&bc, &r(a, c)));
    t.record(4, !hyp || concl, ctx);

    let hyp = ab.raw_compose(a).raw_subset(&a.raw_compose(&ab));
    let concl = a.raw_subset(&r(&ab, b));
    t.record(5, !hyp || concl, ctx);

    t.record(6, id.raw_subset(&ab) == a.raw_subset(b), ctx);
    t.record(7, a.raw_compose(&ab).raw_subset(b), ctx);
    t.record(8, r(a, &bc) == r(&b.raw_compose(a), c), ctx);
    let mono = !a.raw_subset(b) || (r(b, c).raw_subset(&r(a, c)) && r(c, a).raw_subset(&r(c, b)));
    t.record(9, mono, ctx);
    t.record(10, r(a, &b.conv_complement()).conv_complement() == b.raw_compose(a), ctx);
    let rel = a
        .rel_residual(&b.rel_conv_complement())
        .expect("same base")
        .rel_conv_complement();
    t.record(11, rel == b.rel_compose(a).expect("same base"), ctx);
}

trait RawResidual {
    fn raw_residual(&self, other: &Self) -> Self;
}

impl RawResidual for ConcreteRelation {
    fn raw_residual(&self, other: &Self) -> Self {
        self.residual(other).expect("same base")
    }
}

fn witnesses(base: usize) -> Vec<WitnessResult> {
    let id = ConcreteRelation::identity_on(base);
    let top = ConcreteRelation::full(base);
    let point = ConcreteRelation::from_pairs(base, [(0, 0)]).expect("base >= 1");
    let r = |x: &ConcreteRelation, y: &ConcreteRelation| x.raw_residual(y);

    // R2 with C = U² and A→B = {(0,0)}
    let (a, b, c) = (&id, &point, &top);
    let ab = r(a, b);
    let bc = r(b, c);
    let r2 = WitnessResult {
        name: "R2 non-converse",
        hypothesis_holds: bc.raw_compose(&ab).raw_subset(&ab.raw_compose(&bc)),
        conclusion_holds: ab.raw_subset(&r(&bc, &r(a, c))),
        detail: format!("A={a} B={b} C=U2 A->B={ab}"),
    };

    // R3 with B = U² and A = {(0,0)}
    let (a, b) = (&point, &top);
    let ab = r(a, b);
    let r3 = WitnessResult {
        name: "R3 non-converse",
        hypothesis_holds: ab.raw_compose(a).raw_subset(&a.raw_compose(&ab)),
        conclusion_holds: a.raw_subset(&r(&ab, b)),
        detail: format!("A={a} B=U2"),
    };

    // a non-dense A fails the B = ~Id instance
    let arrow = ConcreteRelation::from_pairs(base, [(0, 1)]).expect("base >= 2");
    let na = arrow.conv_complement();
    let inst = r(&r(&arrow, &na), &na);
    let r4 = WitnessResult {
        name: "R4 non-dense",
        hypothesis_holds: is_dense(&arrow),
        conclusion_holds: !id.raw_subset(&inst),
        detail: format!("A={arrow} (A->~A)->~A designated: {}", id.raw_subset(&inst)),
    };
    vec![r2, r3, r4]
}

/// Every relation on a base of `base` points, in bit order.
pub fn all_relations(base: usize) -> Vec<ConcreteRelation> {
    let cells = base * base;
    assert!(cells <= 16, "exhaustive enumeration limited to base 4");
    (0..1u64 << cells)
        .map(|bitsv| ConcreteRelation::from_fn(base, |x, y| bitsv >> (x * base + y) & 1 == 1))
        .collect()
}

/// A relation with independent uniform bits.
pub fn random_relation<R: Rng>(base: usize, rng: &mut R) -> ConcreteRelation {
    let rows: Vec<u64> = (0..base).map(|_| rng.gen::<u64>()).collect();
    ConcreteRelation::from_rows(base, &rows)
}

/// Runs every item over all triples of relations on `base` points.
pub fn exhaustive_equivalences(base: usize) -> EquivalenceReport {
    let all = all_relations(base);
    let mut t = Tally::new();
    for a in &all {
        for b in &all {
            for c in &all {
                check_triple(a, b, c, &mut t);
            }
        }
    }
    EquivalenceReport {
        base,
        mode: "exhaustive".into(),
        items: t.items,
        witnesses: witnesses(base),
    }
}

/// Runs every item on `samples` random triples drawn from a ChaCha8
/// stream seeded with `seed`.
pub fn equivalence_checks(base: usize, samples: u64, seed: u64) -> EquivalenceReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::new();
    for _ in 0..samples {
        let a = random_relation(base, &mut rng);
        let b = random_relation(base, &mut rng);
        let c = random_relation(base, &mut rng);
        check_triple(&a, &b, &c, &mut t);
    }
    EquivalenceReport {
        base,
        mode: format!("samples={samples} seed={seed}"),
        items: t.items,
        witnesses: witnesses(base),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxiomClass {
    ValidUnconditionally,
    ValidHere,
    InvalidHere,
}

impl fmt::Display for AxiomClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AxiomClass::ValidUnconditionally => "valid-unconditionally",
            AxiomClass::ValidHere => "valid-here",
            AxiomClass::InvalidHere => "invalid-here",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomMeaning {
    pub label: String,
    pub class: AxiomClass,
    pub verdict: Verdict,
    /// Whether the verdict agrees with the carrier's relational properties.
    pub consistent: bool,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeaningsSummary {
    pub matrix: String,
    pub axioms: Vec<AxiomMeaning>,
}

impl MeaningsSummary {
    pub fn consistent(&self) -> bool {
        self.axioms.iter().all(|a| a.consistent)
    }

    pub fn get(&self, label: &str) -> Option<&AxiomMeaning> {
        self.axioms.iter().find(|a| a.label == label)
    }
}

impl fmt::Display for MeaningsSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "meanings for {}", self.matrix)?;
        for a in &self.axioms {
            writeln!(
                f,
                "  {:<4} {:<22} {}{}",
                a.label,
                a.class.to_string(),
                if a.consistent { "consistent" } else { "INCONSISTENT" },
                if a.note.is_empty() { String::new() } else { format!(" ({})", a.note) }
            )?;
        }
        Ok(())
    }
}

const UNCONDITIONAL: [&str; 9] = ["R1", "R5", "R6", "R7", "R8", "R9", "R10", "R11", "R13"];

/// Classifies (R1)–(R14) on a First-Method relational matrix and checks
/// each verdict against density, commutativity and transitivity of the
/// carrier.
pub fn theorem_meanings_summary<E: Relation>(m: &RelMatrix<E>) -> Result<MeaningsSummary> {
    let els = &m.elements;
    let all_dense = els.iter().all(is_dense);
    let all_trans = els.iter().all(is_transitive);
    let mut all_commute = true;
    for a in els {
        for b in els {
            all_commute &= a.raw_compose(b) == b.raw_compose(a);
        }
    }
    let has_di = els.first().is_some_and(|e| els.contains(&e.diversity()));
    let mut axioms = Vec::new();
    for (label, f) in axiom_suite(Suite::RM) {
        let verdict = is_valid(&f, &m.matrix, 1)?;
        let valid = verdict.is_valid();
        let (consistent, note) = match label.as_str() {
            l if UNCONDITIONAL.contains(&l) => (valid, String::new()),
            "R2" | "R3" => (!all_commute || valid, format!("commutative={all_commute}")),
            "R4" if has_di => (valid == all_dense, format!("dense={all_dense}")),
            "R4" => (
                !all_dense || valid,
                format!("dense={all_dense}; ~Id not in carrier, one direction only"),
            ),
            "R12" => (valid == all_commute, format!("commutative={all_commute}")),
            _ => (valid == all_trans, format!("transitive={all_trans}")),
        };
        let class = if UNCONDITIONAL.contains(&label.as_str()) {
            AxiomClass::ValidUnconditionally
        } else if valid {
            AxiomClass::ValidHere
        } else {
            AxiomClass::InvalidHere
        };
        axioms.push(AxiomMeaning {
            label,
            class,
            verdict,
            consistent,
            note,
        });
    }
    Ok(MeaningsSummary {
        matrix: m.matrix.name().to_string(),
        axioms,
    })
}
