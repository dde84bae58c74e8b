mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use relevance_ra::models;
use relevance_ra::ra_core::validate_algebra;
use relevance_ra::{ConcreteRelation, Relation};

const SEED: u64 = 0x5eed_2024;

fn triple() -> impl Strategy<Value = (ConcreteRelation, ConcreteRelation, ConcreteRelation)> {
    (2usize..=6, any::<u64>()).prop_map(|(base, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ SEED);
        (
            common::rand_relation(&mut rng, base),
            common::rand_relation(&mut rng, base),
            common::rand_relation(&mut rng, base),
        )
    })
}

/// `(x,y) ∈ A→B` iff every `z` with `(z,x) ∈ A` has `(z,y) ∈ B`.
fn residual_by_quantifier(a: &ConcreteRelation, b: &ConcreteRelation) -> ConcreteRelation {
    let n = a.base();
    ConcreteRelation::from_fn(n, |x, y| (0..n).all(|z| !a.contains(z, x) || b.contains(z, y)))
}

/// `(x,y) ∈ ~A` iff `(y,x) ∉ A`.
fn negation_by_quantifier(a: &ConcreteRelation) -> ConcreteRelation {
    ConcreteRelation::from_fn(a.base(), |x, y| !a.contains(y, x))
}

fn product_by_quantifier(a: &ConcreteRelation, b: &ConcreteRelation) -> ConcreteRelation {
    let n = a.base();
    ConcreteRelation::from_fn(n, |x, y| (0..n).any(|z| a.contains(x, z) && b.contains(z, y)))
}

proptest! {
    #[test]
    fn derived_ops_match_definitions((a, b, _) in triple()) {
        prop_assert_eq!(a.residual(&b).unwrap(), residual_by_quantifier(&a, &b));
        prop_assert_eq!(a.conv_complement(), negation_by_quantifier(&a));
        prop_assert_eq!(a.compose(&b).unwrap(), product_by_quantifier(&a, &b));
        let di = ConcreteRelation::diversity_on(a.base());
        let rel = residual_by_quantifier(&a.raw_intersect(&di), &b.raw_intersect(&di)).raw_intersect(&di);
        let direct = a.rel_residual(&b).unwrap();
        // relativized residual: Di ∩ -((Ă∩Di)|(-B∩Di))
        let expect = di.raw_intersect(
            &a.converse().raw_intersect(&di).raw_compose(&b.complement().raw_intersect(&di)).complement(),
        );
        prop_assert_eq!(&direct, &expect);
        prop_assert!(rel.raw_subset(&di));
    }

    #[test]
    fn lemma_inclusion((a, b, _) in triple()) {
        let id = a.identity();
        prop_assert_eq!(id.is_subset(&a.residual(&b).unwrap()).unwrap(), a.is_subset(&b).unwrap());
    }

    #[test]
    fn lemma_little((a, b, _) in triple()) {
        prop_assert!(a.raw_compose(&a.residual(&b).unwrap()).raw_subset(&b));
    }

    #[test]
    fn lemma_above((a, b, c) in triple()) {
        let lhs = a.residual(&b.residual(&c).unwrap()).unwrap();
        let rhs = b.raw_compose(&a).residual(&c).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn lemma_mono((a, b, c) in triple()) {
        let small = a.raw_intersect(&b);
        prop_assert!(b.residual(&c).unwrap().raw_subset(&small.residual(&c).unwrap()));
        prop_assert!(c.residual(&small).unwrap().raw_subset(&c.residual(&b).unwrap()));
    }

    #[test]
    fn fusion_identities((a, b, _) in triple()) {
        let f = a.residual(&b.conv_complement()).unwrap().conv_complement();
        prop_assert_eq!(f, b.raw_compose(&a));
        let g = a.rel_residual(&b.rel_conv_complement()).unwrap().rel_conv_complement();
        prop_assert_eq!(g, b.rel_compose(&a).unwrap());
    }

    #[test]
    fn designation_preserved((a, b, _) in triple()) {
        let id = a.identity();
        let ab = a.residual(&b).unwrap();
        if id.raw_subset(&a) && id.raw_subset(&ab) {
            prop_assert!(id.raw_subset(&b));
        }
        if id.raw_subset(&a) && id.raw_subset(&b) {
            prop_assert!(id.raw_subset(&a.raw_intersect(&b)));
        }
    }
}

#[test]
fn atom_tables_agree_with_embedding() {
    for named in [models::church_algebra(), models::rm84_algebra()] {
        let s = &named.structure;
        let els = named.elements();
        for x in &els {
            let ex = x.embed().unwrap();
            assert_eq!(x.converse().embed().unwrap(), ex.converse());
            for y in &els {
                let ey = y.embed().unwrap();
                assert_eq!(x.compose(y).unwrap().embed().unwrap(), ex.compose(&ey).unwrap(), "{} {x};{y}", s.name());
                assert_eq!(x.residual(y).unwrap().embed().unwrap(), ex.residual(&ey).unwrap());
            }
        }
        assert!(validate_algebra(s).all_passed());
    }
}

#[test]
fn rm84_direct_rules() {
    let named = models::rm84_algebra();
    let members = |e: &relevance_ra::RaElement| -> Vec<usize> {
        let r = e.embed().unwrap();
        (0..7).filter(|&d| r.contains(d, 0)).collect()
    };
    for x in named.elements() {
        let xs = members(&x);
        let neg: Vec<usize> = (0..7).filter(|v| !xs.contains(v)).map(|v| (7 - v) % 7).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        assert_eq!(members(&x.conv_complement()), neg);
        for y in named.elements() {
            let ys = members(&y);
            let sum: std::collections::BTreeSet<usize> = xs.iter().flat_map(|a| ys.iter().map(move |b| (a + b) % 7)).collect();
            assert_eq!(members(&x.compose(&y).unwrap()), sum.into_iter().collect::<Vec<_>>());
        }
    }
}

#[test]
fn church_symmetric_and_dense() {
    for x in models::church_algebra().elements() {
        let c = x.embed().unwrap();
        assert_eq!(c.converse(), c);
        assert!(c.raw_subset(&c.raw_compose(&c)));
    }
}
