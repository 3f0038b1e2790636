mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use soergel::bimodule::BottSamelson;
use soergel::momentgraph::MomentGraph;
use soergel::{Element, Error, MultiPoly};

fn graph(name: &str, bound: usize) -> MomentGraph {
    MomentGraph::new(Arc::new(BottSamelson::new(realization(name))), bound)
}

fn all_of(g: &MomentGraph, len: usize) -> BTreeSet<Element> {
    g.realization().system().elements_upto(len).into_iter().collect()
}

#[test]
fn edges_of_the_symmetric_group() {
    // Two permutations of S_3 differ by a transposition iff their parities differ.
    let g = graph("A2", 3);
    let all = all_of(&g, 3);
    assert_eq!(all.len(), 6);
    let edges = g.edges(&all);
    assert_eq!(edges.len(), 9);
    for (w, tw, _) in &edges {
        assert_ne!(w.len() % 2, tw.len() % 2);
    }
    // With bound 1 only simple reflections label edges.
    assert_eq!(graph("A2", 1).edges(&all).len(), 6);
}

#[test]
fn membership_examples() {
    let g = graph("A2", 3);
    let r = g.realization().clone();
    let sys = r.system().clone();
    let es: BTreeSet<Element> = [Element::identity(), sys.generator(0)].into_iter().collect();
    assert!(g.is_in_z(&g.diagonal_embed(r.delta(0), &es)).is_ok());
    let values = es.iter().cloned().zip([r.zero(), r.alpha(0).clone()]).collect();
    assert!(g.is_in_z(&g.from_values(values)).is_ok());
    let values = es.iter().cloned().zip([r.zero(), r.alpha(1).clone()]).collect();
    let witness = g.is_in_z(&g.from_values(values)).unwrap_err();
    assert_eq!(witness.reflection, sys.generator(0));
    let singleton: BTreeSet<Element> = [sys.generator(1)].into_iter().collect();
    assert!(g.is_in_z(&g.diagonal_embed(&r.var(0), &singleton)).is_ok());
}

#[test]
fn diagonal_elements_lie_in_z() {
    let g = graph("B2", 4);
    let r = g.realization().clone();
    let all = all_of(&g, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let f = MultiPoly::random(&mut rng, r.nvars(), r.field(), 3, 4);
        let z = g.diagonal_embed(&f, &all);
        assert!(g.is_in_z(&z).is_ok());
        for w in &all {
            assert_eq!(z.value(w).unwrap(), &r.act(w, &f));
        }
    }
}

#[test]
fn split_examples() {
    let g = graph("A2", 3);
    let r = g.realization().clone();
    let all = all_of(&g, 3);
    let (x, y) = g.split_s(&g.diagonal_embed(&r.constant(5), &all), 1).unwrap();
    assert_eq!(x, g.diagonal_embed(&r.constant(5), &all));
    assert!(y.is_zero());
    let lower: BTreeSet<Element> = all.iter().filter(|w| w.len() < 3).cloned().collect();
    let z = g.diagonal_embed(&r.one(), &lower);
    assert!(matches!(g.split_s(&z, 0), Err(Error::NotStable(_))));
    let degenerate = graph("A1xA1-degenerate", 3);
    let all = all_of(&degenerate, 2);
    let z = degenerate.diagonal_embed(&degenerate.realization().one(), &all);
    assert!(matches!(degenerate.split_s(&z, 0), Err(Error::GkmViolation(..))));
}

#[test]
fn z_action_examples() {
    let g = graph("A2", 3);
    let r = g.realization().clone();
    let bs = BottSamelson::new(r.clone());
    let all = all_of(&g, 3);
    let ones = g.diagonal_embed(&r.one(), &all);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for word in [vec![], vec![0], vec![0, 1], vec![1, 0, 1]] {
        for m in bs.monomial_basis(&word) {
            assert_eq!(g.z_action(&ones, &m).unwrap(), m);
            let f = MultiPoly::random(&mut rng, r.nvars(), r.field(), 2, 3);
            let diag = g.diagonal_embed(&f, &all);
            assert_eq!(g.z_action(&diag, &m).unwrap(), bs.right_mul(&m, &f));
        }
    }
    let es: BTreeSet<Element> = [Element::identity()].into_iter().collect();
    let small = g.diagonal_embed(&r.one(), &es);
    assert!(matches!(g.z_action(&small, &bs.u_elt(&[0])), Err(Error::SupportOutsideI)));
}

#[test]
fn induction_for_small_words() {
    let g = graph("A2", 3);
    let all = all_of(&g, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let samples: Vec<_> = (0..4).map(|_| g.random_element(&mut rng, &all, 2)).collect();
    for word in [vec![], vec![1], vec![0, 1]] {
        assert!(g.induction_check(0, &word, &samples).unwrap(), "{word:?}");
    }
}

#[test]
fn json_roundtrip() {
    let g = graph("G2", 5);
    let all = all_of(&g, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let z = g.random_element(&mut rng, &all, 3);
    assert_eq!(g.from_json(&g.to_json(&z)).unwrap(), z);
    assert!(g.from_json(&serde_json::json!({"I": []})).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn split_is_a_unique_decomposition(seed in any::<u64>(), s in 0u8..2) {
        let g = graph("B2", 4);
        let r = g.realization().clone();
        let sys = r.system().clone();
        let all = all_of(&g, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = g.random_element(&mut rng, &all, 3);
        prop_assert!(g.is_in_z(&z).is_ok());
        let (x, y) = g.split_s(&z, s).unwrap();
        let deltas = g.from_values(all.iter().map(|w| (w.clone(), r.act(w, r.delta(s)))).collect());
        prop_assert_eq!(x.add(&deltas.mul(&y)), z.clone());
        for w in &all {
            let ws = sys.mul_gen(w, s);
            prop_assert_eq!(x.value(w), x.value(&ws));
            prop_assert_eq!(y.value(w), y.value(&ws));
        }
        prop_assert!(g.is_in_z(&x).is_ok() && g.is_in_z(&y).is_ok());
        let (x2, y2) = g.split_s(&x, s).unwrap();
        prop_assert_eq!(x2, x);
        prop_assert!(y2.is_zero());
        prop_assert!(g.is_in_z(&z.mul(&z)).is_ok());
    }
}
