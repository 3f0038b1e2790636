mod common;

use std::collections::BTreeSet;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use soergel::morphism::{BSMorphism, HomSpaceBasis, Morphisms};
use soergel::{Element, Error, Gen, MultiPoly};

fn setup(name: &str) -> Morphisms {
    Morphisms::from_realization(realization(name))
}

fn assert_valid(mo: &Morphisms, phi: &BSMorphism) {
    assert!(mo.stalk_check(phi), "stalks");
    assert!(mo.right_linearity_check(phi), "right linearity");
    assert!(mo.degree_check(phi), "degree");
}

#[test]
fn category_examples() {
    let mo = setup("A2");
    let bs = mo.bimodules().clone();
    let id = mo.identity(&[0, 1]);
    assert_eq!(mo.apply(&id, &bs.u_elt(&[0, 1])).unwrap(), bs.u_elt(&[0, 1]));
    let m = mo.gen_m(0);
    assert_eq!(mo.compose(&mo.identity(&[]), &m).unwrap(), m);
    assert_eq!(mo.compose(&m, &mo.identity(&[0])).unwrap(), m);
    let phi = mo.tensor_hom(&mo.identity(&[0]), &m);
    assert_eq!(mo.apply(&phi, &bs.u_elt(&[0, 0])).unwrap(), bs.u_elt(&[0]));
}

#[test]
fn generator_values() {
    let mo = setup("B2");
    let bs = mo.bimodules().clone();
    let r = mo.realization().clone();
    let s = 1;
    let d = r.delta(s).clone();
    let t = |fs: &[MultiPoly]| bs.coords_of_tensor(&vec![s; fs.len() - 1], fs).unwrap();
    let one = r.one();
    let scalar = |f: MultiPoly| bs.from_coeffs(&[], vec![f]);
    let m = mo.gen_m(s);
    assert_eq!(mo.apply(&m, &t(&[one.clone(), one.clone()])).unwrap(), scalar(one.clone()));
    assert_eq!(mo.apply(&m, &t(&[one.clone(), d.clone()])).unwrap(), scalar(d.clone()));
    assert_eq!(mo.apply(&m, &t(&[d.clone(), d.clone()])).unwrap(), scalar(&d * &d));
    let i0 = mo.gen_i0(s);
    assert_eq!(mo.apply(&i0, &t(&[one.clone(), d.clone(), one.clone()])).unwrap(), bs.u_elt(&[s]));
    assert!(mo.apply(&i0, &t(&[one.clone(), one.clone(), one.clone()])).unwrap().is_zero());
    let d2 = &d * &d;
    let leibniz = r.demazure(s, &d2).unwrap();
    assert_eq!(
        mo.apply(&i0, &t(&[one.clone(), d2, one.clone()])).unwrap(),
        t(&[leibniz, one.clone()])
    );
    let i1 = mo.gen_i1(s);
    assert_eq!(mo.apply(&i1, &t(&[one.clone(), d.clone(), one.clone()])).unwrap(), scalar(one.clone()));
    assert!(mo.apply(&i1, &t(&[one.clone(), one.clone(), one.clone()])).unwrap().is_zero());
    assert_eq!(mo.apply(&i1, &t(&[d.clone(), d.clone(), d.clone()])).unwrap(), scalar(&d * &d));
}

#[test]
fn adjunction_examples() {
    let mo = setup("A2");
    let bs = mo.bimodules().clone();
    let r = mo.realization().clone();
    let psi = mo.adjoint(&mo.gen_m(0)).unwrap();
    let d = r.delta(0).clone();
    let expected = bs
        .coords_of_tensor(&[0], &[r.one(), d.clone()])
        .unwrap()
        .sub(&bs.coords_of_tensor(&[0], &[r.act_gen(0, &d), r.one()]).unwrap());
    assert_eq!(mo.apply(&psi, &bs.u_elt(&[])).unwrap(), expected);
    for phi in [mo.gen_m(0), mo.gen_i1(0), mo.gen_i0(0)] {
        let psi = mo.adjoint(&phi).unwrap();
        assert_valid(&mo, &psi);
        assert_eq!(mo.adjoint_inverse(&psi, 0).unwrap(), phi);
    }
}

#[test]
fn braid_examples() {
    let mo = setup("A1xA1");
    let bs = mo.bimodules().clone();
    let b = mo.braid_morphism(0, 1).unwrap();
    assert_eq!(mo.apply(&b, &bs.u_elt(&[0, 1])).unwrap(), bs.u_elt(&[1, 0]));
    let swap_ok = bs.monomial_basis(&[0, 1]).iter().all(|m| {
        let img = mo.apply(&b, m).unwrap();
        img.coords().len() == 4 && mo.apply(&mo.braid_morphism(1, 0).unwrap(), &img).unwrap() == *m
    });
    assert!(swap_ok);
    let mo = setup("A2");
    let b = mo.braid_morphism(0, 1).unwrap();
    assert_eq!(mo.apply(&b, &mo.bimodules().u_elt(&[0, 1, 0])).unwrap(), mo.bimodules().u_elt(&[1, 0, 1]));
    assert_valid(&mo, &b);
}

#[test]
fn braid_solver_reports_degenerate_realizations() {
    let mo = setup("A1xA1-degenerate");
    match mo.braid_morphism(0, 1) {
        Ok(b) => {
            let valid = mo.stalk_check(&b) && mo.right_linearity_check(&b);
            let u = mo.apply(&b, &mo.bimodules().u_elt(&[0, 1])).unwrap();
            assert!(!valid || u == mo.bimodules().u_elt(&[1, 0]));
        }
        Err(e) => assert!(matches!(e, Error::NoBraidMorphism(..))),
    }
}

#[test]
fn rex_morphism_examples() {
    let mo = setup("A2");
    assert!(mo.is_identity(&mo.rex_morphism(&[0, 1], &[0, 1]).unwrap()));
    assert_eq!(mo.rex_morphism(&[0, 1, 0], &[1, 0, 1]).unwrap(), *mo.braid_morphism(0, 1).unwrap());
    let sys = mo.system().clone();
    let bs = mo.bimodules().clone();
    for w in sys.elements_upto(3) {
        let rexes = sys.reduced_expressions(&w);
        for x in rexes.iter() {
            for y in rexes.iter() {
                let phi = mo.rex_morphism(x, y).unwrap();
                assert_eq!(mo.apply(&phi, &bs.u_elt(x)).unwrap(), bs.u_elt(y));
            }
        }
    }
}

#[test]
fn light_leaf_and_dual_examples() {
    let mo = setup("A2");
    let bs = mo.bimodules().clone();
    assert_eq!(*mo.light_leaf(&[0], 0).unwrap(), mo.gen_m(0));
    assert_eq!(mo.apply(&mo.light_leaf(&[0], 0).unwrap(), &bs.u_elt(&[0])).unwrap(), bs.u_elt(&[]));
    let id = mo.identity(&[0, 1]);
    assert_eq!(mo.dualize(&id).unwrap(), id);
    let dm = mo.dualize(&mo.gen_m(0)).unwrap();
    assert_eq!(mo.dualize(&dm).unwrap(), mo.gen_m(0));
    assert_valid(&mo, &dm);
    let img = mo.apply(&mo.dual_light_leaf(&[0], 0).unwrap(), &bs.u_elt(&[])).unwrap();
    let es: BTreeSet<Element> = [Element::identity(), mo.system().generator(0)].into_iter().collect();
    assert!(bs.support(&img).is_subset(&es));
}

#[test]
fn double_leaf_degree_examples() {
    let mo = setup("A2");
    assert_eq!(mo.double_leaf(&[0], &[0], 1, 1).unwrap().degree, 0);
    assert_eq!(mo.double_leaf(&[0], &[0], 0, 0).unwrap().degree, 2);
    assert!(matches!(mo.double_leaf(&[0], &[1], 1, 1), Err(Error::EndpointMismatch)));
}

#[test]
fn hom_space_examples() {
    let mo = setup("A2");
    let h = mo.hom_space(&[0], &[0], 2).unwrap();
    assert_eq!(from_lib(h.rank.poly()), laurent_add(&mono(0), &mono(-2)));
    assert_eq!((h.dim(0), h.dim(2)), (1, 3));
    let h = mo.hom_space(&[], &[], 2).unwrap();
    assert_eq!(from_lib(h.rank.poly()), mono(0));
    assert_eq!((h.dim(0), h.dim(2)), (1, 2));
    let h = mo.hom_space(&[], &[0], 1).unwrap();
    assert_eq!(from_lib(h.rank.poly()), mono(-1));
    assert_eq!((h.dim(-1), h.dim(0), h.dim(1)), (0, 0, 1));
    assert_eq!(HomSpaceBasis::expected_dim(&h.rank, 2, 3), 2);
}

#[test]
fn triangularity_examples() {
    let mo = setup("A2");
    let sys = mo.system().clone();
    let t = mo.triangularity_report(&[0, 0], &Element::identity()).unwrap();
    assert_eq!((t.values.len(), t.values[0].len()), (2, 2));
    assert_eq!(t.values[1][0], mo.bimodules().zero(&[]));
    let t = mo.triangularity_report(&[0], &sys.generator(0)).unwrap();
    assert_eq!(t.values, vec![vec![mo.bimodules().u_elt(&[0])]]);
    let t = mo.triangularity_report(&[0, 1, 0], &sys.generator(0)).unwrap();
    assert_eq!(t.values.len(), 2);
}

#[test]
fn filtration_element_examples() {
    let mo = setup("A2");
    let sys = mo.system().clone();
    let bs = mo.bimodules().clone();
    assert_eq!(mo.filtration_elements(&[0], &sys.generator(0)).unwrap().len(), 1);
    let elts = mo.filtration_elements(&[0, 0], &Element::identity()).unwrap();
    let mut degrees: Vec<i32> = elts.iter().map(|m| bs.degree(m).unwrap()).collect();
    degrees.sort();
    assert_eq!(degrees, vec![0, 2]);
    assert_eq!(mo.filtration_elements(&[], &Element::identity()).unwrap(), vec![bs.u_elt(&[])]);
}

#[test]
fn every_light_leaf_is_a_valid_morphism() {
    for name in ["A2", "B2"] {
        let mo = setup(name);
        for word in mo.system().words_upto(3) {
            for e in 0..1usize << word.len() {
                let ll = mo.light_leaf(&word, e).unwrap();
                assert_valid(&mo, &ll);
                let sub = mo.system().label_subsequence(&word, &soergel::coxeter::index_to_bits(e, word.len()));
                assert_eq!(ll.degree, sub.defect);
                assert_eq!(ll.target, sub.endpoint.word());
            }
        }
    }
}

#[test]
fn double_leaves_form_bases_in_b2() {
    let mo = setup("B2");
    let o = DihedralOracle::new(4);
    let n = mo.realization().nvars();
    let words = mo.system().words_upto(2);
    for x in &words {
        for y in &words {
            let rank = o.hom_rank(x, y);
            for (d, dim, _, span, count) in mo.double_leaf_basis_check(x, y, 4).unwrap() {
                let expected: usize = rank
                    .iter()
                    .filter(|(k, _)| d + **k >= 0 && (d + **k) % 2 == 0)
                    .map(|(k, c)| *c as usize * monomials(n, ((d + k) / 2) as usize))
                    .sum();
                assert_eq!((dim, span, count), (expected, expected, expected), "{x:?} {y:?} {d}");
            }
        }
    }
}

#[test]
fn projectivity() {
    let mo = setup("A2");
    let sys = mo.system().clone();
    for w in sys.elements_upto(3) {
        for word in sys.words_upto(3) {
            if mo.bimodules().data(&word).blocks.contains_key(&w) {
                assert!(mo.projectivity_check(&word, &w, 2).unwrap(), "{word:?} {w:?}");
            }
        }
    }
}

#[test]
fn json_roundtrip() {
    let mo = setup("A2");
    let ll = mo.light_leaf(&[0, 1, 0], 5).unwrap();
    assert_eq!(mo.from_json(&mo.to_json(&ll)).unwrap(), *ll);
}

fn random_morphism(mo: &Morphisms, rng: &mut ChaCha8Rng) -> BSMorphism {
    let s: Gen = rng.gen_range(0..2);
    let t = 1 - s;
    let gens = [
        mo.gen_m(s),
        mo.gen_i0(s),
        mo.gen_i1(s),
        mo.whisker(&[t], &mo.gen_m(s), &[]),
        mo.whisker(&[], &mo.gen_i0(s), &[t]),
    ];
    gens[rng.gen_range(0..gens.len())].clone()
}

use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn composition_and_module_structure(seed in any::<u64>()) {
        let mo = setup("A2");
        let bs = mo.bimodules().clone();
        let r = mo.realization().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = random_morphism(&mo, &mut rng);
        let psi = random_morphism(&mo, &mut rng);
        let both = mo.tensor_hom(&phi, &psi);
        prop_assert_eq!(both.degree, phi.degree + psi.degree);
        prop_assert!(mo.stalk_check(&both) && mo.right_linearity_check(&both));
        let chain = mo.compose(&mo.identity(&phi.target), &phi).unwrap();
        prop_assert_eq!(&chain, &phi);
        let f = MultiPoly::random(&mut rng, r.nvars(), r.field(), 2, 3);
        let g = MultiPoly::random(&mut rng, r.nvars(), r.field(), 2, 3);
        for m in bs.monomial_basis(&phi.source) {
            let lhs = mo.apply(&phi, &bs.right_mul(&m.left_mul(&f), &g)).unwrap();
            let rhs = bs.right_mul(&mo.apply(&phi, &m).unwrap().left_mul(&f), &g);
            prop_assert_eq!(lhs, rhs);
        }
        let whiskered = mo.whisker(&[0], &phi, &[1]);
        prop_assert_eq!(whiskered.degree, phi.degree);
        prop_assert!(mo.stalk_check(&whiskered));
        let dd = mo.dualize(&mo.dualize(&phi).unwrap()).unwrap();
        prop_assert_eq!(dd, phi);
    }
}
