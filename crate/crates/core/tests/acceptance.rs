//! The thirteen acceptance criteria, each printed as one pass/fail line.
//! Values are compared with exact equality against the oracles in `common`.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::*;
use soergel::hecke::Hecke;
use soergel::morphism::Morphisms;
use soergel::verify::{self, Bounds, Suite};
use soergel::{Element, Field, Gen, Realization};

type Outcome = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn oracle_for(real: &Realization) -> DihedralOracle {
    let sys = real.system();
    let m = if sys.rank() == 1 { 1 } else { sys.matrix().order(0, 1).unwrap() };
    DihedralOracle::new(m)
}

fn suite_passes(suite: Suite, real: Arc<Realization>, bounds: &Bounds) -> Outcome {
    let report = verify::run(suite, real, bounds);
    let failures: Vec<String> = report
        .failures()
        .map(|c| format!("{} ({})", c.name, c.detail))
        .collect();
    ensure(failures.is_empty() && !report.checks.is_empty(), || {
        format!("{suite}: {}", failures.join("; "))
    })
}

fn to_u8(word: &[Gen]) -> Vec<u8> {
    word.to_vec()
}

fn defect_on(real: &Arc<Realization>, max_len: usize) -> Outcome {
    let oracle = oracle_for(real);
    let hecke = Hecke::new(real.system().clone());
    for word in real.system().words_upto(max_len) {
        let expected = oracle.bott_samelson(&to_u8(&word));
        let counted = oracle.defect_sums(&to_u8(&word));
        ensure(expected == counted, || format!("oracle defect formula fails on {word:?}"))?;
        let lib_defect: BTreeMap<_, _> = hecke
            .defect_sums(&word)
            .iter()
            .map(|(w, p)| (oracle.from_element(w), from_lib(p)))
            .collect();
        let lib_p: BTreeMap<_, _> = hecke
            .p_polynomials(&word)
            .iter()
            .map(|(w, p)| (oracle.from_element(w), from_lib(p)))
            .collect();
        ensure(lib_defect == expected, || format!("defect sums differ on {word:?}"))?;
        ensure(lib_p == expected, || format!("p-polynomials differ on {word:?}"))?;
        for w in lib_p_keys(&hecke, &word) {
            ensure(hecke.defect_formula_check(&word, &w), || format!("defect check fails on {word:?}"))?;
        }
    }
    Ok(())
}

fn lib_p_keys(hecke: &Hecke, word: &[Gen]) -> Vec<Element> {
    hecke.p_polynomials(word).into_keys().collect()
}

fn sums_on(real: &Arc<Realization>, max_len: usize) -> Outcome {
    let oracle = oracle_for(real);
    let hecke = Hecke::new(real.system().clone());
    for word in real.system().words_upto(max_len) {
        let p = oracle.bott_samelson(&to_u8(&word));
        let mut total = Laurent::new();
        for (w, a) in &p {
            total = laurent_add(&total, &laurent_shift(&laurent_bar(a), w.len as i32));
        }
        let mut expected = mono(0);
        for _ in 0..word.len() {
            expected = laurent_mul(&expected, &laurent_add(&mono(1), &mono(-1)));
        }
        ensure(total == expected, || format!("oracle sum formula fails on {word:?}"))?;
        let rev: Vec<u8> = to_u8(&word).into_iter().rev().collect();
        let q = oracle.bott_samelson(&rev);
        let mirrored: BTreeMap<_, _> = p.iter().map(|(w, a)| (oracle.inverse(*w), a.clone())).collect();
        ensure(q == mirrored, || format!("oracle reversal fails on {word:?}"))?;
        ensure(hecke.sum_formula_check(&word), || format!("sum check fails on {word:?}"))?;
        ensure(hecke.reversal_check(&word), || format!("reversal check fails on {word:?}"))?;
    }
    Ok(())
}

const RANK_TWO: [&str; 4] = ["A1", "A2", "B2", "G2"];

fn c1() -> Outcome {
    for name in RANK_TWO {
        defect_on(&realization(name), 6).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(())
}

fn c2() -> Outcome {
    for name in RANK_TWO {
        sums_on(&realization(name), 6).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(())
}

fn c3() -> Outcome {
    for name in ["A2", "B2"] {
        let real = realization(name);
        let oracle = oracle_for(&real);
        let mo = Morphisms::from_realization(real.clone());
        for word in real.system().words_upto(3) {
            let ch = mo.bimodules().character(&word).map_err(|e| format!("{name} {word:?}: {e}"))?;
            let got: BTreeMap<_, _> = ch.terms().map(|(w, p)| (oracle.from_element(w), from_lib(p))).collect();
            ensure(got == oracle.bott_samelson(&word), || format!("{name} {word:?}: character differs"))?;
        }
    }
    Ok(())
}

fn c4() -> Outcome {
    suite_passes(Suite::Triangularity, realization("A1"), &Bounds { max_word_len: 4, ..Bounds::default() })?;
    suite_passes(Suite::Triangularity, realization("A2"), &Bounds { max_word_len: 3, ..Bounds::default() })?;
    let mo = Morphisms::from_realization(realization("A2"));
    let mut tables = 0;
    for word in mo.system().words_upto(3) {
        let ends: BTreeSet<Element> = mo.bimodules().data(&word).blocks.keys().cloned().collect();
        for w in ends {
            let t = mo.triangularity_report(&word, &w).map_err(|e| e.to_string())?;
            ensure(t.order.len() == mo.bimodules().data(&word).block(&w).len(), || "table is incomplete".into())?;
            tables += 1;
        }
    }
    ensure(tables > 0, || "no endpoints checked".into())
}

fn c5() -> Outcome {
    let real = realization("A2");
    let oracle = oracle_for(&real);
    let bs = Morphisms::from_realization(real.clone()).bimodules().clone();
    for word in real.system().words_upto(3) {
        let p = oracle.bott_samelson(&word);
        let ends: Vec<Element> = bs.data(&word).blocks.keys().cloned().collect();
        ensure(ends.len() == p.len(), || format!("{word:?}: support differs"))?;
        for w in ends {
            let rank = bs.stalk_basis_check(&word, &w).map_err(|e| format!("{word:?}: {e}"))?;
            let ow = oracle.from_element(&w);
            let expected = laurent_shift(&p[&ow], ow.len as i32);
            ensure(from_lib(rank.poly()) == expected, || format!("{word:?} at {w:?}: graded rank differs"))?;
        }
    }
    Ok(())
}

fn c6() -> Outcome {
    let real = realization("A2");
    let oracle = oracle_for(&real);
    let mo = Morphisms::from_realization(real.clone());
    for word in real.system().words_upto(3) {
        let p = oracle.bott_samelson(&word);
        let mut support: Vec<Element> = mo.bimodules().data(&word).blocks.keys().cloned().collect();
        support.sort_by_key(|w| w.len());
        let mut set = BTreeSet::new();
        for w in support {
            set.insert(w.clone());
            let rank = mo.section_basis_check(&word, &set, &w).map_err(|e| format!("{word:?} at {w:?}: {e}"))?;
            let ow = oracle.from_element(&w);
            let expected = laurent_shift(&laurent_bar(&p[&ow]), ow.len as i32);
            ensure(from_lib(rank.poly()) == expected, || format!("{word:?} at {w:?}: graded rank differs"))?;
        }
    }
    Ok(())
}

fn c7() -> Outcome {
    let mo = Morphisms::from_realization(realization("A2"));
    for word in [vec![0], vec![0, 1], vec![0, 1, 0]] {
        for w in mo.bimodules().data(&word).blocks.keys().cloned().collect::<Vec<_>>() {
            let ok = mo.alpha_product_check(&word, &w).map_err(|e| e.to_string())?;
            ensure(ok, || format!("{word:?} at {w:?}"))?;
        }
    }
    Ok(())
}

fn c8() -> Outcome {
    let real = realization("A2");
    let oracle = oracle_for(&real);
    let mo = Morphisms::from_realization(real.clone());
    let n = real.nvars();
    let words = real.system().words_upto(2);
    for x in &words {
        for y in &words {
            let rows = mo.double_leaf_basis_check(x, y, 4).map_err(|e| format!("{x:?} → {y:?}: {e}"))?;
            let rank = oracle.hom_rank(x, y);
            let lo = -((x.len() + y.len()) as i32);
            ensure(rows.first().map(|r| r.0) == Some(lo) && rows.last().map(|r| r.0) == Some(4), || {
                format!("{x:?} → {y:?}: degree range")
            })?;
            for (d, dim, _, span, count) in rows {
                let expected: usize = rank
                    .iter()
                    .filter(|(k, _)| (d + **k) >= 0 && (d + **k) % 2 == 0)
                    .map(|(k, c)| *c as usize * monomials(n, ((d + k) / 2) as usize))
                    .sum();
                ensure(dim == expected, || format!("{x:?} → {y:?} degree {d}: {dim} ≠ {expected}"))?;
                ensure(span == dim && count == dim, || format!("{x:?} → {y:?} degree {d}: not a basis"))?;
            }
        }
    }
    Ok(())
}

fn c9() -> Outcome {
    for name in ["A1xA1", "A2", "B2"] {
        let real = realization(name);
        suite_passes(Suite::Braid, real.clone(), &Bounds::default()).map_err(|e| format!("{name}: {e}"))?;
        let mo = Morphisms::from_realization(real);
        for (s, t) in [(0, 1), (1, 0)] {
            let phi = mo.braid_morphism(s, t).map_err(|e| e.to_string())?;
            let u = mo.apply(&phi, &mo.bimodules().u_elt(&phi.source)).map_err(|e| e.to_string())?;
            ensure(phi.degree == 0 && u == mo.bimodules().u_elt(&phi.target) && mo.stalk_check(&phi), || {
                format!("{name}: braid morphism postconditions")
            })?;
        }
    }
    Ok(())
}

fn c10() -> Outcome {
    suite_passes(Suite::Duality, realization("A2"), &Bounds { max_word_len: 3, ..Bounds::default() })
}

fn c11() -> Outcome {
    for name in RANK_TWO {
        suite_passes(Suite::Demazure, realization(name), &Bounds::default()).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(())
}

fn c12() -> Outcome {
    let real = realization("A2");
    ensure(real.gkm_check(5).holds, || "GKM fails".into())?;
    suite_passes(Suite::MomentGraph, real, &Bounds { max_word_len: 3, ..Bounds::default() })
}

fn c13() -> Outcome {
    let real = realization_over("A2", Field::prime(5).unwrap());
    let bounds = Bounds { max_word_len: 6, ..Bounds::default() };
    defect_on(&real, 6)?;
    sums_on(&real, 6)?;
    for suite in [Suite::Defect, Suite::Sum, Suite::Demazure] {
        suite_passes(suite, real.clone(), &bounds)?;
    }
    let smoke = verify::run(Suite::Smoke, real, &bounds);
    ensure(smoke.passed(), || "smoke suite failed".into())?;
    let names: Vec<&str> = smoke.checks.iter().map(|c| c.name.as_str()).collect();
    ensure(names.contains(&"gkm") && names.iter().any(|n| n.starts_with("braid")), || {
        "GKM or braid outcome missing from the report".into()
    })
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, u64); 13] = [
        ("defect formula", c1, 10),
        ("sum formula and reversal", c2, 5),
        ("character", c3, 60),
        ("light-leaf triangularity", c4, 120),
        ("stalk basis", c5, 120),
        ("filtration", c6, 120),
        ("product of roots", c7, 30),
        ("double-leaf basis and hom ranks", c8, 300),
        ("braid solver", c9, 60),
        ("duality", c10, 60),
        ("Demazure operators", c11, 5),
        ("moment graph", c12, 60),
        ("positive characteristic smoke", c13, 60),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|_| {
            ensure(elapsed <= Duration::from_secs(*budget), || {
                format!("took {elapsed:.1?}, budget {budget}s")
            })
        });
        match outcome {
            Ok(()) => println!("criterion {:>2} PASS  {name} ({elapsed:.2?})", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({elapsed:.2?}): {e}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 13 criteria passed");
}
