//! Verification suites: each runs a family of exact checks on one realization
//! and collects the outcomes in a [`Report`].

use std::collections::BTreeSet;
use std::str::FromStr;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bimodule::BottSamelson;
use crate::coxeter::{Element, Gen};
use crate::error::{Error, Result};
use crate::hecke::Hecke;
use crate::laurent::LaurentPoly;
use crate::momentgraph::MomentGraph;
use crate::morphism::{BSMorphism, HomSpaceBasis, Morphisms};
use crate::poly::MultiPoly;
use crate::realization::Realization;
use crate::report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Defect,
    Sum,
    Character,
    Triangularity,
    Stalk,
    Filtration,
    AlphaProduct,
    DoubleLeaves,
    Braid,
    Duality,
    Demazure,
    MomentGraph,
    Smoke,
}

impl Suite {
    pub const ALL: [Suite; 13] = [
        Suite::Defect,
        Suite::Sum,
        Suite::Character,
        Suite::Triangularity,
        Suite::Stalk,
        Suite::Filtration,
        Suite::AlphaProduct,
        Suite::DoubleLeaves,
        Suite::Braid,
        Suite::Duality,
        Suite::Demazure,
        Suite::MomentGraph,
        Suite::Smoke,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Defect => "defect",
            Suite::Sum => "sum",
            Suite::Character => "character",
            Suite::Triangularity => "triangularity",
            Suite::Stalk => "stalk",
            Suite::Filtration => "filtration",
            Suite::AlphaProduct => "alpha-product",
            Suite::DoubleLeaves => "double-leaves",
            Suite::Braid => "braid",
            Suite::Duality => "duality",
            Suite::Demazure => "demazure",
            Suite::MomentGraph => "moment-graph",
            Suite::Smoke => "smoke",
        }
    }

    /// Bounds used when none are given.
    pub fn default_bounds(self) -> Bounds {
        let b = Bounds::default();
        match self {
            Suite::Defect | Suite::Sum => Bounds { max_word_len: 6, ..b },
            Suite::Triangularity | Suite::Character | Suite::Stalk | Suite::Filtration => b,
            Suite::AlphaProduct | Suite::Duality => b,
            Suite::DoubleLeaves => Bounds { max_word_len: 2, ..b },
            Suite::Smoke => Bounds { max_word_len: 6, ..b },
            _ => b,
        }
    }
}

impl std::fmt::Display for Suite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s || x.name().replace('-', "") == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_word_len: usize,
    pub max_refl_len: usize,
    pub max_degree: i32,
    /// Largest `m_st` for which a braid morphism is required to exist.
    pub max_braid_order: u32,
    /// Random samples per generator or per check.
    pub samples: usize,
    pub seed: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_word_len: 3,
            max_refl_len: 5,
            max_degree: 4,
            max_braid_order: 4,
            samples: 100,
            seed: 1,
        }
    }
}

fn err_text(e: &Error) -> String {
    e.to_string()
}

/// Runs one suite.
pub fn run(suite: Suite, real: Arc<Realization>, bounds: &Bounds) -> Report {
    let mo = Morphisms::from_realization(real.clone());
    let mut report = Report::new(format!("{suite} on a rank {} realization over {}", real.system().rank(), real.field()));
    report.choices = vec![
        "reduced words: ShortLex minimal".into(),
        "subsequence order: first differing label, U before D".into(),
        "braid morphisms: free parameters set to zero".into(),
        format!(
            "bounds: word length {}, reflection length {}, degree {}",
            bounds.max_word_len, bounds.max_refl_len, bounds.max_degree
        ),
    ];
    match suite {
        Suite::Defect => defect(&mo, bounds, &mut report),
        Suite::Sum => sums(&mo, bounds, &mut report),
        Suite::Character => character(&mo, bounds, &mut report),
        Suite::Triangularity => triangularity(&mo, bounds, &mut report),
        Suite::Stalk => stalk(&mo, bounds, &mut report),
        Suite::Filtration => filtration(&mo, bounds, &mut report),
        Suite::AlphaProduct => alpha_product(&mo, bounds, &mut report),
        Suite::DoubleLeaves => double_leaves(&mo, bounds, &mut report),
        Suite::Braid => braid(&mo, bounds, &mut report, false),
        Suite::Duality => duality(&mo, bounds, &mut report),
        Suite::Demazure => demazure(&mo, bounds, &mut report),
        Suite::MomentGraph => moment_graph(&mo, bounds, &mut report),
        Suite::Smoke => smoke(&mo, bounds, &mut report),
    }
    report
}

fn words(mo: &Morphisms, len: usize) -> Vec<Vec<Gen>> {
    mo.system().words_upto(len)
}

fn wname(mo: &Morphisms, w: &[Gen]) -> String {
    mo.system().matrix().word_string(w)
}

fn endpoints(mo: &Morphisms, word: &[Gen]) -> Vec<Element> {
    mo.bimodules().data(word).blocks.keys().cloned().collect()
}

fn defect(mo: &Morphisms, b: &Bounds, report: &mut Report) {
    let hecke = Hecke::new(mo.system().clone());
    let results: Vec<(String, bool)> = words(mo, b.max_word_len)
        .par_iter()
        .map(|w| {
            let ok = endpoints(mo, w).iter().all(|x| hecke.defect_formula_check(w, x));
            (wname(mo, w), ok)
        })
        .collect();
    for (name, ok) in results {
        report.check(format!("defect {name}"), "Σ_{x^e = w} v^{d(e)} = p_x^w(v) for every w", ok, "");
    }
}

fn sums(mo: &Morphisms, b: &Bounds, report: &mut Report) {
    let hecke = Hecke::new(mo.system().clone());
    let results: Vec<(String, bool, bool)> = words(mo, b.max_word_len)
        .par_iter()
        .map(|w| (wname(mo, w), hecke.sum_formula_check(w), hecke.reversal_check(w)))
        .collect();
    for (name, sum, rev) in results {
        report.check(format!("sum {name}"), "Σ_w p_x^w(1) = 2^l", sum, "");
        report.check(format!("reversal {name}"), "p_{x reversed}^{w⁻¹} = p_x^w", rev, "");
    }
}

fn character(mo: &Morphisms, b: &Bounds, report: &mut Report) {
    let bs = mo.bimodules();
    let results: Vec<(String, Result<()>)> = words(mo, b.max_word_len)
        .par_iter()
        .map(|w| (wname(mo, w), bs.character(w).map(|_| ())))
        .collect();
    for (name, r) in results {
        let detail = r.as_ref().err().map(err_text).unwrap_or_default();
        report.check(format!("character {name}"), "ch(B_x) = H̲_x", r.is_ok(), detail);
    }
}

fn triangularity(mo: &Morphisms, b: &Bounds, report: &mut Report) {
    for w in words(mo, b.max_word_len) {
        for x in endpoints(mo, &w) {
            let r = mo.triangularity_report(&w, &x);
            report.check(
                format!("triangularity {} at {}", wname(mo, &w), wname(mo, x.word())),
                "LL_e(b_e) = u_w and LL_e(b_f) = 0 for f < e",
                r.is_ok(),
                r.err().as_ref().map(err_text).unwrap_or_default(),
            );
        }
    }
}

fn stalk(mo: &Morphisms, b: &Bounds, report: &mut Report) {
    let bs = mo.bimodules();
    let hecke = Hecke::new(mo.system().clone());
    let results: Vec<(String, Vec<(String, Result<bool>)>)> = words(mo, b.max_word_len)
        .par_iter()
        .map(|w| {
            let rows = endpoints(mo, w)
                .into_iter()
                .map(|x| {
                    let expected = hecke.bott_samelson_elt(w).coeff(&x).shift(x.len() as i32);
                    let r = bs.stalk_basis_check(w, &x).map(|g| g.poly() == &expected);
                    (wname(mo, x.word()), r)
                })
                .collect();
            (wname(mo, w), rows)
        })
        .collect();
    for (name, rows) in results {
        for (x, r) in rows {
            let ok = matches!(r, Ok(true));
            report.check(
                format!("stalk basis {name} at {x}"),
                "{b_{x,e}} is a basis of B_x^w with graded rank v^{ℓ(w)} p_x^w(v)",
                ok,
                r.err().as_ref().map(err_text).unwrap_or_default(),
            );
        }
    }
}

/// Runs the section check along the length-ordered enumeration of the
/// support, and checks that the ranks add up to `(v + v⁻¹)^l`.
pub fn filtration_for_word(mo: &Morphisms, word: &[Gen]) -> Result<LaurentPoly> {
    let order = endpoints(mo, word);
    let mut set = BTreeSet::new();
    let mut total = LaurentPoly::zero();
    for w in &order {
        set.insert(w.clone());
        let rank = mo.section_basis_check(word, &set, w)?;
        total = &total + rank.poly();
    }
    let expected = (&LaurentPoly::v() + &LaurentPoly::v_inv()).pow(word.len() as u32);
    if total != expected {
        return Err(Error::BasisFailure(format!("filtration ranks add up to {total}")));
    }
    Ok(total)
}

fn filtration(mo: &Morphisms, b: &Bounds, report: &mut Report) {
    for w in words(mo, b.max_word_len) {
        let r = filtration_for_word(mo, &w);
        report.check(
            format!("filtration {}", wname(mo, &w)),
            "π^w(LL*_e(u_w)) is a basis of B_{x,I}/B_{x,I'} with graded rank v^{ℓ(w)} p_x^w(v⁻¹)",
            r.is_ok(),
            r.err().as_ref().map(err_text).unwrap_or_default(),
        );
    }
}

fn alpha_product(mo: &Morphisms, b: &Bounds, report: &mut Report) {
    for w in words(mo, b.max_word_len) {
        for x in endpoints(mo, &w) {
            let r = mo.alpha_product_check(&w, &x);
            report.check(
                format!("alpha product {} at {}", wname(mo, &w), wname(mo, x.word())),
                "B_{x,w} = (∏_{tw<w} α_t)(B_{x,≤w}/B_{x,<w})",
                matches!(r, Ok(true)),
                r.err().as_ref().map(err_text).unwrap_or_default(),
            );
        }
    }
}

fn double_leaves(mo: &Morphisms, b: &Bounds, report: &mut Report) {
    let ws = words(mo, b.max_word_len);
    let pairs: Vec<(Vec<Gen>, Vec<Gen>)> = ws
        .iter()
        .flat_map(|x| ws.iter().map(move |y| (x.clone(), y.clone())))
        .collect();
    let results: Vec<_> = pairs
        .par_iter()
        .map(|(x, y)| (x, y, mo.double_leaf_basis_check(x, y, b.max_degree)))
        .collect();
    for (x, y, r) in results {
        let name = format!("{} → {}", wname(mo, x), wname(mo, y));
        match r {
            Ok(rows) => {
                for (d, dim, expected, span, count) in rows {
                    report.check(
                        format!("hom dimension {name} degree {d}"),
                        "dim Hom^d matches Σ_w p_x^w(v⁻¹) p_y^w(v⁻¹)",
                        dim == expected,
                        format!("solved {dim}, predicted {expected}"),
                    );
                    report.check(
                        format!("double leaves {name} degree {d}"),
                        "R-multiples of double leaves form a basis",
                        span == dim && count == dim,
                        format!("{count} multiples spanning {span}"),
                    );
                }
            }
            Err(e) => report.check(format!("double leaves {name}"), "double leaves form a basis", false, err_text(&e)),
        }
    }
}

fn morphism_ok(mo: &Morphisms, phi: &BSMorphism) -> bool {
    mo.stalk_check(phi) && mo.right_linearity_check(phi) && mo.degree_check(phi)
}

fn braid(mo: &Morphisms, b: &Bounds, report: &mut Report, advisory: bool) {
    let sys = mo.system().clone();
    let r = sys.rank() as Gen;
    for s in 0..r {
        for t in 0..r {
            if s == t {
                continue;
            }
            let Some(m) = sys.matrix().order(s, t) else {
                continue;
            };
            let name = format!("braid {}{}", sys.matrix().names()[s as usize], sys.matrix().names()[t as usize]);
            let anchor = "a degree 0 morphism B_{sts…} → B_{tst…} with u ↦ u exists";
            if m > b.max_braid_order {
                report.warn(name, anchor, false, format!("m = {m} exceeds the requested bound; not attempted"));
                continue;
            }
            let (ok, detail) = match mo.braid_morphism(s, t) {
                Ok(phi) => {
                    let u_ok = mo.apply(&phi, &mo.bimodules().u_elt(&phi.source)).ok()
                        == Some(mo.bimodules().u_elt(&phi.target));
                    let ok = phi.degree == 0 && u_ok && morphism_ok(mo, &phi);
                    (ok, if ok { String::new() } else { "postcondition failed".into() })
                }
                Err(e) => (false, err_text(&e)),
            };
            if advisory {
                report.warn(name, anchor, ok, detail);
            } else {
                report.check(name, anchor, ok, detail);
            }
        }
    }
}

fn duality(mo: &Morphisms, b: &Bounds, report: &mut Report) {
    let sys = mo.system().clone();
    let mut family: Vec<(String, BSMorphism)> = Vec::new();
    for s in sys.matrix().generators() {
        let n = &sys.matrix().names()[s as usize];
        family.push((format!("m^{n}"), mo.gen_m(s)));
        family.push((format!("i0^{n}"), mo.gen_i0(s)));
        family.push((format!("i1^{n}"), mo.gen_i1(s)));
    }
    for w in words(mo, b.max_word_len) {
        for e in 0..1usize << w.len() {
            let bits: String = crate::coxeter::index_to_bits(e, w.len()).iter().map(|b| char::from(b'0' + b)).collect();
            match mo.light_leaf(&w, e) {
                Ok(ll) => family.push((format!("LL {} {bits}", wname(mo, &w)), (*ll).clone())),
                Err(err) => report.check(format!("LL {} {bits}", wname(mo, &w)), "light leaf exists", false, err_text(&err)),
            }
        }
    }
    let results: Vec<(String, Result<bool>)> = family
        .par_iter()
        .map(|(name, phi)| {
            let r = mo.dualize(phi).and_then(|d| {
                let dd = mo.dualize(&d)?;
                Ok(dd == *phi && morphism_ok(mo, &d) && d.degree == phi.degree)
            });
            (name.clone(), r)
        })
        .collect();
    for (name, r) in results {
        report.check(
            format!("duality {name}"),
            "D(D(φ)) = φ and D(φ) is a stalk-preserving morphism of the same degree",
            matches!(r, Ok(true)),
            r.err().as_ref().map(err_text).unwrap_or_default(),
        );
    }
}

fn demazure(mo: &Morphisms, b: &Bounds, report: &mut Report) {
    let real = mo.realization().clone();
    let sys = mo.system().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(b.seed);
    for s in sys.matrix().generators() {
        let name = &sys.matrix().names()[s as usize];
        let (mut sq, mut leib, mut split) = (true, true, true);
        let mut detail = String::new();
        for _ in 0..b.samples {
            let f = MultiPoly::random(&mut rng, real.nvars(), real.field(), 6, 6);
            let g = MultiPoly::random(&mut rng, real.nvars(), real.field(), 6, 6);
            let r = (|| -> Result<(bool, bool, bool)> {
                let df = real.demazure(s, &f)?;
                let sq = real.demazure(s, &df)?.is_zero();
                let lhs = real.demazure(s, &(&f * &g))?;
                let rhs = &(&df * &g) + &(&real.act_gen(s, &f) * &real.demazure(s, &g)?);
                let (a, bb) = real.delta_split(s, &f)?;
                let split = real.act_gen(s, &a) == a
                    && real.act_gen(s, &bb) == bb
                    && &a + &(real.delta(s) * &bb) == f;
                Ok((sq, lhs == rhs, split))
            })();
            match r {
                Ok((a, b2, c)) => {
                    sq &= a;
                    leib &= b2;
                    split &= c;
                }
                Err(e) => {
                    sq = false;
                    detail = err_text(&e);
                }
            }
        }
        report.check(format!("∂² {name}"), "∂_s ∂_s = 0", sq, detail.clone());
        report.check(format!("leibniz {name}"), "∂_s(fg) = ∂_s(f) g + s(f) ∂_s(g)", leib, "");
        report.check(format!("split {name}"), "R = R^s ⊕ δ_s R^s", split, "");
    }
}

fn moment_graph(mo: &Morphisms, b: &Bounds, report: &mut Report) {
    let real = mo.realization().clone();
    let sys = mo.system().clone();
    let gkm = real.gkm_check(b.max_refl_len);
    report.check(
        "gkm",
        "roots of distinct reflections are pairwise independent",
        gkm.holds,
        format!("{} reflections checked", gkm.checked_reflections),
    );
    let graph = MomentGraph::new(mo.bimodules().clone(), b.max_refl_len);
    let ball: BTreeSet<Element> = sys.elements_upto(b.max_word_len).into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(b.seed);
    let mut members = true;
    let mut per_gen = Vec::new();
    for s in sys.matrix().generators() {
        // Splitting along s needs a set stable under w ↦ ws.
        let set: BTreeSet<Element> = ball.iter().flat_map(|w| [w.clone(), sys.mul_gen(w, s)]).collect();
        let samples: Vec<_> = (0..b.samples.min(50))
            .map(|_| graph.random_element(&mut rng, &set, 3))
            .collect();
        members &= samples.iter().all(|z| graph.is_in_z(z).is_ok());
        per_gen.push((s, set, samples));
    }
    report.check("random members", "sampled tuples satisfy every congruence", members, "");
    for (s, set, samples) in &per_gen {
        let s = *s;
        let name = &sys.matrix().names()[s as usize];
        let mut ok = true;
        let mut detail = String::new();
        for z in samples {
            match graph.split_s(z, s) {
                Ok((x, y)) => {
                    let delta = graph.diagonal_embed(real.delta(s), set);
                    let invariant = |v: &crate::momentgraph::ZElement| {
                        set.iter().all(|w| v.values[w] == v.values[&sys.mul_gen(w, s)])
                    };
                    let back = x.add(&delta.mul(&y)) == *z;
                    let unique = graph.split_s(&x, s).map(|(_, y2)| y2.is_zero()).unwrap_or(false);
                    let inz = graph.is_in_z(&x).is_ok() && graph.is_in_z(&y).is_ok();
                    ok &= back && unique && inz && invariant(&x) && invariant(&y);
                }
                Err(e) => {
                    ok = false;
                    detail = err_text(&e);
                }
            }
        }
        report.check(format!("split {name}"), "𝒵 = 𝒵^s ⊕ (w(δ_s))_w 𝒵^s", ok, detail);
    }
    let bs = mo.bimodules();
    let congruences = words(mo, b.max_word_len)
        .par_iter()
        .all(|w| bs.monomial_basis(w).iter().all(|m| bs.edge_congruence_check(m)));
    report.check(
        "edge congruences",
        "coordinates of B_x satisfy z_{tw} ≡ z_w mod α_t",
        congruences,
        "",
    );
    for (s, _, samples) in &per_gen {
        let (s, few) = (*s, &samples[..samples.len().min(3)]);
        for w in words(mo, b.max_word_len.saturating_sub(1).min(2)) {
            let r = graph.induction_check(s, &w, few);
            report.check(
                format!("induction {} ⊗ {}", wname(mo, &w), sys.matrix().names()[s as usize]),
                "z·(m ⊗ n) = (a·m) ⊗ n + (b·m) ⊗ nδ_s for z = a + δ_s b",
                matches!(r, Ok(true)),
                r.err().as_ref().map(err_text).unwrap_or_default(),
            );
        }
    }
}

fn smoke(mo: &Morphisms, b: &Bounds, report: &mut Report) {
    defect(mo, b, report);
    sums(mo, b, report);
    demazure(mo, b, report);
    let gkm = mo.realization().gkm_check(b.max_refl_len);
    let detail = match &gkm.witness {
        Some((t1, t2)) => format!(
            "roots of {} and {} are proportional",
            wname(mo, t1.word()),
            wname(mo, t2.word())
        ),
        None => format!("{} reflections checked", gkm.checked_reflections),
    };
    report.warn("gkm", "roots of distinct reflections are pairwise independent", gkm.holds, detail);
    braid(mo, b, report, true);
}

/// The per-degree dimension predicted for `Hom(B_x, B_y)`.
pub fn predicted_hom_dims(mo: &Morphisms, x: &[Gen], y: &[Gen], dmax: i32) -> Vec<(i32, usize)> {
    let rank = Hecke::new(mo.system().clone()).hom_rank_formula(x, y);
    let dmin = -((x.len() + y.len()) as i32);
    (dmin..=dmax)
        .map(|d| (d, HomSpaceBasis::expected_dim(&rank, mo.realization().nvars(), d)))
        .collect()
}

/// Convenience for callers holding only a realization.
pub fn bimodules(real: Arc<Realization>) -> Arc<BottSamelson> {
    Arc::new(BottSamelson::new(real))
}
