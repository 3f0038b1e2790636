//! Light leaves, their duals, double leaves and morphism spaces.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use super::{BSMorphism, Morphisms};
use crate::bimodule::BSElement;
use crate::coxeter::{index_to_bits, Element, Gen, Label};
use crate::error::{Error, Result};
use crate::hecke::Hecke;
use crate::laurent::GradedRank;
use crate::linalg::{Echelon, SparseRow};
use crate::poly::{Exps, MultiPoly};

/// Values `LL_{x,e}(b_{x,f})` for all `e, f` with a common endpoint, both
/// indices listed in increasing order for `<`.
#[derive(Clone, Debug)]
pub struct TriangularityTable {
    pub word: Vec<Gen>,
    pub endpoint: Element,
    pub order: Vec<usize>,
    /// `values[a][b] = LL_{order[a]}(b_{order[b]})`.
    pub values: Vec<Vec<BSElement>>,
}

/// A basis over the scalar field of each graded piece of a morphism space.
#[derive(Clone, Debug)]
pub struct HomSpaceBasis {
    pub source: Vec<Gen>,
    pub target: Vec<Gen>,
    pub by_degree: BTreeMap<i32, Vec<BSMorphism>>,
    /// The graded rank predicted by the Hecke algebra.
    pub rank: GradedRank,
}

impl HomSpaceBasis {
    pub fn dim(&self, d: i32) -> usize {
        self.by_degree.get(&d).map_or(0, Vec::len)
    }

    /// Dimension of the degree-`d` piece of a free left `R`-module with
    /// graded rank `rank`, over a polynomial ring in `nvars` variables.
    pub fn expected_dim(rank: &GradedRank, nvars: usize, d: i32) -> usize {
        rank.poly()
            .terms()
            .map(|(k, c)| {
                let g = d + k;
                if g < 0 || g % 2 != 0 {
                    return 0;
                }
                let c: usize = c.try_into().expect("small graded rank");
                c * polynomial_space_dim(nvars, (g / 2) as usize)
            })
            .sum()
    }
}

/// `dim R^{2k}` for `R` a polynomial ring in `n` variables.
pub(crate) fn polynomial_space_dim(n: usize, k: usize) -> usize {
    if n == 0 {
        return usize::from(k == 0);
    }
    let mut num: u128 = 1;
    for i in 0..(n - 1) as u128 {
        num = num * (k as u128 + 1 + i) / (i + 1);
    }
    num as usize
}

/// Flattens morphisms into vectors over the scalar field.
struct Flattener {
    columns: HashMap<(usize, usize, Exps), usize>,
}

impl Flattener {
    fn new() -> Self {
        Flattener {
            columns: HashMap::new(),
        }
    }

    fn row(&mut self, phi: &BSMorphism) -> SparseRow {
        let mut row = SparseRow::new();
        for (i, r) in phi.matrix.iter().enumerate() {
            for (j, p) in r.iter().enumerate() {
                for (e, c) in p.terms() {
                    let next = self.columns.len();
                    let col = *self.columns.entry((i, j, e.clone())).or_insert(next);
                    row.insert(col, c.clone());
                }
            }
        }
        row
    }
}

/// Rank over the scalar field of a family of morphisms.
fn span_rank(family: &[BSMorphism], field: crate::field::Field) -> usize {
    let mut flat = Flattener::new();
    let rows: Vec<SparseRow> = family.iter().map(|m| flat.row(m)).collect();
    let mut ech = Echelon::new(flat.columns.len(), field);
    rows.into_iter().filter(|r| ech.insert(r.clone())).count()
}

impl Morphisms {
    /// The light leaf `LL_{x,e}: B_x → B_w`, `w` the canonical word of `x^e`.
    pub fn light_leaf(&self, word: &[Gen], e: usize) -> Result<Arc<BSMorphism>> {
        let key = (word.to_vec(), e);
        if let Some(ll) = self.leaves.read().unwrap().get(&key) {
            return Ok(ll.clone());
        }
        let ll = Arc::new(self.build_light_leaf(word, e)?);
        self.leaves.write().unwrap().insert(key, ll.clone());
        Ok(ll)
    }

    fn build_light_leaf(&self, word: &[Gen], e: usize) -> Result<BSMorphism> {
        let Some((&s, prefix)) = word.split_last() else {
            return Ok(self.identity(&[]));
        };
        let k = prefix.len();
        let sys = self.system();
        let prev = self.light_leaf(prefix, e & ((1 << k) - 1))?;
        let w_prev = sys.endpoint(prefix, e);
        let w_prev_word = w_prev.word().to_vec();
        let bit = (e >> k) & 1;
        let label = if sys.is_right_descent(&w_prev, s) { Label::D } else { Label::U };
        let base = self.tensor_hom(&prev, &self.identity(&[s]));
        let mut with_s = w_prev_word.clone();
        with_s.push(s);
        let ws = sys.mul_gen(&w_prev, s);
        let steps = match (label, bit) {
            (Label::U, 0) => vec![self.whisker(&w_prev_word, &self.gen_m(s), &[])],
            (Label::U, _) => vec![self.rex_morphism(&with_s, ws.word())?],
            (Label::D, _) => {
                // Move to a reduced word of w_prev ending in s, then contract.
                let mut ending = ws.word().to_vec();
                ending.push(s);
                let to_ending = self.whisker(&[], &self.rex_morphism(&w_prev_word, &ending)?, &[s]);
                if bit == 0 {
                    vec![
                        to_ending,
                        self.whisker(ws.word(), &self.gen_i0(s), &[]),
                        self.rex_morphism(&ending, &w_prev_word)?,
                    ]
                } else {
                    vec![to_ending, self.whisker(ws.word(), &self.gen_i1(s), &[])]
                }
            }
        };
        let mut acc = base;
        for step in steps {
            acc = self.compose(&step, &acc)?;
        }
        Ok(acc)
    }

    /// `LL*_{x,e} = D(LL_{x,e}): B_w → B_x`.
    pub fn dual_light_leaf(&self, word: &[Gen], e: usize) -> Result<BSMorphism> {
        self.dualize(&*self.light_leaf(word, e)?)
    }

    /// `LL*_{y,f} ∘ LL_{x,e}`.
    pub fn double_leaf(&self, x: &[Gen], y: &[Gen], e: usize, f: usize) -> Result<BSMorphism> {
        let sys = self.system();
        if sys.endpoint(x, e) != sys.endpoint(y, f) {
            return Err(Error::EndpointMismatch);
        }
        self.compose(&self.dual_light_leaf(y, f)?, &*self.light_leaf(x, e)?)
    }

    /// Subsequence indices with endpoint `w`, increasing for `<`.
    pub fn ordered_block(&self, word: &[Gen], w: &Element) -> Result<Vec<usize>> {
        let sys = self.system();
        let data = self.bs.data(word);
        let subs: Vec<_> = data
            .block(w)
            .iter()
            .map(|&e| sys.label_subsequence(word, &index_to_bits(e, word.len())))
            .collect();
        let mut idx: Vec<usize> = (0..subs.len()).collect();
        let mut err = None;
        idx.sort_by(|&a, &b| {
            if a == b {
                return std::cmp::Ordering::Equal;
            }
            match sys.subseq_order_less(&subs[a], &subs[b]) {
                Ok(true) => std::cmp::Ordering::Less,
                Ok(false) => std::cmp::Ordering::Greater,
                Err(e) => {
                    err = Some(e);
                    std::cmp::Ordering::Equal
                }
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        Ok(idx.into_iter().map(|i| subs[i].index()).collect())
    }

    /// Evaluates light leaves on the `b`-elements of one endpoint and checks
    /// that the table is `u_w` on the diagonal and zero below it.
    pub fn triangularity_report(&self, word: &[Gen], w: &Element) -> Result<TriangularityTable> {
        let order = self.ordered_block(word, w)?;
        let u = self.bs.u_elt(w.word());
        let names = |e: usize| -> String {
            index_to_bits(e, word.len()).iter().map(|b| char::from(b'0' + b)).collect()
        };
        let mut values = Vec::with_capacity(order.len());
        for (a, &e) in order.iter().enumerate() {
            let ll = self.light_leaf(word, e)?;
            let mut row = Vec::with_capacity(order.len());
            for (b, &f) in order.iter().enumerate() {
                let bits = index_to_bits(f, word.len());
                let val = self.apply(&ll, &self.bs.b_elt(word, &bits))?;
                if a == b && val != u {
                    return Err(Error::TriangularityFailure(format!(
                        "LL_{}(b_{}) is not u",
                        names(e),
                        names(f)
                    )));
                }
                if b < a && !val.is_zero() {
                    return Err(Error::TriangularityFailure(format!(
                        "LL_{}(b_{}) is not zero",
                        names(e),
                        names(f)
                    )));
                }
                row.push(val);
            }
            values.push(row);
        }
        Ok(TriangularityTable {
            word: word.to_vec(),
            endpoint: w.clone(),
            order,
            values,
        })
    }

    /// `LL*_{x,e}(u_w)` for every `e` with endpoint `w`, in index order.
    pub fn filtration_elements(&self, word: &[Gen], w: &Element) -> Result<Vec<BSElement>> {
        let data = self.bs.data(word);
        let u = self.bs.u_elt(w.word());
        data.block(w)
            .iter()
            .map(|&e| self.apply(&self.dual_light_leaf(word, e)?, &u))
            .collect()
    }

    pub fn section_basis_check(&self, word: &[Gen], set: &BTreeSet<Element>, w: &Element) -> Result<GradedRank> {
        let elts = self.filtration_elements(word, w)?;
        self.bs.section_basis_check(word, set, w, &elts)
    }

    pub fn alpha_product_check(&self, word: &[Gen], w: &Element) -> Result<bool> {
        let elts = self.filtration_elements(word, w)?;
        self.bs.alpha_product_check(word, w, &elts)
    }

    /// A basis of `Hom^d(B_x, B_y)` for every `d ≤ dmax`.
    pub fn hom_space(&self, x: &[Gen], y: &[Gen], dmax: i32) -> Result<HomSpaceBasis> {
        let src = self.object_bs(x);
        let tgt = self.object_bs(y);
        let mut by_degree = BTreeMap::new();
        let dmin = -((x.len() + y.len()) as i32);
        for d in dmin..=dmax {
            let sol = self.solve_hom(&src, &tgt, d, &[])?;
            by_degree.insert(
                d,
                sol.basis
                    .into_iter()
                    .map(|matrix| BSMorphism {
                        source: x.to_vec(),
                        target: y.to_vec(),
                        degree: d,
                        matrix,
                    })
                    .collect(),
            );
        }
        let rank = Hecke::new(self.system().clone()).hom_rank_formula(x, y);
        Ok(HomSpaceBasis {
            source: x.to_vec(),
            target: y.to_vec(),
            by_degree,
            rank,
        })
    }

    /// All double leaves `B_x → B_y`, keyed by `(e, f)`.
    pub fn double_leaves(&self, x: &[Gen], y: &[Gen]) -> Result<Vec<((usize, usize), BSMorphism)>> {
        let sys = self.system();
        let mut out = Vec::new();
        for e in 0..1usize << x.len() {
            for f in 0..1usize << y.len() {
                if sys.endpoint(x, e) == sys.endpoint(y, f) {
                    out.push(((e, f), self.double_leaf(x, y, e, f)?));
                }
            }
        }
        Ok(out)
    }

    /// Compares the solved morphism spaces with the Hecke prediction and
    /// checks that the `R`-multiples of double leaves fill each degree
    /// exactly.
    ///
    /// Returns `(d, dim Hom^d, predicted dim, rank of double-leaf multiples,
    /// number of double-leaf multiples)` for each degree.
    pub fn double_leaf_basis_check(
        &self,
        x: &[Gen],
        y: &[Gen],
        dmax: i32,
    ) -> Result<Vec<(i32, usize, usize, usize, usize)>> {
        let hom = self.hom_space(x, y, dmax)?;
        let leaves = self.double_leaves(x, y)?;
        let leaf_rank = GradedRank::from_degrees(leaves.iter().map(|(_, l)| -l.degree));
        if leaf_rank != hom.rank {
            return Err(Error::BasisFailure(format!(
                "double leaves have graded rank {leaf_rank}, expected {}",
                hom.rank
            )));
        }
        let r = self.realization();
        let mut out = Vec::new();
        for (&d, basis) in &hom.by_degree {
            let mut family = Vec::new();
            for (_, l) in &leaves {
                let g = d - l.degree;
                if g < 0 || g % 2 != 0 {
                    continue;
                }
                for mu in MultiPoly::monomials_of_degree(r.nvars(), (g / 2) as u32) {
                    let m = MultiPoly::monomial(r.nvars(), mu, r.field().one());
                    family.push(l.scale(&m, d));
                }
            }
            let mut joint = family.clone();
            joint.extend(basis.iter().cloned());
            let span = span_rank(&family, r.field());
            if span_rank(&joint, r.field()) != basis.len() {
                return Err(Error::BasisFailure(format!(
                    "double leaves of degree {d} are not morphisms of the solved space"
                )));
            }
            out.push((
                d,
                basis.len(),
                HomSpaceBasis::expected_dim(&hom.rank, r.nvars(), d),
                span,
                family.len(),
            ));
        }
        Ok(out)
    }

    /// `φ_w: B_w → R_w(ℓ(w))`, `f₀ ⊗ f₁ ⊗ ⋯ ↦ f₀ t₁(f₁) (t₁t₂)(f₂) ⋯`, as a row.
    pub fn phi_row(&self, word: &[Gen]) -> Vec<MultiPoly> {
        let c = self.bs.coordinate_matrix(word);
        c[(1 << word.len()) - 1].clone()
    }

    /// Checks that the maps `φ_w ∘ LL_{x,e}` with `x^e = w` form a basis of
    /// `Hom(B_x, R_w(ℓ(w)))` over `R` in degrees up to `dmax`.
    pub fn projectivity_check(&self, word: &[Gen], w: &Element, dmax: i32) -> Result<bool> {
        let data = self.bs.data(word);
        let phi = BSMorphism {
            source: w.word().to_vec(),
            target: vec![],
            degree: 0,
            matrix: vec![self.phi_row(w.word())],
        };
        let mut composites = Vec::new();
        for &e in data.block(w) {
            let ll = self.light_leaf(word, e)?;
            let mut c = self.compose(&phi, &ll)?;
            // The target is R_w rather than R; only the matrix is used below.
            c.target = vec![];
            composites.push(c);
        }
        let src = self.object_bs(word);
        let tgt = self.object_standard(w, w.len() as i32);
        let r = self.realization();
        let rank = GradedRank::from_degrees(composites.iter().map(|c| -c.degree));
        for d in -(word.len() as i32)..=dmax {
            let sol = self.solve_hom(&src, &tgt, d, &[])?;
            let mut family = Vec::new();
            for c in &composites {
                let g = d - c.degree;
                if g < 0 || g % 2 != 0 {
                    continue;
                }
                for mu in MultiPoly::monomials_of_degree(r.nvars(), (g / 2) as u32) {
                    family.push(c.scale(&MultiPoly::monomial(r.nvars(), mu, r.field().one()), d));
                }
            }
            let basis: Vec<BSMorphism> = sol
                .basis
                .into_iter()
                .map(|matrix| BSMorphism {
                    source: word.to_vec(),
                    target: vec![],
                    degree: d,
                    matrix,
                })
                .collect();
            let mut joint = family.clone();
            joint.extend(basis.iter().cloned());
            let span = span_rank(&family, r.field());
            if span != family.len()
                || span != basis.len()
                || span_rank(&joint, r.field()) != span
                || span != HomSpaceBasis::expected_dim(&rank, r.nvars(), d)
            {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
