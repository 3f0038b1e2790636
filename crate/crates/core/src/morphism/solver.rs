//! Degree-by-degree computation of morphism spaces as the solutions of a
//! linear system over the scalar field, and the braid morphisms built on it.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{BSMorphism, Matrix, Morphisms};
use crate::coxeter::{Element, Gen};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseRow};
use crate::poly::{Exps, MultiPoly};

/// What the solver needs to know about an object: graded basis, right action
/// of the variables, and the coordinate embedding into its stalks.
#[derive(Clone, Debug)]
pub struct ObjectData {
    pub degrees: Vec<i32>,
    /// Right multiplication by each variable, in the basis.
    pub right: Vec<Matrix>,
    /// Coordinates of the basis elements, `ncoords × rank`.
    pub coords: Matrix,
    pub endpoints: Vec<Element>,
    /// Basis coefficients of a polynomial multiple of each coordinate vector,
    /// `rank × ncoords`.
    pub lattice: Matrix,
}

impl ObjectData {
    pub fn rank(&self) -> usize {
        self.degrees.len()
    }
}

/// Solutions of one degree of a morphism problem.
#[derive(Clone, Debug, Default)]
pub struct HomSolution {
    /// Present when inhomogeneous constraints were given and are solvable.
    pub particular: Option<Matrix>,
    /// A basis of the homogeneous solutions.
    pub basis: Vec<Matrix>,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Key {
    Right(usize, usize, usize, Exps),
    Stalk(usize, usize, Exps),
    Fixed(usize),
}

fn shifted(mu: &Exps, e: &Exps) -> Exps {
    mu.iter().zip(e).map(|(a, b)| a + b).collect()
}

impl Morphisms {
    pub fn object_bs(&self, word: &[Gen]) -> ObjectData {
        let data = self.bs.data(word);
        ObjectData {
            degrees: data.degrees.clone(),
            right: self.bs.right_tables(word),
            coords: self.bs.coordinate_matrix(word),
            endpoints: data.endpoints.clone(),
            lattice: self.bs.lattice_generators(word),
        }
    }

    /// The standard bimodule `R_w(n)`: `R` with right action twisted by `w`,
    /// generated in degree `-n`.
    pub fn object_standard(&self, w: &Element, n: i32) -> ObjectData {
        let r = self.realization();
        ObjectData {
            degrees: vec![-n],
            right: (0..r.nvars()).map(|v| vec![vec![r.act(w, &r.var(v))]]).collect(),
            coords: vec![vec![r.one()]],
            endpoints: vec![w.clone()],
            lattice: vec![vec![r.one()]],
        }
    }

    /// All degree-`d` maps `src → tgt` that are right linear and preserve
    /// stalks. Entries listed in `fixed` are prescribed.
    pub fn solve_hom(
        &self,
        src: &ObjectData,
        tgt: &ObjectData,
        d: i32,
        fixed: &[(usize, usize, MultiPoly)],
    ) -> Result<HomSolution> {
        let r = self.realization();
        let field = r.field();
        let nvars = r.nvars();
        let mut unknowns: Vec<(usize, usize, Exps)> = Vec::new();
        for i in 0..tgt.rank() {
            for j in 0..src.rank() {
                let g = d + src.degrees[j] - tgt.degrees[i];
                if g >= 0 && g % 2 == 0 {
                    for mu in MultiPoly::monomials_of_degree(nvars, (g / 2) as u32) {
                        unknowns.push((i, j, mu));
                    }
                }
            }
        }
        let n = unknowns.len();
        let mut eqs: BTreeMap<Key, SparseRow> = BTreeMap::new();
        let mut push = |key: Key, k: usize, c: &crate::field::Scalar| {
            let row = eqs.entry(key).or_default();
            let entry = row.entry(k).or_insert_with(|| field.zero());
            *entry = &*entry + c;
        };
        // Products C_tgt[f][i] · lattice_src[j][e] over pairs of different stalks.
        let mut stalk_terms: BTreeMap<(usize, usize), Vec<(usize, usize, MultiPoly)>> = BTreeMap::new();
        for (k, (i, j, mu)) in unknowns.iter().enumerate() {
            for (v, (ts, tt)) in src.right.iter().zip(&tgt.right).enumerate() {
                for (kk, p) in ts[*j].iter().enumerate() {
                    for (e, c) in p.terms() {
                        push(Key::Right(v, *i, kk, shifted(mu, e)), k, c);
                    }
                }
                for (a, row) in tt.iter().enumerate() {
                    for (e, c) in row[*i].terms() {
                        push(Key::Right(v, a, *j, shifted(mu, e)), k, &-c);
                    }
                }
            }
            let terms = stalk_terms.entry((*i, *j)).or_insert_with(|| {
                let mut out = Vec::new();
                for (f, crow) in tgt.coords.iter().enumerate() {
                    if crow[*i].is_zero() {
                        continue;
                    }
                    for (e, g) in src.lattice[*j].iter().enumerate() {
                        if g.is_zero() || src.endpoints[e] == tgt.endpoints[f] {
                            continue;
                        }
                        out.push((f, e, &crow[*i] * g));
                    }
                }
                out
            });
            for (f, e, p) in terms.iter() {
                for (ex, c) in p.terms() {
                    push(Key::Stalk(*f, *e, shifted(mu, ex)), k, c);
                }
            }
        }
        let mut fixed_rows = Vec::new();
        for (fi, (i, j, p)) in fixed.iter().enumerate() {
            let mut mus = Vec::new();
            for (k, (ui, uj, mu)) in unknowns.iter().enumerate() {
                if ui == i && uj == j {
                    let mut row = SparseRow::new();
                    row.insert(k, field.one());
                    row.insert(n, -&p.coeff(mu));
                    fixed_rows.push((Key::Fixed(fi), row));
                    mus.push(mu);
                }
            }
            if p.terms().any(|(e, _)| !mus.contains(&e)) {
                return Ok(HomSolution::default());
            }
        }
        let mut ech = Echelon::new(n, field);
        for row in eqs.into_values() {
            ech.insert(row);
        }
        let basis: Vec<Matrix> = ech
            .nullspace()
            .into_iter()
            .map(|x| self.assemble(src, tgt, &unknowns, &x))
            .collect();
        let particular = if fixed.is_empty() {
            None
        } else {
            for (_, row) in fixed_rows {
                ech.insert(row);
            }
            ech.particular_solution()
                .map(|x| self.assemble(src, tgt, &unknowns, &x))
        };
        Ok(HomSolution { particular, basis })
    }

    fn assemble(
        &self,
        src: &ObjectData,
        tgt: &ObjectData,
        unknowns: &[(usize, usize, Exps)],
        x: &[crate::field::Scalar],
    ) -> Matrix {
        let r = self.realization();
        let mut m = vec![vec![r.zero(); src.rank()]; tgt.rank()];
        for ((i, j, mu), c) in unknowns.iter().zip(x) {
            if !c.is_zero() {
                m[*i][*j].add_assign(&MultiPoly::monomial(r.nvars(), mu.clone(), c.clone()));
            }
        }
        m
    }

    /// The degree-zero morphism `B_{(s,t,s,…)} → B_{(t,s,t,…)}` sending `u` to
    /// `u`, with free parameters set to zero.
    pub fn braid_morphism(&self, s: Gen, t: Gen) -> Result<Arc<BSMorphism>> {
        if let Some(b) = self.braids.read().unwrap().get(&(s, t)) {
            return Ok(b.clone());
        }
        let names = self.system().matrix().names();
        let fail = || Error::NoBraidMorphism(names[s as usize].clone(), names[t as usize].clone());
        let m = self.system().matrix().order(s, t).ok_or_else(fail)? as usize;
        if s == t {
            return Err(fail());
        }
        let source: Vec<Gen> = (0..m).map(|k| if k % 2 == 0 { s } else { t }).collect();
        let target: Vec<Gen> = (0..m).map(|k| if k % 2 == 0 { t } else { s }).collect();
        let src = self.object_bs(&source);
        let tgt = self.object_bs(&target);
        let r = self.realization();
        let fixed: Vec<(usize, usize, MultiPoly)> = (0..tgt.rank())
            .map(|i| (i, 0, if i == 0 { r.one() } else { r.zero() }))
            .collect();
        let sol = self.solve_hom(&src, &tgt, 0, &fixed)?;
        let matrix = sol.particular.ok_or_else(fail)?;
        let phi = BSMorphism {
            source,
            target,
            degree: 0,
            matrix,
        };
        let u = self.apply(&phi, &self.bs.u_elt(&phi.source))?;
        if u != self.bs.u_elt(&phi.target) {
            return Err(fail());
        }
        let phi = Arc::new(phi);
        self.braids.write().unwrap().insert((s, t), phi.clone());
        Ok(phi)
    }

    /// The composite of braid morphisms along the fixed path of braid moves
    /// from `x` to `y`.
    pub fn rex_morphism(&self, x: &[Gen], y: &[Gen]) -> Result<BSMorphism> {
        let path = self.system().rex_path(x, y)?;
        let mut acc = self.identity(x);
        let mut cur = x.to_vec();
        for mv in path {
            let braid = self.braid_morphism(mv.s, mv.t)?;
            let step = self.whisker(&cur[..mv.start], &braid, &cur[mv.start + mv.m..]);
            acc = self.compose(&step, &acc)?;
            cur = mv.apply(&cur);
        }
        Ok(acc)
    }
}
