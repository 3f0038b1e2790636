//! Degree-homogeneous bimodule maps between Bott-Samelson bimodules.
//!
//! A morphism `φ: B_x → B_y` is stored as the matrix of its action on the left
//! monomial bases: column `j` holds the coefficients of `φ(b_j)`. Left
//! linearity is then automatic; right linearity and stalk preservation are
//! checked, or imposed as linear constraints by the solver.

mod leaves;
mod solver;

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use serde_json::{Map, Value};

use crate::bimodule::{BSElement, BottSamelson};
use crate::coxeter::{CoxeterSystem, Gen};
use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::realization::Realization;

pub use leaves::{HomSpaceBasis, TriangularityTable};
pub use solver::ObjectData;

type Matrix = Vec<Vec<MultiPoly>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BSMorphism {
    pub source: Vec<Gen>,
    pub target: Vec<Gen>,
    pub degree: i32,
    /// `2^{l_target} × 2^{l_source}` matrix.
    pub matrix: Matrix,
}

impl BSMorphism {
    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn cols(&self) -> usize {
        1 << self.source.len()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(MultiPoly::is_zero)
    }

    /// Entries flattened row by row, for linear algebra over the scalar field.
    pub fn entries(&self) -> impl Iterator<Item = &MultiPoly> {
        self.matrix.iter().flatten()
    }

    pub fn scale(&self, f: &MultiPoly, degree: i32) -> BSMorphism {
        BSMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            degree,
            matrix: self
                .matrix
                .iter()
                .map(|row| row.iter().map(|c| f * c).collect())
                .collect(),
        }
    }

    pub fn add(&self, other: &BSMorphism) -> Result<BSMorphism> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::ShapeMismatch("adding morphisms between different objects".into()));
        }
        Ok(BSMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree,
            matrix: self
                .matrix
                .iter()
                .zip(&other.matrix)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        })
    }
}

fn mat_mul(a: &Matrix, b: &Matrix, zero: &MultiPoly) -> Matrix {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|k| {
                    let mut acc = zero.clone();
                    for (j, x) in row.iter().enumerate() {
                        if !x.is_zero() && !b[j][k].is_zero() {
                            acc.add_assign(&(x * &b[j][k]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Morphisms between Bott-Samelson bimodules over one realization, with the
/// shared caches of braid morphisms and light leaves.
pub struct Morphisms {
    bs: Arc<BottSamelson>,
    braids: RwLock<HashMap<(Gen, Gen), Arc<BSMorphism>>>,
    leaves: RwLock<HashMap<(Vec<Gen>, usize), Arc<BSMorphism>>>,
}

impl std::fmt::Debug for Morphisms {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Morphisms").field("bimodules", &self.bs).finish_non_exhaustive()
    }
}

impl Morphisms {
    pub fn new(bs: Arc<BottSamelson>) -> Self {
        Morphisms {
            bs,
            braids: RwLock::new(HashMap::new()),
            leaves: RwLock::new(HashMap::new()),
        }
    }

    pub fn from_realization(real: Arc<Realization>) -> Self {
        Morphisms::new(Arc::new(BottSamelson::new(real)))
    }

    pub fn bimodules(&self) -> &Arc<BottSamelson> {
        &self.bs
    }

    pub fn realization(&self) -> &Arc<Realization> {
        self.bs.realization()
    }

    pub fn system(&self) -> &Arc<CoxeterSystem> {
        self.bs.system()
    }

    fn zero(&self) -> MultiPoly {
        self.realization().zero()
    }

    pub fn identity(&self, word: &[Gen]) -> BSMorphism {
        let n = 1 << word.len();
        BSMorphism {
            source: word.to_vec(),
            target: word.to_vec(),
            degree: 0,
            matrix: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if i == j { self.realization().one() } else { self.zero() })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn is_identity(&self, phi: &BSMorphism) -> bool {
        phi.source == phi.target && phi.degree == 0 && *phi == self.identity(&phi.source)
    }

    pub fn zero_morphism(&self, source: &[Gen], target: &[Gen], degree: i32) -> BSMorphism {
        BSMorphism {
            source: source.to_vec(),
            target: target.to_vec(),
            degree,
            matrix: vec![vec![self.zero(); 1 << source.len()]; 1 << target.len()],
        }
    }

    pub fn apply(&self, phi: &BSMorphism, m: &BSElement) -> Result<BSElement> {
        if m.word() != phi.source.as_slice() {
            return Err(Error::ShapeMismatch("element is not in the source of the morphism".into()));
        }
        let coeffs = mat_mul(
            &phi.matrix,
            &m.coeffs().iter().map(|c| vec![c.clone()]).collect::<Vec<_>>(),
            &self.zero(),
        )
        .into_iter()
        .map(|mut r| r.pop().unwrap())
        .collect();
        Ok(self.bs.from_coeffs(&phi.target, coeffs))
    }

    /// `psi ∘ phi`.
    pub fn compose(&self, psi: &BSMorphism, phi: &BSMorphism) -> Result<BSMorphism> {
        if phi.target != psi.source {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose: target {} is not source {}",
                self.word_string(&phi.target),
                self.word_string(&psi.source)
            )));
        }
        Ok(BSMorphism {
            source: phi.source.clone(),
            target: psi.target.clone(),
            degree: phi.degree + psi.degree,
            matrix: mat_mul(&psi.matrix, &phi.matrix, &self.zero()),
        })
    }

    /// Composes a chain, applied left to right.
    pub fn compose_chain(&self, chain: &[BSMorphism]) -> Result<BSMorphism> {
        let mut it = chain.iter();
        let mut acc = it
            .next()
            .cloned()
            .ok_or_else(|| Error::ShapeMismatch("empty composition".into()))?;
        for next in it {
            acc = self.compose(next, &acc)?;
        }
        Ok(acc)
    }

    /// `phi ⊗ psi`.
    pub fn tensor_hom(&self, phi: &BSMorphism, psi: &BSMorphism) -> BSMorphism {
        let mut source = phi.source.clone();
        source.extend_from_slice(&psi.source);
        let mut target = phi.target.clone();
        target.extend_from_slice(&psi.target);
        let degree = phi.degree + psi.degree;
        let (ra, ca) = (phi.rows(), phi.cols());
        let (rb, cb) = (psi.rows(), psi.cols());
        let mut matrix = vec![vec![self.zero(); ca * cb]; ra * rb];
        if self.is_identity(psi) {
            // Tensoring with an identity on the right never moves polynomials
            // across a tensor sign, so the matrix is block diagonal.
            for k in 0..cb {
                for i in 0..ra {
                    for j in 0..ca {
                        matrix[i + ra * k][j + ca * k] = phi.matrix[i][j].clone();
                    }
                }
            }
        } else {
            let phi_cols: Vec<BSElement> = (0..ca)
                .map(|j| self.apply(phi, &self.bs.basis_elt(&phi.source, j)).unwrap())
                .collect();
            let psi_cols: Vec<BSElement> = (0..cb)
                .map(|j| self.apply(psi, &self.bs.basis_elt(&psi.source, j)).unwrap())
                .collect();
            for (k, n) in psi_cols.iter().enumerate() {
                for (j, m) in phi_cols.iter().enumerate() {
                    let t = self.bs.tensor(m, n);
                    for (i, c) in t.coeffs().iter().enumerate() {
                        matrix[i][j + ca * k] = c.clone();
                    }
                }
            }
        }
        BSMorphism {
            source,
            target,
            degree,
            matrix,
        }
    }

    /// `Id_left ⊗ phi ⊗ Id_right`.
    pub fn whisker(&self, left: &[Gen], phi: &BSMorphism, right: &[Gen]) -> BSMorphism {
        let mut out = phi.clone();
        if !left.is_empty() {
            out = self.tensor_hom(&self.identity(left), &out);
        }
        if !right.is_empty() {
            out = self.tensor_hom(&out, &self.identity(right));
        }
        out
    }

    fn word_string(&self, w: &[Gen]) -> String {
        self.system().matrix().word_string(w)
    }

    /// `m^s: B_s → R`, `f ⊗ g ↦ fg`, of degree 1.
    pub fn gen_m(&self, s: Gen) -> BSMorphism {
        let r = self.realization();
        BSMorphism {
            source: vec![s],
            target: vec![],
            degree: 1,
            matrix: vec![vec![r.one(), r.delta(s).clone()]],
        }
    }

    /// `B_s B_s → B_s`, `f ⊗ g ⊗ h ↦ f ∂_s(g) ⊗ h`, of degree −1.
    pub fn gen_i0(&self, s: Gen) -> BSMorphism {
        let r = self.realization();
        let mut matrix = vec![vec![self.zero(); 4]; 2];
        matrix[0][1] = r.one();
        matrix[1][3] = r.one();
        BSMorphism {
            source: vec![s, s],
            target: vec![s],
            degree: -1,
            matrix,
        }
    }

    /// `B_s B_s → R`, `f ⊗ g ⊗ h ↦ f ∂_s(g) h`, of degree 0.
    pub fn gen_i1(&self, s: Gen) -> BSMorphism {
        let r = self.realization();
        let mut matrix = vec![vec![self.zero(); 4]];
        matrix[0][1] = r.one();
        matrix[0][3] = r.delta(s).clone();
        BSMorphism {
            source: vec![s, s],
            target: vec![],
            degree: 0,
            matrix,
        }
    }

    /// Turns `φ: B_s ⊗ M → N` into `ψ: M → B_s ⊗ N`,
    /// `ψ(m) = 1 ⊗ φ(δ ⊗ m) − s(δ) ⊗ φ(1 ⊗ m)`.
    pub fn adjoint(&self, phi: &BSMorphism) -> Result<BSMorphism> {
        let Some((&s, m_word)) = phi.source.split_first() else {
            return Err(Error::ShapeMismatch("adjoint needs a source starting with a generator".into()));
        };
        let r = self.realization();
        let u = self.bs.u_elt(&[s]);
        let sdelta = r.act_gen(s, r.delta(s));
        let mut target = vec![s];
        target.extend_from_slice(&phi.target);
        let mut matrix = vec![vec![self.zero(); 1 << m_word.len()]; 1 << target.len()];
        for j in 0..1usize << m_word.len() {
            let with_delta = self.apply(phi, &self.bs.basis_elt(&phi.source, 1 + 2 * j))?;
            let plain = self.apply(phi, &self.bs.basis_elt(&phi.source, 2 * j))?;
            let col = self
                .bs
                .tensor(&u, &with_delta)
                .sub(&self.bs.tensor(&u, &plain).left_mul(&sdelta));
            for (i, c) in col.coeffs().iter().enumerate() {
                matrix[i][j] = c.clone();
            }
        }
        Ok(BSMorphism {
            source: m_word.to_vec(),
            target,
            degree: phi.degree,
            matrix,
        })
    }

    /// Inverse of [`Morphisms::adjoint`]: `(i₁ ⊗ Id_N) ∘ (Id_{B_s} ⊗ ψ)`.
    pub fn adjoint_inverse(&self, psi: &BSMorphism, s: Gen) -> Result<BSMorphism> {
        if psi.target.first() != Some(&s) {
            return Err(Error::ShapeMismatch("adjoint inverse needs a target starting with s".into()));
        }
        let lifted = self.tensor_hom(&self.identity(&[s]), psi);
        let contract = self.tensor_hom(&self.gen_i1(s), &self.identity(&psi.target[1..]));
        self.compose(&contract, &lifted)
    }

    /// `M · T^src_v = T^tgt_v · M` for every variable `v`.
    pub fn right_linearity_check(&self, phi: &BSMorphism) -> bool {
        let ts = self.bs.right_tables(&phi.source);
        let tt = self.bs.right_tables(&phi.target);
        ts.iter().zip(&tt).all(|(s, t)| {
            mat_mul(&phi.matrix, s, &self.zero()) == mat_mul(t, &phi.matrix, &self.zero())
        })
    }

    /// `P[f][e]`: coordinate `f` of `φ(N_e ε_e)`, where `ε_e` is the `e`-th
    /// coordinate vector of the source.
    pub fn p_matrix(&self, phi: &BSMorphism) -> Matrix {
        let c = self.bs.coordinate_matrix(&phi.target);
        let g = self.bs.lattice_generators(&phi.source);
        mat_mul(&mat_mul(&c, &phi.matrix, &self.zero()), &g, &self.zero())
    }

    /// Whether `φ` maps each source stalk into the target stalk of the same
    /// element.
    pub fn stalk_check(&self, phi: &BSMorphism) -> bool {
        let src = self.bs.data(&phi.source);
        let tgt = self.bs.data(&phi.target);
        let p = self.p_matrix(phi);
        p.iter().enumerate().all(|(f, row)| {
            row.iter()
                .enumerate()
                .all(|(e, x)| x.is_zero() || src.endpoints[e] == tgt.endpoints[f])
        })
    }

    /// Whether every entry is homogeneous of the degree forced by `φ.degree`.
    pub fn degree_check(&self, phi: &BSMorphism) -> bool {
        let src = self.bs.data(&phi.source);
        let tgt = self.bs.data(&phi.target);
        phi.matrix.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, x)| {
                x.is_zero()
                    || (x.is_homogeneous()
                        && x.grade() == Some(phi.degree + src.degrees[j] - tgt.degrees[i]))
            })
        })
    }

    /// The dual morphism `D(φ): B_y → B_x` under `D(B_x) ≅ B_x`.
    ///
    /// The isomorphism sends the functional reading coordinate `e` to
    /// `N_e ε_e`, so the coordinate matrix of `D(φ)` on the lattice generators
    /// is the transpose of that of `φ`.
    pub fn dualize(&self, phi: &BSMorphism) -> Result<BSMorphism> {
        let p = self.p_matrix(phi);
        let x = &phi.source;
        let y = &phi.target;
        let dy = self.bs.data(y);
        let cy = self.bs.coordinate_matrix(y);
        let (lcm, cofactors) = lcm_and_cofactors(
            (0..dy.rank()).map(|f| dy.denominator_factors(f)).collect(),
        );
        let nx = 1usize << x.len();
        let mut matrix = vec![vec![self.zero(); dy.rank()]; nx];
        for k in 0..dy.rank() {
            let mut coords = vec![self.zero(); nx];
            for (e, ce) in coords.iter_mut().enumerate() {
                for f in 0..dy.rank() {
                    let q = &p[f][e];
                    if q.is_zero() || cy[f][k].is_zero() {
                        continue;
                    }
                    ce.add_assign(&(&(q * &cy[f][k]) * &cofactors[f]));
                }
                *ce = ce.div_exact(&lcm).ok_or_else(|| {
                    Error::DivisionFailure("dual coordinates are not polynomial".into())
                })?;
            }
            let col = self.bs.element_from_coords(x, coords)?;
            for (i, c) in col.coeffs().iter().enumerate() {
                matrix[i][k] = c.clone();
            }
        }
        Ok(BSMorphism {
            source: y.clone(),
            target: x.clone(),
            degree: phi.degree,
            matrix,
        })
    }

    pub fn to_json(&self, phi: &BSMorphism) -> Value {
        let m = self.system().matrix();
        let mut out = Map::new();
        out.insert("source".into(), m.word_to_json(&phi.source));
        out.insert("target".into(), m.word_to_json(&phi.target));
        out.insert("degree".into(), Value::from(phi.degree));
        out.insert(
            "matrix".into(),
            Value::Array(
                phi.matrix
                    .iter()
                    .map(|row| Value::Array(row.iter().map(MultiPoly::to_json).collect()))
                    .collect(),
            ),
        );
        Value::Object(out)
    }

    pub fn from_json(&self, v: &Value) -> Result<BSMorphism> {
        let bad = |what: &str| Error::Parse(format!("malformed morphism: {what}"));
        let m = self.system().matrix();
        let source = m.word_from_json(v.get("source").ok_or_else(|| bad("missing source"))?)?;
        let target = m.word_from_json(v.get("target").ok_or_else(|| bad("missing target"))?)?;
        let degree = v
            .get("degree")
            .and_then(Value::as_i64)
            .ok_or_else(|| bad("missing degree"))? as i32;
        let rows = v
            .get("matrix")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing matrix"))?;
        let r = self.realization();
        let matrix: Matrix = rows
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| bad("matrix rows must be arrays"))?
                    .iter()
                    .map(|p| MultiPoly::from_json(p, r.nvars(), r.field()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        if matrix.len() != 1 << target.len()
            || matrix.iter().any(|row| row.len() != 1 << source.len())
        {
            return Err(Error::ShapeMismatch("matrix shape does not match the words".into()));
        }
        Ok(BSMorphism {
            source,
            target,
            degree,
            matrix,
        })
    }
}

/// Given products of linear forms, returns their least common multiple and
/// the cofactors `lcm / product`.
fn lcm_and_cofactors(products: Vec<&[MultiPoly]>) -> (MultiPoly, Vec<MultiPoly>) {
    let one = products[0][0].monic().pow(0);
    let mut distinct: Vec<(MultiPoly, usize)> = Vec::new();
    let mut counts: Vec<Vec<usize>> = Vec::new();
    let mut scalars = Vec::new();
    for factors in &products {
        let mut c = vec![0; distinct.len()];
        let mut scalar = one.clone();
        for f in factors.iter() {
            if f.is_constant() {
                scalar = &scalar * f;
                continue;
            }
            let m = f.monic();
            scalar = &scalar * &MultiPoly::constant(f.nvars(), f.leading_term().unwrap().1.clone());
            match distinct.iter().position(|(d, _)| *d == m) {
                Some(i) => {
                    if i >= c.len() {
                        c.resize(i + 1, 0);
                    }
                    c[i] += 1;
                }
                None => {
                    distinct.push((m, 0));
                    c.push(1);
                }
            }
        }
        counts.push(c);
        scalars.push(scalar);
    }
    for c in counts.iter_mut() {
        c.resize(distinct.len(), 0);
        for (i, k) in c.iter().enumerate() {
            distinct[i].1 = distinct[i].1.max(*k);
        }
    }
    let mut lcm = one.clone();
    for (d, k) in &distinct {
        lcm = &lcm * &d.pow(*k as u32);
    }
    let cofactors = counts
        .iter()
        .zip(&scalars)
        .map(|(c, scalar)| {
            let mut acc = MultiPoly::constant(one.nvars(), scalar.constant_term().inv().unwrap());
            for (i, (d, k)) in distinct.iter().enumerate() {
                acc = &acc * &d.pow((*k - c[i]) as u32);
            }
            acc
        })
        .collect();
    (lcm, cofactors)
}
