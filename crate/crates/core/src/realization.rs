//! Realizations `(V, {α_s}, {α_s^∨})` of a Coxeter system over a field, and the
//! induced action of `W` on `R = S(V)`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::coxeter::{CoxeterMatrix, CoxeterSystem, Element, Gen};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::poly::MultiPoly;
use crate::report::Report;

type Matrix = Vec<Vec<Scalar>>;

fn identity(n: usize, field: Field) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| field.from_i64((i == j) as i64)).collect())
        .collect()
}

fn mat_mul(a: &Matrix, b: &Matrix, field: Field) -> Matrix {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![field.zero(); m]; n];
    for i in 0..n {
        for (k, bk) in b.iter().enumerate() {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] = &out[i][j] + &(&a[i][k] * &bk[j]);
            }
        }
    }
    out
}

fn dot(a: &[Scalar], b: &[Scalar], field: Field) -> Scalar {
    a.iter()
        .zip(b)
        .fold(field.zero(), |acc, (x, y)| &acc + &(x * y))
}

/// Whether two vectors are linearly independent.
fn independent(a: &[Scalar], b: &[Scalar]) -> bool {
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if !(&(&a[i] * &b[j]) - &(&a[j] * &b[i])).is_zero() {
                return true;
            }
        }
    }
    false
}

/// Outcome of a GKM check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GkmResult {
    pub holds: bool,
    pub checked_reflections: usize,
    pub witness: Option<(Element, Element)>,
}

pub struct Realization {
    sys: Arc<CoxeterSystem>,
    field: Field,
    n: usize,
    alpha: Vec<Vec<Scalar>>,
    coroot: Vec<Vec<Scalar>>,
    delta: Vec<Vec<Scalar>>,
    delta_supplied: bool,
    gen_mats: Vec<Matrix>,
    alpha_polys: Vec<MultiPoly>,
    delta_polys: Vec<MultiPoly>,
    images: RwLock<HashMap<Element, Arc<Vec<MultiPoly>>>>,
    roots: RwLock<HashMap<Element, MultiPoly>>,
}

impl std::fmt::Debug for Realization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Realization")
            .field("matrix", self.sys.matrix())
            .field("field", &self.field)
            .field("n", &self.n)
            .finish_non_exhaustive()
    }
}

impl Realization {
    /// Builds a realization. `delta[s] = None` selects the default `δ_s`:
    /// `α_s / 2` when 2 is invertible, otherwise `e_i / ⟨α_s^∨, e_i⟩` for the
    /// first coordinate with a nonzero pairing.
    pub fn new(
        matrix: CoxeterMatrix,
        field: Field,
        n: usize,
        alpha: Vec<Vec<Scalar>>,
        coroot: Vec<Vec<Scalar>>,
        delta: Vec<Option<Vec<Scalar>>>,
    ) -> Result<Self> {
        let r = matrix.rank();
        if alpha.len() != r || coroot.len() != r || delta.len() != r {
            return Err(Error::Config(format!("expected data for {r} generators")));
        }
        let all = alpha.iter().chain(&coroot).chain(delta.iter().flatten());
        if all.clone().any(|v| v.len() != n) {
            return Err(Error::Config(format!("vectors must have {n} coordinates")));
        }
        if all.flatten().any(|c| c.field() != field) {
            return Err(Error::Config("coordinates belong to a different field".into()));
        }
        let delta_supplied = delta.iter().all(Option::is_some);
        let delta: Vec<Vec<Scalar>> = delta
            .into_iter()
            .enumerate()
            .map(|(s, d)| d.unwrap_or_else(|| default_delta(field, &alpha[s], &coroot[s])))
            .collect();
        let gen_mats = (0..r)
            .map(|s| {
                (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| &field.from_i64((i == j) as i64) - &(&alpha[s][i] * &coroot[s][j]))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let alpha_polys = alpha.iter().map(|a| MultiPoly::linear(field, a)).collect();
        let delta_polys = delta.iter().map(|d| MultiPoly::linear(field, d)).collect();
        Ok(Realization {
            sys: Arc::new(CoxeterSystem::new(matrix)),
            field,
            n,
            alpha,
            coroot,
            delta,
            delta_supplied,
            gen_mats,
            alpha_polys,
            delta_polys,
            images: RwLock::new(HashMap::new()),
            roots: RwLock::new(HashMap::new()),
        })
    }

    /// The Cartan realization of a generalized Cartan matrix `a` with
    /// `⟨α_i^∨, α_j⟩ = a[i][j]`, using the simple roots as a basis of `V`.
    pub fn cartan(matrix: CoxeterMatrix, cartan: &[Vec<i64>], field: Field) -> Result<Self> {
        let r = matrix.rank();
        let alpha = (0..r)
            .map(|i| (0..r).map(|j| field.from_i64((i == j) as i64)).collect())
            .collect();
        let coroot = cartan
            .iter()
            .map(|row| row.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        Realization::new(matrix, field, r, alpha, coroot, vec![None; r])
    }

    pub fn system(&self) -> &Arc<CoxeterSystem> {
        &self.sys
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Dimension of `V`, which is the number of polynomial variables.
    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn alpha_vec(&self, s: Gen) -> &[Scalar] {
        &self.alpha[s as usize]
    }

    pub fn coroot_vec(&self, s: Gen) -> &[Scalar] {
        &self.coroot[s as usize]
    }

    pub fn delta_vec(&self, s: Gen) -> &[Scalar] {
        &self.delta[s as usize]
    }

    pub fn delta_supplied(&self) -> bool {
        self.delta_supplied
    }

    pub fn alpha(&self, s: Gen) -> &MultiPoly {
        &self.alpha_polys[s as usize]
    }

    pub fn delta(&self, s: Gen) -> &MultiPoly {
        &self.delta_polys[s as usize]
    }

    pub fn zero(&self) -> MultiPoly {
        MultiPoly::zero(self.n, self.field)
    }

    pub fn one(&self) -> MultiPoly {
        MultiPoly::one(self.n, self.field)
    }

    pub fn constant(&self, c: i64) -> MultiPoly {
        MultiPoly::from_i64(self.n, self.field, c)
    }

    pub fn var(&self, i: usize) -> MultiPoly {
        MultiPoly::var(self.n, self.field, i)
    }

    /// The matrix of `w` acting on `V`.
    pub fn matrix_of(&self, w: &Element) -> Matrix {
        w.word().iter().fold(identity(self.n, self.field), |acc, &s| {
            mat_mul(&acc, &self.gen_mats[s as usize], self.field)
        })
    }

    fn variable_images(&self, w: &Element) -> Arc<Vec<MultiPoly>> {
        if let Some(v) = self.images.read().unwrap().get(w) {
            return v.clone();
        }
        let m = self.matrix_of(w);
        let images: Vec<MultiPoly> = (0..self.n)
            .map(|j| {
                let col: Vec<Scalar> = (0..self.n).map(|i| m[i][j].clone()).collect();
                MultiPoly::linear(self.field, &col)
            })
            .collect();
        let images = Arc::new(images);
        self.images.write().unwrap().insert(w.clone(), images.clone());
        images
    }

    /// `w(f)`.
    pub fn act(&self, w: &Element, f: &MultiPoly) -> MultiPoly {
        if w.is_identity() || f.is_constant() {
            return f.clone();
        }
        f.substitute(&self.variable_images(w))
    }

    /// `s(f)`.
    pub fn act_gen(&self, s: Gen, f: &MultiPoly) -> MultiPoly {
        self.act(&self.sys.generator(s), f)
    }

    /// `∂_s(f) = (f - s(f)) / α_s`.
    pub fn demazure(&self, s: Gen, f: &MultiPoly) -> Result<MultiPoly> {
        let diff = f - &self.act_gen(s, f);
        diff.div_exact(self.alpha(s)).ok_or_else(|| {
            Error::DivisionFailure(format!("{diff} is not divisible by {}", self.alpha(s)))
        })
    }

    /// `f = a + δ_s b` with `a, b` both `s`-invariant.
    pub fn delta_split(&self, s: Gen, f: &MultiPoly) -> Result<(MultiPoly, MultiPoly)> {
        let b = self.demazure(s, f)?;
        let a = f - &(self.delta(s) * &b);
        Ok((a, b))
    }

    /// `α_t = w(α_s)` for the fixed decomposition `t = w s w⁻¹`.
    pub fn root_of_reflection(&self, t: &Element) -> Result<MultiPoly> {
        if let Some(r) = self.roots.read().unwrap().get(t) {
            return Ok(r.clone());
        }
        let (s, w) = self.sys.reflection_data(t)?;
        let root = self.act(&w, self.alpha(s));
        self.roots.write().unwrap().insert(t.clone(), root.clone());
        Ok(root)
    }

    /// `α_t^∨ = w(α_s^∨)` as a functional, for the same decomposition.
    pub fn coroot_of_reflection(&self, t: &Element) -> Result<Vec<Scalar>> {
        let (s, w) = self.sys.reflection_data(t)?;
        Ok(self.transport_coroot(&w, s))
    }

    /// The functional `v ↦ ⟨α_s^∨, w⁻¹ v⟩`.
    pub fn transport_coroot(&self, w: &Element, s: Gen) -> Vec<Scalar> {
        let m = self.matrix_of(&self.sys.inverse(w));
        let c = &self.coroot[s as usize];
        (0..self.n)
            .map(|j| (0..self.n).fold(self.field.zero(), |acc, i| &acc + &(&c[i] * &m[i][j])))
            .collect()
    }

    pub fn pairing(&self, functional: &[Scalar], v: &[Scalar]) -> Scalar {
        dot(functional, v, self.field)
    }

    /// Checks the defining assumptions on the data and reports the rank-2
    /// sufficient condition for braid morphisms as a warning.
    pub fn validate(&self) -> Report {
        let f = self.field;
        let names = self.sys.matrix().names().to_vec();
        let mut rep = Report::new("realization");
        rep.choices.push(format!("field {f}"));
        if !self.delta_supplied {
            rep.choices.push(if f.two_is_invertible() {
                "delta_s = alpha_s / 2".into()
            } else {
                "delta_s = e_i / <coroot_s, e_i> for the first i with nonzero pairing".into()
            });
        }
        for s in self.sys.matrix().generators() {
            let name = &names[s as usize];
            let p = self.pairing(self.coroot_vec(s), self.alpha_vec(s));
            rep.check(
                format!("pairing {name}"),
                "<coroot_s, alpha_s> = 2",
                p == f.from_i64(2),
                format!("got {p}"),
            );
            rep.check(
                format!("root nonzero {name}"),
                "alpha_s != 0",
                self.alpha_vec(s).iter().any(|c| !c.is_zero()),
                "",
            );
            rep.check(
                format!("coroot surjective {name}"),
                "coroot_s: V -> K is surjective",
                self.coroot_vec(s).iter().any(|c| !c.is_zero()),
                "",
            );
            let d = self.pairing(self.coroot_vec(s), self.delta_vec(s));
            rep.check(
                format!("delta {name}"),
                "<coroot_s, delta_s> = 1",
                d.is_one(),
                format!("got {d}"),
            );
            let m = &self.gen_mats[s as usize];
            rep.check(
                format!("involution {name}"),
                "s^2 = 1 on V",
                mat_mul(m, m, f) == identity(self.n, f),
                "",
            );
        }
        for s in self.sys.matrix().generators() {
            for t in self.sys.matrix().generators().filter(|&t| t > s) {
                self.validate_pair(s, t, &mut rep);
            }
        }
        rep
    }

    fn validate_pair(&self, s: Gen, t: Gen, rep: &mut Report) {
        let f = self.field;
        let names = self.sys.matrix().names();
        let pair = format!("{}{}", names[s as usize], names[t as usize]);
        let st = mat_mul(&self.gen_mats[s as usize], &self.gen_mats[t as usize], f);
        let id = identity(self.n, f);
        let mut powers = vec![id.clone()];
        let bound = self.sys.matrix().order(s, t).unwrap_or(12) as usize;
        for _ in 0..bound {
            let next = mat_mul(powers.last().unwrap(), &st, f);
            powers.push(next);
        }
        match self.sys.matrix().order(s, t) {
            Some(m) => {
                let m = m as usize;
                rep.check(
                    format!("braid relation {pair}"),
                    "(st)^m_st = 1 on V",
                    powers[m] == id,
                    "",
                );
                // Faithfulness of the dihedral group: its 2m elements act by
                // distinct matrices.
                let mut mats: Vec<Matrix> = powers[..m].to_vec();
                mats.extend(powers[..m].iter().map(|p| mat_mul(p, &self.gen_mats[s as usize], f)));
                let distinct = (0..mats.len()).all(|i| (i + 1..mats.len()).all(|j| mats[i] != mats[j]));
                rep.check(
                    format!("dihedral faithfulness {pair}"),
                    "W_{s,t} acts faithfully on V",
                    distinct,
                    "",
                );
                self.sufficient_condition(s, t, m, &pair, rep);
            }
            None => {
                let finite = powers[1..].iter().any(|p| *p == id);
                rep.check(
                    format!("infinite order {pair}"),
                    "st has infinite order on V",
                    !finite,
                    "checked up to exponent 12",
                );
            }
        }
    }

    /// For distinct reflections `t₁, t₂` of the dihedral subgroup, some `v`
    /// has `⟨v, α_{t₁}^∨⟩ = 0` and `⟨v, α_{t₂}^∨⟩ = 1`, which holds exactly when
    /// the two coroots are linearly independent.
    fn sufficient_condition(&self, s: Gen, t: Gen, m: usize, pair: &str, rep: &mut Report) {
        let mut coroots = Vec::new();
        let mut w = Element::identity();
        let (mut a, mut b) = (s, t);
        for _ in 0..m {
            coroots.push(self.transport_coroot(&w, a));
            w = self.sys.mul_gen(&w, a);
            std::mem::swap(&mut a, &mut b);
        }
        let ok = (0..m).all(|i| (i + 1..m).all(|j| independent(&coroots[i], &coroots[j])));
        rep.warn(
            format!("rank-2 sufficient condition {pair}"),
            "for distinct reflections t1, t2 in W_{s,t} some v has <v, coroot_t1> = 0 and <v, coroot_t2> = 1",
            ok,
            if ok { "" } else { "braid morphisms are left to the solver" },
        );
    }

    /// Pairwise linear independence of `α_t` over reflections of length ≤ `len`.
    pub fn gkm_check(&self, len: usize) -> GkmResult {
        let refl: Vec<Element> = self.sys.reflections_upto(len).into_iter().collect();
        let roots: Vec<Vec<Scalar>> = refl
            .iter()
            .map(|t| self.root_of_reflection(t).unwrap().linear_coeffs())
            .collect();
        for i in 0..refl.len() {
            for j in i + 1..refl.len() {
                if !independent(&roots[i], &roots[j]) {
                    return GkmResult {
                        holds: false,
                        checked_reflections: refl.len(),
                        witness: Some((refl[i].clone(), refl[j].clone())),
                    };
                }
            }
        }
        GkmResult {
            holds: true,
            checked_reflections: refl.len(),
            witness: None,
        }
    }
}

fn default_delta(field: Field, alpha: &[Scalar], coroot: &[Scalar]) -> Vec<Scalar> {
    if field.two_is_invertible() {
        let half = field.from_i64(2).inv().unwrap();
        return alpha.iter().map(|a| a * &half).collect();
    }
    let mut d = vec![field.zero(); alpha.len()];
    if let Some(i) = coroot.iter().position(|c| !c.is_zero()) {
        d[i] = coroot[i].inv().unwrap();
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2(field: Field) -> Realization {
        Realization::cartan(CoxeterMatrix::dihedral(3), &[vec![2, -1], vec![-1, 2]], field).unwrap()
    }

    #[test]
    fn generator_acts_on_its_root() {
        let r = a2(Field::Rational);
        assert_eq!(r.act_gen(0, r.alpha(0)), -r.alpha(0));
        assert_eq!(r.act_gen(0, r.delta(0)), r.delta(0) - r.alpha(0));
        assert_eq!(r.demazure(0, r.alpha(0)).unwrap(), r.constant(2));
        assert_eq!(r.demazure(0, &r.one()).unwrap(), r.zero());
        assert_eq!(r.demazure(0, r.delta(0)).unwrap(), r.one());
    }

    #[test]
    fn a2_validates() {
        let rep = a2(Field::Rational).validate();
        assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
        assert!(rep.checks.iter().all(|c| c.passed));
    }

    #[test]
    fn characteristic_two_default_delta() {
        let r = a2(Field::Prime(2));
        let d = r.pairing(r.coroot_vec(0), r.delta_vec(0));
        assert!(d.is_one());
    }
}
