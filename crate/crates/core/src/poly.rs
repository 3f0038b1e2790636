//! The polynomial ring `R = S(V)` with coefficients in a [`Field`].
//!
//! Variables are the coordinates of `V`, each of degree 2. Terms are kept in a
//! `BTreeMap` keyed by exponent vectors, so iteration follows lexicographic
//! order and the leading term is the last entry.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use serde_json::Value;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

pub type Exps = SmallVec<[u32; 4]>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    field: Field,
    terms: BTreeMap<Exps, Scalar>,
}

impl MultiPoly {
    pub fn zero(nvars: usize, field: Field) -> Self {
        MultiPoly {
            nvars,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let mut p = MultiPoly::zero(nvars, c.field());
        if !c.is_zero() {
            p.terms.insert(SmallVec::from_elem(0, nvars), c);
        }
        p
    }

    pub fn one(nvars: usize, field: Field) -> Self {
        MultiPoly::constant(nvars, field.one())
    }

    pub fn from_i64(nvars: usize, field: Field, n: i64) -> Self {
        MultiPoly::constant(nvars, field.from_i64(n))
    }

    pub fn var(nvars: usize, field: Field, i: usize) -> Self {
        let mut e: Exps = SmallVec::from_elem(0, nvars);
        e[i] = 1;
        MultiPoly::monomial(nvars, e, field.one())
    }

    pub fn monomial(nvars: usize, exps: Exps, c: Scalar) -> Self {
        let field = c.field();
        let mut p = MultiPoly::zero(nvars, field);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// The linear form `Σ cᵢ xᵢ`.
    pub fn linear(field: Field, coeffs: &[Scalar]) -> Self {
        let n = coeffs.len();
        let mut p = MultiPoly::zero(n, field);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e: Exps = SmallVec::from_elem(0, n);
                e[i] = 1;
                p.terms.insert(e, c.clone());
            }
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn constant_term(&self) -> Scalar {
        self.terms
            .get(&SmallVec::<[u32; 4]>::from_elem(0, self.nvars))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// Polynomial degree in the variables (`None` for zero).
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Degree in the grading where each variable has degree 2.
    pub fn grade(&self) -> Option<i32> {
        self.total_degree().map(|d| 2 * d as i32)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    /// The part of polynomial degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> MultiPoly {
        let mut p = MultiPoly::zero(self.nvars, self.field);
        for (e, c) in &self.terms {
            if e.iter().sum::<u32>() == d {
                p.terms.insert(e.clone(), c.clone());
            }
        }
        p
    }

    /// Coefficient vector of a linear form.
    pub fn linear_coeffs(&self) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.nvars];
        for (e, c) in &self.terms {
            if let Some(i) = e.iter().position(|&x| x == 1) {
                if e.iter().sum::<u32>() == 1 {
                    out[i] = c.clone();
                }
            }
        }
        out
    }

    pub fn leading_term(&self) -> Option<(&Exps, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn coeff(&self, e: &[u32]) -> Scalar {
        self.terms
            .get(e)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn scale(&self, c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.nvars, self.field);
        }
        MultiPoly {
            nvars: self.nvars,
            field: self.field,
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (e.clone(), a * c))
                .collect(),
        }
    }

    /// Makes the leading coefficient 1. Zero stays zero.
    pub fn monic(&self) -> MultiPoly {
        match self.leading_term() {
            Some((_, c)) => self.scale(&c.inv().unwrap()),
            None => self.clone(),
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &Scalar, other: &MultiPoly) {
        if c.is_zero() {
            return;
        }
        for (e, a) in &other.terms {
            self.add_term(e, &(a * c));
        }
    }

    fn add_term(&mut self, e: &Exps, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(e) {
            Some(v) => {
                let s = &*v + c;
                if s.is_zero() {
                    self.terms.remove(e);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(e.clone(), c.clone());
            }
        }
    }

    pub fn add_assign(&mut self, other: &MultiPoly) {
        for (e, a) in &other.terms {
            self.add_term(e, a);
        }
    }

    pub fn sub_assign(&mut self, other: &MultiPoly) {
        for (e, a) in &other.terms {
            self.add_term(e, &-a);
        }
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(self.nvars, self.field);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact division. Returns `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        let (de, dc) = d.leading_term()?;
        let dc_inv = dc.inv().unwrap();
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(self.nvars, self.field);
        while let Some((re, rc)) = rem.leading_term() {
            let mut qe: Exps = SmallVec::with_capacity(self.nvars);
            for (a, b) in re.iter().zip(de.iter()) {
                if a < b {
                    return None;
                }
                qe.push(a - b);
            }
            let qc = rc * &dc_inv;
            let q = MultiPoly::monomial(self.nvars, qe, qc);
            rem.sub_assign(&(&q * d));
            quot.add_assign(&q);
        }
        Some(quot)
    }

    pub fn divides(&self, other: &MultiPoly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_exact(self).is_some()
    }

    /// Substitutes `xᵢ ↦ images[i]`.
    pub fn substitute(&self, images: &[MultiPoly]) -> MultiPoly {
        assert_eq!(images.len(), self.nvars, "substitution arity");
        let target_vars = images.first().map_or(self.nvars, |p| p.nvars);
        let mut out = MultiPoly::zero(target_vars, self.field);
        let mut powers: Vec<Vec<MultiPoly>> = images
            .iter()
            .map(|p| vec![MultiPoly::one(target_vars, self.field), p.clone()])
            .collect();
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(target_vars, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][k as usize];
            }
            out.add_assign(&t);
        }
        out
    }

    /// Evaluates all variables at scalars.
    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        let mut acc = self.field.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e.iter()) {
                for _ in 0..k {
                    t = &t * x;
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// All monomials of polynomial degree `d` in `n` variables, in lex order.
    pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Exps> {
        let mut out = Vec::new();
        let mut cur: Exps = SmallVec::from_elem(0, n);
        fn rec(i: usize, left: u32, cur: &mut Exps, out: &mut Vec<Exps>) {
            let n = cur.len();
            if n == 0 {
                if left == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            if i == n - 1 {
                cur[i] = left;
                out.push(cur.clone());
                return;
            }
            for k in 0..=left {
                cur[i] = k;
                rec(i + 1, left - k, cur, out);
            }
            cur[i] = 0;
        }
        rec(0, d, &mut cur, &mut out);
        out.sort();
        out
    }

    /// A random polynomial of polynomial degree at most `max_deg` with small
    /// integer coefficients.
    pub fn random<G: Rng>(rng: &mut G, nvars: usize, field: Field, max_deg: u32, terms: usize) -> Self {
        let mut p = MultiPoly::zero(nvars, field);
        for _ in 0..terms {
            let d = rng.gen_range(0..=max_deg);
            let mut e: Exps = SmallVec::from_elem(0, nvars);
            let mut left = d;
            for slot in e.iter_mut().take(nvars.saturating_sub(1)) {
                let k = rng.gen_range(0..=left);
                *slot = k;
                left -= k;
            }
            if nvars > 0 {
                e[nvars - 1] = left;
            }
            let c = field.from_i64(rng.gen_range(-5..=5));
            p.add_term(&e, &c);
        }
        p
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(e, c)| {
                    Value::Array(vec![
                        Value::Array(e.iter().map(|&x| Value::from(x)).collect()),
                        Value::String(c.to_string()),
                    ])
                })
                .collect(),
        )
    }

    pub fn from_json(v: &Value, nvars: usize, field: Field) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed polynomial {v}"));
        let mut p = MultiPoly::zero(nvars, field);
        for term in v.as_array().ok_or_else(bad)? {
            let pair = term.as_array().ok_or_else(bad)?;
            if pair.len() != 2 {
                return Err(bad());
            }
            let exps: Exps = pair[0]
                .as_array()
                .ok_or_else(bad)?
                .iter()
                .map(|x| x.as_u64().map(|k| k as u32).ok_or_else(bad))
                .collect::<Result<_>>()?;
            if exps.len() != nvars {
                return Err(bad());
            }
            let c = match &pair[1] {
                Value::String(s) => field.parse(s)?,
                Value::Number(n) => field.from_i64(n.as_i64().ok_or_else(bad)?),
                _ => return Err(bad()),
            };
            p.add_term(&exps, &c);
        }
        Ok(p)
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out.sub_assign(rhs);
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            field: self.field,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars, self.field);
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                let e: Exps = a.iter().zip(b.iter()).map(|(x, y)| x + y).collect();
                out.add_term(&e, &(ca * cb));
            }
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let constant = e.iter().all(|&x| x == 0);
            let mut text = c.to_string();
            let negative = c.is_negative();
            if negative {
                text.remove(0);
            }
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit = text == "1";
            if constant {
                write!(f, "{text}")?;
                continue;
            }
            let mut first = true;
            if !unit {
                write!(f, "{text}")?;
                first = false;
            }
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "x{i}")?;
                if x > 1 {
                    write!(f, "^{x}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
