//! The Hecke algebra over `ℤ[v, v⁻¹]` in the standard basis `{H_w}`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use serde_json::{Map, Value};

use crate::coxeter::{CoxeterSystem, Element, Gen};
use crate::error::{Error, Result};
use crate::laurent::{GradedRank, LaurentPoly};

/// A finite combination `Σ a_w H_w`.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct HeckeElt {
    terms: BTreeMap<Element, LaurentPoly>,
}

impl HeckeElt {
    pub fn zero() -> Self {
        HeckeElt::default()
    }

    /// `a·H_w`.
    pub fn term(w: Element, a: LaurentPoly) -> Self {
        let mut h = HeckeElt::zero();
        h.add_term(w, &a);
        h
    }

    pub fn std(w: Element) -> Self {
        HeckeElt::term(w, LaurentPoly::one())
    }

    pub fn scalar(a: LaurentPoly) -> Self {
        HeckeElt::term(Element::identity(), a)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Element) -> LaurentPoly {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Element, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, w: Element, a: &LaurentPoly) {
        if a.is_zero() {
            return;
        }
        let entry = self.terms.entry(w.clone()).or_default();
        *entry = &*entry + a;
        if entry.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add(&self, other: &HeckeElt) -> HeckeElt {
        let mut out = self.clone();
        for (w, a) in &other.terms {
            out.add_term(w.clone(), a);
        }
        out
    }

    pub fn sub(&self, other: &HeckeElt) -> HeckeElt {
        self.add(&other.scale(&LaurentPoly::monomial(0, -1)))
    }

    pub fn scale(&self, a: &LaurentPoly) -> HeckeElt {
        let mut out = HeckeElt::zero();
        for (w, b) in &self.terms {
            out.add_term(w.clone(), &(a * b));
        }
        out
    }
}

/// The Hecke algebra of a Coxeter system.
#[derive(Clone, Debug)]
pub struct Hecke {
    sys: Arc<CoxeterSystem>,
}

impl Hecke {
    pub fn new(sys: Arc<CoxeterSystem>) -> Self {
        Hecke { sys }
    }

    pub fn system(&self) -> &Arc<CoxeterSystem> {
        &self.sys
    }

    /// `h·H_s`, using `H_w H_s = H_{ws}` when `ws > w` and
    /// `H_{ws} + (v⁻¹ - v) H_w` otherwise.
    pub fn mul_gen(&self, h: &HeckeElt, s: Gen) -> HeckeElt {
        let q = &LaurentPoly::v_inv() - &LaurentPoly::v();
        let mut out = HeckeElt::zero();
        for (w, a) in &h.terms {
            let ws = self.sys.mul_gen(w, s);
            let down = ws.len() < w.len();
            out.add_term(ws, a);
            if down {
                out.add_term(w.clone(), &(a * &q));
            }
        }
        out
    }

    pub fn mul(&self, a: &HeckeElt, b: &HeckeElt) -> HeckeElt {
        let mut out = HeckeElt::zero();
        for (x, c) in &b.terms {
            let mut t = a.clone();
            for &s in x.word() {
                t = self.mul_gen(&t, s);
            }
            out = out.add(&t.scale(c));
        }
        out
    }

    /// `H̲_s = H_s + v`.
    pub fn kl_gen(&self, s: Gen) -> HeckeElt {
        let mut h = HeckeElt::std(self.sys.generator(s));
        h.add_term(Element::identity(), &LaurentPoly::v());
        h
    }

    /// `H̲_x = H̲_{s₁}⋯H̲_{s_l}`.
    pub fn bott_samelson_elt(&self, word: &[Gen]) -> HeckeElt {
        let v = LaurentPoly::v();
        let mut h = HeckeElt::std(Element::identity());
        for &s in word {
            h = self.mul_gen(&h, s).add(&h.scale(&v));
        }
        h
    }

    pub fn p_polynomials(&self, word: &[Gen]) -> BTreeMap<Element, LaurentPoly> {
        self.bott_samelson_elt(word).terms
    }

    /// `H_w⁻¹ = H_{s_l}⁻¹⋯H_{s₁}⁻¹` with `H_s⁻¹ = H_s + (v - v⁻¹)`.
    pub fn std_inverse(&self, w: &Element) -> HeckeElt {
        let q = &LaurentPoly::v() - &LaurentPoly::v_inv();
        let mut h = HeckeElt::std(Element::identity());
        for &s in w.word().iter().rev() {
            h = self.mul_gen(&h, s).add(&h.scale(&q));
        }
        h
    }

    /// `Σ a_w(v) H_w ↦ Σ a_w(v⁻¹) H_{w⁻¹}⁻¹`.
    pub fn bar(&self, h: &HeckeElt) -> HeckeElt {
        let mut out = HeckeElt::zero();
        for (w, a) in &h.terms {
            out = out.add(&self.std_inverse(&self.sys.inverse(w)).scale(&a.bar()));
        }
        out
    }

    /// `Σ a_w(v) H_w ↦ Σ a_w(v⁻¹) H_w⁻¹`.
    pub fn omega(&self, h: &HeckeElt) -> HeckeElt {
        let mut out = HeckeElt::zero();
        for (w, a) in &h.terms {
            out = out.add(&self.std_inverse(w).scale(&a.bar()));
        }
        out
    }

    /// The coefficient of `H_e`.
    pub fn epsilon(&self, h: &HeckeElt) -> LaurentPoly {
        h.coeff(&Element::identity())
    }

    pub fn epsilon_bar(&self, h: &HeckeElt) -> LaurentPoly {
        self.epsilon(&self.bar(h)).bar()
    }

    /// `Σ_{e : x^e = w} v^{d(e)}`.
    pub fn defect_sum(&self, word: &[Gen], w: &Element) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for sub in self.sys.subsequences(word) {
            if &sub.endpoint == w {
                p.add_term(sub.defect, &BigInt::one());
            }
        }
        p
    }

    /// Defect sums for every endpoint at once.
    pub fn defect_sums(&self, word: &[Gen]) -> BTreeMap<Element, LaurentPoly> {
        let mut out: BTreeMap<Element, LaurentPoly> = BTreeMap::new();
        for sub in self.sys.subsequences(word) {
            out.entry(sub.endpoint)
                .or_default()
                .add_term(sub.defect, &BigInt::one());
        }
        out
    }

    pub fn defect_formula_check(&self, word: &[Gen], w: &Element) -> bool {
        self.defect_sum(word, w) == self.bott_samelson_elt(word).coeff(w)
    }

    /// `Σ_w v^{ℓ(w)} p^w(v⁻¹) = (v + v⁻¹)^l`.
    pub fn sum_formula_check(&self, word: &[Gen]) -> bool {
        let mut lhs = LaurentPoly::zero();
        for (w, p) in self.p_polynomials(word) {
            lhs = &lhs + &p.bar().shift(w.len() as i32);
        }
        let rhs = (&LaurentPoly::v() + &LaurentPoly::v_inv()).pow(word.len() as u32);
        lhs == rhs
    }

    /// `p_{(s_l,…,s₁)}^{w⁻¹} = p_{(s₁,…,s_l)}^w` for every `w`.
    pub fn reversal_check(&self, word: &[Gen]) -> bool {
        let rev: Vec<Gen> = word.iter().rev().copied().collect();
        let forward = self.p_polynomials(word);
        let backward = self.p_polynomials(&rev);
        forward.len() == backward.len()
            && forward
                .iter()
                .all(|(w, p)| backward.get(&self.sys.inverse(w)) == Some(p))
    }

    /// `Σ_w p_x^w(v⁻¹) p_y^w(v⁻¹)`.
    pub fn hom_rank_formula(&self, x: &[Gen], y: &[Gen]) -> GradedRank {
        let px = self.p_polynomials(x);
        let py = self.p_polynomials(y);
        let mut total = LaurentPoly::zero();
        for (w, a) in &px {
            if let Some(b) = py.get(w) {
                total = &total + &(&a.bar() * &b.bar());
            }
        }
        GradedRank::new(total).expect("p-polynomials have nonnegative coefficients")
    }

    /// `Σ_w v^{-ℓ(w)} grk(B^w) H_w`.
    pub fn character_of_ranks(&self, ranks: &BTreeMap<Element, GradedRank>) -> HeckeElt {
        let mut out = HeckeElt::zero();
        for (w, r) in ranks {
            out.add_term(w.clone(), &r.poly().shift(-(w.len() as i32)));
        }
        out
    }

    pub fn to_json(&self, h: &HeckeElt) -> Value {
        let m = self.sys.matrix();
        let mut map = Map::new();
        for (w, a) in &h.terms {
            map.insert(m.word_string(w.word()), a.to_json());
        }
        Value::Object(map)
    }

    pub fn from_json(&self, v: &Value) -> Result<HeckeElt> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse(format!("Hecke element expected, got {v}")))?;
        let mut h = HeckeElt::zero();
        for (k, a) in obj {
            let w = self.sys.normalize(&self.sys.matrix().parse_word(k)?);
            h.add_term(w, &LaurentPoly::from_json(a)?);
        }
        Ok(h)
    }

    pub fn display<'a>(&'a self, h: &'a HeckeElt) -> HeckeDisplay<'a> {
        HeckeDisplay { hecke: self, h }
    }

    /// Evaluates an expression such as `(H(s)+v)*Hb(st) - 2*v^-1*H(e)`.
    ///
    /// `H(w)` is a standard basis element and `Hb(w)` the product `H̲_w` over the
    /// letters of `w`.
    pub fn parse_expr(&self, text: &str) -> Result<HeckeElt> {
        let mut p = ExprParser {
            hecke: self,
            chars: text.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
        };
        let h = p.expr()?;
        if p.pos != p.chars.len() {
            return Err(p.error("trailing input"));
        }
        Ok(h)
    }
}

pub struct HeckeDisplay<'a> {
    hecke: &'a Hecke,
    h: &'a HeckeElt,
}

/// Longest elements first, for example `H_s + v`.
impl fmt::Display for HeckeDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.h.is_zero() {
            return write!(f, "0");
        }
        let m = self.hecke.sys.matrix();
        for (k, (w, a)) in self.h.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let basis = format!("H_{}", m.word_string(w.word()));
            if w.is_identity() && a.is_compound() && self.h.terms.len() > 1 {
                write!(f, "({a})")?;
            } else if w.is_identity() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{basis}")?;
            } else if a.is_compound() {
                write!(f, "({a})*{basis}")?;
            } else {
                write!(f, "{a}*{basis}")?;
            }
        }
        Ok(())
    }
}

struct ExprParser<'a> {
    hecke: &'a Hecke,
    chars: Vec<char>,
    pos: usize,
}

impl ExprParser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at position {} of Hecke expression", self.pos))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<HeckeElt> {
        let mut acc = if self.eat('-') {
            self.term()?.scale(&LaurentPoly::monomial(0, -1))
        } else {
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<HeckeElt> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            let rhs = self.factor()?;
            acc = self.hecke.mul(&acc, &rhs);
        }
        Ok(acc)
    }

    fn integer(&mut self) -> Result<i64> {
        let neg = self.eat('-');
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        let n: i64 = digits.parse().map_err(|_| self.error("integer expected"))?;
        Ok(if neg { -n } else { n })
    }

    fn factor(&mut self) -> Result<HeckeElt> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let k = self.integer()?;
        if k < 0 {
            // Only powers of v may be negative.
            let v = HeckeElt::scalar(LaurentPoly::v());
            if base != v {
                return Err(self.error("negative power of a non-monomial"));
            }
            return Ok(HeckeElt::scalar(LaurentPoly::monomial(k as i32, 1)));
        }
        let mut acc = HeckeElt::std(Element::identity());
        for _ in 0..k {
            acc = self.hecke.mul(&acc, &base);
        }
        Ok(acc)
    }

    fn word_arg(&mut self) -> Result<Vec<Gen>> {
        if !self.eat('(') {
            return Err(self.error("'(' expected"));
        }
        let start = self.pos;
        while self.peek().is_some_and(|c| c != ')') {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        if !self.eat(')') {
            return Err(self.error("')' expected"));
        }
        self.hecke.sys.matrix().parse_word(&text)
    }

    fn atom(&mut self) -> Result<HeckeElt> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let h = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("')' expected"));
                }
                Ok(h)
            }
            Some('v') => {
                self.pos += 1;
                Ok(HeckeElt::scalar(LaurentPoly::v()))
            }
            Some('H') => {
                self.pos += 1;
                if self.eat('b') {
                    let w = self.word_arg()?;
                    Ok(self.hecke.bott_samelson_elt(&w))
                } else {
                    let w = self.word_arg()?;
                    Ok(HeckeElt::std(self.hecke.sys.normalize(&w)))
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(HeckeElt::scalar(LaurentPoly::monomial(0, n)))
            }
            _ => Err(self.error("unexpected character")),
        }
    }
}
