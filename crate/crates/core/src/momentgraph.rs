//! The structure algebra `𝒵` of the moment graph on a finite set `I ⊂ W`:
//! tuples `(z_w)_{w∈I}` with `z_{tw} ≡ z_w mod α_t` whenever `w, tw ∈ I`.
//!
//! Only reflections of length at most `L` are considered, so every statement
//! here is relative to that bound.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::Rng;
use serde_json::{Map, Value};

use crate::bimodule::{BSElement, BottSamelson};
use crate::coxeter::{Element, Gen};
use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::realization::Realization;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZElement {
    pub values: BTreeMap<Element, MultiPoly>,
    /// Bound on the length of the reflections that were checked.
    pub bound: usize,
}

impl ZElement {
    pub fn set(&self) -> BTreeSet<Element> {
        self.values.keys().cloned().collect()
    }

    pub fn value(&self, w: &Element) -> Option<&MultiPoly> {
        self.values.get(w)
    }

    fn zip(&self, other: &ZElement, op: impl Fn(&MultiPoly, &MultiPoly) -> MultiPoly) -> ZElement {
        assert_eq!(self.set(), other.set(), "elements over different sets");
        ZElement {
            values: self
                .values
                .iter()
                .map(|(w, a)| (w.clone(), op(a, &other.values[w])))
                .collect(),
            bound: self.bound.min(other.bound),
        }
    }

    pub fn add(&self, other: &ZElement) -> ZElement {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ZElement) -> ZElement {
        self.zip(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &ZElement) -> ZElement {
        self.zip(other, |a, b| a * b)
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(MultiPoly::is_zero)
    }
}

/// An edge from `w` to `tw` along which a congruence fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub w: Element,
    pub tw: Element,
    pub reflection: Element,
}

/// Moment-graph computations over one realization with a fixed reflection
/// length bound.
#[derive(Debug)]
pub struct MomentGraph {
    bs: Arc<BottSamelson>,
    bound: usize,
    reflections: BTreeSet<Element>,
}

impl MomentGraph {
    pub fn new(bs: Arc<BottSamelson>, bound: usize) -> Self {
        let reflections = bs.system().reflections_upto(bound);
        MomentGraph {
            bs,
            bound,
            reflections,
        }
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn realization(&self) -> &Arc<Realization> {
        self.bs.realization()
    }

    fn name(&self, w: &Element) -> String {
        self.bs.system().matrix().word_string(w.word())
    }

    /// Edges `(w, tw, t)` of the moment graph restricted to `set`.
    pub fn edges(&self, set: &BTreeSet<Element>) -> Vec<(Element, Element, Element)> {
        let sys = self.bs.system();
        let mut out = Vec::new();
        for w in set {
            let winv = sys.inverse(w);
            for x in set.range(w.clone()..).skip(1) {
                let t = sys.multiply(x, &winv);
                if self.reflections.contains(&t) {
                    out.push((w.clone(), x.clone(), t));
                }
            }
        }
        out
    }

    /// Checks every congruence, returning the first failing edge.
    pub fn is_in_z(&self, z: &ZElement) -> std::result::Result<(), Witness> {
        let r = self.realization();
        for (w, tw, t) in self.edges(&z.set()) {
            let root = r.root_of_reflection(&t).expect("edges are labelled by reflections");
            if !root.divides(&(&z.values[&tw] - &z.values[&w])) {
                return Err(Witness { w, tw, reflection: t });
            }
        }
        Ok(())
    }

    pub fn from_values(&self, values: BTreeMap<Element, MultiPoly>) -> ZElement {
        ZElement {
            values,
            bound: self.bound,
        }
    }

    /// `(w(f))_{w∈I}`.
    pub fn diagonal_embed(&self, f: &MultiPoly, set: &BTreeSet<Element>) -> ZElement {
        let r = self.realization();
        self.from_values(set.iter().map(|w| (w.clone(), r.act(w, f))).collect())
    }

    /// A random element: a diagonal part plus, at a few vertices, a random
    /// polynomial times the product of the roots of all edges at that vertex.
    pub fn random_element<G: Rng>(&self, rng: &mut G, set: &BTreeSet<Element>, max_deg: u32) -> ZElement {
        let r = self.realization();
        let (n, field) = (r.nvars(), r.field());
        let mut z = self.diagonal_embed(&MultiPoly::random(rng, n, field, max_deg, 3), set);
        let edges = self.edges(set);
        for w in set {
            if !rng.gen_bool(0.5) {
                continue;
            }
            let mut v = MultiPoly::random(rng, n, field, 1, 2);
            for (a, b, t) in &edges {
                if a == w || b == w {
                    v = &v * &r.root_of_reflection(t).expect("reflection");
                }
            }
            let slot = z.values.get_mut(w).unwrap();
            *slot = &*slot + &v;
        }
        z
    }

    /// Writes `z = x + (w(δ_s))_w · y` with `x, y` invariant under `w ↦ ws`.
    pub fn split_s(&self, z: &ZElement, s: Gen) -> Result<(ZElement, ZElement)> {
        let sys = self.bs.system();
        let r = self.realization();
        let set = z.set();
        for w in &set {
            if !set.contains(&sys.mul_gen(w, s)) {
                return Err(Error::NotStable(format!(
                    "{} is in the set but {}·s is not",
                    self.name(w),
                    self.name(w)
                )));
            }
        }
        let gkm = r.gkm_check(self.bound);
        if let Some((a, b)) = gkm.witness {
            return Err(Error::GkmViolation(self.name(&a), self.name(&b)));
        }
        let mut x = BTreeMap::new();
        let mut y = BTreeMap::new();
        for w in &set {
            let ws = sys.mul_gen(w, s);
            let root = r.act(w, r.alpha(s));
            let yw = (&z.values[w] - &z.values[&ws]).div_exact(&root).ok_or_else(|| {
                Error::DivisionFailure(format!("z at {} and {}", self.name(w), self.name(&ws)))
            })?;
            let xw = &z.values[w] - &(&r.act(w, r.delta(s)) * &yw);
            x.insert(w.clone(), xw);
            y.insert(w.clone(), yw);
        }
        Ok((self.from_values(x), self.from_values(y)))
    }

    /// Acts on `m` by multiplying coordinate `e` with `z_{x^e}`.
    pub fn z_action(&self, z: &ZElement, m: &BSElement) -> Result<BSElement> {
        let data = self.bs.data(m.word());
        let mut coords = m.coords().to_vec();
        for (e, c) in coords.iter_mut().enumerate() {
            if c.is_zero() {
                continue;
            }
            let zv = z.values.get(&data.endpoints[e]).ok_or(Error::SupportOutsideI)?;
            *c = &*c * zv;
        }
        self.bs.element_from_coords(m.word(), coords)
    }

    /// For `z = a + (w(δ_s)) b` split along `s`, checks
    /// `z·(m ⊗ n) = (a·m) ⊗ n + (b·m) ⊗ (n δ_s)` on monomial bases of `B_x`
    /// and `B_s`.
    pub fn induction_check(&self, s: Gen, word: &[Gen], samples: &[ZElement]) -> Result<bool> {
        let r = self.realization();
        for z in samples {
            let (a, b) = self.split_s(z, s)?;
            for m in self.bs.monomial_basis(word) {
                let am = self.z_action(&a, &m)?;
                let bm = self.z_action(&b, &m)?;
                for n in self.bs.monomial_basis(&[s]) {
                    let direct = self.z_action(z, &self.bs.tensor(&m, &n))?;
                    let nd = self.bs.right_mul(&n, r.delta(s));
                    let split = self.bs.tensor(&am, &n).add(&self.bs.tensor(&bm, &nd));
                    if direct != split {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    pub fn to_json(&self, z: &ZElement) -> Value {
        let m = self.bs.system().matrix();
        let mut values = Map::new();
        for (w, p) in &z.values {
            values.insert(m.word_string(w.word()), p.to_json());
        }
        let mut out = Map::new();
        out.insert(
            "I".into(),
            Value::Array(z.values.keys().map(|w| m.word_to_json(w.word())).collect()),
        );
        out.insert("values".into(), Value::Object(values));
        out.insert("L".into(), Value::from(z.bound));
        Value::Object(out)
    }

    pub fn from_json(&self, v: &Value) -> Result<ZElement> {
        let bad = |what: &str| Error::Parse(format!("malformed structure algebra element: {what}"));
        let sys = self.bs.system();
        let r = self.realization();
        let set = v.get("I").and_then(Value::as_array).ok_or_else(|| bad("missing I"))?;
        let vals = v
            .get("values")
            .and_then(Value::as_object)
            .ok_or_else(|| bad("missing values"))?;
        let bound = v.get("L").and_then(Value::as_u64).ok_or_else(|| bad("missing L"))? as usize;
        let mut values = BTreeMap::new();
        for w in set {
            values.insert(sys.normalize(&sys.matrix().word_from_json(w)?), r.zero());
        }
        for (k, p) in vals {
            let w = sys.normalize(&sys.matrix().parse_word(k)?);
            let slot = values.get_mut(&w).ok_or_else(|| bad(&format!("{k} is not in I")))?;
            *slot = MultiPoly::from_json(p, r.nvars(), r.field())?;
        }
        Ok(ZElement { values, bound })
    }
}
