//! Coxeter systems: words, canonical forms, Bruhat order, reflections,
//! reduced-expression graphs and labelled subsequences.
//!
//! Elements are stored as their ShortLex-minimal reduced word with respect to
//! the declared generator order. Reduced words of an element form one class
//! under braid moves, so everything here reduces to breadth-first search over
//! braid moves plus caching.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};

/// A generator, identified by its index in the Coxeter matrix.
pub type Gen = u8;

/// An element of `W`, represented by its canonical reduced word.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Element(Vec<Gen>);

impl Element {
    pub fn identity() -> Self {
        Element(Vec::new())
    }

    pub fn word(&self) -> &[Gen] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }
}

impl Ord for Element {
    fn cmp(&self, other: &Self) -> Ordering {
        shortlex(&self.0, &other.0)
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element{:?}", self.0)
    }
}

/// Compares words by length, then lexicographically.
pub fn shortlex(a: &[Gen], b: &[Gen]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Symmetric Coxeter matrix with generator names. An order of 0 means infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxeterMatrix {
    names: Vec<String>,
    orders: Vec<Vec<u32>>,
}

impl CoxeterMatrix {
    pub fn new(orders: Vec<Vec<u32>>, names: Option<Vec<String>>) -> Result<Self> {
        let n = orders.len();
        if n == 0 || n > 32 {
            return Err(Error::Config("need between 1 and 32 generators".into()));
        }
        for (i, row) in orders.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Config("Coxeter matrix is not square".into()));
            }
            for (j, &m) in row.iter().enumerate() {
                if m != orders[j][i] {
                    return Err(Error::Config("Coxeter matrix is not symmetric".into()));
                }
                if i == j && m != 1 {
                    return Err(Error::Config("diagonal entries must be 1".into()));
                }
                if i != j && m == 1 {
                    return Err(Error::Config("off-diagonal entries must be at least 2".into()));
                }
            }
        }
        let names = match names {
            Some(names) => names,
            None if n <= 3 => ["s", "t", "u"][..n].iter().map(|s| s.to_string()).collect(),
            None => (1..=n).map(|i| format!("s{i}")).collect(),
        };
        if names.len() != n {
            return Err(Error::Config("wrong number of generator names".into()));
        }
        let unique: BTreeSet<&String> = names.iter().collect();
        if unique.len() != n {
            return Err(Error::Config("generator names must be distinct".into()));
        }
        for name in &names {
            let ok = !name.is_empty()
                && name.chars().all(|c| c.is_alphanumeric() || c == '_')
                && name.chars().next().is_some_and(|c| c.is_alphabetic())
                && !matches!(name.as_str(), "e" | "v" | "H" | "Hb");
            if !ok {
                return Err(Error::Config(format!("invalid generator name {name:?}")));
            }
        }
        Ok(CoxeterMatrix { names, orders })
    }

    /// The dihedral system with `m_st = m`.
    pub fn dihedral(m: u32) -> Self {
        CoxeterMatrix::new(vec![vec![1, m], vec![m, 1]], None).unwrap()
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    /// `m_st`, with `None` for infinity.
    pub fn order(&self, s: Gen, t: Gen) -> Option<u32> {
        match self.orders[s as usize][t as usize] {
            0 => None,
            m => Some(m),
        }
    }

    pub fn orders(&self) -> &[Vec<u32>] {
        &self.orders
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generators(&self) -> impl Iterator<Item = Gen> {
        (0..self.rank() as Gen).map(|s| s as Gen)
    }

    pub fn generator(&self, name: &str) -> Result<Gen> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| i as Gen)
            .ok_or_else(|| Error::Parse(format!("unknown generator {name:?}")))
    }

    fn short_names(&self) -> bool {
        self.names.iter().all(|n| n.chars().count() == 1)
    }

    /// Renders a word. The empty word prints as `e`.
    pub fn word_string(&self, w: &[Gen]) -> String {
        if w.is_empty() {
            return "e".into();
        }
        let sep = if self.short_names() { "" } else { "." };
        w.iter()
            .map(|&s| self.names[s as usize].as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Parses `sts`, `(s,t,s)`, `s.t.s` or `e`.
    pub fn parse_word(&self, text: &str) -> Result<Vec<Gen>> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let t = t.trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
        if t.is_empty() || t == "e" {
            return Ok(Vec::new());
        }
        if t.contains([',', '.']) {
            return t
                .split([',', '.'])
                .map(|p| self.generator(p.trim_matches('"')))
                .collect();
        }
        if self.short_names() {
            return t.chars().map(|c| self.generator(&c.to_string())).collect();
        }
        Ok(vec![self.generator(t)?])
    }

    /// Parses a JSON array of generator names or a word string.
    pub fn word_from_json(&self, v: &serde_json::Value) -> Result<Vec<Gen>> {
        match v {
            serde_json::Value::Array(items) => items
                .iter()
                .map(|x| {
                    x.as_str()
                        .ok_or_else(|| Error::Parse(format!("generator name expected, got {x}")))
                        .and_then(|s| self.generator(s))
                })
                .collect(),
            serde_json::Value::String(s) => self.parse_word(s),
            _ => Err(Error::Parse(format!("word expected, got {v}"))),
        }
    }

    pub fn word_to_json(&self, w: &[Gen]) -> serde_json::Value {
        serde_json::Value::Array(
            w.iter()
                .map(|&s| serde_json::Value::String(self.names[s as usize].clone()))
                .collect(),
        )
    }
}

/// A single braid move replacing the alternating word `(s,t,s,…)` of length `m`
/// starting at the 0-based index `start` with `(t,s,t,…)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BraidMove {
    pub start: usize,
    pub s: Gen,
    pub t: Gen,
    pub m: usize,
}

impl BraidMove {
    pub fn apply(&self, word: &[Gen]) -> Vec<Gen> {
        let mut out = word.to_vec();
        for k in 0..self.m {
            out[self.start + k] = if k % 2 == 0 { self.t } else { self.s };
        }
        out
    }
}

/// Per-index label of a subsequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    U,
    D,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledSubsequence {
    pub base: Vec<Gen>,
    pub bits: Vec<u8>,
    pub labels: Vec<Label>,
    pub endpoint: Element,
    pub defect: i32,
}

impl LabeledSubsequence {
    /// The bits packed into an integer, bit `i` holding `e_{i+1}`.
    pub fn index(&self) -> usize {
        bits_to_index(&self.bits)
    }
}

pub fn bits_to_index(bits: &[u8]) -> usize {
    bits.iter()
        .enumerate()
        .fold(0, |acc, (i, &b)| acc | ((b as usize & 1) << i))
}

pub fn index_to_bits(index: usize, len: usize) -> Vec<u8> {
    (0..len).map(|i| ((index >> i) & 1) as u8).collect()
}

/// A Coxeter system with memoised word-problem data.
pub struct CoxeterSystem {
    matrix: CoxeterMatrix,
    classes: RwLock<HashMap<Element, Arc<Vec<Vec<Gen>>>>>,
    products: RwLock<HashMap<(Element, Gen), Element>>,
    ideals: RwLock<HashMap<Element, Arc<BTreeSet<Element>>>>,
}

impl fmt::Debug for CoxeterSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoxeterSystem")
            .field("matrix", &self.matrix)
            .finish_non_exhaustive()
    }
}

impl CoxeterSystem {
    pub fn new(matrix: CoxeterMatrix) -> Self {
        CoxeterSystem {
            matrix,
            classes: RwLock::new(HashMap::new()),
            products: RwLock::new(HashMap::new()),
            ideals: RwLock::new(HashMap::new()),
        }
    }

    pub fn matrix(&self) -> &CoxeterMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn generator(&self, s: Gen) -> Element {
        Element(vec![s])
    }

    /// Every word obtained from `word` by one braid move, ordered by start
    /// position and then by the resulting word.
    pub fn braid_neighbours(&self, word: &[Gen]) -> Vec<(BraidMove, Vec<Gen>)> {
        let mut out = Vec::new();
        for start in 0..word.len() {
            let s = word[start];
            let mut moves = Vec::new();
            for t in self.matrix.generators() {
                if t == s {
                    continue;
                }
                let Some(m) = self.matrix.order(s, t) else {
                    continue;
                };
                let m = m as usize;
                if start + m > word.len() {
                    continue;
                }
                let alternating = (0..m).all(|k| word[start + k] == if k % 2 == 0 { s } else { t });
                if alternating {
                    let mv = BraidMove { start, s, t, m };
                    let next = mv.apply(word);
                    moves.push((mv, next));
                }
            }
            moves.sort_by(|a, b| a.1.cmp(&b.1));
            out.extend(moves);
        }
        out
    }

    fn braid_class(&self, word: &[Gen]) -> Vec<Vec<Gen>> {
        let mut seen: BTreeSet<Vec<Gen>> = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(word.to_vec());
        queue.push_back(word.to_vec());
        while let Some(w) = queue.pop_front() {
            for (_, next) in self.braid_neighbours(&w) {
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// All reduced words of `w`, in lexicographic order.
    pub fn reduced_expressions(&self, w: &Element) -> Arc<Vec<Vec<Gen>>> {
        if let Some(c) = self.classes.read().unwrap().get(w) {
            return c.clone();
        }
        let class = Arc::new(self.braid_class(&w.0));
        self.classes
            .write()
            .unwrap()
            .insert(w.clone(), class.clone());
        class
    }

    /// Whether `ws < w`.
    pub fn is_right_descent(&self, w: &Element, s: Gen) -> bool {
        self.reduced_expressions(w)
            .iter()
            .any(|word| word.last() == Some(&s))
    }

    /// Whether `sw < w`.
    pub fn is_left_descent(&self, w: &Element, s: Gen) -> bool {
        self.reduced_expressions(w)
            .iter()
            .any(|word| word.first() == Some(&s))
    }

    /// `w·s`.
    pub fn mul_gen(&self, w: &Element, s: Gen) -> Element {
        let key = (w.clone(), s);
        if let Some(x) = self.products.read().unwrap().get(&key) {
            return x.clone();
        }
        let class = self.reduced_expressions(w);
        let shorter = class
            .iter()
            .filter(|word| word.last() == Some(&s))
            .map(|word| &word[..word.len() - 1])
            .min_by(|a, b| shortlex(a, b));
        let result = match shorter {
            Some(prefix) => Element(prefix.to_vec()),
            None => {
                let mut word = w.0.clone();
                word.push(s);
                let class = self.braid_class(&word);
                let canonical = Element(class[0].clone());
                self.classes
                    .write()
                    .unwrap()
                    .insert(canonical.clone(), Arc::new(class));
                canonical
            }
        };
        self.products.write().unwrap().insert(key, result.clone());
        result
    }

    /// `s·w`.
    pub fn gen_mul(&self, s: Gen, w: &Element) -> Element {
        self.inverse(&self.mul_gen(&self.inverse(w), s))
    }

    pub fn normalize(&self, word: &[Gen]) -> Element {
        word.iter()
            .fold(Element::identity(), |acc, &s| self.mul_gen(&acc, s))
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Element {
        b.0.iter().fold(a.clone(), |acc, &s| self.mul_gen(&acc, s))
    }

    pub fn inverse(&self, w: &Element) -> Element {
        let rev: Vec<Gen> = w.0.iter().rev().copied().collect();
        self.normalize(&rev)
    }

    pub fn is_reduced(&self, word: &[Gen]) -> bool {
        self.normalize(word).len() == word.len()
    }

    /// The Bruhat lower ideal `{x : x ≤ w}`.
    pub fn lower_ideal(&self, w: &Element) -> Arc<BTreeSet<Element>> {
        if let Some(i) = self.ideals.read().unwrap().get(w) {
            return i.clone();
        }
        let mut ideal = BTreeSet::from([Element::identity()]);
        for &s in &w.0 {
            let extra: Vec<Element> = ideal.iter().map(|x| self.mul_gen(x, s)).collect();
            ideal.extend(extra);
        }
        let ideal = Arc::new(ideal);
        self.ideals.write().unwrap().insert(w.clone(), ideal.clone());
        ideal
    }

    pub fn bruhat_leq(&self, a: &Element, b: &Element) -> bool {
        a.len() <= b.len() && self.lower_ideal(b).contains(a)
    }

    /// All elements of length at most `len`, sorted by length and then ShortLex.
    pub fn elements_upto(&self, len: usize) -> Vec<Element> {
        let mut all = BTreeSet::from([Element::identity()]);
        let mut frontier = vec![Element::identity()];
        for _ in 0..len {
            let mut next = Vec::new();
            for w in &frontier {
                for s in self.matrix.generators() {
                    let ws = self.mul_gen(w, s);
                    if ws.len() > w.len() && all.insert(ws.clone()) {
                        next.push(ws);
                    }
                }
            }
            frontier = next;
        }
        all.into_iter().collect()
    }

    /// Every word of length at most `len`, shortest first.
    pub fn words_upto(&self, len: usize) -> Vec<Vec<Gen>> {
        let mut out = vec![Vec::new()];
        let mut layer: Vec<Vec<Gen>> = vec![Vec::new()];
        for _ in 0..len {
            let mut next = Vec::new();
            for w in &layer {
                for s in self.matrix.generators() {
                    let mut x = w.clone();
                    x.push(s);
                    next.push(x);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    /// The conjugate `w s w⁻¹`.
    pub fn conjugate(&self, w: &Element, s: Gen) -> Element {
        let ws = self.mul_gen(w, s);
        self.multiply(&ws, &self.inverse(w))
    }

    /// All reflections of length at most `len`.
    pub fn reflections_upto(&self, len: usize) -> BTreeSet<Element> {
        if len == 0 {
            return BTreeSet::new();
        }
        let half = (len - 1) / 2;
        let mut out = BTreeSet::new();
        for w in self.elements_upto(half) {
            for s in self.matrix.generators() {
                let t = self.conjugate(&w, s);
                if t.len() <= len {
                    out.insert(t);
                }
            }
        }
        out
    }

    pub fn is_reflection(&self, t: &Element) -> bool {
        t.len() % 2 == 1 && self.reflections_upto(t.len()).contains(t)
    }

    /// The fixed choice `(s, w)` with `t = w s w⁻¹`: shortest `w`, ShortLex
    /// tie-break, then the first generator.
    pub fn reflection_data(&self, t: &Element) -> Result<(Gen, Element)> {
        if t.len() % 2 == 0 {
            return Err(Error::NotAReflection(self.matrix.word_string(&t.0)));
        }
        let half = (t.len() - 1) / 2;
        for w in self.elements_upto(half) {
            for s in self.matrix.generators() {
                if &self.conjugate(&w, s) == t {
                    return Ok((s, w));
                }
            }
        }
        Err(Error::NotAReflection(self.matrix.word_string(&t.0)))
    }

    /// The reflections `t` with `t w < w`, listed along the canonical word:
    /// `s₁⋯s_{i-1} s_i s_{i-1}⋯s₁`.
    pub fn left_inversions(&self, w: &Element) -> Vec<Element> {
        (0..w.len())
            .map(|i| {
                let prefix = Element(w.0[..i].to_vec());
                self.conjugate(&self.normalize(&prefix.0), w.0[i])
            })
            .collect()
    }

    /// Shortest braid-move path from `x` to `y`, with ties broken by the order
    /// of [`braid_neighbours`](Self::braid_neighbours).
    pub fn rex_path(&self, x: &[Gen], y: &[Gen]) -> Result<Vec<BraidMove>> {
        if !self.is_reduced(x) || !self.is_reduced(y) {
            return Err(Error::WordsNotReduced);
        }
        if self.normalize(x) != self.normalize(y) {
            return Err(Error::DifferentElements);
        }
        let mut parent: HashMap<Vec<Gen>, (Vec<Gen>, BraidMove)> = HashMap::new();
        let mut queue = VecDeque::from([x.to_vec()]);
        let mut seen = BTreeSet::from([x.to_vec()]);
        while let Some(w) = queue.pop_front() {
            if w == y {
                break;
            }
            for (mv, next) in self.braid_neighbours(&w) {
                if seen.insert(next.clone()) {
                    parent.insert(next.clone(), (w.clone(), mv));
                    queue.push_back(next);
                }
            }
        }
        let mut path = Vec::new();
        let mut cur = y.to_vec();
        while cur != x {
            let (prev, mv) = parent[&cur].clone();
            path.push(mv);
            cur = prev;
        }
        path.reverse();
        Ok(path)
    }

    pub fn is_closed(&self, set: &BTreeSet<Element>) -> bool {
        set.iter()
            .all(|x| self.lower_ideal(x).iter().all(|y| set.contains(y)))
    }

    /// Enumerates a closed set so that every prefix is closed and `w` comes last.
    pub fn closed_enumeration(&self, set: &BTreeSet<Element>, w: &Element) -> Result<Vec<Element>> {
        for x in set {
            if let Some(y) = self.lower_ideal(x).iter().find(|y| !set.contains(*y)) {
                return Err(Error::NotClosed(format!(
                    "{} lies below {} but is missing",
                    self.matrix.word_string(&y.0),
                    self.matrix.word_string(&x.0)
                )));
            }
        }
        if !set.contains(w) || set.iter().any(|x| x != w && self.bruhat_leq(w, x)) {
            return Err(Error::NotMaximal);
        }
        let mut out: Vec<Element> = set.iter().filter(|x| *x != w).cloned().collect();
        out.sort();
        out.push(w.clone());
        Ok(out)
    }

    pub fn label_subsequence(&self, word: &[Gen], bits: &[u8]) -> LabeledSubsequence {
        assert_eq!(word.len(), bits.len(), "bit vector length");
        let mut x = Element::identity();
        let mut labels = Vec::with_capacity(word.len());
        let mut defect = 0;
        for (&s, &b) in word.iter().zip(bits) {
            let label = if self.is_right_descent(&x, s) {
                Label::D
            } else {
                Label::U
            };
            if b == 0 {
                defect += if label == Label::U { 1 } else { -1 };
            } else {
                x = self.mul_gen(&x, s);
            }
            labels.push(label);
        }
        LabeledSubsequence {
            base: word.to_vec(),
            bits: bits.to_vec(),
            labels,
            endpoint: x,
            defect,
        }
    }

    /// The endpoint `x^e` for `e` packed as an index.
    pub fn endpoint(&self, word: &[Gen], index: usize) -> Element {
        word.iter()
            .enumerate()
            .filter(|(i, _)| (index >> i) & 1 == 1)
            .fold(Element::identity(), |acc, (_, &s)| self.mul_gen(&acc, s))
    }

    /// All subsequences of `word`, in order of their packed index.
    pub fn subsequences(&self, word: &[Gen]) -> Vec<LabeledSubsequence> {
        (0..1usize << word.len())
            .map(|j| self.label_subsequence(word, &index_to_bits(j, word.len())))
            .collect()
    }

    /// The order `<` on subsequences with a common endpoint: `a < b` when at
    /// the first differing label `a` has `U` and `b` has `D`.
    pub fn subseq_order_less(&self, a: &LabeledSubsequence, b: &LabeledSubsequence) -> Result<bool> {
        if a.base != b.base || a.endpoint != b.endpoint {
            return Err(Error::EndpointMismatch);
        }
        for (la, lb) in a.labels.iter().zip(&b.labels) {
            if la != lb {
                return Ok(*la == Label::U && *lb == Label::D);
            }
        }
        Ok(false)
    }
}
