//! Independent oracles for tests: a dihedral Hecke algebra with its own
//! group model, Laurent arithmetic and subexpression enumeration.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use soergel::config::RealizationConfig;
use soergel::{Element, Field, LaurentPoly, Realization};

pub fn realization(name: &str) -> Arc<Realization> {
    Arc::new(RealizationConfig::bundled(name).unwrap().build(None).unwrap())
}

pub fn realization_over(name: &str, field: Field) -> Arc<Realization> {
    Arc::new(RealizationConfig::bundled(name).unwrap().build(Some(field)).unwrap())
}

pub type Laurent = BTreeMap<i32, i64>;

pub fn laurent_add(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = a.clone();
    for (k, c) in b {
        *out.entry(*k).or_insert(0) += c;
    }
    out.retain(|_, c| *c != 0);
    out
}

pub fn laurent_mul(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (i, x) in a {
        for (j, y) in b {
            *out.entry(i + j).or_insert(0) += x * y;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

pub fn laurent_shift(a: &Laurent, k: i32) -> Laurent {
    a.iter().map(|(e, c)| (e + k, *c)).collect()
}

pub fn laurent_bar(a: &Laurent) -> Laurent {
    a.iter().map(|(e, c)| (-e, *c)).collect()
}

pub fn mono(k: i32) -> Laurent {
    [(k, 1)].into_iter().collect()
}

pub fn from_lib(p: &LaurentPoly) -> Laurent {
    p.terms()
        .map(|(e, c)| (e, i64::try_from(c.clone()).unwrap()))
        .collect()
}

/// An element of the dihedral group of order `2m`: its length and the first
/// letter of its alternating reduced word. The longest element and the
/// identity use first letter 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dihedral {
    pub len: u32,
    pub first: u8,
}

pub struct DihedralOracle {
    pub m: u32,
}

impl DihedralOracle {
    pub fn new(m: u32) -> Self {
        DihedralOracle { m }
    }

    fn norm(&self, len: u32, first: u8) -> Dihedral {
        if len == 0 || len == self.m {
            Dihedral { len, first: 0 }
        } else {
            Dihedral { len, first }
        }
    }

    pub fn identity(&self) -> Dihedral {
        self.norm(0, 0)
    }

    /// `w·s`.
    pub fn mul(&self, w: Dihedral, s: u8) -> Dihedral {
        if w.len == 0 {
            return self.norm(1, s);
        }
        if w.len == self.m {
            let len = self.m - 1;
            let first = if len % 2 == 1 { 1 - s } else { s };
            return self.norm(len, first);
        }
        let last = if w.len % 2 == 1 { w.first } else { 1 - w.first };
        if last == s {
            self.norm(w.len - 1, w.first)
        } else {
            self.norm(w.len + 1, w.first)
        }
    }

    pub fn from_element(&self, w: &Element) -> Dihedral {
        let mut x = self.identity();
        for &s in w.word() {
            x = self.mul(x, s as u8);
        }
        x
    }

    pub fn inverse(&self, w: Dihedral) -> Dihedral {
        let last = if w.len % 2 == 1 { w.first } else { 1 - w.first };
        self.norm(w.len, last)
    }

    /// `H̲_{s₁}⋯H̲_{s_l}` with `H_s² = 1 + (v⁻¹ - v) H_s` and `H̲_s = H_s + v`.
    pub fn bott_samelson(&self, word: &[u8]) -> BTreeMap<Dihedral, Laurent> {
        let mut h: BTreeMap<Dihedral, Laurent> = [(self.identity(), mono(0))].into_iter().collect();
        let q = laurent_add(&mono(-1), &[(1, -1)].into_iter().collect());
        for &s in word {
            let mut out: BTreeMap<Dihedral, Laurent> = BTreeMap::new();
            let mut put = |w: Dihedral, a: Laurent| {
                let e = out.entry(w).or_default();
                *e = laurent_add(e, &a);
            };
            for (w, a) in &h {
                let ws = self.mul(*w, s);
                put(ws, a.clone());
                if ws.len < w.len {
                    put(*w, laurent_mul(a, &q));
                }
                put(*w, laurent_shift(a, 1));
            }
            out.retain(|_, a| !a.is_empty());
            h = out;
        }
        h
    }

    /// `Σ_{x^e = w} v^{d(e)}` by enumerating all subexpressions.
    pub fn defect_sums(&self, word: &[u8]) -> BTreeMap<Dihedral, Laurent> {
        let mut out: BTreeMap<Dihedral, Laurent> = BTreeMap::new();
        for bits in 0..1u32 << word.len() {
            let mut x = self.identity();
            let mut d = 0;
            for (i, &s) in word.iter().enumerate() {
                let up = self.mul(x, s).len > x.len;
                if bits >> i & 1 == 1 {
                    x = self.mul(x, s);
                } else {
                    d += if up { 1 } else { -1 };
                }
            }
            let e = out.entry(x).or_default();
            *e = laurent_add(e, &mono(d));
        }
        out
    }

    pub fn hom_rank(&self, x: &[u8], y: &[u8]) -> Laurent {
        let px = self.bott_samelson(x);
        let py = self.bott_samelson(y);
        let mut total = Laurent::new();
        for (w, a) in &px {
            if let Some(b) = py.get(w) {
                total = laurent_add(&total, &laurent_mul(&laurent_bar(a), &laurent_bar(b)));
            }
        }
        total
    }
}

/// All words of length at most `len` in two letters.
pub fn words2(len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &layer {
            for s in 0..2u8 {
                let mut x: Vec<u8> = w.clone();
                x.push(s);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of monomials of degree `k` in `n` variables.
pub fn monomials(n: usize, k: usize) -> usize {
    if n == 0 {
        return usize::from(k == 0);
    }
    binom((n + k - 1) as u64, k as u64) as usize
}
