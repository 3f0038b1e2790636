//! Linear algebra over `R`, over its fraction field, and over the scalar field.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::poly::MultiPoly;

/// Result of solving `A x = b` over `Frac(R)`.
///
/// The solution is `x = numerators / denominator` with free variables set to 0.
#[derive(Clone, Debug)]
pub struct FracSolution {
    pub rank: usize,
    pub pivots: Vec<usize>,
    pub numerators: Vec<MultiPoly>,
    pub denominator: MultiPoly,
    pub is_polynomial: bool,
}

impl FracSolution {
    /// The solution with polynomial entries, if it has them.
    pub fn polynomial_solution(&self) -> Option<Vec<MultiPoly>> {
        if !self.is_polynomial {
            return None;
        }
        Some(
            self.numerators
                .iter()
                .map(|y| y.div_exact(&self.denominator).unwrap())
                .collect(),
        )
    }
}

/// Fraction-free forward elimination of `m` in place. Returns the pivot columns,
/// skipping any column `>= stop`.
fn bareiss_forward(m: &mut [Vec<MultiPoly>], stop: usize) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let Some(sample) = m.first().and_then(|r| r.first()) else {
        return Vec::new();
    };
    let mut prev = MultiPoly::one(sample.nvars(), sample.field());
    let mut pivots = Vec::new();
    let mut k = 0;
    for c in 0..cols.min(stop) {
        if k == rows {
            break;
        }
        let Some(p) = (k..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(k, p);
        for i in k + 1..rows {
            for j in c + 1..cols {
                let t = &(&m[k][c] * &m[i][j]) - &(&m[i][c] * &m[k][j]);
                m[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][c] = MultiPoly::zero(prev.nvars(), prev.field());
        }
        prev = m[k][c].clone();
        pivots.push(c);
        k += 1;
    }
    pivots
}

/// Solves `A x = b` over the fraction field of `R` by Bareiss elimination.
pub fn solve_over_fraction_field(a: &[Vec<MultiPoly>], b: &[MultiPoly]) -> Result<FracSolution> {
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} equations but {} right-hand sides",
            a.len(),
            b.len()
        )));
    }
    let n = a.first().map_or(0, |r| r.len());
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::ShapeMismatch("ragged coefficient matrix".into()));
    }
    let Some(sample) = b.first() else {
        return Ok(FracSolution {
            rank: 0,
            pivots: Vec::new(),
            numerators: Vec::new(),
            denominator: MultiPoly::zero(0, Field::Rational),
            is_polynomial: true,
        });
    };
    let (nv, field) = (sample.nvars(), sample.field());
    let mut m: Vec<Vec<MultiPoly>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = bareiss_forward(&mut m, n);
    let r = pivots.len();
    if m[r..].iter().any(|row| !row[n].is_zero()) {
        return Err(Error::NoSolution);
    }
    let zero = MultiPoly::zero(nv, field);
    let denominator = if r == 0 {
        MultiPoly::one(nv, field)
    } else {
        m[r - 1][pivots[r - 1]].clone()
    };
    let mut y = vec![zero.clone(); r];
    for i in (0..r).rev() {
        let mut acc = &m[i][n] * &denominator;
        for j in i + 1..r {
            acc.sub_assign(&(&m[i][pivots[j]] * &y[j]));
        }
        y[i] = acc
            .div_exact(&m[i][pivots[i]])
            .expect("Cramer numerators are polynomial");
    }
    let mut numerators = vec![zero; n];
    for (i, &p) in pivots.iter().enumerate() {
        numerators[p] = y[i].clone();
    }
    let is_polynomial = numerators.iter().all(|x| denominator.divides(x));
    Ok(FracSolution {
        rank: r,
        pivots,
        numerators,
        denominator,
        is_polynomial,
    })
}

/// Rank over the fraction field of `R`.
pub fn rank_over_fraction_field(rows: &[Vec<MultiPoly>]) -> usize {
    let mut m = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    bareiss_forward(&mut m, cols).len()
}

/// Determinant of a square polynomial matrix.
pub fn determinant(a: &[Vec<MultiPoly>]) -> MultiPoly {
    let n = a.len();
    let mut m = a.to_vec();
    let sample = &a[0][0];
    let (nv, field) = (sample.nvars(), sample.field());
    let mut sign = 1i64;
    let mut prev = MultiPoly::one(nv, field);
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return MultiPoly::zero(nv, field);
        };
        if p != k {
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    prev.scale(&field.from_i64(sign))
}

/// A sparse row over the scalar field, keyed by column.
pub type SparseRow = BTreeMap<usize, Scalar>;

/// Incrementally maintained reduced row echelon form over the scalar field.
///
/// A row `a` encodes the equation `Σ a[k] x[k] + a[ncols] = 0`.
#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    field: Field,
    rows: BTreeMap<usize, SparseRow>,
    inconsistent: bool,
}

impl Echelon {
    pub fn new(ncols: usize, field: Field) -> Self {
        Echelon {
            ncols,
            field,
            rows: BTreeMap::new(),
            inconsistent: false,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    fn reduce(&self, mut row: SparseRow) -> SparseRow {
        let keys: Vec<usize> = row
            .keys()
            .copied()
            .filter(|k| self.rows.contains_key(k))
            .collect();
        for p in keys {
            let Some(c) = row.get(&p).cloned() else {
                continue;
            };
            for (k, v) in &self.rows[&p] {
                let t = &c * v;
                let entry = row.entry(*k).or_insert_with(|| self.field.zero());
                *entry = &*entry - &t;
                if entry.is_zero() {
                    row.remove(k);
                }
            }
        }
        row
    }

    /// Adds an equation. Returns `true` when it raised the rank.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let row: SparseRow = row.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        let row = self.reduce(row);
        let Some((&p, c)) = row.iter().next() else {
            return false;
        };
        if p == self.ncols {
            self.inconsistent = true;
            return false;
        }
        let inv = c.inv().unwrap();
        let row: SparseRow = row.iter().map(|(k, v)| (*k, v * &inv)).collect();
        for other in self.rows.values_mut() {
            if let Some(c) = other.get(&p).cloned() {
                for (k, v) in &row {
                    let t = &c * v;
                    let entry = other.entry(*k).or_insert_with(|| self.field.zero());
                    *entry = &*entry - &t;
                    if entry.is_zero() {
                        other.remove(k);
                    }
                }
            }
        }
        self.rows.insert(p, row);
        true
    }

    /// Whether `row` lies in the row space.
    pub fn contains(&self, row: &SparseRow) -> bool {
        self.reduce(row.iter().filter(|(_, v)| !v.is_zero()).map(|(k, v)| (*k, v.clone())).collect())
            .is_empty()
    }

    /// The solution with every free variable set to zero.
    pub fn particular_solution(&self) -> Option<Vec<Scalar>> {
        if self.inconsistent {
            return None;
        }
        let mut x = vec![self.field.zero(); self.ncols];
        for (p, row) in &self.rows {
            if let Some(v) = row.get(&self.ncols) {
                x[*p] = -v;
            }
        }
        Some(x)
    }

    /// A basis of the homogeneous solution space, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let mut out = Vec::new();
        for f in 0..self.ncols {
            if self.rows.contains_key(&f) {
                continue;
            }
            let mut x = vec![self.field.zero(); self.ncols];
            x[f] = self.field.one();
            for (p, row) in &self.rows {
                if let Some(v) = row.get(&f) {
                    x[*p] = -v;
                }
            }
            out.push(x);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> MultiPoly {
        MultiPoly::var(2, Field::Rational, i)
    }

    fn c(n: i64) -> MultiPoly {
        MultiPoly::from_i64(2, Field::Rational, n)
    }

    #[test]
    fn identity_system() {
        let a = vec![vec![c(1), c(0)], vec![c(0), c(1)]];
        let b = vec![x(0), x(1)];
        let s = solve_over_fraction_field(&a, &b).unwrap();
        assert!(s.is_polynomial);
        assert_eq!(s.polynomial_solution().unwrap(), b);
    }

    #[test]
    fn one_by_one_systems() {
        let s = solve_over_fraction_field(&[vec![x(0)]], &[x(0).pow(2)]).unwrap();
        assert_eq!(s.polynomial_solution().unwrap(), vec![x(0)]);
        let s = solve_over_fraction_field(&[vec![x(0)]], &[c(1)]).unwrap();
        assert!(!s.is_polynomial);
        assert_eq!(s.numerators[0], c(1));
        assert_eq!(s.denominator, x(0));
    }

    #[test]
    fn inconsistent_system() {
        let a = vec![vec![x(0)], vec![x(0)]];
        let b = vec![c(1), c(2)];
        assert!(matches!(
            solve_over_fraction_field(&a, &b),
            Err(Error::NoSolution)
        ));
    }

    #[test]
    fn three_by_three_solution_checks_out() {
        let a = vec![
            vec![x(0), c(1), c(0)],
            vec![c(1), x(1), c(1)],
            vec![c(0), c(1), &x(0) + &x(1)],
        ];
        let sol = vec![c(2), x(1), &x(0) - &c(1)];
        let b: Vec<MultiPoly> = a
            .iter()
            .map(|row| {
                let mut acc = c(0);
                for (p, q) in row.iter().zip(&sol) {
                    acc.add_assign(&(p * q));
                }
                acc
            })
            .collect();
        let s = solve_over_fraction_field(&a, &b).unwrap();
        assert_eq!(s.rank, 3);
        assert_eq!(s.polynomial_solution().unwrap(), sol);
    }

    #[test]
    fn determinant_of_vandermonde() {
        let a = vec![vec![c(1), x(0)], vec![c(1), x(1)]];
        assert_eq!(determinant(&a), &x(1) - &x(0));
    }

    #[test]
    fn echelon_nullspace() {
        let q = Field::Rational;
        let mut e = Echelon::new(3, q);
        e.insert([(0, q.one()), (1, q.one())].into_iter().collect());
        e.insert([(1, q.one()), (2, q.from_i64(-1)), (3, q.from_i64(2))].into_iter().collect());
        assert_eq!(e.rank(), 2);
        let ns = e.nullspace();
        assert_eq!(ns.len(), 1);
        assert_eq!(ns[0], vec![q.from_i64(-1), q.one(), q.one()]);
        let x = e.particular_solution().unwrap();
        // x1 - x2 + 2 = 0 with x2 = 0.
        assert_eq!(x, vec![q.from_i64(2), q.from_i64(-2), q.zero()]);
    }
}
