//! Integer Laurent polynomials in `v`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{Map, Value};

use crate::error::{Error, Result};

#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i32, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(0, 1)
    }

    /// `c·v^exp`.
    pub fn monomial(exp: i32, c: impl Into<BigInt>) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(exp, &c.into());
        p
    }

    pub fn v() -> Self {
        LaurentPoly::monomial(1, 1)
    }

    pub fn v_inv() -> Self {
        LaurentPoly::monomial(-1, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == LaurentPoly::one()
    }

    pub fn coeff(&self, exp: i32) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigInt)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn add_term(&mut self, exp: i32, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(exp).or_default();
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    /// `v ↦ v⁻¹`.
    pub fn bar(&self) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Multiplies by `v^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(LaurentPoly::one(), |acc, _| &acc * self)
    }

    /// Value at `v = 1`.
    pub fn eval_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (e, c) in &self.coeffs {
            let v = match c.to_i64() {
                Some(x) => Value::from(x),
                None => Value::String(c.to_string()),
            };
            m.insert(e.to_string(), v);
        }
        Value::Object(m)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed Laurent polynomial {v}"));
        let mut p = LaurentPoly::zero();
        for (k, c) in v.as_object().ok_or_else(bad)? {
            let e: i32 = k.parse().map_err(|_| bad())?;
            let c: BigInt = match c {
                Value::Number(n) => n.as_i64().ok_or_else(bad)?.into(),
                Value::String(s) => s.parse().map_err(|_| bad())?,
                _ => return Err(bad()),
            };
            p.add_term(e, &c);
        }
        Ok(p)
    }

    /// Whether the display form needs parentheses when used as a coefficient.
    pub(crate) fn is_compound(&self) -> bool {
        self.coeffs.len() > 1
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(*e, c);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &-rhs
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (a, x) in &self.coeffs {
            for (b, y) in &rhs.coeffs {
                out.add_term(a + b, &(x * y));
            }
        }
        out
    }
}

/// Formats as e.g. `v^-1+2+v^3`, in increasing powers of `v`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.coeffs.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if neg {
                write!(f, "-")?;
            } else if k > 0 {
                write!(f, "+")?;
            }
            if *e == 0 {
                write!(f, "{abs}")?;
                continue;
            }
            if !abs.is_one() {
                write!(f, "{abs}*")?;
            }
            match e {
                1 => write!(f, "v")?,
                _ => write!(f, "v^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The graded rank of a graded free module: a Laurent polynomial with
/// nonnegative coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GradedRank(LaurentPoly);

impl GradedRank {
    pub fn new(p: LaurentPoly) -> Result<Self> {
        if !p.is_nonnegative() {
            return Err(Error::Parse(format!("graded rank {p} has a negative coefficient")));
        }
        Ok(GradedRank(p))
    }

    /// `Σ v^{nᵢ}` for the given shifts.
    pub fn from_degrees(degrees: impl IntoIterator<Item = i32>) -> Self {
        let mut p = LaurentPoly::zero();
        for d in degrees {
            p.add_term(d, &BigInt::one());
        }
        GradedRank(p)
    }

    pub fn poly(&self) -> &LaurentPoly {
        &self.0
    }

    pub fn into_poly(self) -> LaurentPoly {
        self.0
    }
}

impl fmt::Display for GradedRank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_orders_by_exponent() {
        let p = &(&LaurentPoly::v() + &LaurentPoly::v_inv()) + &LaurentPoly::monomial(2, -3);
        assert_eq!(p.to_string(), "v^-1+v-3*v^2");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
    }

    #[test]
    fn json_roundtrip() {
        let p = &LaurentPoly::monomial(-2, 5) + &LaurentPoly::one();
        assert_eq!(LaurentPoly::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn graded_rank_rejects_negative() {
        assert!(GradedRank::new(LaurentPoly::monomial(0, -1)).is_err());
        assert_eq!(GradedRank::from_degrees([1, -1]).poly().eval_one(), 2.into());
    }
}
