//! JSON realization configs and the bundled example realizations.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::coxeter::CoxeterMatrix;
use crate::error::{Error, Result};
use crate::field::{parse_rational, Field, Scalar};
use crate::realization::Realization;

/// `"Q"` or `{"p": 5}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Name(String),
    Prime { p: u64 },
}

impl FieldSpec {
    pub fn to_field(&self) -> Result<Field> {
        match self {
            FieldSpec::Name(s) => s.parse(),
            FieldSpec::Prime { p } => Field::prime(*p),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealizationConfig {
    /// Coxeter matrix with 0 standing for infinity.
    pub coxeter: Vec<Vec<u32>>,
    pub field: FieldSpec,
    pub n: usize,
    pub alpha: Vec<Vec<Value>>,
    pub coroot: Vec<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Vec<Option<Vec<Value>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<String>>,
}

const BUNDLED: &[(&str, &str)] = &[
    ("A1", include_str!("../realizations/A1.json")),
    ("A2", include_str!("../realizations/A2.json")),
    ("B2", include_str!("../realizations/B2.json")),
    ("G2", include_str!("../realizations/G2.json")),
    ("A1xA1", include_str!("../realizations/A1xA1.json")),
    ("A1xA1-degenerate", include_str!("../realizations/A1xA1-degenerate.json")),
];

impl RealizationConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Names of the realizations shipped with the library.
    pub fn bundled_names() -> impl Iterator<Item = &'static str> {
        BUNDLED.iter().map(|(n, _)| *n)
    }

    pub fn bundled(name: &str) -> Result<Self> {
        let (_, text) = BUNDLED
            .iter()
            .find(|(n, _)| n.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::Config(format!("no bundled realization named {name:?}")))?;
        RealizationConfig::from_json_str(text)
    }

    /// Builds the realization, optionally over a different field than the
    /// config names.
    pub fn build(&self, field_override: Option<Field>) -> Result<Realization> {
        let field = match field_override {
            Some(f) => f,
            None => self.field.to_field()?,
        };
        let matrix = CoxeterMatrix::new(self.coxeter.clone(), self.generators.clone())?;
        let r = matrix.rank();
        let vectors = |rows: &[Vec<Value>], what: &str| -> Result<Vec<Vec<Scalar>>> {
            if rows.len() != r {
                return Err(Error::Config(format!("{what} needs {r} vectors")));
            }
            rows.iter()
                .map(|row| row.iter().map(|x| scalar(x, field)).collect())
                .collect()
        };
        let alpha = vectors(&self.alpha, "alpha")?;
        let coroot = vectors(&self.coroot, "coroot")?;
        let delta = match &self.delta {
            None => vec![None; r],
            Some(ds) => {
                if ds.len() != r {
                    return Err(Error::Config(format!("delta needs {r} entries")));
                }
                ds.iter()
                    .map(|d| {
                        d.as_ref()
                            .map(|row| row.iter().map(|x| scalar(x, field)).collect())
                            .transpose()
                    })
                    .collect::<Result<_>>()?
            }
        };
        Realization::new(matrix, field, self.n, alpha, coroot, delta)
    }
}

fn scalar(v: &Value, field: Field) -> Result<Scalar> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(k) => Ok(field.from_i64(k)),
            None => Err(Error::Config(format!("non-integer number {n}; use a string like \"1/2\""))),
        },
        Value::String(s) => field.from_rational(&parse_rational(s)?),
        _ => Err(Error::Config(format!("scalar expected, got {v}"))),
    }
}

/// Loads a realization from a file path or, failing that, a bundled name.
pub fn load_realization(spec: &str, field_override: Option<Field>) -> Result<Realization> {
    let path = std::path::Path::new(spec);
    let cfg = if path.exists() {
        RealizationConfig::from_json_str(&std::fs::read_to_string(path)?)?
    } else {
        RealizationConfig::bundled(spec)?
    };
    cfg.build(field_override)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_realizations_parse() {
        for name in RealizationConfig::bundled_names() {
            let cfg = RealizationConfig::bundled(name).unwrap();
            cfg.build(None).unwrap();
        }
    }

    #[test]
    fn prime_field_config() {
        let text = r#"{"coxeter": [[1]], "field": {"p": 5}, "n": 1, "alpha": [[2]], "coroot": [["1"]]}"#;
        let r = RealizationConfig::from_json_str(text).unwrap().build(None).unwrap();
        assert_eq!(r.field(), Field::Prime(5));
        assert!(RealizationConfig::from_json_str(r#"{"coxeter": [[1]]}"#).is_err());
    }
}
