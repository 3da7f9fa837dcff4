//! JSON interchange format for polynomials:
//!
//! ```json
//! { "n": 2, "degree": 2,
//!   "terms": [ { "exps": [2, 0], "coeff": "1" }, { "exps": [0, 2], "coeff": "-1" } ],
//!   "modulus": "100" }
//! ```
//!
//! Coefficients and the optional modulus are decimal strings. Terms are
//! written in canonical monomial order. Readers reject terms of the wrong
//! length or degree and repeated monomials.

use std::collections::HashSet;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::HomogeneousPoly;
use crate::error::{Error, Result};
use crate::serde_dec;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyJson {
    pub n: usize,
    pub degree: u32,
    pub terms: Vec<TermJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub exps: Vec<u32>,
    pub coeff: String,
}

impl From<&HomogeneousPoly> for PolyJson {
    fn from(p: &HomogeneousPoly) -> Self {
        PolyJson {
            n: p.nvars(),
            degree: p.degree(),
            terms: p
                .terms()
                .map(|(m, c)| TermJson {
                    exps: m.exps().to_vec(),
                    coeff: c.to_str_radix(10),
                })
                .collect(),
            modulus: p.modulus().map(|m| m.to_str_radix(10)),
        }
    }
}

impl TryFrom<PolyJson> for HomogeneousPoly {
    type Error = Error;

    fn try_from(raw: PolyJson) -> Result<Self> {
        if raw.n == 0 {
            return Err(Error::MalformedPoly("n must be at least 1".into()));
        }
        let mut seen = HashSet::new();
        let mut terms = Vec::with_capacity(raw.terms.len());
        for t in raw.terms {
            if t.exps.len() != raw.n {
                return Err(Error::MalformedPoly(format!(
                    "term {:?} has {} exponents, expected {}",
                    t.exps,
                    t.exps.len(),
                    raw.n
                )));
            }
            let deg: u64 = t.exps.iter().map(|&e| e as u64).sum();
            if deg != raw.degree as u64 {
                return Err(Error::MalformedPoly(format!(
                    "term {:?} has degree {deg}, expected {}",
                    t.exps, raw.degree
                )));
            }
            if !seen.insert(t.exps.clone()) {
                return Err(Error::MalformedPoly(format!(
                    "repeated monomial {:?}",
                    t.exps
                )));
            }
            let c: BigInt = serde_dec::parse(&t.coeff).map_err(Error::MalformedPoly)?;
            terms.push((t.exps, c));
        }
        let p = HomogeneousPoly::from_terms(raw.n, raw.degree, terms)?;
        match raw.modulus {
            None => Ok(p),
            Some(m) => {
                let m = serde_dec::parse(&m).map_err(Error::MalformedPoly)?;
                p.with_modulus(&m)
            }
        }
    }
}

impl Serialize for HomogeneousPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for HomogeneousPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PolyJson::deserialize(d)?;
        HomogeneousPoly::try_from(raw).map_err(serde::de::Error::custom)
    }
}

impl HomogeneousPoly {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polynomial serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: PolyJson =
            serde_json::from_str(text).map_err(|e| Error::MalformedPoly(e.to_string()))?;
        HomogeneousPoly::try_from(raw)
    }
}
