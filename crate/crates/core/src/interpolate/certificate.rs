use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{eval_matrix, periodic, InterpolationInstance};
use crate::error::{Error, Result};
use crate::serde_dec;
use crate::zlinalg::check_nonmembership;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
struct DecVec(#[serde(with = "serde_dec::vec")] Vec<BigInt>);

mod nested {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<BigInt>], s: S) -> std::result::Result<S::Ok, S::Error> {
        let wrapped: Vec<DecVec> = v.iter().cloned().map(DecVec).collect();
        wrapped.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<BigInt>>, D::Error> {
        Ok(Vec::<DecVec>::deserialize(d)?.into_iter().map(|w| w.0).collect())
    }
}

/// Replayable evidence of infeasibility.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Certificate {
    /// No degree-`degree` interpolant: `functional` (a row of the left SNF
    /// transform) kills every column of `M_d` modulo `modulus` but not the
    /// target. `modulus` is `diagonal[index]`, or 0 past the rank.
    SnfNonmembership {
        degree: u32,
        #[serde(with = "serde_dec::vec")]
        diagonal: Vec<BigInt>,
        #[serde(with = "serde_dec::vec")]
        transformed: Vec<BigInt>,
        index: usize,
        #[serde(with = "serde_dec::vec")]
        functional: Vec<BigInt>,
        #[serde(with = "serde_dec")]
        modulus: BigInt,
    },
    /// No interpolant of any degree: modulo `prime`, `functionals[d mod period]`
    /// kills every column of `M_d` but not the target.
    ModularPeriodic {
        #[serde(with = "serde_dec")]
        prime: BigInt,
        stabilization_degree: u32,
        period: u32,
        #[serde(with = "nested")]
        functionals: Vec<Vec<BigInt>>,
    },
}

impl Certificate {
    /// Re-derives the verdict from the instance alone.
    pub fn replay(&self, inst: &InterpolationInstance) -> Result<()> {
        let reject = |msg: String| Err(Error::CertificateRejected(msg));
        match self {
            Certificate::SnfNonmembership {
                degree,
                diagonal,
                transformed,
                index,
                functional,
                modulus,
            } => {
                let m = eval_matrix(inst.points().points(), *degree, None)?;
                let b = inst.targets();
                if !check_nonmembership(&m, b, functional, modulus) {
                    return reject(format!("functional does not separate the target at degree {degree}"));
                }
                let pairing: BigInt = functional.iter().zip(b).map(|(y, x)| y * x).sum();
                if transformed.get(*index) != Some(&pairing) {
                    return reject("transformed target does not match the functional".into());
                }
                let expected = diagonal.get(*index).cloned().unwrap_or_else(BigInt::zero);
                if &expected != modulus {
                    return reject("modulus is not the diagonal entry at the index".into());
                }
                if !modulus.is_zero() && pairing.is_multiple_of(modulus) {
                    return reject("target entry is divisible by the diagonal".into());
                }
                Ok(())
            }
            Certificate::ModularPeriodic {
                prime,
                stabilization_degree,
                period,
                functionals,
            } => periodic::check_periodic(inst, prime, *stabilization_degree, *period, functionals)
                .map_err(Error::CertificateRejected),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serialization is infallible")
    }
}
