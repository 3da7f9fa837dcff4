//! `h` with `h(v) = 1` modulo a per-point modulus, assembled prime power by
//! prime power.
//!
//! For a prime `p`, only the points whose modulus `p` divides take part, each
//! needing `h(v) = 1 mod p^(e_v)`. Group them into projective classes mod `p`. For a
//! class `C`, the product `B_C` of powers of integer forms vanishing at the
//! other classes' leaders is `0 mod q` off `C` and a unit on `C`. Scaled so
//! that it is 1 at the leader of `C` and raised to the lcm `T` of the orders
//! of its values on `C`, the sum over classes is 1 at every participating
//! point. The
//! degree `D0 * T` is known from point values before anything is expanded.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::modular::{crt_combine, mod_inverse, multiplicative_order, FactoredInteger};
use crate::poly::{separating_coeffs, HomogeneousPoly, Point};

struct ClassPlan {
    /// `(linear form, exponent)` factors of `B_C`.
    factors: Vec<(Vec<BigInt>, u32)>,
    /// Coordinate used to pad `B_C` up to the common degree.
    pad_var: usize,
    pad: u32,
    scale: BigInt,
}

struct PrimePowerPlan {
    q: BigInt,
    degree: u32,
    exponent: BigInt,
    classes: Vec<ClassPlan>,
}

pub(crate) struct LocalPlan {
    nvars: usize,
    parts: Vec<PrimePowerPlan>,
}

fn same_class(v: &[BigInt], w: &[BigInt], p: &BigInt) -> bool {
    (0..v.len()).all(|i| (i + 1..v.len()).all(|j| (&v[i] * &w[j] - &v[j] * &w[i]).is_multiple_of(p)))
}

fn valuation(x: &BigInt, p: &BigInt) -> u32 {
    let mut x = x.clone();
    let mut k = 0;
    while !x.is_zero() && x.is_multiple_of(p) {
        x /= p;
        k += 1;
    }
    k
}

fn plan_prime_power(points: &[(&Point, u32)], p: &BigInt, q: &BigInt) -> Result<PrimePowerPlan> {
    let mut classes: Vec<Vec<(&Point, u32)>> = Vec::new();
    for &(v, e) in points {
        match classes
            .iter_mut()
            .find(|c| same_class(c[0].0.coords(), v.coords(), p))
        {
            Some(c) => c.push((v, e)),
            None => classes.push(vec![(v, e)]),
        }
    }
    let nonzero_mod_p = |x: &BigInt| !x.mod_floor(p).is_zero();

    let mut raw = Vec::with_capacity(classes.len());
    for (ci, class) in classes.iter().enumerate() {
        let leader = class[0].0.coords();
        let mut factors = Vec::new();
        let mut degree = 0u32;
        for (cj, other) in classes.iter().enumerate() {
            if ci == cj {
                continue;
            }
            let coeffs = separating_coeffs(leader, other[0].0.coords(), nonzero_mod_p)
                .expect("distinct classes mod p are separated by a cross form");
            let form = HomogeneousPoly::linear(&coeffs);
            // the form is 0 at the other leader exactly and divisible by p on
            // the rest of its class; pick the power that reaches p^e there
            let mut power = 1u32;
            for &(w, e) in other {
                let value = form.eval_at(w)?;
                if !value.is_zero() {
                    power = power.max(e.div_ceil(valuation(&value, p)));
                }
            }
            degree = degree.checked_add(power).ok_or(Error::DegreeOverflow)?;
            factors.push((coeffs, power));
        }
        let pad_var = leader
            .iter()
            .position(nonzero_mod_p)
            .expect("point is nonzero mod p");
        raw.push((factors, degree, pad_var));
    }
    let degree = raw.iter().map(|r| r.1).max().unwrap_or(0).max(1);

    let mut exponent = BigInt::one();
    let mut plans = Vec::with_capacity(raw.len());
    for (class, (factors, own_degree, pad_var)) in classes.iter().zip(raw) {
        let pad = degree - own_degree;
        let value_at = |w: &Point| -> BigInt {
            let mut acc = w.coords()[pad_var].mod_floor(q).modpow(&BigInt::from(pad), q);
            for (coeffs, power) in &factors {
                let l: BigInt = coeffs.iter().zip(w.coords()).map(|(c, x)| c * x).sum();
                acc = (acc * l.mod_floor(q).modpow(&BigInt::from(*power), q)).mod_floor(q);
            }
            acc
        };
        let scale = mod_inverse(&value_at(class[0].0), q).ok_or_else(|| {
            Error::Verification(format!("class leader {} has a non-unit value mod {q}", class[0].0))
        })?;
        for &(w, e) in &class[1..] {
            let local = FactoredInteger::from_factors([(p.clone(), e)].into_iter().collect())?;
            let u = value_at(w) * &scale;
            exponent = exponent.lcm(&multiplicative_order(&u, &local)?);
        }
        plans.push(ClassPlan {
            factors,
            pad_var,
            pad,
            scale,
        });
    }
    Ok(PrimePowerPlan {
        q: q.clone(),
        degree,
        exponent,
        classes: plans,
    })
}

/// `moduli[i]` is the modulus at which `h(reps[i]) = 1` is required.
pub(crate) fn plan(reps: &[Point], moduli: &[FactoredInteger]) -> Result<LocalPlan> {
    let nvars = reps[0].dim();
    let mut primes: BTreeMap<&BigInt, u32> = BTreeMap::new();
    for m in moduli {
        for (p, &e) in m.factors() {
            let slot = primes.entry(p).or_insert(0);
            *slot = (*slot).max(e);
        }
    }
    let mut parts = Vec::with_capacity(primes.len());
    for (p, e) in primes {
        let q = num_traits::pow(p.clone(), e as usize);
        let points: Vec<(&Point, u32)> = reps
            .iter()
            .zip(moduli)
            .filter_map(|(v, m)| m.factors().get(p).map(|&e| (v, e)))
            .collect();
        parts.push(plan_prime_power(&points, p, &q)?);
    }
    Ok(LocalPlan { nvars, parts })
}

impl LocalPlan {
    /// Degree of [`LocalPlan::materialize`]'s output, saturating at `u64::MAX`.
    pub(crate) fn degree(&self) -> Result<u64> {
        let mut total = BigInt::one();
        for part in &self.parts {
            total = total.lcm(&(&part.exponent * part.degree));
        }
        Ok(total.to_u64().unwrap_or(u64::MAX))
    }

    pub(crate) fn materialize(&self) -> Result<HomogeneousPoly> {
        let mut glued = Vec::with_capacity(self.parts.len());
        for part in &self.parts {
            let q = &part.q;
            let t = part.exponent.to_u32().ok_or(Error::DegreeOverflow)?;
            let mut sum = HomogeneousPoly::zero(self.nvars, 0).with_modulus(q)?;
            for (k, class) in part.classes.iter().enumerate() {
                let mut b = HomogeneousPoly::constant(self.nvars, class.scale.clone()).with_modulus(q)?;
                for (coeffs, power) in &class.factors {
                    let form = HomogeneousPoly::linear(coeffs).with_modulus(q)?;
                    b = b.mul(&form.pow(*power)?)?;
                }
                if class.pad > 0 {
                    let x = HomogeneousPoly::variable(self.nvars, class.pad_var).with_modulus(q)?;
                    b = b.mul(&x.pow(class.pad)?)?;
                }
                let term = b.pow(t)?;
                sum = if k == 0 { term } else { sum.add(&term)? };
            }
            glued.push((q.clone(), sum));
        }
        crt_combine(&glued)
    }
}
