//! Feasibility of homogeneous interpolation over `Z`, minimal degrees,
//! all-degree obstructions and the constructive witness with value 1.
//!
//! A degree-`d` interpolant with `f(P_i) = a_i` exists iff the target vector
//! lies in the integer column span of the evaluation matrix `M_d`, whose
//! `(i, alpha)` entry is the monomial `alpha` evaluated at `P_i`.

mod certificate;
mod local;
mod periodic;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use certificate::Certificate;
pub use periodic::periodic_obstruction;

use crate::error::{Error, Result};
use crate::modular::{
    factor, factor_seeded, is_prime, mod_witness, multiplicative_order, normalize_to_one, FactoredInteger,
    ResiduePointSet,
};
use crate::poly::{monomials_of_degree, power_table, HomogeneousPoly, Point, PointSet};
use crate::zlinalg::{decide_membership, IntMatrix, Membership};

/// Points with target values `a_i`, one per point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpolationInstance {
    points: PointSet,
    targets: Vec<BigInt>,
}

impl InterpolationInstance {
    pub fn new(points: PointSet, targets: Vec<BigInt>) -> Result<Self> {
        if targets.len() != points.len() {
            return Err(Error::LengthMismatch {
                expected: points.len(),
                found: targets.len(),
            });
        }
        points.require_coprime()?;
        Ok(InterpolationInstance { points, targets })
    }

    /// All targets equal to 1.
    pub fn ones(points: PointSet) -> Result<Self> {
        let targets = vec![BigInt::one(); points.len()];
        InterpolationInstance::new(points, targets)
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn targets(&self) -> &[BigInt] {
        &self.targets
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Feasible,
    InfeasibleAtDegree,
    InfeasibleAllDegrees,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityResult {
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<HomogeneousPoly>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    /// Per-degree certificates kept by [`min_degree`] on request.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub degree_certificates: Vec<Certificate>,
}

impl FeasibilityResult {
    fn feasible(degree: u32, witness: HomogeneousPoly) -> Self {
        FeasibilityResult {
            verdict: Verdict::Feasible,
            degree: Some(degree),
            witness: Some(witness),
            certificate: None,
            degree_certificates: Vec::new(),
        }
    }

    fn infeasible_at(degree: u32, certificate: Certificate) -> Self {
        FeasibilityResult {
            verdict: Verdict::InfeasibleAtDegree,
            degree: Some(degree),
            witness: None,
            certificate: Some(certificate),
            degree_certificates: Vec::new(),
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.verdict == Verdict::Feasible
    }
}

/// The `s x C(n+d-1, n-1)` evaluation matrix, columns in canonical monomial
/// order, optionally reduced modulo `modulus`.
pub fn eval_matrix(points: &[Point], d: u32, modulus: Option<&BigInt>) -> Result<IntMatrix> {
    if d == 0 {
        return Err(Error::InvalidDegree(0));
    }
    let Some(first) = points.first() else {
        return Ok(IntMatrix::zeros(0, 0));
    };
    let n = first.dim();
    let monos = monomials_of_degree(n, d);
    let mut data = Vec::with_capacity(points.len() * monos.len());
    for p in points {
        if p.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.dim(),
            });
        }
        let tables: Vec<Vec<BigInt>> = p
            .coords()
            .iter()
            .map(|c| power_table(c, d, modulus))
            .collect();
        for m in &monos {
            let mut entry = BigInt::one();
            for (j, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    entry *= &tables[j][e as usize];
                }
            }
            if let Some(m) = modulus {
                entry = entry.mod_floor(m);
            }
            data.push(entry);
        }
    }
    IntMatrix::new(points.len(), monos.len(), data)
}

fn poly_from_solution(n: usize, d: u32, x: &[BigInt]) -> Result<HomogeneousPoly> {
    let monos = monomials_of_degree(n, d);
    HomogeneousPoly::from_terms(
        n,
        d,
        monos.into_iter().zip(x).map(|(m, c)| (m.exps().to_vec(), c.clone())),
    )
}

/// Decides whether a degree-`d` interpolant exists, returning one or an SNF
/// non-membership certificate.
pub fn feasible_degree(inst: &InterpolationInstance, d: u32) -> Result<FeasibilityResult> {
    let points = inst.points().points();
    let m = eval_matrix(points, d, None)?;
    match decide_membership(&m, inst.targets())? {
        Membership::Member(x) => {
            let f = poly_from_solution(inst.points().dim(), d, &x)?;
            for (p, a) in points.iter().zip(inst.targets()) {
                let value = f.eval_at(p)?;
                if &value != a {
                    return Err(Error::Verification(format!(
                        "degree-{d} solution gives {value} at {p}, expected {a}"
                    )));
                }
            }
            Ok(FeasibilityResult::feasible(d, f))
        }
        Membership::NonMember(nm) => Ok(FeasibilityResult::infeasible_at(
            d,
            Certificate::SnfNonmembership {
                degree: d,
                diagonal: nm.diagonal,
                transformed: nm.transformed,
                index: nm.index,
                functional: nm.functional,
                modulus: nm.modulus,
            },
        )),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinDegreeOptions {
    pub max_degree: u32,
    /// Keep an SNF certificate for every infeasible degree probed.
    pub keep_certificates: bool,
    /// Skip degrees ruled out modulo small primes before running SNF.
    pub sieve: bool,
}

impl Default for MinDegreeOptions {
    fn default() -> Self {
        MinDegreeOptions {
            max_degree: 120,
            keep_certificates: false,
            sieve: true,
        }
    }
}

/// Least `d <= max_degree` admitting an interpolant, or `Unknown`.
pub fn min_degree(inst: &InterpolationInstance, opts: &MinDegreeOptions) -> Result<FeasibilityResult> {
    if opts.max_degree == 0 {
        return Err(Error::InvalidDegree(0));
    }
    let sieve = if opts.sieve && !opts.keep_certificates {
        periodic::DegreeSieve::new(inst, &default_primes(inst))
    } else {
        periodic::DegreeSieve::empty()
    };
    let candidates: Vec<u32> = (1..=opts.max_degree)
        .filter(|&d| !sieve.rules_out(d))
        .collect();
    let batch = rayon::current_num_threads().max(1);
    let mut kept = Vec::new();
    for chunk in candidates.chunks(batch) {
        let results: Vec<Result<FeasibilityResult>> =
            chunk.par_iter().map(|&d| feasible_degree(inst, d)).collect();
        for r in results {
            let r = r?;
            if r.is_feasible() {
                let mut r = r;
                r.degree_certificates = kept;
                return Ok(r);
            }
            if opts.keep_certificates {
                kept.extend(r.certificate);
            }
        }
    }
    Ok(FeasibilityResult {
        verdict: Verdict::Unknown,
        degree: None,
        witness: None,
        certificate: None,
        degree_certificates: kept,
    })
}

/// Primes modulo which two of the points become projectively equal without
/// being proportional over `Q`: the prime factors of the gcd of the 2x2
/// minors of each pair. Pairs whose minors cannot be factored are skipped.
pub fn candidate_primes(points: &[Point]) -> Vec<BigInt> {
    let mut out = BTreeSet::new();
    for (i, v) in points.iter().enumerate() {
        for w in &points[i + 1..] {
            let g = minors_gcd(v, w);
            if g > BigInt::one() {
                if let Ok(f) = factor(&g) {
                    out.extend(f.factors().keys().cloned());
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Primes tried by default when looking for obstructions: the candidates
/// from [`candidate_primes`], primes separating the targets of opposite
/// points, and 2, 3, 5, 7.
pub fn default_primes(inst: &InterpolationInstance) -> Vec<BigInt> {
    let points = inst.points().points();
    let mut out: BTreeSet<BigInt> = candidate_primes(points).into_iter().collect();
    out.extend([2, 3, 5, 7].map(BigInt::from));
    for (i, v) in points.iter().enumerate() {
        for (j, w) in points.iter().enumerate().skip(i + 1) {
            if minors_gcd(v, w).is_zero() {
                let (a, b) = (&inst.targets()[i], &inst.targets()[j]);
                let diff = a * a - b * b;
                if !diff.is_zero() {
                    if let Ok(f) = factor(&diff.abs()) {
                        out.extend(f.factors().keys().cloned());
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

fn minors_gcd(v: &Point, w: &Point) -> BigInt {
    let (a, b) = (v.coords(), w.coords());
    let mut g = BigInt::zero();
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            g = g.gcd(&(&a[i] * &b[j] - &a[j] * &b[i]));
        }
    }
    g
}

/// A `D` such that every degree admitting a value-1 interpolant is a
/// multiple of `D`. If `w = lambda v (mod p)` then `f(w) = lambda^d f(v)`,
/// so `ord_p(lambda)` divides `d`; opposite points force even degree.
/// `None` when the bound does not fit in 64 bits.
pub fn forced_degree_divisor(points: &[Point]) -> Option<u64> {
    let mut acc: u64 = 1;
    for (i, v) in points.iter().enumerate() {
        for w in &points[i + 1..] {
            let g = minors_gcd(v, w);
            let orders: Vec<BigInt> = if g.is_zero() {
                if v == w {
                    continue;
                }
                vec![BigInt::from(2)]
            } else if g.is_one() {
                continue;
            } else {
                let Ok(f) = factor(&g) else { continue };
                f.factors()
                    .keys()
                    .filter_map(|p| ratio_order(v, w, p))
                    .collect()
            };
            for o in orders {
                acc = acc.lcm(&o.to_u64()?);
            }
        }
    }
    Some(acc)
}

fn ratio_order(v: &Point, w: &Point, p: &BigInt) -> Option<BigInt> {
    let j = v.coords().iter().position(|c| !c.mod_floor(p).is_zero())?;
    let inv = crate::modular::mod_inverse(&v.coords()[j], p)?;
    let lambda = (&w.coords()[j] * inv).mod_floor(p);
    let fp = FactoredInteger::from_factors([(p.clone(), 1)].into_iter().collect()).ok()?;
    multiplicative_order(&lambda, &fp).ok()
}

/// A linear form vanishing at `w` and not at `v`. For `n = 2` this is
/// `w_2 x - w_1 y`. For larger `n` the cross forms `w_j x_i - w_i x_j` are
/// combined with Bezout coefficients so that `|L(v)|` is the gcd of all 2x2
/// minors of `(v, w)`; a prime divides it only when `v` and `w` coincide
/// projectively modulo that prime.
pub fn separating_form(v: &Point, w: &Point) -> Result<HomogeneousPoly> {
    if v.dim() != w.dim() {
        return Err(Error::DimensionMismatch {
            expected: v.dim(),
            found: w.dim(),
        });
    }
    let (a, b) = (v.coords(), w.coords());
    let n = a.len();
    let mut coeffs = vec![BigInt::zero(); n];
    let mut g = BigInt::zero();
    for i in 0..n {
        for j in i + 1..n {
            let m = &b[j] * &a[i] - &b[i] * &a[j];
            if m.is_zero() || (!g.is_zero() && m.is_multiple_of(&g)) {
                continue;
            }
            if g.is_zero() {
                coeffs[i] = b[j].clone();
                coeffs[j] = -&b[i];
                g = m;
                continue;
            }
            let e = g.extended_gcd(&m);
            for c in coeffs.iter_mut() {
                *c *= &e.x;
            }
            coeffs[i] += &e.y * &b[j];
            coeffs[j] -= &e.y * &b[i];
            g = e.gcd;
        }
    }
    if g.is_zero() {
        return Err(Error::ScalarMultiples);
    }
    Ok(HomogeneousPoly::linear(&coeffs))
}

/// Product of [`separating_form`]s: zero at every `w` in `others`, nonzero
/// at `v`. With no others, a linear form with value 1 at `v`.
pub fn vanishing_poly(v: &Point, others: &[Point]) -> Result<HomogeneousPoly> {
    let mut acc: Option<HomogeneousPoly> = None;
    for w in others {
        let l = separating_form(v, w)?;
        acc = Some(match acc {
            None => l,
            Some(a) => a.mul(&l)?,
        });
    }
    match acc {
        Some(f) => Ok(f),
        None => unit_linear_form(v),
    }
}

/// A linear form `L` with `L(v) = 1`, from iterated extended gcds.
pub fn unit_linear_form(v: &Point) -> Result<HomogeneousPoly> {
    let coords = v.coords();
    let mut coeffs = vec![BigInt::zero(); coords.len()];
    // invariant: sum_{k <= i} coeffs[k] * coords[k] == g
    let mut g = BigInt::zero();
    for (i, c) in coords.iter().enumerate() {
        let e = g.extended_gcd(c);
        for k in coeffs.iter_mut().take(i) {
            *k *= &e.x;
        }
        coeffs[i] = e.y;
        g = e.gcd;
    }
    if g.is_negative() {
        g = -g;
        coeffs.iter_mut().for_each(|k| *k = -&*k);
    }
    if !g.is_one() {
        return Err(Error::NotCoprime { index: 0, gcd: g });
    }
    Ok(HomogeneousPoly::linear(&coeffs))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessStrategy {
    /// Per prime power, Lagrange-style idempotents built from separating
    /// forms, made exactly 1 by a power of small order, then CRT-glued.
    #[default]
    LocalLagrange,
    /// A unit-valued witness over `Z/a` raised to the lcm of the orders of
    /// its values.
    UnitPower,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessOptions {
    pub strategy: WitnessStrategy,
    /// Refuse to materialize a witness of larger degree.
    pub max_degree: u64,
    /// Seeds the factoring of the values `f_v(v)`.
    pub seed: u64,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        WitnessOptions {
            strategy: WitnessStrategy::default(),
            max_degree: 1000,
            seed: 0,
        }
    }
}

/// A nonconstant homogeneous `f` with `f(Q) = 1` for every `Q` in `s`.
///
/// With `f_v` vanishing at every other representative and `h(v) = 1` modulo
/// `m_v`, where `g_v(v) = m_v` and `g_v(w) = 0`, the combination
/// `h^k - sum ((h^k(v) - 1) / m_v) g_v` takes the value 1 at each
/// representative. [`WitnessStrategy::UnitPower`] uses `m_v = a = prod f_v(v)`
/// and `g_v = (a / f_v(v)) L_v^(d-d_v) f_v`; [`WitnessStrategy::LocalLagrange`]
/// uses `m_v = f_v(v)` and `g_v = L_v^(d-d_v) f_v`.
pub fn construct_witness(s: &PointSet, opts: &WitnessOptions) -> Result<HomogeneousPoly> {
    s.require_coprime()?;
    let n = s.dim();
    if s.is_empty() {
        return Ok(HomogeneousPoly::variable(n, 0));
    }
    if n == 1 {
        let f = HomogeneousPoly::variable(1, 0).pow(2)?;
        return verify(f, s);
    }
    let reps = s.reps();
    // (f_v, f_v(v), factored |f_v(v)|)
    let mut fs = Vec::with_capacity(reps.len());
    for (i, v) in reps.iter().enumerate() {
        let others: Vec<Point> = reps
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, w)| w.clone())
            .collect();
        let mut value = BigInt::one();
        let mut factored = FactoredInteger::one();
        for w in &others {
            let l = separating_form(v, w)?.eval_at(v)?;
            factored = factored.mul(&factor_seeded(&l.abs(), opts.seed)?);
            value *= l;
        }
        fs.push((vanishing_poly(v, &others)?, value, factored));
    }
    let a = fs
        .iter()
        .fold(FactoredInteger::one(), |acc, (_, _, f)| acc.mul(f));

    // f(-v) = (-1)^d f(v)
    let needs_square = s.dedup_map().iter().any(|r| r.negated);
    let max_dv = fs.iter().map(|(f, _, _)| f.degree()).max().unwrap_or(1);
    let local = match opts.strategy {
        WitnessStrategy::LocalLagrange if !a.is_one() => {
            let moduli: Vec<FactoredInteger> = fs.iter().map(|(_, _, f)| f.clone()).collect();
            Some(local::plan(reps, &moduli)?)
        }
        _ => None,
    };
    let h_degree = match (&local, opts.strategy) {
        _ if a.is_one() => 1u64,
        (Some(plan), _) => plan.degree()?,
        (None, _) => unit_power_degree(reps, &a)?,
    };
    let k = (max_dv as u64).div_ceil(h_degree).max(1);
    let d = h_degree.saturating_mul(k);
    let total = if needs_square && d % 2 == 1 { 2 * d } else { d };
    if total > opts.max_degree {
        return Err(Error::DegreeBudgetExceeded {
            required: total,
            budget: opts.max_degree,
            forced_divisor: forced_degree_divisor(&distinct(s.points())),
        });
    }

    let modulus = match &local {
        Some(_) => fs.iter().fold(BigInt::one(), |acc, (_, _, f)| acc.lcm(f.value())),
        None => a.value().clone(),
    };
    let h = if a.is_one() {
        unit_linear_form(&reps[0])?
    } else if let Some(plan) = &local {
        plan.materialize()?
    } else {
        let residues = ResiduePointSet::from_points(a.value().clone(), n, reps)?;
        let g = mod_witness(&a, &residues)?;
        let pts: Vec<Vec<BigInt>> = reps.iter().map(|p| p.coords().to_vec()).collect();
        normalize_to_one(&g, &a, &pts)?.poly
    };
    let big_h = if modulus.is_one() {
        h.lift().pow(k as u32)?
    } else {
        h.lift().with_modulus(&modulus)?.pow(k as u32)?.lift()
    };
    if big_h.degree() as u64 != d {
        return Err(Error::Verification(format!(
            "h^k has degree {}, planned {d}",
            big_h.degree()
        )));
    }
    let d = big_h.degree();

    let mut f = big_h.clone();
    for (v, (fv, fv_value, factored)) in reps.iter().zip(&fs) {
        let m_v = if local.is_some() { factored.value() } else { a.value() };
        let hv = big_h.eval_at(v)?;
        let (coef, rem) = (&hv - BigInt::one()).div_rem(m_v);
        if !rem.is_zero() {
            return Err(Error::Verification(format!("h({v}) = {hv} is not 1 mod {m_v}")));
        }
        if coef.is_zero() {
            continue;
        }
        let mut gv = fv.clone();
        if d > fv.degree() {
            gv = unit_linear_form(v)?.pow(d - fv.degree())?.mul(&gv)?;
        }
        // +-1 in the local case, a / f_v(v) otherwise
        let gv = gv.scale(&(m_v / fv_value));
        f = f.sub(&gv.scale(&coef))?;
    }
    if needs_square && d % 2 == 1 {
        f = f.mul(&f)?;
    }
    verify(f, s)
}

fn verify(f: HomogeneousPoly, s: &PointSet) -> Result<HomogeneousPoly> {
    if f.degree() == 0 {
        return Err(Error::Verification("witness is constant".into()));
    }
    for q in s.points() {
        let value = f.eval_at(q)?;
        if !value.is_one() {
            return Err(Error::Verification(format!("witness takes {value} at {q}")));
        }
    }
    Ok(f)
}

fn distinct(points: &[Point]) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::new();
    for p in points {
        if !out.contains(p) {
            out.push(p.clone());
        }
    }
    out
}

/// Degree of the witness produced by the unit-power route, computed from
/// values alone.
fn unit_power_degree(reps: &[Point], a: &FactoredInteger) -> Result<u64> {
    let residues = ResiduePointSet::from_points(a.value().clone(), reps[0].dim(), reps)?;
    let g = mod_witness(a, &residues)?;
    let mut t = BigInt::one();
    for v in residues.points() {
        t = t.lcm(&multiplicative_order(&g.evaluate(v)?, a)?);
    }
    let degree = t * g.degree();
    Ok(degree.to_u64().unwrap_or(u64::MAX))
}

pub(crate) fn require_prime(p: &BigInt) -> Result<()> {
    if is_prime(p)? {
        Ok(())
    } else {
        Err(Error::NotPrime(p.clone()))
    }
}

#[cfg(test)]
mod tests;
