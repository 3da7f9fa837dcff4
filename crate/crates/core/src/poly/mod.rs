//! Sparse homogeneous multivariate polynomials with exact coefficients.
//!
//! A [`HomogeneousPoly`] stores a map from [`Monomial`] to a nonzero
//! coefficient. Every stored monomial has the same total degree, so
//! homogeneity is structural rather than checked after the fact. Coefficients
//! are arbitrary-precision integers, optionally tagged with a modulus `m >= 2`
//! in which case they are kept in `[0, m)`.
//!
//! Monomials are ordered graded-lexicographically with the largest power of
//! the first variable first, so for two variables the order of the degree-`d`
//! monomials is `x^d, x^(d-1) y, ..., y^d`.

pub mod json;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An integer vector with at least one coordinate and not identically zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point(Vec<BigInt>);

impl Point {
    pub fn new(coords: Vec<BigInt>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Empty("point with no coordinates"));
        }
        if coords.iter().all(Zero::is_zero) {
            return Err(Error::ZeroPoint { index: 0 });
        }
        Ok(Point(coords))
    }

    pub fn from_i64(coords: &[i64]) -> Result<Self> {
        Point::new(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Nonnegative gcd of the coordinates.
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    pub fn negated(&self) -> Point {
        Point(self.0.iter().map(|c| -c).collect())
    }

    /// True when the first nonzero coordinate is positive.
    pub fn has_canonical_sign(&self) -> bool {
        self.0
            .iter()
            .find(|c| !c.is_zero())
            .is_some_and(|c| c.is_positive())
    }

    /// `self` and `other` span the same line (all 2x2 minors vanish).
    pub fn is_proportional_to(&self, other: &Point) -> bool {
        let n = self.dim();
        if n != other.dim() {
            return false;
        }
        let (a, b) = (&self.0, &other.0);
        (0..n).all(|i| (i + 1..n).all(|j| &a[i] * &b[j] == &a[j] * &b[i]))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Where an input point went after sign canonicalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RepIndex {
    pub rep: usize,
    pub negated: bool,
}

/// A finite ordered list of points of a common dimension, together with its
/// sign-canonical representatives: `v` and `-v` share a representative (the
/// one whose first nonzero coordinate is positive) and duplicates are merged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    dim: usize,
    points: Vec<Point>,
    reps: Vec<Point>,
    dedup_map: Vec<RepIndex>,
}

impl PointSet {
    pub fn new(dim: usize, points: Vec<Point>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Empty("zero-dimensional point set"));
        }
        let mut reps: Vec<Point> = Vec::new();
        let mut index: HashMap<Point, usize> = HashMap::new();
        let mut dedup_map = Vec::with_capacity(points.len());
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
            let negated = !p.has_canonical_sign();
            let canon = if negated { p.negated() } else { p.clone() };
            let rep = *index.entry(canon.clone()).or_insert_with(|| {
                reps.push(canon);
                reps.len() - 1
            });
            dedup_map.push(RepIndex { rep, negated });
        }
        Ok(PointSet {
            dim,
            points,
            reps,
            dedup_map,
        })
    }

    /// Convenience constructor from small integer rows.
    pub fn from_i64<R: AsRef<[i64]>>(dim: usize, rows: &[R]) -> Result<Self> {
        let points = rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                Point::from_i64(r.as_ref()).map_err(|e| match e {
                    Error::ZeroPoint { .. } => Error::ZeroPoint { index: i },
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        PointSet::new(dim, points)
    }

    /// Fails on the first point whose coordinates have a common factor.
    pub fn require_coprime(&self) -> Result<()> {
        for (index, p) in self.points.iter().enumerate() {
            let gcd = p.content();
            if !gcd.is_one() {
                return Err(Error::NotCoprime { index, gcd });
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn reps(&self) -> &[Point] {
        &self.reps
    }

    pub fn dedup_map(&self) -> &[RepIndex] {
        &self.dedup_map
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Some representative occurs with both signs in the input.
    pub fn has_opposite_pair(&self) -> bool {
        let mut seen = vec![(false, false); self.reps.len()];
        for r in &self.dedup_map {
            let slot = &mut seen[r.rep];
            if r.negated {
                slot.1 = true;
            } else {
                slot.0 = true;
            }
        }
        seen.iter().any(|&(pos, neg)| pos && neg)
    }
}

/// Exponent vector of a monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u64 {
        self.exps.iter().map(|&e| e as u64).sum()
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All `C(n+d-1, n-1)` monomials of degree `d` in `n` variables, in the
/// canonical order (largest power of the first variable first).
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    fn fill(prefix: &mut Vec<u32>, left: usize, d: u32, out: &mut Vec<Monomial>) {
        if left == 1 {
            prefix.push(d);
            out.push(Monomial::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            fill(prefix, left - 1, d - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        fill(&mut Vec::with_capacity(n), n, d, &mut out);
    }
    out
}

/// Homogeneous polynomial of a fixed degree over `Z` or `Z/m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousPoly {
    nvars: usize,
    degree: u32,
    modulus: Option<BigInt>,
    terms: BTreeMap<Monomial, BigInt>,
}

impl HomogeneousPoly {
    /// Zero polynomial with a nominal degree.
    pub fn zero(nvars: usize, degree: u32) -> Self {
        HomogeneousPoly {
            nvars,
            degree,
            modulus: None,
            terms: BTreeMap::new(),
        }
    }

    /// Degree-0 polynomial `c`.
    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = HomogeneousPoly::zero(nvars, 0);
        if !c.is_zero() {
            p.terms.insert(Monomial::new(vec![0; nvars]), c);
        }
        p
    }

    /// The variable `x_i` (zero-based).
    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        let mut p = HomogeneousPoly::zero(nvars, 1);
        p.terms.insert(Monomial::new(exps), BigInt::one());
        p
    }

    /// The linear form `sum_i coeffs[i] * x_i`.
    pub fn linear(coeffs: &[BigInt]) -> Self {
        let nvars = coeffs.len();
        let mut p = HomogeneousPoly::zero(nvars, 1);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut exps = vec![0; nvars];
                exps[i] = 1;
                p.terms.insert(Monomial::new(exps), c.clone());
            }
        }
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing
    /// repeated monomials. Every exponent vector must have length `nvars` and
    /// total degree `degree`.
    pub fn from_terms<I>(nvars: usize, degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, BigInt)>,
    {
        let mut p = HomogeneousPoly::zero(nvars, degree);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: exps.len(),
                });
            }
            let m = Monomial::new(exps);
            if m.degree() != degree as u64 {
                return Err(Error::MalformedPoly(format!(
                    "monomial {:?} has degree {}, expected {degree}",
                    m.exps(),
                    m.degree()
                )));
            }
            *p.terms.entry(m).or_insert_with(BigInt::zero) += c;
        }
        p.terms.retain(|_, c| !c.is_zero());
        Ok(p)
    }

    /// Reinterprets the coefficients modulo `m`, reducing them into `[0, m)`.
    pub fn with_modulus(mut self, m: &BigInt) -> Result<Self> {
        if m < &BigInt::from(2) {
            return Err(Error::InvalidModulus(m.clone()));
        }
        self.modulus = Some(m.clone());
        self.reduce();
        Ok(self)
    }

    /// Drops the modulus tag, keeping the representatives in `[0, m)`.
    pub fn lift(&self) -> Self {
        HomogeneousPoly {
            modulus: None,
            ..self.clone()
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn modulus(&self) -> Option<&BigInt> {
        self.modulus.as_ref()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the monomial with the given exponents (zero if absent).
    pub fn coeff(&self, exps: &[u32]) -> BigInt {
        self.terms
            .get(&Monomial::new(exps.to_vec()))
            .cloned()
            .unwrap_or_default()
    }

    /// Largest coefficient magnitude in bits; a rough size measure.
    pub fn max_coeff_bits(&self) -> u64 {
        self.terms.values().map(|c| c.bits()).max().unwrap_or(0)
    }

    fn reduce(&mut self) {
        if let Some(m) = &self.modulus {
            for c in self.terms.values_mut() {
                *c = c.mod_floor(m);
            }
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, subtract: bool) -> Result<Self> {
        self.check_compatible(other)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: other.degree,
            });
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            let slot = out.terms.entry(m.clone()).or_insert_with(BigInt::zero);
            if subtract {
                *slot -= c;
            } else {
                *slot += c;
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out.reduce();
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -&*c;
        }
        out.reduce();
        out
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= k;
        }
        out.terms.retain(|_, c| !c.is_zero());
        out.reduce();
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let degree = self
            .degree
            .checked_add(other.degree)
            .ok_or(Error::DegreeOverflow)?;
        let mut acc: HashMap<Monomial, BigInt> =
            HashMap::with_capacity(self.terms.len() * other.terms.len() / 2 + 1);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let slot = acc.entry(ma.times(mb)).or_insert_with(BigInt::zero);
                *slot += ca * cb;
            }
        }
        let mut out = HomogeneousPoly {
            nvars: self.nvars,
            degree,
            modulus: self.modulus.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        };
        out.reduce();
        Ok(out)
    }

    /// `self^k` for `k >= 1`, by repeated squaring.
    pub fn pow(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroExponent);
        }
        self.degree.checked_mul(k).ok_or(Error::DegreeOverflow)?;
        let mut base = self.clone();
        let mut acc: Option<HomogeneousPoly> = None;
        let mut e = k;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base)?,
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base)?;
        }
        Ok(acc.expect("k >= 1"))
    }

    /// Exact value at `v`, reduced into `[0, m)` when a modulus is present.
    pub fn evaluate(&self, v: &[BigInt]) -> Result<BigInt> {
        if v.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: v.len(),
            });
        }
        let m = self.modulus.as_ref();
        let mut max_exp = vec![0u32; self.nvars];
        for mono in self.terms.keys() {
            for (slot, &e) in max_exp.iter_mut().zip(mono.exps()) {
                *slot = (*slot).max(e);
            }
        }
        let powers: Vec<Vec<BigInt>> = v
            .iter()
            .zip(&max_exp)
            .map(|(x, &top)| power_table(x, top, m))
            .collect();
        let mut total = BigInt::zero();
        for (mono, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in mono.exps().iter().enumerate() {
                if e > 0 {
                    t *= &powers[i][e as usize];
                    if let Some(m) = m {
                        t = t.mod_floor(m);
                    }
                }
            }
            total += t;
        }
        if let Some(m) = m {
            total = total.mod_floor(m);
        }
        Ok(total)
    }

    /// Evaluates at a [`Point`].
    pub fn eval_at(&self, p: &Point) -> Result<BigInt> {
        self.evaluate(p.coords())
    }
}

/// Coefficients of a cross form `w_j x_i - w_i x_j` that vanishes at `w` and
/// is "nonzero" at `v` under `nonzero`. `j` is the last index where `w_j`
/// passes `nonzero`; the first `i` giving a nonzero value at `v` wins.
pub(crate) fn separating_coeffs<F>(v: &[BigInt], w: &[BigInt], nonzero: F) -> Option<Vec<BigInt>>
where
    F: Fn(&BigInt) -> bool,
{
    let j = (0..w.len()).rev().find(|&j| nonzero(&w[j]))?;
    (0..w.len()).filter(|&i| i != j).find_map(|i| {
        let value = &w[j] * &v[i] - &w[i] * &v[j];
        nonzero(&value).then(|| {
            let mut coeffs = vec![BigInt::zero(); w.len()];
            coeffs[i] = w[j].clone();
            coeffs[j] = -&w[i];
            coeffs
        })
    })
}

pub(crate) fn power_table(x: &BigInt, top: u32, m: Option<&BigInt>) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(top as usize + 1);
    out.push(BigInt::one());
    for k in 1..=top as usize {
        let mut next = &out[k - 1] * x;
        if let Some(m) = m {
            next = next.mod_floor(m);
        }
        out.push(next);
    }
    out
}

impl fmt::Display for HomogeneousPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 4] = ["x", "y", "z", "w"];
        let var = |i: usize| -> String {
            if self.nvars <= NAMES.len() {
                NAMES[i].to_string()
            } else {
                format!("x{}", i + 1)
            }
        };
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (k, (mono, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let vars: Vec<String> = mono
                .exps()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        var(i)
                    } else {
                        format!("{}^{}", var(i), e)
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, vars.join("*"))?;
            }
        }
        if let Some(m) = &self.modulus {
            write!(f, " (mod {m})")?;
        }
        Ok(())
    }
}
