//! Unit-valued homogeneous witnesses over `Z/a`.
//!
//! The pipeline for a modulus `a = prod p^e`:
//! 1. [`ff_unit_witness`] finds a homogeneous `g` over `F_p` that is nonzero
//!    at every point;
//! 2. [`lift_through_nilpotent`] reinterprets `g` modulo `p^e` (a residue
//!    that is a unit mod `p` is a unit mod `p^e`);
//! 3. [`crt_combine`] raises each local witness to a common degree and glues
//!    the coefficients with the Chinese Remainder isomorphism.
//!
//! [`normalize_to_one`] then powers a unit-valued witness until every value
//! is `1 mod a`.

pub mod factor;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

pub use factor::{factor, factor_seeded, is_prime, multiplicative_order, totient, FactoredInteger};

use crate::error::{Error, Result};
use crate::poly::{separating_coeffs, HomogeneousPoly, Point};

/// Integer vectors reduced modulo `m`, each with coprime entries in `Z/m`
/// (the entries together with `m` have gcd 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResiduePointSet {
    modulus: BigInt,
    dim: usize,
    points: Vec<Vec<BigInt>>,
}

impl ResiduePointSet {
    pub fn new(modulus: BigInt, dim: usize, points: Vec<Vec<BigInt>>) -> Result<Self> {
        if modulus < BigInt::from(2) {
            return Err(Error::InvalidModulus(modulus));
        }
        let mut reduced = Vec::with_capacity(points.len());
        for (index, p) in points.into_iter().enumerate() {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.len(),
                });
            }
            let gcd = p.iter().fold(modulus.clone(), |g, c| g.gcd(c));
            if !gcd.is_one() {
                return Err(Error::NotCoprime { index, gcd });
            }
            reduced.push(p.iter().map(|c| c.mod_floor(&modulus)).collect());
        }
        Ok(ResiduePointSet {
            modulus,
            dim,
            points: reduced,
        })
    }

    pub fn from_points(modulus: BigInt, dim: usize, points: &[Point]) -> Result<Self> {
        ResiduePointSet::new(
            modulus,
            dim,
            points.iter().map(|p| p.coords().to_vec()).collect(),
        )
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<BigInt>] {
        &self.points
    }

    /// The same points modulo a divisor `m` of the current modulus.
    pub fn reduce_to(&self, m: &BigInt) -> Result<ResiduePointSet> {
        ResiduePointSet::new(m.clone(), self.dim, self.points.clone())
    }
}

/// Scales a nonzero residue vector so its first nonzero entry is 1 mod `p`.
fn projective_normal(v: &[BigInt], p: &BigInt) -> Vec<BigInt> {
    let lead = v
        .iter()
        .find(|c| !c.mod_floor(p).is_zero())
        .expect("point is nonzero mod p");
    let inv = mod_inverse(lead, p).expect("nonzero residue mod a prime is invertible");
    v.iter().map(|c| (c * &inv).mod_floor(p)).collect()
}

pub(crate) fn mod_inverse(x: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = x.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

fn degree_lcm(a: u32, b: u32) -> Result<u32> {
    let l = (a as u64).lcm(&(b as u64));
    u32::try_from(l).map_err(|_| Error::DegreeOverflow)
}

/// A homogeneous `g` over `F_p`, of degree at least 1, with `g(v) != 0` for
/// every point.
///
/// Points are processed in order while keeping a witness `u` for the prefix.
/// When `u` vanishes at the next point `v`, take `h` = product of linear forms
/// that each vanish at one earlier projective point but not at `v`, and
/// replace `u` with `u^alpha + h^beta` where both powers have degree
/// `lcm(deg u, deg h)`. Earlier points keep the value `u^alpha != 0`; at `v`
/// the value is `h(v)^beta != 0`.
pub fn ff_unit_witness(p: &BigInt, s: &ResiduePointSet) -> Result<HomogeneousPoly> {
    if !is_prime(p)? {
        return Err(Error::NotPrime(p.clone()));
    }
    if s.modulus() != p {
        return Err(Error::ModulusMismatch);
    }
    let n = s.dim();
    let Some(first) = s.points().first() else {
        return HomogeneousPoly::variable(n, 0).with_modulus(p);
    };
    let lead = first
        .iter()
        .position(|c| !c.is_zero())
        .expect("points are nonzero mod p");
    let mut u = HomogeneousPoly::variable(n, lead).with_modulus(p)?;
    let mut seen: Vec<Vec<BigInt>> = Vec::new();
    for v in s.points() {
        let normal = projective_normal(v, p);
        if u.evaluate(v)?.is_zero() {
            let mut h: Option<HomogeneousPoly> = None;
            for w in &seen {
                let coeffs = separating_coeffs(v, w, |x| !x.mod_floor(p).is_zero())
                    .expect("distinct projective points mod p can be separated");
                let form = HomogeneousPoly::linear(&coeffs).with_modulus(p)?;
                h = Some(match h {
                    None => form,
                    Some(acc) => acc.mul(&form)?,
                });
            }
            let h = h.expect("u only vanishes after at least one earlier point");
            let target = degree_lcm(u.degree(), h.degree())?;
            u = u
                .pow(target / u.degree())?
                .add(&h.pow(target / h.degree())?)?;
        }
        if !seen.contains(&normal) {
            seen.push(normal);
        }
    }
    Ok(u)
}

/// Reinterprets the coefficients of `g` modulo `p^e` after certifying that
/// `g(v)` is a unit mod `p` at every point. No coefficient changes.
pub fn lift_through_nilpotent(
    g: &HomogeneousPoly,
    p: &BigInt,
    e: u32,
    points: &[Vec<BigInt>],
) -> Result<HomogeneousPoly> {
    if e == 0 {
        return Err(Error::ZeroExponent);
    }
    let q = num_traits::pow(p.clone(), e as usize);
    let lifted = g.lift().with_modulus(&q)?;
    for v in points {
        let value = lifted.evaluate(v)?;
        if value.mod_floor(p).is_zero() {
            return Err(Error::NotUnit {
                value,
                modulus: q.clone(),
            });
        }
    }
    Ok(lifted)
}

/// Glues witnesses over pairwise coprime moduli into one over their product.
///
/// Each part is first raised to the power that brings its degree to the lcm
/// of all degrees; coefficients are then combined monomial by monomial with
/// the idempotents `e_i = 1 mod m_i, 0 mod m_j`.
pub fn crt_combine(parts: &[(BigInt, HomogeneousPoly)]) -> Result<HomogeneousPoly> {
    let Some((_, first)) = parts.first() else {
        return Err(Error::Empty("no parts to combine"));
    };
    let nvars = first.nvars();
    for (i, (mi, _)) in parts.iter().enumerate() {
        if mi < &BigInt::from(2) {
            return Err(Error::InvalidModulus(mi.clone()));
        }
        for (mj, _) in &parts[i + 1..] {
            if !mi.gcd(mj).is_one() {
                return Err(Error::ModuliNotCoprime(mi.clone(), mj.clone()));
            }
        }
    }
    let mut target = 1u32;
    for (_, g) in parts {
        if g.nvars() != nvars {
            return Err(Error::DimensionMismatch {
                expected: nvars,
                found: g.nvars(),
            });
        }
        if g.degree() == 0 {
            return Err(Error::InvalidDegree(0));
        }
        target = degree_lcm(target, g.degree())?;
    }
    let total: BigInt = parts.iter().map(|(m, _)| m.clone()).product();
    let mut acc = HomogeneousPoly::zero(nvars, target).with_modulus(&total)?;
    for (m, g) in parts {
        let local = g.lift().with_modulus(m)?.pow(target / g.degree())?;
        let cofactor = &total / m;
        let idempotent = &cofactor * mod_inverse(&cofactor, m).expect("moduli are coprime");
        let glued = local.lift().scale(&idempotent).with_modulus(&total)?;
        acc = acc.add(&glued)?;
    }
    Ok(acc)
}

/// A homogeneous polynomial over `Z/a` taking unit values at every point.
pub fn mod_witness(a: &FactoredInteger, s: &ResiduePointSet) -> Result<HomogeneousPoly> {
    if a.value() != s.modulus() {
        return Err(Error::ModulusMismatch);
    }
    let mut parts = Vec::new();
    for (p, e, q) in a.prime_powers() {
        let local = ff_unit_witness(&p, &s.reduce_to(&p)?)?;
        parts.push((q, lift_through_nilpotent(&local, &p, e, s.points())?));
    }
    crt_combine(&parts)
}

/// A power `g^t` with `g^t(v) = 1 mod a` at every point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub poly: HomogeneousPoly,
    /// `t`: the lcm of the multiplicative orders of the values `g(v)`.
    pub exponent: u32,
}

pub fn normalize_to_one(
    g: &HomogeneousPoly,
    a: &FactoredInteger,
    points: &[Vec<BigInt>],
) -> Result<Normalized> {
    let m = a.value();
    let g = g.lift().with_modulus(m)?;
    let mut t = BigInt::one();
    for v in points {
        let value = g.evaluate(v)?;
        t = t.lcm(&multiplicative_order(&value, a)?);
    }
    let exponent = t.to_u32().ok_or(Error::DegreeOverflow)?;
    let poly = if exponent == 1 { g } else { g.pow(exponent)? };
    Ok(Normalized { poly, exponent })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn rps(m: i64, pts: &[[i64; 2]]) -> ResiduePointSet {
        ResiduePointSet::new(
            big(m),
            2,
            pts.iter().map(|p| vec![big(p[0]), big(p[1])]).collect(),
        )
        .unwrap()
    }

    fn poly(terms: &[(&[u32], i64)], degree: u32) -> HomogeneousPoly {
        HomogeneousPoly::from_terms(2, degree, terms.iter().map(|(e, c)| (e.to_vec(), big(*c))))
            .unwrap()
    }

    fn unit_everywhere(g: &HomogeneousPoly, s: &ResiduePointSet) -> bool {
        s.points()
            .iter()
            .all(|v| g.evaluate(v).unwrap().gcd(s.modulus()).is_one())
    }

    #[test]
    fn residue_set_rejects_shared_factor() {
        let r = ResiduePointSet::new(big(10), 2, vec![vec![big(5), big(15)]]);
        assert!(matches!(r, Err(Error::NotCoprime { index: 0, .. })));
        // (2, 5) is fine mod 10 even though 2 | 10
        assert!(ResiduePointSet::new(big(10), 2, vec![vec![big(2), big(5)]]).is_ok());
    }

    #[test]
    fn known_field_witnesses_are_valid() {
        let s5 = rps(5, &[[2, 3], [0, 2], [1, 3]]);
        let x4y4 = poly(&[(&[4, 0], 1), (&[0, 4], 1)], 4).with_modulus(&big(5)).unwrap();
        let vals: Vec<_> = s5.points().iter().map(|v| x4y4.evaluate(v).unwrap()).collect();
        assert_eq!(vals, vec![big(2), big(1), big(2)]);

        let s2 = rps(2, &[[0, 1], [1, 1]]);
        let q = poly(&[(&[2, 0], 1), (&[1, 1], 1), (&[0, 2], 1)], 2)
            .with_modulus(&big(2))
            .unwrap();
        assert!(unit_everywhere(&q, &s2));
    }

    #[test]
    fn field_witness_construction() {
        for (p, pts) in [
            (5, vec![[2, 3], [0, 2], [1, 3]]),
            (2, vec![[0, 1], [1, 1], [1, 0]]),
            (3, vec![[1, 0]]),
            (7, vec![[1, 0], [0, 1], [1, 1], [1, 2], [1, 3], [1, 4], [1, 5], [1, 6]]),
        ] {
            let s = rps(p, &pts);
            let g = ff_unit_witness(&big(p), &s).unwrap();
            assert!(g.degree() >= 1);
            assert!(unit_everywhere(&g, &s), "p={p}: {g}");
        }
        let single = ff_unit_witness(&big(3), &rps(3, &[[1, 0]])).unwrap();
        assert_eq!(single, HomogeneousPoly::variable(2, 0).with_modulus(&big(3)).unwrap());
    }

    #[test]
    fn field_witness_needs_prime() {
        let s = rps(4, &[[1, 0]]);
        assert!(matches!(ff_unit_witness(&big(4), &s), Err(Error::NotPrime(_))));
    }

    #[test]
    fn lifting_keeps_units() {
        let pts: Vec<Vec<BigInt>> = [[2, 3], [5, 7], [11, 13]]
            .iter()
            .map(|p| vec![big(p[0]), big(p[1])])
            .collect();
        let x4y4 = poly(&[(&[4, 0], 1), (&[0, 4], 1)], 4);
        let lifted = lift_through_nilpotent(&x4y4, &big(5), 2, &pts).unwrap();
        assert_eq!(lifted.modulus(), Some(&big(25)));
        assert!(pts
            .iter()
            .all(|v| lifted.evaluate(v).unwrap().gcd(&big(25)).is_one()));

        let q = poly(&[(&[2, 0], 1), (&[1, 1], 1), (&[0, 2], 1)], 2);
        let lifted = lift_through_nilpotent(&q, &big(2), 2, &pts).unwrap();
        assert!(pts
            .iter()
            .all(|v| lifted.evaluate(v).unwrap().gcd(&big(4)).is_one()));

        let x = HomogeneousPoly::variable(2, 0);
        let l = lift_through_nilpotent(&x, &big(3), 4, &[vec![big(1), big(0)]]).unwrap();
        assert_eq!(l.evaluate(&[big(1), big(0)]).unwrap(), big(1));
        assert_eq!(l.modulus(), Some(&big(81)));

        let bad = lift_through_nilpotent(&x, &big(3), 2, &[vec![big(3), big(1)]]);
        assert!(matches!(bad, Err(Error::NotUnit { .. })));
    }

    #[test]
    fn crt_reproduces_mod_100_polynomial() {
        let f1 = poly(&[(&[4, 0], 1), (&[0, 4], 1)], 4);
        let f2 = poly(&[(&[2, 0], 1), (&[1, 1], 1), (&[0, 2], 1)], 2).pow(2).unwrap();
        let glued = crt_combine(&[(big(25), f1), (big(4), f2)]).unwrap();
        let expected = poly(
            &[(&[4, 0], 1), (&[3, 1], 50), (&[2, 2], 75), (&[1, 3], 50), (&[0, 4], 1)],
            4,
        )
        .with_modulus(&big(100))
        .unwrap();
        assert_eq!(glued, expected);
    }

    #[test]
    fn crt_trivial_cases() {
        let g = poly(&[(&[1, 0], 2), (&[0, 1], 3)], 1).with_modulus(&big(7)).unwrap();
        assert_eq!(crt_combine(&[(big(7), g.clone())]).unwrap(), g);

        let x = HomogeneousPoly::variable(2, 0);
        let glued = crt_combine(&[(big(3), x.clone()), (big(5), x.clone())]).unwrap();
        assert_eq!(glued, x.with_modulus(&big(15)).unwrap());
    }

    #[test]
    fn crt_matches_degrees_by_lcm() {
        let x = HomogeneousPoly::variable(2, 0);
        let y2 = HomogeneousPoly::variable(2, 1).pow(2).unwrap();
        let glued = crt_combine(&[(big(3), x.pow(3).unwrap()), (big(5), y2)]).unwrap();
        assert_eq!(glued.degree(), 6);
    }

    #[test]
    fn crt_rejects_shared_factors() {
        let x = HomogeneousPoly::variable(2, 0);
        let r = crt_combine(&[(big(6), x.clone()), (big(4), x)]);
        assert!(matches!(r, Err(Error::ModuliNotCoprime(..))));
    }

    #[test]
    fn mod_100_witness() {
        let s = rps(100, &[[2, 3], [5, 7], [11, 13]]);
        let a = factor(&big(100)).unwrap();
        let w = mod_witness(&a, &s).unwrap();
        assert_eq!(w.modulus(), Some(&big(100)));
        assert!(w.degree() >= 1);
        assert!(unit_everywhere(&w, &s));
    }

    #[test]
    fn mod_6_witness_exhaustive_on_its_points() {
        let s = rps(6, &[[1, 0], [0, 1], [1, 1]]);
        let w = mod_witness(&factor(&big(6)).unwrap(), &s).unwrap();
        for v in s.points() {
            let val = w.evaluate(v).unwrap();
            assert!(val.gcd(&big(6)).is_one(), "{w} at {v:?} = {val}");
        }
    }

    #[test]
    fn normalization() {
        let five = factor(&big(5)).unwrap();
        let x4y4 = poly(&[(&[4, 0], 1), (&[0, 4], 1)], 4);
        let pts = vec![vec![big(2), big(3)]];
        let n = normalize_to_one(&x4y4, &five, &pts).unwrap();
        assert_eq!(n.exponent, 4);
        assert_eq!(n.poly.degree(), 16);
        assert_eq!(n.poly.evaluate(&pts[0]).unwrap(), big(1));

        let x = HomogeneousPoly::variable(2, 0);
        let one = normalize_to_one(&x, &five, &[vec![big(1), big(3)]]).unwrap();
        assert_eq!(one.exponent, 1);
        assert_eq!(one.poly, x.clone().with_modulus(&big(5)).unwrap());

        let zero_val = normalize_to_one(&x, &five, &[vec![big(0), big(1)]]);
        assert!(matches!(zero_val, Err(Error::NotUnit { .. })));
    }
}
