//! Positive integers carried together with their prime factorization.
//!
//! Factoring is trial division followed by Pollard–Brent rho on whatever
//! cofactor is left. Primality is decided by Miller–Rabin with the first
//! thirteen prime bases, which is deterministic below `3.3 * 10^24`; larger
//! cofactors are reported instead of guessed.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

const TRIAL_BOUND: u32 = 10_000;
const RHO_BUDGET: u64 = 1 << 22;
const MR_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
/// Miller–Rabin with `MR_BASES` is exact below this bound.
const MR_DETERMINISTIC_BOUND: &str = "3317044064679887385961981";

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_BOUND as usize;
        let mut composite = vec![false; n + 1];
        let mut out = Vec::new();
        for i in 2..=n {
            if !composite[i] {
                out.push(i as u32);
                let mut j = i * i;
                while j <= n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        out
    })
}

fn mr_bound() -> &'static BigInt {
    static BOUND: OnceLock<BigInt> = OnceLock::new();
    BOUND.get_or_init(|| MR_DETERMINISTIC_BOUND.parse().expect("constant parses"))
}

/// Deterministic primality for `n < 3.3 * 10^24`. Larger inputs that pass
/// every base are reported as uncertified rather than prime.
pub fn is_prime(n: &BigInt) -> Result<bool> {
    if n < &BigInt::from(2) {
        return Ok(false);
    }
    for &p in small_primes().iter().take(64) {
        let p = BigInt::from(p);
        if n == &p {
            return Ok(true);
        }
        if n.is_multiple_of(&p) {
            return Ok(false);
        }
    }
    let one = BigInt::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'bases: for &a in &MR_BASES {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x).mod_floor(n);
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return Ok(false);
    }
    if n >= mr_bound() {
        return Err(Error::PrimalityUncertified(n.clone()));
    }
    Ok(true)
}

/// A positive integer with its factorization `value = prod p^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredInteger {
    value: BigInt,
    factors: BTreeMap<BigInt, u32>,
}

impl FactoredInteger {
    pub fn one() -> Self {
        FactoredInteger {
            value: BigInt::one(),
            factors: BTreeMap::new(),
        }
    }

    /// Builds from a prime-exponent map, certifying each prime.
    pub fn from_factors(factors: BTreeMap<BigInt, u32>) -> Result<Self> {
        let mut value = BigInt::one();
        for (p, &e) in &factors {
            if !is_prime(p)? {
                return Err(Error::NotPrime(p.clone()));
            }
            value *= num_traits::pow(p.clone(), e as usize);
        }
        let factors = factors.into_iter().filter(|(_, e)| *e > 0).collect();
        Ok(FactoredInteger { value, factors })
    }

    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn factors(&self) -> &BTreeMap<BigInt, u32> {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// `(p, e, p^e)` for each prime power exactly dividing the value.
    pub fn prime_powers(&self) -> Vec<(BigInt, u32, BigInt)> {
        self.factors
            .iter()
            .map(|(p, &e)| (p.clone(), e, num_traits::pow(p.clone(), e as usize)))
            .collect()
    }

    pub fn mul(&self, other: &FactoredInteger) -> FactoredInteger {
        let mut factors = self.factors.clone();
        for (p, e) in &other.factors {
            *factors.entry(p.clone()).or_insert(0) += e;
        }
        FactoredInteger {
            value: &self.value * &other.value,
            factors,
        }
    }

    /// Least common multiple, taking the larger exponent of each prime.
    pub fn lcm(&self, other: &FactoredInteger) -> FactoredInteger {
        let mut factors = self.factors.clone();
        for (p, &e) in &other.factors {
            let slot = factors.entry(p.clone()).or_insert(0);
            *slot = (*slot).max(e);
        }
        let value = factors
            .iter()
            .map(|(p, &e)| num_traits::pow(p.clone(), e as usize))
            .product();
        FactoredInteger { value, factors }
    }

    /// Euler's totient `prod p^(e-1) (p-1)`.
    pub fn totient(&self) -> BigInt {
        self.factors
            .iter()
            .map(|(p, &e)| num_traits::pow(p.clone(), e as usize - 1) * (p - 1))
            .product()
    }

    /// Carmichael exponent of `(Z/value)^x`, factored.
    pub fn carmichael(&self) -> Result<FactoredInteger> {
        let mut acc = FactoredInteger::one();
        for (p, &e) in &self.factors {
            let local = if p == &BigInt::from(2) {
                let k = match e {
                    1 => 0,
                    2 => 1,
                    _ => e - 2,
                };
                prime_power(p, k)
            } else {
                factor(&(p - 1))?.mul(&prime_power(p, e - 1))
            };
            acc = acc.lcm(&local);
        }
        Ok(acc)
    }
}

fn prime_power(p: &BigInt, e: u32) -> FactoredInteger {
    let mut factors = BTreeMap::new();
    if e > 0 {
        factors.insert(p.clone(), e);
    }
    FactoredInteger {
        value: num_traits::pow(p.clone(), e as usize),
        factors,
    }
}

pub fn totient(a: &FactoredInteger) -> BigInt {
    a.totient()
}

pub fn factor(x: &BigInt) -> Result<FactoredInteger> {
    factor_seeded(x, 0)
}

/// Factors `x >= 1`. The seed only picks the rho polynomials tried first;
/// the factorization itself is unique.
pub fn factor_seeded(x: &BigInt, seed: u64) -> Result<FactoredInteger> {
    if !x.is_positive() {
        return Err(Error::NotPositive(x.clone()));
    }
    let mut factors: BTreeMap<BigInt, u32> = BTreeMap::new();
    let mut rest = x.clone();
    for &p in small_primes() {
        let pb = BigInt::from(p);
        if &pb * &pb > rest {
            break;
        }
        while rest.is_multiple_of(&pb) {
            rest /= &pb;
            *factors.entry(pb.clone()).or_insert(0) += 1;
        }
    }
    let mut stack = vec![rest];
    while let Some(n) = stack.pop() {
        if n.is_one() {
            continue;
        }
        if n.to_u64().is_some_and(|v| v <= (TRIAL_BOUND as u64).pow(2)) || is_prime(&n)? {
            *factors.entry(n).or_insert(0) += 1;
            continue;
        }
        let d = pollard_brent(&n, seed)?;
        let (q, _) = n.div_rem(&d);
        stack.push(d);
        stack.push(q);
    }
    Ok(FactoredInteger {
        value: x.clone(),
        factors,
    })
}

/// A nontrivial divisor of the odd composite `n`.
fn pollard_brent(n: &BigInt, seed: u64) -> Result<BigInt> {
    let mut spent = 0u64;
    for attempt in 0..64u64 {
        let c = BigInt::from(1 + (seed.wrapping_add(attempt)) % 1_000_003);
        let f = |x: &BigInt| (x * x + &c).mod_floor(n);
        let mut y = BigInt::from(2 + attempt);
        let mut r = 1u64;
        let mut q = BigInt::one();
        let mut g = BigInt::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let block = 64u64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..block.min(r - k) {
                    y = f(&y);
                    q = (q * (&x - &y).abs()).mod_floor(n);
                }
                g = q.gcd(n);
                k += block;
            }
            spent += r;
            if spent > RHO_BUDGET {
                return Err(Error::FactorBudgetExceeded(n.clone()));
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n && !g.is_zero() {
            return Ok(g);
        }
    }
    Err(Error::FactorBudgetExceeded(n.clone()))
}

/// Multiplicative order of `u` in `(Z/modulus)^x`.
pub fn multiplicative_order(u: &BigInt, modulus: &FactoredInteger) -> Result<BigInt> {
    let m = modulus.value();
    if m.is_one() {
        return Ok(BigInt::one());
    }
    let u = u.mod_floor(m);
    if !u.gcd(m).is_one() {
        return Err(Error::NotUnit {
            value: u,
            modulus: m.clone(),
        });
    }
    let lambda = modulus.carmichael()?;
    let mut t = lambda.value().clone();
    for (q, &e) in lambda.factors() {
        for _ in 0..e {
            let candidate = &t / q;
            if u.modpow(&candidate, m).is_one() {
                t = candidate;
            } else {
                break;
            }
        }
    }
    Ok(t)
}
