//! Obstructions valid for every degree, from reduction modulo a prime.
//!
//! Modulo `p` the column of `M_d` for a monomial `alpha` depends only on the
//! pattern `rho` with `rho_j = 0` if `alpha_j = 0` and otherwise
//! `rho_j = ((alpha_j - 1) mod (p - 1)) + 1`. Patterns satisfy
//! `|rho| = d (mod p - 1)`, so the columns of `M_d mod p` always lie in the
//! set `S_r` of pattern columns with weight `r = d mod (p - 1)`, and equal it
//! once `d` reaches the least weight realizing each column. A functional
//! killing `S_r` but not the target rules out every degree in the class.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{eval_matrix, require_prime, Certificate, InterpolationInstance};
use crate::error::Result;
use crate::modular::is_prime;
use crate::poly::Point;

const PATTERN_CAP: u64 = 1 << 20;

pub(crate) struct Patterns {
    p: u64,
    /// Distinct columns per weight class with their least realizing weight.
    classes: Vec<Vec<(Vec<u64>, u64)>>,
}

impl Patterns {
    /// `None` when `p^n` exceeds the enumeration cap.
    pub(crate) fn new(points: &[Point], p: &BigInt) -> Option<Patterns> {
        let pu = p.to_u64()?;
        let n = points.first()?.dim();
        if pu.checked_pow(n as u32)? > PATTERN_CAP {
            return None;
        }
        let period = (pu - 1).max(1);
        // pw[i][j][e] = (P_i)_j ^ e mod p
        let pw: Vec<Vec<Vec<u64>>> = points
            .iter()
            .map(|pt| {
                pt.coords()
                    .iter()
                    .map(|c| {
                        let x = c.mod_floor(p).to_u64().expect("reduced below p");
                        let mut row = Vec::with_capacity(pu as usize);
                        let mut acc = 1 % pu;
                        for _ in 0..pu {
                            row.push(acc);
                            acc = acc * x % pu;
                        }
                        row
                    })
                    .collect()
            })
            .collect();
        let mut maps: Vec<HashMap<Vec<u64>, u64>> = vec![HashMap::new(); period as usize];
        let mut rho = vec![0u64; n];
        loop {
            let mut k = 0;
            while k < n {
                rho[k] += 1;
                if rho[k] < pu {
                    break;
                }
                rho[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
            let weight: u64 = rho.iter().sum();
            let column: Vec<u64> = pw
                .iter()
                .map(|tables| {
                    tables
                        .iter()
                        .zip(&rho)
                        .fold(1 % pu, |acc, (t, &e)| acc * t[e as usize] % pu)
                })
                .collect();
            let slot = maps[(weight % period) as usize]
                .entry(column)
                .or_insert(weight);
            *slot = (*slot).min(weight);
        }
        let classes = maps
            .into_iter()
            .map(|m| {
                let mut v: Vec<_> = m.into_iter().collect();
                v.sort();
                v
            })
            .collect();
        Some(Patterns { p: pu, classes })
    }

    pub(crate) fn period(&self) -> u64 {
        self.classes.len() as u64
    }

    /// Least degree from which the column set of `M_d mod p` is exactly
    /// `S_(d mod (p-1))`.
    pub(crate) fn stabilization_degree(&self) -> u64 {
        self.classes
            .iter()
            .flatten()
            .map(|(_, w)| *w)
            .max()
            .unwrap_or(1)
            .max(1)
    }

    fn columns(&self, r: u64) -> Vec<Vec<u64>> {
        self.classes[r as usize].iter().map(|(c, _)| c.clone()).collect()
    }
}

fn inv(x: u64, p: u64) -> u64 {
    let mut base = x % p;
    let mut e = p - 2;
    let mut acc = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Reduced row echelon form of `rows` over `F_p`, zero rows dropped.
fn rref(mut rows: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let s = inv(rows[rank][col], p);
        for x in rows[rank].iter_mut() {
            *x = *x * s % p;
        }
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[col] != 0 {
                let f = row[col];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows
}

fn dot(a: &[u64], b: &[u64], p: u64) -> u64 {
    a.iter().zip(b).fold(0, |acc, (x, y)| (acc + x * y) % p)
}

/// `y` with `y . c = 0` for every row `c` and `y . b != 0`, if `b` is not in
/// the span of the rows.
fn functional(rows: Vec<Vec<u64>>, b: &[u64], p: u64) -> Option<Vec<u64>> {
    let s = b.len();
    let reduced = rref(rows, p);
    let pivots: Vec<usize> = reduced
        .iter()
        .map(|r| r.iter().position(|&x| x != 0).expect("nonzero row"))
        .collect();
    (0..s).filter(|c| !pivots.contains(c)).find_map(|free| {
        let mut y = vec![0u64; s];
        y[free] = 1;
        for (row, &pc) in reduced.iter().zip(&pivots) {
            y[pc] = (p - row[free]) % p;
        }
        (dot(&y, b, p) != 0).then_some(y)
    })
}

fn targets_mod(inst: &InterpolationInstance, p: &BigInt) -> Vec<u64> {
    inst.targets()
        .iter()
        .map(|a| a.mod_floor(p).to_u64().expect("reduced below p"))
        .collect()
}

/// Searches `primes` in order for an all-degree obstruction. A prime is used
/// only if its pattern set is enumerable and the stabilization window
/// `[d0, d0 + 2(p-1))` fits under `stabilization`; otherwise it is skipped.
pub fn periodic_obstruction(
    inst: &InterpolationInstance,
    primes: &[BigInt],
    stabilization: u32,
) -> Result<Option<Certificate>> {
    let points = inst.points().points();
    'primes: for p in primes {
        require_prime(p)?;
        let Some(pat) = Patterns::new(points, p) else {
            continue;
        };
        let period = pat.period();
        let d0 = pat.stabilization_degree();
        if d0 + 2 * period > stabilization as u64 {
            continue;
        }
        let b = targets_mod(inst, p);
        let spans: Vec<_> = (0..period).map(|r| rref(pat.columns(r), pat.p)).collect();
        let t = (1..=period)
            .filter(|t| period % t == 0)
            .find(|&t| (0..period).all(|r| spans[r as usize] == spans[((r + t) % period) as usize]))
            .expect("the full period always works");
        let mut functionals = Vec::with_capacity(t as usize);
        for r in 0..t {
            match functional(pat.columns(r), &b, pat.p) {
                Some(y) => functionals.push(y.into_iter().map(BigInt::from).collect()),
                None => continue 'primes,
            }
        }
        let cert = Certificate::ModularPeriodic {
            prime: p.clone(),
            stabilization_degree: d0 as u32,
            period: t as u32,
            functionals,
        };
        cert.replay(inst)?;
        return Ok(Some(cert));
    }
    Ok(None)
}

/// Independent check of a periodic certificate. Rebuilds the pattern sets,
/// checks each functional against its classes, checks degrees below `d0`
/// directly on `M_d mod p`, and compares column sets of `M_d mod p` with the
/// pattern sets across `[d0, d0 + 2(p-1))`.
pub(crate) fn check_periodic(
    inst: &InterpolationInstance,
    prime: &BigInt,
    d0: u32,
    t: u32,
    functionals: &[Vec<BigInt>],
) -> std::result::Result<(), String> {
    if !is_prime(prime).map_err(|e| e.to_string())? {
        return Err(format!("{prime} is not prime"));
    }
    let points = inst.points().points();
    let pat = Patterns::new(points, prime).ok_or("pattern set too large to replay")?;
    let (p, period) = (pat.p, pat.period());
    if t == 0 || period % t as u64 != 0 || functionals.len() != t as usize {
        return Err(format!("period {t} does not divide {period} or functional count differs"));
    }
    if d0 == 0 {
        return Err("stabilization degree must be at least 1".into());
    }
    let s = points.len();
    let ys: Vec<Vec<u64>> = functionals
        .iter()
        .map(|y| {
            if y.len() != s {
                return Err(format!("functional of length {}, expected {s}", y.len()));
            }
            Ok(y.iter()
                .map(|c| c.mod_floor(prime).to_u64().expect("reduced below p"))
                .collect())
        })
        .collect::<std::result::Result<_, _>>()?;
    let b = targets_mod(inst, prime);
    for r in 0..period {
        let y = &ys[(r % t as u64) as usize];
        if dot(y, &b, p) == 0 {
            return Err(format!("functional for class {r} does not detect the target"));
        }
        if pat.classes[r as usize].iter().any(|(c, _)| dot(y, c, p) != 0) {
            return Err(format!("functional for class {r} misses a pattern column"));
        }
    }
    let column_set = |d: u32| -> std::result::Result<BTreeSet<Vec<u64>>, String> {
        let m = eval_matrix(points, d, Some(prime)).map_err(|e| e.to_string())?;
        Ok((0..m.cols())
            .map(|j| {
                m.column(j)
                    .iter()
                    .map(|x| x.to_u64().expect("reduced below p"))
                    .collect()
            })
            .collect())
    };
    for d in 1..d0 {
        let y = &ys[(d % t) as usize];
        if column_set(d)?.iter().any(|c| dot(y, c, p) != 0) {
            return Err(format!("degree {d} has a column the functional does not kill"));
        }
    }
    for d in d0 as u64..d0 as u64 + 2 * period {
        let expected: BTreeSet<Vec<u64>> = pat.columns(d % period).into_iter().collect();
        if column_set(d as u32)? != expected {
            return Err(format!("column set at degree {d} differs from its pattern class"));
        }
    }
    Ok(())
}

/// Degrees ruled out by a functional modulo some prime. Sound for every
/// `d >= 1` since the columns of `M_d mod p` always lie in their class.
pub(crate) struct DegreeSieve {
    rules: Vec<Vec<bool>>,
}

impl DegreeSieve {
    pub(crate) fn empty() -> Self {
        DegreeSieve { rules: Vec::new() }
    }

    pub(crate) fn new(inst: &InterpolationInstance, primes: &[BigInt]) -> Self {
        let points = inst.points().points();
        let mut rules = Vec::new();
        for p in primes {
            if !is_prime(p).unwrap_or(false) {
                continue;
            }
            let Some(pat) = Patterns::new(points, p) else {
                continue;
            };
            let b = targets_mod(inst, p);
            let excluded: Vec<bool> = (0..pat.period())
                .map(|r| functional(pat.columns(r), &b, pat.p).is_some())
                .collect();
            if excluded.iter().any(|&x| x) {
                rules.push(excluded);
            }
        }
        DegreeSieve { rules }
    }

    pub(crate) fn rules_out(&self, d: u32) -> bool {
        self.rules
            .iter()
            .any(|ex| ex[(d as usize) % ex.len()])
    }
}
