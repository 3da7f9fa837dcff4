//! Exact integer linear algebra: Smith Normal Form with unimodular transforms,
//! linear Diophantine solving, and image membership.
//!
//! The elimination always pivots on the entry of least absolute value in the
//! remaining block and reduces with nearest-integer quotients. Row operations
//! are accumulated into `U` eagerly (it is only `rows x rows`); column
//! operations are recorded as a log so that solving `M x = b` never has to
//! build the `cols x cols` matrix `V`, which matters for wide evaluation
//! matrices.

use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::LengthMismatch {
                    expected: c,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        IntMatrix::new(r, c, data)
    }

    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        IntMatrix::from_rows(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        if x.len() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a.data[i * n + j] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        Ok(sign * &a[(n - 1, n - 1)])
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    fn at_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[target] += factor * row[source]` over columns `from..`.
    fn add_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt, from: usize) {
        for j in from..self.cols {
            let s = &self.data[source * self.cols + j];
            if !s.is_zero() {
                let delta = s * factor;
                *self.at_mut(target, j) += delta;
            }
        }
    }

    /// `col[target] += factor * col[source]` over rows `from..`.
    fn add_col_multiple(&mut self, target: usize, source: usize, factor: &BigInt, from: usize) {
        for i in from..self.rows {
            let s = &self.data[i * self.cols + source];
            if !s.is_zero() {
                let delta = s * factor;
                *self.at_mut(i, target) += delta;
            }
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = self.at_mut(i, j);
            *v = -&*v;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|c| c.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Smith Normal Form `U * M * V = D` with unimodular `U`, `V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
    rank: usize,
}

impl SnfDecomposition {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The `min(rows, cols)` diagonal entries of `D`, zeros included.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    /// Nonzero diagonal entries; each divides the next.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().take(self.rank).collect()
    }
}

#[derive(Clone, Debug)]
enum ColOp {
    Swap(usize, usize),
    /// `col[target] += factor * col[source]`
    AddMultiple {
        target: usize,
        source: usize,
        factor: BigInt,
    },
    Negate(usize),
}

/// Result of the elimination before `V` is (optionally) materialized.
struct Reduction {
    d: IntMatrix,
    u: IntMatrix,
    ops: Vec<ColOp>,
    rank: usize,
}

impl Reduction {
    fn right_transform(&self) -> IntMatrix {
        let mut v = IntMatrix::identity(self.d.cols());
        for op in &self.ops {
            match op {
                ColOp::Swap(a, b) => v.swap_cols(*a, *b),
                ColOp::AddMultiple {
                    target,
                    source,
                    factor,
                } => v.add_col_multiple(*target, *source, factor, 0),
                ColOp::Negate(j) => v.negate_col(*j),
            }
        }
        v
    }

    /// `V * y`, replaying the column log from the last operation backwards.
    fn apply_right(&self, mut y: Vec<BigInt>) -> Vec<BigInt> {
        for op in self.ops.iter().rev() {
            match op {
                ColOp::Swap(a, b) => y.swap(*a, *b),
                ColOp::AddMultiple {
                    target,
                    source,
                    factor,
                } => {
                    if !y[*target].is_zero() {
                        let delta = &y[*target] * factor;
                        y[*source] += delta;
                    }
                }
                ColOp::Negate(j) => y[*j] = -&y[*j],
            }
        }
        y
    }
}

fn nearest_quotient(a: &BigInt, p: &BigInt) -> BigInt {
    let (mut q, r) = a.div_mod_floor(p);
    if (r.abs() << 1usize) > p.abs() {
        q += 1;
    }
    q
}

fn min_entry(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            let better = match best {
                None => true,
                Some((bi, bj)) => x.magnitude() < a[(bi, bj)].magnitude(),
            };
            if better {
                best = Some((i, j));
                if x.magnitude().is_one() {
                    return best;
                }
            }
        }
    }
    best
}

fn reduce(m: &IntMatrix) -> Reduction {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut ops = Vec::new();
    let mut t = 0;

    let move_to_pivot = |a: &mut IntMatrix,
                             u: &mut IntMatrix,
                             ops: &mut Vec<ColOp>,
                             t: usize,
                             (pi, pj): (usize, usize)| {
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        if pj != t {
            a.swap_cols(t, pj);
            ops.push(ColOp::Swap(t, pj));
        }
    };

    while t < rows.min(cols) {
        let Some(pos) = min_entry(&a, t) else { break };
        move_to_pivot(&mut a, &mut u, &mut ops, t, pos);
        loop {
            let p = a[(t, t)].clone();
            let mut dirty = false;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = -nearest_quotient(&a[(i, t)], &p);
                if !q.is_zero() {
                    a.add_row_multiple(i, t, &q, t);
                    u.add_row_multiple(i, t, &q, 0);
                }
                dirty |= !a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -nearest_quotient(&a[(t, j)], &p);
                if !q.is_zero() {
                    a.add_col_multiple(j, t, &q, t);
                    ops.push(ColOp::AddMultiple {
                        target: j,
                        source: t,
                        factor: q,
                    });
                }
                dirty |= !a[(t, j)].is_zero();
            }
            if dirty {
                let pos = min_entry(&a, t).expect("a nonzero remainder exists");
                move_to_pivot(&mut a, &mut u, &mut ops, t, pos);
                continue;
            }
            // Pivot row and column are clear; the pivot must divide the rest.
            let offender =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row_multiple(t, i, &one, t);
                    u.add_row_multiple(t, i, &one, 0);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_col(t);
            ops.push(ColOp::Negate(t));
        }
        t += 1;
    }
    Reduction {
        d: a,
        u,
        ops,
        rank: t,
    }
}

/// Smith Normal Form of `m` with both transforms.
pub fn snf(m: &IntMatrix) -> SnfDecomposition {
    let r = reduce(m);
    let v = r.right_transform();
    SnfDecomposition {
        u: r.u,
        v,
        d: r.d,
        rank: r.rank,
    }
}

/// Why `b` is not in the integer image of `M`: the row `functional` of `U`
/// satisfies `functional * M == 0 (mod modulus)` entrywise while
/// `functional * b != 0 (mod modulus)`. A `modulus` of zero means exact
/// equality. Checkable with [`check_nonmembership`] without redoing the SNF.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonMembership {
    pub diagonal: Vec<BigInt>,
    pub transformed: Vec<BigInt>,
    pub index: usize,
    pub functional: Vec<BigInt>,
    pub modulus: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Member(Vec<BigInt>),
    NonMember(NonMembership),
}

/// Decides whether `b` lies in the integer column span of `m`, producing
/// either a solution of `m x = b` or a separating functional.
pub fn decide_membership(m: &IntMatrix, b: &[BigInt]) -> Result<Membership> {
    if b.len() != m.rows() {
        return Err(Error::LengthMismatch {
            expected: m.rows(),
            found: b.len(),
        });
    }
    let r = reduce(m);
    let c = r.u.mul_vec(b)?;
    let diagonal: Vec<BigInt> = (0..m.rows().min(m.cols()))
        .map(|i| r.d[(i, i)].clone())
        .collect();
    let fail = |index: usize, modulus: BigInt| {
        Membership::NonMember(NonMembership {
            diagonal: diagonal.clone(),
            transformed: c.clone(),
            index,
            functional: r.u.row(index).to_vec(),
            modulus,
        })
    };
    let mut y = vec![BigInt::zero(); m.cols()];
    for i in 0..r.rank {
        let d = &r.d[(i, i)];
        let (q, rem) = c[i].div_mod_floor(d);
        if !rem.is_zero() {
            return Ok(fail(i, d.clone()));
        }
        y[i] = q;
    }
    if let Some(i) = (r.rank..m.rows()).find(|&i| !c[i].is_zero()) {
        return Ok(fail(i, BigInt::zero()));
    }
    Ok(Membership::Member(r.apply_right(y)))
}

/// An integer `x` with `m x = b`, or `None` when none exists.
pub fn solve_diophantine(m: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    Ok(match decide_membership(m, b)? {
        Membership::Member(x) => Some(x),
        Membership::NonMember(_) => None,
    })
}

/// Whether `b` lies in the integer image of `m`; agrees with
/// [`solve_diophantine`] by construction.
pub fn in_image(m: &IntMatrix, b: &[BigInt]) -> Result<bool> {
    Ok(matches!(decide_membership(m, b)?, Membership::Member(_)))
}

/// Independent check of a [`NonMembership`] functional against `m` and `b`.
pub fn check_nonmembership(
    m: &IntMatrix,
    b: &[BigInt],
    functional: &[BigInt],
    modulus: &BigInt,
) -> bool {
    if functional.len() != m.rows() || b.len() != m.rows() {
        return false;
    }
    let vanishes = |x: BigInt| {
        if modulus.is_zero() {
            x.is_zero()
        } else {
            x.is_multiple_of(modulus)
        }
    };
    let annihilates_columns = (0..m.cols()).all(|j| {
        let s: BigInt = (0..m.rows()).map(|i| &functional[i] * &m[(i, j)]).sum();
        vanishes(s)
    });
    let pairing: BigInt = functional.iter().zip(b).map(|(w, x)| w * x).sum();
    annihilates_columns && !vanishes(pairing)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn bigs(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| big(x)).collect()
    }

    fn check(m: &IntMatrix) -> SnfDecomposition {
        let s = snf(m);
        assert_eq!(s.u.mul(m).unwrap().mul(&s.v).unwrap(), s.d);
        assert!(s.d.is_diagonal());
        assert!(s.u.determinant().unwrap().abs().is_one());
        assert!(s.v.determinant().unwrap().abs().is_one());
        let f = s.invariant_factors();
        assert!(f.iter().all(|x| x.is_positive()));
        assert!(f.windows(2).all(|w| w[1].is_multiple_of(&w[0])));
        s
    }

    #[test]
    fn identity_snf() {
        let s = check(&IntMatrix::identity(2));
        assert_eq!(s.diagonal(), bigs(&[1, 1]));
    }

    #[test]
    fn two_by_two_snf() {
        // gcd of entries is 2 and |det| = 8, so the factors are 2 and 4
        let s = check(&IntMatrix::from_i64(&[[2, 4], [6, 8]]).unwrap());
        assert_eq!(s.diagonal(), bigs(&[2, 4]));
    }

    #[test]
    fn rank_deficient_and_rectangular() {
        let s = check(&IntMatrix::from_i64(&[[1, 2, 3], [2, 4, 6]]).unwrap());
        assert_eq!(s.rank(), 1);
        assert_eq!(s.diagonal(), bigs(&[1, 0]));
        let z = check(&IntMatrix::zeros(3, 2));
        assert_eq!(z.rank(), 0);
        let tall = check(&IntMatrix::from_i64(&[[4], [6], [10]]).unwrap());
        assert_eq!(tall.diagonal(), bigs(&[2]));
    }

    #[test]
    fn divisibility_fixup() {
        // diag(2,3) is not in Smith form; the answer is diag(1,6)
        let s = check(&IntMatrix::from_i64(&[[2, 0], [0, 3]]).unwrap());
        assert_eq!(s.diagonal(), bigs(&[1, 6]));
    }

    #[test]
    fn solve_identity() {
        let m = IntMatrix::identity(2);
        assert_eq!(
            solve_diophantine(&m, &bigs(&[7, -3])).unwrap(),
            Some(bigs(&[7, -3]))
        );
        assert!(in_image(&m, &bigs(&[7, -3])).unwrap());
    }

    #[test]
    fn unsolvable_system() {
        // x + 2y = 1, 2x + y = 1 forces x = y and 3x = 1
        let m = IntMatrix::from_i64(&[[1, 2], [2, 1]]).unwrap();
        let b = bigs(&[1, 1]);
        assert_eq!(solve_diophantine(&m, &b).unwrap(), None);
        assert!(!in_image(&m, &b).unwrap());
        match decide_membership(&m, &b).unwrap() {
            Membership::NonMember(nm) => {
                assert!(check_nonmembership(&m, &b, &nm.functional, &nm.modulus));
                assert_eq!(nm.modulus, big(3));
            }
            Membership::Member(_) => panic!("expected non-membership"),
        }
    }

    #[test]
    fn square_of_difference() {
        // columns x^2, xy, y^2 at (1,2) and (2,1)
        let m = IntMatrix::from_i64(&[[1, 2, 4], [4, 2, 1]]).unwrap();
        let b = bigs(&[1, 1]);
        let x = solve_diophantine(&m, &b).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), b);
    }

    #[test]
    fn inconsistent_zero_row() {
        let m = IntMatrix::from_i64(&[[1, 1], [2, 2]]).unwrap();
        let b = bigs(&[1, 3]);
        match decide_membership(&m, &b).unwrap() {
            Membership::NonMember(nm) => {
                assert!(nm.modulus.is_zero());
                assert!(check_nonmembership(&m, &b, &nm.functional, &nm.modulus));
            }
            Membership::Member(_) => panic!("expected non-membership"),
        }
    }

    #[test]
    fn length_mismatch() {
        let m = IntMatrix::identity(2);
        assert!(matches!(
            in_image(&m, &bigs(&[1])),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn determinant_small() {
        let m = IntMatrix::from_i64(&[[0, 2, 1], [3, 1, 4], [1, 0, 2]]).unwrap();
        // 0*(2-0) - 2*(6-4) + 1*(0-1) = -5
        assert_eq!(m.determinant().unwrap(), big(-5));
    }
}
