//! Fraction-free row echelon form.
//!
//! Rows are cleared of denominators, then reduced with integer row
//! operations. The sparse phase walks columns left to right; the pivot for a
//! column is the lowest-index remaining row whose leading entry sits in that
//! column, and every other such row is replaced by
//! `pivot * row - lead * pivot_row` divided by its content. When the active
//! block becomes more than half full the remainder is finished with dense
//! Bareiss elimination. Arithmetic runs in checked `i128` first and restarts
//! in `BigInt` on overflow.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::matrix::{Matrix, Scalar};

trait Ring: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn div_exact(&self, o: &Self) -> Self;
    /// Nonnegative gcd.
    fn gcd(&self, o: &Self) -> Self;
    fn is_unit(&self) -> bool;
    fn into_big(self) -> BigInt;
}

impl Ring for i128 {
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        debug_assert_eq!(self % o, 0);
        self / o
    }
    fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.unsigned_abs(), o.unsigned_abs());
        while b != 0 {
            (a, b) = (b, a % b);
        }
        // Values stay below i128::MAX in magnitude because every product
        // that produced them was checked.
        a as i128
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn into_big(self) -> BigInt {
        BigInt::from(self)
    }
}

impl Ring for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        debug_assert!(Zero::is_zero(&(self % o)));
        self / o
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn is_unit(&self) -> bool {
        self.abs() == BigInt::from(1)
    }
    fn into_big(self) -> BigInt {
        self
    }
}

type SparseRow<T> = Vec<(usize, T)>;

/// Row echelon form of a matrix: pivot rows sorted by pivot column, each
/// zero left of its pivot and in every earlier pivot column.
#[derive(Debug, Clone)]
pub(crate) struct Echelon {
    rows: Vec<(usize, SparseRow<BigInt>)>,
}

impl Echelon {
    pub(crate) fn of(m: &Matrix) -> Echelon {
        let big = integer_rows(m);
        let small: Option<Vec<SparseRow<i128>>> = big
            .iter()
            .map(|r| r.iter().map(|(j, v)| v.to_i128().map(|x| (*j, x))).collect())
            .collect();
        if let Some(small) = small {
            if let Some(rows) = eliminate(small, m.cols()) {
                return Echelon { rows: to_big(rows) };
            }
            log::debug!("i128 overflow in {}x{} elimination; retrying with BigInt", m.rows(), m.cols());
        }
        let rows = eliminate(big, m.cols()).expect("BigInt elimination cannot overflow");
        Echelon { rows }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    pub(crate) fn pivot_cols(&self) -> Vec<usize> {
        self.rows.iter().map(|(c, _)| *c).collect()
    }

    /// Fills the pivot coordinates of `x` so that every echelon row
    /// annihilates it, given its free coordinates.
    pub(crate) fn back_substitute(&self, x: &mut [Scalar]) {
        for (pc, row) in self.rows.iter().rev() {
            let mut acc = Scalar::zero();
            let mut pivot = None;
            for (j, v) in row {
                if j == pc {
                    pivot = Some(v);
                } else if !x[*j].is_zero() {
                    acc += &x[*j] * Scalar::from_integer(v.clone());
                }
            }
            let pivot = pivot.expect("pivot entry present");
            x[*pc] = -acc / Scalar::from_integer(pivot.clone());
        }
    }
}

fn to_big(rows: Vec<(usize, SparseRow<i128>)>) -> Vec<(usize, SparseRow<BigInt>)> {
    rows.into_iter()
        .map(|(c, r)| (c, r.into_iter().map(|(j, v)| (j, v.into_big())).collect()))
        .collect()
}

/// Scales each row by the lcm of its denominators.
fn integer_rows(m: &Matrix) -> Vec<SparseRow<BigInt>> {
    (0..m.rows())
        .map(|i| {
            let lcm = m
                .row(i)
                .fold(BigInt::from(1), |acc, (_, v)| acc.lcm(v.denom()));
            m.row(i)
                .map(|(j, v)| (j, v.numer() * (&lcm / v.denom())))
                .collect()
        })
        .collect()
}

fn content_normalize<T: Ring>(row: &mut SparseRow<T>) {
    let mut g = T::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_unit() {
            return;
        }
    }
    if !g.is_zero() && !g.is_unit() {
        for (_, v) in row.iter_mut() {
            *v = v.div_exact(&g);
        }
    }
}

/// `a * row - b * pivot`, both rows sparse and sorted.
fn combine<T: Ring>(a: &T, row: &SparseRow<T>, b: &T, pivot: &SparseRow<T>) -> Option<SparseRow<T>> {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut k) = (0, 0);
    while i < row.len() || k < pivot.len() {
        let ci = row.get(i).map_or(usize::MAX, |e| e.0);
        let ck = pivot.get(k).map_or(usize::MAX, |e| e.0);
        let (col, v) = if ci < ck {
            i += 1;
            (ci, a.mul(&row[i - 1].1)?)
        } else if ck < ci {
            k += 1;
            (ck, T::zero().sub(&b.mul(&pivot[k - 1].1)?)?)
        } else {
            i += 1;
            k += 1;
            (ci, a.mul(&row[i - 1].1)?.sub(&b.mul(&pivot[k - 1].1)?)?)
        };
        if !v.is_zero() {
            out.push((col, v));
        }
    }
    Some(out)
}

fn eliminate<T: Ring>(rows: Vec<SparseRow<T>>, cols: usize) -> Option<Vec<(usize, SparseRow<T>)>> {
    let mut rows: Vec<Option<SparseRow<T>>> =
        rows.into_iter().map(|r| if r.is_empty() { None } else { Some(r) }).collect();
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); cols];
    let mut active_nnz = 0usize;
    let mut active_rows = 0usize;
    for (i, r) in rows.iter().enumerate() {
        if let Some(r) = r {
            buckets[r[0].0].push(i);
            active_nnz += r.len();
            active_rows += 1;
        }
    }
    let mut pivots = Vec::new();
    for c in 0..cols {
        let mut bucket = std::mem::take(&mut buckets[c]);
        if !bucket.is_empty() {
            bucket.sort_unstable();
            let p = bucket[0];
            let prow = rows[p].take().expect("pivot row present");
            active_nnz -= prow.len();
            active_rows -= 1;
            let pv = prow[0].1.clone();
            for &i in &bucket[1..] {
                let row = rows[i].take().expect("bucketed row present");
                active_nnz -= row.len();
                let lead = row[0].1.clone();
                let mut next = combine(&pv, &row, &lead, &prow)?;
                content_normalize(&mut next);
                if next.is_empty() {
                    active_rows -= 1;
                } else {
                    active_nnz += next.len();
                    buckets[next[0].0].push(i);
                    rows[i] = Some(next);
                }
            }
            pivots.push((c, prow));
        }
        let width = cols - c - 1;
        if active_rows > 1 && width > 1 && 2 * active_nnz > active_rows * width {
            let remaining: Vec<SparseRow<T>> = rows.into_iter().flatten().collect();
            pivots.extend(bareiss(remaining, c + 1, cols)?);
            return Some(pivots);
        }
    }
    Some(pivots)
}

/// Dense fraction-free elimination on the columns `first..cols` of the
/// given rows, which must be zero left of `first`. Rows keep their order
/// and the pivot for each column is the first unused row that is nonzero
/// there.
fn bareiss<T: Ring>(rows: Vec<SparseRow<T>>, first: usize, cols: usize) -> Option<Vec<(usize, SparseRow<T>)>> {
    let width = cols - first;
    let mut dense: Vec<Vec<T>> = rows
        .into_iter()
        .map(|r| {
            let mut d = vec![T::zero(); width];
            for (j, v) in r {
                d[j - first] = v;
            }
            d
        })
        .collect();
    let n = dense.len();
    let mut used = vec![false; n];
    let mut prev: Option<T> = None;
    let mut out = Vec::new();
    for c in 0..width {
        let Some(p) = (0..n).find(|&i| !used[i] && !dense[i][c].is_zero()) else {
            continue;
        };
        used[p] = true;
        let prow = std::mem::take(&mut dense[p]);
        let pv = prow[c].clone();
        for (i, row) in dense.iter_mut().enumerate() {
            if used[i] {
                continue;
            }
            let lead = std::mem::replace(&mut row[c], T::zero());
            for j in c + 1..width {
                let mut v = if lead.is_zero() {
                    pv.mul(&row[j])?
                } else {
                    pv.mul(&row[j])?.sub(&lead.mul(&prow[j])?)?
                };
                if let Some(d) = &prev {
                    if !v.is_zero() {
                        v = v.div_exact(d);
                    }
                }
                row[j] = v;
            }
        }
        let sparse: SparseRow<T> = prow
            .into_iter()
            .enumerate()
            .skip(c)
            .filter(|(_, v)| !v.is_zero())
            .map(|(j, v)| (j + first, v))
            .collect();
        out.push((c + first, sparse));
        prev = Some(pv);
    }
    Some(out)
}
