//! Exact linear algebra over the rationals.
//!
//! Every claim the other modules make reduces to a rank, a kernel or a solve
//! computed here. Elimination is fraction-free: rows are scaled to integer
//! vectors and reduced with integer row operations, sparse while the active
//! block stays thin and dense (Bareiss) once fill-in passes one half. An
//! optional modular path computes ranks modulo word-sized primes.

mod elim;
mod matrix;
mod modular;

pub use matrix::{parse_scalar, Matrix, Scalar};
pub use modular::{is_prime, modular_rank, random_prime, ModularConfig, RankMode};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use elim::Echelon;

/// Outcome of a configured rank computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankOutcome {
    pub rank: usize,
    /// `(prime, rank mod prime)` for every prime that was usable.
    pub modular: Vec<(u64, usize)>,
    /// Primes that divide some denominator of the matrix.
    pub skipped: Vec<u64>,
    pub exact: Option<usize>,
}

/// Rank of `m` under the given configuration.
///
/// In modular-probe mode the answer is the maximum rank over the usable
/// primes, which is a lower bound on the rational rank.
pub fn rank(m: &Matrix, cfg: &ModularConfig) -> Result<RankOutcome> {
    match cfg.mode {
        RankMode::Exact => {
            let r = exact_rank(m);
            Ok(RankOutcome { rank: r, modular: Vec::new(), skipped: Vec::new(), exact: Some(r) })
        }
        RankMode::ModularProbe | RankMode::ModularWithExactConfirm => {
            let mut modular = Vec::new();
            let mut skipped = Vec::new();
            for &p in &cfg.primes {
                match modular_rank(m, p) {
                    Some(r) => modular.push((p, r)),
                    None => {
                        log::info!("prime {p} divides a denominator; skipped");
                        skipped.push(p)
                    }
                }
            }
            let Some(lower) = modular.iter().map(|&(_, r)| r).max() else {
                return Err(Error::NoUsablePrimes { skipped });
            };
            if cfg.mode == RankMode::ModularProbe {
                return Ok(RankOutcome { rank: lower, modular, skipped, exact: None });
            }
            let exact = exact_rank(m);
            if lower > exact {
                return Err(Error::ModularDisagreement { modular: lower, exact });
            }
            if lower < exact {
                log::info!("modular rank {lower} below exact rank {exact}; using exact");
            }
            Ok(RankOutcome { rank: exact, modular, skipped, exact: Some(exact) })
        }
    }
}

/// Exact rational rank.
pub fn exact_rank(m: &Matrix) -> usize {
    Echelon::of(m).rank()
}

/// Exact basis of the right kernel, one column per free variable.
pub fn kernel_basis(m: &Matrix) -> Vec<Vec<Scalar>> {
    let ech = Echelon::of(m);
    let pivots: Vec<usize> = ech.pivot_cols();
    let mut is_pivot = vec![false; m.cols()];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..m.cols())
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut x = vec![Scalar::zero(); m.cols()];
            x[free] = Scalar::one();
            ech.back_substitute(&mut x);
            x
        })
        .collect()
}

/// Solves `m x = b`; `Ok(None)` when the system is inconsistent.
///
/// Free variables are set to zero, so the returned solution is unique
/// whenever `m` has full column rank.
pub fn solve(m: &Matrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    if b.len() != m.rows() {
        return Err(Error::DimensionMismatch { expected: m.rows(), got: b.len() });
    }
    let n = m.cols();
    let aug = m.hstack(&Matrix::column(b));
    let ech = Echelon::of(&aug);
    if ech.pivot_cols().contains(&n) {
        return Ok(None);
    }
    let mut x = vec![Scalar::zero(); n + 1];
    x[n] = -Scalar::one();
    ech.back_substitute(&mut x);
    x.truncate(n);
    Ok(Some(x))
}

/// True when the columns of `b` lie in the column span of `a`.
pub fn span_contains(a: &Matrix, b: &Matrix) -> bool {
    exact_rank(&a.hstack(b)) == exact_rank(a)
}

/// True when `a` and `b` have the same column span.
pub fn same_span(a: &Matrix, b: &Matrix) -> bool {
    let ra = exact_rank(a);
    let rb = exact_rank(b);
    ra == rb && exact_rank(&a.hstack(b)) == ra
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::new(n.into(), d.into())
    }

    fn int_matrix(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&v| Scalar::from_integer(v.into())).collect()).collect(),
        )
    }

    #[test]
    fn identity_rank() {
        assert_eq!(exact_rank(&Matrix::identity(2)), 2);
        assert!(kernel_basis(&Matrix::identity(2)).is_empty());
    }

    #[test]
    fn zero_rank() {
        let z = Matrix::zeros(3, 5);
        assert_eq!(exact_rank(&z), 0);
        assert_eq!(kernel_basis(&z).len(), 5);
    }

    #[test]
    fn kernel_of_row_of_ones() {
        let m = int_matrix(&[&[1, 1]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0][0], -k[0][1].clone());
        assert!(!k[0][0].is_zero());
    }

    #[test]
    fn solve_identity_and_inconsistent() {
        let b = vec![q(1, 2), q(-3, 1)];
        assert_eq!(solve(&Matrix::identity(2), &b).unwrap(), Some(b.clone()));
        let m = int_matrix(&[&[1, 0], &[0, 0]]);
        assert_eq!(solve(&m, &[q(0, 1), q(1, 1)]).unwrap(), None);
        assert!(matches!(solve(&m, &[q(0, 1)]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn rational_entries() {
        let m = Matrix::from_rows(vec![vec![q(1, 2), q(1, 3)], vec![q(3, 2), q(1, 1)]]);
        assert_eq!(exact_rank(&m), 1);
        let k = kernel_basis(&m);
        assert!(m.mul_vec(&k[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn solve_with_rational_system() {
        let m = int_matrix(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let b = vec![q(1, 1), q(2, 1), q(3, 1)];
        let x = solve(&m, &b).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x), b);
    }

    #[test]
    fn modular_probe_and_confirm() {
        let m = int_matrix(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        let cfg = ModularConfig::new(vec![1_048_583, 1_073_741_789], RankMode::ModularWithExactConfirm).unwrap();
        let out = rank(&m, &cfg).unwrap();
        assert_eq!(out.rank, 2);
        assert_eq!(out.exact, Some(2));
        assert_eq!(out.modular.len(), 2);
    }

    #[test]
    fn prime_dividing_denominator_is_skipped() {
        let p = 1_048_583u64;
        let m = Matrix::from_rows(vec![vec![Scalar::new(1.into(), (p as i64).into())]]);
        let cfg = ModularConfig::new(vec![p], RankMode::ModularProbe).unwrap();
        assert_eq!(rank(&m, &cfg), Err(Error::NoUsablePrimes { skipped: vec![p] }));
        let cfg = ModularConfig::new(vec![p, 1_073_741_789], RankMode::ModularProbe).unwrap();
        let out = rank(&m, &cfg).unwrap();
        assert_eq!(out.rank, 1);
        assert_eq!(out.skipped, vec![p]);
    }

    #[test]
    fn modular_rank_can_drop_below_exact() {
        let p = 1_048_583i64;
        let m = int_matrix(&[&[1, 1], &[1, 1 + p]]);
        assert_eq!(exact_rank(&m), 2);
        assert_eq!(modular_rank(&m, p as u64), Some(1));
        let cfg = ModularConfig::new(vec![p as u64], RankMode::ModularWithExactConfirm).unwrap();
        assert_eq!(rank(&m, &cfg).unwrap().rank, 2);
    }
}
