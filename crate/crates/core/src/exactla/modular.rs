use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use super::matrix::Matrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RankMode {
    #[default]
    Exact,
    ModularProbe,
    ModularWithExactConfirm,
}

/// Primes and mode for rank computations.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModularConfig {
    pub primes: Vec<u64>,
    pub mode: RankMode,
}

/// Smallest prime accepted by [`ModularConfig`].
pub const MIN_PRIME: u64 = 1 << 20;
// Products of two residues must fit in a u64.
const MAX_PRIME: u64 = 1 << 32;

impl ModularConfig {
    pub fn exact() -> Self {
        ModularConfig::default()
    }

    pub fn new(primes: Vec<u64>, mode: RankMode) -> Result<Self> {
        for (i, &p) in primes.iter().enumerate() {
            if p <= MIN_PRIME || p >= MAX_PRIME || !is_prime(p) {
                return Err(Error::param(format!("{p} is not a prime in (2^20, 2^32)")));
            }
            if primes[..i].contains(&p) {
                return Err(Error::param(format!("prime {p} listed twice")));
            }
        }
        if mode != RankMode::Exact && primes.is_empty() {
            return Err(Error::param("modular mode needs at least one prime"));
        }
        Ok(ModularConfig { primes, mode })
    }

    /// `count` distinct random 30-bit primes.
    pub fn random<R: Rng>(rng: &mut R, count: usize, mode: RankMode) -> Self {
        let mut primes = Vec::with_capacity(count);
        while primes.len() < count {
            let p = random_prime(rng);
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
        ModularConfig { primes, mode }
    }
}

/// A uniformly drawn prime in `[2^29, 2^30)`.
pub fn random_prime<R: Rng>(rng: &mut R) -> u64 {
    loop {
        let c = rng.gen_range((1u64 << 29)..(1u64 << 30)) | 1;
        if is_prime(c) {
            return c;
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin, exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn reduce(v: &BigInt, p: u64) -> u64 {
    let r = v % BigInt::from(p);
    let r = if r < BigInt::zero() { r + BigInt::from(p) } else { r };
    r.to_u64().expect("residue fits in u64")
}

/// Rank modulo `p`, or `None` when `p` divides a denominator.
pub fn modular_rank(m: &Matrix, p: u64) -> Option<usize> {
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(m.rows());
    for i in 0..m.rows() {
        let mut row = vec![0u64; m.cols()];
        for (j, v) in m.row(i) {
            let den = reduce(v.denom(), p);
            if den == 0 {
                return None;
            }
            let num = reduce(v.numer(), p);
            row[j] = mul_mod(num, pow_mod(den, p - 2, p), p);
        }
        rows.push(row);
    }
    let mut rank = 0;
    for c in 0..m.cols() {
        let Some(pr) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = pow_mod(rows[rank][c], p - 2, p);
        for v in rows[rank][c..].iter_mut() {
            *v = mul_mod(*v, inv, p);
        }
        let (top, bottom) = rows.split_at_mut(rank + 1);
        let pivot = &top[rank];
        for row in bottom.iter_mut() {
            let f = row[c];
            if f == 0 {
                continue;
            }
            for j in c..pivot.len() {
                if pivot[j] != 0 {
                    row[j] = (row[j] + p - mul_mod(f, pivot[j], p)) % p;
                }
            }
        }
        rank += 1;
    }
    Some(rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn primality() {
        assert!(is_prime(1_048_583));
        assert!(!is_prime(1_048_581));
        assert!(is_prime(1_073_741_789));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to 2, 3, 5, 7
    }

    #[test]
    fn config_validation() {
        assert!(ModularConfig::new(vec![97], RankMode::ModularProbe).is_err());
        assert!(ModularConfig::new(vec![1_048_583, 1_048_583], RankMode::ModularProbe).is_err());
        assert!(ModularConfig::new(vec![], RankMode::ModularProbe).is_err());
        assert!(ModularConfig::new(vec![1_048_583], RankMode::ModularProbe).is_ok());
    }

    #[test]
    fn random_primes_are_distinct_30_bit() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cfg = ModularConfig::random(&mut rng, 3, RankMode::ModularProbe);
        assert_eq!(cfg.primes.len(), 3);
        for &p in &cfg.primes {
            assert!(is_prime(p) && (1 << 29..1 << 30).contains(&p));
        }
        assert!(ModularConfig::new(cfg.primes.clone(), cfg.mode).is_ok());
    }
}
