//! Dense univariate polynomials with exact rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::exactla::Scalar;

/// Coefficients in increasing degree; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::new(vec![c])
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![Scalar::zero(); k + 1];
        c[k] = Scalar::one();
        Poly { coeffs: c }
    }

    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&v| Scalar::from_integer(v.into())).collect())
    }

    /// Parses `"c0,c1,...,cn"`; each entry an integer or `num/den`.
    pub fn parse(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(crate::exactla::parse_scalar)
            .collect::<Result<Vec<_>>>()?;
        if coeffs.is_empty() {
            return Err(Error::Parse("empty coefficient list".into()));
        }
        Ok(Poly::new(coeffs))
    }

    /// Inverse of [`Poly::parse`].
    pub fn coeff_list(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.coeffs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        Poly::new(self.coeffs.iter().map(|v| v * c).collect())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, v)| v * Scalar::from_integer(k.into()))
                .collect(),
        )
    }

    /// Euclidean division: `(quotient, remainder)`.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Scalar::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1;
            let c = &rem[k] / &lead;
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[k - dd + i] -= &c * dc;
            }
            quot[k - dd] = c;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(l) => self.scale(&(Scalar::one() / l)),
            None => Poly::zero(),
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Wronskian `a b' - b a'`.
    pub fn wronskian(a: &Poly, b: &Poly) -> Poly {
        &(a * &b.derivative()) - &(b * &a.derivative())
    }

    /// Random polynomial of degree at most `deg` with coefficients in
    /// `-bound..=bound`.
    pub fn random<R: Rng>(rng: &mut R, deg: usize, bound: i64) -> Poly {
        Poly::new((0..=deg).map(|_| Scalar::from_integer(rng.gen_range(-bound..=bound).into())).collect())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|v| -v).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Scalar::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_and_gcd() {
        let a = Poly::from_ints(&[-1, 0, 1]); // x^2 - 1
        let b = Poly::from_ints(&[0, -1, 1]); // x^2 - x
        assert_eq!(a.gcd(&b), Poly::from_ints(&[-1, 1]));
        let (q, r) = a.div_rem(&Poly::from_ints(&[-1, 1]));
        assert_eq!(q, Poly::from_ints(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(Poly::zero().gcd(&Poly::zero()), Poly::zero());
    }

    #[test]
    fn wronskian_of_one_and_x() {
        assert_eq!(Poly::wronskian(&Poly::one(), &Poly::monomial(1)), Poly::one());
    }

    #[test]
    fn parse_coefficients() {
        let p = Poly::parse("1, 1/2,0,-3").unwrap();
        assert_eq!(p.degree(), Some(3));
        assert_eq!(p.coeff(1), Scalar::new(1.into(), 2.into()));
        assert!(Poly::parse("1,a").is_err());
        assert_eq!(Poly::parse(&p.coeff_list()).unwrap(), p);
        assert_eq!(Poly::parse(&Poly::zero().coeff_list()).unwrap(), Poly::zero());
    }
}
