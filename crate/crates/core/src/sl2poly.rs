//! Monomial model for symmetric powers of a two-dimensional space `H`.
//!
//! `S^k H` is spanned by `x^0..x^k` and `S^k H*` by `y^0..y^k`. Exterior
//! powers are indexed by strictly increasing tuples in colexicographic
//! order, and tensor products by mixed-radix flat indices with the first
//! factor most significant. The line `∧²H*` is identified with the scalars
//! through `y ∧ 1 ↦ 1`, so it never appears as an explicit factor.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactla::{Matrix, Scalar};

/// Binomial coefficient, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Maps an exponent to a basis position of a space whose top exponent is
/// `top`, or `None` if the monomial vanishes there (`y^{-1} = 0` and
/// `y^{top+1} = 0`).
pub fn clamp_exp(e: i64, top: usize) -> Option<usize> {
    (0..=top as i64).contains(&e).then_some(e as usize)
}

/// Basis `x^0..x^k` of `S^k H`, or `y^0..y^k` of `S^k H*` when `dual`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SymBasis {
    pub k: usize,
    pub dual: bool,
}

impl SymBasis {
    pub fn new(k: usize) -> Self {
        SymBasis { k, dual: false }
    }

    pub fn dual(k: usize) -> Self {
        SymBasis { k, dual: true }
    }

    pub fn dim(&self) -> usize {
        self.k + 1
    }

    fn var(&self) -> char {
        if self.dual { 'y' } else { 'x' }
    }
}

/// Strictly increasing `r`-tuples from `0..n` in colex order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WedgeBasis {
    pub r: usize,
    pub inner_dim: usize,
    /// Variable used when printing monomials of the inner space.
    #[serde(skip)]
    pub var: char,
    #[serde(skip)]
    tuples: Vec<Vec<usize>>,
}

impl WedgeBasis {
    pub fn new(r: usize, inner_dim: usize) -> Self {
        Self::with_var(r, inner_dim, 'e')
    }

    pub fn with_var(r: usize, inner_dim: usize, var: char) -> Self {
        let mut tuples = Vec::with_capacity(binomial(inner_dim, r));
        if r <= inner_dim {
            let mut t: Vec<usize> = (0..r).collect();
            loop {
                tuples.push(t.clone());
                // colex successor: bump the lowest entry that can move
                let mut i = 0;
                while i < r && (if i + 1 < r { t[i] + 1 == t[i + 1] } else { t[i] + 1 == inner_dim }) {
                    i += 1;
                }
                if i == r {
                    break;
                }
                t[i] += 1;
                for (k, v) in t.iter_mut().enumerate().take(i) {
                    *v = k;
                }
            }
        }
        WedgeBasis { r, inner_dim, var, tuples }
    }

    pub fn dim(&self) -> usize {
        self.tuples.len()
    }

    pub fn tuple(&self, idx: usize) -> &[usize] {
        &self.tuples[idx]
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    /// Colex rank of a strictly increasing tuple.
    pub fn index(&self, t: &[usize]) -> usize {
        debug_assert!(t.len() == self.r && t.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(t.last().is_none_or(|&m| m < self.inner_dim));
        t.iter().enumerate().map(|(i, &k)| binomial(k, i + 1)).sum()
    }

    /// Sorts an arbitrary tuple into basis order: `Some((sign, index))`, or
    /// `None` if an entry repeats (the wedge vanishes) or leaves the range.
    pub fn decomposable(&self, t: &[usize]) -> Option<(i64, usize)> {
        if t.len() != self.r || t.iter().any(|&k| k >= self.inner_dim) {
            return None;
        }
        let mut v = t.to_vec();
        let mut sign = 1i64;
        // insertion sort, counting transpositions
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                v.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
            if j > 0 && v[j - 1] == v[j] {
                return None;
            }
        }
        if v.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((sign, self.index(&v)))
    }
}

/// One tensor factor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Factor {
    Sym(SymBasis),
    Wedge(WedgeBasis),
}

impl Factor {
    pub fn dim(&self) -> usize {
        match self {
            Factor::Sym(s) => s.dim(),
            Factor::Wedge(w) => w.dim(),
        }
    }

    fn label(&self, i: usize) -> String {
        let mono = |var: char, e: usize| match e {
            0 => "1".to_string(),
            1 => var.to_string(),
            _ => format!("{var}^{e}"),
        };
        match self {
            Factor::Sym(s) => mono(s.var(), i),
            Factor::Wedge(w) => {
                let parts: Vec<String> = w.tuple(i).iter().map(|&e| mono(w.var, e)).collect();
                if parts.is_empty() { "1".to_string() } else { parts.join("∧") }
            }
        }
    }
}

/// Tensor product of basis descriptors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TensorSpace {
    pub factors: Vec<Factor>,
}

impl TensorSpace {
    pub fn new(factors: Vec<Factor>) -> Self {
        TensorSpace { factors }
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(Factor::dim).product()
    }

    pub fn arity(&self) -> usize {
        self.factors.len()
    }

    /// Flat index of a multi-index of per-factor basis positions.
    pub fn flat(&self, multi: &[usize]) -> usize {
        assert_eq!(multi.len(), self.arity(), "multi-index arity");
        self.factors.iter().zip(multi).fold(0, |acc, (f, &i)| {
            assert!(i < f.dim(), "basis position {i} out of range");
            acc * f.dim() + i
        })
    }

    pub fn multi(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.arity()];
        for (slot, f) in out.iter_mut().zip(&self.factors).rev() {
            *slot = flat % f.dim();
            flat /= f.dim();
        }
        out
    }

    /// Human-readable name of a basis element, e.g. `y∧y^3⊗x^2`.
    pub fn label(&self, multi: &[usize]) -> String {
        let parts: Vec<String> = self.factors.iter().zip(multi).map(|(f, &i)| f.label(i)).collect();
        parts.join("⊗")
    }
}

/// An element of a tensor space as a sparse coefficient table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionElement {
    pub space: TensorSpace,
    coeffs: BTreeMap<Vec<usize>, Scalar>,
}

impl SectionElement {
    pub fn zero(space: TensorSpace) -> Self {
        SectionElement { space, coeffs: BTreeMap::new() }
    }

    pub fn add_term(&mut self, multi: Vec<usize>, c: Scalar) {
        assert_eq!(multi.len(), self.space.arity());
        for (f, &i) in self.space.factors.iter().zip(&multi) {
            assert!(i < f.dim(), "basis position {i} outside its factor");
        }
        let e = self.coeffs.entry(multi).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.retain(|_, v| !v.is_zero());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Scalar)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, multi: &[usize]) -> Scalar {
        self.coeffs.get(multi).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &Scalar) -> SectionElement {
        let mut out = SectionElement::zero(self.space.clone());
        for (m, v) in &self.coeffs {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn to_sparse(&self) -> BTreeMap<usize, Scalar> {
        self.coeffs.iter().map(|(m, v)| (self.space.flat(m), v.clone())).collect()
    }

    pub fn to_dense(&self) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.space.dim()];
        for (i, c) in self.to_sparse() {
            v[i] = c;
        }
        v
    }

    pub fn from_sparse(space: TensorSpace, v: &BTreeMap<usize, Scalar>) -> Self {
        let mut out = SectionElement::zero(space);
        for (&i, c) in v {
            let m = out.space.multi(i);
            out.add_term(m, c.clone());
        }
        out
    }

    pub fn from_dense(space: TensorSpace, v: &[Scalar]) -> Self {
        assert_eq!(v.len(), space.dim());
        let sparse = v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect();
        Self::from_sparse(space, &sparse)
    }

    /// JSON list of `{indices, coeff, term}` records.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.coeffs
                .iter()
                .map(|(m, c)| {
                    serde_json::json!({
                        "indices": m,
                        "coeff": c.to_string(),
                        "term": self.space.label(m),
                    })
                })
                .collect(),
        )
    }
}

impl fmt::Display for SectionElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})·{}", self.space.label(m))?;
        }
        Ok(())
    }
}

/// A linear map between tensor spaces, stored as a matrix on flat indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    pub domain: TensorSpace,
    pub codomain: TensorSpace,
    pub matrix: Matrix,
}

impl LinearMap {
    pub fn new(domain: TensorSpace, codomain: TensorSpace, matrix: Matrix) -> Self {
        assert_eq!(matrix.cols(), domain.dim());
        assert_eq!(matrix.rows(), codomain.dim());
        LinearMap { domain, codomain, matrix }
    }

    /// Builds the map from the image of every domain basis element.
    pub fn from_images(
        domain: TensorSpace,
        codomain: TensorSpace,
        image: impl Fn(&[usize]) -> Vec<(Vec<usize>, Scalar)>,
    ) -> Self {
        let columns = (0..domain.dim())
            .map(|j| {
                image(&domain.multi(j)).into_iter().map(|(m, c)| (codomain.flat(&m), c)).collect()
            })
            .collect();
        let matrix = Matrix::from_columns(codomain.dim(), columns);
        LinearMap { domain, codomain, matrix }
    }

    pub fn apply(&self, v: &SectionElement) -> Result<SectionElement> {
        if v.space != self.domain {
            return Err(Error::param("element does not lie in the map's domain"));
        }
        Ok(SectionElement::from_sparse(self.codomain.clone(), &self.matrix.apply_sparse(&v.to_sparse())))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap> {
        if other.codomain.dim() != self.domain.dim() {
            return Err(Error::DimensionMismatch { expected: self.domain.dim(), got: other.codomain.dim() });
        }
        Ok(LinearMap::new(other.domain.clone(), self.codomain.clone(), self.matrix.mul(&other.matrix)?))
    }

    /// `self ⊗ Id` on `domain ⊗ extra → codomain ⊗ extra`.
    pub fn tensor_identity(&self, extra: Factor) -> LinearMap {
        let n = extra.dim();
        let mut dom = self.domain.clone();
        dom.factors.push(extra.clone());
        let mut cod = self.codomain.clone();
        cod.factors.push(extra);
        let mut m = Matrix::zeros(cod.dim(), dom.dim());
        for i in 0..self.matrix.rows() {
            for (j, v) in self.matrix.row(i) {
                for e in 0..n {
                    m.set(i * n + e, j * n + e, v.clone());
                }
            }
        }
        LinearMap::new(dom, cod, m)
    }

    /// `Id ⊗ self` on `first ⊗ domain → first ⊗ codomain`.
    pub fn identity_tensor(&self, first: Factor) -> LinearMap {
        let n = first.dim();
        let (dd, cd) = (self.domain.dim(), self.codomain.dim());
        let mut dom = TensorSpace::new(vec![first.clone()]);
        dom.factors.extend(self.domain.factors.iter().cloned());
        let mut cod = TensorSpace::new(vec![first]);
        cod.factors.extend(self.codomain.factors.iter().cloned());
        let mut m = Matrix::zeros(cod.dim(), dom.dim());
        for e in 0..n {
            for i in 0..self.matrix.rows() {
                for (j, v) in self.matrix.row(i) {
                    m.set(e * cd + i, e * dd + j, v.clone());
                }
            }
        }
        LinearMap::new(dom, cod, m)
    }
}

/// Multiplication `S^a H ⊗ S^b H → S^{a+b} H`, `x^i ⊗ x^j ↦ x^{i+j}`.
pub fn sym_mult(a: usize, b: usize) -> LinearMap {
    let dom = TensorSpace::new(vec![Factor::Sym(SymBasis::new(a)), Factor::Sym(SymBasis::new(b))]);
    let cod = TensorSpace::new(vec![Factor::Sym(SymBasis::new(a + b))]);
    LinearMap::from_images(dom, cod, |m| vec![(vec![m[0] + m[1]], Scalar::one())])
}

/// `∧^r f` on flat bases: `v_1 ∧ .. ∧ v_r ↦ f(v_1) ∧ .. ∧ f(v_r)`.
pub fn wedge_power_map(f: &LinearMap, r: usize) -> Result<LinearMap> {
    let n = f.domain.dim();
    let m = f.codomain.dim();
    if r > n {
        return Err(Error::param(format!("wedge degree {r} exceeds domain dimension {n}")));
    }
    let src = WedgeBasis::new(r, n);
    let dst = WedgeBasis::new(r, m);
    let images: Vec<Vec<(usize, Scalar)>> = (0..n).map(|j| f.matrix.column_entries(j)).collect();
    let columns = src
        .tuples()
        .iter()
        .map(|t| {
            let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
            expand_wedge(&images, t, &dst, &mut Vec::with_capacity(r), Scalar::one(), &mut acc);
            acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
        })
        .collect();
    Ok(LinearMap::new(
        TensorSpace::new(vec![Factor::Wedge(src)]),
        TensorSpace::new(vec![Factor::Wedge(dst.clone())]),
        Matrix::from_columns(dst.dim(), columns),
    ))
}

fn expand_wedge(
    images: &[Vec<(usize, Scalar)>],
    t: &[usize],
    dst: &WedgeBasis,
    chosen: &mut Vec<usize>,
    coeff: Scalar,
    acc: &mut BTreeMap<usize, Scalar>,
) {
    let Some((&first, rest)) = t.split_first() else {
        if let Some((sign, idx)) = dst.decomposable(chosen) {
            *acc.entry(idx).or_insert_with(Scalar::zero) += coeff * Scalar::from_integer(sign.into());
        }
        return;
    };
    for (row, v) in &images[first] {
        if chosen.contains(row) {
            continue;
        }
        chosen.push(*row);
        expand_wedge(images, rest, dst, chosen, &coeff * v, acc);
        chosen.pop();
    }
}

/// Splitting `∧^r(A ⊗ H) → ∧^r A ⊗ S^r H`,
/// `(a_1⊗h_1) ∧ .. ∧ (a_r⊗h_r) ↦ (a_1 ∧ .. ∧ a_r) ⊗ h_1⋯h_r`.
///
/// The flat index of `a ⊗ x^e` in `A ⊗ H` is `2a + e`.
pub fn wedge_split_map(a_dim: usize, r: usize) -> LinearMap {
    let src = WedgeBasis::new(r, 2 * a_dim);
    let dst = WedgeBasis::new(r, a_dim);
    let dom = TensorSpace::new(vec![Factor::Wedge(src)]);
    let cod = TensorSpace::new(vec![Factor::Wedge(dst.clone()), Factor::Sym(SymBasis::new(r))]);
    let src = match &dom.factors[0] {
        Factor::Wedge(w) => w.clone(),
        _ => unreachable!(),
    };
    LinearMap::from_images(dom, cod, |m| {
        let t = src.tuple(m[0]);
        let a: Vec<usize> = t.iter().map(|k| k / 2).collect();
        let e: usize = t.iter().map(|k| k % 2).sum();
        match dst.decomposable(&a) {
            Some((sign, idx)) => vec![(vec![idx, e], Scalar::from_integer(sign.into()))],
            None => vec![],
        }
    })
}

/// Basis-dual pairing `∧^r(A*) × ∧^r(A) → k` with `⟨e_I*, e_J⟩ = δ_IJ`.
#[derive(Debug, Clone)]
pub struct WedgePairing {
    pub basis: WedgeBasis,
}

/// The pairing on `r`-th exterior powers of an `n`-dimensional space.
pub fn contract_pair(r: usize, n: usize) -> WedgePairing {
    WedgePairing { basis: WedgeBasis::new(r, n) }
}

impl WedgePairing {
    /// Pairs two elements given by colex coefficient tables.
    pub fn pair(&self, dual: &BTreeMap<usize, Scalar>, primal: &BTreeMap<usize, Scalar>) -> Scalar {
        dual.iter().fold(Scalar::zero(), |acc, (i, a)| match primal.get(i) {
            Some(b) => acc + a * b,
            None => acc,
        })
    }

    /// Pairs two decomposable monomials given by (possibly unsorted) tuples.
    pub fn pair_monomials(&self, dual: &[usize], primal: &[usize]) -> Scalar {
        match (self.basis.decomposable(dual), self.basis.decomposable(primal)) {
            (Some((s, i)), Some((t, j))) if i == j => Scalar::from_integer((s * t).into()),
            _ => Scalar::zero(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{exact_rank, kernel_basis};
    use proptest::prelude::*;

    fn int(v: i64) -> Scalar {
        Scalar::from_integer(v.into())
    }

    #[test]
    fn colex_order_and_index() {
        let w = WedgeBasis::new(2, 4);
        let expected: Vec<Vec<usize>> =
            vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 3], vec![1, 3], vec![2, 3]];
        assert_eq!(w.tuples(), &expected[..]);
        for (i, t) in expected.iter().enumerate() {
            assert_eq!(w.index(t), i);
        }
        assert_eq!(WedgeBasis::new(0, 3).dim(), 1);
        assert_eq!(WedgeBasis::new(4, 3).dim(), 0);
    }

    #[test]
    fn decomposable_signs() {
        let w = WedgeBasis::new(3, 5);
        assert_eq!(w.decomposable(&[0, 1, 2]), Some((1, 0)));
        assert_eq!(w.decomposable(&[1, 0, 2]), Some((-1, 0)));
        assert_eq!(w.decomposable(&[2, 0, 1]), Some((1, 0)));
        assert_eq!(w.decomposable(&[2, 0, 2]), None);
        assert_eq!(w.decomposable(&[0, 1, 5]), None);
    }

    #[test]
    fn sym_mult_examples() {
        let m = sym_mult(1, 1);
        // x⊗1 and 1⊗x both go to x
        assert_eq!(m.matrix.get(1, m.domain.flat(&[1, 0])), int(1));
        assert_eq!(m.matrix.get(1, m.domain.flat(&[0, 1])), int(1));
        let m22 = sym_mult(2, 2);
        assert_eq!((m22.matrix.rows(), m22.matrix.cols()), (5, 9));
        assert_eq!(exact_rank(&m22.matrix), 5);
        assert_eq!(kernel_basis(&m22.matrix).len(), 4);
        assert!(sym_mult(0, 3).matrix.is_identity());
    }

    #[test]
    fn sym_mult_surjective() {
        for a in 0..5 {
            for b in 0..5 {
                assert_eq!(exact_rank(&sym_mult(a, b).matrix), a + b + 1);
            }
        }
    }

    fn flat_map(rows: usize, cols: usize, entries: &[i64]) -> LinearMap {
        let m = Matrix::from_rows(entries.chunks(cols).map(|r| r.iter().map(|&v| int(v)).collect()).collect());
        LinearMap::new(
            TensorSpace::new(vec![Factor::Sym(SymBasis::new(cols - 1))]),
            TensorSpace::new(vec![Factor::Sym(SymBasis::new(rows - 1))]),
            m,
        )
    }

    #[test]
    fn wedge_power_examples() {
        let f = flat_map(3, 3, &[2, 0, 0, 0, 2, 0, 0, 0, 2]);
        let w1 = wedge_power_map(&f, 1).unwrap();
        assert_eq!(w1.matrix, f.matrix);
        let w2 = wedge_power_map(&f, 2).unwrap();
        assert_eq!(w2.matrix, Matrix::identity(3).scale(&int(4)));
        let id = flat_map(4, 4, &[1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1]);
        assert!(wedge_power_map(&id, 3).unwrap().matrix.is_identity());
        assert!(wedge_power_map(&f, 4).is_err());
    }

    #[test]
    fn wedge_power_is_minor_determinant() {
        // ∧² of a 2x2 map is its determinant.
        let f = flat_map(2, 2, &[1, 2, 3, 4]);
        assert_eq!(wedge_power_map(&f, 2).unwrap().matrix.get(0, 0), int(-2));
    }

    #[test]
    fn contract_pair_examples() {
        let p1 = contract_pair(1, 3);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(p1.pair_monomials(&[i], &[j]), int((i == j) as i64));
            }
        }
        let p2 = contract_pair(2, 3);
        assert_eq!(p2.pair_monomials(&[0, 1], &[0, 1]), int(1));
        assert_eq!(p2.pair_monomials(&[0, 1], &[0, 2]), int(0));
        assert_eq!(p2.pair_monomials(&[1, 0], &[0, 1]), int(-1));
    }

    #[test]
    fn split_dimension_bookkeeping() {
        // ∧^r(S^{g-2}H* ⊗ ∧²H*) has dimension C(g-1, r).
        for g in 3..9 {
            for r in 1..g {
                assert_eq!(WedgeBasis::new(r, g - 1).dim(), binomial(g - 1, r));
            }
        }
        let s = wedge_split_map(3, 2);
        assert_eq!(s.domain.dim(), binomial(6, 2));
        assert_eq!(s.codomain.dim(), 3 * 3);
    }

    #[test]
    fn tensor_flat_roundtrip() {
        let s = TensorSpace::new(vec![
            Factor::Wedge(WedgeBasis::new(2, 4)),
            Factor::Sym(SymBasis::new(2)),
            Factor::Sym(SymBasis::new(1)),
        ]);
        assert_eq!(s.dim(), 36);
        for i in 0..s.dim() {
            assert_eq!(s.flat(&s.multi(i)), i);
        }
    }

    fn small_map() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(-3i64..4, r * c)))
    }

    proptest! {
        #[test]
        fn wedge_power_is_functorial(
            (k, n, fe) in small_map(),
            extra in 1usize..5,
            ge in prop::collection::vec(-3i64..4, 25),
            r in 1usize..4,
        ) {
            // g: extra -> n, f: n -> k
            let f = flat_map(k, n, &fe);
            let g = flat_map(n, extra, &ge[..n * extra]);
            prop_assume!(r <= extra);
            let fg = f.compose(&g).unwrap();
            let lhs = wedge_power_map(&fg, r).unwrap();
            let rhs = if r <= n {
                wedge_power_map(&f, r).unwrap().compose(&wedge_power_map(&g, r).unwrap()).unwrap().matrix
            } else {
                Matrix::zeros(lhs.matrix.rows(), lhs.matrix.cols())
            };
            prop_assert_eq!(lhs.matrix, rhs);
        }
    }
}
