//! Hyperelliptic curves `y² = f(x)` with `deg f = 2g + 2`.
//!
//! A section of `qK` is written `(a + y b)(dx/y)^q` with
//! `deg a ≤ q(g-1)` and `deg b ≤ q(g-1) - g - 1`; coordinates list the
//! coefficients of `a` then those of `b`, lowest degree first.

use num_traits::{One, Zero};
use rand::Rng;
use serde_json::json;

use crate::error::{Error, Result};
use crate::exactla::{Matrix, Scalar};
use crate::koszul::GradedRingData;
use crate::poly::Poly;
use crate::report::Report;
use crate::sl2poly::{sym_mult, Factor, SectionElement, SymBasis, TensorSpace};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypCurve {
    g: usize,
    f: Poly,
}

/// `(a + y b)(dx/y)^q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PluricanonicalElement {
    pub q: usize,
    pub a: Poly,
    pub b: Poly,
}

impl PluricanonicalElement {
    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

fn fits(p: &Poly, bound: Option<usize>) -> bool {
    match (p.degree(), bound) {
        (None, _) => true,
        (Some(d), Some(b)) => d <= b,
        (Some(_), None) => false,
    }
}

impl HypCurve {
    pub fn new(g: usize, f: Poly) -> Result<Self> {
        if g < 2 {
            return Err(Error::param(format!("genus {g} < 2")));
        }
        if f.degree() != Some(2 * g + 2) {
            return Err(Error::DegenerateCurve(format!("deg f = {:?}, expected {}", f.degree(), 2 * g + 2)));
        }
        if f.gcd(&f.derivative()).degree() != Some(0) {
            return Err(Error::DegenerateCurve(format!("f = {f} is not squarefree")));
        }
        Ok(HypCurve { g, f })
    }

    /// `x^{2g+2}` plus a random perturbation of degree at most `g`,
    /// redrawn until squarefree.
    pub fn random<R: Rng>(g: usize, rng: &mut R) -> Result<Self> {
        loop {
            let low = Poly::random(rng, g, 3);
            let f = &Poly::monomial(2 * g + 2) + &low;
            match HypCurve::new(g, f) {
                Ok(c) => return Ok(c),
                Err(Error::DegenerateCurve(_)) => continue,
                Err(e) => return Err(e),
            }
        }
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    /// Coefficients of `f` as accepted by `--f`.
    pub fn f_string(&self) -> String {
        self.f.coeff_list()
    }

    pub fn a_bound(&self, q: usize) -> usize {
        q * (self.g - 1)
    }

    /// `None` when no `y` part is allowed at level `q`.
    pub fn b_bound(&self, q: usize) -> Option<usize> {
        (q * (self.g - 1)).checked_sub(self.g + 1)
    }

    /// `dim H⁰(qK)`, with `H⁰(0K)` the constants.
    pub fn h0_dim(&self, q: usize) -> usize {
        self.a_bound(q) + 1 + self.b_bound(q).map_or(0, |b| b + 1)
    }

    pub fn element(&self, q: usize, a: Poly, b: Poly) -> Result<PluricanonicalElement> {
        if !fits(&a, Some(self.a_bound(q))) || !fits(&b, self.b_bound(q)) {
            return Err(Error::DegreeBound(format!("({a}) + y({b}) exceeds the bounds at level {q}")));
        }
        Ok(PluricanonicalElement { q, a, b })
    }

    /// `(a₁ + y b₁)(a₂ + y b₂) = (a₁a₂ + f b₁b₂) + y(a₁b₂ + a₂b₁)`.
    pub fn mult_sections(&self, u: &PluricanonicalElement, v: &PluricanonicalElement) -> Result<PluricanonicalElement> {
        let a = &(&u.a * &v.a) + &(&self.f * &(&u.b * &v.b));
        let b = &(&u.a * &v.b) + &(&v.a * &u.b);
        self.element(u.q + v.q, a, b)
            .map_err(|e| Error::Internal(format!("product left H0({}K): {e}", u.q + v.q)))
    }

    pub fn coords(&self, e: &PluricanonicalElement) -> Result<Vec<Scalar>> {
        let checked = self.element(e.q, e.a.clone(), e.b.clone())?;
        let mut v: Vec<Scalar> = (0..=self.a_bound(e.q)).map(|k| checked.a.coeff(k)).collect();
        if let Some(bb) = self.b_bound(e.q) {
            v.extend((0..=bb).map(|k| checked.b.coeff(k)));
        }
        Ok(v)
    }

    pub fn from_coords(&self, q: usize, v: &[Scalar]) -> Result<PluricanonicalElement> {
        if v.len() != self.h0_dim(q) {
            return Err(Error::DimensionMismatch { expected: self.h0_dim(q), got: v.len() });
        }
        let na = self.a_bound(q) + 1;
        Ok(PluricanonicalElement { q, a: Poly::new(v[..na].to_vec()), b: Poly::new(v[na..].to_vec()) })
    }

    pub fn basis(&self, q: usize) -> Vec<PluricanonicalElement> {
        let n = self.h0_dim(q);
        (0..n)
            .map(|i| {
                let mut v = vec![Scalar::zero(); n];
                v[i] = Scalar::one();
                self.from_coords(q, &v).expect("basis vector has the right length")
            })
            .collect()
    }
}

/// Splits `w ∈ S^m H ⊗ S^k H` into its two factor degrees.
fn product_degrees(w: &SectionElement) -> Result<(usize, usize)> {
    match w.space.factors.as_slice() {
        [Factor::Sym(a), Factor::Sym(b)] if !a.dual && !b.dual => Ok((a.k, b.k)),
        _ => Err(Error::param("expected an element of S^m H ⊗ S^k H")),
    }
}

/// The connecting map on the Petri kernel: for `w = Σ p_i ⊗ q_i` in
/// `Ker(S^m H ⊗ S^{g-1-m} H → S^{g-1} H)` returns `(0, Σ q_i p_i')`, the
/// quadratic differential `(Σ q_i p_i') y (dx/y)²`.
pub fn connecting_map(w: &SectionElement) -> Result<PluricanonicalElement> {
    let (m, k) = product_degrees(w)?;
    if !sym_mult(m, k).apply(w)?.is_zero() {
        return Err(Error::NotInKernel);
    }
    let g = m + k + 1;
    let mut coeffs = vec![Scalar::zero(); (m + k).max(1)];
    for (idx, c) in w.terms() {
        let (i, j) = (idx[0], idx[1]);
        if i > 0 {
            coeffs[i + j - 1] += c * Scalar::from_integer(i.into());
        }
    }
    let b = Poly::new(coeffs);
    if b.degree().is_some_and(|d| d + 3 > g) {
        return Err(Error::DegreeBound(format!("connecting map output ({b}) has degree above g - 3 = {}", g as i64 - 3)));
    }
    Ok(PluricanonicalElement { q: 2, a: Poly::zero(), b })
}

/// `p ⊗ q` as an element of `S^m H ⊗ S^k H`.
pub fn poly_tensor(m: usize, k: usize, p: &Poly, q: &Poly) -> SectionElement {
    let space = TensorSpace::new(vec![Factor::Sym(SymBasis::new(m)), Factor::Sym(SymBasis::new(k))]);
    let mut out = SectionElement::zero(space);
    for (i, a) in p.coeffs().iter().enumerate() {
        for (j, b) in q.coeffs().iter().enumerate() {
            if !a.is_zero() && !b.is_zero() {
                out.add_term(vec![i, j], a * b);
            }
        }
    }
    out
}

/// A pencil `⟨s0, s1⟩` of degree `m` together with `t ∈ H⁰(K - 2M)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PencilDatum {
    pub g: usize,
    pub m: usize,
    pub s0: Poly,
    pub s1: Poly,
    pub t: Poly,
}

impl PencilDatum {
    fn check_level(g: usize, m: usize) -> Result<()> {
        if g < 3 || m < 1 || 2 * m > g - 1 {
            return Err(Error::param(format!("level m = {m} outside 1..=(g-1)/2 for g = {g}")));
        }
        Ok(())
    }

    pub fn new(g: usize, m: usize, s0: Poly, s1: Poly, t: Poly) -> Result<Self> {
        Self::check_level(g, m)?;
        for (name, p, bound) in [("s0", &s0, m), ("s1", &s1, m), ("t", &t, g - 1 - 2 * m)] {
            if p.degree().is_some_and(|d| d > bound) {
                return Err(Error::param(format!("deg {name} > {bound}")));
            }
        }
        if s0.is_zero() || s1.is_zero() || Poly::wronskian(&s0, &s1).is_zero() {
            return Err(Error::param("s0 and s1 are linearly dependent"));
        }
        if t.is_zero() {
            return Err(Error::param("t must be nonzero"));
        }
        Ok(PencilDatum { g, m, s0, s1, t })
    }

    /// Random pencil; about a third of the draws share a linear factor.
    pub fn random<R: Rng>(g: usize, m: usize, rng: &mut R) -> Result<Self> {
        Self::check_level(g, m)?;
        loop {
            let (s0, s1) = if m >= 2 && rng.gen_ratio(1, 3) {
                let d = Poly::from_ints(&[rng.gen_range(-4..=4), 1]);
                (&d * &Poly::random(rng, m - 1, 5), &d * &Poly::random(rng, m - 1, 5))
            } else {
                (Poly::random(rng, m, 5), Poly::random(rng, m, 5))
            };
            let t = Poly::random(rng, g - 1 - 2 * m, 5);
            match PencilDatum::new(g, m, s0, s1, t) {
                Ok(pd) => return Ok(pd),
                Err(Error::Param(msg)) if msg.contains("dependent") || msg.contains("nonzero") => continue,
                Err(e) => return Err(e),
            }
        }
    }

    /// `u = s0 ⊗ t s1 - s1 ⊗ t s0`.
    pub fn kernel_element(&self) -> SectionElement {
        let k = self.g - 1 - self.m;
        let ts0 = &self.t * &self.s0;
        let ts1 = &self.t * &self.s1;
        let mut u = poly_tensor(self.m, k, &self.s0, &ts1);
        for (idx, c) in poly_tensor(self.m, k, &self.s1, &ts0).terms() {
            u.add_term(idx.clone(), -c.clone());
        }
        u
    }
}

/// Verifies the connecting-map image of `s0 ⊗ t s1 - s1 ⊗ t s0`: it is
/// nonzero, equals `-t Wr(s0, s1)`, and factors as `-t d² Wr(s0/d, s1/d)`
/// with `d = gcd(s0, s1)`.
pub fn pencil_check(curve: &HypCurve, pd: &PencilDatum) -> Result<Report> {
    if curve.genus() != pd.g {
        return Err(Error::param(format!("curve has genus {}, pencil expects {}", curve.genus(), pd.g)));
    }
    let mut rep = Report::new("pencil")
        .param("g", pd.g)
        .param("m", pd.m)
        .param("s0", pd.s0.coeff_list())
        .param("s1", pd.s1.coeff_list())
        .param("t", pd.t.coeff_list())
        .param("f", curve.f_string());
    let u = pd.kernel_element();
    let d_u = match connecting_map(&u) {
        Ok(d) => d,
        Err(e @ (Error::NotInKernel | Error::DegreeBound(_))) => {
            rep.fail(json!({ "connecting_map": e.to_string() }));
            return Ok(rep);
        }
        Err(e) => return Err(e),
    };
    curve.coords(&d_u)?;
    let b = d_u.b.clone();
    let wr = Poly::wronskian(&pd.s0, &pd.s1);
    let d = pd.s0.gcd(&pd.s1);
    let (r0, rem0) = pd.s0.div_rem(&d);
    let (r1, rem1) = pd.s1.div_rem(&d);
    let reduced = Poly::wronskian(&r0, &r1);
    let factored = -&(&pd.t * &(&(&d * &d) * &reduced));
    rep.set_dim("deg_b", b.degree().map_or(-1, |v| v as i64));
    rep.set_dim("deg_gcd", d.degree().map_or(-1, |v| v as i64));
    rep.set_dim("deg_t", pd.t.degree().map_or(-1, |v| v as i64));
    rep.set_dim("deg_reduced_wronskian", reduced.degree().map_or(-1, |v| v as i64));
    rep.check(!b.is_zero(), || json!({ "b": "0" }));
    rep.check(b == -&(&pd.t * &wr), || json!({ "b": b.to_string(), "minus_t_wronskian": (-&(&pd.t * &wr)).to_string() }));
    rep.check(rem0.is_zero() && rem1.is_zero() && b == factored, || {
        json!({ "b": b.to_string(), "gcd": d.to_string(), "factored": factored.to_string() })
    });
    rep.witnesses.push(json!({
        "b": b.to_string(),
        "gcd": d.to_string(),
        "reduced_wronskian": reduced.to_string(),
    }));
    Ok(rep)
}

/// The canonical ring `⊕_{q ≤ qmax} H⁰(qK)` as a module over
/// `V = H⁰(K)`, with `V` spanned by `x^i (dx/y)`, `i < g`.
pub fn canonical_ring(curve: &HypCurve, qmax: usize) -> Result<GradedRingData> {
    let g = curve.genus();
    if g < 3 {
        return Err(Error::param(format!("genus {g} < 3 has no canonical embedding")));
    }
    if qmax < 2 {
        return Err(Error::param("qmax must be at least 2"));
    }
    let dims: Vec<usize> = (0..=qmax).map(|q| curve.h0_dim(q)).collect();
    let vs: Vec<PluricanonicalElement> =
        (0..g).map(|i| PluricanonicalElement { q: 1, a: Poly::monomial(i), b: Poly::zero() }).collect();
    let mut mult = Vec::with_capacity(qmax);
    for q in 0..qmax {
        let basis = if q == 0 {
            vec![PluricanonicalElement { q: 0, a: Poly::one(), b: Poly::zero() }]
        } else {
            curve.basis(q)
        };
        let mut per_v = Vec::with_capacity(g);
        for v in &vs {
            let cols = basis
                .iter()
                .map(|e| {
                    let prod = curve.mult_sections(v, e)?;
                    Ok(curve.coords(&prod)?.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect())
                })
                .collect::<Result<Vec<_>>>()?;
            per_v.push(Matrix::from_columns(dims[q + 1], cols));
        }
        mult.push(per_v);
    }
    GradedRingData::new(g, dims, mult)
}
