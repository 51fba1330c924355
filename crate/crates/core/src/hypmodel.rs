//! Hyperelliptic model of the bundle `E` and its exterior powers.
//!
//! On a hyperelliptic curve with `g²₁` line bundle `L` and `H = H⁰(L)`,
//! `E ≅ S^{g-2}H* ⊗ ∧²H* ⊗ L`, so every section space below is a tensor
//! product of sl2 monomial spaces. This module builds, with exact
//! coefficients:
//!
//! * `φ_1 : S^{g-1}H* → S^{g-2}H* ⊗ H` and its wedge powers `φ_r`, whose
//!   image `W^r` has dimension `C(g, r)`;
//! * the Petri map `p = (Id ⊗ mult) ∘ (φ_r ⊗ Id)` on `W^r ⊗ S^{g-1-r}H` and
//!   its closed-form inverse `q`;
//! * the extra section `ŵ ∉ W^r`, the kernel element `z` of the enlarged
//!   Petri map, its contractions, and the comparison of the images of both
//!   Petri kernels under the connecting map.
//!
//! Monomials outside a space's degree range vanish (`y^{-1} = 0`, and
//! `y^{g-1} = 0` inside `S^{g-2}H*`); see [`clamp_exp`].

use num_traits::{One, Zero};
use serde_json::json;

use crate::curvering::{connecting_map, HypCurve};
use crate::error::{Error, Result};
use crate::exactla::{self, exact_rank, kernel_basis, Matrix, ModularConfig, RankMode, Scalar};
use crate::report::Report;
use crate::sl2poly::{
    binomial, clamp_exp, contract_pair, sym_mult, Factor, LinearMap, SectionElement, SymBasis, TensorSpace,
    WedgeBasis,
};

/// Genus `g ≥ 3` and exterior degree `1 ≤ r ≤ g - 1 - r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelParams {
    pub g: usize,
    pub r: usize,
}

impl ModelParams {
    pub fn new(g: usize, r: usize) -> Result<Self> {
        if g < 3 {
            return Err(Error::param(format!("genus {g} < 3")));
        }
        if r < 1 {
            return Err(Error::param("exterior degree r must be at least 1"));
        }
        if 2 * r > g - 1 {
            return Err(Error::param(format!("r = {r} violates r <= g - 1 - r for g = {g}")));
        }
        Ok(ModelParams { g, r })
    }

    /// All valid `r` for genus `g`.
    pub fn all_for_genus(g: usize) -> Vec<ModelParams> {
        if g < 3 {
            return Vec::new();
        }
        (1..=(g - 1) / 2).map(|r| ModelParams { g, r }).collect()
    }

    /// `C(g, r)(g - r) = C(g - 1, r) g`: the Petri matrix is square.
    pub fn binomial_balance(&self) -> bool {
        let (g, r) = (self.g, self.r);
        binomial(g, r) * (g - r) == binomial(g - 1, r) * g
    }

    /// Side length of the Petri matrix.
    pub fn petri_side(&self) -> usize {
        binomial(self.g, self.r) * (self.g - self.r)
    }

    /// `dim Ker(S^r H ⊗ S^{g-1-r} H → S^{g-1} H) = r (g - 1 - r)`.
    pub fn product_kernel_dim(&self) -> usize {
        self.r * (self.g - 1 - self.r)
    }

    fn report(&self, task: &str) -> Report {
        Report::new(task).param("g", self.g).param("r", self.r)
    }

    fn ranked_report(&self, task: &str, cfg: &ModularConfig) -> Report {
        let rep = self.report(task);
        if cfg.mode == RankMode::Exact {
            return rep;
        }
        rep.param("mod", cfg.primes.clone()).param("confirm_exact", cfg.mode == RankMode::ModularWithExactConfirm)
    }
}

/// `∧^r S^{g-1}H*`.
pub fn source_wedge(p: &ModelParams) -> WedgeBasis {
    WedgeBasis::with_var(p.r, p.g, 'y')
}

/// `∧^r S^{g-2}H*` (the `∧²H*` twist trivialized).
pub fn bundle_wedge(p: &ModelParams) -> WedgeBasis {
    WedgeBasis::with_var(p.r, p.g - 1, 'y')
}

/// `H⁰(∧^r E) = ∧^r S^{g-2}H* ⊗ S^r H`.
pub fn bundle_sections(p: &ModelParams) -> TensorSpace {
    TensorSpace::new(vec![Factor::Wedge(bundle_wedge(p)), Factor::Sym(SymBasis::new(p.r))])
}

/// `∧^r S^{g-1}H* ⊗ S^{g-1-r}H`.
pub fn petri_domain(p: &ModelParams) -> TensorSpace {
    TensorSpace::new(vec![Factor::Wedge(source_wedge(p)), Factor::Sym(SymBasis::new(p.g - 1 - p.r))])
}

/// `∧^r S^{g-2}H* ⊗ S^{g-1}H`.
pub fn petri_codomain(p: &ModelParams) -> TensorSpace {
    TensorSpace::new(vec![Factor::Wedge(bundle_wedge(p)), Factor::Sym(SymBasis::new(p.g - 1))])
}

/// `Ŵ ⊗ S^{g-1-r}H`, realized inside `∧^r S^{g-2}H* ⊗ S^r H ⊗ S^{g-1-r}H`.
pub fn enlarged_petri_domain(p: &ModelParams) -> TensorSpace {
    TensorSpace::new(vec![
        Factor::Wedge(bundle_wedge(p)),
        Factor::Sym(SymBasis::new(p.r)),
        Factor::Sym(SymBasis::new(p.g - 1 - p.r)),
    ])
}

/// `φ_1(y^k) = y^k ⊗ x - y^{k-1} ⊗ 1` on `S^{g-1}H* → S^{g-2}H* ⊗ H`.
pub fn phi1(g: usize) -> Result<LinearMap> {
    if g < 3 {
        return Err(Error::param(format!("genus {g} < 3")));
    }
    let dom = TensorSpace::new(vec![Factor::Sym(SymBasis::dual(g - 1))]);
    let cod = TensorSpace::new(vec![Factor::Sym(SymBasis::dual(g - 2)), Factor::Sym(SymBasis::new(1))]);
    Ok(LinearMap::from_images(dom, cod, |m| {
        let k = m[0] as i64;
        let mut out = Vec::new();
        if let Some(e) = clamp_exp(k, g - 2) {
            out.push((vec![e, 1], Scalar::one()));
        }
        if let Some(e) = clamp_exp(k - 1, g - 2) {
            out.push((vec![e, 0], -Scalar::one()));
        }
        out
    }))
}

/// Terms of `φ_r(y^{k_1} ∧ .. ∧ y^{k_r})` as `(wedge index, x exponent, coeff)`:
/// the signed sum over `ε ∈ {0,1}^r` of
/// `(-1)^{|ε|} y^{k_1-ε_1} ∧ .. ∧ y^{k_r-ε_r} ⊗ x^{r-|ε|}`.
fn phir_terms(p: &ModelParams, target: &WedgeBasis, k: &[usize]) -> Vec<(usize, usize, Scalar)> {
    let r = p.r;
    let mut out = Vec::new();
    for mask in 0u32..(1 << r) {
        let eps = mask.count_ones() as usize;
        let exps: Option<Vec<usize>> =
            (0..r).map(|i| clamp_exp(k[i] as i64 - ((mask >> i) & 1) as i64, p.g - 2)).collect();
        let Some(exps) = exps else { continue };
        let Some((sign, idx)) = target.decomposable(&exps) else { continue };
        let sign = if eps.is_multiple_of(2) { sign } else { -sign };
        out.push((idx, r - eps, Scalar::from_integer(sign.into())));
    }
    out
}

/// `φ_r : ∧^r S^{g-1}H* → ∧^r S^{g-2}H* ⊗ S^r H`.
pub fn phir(p: &ModelParams) -> LinearMap {
    let src = source_wedge(p);
    let tgt = bundle_wedge(p);
    LinearMap::from_images(TensorSpace::new(vec![Factor::Wedge(src.clone())]), bundle_sections(p), |m| {
        phir_terms(p, &tgt, src.tuple(m[0])).into_iter().map(|(j, e, c)| (vec![j, e], c)).collect()
    })
}

/// The Petri map `p(y^K ⊗ x^a) = Σ_ε (-1)^{|ε|} y^{K-ε} ⊗ x^{a+r-|ε|}`.
pub fn p_map(p: &ModelParams) -> LinearMap {
    let src = source_wedge(p);
    let tgt = bundle_wedge(p);
    LinearMap::from_images(petri_domain(p), petri_codomain(p), |m| {
        phir_terms(p, &tgt, src.tuple(m[0])).into_iter().map(|(j, e, c)| (vec![j, e + m[1]], c)).collect()
    })
}

/// Closed-form inverse of [`p_map`].
///
/// For `y^{j_1} ∧ .. ∧ y^{j_r} ⊗ x^b` let `l` be the slot with
/// `j_l + 1 ≤ b ≤ j_{l+1}` (with `j_0 = -1`, `j_{r+1} = g - 1`). The image is
/// `(-1)^{r-l}` times the sum over `0 ≤ t_i ≤ j_i - j_{i-1} - 1` (`i ≤ l`) and
/// `1 ≤ s_i ≤ j_{i+1} - j_i` (`i > l`) of
/// `y^{j_1-t_1} ∧ .. ∧ y^{j_l-t_l} ∧ y^{j_{l+1}+s_{l+1}} ∧ .. ∧ y^{j_r+s_r}
///  ⊗ x^{b - r - Σt + Σs}`.
pub fn q_map(p: &ModelParams) -> Result<LinearMap> {
    let (g, r) = (p.g, p.r);
    let dom = petri_codomain(p);
    let cod = petri_domain(p);
    let tgt = bundle_wedge(p);
    let src = source_wedge(p);
    let mut columns = Vec::with_capacity(dom.dim());
    for flat in 0..dom.dim() {
        let m = dom.multi(flat);
        let b = m[1] as i64;
        // j[0] = -1, j[1..=r] the tuple, j[r+1] = g - 1
        let mut j: Vec<i64> = vec![-1];
        j.extend(tgt.tuple(m[0]).iter().map(|&v| v as i64));
        j.push(g as i64 - 1);
        let l = (0..=r)
            .find(|&l| j[l] < b && b <= j[l + 1])
            .ok_or_else(|| Error::Internal(format!("no slot for b = {b} in {j:?}")))?;
        let sign = if (r - l) % 2 == 0 { Scalar::one() } else { -Scalar::one() };
        // ranges for each of the r shifted indices
        let ranges: Vec<(i64, i64)> = (1..=r)
            .map(|i| if i <= l { (-(j[i] - j[i - 1] - 1), 0) } else { (1, j[i + 1] - j[i]) })
            .collect();
        let mut col = Vec::new();
        let mut shift: Vec<i64> = ranges.iter().map(|&(lo, _)| lo).collect();
        'odometer: loop {
            let tuple: Vec<i64> = (0..r).map(|i| j[i + 1] + shift[i]).collect();
            let e = b - r as i64 + shift.iter().sum::<i64>();
            let ok_tuple = tuple.windows(2).all(|w| w[0] < w[1])
                && tuple.first().is_some_and(|&v| v >= 0)
                && tuple.last().is_some_and(|&v| v < g as i64);
            let Some(e) = clamp_exp(e, g - 1 - r).filter(|_| ok_tuple) else {
                return Err(Error::Internal(format!(
                    "q formula left its range at j = {j:?}, b = {b}: tuple {tuple:?}, exponent {e}"
                )));
            };
            let tuple: Vec<usize> = tuple.into_iter().map(|v| v as usize).collect();
            col.push((cod.flat(&[src.index(&tuple), e]), sign.clone()));
            for i in 0..r {
                if shift[i] < ranges[i].1 {
                    shift[i] += 1;
                    continue 'odometer;
                }
                shift[i] = ranges[i].0;
            }
            break;
        }
        columns.push(col);
    }
    Ok(LinearMap::new(dom, cod.clone(), Matrix::from_columns(cod.dim(), columns)))
}

/// Checks that every image of `φ_r` has a distinct leading term (highest
/// joint degree in `x` and `y`) and that the columns can be ordered so the
/// matrix restricted to those rows is triangular. This certifies
/// injectivity without a rank computation.
pub fn leading_term_certificate(p: &ModelParams) -> bool {
    let map = phir(p);
    let tgt = bundle_wedge(p);
    let n = map.matrix.cols();
    let cols: Vec<Vec<(usize, Scalar)>> = (0..n).map(|j| map.matrix.column_entries(j)).collect();
    let degree = |row: usize| {
        let m = map.codomain.multi(row);
        tgt.tuple(m[0]).iter().sum::<usize>() + m[1]
    };
    let mut lead = Vec::with_capacity(n);
    for col in &cols {
        let Some(top) = col.iter().map(|(i, _)| degree(*i)).max() else { return false };
        let tops: Vec<usize> = col.iter().filter(|(i, _)| degree(*i) == top).map(|(i, _)| *i).collect();
        if tops.len() != 1 {
            return false;
        }
        lead.push(tops[0]);
    }
    let mut owner = std::collections::HashMap::new();
    for (c, &row) in lead.iter().enumerate() {
        if owner.insert(row, c).is_some() {
            return false;
        }
    }
    // Edge c -> c' when column c meets the leading row of column c'.
    // Triangular after reordering iff this graph is acyclic.
    let mut indegree = vec![0usize; n];
    let mut edges = vec![Vec::new(); n];
    for (c, col) in cols.iter().enumerate() {
        for (row, _) in col {
            if let Some(&o) = owner.get(row) {
                if o != c {
                    edges[c].push(o);
                    indegree[o] += 1;
                }
            }
        }
    }
    let mut stack: Vec<usize> = (0..n).filter(|&c| indegree[c] == 0).collect();
    let mut seen = 0;
    while let Some(c) = stack.pop() {
        seen += 1;
        for &o in &edges[c] {
            indegree[o] -= 1;
            if indegree[o] == 0 {
                stack.push(o);
            }
        }
    }
    seen == n
}

/// Rank of `φ_r` against `C(g, r)`, plus the leading-term certificate.
pub fn check_phir(p: &ModelParams, cfg: &ModularConfig) -> Result<Report> {
    let mut rep = p.ranked_report("phir", cfg);
    let m = phir(p);
    let expected = binomial(p.g, p.r);
    let rank = exactla::rank(&m.matrix, cfg)?.rank;
    rep.set_dim("rank", rank);
    rep.set_dim("expected", expected);
    rep.check(rank == expected, || json!({ "rank": rank, "expected": expected }));
    let cert = leading_term_certificate(p);
    rep.set_dim("leading_term_certificate", cert as i64);
    rep.check(cert, || json!({ "leading_term_certificate": false }));
    Ok(rep)
}

/// Checks `p ∘ q = Id`, `q ∘ p = Id` and full rank of `p`, hence
/// `Ker p = 0`.
pub fn verify_pq(p: &ModelParams, cfg: &ModularConfig) -> Result<Report> {
    let mut rep = p.ranked_report("verify_pq", cfg);
    rep.check(p.binomial_balance(), || json!({ "binomial_balance": false }));
    let pm = p_map(p);
    let qm = q_map(p)?;
    let side = p.petri_side();
    rep.set_dim("side", side);
    rep.check(pm.matrix.rows() == side && pm.matrix.cols() == side, || {
        json!({ "shape": [pm.matrix.rows(), pm.matrix.cols()] })
    });
    let pq = pm.matrix.mul(&qm.matrix)?;
    if let Some(j) = pq.first_identity_defect() {
        let label = pm.codomain.label(&pm.codomain.multi(j));
        rep.fail(json!({ "identity": "p∘q", "basis_index": j, "basis": label }));
    }
    let qp = qm.matrix.mul(&pm.matrix)?;
    if let Some(j) = qp.first_identity_defect() {
        let label = pm.domain.label(&pm.domain.multi(j));
        rep.fail(json!({ "identity": "q∘p", "basis_index": j, "basis": label }));
    }
    let outcome = exactla::rank(&pm.matrix, cfg)?;
    rep.set_dim("rank_p", outcome.rank);
    for (prime, r) in &outcome.modular {
        rep.set_dim(&format!("rank_p_mod_{prime}"), *r);
    }
    rep.check(outcome.rank == side, || json!({ "rank_p": outcome.rank, "expected": side }));
    rep.set_dim("ker_p", side.saturating_sub(outcome.rank));
    Ok(rep)
}

/// `ŵ = Σ_{j<r} (-1)^j (1 ∧ y ∧ .. ∧ ŷ^j ∧ .. ∧ y^r) ⊗ x^{r-j}`.
pub fn what_element(p: &ModelParams) -> SectionElement {
    let tgt = bundle_wedge(p);
    let mut w = SectionElement::zero(bundle_sections(p));
    for j in 0..p.r {
        let tuple: Vec<usize> = (0..=p.r).filter(|&k| k != j).collect();
        let c = if j % 2 == 0 { Scalar::one() } else { -Scalar::one() };
        w.add_term(vec![tgt.index(&tuple), p.r - j], c);
    }
    w
}

/// Columns spanning `W^r ⊕ k·ŵ` inside `H⁰(∧^r E)`.
pub fn enlarged_space(p: &ModelParams) -> Matrix {
    phir(p).matrix.hstack(&Matrix::column(&what_element(p).to_dense()))
}

/// Checks `ŵ ∉ W^r`: the rank jumps from `C(g, r)` to `C(g, r) + 1`.
pub fn check_what(p: &ModelParams) -> Report {
    let mut rep = p.report("what_element");
    let base = exact_rank(&phir(p).matrix);
    let ext = exact_rank(&enlarged_space(p));
    rep.set_dim("rank_w", base);
    rep.set_dim("rank_w_hat", ext);
    let expected = binomial(p.g, p.r);
    rep.check(base == expected && ext == expected + 1, || {
        json!({ "rank_w": base, "rank_w_hat": ext, "what": what_element(p).to_json() })
    });
    rep
}

/// `z = ŵ ⊗ 1 + Σ_{i=r+1}^{g-1} φ_r(y ∧ y² ∧ .. ∧ y^{r-1} ∧ y^i) ⊗ x^{i-r}`.
pub fn z_element(p: &ModelParams) -> SectionElement {
    let (g, r) = (p.g, p.r);
    let tgt = bundle_wedge(p);
    let mut z = SectionElement::zero(enlarged_petri_domain(p));
    for (m, c) in what_element(p).terms() {
        z.add_term(vec![m[0], m[1], 0], c.clone());
    }
    for i in r + 1..g {
        let mut k: Vec<usize> = (1..r).collect();
        k.push(i);
        for (j, e, c) in phir_terms(p, &tgt, &k) {
            z.add_term(vec![j, e, i - r], c);
        }
    }
    z
}

/// `p_Ŵ = Id ⊗ mult : ∧^r S^{g-2}H* ⊗ S^r H ⊗ S^{g-1-r}H → ∧^r S^{g-2}H* ⊗ S^{g-1}H`.
pub fn p_hat(p: &ModelParams) -> LinearMap {
    sym_mult(p.r, p.g - 1 - p.r).identity_tensor(Factor::Wedge(bundle_wedge(p)))
}

/// Checks `z ≠ 0`, `z ∈ Ŵ ⊗ S^{g-1-r}H` and `p_Ŵ(z) = 0`.
pub fn check_z(p: &ModelParams) -> Result<Report> {
    let mut rep = p.report("z_element");
    let z = z_element(p);
    rep.set_dim("terms", z.len());
    rep.check(!z.is_zero(), || json!({ "z": "zero" }));
    // every x^b slice of z lies in Ŵ
    let span = enlarged_space(p);
    let sections = bundle_sections(p);
    let k = p.g - 1 - p.r;
    let slices: Vec<Vec<(usize, Scalar)>> = (0..=k)
        .map(|b| z.terms().filter(|(m, _)| m[2] == b).map(|(m, c)| (sections.flat(&m[..2]), c.clone())).collect())
        .collect();
    let slices = Matrix::from_columns(sections.dim(), slices);
    let inside = exactla::span_contains(&span, &slices);
    rep.check(inside, || json!({ "z_in_w_hat": false }));
    let image = p_hat(p).apply(&z)?;
    rep.set_dim("image_terms", image.len());
    rep.check(image.is_zero(), || json!({ "p_hat_z": image.to_json() }));
    Ok(rep)
}

/// Contractions of `z` against the dual wedge basis: for each basis
/// element `e_J` of `∧^r S^{g-2}H*`, the element `⟨e_J^*, z⟩` of
/// `S^r H ⊗ S^{g-1-r} H`.
pub fn contract_z(p: &ModelParams) -> Vec<(usize, SectionElement)> {
    let tgt = bundle_wedge(p);
    let pairing = contract_pair(p.r, p.g - 1);
    let z = z_element(p);
    let prod = product_space(p);
    (0..tgt.dim())
        .map(|jdx| {
            let mut out = SectionElement::zero(prod.clone());
            for (m, c) in z.terms() {
                let w = pairing.pair_monomials(tgt.tuple(jdx), tgt.tuple(m[0]));
                if !w.is_zero() {
                    out.add_term(vec![m[1], m[2]], w * c);
                }
            }
            (jdx, out)
        })
        .collect()
}

/// `S^r H ⊗ S^{g-1-r} H`.
pub fn product_space(p: &ModelParams) -> TensorSpace {
    sym_mult(p.r, p.g - 1 - p.r).domain
}

fn columns_of(elems: &[SectionElement], dim: usize) -> Matrix {
    Matrix::from_columns(dim, elems.iter().map(|e| e.to_sparse().into_iter().collect()).collect())
}

fn kernel_matrix(p: &ModelParams) -> Matrix {
    let mult = sym_mult(p.r, p.g - 1 - p.r);
    let kernel = kernel_basis(&mult.matrix);
    let cols = kernel
        .into_iter()
        .map(|v| v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect())
        .collect();
    Matrix::from_columns(mult.domain.dim(), cols)
}

/// Checks that the contractions of `z` lie in and span the product kernel.
pub fn check_contract_z(p: &ModelParams) -> Result<Report> {
    let mut rep = p.report("contract_z");
    let mult = sym_mult(p.r, p.g - 1 - p.r);
    let outputs: Vec<SectionElement> = contract_z(p).into_iter().map(|(_, e)| e).filter(|e| !e.is_zero()).collect();
    rep.set_dim("nonzero_outputs", outputs.len());
    for (i, e) in outputs.iter().enumerate() {
        let img = mult.apply(e)?;
        rep.check(img.is_zero(), || json!({ "not_in_kernel": i, "element": e.to_json() }));
    }
    let span = columns_of(&outputs, mult.domain.dim());
    let kernel = kernel_matrix(p);
    let rank = exact_rank(&span);
    rep.set_dim("span_rank", rank);
    rep.set_dim("kernel_dim", kernel.cols());
    rep.set_dim("expected", p.product_kernel_dim());
    rep.check(kernel.cols() == p.product_kernel_dim(), || json!({ "kernel_dim": kernel.cols() }));
    rep.check(exactla::same_span(&span, &kernel), || json!({ "span_rank": rank, "kernel_dim": kernel.cols() }));
    Ok(rep)
}

/// `x^i ⊗ x^j - x^{i+1} ⊗ x^{j-1}` for `i < r`, `1 ≤ j ≤ g - 1 - r`.
pub fn ker_product_generators(p: &ModelParams) -> Vec<SectionElement> {
    let prod = product_space(p);
    let mut out = Vec::new();
    for i in 0..p.r {
        for j in 1..=p.g - 1 - p.r {
            let mut e = SectionElement::zero(prod.clone());
            e.add_term(vec![i, j], Scalar::one());
            e.add_term(vec![i + 1, j - 1], -Scalar::one());
            out.push(e);
        }
    }
    out
}

/// Checks that the generators lie in and span the product kernel, of
/// dimension `(r + 1)(g - r) - g`.
pub fn check_ker_generators(p: &ModelParams) -> Result<Report> {
    let mut rep = p.report("ker_product_generators");
    let mult = sym_mult(p.r, p.g - 1 - p.r);
    let gens = ker_product_generators(p);
    let kernel = kernel_matrix(p);
    let closed = (p.r + 1) * (p.g - p.r) - p.g;
    rep.set_dim("generators", gens.len());
    rep.set_dim("kernel_dim", kernel.cols());
    rep.set_dim("closed_form", closed);
    rep.check(gens.len() == closed && kernel.cols() == closed, || {
        json!({ "generators": gens.len(), "kernel_dim": kernel.cols(), "closed_form": closed })
    });
    for (i, e) in gens.iter().enumerate() {
        let img = mult.apply(e)?;
        rep.check(img.is_zero(), || json!({ "not_in_kernel": i }));
    }
    let span = columns_of(&gens, mult.domain.dim());
    rep.check(exactla::same_span(&span, &kernel), || json!({ "span_rank": exact_rank(&span) }));
    Ok(rep)
}

/// Compares the connecting-map images of the two Petri kernels in
/// `H⁰(2K)`: `A` from the contractions of `z` (scaled by `1 / C(g-2, r)`)
/// and `B` from the whole product kernel. Requires `A = B ≠ 0`.
pub fn connecting_span_check(p: &ModelParams, curve: &HypCurve) -> Result<Report> {
    if curve.genus() != p.g {
        return Err(Error::param(format!("curve has genus {}, expected {}", curve.genus(), p.g)));
    }
    let mut rep = p.report("connecting_span");
    rep.params.insert("f".into(), json!(curve.f_string()));
    let c_prime = Scalar::new(1.into(), binomial(p.g - 2, p.r).into());
    let dim2 = curve.h0_dim(2);
    let image = |elems: &[SectionElement], scale: &Scalar| -> Result<Matrix> {
        let cols = elems
            .iter()
            .map(|e| {
                let d = connecting_map(e)?;
                let v = curve.coords(&d)?;
                Ok(v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c * scale)).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_columns(dim2, cols))
    };
    let outputs: Vec<SectionElement> = contract_z(p).into_iter().map(|(_, e)| e).filter(|e| !e.is_zero()).collect();
    let a = image(&outputs, &c_prime)?;
    let prod = product_space(p);
    let kernel: Vec<SectionElement> = kernel_basis(&sym_mult(p.r, p.g - 1 - p.r).matrix)
        .iter()
        .map(|v| SectionElement::from_dense(prod.clone(), v))
        .collect();
    let b = image(&kernel, &Scalar::one())?;
    let (ra, rb) = (exact_rank(&a), exact_rank(&b));
    rep.set_dim("dim_a", ra);
    rep.set_dim("dim_b", rb);
    rep.check(rb > 0, || json!({ "dim_b": 0 }));
    rep.check(exactla::same_span(&a, &b), || json!({ "dim_a": ra, "dim_b": rb, "dim_sum": exact_rank(&a.hstack(&b)) }));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> Scalar {
        Scalar::from_integer(v.into())
    }

    fn params(g: usize, r: usize) -> ModelParams {
        ModelParams::new(g, r).unwrap()
    }

    /// Image of one basis element, as `(label, coeff)` pairs.
    fn image_labels(map: &LinearMap, multi: &[usize]) -> Vec<(String, Scalar)> {
        let col = map.domain.flat(multi);
        let mut v: Vec<(String, Scalar)> = map
            .matrix
            .column_entries(col)
            .into_iter()
            .map(|(i, c)| (map.codomain.label(&map.codomain.multi(i)), c))
            .collect();
        v.sort();
        v
    }

    fn sorted(mut v: Vec<(&str, i64)>) -> Vec<(String, Scalar)> {
        v.sort();
        let mut out: Vec<(String, Scalar)> = v.into_iter().map(|(s, c)| (s.to_string(), int(c))).collect();
        out.sort();
        out
    }

    #[test]
    fn param_validation() {
        assert!(ModelParams::new(4, 2).is_err());
        assert!(ModelParams::new(5, 0).is_err());
        assert!(ModelParams::new(2, 1).is_err());
        assert_eq!(ModelParams::all_for_genus(6).len(), 2);
    }

    #[test]
    fn phi1_examples_g3() {
        let f = phi1(3).unwrap();
        assert_eq!(image_labels(&f, &[0]), sorted(vec![("1⊗x", 1)]));
        assert_eq!(image_labels(&f, &[1]), sorted(vec![("y⊗x", 1), ("1⊗1", -1)]));
        assert_eq!(image_labels(&f, &[2]), sorted(vec![("y⊗1", -1)]));
        assert_eq!(exact_rank(&f.matrix), 3);
    }

    #[test]
    fn phir_examples_g5_r2() {
        let p = params(5, 2);
        let m = phir(&p);
        let src = source_wedge(&p);
        assert_eq!(image_labels(&m, &[src.index(&[0, 1])]), sorted(vec![("1∧y⊗x^2", 1)]));
        assert_eq!(
            image_labels(&m, &[src.index(&[1, 3])]),
            sorted(vec![("y∧y^3⊗x^2", 1), ("y∧y^2⊗x", -1), ("1∧y^3⊗x", -1), ("1∧y^2⊗1", 1)])
        );
        assert_eq!(exact_rank(&phir(&params(6, 2)).matrix), 15);
    }

    #[test]
    fn phir_is_split_wedge_of_phi1() {
        use crate::sl2poly::{wedge_power_map, wedge_split_map};
        for (g, r) in [(3, 1), (5, 2), (6, 2), (7, 3)] {
            let p = params(g, r);
            let f = phi1(g).unwrap();
            let wedge = wedge_power_map(&f, r).unwrap();
            let split = wedge_split_map(g - 1, r);
            let composite = split.compose(&wedge).unwrap();
            assert_eq!(composite.matrix, phir(&p).matrix, "g={g} r={r}");
        }
    }

    #[test]
    fn p_map_examples_g3() {
        let p = params(3, 1);
        let m = p_map(&p);
        assert_eq!(image_labels(&m, &[0, 0]), sorted(vec![("1⊗x", 1)]));
        assert_eq!(image_labels(&m, &[1, 1]), sorted(vec![("y⊗x^2", 1), ("1⊗x", -1)]));
    }

    #[test]
    fn p_map_factors_through_phir() {
        for (g, r) in [(3, 1), (5, 2), (7, 3)] {
            let p = params(g, r);
            let left = phir(&p).tensor_identity(Factor::Sym(SymBasis::new(g - 1 - r)));
            let right = sym_mult(r, g - 1 - r).identity_tensor(Factor::Wedge(bundle_wedge(&p)));
            let composite = right.compose(&left).unwrap();
            assert_eq!(composite.matrix, p_map(&p).matrix);
        }
    }

    #[test]
    fn p_map_g5_r2_full_rank() {
        let m = p_map(&params(5, 2)).matrix;
        assert_eq!((m.rows(), m.cols()), (30, 30));
        assert_eq!(exact_rank(&m), 30);
    }

    #[test]
    fn q_map_examples_g3() {
        let p = params(3, 1);
        let q = q_map(&p).unwrap();
        assert_eq!(image_labels(&q, &[0, 0]), sorted(vec![("y⊗1", -1), ("y^2⊗x", -1)]));
        assert_eq!(image_labels(&q, &[1, 2]), sorted(vec![("y⊗x", 1), ("1⊗1", 1)]));
        // p(q(1⊗1)) = 1⊗1
        let pm = p_map(&p);
        let mut e = SectionElement::zero(pm.codomain.clone());
        e.add_term(vec![0, 0], int(1));
        assert_eq!(pm.apply(&q.apply(&e).unwrap()).unwrap(), e);
    }

    #[test]
    fn solve_recovers_q_column() {
        let p = params(4, 1);
        let pm = p_map(&p);
        let qm = q_map(&p).unwrap();
        for j in [0, 5, 11] {
            let mut b = vec![int(0); pm.matrix.rows()];
            b[j] = int(1);
            let x = exactla::solve(&pm.matrix, &b).unwrap().unwrap();
            let mut qcol = vec![int(0); qm.matrix.rows()];
            for (i, c) in qm.matrix.column_entries(j) {
                qcol[i] = c;
            }
            assert_eq!(x, qcol);
        }
    }

    #[test]
    fn verify_pq_small_cases() {
        let rep = verify_pq(&params(3, 1), &ModularConfig::exact()).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.dims["rank_p"], 6);
        let rep = verify_pq(&params(7, 3), &ModularConfig::exact()).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.dims["rank_p"], 140);
    }

    #[test]
    fn corrupted_q_fails_with_witness() {
        let p = params(4, 1);
        let pm = p_map(&p);
        let mut qm = q_map(&p).unwrap().matrix;
        qm.set(0, 3, qm.get(0, 3) + int(1));
        let defect = pm.matrix.mul(&qm).unwrap().first_identity_defect();
        assert_eq!(defect, Some(3));
    }

    #[test]
    fn leading_terms_certify_injectivity() {
        for g in 3..10 {
            for p in ModelParams::all_for_genus(g) {
                assert!(leading_term_certificate(&p), "{p:?}");
            }
        }
    }

    #[test]
    fn what_examples() {
        let p = params(4, 1);
        let w = what_element(&p);
        assert_eq!(w.to_string(), "(1)·y⊗x");
        let rep = check_what(&p);
        assert!(rep.passed());
        assert_eq!((rep.dims["rank_w"], rep.dims["rank_w_hat"]), (4, 5));
        let w = what_element(&params(5, 2));
        let mut labels: Vec<String> = w.terms().map(|(m, c)| format!("{c}:{}", w.space.label(m))).collect();
        labels.sort();
        assert_eq!(labels, vec!["-1:1∧y^2⊗x", "1:y∧y^2⊗x^2"]);
    }

    #[test]
    fn z_example_g4() {
        let p = params(4, 1);
        let z = z_element(&p);
        let mut labels: Vec<String> = z.terms().map(|(m, c)| format!("{c}:{}", z.space.label(m))).collect();
        labels.sort();
        // y⊗x⊗1 + (y²⊗x - y⊗1)⊗x + (-y²⊗1)⊗x²
        assert_eq!(labels, vec!["-1:y^2⊗1⊗x^2", "-1:y⊗1⊗x", "1:y^2⊗x⊗x", "1:y⊗x⊗1"]);
        assert!(p_hat(&p).apply(&z).unwrap().is_zero());
        assert!(check_z(&p).unwrap().passed());
        assert!(check_z(&params(5, 2)).unwrap().passed());
    }

    #[test]
    fn contract_z_example_g4() {
        let p = params(4, 1);
        let out = contract_z(&p);
        let label = |e: &SectionElement| {
            let mut v: Vec<String> = e.terms().map(|(m, c)| format!("{c}:{}", e.space.label(m))).collect();
            v.sort();
            v
        };
        assert!(out[0].1.is_zero());
        assert_eq!(label(&out[1].1), vec!["-1:1⊗x", "1:x⊗1"]);
        assert_eq!(label(&out[2].1), vec!["-1:1⊗x^2", "1:x⊗x"]);
        let rep = check_contract_z(&p).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.dims["kernel_dim"], 2);
    }

    #[test]
    fn ker_generators() {
        let rep = check_ker_generators(&params(5, 2)).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.dims["generators"], 4);
        let gens = ker_product_generators(&params(3, 1));
        assert_eq!(gens.len(), 1);
        assert_eq!(gens[0].to_string(), "(1)·1⊗x + (-1)·x⊗1");
        assert!(ModelParams::new(5, 0).is_err());
    }

    #[test]
    fn connecting_span_examples() {
        let curve = HypCurve::new(4, crate::poly::Poly::from_ints(&[1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1])).unwrap();
        let rep = connecting_span_check(&params(4, 1), &curve).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert_eq!((rep.dims["dim_a"], rep.dims["dim_b"]), (2, 2));
        let curve = HypCurve::new(5, crate::poly::Poly::from_ints(&[2, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1])).unwrap();
        assert!(connecting_span_check(&params(5, 2), &curve).unwrap().passed());
        assert!(connecting_span_check(&params(4, 1), &curve).is_err());
    }
}
