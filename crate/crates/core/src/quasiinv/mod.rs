//! Quasi-invariants `Q_k`: polynomials `f` with
//! `e_{H,-i}(f) ≡ 0 mod alpha_H^{n_H k_{H,i}}` for every hyperplane `H` and
//! every `i`, for integral `k >= 0`. Also the ring `A_k` of multipliers,
//! Hilbert series and freeness certificates over `C[V]^W`.
//!
//! Everything is computed slice by slice, so each statement is certified
//! only up to the requested degree.

mod bold;

pub use bold::{
    bold_qk_basis, check_bold_stability, check_uk_stability, dqk_membership, dqk_membership_diffrefl,
    EquivariantSlice, QkMembership,
};

use serde::Serialize;

use num_traits::Zero;

use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::groups::{Multiplicity, Poly, ReflectionGroup};
use crate::linalg::{rank_of, Matrix};
use crate::poly::{monomials_of_degree, MPoly, Monomial};
use crate::polyalg::{echelon_polys, invariant_ring, ord_along, span_rank, GradedSubspace};
use crate::report::Report;

/// Coordinates in which `alpha_H` becomes the pivot variable: substituting
/// `x_p -> x_p - sum_{j != p} alpha_j x_j` turns `alpha_H` into `x_p`, so
/// divisibility by `alpha_H^N` reads off as vanishing of all coefficients
/// with `x_p`-exponent below `N`.
pub(crate) struct Chart {
    images: Vec<Poly>,
    pivot: usize,
}

impl Chart {
    pub(crate) fn new(g: &ReflectionGroup, h: usize) -> Self {
        let hp = &g.hyperplanes[h];
        let n = g.dim;
        let images = (0..n)
            .map(|j| {
                if j != hp.pivot {
                    return MPoly::var(n, j);
                }
                let mut img = MPoly::var(n, j);
                for (l, a) in hp.alpha.iter().enumerate() {
                    if l != hp.pivot && !a.is_zero() {
                        img = img.sub(&MPoly::var(n, l).scale(a));
                    }
                }
                img
            })
            .collect();
        Chart { images, pivot: hp.pivot }
    }

    /// Degree-`d` monomials whose pivot exponent is below `order`.
    pub(crate) fn low_monomials(&self, nvars: usize, d: u32, order: u32) -> Vec<Monomial> {
        monomials_of_degree(nvars, d).into_iter().filter(|m| m.exps()[self.pivot] < order).collect()
    }

    /// Coordinates of `f` (after the change of variables) on `low`.
    pub(crate) fn low_coords(&self, f: &Poly, low: &[Monomial]) -> Vec<CycNum> {
        f.substitute(&self.images).coords(low)
    }
}

/// `(H, i, n_H k_{H,i})` for every condition with a positive order.
pub(crate) fn conditions(g: &ReflectionGroup, k: &Multiplicity) -> Result<Vec<(usize, i64, u32)>> {
    let ints = k.as_integers()?;
    let mut out = Vec::new();
    for (h, hp) in g.hyperplanes.iter().enumerate() {
        for i in 1..hp.order {
            let order = hp.order as u32 * ints[hp.orbit][i];
            if order > 0 {
                out.push((h, i as i64, order));
            }
        }
    }
    Ok(out)
}

/// Linear conditions on `c` for `sum_a c_a polys[a]` (all homogeneous of
/// degree `d`) to lie in `Q_k`; one row per condition.
pub(crate) fn membership_rows(
    g: &ReflectionGroup,
    conds: &[(usize, i64, u32)],
    charts: &[Chart],
    polys: &[Poly],
    d: u32,
) -> Vec<Vec<CycNum>> {
    let mut rows = Vec::new();
    for &(h, i, order) in conds {
        let chart = &charts[h];
        let low = chart.low_monomials(g.dim, d, order);
        if low.is_empty() {
            continue;
        }
        let e = g.idempotent(h, -i);
        let mut block = vec![vec![CycNum::zero(); polys.len()]; low.len()];
        for (a, p) in polys.iter().enumerate() {
            let coords = chart.low_coords(&e.apply(g, p), &low);
            for (r, c) in coords.into_iter().enumerate() {
                block[r][a] = c;
            }
        }
        rows.extend(block.into_iter().filter(|r| r.iter().any(|c| !c.is_zero())));
    }
    rows
}

fn charts(g: &ReflectionGroup) -> Vec<Chart> {
    (0..g.hyperplanes.len()).map(|h| Chart::new(g, h)).collect()
}

/// Result of a membership test: the first failing condition, if any.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipWitness {
    pub hyperplane: usize,
    pub index: i64,
    pub required: u32,
    pub achieved: u32,
}

/// Whether `f ∈ Q_k`, with the first failing `(H, i, achieved order)` as witness.
pub fn qk_membership(g: &ReflectionGroup, k: &Multiplicity, f: &Poly) -> Result<std::result::Result<(), MembershipWitness>> {
    for (h, i, required) in conditions(g, k)? {
        let part = g.idempotent(h, -i).apply(g, f);
        if let Some(achieved) = ord_along(g, h, &part) {
            if achieved < required {
                return Ok(Err(MembershipWitness { hyperplane: h, index: i, required, achieved }));
            }
        }
    }
    Ok(Ok(()))
}

/// Reduced echelon basis of the degree-`d` slice of `Q_k`.
pub fn qk_basis(g: &ReflectionGroup, k: &Multiplicity, d: u32) -> Result<Vec<Poly>> {
    let conds = conditions(g, k)?;
    Ok(slice_with(g, &conds, &charts(g), d))
}

fn slice_with(g: &ReflectionGroup, conds: &[(usize, i64, u32)], charts: &[Chart], d: u32) -> Vec<Poly> {
    let monos: Vec<Poly> = monomials_of_degree(g.dim, d).into_iter().map(MPoly::monomial).collect();
    let rows = membership_rows(g, conds, charts, &monos, d);
    let basis = crate::polyalg::graded_solve(g.dim, d, &rows);
    echelon_polys(g.dim, d, &basis)
}

/// `Q_k` truncated at `max_degree`.
#[derive(Clone, Debug)]
pub struct QuasiModule {
    pub k: Multiplicity,
    pub slices: GradedSubspace,
    pub max_degree: u32,
}

impl QuasiModule {
    pub fn new(g: &ReflectionGroup, k: &Multiplicity, max_degree: u32) -> Result<Self> {
        let conds = conditions(g, k)?;
        let ch = charts(g);
        let mut slices = GradedSubspace::new(g.dim);
        for d in 0..=max_degree {
            slices.set_slice(d, slice_with(g, &conds, &ch, d))?;
        }
        Ok(QuasiModule { k: k.clone(), slices, max_degree })
    }

    pub fn hilbert(&self) -> Vec<usize> {
        self.slices.dims(self.max_degree)
    }

    pub fn slice(&self, d: u32) -> &[Poly] {
        self.slices.slice(d)
    }
}

/// Hilbert data of `Q_k` up to `max_degree`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertData {
    pub dims: Vec<usize>,
    pub fundamental_degrees: Vec<u32>,
    /// Coefficients of `p(t) = Hilb(Q_k) prod (1 - t^{d_i})`, constant term first.
    pub numerator: Vec<i64>,
    pub numerator_text: String,
    pub p_at_one: i64,
    pub group_order: usize,
}

fn series_numerator(dims: &[usize], degrees: &[u32]) -> Vec<i64> {
    let mut p: Vec<i64> = dims.iter().map(|&d| d as i64).collect();
    for &deg in degrees {
        let deg = deg as usize;
        for t in (deg..p.len()).rev() {
            p[t] -= p[t - deg];
        }
    }
    while p.len() > 1 && p.last() == Some(&0) {
        p.pop();
    }
    p
}

/// `1 + t^3` style rendering.
pub fn format_series(coeffs: &[i64]) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (e, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let mon = match e {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{e}"),
        };
        let body = match (c.abs(), mon.is_empty()) {
            (a, true) => a.to_string(),
            (1, false) => mon,
            (a, false) => format!("{a}{mon}"),
        };
        if parts.is_empty() {
            parts.push(if c < 0 { format!("-{body}") } else { body });
        } else {
            parts.push(format!("{} {body}", if c < 0 { "-" } else { "+" }));
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" ")
    }
}

fn hilbert_from_dims(g: &ReflectionGroup, dims: Vec<usize>, max_degree: u32) -> Result<HilbertData> {
    if g.degrees.len() != g.dim {
        return Err(Error::Inconclusive {
            max_degree: max_degree as usize,
            reason: "fundamental degrees of the group are unavailable".into(),
        });
    }
    let numerator = series_numerator(&dims, &g.degrees);
    if let Some(e) = numerator.iter().position(|&c| c < 0) {
        return Err(Error::VerificationFailed(format!("numerator coefficient of t^{e} is negative")));
    }
    let p_at_one: i64 = numerator.iter().sum();
    let order = g.order() as i64;
    if p_at_one > order {
        return Err(Error::VerificationFailed(format!("p(1) = {p_at_one} exceeds |W| = {order}")));
    }
    if p_at_one < order || numerator.len() as u32 > max_degree {
        return Err(Error::Inconclusive {
            max_degree: max_degree as usize,
            reason: format!("numerator sums to {p_at_one} of {order} and has degree {}", numerator.len() - 1),
        });
    }
    Ok(HilbertData {
        numerator_text: format_series(&numerator),
        dims,
        fundamental_degrees: g.degrees.clone(),
        numerator,
        p_at_one,
        group_order: g.order(),
    })
}

/// `p(t) = Hilb(Q_k) prod (1 - t^{d_i})`; certified when its coefficients
/// are nonnegative, sum to `|W|` and its degree is below `max_degree`.
pub fn qk_hilbert(g: &ReflectionGroup, k: &Multiplicity, max_degree: u32) -> Result<HilbertData> {
    let q = QuasiModule::new(g, k, max_degree)?;
    hilbert_from_dims(g, q.hilbert(), max_degree)
}

/// Homogeneous generators of `Q_k` as a `C[V]^W`-module, certified up to
/// `max_degree`.
#[derive(Clone, Debug, Serialize)]
pub struct FreenessCertificate {
    #[serde(serialize_with = "ser_polys")]
    pub generators: Vec<Poly>,
    pub degrees: Vec<u32>,
    pub hilbert: HilbertData,
    pub report: Report,
}

fn ser_polys<S: serde::Serializer>(ps: &[Poly], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(ps.iter().map(|p| p.to_string()))
}

/// Graded Nakayama: generators are a basis of `Q_k / (C[V]^W_+ Q_k)` in
/// each degree. The certificate checks that there are `|W|` of them, that
/// their degrees reproduce `p(t)` and that the products
/// `(invariant basis) * (generator)` form a basis of every slice up to
/// `max_degree`.
pub fn freeness_certificate(g: &ReflectionGroup, k: &Multiplicity, max_degree: u32) -> Result<FreenessCertificate> {
    let q = QuasiModule::new(g, k, max_degree)?;
    let hilbert = hilbert_from_dims(g, q.hilbert(), max_degree)?;
    let inv = invariant_ring(g, max_degree);
    let n = g.dim;
    let mut generators: Vec<Poly> = Vec::new();
    let mut degrees = Vec::new();
    for d in 0..=max_degree {
        let mut span: Vec<Poly> = Vec::new();
        for e in 1..=d {
            for a in inv.slice(e) {
                for b in q.slice(d - e) {
                    span.push(a.mul(b));
                }
            }
        }
        let mut current = echelon_polys(n, d, &span);
        for f in q.slice(d) {
            let mut trial = current.clone();
            trial.push(f.clone());
            if span_rank(n, d, &trial) > current.len() {
                current = echelon_polys(n, d, &trial);
                generators.push(f.clone());
                degrees.push(d);
            }
        }
    }
    let mut report = Report::new("freeness");
    report.record(generators.len() == g.order(), || format!("{} generators, |W| = {}", generators.len(), g.order()));
    let mut from_gens = vec![0i64; hilbert.numerator.len().max(max_degree as usize + 1)];
    for &d in &degrees {
        from_gens[d as usize] += 1;
    }
    while from_gens.len() > 1 && from_gens.last() == Some(&0) {
        from_gens.pop();
    }
    report.record(from_gens == hilbert.numerator, || format!("generator degrees give {}", format_series(&from_gens)));
    for d in 0..=max_degree {
        let mut products = Vec::new();
        for (gen, &gd) in generators.iter().zip(&degrees) {
            if gd <= d {
                for a in inv.slice(d - gd) {
                    products.push(a.mul(gen));
                }
            }
        }
        let rank = span_rank(n, d, &products);
        let ok = rank == products.len() && rank == q.slice(d).len();
        report.record(ok, || {
            format!("degree {d}: {} products of rank {rank}, slice dimension {}", products.len(), q.slice(d).len())
        });
    }
    Ok(FreenessCertificate { generators, degrees, hilbert, report })
}

/// The local candidate `k'_{C,i} = max_j max(0, k_{C,i+j} - k_{C,j})`, indices mod `n_C`.
pub fn ak_candidate(g: &ReflectionGroup, k: &Multiplicity) -> Result<Multiplicity> {
    ak_formula(g, k, false)
}

/// As [`ak_candidate`] but accounting for the wrap-around in
/// `Q_k(Z/n) = sum_i x^{n k_i + i} C[x^n]`: when `i + j >= n` the product
/// gains a factor `x^n`, so the bound drops by one:
/// `k'_i = max_j max(0, k_{i+j mod n} - k_j - [i + j >= n])`.
pub fn ak_candidate_with_carry(g: &ReflectionGroup, k: &Multiplicity) -> Result<Multiplicity> {
    ak_formula(g, k, true)
}

fn ak_formula(g: &ReflectionGroup, k: &Multiplicity, carry: bool) -> Result<Multiplicity> {
    let ints = k.as_integers()?;
    let out = ints
        .iter()
        .map(|row| {
            let n = row.len();
            (0..n)
                .map(|i| {
                    if i == 0 {
                        return 0;
                    }
                    (0..n)
                        .map(|j| {
                            let wrap = i + j >= n;
                            let v = row[(i + j) % n] as i64 - row[j] as i64 - i64::from(carry && wrap);
                            v.max(0) as u32
                        })
                        .max()
                        .unwrap_or(0)
                })
                .collect()
        })
        .collect();
    Multiplicity::from_integers(g, out)
}

/// `A_k` as `Q_{k'}` with its verification.
#[derive(Clone, Debug)]
pub struct AkResult {
    pub k_prime: Multiplicity,
    /// Whether the plain candidate (without carry) verified.
    pub plain_formula_holds: bool,
    pub report: Report,
    /// Degrees where the brute-force slice was compared for equality.
    pub compared_up_to: u32,
}

/// Brute-force slice of `A_k` in degree `d`: polynomials `P` with
/// `P q ∈ Q_k` for every basis element `q` of `Q_k` of degree `<= max_degree - d`.
pub fn ak_slice_brute_force(g: &ReflectionGroup, q: &QuasiModule, d: u32) -> Result<Vec<Poly>> {
    let conds = conditions(g, &q.k)?;
    let ch = charts(g);
    let monos: Vec<Poly> = monomials_of_degree(g.dim, d).into_iter().map(MPoly::monomial).collect();
    let mut rows = Vec::new();
    for e in 0..=q.max_degree.saturating_sub(d) {
        for b in q.slice(e) {
            let products: Vec<Poly> = monos.iter().map(|m| m.mul(b)).collect();
            rows.extend(membership_rows(g, &conds, &ch, &products, d + e));
        }
    }
    let basis = crate::polyalg::graded_solve(g.dim, d, &rows);
    Ok(echelon_polys(g.dim, d, &basis))
}

fn verify_ak(g: &ReflectionGroup, q: &QuasiModule, kp: &Multiplicity, max_degree: u32) -> Result<(Report, u32)> {
    let qp = QuasiModule::new(g, kp, max_degree)?;
    let conds = conditions(g, &q.k)?;
    let ch = charts(g);
    let mut rep = Report::new("ak");
    // (a) Q_{k'} Q_k ⊆ Q_k.
    for d1 in 0..=max_degree {
        for d2 in 0..=max_degree - d1 {
            let products: Vec<Poly> =
                qp.slice(d1).iter().flat_map(|a| q.slice(d2).iter().map(move |b| a.mul(b))).collect();
            for (idx, p) in products.iter().enumerate() {
                let rows = membership_rows(g, &conds, &ch, std::slice::from_ref(p), d1 + d2);
                let ok = rows.iter().all(|r| r[0].is_zero());
                rep.record(ok, || format!("product #{idx} of degrees {d1}+{d2} leaves Q_k: {p}"));
            }
        }
    }
    // (b) brute-force A_k slices agree with Q_{k'} where enough test elements exist.
    let compared = max_degree / 2;
    for d in 0..=compared {
        let brute = ak_slice_brute_force(g, q, d)?;
        let ok = brute == qp.slice(d);
        rep.record(ok, || format!("degree {d}: brute-force A_k has dimension {}, Q_k' has {}", brute.len(), qp.slice(d).len()));
    }
    Ok((rep, compared))
}

/// Computes `k'` with `A_k = Q_{k'}`, verified up to `max_degree`.
///
/// The plain local candidate is tried first. If it fails, the failure is
/// kept in the report details and the carry-corrected candidate is verified
/// instead; if that fails too the result is `VerificationFailed`.
pub fn ak_compute(g: &ReflectionGroup, k: &Multiplicity, max_degree: u32) -> Result<AkResult> {
    let q = QuasiModule::new(g, k, max_degree)?;
    let plain = ak_candidate(g, k)?;
    let (rep, compared) = verify_ak(g, &q, &plain, max_degree)?;
    if rep.pass {
        return Ok(AkResult { k_prime: plain, plain_formula_holds: true, report: rep, compared_up_to: compared });
    }
    let corrected = ak_candidate_with_carry(g, k)?;
    let (rep2, compared) = verify_ak(g, &q, &corrected, max_degree)?;
    if !rep2.pass {
        return Err(Error::VerificationFailed(format!(
            "neither local formula describes A_k: {}",
            rep2.witness.unwrap_or_default()
        )));
    }
    let rep2 = rep2.with_details(serde_json::json!({
        "plain_candidate": plain.to_string(),
        "plain_candidate_witness": rep.witness,
    }));
    Ok(AkResult { k_prime: corrected, plain_formula_holds: false, report: rep2, compared_up_to: compared })
}

/// `C[V]^W Q_k ⊆ Q_k` and `w Q_k ⊆ Q_k` on all slices of `q`.
pub fn check_module_structure(g: &ReflectionGroup, q: &QuasiModule) -> Result<Report> {
    let conds = conditions(g, &q.k)?;
    let ch = charts(g);
    let inv = invariant_ring(g, q.max_degree);
    let mut rep = Report::new("qk_structure");
    let member = |p: &Poly, d: u32| membership_rows(g, &conds, &ch, std::slice::from_ref(p), d).iter().all(|r| r[0].is_zero());
    for d in 0..=q.max_degree {
        for f in q.slice(d) {
            for &w in &g.generators {
                let wf = g.act(w, f);
                rep.record(member(&wf, d), || format!("generator {w} moves {f} out of Q_k"));
            }
            for e in 1..=q.max_degree - d {
                for a in inv.slice(e) {
                    let p = a.mul(f);
                    rep.record(member(&p, d + e), || format!("({a}) * ({f}) leaves Q_k"));
                }
            }
        }
    }
    Ok(rep)
}

/// Rank of a set of coordinate vectors; re-exported for the equivariant slices.
pub(crate) fn vector_rank(vs: &[Vec<CycNum>], dim: usize) -> usize {
    rank_of(vs, dim)
}

pub(crate) fn kernel_of(rows: &[Vec<CycNum>], cols: usize) -> Vec<Vec<CycNum>> {
    if rows.is_empty() {
        return (0..cols)
            .map(|j| (0..cols).map(|i| if i == j { num_traits::One::one() } else { CycNum::zero() }).collect())
            .collect();
    }
    let mut m = Matrix::zeros(rows.len(), cols);
    for (i, r) in rows.iter().enumerate() {
        for (j, c) in r.iter().enumerate() {
            m[(i, j)] = c.clone();
        }
    }
    m.kernel()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Family;

    fn k_of(g: &ReflectionGroup, row: Vec<u32>) -> Multiplicity {
        Multiplicity::from_integers(g, vec![row]).unwrap()
    }

    fn x(e: u32) -> Poly {
        MPoly::var(1, 0).pow(e)
    }

    #[test]
    fn membership_examples() {
        let g = Family::Cyclic { n: 2 }.build(10).unwrap();
        let k = k_of(&g, vec![0, 1]);
        assert!(qk_membership(&g, &k, &x(2)).unwrap().is_ok());
        let w = qk_membership(&g, &k, &x(1)).unwrap().unwrap_err();
        assert_eq!((w.required, w.achieved), (2, 1));
        assert!(qk_membership(&g, &k, &x(3)).unwrap().is_ok());
    }

    #[test]
    fn cyclic_slices_follow_the_pattern() {
        let g = Family::Cyclic { n: 3 }.build(10).unwrap();
        let k = k_of(&g, vec![0, 1, 1]);
        let dims: Vec<usize> = (0..6).map(|d| qk_basis(&g, &k, d).unwrap().len()).collect();
        assert_eq!(dims, vec![1, 0, 0, 1, 1, 1]);
        let h = qk_hilbert(&g, &k, 10).unwrap();
        assert_eq!(h.numerator_text, "1 + t^4 + t^5");
        assert_eq!(h.p_at_one, 3);
    }

    #[test]
    fn z2_hilbert_and_generators() {
        let g = Family::Cyclic { n: 2 }.build(10).unwrap();
        let k = k_of(&g, vec![0, 1]);
        let h = qk_hilbert(&g, &k, 10).unwrap();
        assert_eq!(h.numerator_text, "1 + t^3");
        let c = freeness_certificate(&g, &k, 10).unwrap();
        assert!(c.report.pass);
        assert_eq!(c.generators, vec![x(0), x(3)]);
        let c0 = freeness_certificate(&g, &Multiplicity::zero(&g), 6).unwrap();
        assert_eq!(c0.generators, vec![x(0), x(1)]);
        assert!(matches!(qk_hilbert(&g, &k, 3), Err(Error::Inconclusive { .. })));
    }

    #[test]
    fn ak_examples() {
        let g = Family::Cyclic { n: 2 }.build(10).unwrap();
        let r = ak_compute(&g, &k_of(&g, vec![0, 1]), 10).unwrap();
        assert_eq!(r.k_prime, k_of(&g, vec![0, 1]));
        assert!(r.plain_formula_holds);
        let g3 = Family::Cyclic { n: 3 }.build(10).unwrap();
        let k = k_of(&g3, vec![0, 2, 0]);
        assert_eq!(ak_candidate(&g3, &k).unwrap(), k_of(&g3, vec![0, 2, 2]));
        let r = ak_compute(&g3, &k, 12).unwrap();
        assert!(!r.plain_formula_holds);
        assert_eq!(r.k_prime, k_of(&g3, vec![0, 2, 1]));
        // x^5 multiplies Q_k into itself but is not in Q_{(0,2,2)}.
        let q = QuasiModule::new(&g3, &k, 12).unwrap();
        let brute = ak_slice_brute_force(&g3, &q, 5).unwrap();
        assert_eq!(brute, vec![x(5)]);
    }

    #[test]
    fn s3_structure() {
        let g = Family::Symmetric { n: 3 }.build(10).unwrap();
        let k = Multiplicity::from_integers(&g, vec![vec![0, 1]]).unwrap();
        let q = QuasiModule::new(&g, &k, 6).unwrap();
        assert!(check_module_structure(&g, &q).unwrap().pass);
        let q0 = QuasiModule::new(&g, &Multiplicity::zero(&g), 4).unwrap();
        assert_eq!(q0.hilbert(), vec![1, 3, 6, 10, 15]);
    }

    #[test]
    fn series_formatting() {
        assert_eq!(format_series(&[1, 0, 0, 1]), "1 + t^3");
        assert_eq!(format_series(&[1, 2, -1]), "1 + 2t - t^2");
        assert_eq!(series_numerator(&[1, 0, 1, 1, 1, 1, 1], &[2]), vec![1, 0, 0, 1]);
    }
}
