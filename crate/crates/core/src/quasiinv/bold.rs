//! `CW`-valued quasi-invariants: `φ = sum_u f_u ⊗ u` with
//! `(1 ⊗ e_{H,i}) φ ≡ 0 mod alpha_H^{n_H k_{H,i}} ⊗ CW`, together with the
//! differential action of the Dunkl operators and the stability checks
//! for `Q_k` under invariant operators.

use num_traits::Zero;
use serde::Serialize;

use super::{conditions, kernel_of, qk_membership, vector_rank, Chart, QuasiModule};
use crate::cyclotomic::CycNum;
use crate::dunkl::{CMOperator, DiffReflOp, Dunkl};
use crate::error::{Error, Result};
use crate::groups::{Multiplicity, Poly, ReflectionGroup};
use crate::poly::{monomials_of_degree, MPoly};
use crate::polyalg::RatFun;
use crate::report::Report;
use crate::scalar::Rat;

/// Basis of one degree of `Q_k ∩ (C[V] ⊗ CW)`; each element lists `f_u` for every group element `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantSlice {
    pub degree: u32,
    pub basis: Vec<Vec<Poly>>,
}

impl EquivariantSlice {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn to_json(&self, g: &ReflectionGroup) -> serde_json::Value {
        let elems: Vec<serde_json::Value> = self
            .basis
            .iter()
            .map(|phi| {
                let terms: Vec<serde_json::Value> = phi
                    .iter()
                    .enumerate()
                    .filter(|(_, f)| !f.is_zero())
                    .map(|(u, f)| serde_json::json!({ "element": u, "word": element_word(g, u), "poly": f.to_string() }))
                    .collect();
                serde_json::Value::Array(terms)
            })
            .collect();
        serde_json::json!({ "degree": self.degree, "dim": self.dim(), "basis": elems })
    }
}

/// Generator word (1-based generator positions) reaching element `u` from the identity.
fn element_word(g: &ReflectionGroup, mut u: usize) -> Vec<usize> {
    let mut word = Vec::new();
    while let Some((gen, prev)) = g.word_step(u) {
        word.push(gen + 1);
        u = prev;
    }
    word.reverse();
    word
}

fn flatten(phi: &[Poly], monos: &[crate::poly::Monomial]) -> Vec<CycNum> {
    phi.iter().flat_map(|f| f.coords(monos)).collect()
}

/// `(1 ⊗ a) φ` for `a = sum_v c_v v`: the `vu` component gains `c_v f_u`.
fn left_multiply(g: &ReflectionGroup, a: &crate::groups::GroupAlgebraElement, phi: &[Poly]) -> Vec<Poly> {
    let mut out = vec![MPoly::zero(g.dim); phi.len()];
    for (&v, c) in &a.coeffs {
        for (u, f) in phi.iter().enumerate() {
            if !f.is_zero() {
                out[g.mul(v, u)].add_assign(&f.scale(c));
            }
        }
    }
    out
}

/// Diagonal action `w (f ⊗ u) = (w.f) ⊗ wu`.
fn diagonal_action(g: &ReflectionGroup, w: usize, phi: &[Poly]) -> Vec<Poly> {
    let mut out = vec![MPoly::zero(g.dim); phi.len()];
    for (u, f) in phi.iter().enumerate() {
        if !f.is_zero() {
            out[g.mul(w, u)] = g.act(w, f);
        }
    }
    out
}

/// `e φ = (1/|W|) sum_w w φ` under the diagonal action.
fn symmetrize(g: &ReflectionGroup, phi: &[Poly]) -> Vec<Poly> {
    let mut out = vec![MPoly::zero(g.dim); phi.len()];
    for w in 0..g.order() {
        for (slot, f) in out.iter_mut().zip(diagonal_action(g, w, phi)) {
            slot.add_assign(&f);
        }
    }
    let s = CycNum::from_rational(Rat::new(1.into(), (g.order() as i64).into()));
    out.iter().map(|f| f.scale(&s)).collect()
}

/// Differential action of an element of `D(V_reg) ⋊ W`:
/// `(c ∂^β v)(f ⊗ u) = c ∂^β(v.f) ⊗ vu`.
fn differential_action(g: &ReflectionGroup, op: &DiffReflOp, phi: &[Poly]) -> Vec<RatFun> {
    let mut out = vec![RatFun::zero(&g.arrangement); phi.len()];
    for ((v, beta), c) in op.terms() {
        for (u, f) in phi.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            let d = g.act(*v, f).apply_derivative_monomial(beta);
            if !d.is_zero() {
                let slot = &mut out[g.mul(*v, u)];
                *slot = slot.add(&c.mul_poly(&d));
            }
        }
    }
    out
}

struct BoldConditions {
    conds: Vec<(usize, i64, u32)>,
    charts: Vec<Chart>,
    idempotents: Vec<crate::groups::GroupAlgebraElement>,
}

impl BoldConditions {
    fn new(g: &ReflectionGroup, k: &Multiplicity) -> Result<Self> {
        let conds = conditions(g, k)?;
        let charts = (0..g.hyperplanes.len()).map(|h| Chart::new(g, h)).collect();
        let idempotents = conds.iter().map(|&(h, i, _)| g.idempotent(h, i)).collect();
        Ok(BoldConditions { conds, charts, idempotents })
    }

    /// Linear conditions on the coefficients of a family of degree-`d` elements.
    fn rows(&self, g: &ReflectionGroup, family: &[Vec<Poly>], d: u32) -> Vec<Vec<CycNum>> {
        let mut rows = Vec::new();
        for (c, &(h, _, order)) in self.conds.iter().enumerate() {
            let chart = &self.charts[h];
            let low = chart.low_monomials(g.dim, d, order);
            if low.is_empty() {
                continue;
            }
            let mut block = vec![vec![CycNum::zero(); family.len()]; low.len() * g.order()];
            for (a, phi) in family.iter().enumerate() {
                for (u, f) in left_multiply(g, &self.idempotents[c], phi).iter().enumerate() {
                    if f.is_zero() {
                        continue;
                    }
                    for (r, x) in chart.low_coords(f, &low).into_iter().enumerate() {
                        block[u * low.len() + r][a] = x;
                    }
                }
            }
            rows.extend(block.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())));
        }
        rows
    }

    fn contains(&self, g: &ReflectionGroup, phi: &[Poly], d: u32) -> bool {
        self.rows(g, std::slice::from_ref(&phi.to_vec()), d).is_empty()
    }
}

fn unit_family(g: &ReflectionGroup, d: u32) -> Vec<Vec<Poly>> {
    let monos = monomials_of_degree(g.dim, d);
    let mut family = Vec::new();
    for u in 0..g.order() {
        for m in &monos {
            let mut phi = vec![MPoly::zero(g.dim); g.order()];
            phi[u] = MPoly::monomial(m.clone());
            family.push(phi);
        }
    }
    family
}

fn bold_basis_with(g: &ReflectionGroup, bc: &BoldConditions, d: u32) -> EquivariantSlice {
    let monos = monomials_of_degree(g.dim, d);
    let family = unit_family(g, d);
    let rows = bc.rows(g, &family, d);
    let basis = kernel_of(&rows, family.len())
        .into_iter()
        .map(|v| v.chunks(monos.len()).map(|c| MPoly::from_coords(g.dim, &monos, c)).collect())
        .collect();
    EquivariantSlice { degree: d, basis }
}

/// Exact basis of the degree-`d` part of the `CW`-valued quasi-invariants.
pub fn bold_qk_basis(g: &ReflectionGroup, k: &Multiplicity, d: u32) -> Result<EquivariantSlice> {
    Ok(bold_basis_with(g, &BoldConditions::new(g, k)?, d))
}

/// Stability of the `CW`-valued quasi-invariants up to `max_degree`:
/// (a) multiplication by coordinates and the diagonal action preserve them;
/// (b) each Dunkl operator (differential action) maps degree `d` into degree `d - 1`;
/// (c) `e Q_k = e (Q_k ⊗ 1)` degree by degree.
pub fn check_bold_stability(g: &ReflectionGroup, k: &Multiplicity, max_degree: u32) -> Result<Report> {
    let bc = BoldConditions::new(g, k)?;
    let dunkl = Dunkl::new(g, k);
    let ops: Vec<DiffReflOp> = (0..g.dim).map(|i| dunkl.operator_basis(i)).collect();
    let q = QuasiModule::new(g, k, max_degree)?;
    let mut a = Report::new("bold_module_structure");
    let mut b = Report::new("bold_dunkl_stability");
    let mut c = Report::new("bold_symmetrization");
    let mut dims = Vec::new();
    for d in 0..=max_degree {
        let slice = bold_basis_with(g, &bc, d);
        dims.push(slice.dim());
        for (idx, phi) in slice.basis.iter().enumerate() {
            for j in 0..g.dim {
                let xphi: Vec<Poly> = phi.iter().map(|f| f.mul(&MPoly::var(g.dim, j))).collect();
                a.record(bc.contains(g, &xphi, d + 1), || format!("x{} times element {idx} of degree {d}", j + 1));
            }
            for &w in &g.generators {
                let wphi = diagonal_action(g, w, phi);
                a.record(bc.contains(g, &wphi, d), || format!("generator {w} on element {idx} of degree {d}"));
            }
            if d == 0 {
                continue;
            }
            for (i, op) in ops.iter().enumerate() {
                let image = differential_action(g, op, phi);
                let polys: Option<Vec<Poly>> = image.iter().map(RatFun::to_poly).collect();
                let ok = polys.as_ref().is_some_and(|p| bc.contains(g, p, d - 1));
                b.record(ok, || format!("T{} on element {idx} of degree {d}", i + 1));
            }
        }
        let monos = monomials_of_degree(g.dim, d);
        let lhs: Vec<Vec<CycNum>> = slice.basis.iter().map(|phi| flatten(&symmetrize(g, phi), &monos)).collect();
        let rhs: Vec<Vec<CycNum>> = q
            .slice(d)
            .iter()
            .map(|f| {
                let mut phi = vec![MPoly::zero(g.dim); g.order()];
                phi[0] = f.clone();
                flatten(&symmetrize(g, &phi), &monos)
            })
            .collect();
        let width = monos.len() * g.order();
        let both: Vec<Vec<CycNum>> = lhs.iter().chain(&rhs).cloned().collect();
        let (rl, rr, rb) = (vector_rank(&lhs, width), vector_rank(&rhs, width), vector_rank(&both, width));
        c.record(rl == rr && rr == rb, || format!("degree {d}: ranks {rl} (eQ_k), {rr} (e(Q_k ⊗ 1)), {rb} (sum)"));
    }
    let mut rep = Report::new("bold_stability");
    rep.absorb(&a);
    rep.absorb(&b);
    rep.absorb(&c);
    Ok(rep.with_details(serde_json::json!({
        "verified_up_to_degree": max_degree,
        "module_structure": a.pass,
        "dunkl_stability": b.pass,
        "symmetrization": c.pass,
        "dims": dims,
    })))
}

/// Outcome of a truncated membership test for `D(Q_k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QkMembership {
    pub holds: bool,
    /// The verdict covers `Q_k` basis elements up to this degree only.
    pub verified_up_to: u32,
    pub checked: usize,
    pub witness: Option<String>,
}

fn operator_preserves(
    g: &ReflectionGroup,
    k: &Multiplicity,
    q: &QuasiModule,
    apply: impl Fn(&Poly) -> RatFun,
) -> Result<QkMembership> {
    let mut rep = Report::new("dqk");
    for d in 0..=q.max_degree {
        for f in q.slice(d) {
            let image = apply(f);
            let ok = match image.to_poly() {
                Some(p) => qk_membership(g, k, &p)?.is_ok(),
                None => false,
            };
            rep.record(ok, || format!("f = {f}, D(f) = {image}"));
        }
    }
    Ok(QkMembership { holds: rep.pass, verified_up_to: q.max_degree, checked: rep.checked, witness: rep.witness })
}

/// Whether `D` maps every `Q_k` basis element of degree `<= max_degree` into `Q_k`.
pub fn dqk_membership(g: &ReflectionGroup, k: &Multiplicity, op: &CMOperator, max_degree: u32) -> Result<QkMembership> {
    let q = QuasiModule::new(g, k, max_degree)?;
    operator_preserves(g, k, &q, |f| op.apply(f))
}

/// As [`dqk_membership`] for an element of `D(V_reg) ⋊ W` without group part.
pub fn dqk_membership_diffrefl(
    g: &ReflectionGroup,
    k: &Multiplicity,
    op: &DiffReflOp,
    max_degree: u32,
) -> Result<QkMembership> {
    if !op.is_differential() {
        return Err(Error::Invalid("operator has a nontrivial group part".into()));
    }
    dqk_membership(g, k, &op.restrict_unchecked(), max_degree)
}

/// `L_P = Res P(T)` maps `Q_k` into itself on all basis elements up to `max_degree`.
pub fn check_uk_stability(g: &ReflectionGroup, k: &Multiplicity, p: &Poly, max_degree: u32) -> Result<Report> {
    let l = Dunkl::new(g, k).cm_operator(p)?;
    let m = dqk_membership(g, k, &l, max_degree)?;
    let mut rep = Report::new("uk_stability");
    rep.pass = m.holds;
    rep.checked = m.checked;
    rep.witness = m.witness;
    Ok(rep.with_details(serde_json::json!({ "verified_up_to_degree": max_degree, "operator": l.to_string() })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Family;
    use crate::scalar::rat_int;

    fn x(e: u32) -> Poly {
        MPoly::var(1, 0).pow(e)
    }

    #[test]
    fn cyclic_bold_slices() {
        let g = Family::Cyclic { n: 3 }.build(10).unwrap();
        let k = Multiplicity::from_integers(&g, vec![vec![0, 1, 1]]).unwrap();
        let dims: Vec<usize> = (0..5).map(|d| bold_qk_basis(&g, &k, d).unwrap().dim()).collect();
        // x^{3 k_i} C[x] ⊗ e_i: e_0 from degree 0, e_1 and e_2 from degree 3.
        assert_eq!(dims, vec![1, 1, 1, 3, 3]);
        let r = check_bold_stability(&g, &k, 8).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn dunkl_annihilates_lowest_terms() {
        let g = Family::Cyclic { n: 3 }.build(10).unwrap();
        let k = Multiplicity::from_integers(&g, vec![vec![0, 1, 1]]).unwrap();
        let op = Dunkl::new(&g, &k).operator_basis(0);
        let e1 = g.idempotent(0, 1);
        let mut phi = vec![MPoly::zero(1); 3];
        phi[0] = x(3);
        let phi = left_multiply(&g, &e1, &phi);
        let image = differential_action(&g, &op, &phi);
        assert!(image.iter().all(RatFun::is_zero));
    }

    #[test]
    fn z2_operators_on_qk() {
        let g = Family::Cyclic { n: 2 }.build(10).unwrap();
        let k = Multiplicity::uniform(&g, rat_int(1));
        let p2 = x(2);
        let l = Dunkl::new(&g, &k).cm_operator(&p2).unwrap();
        assert!(l.apply(&x(3)).is_zero());
        assert!(check_uk_stability(&g, &k, &p2, 10).unwrap().pass);
        let d = CMOperator::from_terms(
            &g.arrangement,
            vec![(crate::poly::Monomial::var(1, 0), RatFun::one(&g.arrangement))],
        );
        let m = dqk_membership(&g, &k, &d, 10).unwrap();
        assert!(!m.holds);
        assert!(m.witness.unwrap().starts_with("f = x^2"));
        assert!(dqk_membership(&g, &k, &l, 10).unwrap().holds);
    }
}
