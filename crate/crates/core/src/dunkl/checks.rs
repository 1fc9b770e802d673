use num_traits::Zero;
use serde::Serialize;

use super::{calogero_moser_hamiltonian, nabla_laplacian, nabla_operator, CMOperator, DiffReflOp, Dunkl};
use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::groups::{GroupAlgebraElement, Multiplicity, Poly, ReflectionGroup};
use crate::polyalg::RatFun;
use crate::poly::{monomials_of_degree, MPoly, Monomial};
use crate::report::Report;
use crate::scalar::Rat;

fn all_monomials(nvars: usize, max_degree: u32) -> impl Iterator<Item = Monomial> {
    (0..=max_degree).flat_map(move |d| monomials_of_degree(nvars, d))
}

/// `[T_i, T_j] f = 0` for all coordinate pairs and all monomials of degree `<= max_degree`.
pub fn check_commutativity(g: &ReflectionGroup, k: &Multiplicity, max_degree: u32) -> Result<Report> {
    let d = Dunkl::new(g, k);
    let mut rep = Report::new("dunkl_commutativity");
    for m in all_monomials(g.dim, max_degree) {
        let f: Poly = MPoly::monomial(m);
        let first: Vec<Poly> = (0..g.dim).map(|j| d.apply_basis(j, &f)).collect::<Result<_>>()?;
        for i in 0..g.dim {
            for j in i + 1..g.dim {
                let lhs = d.apply_basis(i, &first[j])?;
                let rhs = d.apply_basis(j, &first[i])?;
                let ok = lhs == rhs;
                rep.record(ok, || format!("[T{}, T{}]({f}) = {}", i + 1, j + 1, lhs.sub(&rhs)));
            }
        }
    }
    Ok(rep)
}

/// `w T_xi w^-1 = T_{w xi}` on monomials of degree `<= max_degree`, for every
/// element `w` and every coordinate vector `xi`.
pub fn check_equivariance(g: &ReflectionGroup, k: &Multiplicity, max_degree: u32) -> Result<Report> {
    let d = Dunkl::new(g, k);
    let mut rep = Report::new("dunkl_equivariance");
    for m in all_monomials(g.dim, max_degree) {
        let f: Poly = MPoly::monomial(m);
        for w in 0..g.order() {
            let winv_f = g.act(g.inverse(w), &f);
            for i in 0..g.dim {
                let xi = g.basis_vector(i);
                let lhs = g.act(w, &d.apply(&xi, &winv_f)?);
                let rhs = d.apply(&g.act_vector(w, &xi), &f)?;
                let ok = lhs == rhs;
                rep.record(ok, || format!("w{w} T{} w^-1 ({f}) differs from T_(w e{})", i + 1, i + 1));
            }
        }
    }
    Ok(rep)
}

/// Right-hand side of the `[xi, x]` relation for `xi = e_i`, `x = x_j` as a
/// group-algebra element plus the scalar `<xi, x>`:
/// `delta_ij + sum_H alpha_H(e_i) v_H[j] / alpha_H(v_H) sum_l c_{H,l} e_{H,l}`,
/// with `c_{H,l} = n_H (k_{H,l} - k_{H,l+shift})`.
fn relation_rhs(g: &ReflectionGroup, k: &Multiplicity, i: usize, j: usize, shift: i64) -> GroupAlgebraElement {
    let mut out = if i == j { GroupAlgebraElement::identity() } else { GroupAlgebraElement::zero() };
    for (h, hp) in g.hyperplanes.iter().enumerate() {
        let a = &hp.alpha[i];
        let v = &hp.v[j];
        if a.is_zero() || v.is_zero() {
            continue;
        }
        let av = hp.eval(&hp.v);
        let factor = a.clone() * v * &av.inverse().expect("alpha_H(v_H) != 0");
        let n = hp.order as i64;
        for l in 0..n {
            let c = (k.for_hyperplane(g, h, l) - k.for_hyperplane(g, h, l + shift)) * Rat::from_integer(n.into());
            if c.is_zero() {
                continue;
            }
            let s = factor.clone() * &CycNum::from_rational(c);
            out = out.add(&g.idempotent(h, l).scale(&s));
        }
    }
    out
}

/// The defining relations of the rational Cherednik algebra, checked in
/// the Dunkl representation on polynomials of degree `<= max_degree`:
/// `[x, x'] = 0`, `w T_xi w^-1 = T_{w xi}` and the `[xi, x]` relation.
///
/// The `[xi, x]` relation is checked with coefficients
/// `n_H (k_{H,i} - k_{H,i-1})`, which is the form consistent with the action
/// `(w.f)(x) = f(w^-1 x)`. The variant with `k_{H,i+1}` is evaluated too and
/// reported under `details.shifted_variant`; it agrees only when each
/// `k_{H,i}` is symmetric under `i -> -i`.
pub fn check_cherednik_relations(g: &ReflectionGroup, k: &Multiplicity, max_degree: u32) -> Result<Report> {
    let d = Dunkl::new(g, k);
    let mut rep = Report::new("cherednik_relations");

    let mut xx = Report::new("x_commute");
    for m in all_monomials(g.dim, max_degree) {
        let f: Poly = MPoly::monomial(m);
        for i in 0..g.dim {
            for j in i + 1..g.dim {
                let xi = MPoly::var(g.dim, i);
                let xj = MPoly::var(g.dim, j);
                let ok = xi.mul(&xj.mul(&f)) == xj.mul(&xi.mul(&f));
                xx.record(ok, || format!("[x{}, x{}]({f}) != 0", i + 1, j + 1));
            }
        }
    }
    rep.absorb(&xx);
    let eq = check_equivariance(g, k, max_degree)?;
    rep.absorb(&eq);

    let mut main = Report::new("xi_x_relation");
    let mut variant = Report::new("xi_x_relation_shifted_variant");
    let rhs: Vec<Vec<(GroupAlgebraElement, GroupAlgebraElement)>> = (0..g.dim)
        .map(|i| (0..g.dim).map(|j| (relation_rhs(g, k, i, j, -1), relation_rhs(g, k, i, j, 1))).collect())
        .collect();
    for m in all_monomials(g.dim, max_degree.saturating_sub(1)) {
        let f: Poly = MPoly::monomial(m);
        for i in 0..g.dim {
            let tf = d.apply_basis(i, &f)?;
            for j in 0..g.dim {
                let xj = MPoly::var(g.dim, j);
                let lhs = d.apply_basis(i, &xj.mul(&f))?.sub(&xj.mul(&tf));
                let expected = rhs[i][j].0.apply(g, &f);
                main.record(lhs == expected, || format!("[T{}, x{}]({f}) = {lhs}, expected {expected}", i + 1, j + 1));
                let alt = rhs[i][j].1.apply(g, &f);
                variant.record(lhs == alt, || format!("[T{}, x{}]({f}) = {lhs}, shifted form gives {alt}", i + 1, j + 1));
            }
        }
    }
    // Operator-level identity in D(V_reg) ⋊ W.
    let mut op_level = Report::new("xi_x_operator_identity");
    for i in 0..g.dim {
        let t = d.operator_basis(i);
        for j in 0..g.dim {
            let x = DiffReflOp::multiplication_poly(g, &MPoly::var(g.dim, j));
            let comm = t.commutator(&x, g);
            let expected = DiffReflOp::group_algebra(g, &rhs[i][j].0);
            op_level.record(comm == expected, || format!("[T{}, x{}] = {comm}", i + 1, j + 1));
        }
    }
    rep.absorb(&main);
    rep.absorb(&op_level);
    rep.details = serde_json::json!({
        "x_commute": xx.pass,
        "equivariance": eq.pass,
        "xi_x_relation": main.pass,
        "xi_x_operator_identity": op_level.pass,
        "shifted_variant": { "pass": variant.pass, "witness": variant.witness },
    });
    Ok(rep)
}

/// `[L_P, L_Q]` for invariant `P`, `Q` in the dual variables.
pub fn cm_commutator(g: &ReflectionGroup, k: &Multiplicity, p: &Poly, q: &Poly) -> Result<CMOperator> {
    let d = Dunkl::new(g, k);
    let lp = d.cm_operator(p)?;
    let lq = d.cm_operator(q)?;
    Ok(lp.commutator(&lq))
}

/// Restriction of `|nabla(c)|^2` against the Calogero–Moser operator
/// `Delta - sum_H c_H (c_H + 1) (alpha, alpha) / alpha_H^2`, compared both
/// as rational-coefficient operators and as polynomial operators after
/// multiplying through by `delta^2`.
pub fn calogero_moser_check(g: &ReflectionGroup, c: &Multiplicity) -> Result<Report> {
    let lap = nabla_laplacian(g, c)?;
    let res = lap.restrict_invariant(g)?;
    let expected = calogero_moser_hamiltonian(g, c);
    let mut rep = Report::new("calogero_moser");
    rep.record(res == expected, || format!("Res|nabla|^2 = {res}, expected {expected}"));
    let two = vec![2; g.hyperplanes.len()];
    let cleared = res.clear_denominators(&two);
    let cleared_expected = expected.clear_denominators(&two);
    let ok = cleared.is_some() && cleared == cleared_expected;
    rep.record(ok, || "identity fails after clearing delta^2".into());
    Ok(rep.with_details(serde_json::json!({ "restriction": res.to_string() })))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeCandidate {
    /// `delta^{sign_conj * k} nabla(sign_c * k) delta^{-sign_conj * k}`.
    pub label: String,
    pub conj_sign: i32,
    pub c_sign: i32,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub candidates: Vec<ProbeCandidate>,
    pub checked: usize,
}

impl ProbeReport {
    pub fn passing(&self) -> Vec<&ProbeCandidate> {
        self.candidates.iter().filter(|c| c.pass).collect()
    }
}

/// Which of `delta_k^{±1} nabla_xi(±k) delta_k^{∓1}` equals `T_xi(k)` on monomials
/// of degree `<= max_degree`, where `delta_k = prod_H alpha_H^{k_H}`.
pub fn conjugation_probe(g: &ReflectionGroup, k: &Multiplicity, max_degree: u32) -> Result<ProbeReport> {
    if !g.is_coxeter() {
        return Err(Error::NotCoxeter);
    }
    let ints = k.as_integers()?;
    let arr = &g.arrangement;
    let exps: Vec<u32> = g.hyperplanes.iter().map(|h| ints[h.orbit][1]).collect();
    let delta_pos = RatFun::new(arr, MPoly::one(g.dim), vec![0; exps.len()]).mul(&RatFun::from_poly(
        arr,
        g.hyperplanes.iter().zip(&exps).fold(MPoly::one(g.dim), |acc, (h, &e)| acc.mul(&h.alpha_poly().pow(e))),
    ));
    let delta_neg = RatFun::new(arr, MPoly::one(g.dim), exps.clone());
    let d = Dunkl::new(g, k);
    let mut candidates = Vec::new();
    let mut checked = 0;
    for conj_sign in [1, -1] {
        for c_sign in [1, -1] {
            let c = k.scaled(&Rat::from_integer(c_sign.into()));
            let (left, right) = if conj_sign == 1 { (&delta_pos, &delta_neg) } else { (&delta_neg, &delta_pos) };
            let mut pass = true;
            checked = 0;
            'outer: for m in all_monomials(g.dim, max_degree) {
                let f = RatFun::from_poly(arr, MPoly::monomial(m.clone()));
                for i in 0..g.dim {
                    let xi = g.basis_vector(i);
                    let nab = nabla_operator(g, &c, &xi)?;
                    let lhs = left.mul(&nab.apply_ratfun(g, &right.mul(&f)));
                    let rhs = RatFun::from_poly(arr, d.apply(&xi, &MPoly::monomial(m.clone()))?);
                    checked += 1;
                    if lhs != rhs {
                        pass = false;
                        break 'outer;
                    }
                }
            }
            let s = |x: i32| if x == 1 { "" } else { "-" };
            candidates.push(ProbeCandidate {
                label: format!("delta^({}k) nabla({}k) delta^({}k)", s(conj_sign), s(c_sign), s(-conj_sign)),
                conj_sign,
                c_sign,
                pass,
            });
        }
    }
    Ok(ProbeReport { candidates, checked })
}
