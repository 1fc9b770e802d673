//! The deformed polynomial de Rham complex `K = C[V] ⊗ Λ V*`: the
//! differential `d(k)`, the Koszul differential, the deformed Euler field
//! `E(k)` and the intertwiner `S(k)` with `d(k) S(k) = S(k) d(0)`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::cyclotomic::CycNum;
use crate::dunkl::Dunkl;
use crate::error::{Error, Result};
use crate::groups::{GroupAlgebraElement, Multiplicity, Poly, ReflectionGroup};
use crate::linalg::Matrix;
use crate::poly::{monomials_of_degree, MPoly, Monomial};
use crate::report::Report;
use crate::scalar::{positive_integer, rat_to_string, Rat};

/// All strictly increasing index tuples of length `l` from `0..n`.
pub fn wedge_indices(n: usize, l: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, l: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == l {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, l, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, l, &mut Vec::new(), &mut out);
    out
}

/// `dx_j ∧ dx_I` as `(sign, sorted index)`, or `None` when `j ∈ I`.
fn wedge_front(j: usize, idx: &[usize]) -> Option<(bool, Vec<usize>)> {
    if idx.contains(&j) {
        return None;
    }
    let pos = idx.iter().filter(|&&i| i < j).count();
    let mut out = idx.to_vec();
    out.insert(pos, j);
    Some((pos % 2 == 1, out))
}

/// An element of `K^•`, stored as `sum_I p_I ⊗ dx_I` over sorted index tuples `I`.
#[derive(Clone, PartialEq, Eq)]
pub struct KForm {
    dim: usize,
    components: BTreeMap<Vec<usize>, Poly>,
}

impl KForm {
    pub fn zero(dim: usize) -> Self {
        KForm { dim, components: BTreeMap::new() }
    }

    /// `p ⊗ 1`.
    pub fn function(p: Poly) -> Self {
        let mut f = KForm::zero(p.nvars());
        f.add_component(Vec::new(), p);
        f
    }

    /// `p ⊗ dx_I`; `idx` need not be sorted, repeated indices give zero.
    pub fn new(p: Poly, idx: &[usize]) -> Self {
        let mut f = KForm::zero(p.nvars());
        let mut sorted = idx.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != idx.len() {
            return f;
        }
        let mut inversions = 0;
        for a in 0..idx.len() {
            for b in a + 1..idx.len() {
                if idx[a] > idx[b] {
                    inversions += 1;
                }
            }
        }
        let p = if inversions % 2 == 1 { p.neg() } else { p };
        f.add_component(sorted, p);
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &Poly)> {
        self.components.iter()
    }

    pub fn component(&self, idx: &[usize]) -> Poly {
        self.components.get(idx).cloned().unwrap_or_else(|| MPoly::zero(self.dim))
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn add_component(&mut self, idx: Vec<usize>, p: Poly) {
        debug_assert!(idx.windows(2).all(|w| w[0] < w[1]));
        let entry = self.components.entry(idx).or_insert_with(|| MPoly::zero(p.nvars()));
        entry.add_assign(&p);
        if entry.is_zero() {
            self.components.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &KForm) -> KForm {
        let mut out = self.clone();
        for (i, p) in &other.components {
            out.add_component(i.clone(), p.clone());
        }
        out
    }

    pub fn sub(&self, other: &KForm) -> KForm {
        self.add(&other.scale(&-CycNum::one()))
    }

    pub fn scale(&self, s: &CycNum) -> KForm {
        if s.is_zero() {
            return KForm::zero(self.dim);
        }
        KForm { dim: self.dim, components: self.components.iter().map(|(i, p)| (i.clone(), p.scale(s))).collect() }
    }

    /// `(l, m)` if every term has form degree `l` and polynomial degree `m`.
    pub fn bidegree(&self) -> Option<(usize, u32)> {
        let mut out = None;
        for (i, p) in &self.components {
            for (m, _) in p.terms() {
                let b = (i.len(), m.degree());
                if *out.get_or_insert(b) != b {
                    return None;
                }
            }
        }
        out
    }

    /// Applies `f` to every polynomial coefficient.
    pub fn map_coefficients(&self, mut f: impl FnMut(&Poly) -> Poly) -> KForm {
        let mut out = KForm::zero(self.dim);
        for (i, p) in &self.components {
            out.add_component(i.clone(), f(p));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.components
                .iter()
                .map(|(i, p)| serde_json::json!({ "wedge": i, "coefficient": p.to_string() }))
                .collect(),
        )
    }
}

impl fmt::Display for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "0");
        }
        for (n, (i, p)) in self.components.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({p})")?;
            if !i.is_empty() {
                let names: Vec<String> = i.iter().map(|j| format!("dx{}", j + 1)).collect();
                write!(f, " {}", names.join("^"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Basis of `K^l_m`: monomial times `dx_I`.
pub fn basis(dim: usize, l: usize, m: u32) -> Vec<KForm> {
    let mut out = Vec::new();
    for idx in wedge_indices(dim, l) {
        for mono in monomials_of_degree(dim, m) {
            out.push(KForm::new(MPoly::monomial(mono), &idx));
        }
    }
    out
}

/// Precomputed data for one `(G, k)`: the elements `a_H(k)` and `z(k)`,
/// and the action of each element on `V*` (coordinates of `w.x_i`).
pub struct DeRham<'a> {
    g: &'a ReflectionGroup,
    a: Vec<GroupAlgebraElement>,
    z: GroupAlgebraElement,
    dual: BTreeMap<usize, Matrix<CycNum>>,
}

impl<'a> DeRham<'a> {
    pub fn new(g: &'a ReflectionGroup, k: &Multiplicity) -> Self {
        let a: Vec<GroupAlgebraElement> = (0..g.hyperplanes.len()).map(|h| g.a_h(h, k)).collect();
        let z = g.z_element(k);
        let mut dual = BTreeMap::new();
        for (&w, _) in &z.coeffs {
            let rows = (0..g.dim)
                .map(|i| g.act(w, &MPoly::var(g.dim, i)).coords(&monomials_of_degree(g.dim, 1)))
                .collect();
            dual.insert(w, Matrix::from_rows(rows));
        }
        DeRham { g, a, z, dual }
    }

    /// `d(k) p = dp + sum_H (a_H(k) p / alpha_H) dalpha_H` as the list of `dx_j`-coefficients.
    pub fn differential_components(&self, p: &Poly) -> Result<Vec<Poly>> {
        let g = self.g;
        let mut comps: Vec<Poly> = (0..g.dim).map(|j| p.derivative(j)).collect();
        for (h, hp) in g.hyperplanes.iter().enumerate() {
            let ap = self.a[h].apply(g, p);
            if ap.is_zero() {
                continue;
            }
            let q = ap.div_linear(&hp.alpha, hp.pivot).ok_or(Error::NotDivisible { hyperplane: h })?;
            for (j, c) in hp.alpha.iter().enumerate() {
                if !c.is_zero() {
                    comps[j].add_assign(&q.scale(c));
                }
            }
        }
        Ok(comps)
    }

    /// `d(k)(p ⊗ w) = d(k)(p) ∧ w`.
    pub fn d(&self, form: &KForm) -> Result<KForm> {
        let mut out = KForm::zero(form.dim);
        for (idx, p) in &form.components {
            for (j, c) in self.differential_components(p)?.into_iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if let Some((neg, new_idx)) = wedge_front(j, idx) {
                    out.add_component(new_idx, if neg { c.neg() } else { c });
                }
            }
        }
        Ok(out)
    }

    /// `w.(p ⊗ dx_I) = (w.p) ⊗ (w.dx_{i_1}) ∧ ... ∧ (w.dx_{i_l})`.
    fn act_diagonal(&self, w: usize, dual: &Matrix<CycNum>, idx: &[usize], p: &Poly) -> KForm {
        let wp = self.g.act(w, p);
        let mut out = KForm::zero(self.g.dim);
        for target in wedge_indices(self.g.dim, idx.len()) {
            let minor =
                Matrix::from_rows(idx.iter().map(|&r| target.iter().map(|&c| dual[(r, c)].clone()).collect()).collect());
            let det = minor.det();
            if !det.is_zero() {
                out.add_component(target, wp.scale(&det));
            }
        }
        out
    }

    /// `E(k) = E(0) + sum_H a_H(k)` with the diagonal action on `C[V] ⊗ Λ V*`.
    pub fn euler(&self, form: &KForm) -> KForm {
        let mut out = KForm::zero(form.dim);
        for (idx, p) in &form.components {
            for (m, c) in p.terms() {
                let weight = CycNum::from_int(idx.len() as i64 + m.degree() as i64);
                out.add_component(idx.clone(), MPoly::term(m.clone(), c.clone() * &weight));
            }
            for (w, c) in &self.z.coeffs {
                out = out.add(&self.act_diagonal(*w, &self.dual[w], idx, p).scale(c));
            }
        }
        out
    }
}

pub fn d_k(g: &ReflectionGroup, k: &Multiplicity, form: &KForm) -> Result<KForm> {
    DeRham::new(g, k).d(form)
}

pub fn euler_k(g: &ReflectionGroup, k: &Multiplicity, form: &KForm) -> KForm {
    DeRham::new(g, k).euler(form)
}

/// `p ⊗ dx_{i_1} ∧ ... ∧ dx_{i_l} ↦ sum_r (-1)^{r+1} x_{i_r} p ⊗ (dx_{i_r} omitted)`.
pub fn koszul(form: &KForm) -> KForm {
    let mut out = KForm::zero(form.dim);
    for (idx, p) in &form.components {
        for r in 0..idx.len() {
            let mut rest = idx.clone();
            let i = rest.remove(r);
            let term = MPoly::var(form.dim, i).mul(p);
            out.add_component(rest, if r % 2 == 1 { term.neg() } else { term });
        }
    }
    out
}

/// `E(k) = ∂ d(k) + d(k) ∂` on a basis of every `K^l_m` with `l + m <= bound`.
pub fn check_homotopy(g: &ReflectionGroup, k: &Multiplicity, bound: u32) -> Result<Report> {
    let dr = DeRham::new(g, k);
    let mut rep = Report::new("homotopy");
    for l in 0..=g.dim.min(bound as usize) {
        for m in 0..=bound - l as u32 {
            for w in basis(g.dim, l, m) {
                let lhs = dr.euler(&w);
                let rhs = koszul(&dr.d(&w)?).add(&dr.d(&koszul(&w))?);
                rep.record(lhs == rhs, || format!("E(k)({w}) = {lhs}, but (∂d + d∂) gives {rhs}"));
            }
        }
    }
    Ok(rep)
}

/// `d(k)^2 = 0` on a basis of every `K^l_m` with `l + m <= bound`, and on
/// `K^0` the `dx_i ∧ dx_j` coefficient of `d(k)^2 f` against
/// `[D_i, D_j] f`, where `D_i` are the Dunkl operators at `-k` (the
/// components of `d(k)` on functions).
pub fn check_d_squared(g: &ReflectionGroup, k: &Multiplicity, bound: u32) -> Result<Report> {
    let dr = DeRham::new(g, k);
    let neg = k.scaled(&-Rat::one());
    let dunkl = Dunkl::new(g, &neg);
    let mut squares = Report::new("d_squared_zero");
    for l in 0..=g.dim.min(bound as usize) {
        for m in 0..=bound - l as u32 {
            for w in basis(g.dim, l, m) {
                let dd = dr.d(&dr.d(&w)?)?;
                squares.record(dd.is_zero(), || format!("d(k)^2({w}) = {dd}"));
            }
        }
    }
    let mut components = Report::new("components_match_dunkl");
    let mut commutators = Report::new("d_squared_matches_commutators");
    for m in 0..=bound {
        for mono in monomials_of_degree(g.dim, m) {
            let f = MPoly::monomial(mono);
            let comps = dr.differential_components(&f)?;
            let first: Vec<Poly> = (0..g.dim).map(|i| dunkl.apply_basis(i, &f)).collect::<Result<_>>()?;
            components.record(comps == first, || format!("d(k)({f}) disagrees with T(-k)"));
            let dd = dr.d(&dr.d(&KForm::function(f.clone()))?)?;
            for i in 0..g.dim {
                for j in i + 1..g.dim {
                    let comm = dunkl.apply_basis(i, &first[j])?.sub(&dunkl.apply_basis(j, &first[i])?);
                    let coeff = dd.component(&[i, j]);
                    commutators.record(coeff == comm, || format!("dx{}^dx{} coefficient of d(k)^2({f})", i + 1, j + 1));
                }
            }
        }
    }
    let mut rep = Report::new("d_squared");
    rep.absorb(&squares);
    rep.absorb(&components);
    rep.absorb(&commutators);
    Ok(rep.with_details(serde_json::json!({
        "d_squared_zero": squares.pass,
        "components_match_dunkl": components.pass,
        "matches_commutators": commutators.pass,
    })))
}

/// The intertwiner `S(k)` on `C[V]_m` for `m <= bound`, extended to `K^•`
/// by `S(p ⊗ w) = S(p) ⊗ w`.
#[derive(Clone, Debug)]
pub struct Intertwiner {
    dim: usize,
    images: BTreeMap<Monomial, Poly>,
    /// Matrix of `S(k)` on `C[V]_m` in the monomial basis (columns are images).
    pub matrices: BTreeMap<u32, Matrix<CycNum>>,
    pub report: Report,
}

impl Intertwiner {
    pub fn apply_poly(&self, p: &Poly) -> Option<Poly> {
        let mut out = MPoly::zero(self.dim);
        for (m, c) in p.terms() {
            out.add_assign(&self.images.get(m)?.scale(c));
        }
        Some(out)
    }

    pub fn apply(&self, form: &KForm) -> Option<KForm> {
        let mut out = KForm::zero(form.dim);
        for (idx, p) in &form.components {
            out.add_component(idx.clone(), self.apply_poly(p)?);
        }
        Some(out)
    }

    pub fn max_degree(&self) -> u32 {
        self.matrices.keys().next_back().copied().unwrap_or(0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mats: serde_json::Map<String, serde_json::Value> = self
            .matrices
            .iter()
            .map(|(m, mat)| {
                let rows: Vec<Vec<serde_json::Value>> =
                    mat.to_rows().iter().map(|r| r.iter().map(CycNum::to_json).collect()).collect();
                (m.to_string(), serde_json::json!(rows))
            })
            .collect();
        serde_json::json!({ "status": "ok", "matrices": mats, "report": self.report.to_json() })
    }
}

/// First eigenvalue `c` of `z(k)` on the regular representation with `-c` a positive integer.
pub fn singular_eigenvalue(g: &ReflectionGroup, k: &Multiplicity) -> Result<Option<Rat>> {
    Ok(g.regular_eigenvalues(k)?.into_iter().map(|(c, _)| c).find(|c| positive_integer(&-c.clone()).is_some()))
}

/// Builds `S(k)` degree by degree from
/// `E(k) S(p) = sum_j x_j S(∂_j p)`, which follows from the homotopy
/// identity and `d(k) S = S d(0)`. Since `E(k)` is invertible on `C[V]_m`
/// for `m >= 1` under the hypothesis, each step has exactly one solution.
/// The result is then checked against all defining conditions.
pub fn intertwiner(g: &ReflectionGroup, k: &Multiplicity, bound: u32) -> Result<Intertwiner> {
    if let Some(c) = singular_eigenvalue(g, k)? {
        return Err(Error::SingularParameter { eigenvalue: rat_to_string(&c) });
    }
    let dr = DeRham::new(g, k);
    let n = g.dim;
    let mut images: BTreeMap<Monomial, Poly> = BTreeMap::new();
    let mut matrices = BTreeMap::new();
    images.insert(Monomial::one(n), MPoly::one(n));
    matrices.insert(0, Matrix::identity(1));
    for m in 1..=bound {
        let monos = monomials_of_degree(n, m);
        let size = monos.len();
        let mut e = Matrix::zeros(size, size);
        for (col, mono) in monos.iter().enumerate() {
            let image = dr.euler(&KForm::function(MPoly::monomial(mono.clone()))).component(&[]);
            for (row, c) in image.coords(&monos).into_iter().enumerate() {
                e[(row, col)] = c;
            }
        }
        let inv = e.inverse().ok_or_else(|| Error::SingularParameter { eigenvalue: format!("-{m}") })?;
        let mut s = Matrix::zeros(size, size);
        for (col, mono) in monos.iter().enumerate() {
            let p = MPoly::monomial(mono.clone());
            let mut rhs = MPoly::zero(n);
            for j in 0..n {
                let dj = p.derivative(j);
                for (dm, c) in dj.terms() {
                    rhs.add_assign(&MPoly::var(n, j).mul(&images[dm]).scale(c));
                }
            }
            let sol = inv.mul_vec(&rhs.coords(&monos));
            for (row, c) in sol.iter().enumerate() {
                s[(row, col)] = c.clone();
            }
            images.insert(mono.clone(), MPoly::from_coords(n, &monos, &sol));
        }
        matrices.insert(m, s);
    }
    let mut out = Intertwiner { dim: n, images, matrices, report: Report::new("intertwiner") };
    out.report = verify_intertwiner(g, &dr, &out)?;
    Ok(out)
}

fn verify_intertwiner(g: &ReflectionGroup, dr: &DeRham<'_>, s: &Intertwiner) -> Result<Report> {
    let n = g.dim;
    let mut rep = Report::new("intertwiner");
    for (m, mat) in &s.matrices {
        rep.record(mat.rank() == mat.rows(), || format!("S(k) is singular on degree {m}"));
    }
    for m in 0..=s.max_degree() {
        for mono in monomials_of_degree(n, m) {
            let p = MPoly::monomial(mono);
            let sp = s.apply_poly(&p).expect("degree within bound");
            // d(k) S(p) = S(d(0) p); by S(p ⊗ w) = S(p) ⊗ w this covers all of K^l_m.
            let lhs = dr.d(&KForm::function(sp.clone()))?;
            let mut rhs = KForm::zero(n);
            for j in 0..n {
                rhs.add_component(vec![j], s.apply_poly(&p.derivative(j)).expect("lower degree"));
            }
            rep.record(lhs == rhs, || format!("d(k)S({p}) = {lhs}, S(d p) = {rhs}"));
            for &gen in &g.generators {
                let a = s.apply_poly(&g.act(gen, &p)).expect("same degree");
                let b = g.act(gen, &sp);
                rep.record(a == b, || format!("S(k) does not commute with generator {gen} on {p}"));
            }
        }
    }
    Ok(rep)
}
