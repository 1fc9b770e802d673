//! Operators in `D(V_reg) ⋊ W` kept in the normal form
//! `sum c(x) d^beta w` (group letters rightmost).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::groups::{Arrangement, GroupAlgebraElement, Poly, ReflectionGroup};
use crate::polyalg::RatFun;
use crate::poly::Monomial;

/// All `mu <= beta` entrywise.
fn sub_indices(beta: &Monomial) -> Vec<Monomial> {
    let mut out = vec![Monomial::one(beta.nvars())];
    for (i, &b) in beta.exps().iter().enumerate() {
        let mut next = Vec::with_capacity(out.len() * (b as usize + 1));
        for m in &out {
            for e in 0..=b {
                let mut nm = m.clone();
                nm.0[i] = e;
                next.push(nm);
            }
        }
        out = next;
    }
    out
}

fn binomial(n: u32, k: u32) -> i64 {
    let mut acc: i64 = 1;
    for i in 0..k as i64 {
        acc = acc * (n as i64 - i) / (i + 1);
    }
    acc
}

/// `d^mu f` for a rational function.
pub fn ratfun_derivative(f: &RatFun, mu: &Monomial) -> RatFun {
    let mut cur = f.clone();
    for (i, &e) in mu.exps().iter().enumerate() {
        for _ in 0..e {
            if cur.is_zero() {
                return cur;
            }
            cur = cur.derivative(i);
        }
    }
    cur
}

/// Leibniz expansion of `d^beta ∘ c` as `sum_mu binom(beta, mu) (d^mu c) d^(beta - mu)`.
fn leibniz(beta: &Monomial, c: &RatFun) -> Vec<(Monomial, RatFun)> {
    let mut cache: BTreeMap<Monomial, RatFun> = BTreeMap::new();
    let mut out = Vec::new();
    for mu in sub_indices(beta) {
        let b: i64 = beta.exps().iter().zip(mu.exps()).map(|(&n, &k)| binomial(n, k)).product();
        // Derivatives are built incrementally from a cached lower index.
        let dmu = match mu.exps().iter().position(|&e| e > 0) {
            None => c.clone(),
            Some(i) => {
                let mut lower = mu.clone();
                lower.0[i] -= 1;
                let base = cache.get(&lower).cloned().unwrap_or_else(|| ratfun_derivative(c, &lower));
                base.derivative(i)
            }
        };
        cache.insert(mu.clone(), dmu.clone());
        if dmu.is_zero() {
            continue;
        }
        let rest = beta.div(&mu).expect("mu <= beta");
        out.push((rest, dmu.scale(&CycNum::from_int(b))));
    }
    out
}

/// Element of `D(V_reg) ⋊ W` in normal form.
#[derive(Clone, PartialEq, Eq)]
pub struct DiffReflOp {
    arr: Arc<Arrangement>,
    terms: BTreeMap<(usize, Monomial), RatFun>,
}

impl DiffReflOp {
    pub fn zero(g: &ReflectionGroup) -> Self {
        DiffReflOp { arr: g.arrangement.clone(), terms: BTreeMap::new() }
    }

    pub fn identity(g: &ReflectionGroup) -> Self {
        Self::group_element(g, 0)
    }

    pub fn group_element(g: &ReflectionGroup, w: usize) -> Self {
        let mut op = Self::zero(g);
        op.add_term(w, Monomial::one(g.dim), RatFun::one(&g.arrangement));
        op
    }

    pub fn group_algebra(g: &ReflectionGroup, a: &GroupAlgebraElement) -> Self {
        let mut op = Self::zero(g);
        for (&w, c) in &a.coeffs {
            op.add_term(w, Monomial::one(g.dim), RatFun::constant(&g.arrangement, c.clone()));
        }
        op
    }

    /// Multiplication by a rational function.
    pub fn multiplication(g: &ReflectionGroup, f: RatFun) -> Self {
        let mut op = Self::zero(g);
        op.add_term(0, Monomial::one(g.dim), f);
        op
    }

    pub fn multiplication_poly(g: &ReflectionGroup, f: &Poly) -> Self {
        Self::multiplication(g, RatFun::from_poly(&g.arrangement, f.clone()))
    }

    /// `d_xi = sum_i xi_i d/dx_i`.
    pub fn derivative(g: &ReflectionGroup, xi: &[CycNum]) -> Self {
        let mut op = Self::zero(g);
        for (i, c) in xi.iter().enumerate() {
            op.add_term(0, Monomial::var(g.dim, i), RatFun::constant(&g.arrangement, c.clone()));
        }
        op
    }

    /// Constant-coefficient operator `P(d)`.
    pub fn constant_coefficient(g: &ReflectionGroup, p: &Poly) -> Self {
        let mut op = Self::zero(g);
        for (m, c) in p.terms() {
            op.add_term(0, m.clone(), RatFun::constant(&g.arrangement, c.clone()));
        }
        op
    }

    pub fn add_term(&mut self, w: usize, beta: Monomial, c: RatFun) {
        if c.is_zero() {
            return;
        }
        let key = (w, beta);
        let sum = match self.terms.remove(&key) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, Monomial), &RatFun)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `d^beta w`.
    pub fn coeff(&self, w: usize, beta: &Monomial) -> RatFun {
        self.terms.get(&(w, beta.clone())).cloned().unwrap_or_else(|| RatFun::zero(&self.arr))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((w, b), c) in &other.terms {
            out.add_term(*w, b.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-CycNum::one())
    }

    pub fn scale(&self, s: &CycNum) -> Self {
        let mut out = DiffReflOp { arr: self.arr.clone(), terms: BTreeMap::new() };
        if s.is_zero() {
            return out;
        }
        for (k, c) in &self.terms {
            out.terms.insert(k.clone(), c.scale(s));
        }
        out
    }

    /// Product in normal form:
    /// `(A d^b u)(B d^c v) = A d^b (u.B) (u d^c u^-1) uv`.
    pub fn mul(&self, other: &Self, g: &ReflectionGroup) -> Self {
        let mut out = DiffReflOp { arr: self.arr.clone(), terms: BTreeMap::new() };
        let others: Vec<(&(usize, Monomial), &RatFun)> = other.terms.iter().collect();
        // Per left group letter u: (u.B_j, u d^gamma_j u^-1) for every right term j.
        let mut moved: BTreeMap<usize, Vec<(RatFun, Poly)>> = BTreeMap::new();
        for ((u, beta), a) in &self.terms {
            let images = moved.entry(*u).or_insert_with(|| {
                others.iter().map(|((_, gamma), b)| (b.act(g, *u), g.act_on_derivatives(*u, gamma))).collect()
            });
            for (((v, _), _), (ub, dgamma)) in others.iter().zip(images.iter()) {
                let uv = g.mul(*u, *v);
                for (rest, dc) in leibniz(beta, ub) {
                    let coef = a.mul(&dc);
                    for (m, c) in dgamma.terms() {
                        out.add_term(uv, rest.mul(m), coef.scale(c));
                    }
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self, g: &ReflectionGroup) -> Self {
        self.mul(other, g).sub(&other.mul(self, g))
    }

    /// `w op w^-1`.
    pub fn conjugate(&self, g: &ReflectionGroup, w: usize) -> Self {
        let left = Self::group_element(g, w);
        let right = Self::group_element(g, g.inverse(w));
        left.mul(self, g).mul(&right, g)
    }

    /// Commutes with every generator of `W`.
    pub fn is_equivariant(&self, g: &ReflectionGroup) -> bool {
        g.generators.iter().all(|&s| self.conjugate(g, s) == *self)
    }

    pub fn apply_ratfun(&self, g: &ReflectionGroup, f: &RatFun) -> RatFun {
        let mut out = RatFun::zero(&self.arr);
        let mut acted: BTreeMap<usize, RatFun> = BTreeMap::new();
        for ((w, beta), c) in &self.terms {
            let wf = acted.entry(*w).or_insert_with(|| f.act(g, *w));
            out = out.add(&c.mul(&ratfun_derivative(wf, beta)));
        }
        out
    }

    pub fn apply(&self, g: &ReflectionGroup, f: &Poly) -> RatFun {
        let mut out = RatFun::zero(&self.arr);
        let mut acted: BTreeMap<usize, Poly> = BTreeMap::new();
        for ((w, beta), c) in &self.terms {
            let wf = acted.entry(*w).or_insert_with(|| g.act(*w, f));
            let d = wf.apply_derivative_monomial(beta);
            if !d.is_zero() {
                out = out.add(&c.mul_poly(&d));
            }
        }
        out
    }

    /// Drops the group letters: `sum_w A_w`, the operator induced on
    /// invariants. Errors unless the operator commutes with `W`.
    pub fn restrict_invariant(&self, g: &ReflectionGroup) -> Result<CMOperator> {
        if !self.is_equivariant(g) {
            return Err(Error::NotEquivariant);
        }
        Ok(self.restrict_unchecked())
    }

    pub fn restrict_unchecked(&self) -> CMOperator {
        let mut out = CMOperator { arr: self.arr.clone(), terms: BTreeMap::new() };
        for ((_, beta), c) in &self.terms {
            out.add_term(beta.clone(), c.clone());
        }
        out
    }

    /// Whether every term has trivial group part.
    pub fn is_differential(&self) -> bool {
        self.terms.keys().all(|(w, _)| *w == 0)
    }

    pub fn to_json(&self, g: &ReflectionGroup) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|((w, beta), c)| {
                serde_json::json!({
                    "element": w,
                    "word": element_label(g, *w),
                    "derivative": beta.exps(),
                    "coeff": c.to_string(),
                })
            })
            .collect();
        serde_json::Value::Array(terms)
    }
}

fn element_label(g: &ReflectionGroup, w: usize) -> String {
    let mut word = Vec::new();
    let mut cur = w;
    while let Some((s, prev)) = g.word_step(cur) {
        word.push(format!("s{}", s + 1));
        cur = prev;
    }
    if word.is_empty() {
        "1".into()
    } else {
        word.join("*")
    }
}

fn derivative_label(beta: &Monomial) -> String {
    let n = beta.nvars();
    beta.exps()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            let v = if n == 1 { "d".to_string() } else { format!("d{}", i + 1) };
            if e == 1 {
                v
            } else {
                format!("{v}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

fn term_label(c: &RatFun, beta: &Monomial, w: Option<usize>) -> String {
    let mut parts = vec![format!("({c})")];
    let d = derivative_label(beta);
    if !d.is_empty() {
        parts.push(d);
    }
    if let Some(w) = w.filter(|&w| w != 0) {
        parts.push(format!("[w{w}]"));
    }
    parts.join("*")
}

impl fmt::Display for DiffReflOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|((w, b), c)| term_label(c, b, Some(*w))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for DiffReflOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Differential operator on `V_reg` with rational coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct CMOperator {
    arr: Arc<Arrangement>,
    terms: BTreeMap<Monomial, RatFun>,
}

impl CMOperator {
    pub fn zero(arr: &Arc<Arrangement>) -> Self {
        CMOperator { arr: arr.clone(), terms: BTreeMap::new() }
    }

    pub fn from_terms(arr: &Arc<Arrangement>, terms: impl IntoIterator<Item = (Monomial, RatFun)>) -> Self {
        let mut op = Self::zero(arr);
        for (m, c) in terms {
            op.add_term(m, c);
        }
        op
    }

    pub fn add_term(&mut self, beta: Monomial, c: RatFun) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&beta) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(beta, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &RatFun)> {
        self.terms.iter()
    }

    pub fn coeff(&self, beta: &Monomial) -> RatFun {
        self.terms.get(beta).cloned().unwrap_or_else(|| RatFun::zero(&self.arr))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest derivative order.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.neg());
        }
        out
    }

    pub fn compose(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.arr);
        for (beta, a) in &self.terms {
            for (gamma, b) in &other.terms {
                for (rest, dc) in leibniz(beta, b) {
                    out.add_term(rest.mul(gamma), a.mul(&dc));
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.compose(other).sub(&other.compose(self))
    }

    pub fn apply_ratfun(&self, f: &RatFun) -> RatFun {
        let mut out = RatFun::zero(&self.arr);
        for (beta, c) in &self.terms {
            out = out.add(&c.mul(&ratfun_derivative(f, beta)));
        }
        out
    }

    pub fn apply(&self, f: &Poly) -> RatFun {
        let mut out = RatFun::zero(&self.arr);
        for (beta, c) in &self.terms {
            let d = f.apply_derivative_monomial(beta);
            if !d.is_zero() {
                out = out.add(&c.mul_poly(&d));
            }
        }
        out
    }

    /// As an element of `D(V_reg) ⋊ W` with trivial group part.
    pub fn to_diffrefl(&self, g: &ReflectionGroup) -> DiffReflOp {
        let mut op = DiffReflOp::zero(g);
        for (beta, c) in &self.terms {
            op.add_term(0, beta.clone(), c.clone());
        }
        op
    }

    /// Fixed under conjugation by every generator of `W`.
    pub fn is_invariant(&self, g: &ReflectionGroup) -> bool {
        self.to_diffrefl(g).is_equivariant(g)
    }

    /// Coefficients multiplied through by `prod alpha_H^{e[H]}`.
    pub fn clear_denominators(&self, e: &[u32]) -> Option<BTreeMap<Monomial, Poly>> {
        self.terms.iter().map(|(m, c)| c.clear_denominator(e).map(|p| (m.clone(), p))).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(beta, c)| serde_json::json!({ "derivative": beta.exps(), "coeff": c.to_string() }))
            .collect();
        serde_json::Value::Array(terms)
    }
}

impl fmt::Display for CMOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().rev().map(|(b, c)| term_label(c, b, None)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for CMOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Family;

    #[test]
    fn reflection_moves_past_derivative() {
        let g = Family::Cyclic { n: 2 }.build(10).unwrap();
        let s = g.hyperplanes[0].distinguished;
        let sop = DiffReflOp::group_element(&g, s);
        let d = DiffReflOp::derivative(&g, &[CycNum::one()]);
        assert_eq!(sop.mul(&d, &g), d.mul(&sop, &g).neg());
    }

    #[test]
    fn identity_is_neutral() {
        let g = Family::Symmetric { n: 3 }.build(10).unwrap();
        let d = DiffReflOp::derivative(&g, &g.basis_vector(0));
        let x = DiffReflOp::multiplication_poly(&g, &crate::poly::MPoly::var(3, 1));
        let op = d.mul(&x, &g).add(&DiffReflOp::group_element(&g, 3));
        let id = DiffReflOp::identity(&g);
        assert_eq!(op.mul(&id, &g), op);
        assert_eq!(id.mul(&op, &g), op);
    }

    #[test]
    fn product_matches_composition() {
        let g = Family::Symmetric { n: 3 }.build(10).unwrap();
        let a = DiffReflOp::derivative(&g, &g.basis_vector(0))
            .mul(&DiffReflOp::multiplication(&g, RatFun::alpha_pow(&g.arrangement, 1, -1)), &g)
            .add(&DiffReflOp::group_element(&g, 2));
        let b = DiffReflOp::group_element(&g, 4)
            .mul(&DiffReflOp::derivative(&g, &g.basis_vector(2)), &g)
            .mul(&DiffReflOp::derivative(&g, &g.basis_vector(1)), &g);
        let ab = a.mul(&b, &g);
        let f = crate::parse::parse_poly("x1^3*x2 - 2*x2*x3^2 + x1*x2*x3", 3, 2).unwrap();
        let lhs = ab.apply(&g, &f);
        let rhs = a.apply_ratfun(&g, &b.apply(&g, &f));
        assert_eq!(lhs, rhs);
    }
}
