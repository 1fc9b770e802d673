//! Dunkl operators `T_xi(k)` and `nabla_xi(c)`, the operator calculus of
//! `D(V_reg) ⋊ W`, the Cherednik relations and Calogero–Moser operators.

mod checks;
mod op;

pub use checks::{
    calogero_moser_check, check_cherednik_relations, check_commutativity, check_equivariance, cm_commutator,
    conjugation_probe, ProbeCandidate, ProbeReport,
};
pub use op::{ratfun_derivative, CMOperator, DiffReflOp};

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::groups::{GroupAlgebraElement, Multiplicity, Poly, ReflectionGroup};
use crate::polyalg::RatFun;
use crate::poly::{MPoly, Monomial};

/// Dunkl operators of a group at a fixed multiplicity.
#[derive(Clone, Debug)]
pub struct Dunkl<'a> {
    pub g: &'a ReflectionGroup,
    pub k: Multiplicity,
    /// `a_H(k)` per hyperplane.
    a: Vec<GroupAlgebraElement>,
}

impl<'a> Dunkl<'a> {
    pub fn new(g: &'a ReflectionGroup, k: &Multiplicity) -> Self {
        let a = (0..g.hyperplanes.len()).map(|h| g.a_h(h, k)).collect();
        Dunkl { g, k: k.clone(), a }
    }

    pub fn a_h(&self, h: usize) -> &GroupAlgebraElement {
        &self.a[h]
    }

    /// `(a_H(k) f) / alpha_H`, an exact polynomial quotient.
    pub fn reflection_quotient(&self, h: usize, f: &Poly) -> Result<Poly> {
        let af = self.a[h].apply(self.g, f);
        if af.is_zero() {
            return Ok(af);
        }
        let hp = &self.g.hyperplanes[h];
        af.div_linear(&hp.alpha, hp.pivot).ok_or(Error::NotDivisible { hyperplane: h })
    }

    /// `T_xi(k) f = d_xi f - sum_H alpha_H(xi) (a_H(k) f) / alpha_H`.
    pub fn apply(&self, xi: &[CycNum], f: &Poly) -> Result<Poly> {
        let mut out = f.directional_derivative(xi);
        for (h, hp) in self.g.hyperplanes.iter().enumerate() {
            let c = hp.eval(xi);
            if c.is_zero() || self.a[h].is_zero() {
                continue;
            }
            out = out.sub(&self.reflection_quotient(h, f)?.scale(&c));
        }
        Ok(out)
    }

    /// `T_i = T_{e_i}`.
    pub fn apply_basis(&self, i: usize, f: &Poly) -> Result<Poly> {
        let mut out = f.derivative(i);
        for (h, hp) in self.g.hyperplanes.iter().enumerate() {
            let c = &hp.alpha[i];
            if c.is_zero() || self.a[h].is_zero() {
                continue;
            }
            out = out.sub(&self.reflection_quotient(h, f)?.scale(c));
        }
        Ok(out)
    }

    /// `P(T) f` for a polynomial `P` in the dual variables.
    pub fn apply_polynomial(&self, p: &Poly, f: &Poly) -> Result<Poly> {
        let mut cache: BTreeMap<Monomial, Poly> = BTreeMap::new();
        cache.insert(Monomial::one(self.g.dim), f.clone());
        let mut out = MPoly::zero(self.g.dim);
        for (m, c) in p.terms() {
            let v = self.apply_monomial(m, &mut cache)?;
            out.add_assign(&v.scale(c));
        }
        Ok(out)
    }

    fn apply_monomial(&self, m: &Monomial, cache: &mut BTreeMap<Monomial, Poly>) -> Result<Poly> {
        if let Some(v) = cache.get(m) {
            return Ok(v.clone());
        }
        // T^m f = T_i (T^(m - e_i) f) with i the last variable present.
        let i = m.exps().iter().rposition(|&e| e > 0).expect("nonconstant monomial");
        let mut lower = m.clone();
        lower.0[i] -= 1;
        let inner = self.apply_monomial(&lower, cache)?;
        let v = self.apply_basis(i, &inner)?;
        cache.insert(m.clone(), v.clone());
        Ok(v)
    }

    /// `T_xi(k)` as an element of `D(V_reg) ⋊ W`.
    pub fn operator(&self, xi: &[CycNum]) -> DiffReflOp {
        let g = self.g;
        let mut op = DiffReflOp::derivative(g, xi);
        for (h, hp) in g.hyperplanes.iter().enumerate() {
            let c = hp.eval(xi);
            if c.is_zero() {
                continue;
            }
            let inv = RatFun::alpha_pow(&g.arrangement, h, -1).scale(&-c);
            for (&w, a) in &self.a[h].coeffs {
                op.add_term(w, Monomial::one(g.dim), inv.scale(a));
            }
        }
        op
    }

    pub fn operator_basis(&self, i: usize) -> DiffReflOp {
        self.operator(&self.g.basis_vector(i))
    }

    /// `P(T_1, ..., T_n)`, multiplying the `T_i` in increasing index order.
    pub fn polynomial_operator(&self, p: &Poly) -> DiffReflOp {
        let g = self.g;
        let ts: Vec<DiffReflOp> = (0..g.dim).map(|i| self.operator_basis(i)).collect();
        let mut cache: BTreeMap<Monomial, DiffReflOp> = BTreeMap::new();
        cache.insert(Monomial::one(g.dim), DiffReflOp::identity(g));
        let mut out = DiffReflOp::zero(g);
        let mut monos: Vec<&Monomial> = p.terms().map(|(m, _)| m).collect();
        monos.sort();
        for m in monos {
            let op = power_op(g, &ts, m, &mut cache);
            out = out.add(&op.scale(&p.coeff(m)));
        }
        out
    }

    /// `L_P = Res(P(T))` for a `W`-invariant `P`.
    pub fn cm_operator(&self, p: &Poly) -> Result<CMOperator> {
        if !self.g.is_invariant(p) {
            return Err(Error::NotInvariant);
        }
        self.polynomial_operator(p).restrict_invariant(self.g)
    }
}

fn power_op(g: &ReflectionGroup, ts: &[DiffReflOp], m: &Monomial, cache: &mut BTreeMap<Monomial, DiffReflOp>) -> DiffReflOp {
    if let Some(v) = cache.get(m) {
        return v.clone();
    }
    // T^m = T^(m - e_i) T_i with i the last variable present.
    let i = m.exps().iter().rposition(|&e| e > 0).expect("nonconstant monomial");
    let mut lower = m.clone();
    lower.0[i] -= 1;
    let v = power_op(g, ts, &lower, cache).mul(&ts[i], g);
    cache.insert(m.clone(), v.clone());
    v
}

/// `T_xi(k)` as an operator.
pub fn dunkl_t(g: &ReflectionGroup, k: &Multiplicity, xi: &[CycNum]) -> DiffReflOp {
    Dunkl::new(g, k).operator(xi)
}

/// `T_xi(k) f` on a polynomial.
pub fn dunkl_apply(g: &ReflectionGroup, k: &Multiplicity, xi: &[CycNum], f: &Poly) -> Result<Poly> {
    Dunkl::new(g, k).apply(xi, f)
}

/// Coxeter-form operator `nabla_xi(c) = d_xi + sum_H c_H alpha_H(xi)/alpha_H s_H`.
pub fn nabla_operator(g: &ReflectionGroup, c: &Multiplicity, xi: &[CycNum]) -> Result<DiffReflOp> {
    if !g.is_coxeter() {
        return Err(Error::NotCoxeter);
    }
    let mut op = DiffReflOp::derivative(g, xi);
    for (h, hp) in g.hyperplanes.iter().enumerate() {
        let a = hp.eval(xi);
        let ch = c.for_hyperplane(g, h, 1);
        if a.is_zero() || ch.is_zero() {
            continue;
        }
        let coef = RatFun::alpha_pow(&g.arrangement, h, -1).scale(&(a * &CycNum::from_rational(ch.clone())));
        op.add_term(hp.distinguished, Monomial::one(g.dim), coef);
    }
    Ok(op)
}

/// `nabla_xi(c) f` on a rational function.
pub fn dunkl_nabla(g: &ReflectionGroup, c: &Multiplicity, xi: &[CycNum], f: &RatFun) -> Result<RatFun> {
    Ok(nabla_operator(g, c, xi)?.apply_ratfun(g, f))
}

/// `sum_i nabla_{e_i}(c)^2` in an orthonormal basis.
pub fn nabla_laplacian(g: &ReflectionGroup, c: &Multiplicity) -> Result<DiffReflOp> {
    let mut out = DiffReflOp::zero(g);
    for i in 0..g.dim {
        let n = nabla_operator(g, c, &g.basis_vector(i))?;
        out = out.add(&n.mul(&n, g));
    }
    Ok(out)
}

/// `Delta - sum_H c_H (c_H + 1) (alpha, alpha) / alpha_H^2`.
pub fn calogero_moser_hamiltonian(g: &ReflectionGroup, c: &Multiplicity) -> CMOperator {
    let arr = &g.arrangement;
    let mut op = CMOperator::zero(arr);
    for i in 0..g.dim {
        let mut m = Monomial::one(g.dim);
        m.0[i] = 2;
        op.add_term(m, RatFun::one(arr));
    }
    for (h, hp) in g.hyperplanes.iter().enumerate() {
        let ch = CycNum::from_rational(c.for_hyperplane(g, h, 1).clone());
        let norm = hp.alpha.iter().fold(CycNum::zero(), |acc, a| acc + &(a.clone() * &a.conjugate()));
        let coef = ch.clone() * &(ch + &CycNum::one()) * &norm;
        op.add_term(Monomial::one(g.dim), RatFun::alpha_pow(arr, h, -2).scale(&-coef));
    }
    op
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Family;
    use crate::scalar::{rat, rat_int};

    fn x1() -> Poly {
        MPoly::var(1, 0)
    }

    #[test]
    fn z2_dunkl_values() {
        let g = Family::Cyclic { n: 2 }.build(10).unwrap();
        let k = Multiplicity::uniform(&g, rat(3, 7));
        let d = Dunkl::new(&g, &k);
        let one = [CycNum::one()];
        let kk = CycNum::from_rational(rat(3, 7));
        assert_eq!(d.apply(&one, &x1()).unwrap(), MPoly::constant(1, CycNum::one() - &(kk.clone() * &CycNum::from_int(2))));
        assert_eq!(d.apply(&one, &x1().pow(2)).unwrap(), x1().scale(&CycNum::from_int(2)));
        let expected = x1().pow(2).scale(&(CycNum::from_int(3) - &(kk * &CycNum::from_int(2))));
        assert_eq!(d.apply(&one, &x1().pow(3)).unwrap(), expected);
    }

    #[test]
    fn z2_operator_form() {
        let g = Family::Cyclic { n: 2 }.build(10).unwrap();
        let k = Multiplicity::uniform(&g, rat_int(2));
        let t = dunkl_t(&g, &k, &[CycNum::one()]);
        let s = g.hyperplanes[0].distinguished;
        // d/dx - (k/x)(1 - s)
        let kx = RatFun::alpha_pow(&g.arrangement, 0, -1).scale(&CycNum::from_int(2));
        let mut expected = DiffReflOp::derivative(&g, &[CycNum::one()]);
        expected.add_term(0, Monomial::one(1), kx.neg());
        expected.add_term(s, Monomial::one(1), kx);
        assert_eq!(t, expected);
    }

    #[test]
    fn z2_t_squared_normal_form() {
        let g = Family::Cyclic { n: 2 }.build(10).unwrap();
        let k = Multiplicity::uniform(&g, rat(5, 2));
        let t = dunkl_t(&g, &k, &[CycNum::one()]);
        let t2 = t.mul(&t, &g);
        let arr = &g.arrangement;
        let kk = CycNum::from_rational(rat(5, 2));
        let s = g.hyperplanes[0].distinguished;
        let mut expected = DiffReflOp::zero(&g);
        expected.add_term(0, Monomial::from_exps(&[2]), RatFun::one(arr));
        expected.add_term(0, Monomial::from_exps(&[1]), RatFun::alpha_pow(arr, 0, -1).scale(&(kk.clone() * &CycNum::from_int(-2))));
        expected.add_term(0, Monomial::one(1), RatFun::alpha_pow(arr, 0, -2).scale(&kk));
        expected.add_term(s, Monomial::one(1), RatFun::alpha_pow(arr, 0, -2).scale(&-kk.clone()));
        assert_eq!(t2, expected);
        let res = t2.restrict_invariant(&g).unwrap();
        let mut l = CMOperator::zero(arr);
        l.add_term(Monomial::from_exps(&[2]), RatFun::one(arr));
        l.add_term(Monomial::from_exps(&[1]), RatFun::alpha_pow(arr, 0, -1).scale(&(kk * &CycNum::from_int(-2))));
        assert_eq!(res, l);
    }

    #[test]
    fn cyclic3_operator_expansion() {
        let g = Family::Cyclic { n: 3 }.build(10).unwrap();
        let k = Multiplicity::new(&g, vec![vec![rat_int(0), rat(1, 2), rat(2, 3)]]).unwrap();
        let t = dunkl_t(&g, &k, &[CycNum::one()]);
        let inv = RatFun::alpha_pow(&g.arrangement, 0, -1);
        let e1 = g.idempotent(0, 1).scale(&CycNum::from_rational(rat(3, 2)));
        let e2 = g.idempotent(0, 2).scale(&CycNum::from_int(2));
        let a = e1.add(&e2);
        let mut expected = DiffReflOp::derivative(&g, &[CycNum::one()]);
        for (&w, c) in &a.coeffs {
            expected.add_term(w, Monomial::one(1), inv.scale(&-c.clone()));
        }
        assert_eq!(t, expected);
        // T(x) = 1 - 3 k_2
        let d = Dunkl::new(&g, &k);
        assert_eq!(d.apply(&[CycNum::one()], &x1()).unwrap(), MPoly::constant(1, CycNum::from_int(-1)));
    }

    #[test]
    fn operator_and_polynomial_paths_agree() {
        let g = Family::G { m: 3, p: 1, n: 2 }.build(100).unwrap();
        let k = Multiplicity::new(&g, vec![vec![rat_int(0), rat(1, 3)], vec![rat_int(0), rat_int(1), rat(-1, 2)]])
            .or_else(|_| Multiplicity::new(&g, vec![vec![rat_int(0), rat_int(1), rat(-1, 2)], vec![rat_int(0), rat(1, 3)]]))
            .unwrap();
        let d = Dunkl::new(&g, &k);
        let f = crate::parse::parse_poly("x1^4*x2 - 2*x1*x2^2 + z3*x2^3", 2, g.conductor).unwrap();
        for i in 0..2 {
            let via_op = d.operator_basis(i).apply(&g, &f);
            assert_eq!(via_op.to_poly().unwrap(), d.apply_basis(i, &f).unwrap());
        }
    }

    #[test]
    fn nabla_rank_one() {
        let g = Family::Cyclic { n: 2 }.build(10).unwrap();
        let c = Multiplicity::uniform(&g, rat(2, 5));
        let arr = &g.arrangement;
        let x2 = RatFun::from_poly(arr, x1().pow(2));
        let one = [CycNum::one()];
        let once = dunkl_nabla(&g, &c, &one, &x2).unwrap();
        let twice = dunkl_nabla(&g, &c, &one, &once).unwrap();
        let cc = CycNum::from_rational(rat(2, 5));
        let expected = CycNum::from_int(2) - &(cc.clone() * &(cc + &CycNum::one()));
        assert_eq!(twice, RatFun::constant(arr, expected));
        let s3 = Family::G { m: 3, p: 1, n: 1 }.build(10).unwrap();
        assert_eq!(nabla_operator(&s3, &Multiplicity::zero(&s3), &one).unwrap_err(), Error::NotCoxeter);
    }
}
