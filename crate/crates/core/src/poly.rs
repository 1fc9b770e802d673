//! Sparse multivariate polynomials over an exact field.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use crate::scalar::{Field, Rat};

/// Exponent vector, one entry per variable.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub SmallVec<[u32; 4]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn from_exps(e: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(e))
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<SmallVec<_>>>()
            .map(Monomial)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.as_slice().cmp(other.0.as_slice()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

/// All exponent vectors of total degree `d` in `nvars` variables, in
/// lexicographically decreasing order (`x1^d` first).
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    fn rec(nvars: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if cur.len() + 1 == nvars {
            cur.push(left);
            out.push(Monomial::from_exps(cur));
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            rec(nvars, left - e, cur, out);
            cur.pop();
        }
    }
    if nvars == 0 {
        return if d == 0 { vec![Monomial::one(0)] } else { vec![] };
    }
    let mut out = Vec::new();
    rec(nvars, d, &mut Vec::new(), &mut out);
    out
}

/// Number of monomials of degree `d` in `n` variables.
pub fn count_monomials(n: usize, d: u32) -> usize {
    if n == 0 {
        return usize::from(d == 0);
    }
    // binomial(d + n - 1, n - 1)
    let mut acc: u128 = 1;
    for i in 1..n as u128 {
        acc = acc * (d as u128 + i) / i;
    }
    acc as usize
}

/// Sparse polynomial in a fixed number of variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly<F> {
    nvars: usize,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Field> MPoly<F> {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, F::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::term(Monomial::var(nvars, i), F::one())
    }

    pub fn term(m: Monomial, c: F) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { nvars, terms }
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, F::one())
    }

    /// Linear form `sum_j coeffs[j] x_j`.
    pub fn linear(coeffs: &[F]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (j, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(n, j), c.clone());
        }
        p
    }

    pub fn from_terms(nvars: usize, it: impl IntoIterator<Item = (Monomial, F)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, F)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: F) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).min()
    }

    pub fn is_homogeneous(&self) -> bool {
        match (self.min_degree(), self.degree()) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        }
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn constant_term(&self) -> F {
        self.coeff(&Monomial::one(self.nvars))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }

    pub fn scale(&self, s: &F) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), c.clone() * s)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.clone() * c2);
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone() * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Partial derivative in variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut nm = m.clone();
            nm.0[i] = e - 1;
            out.add_term(nm, c.clone() * &F::from_i64(e as i64));
        }
        out
    }

    /// Directional derivative `sum_i xi[i] d/dx_i`.
    pub fn directional_derivative(&self, xi: &[F]) -> Self {
        let mut out = Self::zero(self.nvars);
        for (i, c) in xi.iter().enumerate() {
            if !c.is_zero() {
                out.add_assign(&self.derivative(i).scale(c));
            }
        }
        out
    }

    /// Applies the constant-coefficient operator `prod_i d_i^{a_i}`.
    pub fn apply_derivative_monomial(&self, a: &Monomial) -> Self {
        let mut out = Self::zero(self.nvars);
        'terms: for (m, c) in &self.terms {
            let mut coef = c.clone();
            let mut nm = m.clone();
            for i in 0..self.nvars {
                let (e, k) = (m.0[i], a.0[i]);
                if k > e {
                    continue 'terms;
                }
                let mut f: i64 = 1;
                for t in 0..k {
                    f *= (e - t) as i64;
                }
                if f != 1 {
                    coef = coef * &F::from_i64(f);
                }
                nm.0[i] = e - k;
            }
            out.add_term(nm, coef);
        }
        out
    }

    /// Substitutes `x_j -> images[j]` (all images over the same variables).
    pub fn substitute(&self, images: &[MPoly<F>]) -> MPoly<F> {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map_or(self.nvars, |p| p.nvars);
        let mut cache: Vec<Vec<MPoly<F>>> = images.iter().map(|p| vec![MPoly::one(target), p.clone()]).collect();
        let mut out = MPoly::zero(target);
        for (m, c) in &self.terms {
            let mut t = MPoly::constant(target, c.clone());
            for (j, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[j].len() <= e as usize {
                    let next = cache[j].last().unwrap().mul(&images[j]);
                    cache[j].push(next);
                }
                t = t.mul(&cache[j][e as usize]);
            }
            out.add_assign(&t);
        }
        out
    }

    /// Evaluation at a point.
    pub fn eval(&self, point: &[F]) -> F {
        let mut acc = F::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (j, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = t * &point[j];
                }
            }
            acc = acc + &t;
        }
        acc
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> MPoly<G> {
        MPoly::from_terms(self.nvars, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Exact division by a linear form `alpha` whose coefficient at `pivot`
    /// is one. Returns quotient and remainder; the remainder does not
    /// involve the pivot variable.
    pub fn div_rem_linear(&self, alpha: &[F], pivot: usize) -> (Self, Self) {
        debug_assert!(alpha[pivot].is_one());
        // Group by the exponent of the pivot variable: f = sum_e c_e x_p^e.
        let n = self.nvars;
        let mut by_exp: BTreeMap<u32, MPoly<F>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[pivot];
            let mut rest = m.clone();
            rest.0[pivot] = 0;
            by_exp.entry(e).or_insert_with(|| MPoly::zero(n)).add_term(rest, c.clone());
        }
        let Some(&top) = by_exp.keys().next_back() else {
            return (Self::zero(n), Self::zero(n));
        };
        if top == 0 {
            return (Self::zero(n), self.clone());
        }
        // alpha = x_p + r, synthetic division by (x_p - (-r)).
        let mut r = MPoly::zero(n);
        for (j, a) in alpha.iter().enumerate() {
            if j != pivot && !a.is_zero() {
                r.add_term(Monomial::var(n, j), a.clone());
            }
        }
        let mut quotient = MPoly::zero(n);
        let mut carry = MPoly::zero(n);
        for e in (0..=top).rev() {
            let ce = by_exp.remove(&e).unwrap_or_else(|| MPoly::zero(n));
            let q = ce.sub(&r.mul(&carry));
            if e == 0 {
                return (quotient, q);
            }
            // q is the coefficient of x_p^(e-1) in the quotient.
            let mut xp = Monomial::one(n);
            xp.0[pivot] = e - 1;
            quotient.add_assign(&q.mul_monomial(&xp, &F::one()));
            carry = q;
        }
        unreachable!()
    }

    /// Exact quotient by a linear form, `None` if not divisible.
    pub fn div_linear(&self, alpha: &[F], pivot: usize) -> Option<Self> {
        let (q, r) = self.div_rem_linear(alpha, pivot);
        r.is_zero().then_some(q)
    }

    /// Largest `m` with `alpha^m | self`; `None` (infinity) for zero.
    pub fn order_along(&self, alpha: &[F], pivot: usize) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let mut cur = self.clone();
        let mut m = 0;
        while let Some(q) = cur.div_linear(alpha, pivot) {
            cur = q;
            m += 1;
        }
        Some(m)
    }

    /// Coefficient vector in the given monomial basis.
    pub fn coords(&self, basis: &[Monomial]) -> Vec<F> {
        basis.iter().map(|m| self.coeff(m)).collect()
    }

    pub fn from_coords(nvars: usize, basis: &[Monomial], v: &[F]) -> Self {
        Self::from_terms(nvars, basis.iter().cloned().zip(v.iter().cloned()))
    }

    /// Pretty form using variable names `prefix1, prefix2, ...`.
    pub fn to_string_with(&self, prefix: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(j, &e)| {
                    let v = if self.nvars == 1 && prefix == "x" { "x".to_string() } else { format!("{prefix}{}", j + 1) };
                    if e == 1 {
                        v
                    } else {
                        format!("{v}^{e}")
                    }
                })
                .collect();
            let (neg, cstr) = coeff_text(c);
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match (cstr.as_deref(), mono.is_empty()) {
                (None, true) => out.push('1'),
                (None, false) => out.push_str(&mono.join("*")),
                (Some(s), true) => out.push_str(s),
                (Some(s), false) => {
                    out.push_str(s);
                    out.push('*');
                    out.push_str(&mono.join("*"));
                }
            }
        }
        out
    }
}

/// Splits a coefficient into a sign and a text factor (`None` when it is one).
fn coeff_text<F: Field>(c: &F) -> (bool, Option<String>) {
    if let Some(r) = c.to_rat() {
        let neg = r < Rat::from_integer(0.into());
        let a = if neg { -r } else { r };
        if a == Rat::from_integer(1.into()) {
            return (neg, None);
        }
        return (neg, Some(crate::scalar::rat_to_string(&a)));
    }
    let neg_s = (-c.clone()).to_string();
    let s = c.to_string();
    if s.starts_with('-') && !neg_s.contains(' ') {
        return (true, Some(neg_s));
    }
    if s.contains(' ') {
        (false, Some(format!("({s})")))
    } else {
        (false, Some(s))
    }
}

impl<F: Field> fmt::Display for MPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_with("x"))
    }
}

impl<F: Field> fmt::Debug for MPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat_int, Rat};

    type P = MPoly<Rat>;

    fn x(n: usize, i: usize) -> P {
        P::var(n, i)
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_of_degree(2, 3).len(), 4);
        assert_eq!(count_monomials(3, 4), 15);
        assert_eq!(monomials_of_degree(3, 4).len(), 15);
        assert_eq!(monomials_of_degree(1, 5), vec![Monomial::from_exps(&[5])]);
    }

    #[test]
    fn linear_division() {
        // (x1 - x2)^2 * x3
        let a = x(3, 0).sub(&x(3, 1));
        let f = a.mul(&a).mul(&x(3, 2));
        let alpha = [rat_int(1), rat_int(-1), rat_int(0)];
        assert_eq!(f.order_along(&alpha, 0), Some(2));
        assert_eq!(P::one(3).order_along(&alpha, 0), Some(0));
        assert_eq!(P::zero(3).order_along(&alpha, 0), None);
        let (q, r) = f.add(&x(3, 2)).div_rem_linear(&alpha, 0);
        assert_eq!(r, x(3, 2));
        assert_eq!(q, a.mul(&x(3, 2)));
    }

    #[test]
    fn order_one_variable() {
        let f = x(1, 0).pow(3).sub(&x(1, 0).pow(5));
        assert_eq!(f.order_along(&[rat_int(1)], 0), Some(3));
    }

    #[test]
    fn derivatives_and_substitution() {
        let f = x(2, 0).pow(2).mul(&x(2, 1));
        assert_eq!(f.derivative(0), x(2, 0).mul(&x(2, 1)).scale(&rat_int(2)));
        assert_eq!(f.apply_derivative_monomial(&Monomial::from_exps(&[2, 1])), P::constant(2, rat_int(2)));
        let swapped = f.substitute(&[x(2, 1), x(2, 0)]);
        assert_eq!(swapped, x(2, 1).pow(2).mul(&x(2, 0)));
    }

    #[test]
    fn display() {
        let f = x(2, 0).pow(2).mul(&x(2, 1)).scale(&Rat::new(3.into(), 2.into())).sub(&x(2, 1));
        assert_eq!(f.to_string(), "3/2*x1^2*x2 - x2");
    }
}
