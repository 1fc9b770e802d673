//! The group algebra `CW`: idempotents `e_{H,i}`, the elements `a_H(k)`,
//! the central element `z(k)` and its spectrum on the regular representation.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{Multiplicity, Poly, ReflectionGroup, WRepresentation};
use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::MPoly;
use crate::scalar::{Field, Rat};

/// Finite linear combination of group elements (by index).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GroupAlgebraElement {
    pub coeffs: BTreeMap<usize, CycNum>,
}

impl GroupAlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(w: usize) -> Self {
        Self::term(w, CycNum::one())
    }

    pub fn identity() -> Self {
        Self::basis(0)
    }

    pub fn term(w: usize, c: CycNum) -> Self {
        let mut out = Self::zero();
        out.add_term(w, c);
        out
    }

    pub fn add_term(&mut self, w: usize, c: CycNum) {
        if c.is_zero() {
            return;
        }
        let s = self.coeffs.get(&w).cloned().unwrap_or_else(CycNum::zero) + &c;
        if s.is_zero() {
            self.coeffs.remove(&w);
        } else {
            self.coeffs.insert(w, s);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, w: usize) -> CycNum {
        self.coeffs.get(&w).cloned().unwrap_or_else(CycNum::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&w, c) in &other.coeffs {
            out.add_term(w, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-CycNum::one()))
    }

    pub fn scale(&self, s: &CycNum) -> Self {
        let mut out = Self::zero();
        for (&w, c) in &self.coeffs {
            out.add_term(w, c.clone() * s);
        }
        out
    }

    pub fn mul(&self, other: &Self, g: &ReflectionGroup) -> Self {
        let mut out = Self::zero();
        for (&a, ca) in &self.coeffs {
            for (&b, cb) in &other.coeffs {
                out.add_term(g.mul(a, b), ca.clone() * cb);
            }
        }
        out
    }

    /// Action on polynomials: `sum_w c_w (w.f)`.
    pub fn apply(&self, g: &ReflectionGroup, f: &Poly) -> Poly {
        let mut out = MPoly::zero(g.dim);
        for (&w, c) in &self.coeffs {
            out.add_assign(&g.act(w, f).scale(c));
        }
        out
    }

    /// Image in a representation.
    pub fn represent(&self, rep: &WRepresentation) -> Matrix<CycNum> {
        let mut out = Matrix::zeros(rep.dim, rep.dim);
        for (&w, c) in &self.coeffs {
            out = out.add(&rep.matrices[w].scale(c));
        }
        out
    }

    /// Matrix of left multiplication on `CW` in the basis of group elements.
    pub fn left_regular_matrix(&self, g: &ReflectionGroup) -> Matrix<CycNum> {
        let n = g.order();
        let mut m: Matrix<CycNum> = Matrix::zeros(n, n);
        for b in 0..n {
            for (&a, c) in &self.coeffs {
                let r = g.mul(a, b);
                m[(r, b)] = m[(r, b)].clone() + c;
            }
        }
        m
    }

    pub fn to_json(&self, g: &ReflectionGroup) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .coeffs
            .iter()
            .map(|(&w, c)| serde_json::json!({"element": w, "coeff": c.to_json_in(g.conductor)}))
            .collect();
        serde_json::Value::Array(terms)
    }
}

/// A joint eigenvalue of the commuting central elements
/// `Z_{C,i} = sum_{H in C} n_H e_{H,i}` on `CW`. The eigenvalue of `z(k)` on
/// this component is `sum_{C,i} coefficients[C][i] * k_{C,i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralComponent {
    pub coefficients: Vec<Vec<u64>>,
    /// Dimension of the joint eigenspace in `CW`.
    pub multiplicity: usize,
}

impl SpectralComponent {
    pub fn value(&self, k: &Multiplicity) -> Rat {
        let mut acc = Rat::zero();
        for (c, row) in self.coefficients.iter().enumerate() {
            for (i, &l) in row.iter().enumerate() {
                acc += k.get(c, i as i64) * Rat::from_integer(l.into());
            }
        }
        acc
    }
}

impl ReflectionGroup {
    /// `e_{H,i} = (1/n_H) sum_{w in W_H} det(w)^{-i} w`, index read mod `n_H`.
    pub fn idempotent(&self, h: usize, i: i64) -> GroupAlgebraElement {
        let hp = &self.hyperplanes[h];
        let n = hp.order;
        let inv_n = CycNum::from_rational(Rat::new(1.into(), (n as i64).into()));
        let mut out = GroupAlgebraElement::zero();
        for (j, &w) in hp.stabilizer.iter().enumerate() {
            // det(s_H^j) = zeta^j, so det^{-i} = zeta^{-ij}.
            let c = self.root_of_unity(n, -(i * j as i64)) * &inv_n;
            out.add_term(w, c);
        }
        out
    }

    /// `a_H(k) = sum_i n_H k_{H,i} e_{H,i}`.
    pub fn a_h(&self, h: usize, k: &Multiplicity) -> GroupAlgebraElement {
        let n = self.hyperplanes[h].order;
        let mut out = GroupAlgebraElement::zero();
        for i in 1..n {
            let kv = k.for_hyperplane(self, h, i as i64);
            if kv.is_zero() {
                continue;
            }
            let s = CycNum::from_rational(kv * Rat::from_integer((n as i64).into()));
            out = out.add(&self.idempotent(h, i as i64).scale(&s));
        }
        out
    }

    /// `z(k) = sum_H a_H(k)`, unchecked.
    pub fn z_element(&self, k: &Multiplicity) -> GroupAlgebraElement {
        (0..self.hyperplanes.len()).fold(GroupAlgebraElement::zero(), |acc, h| acc.add(&self.a_h(h, k)))
    }

    /// `z(k)` together with a centrality check against every generator.
    pub fn central_element(&self, k: &Multiplicity) -> Result<GroupAlgebraElement> {
        let z = self.z_element(k);
        if !self.is_central(&z) {
            return Err(Error::NotCentral);
        }
        Ok(z)
    }

    pub fn is_central(&self, a: &GroupAlgebraElement) -> bool {
        self.generators.iter().all(|&g| {
            let gb = GroupAlgebraElement::basis(g);
            a.mul(&gb, self) == gb.mul(a, self)
        })
    }

    /// `Z_{C,i} = sum_{H in C} n_H e_{H,i}`.
    pub fn orbit_class_element(&self, c: usize, i: i64) -> GroupAlgebraElement {
        let mut out = GroupAlgebraElement::zero();
        for &h in &self.orbits[c] {
            let n = CycNum::from_int(self.hyperplanes[h].order as i64);
            out = out.add(&self.idempotent(h, i).scale(&n));
        }
        out
    }

    /// Joint spectrum of the `Z_{C,i}` (`i >= 1`) on the regular representation.
    ///
    /// Each eigenvalue is searched among the integers `0..=n_C |C|`; the search
    /// is certified complete when the multiplicities add up to `|W|`.
    pub fn regular_spectrum(&self) -> Result<Vec<SpectralComponent>> {
        let nw = self.order();
        // (coefficients so far, basis of joint eigenspace as columns)
        let mut parts: Vec<(Vec<Vec<u64>>, Matrix<CycNum>)> =
            vec![(vec![Vec::new(); self.orbits.len()], Matrix::identity(nw))];
        for c in 0..self.orbits.len() {
            let n = self.orbit_order(c);
            for part in parts.iter_mut() {
                part.0[c].push(0); // i = 0 slot
            }
            for i in 1..n {
                let l = self.orbit_class_element(c, i as i64).left_regular_matrix(self);
                let bound = (n * self.orbits[c].len()) as i64;
                let mut next = Vec::new();
                for (coeffs, basis) in &parts {
                    let lb = l.mul(basis);
                    for lambda in 0..=bound {
                        let shifted = lb.sub(&basis.scale(&CycNum::from_int(lambda)));
                        let ker = shifted.kernel();
                        if ker.is_empty() {
                            continue;
                        }
                        let mut sub = Matrix::zeros(nw, ker.len());
                        for (j, v) in ker.iter().enumerate() {
                            let col = basis.mul_vec(v);
                            for (r, x) in col.into_iter().enumerate() {
                                sub[(r, j)] = x;
                            }
                        }
                        let mut nc = coeffs.clone();
                        nc[c].push(lambda as u64);
                        next.push((nc, sub));
                    }
                }
                parts = next;
            }
        }
        let total: usize = parts.iter().map(|p| p.1.cols()).sum();
        if total != nw {
            return Err(Error::VerificationFailed(format!(
                "joint eigenspaces of z(k) span {total} of {nw} dimensions"
            )));
        }
        Ok(parts
            .into_iter()
            .map(|(coefficients, basis)| SpectralComponent { coefficients, multiplicity: basis.cols() })
            .collect())
    }

    /// Distinct eigenvalues of `z(k)` on `CW` with multiplicities, sorted.
    pub fn regular_eigenvalues(&self, k: &Multiplicity) -> Result<Vec<(Rat, usize)>> {
        let mut map: BTreeMap<Rat, usize> = BTreeMap::new();
        for comp in self.regular_spectrum()? {
            *map.entry(comp.value(k)).or_default() += comp.multiplicity;
        }
        Ok(map.into_iter().collect())
    }

    /// The scalar `c_tau(k)` by which `z(k)` acts on an irreducible `tau`.
    pub fn c_tau(&self, k: &Multiplicity, tau: &WRepresentation) -> Result<CycNum> {
        let z = self.central_element(k)?;
        let m = z.represent(tau);
        let c = if tau.dim == 0 { CycNum::zero() } else { m[(0, 0)].clone() };
        if m != Matrix::identity(tau.dim).scale(&c) {
            return Err(Error::NotScalar);
        }
        Ok(c)
    }

    /// Rational eigenvalue if `z(k)` acts on `tau` by a scalar.
    pub fn c_tau_rational(&self, k: &Multiplicity, tau: &WRepresentation) -> Result<Rat> {
        self.c_tau(k, tau)?
            .to_rat()
            .ok_or_else(|| Error::VerificationFailed("c_tau(k) is not rational".into()))
    }
}
