use std::collections::BTreeMap;

use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::groups::Poly;
use crate::linalg::{echelon_basis, rank_of, Matrix};
use crate::poly::{monomials_of_degree, MPoly, Monomial};

/// Kernel of linear functionals on the degree-`d` monomial space.
///
/// Each condition is a row indexed like `monomials_of_degree(nvars, d)`.
/// Pivots are taken left to right in that (lexicographically decreasing)
/// order, so the basis is deterministic.
pub fn graded_solve(nvars: usize, d: u32, conditions: &[Vec<CycNum>]) -> Vec<Poly> {
    let basis = monomials_of_degree(nvars, d);
    if conditions.is_empty() {
        return basis.into_iter().map(MPoly::monomial).collect();
    }
    let mut m = Matrix::zeros(conditions.len(), basis.len());
    for (i, row) in conditions.iter().enumerate() {
        assert_eq!(row.len(), basis.len(), "condition length must match the monomial basis");
        for (j, x) in row.iter().enumerate() {
            m[(i, j)] = x.clone();
        }
    }
    m.kernel().iter().map(|v| MPoly::from_coords(nvars, &basis, v)).collect()
}

/// Canonical reduced-echelon basis of the span of homogeneous degree-`d` polynomials.
pub fn echelon_polys(nvars: usize, d: u32, polys: &[Poly]) -> Vec<Poly> {
    let basis = monomials_of_degree(nvars, d);
    let coords: Vec<Vec<CycNum>> = polys.iter().map(|p| p.coords(&basis)).collect();
    echelon_basis(&coords, basis.len())
        .iter()
        .map(|v| MPoly::from_coords(nvars, &basis, v))
        .collect()
}

/// Dimension of the span of homogeneous degree-`d` polynomials.
pub fn span_rank(nvars: usize, d: u32, polys: &[Poly]) -> usize {
    let basis = monomials_of_degree(nvars, d);
    let coords: Vec<Vec<CycNum>> = polys.iter().map(|p| p.coords(&basis)).collect();
    rank_of(&coords, basis.len())
}

/// Per-degree bases of homogeneous polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSubspace {
    nvars: usize,
    slices: BTreeMap<u32, Vec<Poly>>,
}

impl GradedSubspace {
    pub fn new(nvars: usize) -> Self {
        GradedSubspace { nvars, slices: BTreeMap::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Installs a slice after checking homogeneity and independence.
    pub fn set_slice(&mut self, d: u32, basis: Vec<Poly>) -> Result<()> {
        if let Some(p) = basis.iter().find(|p| p.is_zero() || !p.is_homogeneous() || p.degree() != Some(d)) {
            return Err(Error::VerificationFailed(format!("{p} is not a nonzero homogeneous polynomial of degree {d}")));
        }
        if span_rank(self.nvars, d, &basis) != basis.len() {
            return Err(Error::VerificationFailed(format!("degree {d} basis is linearly dependent")));
        }
        self.slices.insert(d, basis);
        Ok(())
    }

    pub fn slice(&self, d: u32) -> &[Poly] {
        self.slices.get(&d).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn dim(&self, d: u32) -> usize {
        self.slice(d).len()
    }

    /// Degrees with a computed slice.
    pub fn degrees(&self) -> impl Iterator<Item = u32> + '_ {
        self.slices.keys().copied()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.slices.keys().next_back().copied()
    }

    /// Slice dimensions for degrees `0..=max`.
    pub fn dims(&self, max: u32) -> Vec<usize> {
        (0..=max).map(|d| self.dim(d)).collect()
    }

    /// Membership of a (possibly inhomogeneous) polynomial, degree by degree.
    /// `None` if a needed slice has not been computed.
    pub fn contains(&self, f: &Poly) -> Option<bool> {
        let Some(top) = f.degree() else {
            return Some(true);
        };
        for d in 0..=top {
            let part = f.homogeneous_part(d);
            if part.is_zero() {
                continue;
            }
            let slice = self.slices.get(&d)?;
            if !in_span(slice, &part) {
                return Some(false);
            }
        }
        Some(true)
    }

    /// `self_d ⊆ other_d` for every degree computed in both.
    pub fn is_subspace_of(&self, other: &GradedSubspace) -> bool {
        self.slices.iter().all(|(&d, basis)| match other.slices.get(&d) {
            Some(o) => basis.iter().all(|p| in_span(o, p)),
            None => true,
        })
    }

    /// Canonical form of a slice (for equality of subspaces).
    pub fn echelon(&self, d: u32) -> Vec<Poly> {
        echelon_polys(self.nvars, d, self.slice(d))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let slices: serde_json::Map<String, serde_json::Value> = self
            .slices
            .iter()
            .map(|(d, b)| (d.to_string(), serde_json::json!(b.iter().map(|p| p.to_string()).collect::<Vec<_>>())))
            .collect();
        serde_json::Value::Object(slices)
    }
}

/// Whether `f` lies in the linear span of `basis`.
pub fn in_span(basis: &[Poly], f: &Poly) -> bool {
    if f.is_zero() {
        return true;
    }
    if basis.is_empty() {
        return false;
    }
    // Restrict to monomials that occur, which is enough for a rank test.
    let mut support: Vec<Monomial> = basis.iter().chain(std::iter::once(f)).flat_map(|p| p.terms().map(|(m, _)| m.clone())).collect();
    support.sort();
    support.dedup();
    let coords: Vec<Vec<CycNum>> = basis.iter().map(|p| p.coords(&support)).collect();
    let r = rank_of(&coords, support.len());
    let mut with = coords;
    with.push(f.coords(&support));
    rank_of(&with, support.len()) == r
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn no_conditions_gives_all_monomials() {
        assert_eq!(graded_solve(2, 4, &[]).len(), 5);
    }

    #[test]
    fn one_coefficient_condition() {
        let mut row = vec![CycNum::from_int(0); 5];
        row[0] = CycNum::one(); // coefficient of x1^4
        let sol = graded_solve(2, 4, &[row]);
        assert_eq!(sol.len(), 4);
        assert!(sol.iter().all(|p| p.coeff(&Monomial::from_exps(&[4, 0])) == CycNum::from_int(0)));
    }

    #[test]
    fn contains_by_degree() {
        let mut s = GradedSubspace::new(1);
        s.set_slice(0, vec![MPoly::one(1)]).unwrap();
        s.set_slice(1, vec![]).unwrap();
        s.set_slice(2, vec![MPoly::var(1, 0).pow(2)]).unwrap();
        let x = MPoly::var(1, 0);
        assert_eq!(s.contains(&x.pow(2).add(&MPoly::one(1))), Some(true));
        assert_eq!(s.contains(&x), Some(false));
        assert_eq!(s.contains(&x.pow(3)), None);
        assert!(s.set_slice(3, vec![x.pow(3), x.pow(3)]).is_err());
    }
}
