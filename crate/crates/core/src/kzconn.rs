//! The KZ connection on `C[V_reg] ⊗ tau`:
//! `∇_ξ(f ⊗ v) = ∂_ξ f ⊗ v + sum_H (alpha_H(ξ) / alpha_H) f ⊗ B_H v`
//! with residues `B_H = sum_i n_H k_{H,i} tau(e_{H,i})`.
//!
//! The group acts on the values (through `tau`), not on the arguments.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::groups::{Multiplicity, ReflectionGroup, WRepresentation};
use crate::linalg::{rank_of, Matrix};
use crate::poly::{monomials_of_degree, MPoly};
use crate::polyalg::RatFun;
use crate::report::Report;

/// Residue matrices, one per hyperplane in the group's hyperplane order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueData {
    pub matrices: Vec<Matrix<CycNum>>,
}

impl ResidueData {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.matrices
                .iter()
                .map(|m| {
                    serde_json::json!(m
                        .to_rows()
                        .iter()
                        .map(|r| r.iter().map(CycNum::to_json).collect::<Vec<_>>())
                        .collect::<Vec<_>>())
                })
                .collect(),
        )
    }
}

pub fn kz_residues(g: &ReflectionGroup, k: &Multiplicity, tau: &WRepresentation) -> ResidueData {
    ResidueData { matrices: (0..g.hyperplanes.len()).map(|h| g.a_h(h, k).represent(tau)).collect() }
}

/// A section of `C[V_reg] ⊗ tau` in a fixed basis of `tau`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub components: Vec<RatFun>,
}

impl Section {
    /// `f ⊗ v_b`.
    pub fn basis(f: RatFun, dim: usize, b: usize) -> Self {
        let zero = RatFun::zero(f.arrangement());
        let mut components = vec![zero; dim];
        components[b] = f;
        Section { components }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(RatFun::is_zero)
    }

    pub fn sub(&self, other: &Section) -> Section {
        Section { components: self.components.iter().zip(&other.components).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.components.iter().map(RatFun::to_json).collect())
    }
}

/// The covariant derivative with precomputed residues.
pub struct KzConnection<'a> {
    g: &'a ReflectionGroup,
    residues: ResidueData,
    dim: usize,
}

impl<'a> KzConnection<'a> {
    pub fn new(g: &'a ReflectionGroup, k: &Multiplicity, tau: &WRepresentation) -> Self {
        KzConnection { g, residues: kz_residues(g, k, tau), dim: tau.dim }
    }

    pub fn residues(&self) -> &ResidueData {
        &self.residues
    }

    pub fn derivative(&self, xi: &[CycNum], s: &Section) -> Section {
        let arr = &self.g.arrangement;
        let mut out: Vec<RatFun> = s.components.iter().map(|c| c.directional_derivative(xi)).collect();
        for (h, hp) in self.g.hyperplanes.iter().enumerate() {
            let coef = hp.eval(xi);
            let b = &self.residues.matrices[h];
            if coef.is_zero() || b.is_zero() {
                continue;
            }
            let pole = RatFun::alpha_pow(arr, h, -1).scale(&coef);
            for (a, slot) in out.iter_mut().enumerate() {
                let mut acc = RatFun::zero(arr);
                for (bidx, comp) in s.components.iter().enumerate() {
                    let e = &b[(a, bidx)];
                    if !e.is_zero() && !comp.is_zero() {
                        acc = acc.add(&comp.scale(e));
                    }
                }
                if !acc.is_zero() {
                    *slot = slot.add(&acc.mul(&pole));
                }
            }
        }
        Section { components: out }
    }

    /// The section family used for flatness: monomials of degree `<= bound`
    /// and `alpha_H^-m` for `m = 1, 2`, tensored with each basis vector.
    fn test_functions(&self, bound: u32) -> Vec<RatFun> {
        let arr = &self.g.arrangement;
        let mut fs = Vec::new();
        for d in 0..=bound {
            for m in monomials_of_degree(self.g.dim, d) {
                fs.push(RatFun::from_poly(arr, MPoly::monomial(m)));
            }
        }
        for h in 0..self.g.hyperplanes.len() {
            for m in 1..=2 {
                fs.push(RatFun::alpha_pow(arr, h, -m));
            }
        }
        fs
    }
}

pub fn kz_derivative(
    g: &ReflectionGroup,
    k: &Multiplicity,
    tau: &WRepresentation,
    xi: &[CycNum],
    s: &Section,
) -> Section {
    KzConnection::new(g, k, tau).derivative(xi, s)
}

/// Codimension-two flats as sets of hyperplanes containing them.
pub fn codim_two_flats(g: &ReflectionGroup) -> Vec<Vec<usize>> {
    let hs = &g.hyperplanes;
    let mut seen = BTreeSet::new();
    for a in 0..hs.len() {
        for b in a + 1..hs.len() {
            let plane = [hs[a].alpha.clone(), hs[b].alpha.clone()];
            let flat: Vec<usize> = (0..hs.len())
                .filter(|&c| rank_of(&[plane[0].clone(), plane[1].clone(), hs[c].alpha.clone()], g.dim) == 2)
                .collect();
            seen.insert(flat);
        }
    }
    seen.into_iter().collect()
}

fn commutator(a: &Matrix<CycNum>, b: &Matrix<CycNum>) -> Matrix<CycNum> {
    a.mul(b).sub(&b.mul(a))
}

/// Residue sanity: `B_{wH} = tau(w) B_H tau(w)^-1` and each `B_H` is
/// annihilated by `prod_λ (B_H - λ)` over `λ ∈ {0, n_H k_{H,1}, ...}`
/// (so it is diagonalizable with eigenvalues in that set).
pub fn check_residues(g: &ReflectionGroup, k: &Multiplicity, tau: &WRepresentation) -> Result<Report> {
    let res = kz_residues(g, k, tau);
    let mut rep = Report::new("kz_residues");
    for w in 0..g.order() {
        let rw = &tau.matrices[w];
        let rwinv = &tau.matrices[g.inverse(w)];
        for (h, b) in res.matrices.iter().enumerate() {
            let target = g.form_image(w, h).target;
            let ok = rw.mul(b).mul(rwinv) == res.matrices[target];
            rep.record(ok, || format!("B not equivariant: w{w}, H{h}"));
        }
    }
    for (h, b) in res.matrices.iter().enumerate() {
        let n = g.hyperplanes[h].order as i64;
        let mut values: Vec<CycNum> = Vec::new();
        for i in 0..n {
            let lam = CycNum::from_rational(k.for_hyperplane(g, h, i).clone() * crate::scalar::Rat::from_integer(n.into()));
            if !values.contains(&lam) {
                values.push(lam);
            }
        }
        let id = Matrix::identity(tau.dim);
        let prod = values.iter().fold(id.clone(), |acc, lam| acc.mul(&b.sub(&id.scale(lam))));
        rep.record(prod.is_zero(), || format!("B_H{h} has eigenvalues outside the spectrum of a_H(k)"));
    }
    Ok(rep)
}

/// `[∇_i, ∇_j] s = 0` for the section family, plus the residue criterion
/// `[B_H, sum_{H' ⊇ X} B_H'] = 0` for every codimension-two flat `X` and `H ⊇ X`.
pub fn check_flatness(g: &ReflectionGroup, k: &Multiplicity, tau: &WRepresentation, bound: u32) -> Result<Report> {
    if tau.matrices.len() != g.order() {
        return Err(Error::InvalidRepresentation("representation does not match the group".into()));
    }
    let conn = KzConnection::new(g, k, tau);
    let mut curvature = Report::new("kz_curvature");
    let fs = conn.test_functions(bound);
    for i in 0..g.dim {
        for j in i + 1..g.dim {
            let ei = g.basis_vector(i);
            let ej = g.basis_vector(j);
            for f in &fs {
                for b in 0..conn.dim {
                    let s = Section::basis(f.clone(), conn.dim, b);
                    let ij = conn.derivative(&ei, &conn.derivative(&ej, &s));
                    let ji = conn.derivative(&ej, &conn.derivative(&ei, &s));
                    let ok = ij == ji;
                    curvature.record(ok, || format!("[∇{}, ∇{}]({f} ⊗ v{}) != 0", i + 1, j + 1, b + 1));
                }
            }
        }
    }
    let mut residue = Report::new("kz_residue_criterion");
    let flats = codim_two_flats(g);
    for flat in &flats {
        let sum = flat.iter().fold(Matrix::zeros(conn.dim, conn.dim), |acc, &h| acc.add(&conn.residues.matrices[h]));
        for &h in flat {
            let ok = commutator(&conn.residues.matrices[h], &sum).is_zero();
            residue.record(ok, || format!("[B_H{h}, sum over flat {flat:?}] != 0"));
        }
    }
    let mut rep = Report::new("kz_flatness");
    rep.absorb(&curvature);
    rep.absorb(&residue);
    Ok(rep.with_details(serde_json::json!({
        "curvature": curvature.pass,
        "residue_criterion": residue.pass,
        "flats": flats.len(),
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Family;
    use crate::scalar::{rat, rat_int};

    #[test]
    fn z2_det() {
        let g = Family::Cyclic { n: 2 }.build(10).unwrap();
        let k = Multiplicity::uniform(&g, rat(1, 3));
        let det = WRepresentation::det(&g);
        let res = kz_residues(&g, &k, &det);
        assert_eq!(res.matrices[0][(0, 0)], CycNum::from_rational(rat(2, 3)));
        let s = Section::basis(RatFun::one(&g.arrangement), 1, 0);
        let d = kz_derivative(&g, &k, &det, &[CycNum::from_int(1)], &s);
        let expected = RatFun::alpha_pow(&g.arrangement, 0, -1).scale(&CycNum::from_rational(rat(2, 3)));
        assert_eq!(d.components[0], expected);
        assert!(check_flatness(&g, &k, &det, 3).unwrap().pass);
    }

    #[test]
    fn trivial_residues_vanish() {
        let g = Family::Symmetric { n: 3 }.build(10).unwrap();
        let res = kz_residues(&g, &Multiplicity::uniform(&g, rat_int(2)), &WRepresentation::trivial(&g));
        assert!(res.matrices.iter().all(Matrix::is_zero));
    }

    #[test]
    fn s3_standard() {
        let g = Family::Symmetric { n: 3 }.build(10).unwrap();
        let k = Multiplicity::uniform(&g, rat_int(1));
        let tau = WRepresentation::standard(&g).unwrap();
        let res = kz_residues(&g, &k, &tau);
        for b in &res.matrices {
            assert_eq!(b.trace(), CycNum::from_int(2));
        }
        assert!(check_residues(&g, &k, &tau).unwrap().pass);
        let r = check_flatness(&g, &k, &tau, 2).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(codim_two_flats(&g), vec![vec![0, 1, 2]]);
    }
}
