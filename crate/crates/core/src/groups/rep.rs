use std::fmt;

use num_traits::{One, Zero};

use super::{CMatrix, ReflectionGroup};
use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RepKind {
    Trivial,
    Det,
    Reflection,
    Regular,
    /// The orthogonal complement of `V^W` inside `V`.
    Standard,
    Explicit,
}

impl RepKind {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "trivial" => RepKind::Trivial,
            "det" => RepKind::Det,
            "reflection" => RepKind::Reflection,
            "regular" => RepKind::Regular,
            "standard" => RepKind::Standard,
            "explicit" => RepKind::Explicit,
            _ => return Err(Error::InvalidRepresentation(format!("unknown representation {s:?}"))),
        })
    }
}

impl fmt::Display for RepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RepKind::Trivial => "trivial",
            RepKind::Det => "det",
            RepKind::Reflection => "reflection",
            RepKind::Regular => "regular",
            RepKind::Standard => "standard",
            RepKind::Explicit => "explicit",
        };
        f.write_str(s)
    }
}

/// A representation of `W`, stored as one matrix per group element.
#[derive(Clone, Debug)]
pub struct WRepresentation {
    pub kind: RepKind,
    pub dim: usize,
    pub matrices: Vec<CMatrix>,
}

impl WRepresentation {
    pub fn trivial(g: &ReflectionGroup) -> Self {
        WRepresentation { kind: RepKind::Trivial, dim: 1, matrices: vec![Matrix::identity(1); g.order()] }
    }

    pub fn det(g: &ReflectionGroup) -> Self {
        let matrices = g.det.iter().map(|d| Matrix::from_rows(vec![vec![d.clone()]])).collect();
        WRepresentation { kind: RepKind::Det, dim: 1, matrices }
    }

    pub fn reflection(g: &ReflectionGroup) -> Self {
        WRepresentation { kind: RepKind::Reflection, dim: g.dim, matrices: g.elements.clone() }
    }

    /// Left regular representation: `w e_u = e_{wu}`.
    pub fn regular(g: &ReflectionGroup) -> Self {
        let n = g.order();
        let matrices = (0..n)
            .map(|w| {
                let mut m = Matrix::zeros(n, n);
                for u in 0..n {
                    m[(g.mul(w, u), u)] = CycNum::one();
                }
                m
            })
            .collect();
        WRepresentation { kind: RepKind::Regular, dim: n, matrices }
    }

    /// `V` modulo its fixed vectors, realized on the orthogonal complement of
    /// `V^W`. For `S_n` on `C^n` this is the `(n-1)`-dimensional summand.
    pub fn standard(g: &ReflectionGroup) -> Result<Self> {
        let n = g.dim;
        let id = Matrix::identity(n);
        let mut rows = Vec::new();
        for &s in &g.generators {
            rows.extend(g.elements[s].sub(&id).to_rows());
        }
        let fixed = Matrix::from_rows(rows).kernel();
        let basis = if fixed.is_empty() {
            (0..n).map(|i| g.basis_vector(i)).collect()
        } else {
            let conj_rows: Vec<Vec<CycNum>> = fixed.iter().map(|v| v.iter().map(|x| x.conjugate()).collect()).collect();
            Matrix::from_rows(conj_rows).kernel()
        };
        let mut rep = Self::restrict(&Self::reflection(g), &basis)?;
        rep.kind = RepKind::Standard;
        Ok(rep)
    }

    pub fn of_kind(g: &ReflectionGroup, kind: RepKind) -> Result<Self> {
        match kind {
            RepKind::Trivial => Ok(Self::trivial(g)),
            RepKind::Det => Ok(Self::det(g)),
            RepKind::Reflection => Ok(Self::reflection(g)),
            RepKind::Regular => Ok(Self::regular(g)),
            RepKind::Standard => Self::standard(g),
            RepKind::Explicit => Err(Error::InvalidRepresentation("explicit representation needs matrices".into())),
        }
    }

    /// Restriction to an invariant subspace spanned by `basis`.
    pub fn restrict(rep: &WRepresentation, basis: &[Vec<CycNum>]) -> Result<Self> {
        let d = basis.len();
        let mut b = Matrix::zeros(rep.dim, d);
        for (j, v) in basis.iter().enumerate() {
            for (i, x) in v.iter().enumerate() {
                b[(i, j)] = x.clone();
            }
        }
        let mut matrices = Vec::with_capacity(rep.matrices.len());
        for m in &rep.matrices {
            let img = m.mul(&b);
            let mut r = Matrix::zeros(d, d);
            for j in 0..d {
                let col = img.column(j);
                let sol = b
                    .solve(&col)
                    .ok_or_else(|| Error::InvalidRepresentation("subspace is not invariant".into()))?;
                for (i, x) in sol.into_iter().enumerate() {
                    r[(i, j)] = x;
                }
            }
            matrices.push(r);
        }
        Ok(WRepresentation { kind: RepKind::Explicit, dim: d, matrices })
    }

    /// Extends matrices given on the group generators to all elements and
    /// verifies `rho(s) rho(w) = rho(s w)` for every generator `s` and every `w`.
    pub fn explicit(g: &ReflectionGroup, generator_images: Vec<CMatrix>) -> Result<Self> {
        if generator_images.len() != g.generators.len() {
            return Err(Error::InvalidRepresentation(format!(
                "expected {} generator matrices, got {}",
                g.generators.len(),
                generator_images.len()
            )));
        }
        let dim = generator_images.first().map(|m| m.rows()).unwrap_or(0);
        if generator_images.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::InvalidRepresentation("generator matrices differ in size".into()));
        }
        let mut matrices: Vec<CMatrix> = Vec::with_capacity(g.order());
        matrices.push(Matrix::identity(dim));
        for w in 1..g.order() {
            let (s, prev) = g.word_step(w).expect("non-identity element has a word");
            matrices.push(generator_images[s].mul(&matrices[prev]));
        }
        let rep = WRepresentation { kind: RepKind::Explicit, dim, matrices };
        rep.verify(g)?;
        Ok(rep)
    }

    pub fn verify(&self, g: &ReflectionGroup) -> Result<()> {
        if !self.matrices[0].eq(&Matrix::identity(self.dim)) {
            return Err(Error::InvalidRepresentation("identity is not sent to the identity".into()));
        }
        for &s in &g.generators {
            for w in 0..g.order() {
                if self.matrices[s].mul(&self.matrices[w]) != self.matrices[g.mul(s, w)] {
                    return Err(Error::InvalidRepresentation(format!(
                        "not multiplicative at generator {s}, element {w}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Character value `tr rho(w)`.
    pub fn character(&self, w: usize) -> CycNum {
        if self.dim == 0 {
            return CycNum::zero();
        }
        self.matrices[w].trace()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Family;

    #[test]
    fn standard_of_s3_is_two_dimensional() {
        let g = Family::Symmetric { n: 3 }.build(100).unwrap();
        let std = WRepresentation::standard(&g).unwrap();
        assert_eq!(std.dim, 2);
        std.verify(&g).unwrap();
        // Character of a transposition is 0.
        let s = g.hyperplanes[0].distinguished;
        assert!(std.character(s).is_zero());
    }

    #[test]
    fn explicit_extension_matches_det() {
        let g = Family::G { m: 3, p: 1, n: 2 }.build(100).unwrap();
        let gens = g.generators.iter().map(|&s| Matrix::from_rows(vec![vec![g.det[s].clone()]])).collect();
        let rep = WRepresentation::explicit(&g, gens).unwrap();
        for w in 0..g.order() {
            assert_eq!(rep.matrices[w][(0, 0)], g.det[w]);
        }
    }

    #[test]
    fn bad_explicit_rejected() {
        let g = Family::Symmetric { n: 3 }.build(100).unwrap();
        let two = CycNum::from_int(2);
        let gens = vec![Matrix::from_rows(vec![vec![two.clone()]]), Matrix::from_rows(vec![vec![two]])];
        assert!(WRepresentation::explicit(&g, gens).is_err());
    }

    #[test]
    fn regular_is_a_representation() {
        let g = Family::Dihedral { m: 3 }.build(100).unwrap();
        WRepresentation::regular(&g).verify(&g).unwrap();
    }
}
