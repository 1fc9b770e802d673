use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{CMatrix, ReflectionGroup};
use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::rat;

/// Built-in families plus explicit generator lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    /// `Z/n` acting on `C` by `zeta_n`.
    Cyclic { n: u32 },
    /// `I_2(m)` acting on `R^2`, generated by two real reflections.
    Dihedral { m: u32 },
    /// `S_n` permuting the coordinates of `C^n`.
    Symmetric { n: u32 },
    /// `G(m, p, n)` as monomial matrices.
    #[serde(rename = "G")]
    G { m: u32, p: u32, n: u32 },
    Explicit,
}

fn perm_swap(n: usize, i: usize, j: usize) -> CMatrix {
    let mut m = Matrix::identity(n);
    m[(i, i)] = CycNum::zero();
    m[(j, j)] = CycNum::zero();
    m[(i, j)] = CycNum::one();
    m[(j, i)] = CycNum::one();
    m
}

impl Family {
    pub fn label(&self) -> String {
        match self {
            Family::Cyclic { n } => format!("cyclic({n})"),
            Family::Dihedral { m } => format!("dihedral({m})"),
            Family::Symmetric { n } => format!("symmetric({n})"),
            Family::G { m, p, n } => format!("G({m},{p},{n})"),
            Family::Explicit => "explicit".into(),
        }
    }

    /// Generator matrices of a built-in family.
    pub fn generators(&self) -> Result<Vec<CMatrix>> {
        match *self {
            Family::Cyclic { n } => {
                if n < 2 {
                    return Err(Error::Invalid("cyclic(n) needs n >= 2".into()));
                }
                let cond = num_integer::lcm(n, 2);
                Ok(vec![Matrix::from_rows(vec![vec![CycNum::root_of_unity(cond, n, 1)?]])])
            }
            Family::Dihedral { m } => {
                if m < 2 {
                    return Err(Error::Invalid("dihedral(m) needs m >= 2".into()));
                }
                // Reflections across the x-axis and across the line at angle pi/m.
                let cond = num_integer::lcm(m, 4);
                let z = CycNum::root_of_unity(cond, m, 1)?;
                let zi = CycNum::root_of_unity(cond, m, -1)?;
                let i = CycNum::root_of_unity(cond, 4, 1)?;
                let half = CycNum::from_rational(rat(1, 2));
                let cos = (z.clone() + &zi) * &half;
                let sin = (z - &zi) * &half * &i.inverse().unwrap();
                let s1 = Matrix::from_rows(vec![
                    vec![CycNum::one(), CycNum::zero()],
                    vec![CycNum::zero(), -CycNum::one()],
                ]);
                let s2 = Matrix::from_rows(vec![vec![cos.clone(), sin.clone()], vec![sin, -cos]]);
                Ok(vec![s1, s2])
            }
            Family::Symmetric { n } => {
                if n < 2 {
                    return Err(Error::Invalid("symmetric(n) needs n >= 2".into()));
                }
                let n = n as usize;
                Ok((0..n - 1).map(|i| perm_swap(n, i, i + 1)).collect())
            }
            Family::G { m, p, n } => {
                if m == 0 || p == 0 || n == 0 || m % p != 0 {
                    return Err(Error::Invalid("G(m,p,n) needs p | m and positive parameters".into()));
                }
                if n == 1 {
                    return Family::Cyclic { n: m / p }.generators();
                }
                let cond = num_integer::lcm(m, 2);
                let n = n as usize;
                let mut gens: Vec<CMatrix> = (0..n - 1).map(|i| perm_swap(n, i, i + 1)).collect();
                if p < m {
                    let mut t = Matrix::identity(n);
                    t[(0, 0)] = CycNum::root_of_unity(cond, m, p as i64)?;
                    gens.push(t);
                }
                if p > 1 {
                    let z = CycNum::root_of_unity(cond, m, 1)?;
                    let mut s = perm_swap(n, 0, 1);
                    s[(0, 1)] = z.inverse().unwrap();
                    s[(1, 0)] = z;
                    gens.push(s);
                }
                Ok(gens)
            }
            Family::Explicit => Err(Error::Invalid("explicit family needs generator matrices".into())),
        }
    }

    pub fn build(&self, cap: usize) -> Result<ReflectionGroup> {
        ReflectionGroup::generate(self.clone(), self.generators()?, cap)
    }
}
