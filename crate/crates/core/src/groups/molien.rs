//! Hilbert series of the invariant ring and the fundamental degrees.

use num_traits::{One, Signed, Zero};

use super::ReflectionGroup;
use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{positive_integer, Field, Rat};

/// Truncated series `sum_d dim C[V]^W_d t^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MolienSeries {
    pub coefficients: Vec<Rat>,
}

/// Coefficients of `det(1 - t w)`, low to high, by interpolation at
/// `t = 0..=dim`.
fn det_one_minus_tw(m: &Matrix<CycNum>) -> Vec<CycNum> {
    let n = m.rows();
    let pts: Vec<i64> = (0..=n as i64).collect();
    let vals: Vec<CycNum> = pts
        .iter()
        .map(|&t| Matrix::identity(n).sub(&m.scale(&CycNum::from_int(t))).det())
        .collect();
    // Vandermonde solve.
    let mut vdm = Matrix::zeros(n + 1, n + 1);
    for (i, &t) in pts.iter().enumerate() {
        let mut p = CycNum::one();
        for j in 0..=n {
            vdm[(i, j)] = p.clone();
            p = p * &CycNum::from_int(t);
        }
    }
    vdm.solve(&vals).expect("Vandermonde system is regular")
}

/// `(1/|W|) sum_w 1/det(1 - t w)` up to `t^max_degree`.
pub fn molien_series(g: &ReflectionGroup, max_degree: usize) -> MolienSeries {
    let mut total = vec![CycNum::zero(); max_degree + 1];
    for m in &g.elements {
        let p = det_one_minus_tw(m);
        // Power-series inverse, p[0] = 1.
        let mut q: Vec<CycNum> = Vec::with_capacity(max_degree + 1);
        q.push(CycNum::one());
        for j in 1..=max_degree {
            let mut acc = CycNum::zero();
            for i in 1..p.len().min(j + 1) {
                if !p[i].is_zero() {
                    acc = acc - &(p[i].clone() * &q[j - i]);
                }
            }
            q.push(acc);
        }
        for (t, c) in total.iter_mut().zip(q) {
            *t = t.clone() + &c;
        }
    }
    let order = CycNum::from_int(g.order() as i64);
    let coefficients = total
        .into_iter()
        .map(|c| c.div_exact(&order).and_then(|x| x.to_rat()).expect("Molien coefficients are rational"))
        .collect();
    MolienSeries { coefficients }
}

/// Greedy factorization of a series as `prod 1/(1 - t^d_i)` with `n` factors.
pub fn factor_degrees(series: &[Rat], n: usize, max_degree: usize) -> Result<Vec<u32>> {
    let fail = || Error::FactorizationFailed { max_degree };
    let mut h = series.to_vec();
    if h.first().map(|c| c.is_one()) != Some(true) {
        return Err(fail());
    }
    let mut degrees = Vec::new();
    loop {
        let Some(j) = (1..h.len()).find(|&j| !h[j].is_zero()) else {
            break;
        };
        if positive_integer(&h[j]).is_none() || h[j].is_negative() || degrees.len() == n {
            return Err(fail());
        }
        degrees.push(j as u32);
        // h *= (1 - t^j)
        for i in (j..h.len()).rev() {
            let t = h[i - j].clone();
            h[i] -= t;
        }
    }
    if degrees.len() != n {
        return Err(fail());
    }
    Ok(degrees)
}

/// Molien series and fundamental degrees; checks `prod d_i = |W|`.
pub fn molien_degrees(g: &ReflectionGroup, max_degree: usize) -> Result<(MolienSeries, Vec<u32>)> {
    let series = molien_series(g, max_degree);
    let degrees = factor_degrees(&series.coefficients, g.dim, max_degree)?;
    let prod: u64 = degrees.iter().map(|&d| d as u64).product();
    if prod != g.order() as u64 {
        return Err(Error::FactorizationFailed { max_degree });
    }
    Ok((series, degrees))
}

impl ReflectionGroup {
    pub fn molien_series(&self, max_degree: usize) -> MolienSeries {
        molien_series(self, max_degree)
    }

    /// Molien series up to `max_degree` together with the fundamental degrees.
    pub fn molien_degrees(&self, max_degree: usize) -> Result<(MolienSeries, Vec<u32>)> {
        molien_degrees(self, max_degree)
    }
}
