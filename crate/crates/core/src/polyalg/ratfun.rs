use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::cyclotomic::CycNum;
use crate::groups::{Arrangement, Poly, ReflectionGroup};
use crate::poly::MPoly;

/// `num / prod_H alpha_H^{den[H]}`, kept reduced: no `alpha_H` with
/// `den[H] > 0` divides `num`.
#[derive(Clone)]
pub struct RatFun {
    num: Poly,
    den: Vec<u32>,
    arr: Arc<Arrangement>,
}

impl PartialEq for RatFun {
    fn eq(&self, other: &Self) -> bool {
        self.den == other.den && self.num == other.num
    }
}

impl Eq for RatFun {}

impl Hash for RatFun {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl RatFun {
    pub fn from_poly(arr: &Arc<Arrangement>, num: Poly) -> Self {
        RatFun { num, den: vec![0; arr.len()], arr: arr.clone() }
    }

    pub fn zero(arr: &Arc<Arrangement>) -> Self {
        Self::from_poly(arr, MPoly::zero(arr.dim))
    }

    pub fn one(arr: &Arc<Arrangement>) -> Self {
        Self::from_poly(arr, MPoly::one(arr.dim))
    }

    pub fn constant(arr: &Arc<Arrangement>, c: CycNum) -> Self {
        Self::from_poly(arr, MPoly::constant(arr.dim, c))
    }

    /// `alpha_H^e` for any integer `e`.
    pub fn alpha_pow(arr: &Arc<Arrangement>, h: usize, e: i32) -> Self {
        if e >= 0 {
            return Self::from_poly(arr, arr.form_poly(h).pow(e as u32));
        }
        let mut den = vec![0; arr.len()];
        den[h] = (-e) as u32;
        RatFun { num: MPoly::one(arr.dim), den, arr: arr.clone() }
    }

    /// Builds `num / prod alpha^den` and reduces it.
    pub fn new(arr: &Arc<Arrangement>, num: Poly, den: Vec<u32>) -> Self {
        assert_eq!(den.len(), arr.len());
        let mut r = RatFun { num, den, arr: arr.clone() };
        r.reduce();
        r
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.iter_mut().for_each(|d| *d = 0);
            return;
        }
        for h in 0..self.den.len() {
            while self.den[h] > 0 {
                match self.num.div_linear(&self.arr.forms[h], self.arr.pivots[h]) {
                    Some(q) => {
                        self.num = q;
                        self.den[h] -= 1;
                    }
                    None => break,
                }
            }
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator_exponents(&self) -> &[u32] {
        &self.den
    }

    pub fn arrangement(&self) -> &Arc<Arrangement> {
        &self.arr
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.iter().all(|&d| d == 0)
    }

    pub fn to_poly(&self) -> Option<Poly> {
        self.is_polynomial().then(|| self.num.clone())
    }

    /// Polynomial `self * prod alpha_H^{e[H]}`; `None` if `e` does not clear the denominator.
    pub fn clear_denominator(&self, e: &[u32]) -> Option<Poly> {
        let mut out = self.num.clone();
        for h in 0..self.den.len() {
            let extra = e[h].checked_sub(self.den[h])?;
            if extra > 0 {
                out = out.mul(&self.arr.form_poly(h).pow(extra));
            }
        }
        Some(out)
    }

    /// Numerator over `prod alpha^target`, with `target >= den` entrywise.
    fn lifted(&self, target: &[u32]) -> Poly {
        self.clear_denominator(target).expect("target dominates denominator")
    }

    pub fn add(&self, other: &Self) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        if self.den == other.den {
            return RatFun::new(&self.arr, self.num.add(&other.num), self.den.clone());
        }
        let m: Vec<u32> = self.den.iter().zip(&other.den).map(|(a, b)| *a.max(b)).collect();
        RatFun::new(&self.arr, self.lifted(&m).add(&other.lifted(&m)), m)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RatFun { num: self.num.neg(), den: self.den.clone(), arr: self.arr.clone() }
    }

    pub fn scale(&self, c: &CycNum) -> Self {
        if c.is_zero() {
            return Self::zero(&self.arr);
        }
        RatFun { num: self.num.scale(c), den: self.den.clone(), arr: self.arr.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.arr);
        }
        let den = self.den.iter().zip(&other.den).map(|(a, b)| a + b).collect();
        RatFun::new(&self.arr, self.num.mul(&other.num), den)
    }

    pub fn mul_poly(&self, p: &Poly) -> Self {
        RatFun::new(&self.arr, self.num.mul(p), self.den.clone())
    }

    /// `d/dx_i`.
    pub fn derivative(&self, i: usize) -> Self {
        if self.is_polynomial() {
            return Self::from_poly(&self.arr, self.num.derivative(i));
        }
        // (N / prod a^m)' = (N' prod a - N sum_h m_h a_h[i] prod_{h' != h} a) / prod a^(m+1)
        let active: Vec<usize> = (0..self.den.len()).filter(|&h| self.den[h] > 0).collect();
        let prod_except = |skip: Option<usize>| {
            active
                .iter()
                .filter(|&&h| Some(h) != skip)
                .fold(MPoly::one(self.arr.dim), |acc, &h| acc.mul(&self.arr.form_poly(h)))
        };
        let mut num = self.num.derivative(i).mul(&prod_except(None));
        for &h in &active {
            let c = &self.arr.forms[h][i];
            if c.is_zero() {
                continue;
            }
            let coef = c.clone() * &CycNum::from_int(self.den[h] as i64);
            num = num.sub(&self.num.mul(&prod_except(Some(h))).scale(&coef));
        }
        let den = self.den.iter().map(|&d| if d > 0 { d + 1 } else { 0 }).collect();
        RatFun::new(&self.arr, num, den)
    }

    /// `sum_i xi[i] d/dx_i`.
    pub fn directional_derivative(&self, xi: &[CycNum]) -> Self {
        let mut out = Self::zero(&self.arr);
        for (i, c) in xi.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.derivative(i).scale(c));
            }
        }
        out
    }

    /// `(w.f)(x) = f(w^-1 x)`.
    pub fn act(&self, g: &ReflectionGroup, w: usize) -> Self {
        let mut num = g.act(w, &self.num);
        let mut den = vec![0; self.den.len()];
        for (h, &m) in self.den.iter().enumerate() {
            if m == 0 {
                continue;
            }
            let img = g.form_image(w, h);
            den[img.target] = m;
            if !img.scale.is_one() {
                num = num.scale(&img.scale.pow(-(m as i64)));
            }
        }
        RatFun::new(&self.arr, num, den)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let den: Vec<serde_json::Value> = self
            .den
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(h, &m)| serde_json::json!([h, m]))
            .collect();
        serde_json::json!({ "num": self.num.to_string(), "den": den })
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            return write!(f, "{}", self.num);
        }
        let factors: Vec<String> = self
            .den
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(h, &m)| {
                let a = self.arr.form_poly(h).to_string();
                let a = if self.arr.form_poly(h).len() > 1 { format!("({a})") } else { a };
                if m == 1 {
                    a
                } else {
                    format!("{a}^{m}")
                }
            })
            .collect();
        let num = if self.num.len() > 1 { format!("({})", self.num) } else { self.num.to_string() };
        write!(f, "{num}/{}", factors.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Family;

    #[test]
    fn cancellation() {
        let g = Family::Cyclic { n: 2 }.build(10).unwrap();
        let arr = &g.arrangement;
        let x = MPoly::var(1, 0);
        let inv = RatFun::alpha_pow(arr, 0, -1);
        assert!(inv.add(&inv.neg()).is_zero());
        let r = RatFun::new(arr, x.pow(2), vec![1]);
        assert_eq!(r, RatFun::from_poly(arr, x.clone()));
        let p = RatFun::from_poly(arr, x.pow(3).sub(&x));
        let expected = x.pow(2).sub(&MPoly::one(1));
        assert_eq!(inv.mul(&p).to_poly().unwrap(), expected);
    }

    #[test]
    fn quotient_rule() {
        let g = Family::Symmetric { n: 3 }.build(10).unwrap();
        let arr = &g.arrangement;
        let f = RatFun::alpha_pow(arr, 0, -2);
        // d/dx_p (alpha^-2) = -2 alpha_p alpha^-3
        let p = arr.pivots[0];
        let expected = RatFun::alpha_pow(arr, 0, -3).scale(&(arr.forms[0][p].clone() * &CycNum::from_int(-2)));
        assert_eq!(f.derivative(p), expected);
        assert_eq!(f.mul(&RatFun::alpha_pow(arr, 0, 2)), RatFun::one(arr));
    }

    #[test]
    fn action_permutes_denominators() {
        let g = Family::Symmetric { n: 3 }.build(10).unwrap();
        let arr = &g.arrangement;
        for w in 0..g.order() {
            for h in 0..arr.len() {
                let f = RatFun::alpha_pow(arr, h, -1);
                let direct = RatFun::one(arr).mul(&f.act(&g, w)).mul(&RatFun::from_poly(arr, g.act(w, &arr.form_poly(h))));
                assert_eq!(direct, RatFun::one(arr));
            }
        }
    }
}
