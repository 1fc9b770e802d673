//! Exact arithmetic in cyclotomic fields `Q(zeta_N)`.
//!
//! Elements are stored in the power basis `1, zeta, ..., zeta^(phi(N)-1)`
//! reduced modulo the cyclotomic polynomial `Phi_N`. Rational elements are
//! always stored with conductor 1, which makes the representation canonical
//! across fields: equality is plain coefficient equality.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{rat_to_string, Field, Rat};

/// Element of `Q(zeta_N)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNum {
    n: u32,
    c: Vec<Rat>,
}

struct CycloData {
    phi: usize,
    /// Coefficients of `Phi_N`, low to high, monic.
    poly: Vec<Rat>,
    /// `zeta^j` reduced, for `0 <= j < N`.
    powers: Vec<Vec<Rat>>,
}

fn registry() -> &'static RwLock<HashMap<u32, Arc<CycloData>>> {
    static REG: OnceLock<RwLock<HashMap<u32, Arc<CycloData>>>> = OnceLock::new();
    REG.get_or_init(|| RwLock::new(HashMap::new()))
}

fn field_data(n: u32) -> Arc<CycloData> {
    if let Some(d) = registry().read().unwrap().get(&n) {
        return d.clone();
    }
    let data = Arc::new(build_data(n));
    registry().write().unwrap().entry(n).or_insert(data).clone()
}

/// Integer coefficients of the `n`-th cyclotomic polynomial, low to high.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    // t^n - 1 divided by Phi_d for every proper divisor d.
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let div = cyclotomic_polynomial(d);
            num = exact_int_poly_div(&num, &div);
        }
    }
    num
}

fn exact_int_poly_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    // den is monic
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qn = rem.len() - 1 - dn;
    let mut q = vec![BigInt::zero(); qn + 1];
    for i in (0..=qn).rev() {
        let c = rem[i + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(|r| r.is_zero()));
    q
}

fn euler_phi(n: u32) -> usize {
    (1..=n).filter(|k| k.gcd(&n) == 1).count()
}

fn build_data(n: u32) -> CycloData {
    let poly: Vec<Rat> = cyclotomic_polynomial(n).into_iter().map(Rat::from_integer).collect();
    let phi = euler_phi(n);
    debug_assert_eq!(poly.len(), phi + 1);
    let mut powers = Vec::with_capacity(n as usize);
    let mut cur = vec![Rat::one()];
    for _ in 0..n {
        powers.push(cur.clone());
        let mut shifted = vec![Rat::zero()];
        shifted.extend(cur.iter().cloned());
        cur = reduce_with(&poly, phi, shifted);
    }
    CycloData { phi, poly, powers }
}

fn reduce_with(poly: &[Rat], phi: usize, mut v: Vec<Rat>) -> Vec<Rat> {
    while v.len() > phi {
        let top = v.pop().unwrap();
        if top.is_zero() {
            continue;
        }
        let shift = v.len() - phi;
        for (j, pj) in poly.iter().take(phi).enumerate() {
            let t = &top * pj;
            v[shift + j] -= t;
        }
    }
    v
}

fn trim(v: &mut Vec<Rat>) {
    while v.last().is_some_and(|x| x.is_zero()) {
        v.pop();
    }
}

impl CycNum {
    fn from_parts(n: u32, mut c: Vec<Rat>) -> Self {
        trim(&mut c);
        let n = if c.len() <= 1 { 1 } else { n };
        CycNum { n, c }
    }

    /// The primitive root `zeta_N = exp(2 pi i / N)`.
    pub fn zeta(n: u32) -> Self {
        assert!(n >= 1, "conductor must be positive");
        if n <= 2 {
            return if n == 1 { Self::one() } else { -Self::one() };
        }
        let d = field_data(n);
        Self::from_parts(n, d.powers[1].clone())
    }

    /// `exp(2 pi i * exp / order)` as an element of `Q(zeta_conductor)`.
    pub fn root_of_unity(conductor: u32, order: u32, exp: i64) -> Result<Self> {
        if order == 0 || conductor % order != 0 && order != 1 && order != 2 {
            return Err(Error::RootNotInField { order, conductor });
        }
        let e = exp.rem_euclid(order as i64) as u32;
        if order <= 2 {
            return Ok(if e == 0 { Self::one() } else { -Self::one() });
        }
        Ok(Self::zeta_power(conductor, e * (conductor / order)))
    }

    /// `zeta_N^j`.
    pub fn zeta_power(n: u32, j: u32) -> Self {
        if n <= 2 {
            return Self::zeta(n).pow(j as i64);
        }
        let d = field_data(n);
        Self::from_parts(n, d.powers[(j % n) as usize].clone())
    }

    pub fn from_rational(r: Rat) -> Self {
        Self::from_parts(1, vec![r])
    }

    pub fn from_int(k: i64) -> Self {
        Self::from_rational(Rat::from_integer(BigInt::from(k)))
    }

    /// Builds an element from power-basis coordinates, reducing as needed.
    pub fn from_coeffs(n: u32, coeffs: Vec<Rat>) -> Self {
        if n <= 2 {
            let mut acc = Self::zero();
            let z = Self::zeta(n);
            let mut p = Self::one();
            for c in coeffs {
                acc = acc + &(p.clone() * &Self::from_rational(c));
                p = p * &z;
            }
            return acc;
        }
        let d = field_data(n);
        Self::from_parts(n, reduce_with(&d.poly, d.phi, coeffs))
    }

    /// Conductor of the field this element is stored in (1 for rationals).
    pub fn conductor(&self) -> u32 {
        self.n
    }

    /// Power-basis coordinates (trailing zeros omitted).
    pub fn coeffs(&self) -> &[Rat] {
        &self.c
    }

    pub fn is_rational(&self) -> bool {
        self.n == 1
    }

    fn merge_conductor(&self, other: &Self) -> Result<u32> {
        match (self.n, other.n) {
            (1, m) | (m, 1) => Ok(m),
            (a, b) if a == b => Ok(a),
            (a, b) => Err(Error::ConductorMismatch(a, b)),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let n = self.merge_conductor(other)?;
        let len = self.c.len().max(other.c.len());
        let mut v = Vec::with_capacity(len);
        for i in 0..len {
            let a = self.c.get(i);
            let b = other.c.get(i);
            v.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Ok(Self::from_parts(n, v))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other.clone())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let n = self.merge_conductor(other)?;
        if self.c.is_empty() || other.c.is_empty() {
            return Ok(Self::zero());
        }
        if self.n == 1 {
            return Ok(other.scale(&self.c[0]));
        }
        if other.n == 1 {
            return Ok(self.scale(&other.c[0]));
        }
        let mut v = vec![Rat::zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        let d = field_data(n);
        Ok(Self::from_parts(n, reduce_with(&d.poly, d.phi, v)))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.merge_conductor(other)?;
        let inv = other.inverse().ok_or(Error::DivisionByZero)?;
        self.checked_mul(&inv)
    }

    /// Multiplies by a rational.
    pub fn scale(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Self::from_parts(self.n, self.c.iter().map(|x| x * r).collect())
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.c.is_empty() {
            return None;
        }
        if self.n == 1 {
            return Some(Self::from_rational(self.c[0].recip()));
        }
        let d = field_data(self.n);
        let phi = d.phi;
        // Columns: self * zeta^j, solve M x = e_0.
        let mut m: Vec<Vec<Rat>> = vec![vec![Rat::zero(); phi + 1]; phi];
        for j in 0..phi {
            let col = self.checked_mul(&Self::zeta_power(self.n, j as u32)).unwrap();
            for (i, v) in col.c.iter().enumerate() {
                m[i][j] = v.clone();
            }
        }
        m[0][phi] = Rat::one();
        let x = solve_dense(m, phi)?;
        Some(Self::from_parts(self.n, x))
    }

    /// Complex conjugate: `zeta -> zeta^(N-1)`.
    pub fn conjugate(&self) -> Self {
        if self.n == 1 {
            return self.clone();
        }
        let d = field_data(self.n);
        let n = self.n as usize;
        let mut v = vec![Rat::zero(); d.phi];
        for (j, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let p = &d.powers[(n - j) % n];
            for (i, pi) in p.iter().enumerate() {
                v[i] += c * pi;
            }
        }
        Self::from_parts(self.n, v)
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inverse().expect("zero to a negative power") } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = b.clone() * &b;
            }
        }
        acc
    }

    /// Embeds a rational element into `Q(zeta_n)` for serialization.
    fn coords_in(&self, n: u32) -> Vec<Rat> {
        if self.n == n || self.n == 1 {
            self.c.clone()
        } else {
            panic!("cannot embed Q(zeta_{}) into Q(zeta_{})", self.n, n)
        }
    }

    /// The same number stored in `Q(zeta_n)`; needs `conductor | n`.
    pub fn embed(&self, n: u32) -> Result<Self> {
        if self.n == 1 || self.n == n {
            return Ok(self.clone());
        }
        if n % self.n != 0 {
            return Err(Error::ConductorMismatch(self.n, n));
        }
        let step = n / self.n;
        let mut acc = Self::zero();
        for (j, c) in self.c.iter().enumerate() {
            if !c.is_zero() {
                acc = acc + &Self::zeta_power(n, j as u32 * step).scale(c);
            }
        }
        Ok(acc)
    }

    /// Display-only numerical value `(re, im)`.
    pub fn approx(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, c) in self.c.iter().enumerate() {
            let v = c.to_f64().unwrap_or(f64::NAN);
            let ang = 2.0 * std::f64::consts::PI * j as f64 / self.n as f64;
            re += v * ang.cos();
            im += v * ang.sin();
        }
        (re, im)
    }
}

fn solve_dense(mut m: Vec<Vec<Rat>>, n: usize) -> Option<Vec<Rat>> {
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for v in m[col].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=n {
                    let t = &f * &m[col][c];
                    m[r][c] -= t;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

impl Zero for CycNum {
    fn zero() -> Self {
        CycNum { n: 1, c: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
}

impl One for CycNum {
    fn one() -> Self {
        CycNum { n: 1, c: vec![Rat::one()] }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum { n: self.n, c: self.c.into_iter().map(|x| -x).collect() }
    }
}

macro_rules! forward_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: CycNum) -> CycNum {
                self.$checked(&rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl<'a> $tr<&'a CycNum> for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: &'a CycNum) -> CycNum {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl<'a, 'b> $tr<&'b CycNum> for &'a CycNum {
            type Output = CycNum;
            fn $method(self, rhs: &'b CycNum) -> CycNum {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);

impl Field for CycNum {
    fn inv(&self) -> Option<Self> {
        self.inverse()
    }
    fn from_rat(r: Rat) -> Self {
        Self::from_rational(r)
    }
    fn conj(&self) -> Self {
        self.conjugate()
    }
    fn to_rat(&self) -> Option<Rat> {
        if self.n == 1 {
            Some(self.c.first().cloned().unwrap_or_else(Rat::zero))
        } else {
            None
        }
    }
}

impl From<Rat> for CycNum {
    fn from(r: Rat) -> Self {
        Self::from_rational(r)
    }
}

impl fmt::Display for CycNum {
    /// Text form using `zN` for `zeta_N`, e.g. `1/2 - 3*z12^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let z = match j {
                0 => String::new(),
                1 => format!("z{}", self.n),
                _ => format!("z{}^{}", self.n, j),
            };
            if j == 0 {
                write!(f, "{}", rat_to_string(&a))?;
            } else if a.is_one() {
                write!(f, "{z}")?;
            } else {
                write!(f, "{}*{z}", rat_to_string(&a))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum({self})")
    }
}

fn int_to_json(b: &BigInt) -> serde_json::Value {
    match b.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(b.to_string()),
    }
}

fn json_to_int(v: &serde_json::Value) -> std::result::Result<BigInt, String> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| format!("non-integer coefficient {n}")),
        serde_json::Value::String(s) => s.parse::<BigInt>().map_err(|e| e.to_string()),
        other => Err(format!("expected integer, got {other}")),
    }
}

impl CycNum {
    /// JSON form `{"N": N, "c": [[j, num, den], ...]}`.
    pub fn to_json(&self) -> serde_json::Value {
        self.to_json_in(self.n)
    }

    /// JSON form with coordinates in `Q(zeta_n)` (rationals embed in every field).
    pub fn to_json_in(&self, n: u32) -> serde_json::Value {
        let coords = self.coords_in(n);
        let c: Vec<serde_json::Value> = coords
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(j, x)| serde_json::json!([j, int_to_json(x.numer()), int_to_json(x.denom())]))
            .collect();
        serde_json::json!({ "N": n, "c": c })
    }

    /// Parses the JSON form, rejecting anything that is not canonical.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = |m: String| Error::Parse(format!("cyclotomic number: {m}"));
        let n = v
            .get("N")
            .and_then(|x| x.as_u64())
            .filter(|&n| n >= 1 && n <= u32::MAX as u64)
            .ok_or_else(|| bad("missing or invalid \"N\"".into()))? as u32;
        let entries = v.get("c").and_then(|x| x.as_array()).ok_or_else(|| bad("missing \"c\"".into()))?;
        let phi = euler_phi(n);
        let mut coords = vec![Rat::zero(); phi];
        let mut last: Option<usize> = None;
        for e in entries {
            let arr = e.as_array().filter(|a| a.len() == 3).ok_or_else(|| bad("entry must be [j, num, den]".into()))?;
            let j = arr[0].as_u64().ok_or_else(|| bad("exponent must be a nonnegative integer".into()))? as usize;
            if j >= phi {
                return Err(bad(format!("exponent {j} not below phi({n}) = {phi}")));
            }
            if last.is_some_and(|l| j <= l) {
                return Err(bad("exponents must be strictly increasing".into()));
            }
            last = Some(j);
            let num = json_to_int(&arr[1]).map_err(bad)?;
            let den = json_to_int(&arr[2]).map_err(bad)?;
            if !den.is_positive() {
                return Err(bad("denominator must be positive".into()));
            }
            if num.is_zero() {
                return Err(bad("zero coefficients are not canonical".into()));
            }
            if !num.gcd(&den).is_one() {
                return Err(bad("coefficient not in lowest terms".into()));
            }
            coords[j] = Rat::new(num, den);
        }
        Ok(Self::from_parts(n, coords))
    }
}

impl Serialize for CycNum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        CycNum::from_json(&v).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn cyclotomic_polynomials() {
        let to_i: fn(u32) -> Vec<i64> = |n| cyclotomic_polynomial(n).iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(to_i(1), vec![-1, 1]);
        assert_eq!(to_i(3), vec![1, 1, 1]);
        assert_eq!(to_i(4), vec![1, 0, 1]);
        assert_eq!(to_i(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn zeta4_squared() {
        let z = CycNum::zeta(4);
        assert_eq!(z.clone() * &z, CycNum::from_int(-1));
    }

    #[test]
    fn additive_identity() {
        let a = CycNum::zeta(5) + CycNum::from_rational(rat(3, 7));
        assert_eq!(a.clone() + CycNum::zero(), a);
    }

    #[test]
    fn zeta3_plus_square() {
        let z = CycNum::zeta(3);
        assert_eq!(z.clone() + z.pow(2), CycNum::from_int(-1));
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(CycNum::zeta(4).conjugate(), -CycNum::zeta(4));
        let r = CycNum::from_rational(rat(3, 2));
        assert_eq!(r.conjugate(), r);
        assert_eq!(CycNum::zeta(3).conjugate(), CycNum::from_int(-1) - CycNum::zeta(3));
    }

    #[test]
    fn division_and_errors() {
        let a = CycNum::zeta(12) + CycNum::from_int(2);
        let b = CycNum::zeta(12).pow(5) - CycNum::from_rational(rat(1, 3));
        let q = a.checked_div(&b).unwrap();
        assert_eq!(q * &b, a);
        assert_eq!(a.checked_div(&CycNum::zero()), Err(Error::DivisionByZero));
        assert_eq!(
            CycNum::zeta(3).checked_add(&CycNum::zeta(5)),
            Err(Error::ConductorMismatch(3, 5))
        );
    }

    #[test]
    fn rationals_are_canonical_in_every_field() {
        let z = CycNum::zeta(8);
        let x = z.pow(4); // -1
        assert!(x.is_rational());
        assert_eq!(x, CycNum::from_int(-1));
        assert_eq!((z.clone() - &z).coeffs().len(), 0);
    }

    #[test]
    fn roots_of_unity() {
        let w = CycNum::root_of_unity(12, 3, 1).unwrap();
        assert_eq!(w.pow(3), CycNum::one());
        assert_ne!(w, CycNum::one());
        assert!(CycNum::root_of_unity(12, 5, 1).is_err());
        assert_eq!(CycNum::root_of_unity(6, 2, 1).unwrap(), CycNum::from_int(-1));
    }

    #[test]
    fn json_roundtrip_and_validation() {
        let a = CycNum::zeta(12).scale(&rat(-3, 2)) + CycNum::from_int(5);
        let j = a.to_json();
        assert_eq!(CycNum::from_json(&j).unwrap(), a);
        let bad = serde_json::json!({"N": 4, "c": [[0, 2, 4]]});
        assert!(CycNum::from_json(&bad).is_err());
        let bad = serde_json::json!({"N": 4, "c": [[2, 1, 1]]});
        assert!(CycNum::from_json(&bad).is_err());
        let bad = serde_json::json!({"N": 4, "c": [[1, 0, 1]]});
        assert!(CycNum::from_json(&bad).is_err());
    }

    #[test]
    fn display() {
        let a = CycNum::from_rational(rat(1, 2)) - CycNum::zeta(12).pow(2).scale(&rat(3, 1));
        assert_eq!(a.to_string(), "1/2 - 3*z12^2");
    }
}
