//! Text syntax for polynomials, e.g. `3/2*x1^2*x2 - z3*x3`.
//!
//! `zN` is `exp(2 pi i / N)` (embedded in the requested field), `xI` or `xiI`
//! is the `I`-th coordinate (1-based) and `pN` is the power sum
//! `x1^N + ... + xn^N`. Division is only allowed by nonzero constants.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::poly::MPoly;
use crate::scalar::Field;

type P = MPoly<CycNum>;

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    nvars: usize,
    conductor: u32,
}

fn err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(err(format!("expected a number at offset {start}")));
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(text.parse().unwrap())
    }

    fn small(&mut self) -> Result<u32> {
        let n = self.number()?;
        u32::try_from(n).map_err(|_| err("number too large"))
    }

    fn expr(&mut self) -> Result<P> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<P> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.power()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.power()?;
                    let c = if d.is_zero() || d.degree() != Some(0) {
                        return Err(err("division only by nonzero constants"));
                    } else {
                        d.constant_term()
                    };
                    acc = acc.scale(&c.inv().ok_or_else(|| err("division by zero"))?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<P> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.small()?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn var_index(&mut self) -> Result<usize> {
        let i = self.small()? as usize;
        if i == 0 || i > self.nvars {
            return Err(err(format!("variable index {i} out of range 1..={}", self.nvars)));
        }
        Ok(i - 1)
    }

    fn atom(&mut self) -> Result<P> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(err("missing ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                Ok(MPoly::constant(self.nvars, CycNum::from_rational(n.into())))
            }
            Some(b'z') => {
                self.pos += 1;
                let order = self.small()?;
                let z = CycNum::root_of_unity(self.conductor, order, 1)?;
                Ok(MPoly::constant(self.nvars, z))
            }
            Some(b'x') => {
                self.pos += 1;
                if self.s.get(self.pos) == Some(&b'i') {
                    self.pos += 1;
                }
                let bare = !self.s.get(self.pos).is_some_and(|c| c.is_ascii_digit());
                let i = if bare && self.nvars == 1 { 0 } else { self.var_index()? };
                Ok(MPoly::var(self.nvars, i))
            }
            Some(b'p') => {
                self.pos += 1;
                let d = self.small()?;
                Ok(power_sum(self.nvars, d))
            }
            Some(c) => Err(err(format!("unexpected character {:?} at offset {}", c as char, self.pos))),
            None => Err(err("unexpected end of input")),
        }
    }
}

/// `x1^d + ... + xn^d`.
pub fn power_sum(nvars: usize, d: u32) -> P {
    let mut out = MPoly::zero(nvars);
    for i in 0..nvars {
        out.add_assign(&MPoly::var(nvars, i).pow(d));
    }
    out
}

/// Parses a polynomial in `nvars` variables with scalars in `Q(zeta_conductor)`.
pub fn parse_poly(text: &str, nvars: usize, conductor: u32) -> Result<P> {
    let mut p = Parser { s: text.as_bytes(), pos: 0, nvars, conductor };
    let out = p.expr()?;
    if p.peek().is_some() {
        return Err(err(format!("trailing input at offset {}", p.pos)));
    }
    Ok(out)
}

/// Parses a scalar such as `-1/2`, `z3^2` or `1 + z4`.
pub fn parse_scalar(text: &str, conductor: u32) -> Result<CycNum> {
    let p = parse_poly(text, 0, conductor)?;
    match p.degree() {
        None => Ok(CycNum::zero()),
        Some(0) => Ok(p.constant_term()),
        _ => Err(err("expected a scalar")),
    }
}

/// Parses a vector like `e1`, `1,0,-1` or `z4,1`.
pub fn parse_vector(text: &str, dim: usize, conductor: u32) -> Result<Vec<CycNum>> {
    let t = text.trim();
    if let Some(rest) = t.strip_prefix('e') {
        let i: usize = rest.parse().map_err(|_| err(format!("bad basis vector {t:?}")))?;
        if i == 0 || i > dim {
            return Err(err(format!("basis vector index {i} out of range 1..={dim}")));
        }
        return Ok((0..dim).map(|j| if j + 1 == i { CycNum::one() } else { CycNum::zero() }).collect());
    }
    let v = t.split(',').map(|s| parse_scalar(s, conductor)).collect::<Result<Vec<_>>>()?;
    if v.len() != dim {
        return Err(err(format!("vector has {} entries, expected {dim}", v.len())));
    }
    Ok(v)
}
