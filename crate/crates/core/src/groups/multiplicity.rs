use std::fmt;

use num_traits::{Signed, Zero};

use super::ReflectionGroup;
use crate::error::{Error, Result};
use crate::scalar::{rat_to_string, Rat};

/// Parameters `k_{C,i}` per hyperplane orbit `C`, with `k_{C,0} = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Multiplicity {
    values: Vec<Vec<Rat>>,
}

impl Multiplicity {
    /// Validates shape against the group and the `k_{C,0} = 0` convention.
    pub fn new(g: &ReflectionGroup, values: Vec<Vec<Rat>>) -> Result<Self> {
        if values.len() != g.orbits.len() {
            return Err(Error::InvalidMultiplicity(format!(
                "expected {} orbit(s), got {}",
                g.orbits.len(),
                values.len()
            )));
        }
        for (c, v) in values.iter().enumerate() {
            let n = g.orbit_order(c);
            if v.len() != n {
                return Err(Error::InvalidMultiplicity(format!(
                    "orbit {c} has n_C = {n} but {} values were given",
                    v.len()
                )));
            }
            if !v[0].is_zero() {
                return Err(Error::InvalidMultiplicity(format!("k_{{{c},0}} must be 0")));
            }
        }
        Ok(Multiplicity { values })
    }

    /// `k_{C,i} = k` for every orbit and every `i >= 1`.
    pub fn uniform(g: &ReflectionGroup, k: Rat) -> Self {
        let values = (0..g.orbits.len())
            .map(|c| {
                let n = g.orbit_order(c);
                (0..n).map(|i| if i == 0 { Rat::zero() } else { k.clone() }).collect()
            })
            .collect();
        Multiplicity { values }
    }

    pub fn zero(g: &ReflectionGroup) -> Self {
        Self::uniform(g, Rat::zero())
    }

    /// Parses `"1"` (uniform) or per-orbit CSV `"0,1;0,2"`.
    pub fn parse(g: &ReflectionGroup, text: &str) -> Result<Self> {
        let text = text.trim();
        let parse_rat = |s: &str| -> Result<Rat> {
            s.trim()
                .parse::<Rat>()
                .map_err(|_| Error::InvalidMultiplicity(format!("not a rational number: {s:?}")))
        };
        if !text.contains(',') && !text.contains(';') {
            return Ok(Self::uniform(g, parse_rat(text)?));
        }
        let values = text
            .split(';')
            .map(|orbit| orbit.split(',').map(parse_rat).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(g, values)
    }

    pub fn orbits(&self) -> &[Vec<Rat>] {
        &self.values
    }

    /// `k_{C,i}` with `i` read modulo `n_C`.
    pub fn get(&self, orbit: usize, i: i64) -> &Rat {
        let v = &self.values[orbit];
        &v[i.rem_euclid(v.len() as i64) as usize]
    }

    /// `k_{H,i}` for a hyperplane.
    pub fn for_hyperplane(&self, g: &ReflectionGroup, h: usize, i: i64) -> &Rat {
        self.get(g.hyperplanes[h].orbit, i)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().flatten().all(|x| x.is_zero())
    }

    pub fn is_integral_nonnegative(&self) -> bool {
        self.values.iter().flatten().all(|x| x.is_integer() && !x.is_negative())
    }

    /// Integer values, for quasi-invariant computations.
    pub fn as_integers(&self) -> Result<Vec<Vec<u32>>> {
        if !self.is_integral_nonnegative() {
            return Err(Error::InvalidMultiplicity("k must be integral and nonnegative".into()));
        }
        Ok(self
            .values
            .iter()
            .map(|v| v.iter().map(|x| num_traits::ToPrimitive::to_u32(x.numer()).unwrap()).collect())
            .collect())
    }

    pub fn from_integers(g: &ReflectionGroup, values: Vec<Vec<u32>>) -> Result<Self> {
        Self::new(g, values.into_iter().map(|v| v.into_iter().map(|x| Rat::from_integer(x.into())).collect()).collect())
    }

    /// Entrywise `self <= other`.
    pub fn le(&self, other: &Multiplicity) -> bool {
        self.values.iter().flatten().zip(other.values.iter().flatten()).all(|(a, b)| a <= b)
    }

    pub fn scaled(&self, s: &Rat) -> Self {
        Multiplicity { values: self.values.iter().map(|v| v.iter().map(|x| x * s).collect()).collect() }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "orbits": self.values.iter().map(|v| v.iter().map(rat_to_string).collect::<Vec<_>>()).collect::<Vec<_>>()
        })
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.values.iter().map(|v| v.iter().map(rat_to_string).collect::<Vec<_>>().join(",")).collect();
        write!(f, "{}", parts.join(";"))
    }
}
