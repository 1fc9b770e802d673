//! Turning command-line flags into a group, a multiplicity and caps.

use std::path::Path;

use cherednik::groups::{GroupSpec, MultiplicityFile};
use cherednik::parse::{parse_poly, parse_vector};
use cherednik::{CycNum, Family, Multiplicity, Poly, ReflectionGroup};
use clap::Args;
use serde_json::{json, Value};

/// A configuration problem; always exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl UsageError {
    pub fn flag(flag: &str, msg: impl std::fmt::Display) -> Self {
        UsageError(format!("{flag}: {msg}"))
    }
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Group JSON file (family, params, conductor, generators).
    #[arg(long, global = true, value_name = "FILE", conflicts_with = "family")]
    pub group: Option<String>,

    /// Built-in family: cyclic, dihedral, symmetric, G, B, or "G(m,p,n)".
    #[arg(long, global = true, value_name = "NAME")]
    pub family: Option<String>,

    #[arg(long, global = true, value_name = "INT")]
    pub n: Option<u32>,

    #[arg(long, global = true, value_name = "INT")]
    pub m: Option<u32>,

    /// The parameter p of `--family G`, or the operator polynomial of
    /// `cm commutator` and `quasi stability`. Use `--family "G(m,p,n)"` when
    /// both are needed.
    #[arg(long, global = true, value_name = "INT|POLY", allow_hyphen_values = true)]
    pub p: Option<String>,

    /// Multiplicity: a JSON file, a single value for every orbit, or per-orbit
    /// lists such as "0,1;0,2". Defaults to k = 0.
    #[arg(long, global = true, value_name = "FILE|CSV")]
    pub k: Option<String>,

    /// Degree cap for checks and module computations.
    #[arg(long, global = true, value_name = "INT")]
    pub max_degree: Option<u32>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Text)]
    pub out: OutFormat,

    /// Worker threads (0 = all cores). Output does not depend on this.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    /// Maximal group order accepted during enumeration.
    #[arg(long, global = true, default_value_t = 20000)]
    pub order_cap: usize,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutFormat {
    Text,
    Json,
}

pub const DEFAULT_MAX_DEGREE: u32 = 6;

impl GlobalArgs {
    pub fn max_degree(&self) -> u32 {
        self.max_degree.unwrap_or(DEFAULT_MAX_DEGREE)
    }

    fn need(&self, v: Option<u32>, flag: &str, family: &str) -> Result<u32, UsageError> {
        v.ok_or_else(|| UsageError::flag(flag, format!("required for --family {family}")))
    }

    fn group_p(&self) -> Result<u32, UsageError> {
        let p = self.p.as_deref().ok_or_else(|| UsageError::flag("--p", "required for --family G"))?;
        p.parse().map_err(|_| UsageError::flag("--p", format!("expected an integer, got {p:?}")))
    }

    fn plain_g(&self) -> bool {
        self.family.as_deref().is_some_and(|f| f.eq_ignore_ascii_case("g"))
    }

    pub fn family(&self) -> Result<Family, UsageError> {
        let name = self.family.as_deref().ok_or_else(|| UsageError::flag("--family", "give --family or --group"))?;
        if let Some(args) = name.strip_prefix(['G', 'g']).and_then(|r| r.strip_prefix('(')).and_then(|r| r.strip_suffix(')')) {
            let v: Vec<u32> = args
                .split(',')
                .map(|s| s.trim().parse())
                .collect::<Result<_, _>>()
                .map_err(|_| UsageError::flag("--family", format!("bad parameters in {name:?}")))?;
            return match v[..] {
                [m, p, n] => Ok(Family::G { m, p, n }),
                _ => Err(UsageError::flag("--family", format!("expected G(m,p,n), got {name:?}"))),
            };
        }
        Ok(match name.to_ascii_lowercase().as_str() {
            "cyclic" => Family::Cyclic { n: self.need(self.n, "--n", name)? },
            "dihedral" => Family::Dihedral { m: self.need(self.m.or(self.n), "--m", name)? },
            "symmetric" => Family::Symmetric { n: self.need(self.n, "--n", name)? },
            "g" => Family::G { m: self.need(self.m, "--m", name)?, p: self.group_p()?, n: self.need(self.n, "--n", name)? },
            "b" => Family::G { m: 2, p: 1, n: self.need(self.n, "--n", name)? },
            _ => return Err(UsageError::flag("--family", format!("unknown family {name:?}"))),
        })
    }

    pub fn build_group(&self) -> Result<ReflectionGroup, UsageError> {
        if self.order_cap == 0 {
            return Err(UsageError::flag("--order-cap", "must be positive"));
        }
        let built = match &self.group {
            Some(path) => GroupSpec::load(path).and_then(|s| s.build(self.order_cap)),
            None => self.family()?.build(self.order_cap),
        };
        let flag = if self.group.is_some() { "--group" } else { "--family" };
        built.map_err(|e| UsageError::flag(flag, e))
    }

    pub fn multiplicity(&self, g: &ReflectionGroup) -> Result<Multiplicity, UsageError> {
        let Some(text) = &self.k else { return Ok(Multiplicity::zero(g)) };
        let parsed = if Path::new(text).is_file() {
            MultiplicityFile::load(text).and_then(|f| f.to_multiplicity(g))
        } else {
            Multiplicity::parse(g, text)
        };
        parsed.map_err(|e| UsageError::flag("--k", e))
    }

    /// The operator polynomial given by `--p`.
    pub fn operator_text(&self) -> Result<&str, UsageError> {
        if self.plain_g() {
            return Err(UsageError::flag("--p", "names the group parameter here; use --family \"G(m,p,n)\""));
        }
        self.p.as_deref().ok_or_else(|| UsageError::flag("--p", "an operator polynomial is required"))
    }

    pub fn caps(&self, extra: Value) -> Value {
        let mut caps = json!({ "max_degree": self.max_degree(), "order_cap": self.order_cap });
        if let (Value::Object(c), Value::Object(e)) = (&mut caps, extra) {
            c.extend(e);
        }
        caps
    }
}

pub fn poly(g: &ReflectionGroup, text: &str, flag: &str) -> Result<Poly, UsageError> {
    parse_poly(text, g.dim, g.conductor).map_err(|e| UsageError::flag(flag, e))
}

pub fn vector(g: &ReflectionGroup, text: &str, flag: &str) -> Result<Vec<CycNum>, UsageError> {
    parse_vector(text, g.dim, g.conductor).map_err(|e| UsageError::flag(flag, e))
}
