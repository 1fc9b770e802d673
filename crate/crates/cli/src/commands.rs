//! One function per leaf subcommand.

use cherednik::derham::{check_d_squared, check_homotopy, intertwiner};
use cherednik::dunkl::{
    calogero_moser_check, check_cherednik_relations, check_commutativity, check_equivariance, cm_commutator,
    conjugation_probe, Dunkl,
};
use cherednik::groups::{RepKind, WRepresentation};
use cherednik::kzconn::{check_flatness, check_residues, kz_residues};
use cherednik::quasiinv::{
    ak_compute, bold_qk_basis, check_bold_stability, check_module_structure, check_uk_stability,
    freeness_certificate, qk_basis, qk_hilbert, qk_membership, QuasiModule,
};
use cherednik::report::Report;
use cherednik::scalar::rat_to_string;
use cherednik::{Error, Multiplicity, ReflectionGroup};
use serde_json::{json, Value};

use crate::config::UsageError;
use crate::output::{Outcome, Status};

/// Why a command did not produce an outcome of its own.
#[derive(Debug)]
pub enum CmdError {
    Usage(UsageError),
    /// An engine failure that counts as a property failure or an
    /// inconclusive result.
    Outcome(Outcome),
}

impl From<UsageError> for CmdError {
    fn from(e: UsageError) -> Self {
        CmdError::Usage(e)
    }
}

impl From<Error> for CmdError {
    fn from(e: Error) -> Self {
        let flag = match &e {
            Error::InvalidMultiplicity(_) => "--k",
            Error::InvalidRepresentation(_) => "--tau",
            Error::NotCoxeter | Error::CapExceeded { .. } => "--family",
            Error::Parse(_) | Error::Invalid(_) => "input",
            _ => return CmdError::Outcome(Outcome::from_error(&e)),
        };
        CmdError::Usage(UsageError::flag(flag, e))
    }
}

pub type CmdResult = Result<Outcome, CmdError>;

/// Shared inputs of every command.
pub struct Ctx<'a> {
    pub g: &'a ReflectionGroup,
    pub k: &'a Multiplicity,
}

pub fn report(r: &Report) -> CmdResult {
    Ok(Outcome::from_report(r))
}

pub fn group_info(g: &ReflectionGroup) -> Value {
    json!({
        "label": g.label(),
        "order": g.order(),
        "dim": g.dim,
        "conductor": g.conductor,
        "coxeter": g.is_coxeter(),
        "hyperplanes": g.hyperplanes.len(),
        "hyperplane_orders": g.hyperplanes.iter().map(|h| h.order).collect::<Vec<_>>(),
        "orbits": g.orbits,
        "degrees": g.degrees,
        "product_of_degrees": g.degrees.iter().map(|&d| d as u64).product::<u64>(),
        "delta": g.delta.to_string(),
        "warnings": g.warnings,
    })
}

pub fn info(c: &Ctx) -> CmdResult {
    let g = c.g;
    let product: u64 = g.degrees.iter().map(|&d| d as u64).product();
    let ok = g.degrees.len() == g.dim && product == g.order() as u64;
    let mut out = Outcome::new(Status::of(ok)).with("pass", ok.into());
    if let Value::Object(m) = group_info(g) {
        out.body.extend(m);
    }
    Ok(out)
}

/// Centrality of `z(k)` and its spectrum on the regular representation.
pub fn spectrum(c: &Ctx) -> CmdResult {
    let z = c.g.z_element(c.k);
    let central = c.g.is_central(&z);
    let comps = c.g.regular_spectrum()?;
    let total: usize = comps.iter().map(|s| s.multiplicity).sum();
    let rows: Vec<Value> = comps
        .iter()
        .map(|s| {
            json!({
                "eigenvalue": rat_to_string(&s.value(c.k)),
                "coefficients": s.coefficients,
                "multiplicity": s.multiplicity,
            })
        })
        .collect();
    let ok = central && total == c.g.order();
    Ok(Outcome::new(Status::of(ok))
        .with("pass", ok.into())
        .with("central", central.into())
        .with("spectrum", Value::Array(rows)))
}

pub fn dunkl_apply(c: &Ctx, xi: &str, poly: &str) -> CmdResult {
    let v = crate::config::vector(c.g, xi, "--xi")?;
    let f = crate::config::poly(c.g, poly, "--poly")?;
    let r = Dunkl::new(c.g, c.k).apply(&v, &f)?;
    Ok(Outcome::new(Status::Pass)
        .with("result", r.to_string().into())
        .with("pass", true.into())
        .with("witness", Value::Null))
}

pub fn commutativity(c: &Ctx, d: u32) -> CmdResult {
    report(&check_commutativity(c.g, c.k, d)?)
}

pub fn equivariance(c: &Ctx, d: u32) -> CmdResult {
    report(&check_equivariance(c.g, c.k, d)?)
}

pub fn relations(c: &Ctx, d: u32) -> CmdResult {
    report(&check_cherednik_relations(c.g, c.k, d)?)
}

/// Which conjugate of the gradient-type operator equals `T(k)`; passes when
/// at least one candidate does.
pub fn probe(c: &Ctx, d: u32) -> CmdResult {
    let p = conjugation_probe(c.g, c.k, d)?;
    let ok = !p.passing().is_empty();
    Ok(Outcome::new(Status::of(ok))
        .with("pass", ok.into())
        .with("checked", p.checked.into())
        .with("candidates", serde_json::to_value(&p.candidates).expect("json"))
        .with("witness", if ok { Value::Null } else { "no candidate matches T(k)".into() }))
}

/// `[L_p, L_q]`; passes when it vanishes.
pub fn cm_bracket(c: &Ctx, p: &str, q: &str) -> CmdResult {
    let p = crate::config::poly(c.g, p, "--p")?;
    let q = crate::config::poly(c.g, q, "--q")?;
    let r = cm_commutator(c.g, c.k, &p, &q)?;
    let ok = r.is_zero();
    Ok(Outcome::new(Status::of(ok))
        .with("result", r.to_string().into())
        .with("pass", ok.into())
        .with("witness", if ok { Value::Null } else { r.to_string().into() }))
}

pub fn cm_check(c: &Ctx) -> CmdResult {
    report(&calogero_moser_check(c.g, c.k)?)
}

fn intertwiner_status(c: &Ctx, bound: u32) -> Result<(bool, Value), CmdError> {
    match intertwiner(c.g, c.k, bound) {
        Ok(s) => Ok((s.report.pass, json!({ "status": "ok", "bound": bound, "report": s.report.to_json() }))),
        Err(Error::SingularParameter { eigenvalue }) => {
            Ok((true, json!({ "status": "singular", "eigenvalue": eigenvalue })))
        }
        Err(e) => Err(e.into()),
    }
}

/// Homotopy identity, `d(k)^2 = 0` and the intertwiner status.
pub fn derham_check(c: &Ctx, bound: u32) -> CmdResult {
    let h = check_homotopy(c.g, c.k, bound)?;
    let d2 = check_d_squared(c.g, c.k, bound)?;
    let (s_ok, s) = intertwiner_status(c, bound.min(INTERTWINER_CAP))?;
    let ok = h.pass && d2.pass && s_ok;
    let mut all = Report::new("derham");
    all.absorb(&h);
    all.absorb(&d2);
    Ok(Outcome::new(Status::of(ok))
        .with("pass", ok.into())
        .with("homotopy", h.pass.into())
        .with("d_squared", d2.pass.into())
        .with("intertwiner", s)
        .with("checked", all.checked.into())
        .with("witness", all.witness.map_or(Value::Null, Value::String))
        .with("details", json!({ "homotopy": h.to_json(), "d_squared": d2.to_json() })))
}

/// The intertwiner is checked to total degree at most this in `derham check`.
pub const INTERTWINER_CAP: u32 = 6;

pub fn derham_intertwiner(c: &Ctx, bound: u32) -> CmdResult {
    match intertwiner(c.g, c.k, bound) {
        Ok(s) => {
            let mut out = Outcome::new(Status::of(s.report.pass)).with("pass", s.report.pass.into());
            if let Value::Object(m) = s.to_json() {
                out.body.insert("intertwiner".into(), Value::Object(m));
            }
            Ok(out)
        }
        Err(Error::SingularParameter { eigenvalue }) => Ok(Outcome::new(Status::Pass)
            .with("pass", true.into())
            .with("intertwiner", json!({ "status": "singular", "eigenvalue": eigenvalue }))),
        Err(e) => Err(e.into()),
    }
}

pub fn representation(g: &ReflectionGroup, tau: &str) -> Result<WRepresentation, CmdError> {
    let kind = RepKind::parse(tau).map_err(|e| UsageError::flag("--tau", e))?;
    if kind == RepKind::Explicit {
        return Err(UsageError::flag("--tau", "explicit representations are only available through the library").into());
    }
    WRepresentation::of_kind(g, kind).map_err(|e| UsageError::flag("--tau", e).into())
}

pub fn kz_residue_matrices(c: &Ctx, tau: &str) -> CmdResult {
    let rep = representation(c.g, tau)?;
    let data = kz_residues(c.g, c.k, &rep);
    let r = check_residues(c.g, c.k, &rep)?;
    Ok(Outcome::from_report(&r).with("tau", tau.into()).with("residues", data.to_json()))
}

pub fn kz_flatness(c: &Ctx, tau: &str, d: u32) -> CmdResult {
    let rep = representation(c.g, tau)?;
    Ok(Outcome::from_report(&check_flatness(c.g, c.k, &rep, d)?).with("tau", tau.into()))
}

fn strings<T: ToString>(xs: &[T]) -> Value {
    Value::Array(xs.iter().map(|x| Value::String(x.to_string())).collect())
}

pub fn quasi_basis(c: &Ctx, d: u32) -> CmdResult {
    let b = qk_basis(c.g, c.k, d)?;
    Ok(Outcome::new(Status::Pass)
        .with("pass", true.into())
        .with("degree", d.into())
        .with("dim", b.len().into())
        .with("basis", strings(&b)))
}

pub fn quasi_membership(c: &Ctx, poly: &str) -> CmdResult {
    let f = crate::config::poly(c.g, poly, "--poly")?;
    Ok(match qk_membership(c.g, c.k, &f)? {
        Ok(()) => Outcome::new(Status::Pass).with("pass", true.into()).with("witness", Value::Null),
        Err(w) => Outcome::new(Status::Fail)
            .with("pass", false.into())
            .with("witness", serde_json::to_value(&w).expect("json")),
    })
}

pub fn quasi_hilbert(c: &Ctx, d: u32) -> CmdResult {
    let h = qk_hilbert(c.g, c.k, d)?;
    Ok(Outcome::new(Status::Pass)
        .with("pass", true.into())
        .with("numerator", h.numerator_text.clone().into())
        .with("p_at_one", h.p_at_one.into())
        .with("hilbert", serde_json::to_value(&h).expect("json")))
}

pub fn quasi_freeness(c: &Ctx, d: u32) -> CmdResult {
    let cert = freeness_certificate(c.g, c.k, d)?;
    Ok(Outcome::from_report(&cert.report).with("certificate", serde_json::to_value(&cert).expect("json")))
}

pub fn quasi_structure(c: &Ctx, d: u32) -> CmdResult {
    let q = QuasiModule::new(c.g, c.k, d)?;
    Ok(Outcome::from_report(&check_module_structure(c.g, &q)?).with("dims", json!(q.hilbert())))
}

pub fn quasi_ak(c: &Ctx, d: u32) -> CmdResult {
    let a = ak_compute(c.g, c.k, d)?;
    Ok(Outcome::from_report(&a.report)
        .with("k_prime", a.k_prime.to_string().into())
        .with("plain_formula_holds", a.plain_formula_holds.into())
        .with("compared_up_to", a.compared_up_to.into()))
}

pub fn quasi_bold(c: &Ctx, d: u32) -> CmdResult {
    let s = bold_qk_basis(c.g, c.k, d)?;
    Ok(Outcome::new(Status::Pass)
        .with("pass", true.into())
        .with("degree", d.into())
        .with("dim", s.dim().into())
        .with("basis", s.to_json(c.g)))
}

pub fn quasi_bold_stability(c: &Ctx, d: u32) -> CmdResult {
    report(&check_bold_stability(c.g, c.k, d)?)
}

pub fn quasi_stability(c: &Ctx, p: &cherednik::Poly, d: u32) -> CmdResult {
    Ok(Outcome::from_report(&check_uk_stability(c.g, c.k, p, d)?).with("p", p.to_string().into()))
}
