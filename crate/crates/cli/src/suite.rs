//! The property suite: every module-level check for one group and one `k`,
//! run in parallel and reported in a fixed order.

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use cherednik::polyalg::lowest_invariant;

use crate::commands::{self as cmd, CmdError, Ctx};
use crate::config::UsageError;
use crate::output::{Outcome, Status};

#[derive(Clone, Copy, Debug)]
enum Check {
    GroupInfo,
    Spectrum,
    Commutativity,
    Equivariance,
    Relations,
    CalogeroMoser,
    DeRham,
    KzResidues,
    KzFlatness,
    QuasiStructure,
    QuasiHilbert,
    QuasiFreeness,
    QuasiAk,
    BoldStability,
    UkStability,
}

const CHECKS: [Check; 15] = [
    Check::GroupInfo,
    Check::Spectrum,
    Check::Commutativity,
    Check::Equivariance,
    Check::Relations,
    Check::CalogeroMoser,
    Check::DeRham,
    Check::KzResidues,
    Check::KzFlatness,
    Check::QuasiStructure,
    Check::QuasiHilbert,
    Check::QuasiFreeness,
    Check::QuasiAk,
    Check::BoldStability,
    Check::UkStability,
];

/// Degree caps for the more expensive checks.
const RELATIONS_CAP: u32 = 6;
const KZ_CAP: u32 = 4;
const AK_CAP: u32 = 6;
const BOLD_CAP: u32 = 6;

impl Check {
    fn name(self) -> &'static str {
        match self {
            Check::GroupInfo => "group_info",
            Check::Spectrum => "z_spectrum",
            Check::Commutativity => "dunkl_commutativity",
            Check::Equivariance => "dunkl_equivariance",
            Check::Relations => "cherednik_relations",
            Check::CalogeroMoser => "calogero_moser",
            Check::DeRham => "derham",
            Check::KzResidues => "kz_residues",
            Check::KzFlatness => "kz_flatness",
            Check::QuasiStructure => "qk_module_structure",
            Check::QuasiHilbert => "qk_hilbert",
            Check::QuasiFreeness => "qk_freeness",
            Check::QuasiAk => "ak",
            Check::BoldStability => "bold_qk_stability",
            Check::UkStability => "uk_stability",
        }
    }

    fn quasi(self) -> bool {
        matches!(
            self,
            Check::QuasiStructure
                | Check::QuasiHilbert
                | Check::QuasiFreeness
                | Check::QuasiAk
                | Check::BoldStability
                | Check::UkStability
        )
    }

    /// `None` when the check does not apply to this input.
    fn run(self, c: &Ctx, d: u32) -> Option<Result<Outcome, CmdError>> {
        if self.quasi() && !c.k.is_integral_nonnegative() {
            return None;
        }
        if matches!(self, Check::CalogeroMoser) && !c.g.is_coxeter() {
            return None;
        }
        Some(match self {
            Check::GroupInfo => cmd::info(c),
            Check::Spectrum => cmd::spectrum(c),
            Check::Commutativity => cmd::commutativity(c, d),
            Check::Equivariance => cmd::equivariance(c, d),
            Check::Relations => cmd::relations(c, d.min(RELATIONS_CAP)),
            Check::CalogeroMoser => cmd::cm_check(c),
            Check::DeRham => cmd::derham_check(c, d),
            Check::KzResidues => cmd::kz_residue_matrices(c, "reflection"),
            Check::KzFlatness => cmd::kz_flatness(c, "reflection", d.min(KZ_CAP)),
            Check::QuasiStructure => cmd::quasi_structure(c, d),
            Check::QuasiHilbert => cmd::quasi_hilbert(c, d),
            Check::QuasiFreeness => cmd::quasi_freeness(c, d),
            Check::QuasiAk => cmd::quasi_ak(c, d.min(AK_CAP)),
            Check::BoldStability => cmd::quasi_bold_stability(c, d.min(BOLD_CAP)),
            Check::UkStability => cmd::quasi_stability(c, &lowest_invariant(c.g), d),
        })
    }
}

/// Runs every applicable check. Inconclusive certificates (the degree cap
/// is too small) are listed but do not fail the suite.
pub fn run(c: &Ctx, d: u32) -> Result<Outcome, UsageError> {
    let results: Vec<(Check, Option<Result<Outcome, CmdError>>)> =
        CHECKS.par_iter().map(|&chk| (chk, chk.run(c, d))).collect();
    let mut entries = Map::new();
    let mut counts = [0usize; 4];
    let mut first_failure = Value::Null;
    for (chk, res) in results {
        let (status, body) = match res {
            None => ("skipped", Map::new()),
            Some(Ok(o)) | Some(Err(CmdError::Outcome(o))) => (o.status.as_str(), o.body),
            Some(Err(CmdError::Usage(e))) => return Err(e),
        };
        match status {
            "pass" => counts[0] += 1,
            "fail" => {
                counts[1] += 1;
                if first_failure.is_null() {
                    first_failure = json!(format!("{}: {}", chk.name(), body.get("witness").unwrap_or(&Value::Null)));
                }
            }
            "inconclusive" => counts[2] += 1,
            _ => counts[3] += 1,
        }
        let mut entry = Map::new();
        entry.insert("status".into(), status.into());
        entry.insert("pass".into(), body.get("pass").cloned().unwrap_or(Value::Null));
        entry.insert("witness".into(), body.get("witness").cloned().unwrap_or(Value::Null));
        if let Some(v) = body.get("checked") {
            entry.insert("checked".into(), v.clone());
        }
        entry.insert("result".into(), Value::Object(body));
        entries.insert(chk.name().to_string(), Value::Object(entry));
    }
    let ok = counts[1] == 0;
    Ok(Outcome::new(Status::of(ok))
        .with("pass", ok.into())
        .with("witness", first_failure)
        .with("summary", json!({ "pass": counts[0], "fail": counts[1], "inconclusive": counts[2], "skipped": counts[3] }))
        .with("checks", Value::Object(entries)))
}
