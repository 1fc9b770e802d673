//! `cherednik`: command-line front end for the exact engine.
//!
//! Exit status: 0 on success, 1 when a property fails or a certificate is
//! inconclusive at the given degree cap, 2 on usage or configuration errors.

mod commands;
mod config;
mod output;
mod suite;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use commands::{CmdError, CmdResult, Ctx};
use config::{GlobalArgs, UsageError};
use output::{render, Headers};

#[derive(Parser, Debug)]
#[command(name = "cherednik", version, about = "Exact Dunkl operators, Cherednik algebras and quasi-invariants")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reflection group data.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Dunkl operators and the Cherednik relations.
    #[command(subcommand)]
    Dunkl(DunklCmd),
    /// Calogero–Moser operators.
    #[command(subcommand)]
    Cm(CmCmd),
    /// The deformed de Rham complex and its intertwiner.
    #[command(subcommand)]
    Derham(DerhamCmd),
    /// The KZ connection.
    #[command(subcommand)]
    Kz(KzCmd),
    /// Quasi-invariants.
    #[command(subcommand)]
    Quasi(QuasiCmd),
    /// Every applicable check for one group and multiplicity.
    Suite,
}

#[derive(Subcommand, Debug)]
enum GroupCmd {
    /// Order, hyperplanes, orbits and fundamental degrees.
    Info,
    /// Centrality of z(k) and its spectrum on the regular representation.
    Spectrum,
}

#[derive(Subcommand, Debug)]
enum DunklCmd {
    /// Apply T_xi(k) to a polynomial.
    Apply {
        /// Direction: `e1`, or comma-separated coordinates.
        #[arg(long, default_value = "e1")]
        xi: String,
        /// Polynomial such as "3/2*x1^2*x2 - z3*x3".
        #[arg(long)]
        poly: String,
    },
    /// [T_i, T_j] = 0 on all monomials up to the degree cap.
    CheckCommutativity,
    /// w T_xi w^-1 = T_{w xi} on all monomials up to the degree cap.
    Equivariance,
    /// The Cherednik relations as operators.
    Relations,
    /// Which conjugate of the gradient-type operator equals T(k) (Coxeter groups, integral k).
    Probe,
}

#[derive(Subcommand, Debug)]
enum CmCmd {
    /// [L_p, L_q] in normal form (`--p` and `--q` are polynomials such as "p2").
    Commutator {
        #[arg(long)]
        q: String,
    },
    /// Restriction of the squared gradient-type operator against the
    /// Calogero–Moser Hamiltonian, with c = k.
    Check,
}

#[derive(Subcommand, Debug)]
enum DerhamCmd {
    /// Homotopy identity, d(k)^2 = 0 and the intertwiner status.
    Check {
        /// Bound on form degree plus polynomial degree.
        #[arg(long)]
        max_total_degree: Option<u32>,
    },
    /// The intertwiner S(k) degree by degree.
    Intertwiner {
        #[arg(long)]
        max_total_degree: Option<u32>,
    },
}

#[derive(Subcommand, Debug)]
enum KzCmd {
    /// Residue matrices B_H and their equivariance.
    Residues {
        /// trivial, det, reflection, standard or regular.
        #[arg(long, default_value = "reflection")]
        tau: String,
    },
    /// Curvature and the codimension-two residue criterion.
    Flatness {
        #[arg(long, default_value = "reflection")]
        tau: String,
    },
}

#[derive(Subcommand, Debug)]
enum QuasiCmd {
    /// A basis of the degree-d slice of Q_k.
    Basis {
        #[arg(long)]
        degree: u32,
    },
    /// Whether a polynomial lies in Q_k.
    Membership {
        #[arg(long)]
        poly: String,
    },
    /// Hilbert series numerator of Q_k over the invariants.
    Hilbert,
    /// Homogeneous free generators of Q_k over the invariants.
    Freeness,
    /// Module structure of Q_k over the invariants (products stay in Q_k).
    Structure,
    /// The ring A_k of multipliers as Q_k'.
    Ak,
    /// A basis of the degree-d slice of the group-algebra-valued quasi-invariants.
    Bold {
        #[arg(long)]
        degree: u32,
    },
    /// Stability of the group-algebra-valued quasi-invariants.
    BoldStability,
    /// Stability of Q_k under L_p (`--p` is a polynomial such as "p2").
    Stability,
}

impl Command {
    fn name(&self) -> String {
        let (head, tail) = match self {
            Command::Group(c) => ("group", format!("{c:?}")),
            Command::Dunkl(c) => ("dunkl", format!("{c:?}")),
            Command::Cm(c) => ("cm", format!("{c:?}")),
            Command::Derham(c) => ("derham", format!("{c:?}")),
            Command::Kz(c) => ("kz", format!("{c:?}")),
            Command::Quasi(c) => ("quasi", format!("{c:?}")),
            Command::Suite => return "suite".into(),
        };
        let word: String = tail.chars().take_while(|c| c.is_alphanumeric()).collect();
        let mut kebab = String::new();
        for (i, ch) in word.chars().enumerate() {
            if ch.is_uppercase() && i > 0 {
                kebab.push('-');
            }
            kebab.push(ch.to_ascii_lowercase());
        }
        format!("{head} {kebab}")
    }

    /// Degree caps beyond `--max-degree` that this command uses.
    fn caps(&self, a: &GlobalArgs) -> serde_json::Value {
        match self {
            Command::Derham(DerhamCmd::Check { max_total_degree }) => json!({
                "max_total_degree": max_total_degree.unwrap_or(a.max_degree()),
                "intertwiner_max_total_degree": max_total_degree.unwrap_or(a.max_degree()).min(commands::INTERTWINER_CAP),
            }),
            Command::Derham(DerhamCmd::Intertwiner { max_total_degree }) => {
                json!({ "max_total_degree": max_total_degree.unwrap_or(a.max_degree()) })
            }
            Command::Quasi(QuasiCmd::Basis { degree } | QuasiCmd::Bold { degree }) => json!({ "degree": degree }),
            _ => json!({}),
        }
    }
}

fn dispatch(cmd: &Command, a: &GlobalArgs, c: &Ctx) -> CmdResult {
    let d = a.max_degree();
    match cmd {
        Command::Group(GroupCmd::Info) => commands::info(c),
        Command::Group(GroupCmd::Spectrum) => commands::spectrum(c),
        Command::Dunkl(DunklCmd::Apply { xi, poly }) => commands::dunkl_apply(c, xi, poly),
        Command::Dunkl(DunklCmd::CheckCommutativity) => commands::commutativity(c, d),
        Command::Dunkl(DunklCmd::Equivariance) => commands::equivariance(c, d),
        Command::Dunkl(DunklCmd::Relations) => commands::relations(c, d),
        Command::Dunkl(DunklCmd::Probe) => commands::probe(c, d),
        Command::Cm(CmCmd::Commutator { q }) => {
            commands::cm_bracket(c, a.operator_text()?, q)
        }
        Command::Cm(CmCmd::Check) => commands::cm_check(c),
        Command::Derham(DerhamCmd::Check { max_total_degree }) => {
            commands::derham_check(c, max_total_degree.unwrap_or(d))
        }
        Command::Derham(DerhamCmd::Intertwiner { max_total_degree }) => {
            commands::derham_intertwiner(c, max_total_degree.unwrap_or(d))
        }
        Command::Kz(KzCmd::Residues { tau }) => commands::kz_residue_matrices(c, tau),
        Command::Kz(KzCmd::Flatness { tau }) => commands::kz_flatness(c, tau, d),
        Command::Quasi(QuasiCmd::Basis { degree }) => commands::quasi_basis(c, *degree),
        Command::Quasi(QuasiCmd::Membership { poly }) => commands::quasi_membership(c, poly),
        Command::Quasi(QuasiCmd::Hilbert) => commands::quasi_hilbert(c, d),
        Command::Quasi(QuasiCmd::Freeness) => commands::quasi_freeness(c, d),
        Command::Quasi(QuasiCmd::Structure) => commands::quasi_structure(c, d),
        Command::Quasi(QuasiCmd::Ak) => commands::quasi_ak(c, d),
        Command::Quasi(QuasiCmd::Bold { degree }) => commands::quasi_bold(c, *degree),
        Command::Quasi(QuasiCmd::BoldStability) => commands::quasi_bold_stability(c, d),
        Command::Quasi(QuasiCmd::Stability) => {
            let p = config::poly(c.g, a.operator_text()?, "--p")?;
            commands::quasi_stability(c, &p, d)
        }
        Command::Suite => suite::run(c, d).map_err(CmdError::Usage),
    }
}

fn usage(e: UsageError) -> ExitCode {
    eprintln!("error: {}", e.0);
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let a = &cli.global;
    if a.max_degree == Some(0) && matches!(cli.command, Command::Suite) {
        return usage(UsageError::flag("--max-degree", "must be positive"));
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(a.threads).build() {
        Ok(p) => p,
        Err(e) => return usage(UsageError::flag("--threads", e)),
    };
    let g = match a.build_group() {
        Ok(g) => g,
        Err(e) => return usage(e),
    };
    let k = match a.multiplicity(&g) {
        Ok(k) => k,
        Err(e) => return usage(e),
    };
    let ctx = Ctx { g: &g, k: &k };
    let outcome = match pool.install(|| dispatch(&cli.command, a, &ctx)) {
        Ok(o) | Err(CmdError::Outcome(o)) => o,
        Err(CmdError::Usage(e)) => return usage(e),
    };
    let headers = Headers { command: cli.command.name(), group: g.label(), k: k.to_string(), caps: a.caps(cli.command.caps(a)) };
    print!("{}", render(&headers, &outcome, a.out));
    ExitCode::from(outcome.status.exit_code() as u8)
}
