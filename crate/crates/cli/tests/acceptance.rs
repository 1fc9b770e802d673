//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use cherednik::derham::{check_d_squared, check_homotopy, intertwiner};
use cherednik::dunkl::{
    calogero_moser_check, check_cherednik_relations, check_commutativity, check_equivariance, cm_commutator,
    DiffReflOp, Dunkl,
};
use cherednik::groups::WRepresentation;
use cherednik::kzconn::{check_flatness, check_residues};
use cherednik::parse::power_sum;
use cherednik::poly::MPoly;
use cherednik::polyalg::{invariant_slice, lowest_invariant};
use cherednik::quasiinv::{
    check_bold_stability, check_uk_stability, freeness_certificate, qk_hilbert, QuasiModule,
};
use cherednik::report::Report;
use cherednik::scalar::{rat, rat_int};
use cherednik::{CMatrix, CycNum, Error, Family, Multiplicity, Rat, ReflectionGroup};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn families() -> Vec<Family> {
    let mut v: Vec<Family> = (2..=6).map(|n| Family::Cyclic { n }).collect();
    v.extend((3..=6).map(|m| Family::Dihedral { m }));
    v.push(Family::Symmetric { n: 3 });
    v.push(Family::Symmetric { n: 4 });
    v.push(Family::G { m: 2, p: 1, n: 2 });
    v.push(Family::G { m: 3, p: 1, n: 2 });
    v
}

fn build(f: &Family) -> ReflectionGroup {
    f.build(10_000).expect("built-in family")
}

fn orbit_order(g: &ReflectionGroup, c: usize) -> usize {
    g.hyperplanes[g.orbits[c][0]].order
}

/// `k in {0, 1, 2}` plus one random positive rational per group.
fn k_grid(g: &ReflectionGroup, rng: &mut ChaCha8Rng) -> Vec<Multiplicity> {
    let mut ks: Vec<Multiplicity> = (0..=2).map(|k| Multiplicity::uniform(g, rat_int(k))).collect();
    let values: Vec<Vec<Rat>> = (0..g.orbits.len())
        .map(|c| {
            let mut row = vec![rat_int(0)];
            row.extend((1..orbit_order(g, c)).map(|_| rat(rng.gen_range(1..=9), rng.gen_range(2..=7))));
            row
        })
        .collect();
    ks.push(Multiplicity::new(g, values).expect("random multiplicity"));
    ks
}

/// Runs `check` over the group/k grid; fails on the first failing report.
fn over_grid(
    budget: Option<Duration>,
    check: impl Fn(&ReflectionGroup, &Multiplicity) -> cherednik::Result<Report>,
) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    let mut slowest = (String::new(), Duration::ZERO);
    for f in families() {
        let g = build(&f);
        let start = Instant::now();
        for k in k_grid(&g, &mut rng) {
            let r = check(&g, &k).map_err(|e| format!("{} k={k}: {e}", g.label()))?;
            if !r.pass {
                return Err(format!("{} k={k}: {}", g.label(), r.witness.unwrap_or_default()));
            }
            checked += r.checked;
        }
        let t = start.elapsed();
        if t > slowest.1 {
            slowest = (g.label(), t);
        }
    }
    if let Some(b) = budget {
        if slowest.1 > b {
            return Err(format!("{} took {:.1?}, over the {:.0?} target", slowest.0, slowest.1, b));
        }
    }
    Ok(format!("{checked} cases, slowest group {} in {:.1?}", slowest.0, slowest.1))
}

fn c1_commutativity() -> Outcome {
    over_grid(Some(Duration::from_secs(60)), |g, k| check_commutativity(g, k, 8))
}

fn c2_equivariance() -> Outcome {
    over_grid(None, |g, k| check_equivariance(g, k, 8))
}

fn c3_relations() -> Outcome {
    let grid = over_grid(None, |g, k| check_cherednik_relations(g, k, 6))?;
    let g = build(&Family::Cyclic { n: 2 });
    let s = g.pseudoreflections()[0];
    for k in [rat(1, 3), rat_int(1), rat(-5, 2)] {
        let km = Multiplicity::uniform(&g, k.clone());
        let t = Dunkl::new(&g, &km).operator_basis(0);
        let x = DiffReflOp::multiplication_poly(&g, &MPoly::var(1, 0));
        let lhs = t.commutator(&x, &g);
        let two_k = CycNum::from_rational(k.clone() * rat_int(2));
        let rhs = DiffReflOp::identity(&g).sub(&DiffReflOp::group_element(&g, s).scale(&two_k));
        if lhs != rhs {
            return Err(format!("Z/2 at k={k}: [T,x] = {lhs:?}"));
        }
    }
    Ok(format!("{grid}; Z/2 gives [T,x] = 1 - 2ks"))
}

fn c4_calogero_moser() -> Outcome {
    let coxeter = [
        Family::Cyclic { n: 2 },
        Family::Dihedral { m: 3 },
        Family::Dihedral { m: 4 },
        Family::Dihedral { m: 5 },
        Family::Dihedral { m: 6 },
        Family::Symmetric { n: 3 },
        Family::Symmetric { n: 4 },
        Family::G { m: 2, p: 1, n: 2 },
    ];
    let mut checked = 0;
    for f in &coxeter {
        let g = build(f);
        for c in [rat_int(1), rat_int(2), rat(3, 7), rat(-2, 5)] {
            let cm = Multiplicity::uniform(&g, c.clone());
            let r = calogero_moser_check(&g, &cm).map_err(|e| e.to_string())?;
            if !r.pass {
                return Err(format!("{} c={c}: {}", g.label(), r.witness.unwrap_or_default()));
            }
            checked += 1;
        }
    }
    let g = build(&Family::Symmetric { n: 3 });
    for k in [rat_int(1), rat(2, 3)] {
        let km = Multiplicity::uniform(&g, k.clone());
        let br = cm_commutator(&g, &km, &power_sum(3, 2), &power_sum(3, 3)).map_err(|e| e.to_string())?;
        if !br.is_zero() {
            return Err(format!("S3 k={k}: [L_p2, L_p3] = {br}"));
        }
    }
    Ok(format!("{checked} group/c pairs; [L_p2, L_p3] = 0 for S3"))
}

fn c5_derham() -> Outcome {
    over_grid(None, |g, k| {
        let mut r = check_homotopy(g, k, 8)?;
        let d2 = check_d_squared(g, k, 8)?;
        let matches = d2.details["matches_commutators"].as_bool() == Some(true);
        r.absorb(&d2);
        r.record(matches, || "K^0 part of d(k)^2 differs from the Dunkl commutators".into());
        Ok(r)
    })
}

/// Independent check of the `z(k)` spectrum: on the left regular matrix
/// `Z`, `prod (Z - c)` vanishes and `rank(Z - c) = |W| - mult(c)`.
fn c6_z_spectrum() -> Outcome {
    let mut count = 0;
    for f in families() {
        let g = build(&f);
        let comps = g.regular_spectrum().map_err(|e| e.to_string())?;
        for k in 0..=3 {
            let km = Multiplicity::uniform(&g, rat_int(k));
            let z = g.z_element(&km);
            if !g.is_central(&z) {
                return Err(format!("{}: z({k}) is not central", g.label()));
            }
            let zm: CMatrix = z.left_regular_matrix(&g);
            let n = g.order();
            let mut distinct: Vec<(Rat, usize)> = Vec::new();
            for s in &comps {
                let v = s.value(&km);
                match distinct.iter_mut().find(|(c, _)| *c == v) {
                    Some(e) => e.1 += s.multiplicity,
                    None => distinct.push((v, s.multiplicity)),
                }
            }
            let id = CMatrix::identity(n);
            let shifted = |c: &Rat| zm.sub(&id.scale(&CycNum::from_rational(c.clone())));
            let prod = distinct.iter().fold(id.clone(), |acc, (c, _)| acc.mul(&shifted(c)));
            if !prod.is_zero() {
                return Err(format!("{} k={k}: z(k) has eigenvalues outside the computed spectrum", g.label()));
            }
            for (c, mult) in &distinct {
                if shifted(c).rank() != n - mult {
                    return Err(format!("{} k={k}: eigenvalue {c} has the wrong multiplicity", g.label()));
                }
            }
            if f == (Family::Symmetric { n: 3 }) {
                let allowed = [rat_int(0), rat_int(3 * k), rat_int(6 * k)];
                if let Some((c, _)) = distinct.iter().find(|(c, _)| !allowed.contains(c)) {
                    return Err(format!("S3 k={k}: eigenvalue {c} not in {{0, 3k, 6k}}"));
                }
            }
            count += 1;
        }
    }
    Ok(format!("{count} group/k pairs; coefficients are nonnegative integers"))
}

fn c7_intertwiner() -> Outcome {
    let grid = over_grid(None, |g, k| match intertwiner(g, k, 6) {
        Ok(s) => Ok(s.report),
        Err(e) => Err(e),
    })?;
    let g = build(&Family::Cyclic { n: 2 });
    match intertwiner(&g, &Multiplicity::uniform(&g, rat(-1, 2)), 6) {
        Err(Error::SingularParameter { eigenvalue }) => {
            Ok(format!("{grid}; Z/2 at k=-1/2 is singular (eigenvalue {eigenvalue})"))
        }
        other => Err(format!("Z/2 at k=-1/2 should be singular, got {:?}", other.map(|s| s.report))),
    }
}

fn c8_kz() -> Outcome {
    let s3 = build(&Family::Symmetric { n: 3 });
    let g312 = build(&Family::G { m: 3, p: 1, n: 2 });
    let cases = [
        (&s3, WRepresentation::standard(&s3).map_err(|e| e.to_string())?),
        (&g312, WRepresentation::reflection(&g312)),
    ];
    let mut checked = 0;
    for (g, tau) in &cases {
        for k in [Multiplicity::uniform(g, rat_int(1)), Multiplicity::uniform(g, rat(2, 5))] {
            let mut r = check_flatness(g, &k, tau, 4).map_err(|e| e.to_string())?;
            r.absorb(&check_residues(g, &k, tau).map_err(|e| e.to_string())?);
            if !r.pass {
                return Err(format!("{} k={k}: {}", g.label(), r.witness.unwrap_or_default()));
            }
            checked += r.checked;
        }
    }
    Ok(format!("{checked} curvature and residue cases"))
}

/// Every tuple `(0, k_1, ..., k_{n-1})` with entries at most `max`.
fn tuples(n: u32, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0]];
    for _ in 1..n {
        out = out.into_iter().flat_map(|t| (0..=max).map(move |v| [t.clone(), vec![v]].concat())).collect();
    }
    out
}

fn check_cyclic_slices(g: &ReflectionGroup, n: u32, t: &[u32]) -> Result<(), String> {
    let k = Multiplicity::from_integers(g, vec![t.to_vec()]).map_err(|e| e.to_string())?;
    let q = QuasiModule::new(g, &k, 12).map_err(|e| e.to_string())?;
    for d in 0..=12u32 {
        let i = d % n;
        let expected = d >= n * t[i as usize] + i;
        let slice = q.slice(d);
        let ok = match (expected, slice) {
            (false, []) => true,
            (true, [p]) => p.len() == 1 && p.degree() == Some(d),
            _ => false,
        };
        if !ok {
            return Err(format!("Z/{n} k={t:?}: degree {d} slice has dimension {}", slice.len()));
        }
    }
    // p(t) = sum_i t^{n k_i + i}
    let top = (0..n).map(|i| n * t[i as usize] + i).max().unwrap();
    let h = qk_hilbert(g, &k, top + 1).map_err(|e| format!("Z/{n} k={t:?}: {e}"))?;
    let mut expected = vec![0i64; top as usize + 1];
    for i in 0..n {
        expected[(n * t[i as usize] + i) as usize] += 1;
    }
    if h.numerator != expected {
        return Err(format!("Z/{n} k={t:?}: numerator {}", h.numerator_text));
    }
    Ok(())
}

/// `p(t)` for `S_3` at integral `m`: `1 + 2t^{3m+1} + 2t^{3m+2} + t^{6m+3}`.
fn s3_numerator(m: usize) -> Vec<i64> {
    let mut p = vec![0; 6 * m + 4];
    p[0] = 1;
    p[3 * m + 1] = 2;
    p[3 * m + 2] = 2;
    p[6 * m + 3] = 1;
    p
}

fn c9_quasi() -> Outcome {
    let mut tested = 0;
    for n in 2..=4 {
        let g = build(&Family::Cyclic { n });
        for t in tuples(n, 3) {
            check_cyclic_slices(&g, n, &t)?;
            tested += 1;
        }
    }
    let s3 = build(&Family::Symmetric { n: 3 });
    let b2 = build(&Family::G { m: 2, p: 1, n: 2 });
    let mut notes = Vec::new();
    // Each cap exceeds the degree of the top generator.
    for (g, k, dmax) in [(&s3, 1, 10), (&s3, 2, 16), (&b2, 1, 13), (&b2, 2, 21)] {
        let start = Instant::now();
        let km = Multiplicity::uniform(g, rat_int(k));
        let cert = freeness_certificate(g, &km, dmax).map_err(|e| format!("{} k={k}: {e}", g.label()))?;
        let h = &cert.hilbert;
        if !cert.report.pass || h.p_at_one != g.order() as i64 || h.numerator.iter().any(|&c| c < 0) {
            return Err(format!("{} k={k}: p(t) = {}, {:?}", g.label(), h.numerator_text, cert.report.witness));
        }
        if g.label() == s3.label() && h.numerator != s3_numerator(k as usize) {
            return Err(format!("S3 k={k}: p(t) = {} disagrees with the closed form", h.numerator_text));
        }
        notes.push(format!("{} k={k}: {} ({:.1?})", g.label(), h.numerator_text, start.elapsed()));
    }
    let start = Instant::now();
    qk_hilbert(&b2, &Multiplicity::uniform(&b2, rat_int(1)), 12).ok();
    let b2_time = start.elapsed();
    if b2_time > Duration::from_secs(300) {
        return Err(format!("B2 at Dmax=12 took {b2_time:.1?}"));
    }
    Ok(format!("{tested} cyclic cases; {}", notes.join("; ")))
}

fn c10_bold() -> Outcome {
    let mut cases: Vec<(Family, Vec<Vec<u32>>)> = Vec::new();
    for n in 2..=4 {
        cases.push((Family::Cyclic { n }, vec![(0..n).map(|i| i % 3).collect()]));
        cases.push((Family::Cyclic { n }, vec![(0..n).map(|i| if i == 0 { 0 } else { 1 }).collect()]));
    }
    cases.push((Family::Dihedral { m: 3 }, vec![vec![0, 1]]));
    cases.push((Family::Dihedral { m: 4 }, vec![vec![0, 1], vec![0, 1]]));
    cases.push((Family::Dihedral { m: 4 }, vec![vec![0, 1], vec![0, 2]]));
    let mut checked = 0;
    for (f, vals) in &cases {
        let g = build(f);
        let k = Multiplicity::from_integers(&g, vals.clone()).map_err(|e| e.to_string())?;
        let mut r = check_bold_stability(&g, &k, 8).map_err(|e| e.to_string())?;
        r.absorb(&check_uk_stability(&g, &k, &lowest_invariant(&g), 8).map_err(|e| e.to_string())?);
        if !r.pass {
            return Err(format!("{} k={k}: {}", g.label(), r.witness.unwrap_or_default()));
        }
        checked += r.checked;
    }
    let g = build(&Family::Cyclic { n: 2 });
    let l = Dunkl::new(&g, &Multiplicity::uniform(&g, rat_int(1))).cm_operator(&power_sum(1, 2)).map_err(|e| e.to_string())?;
    let image = l.apply(&MPoly::var(1, 0).pow(3));
    if !image.is_zero() {
        return Err(format!("Z/2 k=1: L(x^3) = {image}"));
    }
    Ok(format!("{checked} cases; Z/2 k=1 gives L(x^3) = 0"))
}

fn c11_invariants() -> Outcome {
    let mut checked = 0;
    for f in families() {
        let g = build(&f);
        let expected: Option<Vec<u32>> = match &f {
            Family::Cyclic { n } => Some(vec![*n]),
            Family::Symmetric { n: 3 } => Some(vec![1, 2, 3]),
            Family::G { m: 2, p: 1, n: 2 } => Some(vec![2, 4]),
            _ => None,
        };
        if let Some(e) = expected {
            if g.degrees != e {
                return Err(format!("{}: degrees {:?}, expected {e:?}", g.label(), g.degrees));
            }
        }
        let prod: u64 = g.degrees.iter().map(|&d| d as u64).product();
        if prod != g.order() as u64 {
            return Err(format!("{}: product of degrees {prod} != |W| = {}", g.label(), g.order()));
        }
        // Molien coefficients against invariants found by averaging.
        let series = g.molien_series(8);
        for d in 0..=8u32 {
            let dim = invariant_slice(&g, d).len();
            if series.coefficients[d as usize] != rat_int(dim as i64) {
                return Err(format!("{}: Molien coefficient of t^{d} != {dim}", g.label()));
            }
        }
        checked += 1;
    }
    for (f, dmax) in [(Family::Cyclic { n: 3 }, 3), (Family::Symmetric { n: 3 }, 4), (Family::G { m: 2, p: 1, n: 2 }, 5)] {
        let g = build(&f);
        let cert = freeness_certificate(&g, &Multiplicity::zero(&g), dmax).map_err(|e| e.to_string())?;
        if cert.generators.len() != g.order() || !cert.report.pass {
            return Err(format!("{}: {} coinvariant generators", g.label(), cert.generators.len()));
        }
    }
    Ok(format!("{checked} groups; Q_0 has |W| free generators for Z/3, S3, B2"))
}

fn run_suite(args: &[&str], threads: &str) -> Result<(Vec<u8>, i32), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_cherednik"))
        .args(args)
        .args(["suite", "--out", "json", "--threads", threads])
        .output()
        .map_err(|e| e.to_string())?;
    Ok((out.stdout, out.status.code().unwrap_or(-1)))
}

fn c12_determinism() -> Outcome {
    let configs: [&[&str]; 2] = [
        &["--family", "symmetric", "--n", "3", "--k", "1", "--max-degree", "6"],
        &["--family", "G(3,1,2)", "--k", "0,1;0,1,2", "--max-degree", "5"],
    ];
    for args in configs {
        let (a, code_a) = run_suite(args, "1")?;
        let (b, code_b) = run_suite(args, "3")?;
        if code_a != 0 || code_b != 0 {
            return Err(format!("{args:?}: exit codes {code_a}, {code_b}"));
        }
        if a != b || a.is_empty() {
            return Err(format!("{args:?}: outputs differ between thread counts"));
        }
    }
    Ok("suite output byte-identical for 1 and 3 threads".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("dunkl commutativity", c1_commutativity),
        ("dunkl equivariance", c2_equivariance),
        ("cherednik relations", c3_relations),
        ("calogero-moser", c4_calogero_moser),
        ("deformed de rham", c5_derham),
        ("z(k) spectrum", c6_z_spectrum),
        ("intertwiner", c7_intertwiner),
        ("kz flatness", c8_kz),
        ("quasi-invariants", c9_quasi),
        ("group-algebra-valued quasi-invariants", c10_bold),
        ("invariant theory", c11_invariants),
        ("determinism", c12_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (tag, msg) = match f() {
            Ok(m) => ("PASS", m),
            Err(m) => {
                failed += 1;
                ("FAIL", m)
            }
        };
        println!("criterion {:>2} {tag}: {name} [{:.1?}] {msg}", i + 1, start.elapsed());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
