//! Worked examples, one small case per module.

use cherednik::derham::{euler_k, intertwiner, KForm};
use cherednik::dunkl::{cm_commutator, conjugation_probe, DiffReflOp, Dunkl};
use cherednik::kzconn::kz_residues;
use cherednik::parse::parse_poly;
use cherednik::poly::MPoly;
use cherednik::polyalg::{demoted_difference, graded_solve, ord_along, reynolds, RatFun};
use cherednik::quasiinv::{
    ak_compute, bold_qk_basis, check_uk_stability, dqk_membership_diffrefl, freeness_certificate, qk_basis,
    qk_membership, QuasiModule,
};
use cherednik::scalar::{rat, rat_int};
use cherednik::{CycNum, Family, Multiplicity, Poly, ReflectionGroup, WRepresentation};
use num_traits::One;

fn group(f: Family) -> ReflectionGroup {
    f.build(1000).unwrap()
}

fn p(g: &ReflectionGroup, s: &str) -> Poly {
    parse_poly(s, g.dim, g.conductor).unwrap()
}

fn k_int(g: &ReflectionGroup, vals: &[u32]) -> Multiplicity {
    Multiplicity::from_integers(g, vec![vals.to_vec()]).unwrap()
}

#[test]
fn cyclotomic_arithmetic() {
    let z4 = CycNum::zeta(4);
    assert_eq!(z4.clone() * &z4, -CycNum::one());
    let z3 = CycNum::zeta(3);
    assert_eq!(z3.clone() + &z3.pow(2), -CycNum::one());
    assert_eq!(z4.conjugate(), -z4);
    assert_eq!(z3.conjugate(), -CycNum::one() - &z3);
    assert_eq!(CycNum::from_rational(rat(3, 2)).conjugate(), CycNum::from_rational(rat(3, 2)));
}

#[test]
fn group_data() {
    let s3 = group(Family::Symmetric { n: 3 });
    assert_eq!((s3.order(), s3.hyperplanes.len(), s3.orbits.len()), (6, 3, 1));
    assert!(s3.hyperplanes.iter().all(|h| h.order == 2));
    let i4 = group(Family::Dihedral { m: 4 });
    assert_eq!((i4.order(), i4.hyperplanes.len()), (8, 4));
    assert_eq!(i4.orbits.iter().map(Vec::len).collect::<Vec<_>>(), vec![2, 2]);
    assert_eq!(i4.degrees, vec![2, 4]);
}

#[test]
fn idempotents_and_c_tau() {
    let z2 = group(Family::Cyclic { n: 2 });
    let s = z2.pseudoreflections()[0];
    let e1 = z2.idempotent(0, 1);
    let half = CycNum::from_rational(rat(1, 2));
    assert_eq!(e1.coeff(0), half);
    assert_eq!(e1.coeff(s), -half.clone());
    let k = Multiplicity::uniform(&z2, rat(2, 7));
    assert_eq!(z2.c_tau_rational(&k, &WRepresentation::trivial(&z2)).unwrap(), rat_int(0));
    assert_eq!(z2.c_tau_rational(&k, &WRepresentation::det(&z2)).unwrap(), rat(4, 7));

    let s3 = group(Family::Symmetric { n: 3 });
    let k = Multiplicity::uniform(&s3, rat(5, 3));
    let std = WRepresentation::standard(&s3).unwrap();
    assert_eq!(s3.c_tau_rational(&k, &std).unwrap(), rat_int(5));
}

#[test]
fn action_and_averaging() {
    let z3 = group(Family::Cyclic { n: 3 });
    let s = z3.pseudoreflections().into_iter().find(|&w| *z3.det_of(w) == z3.root_of_unity(3, 1)).unwrap();
    assert_eq!(z3.act(s, &p(&z3, "x^2")), p(&z3, "z3*x^2"));

    let s3 = group(Family::Symmetric { n: 3 });
    assert_eq!(reynolds(&s3, &p(&s3, "x1^2")), p(&s3, "1/3*x1^2 + 1/3*x2^2 + 1/3*x3^2"));

    let z2 = group(Family::Cyclic { n: 2 });
    let s = z2.pseudoreflections()[0];
    assert_eq!(demoted_difference(&z2, s, &p(&z2, "x")).unwrap(), p(&z2, "2"));
    assert!(demoted_difference(&z2, s, &p(&z2, "x^2")).unwrap().is_zero());
    assert_eq!(demoted_difference(&z2, s, &p(&z2, "x^3")).unwrap(), p(&z2, "2*x^2"));
    assert_eq!(ord_along(&z2, 0, &p(&z2, "x^3 - x^5")), Some(3));
    let h = (0..3).find(|&h| s3.hyperplanes[h].alpha_poly() == p(&s3, "x1 - x2")).unwrap();
    assert_eq!(ord_along(&s3, h, &p(&s3, "(x1 - x2)^2*x3")), Some(2));
}

#[test]
fn solving_and_rational_functions() {
    assert_eq!(graded_solve(2, 4, &[]).len(), 5);
    let z2 = group(Family::Cyclic { n: 2 });
    let inv_x = RatFun::alpha_pow(&z2.arrangement, 0, -1);
    assert!(inv_x.add(&inv_x.neg()).is_zero());
    let r = inv_x.mul_poly(&p(&z2, "x^3 - x"));
    assert_eq!(r.to_poly(), Some(p(&z2, "x^2 - 1")));
}

#[test]
fn dunkl_square_in_normal_form() {
    let z2 = group(Family::Cyclic { n: 2 });
    let s = z2.pseudoreflections()[0];
    let k = rat(3, 4);
    let km = Multiplicity::uniform(&z2, k.clone());
    let t = Dunkl::new(&z2, &km).operator_basis(0);
    let t2 = t.mul(&t, &z2);
    let arr = &z2.arrangement;
    let kc = CycNum::from_rational(k);
    let d = MPoly::var(1, 0).leading_monomial_hint();
    let mut expected = DiffReflOp::zero(&z2);
    expected.add_term(0, d.mul(&d), RatFun::one(arr));
    expected.add_term(0, d.clone(), RatFun::alpha_pow(arr, 0, -1).scale(&(kc.clone() * &CycNum::from_int(-2))));
    expected.add_term(0, cherednik::poly::Monomial::one(1), RatFun::alpha_pow(arr, 0, -2).scale(&kc));
    expected.add_term(s, cherednik::poly::Monomial::one(1), RatFun::alpha_pow(arr, 0, -2).scale(&-kc));
    assert_eq!(t2, expected);
}

trait MonomialHint {
    fn leading_monomial_hint(&self) -> cherednik::poly::Monomial;
}

impl MonomialHint for Poly {
    fn leading_monomial_hint(&self) -> cherednik::poly::Monomial {
        self.terms().next().unwrap().0.clone()
    }
}

#[test]
fn calogero_moser_rank_one() {
    let z2 = group(Family::Cyclic { n: 2 });
    let k = Multiplicity::uniform(&z2, rat_int(1));
    let xi2 = p(&z2, "x^2");
    assert!(cm_commutator(&z2, &k, &xi2, &p(&z2, "x^4")).unwrap().is_zero());
    let probe = conjugation_probe(&z2, &Multiplicity::zero(&z2), 6).unwrap();
    assert_eq!(probe.passing().len(), 4);
    assert_eq!(conjugation_probe(&z2, &k, 6).unwrap().passing().len(), 1);
}

#[test]
fn euler_operator_rank_one() {
    let z2 = group(Family::Cyclic { n: 2 });
    let k = rat(2, 5);
    let km = Multiplicity::uniform(&z2, k.clone());
    let x = KForm::function(p(&z2, "x"));
    let factor = CycNum::from_rational(rat_int(1) + k * rat_int(2));
    assert_eq!(euler_k(&z2, &km, &x), x.scale(&factor));
    let s = intertwiner(&z2, &km, 4).unwrap();
    assert!(s.report.pass);
    assert_eq!(s.apply_poly(&Poly::one(1)), Some(Poly::one(1)));
}

#[test]
fn kz_residue_on_sign_line() {
    let z2 = group(Family::Cyclic { n: 2 });
    let km = Multiplicity::uniform(&z2, rat(1, 3));
    let r = kz_residues(&z2, &km, &WRepresentation::det(&z2));
    assert_eq!(r.matrices[0][(0, 0)], CycNum::from_rational(rat(2, 3)));
}

#[test]
fn quasi_invariant_examples() {
    let z2 = group(Family::Cyclic { n: 2 });
    let k1 = k_int(&z2, &[0, 1]);
    assert!(qk_membership(&z2, &k1, &p(&z2, "x")).unwrap().is_err());
    assert!(qk_membership(&z2, &k1, &p(&z2, "x^3")).unwrap().is_ok());
    assert_eq!(qk_basis(&z2, &k1, 3).unwrap(), vec![p(&z2, "x^3")]);
    assert_eq!(QuasiModule::new(&z2, &k1, 5).unwrap().hilbert(), vec![1, 0, 1, 1, 1, 1]);
    let cert = freeness_certificate(&z2, &k1, 6).unwrap();
    assert_eq!(cert.generators, vec![p(&z2, "1"), p(&z2, "x^3")]);

    let z3 = group(Family::Cyclic { n: 3 });
    let k = k_int(&z3, &[0, 1, 1]);
    assert_eq!(QuasiModule::new(&z3, &k, 5).unwrap().hilbert(), vec![1, 0, 0, 1, 1, 1]);
    let gens = freeness_certificate(&z3, &k, 8).unwrap().generators;
    assert_eq!(gens, vec![p(&z3, "1"), p(&z3, "x^4"), p(&z3, "x^5")]);
    assert_eq!(bold_qk_basis(&z3, &k, 3).unwrap().dim(), 3);
}

#[test]
fn multiplier_ring_needs_the_carry() {
    let z3 = group(Family::Cyclic { n: 3 });
    let a = ak_compute(&z3, &k_int(&z3, &[0, 2, 0]), 12).unwrap();
    assert!(a.report.pass);
    assert!(!a.plain_formula_holds);
    assert_eq!(a.k_prime, k_int(&z3, &[0, 2, 1]));
    let z2 = group(Family::Cyclic { n: 2 });
    let a = ak_compute(&z2, &k_int(&z2, &[0, 1]), 10).unwrap();
    assert!(a.plain_formula_holds);
    assert_eq!(a.k_prime, k_int(&z2, &[0, 1]));
}

#[test]
fn operators_on_quasi_invariants() {
    let z2 = group(Family::Cyclic { n: 2 });
    let k1 = k_int(&z2, &[0, 1]);
    let l = Dunkl::new(&z2, &k1).cm_operator(&p(&z2, "x^2")).unwrap();
    assert!(l.apply(&p(&z2, "x^3")).is_zero());
    assert_eq!(l.apply(&p(&z2, "x^2")).to_poly(), Some(p(&z2, "-2")));
    assert_eq!(l.apply(&p(&z2, "x^5")).to_poly(), Some(p(&z2, "10*x^3")));
    assert!(check_uk_stability(&z2, &k1, &p(&z2, "x^2"), 10).unwrap().pass);

    let d = DiffReflOp::derivative(&z2, &[CycNum::one()]);
    let m = dqk_membership_diffrefl(&z2, &k1, &d, 6).unwrap();
    assert!(!m.holds);
    assert!(m.witness.unwrap().starts_with("f = x^2"));
}
