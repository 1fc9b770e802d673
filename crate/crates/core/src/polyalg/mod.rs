//! Polynomial algebra relative to a reflection group: the Reynolds operator,
//! demoted differences `(1 - s)/alpha_s`, vanishing orders along
//! hyperplanes, localized rational functions and graded linear solving.

mod graded;
mod ratfun;

pub use graded::{echelon_polys, graded_solve, in_span, span_rank, GradedSubspace};
pub use ratfun::RatFun;

use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::groups::{Poly, ReflectionGroup};
use crate::poly::{monomials_of_degree, MPoly};
use crate::scalar::Rat;

/// `pi(f) = (1/|W|) sum_w w.f`.
pub fn reynolds(g: &ReflectionGroup, f: &Poly) -> Poly {
    let mut acc = MPoly::zero(g.dim);
    for w in 0..g.order() {
        acc.add_assign(&g.act(w, f));
    }
    acc.scale(&CycNum::from_rational(Rat::new(1.into(), (g.order() as i64).into())))
}

/// `Delta_s f = ((1 - s) f) / alpha_s` for a pseudoreflection `s`.
pub fn demoted_difference(g: &ReflectionGroup, s: usize, f: &Poly) -> Result<Poly> {
    let h = g
        .hyperplane_of(s)
        .ok_or_else(|| Error::Invalid(format!("element {s} is not a pseudoreflection")))?;
    let hp = &g.hyperplanes[h];
    f.sub(&g.act(s, f))
        .div_linear(&hp.alpha, hp.pivot)
        .ok_or(Error::NotDivisible { hyperplane: h })
}

/// Largest `m` with `alpha_H^m | f`; `None` stands for infinity (`f = 0`).
pub fn ord_along(g: &ReflectionGroup, h: usize, f: &Poly) -> Option<u32> {
    let hp = &g.hyperplanes[h];
    f.order_along(&hp.alpha, hp.pivot)
}

/// Basis of the degree-`d` invariants, in reduced echelon form.
pub fn invariant_slice(g: &ReflectionGroup, d: u32) -> Vec<Poly> {
    let images: Vec<Poly> = monomials_of_degree(g.dim, d)
        .into_iter()
        .map(|m| reynolds(g, &MPoly::monomial(m)))
        .filter(|p| !p.is_zero())
        .collect();
    echelon_polys(g.dim, d, &images)
}

/// The first basis invariant of lowest degree at least two, the natural
/// choice of `p` for `L_p`.
pub fn lowest_invariant(g: &ReflectionGroup) -> Poly {
    // Noether's bound guarantees a nonzero invariant by degree |W|.
    let start = g.degrees.iter().copied().filter(|&d| d >= 2).min().unwrap_or(2);
    (start..)
        .find_map(|d| invariant_slice(g, d).into_iter().next())
        .expect("some power sum of a W-orbit is invariant")
}

/// The invariant ring `C[V]^W` up to degree `max_degree`.
pub fn invariant_ring(g: &ReflectionGroup, max_degree: u32) -> GradedSubspace {
    let mut s = GradedSubspace::new(g.dim);
    for d in 0..=max_degree {
        s.set_slice(d, invariant_slice(g, d)).expect("echelon basis is independent");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Family;
    use crate::scalar::rat;

    #[test]
    fn reynolds_examples() {
        let z2 = Family::Cyclic { n: 2 }.build(10).unwrap();
        let x = MPoly::var(1, 0);
        assert!(reynolds(&z2, &x).is_zero());
        assert_eq!(reynolds(&z2, &x.pow(2)), x.pow(2));
        let s3 = Family::Symmetric { n: 3 }.build(10).unwrap();
        let x1 = MPoly::var(3, 0);
        let p2 = crate::parse::power_sum(3, 2);
        assert_eq!(reynolds(&s3, &x1.pow(2)), p2.scale(&CycNum::from_rational(rat(1, 3))));
    }

    #[test]
    fn demoted_difference_examples() {
        let g = Family::Cyclic { n: 2 }.build(10).unwrap();
        let s = g.hyperplanes[0].distinguished;
        let x = MPoly::var(1, 0);
        assert_eq!(demoted_difference(&g, s, &x).unwrap(), MPoly::constant(1, CycNum::from_int(2)));
        assert!(demoted_difference(&g, s, &x.pow(2)).unwrap().is_zero());
        assert_eq!(demoted_difference(&g, s, &x.pow(3)).unwrap(), x.pow(2).scale(&CycNum::from_int(2)));
        assert!(demoted_difference(&g, 0, &x).is_err());
    }

    #[test]
    fn ord_along_examples() {
        let g = Family::Cyclic { n: 2 }.build(10).unwrap();
        let x = MPoly::var(1, 0);
        assert_eq!(ord_along(&g, 0, &x.pow(3).sub(&x.pow(5))), Some(3));
        assert_eq!(ord_along(&g, 0, &MPoly::one(1)), Some(0));
        assert_eq!(ord_along(&g, 0, &MPoly::zero(1)), None);
    }

    #[test]
    fn invariant_dimensions_match_molien() {
        for fam in [Family::Symmetric { n: 3 }, Family::Dihedral { m: 4 }, Family::G { m: 3, p: 1, n: 2 }] {
            let g = fam.build(100).unwrap();
            let series = g.molien_series(8);
            for d in 0..=8u32 {
                let dim = invariant_slice(&g, d).len();
                assert_eq!(Rat::from_integer(dim.into()), series.coefficients[d as usize], "{fam:?} degree {d}");
            }
        }
    }
}
