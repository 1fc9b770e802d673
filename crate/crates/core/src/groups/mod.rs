//! Finite complex reflection groups given by generator matrices.
//!
//! A [`ReflectionGroup`] is enumerated once by closure and then carries all
//! derived data: multiplication table, determinants, the reflection
//! arrangement with its orbits and cyclic stabilizers, `delta`, `delta*` and
//! the fundamental degrees.
//!
//! Functions act by `(w.f)(x) = f(w^-1 x)`; on coordinates this is
//! `w.x_j = sum_l (w^-1)_{jl} x_l`.

mod algebra;
mod families;
mod io;
mod molien;
mod multiplicity;
mod rep;

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Zero};

pub use algebra::{GroupAlgebraElement, SpectralComponent};
pub use families::Family;
pub use io::{GroupSpec, MultiplicityFile};
pub use molien::{factor_degrees, MolienSeries};
pub use multiplicity::Multiplicity;
pub use rep::{RepKind, WRepresentation};

use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{MPoly, Monomial};

pub type CMatrix = Matrix<CycNum>;
pub type Poly = MPoly<CycNum>;

/// A reflection hyperplane `H = ker(alpha_H)` with its stabilizer data.
#[derive(Clone, Debug)]
pub struct Hyperplane {
    /// Coefficients of `alpha_H`, first nonzero entry equal to one.
    pub alpha: Vec<CycNum>,
    /// Index of the first nonzero coordinate of `alpha`.
    pub pivot: usize,
    /// Normal vector `v_H` with `(v_H, x) = 0` on `H`.
    pub v: Vec<CycNum>,
    /// `n_H = |W_H|`.
    pub order: usize,
    /// `W_H` listed as powers `s_H^0, s_H^1, ...` of the distinguished generator.
    pub stabilizer: Vec<usize>,
    /// `s_H`, the element of `W_H` with determinant `exp(2 pi i / n_H)`.
    pub distinguished: usize,
    pub orbit: usize,
}

impl Hyperplane {
    pub fn alpha_poly(&self) -> Poly {
        MPoly::linear(&self.alpha)
    }

    /// `alpha_H(xi)` for a vector `xi`.
    pub fn eval(&self, xi: &[CycNum]) -> CycNum {
        self.alpha.iter().zip(xi).fold(CycNum::zero(), |acc, (a, x)| acc + &(a.clone() * x))
    }
}

/// The linear forms of the arrangement, shared by rational-function code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    pub dim: usize,
    pub forms: Vec<Vec<CycNum>>,
    pub pivots: Vec<usize>,
}

impl Arrangement {
    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn form_poly(&self, h: usize) -> Poly {
        MPoly::linear(&self.forms[h])
    }
}

/// How a group element moves a hyperplane form: `w.alpha_H = scale * alpha_{target}`.
#[derive(Clone, Debug)]
pub struct FormImage {
    pub target: usize,
    pub scale: CycNum,
}

#[derive(Clone, Debug)]
pub struct ReflectionGroup {
    pub family: Family,
    pub dim: usize,
    pub conductor: u32,
    pub elements: Vec<CMatrix>,
    index: HashMap<CMatrix, usize>,
    mult: Vec<usize>,
    inv: Vec<usize>,
    pub det: Vec<CycNum>,
    /// Indices of the generators in `elements`.
    pub generators: Vec<usize>,
    /// `(generator, previous)` with `elements[i] = gen * elements[previous]`.
    words: Vec<Option<(usize, usize)>>,
    pub hyperplanes: Vec<Hyperplane>,
    pub orbits: Vec<Vec<usize>>,
    pub arrangement: Arc<Arrangement>,
    form_images: Vec<Vec<FormImage>>,
    var_images: Vec<Vec<Poly>>,
    /// `w.x_j = c * x_l` when `w` is a monomial matrix.
    mono_images: Vec<Option<Vec<(usize, CycNum)>>>,
    pub delta: Poly,
    pub delta_star: Poly,
    pub degrees: Vec<u32>,
    pub warnings: Vec<String>,
}

fn is_pseudoreflection(m: &CMatrix) -> bool {
    let id = Matrix::identity(m.rows());
    let d = m.sub(&id);
    d.rank() == 1
}

fn lcm_conductor(mats: &[CMatrix]) -> u32 {
    let mut n: u32 = 2;
    for m in mats {
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                n = n.lcm(&m[(i, j)].conductor());
            }
        }
    }
    n
}

/// Normalizes a nonzero covector so that its first nonzero entry is one.
fn normalize_covector(v: &[CycNum]) -> (Vec<CycNum>, usize, CycNum) {
    let pivot = v.iter().position(|x| !x.is_zero()).expect("nonzero covector");
    let s = v[pivot].clone();
    let inv = s.inverse().unwrap();
    (v.iter().map(|x| x.clone() * &inv).collect(), pivot, s)
}

impl ReflectionGroup {
    /// Enumerates the group generated by `generators` (closure by breadth-first
    /// products) and derives all arrangement data.
    pub fn generate(family: Family, generators: Vec<CMatrix>, cap: usize) -> Result<Self> {
        let dim = generators.first().map(|g| g.rows()).ok_or_else(|| Error::Invalid("no generators".into()))?;
        let mut warnings = Vec::new();
        for (i, g) in generators.iter().enumerate() {
            if !g.is_square() || g.rows() != dim {
                return Err(Error::Invalid(format!("generator {i} is not {dim}x{dim}")));
            }
            if g.det().is_zero() {
                return Err(Error::NotInvertible(format!("generator {i}")));
            }
            if !g.adjoint().mul(g).eq(&Matrix::identity(dim)) {
                return Err(Error::NotUnitary(format!("generator {i}")));
            }
            if !is_pseudoreflection(g) {
                warnings.push(format!("generator {i} is not a pseudoreflection"));
            }
        }
        let conductor = lcm_conductor(&generators);

        // Closure.
        let id = Matrix::identity(dim);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::new();
        index.insert(id, 0usize);
        let mut words = vec![None];
        let mut gen_idx = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for (gi, g) in generators.iter().enumerate() {
                let p = g.mul(&elements[e]);
                if !index.contains_key(&p) {
                    if elements.len() >= cap {
                        return Err(Error::CapExceeded { cap });
                    }
                    index.insert(p.clone(), elements.len());
                    words.push(Some((gi, e)));
                    queue.push_back(elements.len());
                    elements.push(p);
                }
            }
        }
        for g in &generators {
            gen_idx.push(index[g]);
        }
        let n = elements.len();
        let mut mult = vec![0usize; n * n];
        for a in 0..n {
            for b in 0..n {
                let p = elements[a].mul(&elements[b]);
                mult[a * n + b] = *index.get(&p).ok_or_else(|| Error::Invalid("group is not closed".into()))?;
            }
        }
        let mut inv = vec![0usize; n];
        for a in 0..n {
            inv[a] = (0..n).find(|&b| mult[a * n + b] == 0).expect("inverse exists");
        }
        let det: Vec<CycNum> = elements.iter().map(|m| m.det()).collect();

        let mut g = ReflectionGroup {
            family,
            dim,
            conductor,
            elements,
            index,
            mult,
            inv,
            det,
            generators: gen_idx,
            words,
            hyperplanes: Vec::new(),
            orbits: Vec::new(),
            arrangement: Arc::new(Arrangement { dim, forms: Vec::new(), pivots: Vec::new() }),
            form_images: Vec::new(),
            var_images: Vec::new(),
            mono_images: Vec::new(),
            delta: MPoly::one(dim),
            delta_star: MPoly::one(dim),
            degrees: Vec::new(),
            warnings,
        };
        g.build_action();
        g.build_arrangement()?;
        match molien::molien_degrees(&g, n.max(2)) {
            Ok((_, degs)) => g.degrees = degs,
            Err(e) => g.warnings.push(format!("fundamental degrees unavailable: {e}")),
        }
        Ok(g)
    }

    fn build_action(&mut self) {
        let n = self.dim;
        for w in 0..self.elements.len() {
            let winv = &self.elements[self.inv[w]];
            let images: Vec<Poly> = (0..n).map(|j| MPoly::linear(winv.row(j))).collect();
            let mono = images
                .iter()
                .map(|p| {
                    if p.len() == 1 {
                        let (m, c) = p.terms().next().unwrap();
                        let l = m.exps().iter().position(|&e| e == 1).unwrap();
                        Some((l, c.clone()))
                    } else {
                        None
                    }
                })
                .collect::<Option<Vec<_>>>();
            self.var_images.push(images);
            self.mono_images.push(mono);
        }
    }

    fn build_arrangement(&mut self) -> Result<()> {
        let n = self.dim;
        let id = Matrix::identity(n);
        // Hyperplane key -> (alpha, pivot, members).
        let mut keys: Vec<Vec<CycNum>> = Vec::new();
        let mut pivots = Vec::new();
        let mut members: Vec<Vec<usize>> = Vec::new();
        for (w, m) in self.elements.iter().enumerate().skip(1) {
            let d = m.sub(&id);
            if d.rank() != 1 {
                continue;
            }
            let row = (0..n).map(|i| d.row(i).to_vec()).find(|r| r.iter().any(|x| !x.is_zero())).unwrap();
            let (alpha, pivot, _) = normalize_covector(&row);
            match keys.iter().position(|k| *k == alpha) {
                Some(h) => members[h].push(w),
                None => {
                    keys.push(alpha);
                    pivots.push(pivot);
                    members.push(vec![w]);
                }
            }
        }
        let nw = self.elements.len();
        let mut hyperplanes = Vec::new();
        for (h, alpha) in keys.iter().enumerate() {
            let order = members[h].len() + 1;
            let target = CycNum::root_of_unity(self.conductor, order as u32, 1)?;
            let s = *members[h]
                .iter()
                .find(|&&w| self.det[w] == target)
                .ok_or_else(|| Error::Invalid(format!("hyperplane {h}: no element with determinant zeta_{order}")))?;
            let mut stabilizer = vec![0usize];
            let mut cur = s;
            while cur != 0 {
                stabilizer.push(cur);
                cur = self.mult[s * nw + cur];
            }
            if stabilizer.len() != order {
                return Err(Error::Invalid(format!("stabilizer of hyperplane {h} is not cyclic")));
            }
            let v: Vec<CycNum> = alpha.iter().map(|a| a.conjugate()).collect();
            hyperplanes.push(Hyperplane {
                alpha: alpha.clone(),
                pivot: pivots[h],
                v,
                order,
                stabilizer,
                distinguished: s,
                orbit: usize::MAX,
            });
        }
        self.arrangement = Arc::new(Arrangement {
            dim: n,
            forms: hyperplanes.iter().map(|h| h.alpha.clone()).collect(),
            pivots: hyperplanes.iter().map(|h| h.pivot).collect(),
        });
        // Action on forms: w.alpha = alpha * w^-1 (row vector).
        let mut form_images = Vec::with_capacity(nw);
        for w in 0..nw {
            let winv = &self.elements[self.inv[w]];
            let mut row = Vec::new();
            for hp in &hyperplanes {
                let img: Vec<CycNum> = (0..n)
                    .map(|l| (0..n).fold(CycNum::zero(), |acc, j| acc + &(hp.alpha[j].clone() * &winv[(j, l)])))
                    .collect();
                let (normed, _, scale) = normalize_covector(&img);
                let target = keys
                    .iter()
                    .position(|k| *k == normed)
                    .ok_or_else(|| Error::Invalid("arrangement is not W-stable".into()))?;
                row.push(FormImage { target, scale });
            }
            form_images.push(row);
        }
        // Orbits.
        let mut orbit_of = vec![usize::MAX; hyperplanes.len()];
        let mut orbits: Vec<Vec<usize>> = Vec::new();
        for h in 0..hyperplanes.len() {
            if orbit_of[h] != usize::MAX {
                continue;
            }
            let id = orbits.len();
            let mut orbit: Vec<usize> = (0..nw).map(|w| form_images[w][h].target).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &o in &orbit {
                orbit_of[o] = id;
            }
            orbits.push(orbit);
        }
        for (h, hp) in hyperplanes.iter_mut().enumerate() {
            hp.orbit = orbit_of[h];
        }
        self.delta = hyperplanes.iter().fold(MPoly::one(n), |acc, h| acc.mul(&h.alpha_poly()));
        self.delta_star = hyperplanes.iter().fold(MPoly::one(n), |acc, h| acc.mul(&MPoly::linear(&h.v)));
        self.hyperplanes = hyperplanes;
        self.orbits = orbits;
        self.form_images = form_images;
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.elements.len() + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn index_of(&self, m: &CMatrix) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Element as a word: `elements[i] = generators[g] * elements[prev]`.
    pub fn word_step(&self, i: usize) -> Option<(usize, usize)> {
        self.words[i]
    }

    pub fn is_coxeter(&self) -> bool {
        self.hyperplanes.iter().all(|h| h.order == 2)
    }

    pub fn orbit_order(&self, c: usize) -> usize {
        self.hyperplanes[self.orbits[c][0]].order
    }

    pub fn form_image(&self, w: usize, h: usize) -> &FormImage {
        &self.form_images[w][h]
    }

    /// `w(xi)` for a vector `xi` in V.
    pub fn act_vector(&self, w: usize, xi: &[CycNum]) -> Vec<CycNum> {
        self.elements[w].mul_vec(xi)
    }

    /// `(w.f)(x) = f(w^-1 x)`.
    pub fn act(&self, w: usize, f: &Poly) -> Poly {
        if w == 0 {
            return f.clone();
        }
        if let Some(images) = &self.mono_images[w] {
            let mut out = MPoly::zero(self.dim);
            for (m, c) in f.terms() {
                let mut nm = Monomial::one(self.dim);
                let mut coef = c.clone();
                for (j, &e) in m.exps().iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    let (l, s) = &images[j];
                    nm.0[*l] += e;
                    if !s.is_one() {
                        coef = coef * &s.pow(e as i64);
                    }
                }
                out.add_term(nm, coef);
            }
            return out;
        }
        f.substitute(&self.var_images[w])
    }

    /// Acts on the derivative symbols: `w d_xi w^-1 = d_{w xi}`, so the
    /// monomial `d^beta` becomes a polynomial in the `d_i`.
    pub fn act_on_derivatives(&self, w: usize, beta: &Monomial) -> Poly {
        let m = &self.elements[w];
        let images: Vec<Poly> = (0..self.dim).map(|j| MPoly::linear(&m.column(j))).collect();
        MPoly::monomial(beta.clone()).substitute(&images)
    }

    /// Checks that `f` is fixed by every generator.
    pub fn is_invariant(&self, f: &Poly) -> bool {
        self.generators.iter().all(|&g| self.act(g, f) == *f)
    }

    /// Determinant of the element as an exact root of unity.
    pub fn det_of(&self, w: usize) -> &CycNum {
        &self.det[w]
    }

    /// Elements of `W` that are pseudoreflections.
    pub fn pseudoreflections(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.hyperplanes.iter().flat_map(|h| h.stabilizer[1..].iter().copied()).collect();
        out.sort_unstable();
        out
    }

    /// The hyperplane fixed by a pseudoreflection.
    pub fn hyperplane_of(&self, s: usize) -> Option<usize> {
        self.hyperplanes.iter().position(|h| h.stabilizer[1..].contains(&s))
    }

    /// `exp(2 pi i j / n)` in the group's field.
    pub fn root_of_unity(&self, n: usize, j: i64) -> CycNum {
        CycNum::root_of_unity(self.conductor, n as u32, j).expect("root of unity in group field")
    }

    /// Canonical vector basis `e_i` of V.
    pub fn basis_vector(&self, i: usize) -> Vec<CycNum> {
        (0..self.dim).map(|j| if i == j { CycNum::one() } else { CycNum::zero() }).collect()
    }

    /// Short human label, e.g. `symmetric(3)`.
    pub fn label(&self) -> String {
        self.family.label()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_three() {
        let g = Family::Cyclic { n: 3 }.build(1000).unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.hyperplanes.len(), 1);
        assert_eq!(g.hyperplanes[0].order, 3);
        assert_eq!(g.degrees, vec![3]);
    }

    #[test]
    fn symmetric_three() {
        let g = Family::Symmetric { n: 3 }.build(1000).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.hyperplanes.len(), 3);
        assert!(g.hyperplanes.iter().all(|h| h.order == 2));
        assert_eq!(g.orbits.len(), 1);
        assert_eq!(g.degrees, vec![1, 2, 3]);
    }

    #[test]
    fn dihedral_four() {
        let g = Family::Dihedral { m: 4 }.build(1000).unwrap();
        assert_eq!(g.order(), 8);
        assert_eq!(g.hyperplanes.len(), 4);
        assert_eq!(g.orbits.len(), 2);
        assert!(g.orbits.iter().all(|o| o.len() == 2));
        assert_eq!(g.degrees, vec![2, 4]);
    }

    #[test]
    fn cap_exceeded() {
        let err = Family::Symmetric { n: 4 }.build(10).unwrap_err();
        assert_eq!(err, Error::CapExceeded { cap: 10 });
    }

    #[test]
    fn distinguished_determinant() {
        for fam in [Family::Cyclic { n: 5 }, Family::G { m: 3, p: 1, n: 2 }, Family::Dihedral { m: 5 }] {
            let g = fam.build(1000).unwrap();
            for h in &g.hyperplanes {
                assert_eq!(g.det[h.distinguished], g.root_of_unity(h.order, 1));
            }
        }
    }

    #[test]
    fn not_unitary_rejected() {
        let m = Matrix::from_rows(vec![vec![CycNum::from_int(2)]]);
        assert!(matches!(
            ReflectionGroup::generate(Family::Explicit, vec![m], 100),
            Err(Error::NotUnitary(_))
        ));
    }

    #[test]
    fn action_on_cyclic_square() {
        let g = Family::Cyclic { n: 3 }.build(100).unwrap();
        let s = g.hyperplanes[0].distinguished;
        let x = MPoly::var(1, 0);
        let img = g.act(s, &x.mul(&x));
        let z = CycNum::zeta(6).pow(2); // zeta_3 in Q(zeta_6)
        assert_eq!(img, x.mul(&x).scale(&z.pow(-2)));
        assert_eq!(img, x.mul(&x).scale(&z));
    }
}
