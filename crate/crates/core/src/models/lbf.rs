//! Linear-by-finite groups `Q^d ⋊ F` with `F` finite acting through a
//! rational representation.

use std::collections::{BTreeMap, VecDeque};

use rand::Rng;
use serde_json::{json, Value};

use super::malcev::{dedup_push, subspace_json, vector_json};
use super::{finite_generators, AnyModel, Factor, FactorSource, FiniteModel, GroupModel, Linearized};
use crate::error::{Error, Result};
use crate::exact::{add_vec, invariant_closure, neg_vec, nullspace, rat, unit_vec, zero_vec, Matrix, Rational, Subspace};
use crate::finite::{FiniteGroup, FiniteSubgroup};
use crate::nilpotent::random_rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LbfModel {
    d: usize,
    group: FiniteGroup,
    /// `rep[f]` for every element `f` of `F`.
    rep: Vec<Matrix>,
    gens: Vec<usize>,
}

/// `(v, f)` with `v in Q^d`, `f in F`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LbfElement {
    pub v: Vec<Rational>,
    pub f: usize,
}

/// The split subgroup `W ⋊ S`, with `W` invariant under `rep(S)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LbfSubgroup {
    pub w: Subspace,
    pub s: FiniteSubgroup,
}

impl LbfModel {
    /// Builds the representation from the images of generators `gens` of
    /// `group` and checks that it is a homomorphism on the whole table.
    pub fn new(d: usize, group: FiniteGroup, gens: Vec<usize>, images: Vec<Matrix>) -> Result<Self> {
        if gens.len() != images.len() {
            return Err(Error::Invalid("one matrix per generator is required".into()));
        }
        for m in &images {
            if m.rows() != d || m.cols() != d {
                return Err(Error::DimensionMismatch { expected: d, found: m.rows().max(m.cols()) });
            }
            if m.inverse().is_none() {
                return Err(Error::Invalid("representation matrix is singular".into()));
            }
        }
        let mut rep: Vec<Option<Matrix>> = vec![None; group.order()];
        rep[group.identity()] = Some(Matrix::identity(d));
        let mut queue = VecDeque::from([group.identity()]);
        while let Some(x) = queue.pop_front() {
            let rx = rep[x].clone().expect("visited");
            for (&g, m) in gens.iter().zip(&images) {
                let y = group.mul(x, g);
                if rep[y].is_none() {
                    rep[y] = Some(rx.mul(m));
                    queue.push_back(y);
                }
            }
        }
        if rep.iter().any(Option::is_none) {
            return Err(Error::Invalid("the given elements do not generate the finite group".into()));
        }
        let rep = rep.into_iter().map(Option::unwrap).collect();
        Self::with_full_rep(d, group, gens, rep)
    }

    /// Finite part given by permutation generators, one matrix per generator.
    pub fn from_permutations(d: usize, perms: &[Vec<usize>], images: Vec<Matrix>) -> Result<Self> {
        let (group, labels) = FiniteGroup::from_permutations_labeled(perms)?;
        let degree = labels[0].len();
        let gens = perms
            .iter()
            .map(|p| {
                let mut q: Vec<usize> = (0..degree).collect();
                for (i, &img) in p.iter().enumerate() {
                    q[i] = img - 1;
                }
                labels.iter().position(|l| *l == q).expect("generator is an element")
            })
            .collect();
        Self::new(d, group, gens, images)
    }

    fn with_full_rep(d: usize, group: FiniteGroup, gens: Vec<usize>, rep: Vec<Matrix>) -> Result<Self> {
        for a in 0..group.order() {
            for b in 0..group.order() {
                if rep[group.mul(a, b)] != rep[a].mul(&rep[b]) {
                    return Err(Error::Invalid(format!(
                        "representation is not a homomorphism at elements ({a}, {b})"
                    )));
                }
            }
        }
        Ok(LbfModel { d, group, rep, gens })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn finite_group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn rep(&self, f: usize) -> &Matrix {
        &self.rep[f]
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.gens
    }

    pub fn subgroup(&self, w: Subspace, s: FiniteSubgroup) -> Result<LbfSubgroup> {
        if w.ambient() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: w.ambient() });
        }
        if !self.invariant(&w, s.members()) {
            return Err(Error::Invalid("W is not invariant under the finite part".into()));
        }
        Ok(LbfSubgroup { w, s })
    }

    fn invariant(&self, w: &Subspace, elems: &[usize]) -> bool {
        elems.iter().all(|&s| w.contains_space(&w.image(&self.rep[s])))
    }

    fn closure_under(&self, seed: Vec<Vec<Rational>>, elems: &[usize]) -> Subspace {
        let ops: Vec<Matrix> = elems.iter().map(|&f| self.rep[f].clone()).collect();
        invariant_closure(self.d, seed, &ops)
    }

    /// Vectors fixed by `rep(f)` for every listed `f`.
    pub fn fixed_space(&self, elems: &[usize]) -> Subspace {
        let id = Matrix::identity(self.d);
        let rows: Vec<Vec<Rational>> =
            elems.iter().flat_map(|&f| self.rep[f].sub(&id).row_iter().map(<[_]>::to_vec).collect::<Vec<_>>()).collect();
        if rows.is_empty() {
            return Subspace::full(self.d);
        }
        let m = Matrix::from_rows(self.d, rows).expect("square blocks");
        Subspace::span(self.d, nullspace(&m))
    }

    /// Vector part of `[(w1, s1), (w2, s2)]`, linear in `(w1, w2)`.
    fn commutator_image(&self, s1: usize, s2: usize, w1: &Subspace, w2: &Subspace) -> Vec<Vec<Rational>> {
        let mut out = Vec::new();
        for v in w1.basis_vectors() {
            out.push(self.commutator(&LbfElement { v, f: s1 }, &LbfElement { v: zero_vec(self.d), f: s2 }).v);
        }
        for v in w2.basis_vectors() {
            out.push(self.commutator(&LbfElement { v: zero_vec(self.d), f: s1 }, &LbfElement { v, f: s2 }).v);
        }
        out
    }

    fn pure(&self, f: usize) -> LbfElement {
        LbfElement { v: zero_vec(self.d), f }
    }

    /// Invariant subspaces used to populate the subgroup catalog.
    fn candidate_spaces(&self) -> Vec<Subspace> {
        let d = self.d;
        let all: Vec<usize> = (0..self.group.order()).collect();
        let mut out = vec![Subspace::zero(d), Subspace::full(d), self.fixed_space(&all)];
        let id = Matrix::identity(d);
        let moved = all.iter().flat_map(|&f| {
            let m = self.rep[f].sub(&id);
            (0..d).map(move |j| m.column(j))
        });
        dedup_push(&mut out, Subspace::span(d, moved.collect::<Vec<_>>()));
        for i in 0..d {
            dedup_push(&mut out, Subspace::span(d, [unit_vec(d, i)]));
            dedup_push(&mut out, self.closure_under(vec![unit_vec(d, i)], &all));
            for j in i + 1..d {
                for sign in [1, -1] {
                    let mut v = unit_vec(d, i);
                    v[j] = rat(sign);
                    dedup_push(&mut out, Subspace::span(d, [v.clone()]));
                    dedup_push(&mut out, self.closure_under(vec![v], &all));
                }
            }
        }
        out
    }
}

impl GroupModel for LbfModel {
    type Element = LbfElement;
    type Subgroup = LbfSubgroup;

    fn kind(&self) -> &'static str {
        "lbf"
    }

    fn identity(&self) -> LbfElement {
        self.pure(self.group.identity())
    }

    fn mul(&self, a: &LbfElement, b: &LbfElement) -> LbfElement {
        LbfElement { v: add_vec(&a.v, &self.rep[a.f].apply(&b.v)), f: self.group.mul(a.f, b.f) }
    }

    fn inv(&self, a: &LbfElement) -> LbfElement {
        let fi = self.group.inv(a.f);
        LbfElement { v: neg_vec(&self.rep[fi].apply(&a.v)), f: fi }
    }

    fn element_json(&self, a: &LbfElement) -> Value {
        json!({ "v": vector_json(&a.v), "f": a.f })
    }

    fn subgroup_json(&self, h: &LbfSubgroup) -> Value {
        json!({ "W": subspace_json(&h.w), "S": h.s.members() })
    }

    fn whole(&self) -> LbfSubgroup {
        LbfSubgroup { w: Subspace::full(self.d), s: self.group.whole() }
    }

    fn trivial(&self) -> LbfSubgroup {
        LbfSubgroup { w: Subspace::zero(self.d), s: self.group.trivial() }
    }

    fn contains(&self, h: &LbfSubgroup, g: &LbfElement) -> bool {
        h.s.contains(g.f) && h.w.contains(&g.v)
    }

    fn is_subgroup_of(&self, a: &LbfSubgroup, b: &LbfSubgroup) -> bool {
        a.s.is_subset_of(&b.s) && b.w.contains_space(&a.w)
    }

    fn dim(&self, h: &LbfSubgroup) -> usize {
        h.w.dim()
    }

    fn is_finite(&self, h: &LbfSubgroup) -> bool {
        h.w.basis().rows() == 0
    }

    fn enumerate_if_finite(&self, h: &LbfSubgroup) -> Option<Vec<LbfElement>> {
        self.is_finite(h).then(|| h.s.members().iter().map(|&f| self.pure(f)).collect())
    }

    fn component_index(&self, h: &LbfSubgroup) -> usize {
        h.s.order()
    }

    fn connected_component(&self, h: &LbfSubgroup) -> LbfSubgroup {
        LbfSubgroup { w: h.w.clone(), s: self.group.trivial() }
    }

    fn intersect(&self, a: &LbfSubgroup, b: &LbfSubgroup) -> LbfSubgroup {
        LbfSubgroup { w: a.w.intersect(&b.w).expect("same ambient"), s: self.group.intersect(&a.s, &b.s) }
    }

    fn normalizes(&self, a: &LbfSubgroup, b: &LbfSubgroup) -> bool {
        if !self.group.normalizes(&a.s, &b.s) || !self.invariant(&b.w, a.s.members()) {
            return false;
        }
        let id = Matrix::identity(self.d);
        b.s.members().iter().all(|&t| b.w.contains_space(&a.w.image(&id.sub(&self.rep[t]))))
    }

    fn product(&self, a: &LbfSubgroup, b: &LbfSubgroup) -> Result<LbfSubgroup> {
        if !self.normalizes(a, b) && !self.normalizes(b, a) {
            return Err(Error::NotNormalizing("neither factor normalizes the other".into()));
        }
        let s = self.group.subgroup(self.group.product_set(a.s.members(), b.s.members()))?;
        Ok(LbfSubgroup { w: a.w.sum(&b.w)?, s })
    }

    fn join(&self, parts: &[LbfSubgroup]) -> Result<LbfSubgroup> {
        let s = self.group.closure(parts.iter().flat_map(|p| p.s.members().iter().copied()));
        let seed = parts.iter().flat_map(|p| p.w.basis_vectors()).collect();
        let w = self.closure_under(seed, &finite_generators(&self.group, &s));
        Ok(LbfSubgroup { w, s })
    }

    /// Generated by the commutators themselves: the finite part is
    /// `[S1, S2]` and the vector part is the invariant closure of the vector
    /// parts of all `[(w1, s1), (w2, s2)]`.
    fn commutator_subgroup(&self, a: &LbfSubgroup, b: &LbfSubgroup) -> Result<LbfSubgroup> {
        if !self.normalizes(a, b) || !self.normalizes(b, a) {
            return Err(Error::NotNormalizing("A and B must normalize each other".into()));
        }
        let k = self.group.commutator_subgroup(&a.s, &b.s);
        let mut seed = Vec::new();
        for &s1 in a.s.members() {
            for &s2 in b.s.members() {
                seed.extend(self.commutator_image(s1, s2, &a.w, &b.w));
            }
        }
        let w = self.closure_under(seed, k.members());
        Ok(LbfSubgroup { w, s: k })
    }

    fn centralizes(&self, h: &LbfSubgroup, k: &LbfSubgroup) -> bool {
        let commute = h.s.members().iter().all(|&x| k.s.members().iter().all(|&y| self.group.mul(x, y) == self.group.mul(y, x)));
        commute && self.fixed_space(k.s.members()).contains_space(&h.w) && self.fixed_space(h.s.members()).contains_space(&k.w)
    }

    fn center(&self) -> LbfSubgroup {
        let all: Vec<usize> = (0..self.group.order()).collect();
        let id = Matrix::identity(self.d);
        let center = self.group.center();
        let kernel = center.members().iter().copied().filter(|&f| self.rep[f] == id);
        let s = self.group.subgroup(kernel).expect("kernel meets center in a subgroup");
        LbfSubgroup { w: self.fixed_space(&all), s }
    }

    fn normal_closure(&self, h: &LbfSubgroup) -> Result<LbfSubgroup> {
        let s = self.group.normal_closure(h.s.members());
        let id = Matrix::identity(self.d);
        let mut seed = h.w.basis_vectors();
        for &f in s.members() {
            let m = self.rep[f].sub(&id);
            seed.extend((0..self.d).map(|j| m.column(j)));
        }
        let w = self.closure_under(seed, &self.gens);
        Ok(LbfSubgroup { w, s })
    }

    fn quotient(&self, n: &LbfSubgroup) -> Result<AnyModel> {
        if !self.is_normal(n) {
            return Err(Error::NotNormal("quotient by a non-normal subgroup".into()));
        }
        let (fq, proj) = self.group.quotient(&n.s)?;
        if n.w.is_full() {
            return Ok(AnyModel::Finite(FiniteModel::new(fq)));
        }
        let q = Subspace::full(self.d).quotient_by(&n.w);
        let dq = q.dim();
        let rep = (0..fq.order())
            .map(|c| {
                let f = proj.iter().position(|&p| p == c).expect("nonempty coset");
                let cols: Vec<Vec<Rational>> = (0..dq)
                    .map(|j| q.project(&self.rep[f].apply(&q.lift(&unit_vec(dq, j)))).expect("inside Q^d"))
                    .collect();
                Matrix::from_columns(dq, &cols)
            })
            .collect();
        let mut gens: Vec<usize> = self.gens.iter().map(|&g| proj[g]).collect();
        gens.dedup();
        Ok(AnyModel::Lbf(Self::with_full_rep(dq, fq, gens, rep)?))
    }

    fn generators(&self, h: &LbfSubgroup) -> Vec<LbfElement> {
        let mut out: Vec<LbfElement> = h.w.basis_vectors().into_iter().map(|v| self.exp(&v)).collect();
        out.extend(self.extra_generators(h));
        out
    }

    fn random_element<R: Rng>(&self, rng: &mut R, h: &LbfSubgroup) -> LbfElement {
        let mut v = zero_vec(self.d);
        for b in h.w.basis_vectors() {
            crate::exact::axpy(&mut v, &random_rational(rng, 3), &b);
        }
        LbfElement { v, f: h.s.members()[rng.gen_range(0..h.s.order())] }
    }

    fn random_subgroup<R: Rng>(&self, rng: &mut R) -> LbfSubgroup {
        let count = rng.gen_range(0..=2);
        let s = self.group.closure((0..count).map(|_| self.group.random_element(rng)));
        let seed: Vec<Vec<Rational>> = (0..rng.gen_range(0..=self.d))
            .map(|_| (0..self.d).map(|_| rat(rng.gen_range(-1..=1))).collect())
            .collect();
        let w = self.closure_under(seed, s.members());
        LbfSubgroup { w, s }
    }

    fn catalog_subgroups(&self) -> Vec<LbfSubgroup> {
        let spaces = self.candidate_spaces();
        let mut out = Vec::new();
        for s in self.group.all_subgroups() {
            for w in &spaces {
                if self.invariant(w, s.members()) {
                    dedup_push(&mut out, LbfSubgroup { w: w.clone(), s: s.clone() });
                }
            }
        }
        out
    }
}

impl Linearized for LbfModel {
    fn lie_dim(&self) -> usize {
        self.d
    }

    fn exp(&self, v: &[Rational]) -> LbfElement {
        LbfElement { v: v.to_vec(), f: self.group.identity() }
    }

    fn log(&self, g: &LbfElement) -> Option<Vec<Rational>> {
        (g.f == self.group.identity()).then(|| g.v.clone())
    }

    fn adjoint(&self, g: &LbfElement) -> Matrix {
        self.rep[g.f].clone()
    }

    fn lie_ad(&self, _v: &[Rational]) -> Matrix {
        Matrix::zeros(self.d, self.d)
    }

    fn unipotent_part(&self, h: &LbfSubgroup) -> Subspace {
        h.w.clone()
    }

    fn extra_generators(&self, h: &LbfSubgroup) -> Vec<LbfElement> {
        finite_generators(&self.group, &h.s).into_iter().map(|f| self.pure(f)).collect()
    }

    fn from_unipotent(&self, s: Subspace) -> LbfSubgroup {
        LbfSubgroup { w: s, s: self.group.trivial() }
    }

    /// Writes the finite part `k` of `g = (v, k)` as a shortest product of
    /// commutators `[(0, s1), (0, s2)]^{±1}`, leaving `(rep(k)^{-1} v, 1)`.
    fn finite_correction(
        &self,
        a: &LbfSubgroup,
        b: &LbfSubgroup,
        g: &LbfElement,
    ) -> Result<(Vec<Factor<LbfElement>>, LbfElement)> {
        let mut steps: BTreeMap<usize, (usize, usize, i8)> = BTreeMap::new();
        for &s1 in a.s.members() {
            for &s2 in b.s.members() {
                let c = self.group.commutator(s1, s2);
                steps.entry(c).or_insert((s1, s2, 1));
                steps.entry(self.group.inv(c)).or_insert((s1, s2, -1));
            }
        }
        let e = self.group.identity();
        let mut prev: BTreeMap<usize, (usize, (usize, usize, i8))> = BTreeMap::new();
        let mut queue = VecDeque::from([e]);
        let mut seen = vec![false; self.group.order()];
        seen[e] = true;
        while let Some(x) = queue.pop_front() {
            for (&c, &step) in &steps {
                let y = self.group.mul(x, c);
                if !seen[y] {
                    seen[y] = true;
                    prev.insert(y, (x, step));
                    queue.push_back(y);
                }
            }
        }
        if !seen[g.f] {
            return Err(Error::NotInCommutator);
        }
        let mut factors = Vec::new();
        let mut x = g.f;
        while x != e {
            let (p, (s1, s2, sign)) = prev[&x];
            factors.push(Factor { a: self.pure(s1), b: self.pure(s2), sign, source: FactorSource::FiniteCorrection });
            x = p;
        }
        factors.reverse();
        let c = super::replay(self, &factors);
        Ok((factors, self.mul(&self.inv(&c), g)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::frac;

    /// `Q ⋊ <-1>`.
    fn inversion() -> LbfModel {
        LbfModel::from_permutations(1, &[vec![2, 1]], vec![Matrix::from_i64(&[&[-1]])]).unwrap()
    }

    fn rotation_c4() -> LbfModel {
        LbfModel::from_permutations(2, &[vec![2, 3, 4, 1]], vec![Matrix::from_i64(&[&[0, -1], &[1, 0]])]).unwrap()
    }

    #[test]
    fn inversion_example() {
        let m = inversion();
        let g = m.whole();
        let a = m.connected_component(&g);
        assert_eq!(m.dim(&g), 1);
        assert_eq!(m.component_index(&g), 2);
        let bc = m.connected_component(&g);
        assert!(m.commutator_subgroup(&a, &bc).unwrap() == m.trivial());
        assert_eq!(m.commutator_subgroup(&a, &g).unwrap(), a);
    }

    #[test]
    fn rejects_non_homomorphism() {
        // a transposition sent to a matrix of order 4
        let r = LbfModel::from_permutations(2, &[vec![2, 1]], vec![Matrix::from_i64(&[&[0, -1], &[1, 0]])]);
        assert!(r.is_err());
    }

    #[test]
    fn commutator_matches_group_law() {
        let m = rotation_c4();
        let a = LbfElement { v: vec![frac(1, 2), rat(3)], f: 1 };
        let b = LbfElement { v: vec![rat(-1), rat(2)], f: 2 };
        let c = m.commutator(&a, &b);
        let direct = m.mul(&m.mul(&m.inv(&a), &m.inv(&b)), &m.mul(&a, &b));
        assert_eq!(c, direct);
        assert!(m.contains(&m.commutator_subgroup(&m.whole(), &m.whole()).unwrap(), &c));
    }

    #[test]
    fn center_and_quotients() {
        let m = rotation_c4();
        assert_eq!(m.center(), m.trivial());
        match m.quotient(&m.connected_component(&m.whole())).unwrap() {
            AnyModel::Finite(f) => assert_eq!(f.group().order(), 4),
            other => panic!("unexpected quotient {other:?}"),
        }
        match m.quotient(&m.trivial()).unwrap() {
            AnyModel::Lbf(q) => assert_eq!(q.finite_group().order(), 4),
            other => panic!("unexpected quotient {other:?}"),
        }
        let half = LbfSubgroup { w: Subspace::span(2, [unit_vec(2, 0)]), s: m.finite_group().trivial() };
        assert!(m.quotient(&half).is_err());
    }

    #[test]
    fn finite_correction_replays() {
        let m = inversion();
        let g = m.whole();
        let target = LbfElement { v: vec![frac(5, 3)], f: 0 };
        let (factors, rest) = m.finite_correction(&g, &g, &target).unwrap();
        assert!(factors.is_empty());
        assert_eq!(rest, target);
    }

    #[test]
    fn normal_closure_is_normal() {
        let m = rotation_c4();
        for h in m.catalog_subgroups() {
            let n = m.normal_closure(&h).unwrap();
            assert!(m.is_normal(&n), "{h:?}");
            assert!(m.is_subgroup_of(&h, &n));
        }
    }
}
