//! Torus-by-unipotent groups `N ⋊ Q^×`, where `N = exp(n)` for a graded
//! nilpotent Lie algebra `n` and `t` acts on the weight-`w` part by `t^w`.

use rand::Rng;
use serde_json::{json, Value};

use super::malcev::{dedup_push, subspace_json, vector_json};
use super::{AnyModel, GroupModel, Linearized};
use crate::error::{Error, Result};
use crate::exact::{format_rational, invariant_closure, neg_vec, rat, unit_vec, Matrix, Rational, Subspace};
use crate::nilpotent::LieAlgebra;

/// Which part of `Q^×` a subgroup contains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Torus {
    Trivial,
    /// `{±1}`
    Sign,
    /// `Q_{>0}`
    Positive,
    Full,
}

impl Torus {
    pub fn has_sign(self) -> bool {
        matches!(self, Torus::Sign | Torus::Full)
    }

    pub fn has_positive(self) -> bool {
        matches!(self, Torus::Positive | Torus::Full)
    }

    pub fn from_flags(sign: bool, positive: bool) -> Torus {
        match (sign, positive) {
            (false, false) => Torus::Trivial,
            (true, false) => Torus::Sign,
            (false, true) => Torus::Positive,
            (true, true) => Torus::Full,
        }
    }

    pub fn contains(self, t: &Rational) -> bool {
        let one = rat(1);
        if *t == one {
            true
        } else if *t == -one {
            self.has_sign()
        } else if t > &rat(0) {
            self.has_positive()
        } else {
            self == Torus::Full
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Torus::Trivial => "trivial",
            Torus::Sign => "sign",
            Torus::Positive => "positive",
            Torus::Full => "full",
        }
    }

    pub fn parse(s: &str) -> Result<Torus> {
        match s {
            "trivial" => Ok(Torus::Trivial),
            "sign" => Ok(Torus::Sign),
            "positive" => Ok(Torus::Positive),
            "full" => Ok(Torus::Full),
            _ => Err(Error::Parse(format!("unknown torus part `{s}`"))),
        }
    }
}

/// Which torus parts count as connected.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ComponentConvention {
    /// `Q_{>0}` is the connected part of `Q^×`; `{±1}` is the finite bit.
    #[default]
    PositivePart,
    /// All of `Q^×` counts as connected; only `{±1}` alone is finite.
    FullTorusConnected,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TbuModel {
    algebra: LieAlgebra,
    weights: Vec<i64>,
    convention: ComponentConvention,
}

/// `exp(u) t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TbuElement {
    pub t: Rational,
    pub u: Vec<Rational>,
}

/// `exp(h) ⋊ T` for a torus part `T`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TbuSubgroup {
    pub torus: Torus,
    pub h: Subspace,
}

fn power(t: &Rational, w: i64) -> Rational {
    let base = if w < 0 { t.recip() } else { t.clone() };
    (0..w.unsigned_abs()).fold(rat(1), |acc, _| acc * &base)
}

impl TbuModel {
    /// Checks that brackets respect the grading: `[e_i, e_j]` has weight
    /// `w_i + w_j`.
    pub fn new(algebra: LieAlgebra, weights: Vec<i64>) -> Result<Self> {
        let n = algebra.dim();
        if weights.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: weights.len() });
        }
        for i in 0..n {
            for j in i + 1..n {
                let b = algebra.basis_bracket(i, j);
                for (k, c) in b.iter().enumerate() {
                    if *c != rat(0) && weights[k] != weights[i] + weights[j] {
                        return Err(Error::Invalid(format!(
                            "bracket [e{}, e{}] has a component on e{} of weight {} instead of {}",
                            i + 1,
                            j + 1,
                            k + 1,
                            weights[k],
                            weights[i] + weights[j]
                        )));
                    }
                }
            }
        }
        Ok(TbuModel { algebra, weights, convention: ComponentConvention::default() })
    }

    pub fn with_convention(mut self, convention: ComponentConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn convention(&self) -> ComponentConvention {
        self.convention
    }

    pub fn torus_element(&self, t: Rational) -> TbuElement {
        TbuElement { t, u: self.algebra.zero() }
    }

    /// `t . v`, scaling the weight-`w` coordinate by `t^w`.
    pub fn act(&self, t: &Rational, v: &[Rational]) -> Vec<Rational> {
        v.iter().zip(&self.weights).map(|(x, &w)| x * power(t, w)).collect()
    }

    /// `diag((-1)^w)`
    pub fn sigma(&self) -> Matrix {
        self.diagonal(|w| if w.rem_euclid(2) == 0 { 1 } else { -1 })
    }

    /// `diag(w)`, the derivative of the torus action.
    pub fn grading(&self) -> Matrix {
        self.diagonal(|w| w)
    }

    fn diagonal(&self, f: impl Fn(i64) -> i64) -> Matrix {
        let n = self.weights.len();
        let mut m = Matrix::zeros(n, n);
        for (i, &w) in self.weights.iter().enumerate() {
            m[(i, i)] = rat(f(w));
        }
        m
    }

    fn torus_ops(&self, torus: Torus) -> Vec<Matrix> {
        let mut ops = Vec::new();
        if torus.has_positive() {
            ops.push(self.grading());
        }
        if torus.has_sign() {
            ops.push(self.sigma());
        }
        ops
    }

    fn is_graded(&self, h: &Subspace) -> bool {
        h.contains_space(&h.image(&self.grading()))
    }

    /// Whether `exp(h) ⋊ T` is a subgroup.
    pub fn is_representable(&self, torus: Torus, h: &Subspace) -> bool {
        h.ambient() == self.algebra.dim()
            && self.algebra.is_subalgebra(h)
            && self.torus_ops(torus).iter().all(|op| h.contains_space(&h.image(op)))
    }

    pub fn subgroup(&self, torus: Torus, h: Subspace) -> Result<TbuSubgroup> {
        if !self.is_representable(torus, &h) {
            return Err(Error::Invalid("not a subalgebra stable under the torus part".into()));
        }
        Ok(TbuSubgroup { torus, h })
    }

    /// Smallest subalgebra containing `seed` and stable under `torus`, and
    /// under `ad` of `extra` when given.
    pub fn closure(&self, torus: Torus, seed: Vec<Vec<Rational>>, extra: &[Vec<Rational>]) -> Subspace {
        let n = self.algebra.dim();
        let mut ops = self.torus_ops(torus);
        ops.extend(extra.iter().map(|v| self.algebra.ad(v)));
        let mut space = Subspace::span(n, seed);
        loop {
            let closed = self.algebra.subalgebra_closure(space.basis_vectors());
            let next = invariant_closure(n, closed.basis_vectors(), &ops);
            if next == space {
                return space;
            }
            space = next;
        }
    }

    /// Span of the coordinates with nonzero weight.
    fn moved_part(&self) -> Subspace {
        let n = self.algebra.dim();
        Subspace::span(n, (0..n).filter(|&i| self.weights[i] != 0).map(|i| unit_vec(n, i)))
    }

    /// Span of the coordinates with odd weight.
    fn odd_part(&self) -> Subspace {
        let n = self.algebra.dim();
        Subspace::span(n, (0..n).filter(|&i| self.weights[i].rem_euclid(2) == 1).map(|i| unit_vec(n, i)))
    }

    /// Connected component of the Fitting subgroup: the unipotent radical
    /// when the torus acts nontrivially, otherwise everything connected.
    pub fn fitting_connected(&self) -> TbuSubgroup {
        if self.weights.iter().all(|&w| w == 0) {
            self.connected_component(&self.whole())
        } else {
            TbuSubgroup { torus: Torus::Trivial, h: self.algebra.whole() }
        }
    }
}

impl GroupModel for TbuModel {
    type Element = TbuElement;
    type Subgroup = TbuSubgroup;

    fn kind(&self) -> &'static str {
        "tbu"
    }

    fn identity(&self) -> TbuElement {
        self.torus_element(rat(1))
    }

    fn mul(&self, a: &TbuElement, b: &TbuElement) -> TbuElement {
        TbuElement { t: &a.t * &b.t, u: self.algebra.mul(&a.u, &self.act(&a.t, &b.u)) }
    }

    fn inv(&self, a: &TbuElement) -> TbuElement {
        let ti = a.t.recip();
        TbuElement { u: neg_vec(&self.act(&ti, &a.u)), t: ti }
    }

    fn element_json(&self, a: &TbuElement) -> Value {
        json!({ "t": format_rational(&a.t), "u": vector_json(&a.u) })
    }

    fn subgroup_json(&self, h: &TbuSubgroup) -> Value {
        json!({ "torus": h.torus.name(), "h": subspace_json(&h.h) })
    }

    fn whole(&self) -> TbuSubgroup {
        TbuSubgroup { torus: Torus::Full, h: self.algebra.whole() }
    }

    fn trivial(&self) -> TbuSubgroup {
        TbuSubgroup { torus: Torus::Trivial, h: self.algebra.trivial() }
    }

    fn contains(&self, h: &TbuSubgroup, g: &TbuElement) -> bool {
        h.torus.contains(&g.t) && h.h.contains(&g.u)
    }

    fn is_subgroup_of(&self, a: &TbuSubgroup, b: &TbuSubgroup) -> bool {
        (!a.torus.has_sign() || b.torus.has_sign())
            && (!a.torus.has_positive() || b.torus.has_positive())
            && b.h.contains_space(&a.h)
    }

    fn dim(&self, h: &TbuSubgroup) -> usize {
        usize::from(h.torus.has_positive()) + h.h.dim()
    }

    fn is_finite(&self, h: &TbuSubgroup) -> bool {
        !h.torus.has_positive() && h.h.basis().rows() == 0
    }

    fn enumerate_if_finite(&self, h: &TbuSubgroup) -> Option<Vec<TbuElement>> {
        if !self.is_finite(h) {
            return None;
        }
        let mut out = vec![self.identity()];
        if h.torus.has_sign() {
            out.push(self.torus_element(rat(-1)));
        }
        Some(out)
    }

    fn component_index(&self, h: &TbuSubgroup) -> usize {
        match (self.convention, h.torus) {
            (_, Torus::Sign) => 2,
            (ComponentConvention::PositivePart, Torus::Full) => 2,
            _ => 1,
        }
    }

    fn connected_component(&self, h: &TbuSubgroup) -> TbuSubgroup {
        let torus = match (self.convention, h.torus) {
            (_, Torus::Sign) => Torus::Trivial,
            (ComponentConvention::PositivePart, Torus::Full) => Torus::Positive,
            (_, t) => t,
        };
        TbuSubgroup { torus, h: h.h.clone() }
    }

    fn intersect(&self, a: &TbuSubgroup, b: &TbuSubgroup) -> TbuSubgroup {
        TbuSubgroup {
            torus: Torus::from_flags(
                a.torus.has_sign() && b.torus.has_sign(),
                a.torus.has_positive() && b.torus.has_positive(),
            ),
            h: a.h.intersect(&b.h).expect("same ambient"),
        }
    }

    fn normalizes(&self, a: &TbuSubgroup, b: &TbuSubgroup) -> bool {
        let alg = &self.algebra;
        if !alg.normalizes(&a.h, &b.h) {
            return false;
        }
        if a.torus.has_positive() && !self.is_graded(&b.h) {
            return false;
        }
        if a.torus.has_sign() && !b.h.contains_space(&b.h.image(&self.sigma())) {
            return false;
        }
        if b.torus.has_positive() && !b.h.contains_space(&a.h.image(&self.grading())) {
            return false;
        }
        let id = Matrix::identity(alg.dim());
        if b.torus.has_sign() && !b.h.contains_space(&a.h.image(&id.sub(&self.sigma()))) {
            return false;
        }
        true
    }

    fn product(&self, a: &TbuSubgroup, b: &TbuSubgroup) -> Result<TbuSubgroup> {
        if !self.normalizes(a, b) && !self.normalizes(b, a) {
            return Err(Error::NotNormalizing("neither factor normalizes the other".into()));
        }
        let torus = Torus::from_flags(
            a.torus.has_sign() || b.torus.has_sign(),
            a.torus.has_positive() || b.torus.has_positive(),
        );
        let h = a.h.sum(&b.h)?;
        if !self.is_representable(torus, &h) {
            return Err(Error::Invalid("product is not representable".into()));
        }
        Ok(TbuSubgroup { torus, h })
    }

    fn join(&self, parts: &[TbuSubgroup]) -> Result<TbuSubgroup> {
        let torus = Torus::from_flags(
            parts.iter().any(|p| p.torus.has_sign()),
            parts.iter().any(|p| p.torus.has_positive()),
        );
        let seed = parts.iter().flat_map(|p| p.h.basis_vectors()).collect();
        Ok(TbuSubgroup { torus, h: self.closure(torus, seed, &[]) })
    }

    /// `[A,B]` lies in `N`; its Lie algebra is generated by `[a,b]` and by
    /// the directions each torus part moves the other algebra in.
    fn commutator_subgroup(&self, a: &TbuSubgroup, b: &TbuSubgroup) -> Result<TbuSubgroup> {
        if !self.normalizes(a, b) || !self.normalizes(b, a) {
            return Err(Error::NotNormalizing("A and B must normalize each other".into()));
        }
        let n = self.algebra.dim();
        let id = Matrix::identity(n);
        let mut seed = self.algebra.bracket_spaces(&a.h, &b.h).basis_vectors();
        let mut image = |flag: bool, m: &Matrix, h: &Subspace| {
            if flag {
                seed.extend(h.image(m).basis_vectors());
            }
        };
        image(a.torus.has_positive(), &self.grading(), &b.h);
        image(b.torus.has_positive(), &self.grading(), &a.h);
        let flip = id.sub(&self.sigma());
        image(a.torus.has_sign(), &flip, &b.h);
        image(b.torus.has_sign(), &flip, &a.h);
        let torus = Torus::from_flags(
            a.torus.has_sign() || b.torus.has_sign(),
            a.torus.has_positive() || b.torus.has_positive(),
        );
        let extra = a.h.sum(&b.h)?.basis_vectors();
        Ok(TbuSubgroup { torus: Torus::Trivial, h: self.closure(torus, seed, &extra) })
    }

    fn centralizes(&self, h: &TbuSubgroup, k: &TbuSubgroup) -> bool {
        if !self.algebra.bracket_spaces(&h.h, &k.h).is_zero() {
            return false;
        }
        let fixed = |t: Torus, s: &Subspace| {
            (!t.has_positive() || self.moved_part().intersect(s).expect("same ambient").is_zero())
                && (!t.has_sign() || self.odd_part().intersect(s).expect("same ambient").is_zero())
        };
        fixed(h.torus, &k.h) && fixed(k.torus, &h.h)
    }

    fn center(&self) -> TbuSubgroup {
        let torus = if self.weights.iter().all(|&w| w == 0) {
            Torus::Full
        } else if self.weights.iter().all(|&w| w % 2 == 0) {
            Torus::Sign
        } else {
            Torus::Trivial
        };
        let n = self.algebra.dim();
        let weight_zero = Subspace::span(n, (0..n).filter(|&i| self.weights[i] == 0).map(|i| unit_vec(n, i)));
        TbuSubgroup { torus, h: self.algebra.center().intersect(&weight_zero).expect("same ambient") }
    }

    fn normal_closure(&self, h: &TbuSubgroup) -> Result<TbuSubgroup> {
        let n = self.algebra.dim();
        let mut seed = h.h.basis_vectors();
        if h.torus.has_positive() {
            seed.extend(self.moved_part().basis_vectors());
        }
        if h.torus.has_sign() {
            seed.extend(self.odd_part().basis_vectors());
        }
        let all: Vec<Vec<Rational>> = (0..n).map(|i| unit_vec(n, i)).collect();
        Ok(TbuSubgroup { torus: h.torus, h: self.closure(Torus::Full, seed, &all) })
    }

    /// Only quotients by graded ideals of `n` are modeled.
    fn quotient(&self, n: &TbuSubgroup) -> Result<AnyModel> {
        if !self.is_normal(n) {
            return Err(Error::NotNormal("quotient by a non-normal subgroup".into()));
        }
        if n.torus != Torus::Trivial {
            return Err(Error::Unsupported("quotients by subgroups meeting the torus".into()));
        }
        let (q, map) = self.algebra.quotient(&n.h)?;
        let weights = map
            .complement()
            .iter()
            .map(|v| {
                let i = v.iter().position(|x| *x != rat(0)).expect("nonzero");
                self.weights[i]
            })
            .collect();
        Ok(AnyModel::Tbu(TbuModel::new(q, weights)?.with_convention(self.convention)))
    }

    fn generators(&self, h: &TbuSubgroup) -> Vec<TbuElement> {
        let mut out: Vec<TbuElement> = h.h.basis_vectors().into_iter().map(|v| self.exp(&v)).collect();
        out.extend(self.extra_generators(h));
        out
    }

    fn random_element<R: Rng>(&self, rng: &mut R, h: &TbuSubgroup) -> TbuElement {
        let mut t = if h.torus.has_positive() {
            Rational::new(rng.gen_range(1..=4i64).into(), rng.gen_range(1..=3i64).into())
        } else {
            rat(1)
        };
        if h.torus.has_sign() && rng.gen_bool(0.5) {
            t = -t;
        }
        TbuElement { t, u: self.algebra.random_in(rng, &h.h, 3) }
    }

    fn random_subgroup<R: Rng>(&self, rng: &mut R) -> TbuSubgroup {
        let torus = [Torus::Trivial, Torus::Sign, Torus::Positive, Torus::Full][rng.gen_range(0..4)];
        let seed = self.algebra.random_subalgebra(rng).basis_vectors();
        TbuSubgroup { torus, h: self.closure(torus, seed, &[]) }
    }

    fn catalog_subgroups(&self) -> Vec<TbuSubgroup> {
        let alg = &self.algebra;
        let n = alg.dim();
        let mut spaces = vec![alg.trivial(), alg.whole(), alg.center(), self.moved_part(), self.odd_part()];
        let series = alg.series();
        for s in series.lower_central.into_iter().chain(series.upper_central) {
            dedup_push(&mut spaces, s);
        }
        for i in 0..n {
            dedup_push(&mut spaces, alg.subalgebra_closure(vec![unit_vec(n, i)]));
            for j in i + 1..n {
                dedup_push(&mut spaces, alg.subalgebra_closure(vec![unit_vec(n, i), unit_vec(n, j)]));
            }
        }
        let mut out = Vec::new();
        for torus in [Torus::Trivial, Torus::Sign, Torus::Positive, Torus::Full] {
            for h in &spaces {
                if self.is_representable(torus, h) {
                    dedup_push(&mut out, TbuSubgroup { torus, h: h.clone() });
                }
            }
        }
        out
    }
}

impl Linearized for TbuModel {
    fn lie_dim(&self) -> usize {
        self.algebra.dim()
    }

    fn exp(&self, v: &[Rational]) -> TbuElement {
        TbuElement { t: rat(1), u: v.to_vec() }
    }

    fn log(&self, g: &TbuElement) -> Option<Vec<Rational>> {
        (g.t == rat(1)).then(|| g.u.clone())
    }

    /// `exp(ad u) diag(t^w)`
    fn adjoint(&self, g: &TbuElement) -> Matrix {
        let n = self.algebra.dim();
        let mut scale = Matrix::zeros(n, n);
        for (i, &w) in self.weights.iter().enumerate() {
            scale[(i, i)] = power(&g.t, w);
        }
        self.algebra.adjoint(&g.u).mul(&scale)
    }

    fn lie_ad(&self, v: &[Rational]) -> Matrix {
        self.algebra.ad(v)
    }

    fn unipotent_part(&self, h: &TbuSubgroup) -> Subspace {
        h.h.clone()
    }

    fn extra_generators(&self, h: &TbuSubgroup) -> Vec<TbuElement> {
        let mut out = Vec::new();
        if h.torus.has_positive() {
            out.push(self.torus_element(rat(2)));
        }
        if h.torus.has_sign() {
            out.push(self.torus_element(rat(-1)));
        }
        out
    }

    fn from_unipotent(&self, s: Subspace) -> TbuSubgroup {
        TbuSubgroup { torus: Torus::Trivial, h: s }
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::exact::frac;

    fn ax_plus_b() -> TbuModel {
        TbuModel::new(LieAlgebra::abelian(1), vec![1]).unwrap()
    }

    /// Heisenberg with weights `[1, 1, 2]`.
    fn graded_heisenberg() -> TbuModel {
        TbuModel::new(LieAlgebra::heisenberg(), vec![1, 1, 2]).unwrap()
    }

    /// Group-level test of `a` normalizing `b`, using generators of `a`:
    /// `exp(q e_j)` for small integers `q` and the torus generators.
    fn normalizes_by_conjugation(m: &TbuModel, a: &TbuSubgroup, b: &TbuSubgroup) -> bool {
        let mut gens = Vec::new();
        for v in a.h.basis_vectors() {
            for q in 1..=m.algebra().class() as i64 + 1 {
                gens.push(m.exp(&crate::exact::scale_vec(&rat(q), &v)));
            }
        }
        gens.extend(m.extra_generators(a));
        gens.iter().all(|g| {
            let ad = m.adjoint(g);
            let algebra_ok = b.h.contains_space(&b.h.image(&ad));
            let torus_ok = m.extra_generators(b).iter().all(|x| {
                let c = m.mul(&m.mul(g, x), &m.inv(g));
                m.contains(b, &c)
            });
            algebra_ok && torus_ok
        })
    }

    #[test]
    fn weights_must_be_additive() {
        assert!(TbuModel::new(LieAlgebra::heisenberg(), vec![1, 1, 1]).is_err());
        assert!(TbuModel::new(LieAlgebra::heisenberg(), vec![1, -1, 0]).is_ok());
    }

    #[test]
    fn group_law_and_adjoint() {
        let m = graded_heisenberg();
        let g = TbuElement { t: frac(-3, 2), u: vec![rat(1), frac(1, 2), rat(2)] };
        let h = TbuElement { t: rat(2), u: vec![rat(0), rat(-1), frac(1, 3)] };
        let k = TbuElement { t: frac(1, 5), u: vec![rat(3), rat(1), rat(0)] };
        assert_eq!(m.mul(&m.mul(&g, &h), &k), m.mul(&g, &m.mul(&h, &k)));
        assert_eq!(m.mul(&g, &m.inv(&g)), m.identity());
        let v = vec![rat(2), rat(-1), frac(1, 7)];
        let conj = m.mul(&m.mul(&g, &m.exp(&v)), &m.inv(&g));
        assert_eq!(m.log(&conj).unwrap(), m.adjoint(&g).apply(&v));
    }

    #[test]
    fn ax_plus_b_commutator() {
        let m = ax_plus_b();
        let g = m.whole();
        assert_eq!(m.dim(&g), 2);
        let c = m.commutator_subgroup(&g, &g).unwrap();
        assert_eq!(c, TbuSubgroup { torus: Torus::Trivial, h: Subspace::full(1) });
        assert_eq!(m.fitting_connected(), c);
        assert_eq!(m.center(), m.trivial());
        assert_eq!(m.component_index(&g), 2);
        let alt = ax_plus_b().with_convention(ComponentConvention::FullTorusConnected);
        assert_eq!(alt.component_index(&g), 1);
    }

    #[test]
    fn normalizes_agrees_with_conjugation() {
        for m in [graded_heisenberg(), TbuModel::new(LieAlgebra::heisenberg(), vec![1, -1, 0]).unwrap(), ax_plus_b()] {
            let cat = m.catalog_subgroups();
            for a in &cat {
                for b in &cat {
                    assert_eq!(m.normalizes(a, b), normalizes_by_conjugation(&m, a, b), "{a:?} {b:?}");
                }
            }
        }
    }

    #[test]
    fn quotient_by_graded_ideal() {
        let m = graded_heisenberg();
        let z = TbuSubgroup { torus: Torus::Trivial, h: LieAlgebra::heisenberg().center() };
        match m.quotient(&z).unwrap() {
            AnyModel::Tbu(q) => {
                assert_eq!(q.weights(), &[1, 1]);
                assert_eq!(q.dim(&q.whole()), 3);
            }
            other => panic!("unexpected quotient {other:?}"),
        }
        let sign = TbuSubgroup { torus: Torus::Sign, h: m.algebra().whole() };
        assert!(matches!(m.quotient(&sign), Err(Error::Unsupported(_)) | Err(Error::NotNormal(_))));
    }

    #[test]
    fn brackets_from_table() {
        let e = |i| unit_vec(3, i);
        let alg = LieAlgebra::from_brackets(3, &BTreeMap::from([((0, 1), e(2))])).unwrap();
        assert_eq!(alg, LieAlgebra::heisenberg());
    }
}
