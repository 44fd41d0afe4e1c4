use rand::Rng;
use serde_json::{json, Value};

use super::{AnyModel, GroupModel, Linearized};
use crate::error::{Error, Result};
use crate::exact::{format_rational, Matrix, Rational, Subspace};
use crate::nilpotent::LieAlgebra;

/// The divisible torsion-free nilpotent group `exp(g)` of a rational
/// nilpotent Lie algebra. Representable subgroups are the subalgebras, all
/// of them connected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MalcevModel {
    algebra: LieAlgebra,
}

pub(crate) fn vector_json(v: &[Rational]) -> Value {
    json!(v.iter().map(format_rational).collect::<Vec<_>>())
}

pub(crate) fn subspace_json(s: &Subspace) -> Value {
    json!({ "dim": s.dim(), "basis": s.basis().to_strings() })
}

pub(crate) fn dedup_push<T: PartialEq>(list: &mut Vec<T>, item: T) {
    if !list.contains(&item) {
        list.push(item);
    }
}

impl MalcevModel {
    pub fn new(algebra: LieAlgebra) -> Self {
        MalcevModel { algebra }
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }
}

impl GroupModel for MalcevModel {
    type Element = Vec<Rational>;
    type Subgroup = Subspace;

    fn kind(&self) -> &'static str {
        "nilpotent"
    }

    fn identity(&self) -> Vec<Rational> {
        self.algebra.zero()
    }

    fn mul(&self, a: &Vec<Rational>, b: &Vec<Rational>) -> Vec<Rational> {
        self.algebra.mul(a, b)
    }

    fn inv(&self, a: &Vec<Rational>) -> Vec<Rational> {
        self.algebra.inv(a)
    }

    fn commutator(&self, a: &Vec<Rational>, b: &Vec<Rational>) -> Vec<Rational> {
        self.algebra.commutator(a, b)
    }

    fn element_json(&self, a: &Vec<Rational>) -> Value {
        vector_json(a)
    }

    fn subgroup_json(&self, h: &Subspace) -> Value {
        subspace_json(h)
    }

    fn whole(&self) -> Subspace {
        self.algebra.whole()
    }

    fn trivial(&self) -> Subspace {
        self.algebra.trivial()
    }

    fn contains(&self, h: &Subspace, g: &Vec<Rational>) -> bool {
        h.contains(g)
    }

    fn is_subgroup_of(&self, a: &Subspace, b: &Subspace) -> bool {
        b.contains_space(a)
    }

    fn dim(&self, h: &Subspace) -> usize {
        h.dim()
    }

    fn is_finite(&self, h: &Subspace) -> bool {
        // torsion-free: only the trivial subgroup is finite
        h.basis().rows() == 0
    }

    fn enumerate_if_finite(&self, h: &Subspace) -> Option<Vec<Vec<Rational>>> {
        self.is_finite(h).then(|| vec![self.algebra.zero()])
    }

    fn component_index(&self, _h: &Subspace) -> usize {
        1
    }

    fn connected_component(&self, h: &Subspace) -> Subspace {
        h.clone()
    }

    fn intersect(&self, a: &Subspace, b: &Subspace) -> Subspace {
        a.intersect(b).expect("same ambient")
    }

    fn normalizes(&self, a: &Subspace, b: &Subspace) -> bool {
        self.algebra.normalizes(a, b)
    }

    fn product(&self, a: &Subspace, b: &Subspace) -> Result<Subspace> {
        if !self.normalizes(a, b) && !self.normalizes(b, a) {
            return Err(Error::NotNormalizing("neither factor normalizes the other".into()));
        }
        a.sum(b)
    }

    fn join(&self, parts: &[Subspace]) -> Result<Subspace> {
        Ok(self.algebra.subalgebra_closure(parts.iter().flat_map(Subspace::basis_vectors).collect()))
    }

    fn commutator_subgroup(&self, a: &Subspace, b: &Subspace) -> Result<Subspace> {
        if !self.normalizes(a, b) || !self.normalizes(b, a) {
            return Err(Error::NotNormalizing("A and B must normalize each other".into()));
        }
        Ok(self.algebra.subalgebra_closure(self.algebra.bracket_spaces(a, b).basis_vectors()))
    }

    fn centralizes(&self, h: &Subspace, k: &Subspace) -> bool {
        self.algebra.bracket_spaces(h, k).is_zero()
    }

    fn center(&self) -> Subspace {
        self.algebra.center()
    }

    fn normal_closure(&self, h: &Subspace) -> Result<Subspace> {
        Ok(self.algebra.ideal_closure(h.basis_vectors()))
    }

    fn quotient(&self, n: &Subspace) -> Result<AnyModel> {
        if !self.algebra.is_ideal(n) {
            return Err(Error::NotNormal("subalgebra is not an ideal".into()));
        }
        let (q, _) = self.algebra.quotient(n)?;
        Ok(AnyModel::Malcev(MalcevModel::new(q)))
    }

    fn generators(&self, h: &Subspace) -> Vec<Vec<Rational>> {
        h.basis_vectors()
    }

    fn random_element<R: Rng>(&self, rng: &mut R, h: &Subspace) -> Vec<Rational> {
        self.algebra.random_in(rng, h, 3)
    }

    fn random_subgroup<R: Rng>(&self, rng: &mut R) -> Subspace {
        self.algebra.random_subalgebra(rng)
    }

    fn catalog_subgroups(&self) -> Vec<Subspace> {
        let alg = &self.algebra;
        let n = alg.dim();
        let mut out = vec![alg.trivial(), alg.whole(), alg.center()];
        let series = alg.series();
        for s in series.lower_central.into_iter().chain(series.derived).chain(series.upper_central) {
            dedup_push(&mut out, s);
        }
        for i in 0..n {
            dedup_push(&mut out, alg.subalgebra_closure(vec![crate::exact::unit_vec(n, i)]));
            for j in i + 1..n {
                let pair = vec![crate::exact::unit_vec(n, i), crate::exact::unit_vec(n, j)];
                dedup_push(&mut out, alg.subalgebra_closure(pair));
            }
        }
        out
    }
}

impl Linearized for MalcevModel {
    fn lie_dim(&self) -> usize {
        self.algebra.dim()
    }

    fn exp(&self, v: &[Rational]) -> Vec<Rational> {
        v.to_vec()
    }

    fn log(&self, g: &Vec<Rational>) -> Option<Vec<Rational>> {
        Some(g.clone())
    }

    fn adjoint(&self, g: &Vec<Rational>) -> Matrix {
        self.algebra.adjoint(g)
    }

    fn lie_ad(&self, v: &[Rational]) -> Matrix {
        self.algebra.ad(v)
    }

    fn unipotent_part(&self, h: &Subspace) -> Subspace {
        h.clone()
    }

    fn extra_generators(&self, _h: &Subspace) -> Vec<Vec<Rational>> {
        Vec::new()
    }

    fn from_unipotent(&self, s: Subspace) -> Subspace {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, unit_vec};

    #[test]
    fn heisenberg_commutator_and_quotient() {
        let m = MalcevModel::new(LieAlgebra::heisenberg());
        let g = m.whole();
        assert_eq!(m.dim(&g), 3);
        assert_eq!(m.commutator_subgroup(&g, &g).unwrap(), m.center());
        match m.quotient(&m.center()).unwrap() {
            AnyModel::Malcev(q) => {
                assert_eq!(q.dim(&q.whole()), 2);
                assert_eq!(q.algebra().class(), 1);
            }
            other => panic!("unexpected quotient {other:?}"),
        }
        let x = Subspace::span(3, [unit_vec(3, 0)]);
        let y = Subspace::span(3, [unit_vec(3, 1)]);
        assert!(m.commutator_subgroup(&x, &y).is_err());
        assert!(m.quotient(&x).is_err());
    }

    #[test]
    fn trivial_is_the_only_finite_subgroup() {
        let m = MalcevModel::new(LieAlgebra::strictly_upper_triangular(4));
        for h in m.catalog_subgroups() {
            assert_eq!(m.is_finite(&h), m.dim(&h) == 0);
        }
        assert_eq!(m.enumerate_if_finite(&m.trivial()), Some(vec![vec![rat(0); 6]]));
    }
}
