use rand::Rng;
use serde_json::{json, Value};

use super::{finite_generators, AnyModel, GroupModel};
use crate::error::{Error, Result};
use crate::finite::{FiniteGroup, FiniteSubgroup};

/// A finite group viewed as a model in which every subgroup has dimension 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModel {
    group: FiniteGroup,
}

impl FiniteModel {
    pub fn new(group: FiniteGroup) -> Self {
        FiniteModel { group }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }
}

impl GroupModel for FiniteModel {
    type Element = usize;
    type Subgroup = FiniteSubgroup;

    fn kind(&self) -> &'static str {
        "finite"
    }

    fn identity(&self) -> usize {
        self.group.identity()
    }

    fn mul(&self, a: &usize, b: &usize) -> usize {
        self.group.mul(*a, *b)
    }

    fn inv(&self, a: &usize) -> usize {
        self.group.inv(*a)
    }

    fn commutator(&self, a: &usize, b: &usize) -> usize {
        self.group.commutator(*a, *b)
    }

    fn element_json(&self, a: &usize) -> Value {
        json!(a)
    }

    fn subgroup_json(&self, h: &FiniteSubgroup) -> Value {
        json!({ "order": h.order(), "members": h.members() })
    }

    fn whole(&self) -> FiniteSubgroup {
        self.group.whole()
    }

    fn trivial(&self) -> FiniteSubgroup {
        self.group.trivial()
    }

    fn contains(&self, h: &FiniteSubgroup, g: &usize) -> bool {
        h.contains(*g)
    }

    fn is_subgroup_of(&self, a: &FiniteSubgroup, b: &FiniteSubgroup) -> bool {
        a.is_subset_of(b)
    }

    fn dim(&self, _h: &FiniteSubgroup) -> usize {
        0
    }

    fn is_finite(&self, _h: &FiniteSubgroup) -> bool {
        true
    }

    fn enumerate_if_finite(&self, h: &FiniteSubgroup) -> Option<Vec<usize>> {
        Some(h.members().to_vec())
    }

    fn component_index(&self, h: &FiniteSubgroup) -> usize {
        h.order()
    }

    fn connected_component(&self, _h: &FiniteSubgroup) -> FiniteSubgroup {
        self.group.trivial()
    }

    fn intersect(&self, a: &FiniteSubgroup, b: &FiniteSubgroup) -> FiniteSubgroup {
        self.group.intersect(a, b)
    }

    fn normalizes(&self, a: &FiniteSubgroup, b: &FiniteSubgroup) -> bool {
        self.group.normalizes(a, b)
    }

    fn product(&self, a: &FiniteSubgroup, b: &FiniteSubgroup) -> Result<FiniteSubgroup> {
        if !self.group.normalizes(a, b) && !self.group.normalizes(b, a) {
            return Err(Error::NotNormalizing("neither factor normalizes the other".into()));
        }
        self.group.subgroup(self.group.product_set(a.members(), b.members()))
    }

    fn join(&self, parts: &[FiniteSubgroup]) -> Result<FiniteSubgroup> {
        Ok(self.group.closure(parts.iter().flat_map(|p| p.members().iter().copied())))
    }

    fn commutator_subgroup(&self, a: &FiniteSubgroup, b: &FiniteSubgroup) -> Result<FiniteSubgroup> {
        if !self.group.normalizes(a, b) || !self.group.normalizes(b, a) {
            return Err(Error::NotNormalizing("A and B must normalize each other".into()));
        }
        Ok(self.group.commutator_subgroup(a, b))
    }

    fn centralizes(&self, h: &FiniteSubgroup, k: &FiniteSubgroup) -> bool {
        h.members().iter().all(|&x| k.members().iter().all(|&y| self.group.mul(x, y) == self.group.mul(y, x)))
    }

    fn center(&self) -> FiniteSubgroup {
        self.group.center()
    }

    fn normal_closure(&self, h: &FiniteSubgroup) -> Result<FiniteSubgroup> {
        Ok(self.group.normal_closure(h.members()))
    }

    fn quotient(&self, n: &FiniteSubgroup) -> Result<AnyModel> {
        let (q, _) = self.group.quotient(n)?;
        Ok(AnyModel::Finite(FiniteModel::new(q)))
    }

    fn generators(&self, h: &FiniteSubgroup) -> Vec<usize> {
        finite_generators(&self.group, h)
    }

    fn random_element<R: Rng>(&self, rng: &mut R, h: &FiniteSubgroup) -> usize {
        h.members()[rng.gen_range(0..h.order())]
    }

    fn random_subgroup<R: Rng>(&self, rng: &mut R) -> FiniteSubgroup {
        let count = rng.gen_range(0..=2);
        self.group.closure((0..count).map(|_| self.group.random_element(rng)))
    }

    fn catalog_subgroups(&self) -> Vec<FiniteSubgroup> {
        self.group.all_subgroups()
    }
}
