//! Group models carrying a dimension on their representable subgroups.
//!
//! Four implementations share the [`GroupModel`] interface: finite groups
//! (everything has dimension 0), Malcev groups of rational nilpotent Lie
//! algebras, linear-by-finite semidirect products `Q^d ⋊ F`, and
//! torus-by-unipotent groups `N ⋊ Q^×`. The three infinite models also
//! implement [`Linearized`], exposing the unipotent Lie algebra that the
//! width solver works in.

mod finite;
mod lbf;
mod malcev;
mod tbu;

use std::fmt::Debug;

use rand::Rng;
use serde_json::Value;

pub use finite::FiniteModel;
pub use lbf::{LbfElement, LbfModel, LbfSubgroup};
pub use malcev::MalcevModel;
pub(crate) use malcev::{subspace_json, vector_json};
pub use tbu::{ComponentConvention, TbuElement, TbuModel, TbuSubgroup, Torus};

use crate::error::Result;
use crate::exact::{Matrix, Rational, Subspace};

/// A group whose representable ("definable") subgroups carry a dimension
/// with `dim(H) = 0` exactly when `H` is finite.
pub trait GroupModel: Send + Sync {
    type Element: Clone + PartialEq + Debug + Send + Sync;
    type Subgroup: Clone + PartialEq + Debug + Send + Sync;

    fn kind(&self) -> &'static str;

    fn identity(&self) -> Self::Element;
    fn mul(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;
    fn inv(&self, a: &Self::Element) -> Self::Element;

    /// `[a,b] = a^{-1} b^{-1} a b`
    fn commutator(&self, a: &Self::Element, b: &Self::Element) -> Self::Element {
        let ab = self.mul(a, b);
        let inv = self.mul(&self.inv(a), &self.inv(b));
        self.mul(&inv, &ab)
    }

    fn element_json(&self, a: &Self::Element) -> Value;
    fn subgroup_json(&self, h: &Self::Subgroup) -> Value;

    fn whole(&self) -> Self::Subgroup;
    fn trivial(&self) -> Self::Subgroup;
    fn contains(&self, h: &Self::Subgroup, g: &Self::Element) -> bool;
    fn is_subgroup_of(&self, a: &Self::Subgroup, b: &Self::Subgroup) -> bool;

    fn dim(&self, h: &Self::Subgroup) -> usize;
    /// Structural finiteness, decided without consulting `dim`.
    fn is_finite(&self, h: &Self::Subgroup) -> bool;
    fn enumerate_if_finite(&self, h: &Self::Subgroup) -> Option<Vec<Self::Element>>;
    /// Index `|H : H°|`.
    fn component_index(&self, h: &Self::Subgroup) -> usize;
    fn connected_component(&self, h: &Self::Subgroup) -> Self::Subgroup;

    fn intersect(&self, a: &Self::Subgroup, b: &Self::Subgroup) -> Self::Subgroup;
    /// Whether every element of `a` conjugates `b` onto itself.
    fn normalizes(&self, a: &Self::Subgroup, b: &Self::Subgroup) -> bool;
    /// `AB`, defined when one factor normalizes the other.
    fn product(&self, a: &Self::Subgroup, b: &Self::Subgroup) -> Result<Self::Subgroup>;
    /// The subgroup generated by the given subgroups.
    fn join(&self, parts: &[Self::Subgroup]) -> Result<Self::Subgroup>;
    /// `[A,B]` for subgroups normalizing each other.
    fn commutator_subgroup(&self, a: &Self::Subgroup, b: &Self::Subgroup) -> Result<Self::Subgroup>;
    /// Whether `[H,K] = 1`.
    fn centralizes(&self, h: &Self::Subgroup, k: &Self::Subgroup) -> bool;
    fn center(&self) -> Self::Subgroup;
    fn normal_closure(&self, h: &Self::Subgroup) -> Result<Self::Subgroup>;

    fn is_normal(&self, h: &Self::Subgroup) -> bool {
        self.normalizes(&self.whole(), h)
    }

    fn is_connected(&self, h: &Self::Subgroup) -> bool {
        self.connected_component(h) == *h
    }

    /// `G / N` for a representable normal `N`.
    fn quotient(&self, n: &Self::Subgroup) -> Result<AnyModel>;

    /// A finite set generating a subgroup whose hull is `h`.
    fn generators(&self, h: &Self::Subgroup) -> Vec<Self::Element>;

    fn random_element<R: Rng>(&self, rng: &mut R, h: &Self::Subgroup) -> Self::Element;
    fn random_subgroup<R: Rng>(&self, rng: &mut R) -> Self::Subgroup;

    /// A deterministic list of subgroups used to enumerate pairs.
    fn catalog_subgroups(&self) -> Vec<Self::Subgroup>;
}

/// The unipotent Lie algebra `n` of an infinite model: `exp` identifies `n`
/// with a normal subgroup, and the whole group acts on `n` by conjugation.
pub trait Linearized: GroupModel {
    fn lie_dim(&self) -> usize;
    fn exp(&self, v: &[Rational]) -> Self::Element;
    /// Inverse of `exp`; `None` outside the unipotent subgroup.
    fn log(&self, g: &Self::Element) -> Option<Vec<Rational>>;
    /// `Ad_g : v -> log(g exp(v) g^{-1})`.
    fn adjoint(&self, g: &Self::Element) -> Matrix;
    /// `ad_v = [v, -]` on `n`.
    fn lie_ad(&self, v: &[Rational]) -> Matrix;
    /// Lie algebra of `H ∩ exp(n)`.
    fn unipotent_part(&self, h: &Self::Subgroup) -> Subspace;
    /// Generators of `H` beyond `exp` of a basis of its unipotent part.
    fn extra_generators(&self, h: &Self::Subgroup) -> Vec<Self::Element>;
    /// The connected subgroup `exp(s)`.
    fn from_unipotent(&self, s: Subspace) -> Self::Subgroup;

    /// Splits `g in [A,B]` as `c * r` with `c` an explicit product of
    /// commutators of `A x B` and `r` in `[A,B]°`. Returns the factors of `c`.
    fn finite_correction(
        &self,
        _a: &Self::Subgroup,
        _b: &Self::Subgroup,
        g: &Self::Element,
    ) -> Result<(Vec<Factor<Self::Element>>, Self::Element)> {
        Ok((Vec::new(), g.clone()))
    }
}

/// Where a certificate factor comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactorSource {
    /// `[a, b]` with `a in A°`.
    FromAConnected,
    /// `[a, b]` with `b in B°`.
    FromBConnected,
    /// Commutators accounting for `[A,B] / [A,B]°`.
    FiniteCorrection,
}

/// One factor `[a, b]^sign` of a width certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct Factor<E> {
    pub a: E,
    pub b: E,
    pub sign: i8,
    pub source: FactorSource,
}

impl<E> Factor<E> {
    pub fn value<M: GroupModel<Element = E>>(&self, model: &M) -> E {
        let c = model.commutator(&self.a, &self.b);
        if self.sign < 0 {
            model.inv(&c)
        } else {
            c
        }
    }
}

/// Multiplies the factors left to right.
pub fn replay<M: GroupModel>(model: &M, factors: &[Factor<M::Element>]) -> M::Element {
    factors.iter().fold(model.identity(), |acc, f| model.mul(&acc, &f.value(model)))
}

/// A model of any of the four kinds.
#[derive(Clone, Debug)]
pub enum AnyModel {
    Finite(FiniteModel),
    Malcev(MalcevModel),
    Lbf(LbfModel),
    Tbu(TbuModel),
}

impl AnyModel {
    pub fn kind(&self) -> &'static str {
        match self {
            AnyModel::Finite(m) => m.kind(),
            AnyModel::Malcev(m) => m.kind(),
            AnyModel::Lbf(m) => m.kind(),
            AnyModel::Tbu(m) => m.kind(),
        }
    }

    /// Dimension of the whole group.
    pub fn dim(&self) -> usize {
        match self {
            AnyModel::Finite(m) => m.dim(&m.whole()),
            AnyModel::Malcev(m) => m.dim(&m.whole()),
            AnyModel::Lbf(m) => m.dim(&m.whole()),
            AnyModel::Tbu(m) => m.dim(&m.whole()),
        }
    }
}

/// A small generating set of a finite subgroup, picked greedily in index order.
pub(crate) fn finite_generators(g: &crate::finite::FiniteGroup, h: &crate::finite::FiniteSubgroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = g.trivial();
    for &x in h.members() {
        if !span.contains(x) {
            gens.push(x);
            span = g.closure(gens.iter().copied());
        }
    }
    gens
}
