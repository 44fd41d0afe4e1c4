//! Width certificates: explicit products of commutators, computed stage by
//! stage along a descending series of `[A,B]°` on which `A` and `B` act.
//!
//! At each stage `T > next`, the quotient `T / next` is abelian and every map
//! `p -> [p, x] next` from the previous stage is a homomorphism, so a target
//! is matched modulo `next` by a linear solve over the images of a few such
//! maps. The residual lies in `next` and the recursion continues there.

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{axpy, invariant_closure, is_zero_vec, solve_combination, sub_vec, zero_vec, Matrix, QuotientMap, Rational, Subspace};
use crate::models::{replay, Factor, FactorSource, GroupModel, Linearized};

/// A product of commutators equal to `target`.
#[derive(Clone, Debug)]
pub struct WidthCertificate<E> {
    pub target: E,
    pub factors: Vec<Factor<E>>,
}

impl<E: Clone + PartialEq> WidthCertificate<E> {
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Factors accounting for `[A,B]/[A,B]°`.
    pub fn correction_len(&self) -> usize {
        self.factors.iter().filter(|f| f.source == FactorSource::FiniteCorrection).count()
    }

    pub fn connected_len(&self) -> usize {
        self.len() - self.correction_len()
    }

    /// Multiplying the factors out reproduces the target exactly.
    pub fn replays<M: GroupModel<Element = E>>(&self, model: &M) -> bool {
        replay(model, &self.factors) == self.target
    }

    /// Replay plus membership of every `a` in `A` and `b` in `B`, with the
    /// tagged entry in the connected component.
    pub fn is_valid<M: GroupModel<Element = E>>(&self, model: &M, a: &M::Subgroup, b: &M::Subgroup) -> bool {
        let (ac, bc) = (model.connected_component(a), model.connected_component(b));
        self.replays(model)
            && self.factors.iter().all(|f| {
                let sides = model.contains(a, &f.a) && model.contains(b, &f.b);
                sides
                    && match f.source {
                        FactorSource::FromAConnected => model.contains(&ac, &f.a),
                        FactorSource::FromBConnected => model.contains(&bc, &f.b),
                        FactorSource::FiniteCorrection => true,
                    }
            })
    }

    pub fn to_json<M: GroupModel<Element = E>>(&self, model: &M) -> Value {
        let factors: Vec<Value> = self
            .factors
            .iter()
            .map(|f| json!({ "a": model.element_json(&f.a), "b": model.element_json(&f.b), "sign": f.sign, "source": f.source }))
            .collect();
        json!({ "target": model.element_json(&self.target), "length": self.len(), "factors": factors })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Side {
    A,
    B,
}

/// The maps `e -> [exp(e), x]` for `e` in the span of `basis`.
#[derive(Clone, Debug)]
struct Family<E> {
    basis: Vec<Vec<Rational>>,
    x: E,
    side: Side,
}

impl<E: Clone> Family<E> {
    /// `[exp(e), x]` as a factor of `[A,B]`: with `x in B` it is `[a, b]`,
    /// with `x in A` it is `[x, exp(e)]^{-1}`.
    fn factor<M: Linearized<Element = E>>(&self, model: &M, e: &[Rational], source_override: Option<FactorSource>) -> Factor<E> {
        let p = model.exp(e);
        match self.side {
            Side::B => Factor { a: p, b: self.x.clone(), sign: 1, source: source_override.unwrap_or(FactorSource::FromAConnected) },
            Side::A => Factor { a: self.x.clone(), b: p, sign: -1, source: source_override.unwrap_or(FactorSource::FromBConnected) },
        }
    }

    /// Quotient coordinates of `[exp(e_j), x]` for each basis vector, or
    /// `None` if some commutator falls outside the stage.
    fn images<M: Linearized<Element = E>>(&self, model: &M, q: &QuotientMap) -> Option<Vec<Vec<Rational>>> {
        self.basis
            .iter()
            .map(|e| {
                let c = model.commutator(&model.exp(e), &self.x);
                model.log(&c).and_then(|v| q.project(&v))
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
struct Chosen<E> {
    family: Family<E>,
    images: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug)]
struct Stage<E> {
    space: Subspace,
    next: Subspace,
    quotient: QuotientMap,
    derived: bool,
    chosen: Vec<Chosen<E>>,
}

/// Picks families by largest gain in the span of images, ties broken by
/// order, until the images span `Q^q` or nothing more is gained.
fn greedy_images<E: Clone>(candidates: Vec<(Family<E>, Vec<Vec<Rational>>)>, q: usize) -> Vec<Chosen<E>> {
    let mut span = Subspace::zero(q);
    let mut remaining = candidates;
    let mut chosen = Vec::new();
    while span.dim() < q {
        let mut best: Option<(usize, Subspace)> = None;
        for (i, (_, images)) in remaining.iter().enumerate() {
            let s = span.sum(&Subspace::span(q, images.iter().cloned())).expect("same ambient");
            if s.dim() > best.as_ref().map_or(span.dim(), |(_, b)| b.dim()) {
                best = Some((i, s));
            }
        }
        let Some((i, s)) = best else { break };
        let (family, images) = remaining.remove(i);
        chosen.push(Chosen { family, images });
        span = s;
    }
    chosen
}

/// Solves `sum_j c_j images_j = y` over the chosen families and returns one
/// factor per family with a nonzero combination.
fn solve_stage<M: Linearized>(
    model: &M,
    chosen: &[Chosen<M::Element>],
    y: &[Rational],
    source: Option<FactorSource>,
) -> Option<Vec<Factor<M::Element>>> {
    let columns: Vec<Vec<Rational>> = chosen.iter().flat_map(|c| c.images.iter().cloned()).collect();
    let coeffs = solve_combination(&columns, y)?;
    let mut factors = Vec::new();
    let mut offset = 0;
    let n = model.lie_dim();
    for c in chosen {
        let mut e = zero_vec(n);
        for (k, b) in c.family.basis.iter().enumerate() {
            axpy(&mut e, &coeffs[offset + k], b);
        }
        offset += c.family.basis.len();
        if !is_zero_vec(&e) {
            factors.push(c.family.factor(model, &e, source));
        }
    }
    Some(factors)
}

/// Precomputed stages for certifying elements of `[A,B]°`.
#[derive(Clone, Debug)]
pub struct StagedPlan<M: Linearized> {
    top: Subspace,
    stages: Vec<Stage<M::Element>>,
}

impl<M: Linearized> StagedPlan<M> {
    /// Requires `A` and `B` to normalize each other.
    pub fn new(model: &M, a: &M::Subgroup, b: &M::Subgroup) -> Result<Self> {
        let n = model.lie_dim();
        let ab = model.commutator_subgroup(a, b)?;
        let top = model.unipotent_part(&model.connected_component(&ab));
        let gens: Vec<(M::Element, Side)> = model
            .generators(a)
            .into_iter()
            .map(|x| (x, Side::A))
            .chain(model.generators(b).into_iter().map(|x| (x, Side::B)))
            .collect();
        let mut ops: Vec<Matrix> = gens.iter().map(|(x, _)| model.adjoint(x)).collect();
        let lie = model.unipotent_part(a).sum(&model.unipotent_part(b))?;
        ops.extend(lie.basis_vectors().iter().map(|e| model.lie_ad(e)));
        let id = Matrix::identity(n);

        let a_conn = model.unipotent_part(&model.connected_component(a)).basis_vectors();
        let b_conn = model.unipotent_part(&model.connected_component(b)).basis_vectors();
        let mut parents: Vec<Family<M::Element>> = Vec::new();
        for (x, side) in &gens {
            let basis = match side {
                Side::B => a_conn.clone(),
                Side::A => b_conn.clone(),
            };
            parents.push(Family { basis, x: x.clone(), side: *side });
        }

        let mut stages = Vec::new();
        let mut space = top.clone();
        while !space.is_zero() {
            let basis = space.basis_vectors();
            let seed: Vec<Vec<Rational>> =
                ops[..gens.len()].iter().flat_map(|ad| basis.iter().map(|v| sub_vec(&ad.apply(v), &id.apply(v)))).collect();
            let mut next = invariant_closure(n, seed, &ops);
            let derived = next.dim() >= space.dim();
            if derived {
                let mut brackets = Vec::new();
                for (i, u) in basis.iter().enumerate() {
                    for v in &basis[i + 1..] {
                        brackets.push(model.lie_ad(u).apply(v));
                    }
                }
                next = invariant_closure(n, brackets, &ops);
                if next.dim() >= space.dim() {
                    return Err(Error::NonTerminating);
                }
            }
            if !space.contains_space(&next) {
                return Err(Error::Precondition("the commutator series left [A,B]°".into()));
            }
            let quotient = space.quotient_by(&next);
            let q = quotient.dim();
            let own: Vec<Family<M::Element>> =
                gens.iter().map(|(x, side)| Family { basis: basis.clone(), x: x.clone(), side: *side }).collect();
            let candidates = parents
                .iter()
                .chain(&own)
                .filter_map(|f| f.images(model, &quotient).map(|im| (f.clone(), im)))
                .collect();
            let chosen = greedy_images(candidates, q);
            let spanned: usize = Subspace::span(q, chosen.iter().flat_map(|c| c.images.iter().cloned())).dim();
            if spanned < q {
                return Err(Error::Precondition(format!(
                    "commutator images span {spanned} of {q} dimensions at a stage"
                )));
            }
            parents = own;
            if derived {
                parents.extend(basis.iter().map(|t| Family { basis: basis.clone(), x: model.exp(t), side: Side::B }));
            }
            stages.push(Stage { space: space.clone(), next: next.clone(), quotient, derived, chosen });
            space = next;
        }
        Ok(StagedPlan { top, stages })
    }

    /// Lie algebra of `[A,B]°`.
    pub fn top(&self) -> &Subspace {
        &self.top
    }

    /// Dimensions of the stage quotients; they sum to `dim [A,B]°`.
    pub fn stage_dims(&self) -> Vec<usize> {
        self.stages.iter().map(|s| s.quotient.dim()).collect()
    }

    pub fn derived_stages(&self) -> usize {
        self.stages.iter().filter(|s| s.derived).count()
    }

    /// Certificate for an element of `[A,B]°`, of length at most its dimension.
    pub fn certify(&self, model: &M, target: &M::Element) -> Result<WidthCertificate<M::Element>> {
        match model.log(target) {
            Some(v) if self.top.contains(&v) => {}
            _ => return Err(Error::NotInCommutator),
        }
        let mut factors = Vec::new();
        let mut residual = target.clone();
        for stage in &self.stages {
            let v = model.log(&residual).filter(|v| stage.space.contains(v));
            let v = v.ok_or_else(|| Error::Precondition("residual left the current stage".into()))?;
            let y = stage.quotient.project(&v).expect("inside the stage");
            let step = solve_stage(model, &stage.chosen, &y, None)
                .ok_or_else(|| Error::Precondition("stage quotient not spanned".into()))?;
            let alpha = replay(model, &step);
            residual = model.mul(&model.inv(&alpha), &residual);
            factors.extend(step);
            if !model.log(&residual).is_some_and(|r| stage.next.contains(&r)) {
                return Err(Error::Precondition("stage solution misses the next term".into()));
            }
        }
        if residual != model.identity() {
            return Err(Error::Precondition("nonzero residual after the last stage".into()));
        }
        Ok(WidthCertificate { target: target.clone(), factors })
    }

    /// Certificate for any element of `[A,B]`: finite-correction factors
    /// first, then a certificate for the connected remainder.
    pub fn certify_any(&self, model: &M, a: &M::Subgroup, b: &M::Subgroup, target: &M::Element) -> Result<WidthCertificate<M::Element>> {
        let (mut factors, rest) = model.finite_correction(a, b, target)?;
        factors.extend(self.certify(model, &rest)?.factors);
        Ok(WidthCertificate { target: target.clone(), factors })
    }
}

/// `[A,B]` with a certificate for `target`.
pub fn staged_width<M: Linearized>(
    model: &M,
    a: &M::Subgroup,
    b: &M::Subgroup,
    target: &M::Element,
) -> Result<WidthCertificate<M::Element>> {
    let ab = model.commutator_subgroup(a, b)?;
    if !model.contains(&ab, target) {
        return Err(Error::NotInCommutator);
    }
    StagedPlan::new(model, a, b)?.certify_any(model, a, b, target)
}

/// `[H,X]` for a connected `H` whose commutators with `X` centralize `H`
/// and commute with each other; each element is a product of at most
/// `dim [H,X]` commutators `[h, x]`.
#[derive(Clone, Debug)]
pub struct CentralCommutator<E> {
    pub space: Subspace,
    chosen: Vec<Chosen<E>>,
}

impl<E: Clone + PartialEq> CentralCommutator<E> {
    pub fn new<M: Linearized<Element = E>>(model: &M, h: &M::Subgroup, xs: &[E]) -> Result<Self> {
        let n = model.lie_dim();
        if !model.extra_generators(h).is_empty() {
            return Err(Error::Precondition("H is not the exponential of its Lie algebra".into()));
        }
        let basis = model.unipotent_part(h).basis_vectors();
        let mut values = Vec::new();
        for x in xs {
            for e in &basis {
                values.push(model.commutator(&model.exp(e), x));
            }
        }
        let commute = |p: &E, q: &E| model.mul(p, q) == model.mul(q, p);
        for c in &values {
            let central = basis.iter().all(|e| commute(c, &model.exp(e)));
            let abelian = values.iter().all(|d| commute(c, d));
            if !central || !abelian {
                return Err(Error::Precondition("commutators with X neither centralize H nor commute".into()));
            }
        }
        let full = Subspace::full(n).quotient_by(&Subspace::zero(n));
        let mut candidates = Vec::new();
        for x in xs {
            let family = Family { basis: basis.clone(), x: x.clone(), side: Side::B };
            let images = family
                .images(model, &full)
                .ok_or_else(|| Error::Precondition("a commutator [h, x] leaves the unipotent part".into()))?;
            candidates.push((family, images));
        }
        let space = Subspace::span(n, candidates.iter().flat_map(|(_, im)| im.iter().cloned()));
        let chosen = greedy_images(candidates, n);
        Ok(CentralCommutator { space, chosen })
    }

    /// Number of maps `h -> [h, x]` whose images were kept.
    pub fn chosen_count(&self) -> usize {
        self.chosen.len()
    }

    pub fn certify<M: Linearized<Element = E>>(&self, model: &M, target: &E) -> Result<WidthCertificate<E>> {
        let v = model.log(target).filter(|v| self.space.contains(v)).ok_or(Error::NotInCommutator)?;
        let factors = solve_stage(model, &self.chosen, &v, Some(FactorSource::FromAConnected)).ok_or(Error::NotInCommutator)?;
        Ok(WidthCertificate { target: target.clone(), factors })
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::exact::{rat, unit_vec};
    use crate::models::MalcevModel;
    use crate::nilpotent::LieAlgebra;

    #[test]
    fn heisenberg_center_is_one_commutator() {
        let m = MalcevModel::new(LieAlgebra::heisenberg());
        let g = m.whole();
        let target = vec![rat(0), rat(0), rat(5)];
        let cert = staged_width(&m, &g, &g, &target).unwrap();
        assert_eq!(cert.len(), 1);
        assert!(cert.is_valid(&m, &g, &g));
        let empty = staged_width(&m, &g, &g, &m.identity()).unwrap();
        assert!(empty.is_empty());
        assert!(matches!(staged_width(&m, &g, &g, &unit_vec(3, 0)), Err(Error::NotInCommutator)));
    }

    #[test]
    fn ut4_random_targets() {
        let m = MalcevModel::new(LieAlgebra::strictly_upper_triangular(4));
        let g = m.whole();
        let plan = StagedPlan::new(&m, &g, &g).unwrap();
        assert_eq!(plan.stage_dims(), vec![2, 1]);
        let derived = m.commutator_subgroup(&g, &g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let t = m.random_element(&mut rng, &derived);
            let cert = plan.certify(&m, &t).unwrap();
            assert!(cert.len() <= 3);
            assert!(cert.is_valid(&m, &g, &g));
        }
    }

    #[test]
    fn central_commutator_on_heisenberg() {
        let m = MalcevModel::new(LieAlgebra::heisenberg());
        let cc = CentralCommutator::new(&m, &m.whole(), &[unit_vec(3, 1)]).unwrap();
        assert_eq!(cc.space, m.center());
        let cert = cc.certify(&m, &vec![rat(0), rat(0), rat(-3)]).unwrap();
        assert_eq!(cert.len(), 1);
        assert!(cert.replays(&m));
        let none = CentralCommutator::new(&m, &m.whole(), &[unit_vec(3, 2)]).unwrap();
        assert!(none.space.is_zero());
    }

    #[test]
    fn solvable_models_all_pairs() {
        use crate::models::{LbfModel, TbuModel};
        let tbu = [
            TbuModel::new(LieAlgebra::abelian(1), vec![1]).unwrap(),
            TbuModel::new(LieAlgebra::heisenberg(), vec![1, 1, 2]).unwrap(),
            TbuModel::new(LieAlgebra::heisenberg(), vec![1, -1, 0]).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut pairs = 0;
        for m in &tbu {
            let cat = m.catalog_subgroups();
            for a in &cat {
                for b in &cat {
                    if !(m.normalizes(a, b) && m.normalizes(b, a)) {
                        continue;
                    }
                    pairs += 1;
                    let plan = StagedPlan::new(m, a, b).unwrap_or_else(|e| panic!("{e} {a:?} {b:?}"));
                    let ab = m.commutator_subgroup(a, b).unwrap();
                    for _ in 0..5 {
                        let t = m.random_element(&mut rng, &ab);
                        let cert = plan.certify_any(m, a, b, &t).unwrap();
                        assert!(cert.is_valid(m, a, b));
                        assert!(cert.connected_len() <= m.dim(&ab));
                    }
                }
            }
        }
        let perms = vec![vec![2, 3, 4, 1], vec![4, 3, 2, 1]];
        let mats = vec![
            crate::exact::Matrix::from_i64(&[&[0, -1], &[1, 0]]),
            crate::exact::Matrix::from_i64(&[&[1, 0], &[0, -1]]),
        ];
        let m = LbfModel::from_permutations(2, &perms, mats).unwrap();
        let cat = m.catalog_subgroups();
        for a in &cat {
            for b in &cat {
                if !(m.normalizes(a, b) && m.normalizes(b, a)) {
                    continue;
                }
                pairs += 1;
                let plan = StagedPlan::new(&m, a, b).unwrap_or_else(|e| panic!("{e} {a:?} {b:?}"));
                let ab = m.commutator_subgroup(a, b).unwrap();
                for _ in 0..5 {
                    let t = m.random_element(&mut rng, &ab);
                    let cert = plan.certify_any(&m, a, b, &t).unwrap();
                    assert!(cert.is_valid(&m, a, b));
                    assert!(cert.connected_len() <= m.dim(&ab));
                }
            }
        }
        assert!(pairs >= 30, "{pairs}");
    }
}
