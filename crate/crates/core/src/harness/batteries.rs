//! Check batteries: each runs one structural fact over one corpus entry and
//! returns a [`LemmaReport`] with a reproducible witness per failure.

use std::time::Instant;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::{greedy_generate, CentralCommutator, LemmaReport, StagedPlan};
use crate::abelian::{prime_divisors, AbelianGroup, Block};
use crate::describe::{Entry, Group};
use crate::error::{Error, Result};
use crate::exact::{axpy, frac, invariant_closure, zero_vec, Matrix, Subspace};
use crate::finite::checks;
use crate::models::{ComponentConvention, FiniteModel, GroupModel, LbfModel, Linearized, MalcevModel};
use crate::nilpotent::random_rational;

/// A battery id with the model kinds it runs on.
#[derive(Clone, Copy, Debug)]
pub struct Lemma {
    pub id: &'static str,
    pub kinds: &'static [&'static str],
    pub summary: &'static str,
}

const INFINITE: &[&str] = &["nilpotent", "lbf", "tbu"];
const MODELS: &[&str] = &["finite", "nilpotent", "lbf", "tbu"];

pub const LEMMAS: &[Lemma] = &[
    Lemma { id: "main-theorem", kinds: MODELS, summary: "[A,B]° = [A°,B][A,B°], [A,B]/[A,B]° finite, width certificates" },
    Lemma { id: "inversion-example", kinds: &["lbf"], summary: "[G°,G°] = 1 and [G°,G] = sum of (R(f)-1)Q^d" },
    Lemma { id: "dimension-formula", kinds: MODELS, summary: "dim(AB) = dim A + dim B - dim(A∩B)" },
    Lemma { id: "dimension-axioms", kinds: MODELS, summary: "finite iff dim 0, rank-nullity on quotients, descending chains" },
    Lemma { id: "generation", kinds: MODELS, summary: "greedy generation takes at most dim parts" },
    Lemma { id: "connected-product", kinds: INFINITE, summary: "products of connected subgroups are connected" },
    Lemma { id: "central-commutator", kinds: INFINITE, summary: "[H,X] from ad-images with certificates of length <= dim" },
    Lemma { id: "hx", kinds: INFINITE, summary: "[H,X] connected in H for H = B°, X = B" },
    Lemma { id: "definable-series", kinds: MODELS, summary: "lower central and derived series are representable and connected" },
    Lemma { id: "solvable-structure", kinds: INFINITE, summary: "G' nilpotent, G' <= F°(G), F°(G) nontrivial, a proper H above G'" },
    Lemma { id: "center-component", kinds: INFINITE, summary: "H <= Z(G) iff H° <= Z(G) for H normal in connected G" },
    Lemma { id: "center-split", kinds: INFINITE, summary: "H = (Z(G)∩H)H° for H normal nilpotent with H° divisible" },
    Lemma { id: "bch", kinds: &["nilpotent"], summary: "BCH associativity, inverses and roots" },
    Lemma { id: "hull", kinds: &["nilpotent"], summary: "[H(X),H(Y)] <= H([X,Y]) and invariance of hulls" },
    Lemma { id: "baer", kinds: &["finite"], summary: "[A,B] <= B finite and normalized by A and B" },
    Lemma { id: "width-additivity", kinds: &["finite"], summary: "width([A,B]) <= k + s through a normal N" },
    Lemma { id: "ad-homomorphism", kinds: &["finite"], summary: "h -> [h,x] is a homomorphism with kernel C_H(x)" },
    Lemma { id: "central-series", kinds: &["finite"], summary: "G^i <= Z_{n-i} and class characterization" },
    Lemma { id: "fitting", kinds: &["finite"], summary: "F(G) normal nilpotent" },
    Lemma { id: "radical", kinds: &["finite"], summary: "R(G) normal solvable, containing F(G)" },
    Lemma { id: "nilpotent-analogs", kinds: &["finite"], summary: "normal subgroups meet the center, normalizers grow" },
    Lemma { id: "divisible-decomposition", kinds: &["abelian"], summary: "A = D ⊕ B with D divisible and B bounded" },
    Lemma { id: "primary-decomposition", kinds: &["abelian"], summary: "torsion is the direct sum of its p-parts" },
    Lemma { id: "torsion-lift", kinds: &["abelian"], summary: "n x in N lifts to torsion with primes of n" },
];

pub fn lemma(id: &str) -> Option<&'static Lemma> {
    LEMMAS.iter().find(|l| l.id == id)
}

#[derive(Clone, Copy, Debug)]
pub struct CheckConfig {
    pub seed: u64,
    pub samples: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { seed: 42, samples: 200 }
    }
}

/// FNV-1a, so that each (lemma, entry) pair draws from its own stream
/// independently of which other checks run.
fn stream_seed(seed: u64, lemma: &str, name: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in lemma.bytes().chain([0]).chain(name.bytes()) {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h ^ seed
}

/// Runs the selected batteries on every applicable entry, in lemma order
/// then entry order.
pub fn run_checks(entries: &[Entry], lemmas: &[&str], cfg: &CheckConfig) -> Result<Vec<LemmaReport>> {
    let mut jobs = Vec::new();
    for id in lemmas {
        let l = lemma(id).ok_or_else(|| Error::Parse(format!("unknown lemma id `{id}`")))?;
        for e in entries.iter().filter(|e| l.kinds.contains(&e.group.kind())) {
            jobs.push((l.id, e));
        }
    }
    Ok(jobs.par_iter().filter_map(|(id, e)| run_one(id, e, cfg)).collect())
}

/// One battery on one entry; `None` when the battery does not apply.
pub fn run_one(id: &str, entry: &Entry, cfg: &CheckConfig) -> Option<LemmaReport> {
    let start = Instant::now();
    let rng = &mut ChaCha8Rng::seed_from_u64(stream_seed(cfg.seed, id, &entry.name));
    let name = format!("{}/{}", entry.group.kind(), entry.name);
    let samples = cfg.samples.max(1);
    let mut report = LemmaReport::new(id, &name);
    macro_rules! models {
        ($m:ident => $body:expr) => {
            match &entry.group {
                Group::Finite($m) => $body,
                Group::Malcev($m) => $body,
                Group::Lbf($m) => $body,
                Group::Tbu($m) => $body,
                Group::Abelian(_) => return None,
            }
        };
    }
    macro_rules! linear {
        ($m:ident => $body:expr) => {
            match &entry.group {
                Group::Malcev($m) => $body,
                Group::Lbf($m) => $body,
                Group::Tbu($m) => $body,
                _ => return None,
            }
        };
    }
    let outcome: Result<Value> = match id {
        "main-theorem" => match &entry.group {
            Group::Finite(m) => finite_main_theorem(m, &mut report),
            _ => linear!(m => main_theorem(m, &mut report, rng, samples)),
        },
        "inversion-example" => match &entry.group {
            Group::Lbf(m) => inversion_example(m, &mut report),
            _ => return None,
        },
        "dimension-formula" => models!(m => dimension_formula(m, &mut report, rng, samples)),
        "dimension-axioms" => models!(m => dimension_axioms(m, &mut report, rng, samples)),
        "generation" => models!(m => generation(m, &mut report, rng, samples)),
        "connected-product" => linear!(m => connected_product(m, &mut report)),
        "central-commutator" => linear!(m => central_commutator(m, &mut report, rng, samples)),
        "hx" => linear!(m => hx(m, &mut report, rng)),
        "definable-series" => models!(m => definable_series(m, &mut report)),
        "solvable-structure" => match &entry.group {
            Group::Malcev(m) => solvable_structure(m, m.whole(), &mut report),
            Group::Lbf(m) => solvable_structure(m, m.connected_component(&m.whole()), &mut report),
            Group::Tbu(m) => solvable_structure(m, m.fitting_connected(), &mut report),
            _ => return None,
        },
        "center-component" | "center-split" => {
            let split = id == "center-split";
            match &entry.group {
                Group::Malcev(m) => center_checks(m, m.whole(), m.center(), split, &mut report),
                Group::Tbu(m) => {
                    let m = m.clone().with_convention(ComponentConvention::FullTorusConnected);
                    center_checks(&m, m.whole(), m.center(), split, &mut report)
                }
                Group::Lbf(m) => {
                    let k = m.connected_component(&m.whole());
                    center_checks(m, k.clone(), k, split, &mut report).map(|s| lbf_disconnected_note(m, s))
                }
                _ => return None,
            }
        }
        "bch" => match &entry.group {
            Group::Malcev(m) => bch(m, &mut report, rng, samples),
            _ => return None,
        },
        "hull" => match &entry.group {
            Group::Malcev(m) => hull(m, &mut report, rng, (samples / 4).max(1)),
            _ => return None,
        },
        "baer" | "width-additivity" | "ad-homomorphism" | "central-series" | "fitting" | "radical" | "nilpotent-analogs" => {
            match &entry.group {
                Group::Finite(m) => finite_battery(id, m, &mut report),
                _ => return None,
            }
        }
        "divisible-decomposition" | "primary-decomposition" | "torsion-lift" => match &entry.group {
            Group::Abelian(a) => abelian_battery(id, a, &mut report, rng, samples),
            _ => return None,
        },
        _ => return None,
    };
    match outcome {
        Ok(stats) => report.stats = stats,
        Err(e) => report.fail(json!({ "error": e.to_string() })),
    }
    report.elapsed = start.elapsed();
    Some(report)
}

fn dedup<T: PartialEq>(items: impl IntoIterator<Item = T>) -> Vec<T> {
    let mut out = Vec::new();
    for x in items {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// Ordered pairs of catalog subgroups that normalize each other.
pub fn normalizing_pairs<M: GroupModel>(m: &M) -> Vec<(M::Subgroup, M::Subgroup)> {
    let cat = m.catalog_subgroups();
    let mut out = Vec::new();
    for a in &cat {
        for b in &cat {
            if m.normalizes(a, b) && m.normalizes(b, a) {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

/// Lower central terms `H, [H,H], [H,[H,H]], ...` up to the first repeat.
pub fn lower_central<M: GroupModel>(m: &M, h: &M::Subgroup) -> Result<Vec<M::Subgroup>> {
    series(m, h, |prev| m.commutator_subgroup(h, prev))
}

pub fn derived<M: GroupModel>(m: &M, h: &M::Subgroup) -> Result<Vec<M::Subgroup>> {
    series(m, h, |prev| m.commutator_subgroup(prev, prev))
}

fn series<M: GroupModel>(
    m: &M,
    h: &M::Subgroup,
    step: impl Fn(&M::Subgroup) -> Result<M::Subgroup>,
) -> Result<Vec<M::Subgroup>> {
    let mut terms = vec![h.clone()];
    // strictly descending chains have length at most dim + log2 |H/H°| + 1
    let bound = m.dim(h) + m.component_index(h).ilog2() as usize + 2;
    for _ in 0..bound {
        let next = step(terms.last().expect("nonempty"))?;
        if Some(&next) == terms.last() {
            return Ok(terms);
        }
        terms.push(next);
    }
    Err(Error::NonTerminating)
}

pub fn is_nilpotent<M: GroupModel>(m: &M, h: &M::Subgroup) -> Result<bool> {
    Ok(lower_central(m, h)?.last() == Some(&m.trivial()))
}

pub fn is_solvable<M: GroupModel>(m: &M, h: &M::Subgroup) -> Result<bool> {
    Ok(derived(m, h)?.last() == Some(&m.trivial()))
}

/// `[A,B]`, `[A°,B][A,B°]` and whether they match as the decomposition says.
pub struct Decomposition<S> {
    pub commutator: S,
    pub from_components: S,
    pub holds: bool,
}

pub fn decomposition<M: GroupModel>(m: &M, a: &M::Subgroup, b: &M::Subgroup) -> Result<Decomposition<M::Subgroup>> {
    let ab = m.commutator_subgroup(a, b)?;
    let left = m.commutator_subgroup(&m.connected_component(a), b)?;
    let right = m.commutator_subgroup(a, &m.connected_component(b))?;
    let c = m.product(&left, &right)?;
    let holds = m.connected_component(&ab) == c
        && m.is_connected(&c)
        && m.is_subgroup_of(&c, &ab)
        && m.dim(&c) == m.dim(&ab);
    Ok(Decomposition { commutator: ab, from_components: c, holds })
}

fn pair_json<M: GroupModel>(m: &M, a: &M::Subgroup, b: &M::Subgroup) -> Value {
    json!({ "a": m.subgroup_json(a), "b": m.subgroup_json(b) })
}

fn main_theorem<M: Linearized, R: Rng>(m: &M, report: &mut LemmaReport, rng: &mut R, samples: usize) -> Result<Value> {
    let whole = m.whole();
    let per_pair = (samples / 50).max(1);
    let (mut pairs, mut certificates, mut max_len, mut max_correction, mut max_dim) = (0, 0, 0, 0, 0);
    for (a, b) in normalizing_pairs(m) {
        pairs += 1;
        let d = match decomposition(m, &a, &b) {
            Ok(d) => d,
            Err(e) => {
                report.fail(json!({ "pair": pair_json(m, &a, &b), "error": e.to_string() }));
                continue;
            }
        };
        report.record(d.holds, || {
            json!({ "pair": pair_json(m, &a, &b), "commutator": m.subgroup_json(&d.commutator),
                    "from_components": m.subgroup_json(&d.from_components) })
        });
        let dim = m.dim(&d.commutator);
        max_dim = max_dim.max(dim);
        let plan = match StagedPlan::new(m, &a, &b) {
            Ok(p) => p,
            Err(e) => {
                report.fail(json!({ "pair": pair_json(m, &a, &b), "error": e.to_string() }));
                continue;
            }
        };
        let count = if a == whole && b == whole { samples } else { per_pair };
        for _ in 0..count {
            let target = m.random_element(rng, &d.commutator);
            certificates += 1;
            match plan.certify_any(m, &a, &b, &target) {
                Ok(cert) => {
                    max_len = max_len.max(cert.connected_len());
                    max_correction = max_correction.max(cert.correction_len());
                    let ok = cert.is_valid(m, &a, &b) && cert.connected_len() <= dim;
                    report.record(ok, || json!({ "pair": pair_json(m, &a, &b), "certificate": cert.to_json(m) }));
                }
                Err(e) => report.fail(json!({ "pair": pair_json(m, &a, &b), "target": m.element_json(&target), "error": e.to_string() })),
            }
        }
    }
    Ok(json!({ "pairs": pairs, "certificates": certificates, "max_connected_length": max_len,
               "max_correction_length": max_correction, "max_commutator_dim": max_dim }))
}

fn finite_main_theorem(m: &FiniteModel, report: &mut LemmaReport) -> Result<Value> {
    let g = m.group();
    let (mut pairs, mut max_width) = (0, 0);
    for (a, b) in normalizing_pairs(m) {
        pairs += 1;
        let d = decomposition(m, &a, &b)?;
        let profile = g.commutator_profile(&a, &b);
        max_width = max_width.max(profile.width);
        let ok = d.holds && d.from_components == m.trivial() && d.commutator == profile.subgroup();
        report.record(ok, || json!({ "pair": pair_json(m, &a, &b), "commutator": m.subgroup_json(&d.commutator) }));
    }
    Ok(json!({ "pairs": pairs, "max_width": max_width }))
}

fn inversion_example(m: &LbfModel, report: &mut LemmaReport) -> Result<Value> {
    let d = m.d();
    let g = m.finite_group();
    let a = m.connected_component(&m.whole());
    let b = m.whole();
    let with_b0 = m.commutator_subgroup(&a, &m.connected_component(&b))?;
    let ab = m.commutator_subgroup(&a, &b)?;
    let mut images = Vec::new();
    for f in 0..g.order() {
        let shift = m.rep(f).sub(&Matrix::identity(d));
        images.extend((0..d).map(|i| shift.column(i)));
    }
    let expected = m.subgroup(Subspace::span(d, images), g.trivial())?;
    report.record(with_b0 == m.trivial(), || json!({ "with_connected_b": m.subgroup_json(&with_b0) }));
    report.record(ab == expected, || json!({ "commutator": m.subgroup_json(&ab), "expected": m.subgroup_json(&expected) }));
    Ok(json!({ "commutator_dim": m.dim(&ab), "commutator_equals_a": ab == a }))
}

fn normal_partner<M: GroupModel>(m: &M, a: &M::Subgroup, b: M::Subgroup) -> Option<M::Subgroup> {
    if m.normalizes(a, &b) || m.normalizes(&b, a) {
        Some(b)
    } else {
        m.normal_closure(&b).ok()
    }
}

fn dimension_formula<M: GroupModel, R: Rng>(m: &M, report: &mut LemmaReport, rng: &mut R, samples: usize) -> Result<Value> {
    let mut attempts = 0;
    while report.instances < samples && attempts < 20 * samples {
        attempts += 1;
        let a = m.random_subgroup(rng);
        let Some(b) = normal_partner(m, &a, m.random_subgroup(rng)) else { continue };
        let ab = m.product(&a, &b)?;
        let i = m.intersect(&a, &b);
        let ok = m.dim(&ab) + m.dim(&i) == m.dim(&a) + m.dim(&b);
        report.record(ok, || {
            json!({ "pair": pair_json(m, &a, &b), "product": m.subgroup_json(&ab), "intersection": m.subgroup_json(&i) })
        });
    }
    Ok(json!({ "pairs": report.instances, "attempts": attempts }))
}

fn dimension_axioms<M: GroupModel, R: Rng>(m: &M, report: &mut LemmaReport, rng: &mut R, samples: usize) -> Result<Value> {
    let mut subgroups = m.catalog_subgroups();
    subgroups.extend((0..samples / 4).map(|_| m.random_subgroup(rng)));
    for h in &subgroups {
        let finite = m.is_finite(h);
        let listed = m.enumerate_if_finite(h);
        let ok = finite == (m.dim(h) == 0)
            && listed.is_some() == finite
            && listed.as_ref().map_or(true, |l| l.len() == m.component_index(h));
        report.record(ok, || json!({ "axiom": "finite-iff-dim-zero", "subgroup": m.subgroup_json(h) }));
    }
    let total = m.dim(&m.whole());
    let mut quotients = 0;
    for n in m.catalog_subgroups().iter().filter(|n| m.is_normal(n)) {
        match m.quotient(n) {
            Ok(q) => {
                quotients += 1;
                let ok = q.dim() + m.dim(n) == total;
                report.record(ok, || json!({ "axiom": "rank-nullity", "kernel": m.subgroup_json(n), "image_dim": q.dim() }));
            }
            Err(Error::Unsupported(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let mut longest = 0;
    for _ in 0..(samples / 10).max(1) {
        let mut h = m.whole();
        let mut length = 0;
        let mut ok = true;
        for _ in 0..64 {
            let next = m.intersect(&h, &m.random_subgroup(rng));
            if next == h {
                continue;
            }
            let key = |s: &M::Subgroup| (m.dim(s), m.component_index(s));
            ok &= key(&next) < key(&h) && m.is_subgroup_of(&next, &h);
            length += 1;
            h = next;
        }
        longest = longest.max(length);
        report.record(ok, || json!({ "axiom": "descending-chain", "last": m.subgroup_json(&h) }));
    }
    Ok(json!({ "subgroups": subgroups.len(), "quotients": quotients, "longest_chain": longest }))
}

fn generation<M: GroupModel, R: Rng>(m: &M, report: &mut LemmaReport, rng: &mut R, samples: usize) -> Result<Value> {
    let cat = m.catalog_subgroups();
    let pool = dedup(cat.iter().filter(|h| m.is_normal(h)).map(|h| m.connected_component(h)));
    let mut instances: Vec<Vec<M::Subgroup>> = Vec::new();
    if pool.len() <= 8 {
        for mask in 1u32..(1 << pool.len()) {
            instances.push((0..pool.len()).filter(|i| mask >> i & 1 == 1).map(|i| pool[i].clone()).collect());
        }
    } else {
        for _ in 0..(samples / 4).max(1) {
            let k = rng.gen_range(1..=4);
            instances.push(sample(rng, pool.len(), k).into_iter().map(|i| pool[i].clone()).collect());
        }
    }
    let connected: Vec<_> = dedup(cat.iter().filter(|h| m.is_connected(h)).cloned());
    for a in &connected {
        for b in &connected {
            if a != b && m.normalizes(a, b) && m.normalizes(b, a) {
                instances.push(vec![a.clone(), b.clone()]);
            }
        }
    }
    let small = m.dim(&m.whole()) <= 6;
    let mut max_k = 0;
    for parts in &instances {
        let gen = greedy_generate(m, parts)?;
        let mut product = m.trivial();
        for &i in &gen.chosen {
            product = m.product(&product, &parts[i])?;
        }
        let closure = m.join(parts)?;
        max_k = max_k.max(gen.chosen.len());
        let ok = gen.chosen.len() <= m.dim(&gen.subgroup) && product == gen.subgroup && (!small || closure == gen.subgroup);
        report.record(ok, || {
            json!({ "parts": parts.iter().map(|p| m.subgroup_json(p)).collect::<Vec<_>>(), "chosen": gen.chosen,
                    "result": m.subgroup_json(&gen.subgroup), "closure": m.subgroup_json(&closure) })
        });
    }
    Ok(json!({ "instances": instances.len(), "max_chosen": max_k, "compared_with_closure": small }))
}

fn connected_product<M: GroupModel>(m: &M, report: &mut LemmaReport) -> Result<Value> {
    let connected = dedup(m.catalog_subgroups().into_iter().map(|h| m.connected_component(&h)));
    for a in &connected {
        for b in &connected {
            if !m.normalizes(a, b) {
                continue;
            }
            let p = m.product(a, b)?;
            let ok = m.is_connected(&p) && m.is_subgroup_of(a, &p) && m.is_subgroup_of(b, &p);
            report.record(ok, || json!({ "pair": pair_json(m, a, b), "product": m.subgroup_json(&p) }));
        }
    }
    Ok(json!({ "connected_subgroups": connected.len() }))
}

/// At most `cap` items, chosen deterministically from `rng`.
fn capped<T: Clone, R: Rng>(items: Vec<T>, cap: usize, rng: &mut R) -> Vec<T> {
    if items.len() <= cap {
        return items;
    }
    let mut idx = sample(rng, items.len(), cap).into_vec();
    idx.sort_unstable();
    idx.into_iter().map(|i| items[i].clone()).collect()
}

fn random_in_space<R: Rng>(rng: &mut R, s: &Subspace) -> Vec<crate::exact::Rational> {
    let mut v = zero_vec(s.ambient());
    for b in s.basis_vectors() {
        axpy(&mut v, &random_rational(rng, 4), &b);
    }
    v
}

fn central_commutator<M: Linearized, R: Rng>(m: &M, report: &mut LemmaReport, rng: &mut R, samples: usize) -> Result<Value> {
    let cat = m.catalog_subgroups();
    let mut pairs = Vec::new();
    for h in dedup(cat.iter().map(|h| m.connected_component(h))) {
        for b in &cat {
            if m.normalizes(b, &h) {
                pairs.push((h.clone(), b.clone()));
            }
        }
    }
    let pairs = capped(pairs, 100, rng);
    let (mut applicable, mut skipped, mut max_len) = (0, 0, 0);
    for (h, b) in &pairs {
        let xs = m.generators(b);
        let cc = match CentralCommutator::new(m, h, &xs) {
            Ok(cc) => cc,
            Err(Error::Precondition(_)) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        applicable += 1;
        let dim = cc.space.dim();
        for x in &xs {
            let y = m.random_element(rng, h);
            let c = m.commutator(&y, x);
            let ok = m.log(&c).is_some_and(|v| cc.space.contains(&v));
            report.record(ok, || json!({ "h": m.element_json(&y), "x": m.element_json(x), "commutator": m.element_json(&c) }));
        }
        for _ in 0..(samples / 50).max(1) {
            let target = m.exp(&random_in_space(rng, &cc.space));
            let cert = cc.certify(m, &target)?;
            max_len = max_len.max(cert.len());
            let ok = cert.replays(m)
                && cert.len() <= dim
                && cc.chosen_count() <= dim
                && cert.factors.iter().all(|f| m.contains(h, &f.a));
            report.record(ok, || json!({ "pair": pair_json(m, h, b), "certificate": cert.to_json(m) }));
        }
    }
    Ok(json!({ "pairs": pairs.len(), "applicable": applicable, "skipped": skipped, "max_length": max_len }))
}

/// `[H,X]` for `H = B°` and `X = B`, built the way the connectedness proof
/// goes: `H'` first, then the images of `x - 1` modulo it, closed under the
/// action of `H` and `X`.
fn hx<M: Linearized, R: Rng>(m: &M, report: &mut LemmaReport, rng: &mut R) -> Result<Value> {
    let n = m.lie_dim();
    let mut max_len = 0;
    for b in m.catalog_subgroups() {
        let h = m.connected_component(&b);
        let lie_h = m.unipotent_part(&h);
        let derived_h = m.unipotent_part(&m.commutator_subgroup(&h, &h)?);
        let gens = m.generators(&b);
        let mut seed = derived_h.basis_vectors();
        let mut ops: Vec<Matrix> = Vec::new();
        for x in &gens {
            let ad = m.adjoint(x);
            let shift = ad.sub(&Matrix::identity(n));
            seed.extend(lie_h.basis_vectors().iter().map(|e| shift.apply(e)));
            ops.push(ad);
        }
        ops.extend(lie_h.basis_vectors().iter().map(|e| m.lie_ad(e)));
        let space = invariant_closure(n, seed, &ops);
        let hb = m.commutator_subgroup(&h, &b)?;
        let ok = m.unipotent_part(&hb) == space
            && hb == m.from_unipotent(space.clone())
            && m.is_connected(&hb)
            && m.is_subgroup_of(&hb, &h);
        report.record(ok, || json!({ "b": m.subgroup_json(&b), "commutator": m.subgroup_json(&hb), "proof_route": crate::models::subspace_json(&space) }));
        let plan = StagedPlan::new(m, &h, &b)?;
        let dim = m.dim(&hb);
        for _ in 0..2 {
            let target = m.random_element(rng, &hb);
            let cert = plan.certify(m, &target)?;
            max_len = max_len.max(cert.len());
            let ok = cert.is_valid(m, &h, &b) && cert.len() <= dim;
            report.record(ok, || json!({ "b": m.subgroup_json(&b), "certificate": cert.to_json(m) }));
        }
    }
    Ok(json!({ "max_length": max_len }))
}

fn definable_series<M: GroupModel>(m: &M, report: &mut LemmaReport) -> Result<Value> {
    let whole = m.whole();
    let mut stats = Vec::new();
    for g in dedup([whole.clone(), m.connected_component(&whole)]) {
        let connected = m.is_connected(&g);
        let lower = lower_central(m, &g)?;
        let derived = derived(m, &g)?;
        for (kind, terms) in [("lower-central", &lower), ("derived", &derived)] {
            for (i, t) in terms.iter().enumerate() {
                let descending = i == 0 || m.is_subgroup_of(t, &terms[i - 1]);
                let ok = descending && m.normalizes(&g, t) && (!connected || m.is_connected(t));
                report.record(ok, || json!({ "series": kind, "index": i, "term": m.subgroup_json(t) }));
            }
        }
        stats.push(json!({
            "group": m.subgroup_json(&g),
            "lower_central_dims": lower.iter().map(|t| m.dim(t)).collect::<Vec<_>>(),
            "derived_dims": derived.iter().map(|t| m.dim(t)).collect::<Vec<_>>(),
        }));
    }
    Ok(json!(stats))
}

fn solvable_structure<M: GroupModel>(m: &M, fitting: M::Subgroup, report: &mut LemmaReport) -> Result<Value> {
    let k = m.connected_component(&m.whole());
    if !is_solvable(m, &k)? {
        return Err(Error::Precondition("connected component is not solvable".into()));
    }
    let kp = m.commutator_subgroup(&k, &k)?;
    report.record(is_nilpotent(m, &kp)?, || json!({ "fact": "derived-nilpotent", "derived": m.subgroup_json(&kp) }));
    let fitting_ok = is_nilpotent(m, &fitting)? && m.is_connected(&fitting) && m.normalizes(&k, &fitting);
    report.record(fitting_ok, || json!({ "fact": "fitting-nilpotent", "fitting": m.subgroup_json(&fitting) }));
    report.record(m.is_subgroup_of(&kp, &fitting), || json!({ "fact": "derived-in-fitting", "fitting": m.subgroup_json(&fitting) }));
    if k == m.trivial() {
        return Ok(json!({ "trivial": true }));
    }
    report.record(fitting != m.trivial(), || json!({ "fact": "fitting-nontrivial" }));
    let witness = if fitting != k { fitting.clone() } else { kp.clone() };
    let ok = m.is_subgroup_of(&kp, &witness) && witness != k && m.is_connected(&witness) && m.normalizes(&k, &witness);
    report.record(ok, || json!({ "fact": "proper-above-derived", "witness": m.subgroup_json(&witness) }));
    Ok(json!({ "fitting": m.subgroup_json(&fitting), "derived_dim": m.dim(&kp), "witness": m.subgroup_json(&witness) }))
}

/// Both facts inside a connected ambient `k` with center `zk`.
fn center_checks<M: Linearized>(m: &M, k: M::Subgroup, zk: M::Subgroup, split: bool, report: &mut LemmaReport) -> Result<Value> {
    if !m.is_connected(&k) {
        return Err(Error::Precondition("ambient group is not connected".into()));
    }
    let mut nilpotent = 0;
    for h in m.catalog_subgroups() {
        if !m.is_subgroup_of(&h, &k) || !m.normalizes(&k, &h) {
            continue;
        }
        let h0 = m.connected_component(&h);
        if !split {
            let ok = m.centralizes(&h, &k) == m.centralizes(&h0, &k);
            report.record(ok, || json!({ "normal": m.subgroup_json(&h) }));
            continue;
        }
        let divisible = m.unipotent_part(&h0).dim() == m.dim(&h0);
        if !divisible || !is_nilpotent(m, &h)? {
            continue;
        }
        nilpotent += 1;
        let p = m.product(&m.intersect(&zk, &h), &h0)?;
        report.record(p == h, || json!({ "normal": m.subgroup_json(&h), "product": m.subgroup_json(&p) }));
    }
    Ok(json!({ "ambient": m.subgroup_json(&k), "nilpotent_normal": nilpotent }))
}

/// In the whole (disconnected) group the centrality equivalence can fail;
/// counts how often, as context for the connected check.
fn lbf_disconnected_note(m: &LbfModel, stats: Value) -> Value {
    let g = m.whole();
    let misses = m
        .catalog_subgroups()
        .into_iter()
        .filter(|h| m.is_normal(h) && m.centralizes(&m.connected_component(h), &g) && !m.centralizes(h, &g))
        .count();
    json!({ "connected": stats, "whole_group_exceptions": misses })
}

fn bch<R: Rng>(m: &MalcevModel, report: &mut LemmaReport, rng: &mut R, samples: usize) -> Result<Value> {
    let alg = m.algebra();
    for _ in 0..samples {
        let (u, v, w) = (alg.random_vector(rng, 3), alg.random_vector(rng, 3), alg.random_vector(rng, 3));
        let ok = alg.mul(&alg.mul(&u, &v), &w) == alg.mul(&u, &alg.mul(&v, &w)) && alg.mul(&u, &alg.inv(&u)) == alg.zero();
        report.record(ok, || json!({ "u": crate::models::vector_json(&u), "v": crate::models::vector_json(&v), "w": crate::models::vector_json(&w) }));
        let n = rng.gen_range(2..=5i64);
        let root = alg.power(&u, &frac(1, n));
        let back = (1..n).fold(root.clone(), |acc, _| alg.mul(&acc, &root));
        report.record(back == u, || json!({ "root_of": crate::models::vector_json(&u), "n": n }));
    }
    Ok(json!({ "class": alg.class() }))
}

fn sparse_element<R: Rng>(m: &MalcevModel, rng: &mut R) -> Vec<crate::exact::Rational> {
    let alg = m.algebra();
    let s = alg.random_subalgebra(rng);
    alg.random_in(rng, &s, 3)
}

fn hull<R: Rng>(m: &MalcevModel, report: &mut LemmaReport, rng: &mut R, samples: usize) -> Result<Value> {
    let alg = m.algebra();
    let n = alg.dim();
    for _ in 0..samples {
        let xs: Vec<_> = (0..2).map(|_| sparse_element(m, rng)).collect();
        let ys: Vec<_> = (0..2).map(|_| sparse_element(m, rng)).collect();
        let hx = alg.hull(&xs);
        let hy = alg.hull(&ys);
        // H([X,Y]): the smallest subalgebra holding every [x,y] and stable
        // under conjugation by X and Y
        let ops: Vec<Matrix> = xs.iter().chain(&ys).map(|g| alg.adjoint(g)).collect();
        let mut hxy = alg.hull(&xs.iter().flat_map(|x| ys.iter().map(|y| alg.commutator(x, y))).collect::<Vec<_>>());
        loop {
            let next = alg.subalgebra_closure(invariant_closure(n, hxy.basis_vectors(), &ops).basis_vectors());
            if next == hxy {
                break;
            }
            hxy = next;
        }
        let (a, b) = (alg.random_in(rng, &hx, 3), alg.random_in(rng, &hy, 3));
        let ok = hxy.contains_space(&alg.bracket_spaces(&hx, &hy)) && hxy.contains(&alg.commutator(&a, &b));
        report.record(ok, || {
            json!({ "x": xs.iter().map(|v| crate::models::vector_json(v)).collect::<Vec<_>>(),
                    "y": ys.iter().map(|v| crate::models::vector_json(v)).collect::<Vec<_>>() })
        });
        // an orbit under conjugation by k spans its hull after dim steps
        let k = sparse_element(m, rng);
        let mut orbit = vec![sparse_element(m, rng)];
        for _ in 0..n {
            let last = orbit.last().expect("nonempty").clone();
            orbit.push(alg.conjugate(&last, &k));
        }
        let h = alg.hull(&orbit);
        let ok = h.image(&alg.adjoint(&k)) == h;
        report.record(ok, || json!({ "k": crate::models::vector_json(&k), "x": crate::models::vector_json(&orbit[0]) }));
    }
    Ok(Value::Null)
}

fn finite_battery(id: &str, m: &FiniteModel, report: &mut LemmaReport) -> Result<Value> {
    let g = m.group();
    match id {
            "baer" => {
                let subs = g.all_subgroups();
                let mut largest = 0;
                for a in &subs {
                    for b in subs.iter().filter(|b| g.normalizes(a, b)) {
                        let r = checks::baer_check(g, a, b)?;
                        largest = largest.max(r.commutators.len());
                        report.record(r.holds(), || json!({ "a": a.members(), "b": b.members(), "report": r }));
                    }
                }
                Ok(json!({ "subgroups": subs.len(), "largest_commutator_set": largest }))
            }
            "width-additivity" => {
                let pairs = normalizing_pairs(m);
                let normals = g.normal_subgroups();
                let mut max_width = 0;
                for n in &normals {
                    for (a, b) in &pairs {
                        let r = checks::width_additivity_check(g, n, a, b)?;
                        max_width = max_width.max(r.width);
                        report.record(r.holds(), || json!({ "n": n.members(), "a": a.members(), "b": b.members(), "report": r }));
                    }
                }
                Ok(json!({ "pairs": pairs.len(), "normal_subgroups": normals.len(), "max_width": max_width }))
            }
            "ad-homomorphism" => {
                let mut skipped = 0;
                for h in g.all_subgroups() {
                    for x in 0..g.order() {
                        match checks::ad_map_check(g, &h, x) {
                            Some(ok) => report.record(ok, || json!({ "h": h.members(), "x": x })),
                            None => skipped += 1,
                        }
                    }
                }
                Ok(json!({ "outside_hypothesis": skipped }))
            }
            "central-series" => {
                let r = checks::series_check(g)?;
                let whole = m.whole();
                let generic: Vec<usize> = lower_central(m, &whole)?.iter().map(|t| t.order()).collect();
                let oracle: Vec<usize> = g.lower_central_series(&whole).iter().map(|t| t.order()).collect();
                let ok = r.holds() && generic == oracle;
                report.record(ok, || json!({ "report": r, "model_series": generic }));
                Ok(json!({ "class": r.class, "lower_central_orders": r.lower_central_orders,
                           "upper_central_orders": r.upper_central_orders }))
            }
            "fitting" | "radical" => {
                let r = checks::fitting_and_radical(g);
                let ok = if id == "fitting" { r.fitting_nilpotent } else { r.radical_solvable && r.fitting_in_radical };
                report.record(ok && r.both_normal, || json!({ "report": r }));
                Ok(json!({ "fitting_order": r.fitting.len(), "radical_order": r.radical.len() }))
            }
            "nilpotent-analogs" => {
                if !g.is_nilpotent(&g.whole()) {
                    return Ok(json!({ "nilpotent": false }));
                }
                let r = checks::nilpotent_analog_checks(g)?;
                report.record(r.holds(), || json!({ "report": r }));
                Ok(json!({ "nilpotent": true, "normal_checked": r.normal_checked, "proper_checked": r.proper_checked }))
            }
            _ => unreachable!(),
    }
}

/// The abelian batteries, also used directly on generated block grids.
pub fn abelian_battery<R: Rng>(id: &str, a: &AbelianGroup, report: &mut LemmaReport, rng: &mut R, samples: usize) -> Result<Value> {
    match id {
        "divisible-decomposition" => {
            let d = a.divisible_part();
            let b = a.bounded_complement();
            report.record(a.is_direct_decomposition(&[&d, &b]), || json!({ "fact": "direct-sum" }));
            for n in 1..=12 {
                report.record(a.is_subgroup_of(&d, &a.power_subgroup(n)), || json!({ "fact": "divisible", "n": n }));
            }
            let e = a.bounded_exponent();
            report.record(a.is_subgroup_of(&a.power_subgroup(e), &d), || json!({ "fact": "bounded", "exponent": e }));
            let cd = a.characteristic_decomposition();
            report.record(cd.finite_overlap, || json!({ "fact": "finite-overlap" }));
            for _ in 0..samples {
                let x = a.random_element(rng);
                let dx: Vec<_> = a
                    .blocks()
                    .iter()
                    .zip(x.coords())
                    .map(|(blk, c)| if matches!(blk, Block::Cyclic { .. }) { crate::exact::rat(0) } else { c.clone() })
                    .collect();
                let dx = a.element(dx)?;
                let bx = a.sub(&x, &dx);
                let ok = a.contains(&d, &dx) && a.contains(&b, &bx) && a.add(&dx, &bx) == x;
                report.record(ok, || json!({ "fact": "round-trip", "x": x.to_strings() }));
            }
            Ok(json!({ "bounded_exponent": e }))
        }
        "primary-decomposition" => {
            let parts = a.p_primary_decomposition();
            let mut acc = a.trivial();
            let mut disjoint = true;
            for p in parts.values() {
                disjoint &= a.is_trivial(&a.intersect(&acc, p));
                acc = a.sum(&acc, p);
            }
            report.record(disjoint && acc == a.torsion_subgroup(), || json!({ "fact": "direct-sum" }));
            for _ in 0..samples {
                let x = a.random_element(rng);
                if let Some(o) = a.order(&x) {
                    let ok = prime_divisors(o).iter().all(|p| parts.contains_key(p))
                        && parts.iter().all(|(&p, part)| a.contains(part, &a.times((o / p.pow(crate::abelian::valuation(p, o))) as i64, &x)));
                    report.record(ok, || json!({ "fact": "orders", "x": x.to_strings() }));
                }
            }
            Ok(json!({ "primes": parts.keys().collect::<Vec<_>>() }))
        }
        "torsion-lift" => {
            let mut attempts = 0;
            while report.instances < samples && attempts < 20 * samples {
                attempts += 1;
                let h = a.random_subgroup(rng);
                let x = a.random_element(rng);
                let Some(o) = a.order_modulo(&h, &x) else { continue };
                let n = o * rng.gen_range(1..=3u64);
                let y = a.lift_torsion(&h, &x, n)?;
                let primes_ok = a.order(&y).is_some_and(|oy| prime_divisors(oy).iter().all(|p| n % p == 0));
                let ok = a.contains(&h, &a.sub(&x, &y)) && primes_ok;
                report.record(ok, || json!({ "x": x.to_strings(), "n": n, "lift": y.to_strings(), "subgroup": format!("{h:?}") }));
            }
            Ok(json!({ "attempts": attempts }))
        }
        other => Err(Error::Parse(format!("unknown abelian battery `{other}`"))),
    }
}
