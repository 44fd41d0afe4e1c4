//! Acceptance gate. Each test prints one `PASS`/`FAIL` line with its pinned
//! tolerance, written straight to stderr so it survives output capture.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use commwidth::abelian::{AbelianGroup, Block};
use commwidth::describe::{self, Entry, Group};
use commwidth::exact::{frac, rat, Matrix, Rational};
use commwidth::finite::FiniteGroup;
use commwidth::harness::{self, abelian_battery, CheckConfig, LemmaReport, StagedPlan};
use commwidth::models::{replay, GroupModel, LbfModel, MalcevModel};
use commwidth::nilpotent::{ut_basis, LieAlgebra};

const SEED: u64 = 42;

fn verdict(n: u32, name: &str, ok: bool, detail: &str) {
    let line = format!("{} criterion {n:>2} {name}: {detail}\n", if ok { "PASS" } else { "FAIL" });
    std::io::stderr().write_all(line.as_bytes()).unwrap();
    assert!(ok, "criterion {n} failed: {detail}");
}

fn corpus() -> Vec<Entry> {
    describe::load_corpus(&describe::corpus_dir()).expect("bundled corpus loads")
}

fn failures(reports: &[LemmaReport]) -> Vec<String> {
    reports.iter().filter(|r| !r.passed).map(|r| format!("{} on {}: {:?}", r.lemma, r.model, r.failures.first())).collect()
}

// Matrix oracle for strictly upper triangular algebras: exp and log as
// finite power series of nilpotent matrices.

fn to_matrix(n: usize, v: &[Rational]) -> Matrix {
    let mut rows = vec![vec![rat(0); n]; n];
    for (c, &(i, j)) in v.iter().zip(&ut_basis(n)) {
        rows[i][j] = c.clone();
    }
    Matrix::from_rows(n, rows).unwrap()
}

fn from_matrix(n: usize, m: &Matrix) -> Vec<Rational> {
    ut_basis(n).iter().map(|&(i, j)| m.row(i)[j].clone()).collect()
}

fn mat_exp(x: &Matrix) -> Matrix {
    let n = x.rows();
    let mut term = Matrix::identity(n);
    let mut sum = Matrix::identity(n);
    for k in 1..n {
        term = term.mul(x).scale(&frac(1, k as i64));
        sum = sum.add(&term);
    }
    sum
}

fn mat_log(u: &Matrix) -> Matrix {
    let n = u.rows();
    let y = u.sub(&Matrix::identity(n));
    let mut power = Matrix::identity(n);
    let mut sum = Matrix::zeros(n, n);
    for k in 1..n {
        power = power.mul(&y);
        let sign = if k % 2 == 1 { 1 } else { -1 };
        sum = sum.add(&power.scale(&frac(sign, k as i64)));
    }
    sum
}

#[test]
fn criterion_01_width_bound_nilpotent() {
    let start = Instant::now();
    let mut details = Vec::new();
    let mut ok = true;
    for (n, bound) in [(3usize, 1usize), (4, 3)] {
        let m = MalcevModel::new(LieAlgebra::strictly_upper_triangular(n));
        let g = m.whole();
        let c = m.commutator_subgroup(&g, &g).unwrap();
        ok &= m.dim(&c) == bound;
        let plan = StagedPlan::new(&m, &g, &g).unwrap();
        let rng = &mut ChaCha8Rng::seed_from_u64(SEED);
        let mut longest = 0;
        for _ in 0..200 {
            let target = m.random_element(rng, &c);
            let cert = plan.certify(&m, &target).unwrap();
            longest = longest.max(cert.len());
            // replay once through the group law and once through matrices
            let by_matrices = cert.factors.iter().fold(Matrix::identity(n), |acc, f| {
                let (a, b) = (mat_exp(&to_matrix(n, &f.a)), mat_exp(&to_matrix(n, &f.b)));
                let (ai, bi) = (a.inverse().unwrap(), b.inverse().unwrap());
                let comm = ai.mul(&bi).mul(&a).mul(&b);
                acc.mul(&if f.sign < 0 { comm.inverse().unwrap() } else { comm })
            });
            ok &= replay(&m, &cert.factors) == target
                && by_matrices == mat_exp(&to_matrix(n, &target))
                && cert.is_valid(&m, &g, &g)
                && cert.len() <= bound;
        }
        details.push(format!("UT({n}) dim [G,G] = {} max length {longest} <= {bound}", m.dim(&c)));
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(30);
    details.push(format!("{:.2}s < 30s", elapsed.as_secs_f64()));
    verdict(1, "width bound on Heisenberg and UT(4), 200 targets, exact replay", ok, &details.join("; "));
}

#[test]
fn criterion_02_main_theorem_decomposition() {
    let mut pairs = 0;
    let mut bad = Vec::new();
    for e in corpus() {
        macro_rules! run {
            ($m:expr) => {{
                let m = $m;
                for (a, b) in harness::normalizing_pairs(m) {
                    pairs += 1;
                    let d = harness::decomposition(m, &a, &b).unwrap();
                    // finite index: same dimension and C inside [A,B]
                    let finite = m.is_subgroup_of(&d.from_components, &d.commutator)
                        && m.dim(&d.from_components) == m.dim(&d.commutator);
                    if !(d.holds && finite) {
                        bad.push(format!("{}: {} / {}", e.name, m.subgroup_json(&a), m.subgroup_json(&b)));
                    }
                }
            }};
        }
        match &e.group {
            Group::Lbf(m) => run!(m),
            Group::Tbu(m) => run!(m),
            _ => {}
        }
    }
    let ok = pairs >= 30 && bad.is_empty();
    verdict(2, "[A,B]° = [A°,B][A,B°] on LBF/TBU corpus pairs", ok, &format!("{pairs} pairs, {} failures (exact)", bad.len()));
}

#[test]
fn criterion_03_inversion_example() {
    let m = LbfModel::from_permutations(1, &[vec![2, 1]], vec![Matrix::from_i64(&[&[-1]])]).unwrap();
    let b = m.whole();
    let a = m.connected_component(&b);
    let with_b0 = m.commutator_subgroup(&a, &m.connected_component(&b)).unwrap();
    let ab = m.commutator_subgroup(&a, &b).unwrap();
    let ok = with_b0 == m.trivial() && ab == a && m.dim(&a) == 1 && a.s.order() == 1;
    verdict(
        3,
        "Q ⋊ <-1>: [A,B°] = 1 and [A,B] = A",
        ok,
        &format!("[A,B°] = {}, [A,B] = {} (exact)", m.subgroup_json(&with_b0), m.subgroup_json(&ab)),
    );
}

fn battery(ids: &[&str], kinds: &[&str], samples: usize) -> (Vec<LemmaReport>, Duration) {
    let entries: Vec<Entry> = corpus().into_iter().filter(|e| kinds.contains(&e.group.kind())).collect();
    let start = Instant::now();
    let reports = harness::run_checks(&entries, ids, &CheckConfig { seed: SEED, samples }).unwrap();
    (reports, start.elapsed())
}

#[test]
fn criterion_04_dimension_formula() {
    let (reports, _) = battery(&["dimension-formula"], &["finite", "nilpotent", "lbf", "tbu"], 100);
    let min = reports.iter().map(|r| r.instances).min().unwrap_or(0);
    let bad = failures(&reports);
    let ok = !reports.is_empty() && min >= 100 && bad.is_empty();
    verdict(4, "dim(AB) = dim A + dim B - dim(A∩B)", ok, &format!("{} models, >= {min} pairs each, {} failures (exact)", reports.len(), bad.len()));
}

#[test]
fn criterion_05_generation() {
    let (reports, _) = battery(&["generation"], &["finite", "nilpotent", "lbf", "tbu"], 200);
    let instances: usize = reports.iter().map(|r| r.instances).sum();
    let compared = reports.iter().filter(|r| r.stats["compared_with_closure"] == true).count();
    let bad = failures(&reports);
    verdict(
        5,
        "greedy generation k <= dim, equal to closure when dim <= 6",
        bad.is_empty() && instances > 0,
        &format!("{instances} instances, {compared} models compared with closure, {} failures", bad.len()),
    );
}

#[test]
fn criterion_06_bch_matrix_oracle() {
    let start = Instant::now();
    let mut mismatches = 0;
    let mut total = 0;
    for n in 2..=5 {
        let alg = LieAlgebra::strictly_upper_triangular(n);
        let rng = &mut ChaCha8Rng::seed_from_u64(SEED + n as u64);
        for _ in 0..500 {
            let (u, v) = (alg.random_vector(rng, 5), alg.random_vector(rng, 5));
            let oracle = from_matrix(n, &mat_log(&mat_exp(&to_matrix(n, &u)).mul(&mat_exp(&to_matrix(n, &v)))));
            total += 1;
            if alg.mul(&u, &v) != oracle {
                mismatches += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = mismatches == 0 && elapsed < Duration::from_secs(60);
    verdict(
        6,
        "Dynkin BCH = log(exp U exp V) on UT(n), n <= 5",
        ok,
        &format!("{total} pairs, {mismatches} mismatches (exact), {:.2}s < 60s", elapsed.as_secs_f64()),
    );
}

#[test]
fn criterion_07_finite_oracle_battery() {
    let ids = ["baer", "width-additivity", "ad-homomorphism", "central-series", "fitting", "radical", "nilpotent-analogs", "main-theorem"];
    let groups: Vec<FiniteGroup> = corpus()
        .into_iter()
        .filter_map(|e| match e.group {
            Group::Finite(m) => Some(m.group().clone()),
            _ => None,
        })
        .collect();
    let (reports, elapsed) = battery(&ids, &["finite"], 200);
    let bad = failures(&reports);
    let largest = groups.iter().map(FiniteGroup::order).max().unwrap_or(0);
    let ok = groups.len() >= 15 && largest <= 48 && bad.is_empty() && elapsed < Duration::from_secs(120);
    verdict(
        7,
        "finite oracle battery",
        ok,
        &format!("{} groups of order <= {largest}, {} reports, {} failures, {:.2}s < 120s", groups.len(), reports.len(), bad.len(), elapsed.as_secs_f64()),
    );
}

#[test]
fn criterion_08_hulls() {
    // 200 samples give 50 pairs of element sets per model
    let (reports, _) = battery(&["hull"], &["nilpotent"], 200);
    let min = reports.iter().map(|r| r.instances / 2).min().unwrap_or(0);
    let bad = failures(&reports);
    verdict(
        8,
        "[H(X),H(Y)] <= H([X,Y]) and conjugation invariance",
        !reports.is_empty() && min >= 50 && bad.is_empty(),
        &format!("{} models, >= {min} pairs each, {} failures", reports.len(), bad.len()),
    );
}

/// Every multiset of at most four blocks from Q, Z/p^k and Prüfer(p) with
/// p in {2,3,5} and k <= 3.
fn block_grid() -> Vec<Vec<Block>> {
    let mut kinds = vec![Block::RationalLine];
    for p in [2, 3, 5] {
        kinds.extend((1..=3).map(|k| Block::Cyclic { p, k }));
        kinds.push(Block::Pruefer { p });
    }
    fn extend(kinds: &[Block], start: usize, current: &mut Vec<Block>, out: &mut Vec<Vec<Block>>) {
        out.push(current.clone());
        if current.len() == 4 {
            return;
        }
        for i in start..kinds.len() {
            current.push(kinds[i]);
            extend(kinds, i, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    extend(&kinds, 0, &mut Vec::new(), &mut out);
    out
}

#[test]
fn criterion_09_abelian_calculus() {
    let grid = block_grid();
    let mut bad = Vec::new();
    let mut instances = 0;
    for (i, blocks) in grid.iter().enumerate() {
        let a = AbelianGroup::new(blocks.clone()).unwrap();
        let rng = &mut ChaCha8Rng::seed_from_u64(SEED + i as u64);
        for id in ["divisible-decomposition", "primary-decomposition", "torsion-lift"] {
            let mut report = LemmaReport::new(id, &format!("{blocks:?}"));
            let result = abelian_battery(id, &a, &mut report, rng, 8);
            instances += report.instances;
            if result.is_err() || !report.passed {
                bad.push(format!("{id} on {blocks:?}: {result:?} {:?}", report.failures.first()));
            }
        }
    }
    verdict(
        9,
        "abelian decompositions and torsion lifting on the block grid",
        bad.is_empty(),
        &format!("{} groups, {instances} instances, {} failures", grid.len(), bad.len()),
    );
}

#[test]
fn criterion_10_determinism() {
    let entries = corpus();
    let ids: Vec<&str> = harness::LEMMAS.iter().map(|l| l.id).collect();
    let cfg = CheckConfig { seed: 42, samples: 200 };
    let render = || {
        harness::run_checks(&entries, &ids, &cfg).unwrap().iter().map(LemmaReport::to_line).collect::<Vec<_>>().join("\n")
    };
    let (first, second) = (render(), render());
    verdict(
        10,
        "check --all --seed 42 is byte-identical across runs",
        first == second && !first.is_empty(),
        &format!("{} bytes, identical = {}", first.len(), first == second),
    );
}
