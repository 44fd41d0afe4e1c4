//! Exhaustive checks of the commutator and series facts on finite groups.

use serde::Serialize;

use super::group::{FiniteGroup, FiniteSubgroup};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct BaerReport {
    /// Distinct commutators `[a,b]`.
    pub commutators: Vec<usize>,
    /// Elements of the generated subgroup `[A,B]`.
    pub subgroup: Vec<usize>,
    pub inside_b: bool,
    /// The commutator set is stable under conjugation by `C_A(B)` and `C_B(A)`.
    pub centralizer_stable: bool,
    /// `[A,B]` is normalized by `A` and by `B`.
    pub normalized_by_both: bool,
}

impl BaerReport {
    pub fn holds(&self) -> bool {
        self.inside_b && self.centralizer_stable && self.normalized_by_both
    }
}

/// `[A,B]` is a finite subgroup of `B` when `A` normalizes `B`.
pub fn baer_check(g: &FiniteGroup, a: &FiniteSubgroup, b: &FiniteSubgroup) -> Result<BaerReport> {
    if !g.normalizes(a, b) {
        return Err(Error::NotNormalizing("A does not normalize B".into()));
    }
    let commutators = g.commutator_set(a, b);
    let subgroup = g.closure(commutators.iter().copied());
    let inside_b = subgroup.is_subset_of(b);
    let ca_b = g.centralizer_in(a, b.members());
    let cb_a = g.centralizer_in(b, a.members());
    let stable = |conj: &FiniteSubgroup| {
        conj.members().iter().all(|&x| commutators.iter().all(|&c| commutators.binary_search(&g.conjugate(c, x)).is_ok()))
    };
    let centralizer_stable = stable(&ca_b) && stable(&cb_a);
    let normalized_by_both = g.normalizes(a, &subgroup) && g.normalizes(b, &subgroup);
    Ok(BaerReport {
        commutators,
        subgroup: subgroup.members().to_vec(),
        inside_b,
        centralizer_stable,
        normalized_by_both,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct WidthAdditivity {
    /// Width of `[AN/N, BN/N]` in `G/N`.
    pub k: usize,
    /// Least `s` with `[A,B]_s ∩ N = [A,B] ∩ N`.
    pub s: usize,
    pub width: usize,
}

impl WidthAdditivity {
    pub fn holds(&self) -> bool {
        self.width <= self.k + self.s
    }
}

/// Width of `[A,B]` against the widths modulo `N` and inside `N`.
pub fn width_additivity_check(
    g: &FiniteGroup,
    n: &FiniteSubgroup,
    a: &FiniteSubgroup,
    b: &FiniteSubgroup,
) -> Result<WidthAdditivity> {
    let (q, proj) = g.quotient(n)?;
    let k = q.commutator_profile(&g.image(&proj, a), &g.image(&proj, b)).width;
    let profile = g.commutator_profile(a, b);
    let in_n = |set: &[usize]| set.iter().filter(|&&x| n.contains(x)).count();
    let target = in_n(&profile.sets[profile.width]);
    let s = profile.sets.iter().position(|set| in_n(set) == target).expect("last set qualifies");
    Ok(WidthAdditivity { k, s, width: profile.width })
}

/// Whether `h -> [h,x]` is a homomorphism on `H` with kernel `C_H(x)`, when
/// `{[h,x]}` lies in `C_G(H)`. `None` when that hypothesis fails.
pub fn ad_map_check(g: &FiniteGroup, h: &FiniteSubgroup, x: usize) -> Option<bool> {
    let images: Vec<usize> = h.members().iter().map(|&y| g.commutator(y, x)).collect();
    let central = images.iter().all(|&c| h.members().iter().all(|&y| g.mul(c, y) == g.mul(y, c)));
    if !central {
        return None;
    }
    let hom = h.members().iter().all(|&p| {
        h.members().iter().all(|&q| g.commutator(g.mul(p, q), x) == g.mul(g.commutator(p, x), g.commutator(q, x)))
    });
    let kernel: Vec<usize> = h.members().iter().copied().filter(|&y| g.commutator(y, x) == g.identity()).collect();
    let centralizer = g.centralizer_in(h, &[x]);
    Some(hom && kernel == centralizer.members())
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesReport {
    pub lower_central_orders: Vec<usize>,
    pub derived_orders: Vec<usize>,
    pub upper_central_orders: Vec<usize>,
    pub class: Option<usize>,
    /// `G^i <= Z_{n-i}` for `0 <= i <= n` (nilpotent groups only).
    pub lower_in_upper: bool,
    /// Class `n` iff `Z_n = G` and `Z_{n-1} < G`; and `G/Z(G)` has class `n-1`.
    pub class_characterization: bool,
}

impl SeriesReport {
    pub fn holds(&self) -> bool {
        self.lower_in_upper && self.class_characterization
    }
}

pub fn series_check(g: &FiniteGroup) -> Result<SeriesReport> {
    let s = g.series();
    let whole = g.whole();
    let class = g.nilpotency_class(&whole);
    let upper_reaches_g = s.upper_central.last() == Some(&whole);
    let (lower_in_upper, class_characterization) = match class {
        Some(n) => {
            let lower = |i: usize| s.lower_central.get(i).cloned().unwrap_or_else(|| g.trivial());
            let upper = |i: usize| s.upper_central.get(i).cloned().unwrap_or_else(|| whole.clone());
            let incl = (0..=n).all(|i| lower(i).is_subset_of(&upper(n - i)));
            let zn = upper(n) == whole;
            let below = n == 0 || upper(n - 1) != whole;
            let (q, _) = g.quotient(&g.center())?;
            let quotient_class = q.nilpotency_class(&q.whole());
            let drops = quotient_class == Some(n.saturating_sub(1));
            (incl, zn && below && drops && upper_reaches_g)
        }
        None => (true, !upper_reaches_g),
    };
    Ok(SeriesReport {
        lower_central_orders: s.lower_central.iter().map(FiniteSubgroup::order).collect(),
        derived_orders: s.derived.iter().map(FiniteSubgroup::order).collect(),
        upper_central_orders: s.upper_central.iter().map(FiniteSubgroup::order).collect(),
        class,
        lower_in_upper,
        class_characterization,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FittingRadical {
    pub fitting: Vec<usize>,
    pub radical: Vec<usize>,
    pub fitting_nilpotent: bool,
    pub radical_solvable: bool,
    pub both_normal: bool,
    pub fitting_in_radical: bool,
}

impl FittingRadical {
    pub fn holds(&self) -> bool {
        self.fitting_nilpotent && self.radical_solvable && self.both_normal && self.fitting_in_radical
    }
}

pub fn fitting_and_radical(g: &FiniteGroup) -> FittingRadical {
    let f = g.fitting_subgroup();
    let r = g.solvable_radical();
    FittingRadical {
        fitting_nilpotent: g.is_nilpotent(&f),
        radical_solvable: g.is_solvable(&r),
        both_normal: g.is_normal(&f) && g.is_normal(&r),
        fitting_in_radical: f.is_subset_of(&r),
        fitting: f.members().to_vec(),
        radical: r.members().to_vec(),
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct NilpotentAnalogs {
    pub normal_checked: usize,
    pub proper_checked: usize,
    /// Nontrivial normal subgroups meeting the center trivially.
    pub center_misses: Vec<Vec<usize>>,
    /// Proper subgroups equal to their own normalizer.
    pub self_normalizing: Vec<Vec<usize>>,
}

impl NilpotentAnalogs {
    pub fn holds(&self) -> bool {
        self.center_misses.is_empty() && self.self_normalizing.is_empty()
    }
}

/// In a nilpotent group every nontrivial normal subgroup meets the center
/// and every proper subgroup is properly contained in its normalizer.
pub fn nilpotent_analog_checks(g: &FiniteGroup) -> Result<NilpotentAnalogs> {
    if !g.is_nilpotent(&g.whole()) {
        return Err(Error::Precondition("group is not nilpotent".into()));
    }
    let z = g.center();
    let mut out = NilpotentAnalogs::default();
    for n in g.normal_subgroups().into_iter().filter(|n| !n.is_trivial()) {
        out.normal_checked += 1;
        if g.intersect(&n, &z).is_trivial() {
            out.center_misses.push(n.members().to_vec());
        }
    }
    for h in g.all_subgroups().into_iter().filter(|h| h.order() < g.order()) {
        out.proper_checked += 1;
        if g.normalizer(&h) == h {
            out.self_normalizing.push(h.members().to_vec());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::catalog::named;

    fn find(g: &FiniteGroup, order: usize, pred: impl Fn(&FiniteSubgroup) -> bool) -> FiniteSubgroup {
        g.all_subgroups().into_iter().find(|h| h.order() == order && pred(h)).expect("subgroup exists")
    }

    #[test]
    fn closures() {
        let s3 = named("S3").unwrap();
        assert_eq!(s3.closure([s3.identity()]), s3.trivial());
        let three_cycle = (0..6).find(|&g| s3.element_order(g) == 3).unwrap();
        assert_eq!(s3.closure([three_cycle]).order(), 3);
        assert_eq!(s3.closure(0..6), s3.whole());
    }

    #[test]
    fn profiles() {
        let c6 = named("C6").unwrap();
        let p = c6.commutator_profile(&c6.whole(), &c6.whole());
        assert_eq!((p.width, p.sets.len()), (0, 1));
        let s3 = named("S3").unwrap();
        let p = s3.commutator_profile(&s3.whole(), &s3.whole());
        assert_eq!((p.width, p.subgroup().order()), (1, 3));
        let q8 = named("Q8").unwrap();
        let p = q8.commutator_profile(&q8.whole(), &q8.whole());
        assert_eq!((p.width, p.subgroup().order()), (1, 2));
        // sets grow strictly and then stop
        for w in p.sets.windows(2) {
            assert!(w[0].len() < w[1].len());
        }
    }

    #[test]
    fn baer_examples() {
        let d4 = named("D4").unwrap();
        let r = baer_check(&d4, &d4.whole(), &d4.center()).unwrap();
        assert!(r.holds());
        assert_eq!(r.subgroup.len(), 1);

        let s4 = named("S4").unwrap();
        let v4 = find(&s4, 4, |h| s4.is_normal(h));
        let a4 = find(&s4, 12, |_| true);
        let r = baer_check(&s4, &v4, &a4).unwrap();
        assert!(r.holds());
        assert_eq!(r.subgroup, v4.members());

        let s3 = named("S3").unwrap();
        let t = find(&s3, 2, |_| true);
        let c3 = find(&s3, 3, |_| true);
        assert!(baer_check(&s3, &c3, &t).is_err());
    }

    #[test]
    fn width_additivity_examples() {
        let s4 = named("S4").unwrap();
        let v4 = find(&s4, 4, |h| s4.is_normal(h));
        let a4 = find(&s4, 12, |_| true);
        let r = width_additivity_check(&s4, &v4, &a4, &a4).unwrap();
        assert!(r.holds());
        assert_eq!(r.k, 0);

        let r = width_additivity_check(&s4, &s4.whole(), &a4, &a4).unwrap();
        assert_eq!((r.k, r.s), (0, r.width));
        let r = width_additivity_check(&s4, &s4.trivial(), &a4, &a4).unwrap();
        assert_eq!(r.k, r.width);
        let t = find(&s4, 2, |h| !s4.is_normal(h));
        assert!(width_additivity_check(&s4, &t, &a4, &a4).is_err());
    }

    #[test]
    fn series_examples() {
        let c4 = named("C4").unwrap();
        let s = c4.series();
        assert!(s.lower_central[1].is_trivial());
        assert_eq!(s.upper_central[1], c4.whole());

        let q8 = named("Q8").unwrap();
        let s = q8.series();
        assert_eq!(s.lower_central.iter().map(FiniteSubgroup::order).collect::<Vec<_>>(), vec![8, 2, 1]);
        assert!(s.lower_central[1].is_subset_of(&s.upper_central[1]));
        assert_eq!(q8.nilpotency_class(&q8.whole()), Some(2));
        assert!(series_check(&q8).unwrap().holds());

        let s4 = named("S4").unwrap();
        let s = s4.series();
        assert_eq!(s.derived.iter().map(FiniteSubgroup::order).collect::<Vec<_>>(), vec![24, 12, 4, 1]);
        assert!(series_check(&s4).unwrap().holds());
    }

    #[test]
    fn fitting_radical_examples() {
        let q8 = named("Q8").unwrap();
        let r = fitting_and_radical(&q8);
        assert_eq!((r.fitting.len(), r.radical.len()), (8, 8));
        let s4 = named("S4").unwrap();
        let r = fitting_and_radical(&s4);
        assert!(r.holds());
        assert_eq!((r.fitting.len(), r.radical.len()), (4, 24));
        let s5 = named("S5").unwrap();
        let r = fitting_and_radical(&s5);
        assert_eq!((r.fitting.len(), r.radical.len()), (1, 1));
    }

    #[test]
    fn nilpotent_analogs() {
        let c6 = named("C6").unwrap();
        assert!(nilpotent_analog_checks(&c6).unwrap().holds());
        let q8 = named("Q8").unwrap();
        let r = nilpotent_analog_checks(&q8).unwrap();
        assert!(r.holds());
        assert!(r.normal_checked >= 4);
        let d4 = named("D4").unwrap();
        let z = d4.center();
        let h = find(&d4, 2, |h| !h.is_subset_of(&z));
        assert!(d4.normalizer(&h).order() > 2);
        assert!(nilpotent_analog_checks(&named("S3").unwrap()).is_err());
    }

    #[test]
    fn ad_maps() {
        let d4 = named("D4").unwrap();
        for h in d4.all_subgroups() {
            for x in 0..8 {
                assert_ne!(ad_map_check(&d4, &h, x), Some(false));
            }
        }
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(named("S4").unwrap().all_subgroups().len(), 30);
        assert_eq!(named("S4").unwrap().normal_subgroups().len(), 4);
        assert_eq!(named("Q8").unwrap().all_subgroups().len(), 6);
        assert_eq!(named("SL(2,3)").unwrap().all_subgroups().len(), 15);
    }

    #[test]
    fn quotients() {
        let s4 = named("S4").unwrap();
        let v4 = find(&s4, 4, |h| s4.is_normal(h));
        let (q, proj) = s4.quotient(&v4).unwrap();
        assert_eq!(q.order(), 6);
        assert_eq!(proj.len(), 24);
        assert!(!q.is_abelian(&q.whole()));
    }
}
