use std::collections::{BTreeSet, HashMap, VecDeque};

use rand::Rng;

use crate::error::{Error, Result};

/// Largest group expanded from permutation generators.
pub const ORDER_CAP: usize = 5000;
/// Largest permutation degree accepted.
pub const DEGREE_CAP: usize = 16;
/// Groups up to this order get an exhaustive associativity check.
const FULL_ASSOCIATIVITY_CHECK: usize = 256;

/// A finite group given by its Cayley table. Elements are indices `0..order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inverse: Vec<usize>,
    identity: usize,
}

/// A subgroup as a sorted list of element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteSubgroup {
    members: Vec<usize>,
}

impl FiniteSubgroup {
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    pub fn is_subset_of(&self, other: &FiniteSubgroup) -> bool {
        self.members.iter().all(|&g| other.contains(g))
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }
}

/// Commutator sets `[A,B]_n` for `n = 0, 1, ...` until they stabilize.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WidthProfile {
    /// `sets[n]` is the set of products of at most `n` commutators or inverses.
    pub sets: Vec<Vec<usize>>,
    pub width: usize,
}

impl WidthProfile {
    pub fn subgroup(&self) -> FiniteSubgroup {
        FiniteSubgroup { members: self.sets[self.width].clone() }
    }
}

/// Lower central, derived and upper central series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    /// `lower_central[0] = G`, `lower_central[i+1] = [G, lower_central[i]]`.
    pub lower_central: Vec<FiniteSubgroup>,
    /// `derived[0] = G`, `derived[i+1] = [derived[i], derived[i]]`.
    pub derived: Vec<FiniteSubgroup>,
    /// `upper_central[0] = 1`, `upper_central[i]` is `Z_i`.
    pub upper_central: Vec<FiniteSubgroup>,
}

impl FiniteGroup {
    pub fn from_table(rows: Vec<Vec<usize>>) -> Result<Self> {
        let order = rows.len();
        if order == 0 {
            return Err(Error::Invalid("empty Cayley table".into()));
        }
        let mut table = Vec::with_capacity(order * order);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != order {
                return Err(Error::Invalid(format!("row {i} has length {} instead of {order}", r.len())));
            }
            let mut seen = vec![false; order];
            for &x in r {
                if x >= order || seen[x] {
                    return Err(Error::Invalid(format!("row {i} is not a permutation of the elements")));
                }
                seen[x] = true;
                table.push(x as u32);
            }
        }
        for j in 0..order {
            let mut seen = vec![false; order];
            for i in 0..order {
                let x = table[i * order + j] as usize;
                if seen[x] {
                    return Err(Error::Invalid(format!("column {j} repeats element {x}")));
                }
                seen[x] = true;
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|g| table[e * order + g] as usize == g && table[g * order + e] as usize == g))
            .ok_or_else(|| Error::Invalid("no identity element".into()))?;
        let mut inverse = vec![usize::MAX; order];
        for g in 0..order {
            inverse[g] = (0..order)
                .find(|&h| table[g * order + h] as usize == identity)
                .expect("Latin square has a solution");
            if table[inverse[g] * order + g] as usize != identity {
                return Err(Error::Invalid(format!("element {g} has no two-sided inverse")));
            }
        }
        let group = FiniteGroup { order, table, inverse, identity };
        group.check_associativity()?;
        Ok(group)
    }

    fn check_associativity(&self) -> Result<()> {
        let n = self.order;
        let fail = |a, b, c| Err(Error::Invalid(format!("associativity fails on ({a}, {b}, {c})")));
        if n <= FULL_ASSOCIATIVITY_CHECK {
            for a in 0..n {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return fail(a, b, c);
                        }
                    }
                }
            }
        } else {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..200_000 {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                    return fail(a, b, c);
                }
            }
        }
        Ok(())
    }

    /// Expands permutation generators (1-based images) into a Cayley table.
    /// Element 0 is the identity; the rest appear in breadth-first order.
    pub fn from_permutations(gens: &[Vec<usize>]) -> Result<Self> {
        let (group, _) = Self::from_permutations_labeled(gens)?;
        Ok(group)
    }

    /// As [`from_permutations`](Self::from_permutations), also returning the
    /// permutation (0-based) for each element index.
    pub fn from_permutations_labeled(gens: &[Vec<usize>]) -> Result<(Self, Vec<Vec<usize>>)> {
        let degree = gens.iter().map(Vec::len).max().unwrap_or(1).max(1);
        if degree > DEGREE_CAP {
            return Err(Error::Invalid(format!("permutation degree {degree} exceeds {DEGREE_CAP}")));
        }
        let mut perms = Vec::new();
        for g in gens {
            let mut p: Vec<usize> = (0..degree).collect();
            let mut seen = vec![false; degree];
            for (i, &img) in g.iter().enumerate() {
                if img == 0 || img > degree || seen[img - 1] {
                    return Err(Error::Invalid(format!("generator {g:?} is not a permutation")));
                }
                seen[img - 1] = true;
                p[i] = img - 1;
            }
            if g.len() < degree && seen[g.len()..].iter().any(|&s| s) {
                return Err(Error::Invalid(format!("generator {g:?} is not a permutation")));
            }
            perms.push(p);
        }
        // composition: (p * q)(i) = q(p(i)), acting on the right
        let compose = |p: &[usize], q: &[usize]| p.iter().map(|&i| q[i]).collect::<Vec<_>>();
        let id: Vec<usize> = (0..degree).collect();
        let mut elements = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in &perms {
                let next = compose(&elements[i], g);
                if !index.contains_key(&next) {
                    if elements.len() == ORDER_CAP {
                        return Err(Error::Invalid(format!("group order exceeds {ORDER_CAP}")));
                    }
                    index.insert(next.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(next);
                }
            }
        }
        let n = elements.len();
        let mut rows = vec![vec![0; n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = index[&compose(&elements[i], &elements[j])];
            }
        }
        Ok((Self::from_table(rows)?, elements))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `[a,b] = a^{-1} b^{-1} a b`
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    /// `a^b = b^{-1} a b`
    pub fn conjugate(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(b), a), b)
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != self.identity {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|i| (0..self.order).map(|j| self.mul(i, j)).collect()).collect()
    }

    pub fn whole(&self) -> FiniteSubgroup {
        FiniteSubgroup { members: (0..self.order).collect() }
    }

    pub fn trivial(&self) -> FiniteSubgroup {
        FiniteSubgroup { members: vec![self.identity] }
    }

    /// Builds a subgroup handle from an explicit member list, checking closure.
    pub fn subgroup(&self, members: impl IntoIterator<Item = usize>) -> Result<FiniteSubgroup> {
        let set: BTreeSet<usize> = members.into_iter().collect();
        let h = FiniteSubgroup { members: set.into_iter().collect() };
        if h.members.iter().any(|&g| g >= self.order) {
            return Err(Error::Invalid("subgroup member out of range".into()));
        }
        if !h.contains(self.identity)
            || h.members.iter().any(|&a| !h.contains(self.inv(a)) || h.members.iter().any(|&b| !h.contains(self.mul(a, b))))
        {
            return Err(Error::Invalid("member set is not a subgroup".into()));
        }
        Ok(h)
    }

    /// Smallest subgroup containing `seed`.
    pub fn closure(&self, seed: impl IntoIterator<Item = usize>) -> FiniteSubgroup {
        let gens: Vec<usize> = seed.into_iter().filter(|&g| g != self.identity).collect();
        let mut in_set = vec![false; self.order];
        in_set[self.identity] = true;
        let mut members = vec![self.identity];
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = self.mul(x, g);
                if !in_set[y] {
                    in_set[y] = true;
                    members.push(y);
                    queue.push_back(y);
                }
            }
        }
        members.sort_unstable();
        FiniteSubgroup { members }
    }

    pub fn join(&self, a: &FiniteSubgroup, b: &FiniteSubgroup) -> FiniteSubgroup {
        self.closure(a.members.iter().chain(&b.members).copied())
    }

    pub fn intersect(&self, a: &FiniteSubgroup, b: &FiniteSubgroup) -> FiniteSubgroup {
        FiniteSubgroup { members: a.members.iter().copied().filter(|&g| b.contains(g)).collect() }
    }

    /// The set `AB`, which is a subgroup when one factor normalizes the other.
    pub fn product_set(&self, a: &[usize], b: &[usize]) -> Vec<usize> {
        let mut mark = vec![false; self.order];
        for &x in a {
            for &y in b {
                mark[self.mul(x, y)] = true;
            }
        }
        (0..self.order).filter(|&g| mark[g]).collect()
    }

    pub fn normalizes(&self, a: &FiniteSubgroup, b: &FiniteSubgroup) -> bool {
        a.members.iter().all(|&x| b.members.iter().all(|&y| b.contains(self.conjugate(y, x))))
    }

    pub fn is_normal_in(&self, h: &FiniteSubgroup, ambient: &FiniteSubgroup) -> bool {
        self.normalizes(ambient, h)
    }

    pub fn is_normal(&self, h: &FiniteSubgroup) -> bool {
        (0..self.order).all(|x| h.members.iter().all(|&y| h.contains(self.conjugate(y, x))))
    }

    pub fn normalizer(&self, h: &FiniteSubgroup) -> FiniteSubgroup {
        let members = (0..self.order)
            .filter(|&x| h.members.iter().all(|&y| h.contains(self.conjugate(y, x))))
            .collect();
        FiniteSubgroup { members }
    }

    /// Elements of `within` commuting with every element of `set`.
    pub fn centralizer_in(&self, within: &FiniteSubgroup, set: &[usize]) -> FiniteSubgroup {
        let members = within
            .members
            .iter()
            .copied()
            .filter(|&x| set.iter().all(|&y| self.mul(x, y) == self.mul(y, x)))
            .collect();
        FiniteSubgroup { members }
    }

    pub fn centralizer(&self, set: &[usize]) -> FiniteSubgroup {
        self.centralizer_in(&self.whole(), set)
    }

    pub fn center_of(&self, h: &FiniteSubgroup) -> FiniteSubgroup {
        self.centralizer_in(h, &h.members)
    }

    pub fn center(&self) -> FiniteSubgroup {
        self.center_of(&self.whole())
    }

    pub fn normal_closure(&self, seed: &[usize]) -> FiniteSubgroup {
        let conj: Vec<usize> =
            seed.iter().flat_map(|&s| (0..self.order).map(move |x| (s, x))).map(|(s, x)| self.conjugate(s, x)).collect();
        self.closure(conj)
    }

    /// All commutators `[a,b]` with `a in A`, `b in B`, deduplicated.
    pub fn commutator_set(&self, a: &FiniteSubgroup, b: &FiniteSubgroup) -> Vec<usize> {
        let mut mark = vec![false; self.order];
        for &x in &a.members {
            for &y in &b.members {
                mark[self.commutator(x, y)] = true;
            }
        }
        (0..self.order).filter(|&g| mark[g]).collect()
    }

    pub fn commutator_subgroup(&self, a: &FiniteSubgroup, b: &FiniteSubgroup) -> FiniteSubgroup {
        self.closure(self.commutator_set(a, b))
    }

    pub fn commutator_profile(&self, a: &FiniteSubgroup, b: &FiniteSubgroup) -> WidthProfile {
        let comms = self.commutator_set(a, b);
        let mut step: BTreeSet<usize> = comms.iter().copied().collect();
        step.extend(comms.iter().map(|&c| self.inv(c)));
        step.insert(self.identity);
        let step: Vec<usize> = step.into_iter().collect();
        let mut sets = vec![vec![self.identity]];
        loop {
            let next = self.product_set(sets.last().expect("nonempty"), &step);
            if &next == sets.last().expect("nonempty") {
                let width = sets.len() - 1;
                return WidthProfile { sets, width };
            }
            sets.push(next);
        }
    }

    /// `G/N` as a fresh Cayley table, with the projection `G -> G/N`.
    /// Cosets are numbered by their smallest member.
    pub fn quotient(&self, n: &FiniteSubgroup) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_normal(n) {
            return Err(Error::NotNormal("quotient by a non-normal subgroup".into()));
        }
        let mut proj = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for g in 0..self.order {
            if proj[g] == usize::MAX {
                for &m in &n.members {
                    proj[self.mul(g, m)] = reps.len();
                }
                reps.push(g);
            }
        }
        let rows = reps.iter().map(|&a| reps.iter().map(|&b| proj[self.mul(a, b)]).collect()).collect();
        Ok((FiniteGroup::from_table(rows)?, proj))
    }

    pub fn image(&self, proj: &[usize], h: &FiniteSubgroup) -> FiniteSubgroup {
        let set: BTreeSet<usize> = h.members.iter().map(|&g| proj[g]).collect();
        FiniteSubgroup { members: set.into_iter().collect() }
    }

    pub fn lower_central_series(&self, h: &FiniteSubgroup) -> Vec<FiniteSubgroup> {
        let mut out = vec![h.clone()];
        loop {
            let next = self.commutator_subgroup(h, out.last().expect("nonempty"));
            if &next == out.last().expect("nonempty") {
                return out;
            }
            out.push(next);
        }
    }

    pub fn derived_series(&self, h: &FiniteSubgroup) -> Vec<FiniteSubgroup> {
        let mut out = vec![h.clone()];
        loop {
            let last = out.last().expect("nonempty");
            let next = self.commutator_subgroup(last, last);
            if &next == last {
                return out;
            }
            out.push(next);
        }
    }

    /// `Z_0 = 1`, `Z_{k+1} = { h in H : [h,x] in Z_k for all x in H }`.
    pub fn upper_central_series(&self, h: &FiniteSubgroup) -> Vec<FiniteSubgroup> {
        let mut out = vec![self.trivial()];
        loop {
            let z = out.last().expect("nonempty");
            let members =
                h.members.iter().copied().filter(|&g| h.members.iter().all(|&x| z.contains(self.commutator(g, x)))).collect();
            let next = FiniteSubgroup { members };
            if &next == z {
                return out;
            }
            out.push(next);
        }
    }

    pub fn series(&self) -> Series {
        let g = self.whole();
        Series {
            lower_central: self.lower_central_series(&g),
            derived: self.derived_series(&g),
            upper_central: self.upper_central_series(&g),
        }
    }

    /// Nilpotency class (least `n` with `H^n = 1` counting `H^1 = [H,H]`),
    /// `None` when not nilpotent. The trivial group has class 0.
    pub fn nilpotency_class(&self, h: &FiniteSubgroup) -> Option<usize> {
        let lcs = self.lower_central_series(h);
        lcs.last().expect("nonempty").is_trivial().then(|| lcs.len() - 1)
    }

    pub fn is_nilpotent(&self, h: &FiniteSubgroup) -> bool {
        self.nilpotency_class(h).is_some()
    }

    pub fn is_solvable(&self, h: &FiniteSubgroup) -> bool {
        self.derived_series(h).last().expect("nonempty").is_trivial()
    }

    pub fn is_abelian(&self, h: &FiniteSubgroup) -> bool {
        h.members.iter().all(|&a| h.members.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Every normal subgroup, sorted by order then members.
    pub fn normal_subgroups(&self) -> Vec<FiniteSubgroup> {
        let mut found: BTreeSet<FiniteSubgroup> = (0..self.order).map(|g| self.normal_closure(&[g])).collect();
        loop {
            let current: Vec<FiniteSubgroup> = found.iter().cloned().collect();
            let mut grew = false;
            for (i, a) in current.iter().enumerate() {
                for b in &current[i + 1..] {
                    if found.insert(self.join(a, b)) {
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        sorted_by_order(found)
    }

    /// Every subgroup, sorted by order then members.
    pub fn all_subgroups(&self) -> Vec<FiniteSubgroup> {
        let cyclic: BTreeSet<FiniteSubgroup> = (0..self.order).map(|g| self.closure([g])).collect();
        let cyclic: Vec<FiniteSubgroup> = cyclic.into_iter().collect();
        let mut found: BTreeSet<FiniteSubgroup> = cyclic.iter().cloned().collect();
        let mut frontier: Vec<FiniteSubgroup> = cyclic.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for h in &frontier {
                for c in &cyclic {
                    if c.is_subset_of(h) {
                        continue;
                    }
                    let j = self.join(h, c);
                    if !found.contains(&j) {
                        found.insert(j.clone());
                        next.push(j);
                    }
                }
            }
            frontier = next;
        }
        sorted_by_order(found)
    }

    /// Product of all normal nilpotent subgroups.
    pub fn fitting_subgroup(&self) -> FiniteSubgroup {
        self.normal_subgroups()
            .into_iter()
            .filter(|n| self.is_nilpotent(n))
            .fold(self.trivial(), |acc, n| self.join(&acc, &n))
    }

    /// Product of all normal solvable subgroups.
    pub fn solvable_radical(&self) -> FiniteSubgroup {
        self.normal_subgroups()
            .into_iter()
            .filter(|n| self.is_solvable(n))
            .fold(self.trivial(), |acc, n| self.join(&acc, &n))
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R) -> usize {
        rng.gen_range(0..self.order)
    }
}

fn sorted_by_order(set: BTreeSet<FiniteSubgroup>) -> Vec<FiniteSubgroup> {
    let mut v: Vec<FiniteSubgroup> = set.into_iter().collect();
    v.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.cmp(b)));
    v
}
