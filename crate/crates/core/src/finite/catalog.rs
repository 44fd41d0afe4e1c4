//! Standard small groups as permutation groups.

use super::group::FiniteGroup;

/// 1-based image list of the `n`-cycle `1 -> 2 -> ... -> n -> 1` on points
/// `offset+1..=offset+n`, padded to `degree`.
fn cycle_on(offset: usize, n: usize, degree: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (1..=degree).collect();
    for i in 0..n {
        p[offset + i] = offset + (i + 1) % n + 1;
    }
    p
}

fn transposition(a: usize, b: usize, degree: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (1..=degree).collect();
    p.swap(a - 1, b - 1);
    p
}

pub fn cyclic_gens(n: usize) -> Vec<Vec<usize>> {
    vec![cycle_on(0, n, n.max(1))]
}

/// Dihedral group of order `2n` acting on an `n`-gon.
pub fn dihedral_gens(n: usize) -> Vec<Vec<usize>> {
    let reflection: Vec<usize> = (0..n).map(|i| (n - i) % n + 1).collect();
    vec![cycle_on(0, n, n), reflection]
}

pub fn symmetric_gens(n: usize) -> Vec<Vec<usize>> {
    if n < 2 {
        return vec![vec![1]];
    }
    vec![cycle_on(0, n, n), transposition(1, 2, n)]
}

/// Alternating group on `n >= 3` points, generated by 3-cycles `(1 2 k)`.
pub fn alternating_gens(n: usize) -> Vec<Vec<usize>> {
    (3..=n)
        .map(|k| {
            let mut p: Vec<usize> = (1..=n).collect();
            p[0] = 2;
            p[1] = k;
            p[k - 1] = 1;
            p
        })
        .collect()
}

/// Generators of `G x H` acting on the disjoint union of the two point sets.
pub fn direct_product_gens(g: &[Vec<usize>], h: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let dg = g.iter().map(Vec::len).max().unwrap_or(0);
    let dh = h.iter().map(Vec::len).max().unwrap_or(0);
    let pad = |p: &Vec<usize>, shift: usize| -> Vec<usize> {
        let mut q: Vec<usize> = (1..=dg + dh).collect();
        for (i, &img) in p.iter().enumerate() {
            q[shift + i] = shift + img;
        }
        q
    };
    g.iter().map(|p| pad(p, 0)).chain(h.iter().map(|p| pad(p, dg))).collect()
}

/// Permutation generators for the action of invertible 2x2 matrices over
/// `Z/p` on the nonzero column vectors.
pub fn linear_action_gens(mats: &[[[u64; 2]; 2]], p: u64) -> Vec<Vec<usize>> {
    let vectors: Vec<(u64, u64)> = (0..p).flat_map(|a| (0..p).map(move |b| (a, b))).filter(|&v| v != (0, 0)).collect();
    let index = |v: (u64, u64)| vectors.iter().position(|&w| w == v).expect("nonzero vector") + 1;
    mats.iter()
        .map(|m| {
            vectors
                .iter()
                .map(|&(x, y)| index(((m[0][0] * x + m[0][1] * y) % p, (m[1][0] * x + m[1][1] * y) % p)))
                .collect()
        })
        .collect()
}

pub fn quaternion_gens() -> Vec<Vec<usize>> {
    linear_action_gens(&[[[0, 2], [1, 0]], [[1, 1], [1, 2]]], 3)
}

pub fn sl23_gens() -> Vec<Vec<usize>> {
    linear_action_gens(&[[[1, 1], [0, 1]], [[1, 0], [1, 1]]], 3)
}

/// Named groups used throughout the tests.
pub fn named(name: &str) -> Option<FiniteGroup> {
    let gens = match name {
        "C1" => vec![vec![1]],
        "S3" => symmetric_gens(3),
        "S4" => symmetric_gens(4),
        "S5" => symmetric_gens(5),
        "A4" => alternating_gens(4),
        "A5" => alternating_gens(5),
        "Q8" => quaternion_gens(),
        "SL(2,3)" => sl23_gens(),
        "C2xC2" => direct_product_gens(&cyclic_gens(2), &cyclic_gens(2)),
        _ => {
            if let Some(n) = name.strip_prefix('C').and_then(|n| n.parse().ok()) {
                cyclic_gens(n)
            } else if let Some(n) = name.strip_prefix('D').and_then(|n| n.parse().ok()) {
                dihedral_gens(n)
            } else {
                return None;
            }
        }
    };
    Some(FiniteGroup::from_permutations(&gens).expect("catalog generators are valid"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        for (name, order) in
            [("C1", 1), ("C6", 6), ("S3", 6), ("D4", 8), ("D5", 10), ("Q8", 8), ("A4", 12), ("S4", 24), ("SL(2,3)", 24), ("S5", 120)]
        {
            assert_eq!(named(name).unwrap().order(), order, "{name}");
        }
        let g = FiniteGroup::from_permutations(&direct_product_gens(&cyclic_gens(2), &quaternion_gens())).unwrap();
        assert_eq!(g.order(), 16);
    }

    #[test]
    fn quaternion_has_one_involution() {
        let q = named("Q8").unwrap();
        let involutions = (0..8).filter(|&g| q.element_order(g) == 2).count();
        assert_eq!(involutions, 1);
    }
}
