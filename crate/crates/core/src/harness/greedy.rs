use crate::error::{Error, Result};
use crate::models::GroupModel;

/// The subgroup generated by connected, pairwise normalizing parts, with the
/// parts whose product already gives it.
#[derive(Clone, Debug)]
pub struct Generation<S> {
    pub subgroup: S,
    /// Indices into the input, in the order they were taken.
    pub chosen: Vec<usize>,
}

/// Adds at each step the part that raises the dimension most (first one on
/// ties). Every step gains at least one dimension, so at most `dim` parts
/// are taken.
pub fn greedy_generate<M: GroupModel>(model: &M, parts: &[M::Subgroup]) -> Result<Generation<M::Subgroup>> {
    for (i, p) in parts.iter().enumerate() {
        if !model.is_connected(p) {
            return Err(Error::Precondition(format!("part {} is not connected", i + 1)));
        }
        for (j, q) in parts.iter().enumerate() {
            if i != j && !model.normalizes(p, q) {
                return Err(Error::NotNormalizing(format!("part {} does not normalize part {}", i + 1, j + 1)));
            }
        }
    }
    let mut current = model.trivial();
    let mut chosen = Vec::new();
    loop {
        let mut best: Option<(usize, M::Subgroup)> = None;
        let mut best_dim = model.dim(&current);
        for (i, p) in parts.iter().enumerate() {
            if chosen.contains(&i) {
                continue;
            }
            let prod = model.product(&current, p)?;
            if model.dim(&prod) > best_dim {
                best_dim = model.dim(&prod);
                best = Some((i, prod));
            }
        }
        match best {
            Some((i, prod)) => {
                chosen.push(i);
                current = prod;
            }
            None => return Ok(Generation { subgroup: current, chosen }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{unit_vec, Subspace};
    use crate::models::MalcevModel;
    use crate::nilpotent::LieAlgebra;

    #[test]
    fn heisenberg_planes() {
        let m = MalcevModel::new(LieAlgebra::heisenberg());
        let e = |i| unit_vec(3, i);
        let xz = Subspace::span(3, [e(0), e(2)]);
        let yz = Subspace::span(3, [e(1), e(2)]);
        let gen = greedy_generate(&m, &[xz.clone(), yz]).unwrap();
        assert_eq!(gen.subgroup, m.whole());
        assert_eq!(gen.chosen, vec![0, 1]);
        let single = greedy_generate(&m, &[xz.clone()]).unwrap();
        assert_eq!((single.subgroup, single.chosen), (xz, vec![0]));
        let lines = [Subspace::span(3, [e(0)]), Subspace::span(3, [e(1)])];
        assert!(greedy_generate(&m, &lines).is_err());
    }
}
