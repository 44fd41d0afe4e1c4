//! Rational nilpotent Lie algebras and the groups they define through the
//! Baker–Campbell–Hausdorff product.
//!
//! Group elements are stored by their logarithm, so every vector of length
//! `dim` is an element and `exp`/`log` are identities on coordinates.

mod bch;

use std::collections::BTreeMap;

use num::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::exact::{add_vec, axpy, invariant_closure, is_zero_vec, neg_vec, nullspace, rat, scale_vec, zero_vec, Matrix, Rational, Subspace};

pub use bch::dynkin_coefficients;

/// Largest nilpotency class the engine accepts.
pub const CLASS_CAP: usize = 6;

/// Sparse structure constants: `[e_i, e_j] = sum_k c_ijk e_k`.
type Constants = Vec<Vec<Vec<(usize, Rational)>>>;

#[derive(Clone, Debug)]
pub struct LieAlgebra {
    dim: usize,
    constants: Constants,
    class: usize,
}

impl PartialEq for LieAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.constants == other.constants
    }
}

impl Eq for LieAlgebra {}

fn sparse(v: &[Rational]) -> Vec<(usize, Rational)> {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

impl LieAlgebra {
    /// Builds and validates an algebra from the brackets `[e_i, e_j]` for
    /// `i < j` or `i > j` (0-based). Missing pairs are zero; the opposite
    /// pair is filled in by antisymmetry.
    pub fn from_brackets(dim: usize, brackets: &BTreeMap<(usize, usize), Vec<Rational>>) -> Result<Self> {
        let mut full = vec![vec![zero_vec(dim); dim]; dim];
        let mut given = vec![vec![false; dim]; dim];
        for (&(i, j), v) in brackets {
            if i >= dim || j >= dim {
                return Err(Error::Invalid(format!("bracket index ({}, {}) out of range", i + 1, j + 1)));
            }
            if v.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: v.len() });
            }
            full[i][j] = v.clone();
            given[i][j] = true;
        }
        for i in 0..dim {
            for j in 0..dim {
                if given[i][j] && !given[j][i] {
                    full[j][i] = neg_vec(&full[i][j]);
                }
            }
        }
        Self::from_full_table(full)
    }

    /// Builds and validates an algebra from the complete table `c[i][j]`.
    pub fn from_full_table(table: Vec<Vec<Vec<Rational>>>) -> Result<Self> {
        let dim = table.len();
        let constants: Constants = table.iter().map(|row| row.iter().map(|v| sparse(v)).collect()).collect();
        let mut alg = LieAlgebra { dim, constants, class: 0 };
        alg.class = alg.validate()?;
        Ok(alg)
    }

    pub fn abelian(dim: usize) -> Self {
        Self::from_brackets(dim, &BTreeMap::new()).expect("abelian algebra is valid")
    }

    /// `[X, Y] = Z` on the basis `X, Y, Z`.
    pub fn heisenberg() -> Self {
        let b = BTreeMap::from([((0, 1), vec![rat(0), rat(0), rat(1)])]);
        Self::from_brackets(3, &b).expect("Heisenberg algebra is valid")
    }

    /// Strictly upper triangular `n x n` matrices. The basis `E_ij` (`i < j`)
    /// is ordered by superdiagonal `j - i`, then by row.
    pub fn strictly_upper_triangular(n: usize) -> Self {
        let basis = ut_basis(n);
        let index = |i: usize, j: usize| basis.iter().position(|&p| p == (i, j));
        let d = basis.len();
        let mut table = vec![vec![zero_vec(d); d]; d];
        for (a, &(i, j)) in basis.iter().enumerate() {
            for (b, &(k, l)) in basis.iter().enumerate() {
                let v = &mut table[a][b];
                if j == k {
                    v[index(i, l).expect("i < l")] += rat(1);
                }
                if l == i {
                    v[index(k, j).expect("k < j")] -= rat(1);
                }
            }
        }
        Self::from_full_table(table).expect("upper triangular algebra is valid")
    }

    /// Checks antisymmetry, the Jacobi identity and nilpotency; returns the
    /// nilpotency class (least `c` with `g^{c+1} = 0`).
    pub fn validate(&self) -> Result<usize> {
        let n = self.dim;
        for i in 0..n {
            for j in i..n {
                let a = self.basis_bracket(i, j);
                let b = self.basis_bracket(j, i);
                if add_vec(&a, &b).iter().any(|x| !x.is_zero()) {
                    return Err(Error::Antisymmetry(i + 1, j + 1));
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let e = |t| crate::exact::unit_vec(n, t);
                    let t1 = self.bracket(&e(i), &self.basis_bracket(j, k));
                    let t2 = self.bracket(&e(j), &self.basis_bracket(k, i));
                    let t3 = self.bracket(&e(k), &self.basis_bracket(i, j));
                    if !is_zero_vec(&add_vec(&add_vec(&t1, &t2), &t3)) {
                        return Err(Error::Jacobi(i + 1, j + 1, k + 1));
                    }
                }
            }
        }
        let lcs = self.lower_central_unchecked();
        if !lcs.last().expect("nonempty").is_zero() {
            return Err(Error::NotNilpotent);
        }
        let class = lcs.len() - 1;
        if class > CLASS_CAP {
            return Err(Error::ClassCap(class, CLASS_CAP));
        }
        Ok(class)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn class(&self) -> usize {
        self.class
    }

    pub fn basis_bracket(&self, i: usize, j: usize) -> Vec<Rational> {
        let mut v = zero_vec(self.dim);
        for (k, c) in &self.constants[i][j] {
            v[*k] = c.clone();
        }
        v
    }

    /// The full table of structure constants.
    pub fn table(&self) -> Vec<Vec<Vec<Rational>>> {
        (0..self.dim).map(|i| (0..self.dim).map(|j| self.basis_bracket(i, j)).collect()).collect()
    }

    pub fn bracket(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        let mut out = zero_vec(self.dim);
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() {
                    continue;
                }
                let row = &self.constants[i][j];
                if row.is_empty() {
                    continue;
                }
                let c = ui * vj;
                for (k, x) in row {
                    out[*k] += &c * x;
                }
            }
        }
        out
    }

    /// Matrix of `ad_u = [u, -]`.
    pub fn ad(&self, u: &[Rational]) -> Matrix {
        let cols: Vec<Vec<Rational>> = (0..self.dim).map(|j| self.bracket(u, &crate::exact::unit_vec(self.dim, j))).collect();
        Matrix::from_columns(self.dim, &cols)
    }

    pub fn zero(&self) -> Vec<Rational> {
        zero_vec(self.dim)
    }

    pub fn whole(&self) -> Subspace {
        Subspace::full(self.dim)
    }

    pub fn trivial(&self) -> Subspace {
        Subspace::zero(self.dim)
    }

    /// `span { [u, v] : u in a, v in b }`.
    pub fn bracket_spaces(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let bv = b.basis_vectors();
        Subspace::span(self.dim, a.basis_vectors().iter().flat_map(|u| bv.iter().map(move |v| (u, v))).map(|(u, v)| self.bracket(u, v)))
    }

    pub fn is_subalgebra(&self, h: &Subspace) -> bool {
        h.contains_space(&self.bracket_spaces(h, h))
    }

    /// `[g, h] <= h`.
    pub fn is_ideal(&self, h: &Subspace) -> bool {
        h.contains_space(&self.bracket_spaces(&self.whole(), h))
    }

    /// `[a, b] <= b`.
    pub fn normalizes(&self, a: &Subspace, b: &Subspace) -> bool {
        b.contains_space(&self.bracket_spaces(a, b))
    }

    /// Smallest subalgebra containing the vectors.
    pub fn subalgebra_closure(&self, vectors: Vec<Vec<Rational>>) -> Subspace {
        let mut space = Subspace::span(self.dim, vectors);
        loop {
            let next = space.sum(&self.bracket_spaces(&space, &space)).expect("same ambient");
            if next.dim() == space.dim() {
                return space;
            }
            space = next;
        }
    }

    /// Smallest subalgebra containing the logarithms of the elements; the
    /// Lie algebra of the definable hull.
    pub fn hull(&self, elements: &[Vec<Rational>]) -> Subspace {
        self.subalgebra_closure(elements.to_vec())
    }

    /// Smallest ideal of `g` containing the vectors.
    pub fn ideal_closure(&self, vectors: Vec<Vec<Rational>>) -> Subspace {
        let ops: Vec<Matrix> = (0..self.dim).map(|i| self.ad(&crate::exact::unit_vec(self.dim, i))).collect();
        invariant_closure(self.dim, vectors, &ops)
    }

    /// `{ x : [x, h] <= target for all h in h_space }`.
    fn bracket_preimage(&self, h_space: &Subspace, target: &Subspace) -> Subspace {
        let annihilators = nullspace(target.basis());
        let annihilators = if target.is_zero() {
            (0..self.dim).map(|i| crate::exact::unit_vec(self.dim, i)).collect()
        } else {
            annihilators
        };
        let mut rows = Vec::new();
        for h in h_space.basis_vectors() {
            let columns: Vec<Vec<Rational>> = (0..self.dim).map(|i| self.bracket(&crate::exact::unit_vec(self.dim, i), &h)).collect();
            for f in &annihilators {
                rows.push(columns.iter().map(|c| c.iter().zip(f).fold(Rational::zero(), |acc, (a, b)| acc + a * b)).collect());
            }
        }
        if rows.is_empty() {
            return self.whole();
        }
        let m = Matrix::from_rows(self.dim, rows).expect("row lengths");
        Subspace::span(self.dim, nullspace(&m))
    }

    pub fn centralizer(&self, h: &Subspace) -> Subspace {
        self.bracket_preimage(h, &self.trivial())
    }

    pub fn center(&self) -> Subspace {
        self.centralizer(&self.whole())
    }

    /// `{ x : [x, h] <= h }`.
    pub fn normalizer(&self, h: &Subspace) -> Subspace {
        self.bracket_preimage(h, h)
    }

    fn lower_central_unchecked(&self) -> Vec<Subspace> {
        let g = self.whole();
        let mut out = vec![g.clone()];
        for _ in 0..=self.dim {
            let next = self.bracket_spaces(&g, out.last().expect("nonempty"));
            if &next == out.last().expect("nonempty") {
                break;
            }
            out.push(next);
        }
        out
    }

    pub fn series(&self) -> AlgebraSeries {
        let lower_central = self.lower_central_unchecked();
        let mut derived = vec![self.whole()];
        loop {
            let last = derived.last().expect("nonempty");
            let next = self.bracket_spaces(last, last);
            if &next == last {
                break;
            }
            derived.push(next);
        }
        let mut upper_central = vec![self.trivial()];
        loop {
            let last = upper_central.last().expect("nonempty");
            let next = self.bracket_preimage(&self.whole(), last);
            if &next == last {
                break;
            }
            upper_central.push(next);
        }
        AlgebraSeries { lower_central, derived, upper_central }
    }

    /// `g / ideal`, with the projection on coordinates.
    pub fn quotient(&self, ideal: &Subspace) -> Result<(LieAlgebra, crate::exact::QuotientMap)> {
        if !self.is_ideal(ideal) {
            return Err(Error::NotNormal("subspace is not an ideal".into()));
        }
        let q = self.whole().quotient_by(ideal);
        let d = q.dim();
        let lifts: Vec<Vec<Rational>> = q.complement().to_vec();
        let mut table = vec![vec![zero_vec(d); d]; d];
        for a in 0..d {
            for b in 0..d {
                table[a][b] = q.project(&self.bracket(&lifts[a], &lifts[b])).expect("inside g");
            }
        }
        Ok((LieAlgebra::from_full_table(table)?, q))
    }

    // group law

    /// `log(exp u exp v)` by the Dynkin series, truncated at the class.
    pub fn mul(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        bch::bch(self, u, v)
    }

    pub fn inv(&self, u: &[Rational]) -> Vec<Rational> {
        neg_vec(u)
    }

    /// `[a, b] = a^{-1} b^{-1} a b`, computed through the product.
    pub fn commutator(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let ab = self.mul(a, b);
        let t = self.mul(&neg_vec(b), &ab);
        self.mul(&neg_vec(a), &t)
    }

    /// `b^{-1} a b`.
    pub fn conjugate(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        self.mul(&self.mul(&neg_vec(b), a), b)
    }

    /// `u^q` for rational `q`; exists and is unique since the group is divisible.
    pub fn power(&self, u: &[Rational], q: &Rational) -> Vec<Rational> {
        scale_vec(q, u)
    }

    /// Matrix of `Ad_g : x -> log(g x g^{-1})` on the Lie algebra, `exp(ad_g)`.
    pub fn adjoint(&self, g: &[Rational]) -> Matrix {
        let ad = self.ad(g);
        let mut term = Matrix::identity(self.dim);
        let mut total = Matrix::identity(self.dim);
        for k in 1..=self.dim {
            term = term.mul(&ad).scale(&Rational::new(1.into(), (k as i64).into()));
            if term.is_zero() {
                break;
            }
            total = total.add(&term);
        }
        total
    }

    pub fn random_vector<R: Rng>(&self, rng: &mut R, bound: i64) -> Vec<Rational> {
        (0..self.dim).map(|_| random_rational(rng, bound)).collect()
    }

    /// A random element of the subspace with small coefficients.
    pub fn random_in<R: Rng>(&self, rng: &mut R, h: &Subspace, bound: i64) -> Vec<Rational> {
        let mut v = self.zero();
        for b in h.basis_vectors() {
            axpy(&mut v, &random_rational(rng, bound), &b);
        }
        v
    }

    /// Subalgebra generated by up to three sparse random vectors.
    pub fn random_subalgebra<R: Rng>(&self, rng: &mut R) -> Subspace {
        if self.dim == 0 {
            return self.trivial();
        }
        let count = rng.gen_range(0..=3.min(self.dim));
        let vs = (0..count)
            .map(|_| {
                let mut v = self.zero();
                for _ in 0..rng.gen_range(1..=2) {
                    v[rng.gen_range(0..self.dim)] = rat(rng.gen_range(-2..=2));
                }
                v
            })
            .collect();
        self.subalgebra_closure(vs)
    }
}

pub fn random_rational<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    Rational::new(rng.gen_range(-bound..=bound).into(), rng.gen_range(1..=3i64).into())
}

/// Index pairs `(i, j)`, `i < j`, of strictly upper triangular `n x n`
/// matrices in the basis order used by [`LieAlgebra::strictly_upper_triangular`].
pub fn ut_basis(n: usize) -> Vec<(usize, usize)> {
    (1..n).flat_map(|d| (0..n - d).map(move |i| (i, i + d))).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSeries {
    /// `g, [g,g], [g,[g,g]], ...` ending at the first repeat (0 when nilpotent).
    pub lower_central: Vec<Subspace>,
    pub derived: Vec<Subspace>,
    /// `0, z(g), z_2(g), ...` ending at `g`.
    pub upper_central: Vec<Subspace>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::frac;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn classes() {
        assert_eq!(LieAlgebra::abelian(2).class(), 1);
        assert_eq!(LieAlgebra::heisenberg().class(), 2);
        let ut4 = LieAlgebra::strictly_upper_triangular(4);
        assert_eq!((ut4.dim(), ut4.class()), (6, 3));
        assert_eq!(LieAlgebra::strictly_upper_triangular(5).class(), 4);
    }

    #[test]
    fn rejects_bad_tables() {
        let mut b = BTreeMap::from([((0, 1), v(&[0, 0, 1]))]);
        b.insert((0, 2), v(&[1, 0, 0]));
        assert_eq!(LieAlgebra::from_brackets(3, &b), Err(Error::Jacobi(1, 2, 3)));

        let b = BTreeMap::from([((0, 1), v(&[0, 0, 1])), ((1, 0), v(&[0, 0, 1]))]);
        assert_eq!(LieAlgebra::from_brackets(3, &b), Err(Error::Antisymmetry(1, 2)));

        // [X, Y] = Y is solvable but not nilpotent
        let b = BTreeMap::from([((0, 1), v(&[0, 1]))]);
        assert_eq!(LieAlgebra::from_brackets(2, &b), Err(Error::NotNilpotent));
    }

    #[test]
    fn class_cap() {
        // filiform algebra of class 7
        let n = 8;
        let mut b = BTreeMap::new();
        for i in 1..n - 1 {
            let mut e = zero_vec(n);
            e[i + 1] = rat(1);
            b.insert((0, i), e);
        }
        assert_eq!(LieAlgebra::from_brackets(n, &b), Err(Error::ClassCap(7, CLASS_CAP)));
    }

    #[test]
    fn bch_examples() {
        let h = LieAlgebra::heisenberg();
        let x = v(&[1, 0, 0]);
        let y = v(&[0, 1, 0]);
        assert_eq!(h.mul(&x, &h.zero()), x);
        assert_eq!(h.mul(&x, &y), vec![rat(1), rat(1), frac(1, 2)]);
        assert_eq!(h.commutator(&x, &y), v(&[0, 0, 1]));
        let a = LieAlgebra::abelian(2);
        assert_eq!(a.mul(&v(&[1, 2]), &v(&[3, -1])), v(&[4, 1]));
        assert_eq!(h.commutator(&v(&[0, 0, 5]), &v(&[1, 2, 3])), h.zero());
    }

    #[test]
    fn hulls() {
        let h = LieAlgebra::heisenberg();
        assert!(h.hull(&[h.zero()]).is_zero());
        assert_eq!(h.hull(&[v(&[1, 0, 0])]), Subspace::span(3, vec![v(&[1, 0, 0])]));
        assert_eq!(h.hull(&[v(&[1, 0, 0]), v(&[0, 1, 0])]), h.whole());
    }

    #[test]
    fn series() {
        let a = LieAlgebra::abelian(2);
        assert_eq!(a.series().lower_central, vec![a.whole(), a.trivial()]);
        let h = LieAlgebra::heisenberg();
        let z = Subspace::span(3, vec![v(&[0, 0, 1])]);
        let s = h.series();
        assert_eq!(s.lower_central, vec![h.whole(), z.clone(), h.trivial()]);
        assert_eq!(s.upper_central, vec![h.trivial(), z, h.whole()]);
        let ut4 = LieAlgebra::strictly_upper_triangular(4);
        let dims: Vec<usize> = ut4.series().lower_central.iter().map(Subspace::dim).collect();
        assert_eq!(dims, vec![6, 3, 1, 0]);
    }

    #[test]
    fn subgroup_operations() {
        let h = LieAlgebra::heisenberg();
        let line = |x: &[i64]| Subspace::span(3, vec![v(x)]);
        let xz = line(&[1, 0, 0]).sum(&line(&[0, 0, 1])).unwrap();
        let yz = line(&[0, 1, 0]).sum(&line(&[0, 0, 1])).unwrap();
        assert!(h.normalizes(&line(&[1, 0, 0]), &line(&[0, 0, 1])));
        assert!(h.is_subalgebra(&xz));
        assert_eq!(xz.intersect(&yz).unwrap(), line(&[0, 0, 1]));
        assert!(!h.normalizes(&line(&[1, 0, 0]), &line(&[0, 1, 0])));
        assert_eq!(h.center(), line(&[0, 0, 1]));
        assert_eq!(h.normalizer(&line(&[1, 0, 0])), xz);
    }

    #[test]
    fn quotient_by_center() {
        let h = LieAlgebra::heisenberg();
        let (q, _) = h.quotient(&h.center()).unwrap();
        assert_eq!((q.dim(), q.class()), (2, 1));
        let line = Subspace::span(3, vec![v(&[1, 0, 0])]);
        assert!(h.quotient(&line).is_err());
    }

    #[test]
    fn adjoint_matches_conjugation() {
        let ut4 = LieAlgebra::strictly_upper_triangular(4);
        let g = v(&[1, -2, 1, 3, 0, 1]);
        let x = v(&[0, 1, 2, -1, 1, 0]);
        // g x g^{-1} = (g^{-1})^{-1} x g^{-1}
        assert_eq!(ut4.adjoint(&g).apply(&x), ut4.conjugate(&x, &neg_vec(&g)));
    }
}
