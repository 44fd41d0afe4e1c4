//! Exact rational scalars, dense matrices and canonical subspaces of `Q^n`.
//!
//! Everything here is exact. Subspaces are stored by their reduced row-echelon
//! basis, so two spanning sets of the same subspace give structurally equal
//! values and `==` is subspace equality.

use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Formats as `p` for integers and `p/q` otherwise.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn zero_vec(n: usize) -> Vec<Rational> {
    vec![Rational::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vec<Rational> {
    let mut v = zero_vec(n);
    v[i] = Rational::one();
    v
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn add_vec(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vec(c: &Rational, a: &[Rational]) -> Vec<Rational> {
    a.iter().map(|x| c * x).collect()
}

pub fn neg_vec(a: &[Rational]) -> Vec<Rational> {
    a.iter().map(|x| -x).collect()
}

/// `acc += c * v`
pub fn axpy(acc: &mut [Rational], c: &Rational, v: &[Rational]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += c * x;
        }
    }
}

/// Dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(
                self.row_iter()
                    .map(|r| r.iter().map(format_rational).collect::<Vec<_>>()),
            )
            .finish()
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: zero_vec(rows * cols) }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
            }
            entries.extend(r);
        }
        Ok(Matrix { rows: n, cols, entries })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rs = rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
        Self::from_rows(cols, rs).expect("ragged integer matrix")
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, cols: &[Vec<Rational>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..rows {
                m[(i, j)] = c[i].clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Rational]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.entries)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        self.row_iter()
            .map(|r| {
                let mut s = Rational::zero();
                for (a, b) in r.iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        s += a * b;
                    }
                }
                s
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: add_vec(&self.entries, &other.entries),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: sub_vec(&self.entries, &other.entries),
        }
    }

    pub fn scale(&self, c: &Rational) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, entries: scale_vec(c, &self.entries) }
    }

    /// Inverse by Gauss-Jordan elimination, `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rational::one();
        }
        let (r, rank) = rref(&aug);
        if rank < n || (0..n).any(|i| !r[(i, i)].is_one()) {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.row_iter().map(|r| r.iter().map(format_rational).collect()).collect()
    }

    pub fn from_strings(rows: &[Vec<String>]) -> Result<Matrix> {
        let cols = rows.first().map_or(0, Vec::len);
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(cols, parsed)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.entries[i * self.cols + j]
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        Matrix::from_strings(&rows).map_err(serde::de::Error::custom)
    }
}

/// Reduced row-echelon form and rank. Zero rows are kept at the bottom.
pub fn rref(m: &Matrix) -> (Matrix, usize) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        // smallest-height pivot keeps intermediate fractions small
        let pivot = (rank..rows)
            .filter(|&r| !a[(r, col)].is_zero())
            .min_by_key(|&r| height(&a[(r, col)]));
        let Some(p) = pivot else { continue };
        if p != rank {
            for j in 0..cols {
                a.entries.swap(p * cols + j, rank * cols + j);
            }
        }
        let inv = a[(rank, col)].recip();
        for j in col..cols {
            let v = &a[(rank, j)] * &inv;
            a[(rank, j)] = v;
        }
        let pivot_row: Vec<Rational> = a.row(rank).to_vec();
        for r in 0..rows {
            if r == rank || a[(r, col)].is_zero() {
                continue;
            }
            let f = a[(r, col)].clone();
            for j in col..cols {
                if !pivot_row[j].is_zero() {
                    let v = &a[(r, j)] - &f * &pivot_row[j];
                    a[(r, j)] = v;
                }
            }
        }
        rank += 1;
    }
    (a, rank)
}

fn height(q: &Rational) -> u64 {
    q.numer().bits() + q.denom().bits()
}

/// Basis of the right nullspace `{x : m x = 0}`.
pub fn nullspace(m: &Matrix) -> Vec<Vec<Rational>> {
    let (r, rank) = rref(m);
    let cols = m.cols;
    let mut pivots = Vec::with_capacity(rank);
    for i in 0..rank {
        let p = (0..cols).find(|&j| !r[(i, j)].is_zero()).expect("pivot row");
        pivots.push(p);
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|j| !pivots.contains(j)) {
        let mut v = zero_vec(cols);
        v[free] = Rational::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -r[(i, free)].clone();
        }
        basis.push(v);
    }
    basis
}

/// Some solution `c` of `sum_i c_i vectors[i] = target`, if one exists.
pub fn solve_combination(vectors: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let n = target.len();
    let k = vectors.len();
    let mut aug = Matrix::zeros(n, k + 1);
    for (j, v) in vectors.iter().enumerate() {
        for i in 0..n {
            aug[(i, j)] = v[i].clone();
        }
    }
    for i in 0..n {
        aug[(i, k)] = target[i].clone();
    }
    let (r, rank) = rref(&aug);
    let mut sol = zero_vec(k);
    for i in 0..rank {
        let p = (0..=k).find(|&j| !r[(i, j)].is_zero()).expect("pivot row");
        if p == k {
            return None;
        }
        sol[p] = r[(i, k)].clone();
    }
    Some(sol)
}

/// A subspace of `Q^ambient` in canonical (RREF) form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in Q^{}; {:?})", self.dim(), self.ambient, self.basis)
    }
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::zeros(0, ambient) }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::identity(ambient) }
    }

    pub fn span<I>(ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = Vec<Rational>>,
    {
        let rows: Vec<Vec<Rational>> = vectors.into_iter().collect();
        for r in &rows {
            assert_eq!(r.len(), ambient, "vector length differs from ambient dimension");
        }
        let m = Matrix::from_rows(ambient, rows).expect("lengths checked");
        let (r, rank) = rref(&m);
        let basis = Matrix::from_rows(ambient, r.row_iter().take(rank).map(<[_]>::to_vec).collect())
            .expect("rows of rref");
        Subspace { ambient, basis }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Rational>> {
        self.basis.row_iter().map(<[_]>::to_vec).collect()
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: other.ambient });
        }
        Ok(())
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.ambient);
        if is_zero_vec(v) {
            return true;
        }
        // reduce against the RREF pivots
        let mut r = v.to_vec();
        for row in self.basis.row_iter() {
            let p = row.iter().position(|x| !x.is_zero()).expect("nonzero basis row");
            if !r[p].is_zero() {
                let c = r[p].clone();
                for (x, y) in r.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x -= &c * y;
                    }
                }
            }
        }
        is_zero_vec(&r)
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.basis.row_iter().all(|r| self.contains(r))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Ok(Subspace::span(
            self.ambient,
            self.basis_vectors().into_iter().chain(other.basis_vectors()),
        ))
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.ambient));
        }
        // left null vectors (c, d) of [A; B] give c A = -d B in the intersection
        let k = self.dim();
        let stacked: Vec<Vec<Rational>> =
            self.basis_vectors().into_iter().chain(other.basis_vectors()).collect();
        let m = Matrix::from_rows(self.ambient, stacked).expect("same ambient").transpose();
        let vecs = nullspace(&m).into_iter().map(|c| {
            let mut v = zero_vec(self.ambient);
            for (i, ci) in c.iter().take(k).enumerate() {
                axpy(&mut v, ci, self.basis.row(i));
            }
            v
        });
        Ok(Subspace::span(self.ambient, vecs))
    }

    /// Coordinates of `v` with respect to the canonical basis.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        solve_combination(&self.basis_vectors(), v)
    }

    /// Image of this subspace under a linear map `Q^ambient -> Q^m`.
    pub fn image(&self, m: &Matrix) -> Subspace {
        Subspace::span(m.rows, self.basis.row_iter().map(|r| m.apply(r)))
    }

    /// Coordinates on `self / sub` with respect to a complement basis picked
    /// from the canonical basis of `self`.
    pub fn quotient_by(&self, sub: &Subspace) -> QuotientMap {
        assert!(self.contains_space(sub), "quotient by a non-subspace");
        let mut basis = sub.basis_vectors();
        let mut complement = Vec::new();
        for v in self.basis_vectors() {
            let trial = Subspace::span(self.ambient, basis.iter().cloned().chain([v.clone()]));
            if trial.dim() > basis.len() {
                basis.push(v.clone());
                complement.push(v);
            }
        }
        QuotientMap { sub_dim: sub.dim(), basis, complement }
    }
}

/// Linear coordinates on `V / W` for a pair `W <= V`.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    sub_dim: usize,
    basis: Vec<Vec<Rational>>,
    complement: Vec<Vec<Rational>>,
}

impl QuotientMap {
    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    /// Coordinates of `v` modulo the subspace; `None` if `v` lies outside `V`.
    pub fn project(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        let c = solve_combination(&self.basis, v)?;
        Some(c[self.sub_dim..].to_vec())
    }

    /// A representative in `V` of quotient coordinates.
    pub fn lift(&self, coords: &[Rational]) -> Vec<Rational> {
        let n = self.basis.first().map_or(0, Vec::len);
        let mut v = zero_vec(n);
        for (c, b) in coords.iter().zip(&self.complement) {
            axpy(&mut v, c, b);
        }
        v
    }

    pub fn complement(&self) -> &[Vec<Rational>] {
        &self.complement
    }
}

/// Smallest subspace containing `seed` and invariant under every operator.
pub fn invariant_closure(ambient: usize, seed: Vec<Vec<Rational>>, ops: &[Matrix]) -> Subspace {
    let mut space = Subspace::span(ambient, seed);
    loop {
        let mut vecs = space.basis_vectors();
        for op in ops {
            for b in space.basis_vectors() {
                vecs.push(op.apply(&b));
            }
        }
        let next = Subspace::span(ambient, vecs);
        if next.dim() == space.dim() {
            return space;
        }
        space = next;
    }
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

pub fn abs_height(q: &Rational) -> u64 {
    q.abs().numer().bits() + q.denom().bits()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn rref_identity_and_zero() {
        let (r, k) = rref(&Matrix::identity(3));
        assert_eq!((r, k), (Matrix::identity(3), 3));
        let (r, k) = rref(&Matrix::zeros(2, 2));
        assert_eq!((r, k), (Matrix::zeros(2, 2), 0));
    }

    #[test]
    fn rref_rank_one() {
        let (r, k) = rref(&Matrix::from_i64(&[&[1, 2], &[2, 4]]));
        assert_eq!(k, 1);
        assert_eq!(r, Matrix::from_i64(&[&[1, 2], &[0, 0]]));
        let s = Subspace::span(2, vec![v(&[1, 2]), v(&[2, 4])]);
        assert_eq!(s.basis(), &Matrix::from_i64(&[&[1, 2]]));
    }

    #[test]
    fn sums() {
        let e1 = Subspace::span(3, vec![v(&[1, 0, 0])]);
        let e2 = Subspace::span(3, vec![v(&[0, 1, 0])]);
        let e12 = Subspace::span(3, vec![v(&[1, 0, 0]), v(&[0, 1, 0])]);
        assert_eq!(e1.sum(&e1).unwrap(), e1);
        assert_eq!(e1.sum(&e2).unwrap(), e12);
        let p = Subspace::span(3, vec![v(&[1, 1, 0])]);
        let m = Subspace::span(3, vec![v(&[1, -1, 0])]);
        assert_eq!(p.sum(&m).unwrap(), e12);
    }

    #[test]
    fn intersections() {
        let e1 = Subspace::span(3, vec![v(&[1, 0, 0])]);
        let e2 = Subspace::span(3, vec![v(&[0, 1, 0])]);
        let a = Subspace::span(3, vec![v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = Subspace::span(3, vec![v(&[0, 1, 0]), v(&[0, 0, 1])]);
        assert_eq!(a.intersect(&a).unwrap(), a);
        assert!(e1.intersect(&e2).unwrap().is_zero());
        assert_eq!(a.intersect(&b).unwrap(), e2);
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let a = Subspace::full(2);
        let b = Subspace::full(3);
        assert!(matches!(a.sum(&b), Err(Error::DimensionMismatch { .. })));
        assert!(a.intersect(&b).is_err());
    }

    #[test]
    fn rationals_round_trip_as_strings() {
        let m = Matrix::from_rows(2, vec![vec![frac(1, 2), rat(-3)], vec![frac(-7, 3), rat(0)]]).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, r#"[["1/2","-3"],["-7/3","0"]]"#);
        let back: Matrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn inverse_and_quotient_coordinates() {
        let m = Matrix::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        assert!(Matrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());

        let full = Subspace::full(3);
        let w = Subspace::span(3, vec![v(&[0, 0, 1])]);
        let q = full.quotient_by(&w);
        assert_eq!(q.dim(), 2);
        assert_eq!(q.project(&v(&[0, 0, 5])).unwrap(), v(&[0, 0]));
        let c = q.project(&v(&[1, 2, 3])).unwrap();
        let back = q.lift(&c);
        assert!(w.contains(&sub_vec(&back, &v(&[1, 2, 3]))));
    }
}
