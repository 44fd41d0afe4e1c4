//! Dynkin's form of the Baker–Campbell–Hausdorff series.
//!
//! `log(e^X e^Y) = sum_n (-1)^{n-1}/n sum [X^{r1} Y^{s1} ... X^{rn} Y^{sn}]
//!   / ((sum r_i + s_i) prod r_i! s_i!)` where `[w]` is the right-nested bracket
//! of the word `w` and each `(r_i, s_i) != (0, 0)`. Collecting by word gives one
//! rational coefficient per word in `{X, Y}^m`.

use std::sync::OnceLock;

use num::{BigInt, One, Zero};

use super::{LieAlgebra, CLASS_CAP};
use crate::exact::{axpy, is_zero_vec, Rational};

/// Word over `{X, Y}` of length `m`, bit `i` set when letter `i` is `Y`.
type Word = u32;

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Coefficient of each word of length `m`, indexed by [`Word`].
fn coefficients_for_length(m: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); 1 << m];
    if m == 0 {
        return out;
    }
    for (w, slot) in out.iter_mut().enumerate() {
        let letters: Vec<bool> = (0..m).map(|i| w >> i & 1 == 1).collect();
        // right-nested brackets ending in a repeated letter vanish
        if m >= 2 && letters[m - 1] == letters[m - 2] {
            continue;
        }
        let mut total = Rational::zero();
        decompose(&letters, 0, &mut Vec::new(), &mut total);
        *slot = total / Rational::from_integer(BigInt::from(m));
    }
    out
}

/// Sums `(-1)^{n-1}/n / prod r_i! s_i!` over ways of cutting `letters[pos..]`
/// into blocks `X^r Y^s`.
fn decompose(letters: &[bool], pos: usize, blocks: &mut Vec<(usize, usize)>, total: &mut Rational) {
    if pos == letters.len() {
        let n = blocks.len();
        let denom = blocks.iter().fold(BigInt::from(n), |acc, &(r, s)| acc * factorial(r) * factorial(s));
        let sign = if n % 2 == 1 { BigInt::one() } else { -BigInt::one() };
        *total += Rational::new(sign, denom);
        return;
    }
    let xs = letters[pos..].iter().take_while(|&&y| !y).count();
    for r in 0..=xs {
        let after_x = pos + r;
        let ys = if r == xs { letters[after_x..].iter().take_while(|&&y| y).count() } else { 0 };
        for s in 0..=ys {
            if r + s == 0 {
                continue;
            }
            blocks.push((r, s));
            decompose(letters, after_x + s, blocks, total);
            blocks.pop();
        }
    }
}

fn table() -> &'static Vec<Vec<Rational>> {
    static TABLE: OnceLock<Vec<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| (0..=CLASS_CAP).map(coefficients_for_length).collect())
}

/// Dynkin coefficients of all words of length `m <= CLASS_CAP`, as
/// `(word, coefficient)` with the word written over `{'X', 'Y'}`. Zero
/// coefficients are omitted.
pub fn dynkin_coefficients(m: usize) -> Vec<(String, Rational)> {
    assert!(m <= CLASS_CAP);
    table()[m]
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(w, c)| ((0..m).map(|i| if w >> i & 1 == 1 { 'Y' } else { 'X' }).collect(), c.clone()))
        .collect()
}

/// `log(exp u exp v)`.
pub(super) fn bch(alg: &LieAlgebra, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
    let mut out: Vec<Rational> = u.iter().zip(v).map(|(a, b)| a + b).collect();
    if alg.class() < 2 || is_zero_vec(u) || is_zero_vec(v) {
        return out;
    }
    let letters = [u, v];
    // Walk words from their last letter: the node for suffix `w` holds the
    // nested bracket of `w`; prepending letter `a` brackets `a` on the left.
    let mut stack: Vec<(usize, Word, Vec<Rational>)> =
        vec![(1, 0, u.to_vec()), (1, 1, v.to_vec())];
    while let Some((len, word, value)) = stack.pop() {
        if len >= 2 {
            axpy(&mut out, &table()[len][word as usize], &value);
        }
        if len == alg.class() {
            continue;
        }
        for (bit, letter) in letters.iter().enumerate() {
            let next = alg.bracket(letter, &value);
            if !is_zero_vec(&next) {
                // the new letter is at position 0; shift the suffix right
                stack.push((len + 1, (word << 1) | bit as Word, next));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::exact::{frac, rat};

    /// Free nilpotent algebra of rank 2 and class 3 on `X, Y, Z = [X,Y],
    /// A = [X,Z], B = [Y,Z]`.
    fn free_rank_two_class_three() -> LieAlgebra {
        let e = |i: usize| crate::exact::unit_vec(5, i);
        let b = BTreeMap::from([((0, 1), e(2)), ((0, 2), e(3)), ((1, 2), e(4))]);
        LieAlgebra::from_brackets(5, &b).unwrap()
    }

    #[test]
    fn degree_three_terms() {
        let alg = free_rank_two_class_three();
        let x = crate::exact::unit_vec(5, 0);
        let y = crate::exact::unit_vec(5, 1);
        // X + Y + 1/2 [X,Y] + 1/12 [X,[X,Y]] - 1/12 [Y,[X,Y]]
        assert_eq!(alg.mul(&x, &y), vec![rat(1), rat(1), frac(1, 2), frac(1, 12), frac(-1, 12)]);
    }

    #[test]
    fn coefficient_table_shape() {
        assert_eq!(dynkin_coefficients(1), vec![("X".to_string(), rat(1)), ("Y".to_string(), rat(1))]);
        // only words ending in distinct letters survive
        for m in 2..=CLASS_CAP {
            for (w, _) in dynkin_coefficients(m) {
                let tail: Vec<char> = w.chars().rev().take(2).collect();
                assert_ne!(tail[0], tail[1], "{w}");
            }
        }
        let two: BTreeMap<String, Rational> = dynkin_coefficients(2).into_iter().collect();
        // 1/2 [X,Y] arises as c(XY) [X,Y] + c(YX) [Y,X]
        assert_eq!(&two["XY"] - &two["YX"], frac(1, 2));
    }
}
