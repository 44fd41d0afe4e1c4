//! Abelian groups with dcc built from `Q`, `Z/p^k` and Prüfer groups.
//!
//! Subgroups are blockwise ("rectangular"). Every characteristic subgroup used
//! here (power images, divisible part, bounded complement, kernels of
//! multiplication, primary parts) has this shape.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::integer::{lcm, Integer};
use num::{BigInt, One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, Rational};

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// `p`-adic valuation of `n > 0`.
pub fn valuation(p: u64, mut n: u64) -> u32 {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn inverse_mod(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    assert!(e.gcd.is_one(), "not invertible");
    e.x.mod_floor(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Block {
    RationalLine,
    Cyclic { p: u64, k: u32 },
    Pruefer { p: u64 },
}

impl Block {
    pub fn prime(&self) -> Option<u64> {
        match *self {
            Block::RationalLine => None,
            Block::Cyclic { p, .. } | Block::Pruefer { p } => Some(p),
        }
    }

    pub fn modulus(&self) -> Option<u64> {
        match *self {
            Block::Cyclic { p, k } => Some(p.pow(k)),
            _ => None,
        }
    }

    /// Reduces a raw coordinate into the block.
    fn normalize(&self, c: &Rational) -> Rational {
        match *self {
            Block::RationalLine => c.clone(),
            Block::Cyclic { p, k } => {
                assert!(c.is_integer(), "cyclic coordinate must be an integer");
                let m = BigInt::from(p.pow(k));
                Rational::from_integer(c.numer().mod_floor(&m))
            }
            Block::Pruefer { .. } => c - c.floor(),
        }
    }

    fn check_coord(&self, c: &Rational) -> Result<()> {
        let ok = match *self {
            Block::RationalLine => true,
            Block::Cyclic { .. } => c.is_integer(),
            Block::Pruefer { p } => {
                let mut d = c.denom().clone();
                let bp = BigInt::from(p);
                while (&d % &bp).is_zero() {
                    d /= &bp;
                }
                d.is_one()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Parse(format!("coordinate {} does not belong to block {self}", format_rational(c))))
        }
    }

    /// Additive order of a normalized coordinate; `None` when infinite.
    fn order_of(&self, c: &Rational) -> Option<u64> {
        match *self {
            Block::RationalLine => c.is_zero().then_some(1),
            Block::Cyclic { p, k } => {
                let m = p.pow(k);
                let r = c.numer().to_u64().expect("residue fits");
                Some(m / m.gcd(&r))
            }
            Block::Pruefer { .. } => Some(c.denom().to_u64().expect("small denominator")),
        }
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Block::RationalLine => write!(f, "Q"),
            Block::Cyclic { p, k } => write!(f, "Z/{}", p.pow(k)),
            Block::Pruefer { p } => write!(f, "Pruefer({p})"),
        }
    }
}

impl FromStr for Block {
    type Err = Error;
    fn from_str(s: &str) -> Result<Block> {
        let s = s.trim();
        let bad = |why: &str| Error::Parse(format!("block `{s}`: {why}"));
        if s == "Q" {
            return Ok(Block::RationalLine);
        }
        if let Some(n) = s.strip_prefix("Z/") {
            let n: u64 = n.parse().map_err(|_| bad("expected Z/<n>"))?;
            let ps = prime_divisors(n);
            if ps.len() != 1 {
                return Err(bad("modulus must be a prime power greater than 1"));
            }
            return Ok(Block::Cyclic { p: ps[0], k: valuation(ps[0], n) });
        }
        if let Some(rest) = s.strip_prefix("Pruefer(").and_then(|r| r.strip_suffix(')')) {
            let p: u64 = rest.parse().map_err(|_| bad("expected Pruefer(<p>)"))?;
            if !is_prime(p) {
                return Err(bad("not a prime"));
            }
            return Ok(Block::Pruefer { p });
        }
        Err(bad("unknown block kind"))
    }
}

impl TryFrom<String> for Block {
    type Error = Error;
    fn try_from(s: String) -> Result<Block> {
        s.parse()
    }
}

impl From<Block> for String {
    fn from(b: Block) -> String {
        b.to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroup {
    blocks: Vec<Block>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianElement {
    coords: Vec<Rational>,
}

impl AbelianElement {
    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(format_rational).collect()
    }
}

/// The part of a subgroup lying in one block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockSubgroup {
    /// `Q` block: zero or everything.
    Line(bool),
    /// `p^j (Z/p^k)` with `0 <= j <= k`.
    Multiples(u32),
    /// Prüfer block: `None` is the whole group, `Some(j)` the layer of order `p^j`.
    Layer(Option<u32>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianSubgroup {
    parts: Vec<BlockSubgroup>,
}

impl AbelianSubgroup {
    pub fn parts(&self) -> &[BlockSubgroup] {
        &self.parts
    }
}

fn block_trivial(b: &Block) -> BlockSubgroup {
    match *b {
        Block::RationalLine => BlockSubgroup::Line(false),
        Block::Cyclic { k, .. } => BlockSubgroup::Multiples(k),
        Block::Pruefer { .. } => BlockSubgroup::Layer(Some(0)),
    }
}

fn block_full(b: &Block) -> BlockSubgroup {
    match *b {
        Block::RationalLine => BlockSubgroup::Line(true),
        Block::Cyclic { .. } => BlockSubgroup::Multiples(0),
        Block::Pruefer { .. } => BlockSubgroup::Layer(None),
    }
}

/// Size of a block subgroup as `Some(order)`, `None` when infinite.
fn block_sub_order(b: &Block, s: &BlockSubgroup) -> Option<u64> {
    match (*b, *s) {
        (_, BlockSubgroup::Line(false)) => Some(1),
        (_, BlockSubgroup::Line(true)) | (_, BlockSubgroup::Layer(None)) => None,
        (Block::Cyclic { p, k }, BlockSubgroup::Multiples(j)) => Some(p.pow(k - j)),
        (Block::Pruefer { p }, BlockSubgroup::Layer(Some(j))) => Some(p.pow(j)),
        _ => unreachable!("block subgroup of the wrong kind"),
    }
}

/// Lattice order on block subgroups of the same block: `a <= b`.
fn block_le(a: &BlockSubgroup, b: &BlockSubgroup) -> bool {
    match (*a, *b) {
        (BlockSubgroup::Line(x), BlockSubgroup::Line(y)) => !x || y,
        (BlockSubgroup::Multiples(i), BlockSubgroup::Multiples(j)) => i >= j,
        (BlockSubgroup::Layer(_), BlockSubgroup::Layer(None)) => true,
        (BlockSubgroup::Layer(None), BlockSubgroup::Layer(Some(_))) => false,
        (BlockSubgroup::Layer(Some(i)), BlockSubgroup::Layer(Some(j))) => i <= j,
        _ => unreachable!("block subgroup of the wrong kind"),
    }
}

fn block_meet(a: &BlockSubgroup, b: &BlockSubgroup) -> BlockSubgroup {
    if block_le(a, b) {
        *a
    } else {
        *b
    }
}

fn block_join(a: &BlockSubgroup, b: &BlockSubgroup) -> BlockSubgroup {
    if block_le(a, b) {
        *b
    } else {
        *a
    }
}

impl AbelianGroup {
    pub fn new(blocks: Vec<Block>) -> Result<Self> {
        for b in &blocks {
            match *b {
                Block::Cyclic { p, k } if !is_prime(p) || k == 0 => {
                    return Err(Error::Invalid(format!("bad cyclic block p={p} k={k}")))
                }
                Block::Pruefer { p } if !is_prime(p) => {
                    return Err(Error::Invalid(format!("bad Pruefer block p={p}")))
                }
                _ => {}
            }
        }
        Ok(AbelianGroup { blocks })
    }

    pub fn parse(blocks: &[&str]) -> Result<Self> {
        Self::new(blocks.iter().map(|s| s.parse()).collect::<Result<_>>()?)
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn zero(&self) -> AbelianElement {
        AbelianElement { coords: vec![Rational::zero(); self.blocks.len()] }
    }

    pub fn element(&self, coords: Vec<Rational>) -> Result<AbelianElement> {
        if coords.len() != self.blocks.len() {
            return Err(Error::DimensionMismatch { expected: self.blocks.len(), found: coords.len() });
        }
        for (b, c) in self.blocks.iter().zip(&coords) {
            b.check_coord(c)?;
        }
        let coords = self.blocks.iter().zip(&coords).map(|(b, c)| b.normalize(c)).collect();
        Ok(AbelianElement { coords })
    }

    pub fn parse_element(&self, coords: &[&str]) -> Result<AbelianElement> {
        self.element(coords.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?)
    }

    pub fn add(&self, x: &AbelianElement, y: &AbelianElement) -> AbelianElement {
        let coords = self
            .blocks
            .iter()
            .zip(x.coords.iter().zip(&y.coords))
            .map(|(b, (a, c))| b.normalize(&(a + c)))
            .collect();
        AbelianElement { coords }
    }

    pub fn neg(&self, x: &AbelianElement) -> AbelianElement {
        let coords = self.blocks.iter().zip(&x.coords).map(|(b, a)| b.normalize(&-a)).collect();
        AbelianElement { coords }
    }

    pub fn sub(&self, x: &AbelianElement, y: &AbelianElement) -> AbelianElement {
        self.add(x, &self.neg(y))
    }

    pub fn times(&self, n: i64, x: &AbelianElement) -> AbelianElement {
        let n = Rational::from_integer(BigInt::from(n));
        let coords = self.blocks.iter().zip(&x.coords).map(|(b, a)| b.normalize(&(&n * a))).collect();
        AbelianElement { coords }
    }

    /// Additive order; `None` when infinite.
    pub fn order(&self, x: &AbelianElement) -> Option<u64> {
        self.blocks
            .iter()
            .zip(&x.coords)
            .try_fold(1u64, |acc, (b, c)| b.order_of(c).map(|o| lcm(acc, o)))
    }

    pub fn whole(&self) -> AbelianSubgroup {
        AbelianSubgroup { parts: self.blocks.iter().map(block_full).collect() }
    }

    pub fn trivial(&self) -> AbelianSubgroup {
        AbelianSubgroup { parts: self.blocks.iter().map(block_trivial).collect() }
    }

    pub fn subgroup(&self, parts: Vec<BlockSubgroup>) -> Result<AbelianSubgroup> {
        if parts.len() != self.blocks.len() {
            return Err(Error::DimensionMismatch { expected: self.blocks.len(), found: parts.len() });
        }
        for (b, s) in self.blocks.iter().zip(&parts) {
            let ok = match (*b, *s) {
                (Block::RationalLine, BlockSubgroup::Line(_)) => true,
                (Block::Cyclic { k, .. }, BlockSubgroup::Multiples(j)) => j <= k,
                (Block::Pruefer { .. }, BlockSubgroup::Layer(_)) => true,
                _ => false,
            };
            if !ok {
                return Err(Error::Invalid(format!("subgroup part {s:?} does not fit block {b}")));
            }
        }
        Ok(AbelianSubgroup { parts })
    }

    pub fn contains(&self, h: &AbelianSubgroup, x: &AbelianElement) -> bool {
        self.blocks.iter().zip(&h.parts).zip(&x.coords).all(|((b, s), c)| match (*b, *s) {
            (_, BlockSubgroup::Line(full)) => full || c.is_zero(),
            (Block::Cyclic { p, .. }, BlockSubgroup::Multiples(j)) => {
                (c.numer() % BigInt::from(p.pow(j))).is_zero()
            }
            (_, BlockSubgroup::Layer(None)) => true,
            (Block::Pruefer { p }, BlockSubgroup::Layer(Some(j))) => {
                (BigInt::from(p.pow(j)) % c.denom()).is_zero()
            }
            _ => unreachable!(),
        })
    }

    pub fn is_subgroup_of(&self, a: &AbelianSubgroup, b: &AbelianSubgroup) -> bool {
        a.parts.iter().zip(&b.parts).all(|(x, y)| block_le(x, y))
    }

    pub fn intersect(&self, a: &AbelianSubgroup, b: &AbelianSubgroup) -> AbelianSubgroup {
        AbelianSubgroup { parts: a.parts.iter().zip(&b.parts).map(|(x, y)| block_meet(x, y)).collect() }
    }

    pub fn sum(&self, a: &AbelianSubgroup, b: &AbelianSubgroup) -> AbelianSubgroup {
        AbelianSubgroup { parts: a.parts.iter().zip(&b.parts).map(|(x, y)| block_join(x, y)).collect() }
    }

    /// Order of a subgroup, `None` when infinite.
    pub fn subgroup_order(&self, h: &AbelianSubgroup) -> Option<u64> {
        self.blocks
            .iter()
            .zip(&h.parts)
            .try_fold(1u64, |acc, (b, s)| block_sub_order(b, s).map(|o| acc * o))
    }

    pub fn is_trivial(&self, h: &AbelianSubgroup) -> bool {
        *h == self.trivial()
    }

    /// Internal direct sum: `a + b = whole` and `a ∩ b = 0`.
    pub fn is_direct_decomposition(&self, parts: &[&AbelianSubgroup]) -> bool {
        let mut acc = self.trivial();
        for p in parts {
            if !self.is_trivial(&self.intersect(&acc, p)) {
                return false;
            }
            acc = self.sum(&acc, p);
        }
        acc == self.whole()
    }

    /// `A(n) = { n a : a in A }`.
    pub fn power_subgroup(&self, n: u64) -> AbelianSubgroup {
        assert!(n >= 1);
        let parts = self
            .blocks
            .iter()
            .map(|b| match *b {
                Block::Cyclic { p, k } => BlockSubgroup::Multiples(valuation(p, n).min(k)),
                _ => block_full(b),
            })
            .collect();
        AbelianSubgroup { parts }
    }

    /// The largest divisible subgroup, `∩ A(n!)`.
    pub fn divisible_part(&self) -> AbelianSubgroup {
        let parts = self
            .blocks
            .iter()
            .map(|b| match b {
                Block::Cyclic { .. } => block_trivial(b),
                _ => block_full(b),
            })
            .collect();
        AbelianSubgroup { parts }
    }

    /// Complement of bounded exponent to the divisible part.
    pub fn bounded_complement(&self) -> AbelianSubgroup {
        let parts = self
            .blocks
            .iter()
            .map(|b| match b {
                Block::Cyclic { .. } => block_full(b),
                _ => block_trivial(b),
            })
            .collect();
        let b = AbelianSubgroup { parts };
        debug_assert!(self.is_direct_decomposition(&[&self.divisible_part(), &b]));
        b
    }

    /// Exponent of the bounded complement.
    pub fn bounded_exponent(&self) -> u64 {
        self.blocks.iter().filter_map(Block::modulus).fold(1, lcm)
    }

    /// Kernel of multiplication by `n`.
    pub fn kernel_of_times(&self, n: u64) -> AbelianSubgroup {
        let parts = self
            .blocks
            .iter()
            .map(|b| match *b {
                Block::RationalLine => BlockSubgroup::Line(false),
                Block::Cyclic { p, k } => BlockSubgroup::Multiples(k - valuation(p, n).min(k)),
                Block::Pruefer { p } => BlockSubgroup::Layer(Some(valuation(p, n))),
            })
            .collect();
        AbelianSubgroup { parts }
    }

    pub fn characteristic_decomposition(&self) -> CharacteristicDecomposition {
        let d = self.divisible_part();
        let c = self.kernel_of_times(self.bounded_exponent());
        let finite_overlap = self.subgroup_order(&self.intersect(&d, &c)).is_some();
        CharacteristicDecomposition { divisible: d, bounded_kernel: c, finite_overlap }
    }

    pub fn torsion_subgroup(&self) -> AbelianSubgroup {
        let parts = self
            .blocks
            .iter()
            .map(|b| match b {
                Block::RationalLine => block_trivial(b),
                _ => block_full(b),
            })
            .collect();
        AbelianSubgroup { parts }
    }

    pub fn primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self.blocks.iter().filter_map(Block::prime).collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }

    /// Sylow decomposition of the torsion subgroup.
    pub fn p_primary_decomposition(&self) -> BTreeMap<u64, AbelianSubgroup> {
        self.primes()
            .into_iter()
            .map(|p| {
                let parts = self
                    .blocks
                    .iter()
                    .map(|b| if b.prime() == Some(p) { block_full(b) } else { block_trivial(b) })
                    .collect();
                (p, AbelianSubgroup { parts })
            })
            .collect()
    }

    /// Order of `x + N` in `A / N`, `None` when infinite.
    pub fn order_modulo(&self, h: &AbelianSubgroup, x: &AbelianElement) -> Option<u64> {
        self.blocks.iter().zip(&h.parts).zip(&x.coords).try_fold(1u64, |acc, ((b, s), c)| {
            let o = match (*b, *s) {
                (_, BlockSubgroup::Line(true)) | (_, BlockSubgroup::Layer(None)) => 1,
                (_, BlockSubgroup::Line(false)) => {
                    if c.is_zero() {
                        1
                    } else {
                        return None;
                    }
                }
                (Block::Cyclic { p, .. }, BlockSubgroup::Multiples(j)) => {
                    let m = p.pow(j);
                    let r = (c.numer() % BigInt::from(m)).to_u64().expect("small residue");
                    m / m.gcd(&r)
                }
                (Block::Pruefer { p }, BlockSubgroup::Layer(Some(j))) => {
                    let den = c.denom().to_u64().expect("small denominator");
                    let layer = p.pow(j);
                    if den <= layer {
                        1
                    } else {
                        den / layer
                    }
                }
                _ => unreachable!(),
            };
            Some(lcm(acc, o))
        })
    }

    /// Given `n x in N`, an element of `x + N` of finite order whose prime
    /// divisors all divide `n`.
    ///
    /// `N` splits as `N_div + N_n`, where multiplication by `n` is onto on
    /// `N_div` and `N_n` is a finite group whose order involves only primes of
    /// `n`. Writing `n x = d' + b` accordingly and `d' = n d` with `d in N_div`,
    /// the element `x - d` satisfies `n (x - d) = b`.
    pub fn lift_torsion(&self, h: &AbelianSubgroup, x: &AbelianElement, n: u64) -> Result<AbelianElement> {
        assert!(n >= 1);
        let nx = self.times(n as i64, x);
        if !self.contains(h, &nx) {
            return Err(Error::Precondition(format!("{n}·x is not in N")));
        }
        if self.contains(h, x) {
            return Ok(self.zero());
        }
        let n_big = BigInt::from(n);
        let mut d = Vec::with_capacity(self.blocks.len());
        for ((b, s), z) in self.blocks.iter().zip(&h.parts).zip(&nx.coords) {
            let part = match (*b, *s) {
                (_, BlockSubgroup::Line(false)) => Rational::zero(),
                (Block::RationalLine, BlockSubgroup::Line(true)) => z / Rational::from_integer(n_big.clone()),
                (Block::Cyclic { p, k }, BlockSubgroup::Multiples(_)) => {
                    if n % p == 0 {
                        Rational::zero()
                    } else {
                        let m = BigInt::from(p.pow(k));
                        let inv = inverse_mod(&n_big, &m);
                        Rational::from_integer((z.numer() * inv).mod_floor(&m))
                    }
                }
                (Block::Pruefer { p }, BlockSubgroup::Layer(None)) => {
                    divide_in_pruefer(p, z, n)
                }
                (Block::Pruefer { p }, BlockSubgroup::Layer(Some(_))) => {
                    if n % p == 0 {
                        Rational::zero()
                    } else {
                        let den = z.denom().clone();
                        let inv = inverse_mod(&n_big.mod_floor(&den), &den);
                        Rational::new(z.numer() * inv, den)
                    }
                }
                _ => unreachable!(),
            };
            d.push(b.normalize(&part));
        }
        let d = AbelianElement { coords: d };
        debug_assert!(self.contains(h, &d));
        Ok(self.sub(x, &d))
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R) -> AbelianElement {
        let coords = self
            .blocks
            .iter()
            .map(|b| match *b {
                Block::RationalLine => {
                    if rng.gen_bool(0.2) {
                        Rational::zero()
                    } else {
                        Rational::new(BigInt::from(rng.gen_range(-9i64..=9)), BigInt::from(rng.gen_range(1i64..=6)))
                    }
                }
                Block::Cyclic { p, k } => Rational::from_integer(BigInt::from(rng.gen_range(0..p.pow(k)))),
                Block::Pruefer { p } => {
                    let den = p.pow(rng.gen_range(0..=3));
                    Rational::new(BigInt::from(rng.gen_range(0..den)), BigInt::from(den))
                }
            })
            .collect();
        AbelianElement { coords }
    }

    pub fn random_subgroup<R: Rng>(&self, rng: &mut R) -> AbelianSubgroup {
        let parts = self
            .blocks
            .iter()
            .map(|b| match *b {
                Block::RationalLine => BlockSubgroup::Line(rng.gen_bool(0.5)),
                Block::Cyclic { k, .. } => BlockSubgroup::Multiples(rng.gen_range(0..=k)),
                Block::Pruefer { .. } => {
                    if rng.gen_bool(0.4) {
                        BlockSubgroup::Layer(None)
                    } else {
                        BlockSubgroup::Layer(Some(rng.gen_range(0..=3)))
                    }
                }
            })
            .collect();
        AbelianSubgroup { parts }
    }
}

/// Some `d` in Prüfer(p) with `n d = z`: for `z = a / p^j` and `n = p^v m`,
/// `d = a m^{-1} / p^{j+v}` with the inverse taken mod `p^{j+v}`.
fn divide_in_pruefer(p: u64, z: &Rational, n: u64) -> Rational {
    if z.is_zero() {
        return Rational::zero();
    }
    let j = valuation(p, z.denom().to_u64().expect("small denominator"));
    let v = valuation(p, n);
    let m = n / p.pow(v);
    let modulus = BigInt::from(p).pow(j + v);
    let inv = inverse_mod(&BigInt::from(m).mod_floor(&modulus), &modulus);
    Rational::new(z.numer() * inv, modulus)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacteristicDecomposition {
    pub divisible: AbelianSubgroup,
    /// `{ a : exp(B) a = 0 }` for the bounded complement `B`.
    pub bounded_kernel: AbelianSubgroup,
    pub finite_overlap: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{frac, rat};

    fn g(blocks: &[&str]) -> AbelianGroup {
        AbelianGroup::parse(blocks).unwrap()
    }

    #[test]
    fn parses_blocks() {
        assert_eq!("Z/8".parse::<Block>().unwrap(), Block::Cyclic { p: 2, k: 3 });
        assert_eq!("Pruefer(3)".parse::<Block>().unwrap(), Block::Pruefer { p: 3 });
        assert!("Z/6".parse::<Block>().is_err());
        assert!("Z/1".parse::<Block>().is_err());
        assert!("Pruefer(4)".parse::<Block>().is_err());
        let json = serde_json::to_string(&g(&["Q", "Z/8", "Pruefer(3)"])).unwrap();
        assert_eq!(json, r#"{"blocks":["Q","Z/8","Pruefer(3)"]}"#);
    }

    #[test]
    fn power_subgroups() {
        assert_eq!(g(&["Q"]).power_subgroup(6), g(&["Q"]).whole());
        let z8 = g(&["Z/8"]);
        assert_eq!(z8.power_subgroup(2).parts(), &[BlockSubgroup::Multiples(1)]);
        assert_eq!(g(&["Pruefer(3)"]).power_subgroup(3), g(&["Pruefer(3)"]).whole());
    }

    #[test]
    fn divisible_parts_and_complements() {
        let a = g(&["Z/4", "Z/9"]);
        assert!(a.is_trivial(&a.divisible_part()));
        assert_eq!(a.bounded_complement(), a.whole());
        let a = g(&["Q", "Z/4"]);
        assert_eq!(a.divisible_part().parts(), &[BlockSubgroup::Line(true), BlockSubgroup::Multiples(2)]);
        assert_eq!(a.bounded_complement().parts(), &[BlockSubgroup::Line(false), BlockSubgroup::Multiples(0)]);
        let a = g(&["Pruefer(2)", "Z/2"]);
        assert_eq!(a.divisible_part().parts(), &[BlockSubgroup::Layer(None), BlockSubgroup::Multiples(1)]);
        let q = g(&["Q"]);
        assert!(q.is_trivial(&q.bounded_complement()));
    }

    #[test]
    fn characteristic_decompositions() {
        let a = g(&["Z/4"]);
        let c = a.characteristic_decomposition();
        assert!(a.is_trivial(&c.divisible));
        assert_eq!(c.bounded_kernel, a.whole());
        let a = g(&["Pruefer(2)", "Z/2"]);
        let c = a.characteristic_decomposition();
        assert_eq!(c.bounded_kernel.parts(), &[BlockSubgroup::Layer(Some(1)), BlockSubgroup::Multiples(0)]);
        let overlap = a.intersect(&c.divisible, &c.bounded_kernel);
        assert_eq!(a.subgroup_order(&overlap), Some(2));
        assert!(c.finite_overlap);
        let q = g(&["Q"]);
        let c = q.characteristic_decomposition();
        assert_eq!(c.divisible, q.whole());
        assert!(q.is_trivial(&c.bounded_kernel));
    }

    #[test]
    fn primary_parts() {
        let a = g(&["Z/2", "Z/3"]);
        let pp = a.p_primary_decomposition();
        assert_eq!(pp.keys().copied().collect::<Vec<_>>(), vec![2, 3]);
        assert_eq!(pp[&2].parts(), &[BlockSubgroup::Multiples(0), BlockSubgroup::Multiples(1)]);
        assert!(g(&["Q"]).p_primary_decomposition().is_empty());
        let a = g(&["Pruefer(2)", "Z/9"]);
        let pp = a.p_primary_decomposition();
        assert_eq!(pp[&2].parts(), &[BlockSubgroup::Layer(None), BlockSubgroup::Multiples(2)]);
        assert_eq!(pp[&3].parts(), &[BlockSubgroup::Layer(Some(0)), BlockSubgroup::Multiples(0)]);
    }

    #[test]
    fn lifts_torsion() {
        let a = g(&["Pruefer(2)", "Z/3"]);
        let n = a.subgroup(vec![BlockSubgroup::Layer(None), BlockSubgroup::Multiples(1)]).unwrap();
        let x = a.element(vec![frac(1, 2), rat(1)]).unwrap();
        let y = a.lift_torsion(&n, &x, 3).unwrap();
        assert_eq!(y, a.element(vec![rat(0), rat(1)]).unwrap());
        assert_eq!(a.order(&y), Some(3));

        let q = g(&["Q"]);
        let x = q.element(vec![frac(1, 2)]).unwrap();
        assert_eq!(q.lift_torsion(&q.whole(), &x, 2).unwrap(), q.zero());

        let x = q.element(vec![rat(1)]).unwrap();
        assert!(q.lift_torsion(&q.trivial(), &x, 2).is_err());
    }

    #[test]
    fn pruefer_division_inverts_multiplication() {
        for (num, den, n) in [(1, 2, 3), (3, 8, 6), (1, 4, 4), (5, 8, 12)] {
            let z = frac(num, den);
            let d = divide_in_pruefer(2, &z, n);
            let back = Block::Pruefer { p: 2 }.normalize(&(&d * rat(n as i64)));
            assert_eq!(back, z, "{num}/{den} by {n}");
        }
    }
}
