//! Arithmetic in the generalized symmetric group `S(m, n) = C_m ≀ S_n`.
//!
//! An element is a sequence of `n` distinct symbols from `1..=n`, each carrying
//! a sign in `0..m` (the exponent of a primitive `m`-th root of unity). Prefix
//! flips reverse a prefix and increment the signs of the moved entries; prefix
//! flops do the same but decrement.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LabelKind {
    Flip,
    Flop,
}

/// A generator tag: `Flip(i)` increments signs, `Flop(i)` decrements them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeLabel {
    pub kind: LabelKind,
    pub index: usize,
}

impl EdgeLabel {
    pub const fn flip(index: usize) -> Self {
        EdgeLabel {
            kind: LabelKind::Flip,
            index,
        }
    }

    pub const fn flop(index: usize) -> Self {
        EdgeLabel {
            kind: LabelKind::Flop,
            index,
        }
    }

    /// The label that undoes this one.
    pub fn inverse(self) -> Self {
        let kind = match self.kind {
            LabelKind::Flip => LabelKind::Flop,
            LabelKind::Flop => LabelKind::Flip,
        };
        EdgeLabel {
            kind,
            index: self.index,
        }
    }

    pub fn is_flip(self) -> bool {
        self.kind == LabelKind::Flip
    }

    /// Name used as a DOT edge attribute: `r2` for a flip, `rb2` for a flop.
    pub fn dot_name(self) -> String {
        match self.kind {
            LabelKind::Flip => format!("r{}", self.index),
            LabelKind::Flop => format!("rb{}", self.index),
        }
    }
}

/// Witness-file token: `f<i>` for a flip, `b<i>` for a flop.
impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            LabelKind::Flip => write!(f, "f{}", self.index),
            LabelKind::Flop => write!(f, "b{}", self.index),
        }
    }
}

impl FromStr for EdgeLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, rest) = if let Some(rest) = s.strip_prefix('f') {
            (LabelKind::Flip, rest)
        } else if let Some(rest) = s.strip_prefix('b') {
            (LabelKind::Flop, rest)
        } else {
            return Err(Error::Parse(format!(
                "bad label {s:?}: expected f<i> or b<i>"
            )));
        };
        let index: usize = rest
            .parse()
            .map_err(|_| Error::Parse(format!("bad label index in {s:?}")))?;
        if index == 0 {
            return Err(Error::Parse(format!(
                "label index must be positive in {s:?}"
            )));
        }
        Ok(EdgeLabel { kind, index })
    }
}

impl Serialize for EdgeLabel {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EdgeLabel {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An element of `S(m, n)`.
///
/// Symbols are stored 1-based, exactly as written in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenPerm {
    m: u32,
    symbols: Vec<u32>,
    signs: Vec<u32>,
}

impl GenPerm {
    /// Builds an element, validating that `symbols` is a permutation of
    /// `1..=n` and every sign lies in `0..m`.
    pub fn new(m: u32, symbols: Vec<u32>, signs: Vec<u32>) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroModulus);
        }
        let n = symbols.len();
        if n == 0 {
            return Err(Error::ZeroLength);
        }
        if signs.len() != n {
            return Err(Error::InvalidPerm(format!(
                "{} symbols but {} signs",
                n,
                signs.len()
            )));
        }
        let mut seen = vec![false; n];
        for &s in &symbols {
            if s == 0 || s as usize > n {
                return Err(Error::InvalidPerm(format!("symbol {s} outside [1, {n}]")));
            }
            if std::mem::replace(&mut seen[s as usize - 1], true) {
                return Err(Error::InvalidPerm(format!("duplicate symbol {s}")));
            }
        }
        if let Some(&j) = signs.iter().find(|&&j| j >= m) {
            return Err(Error::InvalidPerm(format!(
                "sign {j} outside [0, {}]",
                m - 1
            )));
        }
        Ok(GenPerm { m, symbols, signs })
    }

    /// `1^0 2^0 ⋯ n^0`.
    pub fn identity(m: u32, n: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroModulus);
        }
        if n == 0 {
            return Err(Error::ZeroLength);
        }
        Ok(GenPerm {
            m,
            symbols: (1..=n as u32).collect(),
            signs: vec![0; n],
        })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn signs(&self) -> &[u32] {
        &self.signs
    }

    pub fn is_identity(&self) -> bool {
        self.signs.iter().all(|&j| j == 0)
            && self
                .symbols
                .iter()
                .enumerate()
                .all(|(k, &s)| s as usize == k + 1)
    }

    /// The signed symbol at 0-based position `pos`.
    pub fn entry(&self, pos: usize) -> (u32, u32) {
        (self.symbols[pos], self.signs[pos])
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n() {
            Err(Error::IndexOutOfRange {
                index: i,
                n: self.n(),
            })
        } else {
            Ok(())
        }
    }

    fn reverse_prefix(&mut self, i: usize, delta: u32) {
        self.symbols[..i].reverse();
        self.signs[..i].reverse();
        for j in &mut self.signs[..i] {
            *j = (*j + delta) % self.m;
        }
    }

    /// Prefix reversal of length `i`, incrementing the moved signs.
    pub fn flip(&self, i: usize) -> Result<Self> {
        self.check_index(i)?;
        let mut out = self.clone();
        out.reverse_prefix(i, 1);
        Ok(out)
    }

    /// Prefix reversal of length `i`, decrementing the moved signs.
    pub fn flop(&self, i: usize) -> Result<Self> {
        self.check_index(i)?;
        let mut out = self.clone();
        out.reverse_prefix(i, self.m - 1);
        Ok(out)
    }

    pub fn apply(&self, label: EdgeLabel) -> Result<Self> {
        match label.kind {
            LabelKind::Flip => self.flip(label.index),
            LabelKind::Flop => self.flop(label.index),
        }
    }

    /// In-place variant of [`GenPerm::apply`] for hot loops.
    pub fn apply_in_place(&mut self, label: EdgeLabel) -> Result<()> {
        self.check_index(label.index)?;
        let delta = match label.kind {
            LabelKind::Flip => 1,
            LabelKind::Flop => self.m - 1,
        };
        self.reverse_prefix(label.index, delta);
        Ok(())
    }

    /// Applies `word` left to right: the first label acts first.
    pub fn apply_word(&self, word: &[EdgeLabel]) -> Result<Self> {
        let mut out = self.clone();
        for (position, &label) in word.iter().enumerate() {
            out.apply_in_place(label).map_err(|_| Error::WordIndex {
                position,
                label,
                n: self.n(),
            })?;
        }
        Ok(out)
    }

    fn check_shape(&self, other: &GenPerm) -> Result<()> {
        if self.m != other.m || self.n() != other.n() {
            return Err(Error::ShapeMismatch {
                m1: self.m,
                n1: self.n(),
                m2: other.m,
                n2: other.n(),
            });
        }
        Ok(())
    }

    /// Wreath-product composition `a · b`:
    /// `symbols[k] = a.symbols[b.symbols[k]]`,
    /// `signs[k] = a.signs[b.symbols[k]] + b.signs[k] (mod m)`.
    ///
    /// Prefix flips and flops act on positions, so they commute with
    /// multiplication on the left: `flip(g · x, i) = g · flip(x, i)`.
    pub fn multiply(&self, b: &GenPerm) -> Result<Self> {
        self.check_shape(b)?;
        let (symbols, signs) = b
            .symbols
            .iter()
            .zip(&b.signs)
            .map(|(&s, &j)| {
                let k = s as usize - 1;
                (self.symbols[k], (self.signs[k] + j) % self.m)
            })
            .unzip();
        Ok(GenPerm {
            m: self.m,
            symbols,
            signs,
        })
    }

    pub fn inverse(&self) -> Self {
        let n = self.n();
        let mut symbols = vec![0; n];
        let mut signs = vec![0; n];
        for (pos, (&s, &j)) in self.symbols.iter().zip(&self.signs).enumerate() {
            let k = s as usize - 1;
            symbols[k] = pos as u32 + 1;
            signs[k] = (self.m - j) % self.m;
        }
        GenPerm {
            m: self.m,
            symbols,
            signs,
        }
    }

    /// Dense index in `[0, m^n · n!)`: the Lehmer rank of the symbol
    /// permutation times `m^n`, plus the signs read as a base-`m` number.
    pub fn rank(&self) -> u64 {
        let n = self.n();
        let mut perm_rank: u64 = 0;
        for k in 0..n {
            let smaller = self.symbols[k + 1..]
                .iter()
                .filter(|&&s| s < self.symbols[k])
                .count() as u64;
            perm_rank = perm_rank * (n - k) as u64 + smaller;
        }
        let sign_code = self
            .signs
            .iter()
            .fold(0u64, |acc, &j| acc * self.m as u64 + j as u64);
        perm_rank * (self.m as u64).pow(n as u32) + sign_code
    }

    pub fn unrank(m: u32, n: usize, k: u64) -> Result<Self> {
        let count = order(m, n)?;
        if k >= count {
            return Err(Error::RankOutOfRange { rank: k, count });
        }
        let radix = (m as u64).pow(n as u32);
        let mut perm_rank = k / radix;
        let mut sign_code = k % radix;

        let mut signs = vec![0u32; n];
        for j in signs.iter_mut().rev() {
            *j = (sign_code % m as u64) as u32;
            sign_code /= m as u64;
        }

        let mut digits = vec![0usize; n];
        for (k, d) in digits.iter_mut().enumerate().rev() {
            let base = (n - k) as u64;
            *d = (perm_rank % base) as usize;
            perm_rank /= base;
        }
        let mut pool: Vec<u32> = (1..=n as u32).collect();
        let symbols = digits.into_iter().map(|d| pool.remove(d)).collect();
        Ok(GenPerm { m, symbols, signs })
    }

    /// Parses one-line superscript notation such as `"4^2 3^1 1^0 2^1"`.
    pub fn parse(text: &str, m: u32) -> Result<Self> {
        let mut symbols = Vec::new();
        let mut signs = Vec::new();
        for token in text.split_whitespace() {
            let (a, s) = token
                .split_once('^')
                .ok_or_else(|| Error::Parse(format!("token {token:?} is not of the form a^s")))?;
            let a: u32 = a
                .parse()
                .map_err(|_| Error::Parse(format!("bad symbol in {token:?}")))?;
            let s: u32 = s
                .parse()
                .map_err(|_| Error::Parse(format!("bad sign in {token:?}")))?;
            symbols.push(a);
            signs.push(s);
        }
        if symbols.is_empty() {
            return Err(Error::Parse("empty permutation".into()));
        }
        GenPerm::new(m, symbols, signs).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl fmt::Display for GenPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (s, j)) in self.symbols.iter().zip(&self.signs).enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}^{j}")?;
        }
        Ok(())
    }
}

/// `m^n · n!`, the order of `S(m, n)`, or an error on overflow.
pub fn order(m: u32, n: usize) -> Result<u64> {
    order_u128(m, n)
        .and_then(|v| u64::try_from(v).ok())
        .ok_or(Error::TooManyVertices {
            count: u128::MAX,
            cap: u64::MAX,
        })
}

pub(crate) fn order_u128(m: u32, n: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for k in 1..=n as u128 {
        acc = acc.checked_mul(k)?.checked_mul(m as u128)?;
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, m: u32) -> GenPerm {
        GenPerm::parse(s, m).unwrap()
    }

    #[test]
    fn identity_examples() {
        assert_eq!(GenPerm::identity(3, 2).unwrap().to_string(), "1^0 2^0");
        assert_eq!(GenPerm::identity(1, 1).unwrap().to_string(), "1^0");
        assert_eq!(GenPerm::identity(4, 3).unwrap().to_string(), "1^0 2^0 3^0");
        assert_eq!(GenPerm::identity(0, 2), Err(Error::ZeroModulus));
        assert_eq!(GenPerm::identity(2, 0), Err(Error::ZeroLength));
    }

    #[test]
    fn flip_examples() {
        assert_eq!(
            p("2^0 1^2 4^1 3^2", 3).flip(2).unwrap(),
            p("1^0 2^1 4^1 3^2", 3)
        );
        assert_eq!(p("1^0 2^0", 3).flip(1).unwrap(), p("1^1 2^0", 3));
        assert_eq!(p("1^0 2^0", 3).flip(2).unwrap(), p("2^1 1^1", 3));
        assert!(matches!(
            p("1^0 2^0", 3).flip(3),
            Err(Error::IndexOutOfRange { index: 3, n: 2 })
        ));
        assert!(p("1^0 2^0", 3).flip(0).is_err());
    }

    #[test]
    fn flop_examples() {
        assert_eq!(
            p("1^0 2^1 4^1 3^2", 3).flop(2).unwrap(),
            p("2^0 1^2 4^1 3^2", 3)
        );
        assert_eq!(p("1^0 2^0", 7).flop(1).unwrap(), p("1^6 2^0", 7));
        assert!(p("1^0 2^0", 7).flop(5).is_err());
    }

    #[test]
    fn six_cycle_word_returns_to_identity() {
        let e = GenPerm::identity(7, 2).unwrap();
        let word = [
            EdgeLabel::flop(1),
            EdgeLabel::flop(2),
            EdgeLabel::flop(2),
            EdgeLabel::flip(1),
            EdgeLabel::flip(2),
            EdgeLabel::flip(2),
        ];
        assert_eq!(e.apply_word(&word).unwrap(), e);
        assert_eq!(e.apply_word(&[]).unwrap(), e);
    }

    #[test]
    fn base_cycle_prefix_powers() {
        let (m, n) = (3u32, 3usize);
        let e = GenPerm::identity(m, n).unwrap();
        // Composition order: the flop acts first.
        let pair = [EdgeLabel::flop(n), EdgeLabel::flip(n - 1)];
        let mut cur = e.clone();
        for i in 1..=n {
            cur = cur.apply_word(&pair).unwrap();
            let mut symbols: Vec<u32> = ((i + 1)..=n).map(|s| s as u32).collect();
            symbols.extend((1..=i).map(|s| s as u32));
            let signs: Vec<u32> = (0..n).map(|k| if k < n - i { 0 } else { m - 1 }).collect();
            assert_eq!(cur, GenPerm::new(m, symbols, signs).unwrap(), "i = {i}");
        }
    }

    #[test]
    fn word_error_reports_position() {
        let e = GenPerm::identity(3, 2).unwrap();
        let err = e
            .apply_word(&[EdgeLabel::flip(1), EdgeLabel::flop(4)])
            .unwrap_err();
        assert_eq!(
            err,
            Error::WordIndex {
                position: 1,
                label: EdgeLabel::flop(4),
                n: 2
            }
        );
    }

    #[test]
    fn multiply_examples() {
        let a = p("2^1 1^1", 3);
        let b = p("2^0 1^2", 3);
        assert_eq!(a.multiply(&b).unwrap(), p("1^1 2^0", 3));
        let e = GenPerm::identity(3, 2).unwrap();
        assert_eq!(e.multiply(&a).unwrap(), a);
        assert_eq!(a.multiply(&a.inverse()).unwrap(), e);
        assert!(a.multiply(&GenPerm::identity(4, 2).unwrap()).is_err());
        assert!(a.multiply(&GenPerm::identity(3, 3).unwrap()).is_err());
    }

    #[test]
    fn inverse_examples() {
        let e = GenPerm::identity(3, 2).unwrap();
        assert_eq!(e.inverse(), e);
        assert_eq!(p("2^1 1^1", 3).inverse(), p("2^2 1^2", 3));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(GenPerm::identity(3, 2).unwrap().rank(), 0);
        let all: std::collections::HashSet<_> =
            (0..18).map(|k| GenPerm::unrank(3, 2, k).unwrap()).collect();
        assert_eq!(all.len(), 18);
        assert_eq!(GenPerm::unrank(4, 2, 31).unwrap().rank(), 31);
        assert!(matches!(
            GenPerm::unrank(3, 2, 18),
            Err(Error::RankOutOfRange {
                rank: 18,
                count: 18
            })
        ));
    }

    #[test]
    fn parse_and_format() {
        let q = p("4^2 3^1 1^0 2^1", 3);
        assert_eq!(q.symbols(), &[4, 3, 1, 2]);
        assert_eq!(q.signs(), &[2, 1, 0, 1]);
        assert_eq!(q.to_string(), "4^2 3^1 1^0 2^1");
        assert!(GenPerm::parse("1^0 1^1", 3).is_err());
        assert!(GenPerm::parse("1^3 2^0", 3).is_err());
        assert!(GenPerm::parse("1^0 2", 3).is_err());
        assert!(GenPerm::parse("1^0 3^0", 3).is_err());
        assert!(GenPerm::parse("x^0", 3).is_err());
        assert!(GenPerm::parse("", 3).is_err());
    }

    #[test]
    fn label_tokens() {
        assert_eq!(EdgeLabel::flip(2).to_string(), "f2");
        assert_eq!(EdgeLabel::flop(10).to_string(), "b10");
        assert_eq!("b3".parse::<EdgeLabel>().unwrap(), EdgeLabel::flop(3));
        assert!("r3".parse::<EdgeLabel>().is_err());
        assert!("f0".parse::<EdgeLabel>().is_err());
        assert_eq!(EdgeLabel::flop(2).dot_name(), "rb2");
    }

    #[test]
    fn small_moduli_make_flip_and_flop_agree() {
        for m in 1..=2 {
            for k in 0..order(m, 3).unwrap() {
                let x = GenPerm::unrank(m, 3, k).unwrap();
                for i in 1..=3 {
                    assert_eq!(x.flip(i).unwrap(), x.flop(i).unwrap());
                }
            }
        }
    }
}
