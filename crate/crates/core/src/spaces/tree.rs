//! The Cayley tree of a free group: an exact 0-hyperbolic backend.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{LabError, Result};
use crate::group::GroupElement;
use crate::hyp::{Geodesic, HyperbolicSpace, Rational};

/// A freely reduced word. Letter `k > 0` is the `k`-th generator, `-k` its
/// inverse; in text form `a, b, c, ...` are generators and `A, B, C, ...`
/// their inverses. The empty word is the identity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<i8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds a word from arbitrary letters, freely reducing them.
    pub fn from_letters(letters: impl IntoIterator<Item = i8>) -> Result<Self> {
        let mut out: Vec<i8> = Vec::new();
        for l in letters {
            if l == 0 {
                return Err(LabError::rejected("letter 0 is not a generator"));
            }
            push_reduced(&mut out, l);
        }
        Ok(Word(out))
    }

    pub fn letter(l: i8) -> Self {
        assert!(l != 0);
        Word(vec![l])
    }

    pub fn letters(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest generator index used.
    pub fn max_generator(&self) -> u8 {
        self.0.iter().map(|l| l.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn prefix(&self, k: usize) -> Word {
        Word(self.0[..k.min(self.0.len())].to_vec())
    }

    pub fn common_prefix_len(&self, other: &Word) -> usize {
        self.0
            .iter()
            .zip(other.0.iter())
            .take_while(|(a, b)| a == b)
            .count()
    }

    pub fn starts_with(&self, p: &Word) -> bool {
        self.0.starts_with(&p.0)
    }

    /// Splits the word as `u c u⁻¹` with `c` cyclically reduced.
    pub fn cyclic_decomposition(&self) -> (Word, Word) {
        let w = &self.0;
        let mut i = 0;
        let n = w.len();
        while n >= 2 * (i + 1) && w[i] == -w[n - 1 - i] {
            i += 1;
        }
        (Word(w[..i].to_vec()), Word(w[i..n - i].to_vec()))
    }

    /// Translation length on the tree: length of the cyclic reduction.
    pub fn cyclic_length(&self) -> usize {
        self.cyclic_decomposition().1.len()
    }
}

fn push_reduced(out: &mut Vec<i8>, l: i8) {
    if out.last() == Some(&-l) {
        out.pop();
    } else {
        out.push(l);
    }
}

impl GroupElement for Word {
    fn identity() -> Self {
        Word::empty()
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = self.0.clone();
        for &l in &other.0 {
            push_reduced(&mut out, l);
        }
        Word(out)
    }

    fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|l| -l).collect())
    }

    fn mul_assign(&mut self, other: &Self) {
        for &l in &other.0 {
            push_reduced(&mut self.0, l);
        }
    }
}

fn letter_char(l: i8) -> char {
    let base = if l > 0 { b'a' } else { b'A' };
    (base + l.unsigned_abs() - 1) as char
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for &l in &self.0 {
            write!(f, "{}", letter_char(l))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = LabError;

    /// Parses `"aB"`-style text; `""` and `"1"` denote the identity.
    fn from_str(s: &str) -> Result<Self> {
        if s == "1" {
            return Ok(Word::empty());
        }
        let letters = s
            .chars()
            .map(|c| match c {
                'a'..='z' => Ok((c as u8 - b'a' + 1) as i8),
                'A'..='Z' => Ok(-((c as u8 - b'A' + 1) as i8)),
                _ => Err(LabError::rejected(format!("malformed word {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Word::from_letters(letters)
    }
}

/// The Cayley tree of the free group of the given rank, based at the identity.
#[derive(Clone, Debug)]
pub struct FreeTree {
    rank: u8,
}

impl FreeTree {
    pub fn new(rank: u8) -> Result<Self> {
        if !(1..=26).contains(&rank) {
            return Err(LabError::rejected(format!("rank {rank} outside 1..=26")));
        }
        Ok(FreeTree { rank })
    }

    pub fn rank(&self) -> u8 {
        self.rank
    }

    pub fn check(&self, w: &Word) -> Result<()> {
        if w.max_generator() > self.rank {
            return Err(LabError::rejected(format!(
                "word {w} uses a generator beyond rank {}",
                self.rank
            )));
        }
        Ok(())
    }

    /// All letters `±1..=±rank`.
    pub fn alphabet(&self) -> Vec<i8> {
        (1..=self.rank as i8).flat_map(|k| [k, -k]).collect()
    }

    /// All reduced words of length exactly `len`.
    pub fn sphere(&self, len: usize) -> Vec<Word> {
        let mut layer = vec![Word::empty()];
        for _ in 0..len {
            let mut next = Vec::with_capacity(layer.len() * (2 * self.rank as usize - 1));
            for w in &layer {
                for l in self.alphabet() {
                    if w.0.last() != Some(&-l) {
                        let mut v = w.0.clone();
                        v.push(l);
                        next.push(Word(v));
                    }
                }
            }
            layer = next;
        }
        layer
    }

    /// A uniformly random reduced word of the given length.
    pub fn random_word(&self, rng: &mut ChaCha8Rng, len: usize) -> Word {
        let alphabet = self.alphabet();
        let mut v: Vec<i8> = Vec::with_capacity(len);
        while v.len() < len {
            let l = alphabet[rng.gen_range(0..alphabet.len())];
            if v.last() != Some(&-l) {
                v.push(l);
            }
        }
        Word(v)
    }
}

impl HyperbolicSpace for FreeTree {
    type Point = Word;
    type Element = Word;

    fn name(&self) -> &'static str {
        "tree"
    }

    fn delta(&self) -> Rational {
        Rational::from_integer(0)
    }

    fn basepoint(&self) -> Word {
        Word::empty()
    }

    fn distance(&self, a: &Word, b: &Word) -> u64 {
        (a.len() + b.len() - 2 * a.common_prefix_len(b)) as u64
    }

    fn geodesic(&self, a: &Word, b: &Word) -> Result<Geodesic<Word>> {
        let k = a.common_prefix_len(b);
        let mut pts = Vec::with_capacity(a.len() + b.len() - 2 * k + 1);
        for i in (k..=a.len()).rev() {
            pts.push(a.prefix(i));
        }
        for i in k + 1..=b.len() {
            pts.push(b.prefix(i));
        }
        Ok(Geodesic::from_points_unchecked(pts))
    }

    fn act(&self, g: &Word, p: &Word) -> Word {
        g.mul(p)
    }

    fn ball(&self, center: &Word, radius: u64) -> Result<Vec<Word>> {
        if radius > 14 {
            return Err(LabError::rejected(format!(
                "tree ball radius {radius} exceeds enumeration bound 14"
            )));
        }
        let mut out = Vec::new();
        for r in 0..=radius as usize {
            out.extend(self.sphere(r).into_iter().map(|w| center.mul(&w)));
        }
        Ok(out)
    }

    fn random_point(&self, rng: &mut ChaCha8Rng, radius: u64) -> Result<Word> {
        let len = rng.gen_range(0..=radius as usize);
        Ok(self.random_word(rng, len))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn parsing_reduces() {
        assert_eq!(w("abBA"), Word::empty());
        assert_eq!(w("aaA").to_string(), "a");
        assert!("ab1".parse::<Word>().is_err());
    }

    #[test]
    fn distances() {
        let t = FreeTree::new(2).unwrap();
        assert_eq!(t.distance(&w("ab"), &w("ab")), 0);
        assert_eq!(t.distance(&w("ab"), &w("aB")), 2);
        assert_eq!(t.distance(&w(""), &w("abab")), 4);
    }

    #[test]
    fn geodesic_has_unit_steps() {
        let t = FreeTree::new(2).unwrap();
        let g = t.geodesic(&w("aab"), &w("abb")).unwrap();
        let pts: Vec<String> = g.points().iter().map(|p| p.to_string()).collect();
        assert_eq!(pts, ["aab", "aa", "a", "ab", "abb"]);
    }

    #[test]
    fn cyclic_reduction() {
        assert_eq!(w("abAB").cyclic_length(), 4);
        assert_eq!(w("aBA").cyclic_length(), 1);
        let (u, c) = w("abaBA").cyclic_decomposition();
        assert_eq!((u.to_string(), c.to_string()), ("ab".into(), "a".into()));
        assert_eq!(Word::empty().cyclic_length(), 0);
    }

    #[test]
    fn sphere_sizes() {
        let t = FreeTree::new(2).unwrap();
        assert_eq!(t.sphere(0).len(), 1);
        assert_eq!(t.sphere(3).len(), 4 * 9);
        assert_eq!(t.ball(&Word::empty(), 2).unwrap().len(), 1 + 4 + 12);
    }

    #[test]
    fn rank_is_checked() {
        let t = FreeTree::new(2).unwrap();
        assert!(t.check(&w("ac")).is_err());
        assert!(FreeTree::new(0).is_err());
    }
}
