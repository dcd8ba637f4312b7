//! Alphabets, words and cylinders.
//!
//! Symbols are dense integers `0..size`. Text uses one digit per symbol when
//! every symbol is below ten and a comma-separated list otherwise; JSON files
//! may also carry a word as an array of integers.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::de::{self, SeqAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Symbol = u8;

pub const MAX_ALPHABET: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Alphabet(u8);

impl Alphabet {
    pub fn new(size: usize) -> Result<Self> {
        if (1..=MAX_ALPHABET).contains(&size) {
            Ok(Alphabet(size as u8))
        } else {
            Err(Error::InvalidAlphabet(size))
        }
    }

    pub fn size(self) -> usize {
        self.0 as usize
    }

    pub fn symbols(self) -> impl Iterator<Item = Symbol> {
        0..self.0
    }

    pub fn check(self, word: &Word) -> Result<()> {
        match word.0.iter().find(|&&s| s >= self.0) {
            Some(&s) => Err(Error::SymbolOutOfRange {
                symbol: s as usize,
                size: self.size(),
            }),
            None => Ok(()),
        }
    }

    /// Reads a word in this alphabet's textual convention.
    pub fn parse_word(self, text: &str) -> Result<Word> {
        let word = if self.size() <= 10 && !text.contains(',') {
            Word::from_digits(text)?
        } else {
            Word::from_list(text)?
        };
        self.check(&word)?;
        Ok(word)
    }

    /// Every word of length `n`, in lexicographic order.
    pub fn words_of_length(self, n: usize) -> AllWords {
        AllWords {
            size: self.0,
            next: Some(vec![0; n]),
        }
    }
}

impl TryFrom<usize> for Alphabet {
    type Error = Error;

    fn try_from(size: usize) -> Result<Self> {
        Alphabet::new(size)
    }
}

impl From<Alphabet> for usize {
    fn from(a: Alphabet) -> usize {
        a.size()
    }
}

/// Odometer over `A^n`.
#[derive(Debug, Clone)]
pub struct AllWords {
    size: u8,
    next: Option<Vec<Symbol>>,
}

impl Iterator for AllWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if succ[i] + 1 < self.size {
                succ[i] += 1;
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(Word(current))
    }
}

/// A finite sequence of symbols. Ordered shortlex: by length, then
/// lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_digits(text: &str) -> Result<Self> {
        text.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as Symbol)
                    .ok_or_else(|| Error::BadWord(text.to_string()))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn from_list(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Word::empty());
        }
        text.split(',')
            .map(|part| {
                part.trim()
                    .parse::<usize>()
                    .ok()
                    .filter(|&s| s < MAX_ALPHABET)
                    .map(|s| s as Symbol)
                    .ok_or_else(|| Error::BadWord(text.to_string()))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    /// Digit string if every symbol is a single digit, comma list otherwise.
    pub fn parse(text: &str) -> Result<Self> {
        if text.contains(',') {
            Word::from_list(text)
        } else {
            Word::from_digits(text)
        }
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_symbol(&self) -> Option<Symbol> {
        self.0.iter().copied().max()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s);
    }

    pub fn extend_from(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn pow(&self, k: usize) -> Word {
        Word(self.0.repeat(k))
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    pub fn is_factor_of(&self, other: &Word) -> bool {
        self.is_empty() || other.0.windows(self.len()).any(|w| w == self.0.as_slice())
    }

    pub fn occurs_at(&self, other: &Word, offset: usize) -> bool {
        offset + self.len() <= other.len() && other.0[offset..offset + self.len()] == self.0[..]
    }

    /// Start positions of every occurrence of `pattern`.
    pub fn occurrences(&self, pattern: &Word) -> Vec<usize> {
        if pattern.is_empty() || pattern.len() > self.len() {
            return Vec::new();
        }
        self.0
            .windows(pattern.len())
            .enumerate()
            .filter(|(_, w)| *w == pattern.symbols())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn rotate(&self, k: usize) -> Word {
        let mut v = self.0.clone();
        if !v.is_empty() {
            v.rotate_left(k % self.len());
        }
        Word(v)
    }

    /// Least rotation under lexicographic order.
    pub fn min_rotation(&self) -> Word {
        (0..self.len().max(1))
            .map(|k| self.rotate(k))
            .min()
            .unwrap_or_default()
    }

    /// Shortest `r` with `self = r^j`.
    pub fn primitive_root(&self) -> Word {
        let n = self.len();
        for d in 1..=n {
            if n.is_multiple_of(d) && self.0.chunks(d).all(|c| c == &self.0[..d]) {
                return self.slice(0, d);
            }
        }
        self.clone()
    }

    pub fn is_primitive(&self) -> bool {
        !self.is_empty() && self.primitive_root().len() == self.len()
    }

    /// Primitive and strictly smaller than each of its proper rotations.
    pub fn is_lyndon(&self) -> bool {
        self.is_primitive() && (1..self.len()).all(|k| self.0 < self.rotate(k).0)
    }
}

pub fn factors(w: &Word, n: usize) -> BTreeSet<Word> {
    if n == 0 || n > w.len() {
        return BTreeSet::new();
    }
    w.0.windows(n).map(|f| Word(f.to_vec())).collect()
}

/// Smallest `p >= 1` with `w[i] == w[i + p]` for every valid `i`.
pub fn least_period(w: &Word) -> Result<usize> {
    if w.is_empty() {
        return Err(Error::EmptyWord("a periodicity query"));
    }
    // Failure function: border[i] is the longest proper border of w[..i].
    let s = w.symbols();
    let mut border = vec![0usize; s.len() + 1];
    let mut k = 0;
    for i in 1..s.len() {
        while k > 0 && s[i] != s[k] {
            k = border[k];
        }
        if s[i] == s[k] {
            k += 1;
        }
        border[i + 1] = k;
    }
    Ok(s.len() - border[s.len()])
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Word(v)
    }
}

impl FromIterator<Symbol> for Word {
    fn from_iter<I: IntoIterator<Item = Symbol>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&s| s < 10) {
            if self.is_empty() {
                return f.write_str("ε");
            }
            for s in &self.0 {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.iter().all(|&s| s < 10) {
            let text: String = self.0.iter().map(|s| char::from(b'0' + s)).collect();
            ser.serialize_str(&text)
        } else {
            self.0.serialize(ser)
        }
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        struct WordVisitor;

        impl<'de> Visitor<'de> for WordVisitor {
            type Value = Word;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a digit string or a list of symbols")
            }

            fn visit_str<E: de::Error>(self, t: &str) -> std::result::Result<Word, E> {
                Word::parse(t).map_err(E::custom)
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Word, A::Error> {
                let mut out = Vec::new();
                while let Some(s) = seq.next_element::<usize>()? {
                    if s >= MAX_ALPHABET {
                        return Err(de::Error::custom(format!("symbol {s} too large")));
                    }
                    out.push(s as Symbol);
                }
                Ok(Word(out))
            }
        }

        de.deserialize_any(WordVisitor)
    }
}

/// The cylinder `[word]` placed at coordinate `offset`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cylinder {
    pub word: Word,
    pub offset: i64,
}

impl Cylinder {
    pub fn new(word: Word, offset: i64) -> Self {
        Cylinder { word, offset }
    }

    /// Whether a point, given as a window starting at coordinate `start`,
    /// lies in the cylinder. `None` when the window does not cover it.
    pub fn contains_window(&self, window: &Word, start: i64) -> Option<bool> {
        let rel = self.offset - start;
        if rel < 0 || rel as usize + self.word.len() > window.len() {
            return None;
        }
        Some(self.word.occurs_at(window, rel as usize))
    }
}
