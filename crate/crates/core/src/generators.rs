//! Generator sets and their length arithmetic.
//!
//! A generator set `W` determines the coded system `X(W)`: the closure of all
//! free concatenations of its words. Countable generator sets are handled as
//! [`GeneratorFamily`] values whose finite levels `W_0 ⊆ W_1 ⊆ …` approximate
//! `W` from below.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{Alphabet, Word};

pub fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b)`.
fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = extended_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGeneratorSet")]
pub struct GeneratorSet {
    alphabet: Alphabet,
    #[serde(rename = "generators")]
    words: Vec<Word>,
}

#[derive(Deserialize)]
struct RawGeneratorSet {
    alphabet: Alphabet,
    generators: Vec<Word>,
}

impl TryFrom<RawGeneratorSet> for GeneratorSet {
    type Error = Error;

    fn try_from(raw: RawGeneratorSet) -> Result<Self> {
        GeneratorSet::new(raw.alphabet, raw.generators)
    }
}

impl GeneratorSet {
    pub fn new(alphabet: Alphabet, words: Vec<Word>) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::EmptyGeneratorSet);
        }
        for w in &words {
            if w.is_empty() {
                return Err(Error::EmptyWord("a generator"));
            }
            alphabet.check(w)?;
        }
        Ok(GeneratorSet { alphabet, words })
    }

    /// Convenience constructor from digit strings.
    pub fn from_digits(alphabet: usize, words: &[&str]) -> Result<Self> {
        let alphabet = Alphabet::new(alphabet)?;
        let words = words
            .iter()
            .map(|w| alphabet.parse_word(w))
            .collect::<Result<Vec<_>>>()?;
        GeneratorSet::new(alphabet, words)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.words.iter().map(Word::len).collect()
    }

    pub fn max_len(&self) -> usize {
        self.words.iter().map(Word::len).max().unwrap_or(0)
    }

    /// Sorted, duplicate-free copy.
    pub fn canonical(&self) -> GeneratorSet {
        let mut words = self.words.clone();
        words.sort();
        words.dedup();
        GeneratorSet {
            alphabet: self.alphabet,
            words,
        }
    }

    /// Concatenation of the generators at the given indices.
    pub fn concatenate(&self, parse: &[usize]) -> Word {
        let mut out = Word::empty();
        for &i in parse {
            out.extend_from(&self.words[i]);
        }
        out
    }

    pub fn with_words(&self, extra: impl IntoIterator<Item = Word>) -> GeneratorSet {
        let mut words = self.words.clone();
        for w in extra {
            if !words.contains(&w) {
                words.push(w);
            }
        }
        GeneratorSet {
            alphabet: self.alphabet,
            words,
        }
    }
}

pub fn gcd_lengths(w: &GeneratorSet) -> usize {
    w.words.iter().fold(0, |g, x| gcd(g, x.len()))
}

/// How an augmented pair was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AugmentKind {
    /// `W` already held two words of coprime length (or a word of length 1).
    ExistingPair,
    /// Two new words were built from a Bézout identity.
    Built,
}

/// `W′ = W ∪ {a, b}` where `a` and `b` are concatenations of words of `W`
/// with coprime lengths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BezoutAugmentation {
    pub original: GeneratorSet,
    pub kind: AugmentKind,
    pub added: [Word; 2],
    /// Recipe for each added word: `(generator index, exponent)` in order.
    pub parts: [Vec<(usize, usize)>; 2],
    /// Signed Bézout coefficients over `original`, summing `c_i |w_i|` to 1.
    /// Present only for [`AugmentKind::Built`].
    pub coefficients: Option<Vec<i64>>,
    pub coprime_pair_lengths: (usize, usize),
}

impl BezoutAugmentation {
    /// The augmented generator set `W′`.
    pub fn augmented(&self) -> GeneratorSet {
        self.original.with_words(self.added.iter().cloned())
    }
}

pub fn bezout_augment(w: &GeneratorSet) -> Result<BezoutAugmentation> {
    let g = gcd_lengths(w);
    if g != 1 {
        return Err(Error::NotRelativelyPrime { gcd: g });
    }
    let lens = w.lengths();

    let existing = (0..lens.len())
        .flat_map(|i| (i + 1..lens.len()).map(move |j| (i, j)))
        .find(|&(i, j)| gcd(lens[i], lens[j]) == 1)
        .or_else(|| lens.iter().position(|&l| l == 1).map(|i| (i, i)));
    if let Some((i, j)) = existing {
        return Ok(BezoutAugmentation {
            original: w.clone(),
            kind: AugmentKind::ExistingPair,
            added: [w.words[i].clone(), w.words[j].clone()],
            parts: [vec![(i, 1)], vec![(j, 1)]],
            coefficients: None,
            coprime_pair_lengths: (lens[i], lens[j]),
        });
    }

    bezout_build(w)
}

/// Builds the pair from a Bézout identity over a gcd-reducing prefix of `W`,
/// without first looking for an existing coprime pair.
pub fn bezout_build(w: &GeneratorSet) -> Result<BezoutAugmentation> {
    let g = gcd_lengths(w);
    if g != 1 {
        return Err(Error::NotRelativelyPrime { gcd: g });
    }
    let lens = w.lengths();
    // Keep only the indices that lower the running gcd.
    let mut subset = Vec::new();
    let mut running = 0;
    for (i, &l) in lens.iter().enumerate() {
        let next = gcd(running, l);
        if next != running {
            subset.push(i);
            running = next;
        }
        if running == 1 {
            break;
        }
    }
    let sub_lens: Vec<i64> = subset.iter().map(|&i| lens[i] as i64).collect();
    let coeffs = small_bezout(&sub_lens).unwrap_or_else(|| euclid_bezout(&sub_lens));
    debug_assert_eq!(
        coeffs.iter().zip(&sub_lens).map(|(c, l)| c * l).sum::<i64>(),
        1
    );

    let mut full = vec![0i64; lens.len()];
    let mut parts: [Vec<(usize, usize)>; 2] = [Vec::new(), Vec::new()];
    for (&i, &c) in subset.iter().zip(&coeffs) {
        full[i] = c;
        if c > 0 {
            parts[0].push((i, c as usize));
        } else if c < 0 {
            parts[1].push((i, (-c) as usize));
        }
    }
    // Only a lone length-1 word gives a one-signed identity.
    if parts[1].is_empty() {
        let i = parts[0][0].0;
        parts[1].push((i, 1));
    }
    let build = |recipe: &[(usize, usize)]| {
        let mut out = Word::empty();
        for &(i, e) in recipe {
            out.extend_from(&w.words[i].pow(e));
        }
        out
    };
    let a = build(&parts[0]);
    let b = build(&parts[1]);
    let pair = (a.len(), b.len());
    debug_assert_eq!(gcd(pair.0, pair.1), 1);
    log::debug!("built coprime pair with lengths {pair:?} from coefficients {full:?}");
    Ok(BezoutAugmentation {
        original: w.clone(),
        kind: AugmentKind::Built,
        added: [a, b],
        parts,
        coefficients: Some(full),
        coprime_pair_lengths: pair,
    })
}

/// Pairwise extended Euclid over the list.
fn euclid_bezout(lens: &[i64]) -> Vec<i64> {
    let mut coeffs = vec![1i64];
    let mut g = lens[0];
    for &l in &lens[1..] {
        let (ng, x, y) = extended_gcd(g, l);
        for c in coeffs.iter_mut() {
            *c *= x;
        }
        coeffs.push(y);
        g = ng;
    }
    coeffs
}

/// Bézout vector with the least largest coefficient, then least total
/// weight, searched in a bounded box. `None` when the box is too large.
fn small_bezout(lens: &[i64]) -> Option<Vec<i64>> {
    const BUDGET: usize = 200_000;
    let k = lens.len();
    for m in 1i64.. {
        let side = (2 * m + 1) as usize;
        if side.checked_pow(k as u32).is_none_or(|n| n > BUDGET) {
            return None;
        }
        let mut best: Option<(i64, Vec<i64>)> = None;
        let mut c = vec![-m; k];
        'odometer: loop {
            if c.iter().zip(lens).map(|(a, b)| a * b).sum::<i64>() == 1 {
                let weight = c.iter().map(|x| x.abs()).sum::<i64>();
                if best.as_ref().is_none_or(|(bw, _)| weight < *bw) {
                    best = Some((weight, c.clone()));
                }
            }
            for i in (0..k).rev() {
                if c[i] < m {
                    c[i] += 1;
                    continue 'odometer;
                }
                c[i] = -m;
            }
            break;
        }
        if let Some((_, v)) = best {
            return Some(v);
        }
    }
    None
}

/// Least `L` such that every `n >= L` is `r1*a1 + r2*a2` with `r1, r2 >= 0`.
pub fn frobenius_bound(a1: usize, a2: usize) -> Result<usize> {
    if a1 == 0 || a2 == 0 || gcd(a1, a2) != 1 {
        return Err(Error::NotCoprime { a1, a2 });
    }
    Ok((a1 - 1) * (a2 - 1))
}

/// `n = r1*a1 + r2*a2` with the smallest possible `r2`.
pub fn represent(n: usize, a1: usize, a2: usize) -> Option<(usize, usize)> {
    if a1 == 0 || a2 == 0 {
        return None;
    }
    (0..=n / a2).find_map(|r2| {
        let rest = n - r2 * a2;
        rest.is_multiple_of(a1).then_some((rest / a1, r2))
    })
}

/// A rule listing a (possibly infinite) set of stems, read up to a length bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WordSource {
    /// Every word that does not contain the marker word as a factor.
    #[serde(rename = "mfree")]
    MarkerFree,
    /// An explicit finite list.
    List { words: Vec<Word> },
    /// `{word^n : n >= 0}`.
    Power { word: Word },
}

impl WordSource {
    /// Members of length at most `max_len`, shortlex ordered.
    pub fn enumerate(&self, alphabet: Alphabet, marker: &Word, max_len: usize) -> Vec<Word> {
        let mut out: Vec<Word> = match self {
            WordSource::MarkerFree => (0..=max_len)
                .flat_map(|n| alphabet.words_of_length(n))
                .filter(|u| marker.is_empty() || !marker.is_factor_of(u))
                .collect(),
            WordSource::List { words } => {
                words.iter().filter(|u| u.len() <= max_len).cloned().collect()
            }
            WordSource::Power { word } => {
                if word.is_empty() {
                    vec![Word::empty()]
                } else {
                    (0..=max_len / word.len()).map(|n| word.pow(n)).collect()
                }
            }
        };
        out.sort();
        out.dedup();
        out
    }

    /// Membership for words of any length.
    pub fn contains(&self, alphabet: Alphabet, marker: &Word, u: &Word) -> bool {
        match self {
            WordSource::MarkerFree => {
                alphabet.check(u).is_ok() && (marker.is_empty() || !marker.is_factor_of(u))
            }
            WordSource::List { words } => words.contains(u),
            WordSource::Power { word } => {
                if word.is_empty() {
                    u.is_empty()
                } else {
                    u.len().is_multiple_of(word.len()) && word.pow(u.len() / word.len()) == *u
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListedWord {
    pub word: Word,
    pub level: usize,
}

/// Enumerator for the nested levels `W_t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FamilyRule {
    /// `W_t = {u^n v : 0 <= n <= t}`.
    PowerSuffix { u: Word, v: Word },
    /// Each word enters at its listed level.
    Listed { words: Vec<ListedWord> },
    /// `W_t` is the union of the first `t + 1` lists.
    PerLevel { levels: Vec<Vec<Word>> },
    /// `W_t = {s·suffix : s a stem, |s| <= t}`.
    Suffixed { stems: WordSource, suffix: Word },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorFamily {
    pub alphabet: Alphabet,
    pub rule: FamilyRule,
    /// Default truncation level.
    pub level: usize,
}

impl GeneratorFamily {
    pub fn new(alphabet: Alphabet, rule: FamilyRule, level: usize) -> Result<Self> {
        let fam = GeneratorFamily {
            alphabet,
            rule,
            level,
        };
        fam.validate()?;
        Ok(fam)
    }

    fn validate(&self) -> Result<()> {
        let check = |w: &Word| self.alphabet.check(w);
        match &self.rule {
            FamilyRule::PowerSuffix { u, v } => {
                if u.is_empty() || v.is_empty() {
                    return Err(Error::EmptyWord("a power-suffix part"));
                }
                check(u)?;
                check(v)?;
            }
            FamilyRule::Listed { words } => {
                for lw in words {
                    if lw.word.is_empty() {
                        return Err(Error::EmptyWord("a generator"));
                    }
                    check(&lw.word)?;
                }
            }
            FamilyRule::PerLevel { levels } => {
                for w in levels.iter().flatten() {
                    if w.is_empty() {
                        return Err(Error::EmptyWord("a generator"));
                    }
                    check(w)?;
                }
            }
            FamilyRule::Suffixed { stems, suffix } => {
                if suffix.is_empty() {
                    return Err(Error::EmptyWord("a suffix marker"));
                }
                check(suffix)?;
                match stems {
                    WordSource::List { words } => words.iter().try_for_each(check)?,
                    WordSource::Power { word } => check(word)?,
                    WordSource::MarkerFree => {}
                }
            }
        }
        Ok(())
    }

    /// The finite generator set `W_t`.
    pub fn at_level(&self, t: usize) -> Result<GeneratorSet> {
        let words: Vec<Word> = match &self.rule {
            FamilyRule::PowerSuffix { u, v } => (0..=t).map(|n| u.pow(n).concat(v)).collect(),
            FamilyRule::Listed { words } => words
                .iter()
                .filter(|lw| lw.level <= t)
                .map(|lw| lw.word.clone())
                .collect(),
            FamilyRule::PerLevel { levels } => levels.iter().take(t + 1).flatten().cloned().collect(),
            FamilyRule::Suffixed { stems, suffix } => stems
                .enumerate(self.alphabet, suffix, t)
                .into_iter()
                .map(|s| s.concat(suffix))
                .collect(),
        };
        let mut set = GeneratorSet::new(self.alphabet, words)?;
        set.words.dedup();
        Ok(set)
    }

    pub fn truncation(&self) -> Result<GeneratorSet> {
        self.at_level(self.level)
    }
}
