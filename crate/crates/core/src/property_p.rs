//! Strong property P witnesses.
//!
//! Given cylinder words `u_1..u_n`, each is embedded in a concatenation of
//! generator words, then padded on both sides with words of a coprime pair
//! `(v1, v2)` so that every `u_i` sits at the same offset `l` of a block of
//! the same length `N`. Any sequence of blocks is again a concatenation, so
//! `V^(s(1))⋯V^(s(k))` realizes the pattern `u_{s(1)}, …, u_{s(k)}` at the
//! positions `l, l + N, …` for every `k`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flower::FlowerAutomaton;
use crate::generators::{bezout_augment, frobenius_bound, GeneratorSet};
use crate::words::Word;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub block: Word,
    pub offset: usize,
    pub parse: Vec<Word>,
}

/// Splits `word` into generator words, if possible. Prefers earlier
/// generators at each cut.
pub fn parse_generators(set: &GeneratorSet, word: &Word) -> Option<Vec<Word>> {
    let n = word.len();
    let mut reach = vec![false; n + 1];
    reach[n] = true;
    for i in (0..n).rev() {
        reach[i] = set
            .words()
            .iter()
            .any(|g| i + g.len() <= n && reach[i + g.len()] && g.occurs_at(word, i));
    }
    if !reach[0] {
        return None;
    }
    let mut out = Vec::new();
    let mut i = 0;
    while i < n {
        let g = set
            .words()
            .iter()
            .find(|g| i + g.len() <= n && reach[i + g.len()] && g.occurs_at(word, i))?;
        out.push(g.clone());
        i += g.len();
    }
    Some(out)
}

/// Shortest concatenation of generator words containing `u`, with the
/// smallest offset on ties, then the lexicographically least block.
pub fn embed_in_concatenation(fa: &FlowerAutomaton, u: &Word) -> Result<Embedding> {
    let graph = fa.graph();
    graph.check_member(u)?;
    let set = fa.origin();
    let depth = |s: usize| fa.petal(s).map_or(0, |(_, d)| d);
    let mut best: Option<(usize, usize, Word)> = None;
    for s in 0..graph.num_states() {
        let ends = graph.run(&graph.singleton(s), u);
        if ends.is_clear() {
            continue;
        }
        let prefix = match fa.petal(s) {
            Some((g, d)) => set.words()[g].slice(0, d),
            None => Word::empty(),
        };
        for e in ends.ones() {
            let suffix = match fa.petal(e) {
                Some((g, d)) => {
                    let gw = &set.words()[g];
                    gw.slice(d, gw.len())
                }
                None => Word::empty(),
            };
            let block = prefix.concat(u).concat(&suffix);
            let key = (block.len(), depth(s), block);
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
        }
    }
    let (_, offset, block) = best.ok_or_else(|| Error::NotInLanguage(u.clone()))?;
    let parse = parse_generators(set, &block)
        .expect("a hub-to-hub path label always splits into generator words");
    Ok(Embedding {
        block,
        offset,
        parse,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyPWitness {
    pub cylinder_words: Vec<Word>,
    /// Shorter word first.
    pub coprime_pair: (Word, Word),
    pub blocks: Vec<Word>,
    pub prefix_len: usize,
    pub block_len: usize,
    pub frobenius: usize,
    pub embeddings: Vec<Embedding>,
}

/// `p = r1·a1 + r2·a2` with the fewest words, then the most copies of `a1`.
fn padding_counts(p: usize, a1: usize, a2: usize) -> Option<(usize, usize)> {
    (0..=p / a1)
        .filter(|r1| (p - r1 * a1).is_multiple_of(a2))
        .map(|r1| (r1, (p - r1 * a1) / a2))
        .min_by_key(|&(r1, r2)| (r1 + r2, std::cmp::Reverse(r1)))
}

fn padding(p: usize, v1: &Word, v2: &Word) -> Word {
    let (r1, r2) = padding_counts(p, v1.len(), v2.len())
        .expect("padding lengths are at least the Frobenius bound");
    v1.pow(r1).concat(&v2.pow(r2))
}

pub fn build_witness(fa: &FlowerAutomaton, words: &[Word]) -> Result<PropertyPWitness> {
    if words.is_empty() {
        return Err(Error::InvalidArgument("no cylinder words given".into()));
    }
    let aug = bezout_augment(fa.origin())?;
    let [a, b] = aug.added.clone();
    let (v1, v2) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let frob = frobenius_bound(v1.len(), v2.len())?;

    let embeddings = words
        .iter()
        .map(|u| embed_in_concatenation(fa, u))
        .collect::<Result<Vec<_>>>()?;
    let prefix_len = frob + embeddings.iter().map(|e| e.offset).max().unwrap_or(0);
    let left: Vec<Word> = embeddings
        .iter()
        .map(|e| padding(prefix_len - e.offset, &v1, &v2).concat(&e.block))
        .collect();
    let block_len = frob + left.iter().map(Word::len).max().unwrap_or(0);
    let blocks = left
        .iter()
        .map(|w| w.concat(&padding(block_len - w.len(), &v1, &v2)))
        .collect();
    Ok(PropertyPWitness {
        cylinder_words: words.to_vec(),
        coprime_pair: (v1, v2),
        blocks,
        prefix_len,
        block_len,
        frobenius: frob,
        embeddings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum TupleSelection {
    All,
    Sample { count: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCheck {
    pub k: usize,
    pub tuples_checked: usize,
    pub blocks_ok: bool,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub first_failure: Option<Vec<usize>>,
}

fn tuples(n: usize, k: usize, selection: TupleSelection) -> Vec<Vec<usize>> {
    match selection {
        TupleSelection::All => {
            let total = n.checked_pow(k as u32).unwrap_or(usize::MAX);
            (0..total)
                .map(|mut idx| {
                    let mut t = vec![0; k];
                    for slot in t.iter_mut().rev() {
                        *slot = idx % n;
                        idx /= n;
                    }
                    t
                })
                .collect()
        }
        TupleSelection::Sample { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|_| (0..k).map(|_| rng.random_range(0..n)).collect())
                .collect()
        }
    }
}

/// Checks the block invariants, then every selected tuple: the joined blocks
/// must be admissible with `u_{s(j)}` at offset `l + j·N`.
pub fn verify_witness(
    fa: &FlowerAutomaton,
    witness: &PropertyPWitness,
    k: usize,
    selection: TupleSelection,
) -> Result<WitnessCheck> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("k = {k}, need k >= 2")));
    }
    let n = witness.blocks.len();
    let (l, big_n) = (witness.prefix_len, witness.block_len);
    let blocks_ok = n > 0
        && n == witness.cylinder_words.len()
        && witness
            .blocks
            .iter()
            .zip(&witness.cylinder_words)
            .all(|(block, u)| {
                block.len() == big_n
                    && u.occurs_at(block, l)
                    && parse_generators(fa.origin(), block).is_some()
            });
    if !blocks_ok {
        return Ok(WitnessCheck {
            k,
            tuples_checked: 0,
            blocks_ok,
            passed: false,
            first_failure: None,
        });
    }
    let all = tuples(n, k, selection);
    let failure = all.par_iter().find_first(|s| {
        let mut joined = Word::empty();
        for &i in s.iter() {
            joined.extend_from(&witness.blocks[i]);
        }
        let placed = s
            .iter()
            .enumerate()
            .all(|(j, &i)| witness.cylinder_words[i].occurs_at(&joined, l + j * big_n));
        !(placed && fa.contains(&joined))
    });
    Ok(WitnessCheck {
        k,
        tuples_checked: all.len(),
        blocks_ok,
        passed: failure.is_none(),
        first_failure: failure.cloned(),
    })
}
