//! Brute-force oracles. Each works on plain symbol vectors and shares no
//! code with the library engines it checks.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use codedshift::generators::GeneratorSet;
use codedshift::words::Word;

pub type Sym = Vec<u8>;

pub fn w(s: &str) -> Word {
    Word::from_digits(s).unwrap()
}

pub fn raw(set: &GeneratorSet) -> Vec<Sym> {
    set.words().iter().map(|w| w.symbols().to_vec()).collect()
}

/// Length-`n` factors of concatenations of `gens`. A factor starts inside
/// some generator, so it is a prefix of (a suffix of a generator) followed
/// by whole generators.
pub fn language(gens: &[Sym], n: usize) -> BTreeSet<Sym> {
    let mut out = BTreeSet::new();
    let mut seen: HashSet<Sym> = HashSet::new();
    let mut work: Vec<Sym> = Vec::new();
    for g in gens {
        for i in 0..g.len() {
            work.push(g[i..].to_vec());
        }
    }
    while let Some(s) = work.pop() {
        if s.len() >= n {
            out.insert(s[..n].to_vec());
            continue;
        }
        if !seen.insert(s.clone()) {
            continue;
        }
        for g in gens {
            let mut t = s.clone();
            t.extend_from_slice(g);
            work.push(t);
        }
    }
    out
}

/// `L_m` for `m = 0..=n`, as prefixes of `L_n`.
pub fn languages_upto(gens: &[Sym], n: usize) -> Vec<BTreeSet<Sym>> {
    let top = language(gens, n);
    (0..=n)
        .map(|m| top.iter().map(|x| x[..m].to_vec()).collect())
        .collect()
}

pub fn member(gens: &[Sym], x: &[u8]) -> bool {
    language(gens, x.len()).contains(x)
}

/// Whether `x` splits into generator words, by plain recursion.
pub fn parses(gens: &[Sym], x: &[u8]) -> bool {
    x.is_empty() || gens.iter().any(|g| x.starts_with(g) && parses(gens, &x[g.len()..]))
}

pub fn representable(n: usize, a1: usize, a2: usize) -> bool {
    (0..=n / a1).any(|r1| (n - r1 * a1).is_multiple_of(a2))
}

/// Least `L` with every `n >= L` representable.
pub fn frobenius(a1: usize, a2: usize) -> usize {
    let mut last_gap = None;
    for n in 0..=(a1 * a2 + a1 + a2) {
        if !representable(n, a1, a2) {
            last_gap = Some(n);
        }
    }
    last_gap.map_or(0, |g| g + 1)
}

/// `n ∈ N([u]_0, [v]_0)` for `0 <= n <= horizon`.
pub fn return_set(gens: &[Sym], u: &[u8], v: &[u8], horizon: usize) -> Vec<usize> {
    let top = horizon + v.len().max(u.len());
    let lang = languages_upto(gens, top);
    (0..=horizon)
        .filter(|&n| {
            let m = u.len().max(n + v.len());
            lang[m]
                .iter()
                .any(|x| x.starts_with(u) && x[n..].starts_with(v))
        })
        .collect()
}

/// `u^k` admissible for all `k <= reps`.
pub fn periodic(gens: &[Sym], u: &[u8], reps: usize) -> bool {
    let power: Sym = u.iter().copied().cycle().take(u.len() * reps).collect();
    member(gens, &power)
}

pub fn followers(gens: &[Sym], base: &[u8], depth: usize) -> BTreeSet<Sym> {
    language(gens, base.len() + depth)
        .into_iter()
        .filter(|x| x.starts_with(base))
        .map(|x| x[base.len()..].to_vec())
        .collect()
}

/// A pair `(u, v)` with `uw, wv ∈ L`, `uwv ∉ L`, `|u|, |v| <= bound`.
pub fn sync_counterexample(gens: &[Sym], x: &[u8], bound: usize) -> Option<(Sym, Sym)> {
    let lang = languages_upto(gens, 2 * bound + x.len());
    let has = |s: &Sym| lang[s.len()].contains(s);
    let short: Vec<&Sym> = (0..=bound).flat_map(|m| lang[m].iter()).collect();
    for u in &short {
        let uw: Sym = u.iter().chain(x).copied().collect();
        if !has(&uw) {
            continue;
        }
        for v in &short {
            let wv: Sym = x.iter().chain(v.iter()).copied().collect();
            let uwv: Sym = uw.iter().chain(v.iter()).copied().collect();
            if has(&wv) && !has(&uwv) {
                return Some(((*u).clone(), (*v).clone()));
            }
        }
    }
    None
}

/// Smallest `p >= 1` with `x_i = x_{i+p}` throughout.
pub fn least_period(x: &[u8]) -> usize {
    (1..=x.len())
        .find(|&p| (0..x.len() - p).all(|i| x[i] == x[i + p]))
        .unwrap_or(x.len())
}

/// Every symbol renaming of a 3-letter set, as a canonical sorted list.
pub fn canonical_under_renaming(gens: &[Sym]) -> Vec<Sym> {
    const PERMS: [[u8; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    PERMS
        .iter()
        .map(|p| {
            let mut v: Vec<Sym> = gens
                .iter()
                .map(|g| g.iter().map(|&s| p[s as usize]).collect())
                .collect();
            v.sort();
            v
        })
        .min()
        .unwrap()
}

/// All words over `{0,..,k-1}` of length `1..=max_len`.
pub fn all_words(k: u8, max_len: usize) -> Vec<Sym> {
    let mut out = Vec::new();
    let mut layer: Vec<Sym> = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|p| {
                (0..k).map(move |s| {
                    let mut q = p.clone();
                    q.push(s);
                    q
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

pub fn to_set(alphabet: usize, gens: &[Sym]) -> GeneratorSet {
    GeneratorSet::new(
        codedshift::words::Alphabet::new(alphabet).unwrap(),
        gens.iter().map(|g| Word::new(g.clone())).collect(),
    )
    .unwrap()
}

pub fn words_to_raw(set: &BTreeSet<Word>) -> BTreeSet<Sym> {
    set.iter().map(|w| w.symbols().to_vec()).collect()
}
