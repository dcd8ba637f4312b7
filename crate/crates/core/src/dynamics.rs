//! Return-time sets and the transitivity / mixing hierarchy.
//!
//! For cylinders `[u]_0` and `[v]_0` of a shift presented by an essential
//! [`LabeledGraph`], `n >= |u|` lies in `N([u], [v])` exactly when some
//! terminal state of a `u`-path reaches an initial state of a `v`-path in
//! `n - |u|` steps. The reachable sets form a sequence over a finite set, so
//! it is eventually periodic; detecting the first repetition certifies the
//! whole set, not just its part below the horizon.
//!
//! Only `n >= 0` is stored. The negative half of `N([u], [v])` is the
//! reflection of `N([v], [u])`, and [`classify`] reads it from that report.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flower::{LabeledGraph, StateSet};
use crate::words::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl Verdict {
    pub fn is_definite(self) -> bool {
        self != Verdict::Unknown
    }

    /// Conjunction over a family of per-pair verdicts.
    pub fn all(items: impl IntoIterator<Item = Verdict>) -> Verdict {
        let mut out = Verdict::Yes;
        for v in items {
            match v {
                Verdict::No => return Verdict::No,
                Verdict::Unknown => out = Verdict::Unknown,
                Verdict::Yes => {}
            }
        }
        out
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Unknown => "unknown",
        })
    }
}

/// `N([u]_0, [v]_0) ∩ [0, horizon]` with its eventual-periodicity certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReturnSetReport {
    pub u: Word,
    pub v: Word,
    pub horizon: usize,
    pub present: Vec<usize>,
    /// First index of the periodic tail (least such index).
    pub preperiod: Option<usize>,
    /// Least period of the tail.
    pub period: Option<usize>,
    pub cofinite: Verdict,
    pub thickest_interval: usize,
    /// Membership over one period starting at `preperiod`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tail: Option<Vec<bool>>,
}

impl ReturnSetReport {
    pub fn is_certified(&self) -> bool {
        self.tail.is_some()
    }

    /// Membership of `n`, known below the horizon or anywhere once certified.
    pub fn contains(&self, n: usize) -> Option<bool> {
        if let (Some(pre), Some(tail)) = (self.preperiod, &self.tail) {
            if n >= pre {
                return Some(tail[(n - pre) % tail.len()]);
            }
        }
        if n <= self.horizon {
            Some(self.present.binary_search(&n).is_ok())
        } else {
            None
        }
    }

    /// Upper end of an index range that shows every residue mod `k` the full
    /// set will ever hit, when certified.
    fn exact_span(&self, k: usize) -> Option<usize> {
        Some(self.horizon.max(self.preperiod? + self.period? * k))
    }

    fn from_bits(
        u: &Word,
        v: &Word,
        horizon: usize,
        bits: Vec<bool>,
        cycle: Option<(usize, usize)>,
    ) -> Self {
        let present: Vec<usize> = (0..bits.len()).filter(|&n| bits[n]).collect();
        let mut thickest = 0;
        let mut run = 0;
        for &b in &bits {
            run = if b { run + 1 } else { 0 };
            thickest = thickest.max(run);
        }
        let mut report = ReturnSetReport {
            u: u.clone(),
            v: v.clone(),
            horizon,
            present,
            preperiod: None,
            period: None,
            cofinite: Verdict::Unknown,
            thickest_interval: thickest,
            tail: None,
        };
        if let Some((start, lam)) = cycle {
            let pattern = &bits[start..start + lam];
            let period = (1..=lam)
                .find(|d| lam % d == 0 && (0..lam).all(|i| pattern[i] == pattern[(i + d) % lam]))
                .unwrap_or(lam);
            let mut pre = start;
            while pre > 0 && bits[pre - 1] == bits[pre - 1 + period] {
                pre -= 1;
            }
            let tail = bits[pre..pre + period].to_vec();
            report.cofinite = if tail.iter().all(|&b| b) {
                Verdict::Yes
            } else {
                Verdict::No
            };
            report.preperiod = Some(pre);
            report.period = Some(period);
            report.tail = Some(tail);
        }
        report
    }
}

/// Reachable sets after `0, 1, …` free steps from the terminal states of `u`,
/// up to `steps`, with the first repetition `(first index, period)`.
struct GapSequence {
    sets: Vec<StateSet>,
    cycle: Option<(usize, usize)>,
}

fn gap_sequence(graph: &LabeledGraph, start: StateSet, steps: usize) -> GapSequence {
    let mut sets = Vec::with_capacity(steps + 1);
    let mut seen: HashMap<StateSet, usize> = HashMap::new();
    let mut cycle = None;
    let mut cur = start;
    for g in 0..=steps {
        if cycle.is_none() {
            if let Some(&g0) = seen.get(&cur) {
                cycle = Some((g0, g - g0));
            } else {
                seen.insert(cur.clone(), g);
            }
        }
        let next = graph.successors(&cur);
        sets.push(cur);
        cur = next;
    }
    GapSequence { sets, cycle }
}

/// `v` placed at offset `n < |u|`: the overlap must agree and the merged
/// word must be admissible.
fn overlap_member(graph: &LabeledGraph, u: &Word, v: &Word, n: usize) -> bool {
    let (us, vs) = (u.symbols(), v.symbols());
    let shared = (u.len() - n).min(v.len());
    if us[n..n + shared] != vs[..shared] {
        return false;
    }
    if n + v.len() <= u.len() {
        return true;
    }
    let merged = u.concat(&v.slice(u.len() - n, v.len()));
    graph.contains(&merged)
}

fn return_set_with(
    graph: &LabeledGraph,
    u: &Word,
    v: &Word,
    horizon: usize,
    seq: &GapSequence,
    v_starts: &StateSet,
) -> ReturnSetReport {
    let mut bits = vec![false; horizon + 1];
    for (n, bit) in bits.iter_mut().enumerate().take(u.len().min(horizon + 1)) {
        *bit = overlap_member(graph, u, v, n);
    }
    for (g, set) in seq.sets.iter().enumerate() {
        let n = u.len() + g;
        if n > horizon {
            break;
        }
        bits[n] = !set.is_disjoint(v_starts);
    }
    let cycle = seq.cycle.map(|(g0, lam)| (u.len() + g0, lam));
    ReturnSetReport::from_bits(u, v, horizon, bits, cycle)
}

fn check_words(graph: &LabeledGraph, u: &Word, v: &Word, horizon: usize) -> Result<()> {
    if u.is_empty() || v.is_empty() {
        return Err(Error::EmptyWord("a cylinder word"));
    }
    graph.check_member(u)?;
    graph.check_member(v)?;
    if horizon < u.len() + v.len() {
        return Err(Error::InvalidArgument(format!(
            "horizon {horizon} is below |u| + |v| = {}",
            u.len() + v.len()
        )));
    }
    Ok(())
}

/// Certified return set of `[u]_0` to `[v]_0`.
pub fn return_set(graph: &LabeledGraph, u: &Word, v: &Word, horizon: usize) -> Result<ReturnSetReport> {
    check_words(graph, u, v, horizon)?;
    let seq = gap_sequence(graph, graph.end_states(u), horizon - u.len());
    Ok(return_set_with(graph, u, v, horizon, &seq, &graph.start_states(v)))
}

/// Return set below the horizon only, without a periodicity certificate.
/// For finite windows of an infinite presentation, where the window's own
/// periodic behaviour says nothing about the full system.
pub fn empirical_return_set(
    graph: &LabeledGraph,
    u: &Word,
    v: &Word,
    horizon: usize,
) -> Result<ReturnSetReport> {
    check_words(graph, u, v, horizon)?;
    let mut seq = gap_sequence(graph, graph.end_states(u), horizon - u.len());
    seq.cycle = None;
    Ok(return_set_with(graph, u, v, horizon, &seq, &graph.start_states(v)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairWitness {
    pub u: Word,
    pub v: Word,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DynamicsVerdict {
    pub transitive: Verdict,
    /// For every `k <= k_max`.
    pub totally_transitive: Verdict,
    pub weak_mixing: Verdict,
    pub mixing: Verdict,
    pub word_length: usize,
    pub horizon: usize,
    pub k_max: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub level: Option<usize>,
    /// First pair refuting each refuted property.
    pub counterexamples: Vec<(String, PairWitness)>,
    pub certified_pairs: usize,
    pub certificates: Vec<ReturnSetReport>,
}

impl DynamicsVerdict {
    /// `mixing ⇒ weak mixing ⇒ totally transitive ⇒ transitive` on the
    /// "yes" side.
    pub fn is_monotone(&self) -> bool {
        let implies = |a: Verdict, b: Verdict| a != Verdict::Yes || b == Verdict::Yes;
        implies(self.mixing, self.weak_mixing)
            && implies(self.weak_mixing, self.totally_transitive)
            && implies(self.totally_transitive, self.transitive)
    }

    pub fn all_definite(&self) -> bool {
        [
            self.transitive,
            self.totally_transitive,
            self.weak_mixing,
            self.mixing,
        ]
        .iter()
        .all(|v| v.is_definite())
    }

    pub fn report(&self, u: &Word, v: &Word) -> Option<&ReturnSetReport> {
        self.certificates.iter().find(|r| &r.u == u && &r.v == v)
    }
}

/// Residues mod `k` hit by the two-sided set `N(u,v) ∪ −N(v,u)`.
/// Returns whether all are hit, and whether the answer is final.
fn residues_hit(forward: &ReturnSetReport, backward: &ReturnSetReport, k: usize) -> (bool, bool) {
    let mut hit = vec![false; k];
    let mut mark = |r: &ReturnSetReport, negate: bool| {
        let end = r.exact_span(k).unwrap_or(r.horizon);
        for n in 0..=end {
            if r.contains(n) == Some(true) {
                let res = n % k;
                hit[if negate { (k - res) % k } else { res }] = true;
            }
        }
    };
    mark(forward, false);
    mark(backward, true);
    let all = hit.iter().all(|&h| h);
    (all, all || (forward.is_certified() && backward.is_certified()))
}

fn pair_residue_verdict(forward: &ReturnSetReport, backward: &ReturnSetReport, k: usize) -> Verdict {
    match residues_hit(forward, backward, k) {
        (true, _) => Verdict::Yes,
        (false, true) => Verdict::No,
        (false, false) => Verdict::Unknown,
    }
}

fn pair_weak_mixing(r: &ReturnSetReport, k_max: usize) -> Verdict {
    match r.cofinite {
        Verdict::Unknown if r.thickest_interval >= k_max => Verdict::Yes,
        other => other,
    }
}

/// Classifies the shift at cylinder resolution `word_length`.
///
/// Each property is quantified over all ordered pairs of `L_ℓ`:
/// * transitive: the two-sided return set is non-empty;
/// * totally transitive: for each `k <= k_max`, the two-sided return set
///   meets every residue class mod `k` (that is, `σ^k` is transitive on the
///   cylinders `[u]_0` and `[v]_j` for every offset `j`);
/// * weak mixing: the set is certified cofinite, or shows a run of at least
///   `k_max` consecutive members below the horizon;
/// * mixing: the set is certified cofinite.
pub fn classify(
    graph: &LabeledGraph,
    word_length: usize,
    horizon: usize,
    k_max: usize,
) -> Result<DynamicsVerdict> {
    if word_length == 0 || k_max == 0 {
        return Err(Error::InvalidArgument(
            "word length and k_max must be positive".into(),
        ));
    }
    if horizon < 2 * word_length {
        return Err(Error::InvalidArgument(format!(
            "horizon {horizon} is below twice the word length"
        )));
    }
    let words: Vec<Word> = graph
        .language(word_length)
        .words(word_length)
        .iter()
        .cloned()
        .collect();
    let starts: Vec<StateSet> = words.iter().map(|v| graph.start_states(v)).collect();
    let rows: Vec<Vec<ReturnSetReport>> = words
        .par_iter()
        .map(|u| {
            let seq = gap_sequence(graph, graph.end_states(u), horizon - u.len());
            words
                .iter()
                .zip(&starts)
                .map(|(v, s)| return_set_with(graph, u, v, horizon, &seq, s))
                .collect()
        })
        .collect();

    let m = words.len();
    let mut counterexamples = Vec::new();
    let mut note = |name: &str, i: usize, j: usize, k: Option<usize>| {
        if !counterexamples.iter().any(|(n, _): &(String, PairWitness)| n == name) {
            counterexamples.push((
                name.to_string(),
                PairWitness {
                    u: words[i].clone(),
                    v: words[j].clone(),
                    k,
                },
            ));
        }
    };

    let mut transitive = Vec::with_capacity(m * m);
    let mut total = Vec::with_capacity(m * m);
    let mut weak = Vec::with_capacity(m * m);
    let mut mixing = Vec::with_capacity(m * m);
    // Both (i, j) and (j, i) are read, so plain indices are clearer here.
    #[allow(clippy::needless_range_loop)]
    for i in 0..m {
        for j in 0..m {
            let (fwd, bwd) = (&rows[i][j], &rows[j][i]);
            let t = pair_residue_verdict(fwd, bwd, 1);
            if t == Verdict::No {
                note("transitive", i, j, None);
            }
            transitive.push(t);
            let tt = Verdict::all((1..=k_max).map(|k| {
                let v = pair_residue_verdict(fwd, bwd, k);
                if v == Verdict::No {
                    note("totally_transitive", i, j, Some(k));
                }
                v
            }));
            total.push(tt);
            let w = pair_weak_mixing(fwd, k_max);
            if w == Verdict::No {
                note("weak_mixing", i, j, None);
            }
            weak.push(w);
            if fwd.cofinite == Verdict::No {
                note("mixing", i, j, None);
            }
            mixing.push(fwd.cofinite);
        }
    }
    let certificates: Vec<ReturnSetReport> = rows.into_iter().flatten().collect();
    let verdict = DynamicsVerdict {
        transitive: Verdict::all(transitive),
        totally_transitive: Verdict::all(total),
        weak_mixing: Verdict::all(weak),
        mixing: Verdict::all(mixing),
        word_length,
        horizon,
        k_max,
        level: None,
        counterexamples,
        certified_pairs: certificates.iter().filter(|r| r.is_certified()).count(),
        certificates,
    };
    debug_assert!(verdict.is_monotone());
    log::debug!(
        "classified {} words of length {word_length}: mixing {}",
        m,
        verdict.mixing
    );
    Ok(verdict)
}
