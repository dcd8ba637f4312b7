//! The integer-line cover driven by a substitution sequence.
//!
//! Vertex `b` is joined to `b + 1` by a forward edge labeled `x_b ∈ {0,1}`
//! and a backward edge labeled `y_b = x_b + 2`. Only vertices `-B..=B` are
//! materialized, so every result here is a finite-window lower approximation
//! of the infinite system.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{empirical_return_set, ReturnSetReport};
use crate::error::{Error, Result};
use crate::flower::{Edge, LabeledGraph};
use crate::words::{Alphabet, Symbol, Word, MAX_ALPHABET};

/// A substitution with a coding onto `{0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceProvider {
    pub name: String,
    /// Image of each internal symbol.
    pub rules: Vec<Word>,
    /// Output symbol for each internal symbol.
    pub coding: Vec<Symbol>,
    /// Spacing of the sampled orbit: `x_b = base_{k·b}`.
    pub k_power: usize,
}

impl SequenceProvider {
    pub fn new(name: &str, rules: Vec<Word>, coding: Vec<Symbol>, k_power: usize) -> Result<Self> {
        let p = SequenceProvider {
            name: name.to_string(),
            rules,
            coding,
            k_power,
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let n = self.rules.len();
        let bad = |msg: String| Err(Error::InvalidSubstitution(msg));
        if n == 0 || self.coding.len() != n {
            return bad("need one image and one coding symbol per letter".into());
        }
        if self.k_power == 0 {
            return bad("k_power must be positive".into());
        }
        for (a, img) in self.rules.iter().enumerate() {
            if img.is_empty() {
                return bad(format!("letter {a} is erased"));
            }
            if img.symbols().iter().any(|&s| s as usize >= n) {
                return bad(format!("image of {a} leaves the alphabet"));
            }
        }
        if self.coding.iter().any(|&c| c > 1) {
            return bad("coding must land in {0, 1}".into());
        }
        self.seed_power().map(|_| ())
    }

    /// 0→01, 1→10.
    pub fn thue_morse() -> Self {
        Self::binary("thue-morse", &["01", "10"])
    }

    /// 0→01, 1→0.
    pub fn fibonacci() -> Self {
        Self::binary("fibonacci", &["01", "0"])
    }

    /// 0→0012, 1→12, 2→012, read through 0,1,2 ↦ 0,1,0.
    pub fn chacon() -> Self {
        let rules = ["0012", "12", "012"].iter().map(|s| Word::from_digits(s).unwrap()).collect();
        Self::new("chacon", rules, vec![0, 1, 0], 1).expect("builtin substitution")
    }

    fn binary(name: &str, images: &[&str]) -> Self {
        let rules = images.iter().map(|s| Word::from_digits(s).unwrap()).collect();
        Self::new(name, rules, vec![0, 1], 1).expect("builtin substitution")
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "thue-morse" => Ok(Self::thue_morse()),
            "fibonacci" => Ok(Self::fibonacci()),
            "chacon" => Ok(Self::chacon()),
            other => Err(Error::InvalidSubstitution(format!("unknown provider {other:?}"))),
        }
    }

    /// A binary substitution given as `{"0": "01", "1": "10"}`.
    pub fn custom(map: &BTreeMap<String, String>) -> Result<Self> {
        let mut rules = Vec::new();
        for (i, key) in ["0", "1"].iter().enumerate() {
            let img = map
                .get(*key)
                .ok_or_else(|| Error::InvalidSubstitution(format!("no image for {key}")))?;
            let w = Word::from_digits(img)?;
            if w.symbols().iter().any(|&s| s > 1) {
                return Err(Error::InvalidSubstitution(format!("image of {i} is not binary")));
            }
            rules.push(w);
        }
        if map.len() != 2 {
            return Err(Error::InvalidSubstitution("custom maps are binary".into()));
        }
        Self::new("custom", rules, vec![0, 1], 1)
    }

    pub fn with_k_power(mut self, k: usize) -> Result<Self> {
        self.k_power = k;
        self.validate()?;
        Ok(self)
    }

    fn apply(&self, w: &[Symbol]) -> Vec<Symbol> {
        w.iter()
            .flat_map(|&s| self.rules[s as usize].symbols().iter().copied())
            .collect()
    }

    /// Seeds `(x_{-1}, x_0)` in internal symbols: the last letter of the image
    /// of 1 (or of the only letter) and the first letter of the image of 0.
    fn seeds(&self) -> (Symbol, Symbol) {
        let left = self.rules.get(1).unwrap_or(&self.rules[0]);
        (
            *left.symbols().last().unwrap(),
            self.rules[0].symbols()[0],
        )
    }

    /// Least `p` with `σ^p` fixing both seeds at the growing ends.
    fn seed_power(&self) -> Result<usize> {
        let (l, r) = self.seeds();
        for p in 1..=2 * self.rules.len() + 2 {
            let mut right = vec![r];
            let mut left = vec![l];
            for _ in 0..p {
                right = self.apply(&right);
                left = self.apply(&left);
            }
            if right[0] == r && *left.last().unwrap() == l {
                let mut r2 = right.clone();
                let mut l2 = left.clone();
                for _ in 0..p {
                    r2 = self.apply(&r2);
                    l2 = self.apply(&l2);
                }
                if r2.len() > right.len() && l2.len() > left.len() {
                    return Ok(p);
                }
            }
        }
        Err(Error::InvalidSubstitution(format!(
            "{}: no power of the substitution fixes a growing two-sided seed",
            self.name
        )))
    }

    /// One-sided fixed-point prefixes (right of the anchor, and left of it in
    /// reverse reading order) of at least `len` symbols each.
    fn base_halves(&self, len: usize) -> (Vec<Symbol>, Vec<Symbol>) {
        let p = self.seed_power().expect("validated provider");
        let (l, r) = self.seeds();
        let grow = |mut w: Vec<Symbol>| {
            while w.len() < len {
                for _ in 0..p {
                    w = self.apply(&w);
                }
            }
            w
        };
        (grow(vec![r]), grow(vec![l]))
    }

    /// `x_b` for `b` in `lo..hi`, after coding and subsampling.
    pub fn range(&self, lo: i64, hi: i64) -> Vec<Symbol> {
        let k = self.k_power as i64;
        let need = (lo.abs().max(hi.abs()) * k + k + 1) as usize;
        let (right, left) = self.base_halves(need);
        (lo..hi)
            .map(|b| {
                let i = b * k;
                let s = if i >= 0 {
                    right[i as usize]
                } else {
                    left[left.len() - (-i) as usize]
                };
                self.coding[s as usize]
            })
            .collect()
    }
}

/// `x_{-B} ⋯ x_B`.
pub fn sequence_window(provider: &SequenceProvider, radius: usize) -> Result<Word> {
    if radius == 0 {
        return Err(Error::InvalidArgument("window radius must be positive".into()));
    }
    let b = radius as i64;
    Ok(Word::new(provider.range(-b, b + 1)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProviderRef {
    Named(String),
    Custom(BTreeMap<String, String>),
}

impl ProviderRef {
    pub fn resolve(&self, k_power: usize) -> Result<SequenceProvider> {
        let base = match self {
            ProviderRef::Named(name) => SequenceProvider::by_name(name)?,
            ProviderRef::Custom(map) => SequenceProvider::custom(map)?,
        };
        base.with_k_power(k_power)
    }
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverSpec {
    pub provider: ProviderRef,
    #[serde(default = "one")]
    pub k: usize,
    pub window: usize,
}

/// Walk of a label word in the window, with the extent it covers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkTrace {
    pub label: Word,
    pub start_vertex: i64,
    pub end_vertex: i64,
    pub m_u: i64,
    #[serde(rename = "M_u")]
    pub big_m_u: i64,
    pub x_of_u: Word,
    pub y_of_u: Word,
}

#[derive(Debug, Clone)]
pub struct LineCoverSystem {
    provider: SequenceProvider,
    radius: usize,
    /// `x_b` for `b` in `-B..B`.
    x: Vec<Symbol>,
    graph: LabeledGraph,
}

impl LineCoverSystem {
    pub fn new(provider: SequenceProvider, radius: usize) -> Result<Self> {
        if radius == 0 {
            return Err(Error::InvalidArgument("window radius must be positive".into()));
        }
        let b = radius as i64;
        let x = provider.range(-b, b);
        let mut edges = Vec::with_capacity(4 * radius);
        for (i, &s) in x.iter().enumerate() {
            edges.push(Edge {
                from: i,
                symbol: s,
                to: i + 1,
            });
            edges.push(Edge {
                from: i + 1,
                symbol: s + 2,
                to: i,
            });
        }
        let graph = LabeledGraph::new(Alphabet::new(4)?, 2 * radius + 1, edges)?;
        Ok(LineCoverSystem {
            provider,
            radius,
            x,
            graph,
        })
    }

    pub fn from_spec(spec: &CoverSpec) -> Result<Self> {
        Self::new(spec.provider.resolve(spec.k)?, spec.window)
    }

    pub fn provider(&self) -> &SequenceProvider {
        &self.provider
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Label graph on `{0,1,2,3}`; state `i` is vertex `i - B`.
    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    /// `x_b`, for `-B <= b < B`.
    pub fn x(&self, b: i64) -> Option<Symbol> {
        let i = b + self.radius as i64;
        (0..self.x.len() as i64).contains(&i).then(|| self.x[i as usize])
    }

    pub fn x_window(&self) -> Word {
        Word::new(self.x.clone())
    }

    /// Starts from which every walk of length `n` stays in the window.
    pub fn safe_range(&self, n: usize) -> Result<std::ops::RangeInclusive<i64>> {
        if n > self.radius {
            return Err(Error::OutsideWindow {
                needed: n,
                radius: self.radius,
            });
        }
        let b = self.radius as i64;
        let n = n as i64;
        Ok(-b + n..=b - n)
    }

    /// The walk labeled `u` from `start`, if it exists inside the window.
    pub fn walk(&self, start: i64, u: &Word) -> Option<WalkTrace> {
        let mut at = start;
        let (mut lo, mut hi) = (start, start);
        for &s in u.symbols() {
            match s {
                0 | 1 if self.x(at) == Some(s) => at += 1,
                2 | 3 if self.x(at - 1) == Some(s - 2) => at -= 1,
                _ => return None,
            }
            lo = lo.min(at);
            hi = hi.max(at);
        }
        let x_of_u: Word = (lo..hi).map(|b| self.x(b).unwrap()).collect();
        let y_of_u: Word = (lo..hi).rev().map(|b| self.x(b).unwrap() + 2).collect();
        if !(-(self.radius as i64)..=self.radius as i64).contains(&start) {
            return None;
        }
        Some(WalkTrace {
            label: u.clone(),
            start_vertex: start,
            end_vertex: at,
            m_u: lo,
            big_m_u: hi,
            x_of_u,
            y_of_u,
        })
    }

    pub fn walks(&self, u: &Word) -> Vec<WalkTrace> {
        let b = self.radius as i64;
        (-b..=b).filter_map(|s| self.walk(s, u)).collect()
    }
}

/// Labels of the length-`n` walks starting in the safe range.
pub fn cover_language(sys: &LineCoverSystem, n: usize) -> Result<BTreeSet<Word>> {
    let safe = sys.safe_range(n)?;
    let g = sys.graph();
    let mut from = g.empty_set();
    for b in safe {
        from.insert((b + sys.radius as i64) as usize);
    }
    let mut out = BTreeSet::new();
    let mut stack = vec![(Word::empty(), from)];
    while let Some((w, set)) = stack.pop() {
        if set.is_clear() {
            continue;
        }
        if w.len() == n {
            out.insert(w);
            continue;
        }
        for s in 0..4 {
            let mut next = w.clone();
            next.push(s);
            stack.push((next, g.step(&set, s)));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PeriodicLabel {
    /// Least rotation of the primitive root.
    pub word: Word,
    pub least_period: usize,
}

/// Periodic points read off closed walks of length at most `p`.
pub fn cover_periodic(sys: &LineCoverSystem, p: usize) -> Result<Vec<PeriodicLabel>> {
    let half = p.div_ceil(2);
    let safe = sys.safe_range(half)?;
    let found: BTreeSet<PeriodicLabel> = safe
        .collect::<Vec<_>>()
        .into_par_iter()
        .flat_map_iter(|start| {
            let mut local = BTreeSet::new();
            let mut stack = vec![(Word::empty(), start)];
            while let Some((w, at)) = stack.pop() {
                if !w.is_empty() && at == start {
                    let root = w.primitive_root().min_rotation();
                    local.insert(PeriodicLabel {
                        least_period: root.len(),
                        word: root,
                    });
                }
                if w.len() == p {
                    continue;
                }
                if let Some(s) = sys.x(at) {
                    let mut next = w.clone();
                    next.push(s);
                    stack.push((next, at + 1));
                }
                if let Some(s) = sys.x(at - 1) {
                    let mut next = w.clone();
                    next.push(s + 2);
                    stack.push((next, at - 1));
                }
            }
            local
        })
        .collect();
    Ok(found.into_iter().collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkConsistency {
    pub max_len: usize,
    pub words_checked: usize,
    pub multiply_realized: usize,
    pub violations: Vec<Word>,
}

/// Checks that all walks sharing a label agree on `x(u)` and `y(u)`, for
/// every window label word up to `max_len`.
pub fn check_walk_consistency(sys: &LineCoverSystem, max_len: usize) -> Result<WalkConsistency> {
    let words: Vec<Word> = (1..=max_len)
        .map(|n| cover_language(sys, n))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let results: Vec<(bool, bool)> = words
        .par_iter()
        .map(|u| {
            let walks = sys.walks(u);
            let multi = walks.len() >= 2;
            let ok = walks
                .windows(2)
                .all(|p| p[0].x_of_u == p[1].x_of_u && p[0].y_of_u == p[1].y_of_u);
            (multi, ok)
        })
        .collect();
    Ok(WalkConsistency {
        max_len,
        words_checked: words.len(),
        multiply_realized: results.iter().filter(|r| r.0).count(),
        violations: words
            .iter()
            .zip(&results)
            .filter(|(_, r)| !r.1)
            .map(|(u, _)| u.clone())
            .collect(),
    })
}

/// Periodic labels `u` with a closed walk whose `x(u)^3` occurs in the
/// x-window. Empty for aperiodic cube-free sequences.
pub fn cubed_traces(sys: &LineCoverSystem, p: usize) -> Result<Vec<(Word, Word)>> {
    let xw = sys.x_window();
    let mut out = Vec::new();
    for label in cover_periodic(sys, p)? {
        let traces: BTreeSet<Word> = sys
            .walks(&label.word)
            .into_iter()
            .filter(|t| t.end_vertex == t.start_vertex)
            .map(|t| t.x_of_u)
            .collect();
        for x in traces {
            if !x.is_empty() && x.pow(3).is_factor_of(&xw) {
                out.push((label.word.clone(), x));
            }
        }
    }
    Ok(out)
}

/// Return set evidence from walks inside the window. Never certifies.
/// Window walks are walks of the full cover, so every reported member is
/// genuine at any horizon; a larger window can only add members.
pub fn cover_return_set(sys: &LineCoverSystem, u: &Word, v: &Word, horizon: usize) -> Result<ReturnSetReport> {
    empirical_return_set(sys.graph(), u, v, horizon)
}

/// Edge shift of the window `[-B, B]` with one symbol per edge.
#[derive(Debug, Clone)]
pub struct SftWindow {
    pub radius: usize,
    pub edge_shift: LabeledGraph,
    /// Edge symbol to its `{0,1,2,3}` label.
    pub labels: Vec<Symbol>,
}

/// `0, -1, 1, -2, …` ↦ `0, 1, 2, 3, …`, so windows nest as prefixes.
fn zigzag(b: i64) -> usize {
    if b >= 0 {
        2 * b as usize
    } else {
        (-2 * b - 1) as usize
    }
}

/// Edge symbol of the edge between `b` and `b + 1`; `backward` selects the
/// left-going copy.
pub fn edge_symbol(b: i64, backward: bool) -> Symbol {
    (2 * zigzag(b) + backward as usize) as Symbol
}

pub fn sft_window(sys: &LineCoverSystem, radius: usize) -> Result<SftWindow> {
    if radius == 0 || radius > sys.radius {
        return Err(Error::OutsideWindow {
            needed: radius,
            radius: sys.radius,
        });
    }
    if 4 * radius > MAX_ALPHABET {
        return Err(Error::InvalidArgument(format!(
            "edge shift of radius {radius} needs {} symbols, at most {MAX_ALPHABET} supported",
            4 * radius
        )));
    }
    let b = radius as i64;
    let mut edges = Vec::new();
    let mut labels = vec![0; 4 * radius];
    for v in -b..b {
        let i = (v + b) as usize;
        let x = sys.x(v).expect("inside the materialized window");
        for backward in [false, true] {
            let sym = edge_symbol(v, backward);
            labels[sym as usize] = x + 2 * backward as Symbol;
            let (from, to) = if backward { (i + 1, i) } else { (i, i + 1) };
            edges.push(Edge {
                from,
                symbol: sym,
                to,
            });
        }
    }
    Ok(SftWindow {
        radius,
        edge_shift: LabeledGraph::new(Alphabet::new(4 * radius)?, 2 * radius + 1, edges)?,
        labels,
    })
}
