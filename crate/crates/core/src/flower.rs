//! Exact language engine for `X(W)` with `W` finite.
//!
//! [`LabeledGraph`] is the general presentation: the language of the shift is
//! the set of labels of finite paths, which is exact whenever every state lies
//! on a cycle. [`FlowerAutomaton`] is the one-hub graph built from a generator
//! set, with one hub cycle per generator. Membership is decided by state-subset
//! simulation; no determinization is done here.

use std::collections::{BTreeMap, BTreeSet};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{gcd, GeneratorFamily, GeneratorSet};
use crate::words::{Alphabet, Symbol, Word};

pub type StateSet = FixedBitSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub from: usize,
    pub symbol: Symbol,
    pub to: usize,
}

#[derive(Debug, Clone)]
pub struct LabeledGraph {
    alphabet: Alphabet,
    num_states: usize,
    edges: Vec<Edge>,
    outgoing: Vec<Vec<usize>>,
    incoming: Vec<Vec<usize>>,
}

impl LabeledGraph {
    pub fn new(alphabet: Alphabet, num_states: usize, edges: Vec<Edge>) -> Result<Self> {
        let mut outgoing = vec![Vec::new(); num_states];
        let mut incoming = vec![Vec::new(); num_states];
        for (i, e) in edges.iter().enumerate() {
            if e.from >= num_states || e.to >= num_states {
                return Err(Error::InvalidArgument(format!(
                    "edge {i} leaves the {num_states} states"
                )));
            }
            if e.symbol as usize >= alphabet.size() {
                return Err(Error::SymbolOutOfRange {
                    symbol: e.symbol as usize,
                    size: alphabet.size(),
                });
            }
            outgoing[e.from].push(i);
            incoming[e.to].push(i);
        }
        Ok(LabeledGraph {
            alphabet,
            num_states,
            edges,
            outgoing,
            incoming,
        })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn outgoing(&self, state: usize) -> impl Iterator<Item = &Edge> {
        self.outgoing[state].iter().map(move |&i| &self.edges[i])
    }

    pub fn empty_set(&self) -> StateSet {
        FixedBitSet::with_capacity(self.num_states)
    }

    pub fn all_states(&self) -> StateSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    pub fn singleton(&self, state: usize) -> StateSet {
        let mut s = self.empty_set();
        s.insert(state);
        s
    }

    /// States reached from `set` by one edge labeled `symbol`.
    pub fn step(&self, set: &StateSet, symbol: Symbol) -> StateSet {
        let mut out = self.empty_set();
        for q in set.ones() {
            for e in self.outgoing(q) {
                if e.symbol == symbol {
                    out.insert(e.to);
                }
            }
        }
        out
    }

    /// States with an edge labeled `symbol` into `set`.
    pub fn step_back(&self, set: &StateSet, symbol: Symbol) -> StateSet {
        let mut out = self.empty_set();
        for q in set.ones() {
            for &i in &self.incoming[q] {
                let e = &self.edges[i];
                if e.symbol == symbol {
                    out.insert(e.from);
                }
            }
        }
        out
    }

    /// States reached from `set` by one edge with any label.
    pub fn successors(&self, set: &StateSet) -> StateSet {
        let mut out = self.empty_set();
        for q in set.ones() {
            for e in self.outgoing(q) {
                out.insert(e.to);
            }
        }
        out
    }

    pub fn run(&self, from: &StateSet, w: &Word) -> StateSet {
        let mut cur = from.clone();
        for &s in w.symbols() {
            if cur.is_clear() {
                break;
            }
            cur = self.step(&cur, s);
        }
        cur
    }

    /// Terminal states of the paths labeled `w`.
    pub fn end_states(&self, w: &Word) -> StateSet {
        self.run(&self.all_states(), w)
    }

    /// Initial states of the paths labeled `w`.
    pub fn start_states(&self, w: &Word) -> StateSet {
        let mut cur = self.all_states();
        for &s in w.symbols().iter().rev() {
            if cur.is_clear() {
                break;
            }
            cur = self.step_back(&cur, s);
        }
        cur
    }

    /// Whether some path carries the label `w`.
    pub fn contains(&self, w: &Word) -> bool {
        if w.max_symbol().is_some_and(|s| s as usize >= self.alphabet.size()) {
            return false;
        }
        !self.end_states(w).is_clear()
    }

    pub fn check_member(&self, w: &Word) -> Result<()> {
        if self.contains(w) {
            Ok(())
        } else {
            Err(Error::NotInLanguage(w.clone()))
        }
    }

    /// Exact `L_m` for all `1 <= m <= n`.
    pub fn language(&self, n: usize) -> LanguageTable {
        let mut by_length = BTreeMap::new();
        let mut frontier: Vec<(Word, StateSet)> = vec![(Word::empty(), self.all_states())];
        for len in 1..=n {
            let mut next = Vec::new();
            for (w, set) in &frontier {
                for a in self.alphabet.symbols() {
                    let s = self.step(set, a);
                    if !s.is_clear() {
                        let mut ext = w.clone();
                        ext.push(a);
                        next.push((ext, s));
                    }
                }
            }
            by_length.insert(len, next.iter().map(|(w, _)| w.clone()).collect());
            frontier = next;
        }
        LanguageTable {
            max_length: n,
            by_length,
        }
    }

    /// Whether `u^∞` is a point of the shift: the relation "a path labeled
    /// `u` runs from `q` to `q′`" must contain a cycle.
    pub fn is_periodic_label(&self, u: &Word) -> bool {
        if u.is_empty() {
            return false;
        }
        // Images of the full set under the relation shrink until they settle;
        // a non-empty fixed set is exactly a union of cycles and their tails.
        let mut cur = self.all_states();
        loop {
            let next = self.run(&cur, u);
            if next.is_clear() {
                return false;
            }
            if next == cur {
                return true;
            }
            cur = next;
        }
    }

    /// Periodic points of least period at most `p`, each as the least
    /// rotation of its primitive period block, ordered shortlex.
    pub fn periodic_points(&self, p: usize) -> Vec<Word> {
        let lang = self.language(p);
        (1..=p)
            .flat_map(|q| lang.words(q).iter())
            .filter(|u| u.is_lyndon() && self.is_periodic_label(u))
            .cloned()
            .collect()
    }

    /// Every state lies on some cycle.
    pub fn is_essential(&self) -> bool {
        (0..self.num_states).all(|q| {
            let start = self.singleton(q);
            let mut seen = self.empty_set();
            let mut cur = self.successors(&start);
            while !cur.is_clear() {
                if cur.contains(q) {
                    return true;
                }
                seen.union_with(&cur);
                let mut next = self.successors(&cur);
                next.difference_with(&seen);
                cur = next;
            }
            false
        })
    }
}

/// `L_m` for `1 <= m <= max_length`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LanguageTable {
    pub max_length: usize,
    pub by_length: BTreeMap<usize, BTreeSet<Word>>,
}

impl LanguageTable {
    pub fn words(&self, n: usize) -> &BTreeSet<Word> {
        static EMPTY: BTreeSet<Word> = BTreeSet::new();
        self.by_length.get(&n).unwrap_or(&EMPTY)
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words(w.len()).contains(w)
    }

    pub fn counts(&self) -> Vec<usize> {
        (1..=self.max_length).map(|n| self.words(n).len()).collect()
    }

    pub fn is_subset(&self, other: &LanguageTable) -> bool {
        self.by_length
            .iter()
            .all(|(n, ws)| ws.is_subset(other.words(*n)))
    }
}

/// Hub state plus one cycle per generator word.
#[derive(Debug, Clone)]
pub struct FlowerAutomaton {
    graph: LabeledGraph,
    origin: GeneratorSet,
    level: Option<usize>,
    /// For each state other than the hub: `(generator index, depth)`.
    petal: Vec<Option<(usize, usize)>>,
    /// For each edge: `(generator index, position in the word)`.
    edge_origin: Vec<(usize, usize)>,
}

pub const HUB: usize = 0;

pub fn build_flower(w: &GeneratorSet) -> FlowerAutomaton {
    let mut edges = Vec::new();
    let mut edge_origin = Vec::new();
    let mut petal = vec![None];
    for (gi, word) in w.words().iter().enumerate() {
        let mut prev = HUB;
        for (pos, &sym) in word.symbols().iter().enumerate() {
            let to = if pos + 1 == word.len() {
                HUB
            } else {
                petal.push(Some((gi, pos + 1)));
                petal.len() - 1
            };
            edges.push(Edge {
                from: prev,
                symbol: sym,
                to,
            });
            edge_origin.push((gi, pos));
            prev = to;
        }
    }
    let graph = LabeledGraph::new(w.alphabet(), petal.len(), edges)
        .expect("generator words are checked against the alphabet");
    FlowerAutomaton {
        graph,
        origin: w.clone(),
        level: None,
        petal,
        edge_origin,
    }
}

/// Flower automaton of the family truncation `W_t`, tagged with `t`.
pub fn build_flower_at_level(family: &GeneratorFamily, t: usize) -> Result<FlowerAutomaton> {
    let set = family.at_level(t)?;
    let mut fa = build_flower(&set);
    fa.level = Some(t);
    Ok(fa)
}

impl FlowerAutomaton {
    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    pub fn origin(&self) -> &GeneratorSet {
        &self.origin
    }

    pub fn level(&self) -> Option<usize> {
        self.level
    }

    pub fn num_states(&self) -> usize {
        self.graph.num_states()
    }

    pub fn num_edges(&self) -> usize {
        self.graph.edges().len()
    }

    /// `(generator index, depth)` of a petal state; `None` for the hub.
    pub fn petal(&self, state: usize) -> Option<(usize, usize)> {
        self.petal[state]
    }

    pub fn edge_origin(&self, edge: usize) -> (usize, usize) {
        self.edge_origin[edge]
    }

    /// Cyclic class of a state modulo the graph period `gcd(W)`.
    pub fn phase(&self, state: usize) -> usize {
        let g = self.period();
        self.petal[state].map_or(0, |(_, d)| d % g)
    }

    /// Period of the underlying graph: the gcd of its hub cycle lengths.
    pub fn period(&self) -> usize {
        self.origin.lengths().into_iter().fold(0, gcd)
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.graph.contains(w)
    }

    pub fn language(&self, n: usize) -> LanguageTable {
        self.graph.language(n)
    }

    pub fn periodic_points(&self, p: usize) -> Vec<Word> {
        self.graph.periodic_points(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flower(words: &[&str]) -> FlowerAutomaton {
        build_flower(&GeneratorSet::from_digits(2, words).unwrap())
    }

    fn w(s: &str) -> Word {
        Word::from_digits(s).unwrap()
    }

    fn shown(ws: &[Word]) -> Vec<String> {
        ws.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn build_examples() {
        let a = flower(&["0"]);
        assert_eq!((a.num_states(), a.num_edges()), (1, 1));
        let even = flower(&["0", "11"]);
        assert_eq!((even.num_states(), even.num_edges()), (2, 3));
        let alt = flower(&["01"]);
        assert_eq!((alt.num_states(), alt.num_edges()), (2, 2));
        assert!(even.graph().is_essential());
    }

    #[test]
    fn membership_examples() {
        let even = flower(&["0", "11"]);
        assert!(even.contains(&w("0110")));
        assert!(!even.contains(&w("010")));
        assert!(even.contains(&w("101")));
        assert!(!flower(&["01"]).contains(&w("00")));
    }

    #[test]
    fn language_examples() {
        let alt = flower(&["01"]);
        let l2: Vec<String> = alt.language(2).words(2).iter().map(|x| x.to_string()).collect();
        assert_eq!(l2, vec!["01", "10"]);
        assert_eq!(flower(&["0", "1"]).language(3).words(3).len(), 8);
        let even = flower(&["0", "11"]).language(3);
        assert_eq!(even.words(3).len(), 7);
        assert!(!even.contains(&w("010")));
    }

    #[test]
    fn periodic_examples() {
        assert_eq!(shown(&flower(&["01"]).periodic_points(2)), vec!["01"]);
        assert_eq!(shown(&flower(&["0", "11"]).periodic_points(2)), vec!["0", "1"]);
        assert_eq!(shown(&flower(&["0", "1"]).periodic_points(1)), vec!["0", "1"]);
    }

    #[test]
    fn phases_follow_depth() {
        let fa = flower(&["00", "0000"]);
        assert_eq!(fa.period(), 2);
        let phases: Vec<usize> = (0..fa.num_states()).map(|q| fa.phase(q)).collect();
        assert_eq!(phases, vec![0, 1, 1, 0, 1]);
    }

    #[test]
    fn start_and_end_states() {
        let even = flower(&["0", "11"]);
        assert_eq!(even.graph().end_states(&w("01")).ones().collect::<Vec<_>>(), vec![1]);
        assert_eq!(even.graph().start_states(&w("10")).ones().collect::<Vec<_>>(), vec![1]);
    }
}
