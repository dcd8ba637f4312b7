//! Follower sets, synchronizing words and half-synchronized systems.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::dynamics::Verdict;
use crate::error::{Error, Result};
use crate::flower::{FlowerAutomaton, LabeledGraph, StateSet};
use crate::generators::{FamilyRule, GeneratorFamily, GeneratorSet, WordSource};
use crate::words::{Alphabet, Word};

/// Length-`depth` continuations of `base`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FollowerTable {
    pub base: Word,
    pub depth: usize,
    pub extensions: BTreeSet<Word>,
}

/// Words of length `depth` readable from some state of `from`.
pub fn followers_of_states(graph: &LabeledGraph, from: &StateSet, depth: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    let mut stack = vec![(Word::empty(), from.clone())];
    while let Some((word, set)) = stack.pop() {
        if set.is_clear() {
            continue;
        }
        if word.len() == depth {
            out.insert(word);
            continue;
        }
        for a in graph.alphabet().symbols() {
            let mut next = word.clone();
            next.push(a);
            stack.push((next, graph.step(&set, a)));
        }
    }
    out
}

pub fn follower_set(graph: &LabeledGraph, w: &Word, depth: usize) -> Result<FollowerTable> {
    graph.check_member(w)?;
    Ok(FollowerTable {
        base: w.clone(),
        depth,
        extensions: followers_of_states(graph, &graph.end_states(w), depth),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub u: Word,
    pub v: Word,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyncReport {
    pub word: Word,
    pub verdict: Verdict,
    /// `uw, wv` admissible but `uwv` not.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<Counterexample>,
    /// Whether the verdict came from the full context exploration rather
    /// than the bounded search.
    pub exact: bool,
}

const PAIR_BUDGET: usize = 200_000;
const CONTEXT_BUDGET: usize = 20_000;

struct OverBudget;

/// Shortest `v` readable from `wide` but not from `narrow`.
fn separating_word(
    graph: &LabeledGraph,
    wide: &StateSet,
    narrow: &StateSet,
    budget: &mut usize,
) -> std::result::Result<Option<Word>, OverBudget> {
    let mut seen: HashSet<(StateSet, StateSet)> = HashSet::new();
    let mut queue = VecDeque::from([(wide.clone(), narrow.clone(), Word::empty())]);
    seen.insert((wide.clone(), narrow.clone()));
    while let Some((a, b, word)) = queue.pop_front() {
        if b.is_clear() {
            return Ok(Some(word));
        }
        for s in graph.alphabet().symbols() {
            let na = graph.step(&a, s);
            if na.is_clear() {
                continue;
            }
            let nb = graph.step(&b, s);
            if seen.insert((na.clone(), nb.clone())) {
                if *budget == 0 {
                    return Err(OverBudget);
                }
                *budget -= 1;
                let mut next = word.clone();
                next.push(s);
                queue.push_back((na, nb, next));
            }
        }
    }
    Ok(None)
}

fn exact_sync(graph: &LabeledGraph, w: &Word) -> std::result::Result<Option<Counterexample>, OverBudget> {
    let ew = graph.end_states(w);
    let mut budget = PAIR_BUDGET;
    let mut seen = HashSet::new();
    let start = graph.all_states();
    seen.insert(start.clone());
    let mut queue = VecDeque::from([(start, Word::empty())]);
    while let Some((ctx, u)) = queue.pop_front() {
        let reached = graph.run(&ctx, w);
        if !reached.is_clear() {
            if let Some(v) = separating_word(graph, &ew, &reached, &mut budget)? {
                return Ok(Some(Counterexample { u, v }));
            }
        }
        for s in graph.alphabet().symbols() {
            let next = graph.step(&ctx, s);
            if !next.is_clear() && seen.insert(next.clone()) {
                if seen.len() > CONTEXT_BUDGET {
                    return Err(OverBudget);
                }
                let mut nu = u.clone();
                nu.push(s);
                queue.push_back((next, nu));
            }
        }
    }
    Ok(None)
}

/// Search over `u, v` of length at most `bound`.
pub fn bounded_sync_search(graph: &LabeledGraph, w: &Word, bound: usize) -> Option<Counterexample> {
    let table = graph.language(bound);
    let all: Vec<&Word> = (0..=bound).flat_map(|k| table.words(k)).collect();
    let lefts: Vec<&Word> = all.iter().copied().filter(|u| graph.contains(&u.concat(w))).collect();
    let rights: Vec<&Word> = all.iter().copied().filter(|v| graph.contains(&w.concat(v))).collect();
    for u in lefts {
        let uw = u.concat(w);
        for v in &rights {
            if !graph.contains(&uw.concat(v)) {
                return Some(Counterexample {
                    u: (*u).clone(),
                    v: (*v).clone(),
                });
            }
        }
    }
    None
}

/// Decides whether `w` is synchronizing: every left context must leave the
/// same continuations as `w` alone. Exact unless the exploration budget runs
/// out, in which case contexts of length at most `bound` are searched.
pub fn is_synchronizing(graph: &LabeledGraph, w: &Word, bound: usize) -> Result<SyncReport> {
    graph.check_member(w)?;
    let report = |verdict, counterexample, exact| SyncReport {
        word: w.clone(),
        verdict,
        counterexample,
        exact,
    };
    Ok(match exact_sync(graph, w) {
        Ok(None) => report(Verdict::Yes, None, true),
        Ok(Some(c)) => report(Verdict::No, Some(c), true),
        Err(OverBudget) => {
            log::warn!("synchronizing check for {w} exceeded its budget; bounded search only");
            match bounded_sync_search(graph, w, bound) {
                Some(c) => report(Verdict::No, Some(c), false),
                None => report(Verdict::Unknown, None, false),
            }
        }
    })
}

/// `{wα : αwα admissible, α not a factor of w, |wα| <= bound}`.
pub fn synchronized_generator(graph: &LabeledGraph, alpha: &Word, bound: usize) -> Result<GeneratorSet> {
    if alpha.is_empty() {
        return Err(Error::EmptyWord("the synchronizing word"));
    }
    graph.check_member(alpha)?;
    let mut found = Vec::new();
    if bound >= alpha.len() {
        let max_w = bound - alpha.len();
        let mut stack = vec![(Word::empty(), graph.end_states(alpha))];
        while let Some((w, set)) = stack.pop() {
            if !graph.run(&set, alpha).is_clear() {
                found.push(w.concat(alpha));
            }
            if w.len() == max_w {
                continue;
            }
            for s in graph.alphabet().symbols() {
                let mut next = w.clone();
                next.push(s);
                if alpha.is_factor_of(&next) {
                    continue;
                }
                let nset = graph.step(&set, s);
                if !nset.is_clear() {
                    stack.push((next, nset));
                }
            }
        }
    }
    found.sort();
    GeneratorSet::new(graph.alphabet(), found)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfSyncSpec {
    pub m: Word,
    #[serde(rename = "U")]
    pub stems: WordSource,
    pub level: usize,
}

/// Suffix closure of the stems up to length `t`: `u = u1·m·u2 ∈ U ⇒ u2 ∈ U`.
pub fn check_closure(alphabet: Alphabet, spec: &HalfSyncSpec, t: usize) -> Result<()> {
    let m = &spec.m;
    for u in spec.stems.enumerate(alphabet, m, t) {
        for i in u.occurrences(m) {
            let suffix = u.slice(i + m.len(), u.len());
            if !spec.stems.contains(alphabet, m, &suffix) {
                return Err(Error::ClosureViolation {
                    prefix: u.slice(0, i),
                    word: u,
                    suffix,
                });
            }
        }
    }
    Ok(())
}

/// `W_t = {u·m : u ∈ U, |u| <= t}` after checking suffix closure.
pub fn build_half_sync(alphabet: Alphabet, spec: &HalfSyncSpec, t: usize) -> Result<GeneratorFamily> {
    if spec.m.is_empty() {
        return Err(Error::EmptyWord("the marker m"));
    }
    alphabet.check(&spec.m)?;
    check_closure(alphabet, spec, t)?;
    GeneratorFamily::new(
        alphabet,
        FamilyRule::Suffixed {
            stems: spec.stems.clone(),
            suffix: spec.m.clone(),
        },
        t,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Consistency {
    Consistent,
    Inconsistent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfSyncCheck {
    pub m: Word,
    pub depth: usize,
    pub verdict: Consistency,
    pub contexts_checked: usize,
    /// A concatenation `c` whose `c·m` has other continuations than `m`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub offending_context: Option<Word>,
}

/// Compares the depth-`d` follower set of `m` with that of every `c·m`,
/// where `c` joins at most `d` generator words.
pub fn verify_half_sync(fa: &FlowerAutomaton, m: &Word, depth: usize) -> Result<HalfSyncCheck> {
    let graph = fa.graph();
    graph.check_member(m)?;
    let target = followers_of_states(graph, &graph.end_states(m), depth);
    let mut reps: HashMap<StateSet, Word> = HashMap::new();
    let mut frontier = vec![(graph.all_states(), Word::empty())];
    reps.insert(graph.all_states(), Word::empty());
    for _ in 0..depth {
        let mut next = Vec::new();
        for (set, c) in &frontier {
            for g in fa.origin().words() {
                let s = graph.run(set, g);
                if !s.is_clear() && !reps.contains_key(&s) {
                    let cg = c.concat(g);
                    reps.insert(s.clone(), cg.clone());
                    next.push((s, cg));
                }
            }
        }
        frontier = next;
    }
    let mut contexts: Vec<(Word, StateSet)> = reps.into_iter().map(|(s, c)| (c, s)).collect();
    contexts.sort_by(|a, b| a.0.cmp(&b.0));
    let mut checked = 0;
    for (c, set) in contexts {
        let reached = graph.run(&set, m);
        if reached.is_clear() {
            continue;
        }
        checked += 1;
        if followers_of_states(graph, &reached, depth) != target {
            return Ok(HalfSyncCheck {
                m: m.clone(),
                depth,
                verdict: Consistency::Inconsistent,
                contexts_checked: checked,
                offending_context: Some(c),
            });
        }
    }
    Ok(HalfSyncCheck {
        m: m.clone(),
        depth,
        verdict: Consistency::Consistent,
        contexts_checked: checked,
        offending_context: None,
    })
}
