//! Acceptance suite: one line per criterion, non-zero exit on any failure.

mod common;

use std::collections::BTreeSet;
use std::path::Path;
use std::time::Instant;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use codedshift::cover::{
    check_walk_consistency, cover_periodic, cover_return_set, cubed_traces, sft_window, LineCoverSystem,
    SequenceProvider,
};
use codedshift::dynamics::{classify, Verdict};
use codedshift::flower::build_flower;
use codedshift::generators::{bezout_augment, frobenius_bound, gcd, gcd_lengths, AugmentKind, GeneratorSet};
use codedshift::property_p::{build_witness, verify_witness, TupleSelection};
use codedshift::syncsys::synchronized_generator;
use codedshift::system::parse_spec;
use codedshift::words::{Alphabet, Word};

use common::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn engine_languages(set: &GeneratorSet, n: usize) -> Vec<BTreeSet<Sym>> {
    let table = build_flower(set).language(n);
    (0..=n)
        .map(|m| if m == 0 { [vec![]].into() } else { words_to_raw(table.words(m)) })
        .collect()
}

fn language_engine_matches_oracle() -> Outcome {
    let words = all_words(3, 4);
    let mut corpus = BTreeSet::new();
    for i in 0..words.len() {
        corpus.insert(canonical_under_renaming(&[words[i].clone()]));
        for j in i + 1..words.len() {
            corpus.insert(canonical_under_renaming(&[words[i].clone(), words[j].clone()]));
            for k in j + 1..words.len() {
                corpus.insert(canonical_under_renaming(&[
                    words[i].clone(),
                    words[j].clone(),
                    words[k].clone(),
                ]));
            }
        }
    }
    let mut mismatches = Vec::new();
    for gens in &corpus {
        let engine = engine_languages(&to_set(3, gens), 8);
        let oracle = languages_upto(gens, 8);
        if engine != oracle {
            mismatches.push(gens.clone());
        }
    }
    outcome(
        mismatches.is_empty(),
        format!(
            "{} generator sets up to renaming, n <= 8, {} mismatches",
            corpus.len(),
            mismatches.len()
        ),
    )
}

fn frobenius_matches_brute_force() -> Outcome {
    let mut pairs = 0;
    let mut bad = Vec::new();
    for a2 in 2..=12 {
        for a1 in 1..a2 {
            if gcd(a1, a2) != 1 {
                continue;
            }
            pairs += 1;
            let got = frobenius_bound(a1, a2).unwrap();
            if got != frobenius(a1, a2) || got != (a1 - 1) * (a2 - 1) {
                bad.push((a1, a2));
            }
        }
    }
    outcome(bad.is_empty(), format!("{pairs} coprime pairs, {} disagreements", bad.len()))
}

fn random_word(rng: &mut ChaCha8Rng, len: usize) -> Word {
    (0..len).map(|_| rng.random_range(0..2u8)).collect()
}

fn augmentation_keeps_language() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut failures = Vec::new();
    let mut sets = 0;
    while sets < 25 {
        let k = rng.random_range(3..=4);
        let lengths: Vec<usize> = (0..k).map(|_| rng.random_range(2..=15)).collect();
        let pairwise = (0..k).all(|i| (i + 1..k).all(|j| gcd(lengths[i], lengths[j]) > 1));
        if !pairwise || lengths.iter().copied().fold(0, gcd) != 1 {
            continue;
        }
        let words: Vec<Word> = lengths.iter().map(|&l| random_word(&mut rng, l)).collect();
        let Ok(set) = GeneratorSet::new(Alphabet::new(2).unwrap(), words) else {
            continue;
        };
        sets += 1;
        let aug = bezout_augment(&set).unwrap();
        let [a, b] = &aug.added;
        let coprime = aug.kind == AugmentKind::Built && gcd(a.len(), b.len()) == 1;
        let parsed = aug.added.iter().all(|x| parses(&raw(&set), x.symbols()));
        let extended = aug.augmented();
        let same = engine_languages(&set, 8) == engine_languages(&extended, 8)
            && languages_upto(&raw(&extended), 8) == languages_upto(&raw(&set), 8);
        if !(coprime && parsed && same) {
            failures.push(set.lengths());
        }
    }
    outcome(
        failures.is_empty(),
        format!("{sets} seeded sets, {} failures", failures.len()),
    )
}

fn mixing_iff_totally_transitive() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut certified, mut mixing, mut discrepancies) = (0, 0, 0);
    for _ in 0..50 {
        let period = *[1usize, 1, 2, 3].choose(&mut rng).unwrap();
        let count = rng.random_range(1..=4);
        let words: BTreeSet<Word> = (0..count)
            .map(|_| {
                let len = period * rng.random_range(1..=(6 / period).max(1));
                random_word(&mut rng, len)
            })
            .collect();
        let set = GeneratorSet::new(Alphabet::new(2).unwrap(), words.into_iter().collect()).unwrap();
        let v = classify(build_flower(&set).graph(), 2, 64, 6).unwrap();
        if v.mixing.is_definite() && v.totally_transitive.is_definite() {
            certified += 1;
            mixing += (v.mixing == Verdict::Yes) as usize;
            if v.mixing != v.totally_transitive {
                discrepancies += 1;
            }
        }
    }
    outcome(
        discrepancies == 0,
        format!("50 seeded sets, {certified} certified ({mixing} mixing), {discrepancies} discrepancies"),
    )
}

fn property_p_witness() -> Outcome {
    let set = GeneratorSet::from_digits(2, &["0", "11"]).unwrap();
    let fa = build_flower(&set);
    let words = [w("0"), w("1"), w("110")];
    let wit = build_witness(&fa, &words).unwrap();
    let mut checked = 0;
    let mut failed = 0;
    for k in [2, 3] {
        let c = verify_witness(&fa, &wit, k, TupleSelection::All).unwrap();
        checked += c.tuples_checked;
        failed += (!c.passed) as usize;
    }
    for k in [4, 5, 6] {
        let c = verify_witness(&fa, &wit, k, TupleSelection::Sample { count: 100, seed: 5 + k as u64 }).unwrap();
        checked += c.tuples_checked;
        failed += (!c.passed) as usize;
    }
    let blocks_parse = wit.blocks.iter().all(|b| parses(&raw(&set), b.symbols()));
    outcome(
        failed == 0 && blocks_parse,
        format!(
            "N = {}, l = {}, {checked} tuples over k = 2..6, {failed} failing k values",
            wit.block_len, wit.prefix_len
        ),
    )
}

fn synchronized_generator_regenerates() -> Outcome {
    let even = GeneratorSet::from_digits(2, &["0", "11"]).unwrap();
    let fa = build_flower(&even);
    let gen = synchronized_generator(fa.graph(), &w("0"), 9).unwrap();
    let same_engine = engine_languages(&gen, 8) == engine_languages(&even, 8);
    let same_oracle = languages_upto(&raw(&gen), 8) == languages_upto(&raw(&even), 8);
    outcome(
        same_engine && same_oracle,
        format!("{} generators up to length 9, languages equal to length 8: {}", gen.len(), same_engine && same_oracle),
    )
}

fn half_sync_mixing_iff_coprime() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/half_sync");
    let mut paths: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    paths.sort();
    let (mut certified, mut uncertified, mut discrepancies) = (0, 0, Vec::new());
    for path in &paths {
        let spec = parse_spec(path).unwrap();
        for t in 4..=8 {
            let set = spec.generator_set(Some(t)).unwrap();
            let v = classify(build_flower(&set).graph(), 3, 96, 8).unwrap();
            match v.mixing {
                Verdict::Unknown => uncertified += 1,
                m => {
                    certified += 1;
                    if (m == Verdict::Yes) != (gcd_lengths(&set) == 1) {
                        discrepancies.push(format!(
                            "{}@{t}",
                            path.file_stem().unwrap().to_string_lossy()
                        ));
                    }
                }
            }
        }
    }
    outcome(
        discrepancies.is_empty(),
        format!(
            "{} families x levels 4..8: {certified} certified, {uncertified} unknown, discrepancies {:?}",
            paths.len(),
            discrepancies
        ),
    )
}

fn line_cover_parity() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for provider in [SequenceProvider::thue_morse(), SequenceProvider::fibonacci()] {
        let sys = LineCoverSystem::new(provider.clone(), 64).unwrap();
        let labels = cover_periodic(&sys, 12).unwrap();
        let odd = labels.iter().filter(|l| l.least_period % 2 == 1).count();
        let walks = check_walk_consistency(&sys, 8).unwrap();
        let cubes = cubed_traces(&sys, 12).unwrap();
        let cube_ok = provider.name != "thue-morse" || cubes.is_empty();
        pass &= odd == 0 && walks.violations.is_empty() && cube_ok;
        notes.push(format!(
            "{}: {} periodic labels, {odd} odd; {} multiply realized words, {} walk violations; {} cubed traces{}",
            provider.name,
            labels.len(),
            walks.multiply_realized,
            walks.violations.len(),
            cubes.len(),
            if provider.name == "thue-morse" { "" } else { " (not cube-free, informational)" },
        ));
    }
    outcome(pass, notes.join("; "))
}

fn window_edge_shifts() -> Outcome {
    let base = LineCoverSystem::new(SequenceProvider::thue_morse(), 8).unwrap();
    let mut pass = true;
    let mut verdicts = Vec::new();
    for b in [1, 2, 4, 8] {
        let window = sft_window(&base, b).unwrap();
        let v = classify(&window.edge_shift, 1, 64, 2).unwrap();
        let fails_at_two = v
            .counterexamples
            .iter()
            .any(|(name, c)| name == "totally_transitive" && c.k == Some(2));
        pass &= v.totally_transitive == Verdict::No && fails_at_two;
        verdicts.push(format!("B={b}:{}", v.totally_transitive));
    }
    let mut thick = Vec::new();
    for (u, v) in [("0", "0"), ("0", "2"), ("02", "20")] {
        let series: Vec<usize> = [1, 2, 4, 8]
            .iter()
            .map(|&b| {
                let sys = LineCoverSystem::new(SequenceProvider::thue_morse(), b).unwrap();
                cover_return_set(&sys, &w(u), &w(v), 32).unwrap().thickest_interval
            })
            .collect();
        pass &= series.windows(2).all(|p| p[0] <= p[1]);
        thick.push(format!("{u}->{v}: {series:?}"));
    }
    outcome(
        pass,
        format!("totally transitive {}; thickest at H=32 {}", verdicts.join(" "), thick.join(", ")),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("language engine equals the concatenation-factor oracle", language_engine_matches_oracle),
        ("two-coin Frobenius bound", frobenius_matches_brute_force),
        ("coprime augmentation preserves the language", augmentation_keeps_language),
        ("mixing iff totally transitive on seeded finite sets", mixing_iff_totally_transitive),
        ("strong property P witness for the even shift", property_p_witness),
        ("synchronized generator regenerates the even shift", synchronized_generator_regenerates),
        ("half-synchronized families: mixing iff coprime truncation", half_sync_mixing_iff_coprime),
        ("line cover: even periods, walk consistency, cube-free traces", line_cover_parity),
        ("window edge shifts fail total transitivity at k = 2", window_edge_shifts),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = check();
        failed += (!o.pass) as usize;
        println!(
            "{} criterion {}: {name} -- {} [{:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} of {} criteria passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
