//! Command dispatch for the `codedshift` binary.

use anyhow::{anyhow, bail, Context, Result};
use clap::Subcommand;
use serde::Serialize;
use serde_json::{json, Value};

use codedshift::cover::{self, check_walk_consistency, cover_language, cover_periodic, sft_window};
use codedshift::dynamics::{classify, return_set, DynamicsVerdict, Verdict};
use codedshift::generators::{bezout_augment, frobenius_bound, gcd_lengths, represent};
use codedshift::property_p::{build_witness, verify_witness, TupleSelection};
use codedshift::syncsys::{is_synchronizing, synchronized_generator, verify_half_sync};
use codedshift::system::{Payload, SystemSpec};
use codedshift::words::Word;

pub mod render;

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Words of each length up to `--len`.
    Lang {
        #[arg(long)]
        len: Option<usize>,
    },
    /// Whether a word is admissible.
    Member {
        #[arg(long)]
        word: String,
    },
    /// Periodic points of least period at most `--period`.
    Periodic {
        #[arg(long)]
        period: usize,
    },
    /// Return-time set of two cylinders.
    ReturnSet {
        /// Word of the source cylinder at 0.
        #[arg(long)]
        u: String,
        /// Word of the target cylinder.
        #[arg(long)]
        v: String,
        /// Largest gap examined.
        #[arg(long)]
        horizon: Option<usize>,
    },
    /// Transitivity and mixing verdicts over all cylinder pairs.
    Classify {
        /// Cylinder word length.
        #[arg(long)]
        len: Option<usize>,
        #[arg(long)]
        horizon: Option<usize>,
        /// Largest step tested for total transitivity.
        #[arg(long)]
        k_max: Option<usize>,
        /// Include every per-pair return set in the report.
        #[arg(long)]
        certificates: bool,
    },
    /// Gcd of the generator lengths.
    Gcd,
    /// A pair of generator concatenations with coprime lengths.
    Augment,
    /// Least bound past which every integer is a combination of a1 and a2.
    Frobenius {
        #[arg(long)]
        a1: usize,
        #[arg(long)]
        a2: usize,
    },
    /// Builds and checks a strong property P witness.
    PropertyP {
        /// Comma-separated cylinder words.
        #[arg(long)]
        words: String,
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Check this many random tuples instead of all of them.
        #[arg(long, requires = "seed")]
        sample: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Whether a word is synchronizing.
    SyncWord {
        #[arg(long)]
        word: String,
        /// Longest context word searched.
        #[arg(long, default_value_t = 6)]
        bound: usize,
    },
    /// Generators `wα` built from a synchronizing word.
    SyncGen {
        #[arg(long)]
        alpha: String,
        /// Longest generator produced.
        #[arg(long)]
        bound: usize,
    },
    /// Follower-set check of a half-synchronizing candidate.
    HalfSyncVerify {
        /// Candidate word; defaults to the marker of a half-sync system.
        #[arg(long)]
        m: Option<String>,
        /// Most generators per context.
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Window language of a line cover.
    CoverLang {
        #[arg(long)]
        len: usize,
    },
    /// Periodic labels of closed walks in the window.
    CoverPeriodic {
        #[arg(long)]
        period: usize,
        /// Also run the walk-consistency and cube checks up to this length.
        #[arg(long)]
        checks: Option<usize>,
    },
    /// Return-set evidence from window walks.
    CoverReturn {
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        #[arg(long)]
        horizon: usize,
    },
    /// Classifies the edge shift of a finite window.
    SftWindow {
        /// Window `-radius..=radius` of the line.
        #[arg(long)]
        radius: usize,
        #[arg(long, default_value_t = 1)]
        len: usize,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long, default_value_t = 2)]
        k_max: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Lang { .. } => "lang",
            Command::Member { .. } => "member",
            Command::Periodic { .. } => "periodic",
            Command::ReturnSet { .. } => "return-set",
            Command::Classify { .. } => "classify",
            Command::Gcd => "gcd",
            Command::Augment => "augment",
            Command::Frobenius { .. } => "frobenius",
            Command::PropertyP { .. } => "property-p",
            Command::SyncWord { .. } => "sync-word",
            Command::SyncGen { .. } => "sync-gen",
            Command::HalfSyncVerify { .. } => "half-sync-verify",
            Command::CoverLang { .. } => "cover-lang",
            Command::CoverPeriodic { .. } => "cover-periodic",
            Command::CoverReturn { .. } => "cover-return",
            Command::SftWindow { .. } => "sft-window",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Definite,
    Unknown,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Provenance {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word_length: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub system: Option<String>,
    pub provenance: Provenance,
    pub status: Status,
    pub result: Value,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Definite => 0,
            Status::Unknown => 2,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values serialize")
    }

    pub fn to_text(&self) -> String {
        render::text(&serde_json::to_value(self).expect("report values serialize"))
    }
}

const DEFAULT_WORD_LENGTH: usize = 3;
const DEFAULT_K_MAX: usize = 8;

fn word_of(spec: Option<&SystemSpec>, text: &str) -> Result<Word> {
    Ok(match spec {
        Some(s) => s.alphabet.parse_word(text)?,
        None => Word::parse(text)?,
    })
}

fn need_spec<'a>(spec: Option<&'a SystemSpec>, cmd: &Command) -> Result<&'a SystemSpec> {
    spec.ok_or_else(|| anyhow!("`{}` needs a system file (--spec)", cmd.name()))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

fn verdict_status(verdicts: &[Verdict]) -> Status {
    if verdicts.iter().all(|v| v.is_definite()) {
        Status::Definite
    } else {
        Status::Unknown
    }
}

fn dynamics_value(v: &DynamicsVerdict, certificates: bool) -> Value {
    let mut out = json!({
        "transitive": v.transitive,
        "totally_transitive": v.totally_transitive,
        "weak_mixing": v.weak_mixing,
        "mixing": v.mixing,
        "pairs": v.certificates.len(),
        "certified_pairs": v.certified_pairs,
        "counterexamples": v.counterexamples.iter().map(|(name, w)| json!({
            "property": name, "u": w.u, "v": w.v, "k": w.k,
        })).collect::<Vec<_>>(),
    });
    if certificates {
        out["certificates"] = to_value(&v.certificates);
    }
    out
}

/// Runs one command against an optional system file. `level` selects the
/// truncation of a generator family.
pub fn run(cmd: &Command, spec: Option<&SystemSpec>, level: Option<usize>) -> Result<Report> {
    let defaults = spec.map(|s| s.defaults.clone()).unwrap_or_default();
    let level = level.or(defaults.level);
    let mut prov = Provenance {
        level: spec.and_then(|s| s.level(level)),
        ..Provenance::default()
    };
    let mut status = Status::Definite;
    let result = match cmd {
        Command::Frobenius { a1, a2 } => {
            let bound = frobenius_bound(*a1, *a2)?;
            json!({
                "a1": a1,
                "a2": a2,
                "bound": bound,
                "largest_gap": bound.checked_sub(1),
                "bound_representation": represent(bound, *a1, *a2),
            })
        }
        Command::Lang { len } => {
            let fa = need_spec(spec, cmd)?.flower(level)?;
            let n = len.or(defaults.word_length).unwrap_or(DEFAULT_WORD_LENGTH);
            let table = fa.language(n);
            json!({
                "max_length": n,
                "counts": table.counts(),
                "words": table.words(n),
            })
        }
        Command::Member { word } => {
            let s = need_spec(spec, cmd)?;
            let w = word_of(spec, word)?;
            json!({ "word": w, "member": s.flower(level)?.contains(&w) })
        }
        Command::Periodic { period } => {
            let fa = need_spec(spec, cmd)?.flower(level)?;
            let points: Vec<Value> = fa
                .periodic_points(*period)
                .iter()
                .map(|w| json!({ "word": w, "least_period": w.len() }))
                .collect();
            json!({ "max_period": period, "count": points.len(), "points": points })
        }
        Command::ReturnSet { u, v, horizon } => {
            let fa = need_spec(spec, cmd)?.flower(level)?;
            let (u, v) = (word_of(spec, u)?, word_of(spec, v)?);
            let h = horizon.or(defaults.horizon).unwrap_or(64.max(u.len() + v.len()));
            prov.horizon = Some(h);
            let r = return_set(fa.graph(), &u, &v, h)?;
            status = verdict_status(&[r.cofinite]);
            to_value(&r)
        }
        Command::Classify {
            len,
            horizon,
            k_max,
            certificates,
        } => {
            let fa = need_spec(spec, cmd)?.flower(level)?;
            let l = len.or(defaults.word_length).unwrap_or(DEFAULT_WORD_LENGTH);
            let h = horizon
                .or(defaults.horizon)
                .unwrap_or((2 * l + 2 * fa.num_states() + 8).max(64));
            let k = k_max.or(defaults.k_max).unwrap_or(DEFAULT_K_MAX);
            prov.word_length = Some(l);
            prov.horizon = Some(h);
            prov.k_max = Some(k);
            let mut v = classify(fa.graph(), l, h, k)?;
            v.level = prov.level;
            status = verdict_status(&[v.transitive, v.totally_transitive, v.weak_mixing, v.mixing]);
            dynamics_value(&v, *certificates)
        }
        Command::Gcd => {
            let set = need_spec(spec, cmd)?.generator_set(level)?;
            json!({ "gcd": gcd_lengths(&set), "lengths": set.lengths() })
        }
        Command::Augment => {
            let set = need_spec(spec, cmd)?.generator_set(level)?;
            to_value(&bezout_augment(&set)?)
        }
        Command::PropertyP {
            words,
            k,
            sample,
            seed,
        } => {
            let fa = need_spec(spec, cmd)?.flower(level)?;
            let words = words
                .split(',')
                .map(|t| word_of(spec, t.trim()))
                .collect::<Result<Vec<_>>>()?;
            let witness = build_witness(&fa, &words)?;
            let selection = match (sample, seed) {
                (Some(count), Some(seed)) => {
                    prov.seed = Some(*seed);
                    TupleSelection::Sample { count: *count, seed: *seed }
                }
                (Some(_), None) => bail!("--sample needs --seed"),
                _ => TupleSelection::All,
            };
            let check = verify_witness(&fa, &witness, *k, selection)?;
            json!({ "witness": witness, "check": check })
        }
        Command::SyncWord { word, bound } => {
            let fa = need_spec(spec, cmd)?.flower(level)?;
            let r = is_synchronizing(fa.graph(), &word_of(spec, word)?, *bound)?;
            status = verdict_status(&[r.verdict]);
            to_value(&r)
        }
        Command::SyncGen { alpha, bound } => {
            let fa = need_spec(spec, cmd)?.flower(level)?;
            let set = synchronized_generator(fa.graph(), &word_of(spec, alpha)?, *bound)?;
            json!({ "bound": bound, "count": set.len(), "generators": set.words() })
        }
        Command::HalfSyncVerify { m, depth } => {
            let s = need_spec(spec, cmd)?;
            let m = match (m, &s.payload) {
                (Some(text), _) => word_of(spec, text)?,
                (None, Payload::HalfSync(h)) => h.m.clone(),
                (None, _) => bail!("--m is required unless the system is a half_sync payload"),
            };
            to_value(&verify_half_sync(&s.flower(level)?, &m, *depth)?)
        }
        Command::CoverLang { len } => {
            let sys = need_spec(spec, cmd)?.line_cover()?;
            let words = cover_language(&sys, *len)?;
            json!({ "length": len, "count": words.len(), "words": words })
        }
        Command::CoverPeriodic { period, checks } => {
            let sys = need_spec(spec, cmd)?.line_cover()?;
            let labels = cover_periodic(&sys, *period)?;
            let odd = labels.iter().filter(|p| p.least_period % 2 == 1).count();
            let mut out = json!({
                "max_period": period,
                "count": labels.len(),
                "odd_periods": odd,
                "labels": labels,
            });
            if let Some(n) = checks {
                out["walk_consistency"] = to_value(&check_walk_consistency(&sys, *n)?);
                out["cubed_traces"] = to_value(&cover::cubed_traces(&sys, *period)?);
            }
            out
        }
        Command::CoverReturn { u, v, horizon } => {
            let sys = need_spec(spec, cmd)?.line_cover()?;
            prov.horizon = Some(*horizon);
            let r = cover::cover_return_set(&sys, &word_of(spec, u)?, &word_of(spec, v)?, *horizon)?;
            status = verdict_status(&[r.cofinite]);
            to_value(&r)
        }
        Command::SftWindow {
            radius,
            len,
            horizon,
            k_max,
        } => {
            let sys = need_spec(spec, cmd)?.line_cover()?;
            let window = sft_window(&sys, *radius)?;
            let h = horizon.unwrap_or((2 * len + 4 * radius + 8).max(32));
            prov.word_length = Some(*len);
            prov.horizon = Some(h);
            prov.k_max = Some(*k_max);
            let v = classify(&window.edge_shift, *len, h, *k_max)
                .with_context(|| format!("classifying the radius-{radius} edge shift"))?;
            status = verdict_status(&[v.transitive, v.totally_transitive, v.weak_mixing, v.mixing]);
            let mut out = dynamics_value(&v, false);
            out["radius"] = json!(radius);
            out["states"] = json!(window.edge_shift.num_states());
            out["edges"] = json!(window.edge_shift.edges().len());
            out
        }
    };
    Ok(Report {
        command: cmd.name().to_string(),
        system: spec.map(|s| s.payload.kind().to_string()),
        provenance: prov,
        status,
        result,
    })
}
