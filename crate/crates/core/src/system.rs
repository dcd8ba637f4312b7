//! System files: one JSON object naming an alphabet and exactly one of a
//! generator list, a generator family, a half-synchronized `(m, U)` pair or
//! a line cover.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cover::{CoverSpec, LineCoverSystem};
use crate::error::{Error, Result};
use crate::flower::{build_flower, FlowerAutomaton};
use crate::generators::{FamilyRule, GeneratorFamily, GeneratorSet};
use crate::syncsys::{build_half_sync, HalfSyncSpec};
use crate::words::{Alphabet, Word};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Defaults {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub horizon: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub word_length: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub level: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k_max: Option<usize>,
}

impl Defaults {
    fn is_empty(&self) -> bool {
        *self == Defaults::default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    #[serde(flatten)]
    pub rule: FamilyRule,
    pub level: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    Generators(GeneratorSet),
    Family(GeneratorFamily),
    HalfSync(HalfSyncSpec),
    Cover(CoverSpec),
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::Generators(_) => "generators",
            Payload::Family(_) => "family",
            Payload::HalfSync(_) => "half_sync",
            Payload::Cover(_) => "cover",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemSpec {
    pub alphabet: Alphabet,
    pub payload: Payload,
    pub defaults: Defaults,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    alphabet: Alphabet,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    generators: Option<Vec<Word>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    family: Option<FamilySpec>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    half_sync: Option<HalfSyncSpec>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    cover: Option<CoverSpec>,
    #[serde(skip_serializing_if = "Defaults::is_empty", default)]
    defaults: Defaults,
}

fn located(field: &str, e: Error) -> Error {
    Error::Spec(format!("{field}: {e}"))
}

impl SystemSpec {
    fn from_raw(raw: RawSpec) -> Result<Self> {
        let alphabet = raw.alphabet;
        let present: Vec<&str> = [
            raw.generators.is_some().then_some("generators"),
            raw.family.is_some().then_some("family"),
            raw.half_sync.is_some().then_some("half_sync"),
            raw.cover.is_some().then_some("cover"),
        ]
        .into_iter()
        .flatten()
        .collect();
        if present.len() != 1 {
            return Err(Error::Spec(format!(
                "expected exactly one of generators, family, half_sync, cover; found {}",
                if present.is_empty() { "none".to_string() } else { present.join(", ") }
            )));
        }
        let payload = if let Some(words) = raw.generators {
            Payload::Generators(GeneratorSet::new(alphabet, words).map_err(|e| located("generators", e))?)
        } else if let Some(f) = raw.family {
            Payload::Family(GeneratorFamily::new(alphabet, f.rule, f.level).map_err(|e| located("family", e))?)
        } else if let Some(hs) = raw.half_sync {
            build_half_sync(alphabet, &hs, hs.level).map_err(|e| located("half_sync", e))?;
            Payload::HalfSync(hs)
        } else {
            let c = raw.cover.expect("one payload is present");
            if alphabet.size() != 4 {
                return Err(Error::Spec(format!(
                    "cover: the line cover is over 4 symbols, alphabet says {}",
                    alphabet.size()
                )));
            }
            if c.window == 0 {
                return Err(Error::Spec("cover.window: must be positive".into()));
            }
            c.provider.resolve(c.k).map_err(|e| located("cover.provider", e))?;
            Payload::Cover(c)
        };
        Ok(SystemSpec {
            alphabet,
            payload,
            defaults: raw.defaults,
        })
    }

    fn to_raw(&self) -> RawSpec {
        let mut raw = RawSpec {
            alphabet: self.alphabet,
            generators: None,
            family: None,
            half_sync: None,
            cover: None,
            defaults: self.defaults.clone(),
        };
        match &self.payload {
            Payload::Generators(g) => raw.generators = Some(g.words().to_vec()),
            Payload::Family(f) => {
                raw.family = Some(FamilySpec {
                    rule: f.rule.clone(),
                    level: f.level,
                })
            }
            Payload::HalfSync(h) => raw.half_sync = Some(h.clone()),
            Payload::Cover(c) => raw.cover = Some(c.clone()),
        }
        raw
    }

    /// Parses and validates; errors name the offending field and position.
    pub fn parse_str(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let raw: RawSpec = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            let (line, column) = (inner.line(), inner.column());
            let msg = inner.to_string();
            let msg = msg
                .strip_suffix(&format!(" at line {line} column {column}"))
                .unwrap_or(&msg);
            Error::Spec(format!(
                "{} (line {line}, column {column}): {msg}",
                if path == "." { "<root>" } else { path.as_str() },
            ))
        })?;
        Self::from_raw(raw)
    }

    pub fn render(&self) -> String {
        serde_json::to_string_pretty(&self.to_raw()).expect("plain data serializes")
    }

    /// The finite generator set at `level`, or the default level for
    /// families. Line covers have none.
    pub fn generator_set(&self, level: Option<usize>) -> Result<GeneratorSet> {
        match &self.payload {
            Payload::Generators(g) => Ok(g.clone()),
            Payload::Family(f) => f.at_level(level.unwrap_or(f.level)),
            Payload::HalfSync(h) => {
                let t = level.unwrap_or(h.level);
                build_half_sync(self.alphabet, h, t)?.at_level(t)
            }
            Payload::Cover(_) => Err(Error::InvalidArgument(
                "a line cover has no finite generator set; use the cover commands".into(),
            )),
        }
    }

    /// Truncation level in effect, if the system is a family.
    pub fn level(&self, requested: Option<usize>) -> Option<usize> {
        match &self.payload {
            Payload::Family(f) => Some(requested.unwrap_or(f.level)),
            Payload::HalfSync(h) => Some(requested.unwrap_or(h.level)),
            _ => None,
        }
    }

    pub fn flower(&self, level: Option<usize>) -> Result<FlowerAutomaton> {
        Ok(build_flower(&self.generator_set(level)?))
    }

    pub fn line_cover(&self) -> Result<LineCoverSystem> {
        match &self.payload {
            Payload::Cover(c) => LineCoverSystem::from_spec(c),
            other => Err(Error::InvalidArgument(format!(
                "the system is a {} payload, not a line cover",
                other.kind()
            ))),
        }
    }
}

impl std::str::FromStr for SystemSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_str(s)
    }
}

pub fn parse_spec(path: impl AsRef<Path>) -> Result<SystemSpec> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Spec(format!("{}: {e}", path.display())))?;
    SystemSpec::parse_str(&text)
}
