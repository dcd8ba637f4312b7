use thiserror::Error;

use crate::words::Word;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet size {0} is outside 1..=64")]
    InvalidAlphabet(usize),

    #[error("symbol {symbol} is not in an alphabet of size {size}")]
    SymbolOutOfRange { symbol: usize, size: usize },

    #[error("cannot read {0:?} as a word")]
    BadWord(String),

    #[error("empty word is not allowed as {0}")]
    EmptyWord(&'static str),

    #[error("generator set is empty")]
    EmptyGeneratorSet,

    #[error("words over different alphabets")]
    AlphabetMismatch,

    #[error("generator lengths have gcd {gcd}; no relatively prime pair can be built")]
    NotRelativelyPrime { gcd: usize },

    #[error("{a1} and {a2} are not coprime positive integers")]
    NotCoprime { a1: usize, a2: usize },

    #[error("word {0} is not in the language")]
    NotInLanguage(Word),

    #[error("suffix closure fails: {word} = {prefix}·m·{suffix} but {suffix} is not a stem")]
    ClosureViolation { word: Word, prefix: Word, suffix: Word },

    #[error("invalid substitution: {0}")]
    InvalidSubstitution(String),

    #[error("request needs radius {needed} but the window radius is {radius}")]
    OutsideWindow { needed: usize, radius: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("system file: {0}")]
    Spec(String),
}
