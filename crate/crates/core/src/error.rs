use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown recogniser index {index} (framework has {count})")]
    UnknownRecogniser { index: usize, count: usize },
    #[error("object outside the framework's domain: {0}")]
    OutsideDomain(String),
    #[error("accepted value {value} is not in the value set of recogniser {index}")]
    InvalidLanguage { index: usize, value: String },
    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(char),
    #[error("alphabet mismatch between automata")]
    AlphabetMismatch,
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("invalid automaton: {0}")]
    InvalidDfa(String),
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    #[error("free variable `{0}` in sentence")]
    FreeVariable(String),
    #[error("relation `{name}` used with arity {used}, signature says {expected}")]
    ArityMismatch {
        name: String,
        used: usize,
        expected: usize,
    },
    #[error("relation `{0}` is not in the signature")]
    UnknownRelation(String),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("point {0} is not in the approximation space")]
    PointNotInSpace(String),
    #[error("no enumerated object within budget {budget} realizes point {point}")]
    NotFound { point: String, budget: usize },
    #[error("recogniser {0} is not a coordinate of the space")]
    CoordinateMissing(usize),
    #[error("no coordinate among the given indices separates {0} from every other object")]
    NoCharacteristicRecogniser(String),
    #[error("space has {points} points; exhaustive scan is limited to {limit}")]
    SpaceTooLarge { points: usize, limit: usize },
    #[error(
        "structures of size {size} need {bits} interpretation bits; at most {limit} supported"
    )]
    EnumerationTooLarge {
        size: usize,
        bits: usize,
        limit: usize,
    },
    #[error("not a permutation of the index list")]
    NotAPermutation,
    #[error("point set refers to index {index} in a space of {len} points")]
    PointIndexOutOfRange { index: usize, len: usize },
}
