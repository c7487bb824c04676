use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("feature token is empty")]
    EmptyFeature,
    #[error("explanation has no features")]
    EmptyExplanation,
    #[error("duplicate feature `{0}` (explanations must have unique features)")]
    DuplicateFeature(String),
    #[error("substitution at iteration {iteration} replaces `{token}` with itself")]
    SelfSubstitution { iteration: u32, token: String },
    #[error("substitution iterations must be positive and strictly increasing (got {got} after {previous})")]
    UnorderedSubstitutions { previous: u32, got: u32 },
    #[error("iteration {iteration}: `{replacement}` is already the endpoint of another substitution chain")]
    ConflictingChain { iteration: u32, replacement: String },
    #[error("`{origin}` maps to `{target}`, which is already claimed by another feature")]
    AmbiguousTarget { origin: String, target: String },
    #[error("embedding vector for `{0}` has zero norm")]
    ZeroVector(String),
    #[error("line {line}: {cause}")]
    MalformedLine { line: usize, cause: String },
    #[error("duplicate record id `{id}` on line {line}")]
    DuplicateId { id: String, line: usize },
    #[error("corpus contains no valid records")]
    EmptyCorpus,
    #[error("sensitivity analysis needs at least two providers, got {0}")]
    TooFewProviders(usize),
    #[error("no document token has a usable lexicon substitution")]
    NoCandidates,
    #[error("invalid measure `{0}` (expected jaccard, kendall, spearman or rbo@P)")]
    UnknownMeasure(String),
    #[error("invalid value: {0}")]
    InvalidValue(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
