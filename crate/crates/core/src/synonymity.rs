//! Synonymity providers: functions `Syn(a, b) -> [0, 1]` with `Syn(x, x) = 1`.
//!
//! Three constructions are available:
//!
//! * [`ExactMatch`] scores 1 for identical tokens and 0 otherwise. Weighted
//!   measures reduce to their standard counterparts under it.
//! * [`EmbeddingTable`] scores the cosine of two word vectors, clamped at 0.
//! * [`SynonymLexicon`] is dichotomous: 1 if `b` is listed as a synonym of
//!   the headword `a`, else 0.
//!
//! Providers are queried as `syn(origin, target)` only; symmetry is not
//! assumed. Out-of-vocabulary tokens score 0 against any different token.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::explanation::Feature;

pub trait Synonymity {
    fn syn(&self, origin: &Feature, target: &Feature) -> f64;
}

impl<F> Synonymity for F
where
    F: Fn(&Feature, &Feature) -> f64,
{
    fn syn(&self, origin: &Feature, target: &Feature) -> f64 {
        self(origin, target)
    }
}

/// Score used by the weighted measures: identity is always 1 and custom
/// providers are clamped into [0, 1].
pub(crate) fn credit<S: Synonymity + ?Sized>(provider: &S, a: &Feature, b: &Feature) -> f64 {
    if a == b {
        return 1.0;
    }
    let s = provider.syn(a, b);
    if s.is_nan() {
        0.0
    } else {
        s.clamp(0.0, 1.0)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExactMatch;

impl Synonymity for ExactMatch {
    fn syn(&self, origin: &Feature, target: &Feature) -> f64 {
        if origin == target {
            1.0
        } else {
            0.0
        }
    }
}

/// Word vectors keyed by case-folded token.
#[derive(Clone, Debug, Default)]
pub struct EmbeddingTable {
    dimension: usize,
    vectors: HashMap<String, Vec<f64>>,
    norms: HashMap<String, f64>,
}

impl EmbeddingTable {
    pub fn new(dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidValue("embedding dimension must be positive".into()));
        }
        Ok(Self {
            dimension,
            ..Self::default()
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Adds a vector. Zero-norm vectors and repeated folded tokens are rejected.
    pub fn insert(&mut self, token: &str, vector: Vec<f64>) -> Result<()> {
        let key = Feature::new(token)?.key().to_owned();
        if vector.len() != self.dimension {
            return Err(Error::InvalidValue(format!(
                "vector for `{token}` has {} components, expected {}",
                vector.len(),
                self.dimension
            )));
        }
        if vector.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidValue(format!(
                "vector for `{token}` has a non-finite component"
            )));
        }
        let norm = vector.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroVector(token.to_owned()));
        }
        if self.vectors.contains_key(&key) {
            return Err(Error::InvalidValue(format!("duplicate embedding token `{token}`")));
        }
        self.norms.insert(key.clone(), norm);
        self.vectors.insert(key, vector);
        Ok(())
    }

    pub fn vector(&self, token: &str) -> Option<&[f64]> {
        self.vectors.get(&token.to_lowercase()).map(Vec::as_slice)
    }

    /// Raw cosine between two in-vocabulary tokens.
    pub fn cosine(&self, a: &Feature, b: &Feature) -> Option<f64> {
        let va = self.vectors.get(a.key())?;
        let vb = self.vectors.get(b.key())?;
        let dot: f64 = va.iter().zip(vb).map(|(x, y)| x * y).sum();
        Some(dot / (self.norms[a.key()] * self.norms[b.key()]))
    }

    /// Reads the GloVe text format: `token c1 c2 ... cd` per line, no header.
    /// The dimension is taken from the first non-blank line.
    pub fn read<R: BufRead>(reader: R) -> Result<Self> {
        let mut table: Option<Self> = None;
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line.map_err(|e| Error::MalformedLine {
                line: line_no,
                cause: e.to_string(),
            })?;
            let line = line.trim_end_matches(['\r', '\n']);
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split(' ').filter(|p| !p.is_empty());
            let malformed = |cause: String| Error::MalformedLine {
                line: line_no,
                cause,
            };
            let token = parts.next().ok_or_else(|| malformed("missing token".into()))?;
            let vector = parts
                .map(|c| c.parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| malformed(format!("bad component: {e}")))?;
            let table = match &mut table {
                Some(t) => t,
                None => table.insert(Self::new(vector.len()).map_err(|e| malformed(e.to_string()))?),
            };
            if vector.len() != table.dimension {
                return Err(malformed(format!(
                    "expected {} components, found {}",
                    table.dimension,
                    vector.len()
                )));
            }
            table.insert(token, vector).map_err(|e| match e {
                Error::ZeroVector(_) => e,
                other => malformed(other.to_string()),
            })?;
        }
        table.ok_or_else(|| Error::InvalidValue("embedding file has no entries".into()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read(BufReader::new(file))
    }
}

impl Synonymity for EmbeddingTable {
    fn syn(&self, origin: &Feature, target: &Feature) -> f64 {
        if origin == target {
            return 1.0;
        }
        match self.cosine(origin, target) {
            Some(c) => c.clamp(0.0, 1.0),
            None => 0.0,
        }
    }
}

/// Headword → synonym set.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SynonymLexicon {
    entries: BTreeMap<String, BTreeSet<String>>,
}

impl SynonymLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds synonyms for a headword. The headword itself is never stored in
    /// its own set.
    pub fn insert<I, S>(&mut self, headword: &str, synonyms: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let head = Feature::new(headword)?.key().to_owned();
        let set = self.entries.entry(head.clone()).or_default();
        for s in synonyms {
            let s = Feature::new(s.as_ref())?.key().to_owned();
            if s != head {
                set.insert(s);
            }
        }
        Ok(())
    }

    pub fn synonyms(&self, headword: &str) -> Option<&BTreeSet<String>> {
        self.entries.get(&headword.to_lowercase())
    }

    pub fn headwords(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Reads `headword<TAB>syn1,syn2,...` lines. Empty synonym lists are allowed.
    pub fn read<R: BufRead>(reader: R) -> Result<Self> {
        let mut lexicon = Self::new();
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let malformed = |cause: String| Error::MalformedLine {
                line: line_no,
                cause,
            };
            let line = line.map_err(|e| malformed(e.to_string()))?;
            let line = line.trim_end_matches(['\r', '\n']);
            if line.trim().is_empty() {
                continue;
            }
            let (head, rest) = line.split_once('\t').unwrap_or((line, ""));
            let synonyms = rest.split(',').map(str::trim).filter(|s| !s.is_empty());
            lexicon
                .insert(head, synonyms)
                .map_err(|e| malformed(e.to_string()))?;
        }
        Ok(lexicon)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read(BufReader::new(file))
    }

    pub fn write<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (head, syns) in &self.entries {
            let joined = syns.iter().map(String::as_str).collect::<Vec<_>>().join(",");
            writeln!(out, "{head}\t{joined}")?;
        }
        Ok(())
    }
}

impl Synonymity for SynonymLexicon {
    fn syn(&self, origin: &Feature, target: &Feature) -> f64 {
        let listed = self
            .entries
            .get(origin.key())
            .is_some_and(|s| s.contains(target.key()));
        if origin == target || listed {
            1.0
        } else {
            0.0
        }
    }
}

/// A named, loaded provider.
#[derive(Clone, Debug)]
pub enum SynonymityProvider {
    Exact,
    Embedding(EmbeddingTable),
    Thesaurus(SynonymLexicon),
}

impl SynonymityProvider {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Exact => "exact",
            Self::Embedding(_) => "embedding",
            Self::Thesaurus(_) => "thesaurus",
        }
    }
}

impl Synonymity for SynonymityProvider {
    fn syn(&self, origin: &Feature, target: &Feature) -> f64 {
        match self {
            Self::Exact => ExactMatch.syn(origin, target),
            Self::Embedding(t) => t.syn(origin, target),
            Self::Thesaurus(l) => l.syn(origin, target),
        }
    }
}
