//! Deterministic synthetic attacks.
//!
//! A [`ToyExplainer`] ranks the distinct tokens of a document by a static
//! importance table (falling back to a seeded hash), standing in for a real
//! explainer. [`run_attack`] then greedily substitutes one word per
//! iteration from a synonym lexicon, choosing the candidate that most
//! lowers the guiding measure, until the similarity drops below the
//! threshold, candidates run out, or the iteration budget is spent.

use std::collections::{HashMap, HashSet};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::explanation::{AdversarialRecord, RankedExplanation, SubstitutionEvent};
use crate::harness::{success, SuccessRule};
use crate::measures::{MeasureConfig, MeasureId};
use crate::synonymity::{EmbeddingTable, SynonymLexicon};

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Seed for the `index`-th record of a corpus generated from `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index.wrapping_add(1)))
}

/// Lowercases and splits text into word tokens, keeping inner apostrophes.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !(c.is_alphanumeric() || c == '\''))
        .map(|t| t.trim_matches('\'').to_lowercase())
        .filter(|t| !t.is_empty())
        .collect()
}

/// Static importance ranker.
#[derive(Clone, Debug)]
pub struct ToyExplainer {
    pub weights: HashMap<String, f64>,
    pub seed: u64,
    pub k: usize,
}

impl ToyExplainer {
    pub fn new(weights: HashMap<String, f64>, seed: u64, k: usize) -> Self {
        let weights = weights
            .into_iter()
            .map(|(t, w)| (t.to_lowercase(), w))
            .collect();
        Self { weights, seed, k }
    }

    /// Explainer with no table: every token gets a hashed pseudo-weight.
    pub fn hashed(seed: u64, k: usize) -> Self {
        Self::new(HashMap::new(), seed, k)
    }

    /// Importance in `[0, 1]`.
    pub fn importance(&self, token: &str) -> f64 {
        let key = token.to_lowercase();
        match self.weights.get(&key) {
            Some(w) => *w,
            None => {
                let h = splitmix64(fnv1a(key.as_bytes()) ^ self.seed);
                (h >> 11) as f64 / (1u64 << 53) as f64
            }
        }
    }

    /// Top-k distinct tokens by descending importance; ties go to the
    /// lexicographically smaller token.
    pub fn explain<S: AsRef<str>>(&self, document: &[S]) -> Result<RankedExplanation> {
        let mut seen = HashSet::new();
        let mut scored: Vec<(f64, String)> = document
            .iter()
            .map(|t| t.as_ref().trim().to_lowercase())
            .filter(|t| !t.is_empty() && seen.insert(t.clone()))
            .map(|t| (self.importance(&t), t))
            .collect();
        scored.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
        scored.truncate(self.k.max(1));
        let tokens: Vec<String> = scored.into_iter().map(|(_, t)| t).collect();
        RankedExplanation::parse(&tokens)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimulationConfig {
    pub seed: u64,
    pub max_iterations: u32,
    pub guiding_measure: MeasureId,
    /// Success threshold; the attack stops once the guiding similarity is below it.
    pub tau: f64,
    /// Explanation size.
    pub k: usize,
    /// Words per generated document.
    pub doc_len: usize,
    pub measure: MeasureConfig,
    /// Worker threads for corpus generation; 0 uses the global pool.
    pub jobs: usize,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            max_iterations: 10,
            guiding_measure: MeasureId::Jaccard,
            tau: 0.5,
            k: 5,
            doc_len: 12,
            measure: MeasureConfig::default(),
            jobs: 0,
        }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::InvalidValue("max_iterations must be at least 1".into()));
        }
        if self.k == 0 || self.doc_len == 0 {
            return Err(Error::InvalidValue("k and doc_len must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.tau) {
            return Err(Error::InvalidValue(format!("tau {} outside [0, 1]", self.tau)));
        }
        if let MeasureId::Rbo(p) = self.guiding_measure {
            MeasureId::rbo(p)?;
        }
        self.measure.validate()
    }
}

struct Candidate {
    position: usize,
    replacement: String,
    explanation: RankedExplanation,
    similarity: f64,
}

/// Lowest-similarity single-word substitution, ties to the earliest position
/// and then the smallest replacement.
///
/// Tokens occurring more than once are not substituted (one replacement
/// would leave the word both replaced and present), and replacements
/// already in the current or original document are skipped so the
/// resulting mapping stays one-to-one.
fn best_candidate(
    document: &[String],
    original_tokens: &HashSet<String>,
    original: &RankedExplanation,
    explainer: &ToyExplainer,
    lexicon: &SynonymLexicon,
    config: &SimulationConfig,
) -> Result<Option<Candidate>> {
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for t in document {
        *counts.entry(t.as_str()).or_default() += 1;
    }
    let mut best: Option<Candidate> = None;
    let mut trial = document.to_vec();
    for (position, token) in document.iter().enumerate() {
        if counts[token.as_str()] > 1 {
            continue;
        }
        let Some(synonyms) = lexicon.synonyms(token) else {
            continue;
        };
        for s in synonyms {
            if counts.contains_key(s.as_str()) || original_tokens.contains(s) {
                continue;
            }
            trial[position] = s.clone();
            let explanation = explainer.explain(&trial)?;
            let similarity = config
                .guiding_measure
                .standard(original, &explanation, &config.measure)
                .similarity;
            if best.as_ref().is_none_or(|b| similarity < b.similarity) {
                best = Some(Candidate {
                    position,
                    replacement: s.clone(),
                    explanation,
                    similarity,
                });
            }
        }
        trial[position] = token.clone();
    }
    Ok(best)
}

/// Runs one greedy attack on a tokenised document.
pub fn run_attack<S: AsRef<str>>(
    document: &[S],
    explainer: &ToyExplainer,
    lexicon: &SynonymLexicon,
    config: &SimulationConfig,
) -> Result<AdversarialRecord> {
    config.validate()?;
    let mut current: Vec<String> = document.iter().map(|t| t.as_ref().to_lowercase()).collect();
    let original_text = current.join(" ");
    let original_tokens: HashSet<String> = current.iter().cloned().collect();
    let original = explainer.explain(&current)?;
    let mut perturbed = original.clone();
    let mut similarity = config
        .guiding_measure
        .standard(&original, &original, &config.measure)
        .similarity;
    let mut substitutions = Vec::new();

    for iteration in 1..=config.max_iterations {
        if success(similarity, config.tau, SuccessRule::Below) {
            break;
        }
        let candidate = best_candidate(&current, &original_tokens, &original, explainer, lexicon, config)?;
        let Some(c) = candidate else {
            if substitutions.is_empty() {
                return Err(Error::NoCandidates);
            }
            break;
        };
        substitutions.push(SubstitutionEvent::new(iteration, &current[c.position], &c.replacement)?);
        current[c.position] = c.replacement;
        perturbed = c.explanation;
        similarity = c.similarity;
    }

    Ok(AdversarialRecord {
        id: format!("attack-{}", config.seed),
        original_text,
        perturbed_text: current.join(" "),
        original_explanation: original,
        perturbed_explanation: perturbed,
        substitutions,
        guiding_measure: config.guiding_measure,
        threshold: config.tau,
        final_similarity: Some(similarity),
    })
}

/// Whether a finished attack record met its own threshold.
pub fn attack_succeeded(record: &AdversarialRecord) -> bool {
    record
        .final_similarity
        .is_some_and(|s| success(s, record.threshold, SuccessRule::Below))
}

/// Lexicon headwords that have at least one synonym, sorted.
pub fn default_vocabulary(lexicon: &SynonymLexicon) -> Vec<String> {
    lexicon
        .headwords()
        .filter(|h| lexicon.synonyms(h).is_some_and(|s| !s.is_empty()))
        .map(str::to_owned)
        .collect()
}

/// `n` attacks on random documents drawn from `vocabulary`. Record `i` uses
/// the seed `derive_seed(config.seed, i)`; the explainer is shared and
/// seeded by `config.seed`. Output is identical for any `config.jobs`.
pub fn generate_corpus(
    n: usize,
    vocabulary: &[String],
    lexicon: &SynonymLexicon,
    config: &SimulationConfig,
) -> Result<Vec<AdversarialRecord>> {
    if n == 0 {
        return Err(Error::InvalidValue("corpus size must be at least 1".into()));
    }
    config.validate()?;
    let mut vocab: Vec<String> = vocabulary.iter().map(|t| t.to_lowercase()).collect();
    vocab.sort();
    vocab.dedup();
    if vocab.is_empty() {
        return Err(Error::InvalidValue("empty vocabulary".into()));
    }
    let explainer = ToyExplainer::hashed(config.seed, config.k);
    let doc_len = config.doc_len.min(vocab.len());

    let attack = |index: usize| -> Result<AdversarialRecord> {
        let seed = derive_seed(config.seed, index as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let document: Vec<&String> = vocab.choose_multiple(&mut rng, doc_len).collect();
        let record_config = SimulationConfig { seed, ..*config };
        let mut record = run_attack(&document, &explainer, lexicon, &record_config)?;
        record.id = format!("sim-{}-{index:05}", config.seed);
        Ok(record)
    };

    let results: Vec<Result<AdversarialRecord>> = if config.jobs == 0 {
        (0..n).into_par_iter().map(attack).collect()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| Error::InvalidValue(e.to_string()))?
            .install(|| (0..n).into_par_iter().map(attack).collect())
    };
    results.into_iter().collect()
}

/// Lexicon of `words` headwords `wordNNN`, each with `synonyms` variants
/// `wordNNNa`, `wordNNNb`, ... that are never headwords themselves.
pub fn synthetic_lexicon(words: usize, synonyms: usize) -> SynonymLexicon {
    let mut lexicon = SynonymLexicon::new();
    for w in 0..words {
        let head = format!("word{w:03}");
        let syns = (0..synonyms).map(|s| format!("{head}{}", suffix(s)));
        lexicon.insert(&head, syns).expect("synthetic tokens are valid");
    }
    lexicon
}

/// Random word vectors for every token of `lexicon`. Each synonym is its
/// headword's vector plus Gaussian-like noise of scale `noise`, so smaller
/// noise gives synonym pairs a higher cosine.
pub fn synthetic_embedding(lexicon: &SynonymLexicon, dimension: usize, noise: f64, seed: u64) -> EmbeddingTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sample = |scale: f64| -> Vec<f64> {
        (0..dimension)
            .map(|_| {
                // sum of uniforms: cheap, bounded, roughly normal
                let u: f64 = (0..4).map(|_| rng.random::<f64>() - 0.5).sum();
                u * scale
            })
            .collect()
    };
    let mut table = EmbeddingTable::new(dimension.max(1)).expect("positive dimension");
    for head in lexicon.headwords() {
        let base = sample(1.0);
        for syn in lexicon.synonyms(head).into_iter().flatten() {
            let v: Vec<f64> = base.iter().zip(sample(noise)).map(|(b, n)| b + n).collect();
            // tokens already present keep their first vector
            let _ = table.insert(syn, v);
        }
        let _ = table.insert(head, base);
    }
    table
}

fn suffix(mut i: usize) -> String {
    let mut s = Vec::new();
    loop {
        s.push(b'a' + (i % 26) as u8);
        i /= 26;
        if i == 0 {
            break;
        }
        i -= 1;
    }
    s.reverse();
    String::from_utf8(s).expect("ascii")
}
