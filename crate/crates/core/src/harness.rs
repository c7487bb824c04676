//! Batch evaluation of adversarial records: attack-success rates per
//! threshold and the average similarity of successful attacks, before and
//! after synonymity weighting.
//!
//! Weighting is applied only when scoring the final explanations; the
//! measure that guided an attack is irrelevant to how a record is scored
//! unless own-batch filtering is requested.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::explanation::AdversarialRecord;
use crate::mapping::build_mapping;
use crate::measures::{MeasureConfig, MeasureId};
use crate::synonymity::SynonymityProvider;

/// Tolerance when matching a record's threshold against a report threshold.
const THRESHOLD_EPS: f64 = 1e-9;

/// The four thresholds used by default: 30%, 40%, 50% and 60%.
pub const DEFAULT_THRESHOLDS: [f64; 4] = [0.3, 0.4, 0.5, 0.6];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuccessRule {
    /// `similarity < τ`
    #[default]
    Below,
    /// `similarity ≤ τ`
    AtOrBelow,
}

/// Whether an attack that left `similarity` succeeded under threshold `tau`.
pub fn success(similarity: f64, tau: f64, rule: SuccessRule) -> bool {
    match rule {
        SuccessRule::Below => similarity < tau,
        SuccessRule::AtOrBelow => similarity <= tau,
    }
}

#[derive(Clone, Debug)]
pub struct NamedProvider {
    pub name: String,
    pub provider: SynonymityProvider,
}

impl NamedProvider {
    pub fn new(name: impl Into<String>, provider: SynonymityProvider) -> Self {
        Self {
            name: name.into(),
            provider,
        }
    }

    pub fn exact() -> Self {
        Self::new("exact", SynonymityProvider::Exact)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub measure: MeasureConfig,
    pub success_rule: SuccessRule,
    /// Score each (measure, τ) cell only on records generated for that
    /// measure and threshold.
    pub own_batch: bool,
    /// Worker threads for per-record scoring; 0 uses the global pool.
    pub jobs: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            measure: MeasureConfig::default(),
            success_rule: SuccessRule::Below,
            own_batch: false,
            jobs: 0,
        }
    }
}

/// Scores one record under one measure: `(standard, weighted)` similarity
/// between its original and perturbed explanations.
pub fn evaluate_record(
    record: &AdversarialRecord,
    measure: MeasureId,
    provider: &SynonymityProvider,
    config: &MeasureConfig,
) -> Result<(f64, f64)> {
    let a = &record.original_explanation;
    let b = &record.perturbed_explanation;
    let mapping = build_mapping(a, b, &record.substitutions)?;
    let base = measure.standard(a, b, config).similarity;
    let weighted = measure.weighted(a, b, &mapping, provider, config).similarity;
    Ok((base, weighted))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkippedRecord {
    pub id: String,
    pub reason: String,
}

/// Per-record similarities for every (provider, measure) combination.
#[derive(Clone, Debug, PartialEq)]
pub struct RecordScores {
    pub id: String,
    pub guiding_measure: MeasureId,
    pub threshold: f64,
    /// Standard similarity per measure.
    pub base: Vec<f64>,
    /// Weighted similarity indexed `[provider][measure]`.
    pub weighted: Vec<Vec<f64>>,
}

impl RecordScores {
    fn in_batch(&self, measure: MeasureId, tau: f64) -> bool {
        self.guiding_measure == measure && (self.threshold - tau).abs() < THRESHOLD_EPS
    }
}

fn score_one(
    record: &AdversarialRecord,
    measures: &[MeasureId],
    providers: &[NamedProvider],
    config: &MeasureConfig,
) -> Result<RecordScores> {
    record.validate()?;
    let a = &record.original_explanation;
    let b = &record.perturbed_explanation;
    let mapping = build_mapping(a, b, &record.substitutions)?;
    let base = measures
        .iter()
        .map(|m| m.standard(a, b, config).similarity)
        .collect();
    let weighted = providers
        .iter()
        .map(|p| {
            measures
                .iter()
                .map(|m| m.weighted(a, b, &mapping, &p.provider, config).similarity)
                .collect()
        })
        .collect();
    Ok(RecordScores {
        id: record.id.clone(),
        guiding_measure: record.guiding_measure,
        threshold: record.threshold,
        base,
        weighted,
    })
}

fn with_pool<T: Send>(jobs: usize, work: impl FnOnce() -> T + Send) -> T {
    if jobs == 0 {
        return work();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(work),
        Err(_) => work(),
    }
}

/// Scores every record, in input order. Records whose mapping cannot be
/// built are returned separately with the reason.
pub fn score_corpus(
    records: &[AdversarialRecord],
    measures: &[MeasureId],
    providers: &[NamedProvider],
    config: &EvalConfig,
) -> (Vec<RecordScores>, Vec<SkippedRecord>) {
    let results: Vec<_> = with_pool(config.jobs, || {
        records
            .par_iter()
            .map(|r| score_one(r, measures, providers, &config.measure))
            .collect()
    });
    let mut scores = Vec::with_capacity(records.len());
    let mut skipped = Vec::new();
    for (record, result) in records.iter().zip(results) {
        match result {
            Ok(s) => scores.push(s),
            Err(e) => skipped.push(SkippedRecord {
                id: record.id.clone(),
                reason: e.to_string(),
            }),
        }
    }
    (scores, skipped)
}

/// One (provider, measure, τ) cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub dataset: String,
    pub measure: MeasureId,
    pub provider: String,
    pub tau: f64,
    pub base_rate: f64,
    pub syn_rate: f64,
    /// Mean standard similarity over base successes; `None` when there are none.
    pub base_avg_sim: Option<f64>,
    pub syn_avg_sim: Option<f64>,
    pub n: usize,
    pub n_success_base: usize,
    pub n_success_syn: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub rows: Vec<ReportRow>,
    pub skipped: Vec<SkippedRecord>,
}

#[derive(Default)]
struct Tally {
    n: usize,
    hits: usize,
    sum: f64,
}

impl Tally {
    fn push(&mut self, similarity: f64, tau: f64, rule: SuccessRule) {
        self.n += 1;
        if success(similarity, tau, rule) {
            self.hits += 1;
            self.sum += similarity;
        }
    }

    fn rate(&self) -> f64 {
        self.hits as f64 / self.n as f64
    }

    fn mean(&self) -> Option<f64> {
        (self.hits > 0).then(|| self.sum / self.hits as f64)
    }
}

fn sorted_thresholds(thresholds: &[f64]) -> Vec<f64> {
    let mut taus = thresholds.to_vec();
    taus.sort_by(f64::total_cmp);
    taus.dedup_by(|a, b| (*a - *b).abs() < THRESHOLD_EPS);
    taus
}

/// Reduces per-record scores into report rows ordered by provider, then
/// measure (both in the order given), then ascending τ.
///
/// In own-batch mode, cells with no matching records are omitted.
#[allow(clippy::too_many_arguments)]
pub fn aggregate(
    dataset: &str,
    scores: &[RecordScores],
    skipped: Vec<SkippedRecord>,
    measures: &[MeasureId],
    providers: &[NamedProvider],
    thresholds: &[f64],
    config: &EvalConfig,
) -> EvaluationReport {
    let taus = sorted_thresholds(thresholds);
    let mut rows = Vec::new();
    for (pi, provider) in providers.iter().enumerate() {
        for (mi, &measure) in measures.iter().enumerate() {
            for &tau in &taus {
                let mut base = Tally::default();
                let mut syn = Tally::default();
                for s in scores {
                    if config.own_batch && !s.in_batch(measure, tau) {
                        continue;
                    }
                    base.push(s.base[mi], tau, config.success_rule);
                    syn.push(s.weighted[pi][mi], tau, config.success_rule);
                }
                if base.n == 0 {
                    continue;
                }
                rows.push(ReportRow {
                    dataset: dataset.to_owned(),
                    measure,
                    provider: provider.name.clone(),
                    tau,
                    base_rate: base.rate(),
                    syn_rate: syn.rate(),
                    base_avg_sim: base.mean(),
                    syn_avg_sim: syn.mean(),
                    n: base.n,
                    n_success_base: base.hits,
                    n_success_syn: syn.hits,
                    skipped: skipped.len(),
                });
            }
        }
    }
    EvaluationReport { rows, skipped }
}

fn check_thresholds(thresholds: &[f64]) -> Result<()> {
    if thresholds.is_empty() {
        return Err(Error::InvalidValue("no thresholds given".into()));
    }
    for &t in thresholds {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidValue(format!("threshold {t} outside [0, 1]")));
        }
    }
    Ok(())
}

/// Success rates and average similarities for every
/// (provider, measure, τ) cell over a corpus.
pub fn evaluate_corpus(
    dataset: &str,
    records: &[AdversarialRecord],
    measures: &[MeasureId],
    providers: &[NamedProvider],
    thresholds: &[f64],
    config: &EvalConfig,
) -> Result<EvaluationReport> {
    check_thresholds(thresholds)?;
    config.measure.validate()?;
    if measures.is_empty() || providers.is_empty() {
        return Err(Error::InvalidValue("need at least one measure and one provider".into()));
    }
    let (scores, skipped) = score_corpus(records, measures, providers, config);
    if scores.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    Ok(aggregate(dataset, &scores, skipped, measures, providers, thresholds, config))
}

/// Same as [`evaluate_corpus`] but requires several providers, giving one
/// row group per provider over identical records and measures.
pub fn sensitivity_analysis(
    dataset: &str,
    records: &[AdversarialRecord],
    measures: &[MeasureId],
    providers: &[NamedProvider],
    thresholds: &[f64],
    config: &EvalConfig,
) -> Result<EvaluationReport> {
    if providers.len() < 2 {
        return Err(Error::TooFewProviders(providers.len()));
    }
    evaluate_corpus(dataset, records, measures, providers, thresholds, config)
}
