//! Standard and synonymity-weighted similarity between two ranked explanations.
//!
//! Four measures are provided, each in a standard form and a weighted form
//! that gives partial credit to substituted features via a [`Synonymity`]
//! provider:
//!
//! | measure  | standard                          | weighted credit                          |
//! |----------|-----------------------------------|------------------------------------------|
//! | Jaccard  | `|A∩B| / |A∪B|`                   | `Syn(a,b)` added to the numerator         |
//! | Kendall  | positional disagreements + size gap | disagreement at `i` costs `1 - Syn(a,b)` |
//! | Spearman | footrule with penalty `|A|/2`      | displacement scaled by `1 / Syn(a,b)`     |
//! | RBO      | geometric prefix overlap           | `Syn(a,b)` added to the prefix overlap    |
//!
//! Distances are normalised to similarities in `[0, 1]`: Kendall by
//! `max(|A|, |B|)`, the footrule by `⌊|A|²/2⌋`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::explanation::{FeatureMapping, RankedExplanation};
use crate::synonymity::{credit, Synonymity};

/// Measure identifier. RBO carries its persistence parameter, so `rbo@0.5`
/// and `rbo@0.9` are distinct measures.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MeasureId {
    Jaccard,
    Kendall,
    Spearman,
    Rbo(f64),
}

impl MeasureId {
    /// The six measures reported side by side: Jaccard, Kendall, Spearman and
    /// RBO at p = 0.5, 0.7 and 0.9.
    pub fn defaults() -> Vec<MeasureId> {
        vec![
            MeasureId::Jaccard,
            MeasureId::Kendall,
            MeasureId::Spearman,
            MeasureId::Rbo(0.5),
            MeasureId::Rbo(0.7),
            MeasureId::Rbo(0.9),
        ]
    }

    pub fn rbo(p: f64) -> Result<Self> {
        check_persistence(p)?;
        Ok(MeasureId::Rbo(p))
    }

    /// Parses a comma-separated list such as `jaccard,rbo@0.7`.
    pub fn parse_list(list: &str) -> Result<Vec<MeasureId>> {
        list.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect()
    }

    pub fn standard(
        &self,
        original: &RankedExplanation,
        perturbed: &RankedExplanation,
        config: &MeasureConfig,
    ) -> SimilarityResult {
        match *self {
            MeasureId::Jaccard => jaccard(original, perturbed),
            MeasureId::Kendall => kendall(original, perturbed),
            MeasureId::Spearman => spearman_footrule(original, perturbed, config.footrule_penalty),
            MeasureId::Rbo(p) => rbo(original, perturbed, p, config.rbo_extrapolated),
        }
    }

    pub fn weighted<S: Synonymity + ?Sized>(
        &self,
        original: &RankedExplanation,
        perturbed: &RankedExplanation,
        mapping: &FeatureMapping,
        provider: &S,
        config: &MeasureConfig,
    ) -> SimilarityResult {
        match *self {
            MeasureId::Jaccard => jaccard_weighted(
                original,
                perturbed,
                mapping,
                provider,
                config.jaccard_denominator,
            ),
            MeasureId::Kendall => kendall_weighted(original, perturbed, mapping, provider),
            MeasureId::Spearman => spearman_weighted(
                original,
                perturbed,
                mapping,
                provider,
                config.footrule_penalty,
            ),
            MeasureId::Rbo(p) => rbo_weighted(
                original,
                perturbed,
                p,
                mapping,
                provider,
                config.rbo_extrapolated,
            ),
        }
    }
}

impl fmt::Display for MeasureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureId::Jaccard => f.write_str("jaccard"),
            MeasureId::Kendall => f.write_str("kendall"),
            MeasureId::Spearman => f.write_str("spearman"),
            MeasureId::Rbo(p) => write!(f, "rbo@{p}"),
        }
    }
}

impl FromStr for MeasureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "jaccard" => Ok(MeasureId::Jaccard),
            "kendall" => Ok(MeasureId::Kendall),
            "spearman" | "footrule" => Ok(MeasureId::Spearman),
            _ => {
                let p = lower
                    .strip_prefix("rbo@")
                    .and_then(|p| p.parse::<f64>().ok())
                    .ok_or_else(|| Error::UnknownMeasure(s.to_owned()))?;
                MeasureId::rbo(p).map_err(|_| Error::UnknownMeasure(s.to_owned()))
            }
        }
    }
}

impl Serialize for MeasureId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MeasureId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn check_persistence(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidValue(format!("rbo persistence {p} outside (0, 1)")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JaccardDenominator {
    /// `|A ∪ B|`.
    #[default]
    Unadjusted,
    /// `|A ∪ B|` minus the number of substituted pairs, so that each mapped
    /// pair counts once in the union.
    Adjusted,
}

impl FromStr for JaccardDenominator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unadjusted" => Ok(Self::Unadjusted),
            "adjusted" => Ok(Self::Adjusted),
            other => Err(Error::InvalidValue(format!("jaccard denominator `{other}`"))),
        }
    }
}

/// Distance charged by the footrule for an original feature absent from the
/// perturbed list.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub enum FootrulePenalty {
    /// `|A| / 2`.
    #[default]
    HalfLength,
    Fixed(f64),
}

impl FootrulePenalty {
    pub fn value(&self, original_len: usize) -> f64 {
        match *self {
            FootrulePenalty::HalfLength => original_len as f64 / 2.0,
            FootrulePenalty::Fixed(p) => p,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureConfig {
    pub jaccard_denominator: JaccardDenominator,
    pub footrule_penalty: FootrulePenalty,
    /// Add the `p^k · X_k / k` completion term to RBO.
    pub rbo_extrapolated: bool,
}

impl Default for MeasureConfig {
    fn default() -> Self {
        Self {
            jaccard_denominator: JaccardDenominator::Unadjusted,
            footrule_penalty: FootrulePenalty::HalfLength,
            rbo_extrapolated: true,
        }
    }
}

impl MeasureConfig {
    pub fn validate(&self) -> Result<()> {
        if let FootrulePenalty::Fixed(p) = self.footrule_penalty {
            if !(p.is_finite() && p > 0.0) {
                return Err(Error::InvalidValue(format!("footrule penalty {p} must be positive")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SimilarityResult {
    pub measure: MeasureId,
    /// Unnormalised distance, for Kendall and Spearman only.
    pub raw_distance: Option<f64>,
    pub similarity: f64,
}

impl SimilarityResult {
    fn from_distance(measure: MeasureId, raw: f64, max: f64) -> Self {
        let similarity = if max > 0.0 {
            (1.0 - raw / max).clamp(0.0, 1.0)
        } else if raw > 0.0 {
            0.0
        } else {
            1.0
        };
        Self {
            measure,
            raw_distance: Some(raw),
            similarity,
        }
    }

    fn from_similarity(measure: MeasureId, similarity: f64) -> Self {
        Self {
            measure,
            raw_distance: None,
            similarity: similarity.clamp(0.0, 1.0),
        }
    }
}

fn intersection_size(a: &RankedExplanation, b: &RankedExplanation) -> usize {
    a.features().iter().filter(|f| b.contains(f)).count()
}

pub fn jaccard(a: &RankedExplanation, b: &RankedExplanation) -> SimilarityResult {
    let inter = intersection_size(a, b);
    let union = a.len() + b.len() - inter;
    SimilarityResult::from_similarity(MeasureId::Jaccard, inter as f64 / union as f64)
}

/// Jaccard with each substituted pair contributing `Syn(a, b)` to the
/// intersection. NULL-mapped origins and unmapped targets stay in the union.
pub fn jaccard_weighted<S: Synonymity + ?Sized>(
    a: &RankedExplanation,
    b: &RankedExplanation,
    mapping: &FeatureMapping,
    provider: &S,
    denominator: JaccardDenominator,
) -> SimilarityResult {
    let inter = intersection_size(a, b);
    let mut numerator = inter as f64;
    let mut substituted = 0usize;
    for (origin, target) in mapping.substituted_pairs() {
        numerator += credit(provider, origin, target);
        substituted += 1;
    }
    let mut union = a.len() + b.len() - inter;
    if denominator == JaccardDenominator::Adjusted {
        union -= substituted;
    }
    SimilarityResult::from_similarity(MeasureId::Jaccard, numerator / union as f64)
}

/// Positional Kendall distance: one unit per index where the lists disagree,
/// plus the length difference.
pub fn kendall(a: &RankedExplanation, b: &RankedExplanation) -> SimilarityResult {
    let disagreements = a
        .features()
        .iter()
        .zip(b.features())
        .filter(|(x, y)| x != y)
        .count();
    let raw = (disagreements + a.len().abs_diff(b.len())) as f64;
    SimilarityResult::from_distance(MeasureId::Kendall, raw, a.len().max(b.len()) as f64)
}

/// Kendall distance where a disagreement at index `i` between a mapped pair
/// `A[i] → B[i]` costs `1 - Syn(A[i], B[i])` instead of 1.
pub fn kendall_weighted<S: Synonymity + ?Sized>(
    a: &RankedExplanation,
    b: &RankedExplanation,
    mapping: &FeatureMapping,
    provider: &S,
) -> SimilarityResult {
    let mut raw = a.len().abs_diff(b.len()) as f64;
    for (x, y) in a.features().iter().zip(b.features()) {
        if x == y {
            continue;
        }
        raw += match mapping.target_of(x) {
            Some(t) if t == y => 1.0 - credit(provider, x, y),
            _ => 1.0,
        };
    }
    SimilarityResult::from_distance(MeasureId::Kendall, raw, a.len().max(b.len()) as f64)
}

fn footrule_max(original_len: usize) -> f64 {
    ((original_len * original_len) / 2) as f64
}

/// Footrule over the original list: displacement for shared features and a
/// fixed penalty for each original feature missing from `b`.
pub fn spearman_footrule(
    a: &RankedExplanation,
    b: &RankedExplanation,
    penalty: FootrulePenalty,
) -> SimilarityResult {
    let p = penalty.value(a.len());
    let raw: f64 = a
        .features()
        .iter()
        .enumerate()
        .map(|(i, f)| match b.position(f) {
            Some(j) => i.abs_diff(j) as f64,
            None => p,
        })
        .sum();
    SimilarityResult::from_distance(MeasureId::Spearman, raw, footrule_max(a.len()))
}

/// Weighted footrule. A substituted pair `a → b` at displacement `d` costs
/// `min(d / Syn(a, b), |A| - 1)`, or 0 when `d = 0`. A pair with zero
/// synonymity earns no credit and is charged the penalty like any
/// unmatched feature.
pub fn spearman_weighted<S: Synonymity + ?Sized>(
    a: &RankedExplanation,
    b: &RankedExplanation,
    mapping: &FeatureMapping,
    provider: &S,
    penalty: FootrulePenalty,
) -> SimilarityResult {
    let p = penalty.value(a.len());
    let cap = a.len().saturating_sub(1) as f64;
    let mut raw = 0.0;
    for ((i, origin), (_, target)) in a.features().iter().enumerate().zip(&mapping.pairs) {
        raw += match target.as_ref().and_then(|t| b.position(t).map(|j| (t, j))) {
            Some((t, j)) if t == origin => i.abs_diff(j) as f64,
            Some((t, j)) => {
                let s = credit(provider, origin, t);
                let d = i.abs_diff(j) as f64;
                if s <= 0.0 {
                    p
                } else if d == 0.0 {
                    0.0
                } else {
                    (d / s).min(cap)
                }
            }
            None => p,
        };
    }
    SimilarityResult::from_distance(MeasureId::Spearman, raw, footrule_max(a.len()))
}

/// Accumulates a per-depth overlap profile into an RBO score. `increments[d]`
/// is the overlap gained at depth `d + 1`.
fn rbo_from_increments(increments: &[f64], p: f64, extrapolated: bool) -> f64 {
    let k = increments.len();
    let mut overlap = 0.0;
    let mut weight = 1.0;
    let mut sum = 0.0;
    for (d, inc) in increments.iter().enumerate() {
        overlap += inc;
        sum += weight * overlap / (d + 1) as f64;
        weight *= p;
    }
    let mut score = (1.0 - p) * sum;
    if extrapolated {
        score += weight * overlap / k as f64;
    }
    score
}

/// Rank-biased overlap evaluated to depth `max(|A|, |B|)`.
///
/// # Panics
///
/// If `p` is not in `(0, 1)`.
pub fn rbo(a: &RankedExplanation, b: &RankedExplanation, p: f64, extrapolated: bool) -> SimilarityResult {
    check_persistence(p).expect("rbo persistence");
    let mut increments = vec![0.0; a.len().max(b.len())];
    for (i, f) in a.features().iter().enumerate() {
        if let Some(j) = b.position(f) {
            increments[i.max(j)] += 1.0;
        }
    }
    SimilarityResult::from_similarity(
        MeasureId::Rbo(p),
        rbo_from_increments(&increments, p, extrapolated),
    )
}

/// RBO where each substituted pair adds `Syn(a, b)` to the overlap from the
/// first depth at which both endpoints are inside the prefix.
///
/// # Panics
///
/// If `p` is not in `(0, 1)`.
pub fn rbo_weighted<S: Synonymity + ?Sized>(
    a: &RankedExplanation,
    b: &RankedExplanation,
    p: f64,
    mapping: &FeatureMapping,
    provider: &S,
    extrapolated: bool,
) -> SimilarityResult {
    check_persistence(p).expect("rbo persistence");
    let mut increments = vec![0.0; a.len().max(b.len())];
    for (i, f) in a.features().iter().enumerate() {
        if let Some(j) = b.position(f) {
            increments[i.max(j)] += 1.0;
        }
    }
    for (origin, target) in mapping.substituted_pairs() {
        if let (Some(i), Some(j)) = (a.position(origin), b.position(target)) {
            increments[i.max(j)] += credit(provider, origin, target);
        }
    }
    SimilarityResult::from_similarity(
        MeasureId::Rbo(p),
        rbo_from_increments(&increments, p, extrapolated),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explanation::{Feature, SubstitutionEvent};
    use crate::mapping::build_mapping;
    use crate::synonymity::ExactMatch;

    fn expl(tokens: &[&str]) -> RankedExplanation {
        RankedExplanation::parse(tokens).unwrap()
    }

    fn table(entries: &'static [(&'static str, &'static str, f64)]) -> impl Fn(&Feature, &Feature) -> f64 {
        move |a: &Feature, b: &Feature| {
            entries
                .iter()
                .find(|(x, y, _)| a.key() == *x && b.key() == *y)
                .map_or(0.0, |e| e.2)
        }
    }

    fn mapped(a: &RankedExplanation, b: &RankedExplanation, subs: &[(&str, &str)]) -> FeatureMapping {
        let events: Vec<_> = subs
            .iter()
            .enumerate()
            .map(|(i, (x, y))| SubstitutionEvent::new(i as u32 + 1, x, y).unwrap())
            .collect();
        build_mapping(a, b, &events).unwrap()
    }

    fn close(x: f64, y: f64) -> bool {
        (x - y).abs() < 1e-12
    }

    #[test]
    fn measure_ids_round_trip_through_strings() {
        for m in MeasureId::defaults() {
            assert_eq!(m.to_string().parse::<MeasureId>().unwrap(), m);
        }
        assert_eq!(MeasureId::Rbo(0.7).to_string(), "rbo@0.7");
        assert!("rbo@1".parse::<MeasureId>().is_err());
        assert!("rbo@0".parse::<MeasureId>().is_err());
        assert!("cosine".parse::<MeasureId>().is_err());
    }

    #[test]
    fn jaccard_identity_and_disjoint() {
        let x = expl(&["a", "b", "c"]);
        assert_eq!(jaccard(&x, &x).similarity, 1.0);
        assert_eq!(jaccard(&x, &expl(&["d", "e"])).similarity, 0.0);
    }

    #[test]
    fn weighted_jaccard_worked_example() {
        let a = expl(&["a", "b", "c"]);
        let b = expl(&["alpha", "beta", "gamma"]);
        let m = mapped(&a, &b, &[("a", "alpha"), ("b", "beta"), ("c", "gamma")]);
        let syn = table(&[("a", "alpha", 0.9), ("b", "beta", 0.6), ("c", "gamma", 0.3)]);
        let un = jaccard_weighted(&a, &b, &m, &syn, JaccardDenominator::Unadjusted);
        let adj = jaccard_weighted(&a, &b, &m, &syn, JaccardDenominator::Adjusted);
        assert!(close(un.similarity, 0.3), "{}", un.similarity);
        assert!(close(adj.similarity, 0.6), "{}", adj.similarity);
    }

    #[test]
    fn kendall_size_difference() {
        let r = kendall(&expl(&["a", "b", "c"]), &expl(&["a", "b"]));
        assert_eq!(r.raw_distance, Some(1.0));
        assert!(close(r.similarity, 2.0 / 3.0));
    }

    #[test]
    fn weighted_kendall_credits_same_position_pairs() {
        let a = expl(&["a", "b"]);
        let b = expl(&["x", "b"]);
        let m = mapped(&a, &b, &[("a", "x")]);
        let r = kendall_weighted(&a, &b, &m, &table(&[("a", "x", 0.8)]));
        assert!(close(r.raw_distance.unwrap(), 0.2));
        assert!(close(r.similarity, 0.9));
    }

    #[test]
    fn weighted_kendall_ignores_pairs_at_different_positions() {
        let a = expl(&["a", "b"]);
        let b = expl(&["b", "x"]);
        let m = mapped(&a, &b, &[("a", "x")]);
        let r = kendall_weighted(&a, &b, &m, &table(&[("a", "x", 0.8)]));
        assert_eq!(r.raw_distance, Some(2.0));
    }

    #[test]
    fn footrule_reversal_is_maximal() {
        let r = spearman_footrule(&expl(&["a", "b", "c"]), &expl(&["c", "b", "a"]), FootrulePenalty::HalfLength);
        assert_eq!(r.raw_distance, Some(4.0));
        assert_eq!(r.similarity, 0.0);
    }

    #[test]
    fn footrule_singleton_lists() {
        let x = expl(&["a"]);
        assert_eq!(spearman_footrule(&x, &x, FootrulePenalty::HalfLength).similarity, 1.0);
        assert_eq!(
            spearman_footrule(&x, &expl(&["b"]), FootrulePenalty::HalfLength).similarity,
            0.0
        );
    }

    #[test]
    fn weighted_footrule_zero_displacement_costs_nothing() {
        let a = expl(&["a", "b", "c"]);
        let b = expl(&["a", "x", "c"]);
        let m = mapped(&a, &b, &[("b", "x")]);
        let r = spearman_weighted(&a, &b, &m, &table(&[("b", "x", 0.05)]), FootrulePenalty::HalfLength);
        assert_eq!(r.raw_distance, Some(0.0));
        assert_eq!(r.similarity, 1.0);
    }

    #[test]
    fn weighted_footrule_caps_at_length_minus_one() {
        let a = expl(&["a", "b", "c", "d", "e", "f", "g"]);
        let b = expl(&["b", "c", "a2", "d", "e", "f", "g"]);
        // a -> a2 moves two places with tiny synonymity: 2 / 0.01 is capped at 6
        let m = mapped(&a, &b, &[("a", "a2")]);
        let r = spearman_weighted(&a, &b, &m, &table(&[("a", "a2", 0.01)]), FootrulePenalty::HalfLength);
        // b and c each move one place
        assert!(close(r.raw_distance.unwrap(), 1.0 + 1.0 + 6.0));
    }

    #[test]
    fn weighted_footrule_zero_synonymity_is_penalised() {
        let a = expl(&["a", "b", "c", "d", "e", "f", "g"]);
        let b = expl(&["b", "c", "a2", "d", "e", "f", "g"]);
        let m = mapped(&a, &b, &[("a", "a2")]);
        let r = spearman_weighted(&a, &b, &m, &ExactMatch, FootrulePenalty::HalfLength);
        let s = spearman_footrule(&a, &b, FootrulePenalty::HalfLength);
        assert_eq!(r, s);
        assert!(close(r.raw_distance.unwrap(), 2.0 + 3.5));
    }

    #[test]
    fn rbo_identical_lists_score_one() {
        let x = expl(&["a", "b", "c", "d"]);
        for p in [0.1, 0.5, 0.9, 0.99] {
            assert!(close(rbo(&x, &x, p, true).similarity, 1.0));
        }
    }

    #[test]
    fn rbo_weighted_full_credit_on_singletons() {
        let a = expl(&["a"]);
        let b = expl(&["x"]);
        let m = mapped(&a, &b, &[("a", "x")]);
        for p in [0.3, 0.7] {
            let r = rbo_weighted(&a, &b, p, &m, &table(&[("a", "x", 1.0)]), true);
            assert!(close(r.similarity, 1.0));
        }
    }

    #[test]
    fn unequal_length_rbo_prefix_stops_growing() {
        // A = [a, b, c], B = [b]: overlaps 0, 1, 1
        let r = rbo(&expl(&["a", "b", "c"]), &expl(&["b"]), 0.5, false);
        let expected = 0.5 * (0.0 + 0.5 * 0.5 + 0.25 * (1.0 / 3.0));
        assert!(close(r.similarity, expected));
    }
}
