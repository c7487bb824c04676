//! Domain types shared by every other module: features, ranked explanations,
//! substitution logs, adversarial records and feature mappings.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::measures::MeasureId;

/// A single word of an explanation.
///
/// Equality and hashing use the Unicode-lowercased form; the trimmed surface
/// form is kept for display.
#[derive(Clone, Debug)]
pub struct Feature {
    surface: String,
    folded: String,
}

impl Feature {
    pub fn new(token: &str) -> Result<Self> {
        let surface = token.trim();
        if surface.is_empty() {
            return Err(Error::EmptyFeature);
        }
        Ok(Self {
            surface: surface.to_owned(),
            folded: surface.to_lowercase(),
        })
    }

    pub fn surface(&self) -> &str {
        &self.surface
    }

    /// Case-folded key used for every comparison.
    pub fn key(&self) -> &str {
        &self.folded
    }
}

impl PartialEq for Feature {
    fn eq(&self, other: &Self) -> bool {
        self.folded == other.folded
    }
}

impl Eq for Feature {}

impl Hash for Feature {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.folded.hash(state);
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.surface)
    }
}

/// An ordered list of unique features. The feature at index `i` has rank `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedExplanation {
    features: Vec<Feature>,
    positions: HashMap<String, usize>,
}

impl RankedExplanation {
    pub fn new(features: Vec<Feature>) -> Result<Self> {
        if features.is_empty() {
            return Err(Error::EmptyExplanation);
        }
        let mut positions = HashMap::with_capacity(features.len());
        for (i, f) in features.iter().enumerate() {
            if positions.insert(f.key().to_owned(), i).is_some() {
                return Err(Error::DuplicateFeature(f.surface().to_owned()));
            }
        }
        Ok(Self {
            features,
            positions,
        })
    }

    /// Builds an explanation from tokens in rank order.
    pub fn parse<S: AsRef<str>>(tokens: &[S]) -> Result<Self> {
        let features = tokens
            .iter()
            .map(|t| Feature::new(t.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(features)
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn features(&self) -> &[Feature] {
        &self.features
    }

    pub fn get(&self, index: usize) -> Option<&Feature> {
        self.features.get(index)
    }

    /// Zero-based index of `feature`, if present.
    pub fn position(&self, feature: &Feature) -> Option<usize> {
        self.positions.get(feature.key()).copied()
    }

    /// One-based rank of `feature`, if present.
    pub fn rank(&self, feature: &Feature) -> Option<usize> {
        self.position(feature).map(|i| i + 1)
    }

    pub fn contains(&self, feature: &Feature) -> bool {
        self.positions.contains_key(feature.key())
    }

    pub fn tokens(&self) -> Vec<String> {
        self.features.iter().map(|f| f.surface().to_owned()).collect()
    }
}

/// One single-word replacement performed at a given attack iteration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstitutionEvent {
    pub iteration: u32,
    pub original: Feature,
    pub replacement: Feature,
}

impl SubstitutionEvent {
    pub fn new(iteration: u32, original: &str, replacement: &str) -> Result<Self> {
        let original = Feature::new(original)?;
        let replacement = Feature::new(replacement)?;
        if iteration == 0 {
            return Err(Error::UnorderedSubstitutions {
                previous: 0,
                got: 0,
            });
        }
        if original == replacement {
            return Err(Error::SelfSubstitution {
                iteration,
                token: original.surface().to_owned(),
            });
        }
        Ok(Self {
            iteration,
            original,
            replacement,
        })
    }
}

/// Checks that iterations are strictly increasing.
pub fn check_substitution_order(events: &[SubstitutionEvent]) -> Result<()> {
    let mut previous = 0;
    for e in events {
        if e.iteration <= previous {
            return Err(Error::UnorderedSubstitutions {
                previous,
                got: e.iteration,
            });
        }
        previous = e.iteration;
    }
    Ok(())
}

/// One attack instance: texts, explanations, substitution log and the
/// measure/threshold pair that guided it.
#[derive(Clone, Debug, PartialEq)]
pub struct AdversarialRecord {
    pub id: String,
    pub original_text: String,
    pub perturbed_text: String,
    pub original_explanation: RankedExplanation,
    pub perturbed_explanation: RankedExplanation,
    pub substitutions: Vec<SubstitutionEvent>,
    pub guiding_measure: MeasureId,
    /// Success threshold as a fraction (0.30 for "30%").
    pub threshold: f64,
    pub final_similarity: Option<f64>,
}

impl AdversarialRecord {
    pub fn validate(&self) -> Result<()> {
        check_substitution_order(&self.substitutions)?;
        check_fraction("threshold", self.threshold)?;
        if let Some(s) = self.final_similarity {
            check_fraction("final_similarity", s)?;
        }
        Ok(())
    }
}

pub(crate) fn check_fraction(name: &str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidValue(format!("{name} {value} outside [0, 1]")))
    }
}

/// Pairing between the original explanation `A` and the perturbed explanation `B`.
///
/// Every feature of `A` appears exactly once as an origin, in rank order. A
/// `None` target means the origin (or its substituted descendant) left `B`.
/// Targets are one-to-one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeatureMapping {
    pub pairs: Vec<(Feature, Option<Feature>)>,
    /// Features of `B` that no origin maps to (they entered the top-k).
    pub unmapped_targets: Vec<Feature>,
}

impl FeatureMapping {
    /// Identity mapping of an explanation onto itself.
    pub fn identity(explanation: &RankedExplanation) -> Self {
        Self {
            pairs: explanation
                .features()
                .iter()
                .map(|f| (f.clone(), Some(f.clone())))
                .collect(),
            unmapped_targets: Vec::new(),
        }
    }

    pub fn target_of(&self, origin: &Feature) -> Option<&Feature> {
        self.pairs
            .iter()
            .find(|(o, _)| o == origin)
            .and_then(|(_, t)| t.as_ref())
    }

    /// Mapped pairs whose endpoints differ, i.e. substitutions that survived
    /// into `B`.
    pub fn substituted_pairs(&self) -> impl Iterator<Item = (&Feature, &Feature)> {
        self.pairs.iter().filter_map(|(o, t)| match t {
            Some(t) if t != o => Some((o, t)),
            _ => None,
        })
    }

    pub fn null_origins(&self) -> impl Iterator<Item = &Feature> {
        self.pairs
            .iter()
            .filter_map(|(o, t)| t.is_none().then_some(o))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_reference_pair_original_explanation() {
        let e = RankedExplanation::parse(&[
            "rash", "body", "worried", "really", "sick", "feeling", "over",
        ])
        .unwrap();
        assert_eq!(e.len(), 7);
        assert_eq!(e.rank(&Feature::new("rash").unwrap()), Some(1));
        assert_eq!(e.rank(&Feature::new("over").unwrap()), Some(7));
    }

    #[test]
    fn singleton() {
        let e = RankedExplanation::parse(&["a"]).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e.rank(&Feature::new("a").unwrap()), Some(1));
    }

    #[test]
    fn case_fold_collision_is_duplicate() {
        let err = RankedExplanation::parse(&["a", "A"]).unwrap_err();
        assert!(matches!(err, Error::DuplicateFeature(_)));
    }

    #[test]
    fn empty_inputs_rejected() {
        let none: [&str; 0] = [];
        assert!(matches!(
            RankedExplanation::parse(&none),
            Err(Error::EmptyExplanation)
        ));
        assert!(matches!(Feature::new("  \t"), Err(Error::EmptyFeature)));
    }

    #[test]
    fn features_compare_case_folded_and_keep_surface() {
        let a = Feature::new(" Good ").unwrap();
        let b = Feature::new("good").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.surface(), "Good");
        assert_eq!(a.key(), "good");
    }

    #[test]
    fn substitution_rejects_self_replacement() {
        assert!(matches!(
            SubstitutionEvent::new(1, "Word", "word"),
            Err(Error::SelfSubstitution { .. })
        ));
    }

    #[test]
    fn substitution_order_must_increase() {
        let log = vec![
            SubstitutionEvent::new(3, "a", "b").unwrap(),
            SubstitutionEvent::new(3, "c", "d").unwrap(),
        ];
        assert!(check_substitution_order(&log).is_err());
        assert!(check_substitution_order(&log[..1]).is_ok());
    }
}
