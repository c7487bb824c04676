//! Pairing original-explanation features with their perturbed counterparts.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::explanation::{
    check_substitution_order, Feature, FeatureMapping, RankedExplanation, SubstitutionEvent,
};

/// Collapses a substitution log into origin → final-token chains.
///
/// `a→b` at one iteration followed by `b→c` later yields `a→c`; intermediate
/// tokens never appear as keys. A chain that returns to its origin is dropped.
pub fn compose_substitutions(events: &[SubstitutionEvent]) -> Result<HashMap<Feature, Feature>> {
    check_substitution_order(events)?;
    // origin -> current endpoint, and the reverse index
    let mut chains: HashMap<Feature, Feature> = HashMap::new();
    let mut endpoints: HashMap<Feature, Feature> = HashMap::new();

    for e in events {
        if endpoints.contains_key(&e.replacement) {
            return Err(Error::ConflictingChain {
                iteration: e.iteration,
                replacement: e.replacement.surface().to_owned(),
            });
        }
        let origin = match endpoints.remove(&e.original) {
            Some(origin) => origin,
            None => {
                if chains.contains_key(&e.original) {
                    // the origin token was already replaced; it cannot be replaced again
                    return Err(Error::ConflictingChain {
                        iteration: e.iteration,
                        replacement: e.replacement.surface().to_owned(),
                    });
                }
                e.original.clone()
            }
        };
        if origin == e.replacement {
            chains.remove(&origin);
        } else {
            chains.insert(origin.clone(), e.replacement.clone());
            endpoints.insert(e.replacement.clone(), origin);
        }
    }
    Ok(chains)
}

/// Maps every feature of `original` to a feature of `perturbed` or to nothing.
///
/// Survivors (present in both lists) map to themselves. Otherwise the
/// composed substitution chain is followed; if its endpoint is in
/// `perturbed` the origin maps there, else it maps to `None`.
pub fn build_mapping(
    original: &RankedExplanation,
    perturbed: &RankedExplanation,
    substitutions: &[SubstitutionEvent],
) -> Result<FeatureMapping> {
    let chains = compose_substitutions(substitutions)?;
    let mut claimed: HashSet<&Feature> = HashSet::new();
    let mut targets: Vec<Option<Feature>> = vec![None; original.len()];

    for (slot, a) in targets.iter_mut().zip(original.features()) {
        if perturbed.contains(a) {
            claimed.insert(a);
            *slot = Some(a.clone());
        }
    }
    for (slot, a) in targets.iter_mut().zip(original.features()) {
        if slot.is_some() {
            continue;
        }
        if let Some(b) = chains.get(a).filter(|b| perturbed.contains(b)) {
            if !claimed.insert(b) {
                return Err(Error::AmbiguousTarget {
                    origin: a.surface().to_owned(),
                    target: b.surface().to_owned(),
                });
            }
            *slot = Some(b.clone());
        }
    }

    let unmapped_targets = perturbed
        .features()
        .iter()
        .filter(|b| !claimed.contains(b))
        .cloned()
        .collect();
    Ok(FeatureMapping {
        pairs: original.features().iter().cloned().zip(targets).collect(),
        unmapped_targets,
    })
}
