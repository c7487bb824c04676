//! Similarity between ranked feature-importance explanations, with optional
//! synonymity weighting for features replaced during an adversarial attack.
//!
//! The crate is organised bottom-up:
//!
//! * [`explanation`]: features, ranked explanations, substitution logs and records.
//! * [`mapping`]: pairs original features with their perturbed counterparts.
//! * [`synonymity`]: exact, embedding and thesaurus `Syn(a, b)` providers.
//! * [`measures`]: Jaccard, Kendall, Spearman footrule and RBO, standard and weighted.
//! * [`harness`]: attack-success rates and average similarities over corpora.
//! * [`simulate`]: a deterministic toy attack generator for building test corpora.
//! * [`io`]: JSONL records, CSV/JSON reports and the small text inputs used by the CLI.
//! * [`cli`]: the `synrank` command-line front end.
//!
//! ```
//! use synrank::{build_mapping, MeasureConfig, MeasureId, RankedExplanation, SubstitutionEvent};
//! use synrank::synonymity::SynonymLexicon;
//!
//! let original = RankedExplanation::parse(&["rash", "body", "worried"]).unwrap();
//! let perturbed = RankedExplanation::parse(&["body", "rash", "alarmed"]).unwrap();
//! let log = [SubstitutionEvent::new(1, "worried", "alarmed").unwrap()];
//! let mapping = build_mapping(&original, &perturbed, &log).unwrap();
//!
//! let mut lexicon = SynonymLexicon::new();
//! lexicon.insert("worried", ["alarmed", "anxious"]).unwrap();
//!
//! let config = MeasureConfig::default();
//! let standard = MeasureId::Jaccard.standard(&original, &perturbed, &config);
//! let weighted = MeasureId::Jaccard.weighted(&original, &perturbed, &mapping, &lexicon, &config);
//! assert_eq!(standard.similarity, 0.5);
//! assert_eq!(weighted.similarity, 0.75);
//! ```

pub mod cli;
pub mod error;
pub mod explanation;
pub mod harness;
pub mod io;
pub mod mapping;
pub mod measures;
pub mod simulate;
pub mod synonymity;

pub use error::{Error, Result};
pub use explanation::{AdversarialRecord, Feature, FeatureMapping, RankedExplanation, SubstitutionEvent};
pub use mapping::{build_mapping, compose_substitutions};
pub use measures::{JaccardDenominator, MeasureConfig, MeasureId, SimilarityResult};
pub use synonymity::{Synonymity, SynonymityProvider};
