//! Standard and weighted similarity for one original/perturbed pair.
//!
//! Run with `cargo run --example compare_lists`.
use synrank::{build_mapping, MeasureConfig, MeasureId, RankedExplanation, SubstitutionEvent, SynonymityProvider};
use synrank::synonymity::SynonymLexicon;

fn main() -> synrank::Result<()> {
    let original = RankedExplanation::parse(&["rash", "body", "worried", "really", "sick", "feeling", "over"])?;
    let perturbed = RankedExplanation::parse(&["body", "rash", "alarmed", "feeling", "sickly", "over", "real"])?;
    let log = vec![
        SubstitutionEvent::new(1, "worried", "alarmed")?,
        SubstitutionEvent::new(2, "sick", "sickly")?,
        SubstitutionEvent::new(3, "really", "real")?,
    ];
    let mapping = build_mapping(&original, &perturbed, &log)?;

    let mut lexicon = SynonymLexicon::new();
    lexicon.insert("worried", ["alarmed", "anxious"])?;
    lexicon.insert("sick", ["sickly", "ill"])?;
    let provider = SynonymityProvider::Thesaurus(lexicon);
    let config = MeasureConfig::default();

    println!("{:<10} {:>8} {:>8}", "measure", "standard", "weighted");
    for m in MeasureId::defaults() {
        let s = m.standard(&original, &perturbed, &config);
        let w = m.weighted(&original, &perturbed, &mapping, &provider, &config);
        println!("{:<10} {:>8.4} {:>8.4}", m.to_string(), s.similarity, w.similarity);
    }
    Ok(())
}
