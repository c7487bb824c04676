//! Weighted Jaccard with a hand-written synonymity function, comparing the
//! two denominator conventions.
use synrank::measures::jaccard_weighted;
use synrank::{build_mapping, Feature, JaccardDenominator, RankedExplanation, SubstitutionEvent};

fn main() -> synrank::Result<()> {
    let a = RankedExplanation::parse(&["great", "film", "acting"])?;
    let b = RankedExplanation::parse(&["superb", "movie", "performance"])?;
    let log = [
        SubstitutionEvent::new(1, "great", "superb")?,
        SubstitutionEvent::new(2, "film", "movie")?,
        SubstitutionEvent::new(3, "acting", "performance")?,
    ];
    let mapping = build_mapping(&a, &b, &log)?;

    // any Fn(&Feature, &Feature) -> f64 works as a provider
    let syn = |x: &Feature, _: &Feature| match x.key() {
        "great" => 0.9,
        "film" => 0.6,
        _ => 0.3,
    };
    for denominator in [JaccardDenominator::Unadjusted, JaccardDenominator::Adjusted] {
        let r = jaccard_weighted(&a, &b, &mapping, &syn, denominator);
        println!("{denominator:?}: {:.4}", r.similarity);
    }
    Ok(())
}
