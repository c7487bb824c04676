//! Success rates over a corpus, written as CSV and printed as a table.
use synrank::harness::{evaluate_corpus, EvalConfig, NamedProvider, DEFAULT_THRESHOLDS};
use synrank::io::{render_csv, render_table};
use synrank::simulate::{default_vocabulary, generate_corpus, synthetic_lexicon, SimulationConfig};
use synrank::{MeasureId, SynonymityProvider};

fn main() -> synrank::Result<()> {
    let lexicon = synthetic_lexicon(40, 3);
    let records = generate_corpus(100, &default_vocabulary(&lexicon), &lexicon, &SimulationConfig::default())?;

    let measures = [MeasureId::Jaccard, MeasureId::Kendall, MeasureId::Rbo(0.9)];
    let providers = [NamedProvider::new("thesaurus", SynonymityProvider::Thesaurus(lexicon))];
    let report = evaluate_corpus("simulated", &records, &measures, &providers, &DEFAULT_THRESHOLDS, &EvalConfig::default())?;

    print!("{}", render_table(&report));
    println!();
    print!("{}", render_csv(&report)?);
    Ok(())
}
