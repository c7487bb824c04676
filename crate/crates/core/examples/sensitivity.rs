//! The same corpus scored under several synonymity providers.
use synrank::harness::{sensitivity_analysis, EvalConfig, NamedProvider};
use synrank::io::render_table;
use synrank::simulate::{default_vocabulary, generate_corpus, synthetic_embedding, synthetic_lexicon, SimulationConfig};
use synrank::{MeasureId, SynonymityProvider};

fn main() -> synrank::Result<()> {
    let lexicon = synthetic_lexicon(40, 3);
    let config = SimulationConfig { seed: 3, tau: 0.6, ..SimulationConfig::default() };
    let records = generate_corpus(80, &default_vocabulary(&lexicon), &lexicon, &config)?;

    let providers = vec![
        NamedProvider::exact(),
        NamedProvider::new("close-vectors", SynonymityProvider::Embedding(synthetic_embedding(&lexicon, 16, 0.3, 1))),
        NamedProvider::new("noisy-vectors", SynonymityProvider::Embedding(synthetic_embedding(&lexicon, 16, 1.5, 1))),
        NamedProvider::new("thesaurus", SynonymityProvider::Thesaurus(lexicon)),
    ];
    let report = sensitivity_analysis("sim", &records, &[MeasureId::Jaccard, MeasureId::Rbo(0.9)], &providers, &[0.5, 0.6], &EvalConfig::default())?;
    print!("{}", render_table(&report));
    Ok(())
}
