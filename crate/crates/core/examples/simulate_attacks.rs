//! Greedy synonym-substitution attacks against a toy explainer.
use synrank::simulate::{attack_succeeded, default_vocabulary, generate_corpus, synthetic_lexicon, SimulationConfig};
use synrank::MeasureId;

fn main() -> synrank::Result<()> {
    let lexicon = synthetic_lexicon(40, 3);
    let vocabulary = default_vocabulary(&lexicon);
    let config = SimulationConfig {
        seed: 7,
        guiding_measure: MeasureId::Rbo(0.7),
        tau: 0.4,
        ..SimulationConfig::default()
    };
    let records = generate_corpus(25, &vocabulary, &lexicon, &config)?;
    let wins = records.iter().filter(|r| attack_succeeded(r)).count();
    println!("{wins}/{} attacks pushed {} below {}", records.len(), config.guiding_measure, config.tau);

    let r = &records[0];
    println!("\n{}", r.id);
    println!("  original:  {}", r.original_text);
    println!("  perturbed: {}", r.perturbed_text);
    println!("  explanation: {} -> {}", r.original_explanation.tokens().join(" "), r.perturbed_explanation.tokens().join(" "));
    for e in &r.substitutions {
        println!("  step {}: {} -> {}", e.iteration, e.original, e.replacement);
    }
    println!("  final similarity: {:.4}", r.final_similarity.unwrap_or(f64::NAN));
    Ok(())
}
