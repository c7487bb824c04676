//! Cosine synonymity from word vectors in GloVe text format.
//!
//! Pass a vectors file as the first argument, or a small inline table is used.
use std::io::Cursor;

use synrank::synonymity::EmbeddingTable;
use synrank::{build_mapping, MeasureConfig, MeasureId, RankedExplanation, SubstitutionEvent, SynonymityProvider};

const INLINE: &str = "\
worried 0.8 0.1 0.3 0.0
alarmed 0.7 0.2 0.4 0.1
sick 0.1 0.9 0.2 0.3
sickly 0.2 0.8 0.1 0.4
really 0.5 0.5 0.5 0.5
real 0.6 0.3 0.5 0.2
";

fn main() -> synrank::Result<()> {
    let table = match std::env::args().nth(1) {
        Some(path) => EmbeddingTable::load(path)?,
        None => EmbeddingTable::read(Cursor::new(INLINE))?,
    };
    println!("{} vectors of dimension {}", table.len(), table.dimension());

    let a = RankedExplanation::parse(&["rash", "body", "worried", "really", "sick", "feeling", "over"])?;
    let b = RankedExplanation::parse(&["body", "rash", "alarmed", "feeling", "sickly", "over", "real"])?;
    let log = [
        SubstitutionEvent::new(1, "worried", "alarmed")?,
        SubstitutionEvent::new(2, "sick", "sickly")?,
        SubstitutionEvent::new(3, "really", "real")?,
    ];
    let mapping = build_mapping(&a, &b, &log)?;
    for (x, y) in mapping.substituted_pairs() {
        println!("cos({x}, {y}) = {:.4}", table.cosine(x, y).unwrap_or(0.0));
    }

    let provider = SynonymityProvider::Embedding(table);
    let config = MeasureConfig::default();
    for m in MeasureId::defaults() {
        let w = m.weighted(&a, &b, &mapping, &provider, &config).similarity;
        println!("{m}: {:.4}", w);
    }
    Ok(())
}
