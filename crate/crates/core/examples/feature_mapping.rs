//! Composing a substitution log into a feature mapping, including a chain
//! `happy -> glad -> pleased` and a feature that drops out.
use synrank::{build_mapping, compose_substitutions, RankedExplanation, SubstitutionEvent};

fn main() -> synrank::Result<()> {
    let log = vec![
        SubstitutionEvent::new(1, "happy", "glad")?,
        SubstitutionEvent::new(2, "quick", "fast")?,
        SubstitutionEvent::new(4, "glad", "pleased")?,
    ];
    for (from, to) in compose_substitutions(&log)? {
        println!("{from} => {to}");
    }

    let a = RankedExplanation::parse(&["happy", "quick", "dog", "park"])?;
    let b = RankedExplanation::parse(&["fast", "pleased", "park", "ball"])?;
    let mapping = build_mapping(&a, &b, &log)?;
    for (origin, target) in &mapping.pairs {
        match target {
            Some(t) => println!("{:<6} -> {t}", origin.to_string()),
            None => println!("{:<6} -> NULL", origin.to_string()),
        }
    }
    let extra: Vec<String> = mapping.unmapped_targets.iter().map(|f| f.to_string()).collect();
    println!("new in perturbed list: {}", extra.join(", "));
    Ok(())
}
