//! Test support: naive reference implementations of the standard measures
//! and weighted RBO, plus seeded generators of random explanation pairs.
//!
//! The oracles work on plain `String` lists with linear scans and set
//! rebuilding at every depth; they share no code with the crate's measures.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use synrank::{
    build_mapping, AdversarialRecord, Feature, FeatureMapping, MeasureId, RankedExplanation,
    SubstitutionEvent,
};

pub fn naive_jaccard(a: &[String], b: &[String]) -> f64 {
    let sa: BTreeSet<&String> = a.iter().collect();
    let sb: BTreeSet<&String> = b.iter().collect();
    let inter = sa.intersection(&sb).count();
    let union = sa.union(&sb).count();
    if inter == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

pub fn naive_kendall(a: &[String], b: &[String]) -> f64 {
    let longest = a.len().max(b.len());
    let mut raw = 0usize;
    for i in 0..longest {
        if a.get(i) != b.get(i) {
            raw += 1;
        }
    }
    1.0 - raw as f64 / longest as f64
}

pub fn naive_footrule(a: &[String], b: &[String]) -> f64 {
    let k = a.len();
    let mut raw = 0.0;
    for (i, x) in a.iter().enumerate() {
        let mut found = None;
        for (j, y) in b.iter().enumerate() {
            if x == y {
                found = Some(j);
            }
        }
        raw += match found {
            Some(j) => (i as f64 - j as f64).abs(),
            None => k as f64 / 2.0,
        };
    }
    let max = (k * k / 2) as f64;
    if max == 0.0 {
        return if raw == 0.0 { 1.0 } else { 0.0 };
    }
    (1.0 - raw / max).max(0.0)
}

/// Naive RBO: rebuilds both prefix sets at every depth. `extra(d)` adds
/// weighted credit to the overlap at depth `d`.
pub fn naive_rbo_with(a: &[String], b: &[String], p: f64, extrapolated: bool, extra: impl Fn(usize) -> f64) -> f64 {
    let k = a.len().max(b.len());
    let mut sum = 0.0;
    let mut last = 0.0;
    for d in 1..=k {
        let pa: BTreeSet<&String> = a.iter().take(d).collect();
        let pb: BTreeSet<&String> = b.iter().take(d).collect();
        let overlap = pa.intersection(&pb).count() as f64 + extra(d);
        sum += p.powi(d as i32 - 1) * overlap / d as f64;
        last = overlap;
    }
    let mut score = (1.0 - p) * sum;
    if extrapolated {
        score += p.powi(k as i32) * last / k as f64;
    }
    score.clamp(0.0, 1.0)
}

pub fn naive_rbo(a: &[String], b: &[String], p: f64, extrapolated: bool) -> f64 {
    naive_rbo_with(a, b, p, extrapolated, |_| 0.0)
}

/// Weighted RBO oracle: at each depth, scan every substituted pair and add
/// its synonymity if both endpoints are inside the prefixes.
pub fn naive_rbo_weighted(
    a: &[String],
    b: &[String],
    p: f64,
    pairs: &[(String, String)],
    syn: &dyn Fn(&str, &str) -> f64,
    extrapolated: bool,
) -> f64 {
    naive_rbo_with(a, b, p, extrapolated, |d| {
        let mut credit = 0.0;
        for (x, y) in pairs {
            let in_a = a.iter().take(d).any(|t| t == x);
            let in_b = b.iter().take(d).any(|t| t == y);
            if in_a && in_b {
                credit += syn(x, y);
            }
        }
        credit
    })
}

pub fn naive_standard(m: MeasureId, a: &[String], b: &[String]) -> f64 {
    match m {
        MeasureId::Jaccard => naive_jaccard(a, b),
        MeasureId::Kendall => naive_kendall(a, b),
        MeasureId::Spearman => naive_footrule(a, b),
        MeasureId::Rbo(p) => naive_rbo(a, b, p, true),
    }
}

pub fn expl(tokens: &[String]) -> RankedExplanation {
    RankedExplanation::parse(tokens).expect("valid explanation")
}

pub fn strings(tokens: &[&str]) -> Vec<String> {
    tokens.iter().map(|t| t.to_string()).collect()
}

/// A random original/perturbed pair with a consistent substitution log.
#[derive(Clone, Debug)]
pub struct Triple {
    pub original: Vec<String>,
    pub perturbed: Vec<String>,
    pub substitutions: Vec<SubstitutionEvent>,
}

impl Triple {
    pub fn explanations(&self) -> (RankedExplanation, RankedExplanation) {
        (expl(&self.original), expl(&self.perturbed))
    }

    pub fn mapping(&self) -> FeatureMapping {
        let (a, b) = self.explanations();
        build_mapping(&a, &b, &self.substitutions).expect("generated triples map cleanly")
    }
}

/// Generates `A` (1..=max_k features), substitutes a random subset through
/// chains of fresh tokens, mixes in newcomers, shuffles lightly and
/// truncates to form `B` (1..=max_k features).
pub fn random_triple(rng: &mut impl Rng, max_k: usize) -> Triple {
    let pool: Vec<String> = (0..12).map(|i| format!("t{i}")).collect();
    let ka = rng.random_range(1..=max_k);
    let original: Vec<String> = pool.choose_multiple(rng, ka).cloned().collect();

    let mut fresh = 0usize;
    let mut next_fresh = || {
        fresh += 1;
        format!("s{fresh}")
    };
    let mut document = original.clone();
    let mut substitutions = Vec::new();
    let mut iteration = 0u32;
    let rounds = rng.random_range(0..=ka + 1);
    for _ in 0..rounds {
        let pos = rng.random_range(0..document.len());
        let replacement = next_fresh();
        iteration += rng.random_range(1..=3);
        substitutions.push(SubstitutionEvent::new(iteration, &document[pos], &replacement).unwrap());
        document[pos] = replacement;
    }
    for _ in 0..rng.random_range(0..=3) {
        document.push(format!("n{}", rng.random_range(0..1000)));
    }
    document.dedup();
    let mut seen = BTreeSet::new();
    document.retain(|t| seen.insert(t.clone()));
    // partial shuffle keeps some positional agreement
    for _ in 0..rng.random_range(0..=3) {
        let i = rng.random_range(0..document.len());
        let j = rng.random_range(0..document.len());
        document.swap(i, j);
    }
    let kb = rng.random_range(1..=max_k.min(document.len()));
    document.truncate(kb);
    Triple {
        original,
        perturbed: document,
        substitutions,
    }
}

/// Two random lists over a shared alphabet with independent lengths.
pub fn random_pair(rng: &mut impl Rng, max_k: usize) -> (Vec<String>, Vec<String>) {
    let pool: Vec<String> = (0..10).map(|i| format!("w{i}")).collect();
    let ka = rng.random_range(1..=max_k);
    let kb = rng.random_range(1..=max_k);
    (
        pool.choose_multiple(rng, ka).cloned().collect(),
        pool.choose_multiple(rng, kb).cloned().collect(),
    )
}

/// Random synonymity table keyed by (origin, target); a fifth of entries
/// are exactly 0 and a fifth exactly 1.
#[derive(Clone, Copy, Debug)]
pub struct RandomSyn {
    seed: u64,
}

impl RandomSyn {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn value(&self, a: &str, b: &str) -> f64 {
        if a == b {
            return 1.0;
        }
        let mut h = self.seed ^ 0xcbf2_9ce4_8422_2325;
        for byte in a.bytes().chain([0u8]).chain(b.bytes()) {
            h = (h ^ u64::from(byte)).wrapping_mul(0x0100_0000_01b3);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(h);
        match rng.random_range(0..5) {
            0 => 0.0,
            1 => 1.0,
            _ => rng.random::<f64>(),
        }
    }

    pub fn as_fn(&self) -> impl Fn(&Feature, &Feature) -> f64 + '_ {
        move |a: &Feature, b: &Feature| self.value(a.key(), b.key())
    }
}

pub fn reference_pair() -> AdversarialRecord {
    AdversarialRecord {
        id: "reference".into(),
        original_text: "I've been feeling really sick and I have a rash all over my body. I'm worried about what it could be.".into(),
        perturbed_text: "I've been feeling real sickly and I have a rash all over my body. I'm alarmed about what it could be.".into(),
        original_explanation: RankedExplanation::parse(&["rash", "body", "worried", "really", "sick", "feeling", "over"]).unwrap(),
        perturbed_explanation: RankedExplanation::parse(&["body", "rash", "alarmed", "feeling", "sickly", "over", "real"]).unwrap(),
        substitutions: vec![
            SubstitutionEvent::new(1, "worried", "alarmed").unwrap(),
            SubstitutionEvent::new(2, "sick", "sickly").unwrap(),
            SubstitutionEvent::new(3, "really", "real").unwrap(),
        ],
        guiding_measure: MeasureId::Jaccard,
        threshold: 0.5,
        final_similarity: None,
    }
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn permutations(items: &[String]) -> Vec<Vec<String>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head.clone());
            out.push(tail);
        }
    }
    out
}
