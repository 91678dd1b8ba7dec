//! Shared fixtures for the integration suites: synthetic corpora with
//! known semantic structure, and datasets derived from them.

// Each integration target compiles this module separately and uses a
// different subset of it.
#![allow(dead_code)]

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Two disjoint topic clusters of ten words each. Every sentence samples
/// 5–12 words (with replacement) from a single cluster, so words are
/// topically related iff they share a cluster.
pub fn topic_words() -> (Vec<String>, Vec<String>) {
    let a = (0..10).map(|i| format!("зверь{i}")).collect();
    let b = (0..10).map(|i| format!("число{i}")).collect();
    (a, b)
}

pub fn write_two_topic_corpus(path: &Path, sentences: usize, seed: u64) {
    let (topic_a, topic_b) = topic_words();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = BufWriter::new(File::create(path).unwrap());
    for _ in 0..sentences {
        let topic = if rng.gen_bool(0.5) { &topic_a } else { &topic_b };
        let len = rng.gen_range(5..=12);
        let words: Vec<&str> = (0..len)
            .map(|_| topic[rng.gen_range(0..topic.len())].as_str())
            .collect();
        writeln!(out, "{}", words.join(" ")).unwrap();
    }
    out.flush().unwrap();
}

/// Graded dataset over the two-topic vocabulary: gold 1.0 for same-
/// cluster pairs, 0.0 for cross-cluster pairs.
pub fn write_cluster_dataset(path: &Path, seed: u64, pairs_per_side: usize) {
    let (topic_a, topic_b) = topic_words();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = BufWriter::new(File::create(path).unwrap());
    writeln!(out, "# gold = cluster co-membership").unwrap();
    let mut within = 0;
    while within < pairs_per_side {
        let topic = if within % 2 == 0 { &topic_a } else { &topic_b };
        let i = rng.gen_range(0..topic.len());
        let j = rng.gen_range(0..topic.len());
        if i == j {
            continue;
        }
        writeln!(out, "{}\t{}\t1.0", topic[i], topic[j]).unwrap();
        within += 1;
    }
    for _ in 0..pairs_per_side {
        let i = rng.gen_range(0..topic_a.len());
        let j = rng.gen_range(0..topic_b.len());
        writeln!(out, "{}\t{}\t0.0", topic_a[i], topic_b[j]).unwrap();
    }
    out.flush().unwrap();
}

/// Mean cosine over all unordered within-cluster pairs minus the mean
/// over all cross-cluster pairs.
pub fn cluster_separation(model: &semvec::EmbeddingModel) -> f64 {
    let (topic_a, topic_b) = topic_words();
    let mut within = Vec::new();
    for topic in [&topic_a, &topic_b] {
        for i in 0..topic.len() {
            for j in i + 1..topic.len() {
                within.push(model.similarity(&topic[i], &topic[j]).unwrap());
            }
        }
    }
    let mut cross = Vec::new();
    for a in &topic_a {
        for b in &topic_b {
            cross.push(model.similarity(a, b).unwrap());
        }
    }
    mean(&within) - mean(&cross)
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}
