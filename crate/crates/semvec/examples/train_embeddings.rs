//! Train a CBOW model on a synthetic corpus with two topic clusters and
//! watch the clusters separate in the learned space.
//!
//! ```bash
//! cargo run --release --example train_embeddings
//! ```

use std::fs::File;
use std::io::{BufWriter, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semvec::{Algorithm, CorpusConfig, ModelFormat, TrainingConfig};

fn main() -> anyhow::Result<()> {
    let dir = tempfile::tempdir()?;
    let corpus_path = dir.path().join("topics.txt");

    // Sentences draw all their words from a single topic, so words are
    // related iff they share one.
    let animals: Vec<String> = ["кот", "собака", "птица", "рыба", "конь", "мышь"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let tools: Vec<String> = ["молоток", "пила", "гвоздь", "доска", "топор", "клещи"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut out = BufWriter::new(File::create(&corpus_path)?);
    for _ in 0..20_000 {
        let topic = if rng.gen_bool(0.5) { &animals } else { &tools };
        let len = rng.gen_range(4..=9);
        let words: Vec<&str> = (0..len)
            .map(|_| topic[rng.gen_range(0..topic.len())].as_str())
            .collect();
        writeln!(out, "{}", words.join(" "))?;
    }
    out.flush()?;

    let corpus = CorpusConfig::new(vec![corpus_path])?;
    let config = TrainingConfig {
        algorithm: Algorithm::Cbow,
        dim: 48,
        window: 5,
        min_count: 1,
        epochs: 5,
        workers: 1,
        seed: 42,
        ..TrainingConfig::default()
    };
    let (model, stats) = semvec::train_with_stats(&corpus, &config)?;
    println!(
        "trained {} words at {:.0} words/s\n",
        stats.trained_words, stats.words_per_sec
    );

    for probe in ["кот", "пила"] {
        println!("nearest to {probe}:");
        for (word, score) in model.nearest(probe, 3)? {
            println!("  {word:10} {score:+.3}");
        }
    }
    println!();
    println!(
        "same topic   кот / собака      {:+.3}",
        model.similarity("кот", "собака").unwrap()
    );
    println!(
        "cross topic  кот / молоток     {:+.3}",
        model.similarity("кот", "молоток").unwrap()
    );

    let model_path = dir.path().join("topics.bin");
    model.save(&model_path, ModelFormat::Binary)?;
    println!("\nmodel saved to {}", model_path.display());
    Ok(())
}
