//! The two training-time distributions: the negative-sampling table
//! built from counts^0.75, and the (default-off) frequent-word
//! subsampling keep-probabilities.
//!
//! ```bash
//! cargo run --example subsampling_and_tables
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use semvec::{build_negative_table, build_vocab, subsample_keep_prob, CorpusConfig};

fn main() -> anyhow::Result<()> {
    let dir = tempfile::tempdir()?;
    let corpus_path = dir.path().join("corpus.txt");
    // Zipf-ish counts: "и" dominates, "собака" is rare.
    let mut text = String::new();
    for i in 0..1000 {
        text.push_str("и кот");
        if i % 4 == 0 {
            text.push_str(" дом");
        }
        if i % 50 == 0 {
            text.push_str(" собака");
        }
        text.push('\n');
    }
    std::fs::write(&corpus_path, text)?;

    let config = CorpusConfig::new(vec![corpus_path])?;
    let stopwords = config.load_stopwords()?;
    let vocab = build_vocab(semvec::stream_sentences(&config, &stopwords)?, 1)?;

    let table = build_negative_table(&vocab, 0.75, 100_000)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut hits = vec![0u64; vocab.len()];
    for _ in 0..200_000 {
        hits[table.sample(&mut rng)] += 1;
    }
    println!("negative-sampling draws vs raw frequency (power 0.75 flattens the head):");
    println!("{:<8} {:>7} {:>10} {:>12}", "word", "count", "drawn", "drawn share");
    for id in 0..vocab.len() {
        println!(
            "{:<8} {:>7} {:>10} {:>11.4}%",
            vocab.word(id),
            vocab.count(id),
            hits[id],
            hits[id] as f64 / 2000.0
        );
    }

    println!("\nsubsampling keep-probabilities (sample = 1e-3):");
    for id in 0..vocab.len() {
        let keep = subsample_keep_prob(vocab.count(id), vocab.total_tokens(), 1e-3);
        println!("  {:<8} keep {:.3}", vocab.word(id), keep);
    }
    println!("  with sample = 0 every word keeps probability 1 (the default)");
    Ok(())
}
