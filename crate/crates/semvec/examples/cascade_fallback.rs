//! Assemble two models into a fallback cascade with the string
//! heuristic as the last resort, and watch which stage answers each
//! pair.
//!
//! ```bash
//! cargo run --example cascade_fallback
//! ```

use std::sync::Arc;

use semvec::{EmbeddingModel, SimilarityCascade, Vocabulary};

fn toy_model(words: &[&str], vectors: Vec<f32>, dim: usize) -> anyhow::Result<EmbeddingModel> {
    Ok(EmbeddingModel::new(
        Vocabulary::from_words(words.iter().copied())?,
        vectors,
        dim,
    )?)
}

fn main() -> anyhow::Result<()> {
    // The preferred model: small vocabulary, trusted scores.
    let primary = toy_model(
        &["кот", "собака", "дом"],
        vec![1.0, 0.2, 0.9, 0.3, -0.1, 1.0],
        2,
    )?;
    // The backup knows more words but ranks second.
    let backup = toy_model(
        &["кот", "печь", "печка", "дым"],
        vec![1.0, 0.0, 0.3, 0.9, 0.35, 0.85, -0.2, 0.7],
        2,
    )?;

    let cascade = SimilarityCascade::new(vec![Arc::new(primary), Arc::new(backup)], true)?;

    let pairs = [
        ("кот", "собака"),         // both in the primary model
        ("печь", "печка"),         // only the backup knows these
        ("благоразумие", "благоразумность"), // nobody does: string heuristic
        ("кц", "щж"),              // nothing shared at all
    ];
    println!("{:<16} {:<18} {:>8}  source", "word1", "word2", "score");
    for (a, b) in pairs {
        let verdict = cascade.similarity(a, b);
        println!("{a:<16} {b:<18} {:>8.4}  {}", verdict.score, verdict.source);
    }

    let batch = cascade.batch_similarity(&pairs.map(|(a, b)| (a.to_string(), b.to_string())));
    println!(
        "\nper-source counts: models {:?}, lcs {}, none {}  (coverage {:.2})",
        batch.counts.per_model,
        batch.counts.lcs,
        batch.counts.none,
        batch.counts.coverage()
    );
    Ok(())
}
