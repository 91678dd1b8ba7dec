//! Cosine similarity and nearest-neighbor queries over a hand-built
//! model, without any training.
//!
//! ```bash
//! cargo run --example nearest_neighbors
//! ```

use semvec::{cosine, EmbeddingModel, Vocabulary};

fn main() -> anyhow::Result<()> {
    // Three words on a plane: w1 sits close to w0, w2 is orthogonal.
    let vocab = Vocabulary::from_words(["север", "северок", "восток"])?;
    let vectors = vec![
        1.0, 0.0, //
        0.9, 0.1, //
        0.0, 1.0,
    ];
    let model = EmbeddingModel::new(vocab, vectors, 2)?;

    println!("pairwise cosines:");
    for a in ["север", "северок", "восток"] {
        for b in ["север", "северок", "восток"] {
            print!("{:+.3}  ", model.similarity(a, b).unwrap());
        }
        println!(" ({a})");
    }

    println!("\nnearest to север:");
    for (word, score) in model.nearest("север", 2)? {
        println!("  {word:8} {score:+.5}");
    }

    // The free function works on any slices.
    let raw = cosine(&[1.0f32, 1.0], &[1.0, 0.0])?;
    println!("\ncosine([1,1],[1,0]) = {raw:.5}");

    println!(
        "out-of-vocabulary lookups are a value, not an error: {:?}",
        model.similarity("север", "юг")
    );
    Ok(())
}
