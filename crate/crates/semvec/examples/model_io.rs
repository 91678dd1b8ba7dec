//! Persist a model in both interchange layouts and load it back.
//! Binary round-trips bit for bit; text stays within 1e-6 per
//! component. Loading auto-detects the layout.
//!
//! ```bash
//! cargo run --example model_io
//! ```

use semvec::{EmbeddingModel, ModelFormat, Vocabulary};

fn main() -> anyhow::Result<()> {
    let dir = tempfile::tempdir()?;
    let vocab = Vocabulary::from_words(["кот", "собака", "дом"])?;
    let vectors = vec![
        0.125, -0.5, 2.0, //
        0.0034028468, 1.0e-7, -42.75, //
        3.5, 0.0, -0.001953125,
    ];
    let model = EmbeddingModel::new(vocab, vectors, 3)?;

    let binary_path = dir.path().join("model.bin");
    let text_path = dir.path().join("model.vec");
    model.save(&binary_path, ModelFormat::Binary)?;
    model.save(&text_path, ModelFormat::Text)?;

    println!("text layout on disk:");
    print!("{}", std::fs::read_to_string(&text_path)?);
    println!(
        "binary layout: {} bytes (header + word bytes + 4·dim floats each)\n",
        std::fs::metadata(&binary_path)?.len()
    );

    // `load` probes the bytes after the first word to pick the reader.
    let from_binary = EmbeddingModel::load(&binary_path)?;
    let from_text = EmbeddingModel::load(&text_path)?;

    assert_eq!(from_binary.vectors(), model.vectors());
    println!("binary roundtrip: bit-exact");

    let max_dev = from_text
        .vectors()
        .iter()
        .zip(model.vectors())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f32, f32::max);
    println!("text roundtrip:   max component deviation {max_dev:e}");

    // Truncated files are rejected whole; no partial model comes back.
    let bytes = std::fs::read(&binary_path)?;
    let cut_path = dir.path().join("cut.bin");
    std::fs::write(&cut_path, &bytes[..bytes.len() - 7])?;
    match EmbeddingModel::load(&cut_path) {
        Err(e) => println!("truncated file rejected: {e}"),
        Ok(_) => unreachable!("truncation must not load"),
    }
    Ok(())
}
