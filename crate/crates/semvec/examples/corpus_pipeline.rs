//! Stream sentences from a corpus file with stop-word filtering, then
//! build the frequency-thresholded vocabulary and dump it as TSV.
//!
//! ```bash
//! cargo run --example corpus_pipeline
//! ```

use std::io::Write;

use semvec::{build_vocab, load_stopwords, stream_sentences, CorpusConfig};

fn main() -> anyhow::Result<()> {
    let dir = tempfile::tempdir()?;

    let corpus_path = dir.path().join("corpus.txt");
    std::fs::write(
        &corpus_path,
        "кот и собака играть\n\
         собака гнать кот\n\
         кот\n\
         и в на\n\
         птица петь и кот слушать\n",
    )?;
    let stopword_path = dir.path().join("stopwords.txt");
    std::fs::write(&stopword_path, "и\nв\nна\n")?;

    let config = CorpusConfig::new(vec![corpus_path])?.with_stopwords(&stopword_path);
    let stopwords = load_stopwords(config.stopword_path.as_ref().unwrap(), config.lowercase)?;

    println!("filtered sentences:");
    for sentence in stream_sentences(&config, &stopwords)? {
        println!("  {}", sentence?.tokens().join(" "));
    }
    println!("(the single-word line and the all-stop-word line were dropped)\n");

    let vocab = build_vocab(stream_sentences(&config, &stopwords)?, 1)?;
    println!(
        "vocabulary: {} words, {} retained tokens of {} raw",
        vocab.len(),
        vocab.total_tokens(),
        vocab.raw_tokens()
    );
    let mut tsv = Vec::new();
    vocab.write_tsv(&mut tsv)?;
    println!("word\u{2409}count dump:");
    std::io::stdout().write_all(&tsv)?;
    Ok(())
}
