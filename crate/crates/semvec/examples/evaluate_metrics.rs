//! Score a model against graded and binary word-pair datasets with
//! Spearman's rho and average precision.
//!
//! ```bash
//! cargo run --example evaluate_metrics
//! ```

use semvec::{evaluate, load_dataset, DatasetKind, EmbeddingModel, SimilarityCascade, Vocabulary};

fn main() -> anyhow::Result<()> {
    let dir = tempfile::tempdir()?;

    // Two tight clusters: а* and б*.
    let vocab = Vocabulary::from_words(["а1", "а2", "а3", "б1", "б2", "б3"])?;
    let vectors = vec![
        1.0, 0.1, //
        0.9, 0.2, //
        0.95, 0.15, //
        0.1, 1.0, //
        0.2, 0.9, //
        0.15, 0.95,
    ];
    let model = EmbeddingModel::new(vocab, vectors, 2)?;
    let cascade = SimilarityCascade::from_model(model);

    let graded_path = dir.path().join("graded.tsv");
    std::fs::write(
        &graded_path,
        "# word1<TAB>word2<TAB>gold in [0,1]\n\
         а1\tа2\t0.95\nа2\tа3\t0.9\nб1\tб2\t0.85\n\
         а1\tб1\t0.2\nа2\tб2\t0.1\nа3\tб3\t0.0\n",
    )?;
    let graded = load_dataset(&graded_path, DatasetKind::Graded)?;
    let report = evaluate(&cascade, &graded)?;
    println!("graded dataset:\n{report}\n");
    println!("record line: {}\n", report.record_line());

    let binary_path = dir.path().join("binary.tsv");
    std::fs::write(
        &binary_path,
        "а1\tа2\t1\nа1\tа3\t1\nб1\tб3\t1\nа1\tб1\t0\nа2\tб3\t0\nа3\tб2\t0\n",
    )?;
    let binary = load_dataset(&binary_path, DatasetKind::Binary)?;
    let report = evaluate(&cascade, &binary)?;
    println!("binary dataset:\n{report}");
    Ok(())
}
