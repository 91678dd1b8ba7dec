//! Sweep vector size × window on a small synthetic corpus and print the
//! resulting CSV — the input for plotting quality-vs-setting curves.
//!
//! ```bash
//! cargo run --release --example parameter_sweep
//! ```

use std::fs::File;
use std::io::{BufWriter, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semvec::cli::{run_sweep, SweepSpec};
use semvec::{CorpusConfig, DatasetKind, TrainingConfig};

fn main() -> anyhow::Result<()> {
    let dir = tempfile::tempdir()?;

    let corpus_path = dir.path().join("topics.txt");
    let animals = ["кот", "собака", "птица", "рыба"];
    let tools = ["молоток", "пила", "гвоздь", "доска"];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut out = BufWriter::new(File::create(&corpus_path)?);
    for _ in 0..10_000 {
        let topic: &[&str] = if rng.gen_bool(0.5) { &animals } else { &tools };
        let len = rng.gen_range(4..=8);
        let words: Vec<&str> = (0..len).map(|_| topic[rng.gen_range(0..4)]).collect();
        writeln!(out, "{}", words.join(" "))?;
    }
    out.flush()?;

    let dataset_path = dir.path().join("pairs.tsv");
    std::fs::write(
        &dataset_path,
        "кот\tсобака\t1\nптица\tрыба\t1\nмолоток\tпила\t1\n\
         кот\tмолоток\t0\nрыба\tдоска\t0\nсобака\tгвоздь\t0\n",
    )?;

    let spec = SweepSpec {
        dims: vec![52, 100],
        windows: vec![2, 5],
        fixed: TrainingConfig {
            min_count: 1,
            epochs: 2,
            workers: 1,
            seed: 11,
            ..TrainingConfig::default()
        },
        datasets: vec![(dataset_path, DatasetKind::Binary)],
    };
    let corpus = CorpusConfig::new(vec![corpus_path])?;
    let csv_path = dir.path().join("sweep.csv");
    run_sweep(&corpus, &spec, &csv_path)?;

    println!("{}", std::fs::read_to_string(&csv_path)?);
    println!("(rows are sorted by dim, window, dataset; plot value against dim or window)");
    Ok(())
}
