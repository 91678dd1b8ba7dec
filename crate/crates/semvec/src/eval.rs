//! Word-pair datasets and the two ranking metrics used to score them:
//! Spearman's rank correlation for graded gold values and (non-
//! interpolated) average precision for binary ones.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::cascade::{SimilarityCascade, SourceCounts, VerdictSource};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {detail}")]
    Malformed {
        path: PathBuf,
        line: usize,
        detail: String,
    },
    #[error("{path}: empty dataset")]
    EmptyDataset { path: PathBuf },
    #[error("input lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("need at least two pairs, got {0}")]
    TooFewPairs(usize),
    #[error("correlation is undefined: {0} are constant")]
    ConstantInput(&'static str),
    #[error("average precision is undefined without positive labels")]
    NoPositives,
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetKind {
    /// Gold values are graded similarities in `[0, 1]`.
    Graded,
    /// Gold values are 0/1 relatedness labels.
    Binary,
}

impl fmt::Display for DatasetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DatasetKind::Graded => write!(f, "graded"),
            DatasetKind::Binary => write!(f, "binary"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairEntry {
    pub word1: String,
    pub word2: String,
    pub gold: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairDataset {
    pub entries: Vec<PairEntry>,
    pub kind: DatasetKind,
}

/// Parses a TSV dataset: `word1<TAB>word2<TAB>gold` per line, `#`
/// comments and blank lines allowed. Gold values are validated against
/// the dataset kind.
pub fn load_dataset(path: &Path, kind: DatasetKind) -> Result<PairDataset, EvalError> {
    let text = std::fs::read_to_string(path).map_err(|source| EvalError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let bad = |line: usize, detail: String| EvalError::Malformed {
        path: path.to_path_buf(),
        line,
        detail,
    };

    let mut entries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(bad(
                line_no,
                format!("expected 3 tab-separated fields, found {}", fields.len()),
            ));
        }
        let (word1, word2) = (fields[0].trim(), fields[1].trim());
        if word1.is_empty() || word2.is_empty() {
            return Err(bad(line_no, "empty word field".into()));
        }
        let gold: f64 = fields[2]
            .trim()
            .parse()
            .map_err(|_| bad(line_no, format!("bad gold value {:?}", fields[2])))?;
        if !gold.is_finite() {
            return Err(bad(line_no, "non-finite gold value".into()));
        }
        match kind {
            DatasetKind::Binary if gold != 0.0 && gold != 1.0 => {
                return Err(bad(
                    line_no,
                    format!("binary dataset requires gold in {{0, 1}}, got {gold}"),
                ));
            }
            DatasetKind::Graded if !(0.0..=1.0).contains(&gold) => {
                return Err(bad(
                    line_no,
                    format!("graded dataset requires gold in [0, 1], got {gold}"),
                ));
            }
            _ => {}
        }
        entries.push(PairEntry {
            word1: word1.to_string(),
            word2: word2.to_string(),
            gold,
        });
    }

    if entries.is_empty() {
        return Err(EvalError::EmptyDataset {
            path: path.to_path_buf(),
        });
    }
    Ok(PairDataset { entries, kind })
}

/// Fractional ranks: tied values share the mean of the ranks they span.
fn fractional_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // 1-based ranks i+1 ..= j+1 averaged over the tie group.
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman's rho: Pearson correlation of the fractional rank vectors.
pub fn spearman(gold: &[f64], predicted: &[f64]) -> Result<f64, EvalError> {
    if gold.len() != predicted.len() {
        return Err(EvalError::LengthMismatch {
            left: gold.len(),
            right: predicted.len(),
        });
    }
    if gold.len() < 2 {
        return Err(EvalError::TooFewPairs(gold.len()));
    }
    if gold.iter().any(|v| !v.is_finite()) {
        return Err(EvalError::NonFinite("gold values"));
    }
    if predicted.iter().any(|v| !v.is_finite()) {
        return Err(EvalError::NonFinite("predicted scores"));
    }
    let constant = |xs: &[f64]| xs.iter().all(|&x| x == xs[0]);
    if constant(gold) {
        return Err(EvalError::ConstantInput("gold values"));
    }
    if constant(predicted) {
        return Err(EvalError::ConstantInput("predicted scores"));
    }

    let rg = fractional_ranks(gold);
    let rp = fractional_ranks(predicted);
    let n = rg.len() as f64;
    let mean_g = rg.iter().sum::<f64>() / n;
    let mean_p = rp.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_g = 0.0;
    let mut var_p = 0.0;
    for (g, p) in rg.iter().zip(&rp) {
        let dg = g - mean_g;
        let dp = p - mean_p;
        cov += dg * dp;
        var_g += dg * dg;
        var_p += dp * dp;
    }
    Ok((cov / (var_g * var_p).sqrt()).clamp(-1.0, 1.0))
}

/// Non-interpolated average precision. Items are ranked by descending
/// score with ties broken by original index, and precision is averaged
/// over the positions of the positive items.
pub fn average_precision(labels: &[bool], scores: &[f64]) -> Result<f64, EvalError> {
    if labels.len() != scores.len() {
        return Err(EvalError::LengthMismatch {
            left: labels.len(),
            right: scores.len(),
        });
    }
    if scores.iter().any(|v| !v.is_finite()) {
        return Err(EvalError::NonFinite("scores"));
    }
    let positives = labels.iter().filter(|&&l| l).count();
    if positives == 0 {
        return Err(EvalError::NoPositives);
    }

    let mut order: Vec<usize> = (0..labels.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .unwrap()
            .then_with(|| a.cmp(&b))
    });

    let mut hits = 0u64;
    let mut sum = 0.0;
    for (rank0, &idx) in order.iter().enumerate() {
        if labels[idx] {
            hits += 1;
            sum += hits as f64 / (rank0 + 1) as f64;
        }
    }
    Ok(sum / positives as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Spearman,
    AveragePrecision,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::Spearman => write!(f, "spearman"),
            Metric::AveragePrecision => write!(f, "average_precision"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EvalReport {
    pub metric: Metric,
    pub value: f64,
    pub pair_count: usize,
    pub source_counts: SourceCounts,
    /// Fraction of pairs resolved by an embedding model (not lcs/none).
    pub coverage: f64,
}

impl EvalReport {
    /// Single-line `key=value` record for machine consumption.
    pub fn record_line(&self) -> String {
        let mut line = format!(
            "metric={} value={:.6} pairs={} coverage={:.6}",
            self.metric, self.value, self.pair_count, self.coverage
        );
        for (i, n) in self.source_counts.per_model.iter().enumerate() {
            line.push_str(&format!(" model{i}={n}"));
        }
        line.push_str(&format!(
            " lcs={} none={}",
            self.source_counts.lcs, self.source_counts.none
        ));
        line
    }

    pub fn write_record(&self, path: &Path) -> Result<(), EvalError> {
        let mut file = std::fs::File::create(path).map_err(|source| EvalError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        writeln!(file, "{}", self.record_line()).map_err(|source| EvalError::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "metric:   {}", self.metric)?;
        writeln!(f, "value:    {:.6}", self.value)?;
        writeln!(f, "pairs:    {}", self.pair_count)?;
        writeln!(f, "coverage: {:.6}", self.coverage)?;
        write!(f, "sources: ")?;
        for (i, n) in self.source_counts.per_model.iter().enumerate() {
            write!(f, " model{i}={n}")?;
        }
        write!(
            f,
            " lcs={} none={}",
            self.source_counts.lcs, self.source_counts.none
        )
    }
}

/// Scores every pair of the dataset through the cascade and applies the
/// metric that matches the dataset kind. Pairs nothing can resolve score
/// 0, mirroring the convention that 0 means unrelated.
pub fn evaluate(cascade: &SimilarityCascade, dataset: &PairDataset) -> Result<EvalReport, EvalError> {
    let pairs: Vec<(&str, &str)> = dataset
        .entries
        .iter()
        .map(|e| (e.word1.as_str(), e.word2.as_str()))
        .collect();
    let batch = cascade.batch_similarity(&pairs);
    debug_assert!(batch
        .verdicts
        .iter()
        .all(|v| (0.0..=1.0).contains(&v.score) || v.source == VerdictSource::None));

    let predicted: Vec<f64> = batch.verdicts.iter().map(|v| v.score).collect();
    let gold: Vec<f64> = dataset.entries.iter().map(|e| e.gold).collect();

    let (metric, value) = match dataset.kind {
        DatasetKind::Graded => (Metric::Spearman, spearman(&gold, &predicted)?),
        DatasetKind::Binary => {
            let labels: Vec<bool> = gold.iter().map(|&g| g == 1.0).collect();
            (
                Metric::AveragePrecision,
                average_precision(&labels, &predicted)?,
            )
        }
    };

    Ok(EvalReport {
        metric,
        value,
        pair_count: dataset.entries.len(),
        coverage: batch.counts.coverage(),
        source_counts: batch.counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cascade::SimilarityCascade;
    use crate::model::EmbeddingModel;
    use crate::vocab::Vocabulary;
    use proptest::prelude::*;

    #[test]
    fn dataset_parses_graded_lines() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.tsv");
        std::fs::write(&path, "# comment\nкот\tсобака\t0.7\n").unwrap();
        let ds = load_dataset(&path, DatasetKind::Graded).unwrap();
        assert_eq!(ds.entries.len(), 1);
        assert_eq!(ds.entries[0].word1, "кот");
        assert_eq!(ds.entries[0].gold, 0.7);
    }

    #[test]
    fn binary_dataset_rejects_graded_gold() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.tsv");
        std::fs::write(&path, "кот\tсобака\t0.7\n").unwrap();
        assert!(matches!(
            load_dataset(&path, DatasetKind::Binary),
            Err(EvalError::Malformed { line: 1, .. })
        ));
    }

    #[test]
    fn comments_only_is_empty_dataset() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.tsv");
        std::fs::write(&path, "# a\n# b\n\n").unwrap();
        assert!(matches!(
            load_dataset(&path, DatasetKind::Graded),
            Err(EvalError::EmptyDataset { .. })
        ));
    }

    #[test]
    fn malformed_line_numbers_are_reported() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.tsv");
        std::fs::write(&path, "a\tb\t0.5\nbroken line\n").unwrap();
        assert!(matches!(
            load_dataset(&path, DatasetKind::Graded),
            Err(EvalError::Malformed { line: 2, .. })
        ));
    }

    #[test]
    fn spearman_perfect_agreement() {
        let rho = spearman(&[1.0, 2.0, 3.0], &[0.1, 0.2, 0.3]).unwrap();
        assert_eq!(rho, 1.0);
    }

    #[test]
    fn spearman_perfect_reversal() {
        let rho = spearman(&[1.0, 2.0, 3.0], &[0.3, 0.2, 0.1]).unwrap();
        assert_eq!(rho, -1.0);
    }

    #[test]
    fn spearman_with_ties_hand_example() {
        // predicted ranks (1.5, 1.5, 3, 4) against gold ranks (1, 2, 3, 4):
        // rho = 4.5 / sqrt(22.5) ≈ 0.948683
        let rho = spearman(&[1.0, 2.0, 3.0, 4.0], &[0.5, 0.5, 0.7, 0.9]).unwrap();
        assert!((rho - 4.5 / 22.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn spearman_rejects_constant_lists() {
        assert!(matches!(
            spearman(&[1.0, 1.0, 1.0], &[0.1, 0.2, 0.3]),
            Err(EvalError::ConstantInput("gold values"))
        ));
        assert!(matches!(
            spearman(&[1.0, 2.0, 3.0], &[0.5, 0.5, 0.5]),
            Err(EvalError::ConstantInput("predicted scores"))
        ));
    }

    #[test]
    fn ap_perfect_separation_is_one() {
        let ap = average_precision(&[true, true, false, false], &[0.9, 0.8, 0.2, 0.1]).unwrap();
        assert_eq!(ap, 1.0);
    }

    #[test]
    fn ap_single_positive_at_rank_two() {
        let ap = average_precision(&[false, true], &[0.9, 0.1]).unwrap();
        assert_eq!(ap, 0.5);
    }

    #[test]
    fn ap_alternating_labels() {
        // ranked labels [1, 0, 1, 0] → (1/1 + 2/3) / 2
        let ap = average_precision(&[true, false, true, false], &[0.9, 0.8, 0.7, 0.6]).unwrap();
        assert!((ap - 5.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn ap_without_positives_is_undefined() {
        assert!(matches!(
            average_precision(&[false, false], &[0.1, 0.2]),
            Err(EvalError::NoPositives)
        ));
    }

    #[test]
    fn ap_tie_break_uses_original_index() {
        // Both items score the same; the earlier index ranks first.
        let ap = average_precision(&[true, false], &[0.5, 0.5]).unwrap();
        assert_eq!(ap, 1.0);
        let ap = average_precision(&[false, true], &[0.5, 0.5]).unwrap();
        assert_eq!(ap, 0.5);
    }

    fn cluster_model() -> EmbeddingModel {
        let vocab = Vocabulary::from_words(["a1", "a2", "b1", "b2"]).unwrap();
        let vectors = vec![
            1.0, 0.1, //
            0.9, 0.2, //
            0.1, 1.0, //
            0.2, 0.9,
        ];
        EmbeddingModel::new(vocab, vectors, 2).unwrap()
    }

    fn dataset(kind: DatasetKind, rows: &[(&str, &str, f64)]) -> PairDataset {
        PairDataset {
            kind,
            entries: rows
                .iter()
                .map(|(a, b, g)| PairEntry {
                    word1: a.to_string(),
                    word2: b.to_string(),
                    gold: *g,
                })
                .collect(),
        }
    }

    #[test]
    fn evaluate_graded_orders_clusters() {
        let cascade = SimilarityCascade::from_model(cluster_model());
        let ds = dataset(
            DatasetKind::Graded,
            &[
                ("a1", "a2", 1.0),
                ("b1", "b2", 0.9),
                ("a1", "b1", 0.1),
                ("a2", "b2", 0.0),
            ],
        );
        let report = evaluate(&cascade, &ds).unwrap();
        assert_eq!(report.metric, Metric::Spearman);
        assert!(report.value > 0.7, "rho = {}", report.value);
        assert_eq!(report.coverage, 1.0);
        assert_eq!(report.pair_count, 4);
    }

    #[test]
    fn evaluate_binary_perfect_separator() {
        let cascade = SimilarityCascade::from_model(cluster_model());
        let ds = dataset(
            DatasetKind::Binary,
            &[
                ("a1", "a2", 1.0),
                ("b1", "b2", 1.0),
                ("a1", "b1", 0.0),
                ("a2", "b2", 0.0),
            ],
        );
        let report = evaluate(&cascade, &ds).unwrap();
        assert_eq!(report.metric, Metric::AveragePrecision);
        assert_eq!(report.value, 1.0);
    }

    #[test]
    fn evaluate_degenerate_scorer_reports_constant_error() {
        // The model knows none of the words and lcs is off: every score
        // is 0, so Spearman is undefined.
        let cascade = SimilarityCascade::from_model(cluster_model());
        let ds = dataset(
            DatasetKind::Graded,
            &[("x", "y", 0.2), ("y", "z", 0.8), ("z", "w", 0.5)],
        );
        match evaluate(&cascade, &ds) {
            Err(EvalError::ConstantInput("predicted scores")) => {}
            other => panic!("expected constant-prediction error, got {other:?}"),
        }
    }

    #[test]
    fn record_line_is_machine_friendly() {
        let cascade = SimilarityCascade::from_model(cluster_model());
        let ds = dataset(
            DatasetKind::Binary,
            &[("a1", "a2", 1.0), ("a1", "b1", 0.0)],
        );
        let report = evaluate(&cascade, &ds).unwrap();
        let line = report.record_line();
        assert!(line.starts_with("metric=average_precision value="));
        assert!(line.contains(" pairs=2 "));
        assert!(line.contains(" model0=2 "));
        assert!(line.ends_with("lcs=0 none=0"));
    }

    /// O(n²) rank computation, deliberately different from the sort-based
    /// implementation.
    fn naive_spearman(gold: &[f64], predicted: &[f64]) -> f64 {
        fn ranks(xs: &[f64]) -> Vec<f64> {
            xs.iter()
                .map(|&x| {
                    let less = xs.iter().filter(|&&y| y < x).count() as f64;
                    let ties = xs.iter().filter(|&&y| y == x).count() as f64;
                    less + (ties + 1.0) / 2.0
                })
                .collect()
        }
        let rg = ranks(gold);
        let rp = ranks(predicted);
        let n = rg.len() as f64;
        let mg = rg.iter().sum::<f64>() / n;
        let mp = rp.iter().sum::<f64>() / n;
        let cov: f64 = rg.iter().zip(&rp).map(|(a, b)| (a - mg) * (b - mp)).sum();
        let vg: f64 = rg.iter().map(|a| (a - mg) * (a - mg)).sum();
        let vp: f64 = rp.iter().map(|b| (b - mp) * (b - mp)).sum();
        cov / (vg * vp).sqrt()
    }

    /// Direct AP formula over an explicitly sorted copy.
    fn naive_average_precision(labels: &[bool], scores: &[f64]) -> f64 {
        let mut items: Vec<(f64, usize, bool)> = scores
            .iter()
            .copied()
            .zip(0..)
            .zip(labels.iter().copied())
            .map(|((s, i), l)| (s, i, l))
            .collect();
        items.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
        let total = labels.iter().filter(|&&l| l).count() as f64;
        let mut seen = 0.0;
        let mut acc = 0.0;
        for (rank, item) in items.iter().enumerate() {
            if item.2 {
                seen += 1.0;
                acc += seen / (rank + 1) as f64;
            }
        }
        acc / total
    }

    proptest! {
        #[test]
        fn spearman_matches_naive_reference(
            pairs in proptest::collection::vec((0.0f64..1.0, 0.0f64..1.0), 2..50),
        ) {
            let gold: Vec<f64> = pairs.iter().map(|p| (p.0 * 8.0).round() / 8.0).collect();
            let predicted: Vec<f64> = pairs.iter().map(|p| (p.1 * 8.0).round() / 8.0).collect();
            match spearman(&gold, &predicted) {
                Ok(rho) => {
                    let reference = naive_spearman(&gold, &predicted);
                    prop_assert!((rho - reference).abs() < 1e-12);
                }
                Err(EvalError::ConstantInput(_)) => {}
                Err(e) => prop_assert!(false, "unexpected error {e:?}"),
            }
        }

        #[test]
        fn ap_matches_naive_reference(
            items in proptest::collection::vec((proptest::bool::ANY, 0.0f64..1.0), 1..50),
        ) {
            let labels: Vec<bool> = items.iter().map(|i| i.0).collect();
            let scores: Vec<f64> = items.iter().map(|i| (i.1 * 4.0).round() / 4.0).collect();
            match average_precision(&labels, &scores) {
                Ok(ap) => {
                    let reference = naive_average_precision(&labels, &scores);
                    prop_assert!((ap - reference).abs() < 1e-12);
                    prop_assert!((0.0..=1.0).contains(&ap));
                }
                Err(EvalError::NoPositives) => prop_assert!(labels.iter().all(|&l| !l)),
                Err(e) => prop_assert!(false, "unexpected error {e:?}"),
            }
        }

        #[test]
        fn spearman_is_invariant_under_monotone_transforms(
            pairs in proptest::collection::vec((0.0f64..1.0, 0.01f64..1.0), 3..30),
        ) {
            let gold: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let predicted: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            let cubed: Vec<f64> = predicted.iter().map(|&x| x * x * x).collect();
            let affine: Vec<f64> = predicted.iter().map(|&x| 2.0 * x + 1.0).collect();
            if let Ok(base) = spearman(&gold, &predicted) {
                prop_assert!((spearman(&gold, &cubed).unwrap() - base).abs() < 1e-12);
                prop_assert!((spearman(&gold, &affine).unwrap() - base).abs() < 1e-12);
            }
        }

        #[test]
        fn ap_depends_only_on_ranks(
            items in proptest::collection::vec((proptest::bool::ANY, 0.01f64..1.0), 1..30),
        ) {
            let labels: Vec<bool> = items.iter().map(|i| i.0).collect();
            let scores: Vec<f64> = items.iter().map(|i| i.1).collect();
            let cubed: Vec<f64> = scores.iter().map(|&x| x * x * x).collect();
            match (average_precision(&labels, &scores), average_precision(&labels, &cubed)) {
                (Ok(a), Ok(b)) => prop_assert!((a - b).abs() < 1e-12),
                (Err(EvalError::NoPositives), Err(EvalError::NoPositives)) => {}
                other => prop_assert!(false, "mismatched outcomes {other:?}"),
            }
        }

        #[test]
        fn metrics_survive_row_permutation(
            n in 3usize..20,
            seed in 0u64..500,
        ) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            // Distinct scores so the AP tie-break cannot bite.
            let gold: Vec<f64> = (0..n).map(|i| ((i * 7919) % 13) as f64).collect();
            let predicted: Vec<f64> = (0..n).map(|i| i as f64 + 0.5).collect();
            let labels: Vec<bool> = (0..n).map(|i| i % 2 == 0).collect();

            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let g2: Vec<f64> = order.iter().map(|&i| gold[i]).collect();
            let p2: Vec<f64> = order.iter().map(|&i| predicted[i]).collect();
            let l2: Vec<bool> = order.iter().map(|&i| labels[i]).collect();

            if let (Ok(a), Ok(b)) = (spearman(&gold, &predicted), spearman(&g2, &p2)) {
                prop_assert!((a - b).abs() < 1e-12);
            }
            let (a, b) = (
                average_precision(&labels, &predicted).unwrap(),
                average_precision(&l2, &p2).unwrap(),
            );
            prop_assert!((a - b).abs() < 1e-12);
        }
    }
}
