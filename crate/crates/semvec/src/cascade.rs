//! Pair similarity through an ordered model assembly.
//!
//! A cascade walks its models in priority order and lets the first one
//! that knows both words answer. Pairs unknown to every model can fall
//! back to a string heuristic: the length of the longest common
//! substring divided by ten, counted in code points, zero unless the
//! shared run is longer than three characters. Scores from any source
//! stay in `[0, 1]`, so mixed sources remain comparable.

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use thiserror::Error;

use crate::model::{EmbeddingModel, ModelError};

/// Shortest common run that earns a non-zero heuristic score.
pub const DEFAULT_LCS_MIN_LEN: usize = 4;
/// A shared run of this many code points (or more, clamped) scores 1.0.
pub const DEFAULT_LCS_DIVISOR: f64 = 10.0;

#[derive(Debug, Error)]
pub enum CascadeError {
    #[error("cascade needs at least one model or the lcs fallback")]
    Empty,
    #[error("{path}:{line}: {detail}")]
    Config {
        path: PathBuf,
        line: usize,
        detail: String,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Longest common contiguous substring, in code points. Among equally
/// long runs the one starting earliest in `a` (then in `b`) wins, so the
/// result is deterministic.
pub fn longest_common_substring(a: &str, b: &str) -> String {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() || b.is_empty() {
        return String::new();
    }

    // Classic DP over run lengths ending at (i, j), keeping one row.
    let mut prev = vec![0usize; b.len() + 1];
    let mut row = vec![0usize; b.len() + 1];
    let mut best_len = 0usize;
    let mut best_end = 0usize; // exclusive end in `a`
    for (i, ca) in a.iter().enumerate() {
        for (j, cb) in b.iter().enumerate() {
            row[j + 1] = if ca == cb { prev[j] + 1 } else { 0 };
            if row[j + 1] > best_len {
                best_len = row[j + 1];
                best_end = i + 1;
            }
        }
        std::mem::swap(&mut prev, &mut row);
    }
    a[best_end - best_len..best_end].iter().collect()
}

fn lcs_score(len: usize, min_len: usize, divisor: f64) -> f64 {
    if len < min_len {
        0.0
    } else {
        (len as f64 / divisor).min(1.0)
    }
}

/// String-heuristic similarity: `L / 10` for the longest common
/// substring of `L > 3` code points, clamped to 1.0; zero otherwise.
pub fn lcs_similarity(word1: &str, word2: &str) -> f64 {
    lcs_score(
        longest_common_substring(word1, word2).chars().count(),
        DEFAULT_LCS_MIN_LEN,
        DEFAULT_LCS_DIVISOR,
    )
}

/// Which stage of the cascade produced a score.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictSource {
    /// Index into the cascade's model list.
    Model(usize),
    /// The longest-common-substring fallback.
    Lcs,
    /// Nothing could resolve the pair; the score is 0.
    None,
}

impl fmt::Display for VerdictSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerdictSource::Model(i) => write!(f, "{i}"),
            VerdictSource::Lcs => write!(f, "lcs"),
            VerdictSource::None => write!(f, "none"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityVerdict {
    /// Always in `[0, 1]`.
    pub score: f64,
    pub source: VerdictSource,
}

/// Per-source tallies from a batch run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceCounts {
    /// Hits per cascade model, by index.
    pub per_model: Vec<u64>,
    pub lcs: u64,
    pub none: u64,
}

impl SourceCounts {
    fn new(models: usize) -> Self {
        SourceCounts {
            per_model: vec![0; models],
            lcs: 0,
            none: 0,
        }
    }

    fn record(&mut self, source: VerdictSource) {
        match source {
            VerdictSource::Model(i) => self.per_model[i] += 1,
            VerdictSource::Lcs => self.lcs += 1,
            VerdictSource::None => self.none += 1,
        }
    }

    /// Pairs resolved by any embedding model.
    pub fn model_hits(&self) -> u64 {
        self.per_model.iter().sum()
    }

    pub fn total(&self) -> u64 {
        self.model_hits() + self.lcs + self.none
    }

    /// Fraction of pairs resolved by a model rather than the string
    /// fallback or nothing.
    pub fn coverage(&self) -> f64 {
        if self.total() == 0 {
            0.0
        } else {
            self.model_hits() as f64 / self.total() as f64
        }
    }
}

#[derive(Debug, Clone)]
pub struct BatchVerdicts {
    pub verdicts: Vec<SimilarityVerdict>,
    pub counts: SourceCounts,
}

/// Ordered list of models with an optional string-heuristic fallback.
/// The first model is the preferred one; later models only see pairs
/// the earlier ones could not resolve.
#[derive(Clone)]
pub struct SimilarityCascade {
    models: Vec<Arc<EmbeddingModel>>,
    lcs_enabled: bool,
    lcs_min_len: usize,
    lcs_divisor: f64,
}

impl SimilarityCascade {
    pub fn new(
        models: Vec<Arc<EmbeddingModel>>,
        lcs_enabled: bool,
    ) -> Result<Self, CascadeError> {
        if models.is_empty() && !lcs_enabled {
            return Err(CascadeError::Empty);
        }
        Ok(SimilarityCascade {
            models,
            lcs_enabled,
            lcs_min_len: DEFAULT_LCS_MIN_LEN,
            lcs_divisor: DEFAULT_LCS_DIVISOR,
        })
    }

    /// Wraps a single model with the fallback disabled.
    pub fn from_model(model: EmbeddingModel) -> Self {
        SimilarityCascade {
            models: vec![Arc::new(model)],
            lcs_enabled: false,
            lcs_min_len: DEFAULT_LCS_MIN_LEN,
            lcs_divisor: DEFAULT_LCS_DIVISOR,
        }
    }

    pub fn with_lcs_rule(mut self, min_len: usize, divisor: f64) -> Self {
        assert!(min_len >= 1 && divisor > 0.0);
        self.lcs_min_len = min_len;
        self.lcs_divisor = divisor;
        self
    }

    /// Reads a cascade description: one model path per line in priority
    /// order, `#` comments, and an optional final `lcs` line switching
    /// the string fallback on. Relative model paths resolve against the
    /// config file's directory.
    pub fn from_config_file(path: &Path) -> Result<Self, CascadeError> {
        let text = std::fs::read_to_string(path).map_err(|source| CascadeError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or(Path::new(""));
        let mut models = Vec::new();
        let mut lcs_enabled = false;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if lcs_enabled {
                return Err(CascadeError::Config {
                    path: path.to_path_buf(),
                    line: idx + 1,
                    detail: "\"lcs\" must be the final entry".into(),
                });
            }
            if line == "lcs" {
                lcs_enabled = true;
                continue;
            }
            let model_path = base.join(line);
            models.push(Arc::new(EmbeddingModel::load(&model_path)?));
        }
        SimilarityCascade::new(models, lcs_enabled).map_err(|_| CascadeError::Config {
            path: path.to_path_buf(),
            line: 0,
            detail: "config lists no models and does not enable lcs".into(),
        })
    }

    pub fn models(&self) -> &[Arc<EmbeddingModel>] {
        &self.models
    }

    pub fn lcs_enabled(&self) -> bool {
        self.lcs_enabled
    }

    /// Scores one pair: the first model knowing both words wins, with
    /// negative cosines clamped to 0 so every source reports on the same
    /// `[0, 1]` scale; otherwise the string fallback, otherwise zero.
    pub fn similarity(&self, word1: &str, word2: &str) -> SimilarityVerdict {
        for (index, model) in self.models.iter().enumerate() {
            if let Some(cos) = model.similarity(word1, word2) {
                return SimilarityVerdict {
                    score: cos.max(0.0),
                    source: VerdictSource::Model(index),
                };
            }
        }
        if self.lcs_enabled {
            let len = longest_common_substring(word1, word2).chars().count();
            return SimilarityVerdict {
                score: lcs_score(len, self.lcs_min_len, self.lcs_divisor),
                source: VerdictSource::Lcs,
            };
        }
        SimilarityVerdict {
            score: 0.0,
            source: VerdictSource::None,
        }
    }

    /// Element-wise [`similarity`](Self::similarity) with per-source
    /// accounting; output order is input order.
    pub fn batch_similarity<S: AsRef<str>>(&self, pairs: &[(S, S)]) -> BatchVerdicts {
        let mut counts = SourceCounts::new(self.models.len());
        let verdicts = pairs
            .iter()
            .map(|(a, b)| {
                let verdict = self.similarity(a.as_ref(), b.as_ref());
                counts.record(verdict.source);
                verdict
            })
            .collect();
        BatchVerdicts { verdicts, counts }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelFormat;
    use crate::vocab::Vocabulary;
    use proptest::prelude::*;

    fn toy_model(words: &[&str], vectors: &[f32], dim: usize) -> EmbeddingModel {
        let vocab = Vocabulary::from_words(words.iter().copied()).unwrap();
        EmbeddingModel::new(vocab, vectors.to_vec(), dim).unwrap()
    }

    /// Substring enumeration oracle, shortest runs first with early exit.
    fn lcs_len_oracle(a: &str, b: &str) -> usize {
        let a: Vec<char> = a.chars().collect();
        let b: Vec<char> = b.chars().collect();
        let mut best = 0;
        for len in 1..=a.len().min(b.len()) {
            let found = a
                .windows(len)
                .any(|wa| b.windows(len).any(|wb| wa == wb));
            if found {
                best = len;
            } else {
                break;
            }
        }
        best
    }

    #[test]
    fn shared_stem_scores_one() {
        // "благоразум" is 10 code points long.
        assert_eq!(lcs_similarity("благоразумие", "благоразумность"), 1.0);
        assert_eq!(
            longest_common_substring("благоразумие", "благоразумность"),
            "благоразум"
        );
    }

    #[test]
    fn three_character_run_scores_zero() {
        assert_eq!(lcs_similarity("кот", "кот"), 0.0);
    }

    #[test]
    fn four_character_run_scores_point_four() {
        assert_eq!(lcs_similarity("абвгде", "абвгжз"), 0.4);
    }

    #[test]
    fn long_runs_clamp_to_one() {
        let a = "абвгдежзийклмн-хвост"; // shares 14 code points
        let b = "абвгдежзийклмн+другой";
        assert_eq!(lcs_similarity(a, b), 1.0);
    }

    #[test]
    fn empty_strings_are_fine() {
        assert_eq!(lcs_similarity("", ""), 0.0);
        assert_eq!(lcs_similarity("", "слово"), 0.0);
        assert_eq!(longest_common_substring("", "слово"), "");
    }

    #[test]
    fn lengths_count_code_points_not_bytes() {
        // Four Cyrillic letters are eight UTF-8 bytes; the score must
        // come out as 4/10, not 8/10.
        assert_eq!(lcs_similarity("мама", "мамаша"), 0.4);
    }

    fn two_model_cascade(lcs: bool) -> SimilarityCascade {
        let m0 = toy_model(&["кот", "собака"], &[1.0, 0.2, 0.9, 0.3], 2);
        let m1 = toy_model(
            &["кот", "печь", "печка"],
            &[1.0, 0.0, 0.4, 0.8, 0.5, 0.7],
            2,
        );
        SimilarityCascade::new(vec![Arc::new(m0), Arc::new(m1)], lcs).unwrap()
    }

    #[test]
    fn first_model_wins_when_it_knows_both_words() {
        let cascade = two_model_cascade(true);
        let v = cascade.similarity("кот", "собака");
        assert_eq!(v.source, VerdictSource::Model(0));
        assert!(v.score > 0.9);
    }

    #[test]
    fn falls_back_to_second_model() {
        let cascade = two_model_cascade(true);
        let v = cascade.similarity("печь", "печка");
        assert_eq!(v.source, VerdictSource::Model(1));
    }

    #[test]
    fn falls_back_to_lcs_and_then_nothing() {
        let with_lcs = two_model_cascade(true);
        let v = with_lcs.similarity("благоразумие", "благоразумность");
        assert_eq!(v.source, VerdictSource::Lcs);
        assert_eq!(v.score, 1.0);

        let without = two_model_cascade(false);
        let v = without.similarity("благоразумие", "благоразумность");
        assert_eq!(v.source, VerdictSource::None);
        assert_eq!(v.score, 0.0);
    }

    #[test]
    fn negative_cosine_clamps_to_zero() {
        let model = toy_model(&["a", "b"], &[1.0, 0.0, -1.0, 0.0], 2);
        let cascade = SimilarityCascade::from_model(model);
        let v = cascade.similarity("a", "b");
        assert_eq!(v.score, 0.0);
        assert_eq!(v.source, VerdictSource::Model(0));
    }

    #[test]
    fn empty_cascade_is_rejected() {
        assert!(matches!(
            SimilarityCascade::new(vec![], false),
            Err(CascadeError::Empty)
        ));
        assert!(SimilarityCascade::new(vec![], true).is_ok());
    }

    #[test]
    fn batch_counts_sources() {
        let cascade = two_model_cascade(true);
        let pairs = vec![
            ("кот".to_string(), "собака".to_string()),
            ("печь".to_string(), "печка".to_string()),
            ("благоразумие".to_string(), "благоразумность".to_string()),
        ];
        let batch = cascade.batch_similarity(&pairs);
        assert_eq!(batch.verdicts.len(), 3);
        assert_eq!(batch.counts.per_model, vec![1, 1]);
        assert_eq!(batch.counts.lcs, 1);
        assert_eq!(batch.counts.none, 0);
        assert!((batch.counts.coverage() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn batch_of_empty_list_is_empty() {
        let cascade = two_model_cascade(true);
        let batch = cascade.batch_similarity::<String>(&[]);
        assert!(batch.verdicts.is_empty());
        assert_eq!(batch.counts.total(), 0);
    }

    #[test]
    fn appending_a_model_keeps_earlier_verdicts() {
        let m0 = toy_model(&["кот", "собака"], &[1.0, 0.2, 0.9, 0.3], 2);
        let short = SimilarityCascade::new(vec![Arc::new(m0)], true).unwrap();
        let before = short.similarity("кот", "собака");

        let m0 = toy_model(&["кот", "собака"], &[1.0, 0.2, 0.9, 0.3], 2);
        let extra = toy_model(&["кот", "собака"], &[0.0, 1.0, 1.0, 0.0], 2);
        let long = SimilarityCascade::new(vec![Arc::new(m0), Arc::new(extra)], true).unwrap();
        let after = long.similarity("кот", "собака");

        assert_eq!(before.score, after.score);
        assert_eq!(before.source, after.source);
    }

    #[test]
    fn config_file_loads_models_in_order() {
        let dir = tempfile::tempdir().unwrap();
        let m0 = toy_model(&["a", "b"], &[1.0, 0.0, 0.0, 1.0], 2);
        let m1 = toy_model(&["c", "d"], &[1.0, 0.0, 0.0, 1.0], 2);
        m0.save(&dir.path().join("first.bin"), ModelFormat::Binary)
            .unwrap();
        m1.save(&dir.path().join("second.vec"), ModelFormat::Text)
            .unwrap();
        let config = dir.path().join("cascade.txt");
        std::fs::write(&config, "# priority order\nfirst.bin\nsecond.vec\nlcs\n").unwrap();

        let cascade = SimilarityCascade::from_config_file(&config).unwrap();
        assert_eq!(cascade.models().len(), 2);
        assert!(cascade.lcs_enabled());
        assert!(cascade.models()[0].contains("a"));
        assert!(cascade.models()[1].contains("c"));
    }

    #[test]
    fn config_rejects_entries_after_lcs() {
        let dir = tempfile::tempdir().unwrap();
        let config = dir.path().join("cascade.txt");
        std::fs::write(&config, "lcs\nmodel.bin\n").unwrap();
        assert!(matches!(
            SimilarityCascade::from_config_file(&config),
            Err(CascadeError::Config { line: 2, .. })
        ));
    }

    #[test]
    fn config_lcs_only_is_valid() {
        let dir = tempfile::tempdir().unwrap();
        let config = dir.path().join("cascade.txt");
        std::fs::write(&config, "lcs\n").unwrap();
        let cascade = SimilarityCascade::from_config_file(&config).unwrap();
        assert!(cascade.models().is_empty());
        assert!(cascade.lcs_enabled());
    }

    proptest! {
        #[test]
        fn lcs_matches_enumeration_oracle(
            a in "[а-ея]{0,20}",
            b in "[а-ея]{0,20}",
        ) {
            let dp = longest_common_substring(&a, &b).chars().count();
            prop_assert_eq!(dp, lcs_len_oracle(&a, &b));
            let expected = if dp < 4 { 0.0 } else { (dp as f64 / 10.0).min(1.0) };
            prop_assert_eq!(lcs_similarity(&a, &b), expected);
        }

        #[test]
        fn verdicts_are_symmetric_and_in_range(
            a in "[а-ге]{0,8}",
            b in "[а-ге]{0,8}",
        ) {
            let cascade = two_model_cascade(true);
            let ab = cascade.similarity(&a, &b);
            let ba = cascade.similarity(&b, &a);
            prop_assert_eq!(ab.score, ba.score);
            prop_assert_eq!(ab.source, ba.source);
            prop_assert!((0.0..=1.0).contains(&ab.score));
        }
    }
}
