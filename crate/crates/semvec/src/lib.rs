//! Word-embedding training and semantic-similarity toolkit.
//!
//! The crate trains CBOW / continuous skip-gram models with negative
//! sampling on tokenized corpora and scores word-pair similarity. Pairs
//! with out-of-vocabulary words can fall back across an ordered model
//! assembly and finally to a longest-common-substring heuristic. Rank
//! evaluation (Spearman's rho for graded datasets, average precision for
//! binary ones) is built in.
//!
//! Start with the runnable programs in `examples/`; each one walks
//! through a single capability. The `semvec` binary exposes the same
//! operations as subcommands (`train`, `query`, `eval`, `sweep`, `lcs`).

pub mod cascade;
pub mod cli;
pub mod corpus;
pub mod eval;
pub mod model;
pub mod trainer;
pub mod vocab;

pub use cascade::{
    lcs_similarity, longest_common_substring, SimilarityCascade, SimilarityVerdict, VerdictSource,
};
pub use corpus::{load_stopwords, stream_sentences, CorpusConfig, Sentence};
pub use eval::{
    average_precision, evaluate, load_dataset, spearman, DatasetKind, EvalReport, Metric,
    PairDataset,
};
pub use model::{cosine, EmbeddingModel, ModelFormat};
pub use trainer::{
    init_parameters, lr_schedule, pair_loss_and_grads, train, train_with_stats, Algorithm,
    Parameters, TrainStats, TrainingConfig,
};
pub use vocab::{
    build_negative_table, build_vocab, subsample_keep_prob, NegativeSamplingTable, Vocabulary,
};
