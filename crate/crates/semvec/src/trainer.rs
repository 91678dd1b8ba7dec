//! CBOW / continuous skip-gram training with negative sampling.
//!
//! Parameters live in two `V × dim` matrices of f32 cells. Workers share
//! them without locks: every cell is an atomic bit pattern read and
//! written with relaxed ordering, so concurrent updates may be lost but
//! never torn. Gradient math runs in f64 and rounds back to f32 on
//! store. With a single worker training is bit-for-bit deterministic for
//! a fixed seed.

use std::collections::HashSet;
use std::sync::atomic::{AtomicU32, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::corpus::{stream_sentences, stream_sentences_shard, CorpusConfig, CorpusError};
use crate::model::{EmbeddingModel, ModelError};
use crate::vocab::{
    build_negative_table, build_vocab, subsample_keep_prob, NegativeSamplingTable, VocabError,
    Vocabulary, DEFAULT_TABLE_POWER, DEFAULT_TABLE_SIZE,
};

/// Words processed between learning-rate refreshes and progress flushes.
const FLUSH_EVERY: u64 = 10_000;

#[derive(Debug, Error)]
pub enum TrainError {
    #[error("invalid training config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Vocab(#[from] VocabError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Cbow,
    SkipGram,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Algorithm::Cbow => write!(f, "cbow"),
            Algorithm::SkipGram => write!(f, "sg"),
        }
    }
}

/// Training hyperparameters. The knobs that matter most for similarity
/// quality are `algorithm`, `dim`, `window` and `min_count`; the rest
/// keep reference-tool conventions.
#[derive(Debug, Clone)]
pub struct TrainingConfig {
    pub algorithm: Algorithm,
    /// Vector size.
    pub dim: usize,
    /// Maximum context width on each side of a position.
    pub window: usize,
    /// Minimum corpus frequency for a word to be trained at all.
    pub min_count: u64,
    /// Negative samples per positive pair.
    pub negatives: usize,
    pub epochs: usize,
    /// Initial learning rate.
    pub alpha0: f64,
    /// Floor of the linear learning-rate decay.
    pub alpha_min: f64,
    /// Subsampling threshold; 0 disables subsampling (the default).
    pub sample: f64,
    pub seed: u64,
    pub workers: usize,
    /// Draw the effective window uniformly from `1..=window` per
    /// position instead of always using the full width.
    pub dynamic_window: bool,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        TrainingConfig {
            algorithm: Algorithm::Cbow,
            dim: 100,
            window: 5,
            min_count: 5,
            negatives: 5,
            epochs: 5,
            alpha0: 0.025,
            alpha_min: 0.025 * 1e-4,
            sample: 0.0,
            seed: 1,
            workers: 1,
            dynamic_window: true,
        }
    }
}

impl TrainingConfig {
    pub fn validate(&self) -> Result<(), TrainError> {
        let fail = |msg: &str| Err(TrainError::InvalidConfig(msg.to_string()));
        if self.dim < 1 {
            return fail("dim must be at least 1");
        }
        if self.window < 1 {
            return fail("window must be at least 1");
        }
        if self.min_count < 1 {
            return fail("min_count must be at least 1");
        }
        if self.negatives < 1 {
            return fail("negatives must be at least 1");
        }
        if self.epochs < 1 {
            return fail("epochs must be at least 1");
        }
        if !self.alpha0.is_finite() || self.alpha0 <= 0.0 {
            return fail("alpha0 must be positive");
        }
        if !self.alpha_min.is_finite() || self.alpha_min < 0.0 || self.alpha_min > self.alpha0 {
            return fail("alpha_min must satisfy 0 <= alpha_min <= alpha0");
        }
        if !self.sample.is_finite() || self.sample < 0.0 {
            return fail("sample must be non-negative");
        }
        if self.workers < 1 {
            return fail("workers must be at least 1");
        }
        Ok(())
    }
}

/// `rows × dim` matrix of f32 values stored as atomic bit patterns so
/// training workers can share it without locks.
pub struct SharedMatrix {
    rows: usize,
    dim: usize,
    cells: Box<[AtomicU32]>,
}

impl SharedMatrix {
    fn zeroed(rows: usize, dim: usize) -> Self {
        let cells = (0..rows * dim)
            .map(|_| AtomicU32::new(0f32.to_bits()))
            .collect();
        SharedMatrix { rows, dim, cells }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn row_cells(&self, row: usize) -> &[AtomicU32] {
        &self.cells[row * self.dim..(row + 1) * self.dim]
    }

    #[inline]
    pub fn get(&self, row: usize, j: usize) -> f32 {
        f32::from_bits(self.cells[row * self.dim + j].load(Ordering::Relaxed))
    }

    #[inline]
    pub fn set(&self, row: usize, j: usize, value: f32) {
        self.cells[row * self.dim + j].store(value.to_bits(), Ordering::Relaxed);
    }

    pub fn read_row(&self, row: usize, buf: &mut [f64]) {
        for (slot, cell) in buf.iter_mut().zip(self.row_cells(row)) {
            *slot = f32::from_bits(cell.load(Ordering::Relaxed)) as f64;
        }
    }

    pub fn accumulate_row(&self, row: usize, buf: &mut [f64]) {
        for (slot, cell) in buf.iter_mut().zip(self.row_cells(row)) {
            *slot += f32::from_bits(cell.load(Ordering::Relaxed)) as f64;
        }
    }

    pub fn dot_row(&self, row: usize, v: &[f64]) -> f64 {
        let cells = self.row_cells(row);
        // Four lanes keep the accumulation off one add-latency chain.
        let mut acc = [0.0f64; 4];
        let cell_chunks = cells.chunks_exact(4);
        let v_chunks = v.chunks_exact(4);
        let tail_cells = cell_chunks.remainder();
        let tail_v = v_chunks.remainder();
        for (cc, vc) in cell_chunks.zip(v_chunks) {
            for lane in 0..4 {
                acc[lane] += f32::from_bits(cc[lane].load(Ordering::Relaxed)) as f64 * vc[lane];
            }
        }
        let mut total = (acc[0] + acc[1]) + (acc[2] + acc[3]);
        for (cell, x) in tail_cells.iter().zip(tail_v) {
            total += f32::from_bits(cell.load(Ordering::Relaxed)) as f64 * x;
        }
        total
    }

    /// `row += scale * delta`, element-wise. Not atomic as a whole:
    /// racing workers may lose individual component updates.
    pub fn add_scaled(&self, row: usize, scale: f64, delta: &[f64]) {
        for (cell, d) in self.row_cells(row).iter().zip(delta) {
            let v = f32::from_bits(cell.load(Ordering::Relaxed)) as f64 + scale * d;
            cell.store((v as f32).to_bits(), Ordering::Relaxed);
        }
    }

    pub fn snapshot(&self) -> Vec<f32> {
        self.cells
            .iter()
            .map(|c| f32::from_bits(c.load(Ordering::Relaxed)))
            .collect()
    }
}

/// Input (word) and output (context) weight matrices.
pub struct Parameters {
    input: SharedMatrix,
    output: SharedMatrix,
}

impl Parameters {
    pub fn input(&self) -> &SharedMatrix {
        &self.input
    }

    pub fn output(&self) -> &SharedMatrix {
        &self.output
    }

    pub fn dim(&self) -> usize {
        self.input.dim
    }

    pub fn vocab_size(&self) -> usize {
        self.input.rows
    }
}

impl Clone for Parameters {
    fn clone(&self) -> Self {
        let copy = |m: &SharedMatrix| {
            let out = SharedMatrix::zeroed(m.rows, m.dim);
            for (dst, src) in out.cells.iter().zip(m.cells.iter()) {
                dst.store(src.load(Ordering::Relaxed), Ordering::Relaxed);
            }
            out
        };
        Parameters {
            input: copy(&self.input),
            output: copy(&self.output),
        }
    }
}

/// Random initialization: input vectors i.i.d. uniform on
/// `[-0.5/dim, +0.5/dim]`, output vectors zero. Deterministic for a
/// fixed seed.
pub fn init_parameters(vocab_size: usize, dim: usize, seed: u64) -> Parameters {
    assert!(vocab_size >= 1 && dim >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let input = SharedMatrix::zeroed(vocab_size, dim);
    let bound = 0.5 / dim as f32;
    for row in 0..vocab_size {
        for j in 0..dim {
            input.set(row, j, rng.gen_range(-bound..=bound));
        }
    }
    Parameters {
        input,
        output: SharedMatrix::zeroed(vocab_size, dim),
    }
}

/// Numerically safe logistic function.
fn sigmoid(s: f64) -> f64 {
    if s >= 0.0 {
        1.0 / (1.0 + (-s).exp())
    } else {
        let e = s.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^x)` without overflow for large `x`.
fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

/// Loss and the shared gradient scale `σ(s) − label` for one
/// (predictor, output) pair.
#[inline]
fn logistic_loss_grad(s: f64, positive: bool) -> (f64, f64) {
    let label = if positive { 1.0 } else { 0.0 };
    let loss = if positive { softplus(-s) } else { softplus(s) };
    (loss, sigmoid(s) - label)
}

/// Loss and gradients for a single scored pair.
///
/// For `s = center · output`: loss is `−ln σ(s)` when `positive`,
/// `−ln σ(−s)` otherwise; `grad_center = (σ(s) − label) · output` and
/// `grad_output = (σ(s) − label) · center`.
pub fn pair_loss_and_grads(
    center: &[f64],
    output: &[f64],
    positive: bool,
) -> (f64, Vec<f64>, Vec<f64>) {
    assert_eq!(center.len(), output.len());
    let s: f64 = center.iter().zip(output).map(|(c, o)| c * o).sum();
    let (loss, g) = logistic_loss_grad(s, positive);
    let grad_center: Vec<f64> = output.iter().map(|&o| g * o).collect();
    let grad_output: Vec<f64> = center.iter().map(|&c| g * c).collect();
    (loss, grad_center, grad_output)
}

/// Draws a negative sample distinct from `target`. Returns `None` when
/// the vocabulary has no other word to offer.
fn draw_negative<R: Rng + ?Sized>(
    table: &NegativeSamplingTable,
    target: usize,
    rng: &mut R,
) -> Option<usize> {
    if table.vocab_size() <= 1 {
        return None;
    }
    loop {
        let id = table.sample(rng);
        if id != target {
            return Some(id);
        }
    }
}

/// Scores `predictor` against `target` (label 1) and `negatives`
/// sampled words (label 0). Output rows are updated in place right
/// away; the gradient with respect to the predictor accumulates in
/// `grad`. Returns the summed loss.
#[allow(clippy::too_many_arguments)]
fn negative_sampling_pass<R: Rng + ?Sized>(
    output: &SharedMatrix,
    predictor: &[f64],
    target: usize,
    table: &NegativeSamplingTable,
    negatives: usize,
    alpha: f64,
    rng: &mut R,
    grad: &mut [f64],
) -> f64 {
    let mut loss = train_one_pair(output, predictor, target, true, alpha, grad);
    for _ in 0..negatives {
        let Some(negative) = draw_negative(table, target, rng) else {
            break;
        };
        loss += train_one_pair(output, predictor, negative, false, alpha, grad);
    }
    loss
}

fn train_one_pair(
    output: &SharedMatrix,
    predictor: &[f64],
    word: usize,
    positive: bool,
    alpha: f64,
    grad: &mut [f64],
) -> f64 {
    let s = output.dot_row(word, predictor);
    let (loss, g) = logistic_loss_grad(s, positive);
    let step = alpha * g;
    let row = output.row_cells(word);
    for ((cell, p), slot) in row.iter().zip(predictor).zip(grad.iter_mut()) {
        let o = f32::from_bits(cell.load(Ordering::Relaxed)) as f64;
        *slot += g * o;
        cell.store(((o - step * p) as f32).to_bits(), Ordering::Relaxed);
    }
    loss
}

struct StepScratch {
    hidden: Vec<f64>,
    grad: Vec<f64>,
}

impl StepScratch {
    fn new(dim: usize) -> Self {
        StepScratch {
            hidden: vec![0.0; dim],
            grad: vec![0.0; dim],
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cbow_step_with<R: Rng + ?Sized>(
    scratch: &mut StepScratch,
    context_ids: &[usize],
    target_id: usize,
    params: &Parameters,
    table: &NegativeSamplingTable,
    negatives: usize,
    alpha: f64,
    rng: &mut R,
) -> f64 {
    assert!(!context_ids.is_empty(), "cbow step needs context words");
    let dim = params.dim();
    scratch.hidden[..dim].fill(0.0);
    scratch.grad[..dim].fill(0.0);
    for &c in context_ids {
        params.input.accumulate_row(c, &mut scratch.hidden);
    }
    let share = 1.0 / context_ids.len() as f64;
    for h in scratch.hidden.iter_mut() {
        *h *= share;
    }

    let loss = negative_sampling_pass(
        &params.output,
        &scratch.hidden,
        target_id,
        table,
        negatives,
        alpha,
        rng,
        &mut scratch.grad,
    );

    // The hidden vector is the context mean, so its gradient is split
    // equally across the contributing input vectors.
    for &c in context_ids {
        params.input.add_scaled(c, -alpha * share, &scratch.grad);
    }
    loss
}

#[allow(clippy::too_many_arguments)]
fn skipgram_step_with<R: Rng + ?Sized>(
    scratch: &mut StepScratch,
    center_id: usize,
    context_id: usize,
    params: &Parameters,
    table: &NegativeSamplingTable,
    negatives: usize,
    alpha: f64,
    rng: &mut R,
) -> f64 {
    params.input.read_row(center_id, &mut scratch.hidden);
    scratch.grad.fill(0.0);
    let loss = negative_sampling_pass(
        &params.output,
        &scratch.hidden,
        context_id,
        table,
        negatives,
        alpha,
        rng,
        &mut scratch.grad,
    );
    params.input.add_scaled(center_id, -alpha, &scratch.grad);
    loss
}

/// One CBOW update: the mean of the context input vectors predicts the
/// target against `negatives` sampled words. Returns the summed pair
/// loss.
pub fn cbow_step<R: Rng + ?Sized>(
    context_ids: &[usize],
    target_id: usize,
    params: &Parameters,
    table: &NegativeSamplingTable,
    negatives: usize,
    alpha: f64,
    rng: &mut R,
) -> f64 {
    let mut scratch = StepScratch::new(params.dim());
    cbow_step_with(
        &mut scratch,
        context_ids,
        target_id,
        params,
        table,
        negatives,
        alpha,
        rng,
    )
}

/// One skip-gram update: the center word's input vector predicts
/// `context_id` against `negatives` sampled words.
pub fn skipgram_step<R: Rng + ?Sized>(
    center_id: usize,
    context_id: usize,
    params: &Parameters,
    table: &NegativeSamplingTable,
    negatives: usize,
    alpha: f64,
    rng: &mut R,
) -> f64 {
    let mut scratch = StepScratch::new(params.dim());
    skipgram_step_with(
        &mut scratch,
        center_id,
        context_id,
        params,
        table,
        negatives,
        alpha,
        rng,
    )
}

/// Linear decay from `alpha0` at progress 0 to `alpha_min` at
/// `total_words`, floored at `alpha_min`.
pub fn lr_schedule(words_processed: u64, total_words: u64, alpha0: f64, alpha_min: f64) -> f64 {
    if total_words == 0 {
        return alpha0;
    }
    let progress = (words_processed as f64 / total_words as f64).min(1.0);
    // Two-sided form so both endpoints are hit exactly.
    (alpha0 * (1.0 - progress) + alpha_min * progress).max(alpha_min)
}

#[derive(Debug, Clone)]
pub struct TrainStats {
    /// Token occurrences seen during counting, before the frequency
    /// threshold.
    pub raw_tokens: u64,
    /// Token occurrences of retained words, for one corpus pass.
    pub retained_tokens: u64,
    /// Retained tokens actually processed across all epochs.
    pub trained_words: u64,
    pub elapsed: Duration,
    pub words_per_sec: f64,
}

struct ProgressReporter {
    total: u64,
    step: u64,
    next: AtomicU64,
    start: Instant,
    enabled: bool,
}

impl ProgressReporter {
    fn new(total: u64, start: Instant) -> Self {
        let step = (total / 10).max(1);
        ProgressReporter {
            total,
            step,
            next: AtomicU64::new(step),
            start,
            // Stay quiet for small runs; the summary line still prints.
            enabled: total >= 2_000_000,
        }
    }

    fn maybe_report(&self, processed: u64, alpha: f64) {
        if !self.enabled {
            return;
        }
        let due = self.next.load(Ordering::Relaxed);
        if processed >= due
            && self
                .next
                .compare_exchange(due, due + self.step, Ordering::Relaxed, Ordering::Relaxed)
                .is_ok()
        {
            let secs = self.start.elapsed().as_secs_f64().max(1e-9);
            eprintln!(
                "semvec: {:3.0}% of {} words, alpha {:.6}, {:.0} words/s",
                processed as f64 / self.total as f64 * 100.0,
                self.total,
                alpha,
                processed as f64 / secs
            );
        }
    }
}

/// Trains a model over the corpus and returns it with throughput stats.
pub fn train_with_stats(
    corpus: &CorpusConfig,
    config: &TrainingConfig,
) -> Result<(EmbeddingModel, TrainStats), TrainError> {
    config.validate()?;
    let stopwords = corpus.load_stopwords()?;
    let vocab = build_vocab(stream_sentences(corpus, &stopwords)?, config.min_count)?;
    let table = build_negative_table(
        &vocab,
        DEFAULT_TABLE_POWER,
        DEFAULT_TABLE_SIZE.max(vocab.len()),
    )?;
    let params = init_parameters(vocab.len(), config.dim, config.seed);
    let keep_prob: Option<Vec<f64>> = (config.sample > 0.0).then(|| {
        (0..vocab.len())
            .map(|id| subsample_keep_prob(vocab.count(id), vocab.total_tokens(), config.sample))
            .collect()
    });

    let total_words = vocab.total_tokens() * config.epochs as u64;
    let processed = AtomicU64::new(0);
    let start = Instant::now();
    let reporter = ProgressReporter::new(total_words, start);

    std::thread::scope(|scope| -> Result<(), TrainError> {
        let mut handles = Vec::with_capacity(config.workers);
        for worker_id in 0..config.workers {
            let vocab = &vocab;
            let table = &table;
            let params = &params;
            let stopwords = &stopwords;
            let processed = &processed;
            let reporter = &reporter;
            let keep_prob = keep_prob.as_deref();
            handles.push(scope.spawn(move || {
                train_worker(
                    worker_id,
                    corpus,
                    config,
                    stopwords,
                    vocab,
                    table,
                    params,
                    keep_prob,
                    processed,
                    total_words,
                    reporter,
                )
            }));
        }
        let mut result = Ok(());
        for handle in handles {
            let worker_result = handle.join().expect("training worker panicked");
            if result.is_ok() {
                result = worker_result;
            }
        }
        result
    })?;

    let elapsed = start.elapsed();
    let trained_words = processed.load(Ordering::Relaxed);
    let words_per_sec = trained_words as f64 / elapsed.as_secs_f64().max(1e-9);
    eprintln!(
        "semvec: trained {} words in {:.1}s ({:.0} words/s)",
        trained_words,
        elapsed.as_secs_f64(),
        words_per_sec
    );

    let stats = TrainStats {
        raw_tokens: vocab.raw_tokens(),
        retained_tokens: vocab.total_tokens(),
        trained_words,
        elapsed,
        words_per_sec,
    };
    let model = EmbeddingModel::new(vocab, params.input.snapshot(), config.dim)?;
    Ok((model, stats))
}

/// Trains a model over the corpus. See [`train_with_stats`] for the
/// throughput-reporting variant.
pub fn train(corpus: &CorpusConfig, config: &TrainingConfig) -> Result<EmbeddingModel, TrainError> {
    train_with_stats(corpus, config).map(|(model, _)| model)
}

fn worker_seed(seed: u64, worker_id: usize) -> u64 {
    seed.wrapping_add((worker_id as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

#[allow(clippy::too_many_arguments)]
fn train_worker(
    worker_id: usize,
    corpus: &CorpusConfig,
    config: &TrainingConfig,
    stopwords: &HashSet<String>,
    vocab: &Vocabulary,
    table: &NegativeSamplingTable,
    params: &Parameters,
    keep_prob: Option<&[f64]>,
    processed: &AtomicU64,
    total_words: u64,
    reporter: &ProgressReporter,
) -> Result<(), TrainError> {
    let mut rng = ChaCha8Rng::seed_from_u64(worker_seed(config.seed, worker_id));
    let mut scratch = StepScratch::new(config.dim);
    let mut ids: Vec<usize> = Vec::new();
    let mut context: Vec<usize> = Vec::new();
    let mut alpha = config.alpha0;
    let mut unflushed = 0u64;

    for _epoch in 0..config.epochs {
        let stream = stream_sentences_shard(corpus, stopwords, worker_id, config.workers)?;
        for sentence in stream {
            let sentence = sentence?;
            ids.clear();
            for token in sentence.tokens() {
                let Some(id) = vocab.id(token) else { continue };
                unflushed += 1;
                if let Some(keep) = keep_prob {
                    if keep[id] < 1.0 && rng.gen::<f64>() >= keep[id] {
                        continue;
                    }
                }
                ids.push(id);
            }
            if unflushed >= FLUSH_EVERY {
                let global = processed.fetch_add(unflushed, Ordering::Relaxed) + unflushed;
                unflushed = 0;
                alpha = lr_schedule(global, total_words, config.alpha0, config.alpha_min);
                reporter.maybe_report(global, alpha);
            }

            for t in 0..ids.len() {
                let reach = if config.dynamic_window {
                    rng.gen_range(1..=config.window)
                } else {
                    config.window
                };
                let lo = t.saturating_sub(reach);
                let hi = (t + reach).min(ids.len() - 1);
                match config.algorithm {
                    Algorithm::Cbow => {
                        context.clear();
                        context.extend(ids[lo..t].iter().copied());
                        context.extend(ids[t + 1..=hi].iter().copied());
                        if !context.is_empty() {
                            cbow_step_with(
                                &mut scratch,
                                &context,
                                ids[t],
                                params,
                                table,
                                config.negatives,
                                alpha,
                                &mut rng,
                            );
                        }
                    }
                    Algorithm::SkipGram => {
                        for c in lo..=hi {
                            if c != t {
                                skipgram_step_with(
                                    &mut scratch,
                                    ids[t],
                                    ids[c],
                                    params,
                                    table,
                                    config.negatives,
                                    alpha,
                                    &mut rng,
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    processed.fetch_add(unflushed, Ordering::Relaxed);
    Ok(())
}
