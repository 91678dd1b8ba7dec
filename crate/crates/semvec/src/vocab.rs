//! Vocabulary construction, the negative-sampling table, and subsampling
//! keep-probabilities.

use std::collections::HashMap;
use std::io::Write;

use rand::Rng;
use thiserror::Error;

use crate::corpus::{CorpusError, Sentence};

/// Exponent applied to word counts when building the sampling
/// distribution. Convention of the reference tool.
pub const DEFAULT_TABLE_POWER: f64 = 0.75;
/// Number of slots in the negative-sampling table.
pub const DEFAULT_TABLE_SIZE: usize = 10_000_000;

#[derive(Debug, Error)]
pub enum VocabError {
    #[error("empty vocabulary: no word reached min_count")]
    EmptyVocabulary,
    #[error("min_count must be at least 1")]
    InvalidMinCount,
    #[error("table power must be in (0, 1], got {0}")]
    InvalidPower(f64),
    #[error("table_size {table_size} is smaller than vocabulary size {vocab_size}")]
    TableTooSmall { table_size: usize, vocab_size: usize },
    #[error("vocabulary carries no sampling weight")]
    NoSamplingWeight,
    #[error("duplicate word {0:?}")]
    DuplicateWord(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

/// Frequency-sorted word ↔ id mapping.
///
/// Ids are dense `0..len()`, assigned in order of descending count with
/// ties broken lexicographically, so construction is fully deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    words: Vec<String>,
    counts: Vec<u64>,
    index: HashMap<String, usize>,
    total_tokens: u64,
    raw_tokens: u64,
}

impl Vocabulary {
    /// Builds a vocabulary from an explicit word list, preserving the
    /// given order and assigning zero counts. Used for models loaded
    /// from interchange files (which carry no frequencies) and for
    /// hand-built fixtures; corpus vocabularies come from [`build_vocab`].
    pub fn from_words<I, S>(words: I) -> Result<Vocabulary, VocabError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let words: Vec<String> = words.into_iter().map(Into::into).collect();
        if words.is_empty() {
            return Err(VocabError::EmptyVocabulary);
        }
        let mut index = HashMap::with_capacity(words.len());
        for (i, w) in words.iter().enumerate() {
            if index.insert(w.clone(), i).is_some() {
                return Err(VocabError::DuplicateWord(w.clone()));
            }
        }
        let counts = vec![0; words.len()];
        Ok(Vocabulary {
            words,
            counts,
            index,
            total_tokens: 0,
            raw_tokens: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word(&self, id: usize) -> &str {
        &self.words[id]
    }

    pub fn count(&self, id: usize) -> u64 {
        self.counts[id]
    }

    pub fn id(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.index.contains_key(word)
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }

    /// Occurrences of retained words only.
    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    /// Occurrences of all words seen during counting, including those
    /// later dropped by the frequency threshold.
    pub fn raw_tokens(&self) -> u64 {
        self.raw_tokens
    }

    /// Diagnostic dump: one `word<TAB>count` line per word, descending
    /// count order.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (word, count) in self.words.iter().zip(&self.counts) {
            writeln!(out, "{word}\t{count}")?;
        }
        Ok(())
    }
}

/// Counts tokens from the sentence stream and keeps every word whose raw
/// frequency is at least `min_count`.
pub fn build_vocab<I>(sentences: I, min_count: u64) -> Result<Vocabulary, VocabError>
where
    I: IntoIterator<Item = Result<Sentence, CorpusError>>,
{
    if min_count < 1 {
        return Err(VocabError::InvalidMinCount);
    }

    let mut counts: HashMap<String, u64> = HashMap::new();
    let mut raw_tokens = 0u64;
    for sentence in sentences {
        for token in sentence?.into_tokens() {
            raw_tokens += 1;
            *counts.entry(token).or_insert(0) += 1;
        }
    }

    let mut retained: Vec<(String, u64)> = counts
        .into_iter()
        .filter(|(_, c)| *c >= min_count)
        .collect();
    if retained.is_empty() {
        return Err(VocabError::EmptyVocabulary);
    }
    retained.sort_by(|(wa, ca), (wb, cb)| cb.cmp(ca).then_with(|| wa.cmp(wb)));

    let mut words = Vec::with_capacity(retained.len());
    let mut word_counts = Vec::with_capacity(retained.len());
    let mut index = HashMap::with_capacity(retained.len());
    let mut total_tokens = 0u64;
    for (id, (word, count)) in retained.into_iter().enumerate() {
        index.insert(word.clone(), id);
        words.push(word);
        word_counts.push(count);
        total_tokens += count;
    }

    Ok(Vocabulary {
        words,
        counts: word_counts,
        index,
        total_tokens,
        raw_tokens,
    })
}

/// Lookup table for drawing negative samples proportionally to
/// `count^power`.
#[derive(Debug, Clone)]
pub struct NegativeSamplingTable {
    entries: Vec<u32>,
    vocab_size: usize,
}

impl NegativeSamplingTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// Draws one word id uniformly over the table slots.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.entries[rng.gen_range(0..self.entries.len())] as usize
    }
}

/// Fills a table of `table_size` slots so that word `w` occupies
/// `count(w)^power / Σ count^power` of them, up to ±1 slot of rounding.
/// Every word gets at least one slot.
pub fn build_negative_table(
    vocab: &Vocabulary,
    power: f64,
    table_size: usize,
) -> Result<NegativeSamplingTable, VocabError> {
    if vocab.is_empty() {
        return Err(VocabError::EmptyVocabulary);
    }
    if !(power > 0.0 && power <= 1.0) {
        return Err(VocabError::InvalidPower(power));
    }
    if table_size < vocab.len() {
        return Err(VocabError::TableTooSmall {
            table_size,
            vocab_size: vocab.len(),
        });
    }

    let weights: Vec<f64> = (0..vocab.len())
        .map(|id| (vocab.count(id) as f64).powf(power))
        .collect();
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(VocabError::NoSamplingWeight);
    }

    // Largest-remainder apportionment: every word gets floor(quota) and
    // the leftover slots go to the largest fractional parts.
    let mut slots: Vec<usize> = Vec::with_capacity(vocab.len());
    let mut remainders: Vec<(f64, usize)> = Vec::with_capacity(vocab.len());
    let mut assigned = 0usize;
    for (id, w) in weights.iter().enumerate() {
        let quota = w / total * table_size as f64;
        let base = quota.floor() as usize;
        slots.push(base);
        assigned += base;
        remainders.push((quota - base as f64, id));
    }
    remainders.sort_by(|(ra, ia), (rb, ib)| {
        rb.partial_cmp(ra).unwrap().then_with(|| ia.cmp(ib))
    });
    for &(_, id) in remainders.iter().take(table_size - assigned) {
        slots[id] += 1;
    }

    // Guarantee presence: bump empty words to one slot, stealing from
    // whoever currently holds the most.
    for id in 0..slots.len() {
        if slots[id] == 0 {
            let donor = (0..slots.len()).max_by_key(|&i| slots[i]).unwrap();
            slots[donor] -= 1;
            slots[id] += 1;
        }
    }

    let mut entries = Vec::with_capacity(table_size);
    for (id, &n) in slots.iter().enumerate() {
        entries.extend(std::iter::repeat_n(id as u32, n));
    }
    debug_assert_eq!(entries.len(), table_size);

    Ok(NegativeSamplingTable {
        entries,
        vocab_size: vocab.len(),
    })
}

/// Probability of keeping an occurrence of a word under frequent-word
/// subsampling. `sample = 0` disables subsampling and returns 1.0, which
/// is the default configuration.
pub fn subsample_keep_prob(word_count: u64, total_tokens: u64, sample: f64) -> f64 {
    assert!(total_tokens > 0, "total_tokens must be positive");
    assert!(word_count <= total_tokens);
    assert!(sample >= 0.0);
    if sample == 0.0 || word_count == 0 {
        return 1.0;
    }
    let f = word_count as f64 / total_tokens as f64;
    (((f / sample).sqrt() + 1.0) * sample / f).min(1.0)
}
