//! Immutable embedding store: cosine queries, nearest neighbors, and
//! interchange-format persistence.
//!
//! Two on-disk layouts are supported, matching the de-facto embedding
//! exchange formats. Both start with an ASCII header line `V D\n`:
//!
//! * text — per word one line `word v1 v2 … vD\n`, components in plain
//!   decimal with full round-trip precision;
//! * binary — per word the UTF-8 word bytes, one `0x20`, then `D`
//!   little-endian IEEE-754 32-bit floats. A `0x0A` after the floats is
//!   accepted on read but never written.
//!
//! [`EmbeddingModel::load`] tells the two apart by probing the bytes
//! after the first word.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use thiserror::Error;

use crate::vocab::Vocabulary;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("word not in vocabulary: {0}")]
    UnknownWord(String),
    #[error("cosine is undefined for a zero-norm vector")]
    ZeroNorm,
    #[error("vector length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("{0}")]
    InvalidShape(String),
    #[error("non-finite vector component for word {word}")]
    NonFiniteVector { word: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {detail} ({position})")]
    Malformed {
        path: PathBuf,
        detail: String,
        position: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelFormat {
    Text,
    Binary,
}

/// Cosine similarity, accumulated in f64 and clamped to `[-1, 1]`
/// against rounding drift.
pub fn cosine<T: Copy + Into<f64>>(u: &[T], v: &[T]) -> Result<f64, ModelError> {
    if u.len() != v.len() {
        return Err(ModelError::LengthMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    let mut dot = 0.0f64;
    let mut nu = 0.0f64;
    let mut nv = 0.0f64;
    for (a, b) in u.iter().zip(v) {
        let a: f64 = (*a).into();
        let b: f64 = (*b).into();
        dot += a * b;
        nu += a * a;
        nv += b * b;
    }
    if nu == 0.0 || nv == 0.0 {
        return Err(ModelError::ZeroNorm);
    }
    // sqrt(nu·nv) rather than sqrt(nu)·sqrt(nv): for u == v the
    // denominator then equals the numerator exactly, so self-similarity
    // is 1.0 with no rounding residue.
    Ok((dot / (nu * nv).sqrt()).clamp(-1.0, 1.0))
}

/// Vocabulary plus one dense f32 vector per word.
#[derive(Debug)]
pub struct EmbeddingModel {
    vocab: Vocabulary,
    vectors: Vec<f32>,
    dim: usize,
    norms: OnceLock<Vec<f64>>,
}

impl EmbeddingModel {
    pub fn new(vocab: Vocabulary, vectors: Vec<f32>, dim: usize) -> Result<Self, ModelError> {
        if dim < 1 {
            return Err(ModelError::InvalidShape("dim must be at least 1".into()));
        }
        if vectors.len() != vocab.len() * dim {
            return Err(ModelError::InvalidShape(format!(
                "expected {} × {} = {} components, got {}",
                vocab.len(),
                dim,
                vocab.len() * dim,
                vectors.len()
            )));
        }
        if let Some(bad) = vectors.iter().position(|v| !v.is_finite()) {
            return Err(ModelError::NonFiniteVector {
                word: vocab.word(bad / dim).to_string(),
            });
        }
        Ok(EmbeddingModel {
            vocab,
            vectors,
            dim,
            norms: OnceLock::new(),
        })
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vocab.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vocab.is_empty()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.vocab.contains(word)
    }

    /// The full `V × dim` matrix, row-major.
    pub fn vectors(&self) -> &[f32] {
        &self.vectors
    }

    pub fn vector_by_id(&self, id: usize) -> &[f32] {
        &self.vectors[id * self.dim..(id + 1) * self.dim]
    }

    pub fn vector(&self, word: &str) -> Option<&[f32]> {
        self.vocab.id(word).map(|id| self.vector_by_id(id))
    }

    /// Cosine of the two word vectors if both words are known; `None`
    /// otherwise — absence is a value here, fallback policy lives in the
    /// cascade. A zero-norm vector carries no signal and also yields
    /// `None`.
    pub fn similarity(&self, word1: &str, word2: &str) -> Option<f64> {
        let u = self.vector(word1)?;
        let v = self.vector(word2)?;
        cosine(u, v).ok()
    }

    fn norms(&self) -> &[f64] {
        self.norms.get_or_init(|| {
            (0..self.len())
                .map(|id| {
                    self.vector_by_id(id)
                        .iter()
                        .map(|&x| (x as f64) * (x as f64))
                        .sum::<f64>()
                        .sqrt()
                })
                .collect()
        })
    }

    /// Top-`k` words by cosine similarity, excluding the query word.
    /// Ties break toward the lower vocabulary id. Returns
    /// `min(k, V − 1)` entries.
    pub fn nearest(&self, word: &str, k: usize) -> Result<Vec<(&str, f64)>, ModelError> {
        let query_id = self
            .vocab
            .id(word)
            .ok_or_else(|| ModelError::UnknownWord(word.to_string()))?;
        let norms = self.norms();
        if norms[query_id] == 0.0 {
            return Err(ModelError::ZeroNorm);
        }
        let query = self.vector_by_id(query_id);

        let mut scored: Vec<(usize, f64)> = Vec::with_capacity(self.len().saturating_sub(1));
        for id in 0..self.len() {
            // Zero-norm candidates have no defined similarity; skip them.
            if id == query_id || norms[id] == 0.0 {
                continue;
            }
            let dot: f64 = query
                .iter()
                .zip(self.vector_by_id(id))
                .map(|(&a, &b)| a as f64 * b as f64)
                .sum();
            let score = (dot / (norms[query_id] * norms[id])).clamp(-1.0, 1.0);
            scored.push((id, score));
        }
        scored.sort_by(|(ia, sa), (ib, sb)| sb.partial_cmp(sa).unwrap().then_with(|| ia.cmp(ib)));
        scored.truncate(k);
        Ok(scored
            .into_iter()
            .map(|(id, score)| (self.vocab.word(id), score))
            .collect())
    }

    pub fn save(&self, path: &Path, format: ModelFormat) -> Result<(), ModelError> {
        let io_err = |source| ModelError::Io {
            path: path.to_path_buf(),
            source,
        };
        let file = File::create(path).map_err(io_err)?;
        let mut out = BufWriter::new(file);
        writeln!(out, "{} {}", self.len(), self.dim).map_err(io_err)?;
        for id in 0..self.len() {
            let word = self.vocab.word(id);
            match format {
                ModelFormat::Text => {
                    out.write_all(word.as_bytes()).map_err(io_err)?;
                    for &v in self.vector_by_id(id) {
                        write!(out, " {v}").map_err(io_err)?;
                    }
                    out.write_all(b"\n").map_err(io_err)?;
                }
                ModelFormat::Binary => {
                    out.write_all(word.as_bytes()).map_err(io_err)?;
                    out.write_all(b" ").map_err(io_err)?;
                    for &v in self.vector_by_id(id) {
                        out.write_f32::<LittleEndian>(v).map_err(io_err)?;
                    }
                }
            }
        }
        out.flush().map_err(io_err)
    }

    /// Loads a model file, auto-detecting text vs binary layout.
    pub fn load(path: &Path) -> Result<EmbeddingModel, ModelError> {
        let mut reader = open(path)?;
        let (words, dim, header_len) = read_header(&mut reader, path)?;
        match probe_format(&mut reader, dim, path)? {
            ModelFormat::Text => read_text_body(reader, path, words, dim),
            ModelFormat::Binary => read_binary_body(reader, path, words, dim, header_len),
        }
    }

    pub fn load_text(path: &Path) -> Result<EmbeddingModel, ModelError> {
        let mut reader = open(path)?;
        let (words, dim, _) = read_header(&mut reader, path)?;
        read_text_body(reader, path, words, dim)
    }

    pub fn load_binary(path: &Path) -> Result<EmbeddingModel, ModelError> {
        let mut reader = open(path)?;
        let (words, dim, header_len) = read_header(&mut reader, path)?;
        read_binary_body(reader, path, words, dim, header_len)
    }
}

fn open(path: &Path) -> Result<BufReader<File>, ModelError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|source| ModelError::Io {
            path: path.to_path_buf(),
            source,
        })
}

fn malformed(path: &Path, detail: impl Into<String>, position: impl Into<String>) -> ModelError {
    ModelError::Malformed {
        path: path.to_path_buf(),
        detail: detail.into(),
        position: position.into(),
    }
}

fn read_header(reader: &mut BufReader<File>, path: &Path) -> Result<(usize, usize, u64), ModelError> {
    let mut line = Vec::new();
    let n = reader
        .read_until(b'\n', &mut line)
        .map_err(|source| ModelError::Io {
            path: path.to_path_buf(),
            source,
        })?;
    let text = std::str::from_utf8(&line)
        .map_err(|_| malformed(path, "header is not UTF-8", "line 1"))?;
    let mut parts = text.split_whitespace();
    let (Some(v), Some(d), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(malformed(path, "expected header \"V D\"", "line 1"));
    };
    let words: usize = v
        .parse()
        .map_err(|_| malformed(path, "bad word count in header", "line 1"))?;
    let dim: usize = d
        .parse()
        .map_err(|_| malformed(path, "bad dimension in header", "line 1"))?;
    if words < 1 || dim < 1 {
        return Err(malformed(path, "header counts must be positive", "line 1"));
    }
    Ok((words, dim, n as u64))
}

/// Decides text vs binary by inspecting the bytes right after the first
/// word: raw little-endian floats almost surely contain bytes outside
/// the ASCII repertoire of printed numbers.
fn probe_format(
    reader: &mut BufReader<File>,
    dim: usize,
    path: &Path,
) -> Result<ModelFormat, ModelError> {
    let buf = reader.fill_buf().map_err(|source| ModelError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    if buf.is_empty() {
        return Err(malformed(path, "no vector records after header", "line 2"));
    }
    let Some(space) = buf.iter().position(|&b| b == b' ') else {
        return Err(malformed(path, "cannot locate first record", "line 2"));
    };
    let window = &buf[space + 1..buf.len().min(space + 1 + (4 * dim).min(64))];
    if window.is_empty() {
        return Err(malformed(path, "truncated first record", "line 2"));
    }
    // A text record holds only number characters up to its newline;
    // bytes past that newline belong to the next word and prove nothing.
    for &b in window {
        if b == b'\n' {
            return Ok(ModelFormat::Text);
        }
        if !(b.is_ascii_digit() || b"+-.eE \t\rnafiNAFI".contains(&b)) {
            return Ok(ModelFormat::Binary);
        }
    }
    Ok(ModelFormat::Text)
}

fn build_model(
    path: &Path,
    words: Vec<String>,
    vectors: Vec<f32>,
    dim: usize,
) -> Result<EmbeddingModel, ModelError> {
    let vocab = Vocabulary::from_words(words).map_err(|e| {
        malformed(path, format!("invalid word list: {e}"), "whole file")
    })?;
    EmbeddingModel::new(vocab, vectors, dim)
}

fn read_text_body(
    mut reader: BufReader<File>,
    path: &Path,
    word_count: usize,
    dim: usize,
) -> Result<EmbeddingModel, ModelError> {
    let mut words = Vec::with_capacity(word_count);
    let mut seen: HashSet<String> = HashSet::with_capacity(word_count);
    let mut vectors = Vec::with_capacity(word_count * dim);
    let mut line = Vec::new();

    for record in 0..word_count {
        let position = format!("line {}", record + 2);
        line.clear();
        let n = reader
            .read_until(b'\n', &mut line)
            .map_err(|source| ModelError::Io {
                path: path.to_path_buf(),
                source,
            })?;
        if n == 0 {
            return Err(malformed(
                path,
                format!("file ends after {record} of {word_count} records"),
                position,
            ));
        }
        // Record lines are LF-terminated by the format; a missing
        // terminator means the file was cut mid-record.
        if line.last() != Some(&b'\n') {
            return Err(malformed(
                path,
                "file ends mid-record (no line terminator)",
                position,
            ));
        }
        let text = std::str::from_utf8(&line)
            .map_err(|_| malformed(path, "record is not UTF-8", position.clone()))?;
        let mut fields = text.split_whitespace();
        let Some(word) = fields.next() else {
            return Err(malformed(path, "empty record line", position));
        };
        let mut components = 0usize;
        for field in fields {
            let value: f32 = field.parse().map_err(|_| {
                malformed(path, format!("bad component {:?}", field), position.clone())
            })?;
            if !value.is_finite() {
                return Err(malformed(path, "non-finite component", position));
            }
            vectors.push(value);
            components += 1;
        }
        if components != dim {
            return Err(malformed(
                path,
                format!("expected {dim} components, found {components}"),
                position,
            ));
        }
        if !seen.insert(word.to_string()) {
            return Err(malformed(path, format!("duplicate word {word:?}"), position));
        }
        words.push(word.to_string());
    }

    // Only whitespace may follow the last record.
    line.clear();
    reader
        .read_to_end(&mut line)
        .map_err(|source| ModelError::Io {
            path: path.to_path_buf(),
            source,
        })?;
    if line.iter().any(|b| !b.is_ascii_whitespace()) {
        return Err(malformed(
            path,
            "trailing data after final record",
            format!("line {}", word_count + 2),
        ));
    }

    build_model(path, words, vectors, dim)
}

fn read_binary_body(
    mut reader: BufReader<File>,
    path: &Path,
    word_count: usize,
    dim: usize,
    header_len: u64,
) -> Result<EmbeddingModel, ModelError> {
    let mut words = Vec::with_capacity(word_count);
    let mut seen: HashSet<String> = HashSet::with_capacity(word_count);
    let mut vectors = vec![0f32; word_count * dim];
    let mut offset = header_len;
    let io_err = |source| ModelError::Io {
        path: path.to_path_buf(),
        source,
    };

    for record in 0..word_count {
        let mut word_bytes = Vec::new();
        let n = reader
            .read_until(b' ', &mut word_bytes)
            .map_err(io_err)?;
        if n == 0 || word_bytes.last() != Some(&b' ') {
            return Err(malformed(
                path,
                format!("file ends inside record {} of {word_count}", record + 1),
                format!("byte {}", offset + n as u64),
            ));
        }
        word_bytes.pop();
        offset += n as u64;
        let word = std::str::from_utf8(&word_bytes).map_err(|e| {
            malformed(
                path,
                "word is not UTF-8",
                format!("byte {}", offset - n as u64 + e.valid_up_to() as u64),
            )
        })?;
        if word.is_empty() {
            return Err(malformed(path, "empty word", format!("byte {offset}")));
        }

        let row = &mut vectors[record * dim..(record + 1) * dim];
        reader.read_f32_into::<LittleEndian>(row).map_err(|e| {
            if e.kind() == std::io::ErrorKind::UnexpectedEof {
                malformed(
                    path,
                    format!("file ends inside the vector of {word:?}"),
                    format!("byte {offset}"),
                )
            } else {
                io_err(e)
            }
        })?;
        offset += 4 * dim as u64;
        if let Some(j) = row.iter().position(|v| !v.is_finite()) {
            return Err(malformed(
                path,
                format!("non-finite component {j} of word {word:?}"),
                format!("byte {}", offset - 4 * (dim as u64 - j as u64)),
            ));
        }
        if !seen.insert(word.to_string()) {
            return Err(malformed(
                path,
                format!("duplicate word {word:?}"),
                format!("byte {offset}"),
            ));
        }
        words.push(word.to_string());

        // The reference tool writes a 0x0A after each vector; accept it.
        let buf = reader.fill_buf().map_err(io_err)?;
        if buf.first() == Some(&b'\n') {
            reader.consume(1);
            offset += 1;
        }
    }

    let mut rest = Vec::new();
    reader.read_to_end(&mut rest).map_err(io_err)?;
    if !rest.is_empty() {
        return Err(malformed(
            path,
            "trailing data after final record",
            format!("byte {offset}"),
        ));
    }

    build_model(path, words, vectors, dim)
}
