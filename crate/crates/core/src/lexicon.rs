//! Building the distributional space from a lemmatised corpus.
//!
//! The basis of `W` is the `k` most frequent lemmas. A word's context vector
//! counts how often the word occurs within a window of each basis lemma and
//! weights each count by `P(c | t) / P(c)`. Relational words are then built
//! from their argument occurrences as sums of (tensor products of) their
//! arguments' context vectors.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use log::warn;
use rayon::prelude::*;
use thiserror::Error;

use crate::tensor::{outer, SemanticSpace, TensorError, WordTensor};

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("corpus contains no tokens")]
    EmptyCorpus,
    #[error("basis size must be at least 1")]
    InvalidBasisSize,
    #[error("window must be at least 1")]
    InvalidWindow,
    #[error("`{role}` entry `{lemma}`: {source}")]
    Entry {
        role: Role,
        lemma: String,
        source: TensorError,
    },
    #[error("lemma {0:?} cannot be stored (empty or contains a tab or newline)")]
    InvalidLemma(String),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

fn parse_err(line: usize, message: impl Into<String>) -> LexiconError {
    LexiconError::Parse {
        line,
        message: message.into(),
    }
}

/// Sentences of space-separated lemmas.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    pub sentences: Vec<Vec<String>>,
}

impl Corpus {
    /// One sentence per line. Empty lines are kept out.
    pub fn from_reader<R: BufRead>(reader: R) -> Result<Self, LexiconError> {
        let mut sentences = Vec::new();
        for line in reader.lines() {
            let line = line?;
            let tokens: Vec<String> = line.split_whitespace().map(str::to_string).collect();
            if !tokens.is_empty() {
                sentences.push(tokens);
            }
        }
        Ok(Self { sentences })
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        Self::from_reader(BufReader::new(File::open(path)?))
    }

    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.sentences.iter().flatten().map(String::as_str)
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(Vec::len).sum()
    }
}

impl FromStr for Corpus {
    type Err = LexiconError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::from_reader(s.as_bytes())
    }
}

/// The `k` most frequent lemmas, most frequent first, ties in lexicographic order.
pub fn build_basis(corpus: &Corpus, k: usize) -> Result<SemanticSpace, LexiconError> {
    if k == 0 {
        return Err(LexiconError::InvalidBasisSize);
    }
    let mut counts: HashMap<&str, u64> = HashMap::new();
    for tok in corpus.tokens() {
        *counts.entry(tok).or_default() += 1;
    }
    if counts.is_empty() {
        return Err(LexiconError::EmptyCorpus);
    }
    let mut ranked: Vec<(&str, u64)> = counts.into_iter().collect();
    ranked.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    if ranked.len() < k {
        warn!(
            "corpus has only {} distinct lemmas, basis size reduced from {k}",
            ranked.len()
        );
    }
    let basis = ranked
        .into_iter()
        .take(k)
        .map(|(w, _)| w.to_string())
        .collect();
    Ok(SemanticSpace::new(basis)?)
}

/// Raw counts gathered from a corpus against a fixed basis.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusStats {
    /// Corpus frequency of every lemma.
    pub target_counts: BTreeMap<String, u64>,
    /// Per target lemma, co-occurrence counts indexed by basis position.
    pub cooccurrence: BTreeMap<String, Vec<u64>>,
    pub total_tokens: u64,
}

impl CorpusStats {
    /// Count of `target` next to basis lemma `context`.
    pub fn cooccurrence(&self, space: &SemanticSpace, target: &str, context: &str) -> u64 {
        match (self.cooccurrence.get(target), space.index_of(context)) {
            (Some(row), Some(c)) => row[c],
            _ => 0,
        }
    }

    pub fn count(&self, lemma: &str) -> u64 {
        self.target_counts.get(lemma).copied().unwrap_or(0)
    }

    /// Adds the counts of another shard gathered against the same basis.
    pub fn merge(&mut self, other: &CorpusStats) {
        self.total_tokens += other.total_tokens;
        for (w, c) in &other.target_counts {
            *self.target_counts.entry(w.clone()).or_default() += c;
        }
        for (w, row) in &other.cooccurrence {
            let mine = self
                .cooccurrence
                .entry(w.clone())
                .or_insert_with(|| vec![0; row.len()]);
            for (a, b) in mine.iter_mut().zip(row) {
                *a += b;
            }
        }
    }
}

/// Symmetric window co-occurrence counts.
///
/// For every token, each basis lemma at distance `1..=window` within the same
/// sentence adds one to `cooccurrence(token, basis lemma)`.
pub fn count_cooccurrence(
    corpus: &Corpus,
    space: &SemanticSpace,
    window: usize,
) -> Result<CorpusStats, LexiconError> {
    if window == 0 {
        return Err(LexiconError::InvalidWindow);
    }
    let d = space.dim();
    let mut stats = CorpusStats::default();
    for sentence in &corpus.sentences {
        let basis_idx: Vec<Option<usize>> = sentence.iter().map(|w| space.index_of(w)).collect();
        for (t, target) in sentence.iter().enumerate() {
            stats.total_tokens += 1;
            *stats.target_counts.entry(target.clone()).or_default() += 1;
            let lo = t.saturating_sub(window);
            let hi = (t + window).min(sentence.len() - 1);
            let hits: Vec<usize> = (lo..=hi)
                .filter(|&pos| pos != t)
                .filter_map(|pos| basis_idx[pos])
                .collect();
            if hits.is_empty() {
                continue;
            }
            let row = stats
                .cooccurrence
                .entry(target.clone())
                .or_insert_with(|| vec![0; d]);
            for c in hits {
                row[c] += 1;
            }
        }
    }
    Ok(stats)
}

/// Same counts as [`count_cooccurrence`], with sentences split into shards
/// that are counted on the rayon pool and merged.
pub fn count_cooccurrence_sharded(
    corpus: &Corpus,
    space: &SemanticSpace,
    window: usize,
) -> Result<CorpusStats, LexiconError> {
    if window == 0 {
        return Err(LexiconError::InvalidWindow);
    }
    let shard_len = corpus
        .sentences
        .len()
        .div_ceil(rayon::current_num_threads().max(1))
        .max(1);
    let shards: Vec<CorpusStats> = corpus
        .sentences
        .par_chunks(shard_len)
        .map(|chunk| {
            let shard = Corpus {
                sentences: chunk.to_vec(),
            };
            count_cooccurrence(&shard, space, window)
        })
        .collect::<Result<_, _>>()?;
    let mut stats = CorpusStats::default();
    for s in &shards {
        stats.merge(s);
    }
    Ok(stats)
}

/// Basis selection, sharded counting and ratio weighting in one step.
pub fn build_context_lexicon(
    corpus: &Corpus,
    basis_size: usize,
    window: usize,
) -> Result<Lexicon, LexiconError> {
    let space = build_basis(corpus, basis_size)?;
    let stats = count_cooccurrence_sharded(corpus, &space, window)?;
    weight_ratio(&stats, &space)
}

/// Context vectors weighted by `P(c | t) / P(c)`.
///
/// `P(c | t)` is the share of `t`'s co-occurrences that fall on `c`, and
/// `P(c)` is the corpus frequency of `c` over all tokens. Entries with no
/// co-occurrence are 0, as is every entry of a lemma that never co-occurs
/// with a basis lemma. No smoothing is applied.
pub fn weight_ratio(stats: &CorpusStats, space: &SemanticSpace) -> Result<Lexicon, LexiconError> {
    if stats.total_tokens == 0 {
        return Err(LexiconError::EmptyCorpus);
    }
    let total = stats.total_tokens as f64;
    let basis_counts: Vec<f64> = space.basis().iter().map(|c| stats.count(c) as f64).collect();
    let mut lexicon = Lexicon::new(space.clone());
    for target in stats.target_counts.keys() {
        let mut data = vec![0.0; space.dim()];
        if let Some(row) = stats.cooccurrence.get(target) {
            let row_total: u64 = row.iter().sum();
            if row_total > 0 {
                // (n / row_total) / (count_c / total), as one division
                for ((x, &n), &count_c) in data.iter_mut().zip(row).zip(&basis_counts) {
                    if n > 0 && count_c > 0.0 {
                        *x = (n as f64 * total) / (row_total as f64 * count_c);
                    }
                }
            }
        }
        lexicon.insert(Role::Context, target.clone(), WordTensor::vector(data)?)?;
    }
    Ok(lexicon)
}

/// What a lexicon entry represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Context,
    /// `Σ_i sbj_i ⊗ obj_i`
    RelationalVerb,
    /// `Σ_i sbj_i`
    IntransitiveVerb,
    /// `Σ_i noun_i`
    Adjective,
    /// `Σ_i obj_i`
    ReltnVerb,
}

impl Role {
    pub const ALL: [Role; 5] = [
        Role::Context,
        Role::RelationalVerb,
        Role::IntransitiveVerb,
        Role::Adjective,
        Role::ReltnVerb,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Role::Context => "context",
            Role::RelationalVerb => "relational_verb",
            Role::IntransitiveVerb => "intransitive_verb",
            Role::Adjective => "adjective",
            Role::ReltnVerb => "reltn_verb",
        }
    }

    pub fn rank(self) -> usize {
        match self {
            Role::RelationalVerb => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Role::ALL
            .into_iter()
            .find(|r| r.tag() == s)
            .ok_or_else(|| format!("unknown role `{s}`"))
    }
}

/// Word tensors over one semantic space, keyed by role and lemma.
#[derive(Debug, Clone, PartialEq)]
pub struct Lexicon {
    space: SemanticSpace,
    entries: BTreeMap<Role, BTreeMap<String, WordTensor>>,
}

impl Lexicon {
    pub fn new(space: SemanticSpace) -> Self {
        Self {
            space,
            entries: BTreeMap::new(),
        }
    }

    pub fn space(&self) -> &SemanticSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Stores a tensor, replacing any previous entry for the same role and lemma.
    pub fn insert(
        &mut self,
        role: Role,
        lemma: impl Into<String>,
        tensor: WordTensor,
    ) -> Result<(), LexiconError> {
        let lemma = lemma.into();
        let check = if tensor.rank() != role.rank() {
            Err(TensorError::RankMismatch {
                expected: role.rank(),
                found: tensor.rank(),
            })
        } else if tensor.dim() != self.dim() {
            Err(TensorError::DimensionMismatch {
                expected: self.dim(),
                found: tensor.dim(),
            })
        } else {
            Ok(())
        };
        if let Err(source) = check {
            return Err(LexiconError::Entry {
                role,
                lemma,
                source,
            });
        }
        self.entries.entry(role).or_default().insert(lemma, tensor);
        Ok(())
    }

    pub fn get(&self, role: Role, lemma: &str) -> Option<&WordTensor> {
        self.entries.get(&role)?.get(lemma)
    }

    pub fn context(&self, lemma: &str) -> Option<&WordTensor> {
        self.get(Role::Context, lemma)
    }

    pub fn lemmas(&self, role: Role) -> impl Iterator<Item = &str> {
        self.entries
            .get(&role)
            .into_iter()
            .flat_map(|m| m.keys().map(String::as_str))
    }

    /// All entries in role order, then lemma order.
    pub fn iter(&self) -> impl Iterator<Item = (Role, &str, &WordTensor)> {
        self.entries
            .iter()
            .flat_map(|(&role, m)| m.iter().map(move |(l, t)| (role, l.as_str(), t)))
    }

    pub fn len(&self) -> usize {
        self.entries.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Adds relational verb, intransitive and reltn entries.
    pub fn absorb_relational(&mut self, rel: RelationalTensors) -> Result<(), LexiconError> {
        for (verb, m) in rel.matrices {
            self.insert(Role::RelationalVerb, verb, m)?;
        }
        for (verb, v) in rel.intransitive {
            self.insert(Role::IntransitiveVerb, verb, v)?;
        }
        for (verb, v) in rel.reltn {
            self.insert(Role::ReltnVerb, verb, v)?;
        }
        Ok(())
    }

    pub fn absorb_adjectives(
        &mut self,
        adjectives: BTreeMap<String, WordTensor>,
    ) -> Result<(), LexiconError> {
        for (adj, v) in adjectives {
            self.insert(Role::Adjective, adj, v)?;
        }
        Ok(())
    }
}

/// A verb occurrence with its subject and object, seen `count` times.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SvoTriple {
    pub verb: String,
    pub subject: String,
    pub object: String,
    pub count: u64,
}

/// An attributive adjective applied to a noun, seen `count` times.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AdjNounPair {
    pub adjective: String,
    pub noun: String,
    pub count: u64,
}

fn data_lines<R: BufRead>(
    reader: R,
) -> impl Iterator<Item = Result<(usize, String), std::io::Error>> {
    reader
        .lines()
        .enumerate()
        .map(|(i, l)| l.map(|l| (i + 1, l)))
        .filter(|r| match r {
            Ok((_, l)) => !l.trim().is_empty() && !l.starts_with('#'),
            Err(_) => true,
        })
}

fn parse_count(field: &str, line: usize) -> Result<u64, LexiconError> {
    match field.trim().parse::<u64>() {
        Ok(c) if c >= 1 => Ok(c),
        _ => Err(parse_err(line, format!("count must be a positive integer, got `{field}`"))),
    }
}

/// Reads `verb<TAB>subject<TAB>object<TAB>count` rows.
pub fn read_triples<R: BufRead>(reader: R) -> Result<Vec<SvoTriple>, LexiconError> {
    let mut out = Vec::new();
    for row in data_lines(reader) {
        let (line, text) = row?;
        let fields: Vec<&str> = text.split('\t').collect();
        let [verb, subject, object, count] = fields.as_slice() else {
            return Err(parse_err(line, format!("expected 4 fields, found {}", fields.len())));
        };
        out.push(SvoTriple {
            verb: verb.trim().to_string(),
            subject: subject.trim().to_string(),
            object: object.trim().to_string(),
            count: parse_count(count, line)?,
        });
    }
    Ok(out)
}

/// Reads `adjective<TAB>noun[<TAB>count]` rows; a missing count means 1.
pub fn read_adj_noun_pairs<R: BufRead>(reader: R) -> Result<Vec<AdjNounPair>, LexiconError> {
    let mut out = Vec::new();
    for row in data_lines(reader) {
        let (line, text) = row?;
        let fields: Vec<&str> = text.split('\t').collect();
        let (adjective, noun, count) = match fields.as_slice() {
            [a, n] => (a, n, 1),
            [a, n, c] => (a, n, parse_count(c, line)?),
            _ => {
                return Err(parse_err(
                    line,
                    format!("expected 2 or 3 fields, found {}", fields.len()),
                ))
            }
        };
        out.push(AdjNounPair {
            adjective: adjective.trim().to_string(),
            noun: noun.trim().to_string(),
            count,
        });
    }
    Ok(out)
}

/// Per-verb tensors summed over argument occurrences.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RelationalTensors {
    /// `Σ_i count_i · sbj_i ⊗ obj_i`
    pub matrices: BTreeMap<String, WordTensor>,
    /// `Σ_i count_i · sbj_i`
    pub intransitive: BTreeMap<String, WordTensor>,
    /// `Σ_i count_i · obj_i`
    pub reltn: BTreeMap<String, WordTensor>,
    /// Argument lemmas that had no context vector and contributed zero.
    pub missing: BTreeSet<String>,
}

impl RelationalTensors {
    /// The verb's relational matrix, or the zero matrix if it had no triples.
    pub fn matrix_or_zero(&self, verb: &str, dim: usize) -> WordTensor {
        self.matrices
            .get(verb)
            .cloned()
            .unwrap_or_else(|| WordTensor::zeros(dim, 2))
    }
}

fn context_or_note<'a>(
    context: &'a Lexicon,
    lemma: &str,
    missing: &mut BTreeSet<String>,
) -> Option<&'a WordTensor> {
    let v = context.context(lemma);
    if v.is_none() && missing.insert(lemma.to_string()) {
        warn!("no context vector for `{lemma}`; it contributes zero");
    }
    v
}

/// Sums argument context vectors (and their tensor products) per verb.
pub fn build_relational(triples: &[SvoTriple], context: &Lexicon) -> RelationalTensors {
    let d = context.dim();
    let mut out = RelationalTensors::default();
    for t in triples {
        let w = t.count as f64;
        let sbj = context_or_note(context, &t.subject, &mut out.missing);
        let obj = context_or_note(context, &t.object, &mut out.missing);
        let m = out
            .matrices
            .entry(t.verb.clone())
            .or_insert_with(|| WordTensor::zeros(d, 2));
        if let (Some(s), Some(o)) = (sbj, obj) {
            m.add_assign_scaled(&outer(s, o), w);
        }
        let iv = out
            .intransitive
            .entry(t.verb.clone())
            .or_insert_with(|| WordTensor::zeros(d, 1));
        if let Some(s) = sbj {
            iv.add_assign_scaled(s, w);
        }
        let rv = out
            .reltn
            .entry(t.verb.clone())
            .or_insert_with(|| WordTensor::zeros(d, 1));
        if let Some(o) = obj {
            rv.add_assign_scaled(o, w);
        }
    }
    out
}

/// `Σ_i count_i · noun_i` per adjective. Also returns the lemmas that were missing.
pub fn build_adjectives(
    pairs: &[AdjNounPair],
    context: &Lexicon,
) -> (BTreeMap<String, WordTensor>, BTreeSet<String>) {
    let d = context.dim();
    let mut out: BTreeMap<String, WordTensor> = BTreeMap::new();
    let mut missing = BTreeSet::new();
    for p in pairs {
        let acc = out
            .entry(p.adjective.clone())
            .or_insert_with(|| WordTensor::zeros(d, 1));
        if let Some(n) = context_or_note(context, &p.noun, &mut missing) {
            acc.add_assign_scaled(n, p.count as f64);
        }
    }
    (out, missing)
}

fn check_lemma(lemma: &str) -> Result<(), LexiconError> {
    if lemma.is_empty() || lemma.contains(['\t', '\n', '\r']) {
        return Err(LexiconError::InvalidLemma(lemma.to_string()));
    }
    Ok(())
}

/// Writes the TSV lexicon format. Values carry 17 significant digits so that
/// reading them back is bit-exact.
pub fn write_lexicon<W: Write>(lex: &Lexicon, mut w: W) -> Result<(), LexiconError> {
    writeln!(w, "#dim\t{}", lex.dim())?;
    write!(w, "#basis")?;
    for b in lex.space.basis() {
        check_lemma(b)?;
        write!(w, "\t{b}")?;
    }
    writeln!(w)?;
    for (role, lemma, t) in lex.iter() {
        check_lemma(lemma)?;
        write!(w, "{role}\t{lemma}")?;
        for x in t.data() {
            write!(w, "\t{x:.16e}")?;
        }
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_lexicon<R: BufRead>(reader: R) -> Result<Lexicon, LexiconError> {
    let mut lines = reader.lines().enumerate().map(|(i, l)| l.map(|l| (i + 1, l)));
    let mut next_header = |name: &str| -> Result<(usize, Vec<String>), LexiconError> {
        let (line, text) = lines
            .next()
            .transpose()?
            .ok_or_else(|| parse_err(0, format!("missing `#{name}` header")))?;
        let mut fields = text.split('\t');
        if fields.next() != Some(&format!("#{name}")[..]) {
            return Err(parse_err(line, format!("expected `#{name}` header")));
        }
        Ok((line, fields.map(str::to_string).collect()))
    };

    let (line, dim_fields) = next_header("dim")?;
    let dim = match dim_fields.as_slice() {
        [d] => d
            .parse::<usize>()
            .ok()
            .filter(|&d| d >= 1)
            .ok_or_else(|| parse_err(line, format!("invalid dimension `{d}`")))?,
        _ => return Err(parse_err(line, "`#dim` takes exactly one value")),
    };
    let (line, basis) = next_header("basis")?;
    if basis.len() != dim {
        return Err(parse_err(
            line,
            format!("basis has {} lemmas but `#dim` says {dim}", basis.len()),
        ));
    }
    let space = SemanticSpace::new(basis).map_err(|e| parse_err(line, e.to_string()))?;
    let mut lex = Lexicon::new(space);

    for row in lines {
        let (line, text) = row?;
        if text.is_empty() {
            continue;
        }
        let mut fields = text.split('\t');
        let role: Role = fields
            .next()
            .unwrap_or_default()
            .parse()
            .map_err(|e: String| parse_err(line, e))?;
        let lemma = fields
            .next()
            .filter(|l| !l.is_empty())
            .ok_or_else(|| parse_err(line, "missing lemma"))?
            .to_string();
        let data = fields
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| parse_err(line, format!("invalid number `{f}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let expected = dim.pow(role.rank() as u32);
        if data.len() != expected {
            return Err(parse_err(
                line,
                format!("`{role}` row needs {expected} values, found {}", data.len()),
            ));
        }
        if lex.get(role, &lemma).is_some() {
            return Err(parse_err(line, format!("duplicate `{role}` entry `{lemma}`")));
        }
        let t = WordTensor::new(dim, role.rank(), data).map_err(|e| parse_err(line, e.to_string()))?;
        lex.insert(role, lemma, t)?;
    }
    Ok(lex)
}

pub fn save_lexicon(lex: &Lexicon, path: impl AsRef<Path>) -> Result<(), LexiconError> {
    write_lexicon(lex, BufWriter::new(File::create(path)?))
}

pub fn load_lexicon(path: impl AsRef<Path>) -> Result<Lexicon, LexiconError> {
    read_lexicon(BufReader::new(File::open(path)?))
}
