//! The three evaluation protocols: verb disambiguation scored by Spearman's ρ
//! against human judgements, transitive versus intransitive sentence
//! comparison, and term/definition classification.
//!
//! Per-item work runs on the rayon pool; results are always reduced in input
//! order so reports are byte-identical across runs and thread counts.

use std::collections::{BTreeSet, HashMap};
use std::fmt::{self, Write as _};
use std::io::BufRead;
use std::str::FromStr;

use log::info;
use rayon::prelude::*;
use thiserror::Error;

use crate::compose::{ComposeError, Composed, CompositionModel, Composer, PhraseSpec};
use crate::lexicon::Lexicon;
use crate::tensor::{cosine, WordTensor};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("series lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("need at least two observations, got {0}")]
    TooFewObservations(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("term `{0}` appears twice with the same part of speech")]
    DuplicateTerm(String),
    #[error(transparent)]
    Compose(#[from] ComposeError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn parse_err(line: usize, message: impl Into<String>) -> EvalError {
    EvalError::Parse {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spearman {
    pub rho: f64,
    /// Set when either series is constant; `rho` is then 0.
    pub degenerate: bool,
}

/// 1-based ranks; tied values share the average of their positions.
pub fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && xs[order[j]] == xs[order[i]] {
            j += 1;
        }
        // positions i..j (0-based) share rank mean((i+1)..=j)
        let r = (i + 1 + j) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = r;
        }
        i = j;
    }
    ranks
}

/// Pearson correlation of the average-rank transforms.
pub fn spearman_rho(xs: &[f64], ys: &[f64]) -> Result<Spearman, EvalError> {
    if xs.len() != ys.len() {
        return Err(EvalError::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.len() < 2 {
        return Err(EvalError::TooFewObservations(xs.len()));
    }
    let rx = average_ranks(xs);
    let ry = average_ranks(ys);
    let n = xs.len() as f64;
    let mean = (n + 1.0) / 2.0;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        let (da, db) = (a - mean, b - mean);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Ok(Spearman {
            rho: 0.0,
            degenerate: true,
        });
    }
    Ok(Spearman {
        rho: (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0),
        degenerate: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LandmarkGroup {
    High,
    Low,
}

impl FromStr for LandmarkGroup {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "high" | "hi" => Ok(LandmarkGroup::High),
            "low" | "lo" => Ok(LandmarkGroup::Low),
            _ => Err(format!("group must be `high` or `low`, got `{s}`")),
        }
    }
}

/// One annotator's judgement of a (target sentence, landmark sentence) pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisambigEntry {
    pub annotator_id: String,
    pub target_verb: String,
    pub subject: String,
    pub object: String,
    pub landmark_verb: String,
    /// 1 to 7
    pub score: u8,
    pub group: LandmarkGroup,
}

fn split_fields(text: &str, n: usize, line: usize) -> Result<Vec<&str>, EvalError> {
    let fields: Vec<&str> = text.split('\t').map(str::trim).collect();
    if fields.len() != n {
        return Err(parse_err(line, format!("expected {n} fields, found {}", fields.len())));
    }
    if let Some(i) = fields.iter().position(|f| f.is_empty()) {
        return Err(parse_err(line, format!("field {} is empty", i + 1)));
    }
    Ok(fields)
}

fn data_rows<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, String), EvalError>> {
    reader
        .lines()
        .enumerate()
        .filter_map(|(i, l)| match l {
            Ok(l) if l.trim().is_empty() || l.starts_with('#') => None,
            Ok(l) => Some(Ok((i + 1, l))),
            Err(e) => Some(Err(e.into())),
        })
}

/// `annotator_id<TAB>target_verb<TAB>subject<TAB>object<TAB>landmark<TAB>score<TAB>group`
pub fn read_disambiguation<R: BufRead>(reader: R) -> Result<Vec<DisambigEntry>, EvalError> {
    let mut out = Vec::new();
    for row in data_rows(reader) {
        let (line, text) = row?;
        let f = split_fields(&text, 7, line)?;
        let score = f[5]
            .parse::<u8>()
            .ok()
            .filter(|s| (1..=7).contains(s))
            .ok_or_else(|| parse_err(line, format!("score must be 1..=7, got `{}`", f[5])))?;
        let group = f[6].parse().map_err(|e: String| parse_err(line, e))?;
        out.push(DisambigEntry {
            annotator_id: f[0].into(),
            target_verb: f[1].into(),
            subject: f[2].into(),
            object: f[3].into(),
            landmark_verb: f[4].into(),
            score,
            group,
        });
    }
    Ok(out)
}

/// Composes each distinct phrase once, in parallel, preserving first-seen order.
fn compose_unique(
    composer: &Composer<'_>,
    model: CompositionModel,
    phrases: &[PhraseSpec],
) -> Result<(Vec<WordTensor>, BTreeSet<String>), EvalError> {
    let mut index: HashMap<&PhraseSpec, usize> = HashMap::new();
    let mut unique: Vec<&PhraseSpec> = Vec::new();
    let slots: Vec<usize> = phrases
        .iter()
        .map(|p| {
            *index.entry(p).or_insert_with(|| {
                unique.push(p);
                unique.len() - 1
            })
        })
        .collect();
    let composed: Vec<Composed> = unique
        .par_iter()
        .map(|p| composer.compose(model, p))
        .collect::<Result<_, _>>()?;
    let missing = composed.iter().flat_map(|c| c.missing.iter().cloned()).collect();
    let vectors = slots.iter().map(|&i| composed[i].vector.clone()).collect();
    Ok((vectors, missing))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DisambigReport {
    pub model: CompositionModel,
    pub rows: usize,
    pub rho: Spearman,
    /// Mean cosine over high-landmark rows, if any.
    pub high_mean: Option<f64>,
    pub low_mean: Option<f64>,
    /// Cosine per input row.
    pub cosines: Vec<f64>,
    pub missing: BTreeSet<String>,
}

/// Correlates model cosines with human scores over all (entry, annotator) rows.
pub fn eval_disambiguation(
    entries: &[DisambigEntry],
    model: CompositionModel,
    lexicon: &Lexicon,
) -> Result<DisambigReport, EvalError> {
    if entries.is_empty() {
        return Err(EvalError::EmptyDataset);
    }
    let composer = Composer::new(lexicon);
    let phrases: Vec<PhraseSpec> = entries
        .iter()
        .flat_map(|e| {
            [
                PhraseSpec::transitive(&e.subject, &e.target_verb, &e.object),
                PhraseSpec::transitive(&e.subject, &e.landmark_verb, &e.object),
            ]
        })
        .collect();
    let (vectors, missing) = compose_unique(&composer, model, &phrases)?;
    let cosines: Vec<f64> = vectors.chunks_exact(2).map(|p| cosine(&p[0], &p[1])).collect();
    let scores: Vec<f64> = entries.iter().map(|e| f64::from(e.score)).collect();
    let rho = if entries.len() >= 2 {
        spearman_rho(&cosines, &scores)?
    } else {
        Spearman {
            rho: 0.0,
            degenerate: true,
        }
    };
    let group_mean = |g: LandmarkGroup| {
        let xs: Vec<f64> = entries
            .iter()
            .zip(&cosines)
            .filter(|(e, _)| e.group == g)
            .map(|(_, &c)| c)
            .collect();
        (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
    };
    Ok(DisambigReport {
        model,
        rows: entries.len(),
        rho,
        high_mean: group_mean(LandmarkGroup::High),
        low_mean: group_mean(LandmarkGroup::Low),
        cosines,
        missing,
    })
}

/// A target verb in context with a similar (high) and dissimilar (low) landmark.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransIntransItem {
    pub target_verb: String,
    pub subject: String,
    pub object: String,
    pub high_landmark: String,
    pub low_landmark: String,
}

/// `target_verb<TAB>subject<TAB>object<TAB>high_landmark<TAB>low_landmark`
pub fn read_trans_intrans<R: BufRead>(reader: R) -> Result<Vec<TransIntransItem>, EvalError> {
    let mut out = Vec::new();
    for row in data_rows(reader) {
        let (line, text) = row?;
        let f = split_fields(&text, 5, line)?;
        out.push(TransIntransItem {
            target_verb: f[0].into(),
            subject: f[1].into(),
            object: f[2].into(),
            high_landmark: f[3].into(),
            low_landmark: f[4].into(),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransIntransScores {
    /// sim(s_tr, s_it)
    pub own: f64,
    /// sim(s_tr, s_hi)
    pub high: f64,
    /// sim(s_tr, s_lo)
    pub low: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransIntransReport {
    pub model: CompositionModel,
    pub items: usize,
    /// sim(s_tr, s_hi) > sim(s_tr, s_it)
    pub high_errors: usize,
    /// sim(s_tr, s_lo) > sim(s_tr, s_it)
    pub low_errors: usize,
    /// sim(s_tr, s_u) > sim(s_tr, s_it) over every other item's s_it
    pub unrelated_errors: usize,
    pub unrelated_pairs: usize,
    pub scores: Vec<TransIntransScores>,
    pub missing: BTreeSet<String>,
}

fn percent(count: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        100.0 * count as f64 / total as f64
    }
}

impl TransIntransReport {
    pub fn high_percent(&self) -> f64 {
        percent(self.high_errors, self.items)
    }

    pub fn low_percent(&self) -> f64 {
        percent(self.low_errors, self.items)
    }

    pub fn unrelated_percent(&self) -> f64 {
        percent(self.unrelated_errors, self.unrelated_pairs)
    }
}

/// Compares each transitive sentence with the intransitive sentences obtained
/// by dropping objects. Errors use strict `>`; ties are not errors.
pub fn eval_trans_intrans(
    items: &[TransIntransItem],
    model: CompositionModel,
    lexicon: &Lexicon,
) -> Result<TransIntransReport, EvalError> {
    let composer = Composer::new(lexicon);
    let phrases: Vec<PhraseSpec> = items
        .iter()
        .flat_map(|it| {
            [
                PhraseSpec::transitive(&it.subject, &it.target_verb, &it.object),
                PhraseSpec::intransitive(&it.subject, &it.target_verb),
                PhraseSpec::intransitive(&it.subject, &it.high_landmark),
                PhraseSpec::intransitive(&it.subject, &it.low_landmark),
            ]
        })
        .collect();
    let (vectors, missing) = compose_unique(&composer, model, &phrases)?;
    let quads: Vec<&[WordTensor]> = vectors.chunks_exact(4).collect();

    let scores: Vec<TransIntransScores> = quads
        .iter()
        .map(|q| TransIntransScores {
            own: cosine(&q[0], &q[1]),
            high: cosine(&q[0], &q[2]),
            low: cosine(&q[0], &q[3]),
        })
        .collect();
    let unrelated_errors: usize = quads
        .par_iter()
        .enumerate()
        .map(|(i, qi)| {
            let own = scores[i].own;
            quads
                .iter()
                .enumerate()
                .filter(|&(j, qj)| j != i && cosine(&qi[0], &qj[1]) > own)
                .count()
        })
        .sum();
    let n = items.len();
    Ok(TransIntransReport {
        model,
        items: n,
        high_errors: scores.iter().filter(|s| s.high > s.own).count(),
        low_errors: scores.iter().filter(|s| s.low > s.own).count(),
        unrelated_errors,
        unrelated_pairs: n * n.saturating_sub(1),
        scores,
        missing,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PartOfSpeech {
    Noun,
    Verb,
}

impl fmt::Display for PartOfSpeech {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PartOfSpeech::Noun => "noun",
            PartOfSpeech::Verb => "verb",
        })
    }
}

impl FromStr for PartOfSpeech {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "noun" | "n" => Ok(PartOfSpeech::Noun),
            "verb" | "v" => Ok(PartOfSpeech::Verb),
            _ => Err(format!("part of speech must be `noun` or `verb`, got `{s}`")),
        }
    }
}

/// A term with its main definition first and two alternatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefinitionEntry {
    pub term: String,
    pub pos: PartOfSpeech,
    pub definitions: [Vec<String>; 3],
}

/// `term<TAB>pos<TAB>def_main<TAB>def_alt1<TAB>def_alt2`, definitions as
/// space-separated lemmas.
pub fn read_definitions<R: BufRead>(reader: R) -> Result<Vec<DefinitionEntry>, EvalError> {
    let mut out = Vec::new();
    for row in data_rows(reader) {
        let (line, text) = row?;
        let f = split_fields(&text, 5, line)?;
        let pos = f[1].parse().map_err(|e: String| parse_err(line, e))?;
        let def = |s: &str| s.split_whitespace().map(str::to_string).collect::<Vec<_>>();
        out.push(DefinitionEntry {
            term: f[0].into(),
            pos,
            definitions: [def(f[2]), def(f[3]), def(f[4])],
        });
    }
    Ok(out)
}

/// Which definitions a term's main definition is ranked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RankPool {
    /// The main definitions of all same-pos terms (ranks run 1..=terms).
    #[default]
    MainDefinitions,
    /// Every definition of every same-pos term.
    AllDefinitions,
}

impl FromStr for RankPool {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "main" => Ok(RankPool::MainDefinitions),
            "all" => Ok(RankPool::AllDefinitions),
            _ => Err(format!("rank pool must be `main` or `all`, got `{s}`")),
        }
    }
}

/// Upper bounds of the rank buckets `1`, `2-5`, `6-10`, `11+`.
pub const RANK_BUCKETS: [usize; 3] = [1, 5, 10];

pub fn rank_bucket(rank: usize) -> usize {
    RANK_BUCKETS.iter().position(|&hi| rank <= hi).unwrap_or(RANK_BUCKETS.len())
}

#[derive(Debug, Clone, PartialEq)]
pub struct TermResult {
    pub term: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Terms each of the three definitions was classified to.
    pub predicted: [String; 3],
    /// Rank of the main definition by similarity to the term.
    pub main_rank: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PosReport {
    pub pos: PartOfSpeech,
    pub terms: Vec<TermResult>,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub mrr: f64,
    /// Counts of main-definition ranks in `1`, `2-5`, `6-10`, `11+`.
    pub buckets: [usize; 4],
}

#[derive(Debug, Clone, PartialEq)]
pub struct DefinitionReport {
    pub model: CompositionModel,
    pub sections: Vec<PosReport>,
    pub skipped: Vec<PartOfSpeech>,
    pub missing: BTreeSet<String>,
}

fn f1(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

/// Classifies every definition to its most similar term and ranks each main
/// definition against its term. Nouns and verbs are evaluated separately.
pub fn eval_definitions(
    entries: &[DefinitionEntry],
    model: CompositionModel,
    lexicon: &Lexicon,
    pool: RankPool,
) -> Result<DefinitionReport, EvalError> {
    if entries.is_empty() {
        return Err(EvalError::EmptyDataset);
    }
    let composer = Composer::new(lexicon);
    let mut report = DefinitionReport {
        model,
        sections: Vec::new(),
        skipped: Vec::new(),
        missing: BTreeSet::new(),
    };
    for pos in [PartOfSpeech::Noun, PartOfSpeech::Verb] {
        let subset: Vec<&DefinitionEntry> = entries.iter().filter(|e| e.pos == pos).collect();
        if subset.is_empty() {
            info!("no {pos} terms; skipping");
            report.skipped.push(pos);
            continue;
        }
        let mut seen = BTreeSet::new();
        for e in &subset {
            if !seen.insert(e.term.as_str()) {
                return Err(EvalError::DuplicateTerm(e.term.clone()));
            }
        }
        let section = eval_pos(&composer, model, pos, &subset, pool, &mut report.missing)?;
        report.sections.push(section);
    }
    Ok(report)
}

fn eval_pos(
    composer: &Composer<'_>,
    model: CompositionModel,
    pos: PartOfSpeech,
    subset: &[&DefinitionEntry],
    pool: RankPool,
    missing: &mut BTreeSet<String>,
) -> Result<PosReport, EvalError> {
    let n = subset.len();
    let terms: Vec<Composed> = subset.iter().map(|e| composer.word(&e.term)).collect();
    let defs: Vec<Composed> = subset
        .par_iter()
        .flat_map_iter(|e| e.definitions.iter())
        .map(|d| {
            let lemmas: Vec<&str> = d.iter().map(String::as_str).collect();
            match pos {
                PartOfSpeech::Noun => composer.compose_noun_phrase(model, &lemmas),
                PartOfSpeech::Verb => composer.compose_verb_phrase_seq(model, &lemmas),
            }
        })
        .collect::<Result<_, _>>()?;
    for c in terms.iter().chain(&defs) {
        missing.extend(c.missing.iter().cloned());
    }

    // sims[t][k]: term t against definition k (definition k belongs to term k / 3)
    let sims: Vec<Vec<f64>> = terms
        .par_iter()
        .map(|t| defs.iter().map(|d| cosine(&t.vector, &d.vector)).collect())
        .collect();

    // ties go to the lexicographically smaller term
    let mut by_name: Vec<usize> = (0..n).collect();
    by_name.sort_by(|&a, &b| subset[a].term.cmp(&subset[b].term));
    let classified: Vec<usize> = (0..3 * n)
        .map(|k| {
            let mut best = by_name[0];
            for &t in &by_name[1..] {
                if sims[t][k] > sims[best][k] {
                    best = t;
                }
            }
            best
        })
        .collect();

    let candidates: Vec<usize> = match pool {
        RankPool::MainDefinitions => (0..n).map(|t| 3 * t).collect(),
        RankPool::AllDefinitions => (0..3 * n).collect(),
    };
    let def_key = |k: usize| (subset[k / 3].term.as_str(), k % 3);

    let mut results = Vec::with_capacity(n);
    let mut buckets = [0usize; 4];
    let mut reciprocal = 0.0;
    for t in 0..n {
        let own = 3 * t;
        let tp = (own..own + 3).filter(|&k| classified[k] == t).count();
        let predicted = classified.iter().filter(|&&c| c == t).count();
        let precision = if predicted == 0 {
            0.0
        } else {
            tp as f64 / predicted as f64
        };
        let recall = tp as f64 / 3.0;
        let target = sims[t][own];
        let ahead = candidates
            .iter()
            .filter(|&&k| {
                k != own
                    && (sims[t][k] > target
                        || (sims[t][k] == target && def_key(k) < def_key(own)))
            })
            .count();
        let main_rank = ahead + 1;
        buckets[rank_bucket(main_rank)] += 1;
        reciprocal += 1.0 / main_rank as f64;
        results.push(TermResult {
            term: subset[t].term.clone(),
            precision,
            recall,
            f1: f1(precision, recall),
            predicted: std::array::from_fn(|i| subset[classified[own + i]].term.clone()),
            main_rank,
        });
    }
    let mean = |f: fn(&TermResult) -> f64| results.iter().map(f).sum::<f64>() / n as f64;
    Ok(PosReport {
        pos,
        precision: mean(|r| r.precision),
        recall: mean(|r| r.recall),
        f1: mean(|r| r.f1),
        mrr: reciprocal / n as f64,
        buckets,
        terms: results,
    })
}

fn opt6(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".to_string(), |v| format!("{v:.6}"))
}

/// Disambiguation table: one row per model.
pub fn disambiguation_table(reports: &[DisambigReport]) -> String {
    let mut out = String::from(
        "# rho: Spearman over all (entry, annotator) rows; high/low: mean cosine per landmark group\n",
    );
    out.push_str("model\thigh\tlow\trho\trows\tdegenerate\n");
    for r in reports {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{:.6}\t{}\t{}",
            r.model,
            opt6(r.high_mean),
            opt6(r.low_mean),
            r.rho.rho,
            r.rows,
            r.rho.degenerate
        );
    }
    out
}

/// Transitive/intransitive table: three error cases per model.
pub fn trans_intrans_table(reports: &[TransIntransReport]) -> String {
    let mut out = String::from("model\tcase\terrors\ttotal\tpercent\n");
    for r in reports {
        for (case, errors, total, pct) in [
            ("sim(tr,hi)>sim(tr,it)", r.high_errors, r.items, r.high_percent()),
            ("sim(tr,lo)>sim(tr,it)", r.low_errors, r.items, r.low_percent()),
            (
                "sim(tr,u)>sim(tr,it)",
                r.unrelated_errors,
                r.unrelated_pairs,
                r.unrelated_percent(),
            ),
        ] {
            let _ = writeln!(out, "{}\t{case}\t{errors}\t{total}\t{pct:.6}", r.model);
        }
    }
    out
}

/// Definition classification scores: averaged per-term P/R/F1 and MRR.
pub fn definition_scores_table(reports: &[DefinitionReport]) -> String {
    let mut out = String::from("model\tpos\tprecision\trecall\tf1\tmrr\tterms\n");
    for r in reports {
        for s in &r.sections {
            let _ = writeln!(
                out,
                "{}\t{}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{}",
                r.model,
                s.pos,
                s.precision,
                s.recall,
                s.f1,
                s.mrr,
                s.terms.len()
            );
        }
    }
    out
}

/// Main-definition rank buckets.
pub fn definition_ranks_table(reports: &[DefinitionReport]) -> String {
    let mut out = String::from("model\tpos\trank\tcount\tpercent\n");
    for r in reports {
        for s in &r.sections {
            let n = s.terms.len();
            let labels = ["1".to_string(), "2-5".into(), "6-10".into(), format!("11-{n}")];
            for (label, &count) in labels.iter().zip(&s.buckets) {
                let _ = writeln!(
                    out,
                    "{}\t{}\t{label}\t{count}\t{:.6}",
                    r.model,
                    s.pos,
                    percent(count, n)
                );
            }
        }
    }
    out
}
