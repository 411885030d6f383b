//! `discocat`: build distributional lexicons, parse with pregroup types,
//! compose phrase vectors and run the evaluation protocols.
//!
//! Exit codes: 0 on success, 1 on a usage error (bad flags, missing or
//! unreadable configuration, missing input files), 2 on a data error.

mod config;

use std::fs::{self, File};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use log::{info, warn};

use discocat::compose::ComposeError;
use discocat::eval::{self, RankPool};
use discocat::lexicon::{self, Corpus};
use discocat::pregroup::{self, TypeDictionary};
use discocat::{CompositionModel, Composer, PhraseKind, PhraseSpec};

use config::{ConfigFile, RunConfig};

#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Parser, Debug)]
#[command(name = "discocat", version, about = "Compositional distributional sentence vectors")]
struct Cli {
    /// `key<TAB>value` file supplying defaults for any long flag
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Worker threads (default: available cores)
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Random seed (default 42)
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count a corpus and write context vectors for every lemma
    BuildSpace(BuildSpaceArgs),
    /// Add relational verb and adjective entries to a context lexicon
    BuildLexicon(BuildLexiconArgs),
    /// Print the pregroup reduction of a word sequence
    Parse(ParseArgs),
    /// Print the vector of a phrase under one model
    Compose(ComposeArgs),
    /// Print the cosine of two phrases under one model
    Similarity(SimilarityArgs),
    /// Verb disambiguation against human judgements
    EvalDisambig(EvalArgs),
    /// Transitive sentences against their intransitive counterparts
    EvalTransintrans(EvalArgs),
    /// Term/definition classification
    EvalDefinitions(EvalDefinitionsArgs),
}

#[derive(Args, Debug)]
struct BuildSpaceArgs {
    /// One sentence per line, space-separated lemmas
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Number of most frequent lemmas forming the basis [default: 2000]
    #[arg(long)]
    basis_size: Option<usize>,
    /// Co-occurrence window on each side [default: 5]
    #[arg(long)]
    window: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BuildLexiconArgs {
    /// Context lexicon written by build-space
    #[arg(long)]
    space: Option<PathBuf>,
    /// `verb<TAB>subject<TAB>object<TAB>count`
    #[arg(long)]
    triples: Option<PathBuf>,
    /// `adjective<TAB>noun[<TAB>count]`
    #[arg(long)]
    adjectives: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ParseArgs {
    /// `lemma<TAB>type` rows, types like `n.r s n.l`
    #[arg(long)]
    dictionary: Option<PathBuf>,
    /// The words; a single quoted argument is split on spaces
    #[arg(required = true)]
    words: Vec<String>,
}

#[derive(Args, Debug)]
struct ComposeArgs {
    #[arg(long)]
    lexicon: Option<PathBuf>,
    #[arg(long)]
    model: Option<String>,
    /// transitive, intransitive, adjective-noun or verb-phrase (default: by word count)
    #[arg(long)]
    kind: Option<String>,
    #[arg(required = true)]
    words: Vec<String>,
}

#[derive(Args, Debug)]
struct SimilarityArgs {
    #[arg(long)]
    lexicon: Option<PathBuf>,
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    kind: Option<String>,
    /// First phrase, quoted
    first: String,
    /// Second phrase, quoted
    second: String,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long)]
    lexicon: Option<PathBuf>,
    #[arg(long)]
    dataset: Option<PathBuf>,
    /// Comma-separated models, or `all`
    #[arg(long)]
    model: Option<String>,
    /// Report file (default: stdout)
    #[arg(long)]
    output: Option<PathBuf>,
    /// Per-item scores as TSV
    #[arg(long)]
    items: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EvalDefinitionsArgs {
    #[command(flatten)]
    common: EvalArgs,
    /// Rank each main definition among `main` definitions or `all` definitions [default: main]
    #[arg(long)]
    rank_pool: Option<String>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => match e.downcast_ref::<UsageError>() {
            Some(u) => {
                eprintln!("error: {u}");
                eprintln!("see `discocat --help`");
                ExitCode::from(1)
            }
            None => {
                eprintln!("error: {e:#}");
                ExitCode::from(2)
            }
        },
    }
}

fn run(cli: Cli) -> Result<()> {
    let file = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let rc = RunConfig::resolve(&file, cli.workers, cli.seed)?;
    if let Some(n) = rc.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("starting worker pool")?;
    }
    info!("seed {}, workers {:?}", rc.seed, rc.workers);
    match cli.command {
        Command::BuildSpace(a) => build_space(&file, a),
        Command::BuildLexicon(a) => build_lexicon(&file, a),
        Command::Parse(a) => parse(&file, a),
        Command::Compose(a) => compose(&file, a),
        Command::Similarity(a) => similarity(&file, a),
        Command::EvalDisambig(a) => eval_disambig(&file, a),
        Command::EvalTransintrans(a) => eval_transintrans(&file, a),
        Command::EvalDefinitions(a) => eval_definitions(&file, a),
    }
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(
        File::open(path).with_context(|| format!("opening {}", path.display()))?,
    ))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn parse_model(raw: &str) -> Result<CompositionModel> {
    CompositionModel::from_str(raw).map_err(|e| usage(e.to_string()))
}

/// Comma-separated models; `all` expands to `supported`.
fn parse_models(raw: &str, supported: &[CompositionModel]) -> Result<Vec<CompositionModel>> {
    if raw.trim().eq_ignore_ascii_case("all") {
        return Ok(supported.to_vec());
    }
    raw.split(',').map(parse_model).collect()
}

fn parse_kind(raw: Option<String>) -> Result<Option<PhraseKind>> {
    raw.map(|k| PhraseKind::from_str(&k).map_err(|e| usage(e.to_string())))
        .transpose()
}

fn words_of(args: &[String]) -> Vec<&str> {
    args.iter().flat_map(|a| a.split_whitespace()).collect()
}

fn load_lexicon(path: &Path) -> Result<discocat::Lexicon> {
    lexicon::load_lexicon(path).with_context(|| format!("loading lexicon {}", path.display()))
}

fn build_space(file: &ConfigFile, a: BuildSpaceArgs) -> Result<()> {
    let corpus_path = file.input(a.corpus, "corpus")?;
    let k = file.pick(a.basis_size, "basis-size")?.unwrap_or(2000);
    let window = file.pick(a.window, "window")?.unwrap_or(5);
    let output: PathBuf = file.require(a.output, "output")?;
    if k == 0 || window == 0 {
        return Err(usage("--basis-size and --window must be at least 1"));
    }
    let corpus = Corpus::from_path(&corpus_path)
        .with_context(|| format!("reading corpus {}", corpus_path.display()))?;
    let lex = lexicon::build_context_lexicon(&corpus, k, window)?;
    lexicon::save_lexicon(&lex, &output)
        .with_context(|| format!("writing {}", output.display()))?;
    info!(
        "{} tokens, basis {}, {} context vectors",
        corpus.token_count(),
        lex.dim(),
        lex.len()
    );
    Ok(())
}

fn build_lexicon(file: &ConfigFile, a: BuildLexiconArgs) -> Result<()> {
    let space = file.input(a.space, "space")?;
    let triples_path = file.input(a.triples, "triples")?;
    let adjectives = file
        .pick(a.adjectives, "adjectives")?
        .map(|p: PathBuf| {
            if p.is_file() {
                Ok(p)
            } else {
                Err(usage(format!("no such file: {}", p.display())))
            }
        })
        .transpose()?;
    let output: PathBuf = file.require(a.output, "output")?;

    let mut lex = load_lexicon(&space)?;
    let triples = lexicon::read_triples(open(&triples_path)?)
        .with_context(|| format!("reading {}", triples_path.display()))?;
    let rel = lexicon::build_relational(&triples, &lex);
    if !rel.missing.is_empty() {
        warn!("{} argument lemmas had no context vector", rel.missing.len());
    }
    lex.absorb_relational(rel)?;
    if let Some(p) = adjectives {
        let pairs = lexicon::read_adj_noun_pairs(open(&p)?)
            .with_context(|| format!("reading {}", p.display()))?;
        let (adjs, missing) = lexicon::build_adjectives(&pairs, &lex);
        if !missing.is_empty() {
            warn!("{} nouns had no context vector", missing.len());
        }
        lex.absorb_adjectives(adjs)?;
    }
    lexicon::save_lexicon(&lex, &output).with_context(|| format!("writing {}", output.display()))
}

fn parse(file: &ConfigFile, a: ParseArgs) -> Result<()> {
    let dict_path = file.input(a.dictionary, "dictionary")?;
    let dict = TypeDictionary::from_tsv(open(&dict_path)?)
        .with_context(|| format!("reading {}", dict_path.display()))?;
    let words = words_of(&a.words);
    let p = pregroup::resolve(&dict, &words)?;
    let types: Vec<String> = p.types.iter().map(ToString::to_string).collect();
    let cups: Vec<String> = p.reduction.cups.iter().map(|(i, j)| format!("({i},{j})")).collect();
    let survivors: Vec<String> = p.reduction.survivors.iter().map(ToString::to_string).collect();
    let mut out = String::new();
    out.push_str(&format!("types\t{}\n", types.join("\t")));
    out.push_str(&format!("cups\t{}\n", cups.join(" ")));
    out.push_str(&format!("survivors\t{}\n", survivors.join(" ")));
    out.push_str(&format!("category\t{}\n", p.category));
    write_output(None, &out)
}

fn phrase(kind: Option<PhraseKind>, words: &[&str]) -> Result<PhraseSpec> {
    PhraseSpec::parse(kind, &words.join(" ")).map_err(|e| usage(e.to_string()))
}

fn note_missing(missing: &[String]) {
    if !missing.is_empty() {
        warn!("no representation for {}; treated as zero", missing.join(", "));
    }
}

/// Shortest text that reads back to the same bits.
fn exact(x: f64) -> String {
    format!("{x:?}")
}

fn compose(file: &ConfigFile, a: ComposeArgs) -> Result<()> {
    let model = parse_model(&file.require(a.model, "model")?)?;
    let kind = parse_kind(file.pick(a.kind, "kind")?)?;
    let lex_path = file.lexicon(a.lexicon)?;
    let spec = phrase(kind, &words_of(&a.words))?;
    let lex = load_lexicon(&lex_path)?;
    let c = Composer::new(&lex).compose(model, &spec).map_err(shape)?;
    note_missing(&c.missing);
    let cells: Vec<String> = c.vector.data().iter().map(|&x| exact(x)).collect();
    write_output(None, &format!("{}\n", cells.join("\t")))
}

fn similarity(file: &ConfigFile, a: SimilarityArgs) -> Result<()> {
    let model = parse_model(&file.require(a.model, "model")?)?;
    let kind = parse_kind(file.pick(a.kind, "kind")?)?;
    let lex_path = file.lexicon(a.lexicon)?;
    let first = phrase(kind, &words_of(&[a.first]))?;
    let second = phrase(kind, &words_of(&[a.second]))?;
    let lex = load_lexicon(&lex_path)?;
    let composer = Composer::new(&lex);
    let x = composer.compose(model, &first).map_err(shape)?;
    let y = composer.compose(model, &second).map_err(shape)?;
    note_missing(&x.missing);
    note_missing(&y.missing);
    let sim = discocat::compose::sentence_similarity(&x.vector, &y.vector);
    write_output(None, &format!("{}\n", exact(sim)))
}

/// Models with a transitive sentence form.
const SENTENCE_MODELS: [CompositionModel; 6] = [
    CompositionModel::Addtv,
    CompositionModel::Multp,
    CompositionModel::Kron,
    CompositionModel::MixCpDl,
    CompositionModel::CpSbj,
    CompositionModel::CpObj,
];

/// Models with both noun-phrase and verb-phrase forms.
const DEFINITION_MODELS: [CompositionModel; 4] = [
    CompositionModel::Addtv,
    CompositionModel::Multp,
    CompositionModel::Kron,
    CompositionModel::Reltn,
];

struct EvalInputs {
    lexicon: discocat::Lexicon,
    dataset: PathBuf,
    models: Vec<CompositionModel>,
    output: Option<PathBuf>,
    items: Option<PathBuf>,
}

fn eval_inputs(file: &ConfigFile, a: EvalArgs, supported: &[CompositionModel]) -> Result<EvalInputs> {
    let models = parse_models(&file.require(a.model, "model")?, supported)?;
    let dataset = file.input(a.dataset, "dataset")?;
    let lex_path = file.lexicon(a.lexicon)?;
    Ok(EvalInputs {
        lexicon: load_lexicon(&lex_path)?,
        dataset,
        models,
        output: file.pick(a.output, "output")?,
        items: file.pick(a.items, "items")?,
    })
}

fn report_missing(missing: &std::collections::BTreeSet<String>) {
    if !missing.is_empty() {
        let shown: Vec<&str> = missing.iter().take(10).map(String::as_str).collect();
        warn!(
            "{} lemmas without representation (treated as zero): {}{}",
            missing.len(),
            shown.join(", "),
            if missing.len() > 10 { ", ..." } else { "" }
        );
    }
}

/// A model asked for a phrase shape it has no form for is a usage error.
fn shape(e: ComposeError) -> anyhow::Error {
    match e {
        ComposeError::Unsupported { .. } => usage(e.to_string()),
        other => other.into(),
    }
}

fn unsupported(e: eval::EvalError) -> anyhow::Error {
    match e {
        eval::EvalError::Compose(c) => shape(c),
        other => other.into(),
    }
}

fn eval_disambig(file: &ConfigFile, a: EvalArgs) -> Result<()> {
    let inp = eval_inputs(file, a, &SENTENCE_MODELS)?;
    let rows = eval::read_disambiguation(open(&inp.dataset)?)
        .with_context(|| format!("reading {}", inp.dataset.display()))?;
    let mut reports = Vec::new();
    for &m in &inp.models {
        let r = eval::eval_disambiguation(&rows, m, &inp.lexicon).map_err(unsupported)?;
        report_missing(&r.missing);
        reports.push(r);
    }
    if let Some(p) = &inp.items {
        let mut out = String::from("model\trow\tannotator_id\ttarget\tsubject\tobject\tlandmark\tscore\tgroup\tcosine\n");
        for r in &reports {
            for (i, (e, c)) in rows.iter().zip(&r.cosines).enumerate() {
                out.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:?}\t{c:.6}\n",
                    r.model, i + 1, e.annotator_id, e.target_verb, e.subject, e.object,
                    e.landmark_verb, e.score, e.group
                ));
            }
        }
        write_output(Some(p), &out)?;
    }
    write_output(inp.output.as_deref(), &eval::disambiguation_table(&reports))
}

fn eval_transintrans(file: &ConfigFile, a: EvalArgs) -> Result<()> {
    let inp = eval_inputs(file, a, &SENTENCE_MODELS)?;
    let items = eval::read_trans_intrans(open(&inp.dataset)?)
        .with_context(|| format!("reading {}", inp.dataset.display()))?;
    let mut reports = Vec::new();
    for &m in &inp.models {
        let r = eval::eval_trans_intrans(&items, m, &inp.lexicon).map_err(unsupported)?;
        report_missing(&r.missing);
        reports.push(r);
    }
    if let Some(p) = &inp.items {
        let mut out = String::from("model\ttarget\tsubject\tobject\thigh\tlow\tsim_it\tsim_hi\tsim_lo\n");
        for r in &reports {
            for (it, s) in items.iter().zip(&r.scores) {
                out.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\t{}\t{:.6}\t{:.6}\t{:.6}\n",
                    r.model, it.target_verb, it.subject, it.object, it.high_landmark,
                    it.low_landmark, s.own, s.high, s.low
                ));
            }
        }
        write_output(Some(p), &out)?;
    }
    write_output(inp.output.as_deref(), &eval::trans_intrans_table(&reports))
}

fn eval_definitions(file: &ConfigFile, a: EvalDefinitionsArgs) -> Result<()> {
    let pool: RankPool = file
        .pick(a.rank_pool, "rank-pool")?
        .map(|s: String| s.parse().map_err(usage))
        .transpose()?
        .unwrap_or_default();
    let inp = eval_inputs(file, a.common, &DEFINITION_MODELS)?;
    let entries = eval::read_definitions(open(&inp.dataset)?)
        .with_context(|| format!("reading {}", inp.dataset.display()))?;
    let mut reports = Vec::new();
    for &m in &inp.models {
        let r = eval::eval_definitions(&entries, m, &inp.lexicon, pool).map_err(unsupported)?;
        report_missing(&r.missing);
        reports.push(r);
    }
    if let Some(p) = &inp.items {
        let mut out = String::from(
            "model\tpos\tterm\tprecision\trecall\tf1\tpredicted_main\tpredicted_alt1\tpredicted_alt2\tmain_rank\n",
        );
        for r in &reports {
            for s in &r.sections {
                for t in &s.terms {
                    out.push_str(&format!(
                        "{}\t{}\t{}\t{:.6}\t{:.6}\t{:.6}\t{}\t{}\t{}\t{}\n",
                        r.model, s.pos, t.term, t.precision, t.recall, t.f1, t.predicted[0],
                        t.predicted[1], t.predicted[2], t.main_rank
                    ));
                }
            }
        }
        write_output(Some(p), &out)?;
    }
    let text = format!(
        "{}\n{}",
        eval::definition_scores_table(&reports),
        eval::definition_ranks_table(&reports)
    );
    write_output(inp.output.as_deref(), &text)
}
