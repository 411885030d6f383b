//! Seeded synthetic data with known verb senses.
//!
//! Two topics, A and B, each own a set of nouns and a set of context words;
//! topic nouns occur in sentences drawn mostly from their own topic's context
//! words. Subjects occur with a shared pool of context words. Each generated
//! item has an ambiguous target verb taking objects from both topics, a high
//! landmark taking only topic-A objects and a low landmark taking only topic-B
//! objects. The item sentence pairs a subject with a topic-A object, so by
//! construction the high landmark is the right reading.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::eval::{DisambigEntry, LandmarkGroup};
use crate::lexicon::{Corpus, SvoTriple};

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticConfig {
    pub seed: u64,
    pub items: usize,
    pub nouns_per_topic: usize,
    pub context_per_topic: usize,
    pub shared_context: usize,
    pub subjects: usize,
    pub sentences_per_lemma: usize,
    /// Context words per corpus sentence (the sentence also holds its lemma).
    pub sentence_context: usize,
    /// Chance that a topic sentence's context word comes from the shared pool.
    pub noise: f64,
    /// Argument occurrences per verb sense.
    pub triples_per_sense: usize,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            items: 50,
            nouns_per_topic: 12,
            context_per_topic: 20,
            shared_context: 10,
            subjects: 10,
            sentences_per_lemma: 15,
            sentence_context: 5,
            noise: 0.2,
            triples_per_sense: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntheticItem {
    pub subject: String,
    /// A topic-A noun.
    pub object: String,
    pub target_verb: String,
    pub high_landmark: String,
    pub low_landmark: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticData {
    pub corpus: Corpus,
    pub triples: Vec<SvoTriple>,
    pub items: Vec<SyntheticItem>,
    /// Every context word; a basis of this size covers exactly these.
    pub context_words: Vec<String>,
}

impl SyntheticData {
    /// Two judgement rows per item: the high landmark scored 6, the low one 2.
    pub fn disambiguation_entries(&self) -> Vec<DisambigEntry> {
        self.items
            .iter()
            .flat_map(|it| {
                [
                    (it.high_landmark.clone(), 6, LandmarkGroup::High),
                    (it.low_landmark.clone(), 2, LandmarkGroup::Low),
                ]
                .map(|(landmark_verb, score, group)| DisambigEntry {
                    annotator_id: "gen".into(),
                    target_verb: it.target_verb.clone(),
                    subject: it.subject.clone(),
                    object: it.object.clone(),
                    landmark_verb,
                    score,
                    group,
                })
            })
            .collect()
    }
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i:03}")).collect()
}

pub fn generate(cfg: &SyntheticConfig) -> SyntheticData {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let nouns_a = names("nouna", cfg.nouns_per_topic);
    let nouns_b = names("nounb", cfg.nouns_per_topic);
    let ctx_a = names("ctxa", cfg.context_per_topic);
    let ctx_b = names("ctxb", cfg.context_per_topic);
    let shared = names("ctxs", cfg.shared_context);
    let subjects = names("subj", cfg.subjects);

    let mut sentences = Vec::new();
    let mut emit = |lemma: &str, own: &[String], rng: &mut ChaCha8Rng| {
        for _ in 0..cfg.sentences_per_lemma {
            let mut s = vec![lemma.to_string()];
            for _ in 0..cfg.sentence_context {
                let pool = if rng.gen_bool(cfg.noise) { &shared } else { own };
                s.push(pool.choose(rng).expect("non-empty pool").clone());
            }
            s.shuffle(rng);
            sentences.push(s);
        }
    };
    for n in &nouns_a {
        emit(n, &ctx_a, &mut rng);
    }
    for n in &nouns_b {
        emit(n, &ctx_b, &mut rng);
    }
    for s in &subjects {
        emit(s, &shared, &mut rng);
    }

    let mut triples = Vec::new();
    let mut add_sense = |verb: &str, objects: &[String], rng: &mut ChaCha8Rng| {
        for _ in 0..cfg.triples_per_sense {
            triples.push(SvoTriple {
                verb: verb.to_string(),
                subject: subjects.choose(rng).expect("subjects").clone(),
                object: objects.choose(rng).expect("objects").clone(),
                count: rng.gen_range(1..=3),
            });
        }
    };
    let mut items = Vec::with_capacity(cfg.items);
    for i in 0..cfg.items {
        let target = format!("verb{i:03}");
        let high = format!("high{i:03}");
        let low = format!("low{i:03}");
        add_sense(&target, &nouns_a, &mut rng);
        add_sense(&target, &nouns_b, &mut rng);
        add_sense(&high, &nouns_a, &mut rng);
        add_sense(&low, &nouns_b, &mut rng);
        items.push(SyntheticItem {
            subject: subjects.choose(&mut rng).expect("subjects").clone(),
            object: nouns_a.choose(&mut rng).expect("nouns").clone(),
            target_verb: target,
            high_landmark: high,
            low_landmark: low,
        });
    }

    let mut context_words = ctx_a;
    context_words.extend(ctx_b);
    context_words.extend(shared);
    SyntheticData {
        corpus: Corpus { sentences },
        triples,
        items,
        context_words,
    }
}
