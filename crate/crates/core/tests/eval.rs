mod common;

use common::{
    four_term_fixture, midrank_spearman, rank_formula_spearman, rng, vec_of, FOUR_TERM_BUCKETS,
    FOUR_TERM_MEANS, FOUR_TERM_TABLE,
};
use discocat::eval::{
    definition_ranks_table, definition_scores_table, disambiguation_table, eval_definitions,
    eval_disambiguation, eval_trans_intrans, spearman_rho, trans_intrans_table, DefinitionEntry,
    DisambigEntry, LandmarkGroup, PartOfSpeech, RankPool, TransIntransItem,
};
use discocat::tensor::cosine;
use discocat::{CompositionModel, Composer, Lexicon, PhraseSpec, Role, SemanticSpace};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn space(d: usize) -> SemanticSpace {
    SemanticSpace::new((0..d).map(|i| format!("c{i}")).collect()).unwrap()
}

fn entry(target: &str, landmark: &str, score: u8) -> DisambigEntry {
    DisambigEntry {
        annotator_id: "a1".into(),
        target_verb: target.into(),
        subject: "s".into(),
        object: "o".into(),
        landmark_verb: landmark.into(),
        score,
        group: if score >= 4 { LandmarkGroup::High } else { LandmarkGroup::Low },
    }
}

proptest! {
    #[test]
    fn rho_is_bounded_and_monotone_invariant(
        xs in prop::collection::vec(-100.0f64..100.0, 2..30),
        seed in any::<u64>(),
    ) {
        let mut r = rng(seed);
        let ys: Vec<f64> = xs.iter().map(|_| r.gen_range(1..=7) as f64).collect();
        let base = spearman_rho(&xs, &ys).unwrap();
        prop_assert!((-1.0..=1.0).contains(&base.rho));
        let warped: Vec<f64> = xs.iter().map(|x| (x / 10.0).exp() * 3.0 + 1.0).collect();
        let again = spearman_rho(&warped, &ys).unwrap();
        prop_assert!((base.rho - again.rho).abs() <= 1e-12);
        if !base.degenerate {
            prop_assert!((base.rho - midrank_spearman(&xs, &ys)).abs() <= 1e-12);
        }
    }
}

#[test]
fn rho_matches_rank_formula_without_ties() {
    let mut r = rng(31);
    for n in 2..40 {
        let xs: Vec<f64> = (0..n).map(|_| r.gen::<f64>()).collect();
        let mut ys: Vec<f64> = (0..n).map(|i| i as f64).collect();
        ys.shuffle(&mut r);
        let got = spearman_rho(&xs, &ys).unwrap().rho;
        assert!((got - rank_formula_spearman(&xs, &ys)).abs() <= 1e-12);
    }
}

/// `s` and `o` are all-ones; verb `v` has context vector `(1, k)` so sentence
/// cosines against the target `(1, 0)` fall as `k` grows.
fn graded_lexicon(ks: usize) -> Lexicon {
    let mut lex = Lexicon::new(space(2));
    lex.insert(Role::Context, "s", vec_of(&[1., 1.])).unwrap();
    lex.insert(Role::Context, "o", vec_of(&[1., 1.])).unwrap();
    lex.insert(Role::Context, "target", vec_of(&[1., 0.])).unwrap();
    for k in 0..ks {
        lex.insert(Role::Context, format!("v{k}"), vec_of(&[1., k as f64])).unwrap();
    }
    lex
}

#[test]
fn monotone_scores_give_rho_one() {
    let lex = graded_lexicon(7);
    let rows: Vec<DisambigEntry> = (0..7).map(|k| entry("target", &format!("v{k}"), 7 - k as u8)).collect();
    let rep = eval_disambiguation(&rows, CompositionModel::Multp, &lex).unwrap();
    assert_eq!(rep.rho.rho, 1.0);
    assert!(rep.missing.is_empty());
    assert!(rep.high_mean.unwrap() > rep.low_mean.unwrap());
}

#[test]
fn shuffled_scores_match_the_oracle() {
    let lex = graded_lexicon(20);
    let mut r = rng(77);
    let rows: Vec<DisambigEntry> = (0..60)
        .map(|i| entry("target", &format!("v{}", i % 20), r.gen_range(1..=7)))
        .collect();
    let rep = eval_disambiguation(&rows, CompositionModel::Multp, &lex).unwrap();
    let scores: Vec<f64> = rows.iter().map(|e| e.score as f64).collect();
    // cosines recomputed from the closed form: (1,0)·(1,k)/|(1,k)|
    let cosines: Vec<f64> = (0..60)
        .map(|i| {
            let k = (i % 20) as f64;
            1.0 / (1.0 + k * k).sqrt()
        })
        .collect();
    for (a, b) in rep.cosines.iter().zip(&cosines) {
        assert!((a - b).abs() <= 1e-12);
    }
    let want = midrank_spearman(&cosines, &scores);
    assert!((rep.rho.rho - want).abs() <= 1e-12);
    assert!(rep.rho.rho.abs() < 0.5);
}

#[test]
fn missing_lemmas_are_reported() {
    let lex = graded_lexicon(2);
    let rows = vec![entry("target", "v0", 7), entry("target", "nope", 1)];
    let rep = eval_disambiguation(&rows, CompositionModel::Multp, &lex).unwrap();
    assert_eq!(rep.missing.iter().collect::<Vec<_>>(), ["nope"]);
    assert_eq!(rep.cosines[1], 0.0);
    assert!(eval_disambiguation(&[], CompositionModel::Multp, &lex).is_err());
}

fn item(target: &str, high: &str, low: &str) -> TransIntransItem {
    TransIntransItem {
        target_verb: target.into(),
        subject: "s".into(),
        object: "o".into(),
        high_landmark: high.into(),
        low_landmark: low.into(),
    }
}

#[test]
fn equal_similarities_are_not_errors() {
    let mut lex = Lexicon::new(space(3));
    for w in ["s", "o", "v", "hi", "lo"] {
        lex.insert(Role::Context, w, vec_of(&[1., 2., 3.])).unwrap();
    }
    let rep = eval_trans_intrans(&[item("v", "hi", "lo")], CompositionModel::Multp, &lex).unwrap();
    assert_eq!(rep.scores[0].own, rep.scores[0].high);
    assert_eq!((rep.high_errors, rep.low_errors), (0, 0));
    assert_eq!(rep.unrelated_pairs, 0);
}

#[test]
fn orthogonal_verbs_have_no_unrelated_errors() {
    let mut lex = Lexicon::new(space(3));
    lex.insert(Role::Context, "s", vec_of(&[1., 1., 1.])).unwrap();
    lex.insert(Role::Context, "o", vec_of(&[1., 1., 1.])).unwrap();
    for i in 0..3 {
        let mut e = [0.0; 3];
        e[i] = 1.0;
        lex.insert(Role::Context, format!("v{i}"), vec_of(&e)).unwrap();
    }
    let items: Vec<TransIntransItem> = (0..3).map(|i| item(&format!("v{i}"), "v0", "v0")).collect();
    let rep = eval_trans_intrans(&items, CompositionModel::Multp, &lex).unwrap();
    assert_eq!(rep.unrelated_pairs, 6);
    assert_eq!(rep.unrelated_errors, 0);

    // all six (i, j) pairs by hand
    let composer = Composer::new(&lex);
    let model = CompositionModel::Multp;
    let mut enumerated = 0;
    for i in 0..3 {
        let vi = format!("v{i}");
        let tr = composer.compose(model, &PhraseSpec::transitive("s", &vi, "o")).unwrap().vector;
        let own = composer.compose(model, &PhraseSpec::intransitive("s", &vi)).unwrap().vector;
        for j in (0..3).filter(|&j| j != i) {
            let other = composer
                .compose(model, &PhraseSpec::intransitive("s", &format!("v{j}")))
                .unwrap()
                .vector;
            assert_eq!(cosine(&tr, &other), 0.0);
            assert_eq!(cosine(&tr, &own), 1.0);
            enumerated += 1;
        }
    }
    assert_eq!(enumerated, rep.unrelated_pairs);
    // v1 and v2 items: the v0 landmarks are orthogonal, never above 1
    assert_eq!(rep.high_errors + rep.low_errors, 0);
}

#[test]
fn perfect_classifier() {
    let mut lex = Lexicon::new(space(3));
    let mut entries = Vec::new();
    for t in 0..3 {
        let mut e = [0.0; 3];
        e[t] = 1.0;
        let term = format!("t{t}");
        lex.insert(Role::Context, term.clone(), vec_of(&e)).unwrap();
        let defs: [String; 3] = std::array::from_fn(|k| format!("t{t}d{k}"));
        for (k, d) in defs.iter().enumerate() {
            let mut v = e;
            v[(t + 1) % 3] = 0.1 * k as f64;
            lex.insert(Role::Context, d.clone(), vec_of(&v)).unwrap();
        }
        entries.push(DefinitionEntry {
            term,
            pos: PartOfSpeech::Noun,
            definitions: defs.map(|d| vec![d]),
        });
    }
    for pool in [RankPool::MainDefinitions, RankPool::AllDefinitions] {
        let rep = eval_definitions(&entries, CompositionModel::Multp, &lex, pool).unwrap();
        assert_eq!(rep.skipped, vec![PartOfSpeech::Verb]);
        let s = &rep.sections[0];
        assert_eq!((s.precision, s.recall, s.f1, s.mrr), (1.0, 1.0, 1.0, 1.0));
        assert_eq!(s.buckets, [3, 0, 0, 0]);
    }
}

#[test]
fn four_term_table() {
    let (lex, entries) = four_term_fixture();
    let rep = eval_definitions(&entries, CompositionModel::Multp, &lex, RankPool::MainDefinitions).unwrap();
    let s = &rep.sections[0];
    for (got, want) in s.terms.iter().zip(&FOUR_TERM_TABLE) {
        assert_eq!(got.term, want.term);
        assert_eq!(got.predicted, want.predicted.map(String::from));
        assert_eq!(got.main_rank, want.rank);
        assert!((got.precision - want.precision).abs() <= 1e-15);
        assert!((got.recall - want.recall).abs() <= 1e-15);
        assert!((got.f1 - want.f1).abs() <= 1e-15);
    }
    let (p, r, f, mrr) = FOUR_TERM_MEANS;
    assert!((s.precision - p).abs() <= 1e-15);
    assert!((s.recall - r).abs() <= 1e-15);
    assert!((s.f1 - f).abs() <= 1e-15);
    assert_eq!(s.mrr, mrr);
    assert_eq!(s.buckets, FOUR_TERM_BUCKETS);
    assert_eq!(s.buckets.iter().sum::<usize>(), s.terms.len());

    // with every definition in the pool, alpha's main definition also trails
    // its own second one (1.0) and delta's (0.707, tie broken to alpha) and
    // delta's second (1.0)
    let all = eval_definitions(&entries, CompositionModel::Multp, &lex, RankPool::AllDefinitions).unwrap();
    assert_eq!(all.sections[0].terms[0].main_rank, 5);
}

#[test]
fn reports_are_identical_across_pool_sizes() {
    let (lex, entries) = four_term_fixture();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let defs = eval_definitions(&entries, CompositionModel::Multp, &lex, RankPool::default()).unwrap();
            let rows: Vec<DisambigEntry> = entries
                .iter()
                .map(|e| DisambigEntry {
                    annotator_id: "x".into(),
                    target_verb: e.term.clone(),
                    subject: e.definitions[0][0].clone(),
                    object: e.definitions[1][0].clone(),
                    landmark_verb: e.definitions[2][0].clone(),
                    score: 3,
                    group: LandmarkGroup::High,
                })
                .collect();
            let dis = eval_disambiguation(&rows, CompositionModel::Kron, &lex).unwrap();
            let items: Vec<TransIntransItem> = entries
                .iter()
                .map(|e| TransIntransItem {
                    target_verb: e.term.clone(),
                    subject: e.definitions[0][0].clone(),
                    object: e.definitions[1][0].clone(),
                    high_landmark: e.definitions[2][0].clone(),
                    low_landmark: "alpha".into(),
                })
                .collect();
            let ti = eval_trans_intrans(&items, CompositionModel::Addtv, &lex).unwrap();
            format!(
                "{}{}{}{}",
                definition_scores_table(std::slice::from_ref(&defs)),
                definition_ranks_table(&[defs]),
                disambiguation_table(&[dis]),
                trans_intrans_table(&[ti])
            )
        })
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(1));
    assert!(one.contains("Multp\tnoun\t0.416667\t0.500000\t0.452381\t0.750000\t4"));
}

#[test]
fn verb_definitions_use_verb_phrases() {
    let mut lex = Lexicon::new(space(2));
    lex.insert(Role::Context, "cook", vec_of(&[1., 0.])).unwrap();
    lex.insert(Role::Context, "run", vec_of(&[0., 1.])).unwrap();
    lex.insert(Role::Context, "prepare", vec_of(&[1., 1.])).unwrap();
    lex.insert(Role::Context, "food", vec_of(&[1., 0.1])).unwrap();
    lex.insert(Role::Context, "move", vec_of(&[0.1, 1.])).unwrap();
    lex.insert(Role::Context, "fast", vec_of(&[0.2, 1.])).unwrap();
    let def = |s: &str| s.split(' ').map(String::from).collect::<Vec<_>>();
    let entries = vec![
        DefinitionEntry {
            term: "cook".into(),
            pos: PartOfSpeech::Verb,
            definitions: [def("prepare food"), def("food"), def("prepare unknown food")],
        },
        DefinitionEntry {
            term: "run".into(),
            pos: PartOfSpeech::Verb,
            definitions: [def("move fast"), def("move"), def("fast")],
        },
    ];
    let rep = eval_definitions(&entries, CompositionModel::Multp, &lex, RankPool::default()).unwrap();
    assert_eq!(rep.skipped, vec![PartOfSpeech::Noun]);
    assert_eq!(rep.sections[0].f1, 1.0);
    assert_eq!(rep.missing.iter().collect::<Vec<_>>(), ["unknown"]);
    // relational models have no verb-phrase form
    assert!(eval_definitions(&entries, CompositionModel::CpObj, &lex, RankPool::default()).is_err());
}
