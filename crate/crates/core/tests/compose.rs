mod common;

use common::{naive_contraction, random_matrix, random_positive, random_vector, rel_err_normalized, rng};
use discocat::compose::{compose_transitive, raw_transitive, same_direction, CompositionModel};
use discocat::tensor::{cosine, expand_verb, mu, normalize, outer, pointwise, CopyMode, ContractionPlan};
use discocat::{PregroupType, WordTensor};
use proptest::prelude::*;
use rand::Rng;

use CompositionModel::*;

fn transitive_plan() -> ContractionPlan {
    ContractionPlan::from_types(&[
        PregroupType::noun(),
        PregroupType::transitive_verb(),
        PregroupType::noun(),
    ])
    .unwrap()
}

#[test]
fn copy_models_match_the_contraction() {
    let plan = transitive_plan();
    let mut r = rng(21);
    for _ in 0..100 {
        let d = r.gen_range(2..=6);
        let (s, m, o) = (
            random_vector(&mut r, d),
            random_matrix(&mut r, d),
            random_vector(&mut r, d),
        );
        for (model, mode) in [(CpSbj, CopyMode::CopySubject), (CpObj, CopyMode::CopyObject)] {
            let words = [s.clone(), expand_verb(&m, mode), o.clone()];
            let want = naive_contraction(&words, plan.reduction(), d);
            let got = compose_transitive(model, &s, &m, &o).unwrap();
            assert!(rel_err_normalized(got.data(), want.data()) <= 1e-10);
        }
    }
}

#[test]
fn mixcpdl_factorises_over_training_pairs() {
    let mut r = rng(22);
    for d in 2..=6 {
        let pairs: Vec<(WordTensor, WordTensor)> = (0..5)
            .map(|_| (random_positive(&mut r, d, 1), random_positive(&mut r, d, 1)))
            .collect();
        let mut m = WordTensor::zeros(d, 2);
        let mut diag = WordTensor::zeros(d, 1);
        for (a, b) in &pairs {
            m.add_assign_scaled(&outer(a, b), 1.0);
            diag.add_assign_scaled(&pointwise(a, b), 1.0);
        }
        assert!(mu(&m).max_abs_diff(&diag) <= 1e-12);
        let (s, o) = (random_vector(&mut r, d), random_vector(&mut r, d));
        let got = raw_transitive(MixCpDl, &s, &m, &o).unwrap();
        let want = pointwise(&pointwise(&s, &diag), &o);
        assert!(got.max_abs_diff(&want) <= 1e-12);
    }
}

proptest! {
    #[test]
    fn kron_is_multp_with_squared_verb(d in 1usize..8, seed in any::<u64>()) {
        let mut r = rng(seed);
        let (s, v, o) = (random_vector(&mut r, d), random_vector(&mut r, d), random_vector(&mut r, d));
        let kron = raw_transitive(Kron, &s, &v, &o).unwrap();
        let multp = raw_transitive(Multp, &s, &pointwise(&v, &v), &o).unwrap();
        prop_assert!(kron.max_abs_diff(&multp) <= 1e-12);
    }

    #[test]
    fn multp_commutes_in_arguments(d in 1usize..8, seed in any::<u64>()) {
        let mut r = rng(seed);
        let (s, v, o) = (random_vector(&mut r, d), random_vector(&mut r, d), random_vector(&mut r, d));
        let a = compose_transitive(Multp, &s, &v, &o).unwrap();
        let b = compose_transitive(Multp, &o, &v, &s).unwrap();
        prop_assert!(a.max_abs_diff(&b) <= 1e-15);
    }

    #[test]
    fn normalisation_keeps_the_ranking(d in 2usize..8, seed in any::<u64>()) {
        let mut r = rng(seed);
        let q = random_vector(&mut r, d);
        let cands: Vec<WordTensor> = (0..6).map(|_| random_vector(&mut r, d).scaled(r.gen_range(0.1..10.0))).collect();
        let order = |xs: &[WordTensor]| {
            let sims: Vec<f64> = xs.iter().map(|c| cosine(&q, c)).collect();
            let mut idx: Vec<usize> = (0..xs.len()).collect();
            idx.sort_by(|&a, &b| sims[b].partial_cmp(&sims[a]).unwrap());
            (idx, sims)
        };
        let normed: Vec<WordTensor> = cands.iter().map(normalize).collect();
        let (raw_order, raw_sims) = order(&cands);
        let (norm_order, norm_sims) = order(&normed);
        for (a, b) in raw_sims.iter().zip(&norm_sims) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
        // orderings can only differ between near-ties
        if raw_order != norm_order {
            let mut sorted = raw_sims.clone();
            sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
            prop_assert!(sorted.windows(2).any(|w| w[0] - w[1] <= 1e-12));
        }
    }

    #[test]
    fn outputs_are_unit_or_zero(d in 1usize..8, seed in any::<u64>()) {
        let mut r = rng(seed);
        let (s, o) = (random_vector(&mut r, d), random_vector(&mut r, d));
        let (v, m) = (random_vector(&mut r, d), random_matrix(&mut r, d));
        for model in [Addtv, Multp, Kron] {
            let out = compose_transitive(model, &s, &v, &o).unwrap();
            let n = out.data().iter().map(|x| x * x).sum::<f64>().sqrt();
            prop_assert!(out.is_zero() || (n - 1.0).abs() <= 1e-12);
        }
        for model in [MixCpDl, CpSbj, CpObj] {
            let out = compose_transitive(model, &s, &m, &o).unwrap();
            let n = out.data().iter().map(|x| x * x).sum::<f64>().sqrt();
            prop_assert!(out.is_zero() || (n - 1.0).abs() <= 1e-12);
        }
    }
}

#[test]
fn cpsbj_worked_example() {
    let m = WordTensor::matrix(2, vec![1., 2., 3., 4.]).unwrap();
    let e1 = WordTensor::basis_vector(2, 0);
    let e2 = WordTensor::basis_vector(2, 1);
    let raw = raw_transitive(CpSbj, &e2, &m, &e1).unwrap();
    assert_eq!(raw.data(), &[0., 3.]);
    let plan = transitive_plan();
    let via_plan = discocat::tensor::eval_contraction(
        &[e2.clone(), expand_verb(&m, CopyMode::CopySubject), e1.clone()],
        &plan,
    )
    .unwrap();
    assert_eq!(via_plan.data(), &[0., 3.]);
    assert!(same_direction(&compose_transitive(CpSbj, &e2, &m, &e1).unwrap(), &raw, 0.0));
}
