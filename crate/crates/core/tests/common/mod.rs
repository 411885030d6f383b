//! Independent reference implementations used by the integration tests.
//! None of these call into the code they check beyond plain data accessors.
#![allow(dead_code)]

use std::collections::HashSet;

use discocat::pregroup::{BasicType, SimpleType};
use discocat::tensor::WordTensor;
use discocat::Reduction;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_tensor(rng: &mut impl Rng, dim: usize, rank: usize) -> WordTensor {
    let data = (0..dim.pow(rank as u32)).map(|_| rng.gen_range(-1.0..1.0)).collect();
    WordTensor::new(dim, rank, data).unwrap()
}

pub fn random_vector(rng: &mut impl Rng, dim: usize) -> WordTensor {
    random_tensor(rng, dim, 1)
}

pub fn random_matrix(rng: &mut impl Rng, dim: usize) -> WordTensor {
    random_tensor(rng, dim, 2)
}

/// Non-negative entries, as corpus-derived vectors are.
pub fn random_positive(rng: &mut impl Rng, dim: usize, rank: usize) -> WordTensor {
    let data = (0..dim.pow(rank as u32)).map(|_| rng.gen_range(0.0..1.0)).collect();
    WordTensor::new(dim, rank, data).unwrap()
}

pub fn vec_of(xs: &[f64]) -> WordTensor {
    WordTensor::vector(xs.to_vec()).unwrap()
}

pub fn l2(xs: &[f64]) -> f64 {
    xs.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `max |a - b| / max(|b|_inf, tiny)` after scaling both to unit L2 norm.
pub fn rel_err_normalized(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let (na, nb) = (l2(a), l2(b));
    if na == 0.0 || nb == 0.0 {
        return if na == nb { 0.0 } else { f64::INFINITY };
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| (x / na - y / nb).abs())
        .fold(0.0, f64::max)
}

/// `max |a - b| / max(|b|_inf, 1e-300)`.
pub fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let scale = b.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-300);
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / scale
}

pub fn max_abs(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Row-major entry of a rank-`words[k].rank()` tensor.
fn entry(t: &WordTensor, idx: &[usize]) -> f64 {
    let d = t.dim();
    let flat = idx.iter().fold(0, |acc, &i| acc * d + i);
    t.data()[flat]
}

/// Reference contraction: materialise `w_1 ⊗ … ⊗ w_n` and apply the cups as
/// Kronecker deltas. Every free index of the output and every cup gets one
/// loop variable, and the product of word entries is summed.
pub fn naive_contraction(words: &[WordTensor], reduction: &Reduction, dim: usize) -> WordTensor {
    let wires: usize = words.iter().map(WordTensor::rank).sum();
    // variable per wire: survivors first, then one per cup
    let mut var = vec![usize::MAX; wires];
    for (k, &s) in reduction.survivors.iter().enumerate() {
        var[s] = k;
    }
    let ns = reduction.survivors.len();
    for (k, &(i, j)) in reduction.cups.iter().enumerate() {
        var[i] = ns + k;
        var[j] = ns + k;
    }
    assert!(var.iter().all(|&v| v != usize::MAX));
    let nvars = ns + reduction.cups.len();
    let mut out = vec![0.0; dim.pow(ns as u32)];
    let mut assign = vec![0usize; nvars];
    loop {
        let mut prod = 1.0;
        let mut wire = 0;
        for w in words {
            let idx: Vec<usize> = (0..w.rank()).map(|a| assign[var[wire + a]]).collect();
            prod *= if w.rank() == 0 { w.data()[0] } else { entry(w, &idx) };
            wire += w.rank();
        }
        let flat = assign[..ns].iter().fold(0, |acc, &i| acc * dim + i);
        out[flat] += prod;
        // odometer
        let mut k = nvars;
        loop {
            if k == 0 {
                return WordTensor::new(dim, ns, out).unwrap();
            }
            k -= 1;
            assign[k] += 1;
            if assign[k] < dim {
                break;
            }
            assign[k] = 0;
        }
    }
}

fn contracts(a: SimpleType, b: SimpleType) -> bool {
    a.base == b.base && b.adjoint_order == a.adjoint_order + 1
}

/// Survivors of the best reduction reachable by repeatedly contracting two
/// neighbouring simple types: fewest survivors, ties broken by the
/// lexicographically smallest list of original positions.
pub fn brute_force_survivors(simples: &[SimpleType]) -> Vec<usize> {
    let start: Vec<usize> = (0..simples.len()).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut stack = vec![start];
    let mut best: Option<Vec<usize>> = None;
    while let Some(state) = stack.pop() {
        if !seen.insert(state.clone()) {
            continue;
        }
        let better = match &best {
            None => true,
            Some(b) => state.len() < b.len() || (state.len() == b.len() && state < *b),
        };
        if better {
            best = Some(state.clone());
        }
        for k in 0..state.len().saturating_sub(1) {
            if contracts(simples[state[k]], simples[state[k + 1]]) {
                let mut next = state.clone();
                next.drain(k..k + 2);
                stack.push(next);
            }
        }
    }
    best.unwrap()
}

pub fn simple(base: BasicType, z: i32) -> SimpleType {
    SimpleType {
        base,
        adjoint_order: z,
    }
}

/// The 10 simple types `{n, s} × {-2..=2}`.
pub fn alphabet() -> Vec<SimpleType> {
    let mut out = Vec::new();
    for base in [BasicType::N, BasicType::S] {
        for z in -2..=2 {
            out.push(simple(base, z));
        }
    }
    out
}

pub fn random_simples(rng: &mut impl Rng, len: usize) -> Vec<SimpleType> {
    let a = alphabet();
    (0..len).map(|_| a[rng.gen_range(0..a.len())]).collect()
}

/// Textbook Spearman for inputs without ties: `1 - 6 Σ d² / (n (n² - 1))`.
pub fn rank_formula_spearman(xs: &[f64], ys: &[f64]) -> f64 {
    let rank = |v: &[f64]| {
        let mut order: Vec<usize> = (0..v.len()).collect();
        order.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap());
        let mut r = vec![0.0; v.len()];
        for (pos, &i) in order.iter().enumerate() {
            r[i] = (pos + 1) as f64;
        }
        r
    };
    let (rx, ry) = (rank(xs), rank(ys));
    let n = xs.len() as f64;
    let d2: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - b) * (a - b)).sum();
    1.0 - 6.0 * d2 / (n * (n * n - 1.0))
}

/// Spearman with ties: Pearson correlation of mid-ranks, each rank counted as
/// `#smaller + (#equal + 1) / 2`.
pub fn midrank_spearman(xs: &[f64], ys: &[f64]) -> f64 {
    let ranks = |v: &[f64]| -> Vec<f64> {
        v.iter()
            .map(|&x| {
                let less = v.iter().filter(|&&y| y < x).count() as f64;
                let equal = v.iter().filter(|&&y| y == x).count() as f64;
                less + (equal + 1.0) / 2.0
            })
            .collect()
    };
    let (rx, ry) = (ranks(xs), ranks(ys));
    let n = xs.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx) * (a - mx)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my) * (b - my)).sum();
    cov / (vx * vy).sqrt()
}

/// Four noun terms on the basis axes of a 4-dimensional space, each with three
/// single-word definitions placed by hand. Returned with the lexicon holding
/// every context vector.
pub fn four_term_fixture() -> (discocat::Lexicon, Vec<discocat::eval::DefinitionEntry>) {
    use discocat::eval::{DefinitionEntry, PartOfSpeech};
    use discocat::{Lexicon, Role, SemanticSpace};

    let space = SemanticSpace::new((0..4).map(|i| format!("c{i}")).collect()).unwrap();
    let mut lex = Lexicon::new(space);
    let terms = ["alpha", "beta", "gamma", "delta"];
    let defs: [[[f64; 4]; 3]; 4] = [
        [[1., 2., 0., 0.], [1., 0., 0., 0.], [2., 1., 0., 0.]],
        [[0., 1., 0., 0.], [0., 3., 0., 0.], [0., 0., 1., 0.]],
        [[0., 0., 1., 2.], [0., 0., 1., 0.], [0., 0., 2., 0.]],
        [[1., 0., 0., 1.], [1., 0., 0., 0.], [0., 1., 0., 0.]],
    ];
    let mut entries = Vec::new();
    for (t, term) in terms.iter().enumerate() {
        let mut axis = [0.0; 4];
        axis[t] = 1.0;
        lex.insert(Role::Context, *term, vec_of(&axis)).unwrap();
        let names: [String; 3] = std::array::from_fn(|k| format!("{term}_def{k}"));
        for (name, v) in names.iter().zip(&defs[t]) {
            lex.insert(Role::Context, name.clone(), vec_of(v)).unwrap();
        }
        entries.push(DefinitionEntry {
            term: term.to_string(),
            pos: PartOfSpeech::Noun,
            definitions: names.map(|n| vec![n]),
        });
    }
    (lex, entries)
}

/// Hand-executed table for [`four_term_fixture`]: per term, the terms its
/// three definitions are classified to, precision, recall, F1 and the rank
/// of its main definition among the four main definitions.
///
/// Ties go to the lexicographically smaller term (`alpha < beta < delta < gamma`).
/// - alpha: (1,2,0,0)→beta, e1→alpha, (2,1,0,0)→alpha; predicted {a1,a2,d0,d1}: P 2/4, R 2/3
/// - beta: e2→beta, 3e2→beta, e3→gamma; predicted {a0,b0,b1,d2}: P 2/4, R 2/3
/// - gamma: (0,0,1,2)→delta, e3→gamma, 2e3→gamma; predicted {b2,g1,g2}: P 2/3, R 2/3
/// - delta: (1,0,0,1)→alpha (tie), e1→alpha, e2→beta; predicted {g0}: P 0, R 0
/// - ranks: alpha sees d0 (0.707) above its own a0 (0.447) → 2; delta sees g0
///   (0.894) above d0 (0.707) → 2; beta and gamma → 1
pub struct FourTermRow {
    pub term: &'static str,
    pub predicted: [&'static str; 3],
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub rank: usize,
}

pub const FOUR_TERM_TABLE: [FourTermRow; 4] = [
    FourTermRow { term: "alpha", predicted: ["beta", "alpha", "alpha"], precision: 2. / 4., recall: 2. / 3., f1: 4. / 7., rank: 2 },
    FourTermRow { term: "beta", predicted: ["beta", "beta", "gamma"], precision: 2. / 4., recall: 2. / 3., f1: 4. / 7., rank: 1 },
    FourTermRow { term: "gamma", predicted: ["delta", "gamma", "gamma"], precision: 2. / 3., recall: 2. / 3., f1: 2. / 3., rank: 1 },
    FourTermRow { term: "delta", predicted: ["alpha", "alpha", "beta"], precision: 0., recall: 0., f1: 0., rank: 2 },
];
/// (5/12, 1/2, 19/42, 3/4) and buckets [2, 2, 0, 0]
pub const FOUR_TERM_MEANS: (f64, f64, f64, f64) = (5. / 12., 1. / 2., 19. / 42., 3. / 4.);
pub const FOUR_TERM_BUCKETS: [usize; 4] = [2, 2, 0, 0];
