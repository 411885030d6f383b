//! Dense tensors over the sentence space `W`, the compact-closed maps ε/η,
//! the Frobenius algebra over the fixed basis, and the evaluator that applies
//! a type reduction to a tensor product of word meanings.
//!
//! Every wire carries the same space `W` of dimension `d`, so a rank-`r`
//! tensor is stored as `d^r` row-major `f64`s. Because the basis is
//! orthonormal, ε is a trace over two wires and η is the identity matrix.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::pregroup::{self, PregroupError, PregroupType, Reduction};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TensorError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("tensor data has {found} entries, expected {expected}")]
    DataLength { expected: usize, found: usize },
    #[error("non-finite entry at position {0}")]
    NonFinite(usize),
    #[error("semantic space must have at least one basis element")]
    EmptySpace,
    #[error("duplicate basis lemma `{0}`")]
    DuplicateBasis(String),
    #[error("contraction plan: {0}")]
    Plan(String),
}

/// The distributional space `W`: an ordered list of basis lemmas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemanticSpace {
    basis: Vec<String>,
    index: HashMap<String, usize>,
}

impl SemanticSpace {
    pub fn new(basis: Vec<String>) -> Result<Self, TensorError> {
        if basis.is_empty() {
            return Err(TensorError::EmptySpace);
        }
        let mut index = HashMap::with_capacity(basis.len());
        for (i, lemma) in basis.iter().enumerate() {
            if index.insert(lemma.clone(), i).is_some() {
                return Err(TensorError::DuplicateBasis(lemma.clone()));
            }
        }
        Ok(Self { basis, index })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn index_of(&self, lemma: &str) -> Option<usize> {
        self.index.get(lemma).copied()
    }
}

/// A dense tensor with `rank` wires, each of dimension `dim`.
///
/// Word meanings are rank 1 (nouns, context vectors), rank 2 (relational
/// verbs) or rank 3 (expanded verbs). Contraction results can have any rank,
/// including 0 for a scalar.
#[derive(Debug, Clone, PartialEq)]
pub struct WordTensor {
    dim: usize,
    rank: usize,
    data: Vec<f64>,
}

impl WordTensor {
    pub fn new(dim: usize, rank: usize, data: Vec<f64>) -> Result<Self, TensorError> {
        if dim == 0 {
            return Err(TensorError::EmptySpace);
        }
        let expected = dim.pow(rank as u32);
        if data.len() != expected {
            return Err(TensorError::DataLength {
                expected,
                found: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(TensorError::NonFinite(pos));
        }
        Ok(Self { dim, rank, data })
    }

    pub fn vector(data: Vec<f64>) -> Result<Self, TensorError> {
        let dim = data.len();
        Self::new(dim, 1, data)
    }

    /// Row-major `dim × dim` matrix.
    pub fn matrix(dim: usize, data: Vec<f64>) -> Result<Self, TensorError> {
        Self::new(dim, 2, data)
    }

    pub fn zeros(dim: usize, rank: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        Self {
            dim,
            rank,
            data: vec![0.0; dim.pow(rank as u32)],
        }
    }

    pub fn scalar(value: f64) -> Self {
        // a rank-0 tensor has one entry whatever the dimension
        Self {
            dim: 1,
            rank: 0,
            data: vec![value],
        }
    }

    /// Basis vector `e_i`.
    pub fn basis_vector(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim, 1);
        v.data[i] = 1.0;
        v
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, 2);
        for i in 0..dim {
            m.data[i * dim + i] = 1.0;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn as_scalar(&self) -> Option<f64> {
        (self.rank == 0).then(|| self.data[0])
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0.0)
    }

    pub fn get(&self, index: &[usize]) -> f64 {
        self.data[self.offset(index)]
    }

    pub fn set(&mut self, index: &[usize], value: f64) {
        let off = self.offset(index);
        self.data[off] = value;
    }

    fn offset(&self, index: &[usize]) -> usize {
        assert_eq!(index.len(), self.rank, "index arity must equal rank");
        index.iter().fold(0, |acc, &i| {
            assert!(i < self.dim, "index {i} out of range for dimension {}", self.dim);
            acc * self.dim + i
        })
    }

    /// Entry `(i, j)` of a matrix.
    pub fn at(&self, i: usize, j: usize) -> f64 {
        debug_assert_eq!(self.rank, 2);
        self.data[i * self.dim + j]
    }

    pub fn scaled(&self, factor: f64) -> WordTensor {
        WordTensor {
            dim: self.dim,
            rank: self.rank,
            data: self.data.iter().map(|x| x * factor).collect(),
        }
    }

    pub fn add_assign_scaled(&mut self, other: &WordTensor, factor: f64) {
        self.assert_same_shape(other);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += factor * b;
        }
    }

    pub fn max_abs_diff(&self, other: &WordTensor) -> f64 {
        self.assert_same_shape(other);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    fn assert_same_shape(&self, other: &WordTensor) {
        assert!(
            self.dim == other.dim && self.rank == other.rank,
            "shape mismatch: {}^{} vs {}^{}",
            self.dim,
            self.rank,
            other.dim,
            other.rank
        );
    }

    fn expect_rank(&self, rank: usize) {
        assert_eq!(self.rank, rank, "expected a rank-{rank} tensor");
    }
}

impl fmt::Display for WordTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.data.iter().enumerate() {
            if i > 0 {
                f.write_str("\t")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// ε on `W ⊗ W`: `Σ c_ij ⟨w_i|w_j⟩`, i.e. the trace.
pub fn epsilon(m: &WordTensor) -> f64 {
    m.expect_rank(2);
    (0..m.dim).map(|i| m.at(i, i)).sum()
}

/// η: `1 ↦ Σ_i w_i ⊗ w_i`, the identity matrix.
pub fn eta(dim: usize) -> WordTensor {
    WordTensor::identity(dim)
}

/// Frobenius copy σ on a vector: the diagonal matrix with `v` on its diagonal.
pub fn sigma(v: &WordTensor) -> WordTensor {
    v.expect_rank(1);
    copy_wire(v, 0)
}

/// Frobenius uncopy μ on a matrix: its diagonal.
pub fn mu(m: &WordTensor) -> WordTensor {
    m.expect_rank(2);
    merge_wires(m, 0)
}

/// Counit ι: sum of the weights.
pub fn iota(v: &WordTensor) -> f64 {
    v.expect_rank(1);
    v.data.iter().sum()
}

/// Unit ζ: the all-ones vector.
pub fn zeta(dim: usize) -> WordTensor {
    WordTensor {
        dim,
        rank: 1,
        data: vec![1.0; dim],
    }
}

/// `u ⊙ v`, the Frobenius multiplication restricted to `u ⊗ v`.
pub fn pointwise(u: &WordTensor, v: &WordTensor) -> WordTensor {
    u.expect_rank(1);
    u.assert_same_shape(v);
    WordTensor {
        dim: u.dim,
        rank: 1,
        data: u.data.iter().zip(&v.data).map(|(a, b)| a * b).collect(),
    }
}

pub fn add(u: &WordTensor, v: &WordTensor) -> WordTensor {
    let mut out = u.clone();
    out.add_assign_scaled(v, 1.0);
    out
}

pub fn dot(u: &WordTensor, v: &WordTensor) -> f64 {
    u.assert_same_shape(v);
    u.data.iter().zip(&v.data).map(|(a, b)| a * b).sum()
}

pub fn norm(v: &WordTensor) -> f64 {
    dot(v, v).sqrt()
}

/// Scales to unit L2 norm. The zero vector is returned unchanged.
pub fn normalize(v: &WordTensor) -> WordTensor {
    let n = norm(v);
    if n == 0.0 {
        v.clone()
    } else {
        v.scaled(1.0 / n)
    }
}

/// `M·v`, or `Mᵀ·v` when `transposed`.
pub fn matvec(m: &WordTensor, v: &WordTensor, transposed: bool) -> Result<WordTensor, TensorError> {
    if m.rank != 2 {
        return Err(TensorError::RankMismatch {
            expected: 2,
            found: m.rank,
        });
    }
    if v.rank != 1 {
        return Err(TensorError::RankMismatch {
            expected: 1,
            found: v.rank,
        });
    }
    if m.dim != v.dim {
        return Err(TensorError::DimensionMismatch {
            expected: m.dim,
            found: v.dim,
        });
    }
    let d = m.dim;
    let mut out = vec![0.0; d];
    if transposed {
        for (i, row) in m.data.chunks_exact(d).enumerate() {
            let vi = v.data[i];
            if vi != 0.0 {
                for (o, &c) in out.iter_mut().zip(row) {
                    *o += c * vi;
                }
            }
        }
    } else {
        for (o, row) in out.iter_mut().zip(m.data.chunks_exact(d)) {
            *o = row.iter().zip(&v.data).map(|(a, b)| a * b).sum();
        }
    }
    Ok(WordTensor {
        dim: d,
        rank: 1,
        data: out,
    })
}

pub fn transpose(m: &WordTensor) -> WordTensor {
    m.expect_rank(2);
    permute(m, &[1, 0])
}

/// `u ⊗ v` as a matrix with entries `u_i·v_j`.
pub fn outer(u: &WordTensor, v: &WordTensor) -> WordTensor {
    u.expect_rank(1);
    v.expect_rank(1);
    tensor_product(u, v)
}

/// Cosine of the angle between two vectors, 0 when either is zero.
///
/// Computed as `⟨u|v⟩ / sqrt(⟨u|u⟩⟨v|v⟩)` so that `cosine(v, v)` is exactly 1.
pub fn cosine(u: &WordTensor, v: &WordTensor) -> f64 {
    let uu = dot(u, u);
    let vv = dot(v, v);
    if uu == 0.0 || vv == 0.0 {
        return 0.0;
    }
    (dot(u, v) / (uu * vv).sqrt()).clamp(-1.0, 1.0)
}

/// How a relational matrix is lifted into `W ⊗ W ⊗ W`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CopyMode {
    /// `Σ c_ij w_i ⊗ w_i ⊗ w_j`
    CopySubject,
    /// `Σ c_ij w_i ⊗ w_j ⊗ w_j`
    CopyObject,
}

/// Applies σ to the subject (row) or object (column) wire of a verb matrix.
///
/// Wire order of the result is (subject, sentence, object).
pub fn expand_verb(m: &WordTensor, mode: CopyMode) -> WordTensor {
    m.expect_rank(2);
    match mode {
        CopyMode::CopySubject => copy_wire(m, 0),
        CopyMode::CopyObject => copy_wire(m, 1),
    }
}

/// Splits `rank` axes around `axis` into (outer, inner) block sizes.
fn blocks(dim: usize, rank: usize, axis: usize) -> (usize, usize) {
    (dim.pow(axis as u32), dim.pow((rank - axis - 1) as u32))
}

/// σ on wire `axis`: the wire is duplicated, the copy inserted at `axis + 1`.
pub fn copy_wire(t: &WordTensor, axis: usize) -> WordTensor {
    assert!(axis < t.rank, "axis out of range");
    let d = t.dim;
    let (outer, inner) = blocks(d, t.rank, axis);
    let mut out = WordTensor::zeros(d, t.rank + 1);
    for o in 0..outer {
        for a in 0..d {
            let src = (o * d + a) * inner;
            let dst = ((o * d + a) * d + a) * inner;
            out.data[dst..dst + inner].copy_from_slice(&t.data[src..src + inner]);
        }
    }
    out
}

/// μ on wires `axis` and `axis + 1`: keeps the diagonal, merging them into one.
pub fn merge_wires(t: &WordTensor, axis: usize) -> WordTensor {
    assert!(axis + 1 < t.rank, "need two wires to merge");
    let d = t.dim;
    let (outer, _) = blocks(d, t.rank, axis);
    let inner = d.pow((t.rank - axis - 2) as u32);
    let mut out = WordTensor::zeros(d, t.rank - 1);
    for o in 0..outer {
        for a in 0..d {
            let src = ((o * d + a) * d + a) * inner;
            let dst = (o * d + a) * inner;
            out.data[dst..dst + inner].copy_from_slice(&t.data[src..src + inner]);
        }
    }
    out
}

/// ι on wire `axis`: sums it out.
pub fn delete_wire(t: &WordTensor, axis: usize) -> WordTensor {
    contract_vector(t, axis, &zeta(t.dim))
}

/// ζ inserted as a new wire at position `axis` (`0..=rank`).
pub fn insert_unit_wire(t: &WordTensor, axis: usize) -> WordTensor {
    assert!(axis <= t.rank, "axis out of range");
    let d = t.dim;
    let outer = d.pow(axis as u32);
    let inner = d.pow((t.rank - axis) as u32);
    let mut out = WordTensor::zeros(d, t.rank + 1);
    for o in 0..outer {
        for a in 0..d {
            let src = o * inner;
            let dst = (o * d + a) * inner;
            out.data[dst..dst + inner].copy_from_slice(&t.data[src..src + inner]);
        }
    }
    out
}

/// Applies ε between wire `axis` of `t` and the vector `v`.
pub fn contract_vector(t: &WordTensor, axis: usize, v: &WordTensor) -> WordTensor {
    assert!(axis < t.rank, "axis out of range");
    v.expect_rank(1);
    assert_eq!(t.dim, v.dim, "dimension mismatch");
    let d = t.dim;
    let (outer, inner) = blocks(d, t.rank, axis);
    let mut out = vec![0.0; outer * inner];
    for o in 0..outer {
        let dst = &mut out[o * inner..(o + 1) * inner];
        for (a, &va) in v.data.iter().enumerate() {
            let src = &t.data[(o * d + a) * inner..(o * d + a + 1) * inner];
            for (x, &y) in dst.iter_mut().zip(src) {
                *x += y * va;
            }
        }
    }
    WordTensor {
        dim: d,
        rank: t.rank - 1,
        data: out,
    }
}

/// Applies ε to two wires of the same tensor.
pub fn trace_wires(t: &WordTensor, a: usize, b: usize) -> WordTensor {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    assert!(a != b && b < t.rank, "need two distinct wires");
    let d = t.dim;
    let p = d.pow(a as u32);
    let q = d.pow((b - a - 1) as u32);
    let r = d.pow((t.rank - b - 1) as u32);
    let mut out = vec![0.0; p * q * r];
    for ip in 0..p {
        for iq in 0..q {
            let dst = &mut out[(ip * q + iq) * r..(ip * q + iq + 1) * r];
            for x in 0..d {
                let base = ((((ip * d + x) * q + iq) * d) + x) * r;
                for (o, &y) in dst.iter_mut().zip(&t.data[base..base + r]) {
                    *o += y;
                }
            }
        }
    }
    WordTensor {
        dim: d,
        rank: t.rank - 2,
        data: out,
    }
}

pub fn tensor_product(a: &WordTensor, b: &WordTensor) -> WordTensor {
    let dim = match (a.rank, b.rank) {
        (0, _) => b.dim,
        (_, 0) => a.dim,
        _ => {
            assert_eq!(a.dim, b.dim, "dimension mismatch");
            a.dim
        }
    };
    let mut data = Vec::with_capacity(a.data.len() * b.data.len());
    for &x in &a.data {
        data.extend(b.data.iter().map(|&y| x * y));
    }
    WordTensor {
        dim,
        rank: a.rank + b.rank,
        data,
    }
}

/// Reorders wires: wire `k` of the result is wire `perm[k]` of `t`.
pub fn permute(t: &WordTensor, perm: &[usize]) -> WordTensor {
    assert_eq!(perm.len(), t.rank, "permutation arity must equal rank");
    let d = t.dim;
    let r = t.rank;
    let mut src_strides = vec![1usize; r];
    for k in (0..r.saturating_sub(1)).rev() {
        src_strides[k] = src_strides[k + 1] * d;
    }
    let strides: Vec<usize> = perm.iter().map(|&p| src_strides[p]).collect();
    let mut out = Vec::with_capacity(t.data.len());
    let mut idx = vec![0usize; r];
    let mut src = 0usize;
    for _ in 0..t.data.len() {
        out.push(t.data[src]);
        // odometer over output indices, last fastest
        for k in (0..r).rev() {
            idx[k] += 1;
            src += strides[k];
            if idx[k] < d {
                break;
            }
            src -= strides[k] * d;
            idx[k] = 0;
        }
    }
    WordTensor {
        dim: d,
        rank: r,
        data: out,
    }
}

/// Contracts wires `a_axes[k]` of `a` with `b_axes[k]` of `b`.
/// Result wires: remaining wires of `a` in order, then remaining wires of `b`.
fn contract_pair(a: &WordTensor, a_axes: &[usize], b: &WordTensor, b_axes: &[usize]) -> WordTensor {
    debug_assert_eq!(a_axes.len(), b_axes.len());
    if a_axes.is_empty() {
        return tensor_product(a, b);
    }
    let d = a.dim.max(b.dim);
    let a_rest: Vec<usize> = (0..a.rank).filter(|i| !a_axes.contains(i)).collect();
    let b_rest: Vec<usize> = (0..b.rank).filter(|i| !b_axes.contains(i)).collect();
    let a_perm: Vec<usize> = a_rest.iter().chain(a_axes).copied().collect();
    let b_perm: Vec<usize> = b_axes.iter().chain(&b_rest).copied().collect();
    let ap = permute(a, &a_perm);
    let bp = permute(b, &b_perm);
    let k = d.pow(a_axes.len() as u32);
    let rows = d.pow(a_rest.len() as u32);
    let cols = d.pow(b_rest.len() as u32);
    let mut out = vec![0.0; rows * cols];
    for (i, arow) in ap.data.chunks_exact(k).enumerate() {
        let orow = &mut out[i * cols..(i + 1) * cols];
        for (x, &ax) in arow.iter().enumerate() {
            if ax == 0.0 {
                continue;
            }
            for (o, &bv) in orow.iter_mut().zip(&bp.data[x * cols..(x + 1) * cols]) {
                *o += ax * bv;
            }
        }
    }
    WordTensor {
        dim: d,
        rank: a_rest.len() + b_rest.len(),
        data: out,
    }
}

/// A type reduction together with the number of wires each word contributes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionPlan {
    reduction: Reduction,
    word_ranks: Vec<usize>,
}

impl ContractionPlan {
    pub fn new(reduction: Reduction, word_ranks: Vec<usize>) -> Result<Self, TensorError> {
        let wires: usize = word_ranks.iter().sum();
        if wires != reduction.wire_count() {
            return Err(TensorError::Plan(format!(
                "words carry {wires} wires but the reduction covers {}",
                reduction.wire_count()
            )));
        }
        // re-validate in case the reduction was assembled by hand
        let reduction = Reduction::new(reduction.cups, reduction.survivors, wires)
            .map_err(|e| TensorError::Plan(e.to_string()))?;
        Ok(Self {
            reduction,
            word_ranks,
        })
    }

    /// Reduces `types` and takes one wire per simple type.
    pub fn from_types(types: &[PregroupType]) -> Result<Self, PregroupError> {
        let reduction = pregroup::reduce(types)?;
        let word_ranks = types.iter().map(PregroupType::len).collect();
        Ok(Self {
            reduction,
            word_ranks,
        })
    }

    pub fn reduction(&self) -> &Reduction {
        &self.reduction
    }

    pub fn word_ranks(&self) -> &[usize] {
        &self.word_ranks
    }
}

/// Applies the reduction's ε and identity maps to `w_1 ⊗ … ⊗ w_n`.
///
/// Words are folded in left to right; every cup is contracted as soon as both
/// of its wires are present, so the intermediate rank stays small. Surviving
/// wires become the output wires in their original order.
pub fn eval_contraction(
    tensors: &[WordTensor],
    plan: &ContractionPlan,
) -> Result<WordTensor, TensorError> {
    if tensors.len() != plan.word_ranks.len() {
        return Err(TensorError::Plan(format!(
            "plan expects {} words, got {}",
            plan.word_ranks.len(),
            tensors.len()
        )));
    }
    let mut dim = None;
    for (i, (t, &r)) in tensors.iter().zip(&plan.word_ranks).enumerate() {
        if t.rank != r {
            return Err(TensorError::Plan(format!(
                "word {i} has rank {} but its type has {r} wires",
                t.rank
            )));
        }
        if r > 0 {
            match dim {
                None => dim = Some(t.dim),
                Some(d) if d != t.dim => {
                    return Err(TensorError::Plan(format!(
                        "word {i} lives in dimension {} but earlier words in {d}",
                        t.dim
                    )))
                }
                _ => {}
            }
        }
    }

    let mut acc = WordTensor::scalar(1.0);
    let mut open: Vec<usize> = Vec::new();
    let mut start = 0usize;
    for (t, &r) in tensors.iter().zip(&plan.word_ranks) {
        let range = start..start + r;
        let mut a_axes = Vec::new();
        let mut b_axes = Vec::new();
        let mut internal = Vec::new();
        for &(i, j) in &plan.reduction.cups {
            if !range.contains(&j) {
                continue;
            }
            if range.contains(&i) {
                internal.push((i, j));
            } else {
                a_axes.push(open.iter().position(|&w| w == i).expect("left end is open"));
                b_axes.push(j - start);
            }
        }
        acc = contract_pair(&acc, &a_axes, t, &b_axes);
        open.retain(|w| !plan.reduction.cups.iter().any(|&(i, j)| *w == i && range.contains(&j)));
        open.extend(range.clone().filter(|j| !b_axes.contains(&(j - start))));
        for (i, j) in internal {
            let pi = open.iter().position(|&w| w == i).expect("open wire");
            let pj = open.iter().position(|&w| w == j).expect("open wire");
            acc = trace_wires(&acc, pi, pj);
            open.retain(|&w| w != i && w != j);
        }
        start += r;
    }
    debug_assert_eq!(open, plan.reduction.survivors);
    Ok(acc)
}
