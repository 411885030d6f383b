//! Sentence and phrase vectors for every composition model.
//!
//! Each model is the closed form of a Frobenius construction substituted into
//! the transitive (or intransitive, adjective-noun, verb-phrase) reduction:
//!
//! | model     | verb representation        | transitive sentence            |
//! |-----------|----------------------------|--------------------------------|
//! | `CpSbj`   | relational matrix `M`      | `sbj ⊙ (M × obj)`              |
//! | `CpObj`   | relational matrix `M`      | `obj ⊙ (Mᵀ × sbj)`             |
//! | `MixCpDl` | relational matrix `M`      | `sbj ⊙ μ(M) ⊙ obj`             |
//! | `Multp`   | context vector `v`         | `sbj ⊙ v ⊙ obj`                |
//! | `Kron`    | context vector `v`         | `sbj ⊙ v ⊙ v ⊙ obj`            |
//! | `Addtv`   | context vector `v`         | `sbj + v + obj`                |
//!
//! `Reltn` builds a verb from the sum of its objects and only composes verb
//! phrases (and the adjective-noun phrases inside definitions).
//! All outputs are L2-normalised; a zero vector stays zero.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::lexicon::{Lexicon, Role};
use crate::tensor::{self, add, cosine, matvec, mu, normalize, pointwise, TensorError, WordTensor};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComposeError {
    #[error("{model} needs a rank-{expected} verb representation, got rank {found}")]
    VerbRank {
        model: CompositionModel,
        expected: usize,
        found: usize,
    },
    #[error("{model} does not compose {kind} phrases")]
    Unsupported {
        model: CompositionModel,
        kind: PhraseKind,
    },
    #[error("{kind} phrase needs {expected} lemmas, got {found}")]
    Slots {
        kind: PhraseKind,
        expected: usize,
        found: usize,
    },
    #[error("unknown composition model `{0}`")]
    UnknownModel(String),
    #[error("unknown phrase kind `{0}`")]
    UnknownKind(String),
    #[error("cannot infer the phrase kind of a {0}-lemma phrase; pass it explicitly")]
    AmbiguousKind(usize),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CompositionModel {
    Addtv,
    Multp,
    Kron,
    MixCpDl,
    CpSbj,
    CpObj,
    Reltn,
}

impl CompositionModel {
    pub const ALL: [CompositionModel; 7] = [
        CompositionModel::Addtv,
        CompositionModel::Multp,
        CompositionModel::Kron,
        CompositionModel::MixCpDl,
        CompositionModel::CpSbj,
        CompositionModel::CpObj,
        CompositionModel::Reltn,
    ];

    /// Models that read the verb's relational matrix.
    pub fn is_relational(self) -> bool {
        matches!(
            self,
            CompositionModel::MixCpDl | CompositionModel::CpSbj | CompositionModel::CpObj
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            CompositionModel::Addtv => "Addtv",
            CompositionModel::Multp => "Multp",
            CompositionModel::Kron => "Kron",
            CompositionModel::MixCpDl => "MixCpDl",
            CompositionModel::CpSbj => "CpSbj",
            CompositionModel::CpObj => "CpObj",
            CompositionModel::Reltn => "Reltn",
        }
    }
}

impl fmt::Display for CompositionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CompositionModel {
    type Err = ComposeError;

    /// Case-insensitive model name.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CompositionModel::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| ComposeError::UnknownModel(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhraseKind {
    /// subject, verb, object
    Transitive,
    /// subject, verb
    Intransitive,
    /// adjective, noun
    AdjectiveNoun,
    /// verb, object
    VerbPhrase,
}

impl PhraseKind {
    pub fn slots(self) -> usize {
        match self {
            PhraseKind::Transitive => 3,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PhraseKind::Transitive => "transitive",
            PhraseKind::Intransitive => "intransitive",
            PhraseKind::AdjectiveNoun => "adjective-noun",
            PhraseKind::VerbPhrase => "verb-phrase",
        }
    }
}

impl fmt::Display for PhraseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PhraseKind {
    type Err = ComposeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "transitive" => Ok(PhraseKind::Transitive),
            "intransitive" => Ok(PhraseKind::Intransitive),
            "adjective-noun" | "adj-noun" => Ok(PhraseKind::AdjectiveNoun),
            "verb-phrase" => Ok(PhraseKind::VerbPhrase),
            _ => Err(ComposeError::UnknownKind(s.to_string())),
        }
    }
}

/// A phrase with one lemma per slot, in surface order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PhraseSpec {
    kind: PhraseKind,
    lemmas: Vec<String>,
}

impl PhraseSpec {
    pub fn new<S: Into<String>>(kind: PhraseKind, lemmas: Vec<S>) -> Result<Self, ComposeError> {
        let lemmas: Vec<String> = lemmas.into_iter().map(Into::into).collect();
        if lemmas.len() != kind.slots() {
            return Err(ComposeError::Slots {
                kind,
                expected: kind.slots(),
                found: lemmas.len(),
            });
        }
        Ok(Self { kind, lemmas })
    }

    pub fn transitive(sbj: &str, verb: &str, obj: &str) -> Self {
        Self::new(PhraseKind::Transitive, vec![sbj, verb, obj]).expect("three slots")
    }

    pub fn intransitive(sbj: &str, verb: &str) -> Self {
        Self::new(PhraseKind::Intransitive, vec![sbj, verb]).expect("two slots")
    }

    /// Splits whitespace-separated lemmas. Without an explicit kind, three
    /// lemmas are a transitive sentence and two an intransitive one.
    pub fn parse(kind: Option<PhraseKind>, text: &str) -> Result<Self, ComposeError> {
        let lemmas: Vec<&str> = text.split_whitespace().collect();
        let kind = match kind {
            Some(k) => k,
            None => match lemmas.len() {
                3 => PhraseKind::Transitive,
                2 => PhraseKind::Intransitive,
                n => return Err(ComposeError::AmbiguousKind(n)),
            },
        };
        Self::new(kind, lemmas)
    }

    pub fn kind(&self) -> PhraseKind {
        self.kind
    }

    pub fn lemmas(&self) -> &[String] {
        &self.lemmas
    }
}

/// The transitive closed form before normalisation.
pub fn raw_transitive(
    model: CompositionModel,
    sbj: &WordTensor,
    verb: &WordTensor,
    obj: &WordTensor,
) -> Result<WordTensor, ComposeError> {
    let need = |expected: usize| -> Result<(), ComposeError> {
        if verb.rank() == expected {
            Ok(())
        } else {
            Err(ComposeError::VerbRank {
                model,
                expected,
                found: verb.rank(),
            })
        }
    };
    for x in [sbj, obj] {
        if x.rank() != 1 {
            return Err(TensorError::RankMismatch {
                expected: 1,
                found: x.rank(),
            }
            .into());
        }
        if x.dim() != verb.dim() {
            return Err(TensorError::DimensionMismatch {
                expected: verb.dim(),
                found: x.dim(),
            }
            .into());
        }
    }
    use CompositionModel::*;
    let out = match model {
        CpSbj => {
            need(2)?;
            pointwise(sbj, &matvec(verb, obj, false)?)
        }
        CpObj => {
            need(2)?;
            pointwise(obj, &matvec(verb, sbj, true)?)
        }
        MixCpDl => {
            need(2)?;
            pointwise(&pointwise(sbj, &mu(verb)), obj)
        }
        Multp => {
            need(1)?;
            pointwise(&pointwise(sbj, verb), obj)
        }
        Kron => {
            need(1)?;
            pointwise(&pointwise(&pointwise(sbj, verb), verb), obj)
        }
        Addtv => {
            need(1)?;
            add(&add(sbj, verb), obj)
        }
        Reltn => {
            return Err(ComposeError::Unsupported {
                model,
                kind: PhraseKind::Transitive,
            })
        }
    };
    Ok(out)
}

/// Meaning of `sbj verb obj`, L2-normalised.
pub fn compose_transitive(
    model: CompositionModel,
    sbj: &WordTensor,
    verb: &WordTensor,
    obj: &WordTensor,
) -> Result<WordTensor, ComposeError> {
    raw_transitive(model, sbj, verb, obj).map(|v| normalize(&v))
}

/// σ-encoded intransitive verb applied to its subject: `sbj ⊙ verb`, normalised.
pub fn compose_intransitive(sbj: &WordTensor, verb_vec: &WordTensor) -> WordTensor {
    normalize(&pointwise(sbj, verb_vec))
}

/// σ-encoded adjective applied to its noun: `adj ⊙ noun`, normalised.
pub fn compose_adj_noun(adj_vec: &WordTensor, noun: &WordTensor) -> WordTensor {
    normalize(&pointwise(adj_vec, noun))
}

/// Verb phrase without a subject: `verb ⊙ obj` (or `verb + obj` for `Addtv`), normalised.
pub fn compose_verb_phrase(
    model: CompositionModel,
    verb_rep: &WordTensor,
    obj: &WordTensor,
) -> Result<WordTensor, ComposeError> {
    match model {
        CompositionModel::Reltn | CompositionModel::Multp => {
            Ok(normalize(&pointwise(verb_rep, obj)))
        }
        CompositionModel::Addtv => Ok(normalize(&add(verb_rep, obj))),
        _ => Err(ComposeError::Unsupported {
            model,
            kind: PhraseKind::VerbPhrase,
        }),
    }
}

pub fn sentence_similarity(a: &WordTensor, b: &WordTensor) -> f64 {
    cosine(a, b)
}

/// A composed vector and the lemmas that had no representation (treated as zero).
#[derive(Debug, Clone, PartialEq)]
pub struct Composed {
    pub vector: WordTensor,
    pub missing: Vec<String>,
}

/// Looks word representations up in a lexicon and composes phrases.
#[derive(Debug, Clone, Copy)]
pub struct Composer<'a> {
    lexicon: &'a Lexicon,
}

impl<'a> Composer<'a> {
    pub fn new(lexicon: &'a Lexicon) -> Self {
        Self { lexicon }
    }

    pub fn lexicon(&self) -> &'a Lexicon {
        self.lexicon
    }

    fn lookup(&self, role: Role, lemma: &str, missing: &mut Vec<String>) -> WordTensor {
        match self.lexicon.get(role, lemma) {
            Some(t) => t.clone(),
            None => {
                if !missing.iter().any(|m| m == lemma) {
                    missing.push(lemma.to_string());
                }
                WordTensor::zeros(self.lexicon.dim(), role.rank())
            }
        }
    }

    /// Context vector of a single word, zero when absent.
    pub fn word(&self, lemma: &str) -> Composed {
        let mut missing = Vec::new();
        let vector = self.lookup(Role::Context, lemma, &mut missing);
        Composed { vector, missing }
    }

    /// Role of the predicate word (verb or adjective) under `model`.
    fn predicate_role(model: CompositionModel, kind: PhraseKind) -> Result<Role, ComposeError> {
        use CompositionModel::*;
        use PhraseKind::*;
        let role = match (kind, model) {
            (Transitive, m) if m.is_relational() => Role::RelationalVerb,
            (Transitive, Multp | Kron | Addtv) => Role::Context,
            (Intransitive, m) if m.is_relational() => Role::IntransitiveVerb,
            (Intransitive, Multp | Kron | Addtv) => Role::Context,
            (AdjectiveNoun, m) if m.is_relational() || m == Reltn => Role::Adjective,
            (AdjectiveNoun, Multp | Kron | Addtv) => Role::Context,
            (VerbPhrase, Reltn) => Role::ReltnVerb,
            (VerbPhrase, Multp | Kron | Addtv) => Role::Context,
            _ => return Err(ComposeError::Unsupported { model, kind }),
        };
        Ok(role)
    }

    /// Applies a one-argument predicate vector to its argument.
    fn apply_unary(model: CompositionModel, pred: &WordTensor, arg: &WordTensor) -> WordTensor {
        match model {
            CompositionModel::Addtv => normalize(&add(pred, arg)),
            CompositionModel::Kron => normalize(&pointwise(&pointwise(pred, pred), arg)),
            _ => normalize(&pointwise(pred, arg)),
        }
    }

    pub fn compose(&self, model: CompositionModel, phrase: &PhraseSpec) -> Result<Composed, ComposeError> {
        let role = Self::predicate_role(model, phrase.kind)?;
        let mut missing = Vec::new();
        let l = &phrase.lemmas;
        let vector = match phrase.kind {
            PhraseKind::Transitive => {
                let sbj = self.lookup(Role::Context, &l[0], &mut missing);
                let verb = self.lookup(role, &l[1], &mut missing);
                let obj = self.lookup(Role::Context, &l[2], &mut missing);
                compose_transitive(model, &sbj, &verb, &obj)?
            }
            PhraseKind::Intransitive => {
                let sbj = self.lookup(Role::Context, &l[0], &mut missing);
                let verb = self.lookup(role, &l[1], &mut missing);
                Self::apply_unary(model, &verb, &sbj)
            }
            PhraseKind::AdjectiveNoun => {
                let adj = self.lookup(role, &l[0], &mut missing);
                let noun = self.lookup(Role::Context, &l[1], &mut missing);
                Self::apply_unary(model, &adj, &noun)
            }
            PhraseKind::VerbPhrase => {
                let verb = self.lookup(role, &l[0], &mut missing);
                let obj = self.lookup(Role::Context, &l[1], &mut missing);
                Self::apply_unary(model, &verb, &obj)
            }
        };
        Ok(Composed { vector, missing })
    }

    /// A noun phrase `mod_1 … mod_k head`: modifiers apply right to left as
    /// adjectives. Modifiers without a representation are dropped.
    pub fn compose_noun_phrase(
        &self,
        model: CompositionModel,
        lemmas: &[&str],
    ) -> Result<Composed, ComposeError> {
        let role = Self::predicate_role(model, PhraseKind::AdjectiveNoun)?;
        let Some((head, modifiers)) = lemmas.split_last() else {
            return Ok(Composed {
                vector: WordTensor::zeros(self.lexicon.dim(), 1),
                missing: Vec::new(),
            });
        };
        let mut missing = Vec::new();
        let mut acc = normalize(&self.lookup(Role::Context, head, &mut missing));
        for m in modifiers.iter().rev() {
            match self.lexicon.get(role, m) {
                Some(adj) => acc = Self::apply_unary(model, adj, &acc),
                None => missing.push((*m).to_string()),
            }
        }
        Ok(Composed {
            vector: acc,
            missing,
        })
    }

    /// A verb phrase `verb arg_1 … arg_k`: the arguments form the object noun
    /// phrase. A verb without a representation is dropped, leaving the object.
    pub fn compose_verb_phrase_seq(
        &self,
        model: CompositionModel,
        lemmas: &[&str],
    ) -> Result<Composed, ComposeError> {
        let role = Self::predicate_role(model, PhraseKind::VerbPhrase)?;
        let Some((verb, rest)) = lemmas.split_first() else {
            return Ok(Composed {
                vector: WordTensor::zeros(self.lexicon.dim(), 1),
                missing: Vec::new(),
            });
        };
        let verb_rep = self.lexicon.get(role, verb);
        if rest.is_empty() {
            let mut missing = Vec::new();
            let vector = match verb_rep {
                Some(v) => normalize(v),
                None => {
                    missing.push((*verb).to_string());
                    WordTensor::zeros(self.lexicon.dim(), 1)
                }
            };
            return Ok(Composed { vector, missing });
        }
        let mut obj = self.compose_noun_phrase(model, rest)?;
        match verb_rep {
            Some(v) => obj.vector = Self::apply_unary(model, v, &obj.vector),
            None => obj.missing.insert(0, (*verb).to_string()),
        }
        Ok(obj)
    }
}

/// `true` when `a` and `b` agree up to a positive scale factor, within `tol`
/// relative error after normalisation.
pub fn same_direction(a: &WordTensor, b: &WordTensor, tol: f64) -> bool {
    let (na, nb) = (tensor::norm(a), tensor::norm(b));
    if na == 0.0 || nb == 0.0 {
        return na == nb;
    }
    normalize(a).max_abs_diff(&normalize(b)) <= tol
}
