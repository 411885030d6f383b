//! Categorical compositional distributional semantics.
//!
//! Word meanings are vectors and tensors over a distributional space `W`;
//! sentence meanings are obtained by applying the pregroup type reduction of
//! the sentence, read as a tensor of ε and identity maps, to the tensor
//! product of its word meanings. Relational words built from corpus data live
//! one tensor rank too low, so the Frobenius algebra over the basis of `W`
//! (copy σ, uncopy μ, delete ι, unit ζ) lifts them into the right space. The
//! resulting closed forms never materialise rank-3 tensors.
//!
//! - [`pregroup`]: pregroup types, type dictionary, type reduction.
//! - [`tensor`]: dense tensors, ε/η, the Frobenius maps and [`tensor::eval_contraction`].
//! - [`lexicon`]: basis selection, co-occurrence counting, probability-ratio
//!   weighting, relational tensors and the lexicon file format.
//! - [`compose`]: the composition models (`Addtv`, `Multp`, `Kron`, `MixCpDl`,
//!   `CpSbj`, `CpObj`, `Reltn`).
//! - [`eval`]: verb disambiguation, transitive/intransitive comparison and
//!   definition classification.
//! - [`synthetic`]: a seeded corpus generator with known verb senses.

pub mod compose;
pub mod eval;
pub mod lexicon;
pub mod pregroup;
pub mod synthetic;
pub mod tensor;

pub use compose::{CompositionModel, Composer, PhraseKind, PhraseSpec};
pub use lexicon::{Lexicon, Role};
pub use pregroup::{PregroupType, Reduction, TypeDictionary};
pub use tensor::{SemanticSpace, WordTensor};
