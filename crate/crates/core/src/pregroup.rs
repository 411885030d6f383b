//! Free pregroup types over the basic types `n` and `s`, the type dictionary,
//! and type reduction.
//!
//! A [`PregroupType`] is a product of [`SimpleType`]s, each a basic type with
//! an integer adjoint order (`-1` is `x^l`, `+1` is `x^r`, `+2` is `x^rr`, ...).
//! Reducing a sequence of word types contracts adjacent pairs `x^(z) x^(z+1)`
//! (the ε maps) until no contraction is possible. The resulting [`Reduction`]
//! records the cups and the surviving wires, which is exactly the shape of the
//! linear map that [`crate::tensor::eval_contraction`] applies to word tensors.

use std::collections::BTreeMap;
use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PregroupError {
    #[error("invalid simple type `{0}`")]
    InvalidSimpleType(String),
    #[error("empty type")]
    EmptyType,
    #[error("line {line}: {message}")]
    Dictionary { line: usize, message: String },
    #[error("lemma `{0}` is not in the type dictionary")]
    UnknownLemma(String),
    #[error("cannot reduce an empty sequence of types")]
    EmptySequence,
    #[error("invalid reduction: {0}")]
    InvalidReduction(String),
    #[error(transparent)]
    Io(#[from] IoError),
}

/// `std::io::Error` wrapper so that [`PregroupError`] stays `PartialEq`.
#[derive(Debug, Error)]
#[error("{0}")]
pub struct IoError(#[from] pub std::io::Error);

impl PartialEq for IoError {
    fn eq(&self, other: &Self) -> bool {
        self.0.kind() == other.0.kind()
    }
}

impl Eq for IoError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasicType {
    N,
    S,
}

impl fmt::Display for BasicType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BasicType::N => "n",
            BasicType::S => "s",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

/// A basic type together with its adjoint order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimpleType {
    pub base: BasicType,
    pub adjoint_order: i32,
}

impl SimpleType {
    pub const fn new(base: BasicType, adjoint_order: i32) -> Self {
        Self {
            base,
            adjoint_order,
        }
    }

    pub const fn n() -> Self {
        Self::new(BasicType::N, 0)
    }

    pub const fn s() -> Self {
        Self::new(BasicType::S, 0)
    }

    pub const fn left(self) -> Self {
        Self::new(self.base, self.adjoint_order - 1)
    }

    pub const fn right(self) -> Self {
        Self::new(self.base, self.adjoint_order + 1)
    }

    /// True when `self · other ≤ 1`, i.e. `other` is the right adjoint of `self`.
    pub fn contracts_with(&self, other: &SimpleType) -> bool {
        self.base == other.base && self.adjoint_order + 1 == other.adjoint_order
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base)?;
        let z = self.adjoint_order;
        if z != 0 {
            let mark = if z > 0 { "r" } else { "l" };
            write!(f, ".{}", mark.repeat(z.unsigned_abs() as usize))?;
        }
        Ok(())
    }
}

impl FromStr for SimpleType {
    type Err = PregroupError;

    /// Compact notation: `n`, `s`, `n.r`, `n.l`, `s.rr`, `n.ll`, ...
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PregroupError::InvalidSimpleType(s.to_string());
        let (base, suffix) = match s.split_once('.') {
            Some((b, suf)) => (b, Some(suf)),
            None => (s, None),
        };
        let base = match base {
            "n" => BasicType::N,
            "s" => BasicType::S,
            _ => return Err(bad()),
        };
        let adjoint_order = match suffix {
            None => 0,
            Some(suf) if !suf.is_empty() && suf.bytes().all(|b| b == b'r') => suf.len() as i32,
            Some(suf) if !suf.is_empty() && suf.bytes().all(|b| b == b'l') => -(suf.len() as i32),
            Some(_) => return Err(bad()),
        };
        Ok(SimpleType::new(base, adjoint_order))
    }
}

/// A product of simple types. The empty product is the monoid unit.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PregroupType {
    pub simples: Vec<SimpleType>,
}

impl PregroupType {
    pub fn new(simples: Vec<SimpleType>) -> Self {
        Self { simples }
    }

    pub fn unit() -> Self {
        Self::default()
    }

    pub fn noun() -> Self {
        Self::new(vec![SimpleType::n()])
    }

    pub fn sentence() -> Self {
        Self::new(vec![SimpleType::s()])
    }

    /// `n·n^l`
    pub fn adjective() -> Self {
        Self::new(vec![SimpleType::n(), SimpleType::n().left()])
    }

    /// `n^r·s`
    pub fn intransitive_verb() -> Self {
        Self::new(vec![SimpleType::n().right(), SimpleType::s()])
    }

    /// `n^r·s·n^l`
    pub fn transitive_verb() -> Self {
        Self::new(vec![
            SimpleType::n().right(),
            SimpleType::s(),
            SimpleType::n().left(),
        ])
    }

    pub fn len(&self) -> usize {
        self.simples.len()
    }

    pub fn is_unit(&self) -> bool {
        self.simples.is_empty()
    }

    /// Monoid product.
    pub fn concat(&self, other: &PregroupType) -> PregroupType {
        let mut simples = self.simples.clone();
        simples.extend_from_slice(&other.simples);
        PregroupType { simples }
    }

    /// `(a·b)^r = b^r·a^r` and `(a·b)^l = b^l·a^l`.
    pub fn adjoint(&self, side: Side) -> PregroupType {
        let simples = self
            .simples
            .iter()
            .rev()
            .map(|t| match side {
                Side::Left => t.left(),
                Side::Right => t.right(),
            })
            .collect();
        PregroupType { simples }
    }
}

impl fmt::Display for PregroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.simples.is_empty() {
            return f.write_str("1");
        }
        for (i, t) in self.simples.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for PregroupType {
    type Err = PregroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "1" {
            return Ok(PregroupType::unit());
        }
        let simples = s
            .split_whitespace()
            .map(SimpleType::from_str)
            .collect::<Result<Vec<_>, _>>()?;
        if simples.is_empty() {
            return Err(PregroupError::EmptyType);
        }
        Ok(PregroupType { simples })
    }
}

/// Lemma to candidate types, in insertion order per lemma.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TypeDictionary {
    entries: BTreeMap<String, Vec<PregroupType>>,
}

impl TypeDictionary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a type for `lemma`; duplicates are ignored.
    pub fn insert(&mut self, lemma: impl Into<String>, ty: PregroupType) {
        let types = self.entries.entry(lemma.into()).or_default();
        if !types.contains(&ty) {
            types.push(ty);
        }
    }

    pub fn lookup(&self, lemma: &str) -> Option<&[PregroupType]> {
        self.entries.get(lemma).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[PregroupType])> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    /// Reads `lemma<TAB>type` rows. Blank lines and `#` comments are skipped.
    pub fn from_tsv<R: BufRead>(reader: R) -> Result<Self, PregroupError> {
        let mut dict = TypeDictionary::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line.map_err(IoError)?;
            let lineno = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (lemma, ty) = line.split_once('\t').ok_or(PregroupError::Dictionary {
                line: lineno,
                message: "expected `lemma<TAB>type`".into(),
            })?;
            let ty = ty.parse::<PregroupType>().map_err(|e| PregroupError::Dictionary {
                line: lineno,
                message: e.to_string(),
            })?;
            dict.insert(lemma.trim(), ty);
        }
        Ok(dict)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (lemma, types) in &self.entries {
            for ty in types {
                out.push_str(&format!("{lemma}\t{ty}\n"));
            }
        }
        out
    }
}

/// Matched cups and surviving positions over the flattened simple-type sequence.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Reduction {
    pub cups: Vec<(usize, usize)>,
    pub survivors: Vec<usize>,
}

impl Reduction {
    /// Builds a reduction over `wires` positions, checking that cups are
    /// well-formed, disjoint and non-crossing, and that cups and survivors
    /// partition `0..wires`.
    pub fn new(
        cups: Vec<(usize, usize)>,
        survivors: Vec<usize>,
        wires: usize,
    ) -> Result<Self, PregroupError> {
        let invalid = PregroupError::InvalidReduction;
        let mut seen = vec![false; wires];
        let mut mark = |i: usize| -> Result<(), PregroupError> {
            if i >= wires {
                return Err(invalid(format!("index {i} out of range for {wires} wires")));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(invalid(format!("index {i} used twice")));
            }
            Ok(())
        };
        for &(i, j) in &cups {
            if i >= j {
                return Err(invalid(format!("cup ({i}, {j}) is not ordered")));
            }
            mark(i)?;
            mark(j)?;
        }
        for &s in &survivors {
            mark(s)?;
        }
        if let Some(missing) = seen.iter().position(|&b| !b) {
            return Err(invalid(format!("index {missing} is neither cupped nor surviving")));
        }
        if survivors.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("survivors are not in increasing order".into()));
        }
        let r = Reduction { cups, survivors };
        if !r.is_planar() {
            return Err(invalid("cups cross".into()));
        }
        if r
            .cups
            .iter()
            .any(|&(i, j)| r.survivors.iter().any(|&s| i < s && s < j))
        {
            return Err(invalid("a survivor sits under a cup".into()));
        }
        Ok(r)
    }

    pub fn wire_count(&self) -> usize {
        self.cups.len() * 2 + self.survivors.len()
    }

    pub fn is_planar(&self) -> bool {
        self.cups.iter().all(|&(i, j)| {
            self.cups
                .iter()
                .all(|&(k, l)| !(i < k && k < j && j < l) && !(k < i && i < l && l < j))
        })
    }
}

/// Concatenates the simples of all word types.
pub fn flatten(types: &[PregroupType]) -> Vec<SimpleType> {
    types.iter().flat_map(|t| t.simples.iter().copied()).collect()
}

/// Reduces a sequence of word types.
///
/// Returns a reduction with the fewest possible survivors. Among those, the
/// survivor index list is the lexicographically smallest one. Runs an
/// interval dynamic program in `O(n³)` over the flattened simples.
pub fn reduce(types: &[PregroupType]) -> Result<Reduction, PregroupError> {
    if types.is_empty() {
        return Err(PregroupError::EmptySequence);
    }
    Ok(reduce_simples(&flatten(types)))
}

/// [`reduce`] on an already flattened sequence.
pub fn reduce_simples(simples: &[SimpleType]) -> Reduction {
    let n = simples.len();
    // partner[i][j]: for the half-open span i..j, the partner m of i in a full
    // contraction of the span, if one exists. Spans of length 0 are trivially full.
    let mut full = vec![vec![false; n + 1]; n + 1];
    let mut partner = vec![vec![usize::MAX; n + 1]; n + 1];
    for i in 0..=n {
        full[i][i] = true;
    }
    for len in (2..=n).step_by(2) {
        for i in 0..=n - len {
            let j = i + len;
            // i pairs with m, i+1..m is full, m+1..j is full
            for m in (i + 1..j).step_by(2) {
                if simples[i].contracts_with(&simples[m]) && full[i + 1][m] && full[m + 1][j] {
                    full[i][j] = true;
                    partner[i][j] = m;
                    break;
                }
            }
        }
    }

    // best[i]: fewest survivors for the suffix i..n with the lexicographically
    // smallest survivor list, plus the choice made at i.
    #[derive(Clone)]
    enum Step {
        Survive,
        Block(usize),
    }
    let mut best: Vec<(Vec<usize>, Step)> = vec![(Vec::new(), Step::Survive); n + 1];
    for i in (0..n).rev() {
        let mut cand = Vec::with_capacity(best[i + 1].0.len() + 1);
        cand.push(i);
        cand.extend_from_slice(&best[i + 1].0);
        let mut choice = (cand, Step::Survive);
        for m in (i + 1..n).step_by(2) {
            if simples[i].contracts_with(&simples[m]) && full[i + 1][m] {
                let rest = &best[m + 1].0;
                let better = rest.len() < choice.0.len()
                    || (rest.len() == choice.0.len() && rest < &choice.0);
                if better {
                    choice = (rest.clone(), Step::Block(m));
                }
            }
        }
        best[i] = choice;
    }

    let mut cups = Vec::new();
    let mut i = 0;
    while i < n {
        match best[i].1 {
            Step::Survive => i += 1,
            Step::Block(m) => {
                cups.push((i, m));
                collect_cups(&partner, i + 1, m, &mut cups);
                i = m + 1;
            }
        }
    }
    cups.sort_unstable();
    Reduction {
        cups,
        survivors: best[0].0.clone(),
    }
}

fn collect_cups(partner: &[Vec<usize>], mut i: usize, j: usize, out: &mut Vec<(usize, usize)>) {
    while i < j {
        let m = partner[i][j];
        out.push((i, m));
        collect_cups(partner, i + 1, m, out);
        i = m + 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Category {
    Sentence,
    NounPhrase,
    Other,
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Category::Sentence => "Sentence",
            Category::NounPhrase => "NounPhrase",
            Category::Other => "Other",
        })
    }
}

/// `Sentence` iff the only survivor is a plain `s`; `NounPhrase` iff it is a
/// plain `n`.
pub fn classify(reduction: &Reduction, types: &[PregroupType]) -> Category {
    let simples = flatten(types);
    match reduction.survivors.as_slice() {
        [only] => match simples.get(*only) {
            Some(t) if *t == SimpleType::s() => Category::Sentence,
            Some(t) if *t == SimpleType::n() => Category::NounPhrase,
            _ => Category::Other,
        },
        _ => Category::Other,
    }
}

/// A typed reading of a word sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parse {
    pub types: Vec<PregroupType>,
    pub reduction: Reduction,
    pub category: Category,
}

/// Picks one dictionary type per word.
///
/// Tries assignments in dictionary order (the last word varies fastest) and
/// returns the first one that reduces to a sentence or noun phrase. When no
/// assignment does, the all-first-types reading is returned with category
/// [`Category::Other`].
pub fn resolve(dictionary: &TypeDictionary, words: &[&str]) -> Result<Parse, PregroupError> {
    if words.is_empty() {
        return Err(PregroupError::EmptySequence);
    }
    let candidates = words
        .iter()
        .map(|w| {
            dictionary
                .lookup(w)
                .filter(|ts| !ts.is_empty())
                .ok_or_else(|| PregroupError::UnknownLemma((*w).to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut choice = vec![0usize; words.len()];
    let mut fallback = None;
    loop {
        let types: Vec<PregroupType> = choice
            .iter()
            .zip(&candidates)
            .map(|(&c, ts)| ts[c].clone())
            .collect();
        let reduction = reduce(&types)?;
        let category = classify(&reduction, &types);
        let parse = Parse {
            types,
            reduction,
            category,
        };
        if category != Category::Other {
            return Ok(parse);
        }
        fallback.get_or_insert(parse);

        // odometer increment, last position fastest
        let mut pos = words.len();
        loop {
            if pos == 0 {
                return Ok(fallback.expect("at least one assignment was tried"));
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < candidates[pos].len() {
                break;
            }
            choice[pos] = 0;
        }
    }
}
