//! Formal words in generators `x1..xk`, relation systems `w_i = u_i`, and
//! their evaluation on permutation tuples.
//!
//! A tuple ε-satisfies a system when every relation's two sides agree on all
//! but an ε-fraction of points; `defect` measures the worst relation.

use std::fmt;
use std::str::FromStr;

use crate::frac::Frac;
use crate::perm::Permutation;

/// One occurrence of a generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    /// 1-based generator index.
    pub index: u32,
    pub inverse: bool,
}

/// A word over `{x1, x1^-1, …}`, stored fully expanded so that `len()` is the
/// literal letter count used by length-based bounds.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

/// Malformed word or system text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("malformed factor {token:?} (expected xJ or xJ^E)")]
    BadToken { token: String },
    #[error("generator index must be at least 1 in {token:?}")]
    ZeroIndex { token: String },
    #[error("exponent must be nonzero in {token:?}")]
    ZeroExponent { token: String },
    #[error("line {line}: missing `=`")]
    MissingEquals { line: usize },
    #[error("line {line}: {source}")]
    InWord { line: usize, source: Box<ParseError> },
    #[error("system has no relations")]
    EmptySystem,
}

/// Word/tuple incompatibilities detected during evaluation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("word uses generator x{index} but the tuple has only {arity} entries")]
    ArityMismatch { index: u32, arity: usize },
    #[error("system has arity {expected} but the tuple has {actual} entries")]
    TupleArity { expected: usize, actual: usize },
    #[error("point {point} out of range 1..={n}")]
    PointOutOfRange { point: u32, n: usize },
}

impl Word {
    pub fn identity() -> Word {
        Word::default()
    }

    pub fn from_letters(letters: Vec<Letter>) -> Word {
        assert!(letters.iter().all(|l| l.index >= 1), "indices are 1-based");
        Word { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Literal letter count `|w|`.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Largest generator index used, or 0 for the identity word.
    pub fn max_index(&self) -> u32 {
        self.letters.iter().map(|l| l.index).max().unwrap_or(0)
    }

    /// Concatenation (no free reduction; evaluation cancels anyway).
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    /// Left-to-right evaluation on a tuple under the right-action convention:
    /// the first letter acts first. The identity word maps to id.
    pub fn evaluate(&self, t: &PermTuple) -> Result<Permutation, EvalError> {
        let mut result = Permutation::identity(t.degree());
        let mut inverses: Vec<Option<Permutation>> = vec![None; t.len()];
        for letter in &self.letters {
            let slot = letter.index as usize - 1;
            if slot >= t.len() {
                return Err(EvalError::ArityMismatch {
                    index: letter.index,
                    arity: t.len(),
                });
            }
            let factor = if letter.inverse {
                inverses[slot].get_or_insert_with(|| t.perms()[slot].inverse())
            } else {
                &t.perms()[slot]
            };
            result = result.compose(factor);
        }
        Ok(result)
    }
}

impl FromStr for Word {
    type Err = ParseError;

    /// Whitespace-separated factors `xJ` or `xJ^E`; `E` expands to `|E|`
    /// letters with the sign of `E`; empty text is the identity word.
    fn from_str(text: &str) -> Result<Word, ParseError> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            let body = token.strip_prefix('x').ok_or_else(|| ParseError::BadToken {
                token: token.to_string(),
            })?;
            let (index_text, exponent) = match body.split_once('^') {
                Some((i, e)) => {
                    let exponent: i64 = e.parse().map_err(|_| ParseError::BadToken {
                        token: token.to_string(),
                    })?;
                    (i, exponent)
                }
                None => (body, 1),
            };
            let index: u32 = index_text.parse().map_err(|_| ParseError::BadToken {
                token: token.to_string(),
            })?;
            if index == 0 {
                return Err(ParseError::ZeroIndex {
                    token: token.to_string(),
                });
            }
            if exponent == 0 {
                return Err(ParseError::ZeroExponent {
                    token: token.to_string(),
                });
            }
            let letter = Letter {
                index,
                inverse: exponent < 0,
            };
            letters.extend(std::iter::repeat_n(letter, exponent.unsigned_abs() as usize));
        }
        Ok(Word { letters })
    }
}

impl fmt::Display for Word {
    /// Renders with runs of one letter grouped as `xJ^E`; parsing the output
    /// reproduces the word exactly.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut i = 0;
        let mut first = true;
        while i < self.letters.len() {
            let letter = self.letters[i];
            let mut run = 1;
            while i + run < self.letters.len() && self.letters[i + run] == letter {
                run += 1;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            let signed = if letter.inverse { -(run as i64) } else { run as i64 };
            if signed == 1 {
                write!(f, "x{}", letter.index)?;
            } else {
                write!(f, "x{}^{}", letter.index, signed)?;
            }
            i += run;
        }
        Ok(())
    }
}

/// A relation system `w_i = u_i` over generators `x1..xk`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationSystem {
    arity: usize,
    relations: Vec<(Word, Word)>,
}

impl EquationSystem {
    /// Builds a system; the arity is the largest generator index mentioned.
    pub fn new(relations: Vec<(Word, Word)>) -> Result<EquationSystem, ParseError> {
        if relations.is_empty() {
            return Err(ParseError::EmptySystem);
        }
        let arity = relations
            .iter()
            .map(|(w, u)| w.max_index().max(u.max_index()))
            .max()
            .unwrap_or(0) as usize;
        Ok(EquationSystem { arity, relations })
    }

    /// Number of generators `k`.
    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of relations `r`.
    pub fn relation_count(&self) -> usize {
        self.relations.len()
    }

    pub fn relations(&self) -> &[(Word, Word)] {
        &self.relations
    }

    fn check_arity(&self, t: &PermTuple) -> Result<(), EvalError> {
        if t.len() != self.arity {
            return Err(EvalError::TupleArity {
                expected: self.arity,
                actual: t.len(),
            });
        }
        Ok(())
    }

    /// Hamming distance between the two sides of each relation, in order.
    pub fn relation_defects(&self, t: &PermTuple) -> Result<Vec<Frac>, EvalError> {
        self.check_arity(t)?;
        self.relations
            .iter()
            .map(|(w, u)| Ok(w.evaluate(t)?.hamming(&u.evaluate(t)?)))
            .collect()
    }

    /// Worst relation defect: `t` is an ε-solution iff `defect(t) ≤ ε`.
    pub fn defect(&self, t: &PermTuple) -> Result<Frac, EvalError> {
        Ok(self
            .relation_defects(t)?
            .into_iter()
            .max()
            .expect("systems have at least one relation"))
    }

    pub fn is_exact_solution(&self, t: &PermTuple) -> Result<bool, EvalError> {
        Ok(self.defect(t)?.is_zero())
    }
}

impl FromStr for EquationSystem {
    type Err = ParseError;

    /// One relation `LHS = RHS` per line; `#` starts a comment; blank lines
    /// are skipped; an empty side is the identity word.
    fn from_str(text: &str) -> Result<EquationSystem, ParseError> {
        let mut relations = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("");
            if content.trim().is_empty() {
                continue;
            }
            let (lhs, rhs) = content
                .split_once('=')
                .ok_or(ParseError::MissingEquals { line })?;
            let wrap = |source: ParseError| ParseError::InWord {
                line,
                source: Box::new(source),
            };
            relations.push((lhs.parse().map_err(wrap)?, rhs.parse().map_err(wrap)?));
        }
        EquationSystem::new(relations)
    }
}

impl fmt::Display for EquationSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (w, u)) in self.relations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{w} = {u}")?;
        }
        Ok(())
    }
}

/// An assignment of one permutation per generator, all of the same degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermTuple {
    perms: Vec<Permutation>,
}

/// Invalid tuple construction.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TupleError {
    #[error("tuple must contain at least one permutation")]
    Empty,
    #[error("tuple mixes degrees {first} and {other}")]
    MixedDegrees { first: usize, other: usize },
}

impl PermTuple {
    pub fn new(perms: Vec<Permutation>) -> Result<PermTuple, TupleError> {
        let first = perms.first().ok_or(TupleError::Empty)?.degree();
        for p in &perms {
            if p.degree() != first {
                return Err(TupleError::MixedDegrees {
                    first,
                    other: p.degree(),
                });
            }
        }
        Ok(PermTuple { perms })
    }

    pub fn degree(&self) -> usize {
        self.perms[0].degree()
    }

    /// Number of generators `k`.
    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        false // guaranteed nonempty by construction
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn into_perms(self) -> Vec<Permutation> {
        self.perms
    }

    /// Largest per-coordinate Hamming distance to another tuple of the same
    /// shape.
    pub fn distance(&self, other: &PermTuple) -> Frac {
        assert_eq!(self.len(), other.len(), "tuple length mismatch");
        self.perms
            .iter()
            .zip(&other.perms)
            .map(|(a, b)| a.hamming(b))
            .max()
            .expect("tuples are nonempty")
    }
}
