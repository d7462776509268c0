//! Exhaustive ground truth at tiny degree: enumeration of S_n, brute-force
//! roots, and nearest exact solutions of equation systems.
//!
//! Nothing here is clever on purpose — these routines exist to check the
//! constructive algorithms against something obviously correct.

use crate::equations::{EquationSystem, EvalError, PermTuple};
use crate::frac::Frac;
use crate::perm::Permutation;

/// Default degree cap for full enumeration (8! = 40320 permutations).
pub const DEGREE_CAP: usize = 8;
/// Default degree cap for tuple searches ((n!)^k candidates).
pub const SEARCH_DEGREE_CAP: usize = 5;
/// Default arity cap for tuple searches.
pub const SEARCH_ARITY_CAP: usize = 2;

/// A brute-force request that would blow past its size cap.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("degree {n} exceeds enumeration cap {cap}")]
    DegreeCapExceeded { n: usize, cap: usize },
    #[error("arity {k} exceeds search cap {cap}")]
    ArityCapExceeded { k: usize, cap: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// All `n!` permutations of `{1..n}` in lexicographic image order, starting
/// at the identity. Errors if `n` exceeds the default cap.
pub fn enumerate_permutations(n: usize) -> Result<PermutationStream, OracleError> {
    enumerate_permutations_with_cap(n, DEGREE_CAP)
}

/// As [`enumerate_permutations`], with an explicit cap.
pub fn enumerate_permutations_with_cap(
    n: usize,
    cap: usize,
) -> Result<PermutationStream, OracleError> {
    if n > cap {
        return Err(OracleError::DegreeCapExceeded { n, cap });
    }
    assert!(n >= 1, "degree must be at least 1");
    Ok(PermutationStream {
        next: Some((1..=n as u32).collect()),
    })
}

/// Iterator over S_n in lexicographic image order.
pub struct PermutationStream {
    next: Option<Vec<u32>>,
}

impl Iterator for PermutationStream {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let perm = Permutation::from_images(current.clone())
            .expect("stream states are valid image sequences");
        self.next = next_lexicographic(current);
        Some(perm)
    }
}

/// Standard next-permutation step; `None` after the descending arrangement.
fn next_lexicographic(mut images: Vec<u32>) -> Option<Vec<u32>> {
    let n = images.len();
    if n < 2 {
        return None;
    }
    let mut i = n - 1;
    while i > 0 && images[i - 1] >= images[i] {
        i -= 1;
    }
    if i == 0 {
        return None;
    }
    let mut j = n - 1;
    while images[j] <= images[i - 1] {
        j -= 1;
    }
    images.swap(i - 1, j);
    images[i..].reverse();
    Some(images)
}

/// First `x` in enumeration order with `x^p = f`, if any.
pub fn brute_exact_root(f: &Permutation, p: u64) -> Result<Option<Permutation>, OracleError> {
    brute_exact_root_with_cap(f, p, DEGREE_CAP)
}

/// As [`brute_exact_root`], with an explicit cap.
pub fn brute_exact_root_with_cap(
    f: &Permutation,
    p: u64,
    cap: usize,
) -> Result<Option<Permutation>, OracleError> {
    let p = i64::try_from(p).expect("exponent fits in i64");
    for x in enumerate_permutations_with_cap(f.degree(), cap)? {
        if x.power(p) == *f {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Exact solution of `sys` minimizing `max_i h(t_i, candidate_i)`, together
/// with that minimum; ties go to the earlier tuple in enumeration order
/// (lexicographic, last generator varying fastest).
pub fn nearest_exact_solution(
    sys: &EquationSystem,
    t: &PermTuple,
) -> Result<(PermTuple, Frac), OracleError> {
    nearest_exact_solution_with_caps(sys, t, SEARCH_DEGREE_CAP, SEARCH_ARITY_CAP)
}

/// As [`nearest_exact_solution`], with explicit degree and arity caps.
pub fn nearest_exact_solution_with_caps(
    sys: &EquationSystem,
    t: &PermTuple,
    degree_cap: usize,
    arity_cap: usize,
) -> Result<(PermTuple, Frac), OracleError> {
    let n = t.degree();
    let k = t.len();
    if n > degree_cap {
        return Err(OracleError::DegreeCapExceeded {
            n,
            cap: degree_cap,
        });
    }
    if k > arity_cap {
        return Err(OracleError::ArityCapExceeded { k, cap: arity_cap });
    }

    let mut best: Option<(PermTuple, Frac)> = None;
    let mut stack: Vec<Permutation> = Vec::with_capacity(k);
    search(sys, t, n, &mut stack, &mut best)?;
    // The all-identity tuple sends both sides of every relation to id, so the
    // search space always contains at least one exact solution.
    Ok(best.expect("identity tuple is always an exact solution"))
}

fn search(
    sys: &EquationSystem,
    t: &PermTuple,
    n: usize,
    stack: &mut Vec<Permutation>,
    best: &mut Option<(PermTuple, Frac)>,
) -> Result<(), OracleError> {
    if stack.len() == t.len() {
        let candidate = PermTuple::new(stack.clone()).expect("stack perms share degree n");
        if sys.defect(&candidate)?.is_zero() {
            let dist = tuple_distance(t, &candidate);
            match best {
                Some((_, best_dist)) if *best_dist <= dist => {}
                _ => *best = Some((candidate, dist)),
            }
        }
        return Ok(());
    }
    for x in enumerate_permutations_with_cap(n, n)? {
        stack.push(x);
        search(sys, t, n, stack, best)?;
        stack.pop();
    }
    Ok(())
}

fn tuple_distance(a: &PermTuple, b: &PermTuple) -> Frac {
    a.perms()
        .iter()
        .zip(b.perms())
        .map(|(x, y)| x.hamming(y))
        .max()
        .unwrap_or(Frac::ZERO)
}
