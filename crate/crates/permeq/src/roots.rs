//! p-th roots of permutations.
//!
//! A permutation has an exact p-th root (p prime) iff for every k the number
//! of its kp-cycles is divisible by p. When the criterion fails, a nearby
//! target `f̃` is obtained by deleting one point from the excess kp-cycles;
//! `f̃` always has an exact root, and `h(f, f̃) = 2Σr_k/n` is bounded by
//! `2√2(p−1)/√(pn)`. Composite exponents factor into a chain of prime steps
//! whose defects accumulate with known coefficients.

use std::collections::{BTreeMap, BTreeSet};

use crate::frac::Frac;
use crate::perm::Permutation;

/// Root computation failures.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RootError {
    #[error("{p} is not prime")]
    NotPrime { p: u64 },
    #[error("no exact root: some kp-cycle count is not divisible by p")]
    NoExactRoot,
    #[error("exponent must be positive")]
    ZeroExponent,
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factors of `p ≥ 2` with multiplicity, largest first.
fn prime_factors_descending(mut p: u64) -> Vec<u64> {
    let mut factors = Vec::new();
    let mut d = 2;
    while d * d <= p {
        while p.is_multiple_of(d) {
            factors.push(d);
            p /= d;
        }
        d += 1;
    }
    if p > 1 {
        factors.push(p);
    }
    factors.sort_unstable_by(|a, b| b.cmp(a));
    factors
}

/// `a^{-1} mod m` for coprime `a`, `m ≥ 2`, reduced to `{1..m-1}`.
fn mod_inverse(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "inputs must be coprime");
    old_s.rem_euclid(m as i128) as u64
}

/// Cycle-type bookkeeping of `f` relative to a prime `p`: for each `k`, the
/// count `m_k` of kp-cycles and its residue `r_k = m_k mod p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleTypeProfile {
    p: u64,
    n: usize,
    n0: u64,
    counts: BTreeMap<u64, u64>,
    residues: BTreeMap<u64, u64>,
    support: BTreeSet<u64>,
}

impl CycleTypeProfile {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// Points lying in cycles whose length is coprime to `p`.
    pub fn coprime_points(&self) -> u64 {
        self.n0
    }

    /// Map from cycle length `ℓ = kp` to the count `m_k` of such cycles.
    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    /// Map from `k` to `r_k = m_k mod p`.
    pub fn residues(&self) -> &BTreeMap<u64, u64> {
        &self.residues
    }

    /// `S = {k : m_k ≠ 0}`.
    pub fn support(&self) -> &BTreeSet<u64> {
        &self.support
    }

    /// `Σ_k r_k`, the number of cycles the approximate construction breaks.
    pub fn residue_sum(&self) -> u64 {
        self.residues.values().sum()
    }

    /// The divisibility criterion: an exact root exists iff all `r_k = 0`.
    pub fn criterion_holds(&self) -> bool {
        self.residue_sum() == 0
    }
}

/// Computes the cycle-type profile of `f` for a prime `p`.
pub fn profile(f: &Permutation, p: u64) -> Result<CycleTypeProfile, RootError> {
    if !is_prime(p) {
        return Err(RootError::NotPrime { p });
    }
    let n = f.degree();
    let mut counts = BTreeMap::new();
    let mut n0 = 0u64;
    for (len, count) in f.cycle_decomposition().cycle_counts() {
        let len = len as u64;
        if len.is_multiple_of(p) {
            counts.insert(len, count);
        } else {
            n0 += len * count;
        }
    }
    let residues: BTreeMap<u64, u64> = counts.iter().map(|(&l, &m)| (l / p, m % p)).collect();
    let support: BTreeSet<u64> = counts.keys().map(|&l| l / p).collect();
    debug_assert_eq!(
        n0 + counts.iter().map(|(&l, &m)| l * m).sum::<u64>(),
        n as u64
    );
    // |S| < √(2n/p): the supported lengths kp, k ∈ S, are disjoint in f.
    debug_assert!((support.len() as u64).pow(2) * p < 2 * n as u64 || support.is_empty());
    Ok(CycleTypeProfile {
        p,
        n,
        n0,
        counts,
        residues,
        support,
    })
}

/// True iff `x^p = f` has a solution (p prime): every kp-cycle count of `f`
/// is divisible by `p`.
pub fn exact_root_exists(f: &Permutation, p: u64) -> Result<bool, RootError> {
    Ok(profile(f, p)?.criterion_holds())
}

/// Constructs `x` with `x^p = f` (p prime), or fails with `NoExactRoot`.
///
/// Cycles of length coprime to `p` are powered by the inverse of `p` modulo
/// their length; kp-cycles are taken in canonical order, grouped into blocks
/// of `p`, and each block is interleaved into a single kp²-cycle whose p-th
/// power reproduces the block.
pub fn exact_root(f: &Permutation, p: u64) -> Result<Permutation, RootError> {
    if !is_prime(p) {
        return Err(RootError::NotPrime { p });
    }
    let n = f.degree();
    let decomposition = f.cycle_decomposition();

    let mut by_length: BTreeMap<usize, Vec<&Vec<u32>>> = BTreeMap::new();
    for cycle in decomposition.cycles() {
        by_length.entry(cycle.len()).or_default().push(cycle);
    }
    for (&len, cycles) in &by_length {
        if (len as u64).is_multiple_of(p) && !(cycles.len() as u64).is_multiple_of(p) {
            return Err(RootError::NoExactRoot);
        }
    }

    let mut images: Vec<u32> = (1..=n as u32).collect();
    let mut write_cycle = |seq: &[u32]| {
        for (i, &a) in seq.iter().enumerate() {
            images[a as usize - 1] = seq[(i + 1) % seq.len()];
        }
    };

    for (&len, cycles) in &by_length {
        if (len as u64).is_multiple_of(p) {
            // Interleave each block of p cycles d_0..d_{p-1} into one cycle x
            // with x[i·p + j] = d_j[i], so x^p acts as d_j on each member.
            for block in cycles.chunks(p as usize) {
                let mut seq = vec![0u32; len * p as usize];
                for (j, cycle) in block.iter().enumerate() {
                    for (i, &a) in cycle.iter().enumerate() {
                        seq[i * p as usize + j] = a;
                    }
                }
                write_cycle(&seq);
            }
        } else if len >= 2 {
            // C^(p^-1 mod len) is a p-th root of the cycle C; tracing it from
            // c_0 visits c_0, c_α, c_2α, …
            let alpha = mod_inverse(p % len as u64, len as u64) as usize;
            for cycle in cycles {
                let seq: Vec<u32> = (0..len).map(|i| cycle[(i * alpha) % len]).collect();
                write_cycle(&seq);
            }
        }
        // Fixed points of f stay fixed in the root.
    }

    Ok(Permutation::from_images(images).expect("root construction yields a bijection"))
}

/// One prime step of an approximate-root chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootStage {
    /// The prime rooted at this step.
    pub q: u64,
    /// Coefficient of this step's defect in the accumulated bound: the
    /// product of the primes handled before it.
    pub prefix: u64,
    /// Exact defect `h(f_step, f̃_step) = 2Σr_k/n` of this step.
    pub defect: Frac,
    /// `Σ_k r_k` for this step, for exact bound certification.
    pub residue_sum: u64,
}

/// The a-priori defect bound `Σ prefix·2√2(q−1)/√(qn)`, kept symbolically so
/// adherence can be certified in exact integer arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootBound {
    n: u64,
    terms: Vec<(u64, u64)>, // (prefix, q)
}

impl RootBound {
    /// Decimal value for display; comparisons should use
    /// [`ApproxRootResult::defect_within_bound`] instead.
    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|&(prefix, q)| {
                prefix as f64 * 2.0 * 2.0f64.sqrt() * (q - 1) as f64 / ((q * self.n) as f64).sqrt()
            })
            .sum()
    }

    pub fn terms(&self) -> &[(u64, u64)] {
        &self.terms
    }

    pub fn degree(&self) -> u64 {
        self.n
    }
}

/// Exact check of one prime step against its bound:
/// `2Σr/n ≤ 2√2(q−1)/√(qn)  ⟺  (Σr)²·q ≤ 2(q−1)²·n`.
pub fn prime_bound_holds(residue_sum: u64, q: u64, n: usize) -> bool {
    let lhs = (residue_sum as u128).pow(2) * q as u128;
    let rhs = 2 * ((q - 1) as u128).pow(2) * n as u128;
    lhs <= rhs
}

/// An approximate p-th root: `g^p` equals the nearby target `f̃` exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxRootResult {
    /// The root: `power(g, p) = f̃` exactly.
    pub g: Permutation,
    /// The repaired target `f̃ = g^p`.
    pub f_tilde: Permutation,
    /// `h(f, f̃)`, exact.
    pub defect: Frac,
    /// A-priori bound for this (p, n).
    pub bound: RootBound,
    /// Per-prime-step diagnostics, in execution order.
    pub stages: Vec<RootStage>,
}

impl ApproxRootResult {
    /// Accumulated realized bound `Σ prefix·(stage defect)`, an exact
    /// rational that always dominates `defect`.
    pub fn chain_bound(&self) -> Frac {
        self.stages
            .iter()
            .fold(Frac::ZERO, |acc, s| acc + s.defect * s.prefix)
    }

    /// Exact certificate that `defect ≤ bound`: the defect is at most the
    /// realized chain bound, and each stage's defect is at most its a-priori
    /// term (checked by squaring, no floating point).
    pub fn defect_within_bound(&self) -> bool {
        self.defect <= self.chain_bound()
            && self
                .stages
                .iter()
                .all(|s| prime_bound_holds(s.residue_sum, s.q, self.f_tilde.degree()))
    }
}

/// Approximate p-th root for prime `p`: breaks one point out of each of the
/// last `r_k` kp-cycles (the cycle's maximal element becomes fixed), then
/// roots the repaired target exactly. `defect = 2Σr_k/n`.
pub fn approx_root_prime(f: &Permutation, p: u64) -> Result<ApproxRootResult, RootError> {
    if !is_prime(p) {
        return Err(RootError::NotPrime { p });
    }
    let n = f.degree();
    let decomposition = f.cycle_decomposition();

    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    for cycle in decomposition.cycles() {
        *counts.entry(cycle.len()).or_insert(0) += 1;
    }

    // For each affected length, how many of its trailing cycles to break.
    let to_break: BTreeMap<usize, u64> = counts
        .iter()
        .filter(|(&len, _)| (len as u64).is_multiple_of(p))
        .map(|(&len, &m)| (len, m % p))
        .collect();
    let residue_sum: u64 = to_break.values().sum();

    let mut seen: BTreeMap<usize, u64> = BTreeMap::new();
    let mut cycles: Vec<Vec<u32>> = Vec::with_capacity(decomposition.cycles().len());
    for cycle in decomposition.cycles() {
        let len = cycle.len();
        let position = seen.entry(len).or_insert(0);
        *position += 1;
        let breaks = to_break.get(&len).copied().unwrap_or(0);
        let total = counts[&len];
        // The last r_k cycles of this length, in canonical order.
        if breaks > 0 && *position > total - breaks {
            let max = *cycle.iter().max().expect("cycles are nonempty");
            let shortened: Vec<u32> = cycle.iter().copied().filter(|&a| a != max).collect();
            cycles.push(shortened);
            cycles.push(vec![max]);
        } else {
            cycles.push(cycle.clone());
        }
    }

    let f_tilde = Permutation::from_cycles(n, &cycles)
        .expect("breaking cycles preserves disjointness and range");
    let g = exact_root(&f_tilde, p)
        .expect("after deletion every kp-cycle count is divisible by p");
    let defect = f.hamming(&f_tilde);
    debug_assert_eq!(defect, Frac::new(2 * residue_sum, n as u64));
    debug_assert_eq!(g.power(p as i64), f_tilde);

    Ok(ApproxRootResult {
        g,
        f_tilde,
        defect,
        bound: RootBound {
            n: n as u64,
            terms: vec![(1, p)],
        },
        stages: vec![RootStage {
            q: p,
            prefix: 1,
            defect,
            residue_sum,
        }],
    })
}

/// Approximate p-th root for any `p ≥ 1` via the prime chain: factor `p`
/// largest-prime-first, root each stage approximately, and accumulate the
/// stage defects with coefficients `q_1⋯q_{i−1}`.
pub fn approx_root(f: &Permutation, p: u64) -> Result<ApproxRootResult, RootError> {
    if p == 0 {
        return Err(RootError::ZeroExponent);
    }
    let n = f.degree();
    if p == 1 {
        return Ok(ApproxRootResult {
            g: f.clone(),
            f_tilde: f.clone(),
            defect: Frac::ZERO,
            bound: RootBound {
                n: n as u64,
                terms: Vec::new(),
            },
            stages: Vec::new(),
        });
    }

    let mut stages = Vec::new();
    let mut terms = Vec::new();
    let mut prefix = 1u64;
    let mut current = f.clone();
    for q in prime_factors_descending(p) {
        let step = approx_root_prime(&current, q)?;
        let stage = &step.stages[0];
        stages.push(RootStage {
            q,
            prefix,
            defect: stage.defect,
            residue_sum: stage.residue_sum,
        });
        terms.push((prefix, q));
        prefix *= q;
        current = step.g;
    }

    let g = current;
    let f_tilde = g.power(p as i64);
    let defect = f.hamming(&f_tilde);
    let result = ApproxRootResult {
        g,
        f_tilde,
        defect,
        bound: RootBound {
            n: n as u64,
            terms,
        },
        stages,
    };
    debug_assert!(result.defect <= result.chain_bound());
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_exact_root;
    use crate::perm::random_permutation;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cyc(n: usize, cycles: &[&[u32]]) -> Permutation {
        let cycles: Vec<Vec<u32>> = cycles.iter().map(|c| c.to_vec()).collect();
        Permutation::from_cycles(n, &cycles).unwrap()
    }

    #[test]
    fn primality_and_factoring() {
        assert!(is_prime(2) && is_prime(3) && is_prime(97));
        assert!(!is_prime(0) && !is_prime(1) && !is_prime(4) && !is_prime(91));
        assert_eq!(prime_factors_descending(12), vec![3, 2, 2]);
        assert_eq!(prime_factors_descending(6), vec![3, 2]);
        assert_eq!(prime_factors_descending(97), vec![97]);
    }

    #[test]
    fn mod_inverse_small_cases() {
        assert_eq!(mod_inverse(2, 3), 2);
        assert_eq!(mod_inverse(3, 5), 2);
        assert_eq!(mod_inverse(1, 2), 1);
        for m in 2u64..30 {
            for a in 1..m {
                if gcd(a, m) == 1 {
                    let inv = mod_inverse(a, m);
                    assert!(inv >= 1 && inv < m);
                    assert_eq!(a * inv % m, 1, "a={a} m={m}");
                }
            }
        }
    }

    fn gcd(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    }

    #[test]
    fn profile_examples() {
        let id = Permutation::identity(6);
        let prof = profile(&id, 3).unwrap();
        assert_eq!(prof.coprime_points(), 6);
        assert!(prof.counts().is_empty());
        assert!(prof.support().is_empty());
        assert!(prof.criterion_holds());

        let f = cyc(5, &[&[1, 2], &[3, 4, 5]]);
        let prof = profile(&f, 2).unwrap();
        assert_eq!(prof.coprime_points(), 3);
        assert_eq!(prof.counts().get(&2), Some(&1));
        assert_eq!(prof.residues().get(&1), Some(&1));
        assert_eq!(prof.support().iter().copied().collect::<Vec<_>>(), vec![1]);

        let g = cyc(4, &[&[1, 2], &[3, 4]]);
        let prof = profile(&g, 2).unwrap();
        assert_eq!(prof.counts().get(&2), Some(&2));
        assert_eq!(prof.residues().get(&1), Some(&0));
        assert!(prof.criterion_holds());

        assert_eq!(profile(&id, 4).err(), Some(RootError::NotPrime { p: 4 }));
    }

    #[test]
    fn existence_examples() {
        assert!(exact_root_exists(&Permutation::identity(3), 2).unwrap());
        assert!(!exact_root_exists(&cyc(4, &[&[1, 2]]), 2).unwrap());
        assert!(exact_root_exists(&cyc(4, &[&[1, 2], &[3, 4]]), 2).unwrap());
    }

    #[test]
    fn exact_root_examples() {
        assert_eq!(
            exact_root(&cyc(3, &[&[1, 2, 3]]), 2).unwrap(),
            cyc(3, &[&[1, 3, 2]])
        );
        assert_eq!(
            exact_root(&cyc(4, &[&[1, 2], &[3, 4]]), 2).unwrap(),
            cyc(4, &[&[1, 3, 2, 4]])
        );
        assert_eq!(
            exact_root(&cyc(4, &[&[1, 2]]), 2).err(),
            Some(RootError::NoExactRoot)
        );
    }

    #[test]
    fn exact_root_is_sound_on_planted_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for p in [2u64, 3, 5] {
            for _ in 0..50 {
                let x = random_permutation(30, &mut rng);
                let f = x.power(p as i64);
                assert!(exact_root_exists(&f, p).unwrap());
                let root = exact_root(&f, p).unwrap();
                assert_eq!(root.power(p as i64), f);
            }
        }
    }

    #[test]
    fn existence_matches_brute_force_at_n4() {
        for p in [2u64, 3] {
            for f in crate::oracle::enumerate_permutations(4).unwrap() {
                let claimed = exact_root_exists(&f, p).unwrap();
                let found = brute_exact_root(&f, p).unwrap().is_some();
                assert_eq!(claimed, found, "f={f}, p={p}");
            }
        }
    }

    #[test]
    fn approx_root_prime_examples() {
        // Exact case: nothing to repair.
        let f = cyc(4, &[&[1, 2], &[3, 4]]);
        let res = approx_root_prime(&f, 2).unwrap();
        assert_eq!(res.f_tilde, f);
        assert_eq!(res.defect, Frac::ZERO);
        assert!(res.defect_within_bound());

        // One excess 2-cycle is broken; the maximal element 2 becomes fixed.
        let f = cyc(5, &[&[1, 2], &[3, 4, 5]]);
        let res = approx_root_prime(&f, 2).unwrap();
        assert_eq!(res.f_tilde, cyc(5, &[&[3, 4, 5]]));
        assert_eq!(res.defect, Frac::new(2, 5));
        assert_eq!(res.g, cyc(5, &[&[3, 5, 4]]));
        assert_eq!(res.g.power(2), res.f_tilde);
        assert_eq!(res.stages[0].residue_sum, 1);
        assert!(res.defect_within_bound());
    }

    #[test]
    fn approx_root_prime_breaks_trailing_cycles() {
        // Three 2-cycles at p=2: r_1 = 1, so only the last one, (5 6), breaks;
        // its maximal element 6 becomes fixed.
        let f = cyc(6, &[&[1, 2], &[3, 4], &[5, 6]]);
        let res = approx_root_prime(&f, 2).unwrap();
        assert_eq!(res.f_tilde, cyc(6, &[&[1, 2], &[3, 4]]));
        assert_eq!(res.defect, Frac::new(2, 6));
    }

    #[test]
    fn approx_root_prime_random_meets_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let f = random_permutation(1000, &mut rng);
            let res = approx_root_prime(&f, 3).unwrap();
            assert_eq!(res.g.power(3), res.f_tilde);
            assert_eq!(
                res.defect,
                Frac::new(2 * res.stages[0].residue_sum, 1000)
            );
            assert!(res.defect_within_bound());
            // 2√2·2/√3000 ≈ 0.1033
            assert!(res.defect.to_f64() <= 0.1033);
        }
    }

    #[test]
    fn approx_root_unit_exponent_and_composite() {
        let f = cyc(5, &[&[1, 2, 3, 4, 5]]);
        let res = approx_root(&f, 1).unwrap();
        assert_eq!(res.g, f);
        assert_eq!(res.defect, Frac::ZERO);

        // A 5-cycle is coprime to 2, so both stages of p=4 are exact.
        let res = approx_root(&f, 4).unwrap();
        assert_eq!(res.defect, Frac::ZERO);
        assert_eq!(res.g.power(4), f);

        assert_eq!(approx_root(&f, 0).err(), Some(RootError::ZeroExponent));
    }

    #[test]
    fn approx_root_composite_chain_accounting() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..10 {
            let f = random_permutation(200, &mut rng);
            let res = approx_root(&f, 6).unwrap();
            assert_eq!(res.g.power(6), res.f_tilde);
            assert_eq!(res.defect, f.hamming(&res.f_tilde));
            assert!(res.defect <= res.chain_bound());
            assert!(res.defect_within_bound());
            // Stage order: 3 first with prefix 1, then 2 with prefix 3.
            assert_eq!(res.stages[0].q, 3);
            assert_eq!(res.stages[0].prefix, 1);
            assert_eq!(res.stages[1].q, 2);
            assert_eq!(res.stages[1].prefix, 3);
        }
    }
}
