//! Permutations of `{1..n}`, their group operations, cycle structure, and the
//! normalized Hamming metric.
//!
//! Points are 1-indexed and permutations act on the right: `(a)f` is
//! `f.apply(a)`, and `compose(f, g)` maps `a` to `((a)f)g` (apply `f` first).

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::frac::Frac;

/// A bijection of `{1..n}` stored as its image sequence.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    /// `images[a - 1]` is the image of point `a`; values are in `1..=n`.
    images: Vec<u32>,
}

/// Invalid data offered as a permutation or cycle list.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PermError {
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("point {point} out of range 1..={n}")]
    OutOfRange { point: u32, n: usize },
    #[error("point {point} appears more than once")]
    DuplicatePoint { point: u32 },
}

impl Permutation {
    /// The identity on `{1..n}`. Panics if `n == 0`.
    pub fn identity(n: usize) -> Permutation {
        assert!(n >= 1, "degree must be at least 1");
        Permutation {
            images: (1..=n as u32).collect(),
        }
    }

    /// Validates `images` as a bijection of `{1..n}` where `n = images.len()`.
    pub fn from_images(images: Vec<u32>) -> Result<Permutation, PermError> {
        let n = images.len();
        if n == 0 {
            return Err(PermError::ZeroDegree);
        }
        let mut seen = vec![false; n];
        for &b in &images {
            if b == 0 || b as usize > n {
                return Err(PermError::OutOfRange { point: b, n });
            }
            if seen[b as usize - 1] {
                return Err(PermError::DuplicatePoint { point: b });
            }
            seen[b as usize - 1] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of `{1..n}` from disjoint cycles; points not
    /// mentioned in any cycle are fixed.
    pub fn from_cycles(n: usize, cycles: &[Vec<u32>]) -> Result<Permutation, PermError> {
        if n == 0 {
            return Err(PermError::ZeroDegree);
        }
        let mut images: Vec<u32> = (1..=n as u32).collect();
        let mut seen = vec![false; n];
        for cycle in cycles {
            for &a in cycle {
                if a == 0 || a as usize > n {
                    return Err(PermError::OutOfRange { point: a, n });
                }
                if seen[a as usize - 1] {
                    return Err(PermError::DuplicatePoint { point: a });
                }
                seen[a as usize - 1] = true;
            }
            for (i, &a) in cycle.iter().enumerate() {
                images[a as usize - 1] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// The right action `(a)f`. Panics if `a` is out of range.
    pub fn apply(&self, a: u32) -> u32 {
        self.images[a as usize - 1]
    }

    /// The image sequence `(1)f, (2)f, …, (n)f`.
    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &b)| b as usize == i + 1)
    }

    /// `a ↦ ((a)self)g`: apply `self`, then `g`. Panics on degree mismatch.
    pub fn compose(&self, g: &Permutation) -> Permutation {
        assert_eq!(self.degree(), g.degree(), "degree mismatch in compose");
        Permutation {
            images: self.images.iter().map(|&b| g.apply(b)).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.degree()];
        for (i, &b) in self.images.iter().enumerate() {
            images[b as usize - 1] = i as u32 + 1;
        }
        Permutation { images }
    }

    /// `e`-fold composition; negative `e` powers the inverse. Runs in O(n)
    /// for any exponent by rotating each cycle.
    pub fn power(&self, e: i64) -> Permutation {
        let n = self.degree();
        let mut images = vec![0u32; n];
        let mut visited = vec![false; n];
        let mut cycle = Vec::new();
        for start in 1..=n as u32 {
            if visited[start as usize - 1] {
                continue;
            }
            cycle.clear();
            let mut a = start;
            loop {
                visited[a as usize - 1] = true;
                cycle.push(a);
                a = self.apply(a);
                if a == start {
                    break;
                }
            }
            let len = cycle.len() as i64;
            let shift = (e.rem_euclid(len)) as usize;
            for (i, &a) in cycle.iter().enumerate() {
                images[a as usize - 1] = cycle[(i + shift) % cycle.len()];
            }
        }
        Permutation { images }
    }

    /// Normalized Hamming distance: the fraction of points where the images
    /// disagree, as an exact rational with denominator `n`. Panics on degree
    /// mismatch.
    pub fn hamming(&self, g: &Permutation) -> Frac {
        assert_eq!(self.degree(), g.degree(), "degree mismatch in hamming");
        let moved = self
            .images
            .iter()
            .zip(&g.images)
            .filter(|(a, b)| a != b)
            .count();
        Frac::new(moved as u64, self.degree() as u64)
    }

    /// Canonical cycle decomposition: each cycle starts at its minimal
    /// element, cycles are ordered by minimal element, and fixed points are
    /// included, so the cycles partition `{1..n}`.
    pub fn cycle_decomposition(&self) -> CycleDecomposition {
        let n = self.degree();
        let mut cycles = Vec::new();
        let mut visited = vec![false; n];
        for start in 1..=n as u32 {
            if visited[start as usize - 1] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut a = start;
            loop {
                visited[a as usize - 1] = true;
                cycle.push(a);
                a = self.apply(a);
                if a == start {
                    break;
                }
            }
            cycles.push(cycle);
        }
        CycleDecomposition { n, cycles }
    }
}

/// Uniformly random permutation of `{1..n}` by in-place shuffle.
pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
    assert!(n >= 1, "degree must be at least 1");
    let mut images: Vec<u32> = (1..=n as u32).collect();
    images.shuffle(rng);
    Permutation { images }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.cycle_decomposition().fmt(f)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The canonical cycle form of a permutation; see
/// [`Permutation::cycle_decomposition`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleDecomposition {
    n: usize,
    cycles: Vec<Vec<u32>>,
}

impl CycleDecomposition {
    pub fn degree(&self) -> usize {
        self.n
    }

    /// All cycles, including fixed points; a partition of `{1..n}`.
    pub fn cycles(&self) -> &[Vec<u32>] {
        &self.cycles
    }

    /// Map from cycle length to the number of cycles of that length.
    pub fn cycle_counts(&self) -> BTreeMap<usize, u64> {
        let mut counts = BTreeMap::new();
        for cycle in &self.cycles {
            *counts.entry(cycle.len()).or_insert(0) += 1;
        }
        counts
    }

    /// Rebuilds the permutation; inverse of `cycle_decomposition`.
    pub fn to_permutation(&self) -> Permutation {
        Permutation::from_cycles(self.n, &self.cycles)
            .expect("decomposition cycles are disjoint and in range")
    }
}

impl fmt::Display for CycleDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cycle in &self.cycles {
            write!(f, "(")?;
            for (i, a) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cyc(n: usize, cycles: &[&[u32]]) -> Permutation {
        let cycles: Vec<Vec<u32>> = cycles.iter().map(|c| c.to_vec()).collect();
        Permutation::from_cycles(n, &cycles).unwrap()
    }

    #[test]
    fn from_images_validates() {
        assert!(Permutation::from_images(vec![2, 3, 1]).is_ok());
        assert_eq!(
            Permutation::from_images(vec![]),
            Err(PermError::ZeroDegree)
        );
        assert_eq!(
            Permutation::from_images(vec![1, 4, 2]),
            Err(PermError::OutOfRange { point: 4, n: 3 })
        );
        assert_eq!(
            Permutation::from_images(vec![2, 2, 1]),
            Err(PermError::DuplicatePoint { point: 2 })
        );
    }

    #[test]
    fn compose_applies_left_factor_first() {
        let f = cyc(3, &[&[1, 2, 3]]);
        let g = cyc(3, &[&[1, 2]]);
        assert_eq!(f.compose(&g), cyc(3, &[&[2, 3]]));
        let id = Permutation::identity(3);
        assert_eq!(id.compose(&f), f);
        assert_eq!(f.compose(&f.inverse()), id);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(Permutation::identity(4).inverse(), Permutation::identity(4));
        assert_eq!(cyc(3, &[&[1, 2, 3]]).inverse(), cyc(3, &[&[1, 3, 2]]));
        let swap = cyc(2, &[&[1, 2]]);
        assert_eq!(swap.inverse(), swap);
    }

    #[test]
    fn power_examples() {
        let four = cyc(4, &[&[1, 2, 3, 4]]);
        assert_eq!(four.power(0), Permutation::identity(4));
        assert_eq!(four.power(1), four);
        assert_eq!(four.power(2), cyc(4, &[&[1, 3], &[2, 4]]));
        assert_eq!(cyc(3, &[&[1, 2, 3]]).power(-1), cyc(3, &[&[1, 3, 2]]));
        assert_eq!(four.power(-3), four.power(1));
    }

    #[test]
    fn power_agrees_with_repeated_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let f = random_permutation(9, &mut rng);
            let mut acc = Permutation::identity(9);
            for e in 0..6i64 {
                assert_eq!(f.power(e), acc);
                assert_eq!(f.power(-e), acc.inverse());
                acc = acc.compose(&f);
            }
        }
    }

    #[test]
    fn hamming_examples() {
        let f = cyc(5, &[&[1, 2, 3]]);
        assert_eq!(f.hamming(&f), Frac::ZERO);
        assert_eq!(
            Permutation::identity(5).hamming(&cyc(5, &[&[1, 2]])),
            Frac::new(2, 5)
        );
        assert_eq!(
            cyc(3, &[&[1, 2, 3]]).hamming(&cyc(3, &[&[1, 3, 2]])),
            Frac::ONE
        );
    }

    #[test]
    fn cycle_decomposition_is_canonical() {
        let f = Permutation::from_images(vec![2, 3, 1, 5, 4]).unwrap();
        let d = f.cycle_decomposition();
        assert_eq!(d.cycles(), &[vec![1, 2, 3], vec![4, 5]]);
        assert_eq!(d.to_string(), "(1 2 3)(4 5)");

        let id = Permutation::identity(4);
        assert_eq!(
            id.cycle_decomposition().cycles(),
            &[vec![1], vec![2], vec![3], vec![4]]
        );

        let long = cyc(6, &[&[1, 2, 3, 4, 5, 6]]);
        assert_eq!(long.cycle_decomposition().cycles().len(), 1);
    }

    #[test]
    fn cycle_counts_include_fixed_points() {
        let f = cyc(7, &[&[1, 2, 3], &[4, 5]]);
        let counts = f.cycle_decomposition().cycle_counts();
        assert_eq!(counts.get(&1), Some(&2));
        assert_eq!(counts.get(&2), Some(&1));
        assert_eq!(counts.get(&3), Some(&1));
    }

    #[test]
    fn from_cycles_examples() {
        assert_eq!(
            Permutation::from_cycles(3, &[]).unwrap(),
            Permutation::identity(3)
        );
        assert_eq!(
            Permutation::from_cycles(5, &[vec![1, 2, 3], vec![4, 5]])
                .unwrap()
                .images(),
            &[2, 3, 1, 5, 4]
        );
        assert_eq!(
            Permutation::from_cycles(3, &[vec![1, 2], vec![2, 3]]),
            Err(PermError::DuplicatePoint { point: 2 })
        );
    }

    #[test]
    fn decomposition_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let f = random_permutation(12, &mut rng);
            assert_eq!(f.cycle_decomposition().to_permutation(), f);
        }
    }

    #[test]
    fn random_permutation_is_deterministic_per_seed() {
        assert_eq!(
            random_permutation(1, &mut ChaCha8Rng::seed_from_u64(0)),
            Permutation::identity(1)
        );
        let a = random_permutation(20, &mut ChaCha8Rng::seed_from_u64(42));
        let b = random_permutation(20, &mut ChaCha8Rng::seed_from_u64(42));
        assert_eq!(a, b);
    }

    #[test]
    fn random_permutation_is_roughly_uniform() {
        // 10^5 draws from S_4: each of the 24 permutations has expected count
        // 10^5/24 ≈ 4166.7 with σ = √(Np(1-p)) ≈ 63.2; allow 3σ.
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut counts = std::collections::HashMap::new();
        let draws = 100_000;
        for _ in 0..draws {
            let f = random_permutation(4, &mut rng);
            *counts.entry(f.images().to_vec()).or_insert(0u64) += 1;
        }
        assert_eq!(counts.len(), 24);
        let expected = draws as f64 / 24.0;
        let sigma = (draws as f64 * (1.0 / 24.0) * (23.0 / 24.0)).sqrt();
        for &count in counts.values() {
            assert!(
                (count as f64 - expected).abs() <= 3.0 * sigma,
                "count {count} outside 3σ of {expected}"
            );
        }
    }
}
