//! Repair of almost-solutions: classify the points where a relation system
//! fails, blow the failing set up to its m-neighborhood in the edge-colored
//! graph of the tuple, and replace the tuple by one that fixes every bad
//! point. If the good points are closed under the tuple, the result is an
//! exact solution whose distance is controlled by the bad-set size.

use std::collections::BTreeSet;

use crate::equations::{EquationSystem, EvalError, PermTuple};
use crate::frac::Frac;
use crate::perm::Permutation;

/// Outcome of a successful repair, with diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairResult {
    /// The exact solution: identity on bad points, unchanged elsewhere.
    pub repaired: PermTuple,
    /// The radius `m` at which the repair validated.
    pub radius_used: u32,
    /// `|M|`: points where some relation fails pointwise.
    pub failing_count: u64,
    /// `|M*|`: points within distance `m` of `M`.
    pub bad_count: u64,
    /// Per-generator distances `h(f_i, f̃_i)`.
    pub distances: Vec<Frac>,
    /// Largest per-generator distance; at most `bad_count / n`.
    pub max_distance: Frac,
}

/// Why a repair attempt was rejected.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RepairError {
    #[error(
        "radius too small: good point {point} maps into the bad set under generator x{generator}"
    )]
    NotClosed { generator: usize, point: u32 },
    #[error("radius too small: repaired tuple still has defect {defect}")]
    StillFailing { defect: Frac },
    #[error("no radius up to {m_max} produced a valid repair")]
    Exhausted { m_max: u32 },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Points reachable from `a` in at most `m` steps along any `f_j` or
/// `f_j^{-1}`.
pub fn neighborhood(t: &PermTuple, a: u32, m: u32) -> Result<BTreeSet<u32>, EvalError> {
    let n = t.degree();
    if a == 0 || a as usize > n {
        return Err(EvalError::PointOutOfRange { point: a, n });
    }
    let mask = grow(t, &[a], m);
    Ok(collect_points(&mask))
}

/// `M`: the points where some relation's two sides disagree.
pub fn failing_vertices(
    sys: &EquationSystem,
    t: &PermTuple,
) -> Result<BTreeSet<u32>, EvalError> {
    Ok(collect_points(&failing_mask(sys, t)?))
}

/// `M*`: the union of m-neighborhoods of the failing points. Monotone
/// nondecreasing in `m` and always contains `M`.
pub fn bad_vertices(
    sys: &EquationSystem,
    t: &PermTuple,
    m: u32,
) -> Result<BTreeSet<u32>, EvalError> {
    let seeds = collect_points(&failing_mask(sys, t)?);
    let seeds: Vec<u32> = seeds.into_iter().collect();
    Ok(collect_points(&grow(t, &seeds, m)))
}

fn failing_mask(sys: &EquationSystem, t: &PermTuple) -> Result<Vec<bool>, EvalError> {
    if t.len() != sys.arity() {
        return Err(EvalError::TupleArity {
            expected: sys.arity(),
            actual: t.len(),
        });
    }
    let n = t.degree();
    let mut mask = vec![false; n];
    for (w, u) in sys.relations() {
        let lhs = w.evaluate(t)?;
        let rhs = u.evaluate(t)?;
        for (slot, (a, b)) in lhs.images().iter().zip(rhs.images()).enumerate() {
            if a != b {
                mask[slot] = true;
            }
        }
    }
    Ok(mask)
}

/// Breadth-first closure of `seeds` to distance `m` along all generators and
/// their inverses; returns a membership mask.
fn grow(t: &PermTuple, seeds: &[u32], m: u32) -> Vec<bool> {
    let n = t.degree();
    let inverses: Vec<Permutation> = t.perms().iter().map(|f| f.inverse()).collect();
    let mut mask = vec![false; n];
    let mut frontier: Vec<u32> = Vec::new();
    for &a in seeds {
        if !mask[a as usize - 1] {
            mask[a as usize - 1] = true;
            frontier.push(a);
        }
    }
    for _ in 0..m {
        if frontier.is_empty() {
            break;
        }
        let mut next = Vec::new();
        for &a in &frontier {
            for f in t.perms().iter().chain(&inverses) {
                let b = f.apply(a);
                if !mask[b as usize - 1] {
                    mask[b as usize - 1] = true;
                    next.push(b);
                }
            }
        }
        frontier = next;
    }
    mask
}

fn collect_points(mask: &[bool]) -> BTreeSet<u32> {
    mask.iter()
        .enumerate()
        .filter(|(_, &bad)| bad)
        .map(|(slot, _)| slot as u32 + 1)
        .collect()
}

/// Repairs `t` at radius `m`: every point of `M*` becomes a fixed point of
/// every generator, all other images are kept. Fails with `NotClosed` if a
/// kept image lands in `M*` (the result would not be a bijection) and with
/// `StillFailing` if the rebuilt tuple does not solve the system exactly.
pub fn repair(
    sys: &EquationSystem,
    t: &PermTuple,
    m: u32,
) -> Result<RepairResult, RepairError> {
    let failing = failing_mask(sys, t)?;
    let failing_count = failing.iter().filter(|&&b| b).count() as u64;
    let seeds: Vec<u32> = collect_points(&failing).into_iter().collect();
    let bad = grow(t, &seeds, m);
    let bad_count = bad.iter().filter(|&&b| b).count() as u64;
    let n = t.degree();

    let mut repaired = Vec::with_capacity(t.len());
    for (i, f) in t.perms().iter().enumerate() {
        let mut images = Vec::with_capacity(n);
        for a in 1..=n as u32 {
            if bad[a as usize - 1] {
                images.push(a);
            } else {
                let b = f.apply(a);
                if bad[b as usize - 1] {
                    return Err(RepairError::NotClosed {
                        generator: i + 1,
                        point: a,
                    });
                }
                images.push(b);
            }
        }
        repaired.push(Permutation::from_images(images).expect(
            "good points map onto good points, so the repaired images are a bijection",
        ));
    }
    let repaired = PermTuple::new(repaired).expect("same shape as the input tuple");

    let defect = sys.defect(&repaired)?;
    if !defect.is_zero() {
        return Err(RepairError::StillFailing { defect });
    }

    let distances: Vec<Frac> = t
        .perms()
        .iter()
        .zip(repaired.perms())
        .map(|(f, g)| f.hamming(g))
        .collect();
    let max_distance = distances.iter().copied().max().unwrap_or(Frac::ZERO);
    Ok(RepairResult {
        repaired,
        radius_used: m,
        failing_count,
        bad_count,
        distances,
        max_distance,
    })
}

/// Tries `repair` at radii `0, 1, …, m_max` and returns the first success.
pub fn repair_auto(
    sys: &EquationSystem,
    t: &PermTuple,
    m_max: u32,
) -> Result<RepairResult, RepairError> {
    for m in 0..=m_max {
        match repair(sys, t, m) {
            Ok(result) => return Ok(result),
            Err(RepairError::NotClosed { .. }) | Err(RepairError::StillFailing { .. }) => {}
            Err(other) => return Err(other),
        }
    }
    Err(RepairError::Exhausted { m_max })
}

/// A-priori bound on `|M*|` for an ε-solution of a system with `k`
/// generators and `r` relations repaired at radius `m`: `ε·r·n·B(k, m)`,
/// where `B(k, m) = 1 + Σ_{j=1..m} 2k(2k−1)^{j−1}` bounds the size of an
/// m-ball in a 2k-regular graph. Saturates instead of overflowing.
pub fn bad_set_bound(eps: Frac, k: u64, r: u64, m: u32, n: u64) -> Frac {
    assert!(k >= 1, "at least one generator");
    let mut ball: u128 = 1;
    let mut shell: u128 = 2 * k as u128;
    for _ in 0..m {
        ball = ball.saturating_add(shell);
        shell = shell.saturating_mul(2 * k as u128 - 1);
    }
    let ball = u64::try_from(ball).unwrap_or(u64::MAX);
    eps * r * n * ball
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, cycles: &[&[u32]]) -> Permutation {
        let cycles: Vec<Vec<u32>> = cycles.iter().map(|c| c.to_vec()).collect();
        Permutation::from_cycles(n, &cycles).unwrap()
    }

    fn single(f: Permutation) -> PermTuple {
        PermTuple::new(vec![f]).unwrap()
    }

    fn involution_system() -> EquationSystem {
        "x1^2 =".parse().unwrap()
    }

    fn points(set: &[u32]) -> BTreeSet<u32> {
        set.iter().copied().collect()
    }

    #[test]
    fn neighborhood_examples() {
        let t = single(cyc(6, &[&[1, 2, 3, 4, 5, 6]]));
        assert_eq!(neighborhood(&t, 3, 0).unwrap(), points(&[3]));
        assert_eq!(neighborhood(&t, 3, 1).unwrap(), points(&[2, 3, 4]));
        assert_eq!(
            neighborhood(&t, 3, 9).unwrap(),
            points(&[1, 2, 3, 4, 5, 6])
        );

        let idle = single(Permutation::identity(6));
        for m in 0..4 {
            assert_eq!(neighborhood(&idle, 2, m).unwrap(), points(&[2]));
        }

        assert_eq!(
            neighborhood(&t, 7, 1),
            Err(EvalError::PointOutOfRange { point: 7, n: 6 })
        );
    }

    #[test]
    fn failing_vertices_examples() {
        let sys = involution_system();
        assert!(failing_vertices(&sys, &single(cyc(3, &[&[1, 2]])))
            .unwrap()
            .is_empty());
        assert_eq!(
            failing_vertices(&sys, &single(cyc(3, &[&[1, 2, 3]]))).unwrap(),
            points(&[1, 2, 3])
        );
        assert!(
            failing_vertices(&sys, &single(cyc(5, &[&[1, 2], &[4, 5]])))
                .unwrap()
                .is_empty()
        );
    }

    #[test]
    fn bad_vertices_examples() {
        let sys = involution_system();
        let exact = single(cyc(4, &[&[1, 2]]));
        for m in 0..3 {
            assert!(bad_vertices(&sys, &exact, m).unwrap().is_empty());
        }

        let t = single(cyc(3, &[&[1, 2, 3]]));
        assert_eq!(bad_vertices(&sys, &t, 1).unwrap(), points(&[1, 2, 3]));

        // The failing 3-cycle is closed under f and f^-1, so it absorbs
        // nothing at any radius.
        let u = single(cyc(6, &[&[1, 2], &[3, 4, 5]]));
        assert_eq!(failing_vertices(&sys, &u).unwrap(), points(&[3, 4, 5]));
        assert_eq!(bad_vertices(&sys, &u, 1).unwrap(), points(&[3, 4, 5]));
        assert_eq!(bad_vertices(&sys, &u, 5).unwrap(), points(&[3, 4, 5]));
    }

    #[test]
    fn bad_vertices_are_monotone_in_radius() {
        let sys: EquationSystem = "x1 x2 = x2 x1".parse().unwrap();
        let t = PermTuple::new(vec![cyc(7, &[&[1, 2, 3, 4, 5]]), cyc(7, &[&[1, 2]])]).unwrap();
        let mut previous = BTreeSet::new();
        for m in 0..5 {
            let current = bad_vertices(&sys, &t, m).unwrap();
            assert!(previous.is_subset(&current));
            previous = current;
        }
    }

    #[test]
    fn repair_leaves_exact_solutions_alone() {
        let sys = involution_system();
        let t = single(cyc(4, &[&[1, 2], &[3, 4]]));
        for m in 0..3 {
            let result = repair(&sys, &t, m).unwrap();
            assert_eq!(result.repaired, t);
            assert_eq!(result.failing_count, 0);
            assert_eq!(result.bad_count, 0);
            assert_eq!(result.max_distance, Frac::ZERO);
        }
        let auto = repair_auto(&sys, &t, 5).unwrap();
        assert_eq!(auto.radius_used, 0);
    }

    #[test]
    fn repair_flattens_a_bad_cycle() {
        let sys = involution_system();
        let t = single(cyc(5, &[&[1, 2], &[3, 4, 5]]));
        let result = repair(&sys, &t, 1).unwrap();
        assert_eq!(result.repaired.perms()[0], cyc(5, &[&[1, 2]]));
        assert_eq!(result.failing_count, 3);
        assert_eq!(result.bad_count, 3);
        assert_eq!(result.max_distance, Frac::new(3, 5));
        assert!(sys.is_exact_solution(&result.repaired).unwrap());
    }

    #[test]
    fn repair_of_a_totally_failing_tuple_yields_the_identity() {
        // Every point of a 6-cycle violates x1^2 = 1, so M* is everything
        // already at radius 0 and the repaired generator is the identity —
        // a valid involution at distance 1.
        let sys = involution_system();
        let t = single(cyc(6, &[&[1, 2, 3, 4, 5, 6]]));
        let result = repair(&sys, &t, 0).unwrap();
        assert_eq!(result.repaired.perms()[0], Permutation::identity(6));
        assert_eq!(result.failing_count, 6);
        assert_eq!(result.bad_count, 6);
        assert_eq!(result.max_distance, Frac::ONE);
    }

    #[test]
    fn repair_detects_non_closed_bad_sets() {
        // fg ≠ gf exactly on {1, 2, 5}; at radius 0 the good point 4 still
        // maps into the bad set under f, so the repair is rejected.
        let sys: EquationSystem = "x1 x2 = x2 x1".parse().unwrap();
        let t = PermTuple::new(vec![cyc(5, &[&[1, 2, 3, 4, 5]]), cyc(5, &[&[1, 2]])]).unwrap();
        assert_eq!(
            failing_vertices(&sys, &t).unwrap(),
            points(&[1, 2, 5])
        );
        assert_eq!(
            repair(&sys, &t, 0),
            Err(RepairError::NotClosed {
                generator: 1,
                point: 4
            })
        );

        // Radius 1 absorbs everything; both generators become the identity.
        let result = repair_auto(&sys, &t, 3).unwrap();
        assert_eq!(result.radius_used, 1);
        assert_eq!(result.bad_count, 5);
        assert_eq!(result.repaired.perms()[0], Permutation::identity(5));
        assert_eq!(result.repaired.perms()[1], Permutation::identity(5));
        assert_eq!(result.max_distance, Frac::ONE);
        assert_eq!(result.distances[1], Frac::new(2, 5));

        assert_eq!(
            repair_auto(&sys, &t, 0),
            Err(RepairError::Exhausted { m_max: 0 })
        );
    }

    #[test]
    fn successful_repairs_have_invariant_good_sets() {
        let sys = involution_system();
        let t = single(cyc(9, &[&[1, 2], &[3, 4, 5], &[6, 7, 8]]));
        let result = repair_auto(&sys, &t, 4).unwrap();
        let bad = bad_vertices(&sys, &t, result.radius_used).unwrap();
        for f in t.perms() {
            for a in 1..=9u32 {
                if !bad.contains(&a) {
                    assert!(!bad.contains(&f.apply(a)));
                    assert!(!bad.contains(&f.inverse().apply(a)));
                }
            }
        }
    }

    #[test]
    fn arity_mismatch_is_reported() {
        let sys: EquationSystem = "x1 x2 = x2 x1".parse().unwrap();
        let t = single(cyc(3, &[&[1, 2]]));
        assert!(matches!(
            repair(&sys, &t, 0),
            Err(RepairError::Eval(EvalError::TupleArity { .. }))
        ));
        assert!(matches!(
            repair_auto(&sys, &t, 3),
            Err(RepairError::Eval(EvalError::TupleArity { .. }))
        ));
    }

    #[test]
    fn bad_set_bound_examples() {
        assert_eq!(bad_set_bound(Frac::ZERO, 2, 3, 4, 1000), Frac::ZERO);
        // m = 0: the bound is ε·r·n.
        assert_eq!(
            bad_set_bound(Frac::new(1, 100), 2, 3, 0, 600),
            Frac::from(18u64)
        );
        // k = 2, m = 2: ball size 1 + 4 + 12 = 17.
        assert_eq!(
            bad_set_bound(Frac::new(1, 100), 2, 3, 2, 600),
            Frac::from(306u64)
        );
        // k = 1 degenerates to the path ball 2m + 1.
        assert_eq!(
            bad_set_bound(Frac::ONE, 1, 1, 3, 10),
            Frac::from(70u64)
        );
    }

    #[test]
    fn bad_set_bound_saturates() {
        let huge = bad_set_bound(Frac::ONE, 10, 1, 40, u64::MAX);
        assert!(huge >= Frac::from(u64::MAX));
    }
}
