//! Reproduction experiments: decay of the approximate-root defect as the
//! degree grows, and repair distance as a function of the corruption rate on
//! planted regular-action solutions. All randomness comes from a caller
//! -supplied seed; identical seeds give identical rows.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::equations::{EquationSystem, EvalError, PermTuple, TupleError};
use crate::frac::Frac;
use crate::perm::{random_permutation, Permutation};
use crate::roots::{approx_root, RootError};
use crate::stability::{bad_set_bound, repair_auto, RepairError, RepairResult};

/// Experiment setup failures and propagated computation errors.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExperimentError {
    #[error("unknown preset {name:?} (expected \"s3\" or \"cyclicM\")")]
    UnknownPreset { name: String },
    #[error("preset {preset:?} needs a degree divisible by {modulus}, got {n}")]
    BadPresetDegree {
        preset: String,
        modulus: u64,
        n: u64,
    },
    #[error("parameter grid must be nonempty with a positive sample count")]
    EmptyGrid,
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Repair(#[from] RepairError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Tuple(#[from] TupleError),
}

/// A bundled finite-group system together with its planted regular-action
/// solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Preset {
    /// `x1² = x2² = (x1 x2)³ = 1`, solved by the regular action of the
    /// symmetric group on three letters (order 6).
    S3,
    /// `x1^m = 1`, solved by the rotation of order `m`.
    Cyclic(u64),
}

impl Preset {
    /// Parses `"s3"` or `"cyclicM"` with `M ≥ 1` (e.g. `"cyclic3"`).
    pub fn parse(name: &str) -> Result<Preset, ExperimentError> {
        if name == "s3" {
            return Ok(Preset::S3);
        }
        if let Some(m) = name.strip_prefix("cyclic") {
            if let Ok(m) = m.parse::<u64>() {
                if m >= 1 {
                    return Ok(Preset::Cyclic(m));
                }
            }
        }
        Err(ExperimentError::UnknownPreset {
            name: name.to_string(),
        })
    }

    pub fn name(&self) -> String {
        match self {
            Preset::S3 => "s3".to_string(),
            Preset::Cyclic(m) => format!("cyclic{m}"),
        }
    }

    pub fn system(&self) -> EquationSystem {
        let text = match self {
            Preset::S3 => "x1^2 =\nx2^2 =\nx1 x2 x1 x2 x1 x2 =".to_string(),
            Preset::Cyclic(m) => format!("x1^{m} ="),
        };
        text.parse().expect("preset systems are well-formed")
    }

    /// Number of generators `k`.
    pub fn generators(&self) -> u64 {
        match self {
            Preset::S3 => 2,
            Preset::Cyclic(_) => 1,
        }
    }

    /// Number of relations `r`.
    pub fn relations(&self) -> u64 {
        match self {
            Preset::S3 => 3,
            Preset::Cyclic(_) => 1,
        }
    }

    /// The degree must be a multiple of this group order.
    pub fn modulus(&self) -> u64 {
        match self {
            Preset::S3 => 6,
            Preset::Cyclic(m) => *m,
        }
    }

    /// The planted exact solution on `n` points: the group's right-
    /// multiplication action on itself, repeated across `n / order` copies.
    pub fn planted(&self, n: usize) -> Result<PermTuple, ExperimentError> {
        let modulus = self.modulus();
        if n == 0 || !(n as u64).is_multiple_of(modulus) {
            return Err(ExperimentError::BadPresetDegree {
                preset: self.name(),
                modulus,
                n: n as u64,
            });
        }
        match self {
            Preset::S3 => {
                let elements = s3_elements();
                let copies = n / 6;
                let a = &elements[2]; // the transposition (1 2)
                let b = &elements[1]; // the transposition (2 3)
                let f1 = regular_action(&elements, a, copies);
                let f2 = regular_action(&elements, b, copies);
                Ok(PermTuple::new(vec![f1, f2])?)
            }
            Preset::Cyclic(m) => {
                let step = n / *m as usize;
                let images: Vec<u32> =
                    (0..n).map(|x| ((x + step) % n) as u32 + 1).collect();
                let rotation =
                    Permutation::from_images(images).expect("rotations are bijections");
                Ok(PermTuple::new(vec![rotation])?)
            }
        }
    }
}

/// The six permutations of three letters in lexicographic image order.
fn s3_elements() -> Vec<Permutation> {
    [
        [1, 2, 3],
        [1, 3, 2],
        [2, 1, 3],
        [2, 3, 1],
        [3, 1, 2],
        [3, 2, 1],
    ]
    .into_iter()
    .map(|images| Permutation::from_images(images.to_vec()).expect("listed bijections"))
    .collect()
}

/// Right multiplication by `gen` on `copies` disjoint copies of the group:
/// point `c·|G| + i + 1` holds element `i` of copy `c` and moves to the
/// index of `element_i · gen`.
fn regular_action(elements: &[Permutation], gen: &Permutation, copies: usize) -> Permutation {
    let order = elements.len();
    let mut target = vec![0usize; order];
    for (i, h) in elements.iter().enumerate() {
        let product = h.compose(gen);
        target[i] = elements
            .iter()
            .position(|e| *e == product)
            .expect("the element list is closed under multiplication");
    }
    let mut images = Vec::with_capacity(order * copies);
    for copy in 0..copies {
        for &t in &target {
            images.push((copy * order + t) as u32 + 1);
        }
    }
    Permutation::from_images(images).expect("blockwise action of a bijection")
}

/// Corrupts roughly `images` image slots of the tuple by `⌈images/2⌉` random
/// transposition swaps applied round-robin across the generators. Each swap
/// changes exactly two slots of one generator (a single permutation can
/// never differ from another in exactly one point), so the realized defect
/// is measured afterwards rather than assumed.
pub fn corrupt_tuple<R: Rng + ?Sized>(t: &PermTuple, images: u64, rng: &mut R) -> PermTuple {
    let n = t.degree();
    let mut slots: Vec<Vec<u32>> = t.perms().iter().map(|f| f.images().to_vec()).collect();
    let swaps = images.div_ceil(2);
    let k = slots.len() as u64;
    for s in 0..swaps {
        let target = &mut slots[(s % k) as usize];
        let a = rng.gen_range(0..n);
        let mut b = rng.gen_range(0..n);
        while b == a {
            b = rng.gen_range(0..n);
        }
        target.swap(a, b);
    }
    let perms = slots
        .into_iter()
        .map(|images| Permutation::from_images(images).expect("swaps preserve bijectivity"))
        .collect();
    PermTuple::new(perms).expect("same shape as the input tuple")
}

/// One row of the root-defect experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct RootsRow {
    pub p: u64,
    pub n: u64,
    pub seed: u64,
    pub samples: u64,
    pub mean: Frac,
    pub max: Frac,
    /// A-priori bound for this (p, n), for the table only; the per-sample
    /// adherence is certified exactly during the run.
    pub bound: f64,
}

/// Approximate-root defect statistics over uniformly random permutations,
/// one row per degree in `ns`.
pub fn run_roots(
    p: u64,
    ns: &[u64],
    samples: u64,
    seed: u64,
) -> Result<Vec<RootsRow>, ExperimentError> {
    if ns.is_empty() || samples == 0 {
        return Err(ExperimentError::EmptyGrid);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let mut sum = Frac::ZERO;
        let mut max = Frac::ZERO;
        let mut bound = 0.0f64;
        for _ in 0..samples {
            let f = random_permutation(n as usize, &mut rng);
            let result = approx_root(&f, p)?;
            debug_assert!(result.defect_within_bound());
            sum = sum + result.defect;
            max = max.max(result.defect);
            bound = result.bound.to_f64();
        }
        rows.push(RootsRow {
            p,
            n,
            seed,
            samples,
            mean: sum * Frac::new(1, samples),
            max,
            bound,
        });
    }
    Ok(rows)
}

/// One corruption-and-repair trial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityTrial {
    /// Defect of the corrupted tuple before repair.
    pub measured_defect: Frac,
    pub repair: RepairResult,
}

/// Plants the preset's solution, corrupts `⌈eps·n⌉` image slots, and repairs.
pub fn stability_trial<R: Rng + ?Sized>(
    preset: &Preset,
    n: u64,
    eps: Frac,
    m_max: u32,
    rng: &mut R,
) -> Result<StabilityTrial, ExperimentError> {
    let sys = preset.system();
    let planted = preset.planted(n as usize)?;
    let images = ceil_mul(eps, n);
    let corrupted = corrupt_tuple(&planted, images, rng);
    let measured_defect = sys.defect(&corrupted)?;
    let repair = repair_auto(&sys, &corrupted, m_max)?;
    Ok(StabilityTrial {
        measured_defect,
        repair,
    })
}

/// `⌈eps · n⌉` in integer arithmetic.
fn ceil_mul(eps: Frac, n: u64) -> u64 {
    let num = eps.num() as u128 * n as u128;
    let den = eps.den() as u128;
    num.div_ceil(den) as u64
}

/// One row of the corruption-vs-repair-distance experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityRow {
    pub preset: String,
    pub n: u64,
    pub eps: Frac,
    pub seed: u64,
    pub samples: u64,
    /// Mean and max over samples of the repair's max per-generator distance.
    pub mean: Frac,
    pub max: Frac,
    /// Largest per-sample a-priori distance bound
    /// `bad_set_bound(defect, k, r, radius, n)/n` observed in the row.
    pub bound: f64,
}

/// Repair-distance statistics on corrupted planted solutions, one row per
/// corruption rate in `epses`.
pub fn run_stability(
    preset: &Preset,
    n: u64,
    epses: &[Frac],
    samples: u64,
    seed: u64,
    m_max: u32,
) -> Result<Vec<StabilityRow>, ExperimentError> {
    if epses.is_empty() || samples == 0 {
        return Err(ExperimentError::EmptyGrid);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(epses.len());
    for &eps in epses {
        let mut sum = Frac::ZERO;
        let mut max = Frac::ZERO;
        let mut bound = Frac::ZERO;
        for _ in 0..samples {
            let trial = stability_trial(preset, n, eps, m_max, &mut rng)?;
            let distance = trial.repair.max_distance;
            sum = sum + distance;
            max = max.max(distance);
            let trial_bound = bad_set_bound(
                trial.measured_defect,
                preset.generators(),
                preset.relations(),
                trial.repair.radius_used,
                n,
            ) * Frac::new(1, n);
            bound = bound.max(trial_bound);
        }
        rows.push(StabilityRow {
            preset: preset.name(),
            n,
            eps,
            seed,
            samples,
            mean: sum * Frac::new(1, samples),
            max,
            bound: bound.to_f64(),
        });
    }
    Ok(rows)
}

/// CSV with header `p,n,seed,samples,mean,max,bound`.
pub fn roots_csv(rows: &[RootsRow]) -> String {
    let mut out = String::from("p,n,seed,samples,mean,max,bound\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.p,
            row.n,
            row.seed,
            row.samples,
            row.mean.to_f64(),
            row.max.to_f64(),
            row.bound
        ));
    }
    out
}

/// CSV with header `preset,n,eps,seed,samples,mean,max,bound`.
pub fn stability_csv(rows: &[StabilityRow]) -> String {
    let mut out = String::from("preset,n,eps,seed,samples,mean,max,bound\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            row.preset,
            row.n,
            row.eps.to_f64(),
            row.seed,
            row.samples,
            row.mean.to_f64(),
            row.max.to_f64(),
            row.bound
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_parsing() {
        assert_eq!(Preset::parse("s3").unwrap(), Preset::S3);
        assert_eq!(Preset::parse("cyclic5").unwrap(), Preset::Cyclic(5));
        assert!(matches!(
            Preset::parse("cyclic0"),
            Err(ExperimentError::UnknownPreset { .. })
        ));
        assert!(matches!(
            Preset::parse("d4"),
            Err(ExperimentError::UnknownPreset { .. })
        ));
        assert_eq!(Preset::Cyclic(7).name(), "cyclic7");
    }

    #[test]
    fn planted_solutions_are_exact() {
        for (preset, n) in [
            (Preset::S3, 6),
            (Preset::S3, 60),
            (Preset::Cyclic(3), 12),
            (Preset::Cyclic(5), 5),
            (Preset::Cyclic(1), 4),
        ] {
            let sys = preset.system();
            let t = preset.planted(n).unwrap();
            assert_eq!(t.degree(), n);
            assert_eq!(t.len() as u64, preset.generators());
            assert_eq!(sys.relation_count() as u64, preset.relations());
            assert_eq!(sys.defect(&t).unwrap(), Frac::ZERO, "{}", preset.name());
        }
    }

    #[test]
    fn planted_degree_must_match_group_order() {
        assert!(matches!(
            Preset::S3.planted(10),
            Err(ExperimentError::BadPresetDegree { modulus: 6, .. })
        ));
        assert!(matches!(
            Preset::Cyclic(4).planted(6),
            Err(ExperimentError::BadPresetDegree { modulus: 4, .. })
        ));
    }

    #[test]
    fn s3_generators_have_the_advertised_orders() {
        let t = Preset::S3.planted(12).unwrap();
        let f1 = &t.perms()[0];
        let f2 = &t.perms()[1];
        assert!(f1.power(2).is_identity());
        assert!(f2.power(2).is_identity());
        assert!(!f1.is_identity() && !f2.is_identity());
        let product = f1.compose(f2);
        assert!(product.power(3).is_identity());
        assert!(!product.power(1).is_identity());
    }

    #[test]
    fn corruption_changes_the_requested_slots() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let planted = Preset::S3.planted(60).unwrap();
        let corrupted = corrupt_tuple(&planted, 6, &mut rng);
        let changed: u64 = planted
            .perms()
            .iter()
            .zip(corrupted.perms())
            .map(|(a, b)| {
                a.images()
                    .iter()
                    .zip(b.images())
                    .filter(|(x, y)| x != y)
                    .count() as u64
            })
            .sum();
        assert!((2..=6).contains(&changed), "changed {changed} slots");

        let untouched = corrupt_tuple(&planted, 0, &mut rng);
        assert_eq!(untouched, planted);
    }

    #[test]
    fn roots_rows_are_deterministic_per_seed() {
        let a = run_roots(2, &[40, 60], 5, 99).unwrap();
        let b = run_roots(2, &[40, 60], 5, 99).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 2);
        assert_eq!(a[0].n, 40);
        assert!(a[0].max >= a[0].mean);
        assert!(a[0].max.to_f64() <= a[0].bound);
        assert_eq!(roots_csv(&a), roots_csv(&b));
        assert!(roots_csv(&a).starts_with("p,n,seed,samples,mean,max,bound\n"));
    }

    #[test]
    fn roots_rejects_empty_grids() {
        assert!(matches!(
            run_roots(2, &[], 5, 0),
            Err(ExperimentError::EmptyGrid)
        ));
        assert!(matches!(
            run_roots(2, &[10], 0, 0),
            Err(ExperimentError::EmptyGrid)
        ));
    }

    #[test]
    fn stability_rows_zero_out_without_corruption() {
        let rows = run_stability(&Preset::S3, 60, &[Frac::ZERO], 3, 7, 6).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].mean, Frac::ZERO);
        assert_eq!(rows[0].max, Frac::ZERO);
        assert_eq!(rows[0].bound, 0.0);
    }

    #[test]
    fn stability_rows_are_deterministic_and_bounded() {
        let eps = Frac::new(1, 20);
        let a = run_stability(&Preset::S3, 120, &[eps], 10, 5, 8).unwrap();
        let b = run_stability(&Preset::S3, 120, &[eps], 10, 5, 8).unwrap();
        assert_eq!(a, b);
        assert!(a[0].max.to_f64() <= a[0].bound + 1e-12);
        assert_eq!(stability_csv(&a), stability_csv(&b));
        assert!(
            stability_csv(&a).starts_with("preset,n,eps,seed,samples,mean,max,bound\n")
        );
    }

    #[test]
    fn stability_trials_repair_to_exact_solutions() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let sys = Preset::S3.system();
        for _ in 0..5 {
            let trial =
                stability_trial(&Preset::S3, 60, Frac::new(1, 30), 8, &mut rng).unwrap();
            assert!(sys.is_exact_solution(&trial.repair.repaired).unwrap());
            assert!(
                trial.repair.max_distance
                    <= Frac::new(trial.repair.bad_count, 60)
            );
        }
    }

    #[test]
    fn ceil_mul_rounds_up() {
        assert_eq!(ceil_mul(Frac::new(1, 1000), 600), 1);
        assert_eq!(ceil_mul(Frac::new(1, 100), 600), 6);
        assert_eq!(ceil_mul(Frac::ZERO, 600), 0);
        assert_eq!(ceil_mul(Frac::new(1, 20), 600), 30);
    }
}
