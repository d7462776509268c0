//! Permutations, approximate roots, and relation systems over symmetric
//! groups.
//!
//! The crate provides:
//!
//! * exact permutation arithmetic with the normalized Hamming metric kept as
//!   a rational number ([`perm`], [`frac`]);
//! * exact and approximate p-th roots of permutations, with certified defect
//!   bounds ([`roots`]);
//! * word-equation systems over symmetric groups, vertex-level defect
//!   analysis, and a repair procedure that converts near-solutions into
//!   exact ones ([`equations`], [`stability`]);
//! * a checker for approximate representations of partially defined groups
//!   by permutations ([`sofic`]);
//! * brute-force oracles for small degrees, used to validate the fast paths
//!   ([`oracle`]);
//! * seeded experiment drivers with CSV output ([`experiment`]) and
//!   line-oriented text formats for every object ([`io`]).

pub mod equations;
pub mod experiment;
pub mod frac;
pub mod io;
pub mod oracle;
pub mod perm;
pub mod roots;
pub mod sofic;
pub mod stability;

pub use equations::{EquationSystem, PermTuple, Word};
pub use frac::Frac;
pub use perm::{CycleDecomposition, Permutation};
pub use roots::{approx_root, exact_root, exact_root_exists, ApproxRootResult};
pub use stability::{repair, repair_auto, RepairResult};
