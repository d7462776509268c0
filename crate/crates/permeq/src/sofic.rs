//! Checker for approximate representations of partial group tables in
//! symmetric groups: a map φ from a finite label set into S_n is graded on
//! how multiplicative it is, whether it sends the unit to the identity, and
//! how far every non-unit image stays from the identity.

use std::collections::BTreeMap;

use crate::frac::Frac;
use crate::perm::Permutation;

/// A finite label set with a partial multiplication and an optional unit.
/// Elements are kept sorted, so equal tables compare equal regardless of
/// declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialGroupTable {
    elements: Vec<String>,
    unit: Option<String>,
    products: BTreeMap<(String, String), String>,
}

/// Inconsistent table data.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TableError {
    #[error("element {label:?} declared more than once")]
    DuplicateElement { label: String },
    #[error("label {label:?} is not a declared element")]
    UnknownElement { label: String },
    #[error("unit row broken: {left:?} * {right:?} = {got:?}")]
    BadUnitRow {
        left: String,
        right: String,
        got: String,
    },
}

/// Checker failures.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SoficError {
    #[error("no image for element {label:?}")]
    MissingImage { label: String },
    #[error("image of {label:?} has degree {actual}, expected {expected}")]
    DegreeMismatch {
        label: String,
        expected: usize,
        actual: usize,
    },
    #[error("product {left:?} * {right:?} is not defined in the table")]
    ProductUndefined { left: String, right: String },
    #[error("label {label:?} is not a table element")]
    UnknownElement { label: String },
    #[error("word must have at least one letter")]
    EmptyWord,
    #[error("degree {n} is not a multiple of the group order {m}")]
    DegreeNotDivisible { m: u64, n: usize },
}

impl PartialGroupTable {
    /// Validates that products and the unit only mention declared elements
    /// and that every defined product with the unit is trivial.
    pub fn new(
        elements: Vec<String>,
        unit: Option<String>,
        products: BTreeMap<(String, String), String>,
    ) -> Result<PartialGroupTable, TableError> {
        let mut seen = std::collections::BTreeSet::new();
        for label in &elements {
            if !seen.insert(label.clone()) {
                return Err(TableError::DuplicateElement {
                    label: label.clone(),
                });
            }
        }
        let known = |label: &String| -> Result<(), TableError> {
            if seen.contains(label) {
                Ok(())
            } else {
                Err(TableError::UnknownElement {
                    label: label.clone(),
                })
            }
        };
        if let Some(e) = &unit {
            known(e)?;
        }
        for ((a, b), c) in &products {
            known(a)?;
            known(b)?;
            known(c)?;
            if let Some(e) = &unit {
                let violates = (a == e && c != b) || (b == e && c != a);
                if violates {
                    return Err(TableError::BadUnitRow {
                        left: a.clone(),
                        right: b.clone(),
                        got: c.clone(),
                    });
                }
            }
        }
        let mut elements = elements;
        elements.sort();
        Ok(PartialGroupTable {
            elements,
            unit,
            products,
        })
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn unit(&self) -> Option<&str> {
        self.unit.as_deref()
    }

    pub fn products(&self) -> &BTreeMap<(String, String), String> {
        &self.products
    }

    pub fn product(&self, a: &str, b: &str) -> Option<&str> {
        self.products
            .get(&(a.to_string(), b.to_string()))
            .map(|s| s.as_str())
    }
}

/// The full multiplication table of the cyclic group of order `m` with
/// labels `"0" … "m-1"` and unit `"0"`.
pub fn cyclic_table(m: u64) -> PartialGroupTable {
    assert!(m >= 1);
    let elements: Vec<String> = (0..m).map(|i| i.to_string()).collect();
    let mut products = BTreeMap::new();
    for i in 0..m {
        for j in 0..m {
            products.insert(
                (i.to_string(), j.to_string()),
                ((i + j) % m).to_string(),
            );
        }
    }
    PartialGroupTable::new(elements, Some("0".to_string()), products)
        .expect("cyclic table is consistent")
}

/// The rotation representation of the cyclic group of order `m` on `n`
/// points (`m` must divide `n`): label `j` maps to the rotation by `j·n/m`.
pub fn cyclic_rotations(
    m: u64,
    n: usize,
) -> Result<BTreeMap<String, Permutation>, SoficError> {
    if m == 0 || !(n as u64).is_multiple_of(m) {
        return Err(SoficError::DegreeNotDivisible { m, n });
    }
    let step = n as u64 / m;
    let mut phi = BTreeMap::new();
    for j in 0..m {
        let shift = (j * step) as usize;
        let images: Vec<u32> = (0..n).map(|x| ((x + shift) % n) as u32 + 1).collect();
        phi.insert(
            j.to_string(),
            Permutation::from_images(images).expect("rotations are bijections"),
        );
    }
    Ok(phi)
}

/// Exact quality measures of a candidate representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentationReport {
    /// Worst `h(φ(a)φ(b), φ(a·b))` over the defined products.
    pub mult_defect: Frac,
    /// Whether the unit, if declared, maps to the identity.
    pub unit_ok: bool,
    /// Smallest `h(φ(a), id)` over non-unit elements (1 if there are none).
    pub separation: Frac,
    /// The thresholds this report was evaluated against.
    pub eps: Frac,
    pub alpha: Frac,
    /// `mult_defect < eps` and `unit_ok` and `separation > alpha`.
    pub passes: bool,
}

impl RepresentationReport {
    /// Re-evaluates the pass condition against other thresholds.
    pub fn passes_at(&self, eps: Frac, alpha: Frac) -> bool {
        self.mult_defect < eps && self.unit_ok && self.separation > alpha
    }
}

/// Measures how close `phi` comes to an (F, ε, α)-representation of the
/// table: ε-multiplicative on defined products, unit-preserving, and
/// α-separated from the identity.
pub fn check_representation(
    table: &PartialGroupTable,
    phi: &BTreeMap<String, Permutation>,
    eps: Frac,
    alpha: Frac,
) -> Result<RepresentationReport, SoficError> {
    let images = validated_images(table, phi)?;
    let n = images
        .values()
        .next()
        .expect("tables have at least the mentioned elements")
        .degree();
    let id = Permutation::identity(n);

    let mut mult_defect = Frac::ZERO;
    for ((a, b), c) in table.products() {
        let measured = images[a.as_str()]
            .compose(images[b.as_str()])
            .hamming(images[c.as_str()]);
        mult_defect = mult_defect.max(measured);
    }

    let unit_ok = match table.unit() {
        Some(e) => images[e].is_identity(),
        None => true,
    };

    let mut separation = Frac::ONE;
    for label in table.elements() {
        if table.unit() == Some(label.as_str()) {
            continue;
        }
        separation = separation.min(images[label.as_str()].hamming(&id));
    }

    let passes = mult_defect < eps && unit_ok && separation > alpha;
    Ok(RepresentationReport {
        mult_defect,
        unit_ok,
        separation,
        eps,
        alpha,
        passes,
    })
}

/// Distance between the image of a product word and the product of the
/// letter images: `h(φ(v_1⋯v_L), φ(v_1)⋯φ(v_L))`. Every prefix product must
/// be defined in the table. For an ε-multiplicative map this is below
/// `(2L−1)·ε`.
pub fn word_defect(
    table: &PartialGroupTable,
    phi: &BTreeMap<String, Permutation>,
    word: &[&str],
) -> Result<Frac, SoficError> {
    let images = validated_images(table, phi)?;
    let (&first, rest) = word.split_first().ok_or(SoficError::EmptyWord)?;
    if !table.elements().iter().any(|l| l == first) {
        return Err(SoficError::UnknownElement {
            label: first.to_string(),
        });
    }
    let mut product_label = first.to_string();
    let mut product_perm = images[first].clone();
    for &letter in rest {
        if !table.elements().iter().any(|l| l == letter) {
            return Err(SoficError::UnknownElement {
                label: letter.to_string(),
            });
        }
        product_label = table
            .product(&product_label, letter)
            .ok_or_else(|| SoficError::ProductUndefined {
                left: product_label.clone(),
                right: letter.to_string(),
            })?
            .to_string();
        product_perm = product_perm.compose(images[letter]);
    }
    Ok(product_perm.hamming(images[product_label.as_str()]))
}

/// Lower bound on the separation of a word of length `len` implied by an
/// ε-multiplicative, α-separated representation whose ambient system has
/// repair modulus `delta`: `α − len·δ − 2·len·ε`, clamped at zero.
pub fn separation_lower_bound(alpha: Frac, delta: Frac, eps: Frac, len: u64) -> Frac {
    alpha.saturating_sub(delta * len + eps * (2 * len))
}

fn validated_images<'a>(
    table: &PartialGroupTable,
    phi: &'a BTreeMap<String, Permutation>,
) -> Result<BTreeMap<&'a str, &'a Permutation>, SoficError> {
    let mut images: BTreeMap<&str, &Permutation> = BTreeMap::new();
    let mut degree: Option<(usize, String)> = None;
    for label in table.elements() {
        let (key, perm) = phi
            .get_key_value(label)
            .ok_or_else(|| SoficError::MissingImage {
                label: label.clone(),
            })?;
        match &degree {
            None => degree = Some((perm.degree(), label.clone())),
            Some((expected, _)) if *expected != perm.degree() => {
                return Err(SoficError::DegreeMismatch {
                    label: label.clone(),
                    expected: *expected,
                    actual: perm.degree(),
                });
            }
            Some(_) => {}
        }
        images.insert(key.as_str(), perm);
    }
    Ok(images)
}
